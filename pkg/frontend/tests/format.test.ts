import { describe, expect, it } from "vitest";

import { formatPercent, formatProbability, formatSignedPercent } from "../src/format.js";

describe("formatPercent", () => {
  it("rounds at three decimals before scaling", () => {
    expect(formatPercent(0.9435)).toBe("94.4%");
    expect(formatPercent(0.2778)).toBe("27.8%");
  });

  it("documents the trap: scaling first would print 94.3", () => {
    // 0.9435 * 100 lands just under 94.35 in binary, so the naive
    // order of operations truncates the displayed half-step
    expect((0.9435 * 100).toFixed(1)).toBe("94.3");
  });

  it("covers the endpoints", () => {
    expect(formatPercent(0)).toBe("0.0%");
    expect(formatPercent(1)).toBe("100.0%");
    expect(formatPercent(0.08)).toBe("8.0%");
  });
});

describe("formatSignedPercent", () => {
  it("signs nonzero lifts", () => {
    expect(formatSignedPercent(0.4879)).toBe("+48.8%");
    expect(formatSignedPercent(-0.1)).toBe("-10.0%");
  });

  it("treats sub-display lifts as zero", () => {
    expect(formatSignedPercent(0)).toBe("±0.0%");
    expect(formatSignedPercent(1e-12)).toBe("±0.0%");
    expect(formatSignedPercent(-1e-12)).toBe("±0.0%");
  });
});

describe("formatProbability", () => {
  it("prints three decimals", () => {
    expect(formatProbability(0.9435)).toBe("0.944");
    expect(formatProbability(0.5)).toBe("0.500");
    expect(formatProbability(0)).toBe("0.000");
  });
});

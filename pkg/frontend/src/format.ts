/** Number formatting for display.
 *
 * Percentages round the probability at three decimals first and scale
 * afterwards. Scaling first loses the round-trip: 0.9435 is stored just
 * above its decimal value, but (0.9435 * 100).toFixed(1) still prints
 * "94.3" because 94.35 in binary sits just below the half.
 */

export function formatPercent(p: number): string {
  const perMille = Math.round(p * 1000);
  return (perMille / 10).toFixed(1) + "%";
}

export function formatSignedPercent(p: number): string {
  const text = formatPercent(Math.abs(p));
  if (Math.round(p * 1000) === 0) return "±0.0%";
  return (p > 0 ? "+" : "-") + text;
}

export function formatProbability(p: number): string {
  return (Math.round(p * 1000) / 1000).toFixed(3);
}

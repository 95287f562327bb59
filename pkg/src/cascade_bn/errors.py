"""Exception types raised by the cascade-bn engine.

Every error carries enough context (column names, node ids, row numbers)
for a caller to report the failure without re-deriving it.
"""


class CascadeBnError(Exception):
    """Base class for all engine errors."""


# --- dataset ---------------------------------------------------------------


class DataError(CascadeBnError):
    """Base class for ingestion and preprocessing errors."""


class MissingColumn(DataError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"column {name!r} declared in schema but absent from data")


# fit_cpts reports the same condition under this name
ColumnMissing = MissingColumn


class ParseError(DataError):
    def __init__(self, row: int, column: str, detail: str = ""):
        self.row = row
        self.column = column
        msg = f"cannot parse row {row}, column {column!r}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class EmptyFile(DataError):
    pass


class MissingThreshold(DataError):
    def __init__(self, column: str):
        self.column = column
        super().__init__(f"numeric column {column!r} has no binarization threshold")


class SingleClass(DataError):
    def __init__(self, column: str, label: int):
        self.column = column
        self.label = label
        super().__init__(f"class column {column!r} contains only label {label}")


class TooFewMinority(DataError):
    def __init__(self, needed: int, have: int):
        self.needed = needed
        self.have = have
        super().__init__(
            f"minority class has {have} rows but k-neighbor interpolation needs"
            f" at least {needed}"
        )


class EmptyDataset(DataError):
    pass


# --- graph -----------------------------------------------------------------


class GraphError(CascadeBnError):
    pass


class SelfLoop(GraphError):
    def __init__(self, node: str):
        self.node = node
        super().__init__(f"self-loop on {node!r}")


class WouldCreateCycle(GraphError):
    def __init__(self, parent: str, child: str):
        self.parent = parent
        self.child = child
        super().__init__(f"edge {parent!r} -> {child!r} would close a directed cycle")


class EdgeExists(GraphError):
    def __init__(self, parent: str, child: str):
        self.parent = parent
        self.child = child
        super().__init__(f"edge {parent!r} -> {child!r} already present")


class EdgeAbsent(GraphError):
    def __init__(self, parent: str, child: str):
        self.parent = parent
        self.child = child
        super().__init__(f"edge {parent!r} -> {child!r} not present")


class UnknownNode(GraphError):
    def __init__(self, node: str):
        self.node = node
        super().__init__(f"unknown node {node!r}")


# --- scoring / search --------------------------------------------------------


class ScoringError(CascadeBnError):
    pass


class NonBinaryColumn(ScoringError):
    def __init__(self, column: str):
        self.column = column
        super().__init__(f"column {column!r} is not binary")


class UnknownColumn(ScoringError):
    def __init__(self, column: str):
        self.column = column
        super().__init__(f"column {column!r} not in dataset")


class SearchError(CascadeBnError):
    pass


class ConstraintConflict(SearchError):
    pass


class EmptyData(SearchError):
    pass


class TooManyNodes(SearchError):
    def __init__(self, have: int, limit: int):
        self.have = have
        self.limit = limit
        super().__init__(f"{have} nodes exceeds limit of {limit}")


# --- inference ---------------------------------------------------------------


class InferenceError(CascadeBnError):
    pass


class NodeNotInScope(InferenceError):
    def __init__(self, node: str):
        self.node = node
        super().__init__(f"node {node!r} not in factor scope")


class TargetIsEvidence(InferenceError):
    def __init__(self, node: str):
        self.node = node
        super().__init__(f"target {node!r} is also an evidence node")


class ZeroProbabilityEvidence(InferenceError):
    pass

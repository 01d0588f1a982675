"""Exception types shared across the package.

The CLI maps these onto exit codes: DataError -> 2, OntologyError -> 3,
InvariantError -> 4.
"""


class OntologyError(ValueError):
    """A malformed ontology file or an ontology that violates the
    stratified-tree rules. ``kind`` is a stable machine-readable tag,
    ``line`` the 1-based source line when one can be pinned down."""

    def __init__(self, kind: str, message: str, line: int | None = None):
        self.kind = kind
        self.line = line
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"{kind}: {message}{where}")


class DataError(ValueError):
    """Bad input data or arguments: unreadable CSV, empty matrices,
    mismatched shapes, out-of-range levels, infeasible cluster counts."""


class InvariantError(RuntimeError):
    """An internal invariant was broken; indicates a bug upstream, not a
    user mistake."""

"""Level-stratified domain ontology: parsing, validation, queries.

An ontology is a tree of named concepts arranged in levels 1..L. Level-1
concepts each bind exactly one dataset column; a concept at level l has its
parent at level l+1, except the level-L concepts, whose parent is the
implicit ROOT. File format, one concept per line:

    concept<TAB>NAME<TAB>level=<int><TAB>parent=<NAME|ROOT>[<TAB>column=<COLUMN>]

Blank lines and lines starting with '#' are ignored. NAME and COLUMN may be
double-quoted to embed tabs; inner quotes are doubled. The bare token ROOT
denotes the sentinel; a quoted "ROOT" is an ordinary concept name.
"""

from dataclasses import dataclass
from importlib import resources

from .errors import OntologyError
from . import lineformat


@dataclass(frozen=True)
class Concept:
    name: str
    level: int
    parent: str | None  # None = ROOT sentinel
    column: str | None = None  # bound dataset column, level 1 only


class Ontology:
    """Validated, immutable concept tree. Construction runs the full rule
    set; a constructed Ontology is always well-formed."""

    def __init__(self, concepts, source_lines=None):
        self.concepts = tuple(concepts)
        self._lines = dict(source_lines or {})
        self._by_name = {}
        self._children = {}
        self._validate()
        self.depth = max(c.level for c in self.concepts)

    def _line(self, name):
        return self._lines.get(name)

    def _validate(self):
        if not self.concepts:
            raise OntologyError("empty", "ontology defines no concepts")

        seen_columns = {}
        for c in self.concepts:
            if not c.name:
                raise OntologyError("syntax", "empty concept name", self._line(c.name))
            if c.level < 1:
                raise OntologyError(
                    "syntax", f"level must be >= 1, got {c.level}", self._line(c.name)
                )
            if c.name in self._by_name:
                raise OntologyError(
                    "duplicate-name", f"concept {c.name!r} declared twice", self._line(c.name)
                )
            self._by_name[c.name] = c
            self._children[c.name] = []
            if c.level == 1:
                if c.column is None:
                    raise OntologyError(
                        "leaf-without-column",
                        f"level-1 concept {c.name!r} has no column binding",
                        self._line(c.name),
                    )
                if c.column in seen_columns:
                    raise OntologyError(
                        "duplicate-column",
                        f"column {c.column!r} bound by both {seen_columns[c.column]!r} and {c.name!r}",
                        self._line(c.name),
                    )
                seen_columns[c.column] = c.name
            elif c.column is not None:
                raise OntologyError(
                    "non-leaf-with-column",
                    f"concept {c.name!r} at level {c.level} must not bind a column",
                    self._line(c.name),
                )

        top = max(c.level for c in self.concepts)
        present = {c.level for c in self.concepts}
        for lvl in range(1, top + 1):
            if lvl not in present:
                raise OntologyError("empty-level", f"no concepts at level {lvl}")

        for c in self.concepts:
            if c.parent is not None and c.parent not in self._by_name:
                raise OntologyError(
                    "missing-parent",
                    f"concept {c.name!r} names unknown parent {c.parent!r}",
                    self._line(c.name),
                )

        # cycle guard runs before the stratification check so that mutual
        # parent loops are reported as cycles, not level skips
        for c in self.concepts:
            visited = {c.name}
            cur = c
            while cur.parent is not None:
                if cur.parent in visited:
                    raise OntologyError(
                        "cycle",
                        f"parent chain of {c.name!r} revisits {cur.parent!r}",
                        self._line(c.name),
                    )
                visited.add(cur.parent)
                cur = self._by_name[cur.parent]

        for c in self.concepts:
            if c.parent is None:
                if c.level != top:
                    raise OntologyError(
                        "misplaced-root",
                        f"concept {c.name!r} at level {c.level} has parent ROOT "
                        f"but the top level is {top}",
                        self._line(c.name),
                    )
            else:
                parent = self._by_name[c.parent]
                if parent.level != c.level + 1:
                    raise OntologyError(
                        "level-skip",
                        f"concept {c.name!r} at level {c.level} has parent "
                        f"{parent.name!r} at level {parent.level}",
                        self._line(c.name),
                    )
                self._children[c.parent].append(c)

        for c in self.concepts:
            if c.level > 1 and not self._children[c.name]:
                raise OntologyError(
                    "childless-nonleaf",
                    f"concept {c.name!r} at level {c.level} has no children",
                    self._line(c.name),
                )

    def __eq__(self, other):
        return isinstance(other, Ontology) and self.concepts == other.concepts

    def __hash__(self):
        return hash(self.concepts)

    def __repr__(self):
        counts = "/".join(
            str(sum(1 for c in self.concepts if c.level == lvl))
            for lvl in range(1, self.depth + 1)
        )
        return f"Ontology(levels={counts}, depth={self.depth})"


def parse_ontology(text: str) -> Ontology:
    """Parse and validate an ontology file. Declaration order is preserved
    and forward references to parents are fine; every malformed input
    raises OntologyError."""
    concepts = []
    lines = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        try:
            fields = lineformat.split_fields(line)
            if lineformat.parse_value(fields[0]) != "concept":
                raise lineformat.FieldSyntaxError(
                    f"expected 'concept', got {fields[0]!r}"
                )
            if len(fields) not in (4, 5):
                raise lineformat.FieldSyntaxError(
                    f"expected 4 or 5 fields, got {len(fields)}"
                )
            name = lineformat.parse_value(fields[1])
            key, levelstr = lineformat.split_keyed(fields[2])
            if key != "level":
                raise lineformat.FieldSyntaxError(f"expected level=, got {key}=")
            level = int(levelstr)
            pkey, _ = lineformat.split_keyed(fields[3])
            if pkey != "parent":
                raise lineformat.FieldSyntaxError(f"expected parent=, got {pkey}=")
            raw_parent = fields[3][fields[3].find("=") + 1 :]
            if raw_parent.strip() == "ROOT":
                parent = None
            else:
                parent = lineformat.parse_value(raw_parent)
            column = None
            if len(fields) == 5:
                ckey, column = lineformat.split_keyed(fields[4])
                if ckey != "column":
                    raise lineformat.FieldSyntaxError(f"expected column=, got {ckey}=")
        except (lineformat.FieldSyntaxError, ValueError) as exc:
            raise OntologyError("syntax", str(exc), lineno) from exc
        lines[name] = lineno  # on duplicates the later occurrence is reported
        concepts.append(Concept(name=name, level=level, parent=parent, column=column))
    return Ontology(concepts, source_lines=lines)


def serialize_ontology(o: Ontology) -> str:
    """Render an ontology back to file form; parse(serialize(o)) == o."""
    out = []
    for c in o.concepts:
        if c.parent is None:
            parent = "ROOT"
        else:
            parent = lineformat.format_value(c.parent)
            if parent == "ROOT":  # concept literally named ROOT
                parent = '"ROOT"'
        line = f"concept\t{lineformat.format_value(c.name)}\tlevel={c.level}\tparent={parent}"
        if c.column is not None:
            line += f"\tcolumn={lineformat.format_value(c.column)}"
        out.append(line)
    return "\n".join(out) + "\n"


def concepts_at_level(o: Ontology, level: int) -> list[Concept]:
    """Concepts of one level in declaration order."""
    if not 1 <= level <= o.depth:
        raise OntologyError(
            "level-range", f"level {level} outside 1..{o.depth}"
        )
    return [c for c in o.concepts if c.level == level]


def children_of(o: Ontology, name: str) -> list[Concept]:
    """Declaration-ordered children; empty for level-1 concepts."""
    if name not in o._by_name:
        raise OntologyError("unknown-name", f"no concept named {name!r}")
    return list(o._children[name])


def level_census(o: Ontology) -> str:
    """Human-readable level sizes, low to high, e.g. '24/7/2'."""
    return "/".join(
        str(len(concepts_at_level(o, lvl))) for lvl in range(1, o.depth + 1)
    )


def tro_path():
    """Path of the bundled Travel Review Ontology fixture."""
    return resources.files(__package__) / "fixtures" / "travel_review.ontology"


def load_tro() -> Ontology:
    """The bundled Travel Review Ontology (24/7/2 concepts, depth 3)."""
    return parse_ontology(tro_path().read_text(encoding="utf-8"))

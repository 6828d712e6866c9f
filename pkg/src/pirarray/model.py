"""Array codes, servers, witnesses and the on-disk code file format."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from . import gf

FORMAT_VERSION = 1

SINGLETON = "singleton-server"
SIGMA = "sigma-server"
TYPE_J = "type-j-server"
GENERAL = "general"


class CodeFormatError(ValueError):
    """A code file could not be parsed. ``location`` names where it broke."""

    def __init__(self, message: str, location: str = ""):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


@dataclass(frozen=True)
class Server:
    """One column of an array code.

    ``singletons`` and ``sum_set`` describe the structured kinds and are empty
    for ``general`` servers.
    """

    cells: tuple[gf.Vector, ...]
    kind: str = GENERAL
    singletons: frozenset[int] = frozenset()
    sum_set: frozenset[int] = frozenset()

    @property
    def t(self) -> int:
        return len(self.cells)

    @property
    def j(self) -> int:
        """Summation size; 1 for singleton servers (they are "type 1")."""
        return len(self.sum_set) if self.sum_set else 1

    def sort_key(self) -> tuple:
        return (0 if self.kind == SINGLETON else 1, tuple(sorted(self.singletons)), tuple(sorted(self.sum_set)))


def make_singleton_server(stored_items: Iterable[int], p: int, t: int | None = None, q: int = 2) -> Server:
    """Server whose cells are ``e_y`` for each stored item ``y``.

    Such a server is conventionally named by the complement of ``stored_items``.
    """
    gf.check_modulus(q)
    items = list(stored_items)
    stored = sorted(set(items))
    if len(stored) != len(items):
        raise ValueError("stored items contain duplicates")
    if t is not None and len(stored) != t:
        raise ValueError(f"singleton server needs exactly t={t} items, got {len(stored)}")
    if not stored:
        raise ValueError("singleton server needs at least one item")
    cells = tuple(gf.unit_vector(y, p) for y in stored)
    return Server(cells, SINGLETON, frozenset(stored))


def make_sigma_server(singletons: Iterable[int], sum_set: Iterable[int], p: int, q: int = 2) -> Server:
    """Server with ``t-1`` singleton cells and one cell summing ``sum_set``.

    Kind is ``sigma-server`` when ``sum_set`` is the full complement of the
    singletons, ``type-j-server`` otherwise (``j = len(sum_set)``).
    """
    gf.check_modulus(q)
    z = frozenset(singletons)
    b = frozenset(sum_set)
    if z & b:
        raise ValueError(f"singletons and sum_set overlap on {sorted(z & b)}")
    if len(b) < 2:
        raise ValueError("sum_set must have at least 2 items")
    cells = tuple(gf.unit_vector(y, p) for y in sorted(z)) + (gf.indicator(b, p),)
    kind = SIGMA if len(z) + len(b) == p else TYPE_J
    return Server(cells, kind, z, b)


@dataclass(frozen=True)
class ArrayCode:
    """A ``[t x m, p]`` array code over GF(q).

    ``columns[c][r]`` is the coefficient vector (length ``p``) of cell ``r`` of
    server ``c``. Shapes are validated on construction; column independence is
    a checkable assumption, see :func:`check_assumptions`.
    """

    t: int
    p: int
    columns: tuple[tuple[gf.Vector, ...], ...]
    q: int = 2

    def __post_init__(self):
        gf.check_modulus(self.q)
        if self.t < 1 or self.p < 1:
            raise ValueError("t and p must be positive")
        cols = tuple(tuple(tuple(int(c) for c in cell) for cell in col) for col in self.columns)
        for ci, col in enumerate(cols):
            if len(col) != self.t:
                raise ValueError(f"column {ci} has {len(col)} cells, expected t={self.t}")
            for ri, cell in enumerate(col):
                if len(cell) != self.p:
                    raise gf.DimensionMismatchError(
                        f"cell ({ci},{ri}) has length {len(cell)}, expected p={self.p}")
                if any(not 0 <= c < self.q for c in cell):
                    raise ValueError(f"cell ({ci},{ri}) has coefficients outside [0,{self.q})")
        object.__setattr__(self, "columns", cols)

    @classmethod
    def from_servers(cls, servers: Sequence[Server], p: int, q: int = 2) -> "ArrayCode":
        if not servers:
            raise ValueError("need at least one server")
        return cls(servers[0].t, p, tuple(s.cells for s in servers), q)

    @property
    def m(self) -> int:
        return len(self.columns)

    @cached_property
    def packed(self) -> tuple[tuple[int, ...], ...]:
        """Columns as packed GF(2) rows; only meaningful when ``q == 2``."""
        return tuple(tuple(gf.pack(cell) for cell in col) for col in self.columns)


@dataclass(frozen=True)
class Witness:
    """Per-item lists of column subsets claimed to span that item."""

    subsets: Mapping[int, tuple[tuple[int, ...], ...]] = field(default_factory=dict)

    def __post_init__(self):
        norm = {int(i): tuple(tuple(int(c) for c in s) for s in subs) for i, subs in self.subsets.items()}
        object.__setattr__(self, "subsets", dict(sorted(norm.items())))

    def __getitem__(self, i: int) -> tuple[tuple[int, ...], ...]:
        return self.subsets.get(i, ())

    def counts(self) -> dict[int, int]:
        return {i: len(s) for i, s in self.subsets.items()}

    @property
    def k(self) -> int:
        return min(self.counts().values(), default=0)


@dataclass(frozen=True)
class Violation:
    column: int
    clause: str  # "a" rank, "b" derivable-not-stored, "c" singleton reused
    item: int | None
    message: str


def _singleton_item(cell: Sequence[int]) -> int | None:
    nz = [j for j, c in enumerate(cell) if c]
    return nz[0] if len(nz) == 1 else None


def check_assumptions(code: ArrayCode) -> list[Violation]:
    """Check each column against the three standing storage assumptions.

    (a) the ``t`` cells are linearly independent; (b) any item a column can
    derive alone is stored as a singleton cell; (c) such an item appears in no
    other cell of that column. An empty list means all hold.
    """
    out: list[Violation] = []
    for ci, col in enumerate(code.columns):
        r = gf.rank(col, code.q)
        if r < code.t:
            out.append(Violation(ci, "a", None, f"rank {r} < t={code.t}"))
        stored = {}
        for ri, cell in enumerate(col):
            y = _singleton_item(cell)
            if y is not None:
                stored.setdefault(y, ri)
        for i in range(code.p):
            if i not in stored and gf.in_span(col, gf.unit_vector(i, code.p), code.q):
                out.append(Violation(ci, "b", i, f"x{i} derivable but not stored as a singleton"))
        for y, ri in sorted(stored.items()):
            if any(cell[y] for rj, cell in enumerate(col) if rj != ri):
                out.append(Violation(ci, "c", y, f"singleton x{y} also appears in another cell"))
    return out


def rate(k: int, m: int) -> Fraction:
    if m <= 0:
        raise ZeroDivisionError("rate needs m > 0")
    return Fraction(k, m)


def storage_ratio(code: ArrayCode) -> Fraction:
    return Fraction(code.p, code.t)


def serialize(code: ArrayCode, witness: Witness | None = None) -> str:
    doc: dict = {
        "version": FORMAT_VERSION,
        "q": code.q,
        "t": code.t,
        "m": code.m,
        "p": code.p,
        "columns": [[list(cell) for cell in col] for col in code.columns],
    }
    if witness is not None:
        doc["witness"] = {str(i): [list(s) for s in subs] for i, subs in witness.subsets.items()}
    # one column per line keeps diffs readable
    cols = ",\n    ".join(json.dumps(c, separators=(",", ":")) for c in doc.pop("columns"))
    wit = doc.pop("witness", None)
    head = json.dumps(doc)[:-1]
    text = head + ',\n  "columns": [\n    ' + cols + "\n  ]"
    if wit is not None:
        items = ",\n    ".join(f"{json.dumps(k)}: {json.dumps(v, separators=(',', ':'))}" for k, v in wit.items())
        text += ',\n  "witness": {\n    ' + items + "\n  }"
    return text + "\n}\n"


def _expect_int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise CodeFormatError(f"expected integer, got {value!r}", where)
    return value


def deserialize(text: str) -> tuple[ArrayCode, Witness | None]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CodeFormatError(exc.msg, f"line {exc.lineno} column {exc.colno}") from exc
    if not isinstance(doc, dict):
        raise CodeFormatError("top level must be an object", "$")
    for key in ("version", "q", "t", "m", "p", "columns"):
        if key not in doc:
            raise CodeFormatError(f"missing field {key!r}", "$")
    if _expect_int(doc["version"], "$.version") != FORMAT_VERSION:
        raise CodeFormatError(f"unsupported version {doc['version']}", "$.version")
    q, t, m, p = (_expect_int(doc[k], f"$.{k}") for k in ("q", "t", "m", "p"))
    columns = doc["columns"]
    if not isinstance(columns, list):
        raise CodeFormatError("columns must be a list", "$.columns")
    if len(columns) != m:
        raise CodeFormatError(f"m={m} but {len(columns)} columns given", "$.columns")
    for ci, col in enumerate(columns):
        if not isinstance(col, list):
            raise CodeFormatError("column must be a list of cells", f"$.columns[{ci}]")
        for ri, cell in enumerate(col):
            if not isinstance(cell, list):
                raise CodeFormatError("cell must be a list", f"$.columns[{ci}][{ri}]")
            for j, c in enumerate(cell):
                _expect_int(c, f"$.columns[{ci}][{ri}][{j}]")
    try:
        code = ArrayCode(t, p, columns, q)
    except ValueError as exc:
        raise CodeFormatError(str(exc), "$.columns") from exc
    witness = None
    if "witness" in doc:
        raw = doc["witness"]
        if not isinstance(raw, dict):
            raise CodeFormatError("witness must be an object", "$.witness")
        subsets = {}
        for key, subs in raw.items():
            where = f"$.witness[{key!r}]"
            try:
                item = int(key)
            except ValueError:
                raise CodeFormatError("item key must be an integer", where) from None
            if not isinstance(subs, list) or not all(isinstance(s, list) for s in subs):
                raise CodeFormatError("expected a list of column-index lists", where)
            for si, s in enumerate(subs):
                for c in s:
                    _expect_int(c, f"{where}[{si}]")
            subsets[item] = subs
        witness = Witness(subsets)
    return code, witness

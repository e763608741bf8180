"""Unit quaternions over real cyclotomic numbers, the binary octahedral and
icosahedral groups, and the table of C/D representation classes."""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Optional

from .character_variety import TracePoint, boundary_trace, s_canonical
from .cyclotomic import CycloReal, two_cos

__all__ = [
    "GroupTable", "Quaternion", "Table1Row", "TABLE1",
    "binary_icosahedral", "binary_octahedral", "constants", "enumerate_rep_classes",
    "generators", "group_closure", "q_inv", "q_mul", "q_trace", "rep_triple",
    "verify_table1", "word_eval",
]

_ZERO = CycloReal.rational(0)
_ONE = CycloReal.rational(1)


@dataclass(frozen=True)
class Quaternion:
    """a + b i + c j + d k; the matrix model has trace 2a."""

    a: CycloReal
    b: CycloReal = _ZERO
    c: CycloReal = _ZERO
    d: CycloReal = _ZERO

    def norm2(self) -> CycloReal:
        return self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d

    def __mul__(self, other: "Quaternion") -> "Quaternion":
        return q_mul(self, other)

    def __neg__(self) -> "Quaternion":
        return Quaternion(-self.a, -self.b, -self.c, -self.d)

    def to_floats(self) -> tuple[float, float, float, float]:
        return float(self.a), float(self.b), float(self.c), float(self.d)


ONE = Quaternion(_ONE)
I = Quaternion(_ZERO, _ONE)
J = Quaternion(_ZERO, _ZERO, _ONE)
K = Quaternion(_ZERO, _ZERO, _ZERO, _ONE)


def q_mul(p: Quaternion, q: Quaternion) -> Quaternion:
    a1, b1, c1, d1 = p.a, p.b, p.c, p.d
    a2, b2, c2, d2 = q.a, q.b, q.c, q.d
    return Quaternion(
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    )


def q_inv(q: Quaternion) -> Quaternion:
    """Inverse of a unit quaternion (its conjugate)."""
    return Quaternion(q.a, -q.b, -q.c, -q.d)


def q_trace(q: Quaternion) -> CycloReal:
    return q.a * 2


def _trace_of_product(p: Quaternion, q: Quaternion) -> CycloReal:
    return (p.a * q.a - p.b * q.b - p.c * q.c - p.d * q.d) * 2


@lru_cache(maxsize=None)
def constants() -> dict[str, CycloReal]:
    """sqrt2, sqrt5, r = (sqrt5+1)/4 and s = (sqrt5-1)/4 as exact values."""
    r = two_cos(Fraction(1, 5)) / 2
    s = two_cos(Fraction(2, 5)) / 2
    return {
        "sqrt2": two_cos(Fraction(1, 4)),
        "sqrt5": r * 4 - 1,
        "r": r,
        "s": s,
    }


@lru_cache(maxsize=None)
def generators() -> dict[str, Quaternion]:
    c = constants()
    h = c["sqrt2"] / 2
    half = CycloReal.rational(Fraction(1, 2))
    r, s = c["r"], c["s"]
    return {
        "T": Quaternion(h, h, _ZERO, _ZERO),
        "U": Quaternion(h, _ZERO, h, _ZERO),
        "A": Quaternion(r, s, _ZERO, half),
        "B": Quaternion(-s, half, _ZERO, -r),
    }


@dataclass(frozen=True)
class GroupTable:
    elements: tuple[Quaternion, ...]
    generator_names: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, q: Quaternion) -> bool:
        return q in self._index

    @property
    def _index(self) -> frozenset:
        return frozenset(self.elements)


class ClosureCapExceeded(RuntimeError):
    pass


def group_closure(gens: Iterable[Quaternion], cap: int = 10_000, names: Iterable[str] = ()) -> GroupTable:
    """Breadth-first closure of ``gens`` under right multiplication."""
    gens = list(gens)
    seen = {ONE}
    order = [ONE]
    queue = deque([ONE])
    while queue:
        g = queue.popleft()
        for h in gens:
            prod = q_mul(g, h)
            if prod not in seen:
                seen.add(prod)
                order.append(prod)
                queue.append(prod)
                if len(order) > cap:
                    raise ClosureCapExceeded(f"closure exceeded {cap} elements")
    return GroupTable(tuple(order), tuple(names))


@lru_cache(maxsize=None)
def binary_octahedral() -> GroupTable:
    g = generators()
    return group_closure([g["T"], g["U"]], cap=1000, names=("T", "U"))


@lru_cache(maxsize=None)
def binary_icosahedral() -> GroupTable:
    g = generators()
    return group_closure([g["A"], g["B"]], cap=1000, names=("A", "B"))


# -- words ----------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:([A-Za-z])|(\()|(\)))")
_EXP = re.compile(r"\s*\^\s*(?:\{\s*([+-]?\d+)\s*\}|([+-]?\d+))")


def _power(q: Quaternion, n: int) -> Quaternion:
    if n < 0:
        q, n = q_inv(q), -n
    out = ONE
    for _ in range(n):
        out = q_mul(out, q)
    return out


def word_eval(word: str, alphabet: Optional[Mapping[str, Quaternion]] = None) -> Quaternion:
    """Evaluate a word such as "A^3 B^8", "(AABA)^-1" or "AB^{-6}"."""
    letters = dict(generators() if alphabet is None else alphabet)
    pos = 0

    def parse_seq(depth: int) -> Quaternion:
        nonlocal pos
        acc = ONE
        while True:
            m = _TOKEN.match(word, pos)
            if not m:
                if word[pos:].strip():
                    raise ValueError(f"cannot parse word at {word[pos:]!r}")
                if depth:
                    raise ValueError("unbalanced parenthesis")
                return acc
            if m.group(3):
                if not depth:
                    raise ValueError("unbalanced parenthesis")
                pos = m.end()
                return acc
            pos = m.end()
            if m.group(2):
                factor = parse_seq(depth + 1)
            else:
                name = m.group(1)
                if name not in letters:
                    raise ValueError(f"unknown generator {name!r}")
                factor = letters[name]
            e = _EXP.match(word, pos)
            if e:
                pos = e.end()
                factor = _power(factor, int(e.group(1) or e.group(2)))
            acc = q_mul(acc, factor)

    return parse_seq(0)


def rep_triple(g: Quaternion, h: Quaternion) -> TracePoint:
    """Trace coordinates (tr g, tr h, tr gh) of the representation X->g, Y->h."""
    return TracePoint(q_trace(g), q_trace(h), _trace_of_product(g, h))


# -- finite-orbit table ----------------------------------------------------------------------------


@dataclass(frozen=True)
class Table1Row:
    index: int
    x_word: str
    y_word: str
    triple: tuple[str, str, str]
    k: str
    group: str


TABLE1 = (
    Table1Row(1, "T", "(TU)^-1", ("sqrt2", "1", "sqrt2"), "1", "C"),
    Table1Row(2, "A^3 B^8", "(AABA)^-1", ("1", "1", "1"), "0", "D"),
    Table1Row(3, "B^-1", "AAB", ("-2s", "2s", "2s"), "(1-sqrt5)/2", "D"),
    Table1Row(4, "ABA^3B^2", "B", ("-2s", "-2s", "1"), "(1-sqrt5)/2", "D"),
    Table1Row(5, "A^-1", "ABB", ("2r", "-2r", "-2r"), "(1+sqrt5)/2", "D"),
    Table1Row(6, "ABAAB^6", "AABA", ("2r", "1", "2r"), "(1+sqrt5)/2", "D"),
    Table1Row(7, "ABAA", "A", ("1", "2r", "1"), "1", "D"),
    Table1Row(8, "AB^-6", "B^-6", ("1", "2s", "-1"), "1", "D"),
    Table1Row(9, "ABAA", "A^-1", ("1", "2r", "2s"), "1", "D"),
)


def _symbol_value(text: str) -> CycloReal:
    c = constants()
    table = {
        "1": CycloReal.rational(1), "-1": CycloReal.rational(-1),
        "0": CycloReal.rational(0),
        "sqrt2": c["sqrt2"], "-sqrt2": -c["sqrt2"],
        "2r": c["r"] * 2, "-2r": c["r"] * -2,
        "2s": c["s"] * 2, "-2s": c["s"] * -2,
        "(1-sqrt5)/2": (1 - c["sqrt5"]) / 2,
        "(1+sqrt5)/2": (1 + c["sqrt5"]) / 2,
    }
    return table[text]


def table1_points() -> list[TracePoint]:
    return [TracePoint(*(_symbol_value(t) for t in row.triple)) for row in TABLE1]


@lru_cache(maxsize=None)
def table1_classes() -> frozenset:
    """S-canonical forms of all finite-orbit table rows (both C and D contain -I)."""
    return frozenset(s_canonical(p, True) for p in table1_points())


@dataclass
class Table1Check:
    row: Table1Row
    computed: TracePoint
    computed_k: CycloReal
    triple_ok: bool
    k_ok: bool
    exact_match: bool

    @property
    def passed(self) -> bool:
        return self.triple_ok and self.k_ok


def verify_table1() -> list[Table1Check]:
    """Evaluate every row's words and compare with the listed class and k."""
    out = []
    for row, expected in zip(TABLE1, table1_points()):
        g, h = word_eval(row.x_word), word_eval(row.y_word)
        got = rep_triple(g, h)
        k = boundary_trace(got)
        triple_ok = s_canonical(got, True) == s_canonical(expected, True)
        out.append(Table1Check(row, got, k, triple_ok, k == _symbol_value(row.k), got == expected))
    return out


def enumerate_rep_classes(table: GroupTable) -> set:
    """S-canonical triples of all ordered pairs of group elements."""
    elems = table.elements
    traces = [q_trace(g) for g in elems]
    raw = set()
    for g, tg in zip(elems, traces):
        for h, th in zip(elems, traces):
            raw.add(TracePoint(tg, th, _trace_of_product(g, h)))
    return {s_canonical(p, True) for p in raw}

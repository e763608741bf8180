"""Short rational relations among cosines of rational multiples of pi.

Covers the twist equations cos(a+c) + cos(a-c) - cos(b) = cos(w) attached
to a trace triple, the known lists of rational / vanishing four-term cosine
relations, and a brute-force search that re-derives the vanishing list.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .character_variety import TracePoint, boundary_trace
from .cyclotomic import CycloReal, RationalAngle, as_two_cos, two_cos

__all__ = [
    "CJMatch", "CancellationTag", "CosineCombination", "CosineTerm", "IdentityCheck",
    "RATIONAL_IDENTITIES", "VANISHING_IDENTITIES", "TwistEquation",
    "cancellation_implies_k2", "match_cj", "normalize", "search_vanishing",
    "tau_x_equation", "tau_y_equation", "verify_cj_lists",
]

HALF = Fraction(1, 2)
THIRD = Fraction(1, 3)


@dataclass(frozen=True, order=True)
class CosineTerm:
    """coeff * cos(angle); angle stored as a fraction of pi."""

    angle: Fraction
    coeff: Fraction

    @property
    def rational_angle(self) -> RationalAngle:
        return RationalAngle.from_fraction(self.angle)


@dataclass(frozen=True)
class CosineCombination:
    """sum(coeff * cos(angle)) = rhs."""

    terms: tuple[CosineTerm, ...]
    rhs: Fraction = Fraction(0)

    @classmethod
    def of(cls, pairs: Iterable[tuple[Union[int, Fraction], Union[Fraction, RationalAngle]]], rhs=0):
        terms = []
        for coeff, angle in pairs:
            if isinstance(angle, RationalAngle):
                angle = angle.fraction
            terms.append(CosineTerm(Fraction(angle), Fraction(coeff)))
        return cls(tuple(terms), Fraction(rhs))

    def value(self) -> CycloReal:
        """Exact value of lhs - rhs."""
        total = CycloReal.rational(-self.rhs)
        for t in self.terms:
            total = total + two_cos(t.angle) * (t.coeff / 2)
        return total

    def float_value(self) -> float:
        return math.fsum(float(t.coeff) * math.cos(math.pi * t.angle) for t in self.terms) - float(self.rhs)

    def is_zero(self) -> bool:
        return not self.terms and self.rhs == 0

    def angles(self) -> tuple[Fraction, ...]:
        return tuple(t.angle for t in self.terms)

    def __str__(self):
        parts = []
        for t in self.terms:
            sign = "-" if t.coeff < 0 else "+"
            mag = abs(t.coeff)
            c = "" if mag == 1 else f"{mag}*"
            parts.append(f"{sign} {c}cos({_fmt_angle(t.angle)})")
        lhs = " ".join(parts).lstrip("+ ") if parts else "0"
        return f"{lhs} = {self.rhs}"


def _fmt_angle(a: Fraction) -> str:
    if a == 0:
        return "0"
    num = "" if a.numerator == 1 else str(a.numerator)
    return f"{num}pi/{a.denominator}" if a.denominator != 1 else f"{num or '1'}pi"


def _fold(angle: Fraction) -> tuple[int, Fraction]:
    """(sign, a) with cos(angle) = sign * cos(a) and a in [0, 1/2]."""
    a = angle % 2
    if a > 1:
        a = 2 - a
    if a > HALF:
        return -1, 1 - a
    return 1, a


def normalize(c: CosineCombination) -> CosineCombination:
    """Fold every angle into [0, pi/2], move cos(0) terms to the right side,
    drop cos(pi/2) terms and merge equal angles."""
    rhs = c.rhs
    merged: dict[Fraction, Fraction] = {}
    for t in c.terms:
        sign, a = _fold(t.angle)
        coeff = sign * t.coeff
        if a == HALF or coeff == 0:
            continue
        if a == 0:
            rhs -= coeff
            continue
        merged[a] = merged.get(a, Fraction(0)) + coeff
    terms = tuple(CosineTerm(a, k) for a, k in sorted(merged.items()) if k)
    return CosineCombination(terms, rhs)


# -- twist equations ------------------------------------------------------------


@dataclass(frozen=True)
class TwistEquation:
    """cos(a+c) + cos(a-c) - cos(b) = cos(w) where 2cos(w) = fourth_value."""

    combination: CosineCombination
    fourth_value: CycloReal
    fourth_angle: Optional[RationalAngle]

    def full_combination(self) -> CosineCombination:
        """Zero form with the fourth term moved left, when its angle is rational;
        otherwise just the left side."""
        if self.fourth_angle is None:
            return self.combination
        terms = [(t.coeff, t.angle) for t in self.combination.terms]
        terms.append((-1, self.fourth_angle.fraction))
        return normalize(CosineCombination.of(terms, self.combination.rhs))


def _angle(a) -> Fraction:
    if isinstance(a, RationalAngle):
        return a.fraction
    return Fraction(a)


def _twist_equation(fixed, moving, opposite) -> TwistEquation:
    # cos(f+m) + cos(f-m) - cos(o) = cos(w),  2cos(w) = 2cos f * 2cos m - 2cos o
    f, m, o = _angle(fixed), _angle(moving), _angle(opposite)
    combo = normalize(CosineCombination.of([(1, f + m), (1, f - m), (-1, o)]))
    value = two_cos(f) * two_cos(m) - two_cos(o)
    return TwistEquation(combo, value, as_two_cos(value))


def tau_x_equation(theta_x, theta_y, theta_z) -> TwistEquation:
    return _twist_equation(theta_x, theta_z, theta_y)


def tau_y_equation(theta_x, theta_y, theta_z) -> TwistEquation:
    return _twist_equation(theta_y, theta_z, theta_x)


@dataclass(frozen=True)
class CancellationTag:
    equation: str
    pair: tuple[str, str]
    k: CycloReal


def _angles_of(p: TracePoint) -> Optional[tuple[RationalAngle, RationalAngle, RationalAngle]]:
    angles = tuple(as_two_cos(c) for c in p)
    if any(a is None for a in angles):
        return None
    return angles


def cancellation_implies_k2(p: Sequence) -> Optional[CancellationTag]:
    """Detect two cancelling terms in a twist equation at p; when found,
    confirm k = 2 exactly.  Returns None when nothing cancels."""
    p = TracePoint(*(c if isinstance(c, CycloReal) else CycloReal.rational(c) for c in p))
    if any(c.is_zero() for c in p):
        return None
    angles = _angles_of(p)
    if angles is None:
        return None
    tx, ty, tz = (a.fraction for a in angles)
    x, y, z = p
    checks = (
        ("tau_x", tx, tz, ty, x * z - y),
        ("tau_y", ty, tz, tx, y * z - x),
    )
    names = ("cos(f+m)", "cos(f-m)", "-cos(o)", "-cos(w)")
    for label, f, m, o, fourth in checks:
        vals = (
            two_cos(f + m) / 2,
            two_cos(f - m) / 2,
            -two_cos(o) / 2,
            -fourth / 2,
        )
        for i, j in itertools.combinations(range(4), 2):
            if (vals[i] + vals[j]).is_zero():
                k = boundary_trace(p)
                if k != 2:
                    raise ArithmeticError(f"cancellation at {p} but k = {float(k)}")
                return CancellationTag(label, (names[i], names[j]), k)
    return None


# -- known identity lists ----------------------------------------------------------

F = Fraction

RATIONAL_IDENTITIES = (
    CosineCombination.of([(1, F(1, 3))], HALF),
    None,  # parametric: cos(t+pi/3) + cos(pi/3-t) - cos(t) = 0
    CosineCombination.of([(1, F(1, 5)), (-1, F(2, 5))], HALF),
    CosineCombination.of([(1, F(1, 7)), (-1, F(2, 7)), (1, F(3, 7))], HALF),
    CosineCombination.of([(1, F(1, 5)), (-1, F(1, 15)), (1, F(4, 15))], HALF),
    CosineCombination.of([(-1, F(2, 5)), (1, F(2, 15)), (-1, F(7, 15))], HALF),
    CosineCombination.of([(1, F(1, 7)), (1, F(3, 7)), (-1, F(1, 21)), (1, F(8, 21))], HALF),
    CosineCombination.of([(1, F(1, 7)), (-1, F(2, 7)), (1, F(2, 21)), (-1, F(5, 21))], HALF),
    CosineCombination.of([(-1, F(2, 7)), (1, F(3, 7)), (1, F(4, 21)), (1, F(10, 21))], HALF),
    CosineCombination.of([(-1, F(1, 15)), (1, F(2, 15)), (1, F(4, 15)), (-1, F(7, 15))], HALF),
)

VANISHING_IDENTITIES = {
    2: CosineCombination.of([(1, F(1, 5)), (-1, F(2, 5)), (-1, THIRD)]),
    3: CosineCombination.of([(1, F(1, 7)), (-1, F(2, 7)), (1, F(3, 7)), (-1, THIRD)]),
    4: CosineCombination.of([(1, F(1, 5)), (-1, F(1, 15)), (1, F(4, 15)), (-1, THIRD)]),
    5: CosineCombination.of([(-1, F(2, 5)), (1, F(2, 15)), (-1, F(7, 15)), (-1, THIRD)]),
}


def parametric_instance(t: Fraction) -> CosineCombination:
    t = Fraction(t)
    return CosineCombination.of([(1, t + THIRD), (1, THIRD - t), (-1, t)])


@dataclass
class IdentityCheck:
    name: str
    combination: CosineCombination
    passed: bool


PARAMETRIC_SAMPLES = (F(1, 30), F(1, 12), F(1, 10), F(1, 14))


def verify_cj_lists(samples: Sequence[Fraction] = PARAMETRIC_SAMPLES) -> list[IdentityCheck]:
    """Check every listed rational and vanishing relation exactly."""
    out = []
    for i, c in enumerate(RATIONAL_IDENTITIES, start=1):
        if c is None:
            for t in samples:
                inst = parametric_instance(t)
                out.append(IdentityCheck(f"rational-{i}[t={t}]", inst, inst.value().is_zero()))
            continue
        out.append(IdentityCheck(f"rational-{i}", c, c.value().is_zero()))
    for t in samples:
        inst = parametric_instance(t)
        out.append(IdentityCheck(f"vanishing-1[t={t}]", inst, inst.value().is_zero()))
    for i, c in VANISHING_IDENTITIES.items():
        out.append(IdentityCheck(f"vanishing-{i}", c, c.value().is_zero()))
    return out


# -- matching --------------------------------------------------------------------------


@dataclass(frozen=True)
class CJMatch:
    equation: Optional[int]
    t: Optional[Fraction] = None
    scale: Optional[Fraction] = None
    degenerate: bool = False


def _zero_form(c: CosineCombination) -> dict[Fraction, Fraction]:
    c = normalize(c)
    coeffs = {t.angle: t.coeff for t in c.terms}
    if c.rhs:
        # rhs = 2*rhs*cos(pi/3)
        coeffs[THIRD] = coeffs.get(THIRD, Fraction(0)) - 2 * c.rhs
    return {a: k for a, k in coeffs.items() if k}


def _proportional(a: dict, b: dict) -> Optional[Fraction]:
    if set(a) != set(b):
        return None
    ratio = None
    for angle, k in a.items():
        r = k / b[angle]
        if ratio is None:
            ratio = r
        elif r != ratio:
            return None
    return ratio


def match_cj(c: CosineCombination) -> Optional[CJMatch]:
    """Identify c, up to a rational factor, with one of the five vanishing
    relations.  The parametric relation is recognised from its angle pattern
    {t, pi/3 - t, pi/3 + t}."""
    form = _zero_form(c)
    if not form:
        return CJMatch(None, degenerate=True)
    for eq, ref in VANISHING_IDENTITIES.items():
        r = _proportional(form, _zero_form(ref))
        if r is not None:
            return CJMatch(eq, scale=r)
    if len(form) == 3:
        t = min(form)
        if 0 < t < Fraction(1, 6):
            r = _proportional(form, _zero_form(parametric_instance(t)))
            if r is not None:
                return CJMatch(1, t=t, scale=r)
    return None


# -- exhaustive search ----------------------------------------------------------------


DEFAULT_COEFFS = (F(1), F(-1), F(1, 2), F(-1, 2))


def _search_angles(max_den: int) -> list[Fraction]:
    out = set()
    for q in range(1, max_den + 1):
        for p in range(1, q):
            a = Fraction(p, q)
            if a < HALF:
                out.add(a)
    return sorted(out)


def _rank(rows: list[list[Fraction]]) -> int:
    rows = [r[:] for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                f = rows[i][col] / rows[rank][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def _independent(angles: Sequence[Fraction]) -> bool:
    vals = [two_cos(a) for a in angles]
    n = 1
    for v in vals:
        n = n * v.conductor // math.gcd(n, v.conductor)
    rows = [list(v.embed(n).coeffs) for v in vals]
    return _rank(rows) == len(rows)


def _is_minimal(angles: Sequence[Fraction]) -> bool:
    if len(angles) == 1:
        return True
    return all(_independent(sub) for sub in itertools.combinations(angles, len(angles) - 1))


def search_vanishing(max_den: int, coeffs: Sequence = DEFAULT_COEFFS, max_terms: int = 4,
                     tol: float = 1e-9) -> list[CosineCombination]:
    """All minimal vanishing combinations of at most ``max_terms`` cosines of
    distinct angles p*pi/q in (0, pi/2), q <= max_den, coefficients drawn
    from ``coeffs``; one representative per proportionality class."""
    if max_den > 30:
        raise ValueError("max_den above 30 is outside the supported search range")
    if not 1 <= max_terms <= 4:
        raise ValueError("max_terms must be between 1 and 4")
    angles = _search_angles(max_den)
    cos = np.cos(np.pi * np.array([float(a) for a in angles]))
    cvals = np.array([float(c) for c in coeffs])
    n = len(angles)

    def singles():
        idx = np.repeat(np.arange(n), len(cvals))
        cid = np.tile(np.arange(len(cvals)), n)
        return idx[:, None], cid[:, None], cos[idx] * cvals[cid]

    def pairs():
        ij = np.array(list(itertools.combinations(range(n), 2)), dtype=np.int64).reshape(-1, 2)
        cc = np.array(list(itertools.product(range(len(cvals)), repeat=2)), dtype=np.int64)
        idx = np.repeat(ij, len(cc), axis=0)
        cid = np.tile(cc, (len(ij), 1))
        vals = cos[idx[:, 0]] * cvals[cid[:, 0]] + cos[idx[:, 1]] * cvals[cid[:, 1]]
        return idx, cid, vals

    halves = {1: singles()}
    if max_terms >= 2:
        halves[2] = pairs()

    candidates = set()
    splits = {2: (1, 1), 3: (1, 2), 4: (2, 2)}
    for size in range(2, max_terms + 1):
        la, lb = splits[size]
        li, lc, lv = halves[la]
        ri, rc, rv = halves[lb]
        order = np.argsort(rv)
        rs = rv[order]
        lo = np.searchsorted(rs, -lv - tol, side="left")
        hi = np.searchsorted(rs, -lv + tol, side="right")
        for a in np.nonzero(hi > lo)[0]:
            for b in order[lo[a]:hi[a]]:
                ids = tuple(li[a]) + tuple(ri[b])
                if len(set(ids)) != size or max(li[a]) >= min(ri[b]):
                    continue
                cs = tuple(lc[a]) + tuple(rc[b])
                candidates.add(tuple(sorted(zip(ids, cs))))

    found: dict[tuple, CosineCombination] = {}
    for cand in candidates:
        terms = [(coeffs[c], angles[i]) for i, c in cand]
        lead = terms[0][0]
        key = tuple((a, Fraction(k) / lead) for k, a in terms)
        if key in found:
            continue
        combo = CosineCombination.of(terms)
        if not combo.value().is_zero():
            continue
        if not _is_minimal([a for _, a in terms]):
            continue
        found[key] = CosineCombination.of([(k, a) for a, k in key])
    return sorted(found.values(), key=lambda c: (len(c.terms), c.angles()))

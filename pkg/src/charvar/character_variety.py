"""Trace coordinates on the SU(2) character variety of the one-holed torus.

A representation class is the triple (x, y, z) = (tr X, tr Y, tr XY).  All
formulas here are written once and work for any scalar that supports
``+ - *`` with integers: ``float``, ``Fraction`` and ``CycloReal``.
"""

from __future__ import annotations

import enum
import itertools
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, NamedTuple, Optional, Sequence, Union

from .cyclotomic import CycloReal, RationalAngle, as_two_cos

__all__ = [
    "TX", "TX_INV", "TY", "TY_INV", "GENERATORS",
    "EllipseParams", "PinType", "TracePoint",
    "apply_word", "boundary_trace", "classify_pin", "ellipse_params",
    "from_tilde", "in_E", "is_exact", "parse_word", "pin_points",
    "rational_rotation", "rotation_angle", "s_canonical",
    "s_equivalence_orbit", "tau_x", "tau_x_inv", "tau_y", "tau_y_inv",
    "to_tilde",
]

FLOAT_TOL = 1e-9


class TracePoint(NamedTuple):
    x: Any
    y: Any
    z: Any

    def to_float(self) -> "TracePoint":
        return TracePoint(float(self.x), float(self.y), float(self.z))

    def __neg__(self):
        return TracePoint(-self.x, -self.y, -self.z)


def is_exact(p: TracePoint) -> bool:
    return not any(isinstance(c, float) for c in p)


def exact_point(x, y, z) -> TracePoint:
    """TracePoint with every coordinate promoted to CycloReal."""
    def lift(v):
        if isinstance(v, CycloReal):
            return v
        if isinstance(v, float):
            raise TypeError("float coordinates cannot be made exact; snap them first")
        return CycloReal.rational(v)

    return TracePoint(lift(x), lift(y), lift(z))


def boundary_trace(p: Sequence) -> Any:
    """k = x^2 + y^2 + z^2 - xyz - 2, the trace of the boundary loop."""
    x, y, z = p
    return x * x + y * y + z * z - x * y * z - 2


# -- Dehn twists --------------------------------------------------------------


def tau_x(p: Sequence) -> TracePoint:
    x, y, z = p
    return TracePoint(x, z, x * z - y)


def tau_x_inv(p: Sequence) -> TracePoint:
    x, y, z = p
    return TracePoint(x, x * y - z, y)


def tau_y(p: Sequence) -> TracePoint:
    x, y, z = p
    return TracePoint(z, y, y * z - x)


def tau_y_inv(p: Sequence) -> TracePoint:
    x, y, z = p
    return TracePoint(x * y - z, y, x)


TX, TX_INV, TY, TY_INV = "X", "X^-1", "Y", "Y^-1"
GENERATORS = (TX, TX_INV, TY, TY_INV)
# index order shared with the numeric kernels
_MAPS = {TX: tau_x, TX_INV: tau_x_inv, TY: tau_y, TY_INV: tau_y_inv}
_INVERSE = {TX: TX_INV, TX_INV: TX, TY: TY_INV, TY_INV: TY}

_WORD_TOKEN = re.compile(r"\s*(?:tau_?)?([XYxy])\s*(?:\^\s*\{?\s*([+-]?\d+)\s*\}?)?")


def parse_word(text: str) -> tuple[str, ...]:
    """Parse "X Y^-1 X^3" (also "tau_X", braces) into generator symbols."""
    out: list[str] = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _WORD_TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"bad twist word at {text[pos:]!r}")
        letter = m.group(1).upper()
        power = int(m.group(2)) if m.group(2) else 1
        sym = TX if letter == "X" else TY
        if power < 0:
            sym = _INVERSE[sym]
        out.extend([sym] * abs(power))
        pos = m.end()
        while pos < len(text) and text[pos] in " ,*":
            pos += 1
    return tuple(out)


def apply_word(word: Union[str, Iterable[str]], p: Sequence) -> TracePoint:
    """Apply the generators of ``word`` left to right."""
    if isinstance(word, str):
        word = parse_word(word)
    point = TracePoint(*p)
    for sym in word:
        point = _MAPS[sym](point)
    return point


def inverse_word(word: Sequence[str]) -> tuple[str, ...]:
    return tuple(_INVERSE[s] for s in reversed(word))


# -- level sets and rotation ----------------------------------------------------


@dataclass(frozen=True)
class EllipseParams:
    """(2+x)/4 (y+z)^2 + (2-x)/4 (y-z)^2 = 2 + k - x^2 at fixed x."""

    x: Any
    k: Any
    sum_coeff: Any
    diff_coeff: Any
    rhs: Any
    empty: bool
    degenerate: bool


def _is_zero(v, tol=FLOAT_TOL) -> bool:
    if isinstance(v, float):
        return abs(v) <= tol
    return v == 0


def _quarter(v):
    if isinstance(v, float):
        return v / 4
    if isinstance(v, int):
        return Fraction(v, 4)
    return v / 4


def ellipse_params(x, k) -> EllipseParams:
    if float(x) > 2 + FLOAT_TOL or float(x) < -2 - FLOAT_TOL:
        raise ValueError("level x must satisfy |x| <= 2")
    rhs = 2 + k - x * x
    empty = float(rhs) < 0 and not _is_zero(rhs)
    degenerate = _is_zero(2 - x) or _is_zero(2 + x)
    return EllipseParams(x, k, _quarter(2 + x), _quarter(2 - x), rhs, empty, degenerate)


def _tilde_coeffs(x: float) -> tuple[float, float]:
    if abs(x) >= 2:
        raise ValueError("tilde coordinates are degenerate at |x| = 2")
    a, b = math.sqrt(2 - x), math.sqrt(2 + x)
    r = 2 * math.sqrt(2)
    return (a + b) / r, (a - b) / r


def to_tilde(p: Sequence[float]) -> TracePoint:
    """Linear change at fixed x turning the ellipse E_{x,k} into a circle of
    radius sqrt(2 + k - x^2)."""
    x, y, z = (float(c) for c in p)
    al, be = _tilde_coeffs(x)
    return TracePoint(x, al * y + be * z, be * y + al * z)


def from_tilde(p: Sequence[float]) -> TracePoint:
    x, yt, zt = (float(c) for c in p)
    al, be = _tilde_coeffs(x)
    det = al * al - be * be
    return TracePoint(x, (al * yt - be * zt) / det, (al * zt - be * yt) / det)


def rotation_angle(x) -> float:
    """Angle by which tau_X rotates the level circle at x."""
    v = float(x) / 2
    return math.acos(max(-1.0, min(1.0, v)))


def rational_rotation(x) -> Optional[RationalAngle]:
    if isinstance(x, float):
        raise TypeError("rational_rotation needs an exact scalar")
    return as_two_cos(x)


# -- S-equivalence ----------------------------------------------------------------

_EVEN_SIGNS = ((1, 1, 1), (-1, 1, -1), (1, -1, -1), (-1, -1, 1))
_PERMS = tuple(itertools.permutations(range(3)))


def s_equivalence_orbit(p: Sequence, minus_identity_in_group: bool = True) -> set:
    """Triples S-equivalent to p: coordinate permutations, plus the even sign
    changes when -I lies in the image group."""
    signs = _EVEN_SIGNS if minus_identity_in_group else _EVEN_SIGNS[:1]
    out = set()
    for perm in _PERMS:
        q = [p[i] for i in perm]
        for sg in signs:
            out.add(TracePoint(*(c if s > 0 else -c for c, s in zip(q, sg))))
    return out


def _cmp_scalar(a, b) -> int:
    if isinstance(a, CycloReal) or isinstance(b, CycloReal):
        fa, fb = float(a), float(b)
        if abs(fa - fb) > 1e-9:
            return 1 if fa > fb else -1
        d = CycloReal._coerce(a) - CycloReal._coerce(b)
        return d.sign()
    return (a > b) - (a < b)


def _cmp_points(p, q) -> int:
    for a, b in zip(p, q):
        c = _cmp_scalar(a, b)
        if c:
            return c
    return 0


def s_canonical(p: Sequence, minus_identity_in_group: bool = True) -> TracePoint:
    """Lexicographically greatest member of the S-equivalence class."""
    best = None
    for q in s_equivalence_orbit(p, minus_identity_in_group):
        if best is None or _cmp_points(q, best) > 0:
            best = q
    return best


# -- Pin(2) / Spin(2) ---------------------------------------------------------------


class PinType(enum.Enum):
    SPIN2 = "Spin2"
    PIN2 = "Pin2"
    NEITHER = "Neither"


def classify_pin(p: Sequence, tol: float = FLOAT_TOL) -> PinType:
    k = boundary_trace(p)
    if _is_zero(k - 2, tol):
        return PinType.SPIN2
    zeros = sum(_is_zero(c, tol) for c in p)
    return PinType.PIN2 if zeros >= 2 else PinType.NEITHER


def pin_points(k) -> list[TracePoint]:
    """The six Pin(2) classes on E_k: the axis points (+-sqrt(2+k), 0, 0), ..."""
    kf = float(k)
    if not -2 < kf < 2:
        raise ValueError("pin_points needs -2 < k < 2")
    r = math.sqrt(2 + kf)
    pts = []
    for axis in range(3):
        for s in (1.0, -1.0):
            c = [0.0, 0.0, 0.0]
            c[axis] = s * r
            pts.append(TracePoint(*c))
    return pts


def in_E(p: Sequence, tol: float = FLOAT_TOL) -> bool:
    """Membership in E = {(x,y,z) in [-2,2]^3 : -2 <= k <= 2}."""
    vals = [float(c) for c in p] + [float(boundary_trace(p))]
    return all(-2 - tol <= v <= 2 + tol for v in vals)

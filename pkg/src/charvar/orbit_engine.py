"""Orbits of the twist group on trace coordinates.

Exact orbits are enumerated breadth-first and either close up, or produce a
point with a coordinate that is not 2cos of a rational angle.  Such a
coordinate means the corresponding twist acts as an irrational rotation, so
the orbit is infinite and, for -2 < k < 2, dense in its level sphere.
"""

from __future__ import annotations

import enum
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import _accel
from .character_variety import (
    FLOAT_TOL, PinType, TracePoint, boundary_trace, classify_pin, from_tilde, in_E,
    s_canonical, s_equivalence_orbit,
)
from .cyclotomic import ConductorOverflow, CycloReal, RationalAngle, as_two_cos, two_cos

__all__ = [
    "Classification", "DensityResult", "KDriftError", "OrbitInconclusive", "OrbitReport",
    "Verdict", "classify", "epsilon_density", "exact_orbit", "filtration_Y",
    "float_orbit", "snap_coordinate", "sphere_grid", "sweep_group", "SweepEntry",
]

DEFAULT_CAP = 1_000_000
SNAP_MAX_DEN = 420
SNAP_TOL = 1e-9


class KDriftError(ArithmeticError):
    """Floating-point walk left its level set by more than the tolerance."""

    def __init__(self, step: int, drift: float):
        super().__init__(f"k drifted by {drift:.3g} at step {step}")
        self.step = step
        self.drift = drift


class OrbitInconclusive(RuntimeError):
    """The exact orbit hit its cap without closing or finding a witness."""


@dataclass
class OrbitReport:
    mode: str
    points: int
    closed: bool
    witness: Optional[TracePoint] = None
    witness_coordinate: Optional[int] = None
    table1_class: Optional[TracePoint] = None
    inconclusive: bool = False
    members: list = field(default_factory=list, repr=False)


def _common_conductor(p: Sequence[CycloReal]) -> int:
    n = 1
    for c in p:
        n = n * c.conductor // math.gcd(n, c.conductor)
    return n


def _lift(p: Sequence) -> TracePoint:
    out = []
    for c in p:
        if isinstance(c, CycloReal):
            out.append(c)
        elif isinstance(c, float):
            raise TypeError("exact_orbit needs exact coordinates")
        else:
            out.append(CycloReal.rational(c))
    return TracePoint(*out)


def _table1_lookup():
    from .quaternion_groups import table1_points

    images = []
    for row in table1_points():
        for q in s_equivalence_orbit(row, True):
            images.append((q.to_float(), q))
    return images


_T1_IMAGES = None


def match_table1(p: TracePoint) -> Optional[TracePoint]:
    """S-canonical finite-orbit table class of p, if p is S-equivalent to a row."""
    global _T1_IMAGES
    if _T1_IMAGES is None:
        _T1_IMAGES = _table1_lookup()
    pf = p.to_float()
    for qf, q in _T1_IMAGES:
        if all(abs(a - b) < 1e-9 for a, b in zip(pf, qf)) and q == p:
            return s_canonical(q, True)
    return None


def exact_orbit(p: Sequence, cap: int = DEFAULT_CAP) -> OrbitReport:
    """Breadth-first closure under the four twist maps with exact hashing."""
    p = _lift(p)
    n = _common_conductor(p)
    start = TracePoint(*(c.embed(n) for c in p))
    angle_ok: dict = {}

    def key(q):
        return (q.x.numerators, q.x.denominator, q.y.numerators, q.y.denominator,
                q.z.numerators, q.z.denominator)

    def first_irrational(q) -> Optional[int]:
        for i, c in enumerate(q):
            ck = (c.numerators, c.denominator)
            ok = angle_ok.get(ck)
            if ok is None:
                ok = as_two_cos(c) is not None
                angle_ok[ck] = ok
            if not ok:
                return i
        return None

    bad = first_irrational(start)
    if bad is not None:
        return OrbitReport("exact", 1, False, start, bad, members=[start])
    seen = {key(start): start}
    queue = deque([start])
    while queue:
        q = queue.popleft()
        x, y, z = q
        xz = x * z
        yz = y * z
        xy = x * y
        for nxt in (
            TracePoint(x, z, xz - y),
            TracePoint(x, xy - z, y),
            TracePoint(z, y, yz - x),
            TracePoint(xy - z, y, x),
        ):
            kk = key(nxt)
            if kk in seen:
                continue
            seen[kk] = nxt
            bad = first_irrational(nxt)
            if bad is not None:
                return OrbitReport("exact", len(seen), False, nxt, bad, members=list(seen.values()))
            if len(seen) > cap:
                return OrbitReport("exact", len(seen), False, inconclusive=True, members=list(seen.values()))
            queue.append(nxt)
    members = list(seen.values())
    t1 = None
    for m in members:
        t1 = match_table1(m)
        if t1 is not None:
            break
    return OrbitReport("exact", len(members), True, table1_class=t1, members=members)


# -- classification ----------------------------------------------------------------


class Verdict(enum.Enum):
    SPIN2_FIBER = "Spin2Fiber"
    PIN2_POINT = "Pin2Point"
    FINITE_ORBIT = "FiniteOrbit"
    DENSE = "Dense"
    DENSE_CANDIDATE = "DenseCandidate"


@dataclass
class Classification:
    verdict: Verdict
    k: object
    orbit: Optional[OrbitReport] = None
    witness: Optional[TracePoint] = None
    table1_class: Optional[TracePoint] = None
    snapped: Optional[TracePoint] = None
    tags: list = field(default_factory=list)


def snap_coordinate(v: float, max_den: int = SNAP_MAX_DEN, tol: float = SNAP_TOL) -> Optional[CycloReal]:
    """Exact 2cos(p pi/q), q <= max_den, within tol of v, if any."""
    if abs(v) > 2 + tol:
        return None
    theta = math.acos(max(-1.0, min(1.0, v / 2))) / math.pi
    f = Fraction(theta).limit_denominator(max_den)
    for cand in (f, Fraction(0), Fraction(1)):
        if abs(2 * math.cos(math.pi * cand) - v) <= tol:
            return two_cos(cand)
    return None


def _tags_for(p: TracePoint, exact: bool) -> list:
    tags = []
    zeros = [i for i, c in enumerate(p) if (c == 0 if exact else abs(c) <= FLOAT_TOL)]
    if zeros:
        tags.append("zero_coordinate")
    return tags


def _tau_y_unmatched(p: TracePoint) -> bool:
    """True when every coordinate is 2cos of a rational angle but the
    tau_Y equation at p is not one of the known vanishing relations."""
    from .diophantine import match_cj, tau_y_equation

    angles = [as_two_cos(c) for c in p]
    if any(a is None for a in angles):
        return False
    eq = tau_y_equation(*(a.fraction for a in angles))
    if eq.fourth_angle is None:
        return True
    return match_cj(eq.full_combination()) is None


def _case_tags(p: TracePoint, k, tags: list, table1: bool, dense: bool) -> list:
    # the three cases overlap, so every one that applies is reported
    if k == 2 or "zero_coordinate" in tags:
        tags.append("case:k2_or_zero")
    if table1:
        tags.append("case:table1")
    if dense:
        tags.append("case:dense")
    if _tau_y_unmatched(p):
        tags.append("tau_y_unmatched")
    return tags


def classify(p: Sequence, mode: str = "exact", cap: int = DEFAULT_CAP,
             snap_max_den: int = SNAP_MAX_DEN, snap_tol: float = SNAP_TOL) -> Classification:
    """Pin(2) / finite orbit / dense trichotomy for a point of E."""
    if mode not in ("exact", "float"):
        raise ValueError("mode must be 'exact' or 'float'")
    if mode == "float":
        return _classify_float(TracePoint(*(float(c) for c in p)), cap, snap_max_den, snap_tol)
    return _classify_exact(_lift(p), cap)


def _classify_exact(p: TracePoint, cap: int) -> Classification:
    if not in_E(p, tol=0.0):
        raise ValueError(f"point {p.to_float()} is not in E")
    k = boundary_trace(p)
    tags = _tags_for(p, True)
    pin = classify_pin(p)
    if pin is PinType.SPIN2:
        return Classification(Verdict.SPIN2_FIBER, k, tags=_case_tags(p, k, tags + ["k=2"], False, False))
    if pin is PinType.PIN2:
        return Classification(Verdict.PIN2_POINT, k, tags=_case_tags(p, k, tags + ["pin2"], False, False))
    report = exact_orbit(p, cap)
    if report.inconclusive:
        raise OrbitInconclusive(f"orbit exceeded cap {cap} without closing or a witness")
    if report.closed:
        tags.append("finite_orbit")
        t1 = report.table1_class is not None
        if t1:
            tags.append("table1")
        return Classification(Verdict.FINITE_ORBIT, k, report, table1_class=report.table1_class,
                              tags=_case_tags(p, k, tags, t1, False))
    assert -2 < k < 2
    tags += ["infinite_orbit", "irrational_angle"]
    return Classification(Verdict.DENSE, k, report, witness=report.witness,
                          tags=_case_tags(p, k, tags, False, True))


def _classify_float(p: TracePoint, cap, snap_max_den, snap_tol) -> Classification:
    if not in_E(p, tol=FLOAT_TOL):
        raise ValueError(f"point {tuple(p)} is not in E")
    k = boundary_trace(p)
    tags = _tags_for(p, False)
    pin = classify_pin(p, FLOAT_TOL)
    if pin is PinType.SPIN2:
        return Classification(Verdict.SPIN2_FIBER, k, tags=tags + ["k=2"])
    if pin is PinType.PIN2:
        return Classification(Verdict.PIN2_POINT, k, tags=tags + ["pin2"])
    snapped = [snap_coordinate(c, snap_max_den, snap_tol) for c in p]
    if any(s is None for s in snapped):
        return Classification(Verdict.DENSE_CANDIDATE, k, tags=tags + ["unsnappable_coordinate"])
    exact = TracePoint(*snapped)
    try:
        result = _classify_exact(exact, cap)
    except ConductorOverflow as exc:
        raise OrbitInconclusive(f"snapped point needs too large a field: {exc}") from exc
    result.snapped = exact
    result.tags.append("snapped")
    return result


# -- floating-point experiments ------------------------------------------------------


def _choices(steps: int, policy: str, seed: int, period: tuple[int, int]) -> np.ndarray:
    if policy == "uniform":
        rng = np.random.default_rng(seed)
        return rng.integers(0, 4, size=steps, dtype=np.int8)
    if policy == "alternate":
        a, b = period
        if a < 0 or b < 0 or a + b == 0:
            raise ValueError("alternate policy needs non-negative periods, not both zero")
        cycle = np.array([0] * a + [2] * b, dtype=np.int8)
        reps = -(-steps // len(cycle))
        return np.tile(cycle, reps)[:steps]
    raise ValueError(f"unknown word policy {policy!r}")


def float_orbit(p: Sequence[float], steps: int, policy: str = "uniform", seed: int = 0,
                period: tuple[int, int] = (1, 1), drift_tol: float = 1e-6, backend=None) -> np.ndarray:
    """Random (seeded) or periodic twist walk; returns steps+1 points, start first."""
    p = TracePoint(*(float(c) for c in p))
    if not in_E(p, tol=1e-9):
        raise ValueError("start point is not in E")
    choices = _choices(steps, policy, seed, period)
    pts, abort = _accel.twist_walk(p, choices, drift_tol=drift_tol, backend=backend)
    if abort >= 0:
        k0 = float(boundary_trace(p))
        drift = abs(float(boundary_trace(pts[abort])) - k0)
        raise KDriftError(abort, drift)
    return pts


def sphere_grid(k: float, n: int) -> np.ndarray:
    """About n points on E_k: x-levels from pole to pole, each level circle
    sampled uniformly in tilde coordinates, counts proportional to radius."""
    k = float(k)
    if not -2 < k < 2:
        raise ValueError("sphere_grid needs -2 < k < 2")
    if n < 2:
        raise ValueError("need at least two grid points")
    big_r = math.sqrt(2 + k)
    levels = max(3, int(round(math.sqrt(2 * n / math.pi))) + 1)
    xs = [big_r * math.cos(math.pi * i / (levels - 1)) for i in range(levels)]
    xs[0], xs[-1] = big_r, -big_r
    radii = [math.sqrt(max(0.0, 2 + k - x * x)) for x in xs]
    radii[0] = radii[-1] = 0.0
    budget = n - 2
    inner = radii[1:-1]
    total = sum(inner)
    raw = [budget * r / total for r in inner]
    counts = [max(1, int(math.floor(c))) for c in raw]
    # largest remainders fill the rest
    short = budget - sum(counts)
    order = sorted(range(len(raw)), key=lambda i: raw[i] - math.floor(raw[i]), reverse=True)
    for i in order[:max(0, short)]:
        counts[i] += 1
    pts = [(big_r, 0.0, 0.0)]
    for x, r, c in zip(xs[1:-1], inner, counts):
        for j in range(c):
            phi = 2 * math.pi * j / c
            pts.append(tuple(from_tilde((x, r * math.cos(phi), r * math.sin(phi)))))
    pts.append((-big_r, 0.0, 0.0))
    return np.array(pts, dtype=np.float64)


@dataclass
class DensityResult:
    epsilon: float
    grid_size: int
    covered_fraction: float
    max_gap: float


def epsilon_density(orbit, k: float, epsilon: float, grid_n: int, backend=None,
                    level_tol: float = 1e-6) -> DensityResult:
    """Fraction of an E_k grid lying within epsilon of some orbit point."""
    pts = np.asarray(orbit, dtype=np.float64).reshape(-1, 3)
    if pts.shape[0] == 0:
        raise ValueError("empty orbit")
    x, y, z = pts[:, 0], pts[:, 1], pts[:, 2]
    drift = np.abs(x * x + y * y + z * z - x * y * z - 2 - k)
    if drift.max() > level_tol:
        raise ValueError(f"orbit points are off E_k by up to {drift.max():.3g}")
    grid = sphere_grid(k, grid_n)
    dist = _accel.nearest_distances(grid, pts, backend=backend)
    return DensityResult(float(epsilon), int(grid.shape[0]), float(np.mean(dist < epsilon)), float(dist.max()))


# -- filtration ------------------------------------------------------------------------


def rotation_period(angle: RationalAngle) -> int:
    """Order of the rotation by angle (angle in units of pi)."""
    f = angle.fraction / 2
    return f.denominator


def filtration_Y(n: int, max_den: Optional[int] = None) -> set:
    """Values y in (-2, 2) whose twist rotation has period in (1, n]."""
    if n < 2:
        raise ValueError("n must be at least 2")
    out = set()
    for m in range(2, n + 1):
        for j in range(1, m):
            if math.gcd(j, m) != 1 or 2 * j >= m:
                continue
            angle = RationalAngle(2 * j, m)
            if max_den is not None and angle.den > max_den:
                continue
            out.add(two_cos(angle))
    return out


# -- group sweeps ----------------------------------------------------------------------


@dataclass
class SweepEntry:
    triple: TracePoint
    pin: PinType
    orbit_size: Optional[int] = None
    table1_class: Optional[TracePoint] = None

    @property
    def ok(self) -> bool:
        return self.pin is not PinType.NEITHER or self.table1_class is not None


def sweep_group(table, allowed: Optional[set] = None, cap: int = DEFAULT_CAP) -> list[SweepEntry]:
    """Classify every rep class of a finite group: Pin(2) classes are set
    aside, every other class must have a finite orbit through a row of the finite-orbit table.

    ``allowed`` restricts which S-canonical finite-orbit table classes count as a match.
    """
    from .quaternion_groups import enumerate_rep_classes, table1_classes

    out = []
    for triple in sorted(enumerate_rep_classes(table), key=lambda t: t.to_float()):
        pin = classify_pin(triple)
        entry = SweepEntry(triple, pin)
        if pin is PinType.NEITHER:
            report = exact_orbit(triple, cap)
            if report.inconclusive or not report.closed:
                raise OrbitInconclusive(f"rep class {triple.to_float()} has no finite orbit")
            entry.orbit_size = report.points
            hits = {s_canonical(m, True) for m in report.members}
            classes = hits if allowed is None else hits & allowed
            found = classes & table1_classes()
            entry.table1_class = min(found, key=lambda t: t.to_float()) if found else None
        out.append(entry)
    return out

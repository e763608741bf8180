"""Command-line interface: ``charvar <command> ...``.

Exit codes: 0 success, 2 usage or parse error, 3 inconclusive result or
numerical abort.  JSON outputs carry ``schema_version``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import re
import sys
import tempfile
from fractions import Fraction
from typing import Optional

from . import __version__
from .character_variety import (
    PinType, TracePoint, boundary_trace, classify_pin, from_tilde, in_E, pin_points,
)
from .cyclotomic import ConductorOverflow, CycloReal, as_two_cos, two_cos
from .diophantine import VANISHING_IDENTITIES, match_cj, search_vanishing, verify_cj_lists
from .orbit_engine import (
    KDriftError, OrbitInconclusive, classify, epsilon_density, exact_orbit, filtration_Y,
    float_orbit, sphere_grid,
)
from .quaternion_groups import verify_table1

SCHEMA_VERSION = 1
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2, 3

ORBIT_CSV_HEADER = ["x", "y", "z", "k", "exact_x", "exact_y", "exact_z"]
SPHERE_CSV_HEADER = ["x", "y", "z", "k"]


class UsageError(ValueError):
    pass


# -- literals -----------------------------------------------------------------------

_RATIONAL = re.compile(r"^[+-]?\d+(?:/\d+)?$")
_DECIMAL = re.compile(r"^[+-]?(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?$")
_COS = re.compile(
    r"^(?P<sign>[+-])?\s*(?P<coef>\d+(?:/\d+)?)?\s*\*?\s*cos\(\s*(?P<num>[+-]?\d+)(?:\s*/\s*(?P<den>\d+))?"
    r"\s*\*?\s*pi\s*\)$"
)
_SQRT = re.compile(r"^(?P<sign>[+-])?\s*sqrt\(?\s*(?P<n>[23])\s*\)?$")


def parse_component(text: str):
    """One coordinate: rational ("1/2"), decimal ("1.2"), "2cos(1/5 pi)",
    or sqrt2 / sqrt3."""
    t = text.strip()
    if _RATIONAL.match(t):
        return Fraction(t)
    m = _COS.match(t)
    if m:
        coef = Fraction(m.group("coef") or 1)
        if m.group("sign") == "-":
            coef = -coef
        angle = Fraction(int(m.group("num")), int(m.group("den") or 1))
        # coef * cos(a) = (coef/2) * 2cos(a)
        return two_cos(angle) * (coef / 2)
    m = _SQRT.match(t)
    if m:
        val = two_cos(Fraction(1, 4) if m.group("n") == "2" else Fraction(1, 6))
        return -val if m.group("sign") == "-" else val
    if _DECIMAL.match(t):
        return float(t)
    raise UsageError(f"cannot parse coordinate {text!r}")


def parse_point(text: str, mode: str = "auto") -> tuple[TracePoint, str]:
    parts = text.split(",")
    if len(parts) != 3:
        raise UsageError(f"expected three comma-separated coordinates, got {text!r}")
    comps = [parse_component(p) for p in parts]
    has_float = any(isinstance(c, float) for c in comps)
    has_cyclo = any(isinstance(c, CycloReal) for c in comps)
    if mode == "auto":
        mode = "float" if has_float and not has_cyclo else "exact"
    if mode == "exact":
        if has_float:
            raise UsageError("decimal coordinates cannot be used in exact mode")
        comps = [c if isinstance(c, CycloReal) else CycloReal.rational(c) for c in comps]
    else:
        comps = [float(c) for c in comps]
    return TracePoint(*comps), mode


def render_exact(v) -> str:
    if isinstance(v, float):
        return repr(v)
    if not isinstance(v, CycloReal):
        v = CycloReal.rational(v)
    q = v.as_fraction()
    if q is not None:
        return str(q)
    a = as_two_cos(v)
    if a is not None:
        return f"2cos({a.num}/{a.den} pi)" if a.den != 1 else f"2cos({a.num} pi)"
    m = v.minimized()
    return f"cyclo{m.conductor}[{','.join(str(c) for c in m.coeffs)}]"


def _point_json(p) -> dict:
    return {
        "float": [float(c) for c in p],
        "exact": [render_exact(c) for c in p] if not isinstance(p[0], float) else None,
    }


# -- output helpers -----------------------------------------------------------------


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".charvar-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        _atomic_write(out, text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _json(obj) -> str:
    obj = {"schema_version": SCHEMA_VERSION, **obj}
    return json.dumps(obj, indent=2) + "\n"


# -- commands -------------------------------------------------------------------------


def cmd_classify(args) -> int:
    point, mode = parse_point(args.point, args.mode)
    result = classify(point, mode=mode, cap=args.cap)
    payload = {
        "verdict": result.verdict.value,
        "mode": mode,
        "k": render_exact(result.k),
        "k_float": float(result.k),
        "tags": result.tags,
    }
    if result.orbit is not None:
        payload["orbit_size" if result.orbit.closed else "explored"] = result.orbit.points
    if result.table1_class is not None:
        payload["table1_class"] = _point_json(result.table1_class)
    if result.witness is not None:
        payload["witness"] = _point_json(result.witness)
        payload["witness_coordinate"] = "xyz"[result.orbit.witness_coordinate]
    if result.snapped is not None:
        payload["snapped"] = _point_json(result.snapped)
    _emit(_json(payload), args.out)
    return EXIT_OK


def cmd_orbit(args) -> int:
    point, _ = parse_point(args.point, "exact")
    report = exact_orbit(point, cap=args.cap)
    if report.inconclusive:
        print(f"orbit exceeded cap {args.cap}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    if not report.closed:
        print("orbit is infinite; writing the points explored before the witness", file=sys.stderr)
    rows = []
    for m in report.members:
        fx = [float(c) for c in m]
        rows.append((fx, float(boundary_trace(m)), [render_exact(c) for c in m]))
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(ORBIT_CSV_HEADER)
        for fx, k, ex in rows:
            w.writerow([repr(v) for v in fx] + [repr(k)] + ex)
        text = buf.getvalue()
    else:
        text = _json({
            "closed": report.closed,
            "size": report.points,
            "witness": _point_json(report.witness) if report.witness is not None else None,
            "table1_class": _point_json(report.table1_class) if report.table1_class is not None else None,
            "points": [{"x": fx[0], "y": fx[1], "z": fx[2], "k": k, "exact": ex} for fx, k, ex in rows],
        })
    _emit(text, args.out)
    return EXIT_OK


def _verify_table1(args):
    checks = verify_table1()
    rows = [{
        "row": c.row.index, "x_word": c.row.x_word, "y_word": c.row.y_word,
        "expected": list(c.row.triple), "computed": [render_exact(v) for v in c.computed],
        "k": render_exact(c.computed_k), "passed": c.passed,
    } for c in checks]
    return all(c.passed for c in checks), {"rows": rows, "passed": sum(c.passed for c in checks), "total": len(checks)}


def _verify_cj(args):
    ids = verify_cj_lists()
    found = search_vanishing(args.max_den)
    matches = [(c, match_cj(c)) for c in found]
    extras = [str(c) for c, m in matches if m is None or m.equation is None]
    got = {m.equation for _, m in matches if m is not None and m.equation}
    expected = set()
    for eq, ref in VANISHING_IDENTITIES.items():
        if max(t.angle.denominator for t in ref.terms) <= args.max_den:
            expected.add(eq)
    missing = sorted(expected - (got - {1}))
    ok = all(i.passed for i in ids) and not extras and not missing
    return ok, {
        "identities": [{"name": i.name, "passed": i.passed} for i in ids],
        "search": {
            "max_den": args.max_den,
            "found": [{"combination": str(c), "equation": m.equation if m else None,
                       "t": str(m.t) if m and m.t is not None else None} for c, m in matches],
            "missing_equations": missing,
            "unexpected": extras,
            "coefficient_set": ["1", "-1", "1/2", "-1/2"],
            "note": "search restricted to the listed coefficients; larger sets are not swept",
        },
    }


def _verify_pin(args):
    ks = [-2 + 4 * (i + 0.5) / args.samples for i in range(args.samples)]
    results = []
    for k in ks:
        pts = pin_points(k)
        ok = len(set(pts)) == 6 and all(
            abs(boundary_trace(p) - k) <= 1e-12 and classify_pin(p) is PinType.PIN2 for p in pts
        )
        results.append({"k": k, "points": len(pts), "passed": ok})
    return all(r["passed"] for r in results), {"samples": results}


_KNOWN_FILTRATION = {2: [], 3: [-1], 4: [-1, 0]}


def _verify_filtration(args):
    levels = {}
    ok = True
    for n in range(2, args.n + 1):
        vals = sorted(filtration_Y(n, args.max_den), key=float)
        levels[str(n)] = [render_exact(v) for v in vals]
        if n in _KNOWN_FILTRATION:
            ok &= set(vals) == {CycloReal.rational(v) for v in _KNOWN_FILTRATION[n]}
    return ok, {"levels": levels}


def cmd_verify(args) -> int:
    runner = {"table1": _verify_table1, "cj": _verify_cj, "pin": _verify_pin,
              "filtration": _verify_filtration}[args.suite]
    ok, payload = runner(args)
    _emit(_json({"suite": args.suite, "ok": bool(ok), **payload}), args.out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_density(args) -> int:
    point, _ = parse_point(args.point, "float")
    k = float(boundary_trace(point))
    if not -2 < k < 2:
        raise UsageError("density needs a point with -2 < k < 2")
    try:
        pts = float_orbit(point, args.steps, seed=args.seed, backend=args.backend)
    except KDriftError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_INCONCLUSIVE
    res = epsilon_density(pts, k, args.epsilon, args.grid, backend=args.backend)
    _emit(_json({
        "point": [float(c) for c in point], "k": k, "steps": args.steps, "seed": args.seed,
        "epsilon": res.epsilon, "grid_size": res.grid_size,
        "covered_fraction": res.covered_fraction, "max_gap": res.max_gap,
    }), args.out)
    return EXIT_OK


def _project(p, azimuth=math.radians(35), elevation=math.radians(25)):
    x, y, z = p
    ca, sa = math.cos(azimuth), math.sin(azimuth)
    ce, se = math.cos(elevation), math.sin(elevation)
    u = ca * y - sa * x
    depth = sa * y + ca * x
    v = ce * z - se * depth
    return u, v


def sphere_svg(k: float, levels: int = 15, samples: int = 120, size: int = 480) -> str:
    big_r = math.sqrt(2 + k)
    polylines = []
    for i in range(1, levels + 1):
        x = big_r * math.cos(math.pi * i / (levels + 1))
        r = math.sqrt(max(0.0, 2 + k - x * x))
        pts = []
        for j in range(samples + 1):
            phi = 2 * math.pi * j / samples
            pts.append(_project(from_tilde((x, r * math.cos(phi), r * math.sin(phi)))))
        polylines.append(pts)
    extent = max(max(abs(c) for pt in pl for c in pt) for pl in polylines) * 1.1
    scale = size / (2 * extent)

    def fmt(pt):
        return f"{size / 2 + pt[0] * scale:.2f},{size / 2 - pt[1] * scale:.2f}"

    body = "\n".join(
        f'  <polyline fill="none" stroke="black" stroke-width="1" points="{" ".join(fmt(p) for p in pl)}"/>'
        for pl in polylines
    )
    return (
        f'<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">\n'
        f"  <title>level set k = {k}: union of ellipses at fixed x</title>\n"
        f"{body}\n</svg>\n"
    )


def cmd_sphere(args) -> int:
    if not -2 < args.k < 2:
        raise UsageError("sphere needs -2 < k < 2")
    if args.svg:
        _atomic_write(args.svg, sphere_svg(args.k, args.levels))
    if args.csv or not args.svg:
        grid = sphere_grid(args.k, args.n)
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(SPHERE_CSV_HEADER)
        for x, y, z in grid:
            w.writerow([repr(float(x)), repr(float(y)), repr(float(z)),
                        repr(float(boundary_trace((x, y, z))))])
        _emit(buf.getvalue(), args.csv)
    return EXIT_OK


def cmd_cj_search(args) -> int:
    found = search_vanishing(args.max_den)
    out = []
    for c in found:
        m = match_cj(c)
        out.append({"combination": str(c), "equation": m.equation if m else None,
                    "t": str(m.t) if m and m.t is not None else None})
    _emit(_json({"max_den": args.max_den, "results": out}), args.out)
    return EXIT_OK


def cmd_pinpoints(args) -> int:
    pts = pin_points(args.k)
    _emit(_json({"k": args.k, "points": [list(p) for p in pts]}), args.out)
    return EXIT_OK


def cmd_filtration(args) -> int:
    vals = sorted(filtration_Y(args.n, args.max_den), key=float)
    _emit(_json({"n": args.n, "values": [render_exact(v) for v in vals],
                 "floats": [float(v) for v in vals]}), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="charvar", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="Pin(2) / finite / dense verdict for a point")
    p.add_argument("point")
    p.add_argument("--mode", choices=("auto", "exact", "float"), default="auto")
    p.add_argument("--cap", type=int, default=1_000_000)
    p.add_argument("--out")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("orbit", help="dump the exact orbit of a point")
    p.add_argument("point")
    p.add_argument("--cap", type=int, default=1_000_000)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", choices=("table1", "cj", "pin", "filtration"))
    p.add_argument("--max-den", type=int, default=15)
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("density", help="epsilon-coverage of a random twist walk")
    p.add_argument("point")
    p.add_argument("--steps", type=int, default=1_000_000)
    p.add_argument("--epsilon", type=float, default=0.05)
    p.add_argument("--grid", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--backend", choices=("numba", "numpy"))
    p.add_argument("--out")
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("sphere", help="grid or drawing of the level sphere E_k")
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--n", type=int, default=500)
    p.add_argument("--levels", type=int, default=15)
    p.add_argument("--svg")
    p.add_argument("--csv")
    p.set_defaults(func=cmd_sphere)

    p = sub.add_parser("cj-search", help="exhaustive search for vanishing cosine sums")
    p.add_argument("--max-den", type=int, default=15)
    p.add_argument("--out")
    p.set_defaults(func=cmd_cj_search)

    p = sub.add_parser("pinpoints", help="the six Pin(2) points of E_k")
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_pinpoints)

    p = sub.add_parser("filtration", help="the set Y_n of finite-period twist levels")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--max-den", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_filtration)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"charvar: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OrbitInconclusive, ConductorOverflow, KDriftError) as exc:
        print(f"charvar: inconclusive: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE


if __name__ == "__main__":
    sys.exit(main())

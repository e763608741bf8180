import math
from fractions import Fraction

import numpy as np
import pytest

from charvar.character_variety import (
    GENERATORS, TX, TX_INV, TY, TY_INV, PinType, TracePoint, apply_word, boundary_trace,
    classify_pin, ellipse_params, from_tilde, in_E, inverse_word, parse_word, pin_points,
    rational_rotation, rotation_angle, s_canonical, s_equivalence_orbit, tau_x, tau_x_inv,
    tau_y, tau_y_inv, to_tilde,
)
from charvar.cyclotomic import CycloReal, RationalAngle, two_cos

from conftest import random_cosine_point, random_float_point


def _random_su2(rng):
    q = rng.normal(size=4)
    q /= np.linalg.norm(q)
    a, b, c, d = q
    return np.array([[a + 1j * b, c + 1j * d], [-c + 1j * d, a - 1j * b]])


def test_fricke_commutator_trace(rng):
    for _ in range(1000):
        g, h = _random_su2(rng), _random_su2(rng)
        x, y, z = np.trace(g).real, np.trace(h).real, np.trace(g @ h).real
        comm = g @ h @ np.linalg.inv(g) @ np.linalg.inv(h)
        assert abs(np.trace(comm).real - boundary_trace((x, y, z))) < 1e-12


def test_twists_match_matrix_action(rng):
    # tau_X sends (X, Y) to (X, YX): traces (x, z, tr(XYX)) with tr(XYX) = xz - y
    for _ in range(200):
        g, h = _random_su2(rng), _random_su2(rng)
        x, y, z = np.trace(g).real, np.trace(h).real, np.trace(g @ h).real
        hx = h @ g
        want = (x, np.trace(hx).real, np.trace(g @ hx).real)
        assert np.allclose(tau_x((x, y, z)), want, atol=1e-12)


def test_inverse_laws_exact(prng):
    for _ in range(100):
        p = random_cosine_point(prng)
        assert tau_x_inv(tau_x(p)) == p
        assert tau_x(tau_x_inv(p)) == p
        assert tau_y_inv(tau_y(p)) == p
        assert tau_y(tau_y_inv(p)) == p


def test_k_invariance_exact(prng):
    for _ in range(100):
        p = random_cosine_point(prng)
        k = boundary_trace(p)
        for g in GENERATORS:
            assert boundary_trace(apply_word([g], p)) == k


def test_k_invariance_float(rng):
    for _ in range(500):
        p = random_float_point(rng)
        word = rng.choice(len(GENERATORS), size=20)
        q = apply_word([GENERATORS[i] for i in word], p)
        assert abs(boundary_trace(q) - boundary_trace(p)) < 1e-10


def test_twist_fixes_x_and_y():
    p = TracePoint(0.3, -0.7, 1.1)
    assert tau_x(p).x == p.x
    assert tau_y(p).y == p.y


def test_parse_word_forms():
    assert parse_word("X Y^-1 X^3") == (TX, TY_INV, TX, TX, TX)
    assert parse_word("tau_X^{2} tau_Y") == (TX, TX, TY)
    assert parse_word("x*y") == (TX, TY)
    with pytest.raises(ValueError):
        parse_word("X Z")


def test_word_and_inverse(prng):
    p = random_cosine_point(prng)
    w = parse_word("X Y^-2 X^3 Y")
    assert apply_word(inverse_word(w), apply_word(w, p)) == p


@pytest.mark.parametrize("x, period", [(1, 6), (0, 4), (-1, 3)])
def test_rotation_period_exact(prng, x, period):
    for _ in range(10):
        a = Fraction(prng.randint(0, 23), 12)
        b = Fraction(prng.randint(1, 23), 12)
        xv = CycloReal.rational(x)
        # pick y, z on the same sphere by rotating a point of E_{x,k}
        p = TracePoint(xv, two_cos(a), two_cos(b))
        q = p
        for step in range(1, period + 1):
            q = tau_x(q)
            if step < period and p.y != p.z:
                assert q != p
        assert q == p


def test_tilde_change_is_circle(rng):
    for _ in range(200):
        p = random_float_point(rng)
        x, yt, zt = to_tilde(p)
        k = boundary_trace(p)
        assert abs(yt * yt + zt * zt - (2 + k - x * x)) < 1e-9
        assert np.allclose(from_tilde(to_tilde(p)), p, atol=1e-12)


def test_tau_x_is_rotation_in_tilde_coordinates(rng):
    for _ in range(200):
        p = random_float_point(rng)
        before, after = to_tilde(p), to_tilde(tau_x(p))
        r2 = before.y ** 2 + before.z ** 2
        assert abs(after.y ** 2 + after.z ** 2 - r2) < 1e-9
        if r2 > 1e-6:
            cos_turn = (before.y * after.y + before.z * after.z) / r2
            assert abs(cos_turn - math.cos(rotation_angle(p.x))) < 1e-7


def test_tilde_rejects_boundary():
    with pytest.raises(ValueError):
        to_tilde((2.0, 1.0, 1.0))


def test_ellipse_params():
    e = ellipse_params(1.0, 1.0)
    assert not e.empty and not e.degenerate
    assert ellipse_params(1.9, -1.0).empty
    assert ellipse_params(2.0, 2.0).degenerate


def test_rational_rotation():
    assert rational_rotation(CycloReal.rational(1)) == RationalAngle(1, 3)
    assert rational_rotation(CycloReal.rational(Fraction(1, 2))) is None
    with pytest.raises(TypeError):
        rational_rotation(0.5)


def test_s_orbit_size_and_closure(prng):
    p = TracePoint(*(two_cos(Fraction(n, 7)) for n in (1, 2, 3)))
    orbit = s_equivalence_orbit(p, True)
    assert len(orbit) == 24
    for q in orbit:
        assert s_equivalence_orbit(q, True) == orbit
        assert boundary_trace(q) == boundary_trace(p)
    assert len(s_equivalence_orbit(p, False)) == 6


def test_s_canonical_is_class_invariant(prng):
    for _ in range(20):
        p = random_cosine_point(prng)
        c = s_canonical(p)
        assert all(s_canonical(q) == c for q in s_equivalence_orbit(p))


def test_classify_pin():
    assert classify_pin(TracePoint(0.0, 0.0, 1.2)) is PinType.PIN2
    assert classify_pin(TracePoint(2.0, 2.0, 2.0)) is PinType.SPIN2
    assert classify_pin(TracePoint(1.0, 1.0, 1.0)) is PinType.NEITHER
    exact = TracePoint(*(CycloReal.rational(v) for v in (0, 0, 1)))
    assert classify_pin(exact) is PinType.PIN2


@pytest.mark.parametrize("k", np.linspace(-1.9, 1.9, 9))
def test_pin_points(k):
    pts = pin_points(k)
    assert len(set(pts)) == 6
    for p in pts:
        assert abs(boundary_trace(p) - k) < 1e-12
        assert classify_pin(p) is PinType.PIN2


def test_pin_points_range():
    with pytest.raises(ValueError):
        pin_points(2.0)


def test_in_E():
    assert in_E((1.0, 1.0, 1.0))
    assert not in_E((3.0, 0.0, 0.0))
    assert not in_E((-2.0, -2.0, -2.0))

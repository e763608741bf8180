import itertools
import math
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from charvar.character_variety import TracePoint, boundary_trace
from charvar.cyclotomic import two_cos
from charvar.diophantine import (
    DEFAULT_COEFFS, RATIONAL_IDENTITIES, VANISHING_IDENTITIES, CosineCombination, cancellation_implies_k2, match_cj,
    normalize, parametric_instance, search_vanishing, tau_x_equation, tau_y_equation,
    verify_cj_lists,
)
from charvar.quaternion_groups import table1_points

# frozen from a brute-force float enumeration over every subset and coefficient vector
SEARCH_10 = {
    ((F(1, 9), F(1)), (F(2, 9), F(-1)), (F(4, 9), F(-1))),
    ((F(1, 5), F(1)), (F(1, 3), F(-1)), (F(2, 5), F(-1))),
    ((F(1, 7), F(1)), (F(2, 7), F(-1)), (F(1, 3), F(-1)), (F(3, 7), F(1))),
}

combos = st.lists(
    st.tuples(st.sampled_from([1, -1, F(1, 2), 2, F(-3, 2)]),
              st.builds(F, st.integers(-30, 30), st.integers(1, 12))),
    min_size=1, max_size=5,
)


def _key(c):
    lead = c.terms[0].coeff
    return tuple((t.angle, t.coeff / lead) for t in c.terms)


def _brute_force(max_den, tol=1e-12):
    angles = sorted({F(p, q) for q in range(1, max_den + 1) for p in range(1, q) if F(p, q) < F(1, 2)})
    cos = {a: math.cos(math.pi * a) for a in angles}

    def vanishes(sub):
        return any(abs(sum(float(c) * cos[a] for c, a in zip(cv, sub))) < tol
                   for cv in itertools.product(DEFAULT_COEFFS, repeat=len(sub)))

    out = set()
    for size in range(2, 5):
        for sub in itertools.combinations(angles, size):
            for cv in itertools.product(DEFAULT_COEFFS, repeat=size):
                if abs(sum(float(c) * cos[a] for c, a in zip(cv, sub))) >= tol:
                    continue
                if any(vanishes(s) for r in range(1, size) for s in itertools.combinations(sub, r)):
                    continue
                out.add(tuple((a, c / cv[0]) for a, c in zip(sub, cv)))
    return out


def test_identity_lists_hold_exactly():
    checks = verify_cj_lists()
    assert all(c.passed for c in checks), [c.name for c in checks if not c.passed]
    assert len([c for c in checks if c.name.startswith("rational")]) >= 9 + 3
    for eq in VANISHING_IDENTITIES.values():
        assert eq.value().is_zero()


def test_rational_list_values():
    for c in RATIONAL_IDENTITIES:
        if c is not None:
            assert abs(c.float_value()) < 1e-12


@pytest.mark.parametrize("t", [F(1, 30), F(1, 20), F(1, 7), F(2, 13)])
def test_parametric_family(t):
    assert parametric_instance(t).value().is_zero()


@settings(max_examples=200, deadline=None)
@given(combos)
def test_normalize_preserves_value(pairs):
    c = CosineCombination.of(pairs)
    n = normalize(c)
    assert n.value() == c.value()
    assert all(0 < t.angle < F(1, 2) for t in n.terms)
    assert len({t.angle for t in n.terms}) == len(n.terms)


def test_normalize_moves_cos_zero():
    n = normalize(CosineCombination.of([(1, 0), (2, 2), (3, F(1, 2)), (2, F(3, 2))]))
    assert n.terms == ()
    assert n.rhs == -3
    n = normalize(CosineCombination.of([(1, F(2, 3)), (1, F(-1, 3))]))
    assert n.terms == ()
    assert n.rhs == 0
    n = normalize(CosineCombination.of([(1, F(5, 7))]))
    assert [(t.angle, t.coeff) for t in n.terms] == [(F(2, 7), -1)]


def test_search_matches_brute_force_oracle():
    assert {_key(c) for c in search_vanishing(7)} == _brute_force(7)


def test_search_frozen_result():
    assert {_key(c) for c in search_vanishing(10)} == SEARCH_10


def test_search_invariants():
    for c in search_vanishing(15):
        assert c.value().is_zero()
        assert c.terms[0].coeff == 1
        angles = c.angles()
        assert len(set(angles)) == len(angles)
        assert all(0 < a < F(1, 2) and a.denominator <= 15 for a in angles)
        m = match_cj(c)
        assert m is not None and m.equation is not None


def test_search_rejects_large_denominator():
    with pytest.raises(ValueError):
        search_vanishing(31)


def test_match_cj():
    for eq, c in VANISHING_IDENTITIES.items():
        assert match_cj(c).equation == eq
        scaled = CosineCombination.of([(2 * t.coeff, t.angle) for t in c.terms])
        assert match_cj(scaled).equation == eq
    m = match_cj(parametric_instance(F(1, 10)))
    assert m.equation == 1 and m.t == F(1, 10)
    assert match_cj(CosineCombination.of([(1, F(1, 5))])) is None
    zero = CosineCombination.of([(1, F(1, 5)), (-1, F(9, 5))])
    assert match_cj(zero).degenerate


def test_match_cj_on_twist_equations():
    # (4pi/15, 2pi/5, pi/15) gives a combination outside every listed relation
    eq = tau_y_equation(F(4, 15), F(2, 5), F(1, 15))
    assert eq.fourth_angle is None
    assert match_cj(eq.combination) is None
    # row 2 of the finite-orbit table: every coordinate is 2cos(pi/3)
    eq = tau_x_equation(F(1, 3), F(1, 3), F(1, 3))
    assert eq.fourth_angle is not None
    assert eq.full_combination().value().is_zero()


def _cancellation_instance(rng):
    while True:
        q = rng.randint(2, 20)
        a = F(rng.randint(1, 2 * q - 1), q)
        c = F(rng.randint(1, 39), rng.randint(2, 20))
        b = a + c if rng.random() < 0.5 else a - c
        vals = [two_cos(a), two_cos(b), two_cos(c)]
        if any(v.is_zero() for v in vals):
            continue
        perm = rng.choice(list(itertools.permutations(range(3))))
        return TracePoint(*(vals[i] for i in perm))


def test_cancellation_forces_k2():
    rng = random.Random(7)
    for _ in range(150):
        p = _cancellation_instance(rng)
        tag = cancellation_implies_k2(p)
        assert tag is not None
        assert boundary_trace(p) == 2


def test_no_cancellation_on_table_rows():
    for p in table1_points():
        assert cancellation_implies_k2(p) is None


def test_cancellation_skips_irrational_and_zero():
    assert cancellation_implies_k2((F(1, 2), F(1, 2), F(1, 2))) is None
    assert cancellation_implies_k2((0, 1, 1)) is None

"""Exact and numerical tools for the SU(2) character variety of the
one-holed torus: trace coordinates, the twist action, finite orbits from
binary polyhedral groups, and vanishing cosine sums."""

__version__ = "0.1.0"

from .cyclotomic import (
    ConductorOverflow, CycloReal, RationalAngle, as_two_cos, cyclotomic_polynomial,
    get_conductor_cap, set_conductor_cap, two_cos,
)
from .character_variety import (
    PinType, TracePoint, apply_word, boundary_trace, classify_pin, from_tilde, parse_word,
    pin_points, s_canonical, s_equivalence_orbit, tau_x, tau_x_inv, tau_y, tau_y_inv, to_tilde,
)
from .quaternion_groups import (
    Quaternion, binary_icosahedral, binary_octahedral, enumerate_rep_classes, verify_table1,
    word_eval,
)
from .diophantine import (
    CosineCombination, cancellation_implies_k2, match_cj, normalize, search_vanishing,
    verify_cj_lists,
)
from .orbit_engine import (
    Classification, KDriftError, OrbitInconclusive, Verdict, classify, epsilon_density,
    exact_orbit, filtration_Y, float_orbit, sphere_grid,
)

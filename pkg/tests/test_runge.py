import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rungepairs import corpus
from rungepairs.corpus import XorShift64Star, annulus_K, reciprocal
from rungepairs.domain import Annulus, Disc, Plane, difference, rasterize
from rungepairs.errors import EquivalenceViolation, NotNested, NotRunge
from rungepairs.homology import analyze
from rungepairs.planar import H1Class, cycle_from_class
from rungepairs.quaternion import ONE, QI, QJ, Quaternion
from rungepairs.runge import (THETA, Circle, best_polynomial, criterion_v, criterion_vi, obstruction_lower_bound,
                              plan_routes, pole_push, quaternionic_approx, runge_decide, series_tail,
                              shift_order, sup_error)
from rungepairs.stem import ComplexRational, RationalStem


def g(spec, res=129):
    return rasterize(spec, None, res)


@pytest.fixture(scope="module")
def pairs():
    return {k: (g(a), g(b)) for k, (a, b) in corpus.fixture_pairs().items()}


def test_criterion_v_examples(pairs):
    ok, bad = criterion_v(*pairs["punctured-plane"])
    assert not ok and len(bad) == 1
    D = pairs["punctured-plane"][0]
    assert analyze(D).atlas.rep_point(bad[0]) == 0
    assert criterion_v(*pairs["plane-minus-axis"])[0]
    assert criterion_v(*pairs["annulus-shifted-puncture"])[0]


def test_criterion_vi_examples(pairs):
    D = pairs["off-axis-pair"][0]
    assert criterion_vi(D, D)[0]
    assert not criterion_vi(*pairs["punctured-plane"])[0]
    # both conjugate holes keep a core outside D1
    assert criterion_vi(*pairs["off-axis-pair"])[0]
    assert not criterion_vi(*pairs["off-axis-pair-filled"])[0]


@pytest.mark.parametrize("name,runge", [
    ("punctured-plane", False), ("plane-minus-axis", True), ("disc-exterior", True),
    ("annulus-punctured-disc", True), ("annulus-shifted-puncture", True),
    ("off-axis-pair", True), ("off-axis-pair-filled", False),
])
def test_decide_fixtures(pairs, name, runge):
    rep = runge_decide(*pairs[name])
    assert rep.consistent and rep.runge == runge
    if not runge:
        assert set(rep.witnesses) >= {"iii", "iv", "v", "vi"}


def test_decide_same_domain(pairs):
    D = pairs["off-axis-pair"][0]
    assert runge_decide(D, D).runge


def test_h3_witness_for_punctured_space(pairs):
    rep = runge_decide(*pairs["punctured-plane"])
    assert rep.witnesses["iv"]["h3"] is not None


def test_not_nested(pairs):
    D, D1 = pairs["punctured-plane"]
    with pytest.raises(NotNested):
        runge_decide(D1, D)


def test_refinement_never_loses_runge():
    for name, (a, b) in corpus.fixture_pairs().items():
        verdicts = [runge_decide(g(a, r), g(b, r)).runge for r in (65, 129, 257)]
        for lo, hi in zip(verdicts, verdicts[1:]):
            assert not (lo and not hi), name


def test_series_tail():
    # sum_{n>=3} 0.5^n = 0.25
    assert series_tail(1, 3, 0.5) == pytest.approx(0.25)
    for k, n0, rho in ((2, 0, 0.5), (3, 4, 0.7), (5, 0, 0.2), (4, 40, 0.9)):
        exact = sum(math.comb(n + k - 1, k - 1) * rho ** n for n in range(n0, 5000))
        bound = series_tail(k, n0, rho)
        assert exact * (1 - 1e-12) <= bound <= 2.5 * exact


def test_shift_order_against_direct_remainder():
    """The truncated re-expansion of 1/(z-a) about b stays within the budget on |z-b| >= R."""
    a, b, R = 0.0, 0.3, 1.0
    budget = 1e-8
    n, bound = shift_order({1: 1.0}, a - b, R, budget, 500)
    assert bound <= budget
    w = b + R * np.exp(1j * np.linspace(0, 2 * np.pi, 400))
    d = a - b
    approx = sum(d ** k / (w - b) ** (k + 1) for k in range(n))
    assert np.max(np.abs(1 / (w - a) - approx)) <= budget * (1 + 1e-9)


def test_pole_push_to_puncture(pairs):
    D, D1 = g(corpus.annulus_domain(), 257), g(corpus.punctured_big_disc(0.5, 0.25), 257)
    K = annulus_K(D)
    h, res = pole_push(reciprocal(), D, D1, K, 1e-6)
    assert res.success and res.achieved <= 1e-6 and res.total_degree <= 200
    assert res.plan.check(D.centers()[K])
    # independent check at points of the ring that are not cell centres
    t = np.linspace(0, 2 * np.pi, 997)
    for r in (1.3, 1.5, 1.7):
        z = r * np.exp(1j * t)
        assert np.max(np.abs(1 / z - h(z))) <= 1e-6
    for p in h.pole_locations:
        assert not D1.inside[D1.cell_of(p)]


def test_polynomial_is_untouched(pairs):
    D, D1 = pairs["annulus-shifted-puncture"]
    f = ComplexRational.polynomial([1, 2, 3], symmetric=True)
    h, res = pole_push(f, D, D1, annulus_K(D), 1e-6)
    assert res.achieved == 0 and h.distance_to(f) == 0


def test_push_to_infinity():
    D = g(Disc(0j, 3.0))
    D1 = g(Plane())
    f = ComplexRational.simple_pole(3.5 + 0j).with_symmetric_flag()
    K = (np.abs(D.centers()) <= 2.0) & D.inside
    h, res = pole_push(f, D, D1, K, 1e-6)
    assert res.success and not h.pole_locations
    assert res.plan.routes[0].disposition == "infinity"
    assert res.plan.check(D.centers()[K])


def test_conjugate_poles_and_nonsymmetric_input():
    D = g(corpus.off_axis_pair_domain())
    D1 = g(corpus.off_axis_pair_partial_fill())
    K = (np.abs(D.centers()) <= 2.5) & (np.abs(np.abs(D.centers().imag) - 1) > 0.7) & D.inside
    f = ComplexRational((), ((1.3j, 1, 1.0), (-1.3j, 1, 1.0)), True)
    h, res = pole_push(f, D, D1, K, 1e-5)
    assert res.success
    assert h.is_conjugation_closed(1e-9)
    routes = res.plan.routes
    assert routes[0].waypoints == [w.conjugate() for w in routes[1].waypoints]
    h2, res2 = pole_push(ComplexRational.simple_pole(1.3j), D, D1, K, 1e-5)
    assert res2.success


def test_not_runge_push(pairs):
    D, D1 = pairs["punctured-plane"]
    K = annulus_K(D, 0.5, 1.5)
    with pytest.raises(NotRunge):
        pole_push(reciprocal(), D, D1, K, 1e-6)


def test_quaternionic_approx(pairs):
    D, D1 = pairs["annulus-shifted-puncture"]
    K = annulus_K(D)
    F = RationalStem(((reciprocal(), QJ), (ComplexRational.polynomial([0, 1], True), ONE)))
    G, res = quaternionic_approx(F, D, D1, K, 1e-5)
    assert res.success
    assert res.achieved <= 1e-5 and res.achieved_quaternionic <= math.sqrt(2) * 1e-5
    poly = RationalStem(((ComplexRational.polynomial([1, 1], True), QI),))
    _, res = quaternionic_approx(poly, D, D1, K, 1e-5)
    assert res.achieved == 0 and res.achieved_quaternionic == 0


def test_symmetric_pole_pair_stem():
    D = g(corpus.off_axis_pair_domain())
    D1 = g(corpus.off_axis_pair_partial_fill())
    K = (np.abs(D.centers()) <= 2.5) & (np.abs(np.abs(D.centers().imag) - 1) > 0.7) & D.inside
    r = ComplexRational((), ((1j, 1, 0.5 - 0.2j), (-1j, 1, 0.5 + 0.2j)), True)
    F = RationalStem(((r, Quaternion(0.3, -1, 0.5, 2)),))
    _, res = quaternionic_approx(F, D, D1, K, 1e-5)
    assert res.success and res.achieved_quaternionic <= math.sqrt(2) * 1e-5


def test_obstruction_examples():
    c = Circle(0j, 1.0)
    for deg in (0, 3, 20):
        rng = XorShift64Star(deg)
        p = ComplexRational(tuple(complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(deg + 1)))
        assert obstruction_lower_bound(reciprocal(), c, p) == pytest.approx(1.0, abs=1e-12)
    assert obstruction_lower_bound(reciprocal(), c, reciprocal()) == 0
    assert obstruction_lower_bound(reciprocal().scale(2), c) == pytest.approx(2.0, abs=1e-12)


def test_obstruction_is_a_lower_bound():
    """|mean of (f-g) dz| never exceeds the sup of |f - g| on the contour."""
    c = Circle(0.1 + 0.2j, 1.3)
    f = reciprocal()
    pts = 1.3 * np.exp(1j * np.linspace(0, 2 * np.pi, 300)) + 0.1 + 0.2j
    for deg in (1, 5, 15):
        p = best_polynomial(f, pts, deg)
        lb = obstruction_lower_bound(f, c, p)
        assert lb <= sup_error(f, p, pts) * (1 + 1e-9) + 1e-12


def test_obstruction_on_grid_cycle(pairs):
    D, _ = pairs["punctured-plane"]
    atlas = analyze(D).atlas
    (c,) = atlas.bounded_ids
    gamma = cycle_from_class(D, atlas, H1Class(((c, 1),)))
    pts = D.centers()[annulus_K(D, 0.5, 1.5)]
    p = best_polynomial(reciprocal(), pts, 50)
    # the polynomial integrates to zero, so the bound is 2 pi over the contour length
    assert obstruction_lower_bound(reciprocal(), gamma, p) == pytest.approx(2 * math.pi / gamma.length(), rel=1e-6)


def test_plan_routes_mirror_and_kept():
    D = g(corpus.off_axis_pair_domain())
    D1 = g(corpus.off_axis_pair_partial_fill())
    K = (np.abs(D.centers()) <= 2.5) & (np.abs(np.abs(D.centers().imag) - 1) > 0.7) & D.inside
    f = ComplexRational((), ((1j, 1, 1.0), (-1j, 1, 1.0)), True)
    plan = plan_routes(f, D, D1, K, THETA)
    assert all(r.disposition == "kept" for r in plan.routes)


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 2 ** 32))
def test_success_means_within_eps(seed):
    """Whenever a push reports success, an independent resampling agrees."""
    rng = XorShift64Star(seed)
    D, D1 = g(corpus.annulus_domain()), g(corpus.punctured_big_disc(rng.uniform(-0.5, 0.5), 0.2))
    x = rng.uniform(-0.6, 0.6)
    f = ComplexRational((), ((complex(x, 0), rng.randint(1, 2), rng.uniform(0.5, 2)),), True)
    K = annulus_K(D)
    eps = 10 ** -rng.randint(3, 6)
    try:
        h, res = pole_push(f, D, D1, K, eps)
    except NotRunge:
        return
    if res.success:
        assert sup_error(f, h, D.centers()[K]) <= eps

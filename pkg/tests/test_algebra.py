import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import liouville.algebra as alg
from liouville.algebra import DomainError, SystemParams

TODA = SystemParams(tau=0.5, bigN=1.0)

# ranges keep the flux values O(10) so absolute residual tolerances apply
taus = st.floats(min_value=1e-3, max_value=0.9, allow_nan=False)
bigNs = st.floats(min_value=0.05, max_value=3.0, allow_nan=False)
wideNs = st.floats(min_value=1e-3, max_value=10.0, allow_nan=False)


def params_grid():
    return [
        SystemParams(tau, N)
        for tau in (0.05, 0.15, 0.3, 0.45, 0.5, 0.55, 0.62, 0.8, 0.95)
        for N in (0.3, 1.0, 2.5)
    ]


def test_system_params_validation():
    with pytest.raises(DomainError):
        SystemParams(tau=1.2, bigN=1.0)  # coupling interval is (0, 1)
    with pytest.raises(DomainError):
        SystemParams(tau=-0.1, bigN=1.0)
    with pytest.raises(DomainError):
        SystemParams(tau=0.5, bigN=0.0)
    SystemParams(tau=0.0, bigN=1.0)  # oracle mode is admitted


def test_discriminant_values():
    assert alg.discriminant(TODA) == pytest.approx(7.0, abs=0)
    assert alg.discriminant(SystemParams(0.0, 1.0)) == pytest.approx(5.0, abs=0)


@given(tau=taus, bigN=wideNs)
def test_discriminant_exceeds_square(tau, bigN):
    p = SystemParams(tau, bigN)
    assert alg.discriminant(p) > (bigN + 1.0) ** 2


def test_ellipse_residual_examples():
    assert alg.ellipse_residual(12.0, 12.0, TODA) == pytest.approx(0.0, abs=1e-12)
    assert alg.ellipse_residual(0.0, 0.0, TODA) == 0.0
    assert alg.ellipse_residual(1.0, 1.0, TODA) == pytest.approx(-11.0, abs=1e-12)


@given(tau=taus, bigN=bigNs)
def test_axis_intersections_on_ellipse(tau, bigN):
    p = SystemParams(tau, bigN)
    n1 = bigN + 1.0
    bs1, bs2 = alg.beta_star(p)
    assert abs(alg.ellipse_residual(4.0 * n1, bs2, p)) <= 1e-9
    assert abs(alg.ellipse_residual(bs1, 4.0, p)) <= 1e-9


def test_named_points_on_ellipse():
    for p in params_grid():
        n1 = p.bigN + 1.0
        bs1, bs2 = alg.beta_star(p)
        bss1, bss2 = alg.beta_starstar(p)
        bu1, bo1, bu2, bo2 = alg.beta_extremes(p)
        for b1, b2 in [(4.0 * n1, bs2), (bs1, 4.0), (bss1, bs2), (bs1, bss2),
                       (bu1, bo2), (bo1, bu2)]:
            assert abs(alg.ellipse_residual(b1, b2, p)) <= 1e-9, (p, b1, b2)


def test_beta_extremes_values():
    bu1, bo1, bu2, bo2 = alg.beta_extremes(TODA)
    s7 = math.sqrt(7.0)
    assert bo1 == pytest.approx((8.0 / 3.0) * (2.5 + s7), rel=1e-14)
    assert bu1 == pytest.approx((8.0 / 3.0) * (2.5 + 0.5 * s7), rel=1e-14)
    assert bu1 < 12.0 < bo1  # fixed-point flux sits strictly inside
    assert bu1 < bo1 and bu2 < bo2
    assert bo1 > 8.0 and bo2 > 4.0


def test_branch_values_at_extremes():
    # the radicand has a simple zero at the arc extreme, so double precision
    # delivers only ~sqrt(eps * scale) there
    for p in params_grid():
        bu1, bo1, bu2, bo2 = alg.beta_extremes(p)
        assert alg.phi1(bo1, p, "plus") == pytest.approx(bu2, abs=1e-5)
        assert alg.phi1(bo1, p, "minus") == pytest.approx(bu2, abs=1e-5)
        assert alg.phi2(bo2, p, "plus") == pytest.approx(bu1, abs=1e-5)


def test_beta_under_hits_corner_at_tau0():
    for N in (0.3, 1.0, 2.5, 7.0):
        t01, _ = alg.tau0(N)
        bu1 = alg.beta_extremes(SystemParams(t01, N))[0]
        assert bu1 == pytest.approx(4.0 * (N + 1.0), abs=1e-9)


def test_phi_values():
    assert alg.phi1(12.0, TODA, "plus") == pytest.approx(12.0, abs=1e-12)
    # below the lower critical coupling the plus branch maps the corner to
    # the axis intersection
    p = SystemParams(0.2, 1.0)
    assert p.tau < alg.tau0(1.0)[0]
    bs2 = alg.beta_star(p)[1]
    assert alg.phi1(8.0, p, "plus") == pytest.approx(bs2, rel=1e-12)


def test_phi_domain_error():
    bo1 = alg.beta_extremes(TODA)[1]
    with pytest.raises(DomainError, match="admissible interval"):
        alg.phi1(bo1 + 1.0, TODA, "plus")
    with pytest.raises(DomainError, match="sign"):
        alg.phi1(10.0, TODA, "either")


def test_phi_roundtrip_interior():
    # endpoints are square-root branch points where doubles cannot reach
    # 1e-12; asserted on the closed sub-interval [2%, 98%] instead
    for p in params_grid():
        bu1, bo1, _, _ = alg.beta_extremes(p)
        for s in np.linspace(0.02, 0.98, 25):
            x = bu1 + s * (bo1 - bu1)
            back = alg.phi2(alg.phi1(x, p, "plus"), p, "plus")
            assert abs(back - x) <= 1e-12 * (1.0 + abs(x)), (p, x)


def test_phi_monotonicity():
    for p in params_grid():
        bu1, bo1, _, _ = alg.beta_extremes(p)
        xs = np.linspace(bu1, bo1, 40)
        plus = [alg.phi1(float(x), p, "plus") for x in xs]
        assert all(b < a for a, b in zip(plus, plus[1:]))
        xs = np.linspace(4.0 * (p.bigN + 1.0), bo1, 40)
        minus = [alg.phi1(float(x), p, "minus") for x in xs]
        assert all(b > a for a, b in zip(minus, minus[1:]))


def test_beta_star_values():
    assert alg.beta_star(TODA) == pytest.approx((12.0, 12.0), abs=1e-12)
    assert alg.beta_starstar(TODA) == pytest.approx((12.0, 12.0), abs=1e-12)
    p = SystemParams(0.15, 1.0)
    assert alg.beta_star(p) == pytest.approx((9.2, 6.4), rel=1e-14)


@given(tau=taus, bigN=wideNs)
def test_companion_below_star_iff_subcritical(tau, bigN):
    p = SystemParams(tau, bigN)
    bs = alg.beta_star(p)
    bss = alg.beta_starstar(p)
    for i in range(2):
        if tau < 0.5:
            assert bss[i] < bs[i]
        elif tau > 0.5:
            assert bss[i] > bs[i]


def test_tau0_values():
    t01, t02 = alg.tau0(1.0)
    assert t01 == pytest.approx(2.0 / (1.0 + math.sqrt(17.0)), rel=1e-14)
    assert t02 == pytest.approx(1.0 / (2.0 + math.sqrt(8.0)), rel=1e-14)


@given(bigN=wideNs)
def test_tau0_characterizations(bigN):
    t01, t02 = alg.tau0(bigN)
    bss1 = alg.beta_starstar(SystemParams(t01, bigN))[0]
    assert abs(bss1 - 4.0 * (bigN + 1.0)) <= 1e-10
    bss2 = alg.beta_starstar(SystemParams(t02, bigN))[1]
    assert abs(bss2 - 4.0) <= 1e-10


def test_cubic_bracket_values():
    for N in (0.3, 1.0, 4.0):
        assert alg.psi1(0.5, N) == pytest.approx(N + 1.0, rel=1e-14)
        assert alg.psi1(1.0 / math.sqrt(2.0), N) == pytest.approx(-1.0, abs=1e-12)
        assert alg.psi2(0.5, N) == pytest.approx(1.0, abs=1e-12)
        assert alg.psi2(1.0 / math.sqrt(2.0), N) == pytest.approx(-(N + 1.0), abs=1e-12)


def test_tau1_values():
    # frozen from a separate bisection of the two cubics
    t11, t12 = alg.tau1(1.0)
    assert t11 == pytest.approx(0.6566, abs=1e-3)
    assert t12 == pytest.approx(0.5851, abs=1e-3)
    assert abs(alg.psi1(t11, 1.0)) < 1e-10
    assert abs(alg.psi2(t12, 1.0)) < 1e-10


@given(bigN=wideNs)
@settings(max_examples=60)
def test_coupling_ordering_chain(bigN):
    t01, t02 = alg.tau0(bigN)
    t11, t12 = alg.tau1(bigN)
    assert 0.0 < t02 < t01 < 0.5 < t12 < t11 < 1.0 / math.sqrt(2.0)


@given(bigN=wideNs)
@settings(max_examples=40)
def test_tau1_characterizations(bigN):
    t11, t12 = alg.tau1(bigN)
    p1 = SystemParams(t11, bigN)
    assert abs(alg.beta_star(p1)[1] - t11 * alg.beta_starstar(p1)[0] - 2.0) <= 1e-9
    p2 = SystemParams(t12, bigN)
    assert abs(
        alg.beta_star(p2)[0] - t12 * alg.beta_starstar(p2)[1] - 2.0 * (bigN + 1.0)
    ) <= 1e-9


def test_beta_pm_examples():
    assert alg.beta_pm(TODA) == pytest.approx((12.0, 12.0, 12.0, 12.0), abs=1e-12)
    assert alg.beta_pm(SystemParams(0.15, 1.0)) == pytest.approx(
        (8.0, 9.2, 4.0, 6.4), rel=1e-14
    )
    # at large couplings the interval fills the whole arc
    t11, _ = alg.tau1(1.0)
    p = SystemParams(0.8, 1.0)
    assert p.tau > t11
    bu1, bo1, _, _ = alg.beta_extremes(p)
    bm1, bp1, _, _ = alg.beta_pm(p)
    assert (bm1, bp1) == pytest.approx((bu1, bo1), rel=1e-14)


def test_beta_pm_needs_positive_tau():
    with pytest.raises(DomainError):
        alg.beta_pm(SystemParams(0.0, 1.0))
    with pytest.raises(DomainError):
        alg.beta_limits(SystemParams(0.0, 1.0))


def test_beta_pm_ordering():
    for p in params_grid():
        if p.tau == 0.5:
            continue
        bu1, bo1, bu2, bo2 = alg.beta_extremes(p)
        bm1, bp1, bm2, bp2 = alg.beta_pm(p)
        n1 = p.bigN + 1.0
        assert max(4.0 * n1, bu1) <= bm1 + 1e-12 and bm1 < bp1 <= bo1 + 1e-12
        assert max(4.0, bu2) <= bm2 + 1e-12 and bm2 < bp2 <= bo2 + 1e-12


def test_beta_pm_continuity_at_breakpoints():
    eps = 1e-12
    for N in (0.3, 1.0, 2.5):
        t01, t02 = alg.tau0(N)
        t11, t12 = alg.tau1(N)
        for bp in (t01, t02, 0.5, t11, t12):
            left = alg.beta_pm(SystemParams(bp - eps, N))
            right = alg.beta_pm(SystemParams(bp + eps, N))
            for a, b in zip(left, right):
                assert abs(a - b) <= 1e-9, (N, bp)
            left = alg.beta_limits(SystemParams(bp - eps, N))
            right = alg.beta_limits(SystemParams(bp + eps, N))
            for a, b in zip(left, right):
                assert abs(a - b) <= 1e-9, (N, bp)


def test_interval_collapses_at_fixed_point():
    for tau in (0.5 - 1e-6, 0.5 + 1e-6):
        bm1, bp1, bm2, bp2 = alg.beta_pm(SystemParams(tau, 1.0))
        assert bp1 - bm1 <= 1e-3
        assert bp2 - bm2 <= 1e-3


def test_beta_limits_examples():
    assert alg.beta_limits(SystemParams(0.15, 1.0)) == pytest.approx(
        (8.0, 6.4, 9.2, 4.0), rel=1e-14
    )
    assert alg.beta_limits(TODA) == pytest.approx((12.0,) * 4, abs=1e-12)


def test_limits_recombine_to_interval_bounds():
    rng = np.random.default_rng(1234)
    for _ in range(200):
        tau = float(rng.uniform(1e-3, 0.999))
        N = float(rng.uniform(1e-2, 8.0))
        p = SystemParams(tau, N)
        bl1p, bl2p, bl1m, bl2m = alg.beta_limits(p)
        bm1, bp1, bm2, bp2 = alg.beta_pm(p)
        assert min(bl1p, bl1m) == pytest.approx(bm1, rel=1e-12)
        assert max(bl1p, bl1m) == pytest.approx(bp1, rel=1e-12)
        assert min(bl2p, bl2m) == pytest.approx(bm2, rel=1e-12)
        assert max(bl2p, bl2m) == pytest.approx(bp2, rel=1e-12)


def test_limits_lie_on_branch():
    for p in params_grid():
        if p.tau == 0.5:
            continue
        bl1p, bl2p, bl1m, bl2m = alg.beta_limits(p)
        assert alg.phi1(bl1p, p, "plus") == pytest.approx(bl2p, rel=1e-6)
        assert alg.phi1(bl1m, p, "plus") == pytest.approx(bl2m, rel=1e-6)


def test_classify_point():
    assert alg.classify_point(12.0, 12.0, TODA) == "interior"
    bu1, bo1, bu2, bo2 = alg.beta_extremes(TODA)
    assert alg.classify_point(bo1, bu2, TODA) == "lower-right"
    assert alg.classify_point(bu1, bo2, TODA) == "lower-left"
    assert alg.classify_point(1.0, 1.0, TODA) == "off-ellipse"


def test_solvable_radial_midrange():
    p = SystemParams(0.15, 1.0)
    # value rounded to five figures needs the matching tolerance
    rep = alg.solvable_radial(8.6, 5.6699, p, tol=1e-4)
    assert rep.solvable and not rep.near_endpoint
    exact = alg.phi1(8.6, p, "plus")
    assert alg.solvable_radial(8.6, exact, p).solvable
    # open endpoint is excluded
    bs2 = alg.beta_star(p)[1]
    rep = alg.solvable_radial(8.0, bs2, p, tol=1e-4)
    assert not rep.solvable
    assert any(c.name == "beta1_above_lower" for c in rep.failed())


def test_solvable_radial_fixed_point():
    rep = alg.solvable_radial(12.0, 12.0, TODA)
    assert rep.solvable
    assert not alg.solvable_radial(12.1, 12.0, TODA).solvable


def test_solvable_radial_near_endpoint_flag():
    p = SystemParams(0.15, 1.0)
    b1 = 8.0 + 1e-9
    rep = alg.solvable_radial(b1, alg.phi1(b1, p, "plus"), p)
    assert rep.near_endpoint


def test_necessary_conditions_margins():
    rep = alg.necessary_conditions(12.0, 12.0, TODA)
    assert rep.all_passed
    assert rep["slope_1"].margin == pytest.approx(2.0, abs=1e-12)
    assert rep["slope_2"].margin == pytest.approx(4.0, abs=1e-12)
    assert rep["radial_1"].margin == pytest.approx(4.0, abs=1e-12)
    assert rep["radial_2"].margin == pytest.approx(8.0, abs=1e-12)


def test_necessary_conditions_corner_fails_strictly():
    p = SystemParams(0.2, 1.0)
    bs2 = alg.beta_star(p)[1]
    rep = alg.necessary_conditions(8.0, bs2, p)
    assert not rep["radial_1"].passed
    assert rep["radial_1"].margin == pytest.approx(0.0, abs=1e-12)


def test_necessary_conditions_decoupled_tau_fails():
    rep = alg.necessary_conditions(8.0, 4.0, SystemParams(0.0, 1.0))
    assert not rep["tau_interior"].passed


def test_thresholds_assembly():
    ts = alg.thresholds(SystemParams(0.15, 1.0))
    assert ts.beta_minus_1 == 8.0 and ts.beta_plus_1 == pytest.approx(9.2)
    assert ts.D == pytest.approx(alg.discriminant(SystemParams(0.15, 1.0)))
    d = ts.to_dict()
    assert set(d) == set(ts.__dataclass_fields__)
    ts_toda = alg.thresholds(TODA)
    assert ts_toda.beta_minus_1 == ts_toda.beta_plus_1 == pytest.approx(12.0)

import math

import numpy as np
import pytest

from rpif import (
    MODE_DERIVED,
    MODE_LITERAL,
    RpifError,
    auxiliary_angles,
    decompose,
    intensity,
    phase_difference,
    reduced_interference,
    term_i1,
    term_i2,
    term_i3,
    term_i4,
    term_i5,
)
from rpif.interference import _literal_terms, _nd
from rpif.sampling import random_scenario
from rpif.timefunctions import ConstantFunction, PolynomialFunction
from util import make_scenario


def _theta_derived(delta, m=1.0, hbar=1.0, T=1.0):
    return math.sqrt(2.0 * hbar * T / (m * delta * delta))


# ---------------------------------------------------------------------------
# auxiliary angles
# ---------------------------------------------------------------------------

def test_theta_unit_value():
    scenario = make_scenario(delta_a=math.sqrt(2.0 * math.pi))
    ang = auxiliary_angles(scenario, MODE_LITERAL)
    assert ang.theta == pytest.approx(1.0, rel=1e-12)


def test_theta_at_unit_resolution():
    scenario = make_scenario(delta_a=1.0)
    ang = auxiliary_angles(scenario, MODE_LITERAL)
    assert ang.theta == pytest.approx(math.sqrt(2.0 * math.pi), rel=1e-12)


def test_theta_vanishes_for_coarse_measurement():
    scenario = make_scenario(delta_a=1e8)
    ang = auxiliary_angles(scenario, MODE_LITERAL)
    assert ang.theta < 1e-7


def test_derived_theta_is_re_wt():
    scenario = make_scenario(delta_a=1.0, delta_b=2.0)
    ang = auxiliary_angles(scenario, MODE_DERIVED)
    assert ang.theta == pytest.approx(math.sqrt(2.0), rel=1e-12)
    assert ang.rho == pytest.approx(math.sqrt(0.5), rel=1e-12)
    lit = auxiliary_angles(scenario, MODE_LITERAL)
    assert lit.theta / ang.theta == pytest.approx(math.sqrt(math.pi), rel=1e-12)


def test_per_time_angles_vanish_at_their_anchors():
    ang = auxiliary_angles(make_scenario(), MODE_LITERAL)
    t0, t1 = ang.tau_start, ang.tau_end
    assert ang.gamma(t1) == 0.0 and ang.Gamma(t1) == 0.0
    assert ang.mu(t0) == 0.0 and ang.nu(t0) == 0.0
    assert ang.epsilon(t1) == 0.0 and ang.beta(t1) == 0.0
    assert ang.sigma(t0) == 0.0 and ang.alpha(t0) == 0.0
    assert ang.theta > 0.0 and ang.rho > 0.0


def test_unknown_mode_rejected():
    with pytest.raises(RpifError, match="mode"):
        decompose(make_scenario(), "approximate")


@pytest.mark.parametrize("mode", [MODE_LITERAL, MODE_DERIVED])
def test_terms_respect_stability_guard(mode):
    from rpif import StabilityError
    scenario = make_scenario(delta_a=0.03)
    with pytest.raises(StabilityError):
        term_i1(scenario, mode)


# ---------------------------------------------------------------------------
# i1, i2: endpoint-quadratic terms
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("mode", [MODE_LITERAL, MODE_DERIVED])
def test_i1_zero_for_equal_resolutions(mode):
    scenario = make_scenario(delta_a=1.3, delta_b=1.3,
                             a=ConstantFunction(0.1), b=ConstantFunction(0.1))
    assert abs(term_i1(scenario, mode)) <= 1e-15


@pytest.mark.parametrize("mode", [MODE_LITERAL, MODE_DERIVED])
def test_i1_zero_for_zero_endpoints(mode):
    scenario = make_scenario(z1=0.0, z2=0.0)
    assert term_i1(scenario, mode) == 0.0


def _i1_highprec(theta_of_delta, z1, z2, da, db):
    """50-digit evaluation of the printed i1 closed form."""
    import mpmath as mp
    with mp.workdps(50):
        def bracket(x):
            return (1 - mp.e ** (-4 * x) + 2 * mp.e ** (-2 * x) * mp.sin(2 * x)) / \
                   (1 + mp.e ** (-4 * x) - 2 * mp.e ** (-2 * x) * mp.cos(2 * x))

        val = ((z1 ** 2 + z2 ** 2) * mp.sqrt(mp.mpf(1) / 2)
               * (bracket(theta_of_delta(da)) / da - bracket(theta_of_delta(db)) / db))
        return float(val)


def test_i1_frozen_values():
    # frozen from the 50-digit oracle below, m=hbar=T=1, z1=0, z2=1, da=1, db=2
    import mpmath as mp
    scenario = make_scenario(z1=0.0, z2=1.0, a=ConstantFunction(0.0),
                             b=ConstantFunction(0.0))
    lit = _i1_highprec(lambda d: mp.sqrt(2 * mp.pi / d ** 2), 0.0, 1.0, 1.0, 2.0)
    der = _i1_highprec(lambda d: mp.sqrt(mp.mpf(2) / d ** 2), 0.0, 1.0, 1.0, 2.0)
    assert lit == pytest.approx(0.36214293480420017176, rel=1e-15)
    assert der == pytest.approx(0.14348893638461450825, rel=1e-15)
    assert term_i1(scenario, MODE_LITERAL) == pytest.approx(lit, rel=1e-12)
    assert term_i1(scenario, MODE_DERIVED) == pytest.approx(der, rel=1e-11)


def test_i1_derived_matches_closed_bracket_form():
    # independent algebra route: the printed bracket evaluated at the
    # angle |Re(wT)| must reproduce the action-block value
    scenario = make_scenario(z1=0.2, z2=0.9, delta_a=0.8, delta_b=2.5)

    def bracket(x):
        return (1 - math.exp(-4 * x) + 2 * math.exp(-2 * x) * math.sin(2 * x)) / \
               (1 + math.exp(-4 * x) - 2 * math.exp(-2 * x) * math.cos(2 * x))

    expect = (0.2 ** 2 + 0.9 ** 2) * math.sqrt(0.5) * (
        bracket(_theta_derived(0.8)) / 0.8 - bracket(_theta_derived(2.5)) / 2.5)
    assert term_i1(scenario, MODE_DERIVED) == pytest.approx(expect, rel=1e-10)


@pytest.mark.parametrize("mode", [MODE_LITERAL, MODE_DERIVED])
def test_i2_zero_when_z1_zero(mode):
    assert term_i2(make_scenario(z1=0.0), mode) == 0.0


@pytest.mark.parametrize("mode", [MODE_LITERAL, MODE_DERIVED])
def test_i2_zero_for_equal_resolutions(mode):
    scenario = make_scenario(z1=0.3, z2=0.7, delta_a=1.1, delta_b=1.1)
    assert abs(term_i2(scenario, mode)) <= 1e-15


def test_i2_frozen_literal_value():
    scenario = make_scenario(z1=0.3, z2=0.5, a=ConstantFunction(0.0),
                             b=ConstantFunction(0.0))
    assert term_i2(scenario, MODE_LITERAL) == pytest.approx(
        0.076996830170677466526, rel=1e-12)


def test_i2_derived_matches_closed_bracket_form():
    scenario = make_scenario(z1=0.3, z2=0.5, delta_a=1.0, delta_b=2.0)

    def bracket(x):
        e2 = math.exp(-2 * x)
        den = math.exp(x) * (1 + math.exp(-4 * x) - 2 * e2 * math.cos(2 * x))
        return ((1 - e2) * math.cos(x) + (1 + e2) * math.sin(x)) / den

    expect = -math.sqrt(8.0) * 0.3 * 0.5 * (
        bracket(_theta_derived(1.0)) / 1.0 - bracket(_theta_derived(2.0)) / 2.0)
    assert term_i2(scenario, MODE_DERIVED) == pytest.approx(expect, rel=1e-10)


# ---------------------------------------------------------------------------
# i3, i4: endpoint-linear terms, checked against finite differences of the
# action difference (exact for a quadratic function of the endpoints)
# ---------------------------------------------------------------------------

def _linear_coefficient(scenario, which: str, delta=0.25):
    """Coefficient of the monomial z1 (or z2) in the action difference.

    The action difference is quadratic in the endpoints, so a centered
    difference with the other endpoint at zero isolates the linear
    coefficient exactly: the even quadratic part cancels and the cross
    term vanishes.
    """
    import dataclasses
    if which == "z1":
        hi = dataclasses.replace(scenario, z1=+delta, z2=0.0)
        lo = dataclasses.replace(scenario, z1=-delta, z2=0.0)
    else:
        hi = dataclasses.replace(scenario, z1=0.0, z2=+delta)
        lo = dataclasses.replace(scenario, z1=0.0, z2=-delta)
    return (phase_difference(hi) - phase_difference(lo)) / (2.0 * delta)


@pytest.mark.parametrize("mode", [MODE_LITERAL, MODE_DERIVED])
def test_i3_zero_when_z1_zero(mode):
    assert term_i3(make_scenario(z1=0.0), mode) == 0.0


@pytest.mark.parametrize("mode", [MODE_LITERAL, MODE_DERIVED])
def test_i3_i4_zero_without_sources(mode):
    scenario = make_scenario(f=ConstantFunction(0.0), a=ConstantFunction(0.0),
                             b=ConstantFunction(0.0), z1=0.4, z2=0.9)
    assert abs(term_i3(scenario, mode)) <= 1e-15
    assert abs(term_i4(scenario, mode)) <= 1e-15


def test_i3_derived_is_z1_linear_part_of_phase_difference():
    scenario = make_scenario(z1=0.3, z2=0.5)
    coeff = _linear_coefficient(scenario, "z1")
    assert term_i3(scenario, MODE_DERIVED) == pytest.approx(
        scenario.z1 * coeff, rel=1e-8)


@pytest.mark.parametrize("mode", [MODE_LITERAL, MODE_DERIVED])
def test_i4_zero_when_z2_zero(mode):
    assert term_i4(make_scenario(z2=0.0), mode) == 0.0


def test_i4_derived_is_z2_linear_part_of_phase_difference():
    scenario = make_scenario(z1=0.3, z2=0.5)
    coeff = _linear_coefficient(scenario, "z2")
    assert term_i4(scenario, MODE_DERIVED) == pytest.approx(
        scenario.z2 * coeff, rel=1e-8)


# ---------------------------------------------------------------------------
# i5: endpoint-free term
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("mode", [MODE_LITERAL, MODE_DERIVED])
def test_i5_zero_without_sources(mode):
    scenario = make_scenario(f=ConstantFunction(0.0), a=ConstantFunction(0.0),
                             b=ConstantFunction(0.0))
    assert abs(term_i5(scenario, mode)) <= 1e-15


@pytest.mark.parametrize("mode", [MODE_LITERAL, MODE_DERIVED])
def test_i5_cancels_for_identical_beams(mode):
    scenario = make_scenario(delta_a=1.5, delta_b=1.5,
                             a=PolynomialFunction((0.1, 0.3)),
                             b=PolynomialFunction((0.1, 0.3)))
    assert term_i5(scenario, mode) == 0.0


def test_i5_derived_is_endpoint_free_part():
    import dataclasses
    scenario = make_scenario(z1=0.3, z2=0.5)
    at_origin = dataclasses.replace(scenario, z1=0.0, z2=0.0)
    assert term_i5(scenario, MODE_DERIVED) == pytest.approx(
        phase_difference(at_origin), rel=1e-8)


# ---------------------------------------------------------------------------
# transcription check: the printed formulas evaluated at the derived angle
# reproduce the action-grouping for the first four terms (the printed i5
# differs structurally; its discrepancy is what the mode comparison reports)
# ---------------------------------------------------------------------------

def test_literal_forms_at_derived_angle_match_action_grouping():
    scenario = make_scenario(z1=0.3, z2=0.5,
                             a=PolynomialFunction((0.1, -0.2, 0.05)),
                             b=PolynomialFunction((-0.1, 0.15)))
    nd = _nd(scenario)
    theta_d = _theta_derived(nd.beam_a.resolution)
    rho_d = _theta_derived(nd.beam_b.resolution)
    lit = _literal_terms(nd, theta_d, rho_d)
    der = (term_i1(scenario, MODE_DERIVED), term_i2(scenario, MODE_DERIVED),
           term_i3(scenario, MODE_DERIVED), term_i4(scenario, MODE_DERIVED))
    for k in range(4):
        assert lit[k] == pytest.approx(der[k], rel=1e-9, abs=1e-12)


# ---------------------------------------------------------------------------
# phase difference, reduced interference, intensity
# ---------------------------------------------------------------------------

def test_phase_difference_zero_for_identical_beams():
    scenario = make_scenario(delta_a=1.0, delta_b=1.0,
                             a=ConstantFunction(0.1), b=ConstantFunction(0.1))
    assert phase_difference(scenario) == 0.0


def test_phase_difference_swap_antisymmetry():
    scenario = make_scenario()
    assert abs(phase_difference(scenario) + phase_difference(scenario.swapped())) <= 1e-12


def test_phase_difference_baseline_frozen():
    assert phase_difference(make_scenario()) == pytest.approx(
        0.030111441588577398, rel=1e-9)


def test_phase_difference_baseline_against_lattice_oracle():
    from rpif import LatticeSpec, richardson_extrapolate, stationary_action
    scenario = make_scenario()
    stationary = {}
    for label in ("a", "b"):
        seq = [(n, stationary_action(
            scenario, label,
            LatticeSpec.for_params(scenario.params, scenario.z1, scenario.z2, n)
        ).as_complex) for n in (256, 512, 1024)]
        stationary[label] = richardson_extrapolate(seq).value
    oracle = (stationary["a"] - stationary["b"]).real
    assert phase_difference(scenario) == pytest.approx(oracle, rel=1e-6)


def test_reduced_interference_identical_beams():
    scenario = make_scenario(delta_a=2.0, delta_b=2.0,
                             a=ConstantFunction(-0.1), b=ConstantFunction(-0.1))
    assert reduced_interference(scenario) == 1.0


def test_reduced_interference_is_cosine_of_phase():
    scenario = make_scenario(z2=0.9)
    assert reduced_interference(scenario) == pytest.approx(
        math.cos(phase_difference(scenario)), rel=1e-14)


def test_reduced_interference_in_bounds(rng):
    for _ in range(10):
        scenario = random_scenario(rng)
        assert -1.0 <= reduced_interference(scenario) <= 1.0
        assert intensity(scenario) >= 0.0


def test_intensity_coherent_doubling():
    from rpif import restricted_propagator
    scenario = make_scenario(delta_a=1.0, delta_b=1.0,
                             a=ConstantFunction(0.1), b=ConstantFunction(0.1))
    single = restricted_propagator(scenario.beam_a, scenario.frame_profile,
                                   scenario.params, scenario.z1, scenario.z2)
    assert intensity(scenario) == pytest.approx(4.0 * abs(single.amplitude) ** 2,
                                                rel=1e-12)


def test_intensity_single_beam_limit():
    # beam a's record sits far outside its resolution: its weight-norm
    # factor collapses and only beam b contributes
    from rpif import restricted_propagator
    scenario = make_scenario(a=ConstantFunction(6.0), delta_a=0.5)
    other = restricted_propagator(scenario.beam_b, scenario.frame_profile,
                                  scenario.params, scenario.z1, scenario.z2)
    assert intensity(scenario) == pytest.approx(abs(other.amplitude) ** 2, rel=1e-10)


def test_intensity_baseline_frozen():
    assert intensity(make_scenario()) == pytest.approx(0.47322879385856004, rel=1e-9)


# ---------------------------------------------------------------------------
# decompose
# ---------------------------------------------------------------------------

def test_decompose_symmetric_null():
    scenario = make_scenario(delta_a=1.5, delta_b=1.5,
                             a=PolynomialFunction((0.05, 0.2)),
                             b=PolynomialFunction((0.05, 0.2)))
    for mode in (MODE_LITERAL, MODE_DERIVED):
        br = decompose(scenario, mode)
        for term in (br.i1, br.i2, br.i3, br.i4, br.i5):
            assert abs(term) <= 1e-12
        assert abs(br.reduced_i - 1.0) <= 1e-12


def test_decompose_zero_z1_kills_i2_i3():
    br = decompose(make_scenario(z1=0.0), MODE_DERIVED)
    assert br.i2 == 0.0
    assert br.i3 == 0.0


def test_decompose_derived_residual_baseline():
    br = decompose(make_scenario(), MODE_DERIVED)
    assert br.residual <= 1e-8


def test_decompose_literal_residual_reported_not_asserted():
    br = decompose(make_scenario(), MODE_LITERAL)
    assert np.isfinite(br.residual)
    assert br.residual >= 0.0
    assert br.mode == MODE_LITERAL


def test_decompose_derived_residual_randomized(rng):
    for _ in range(20):
        scenario = random_scenario(rng)
        br = decompose(scenario, MODE_DERIVED)
        assert br.residual <= 1e-8


def test_swap_negates_terms_and_preserves_observables(rng):
    scenarios = [make_scenario(z1=0.3, z2=0.8)] + [random_scenario(rng) for _ in range(3)]
    for scenario in scenarios:
        for mode in (MODE_LITERAL, MODE_DERIVED):
            fwd = decompose(scenario, mode)
            rev = decompose(scenario.swapped(), mode)
            for k in ("i1", "i2", "i3", "i4", "i5", "phase_difference"):
                assert abs(getattr(fwd, k) + getattr(rev, k)) <= 1e-12
            assert abs(fwd.intensity - rev.intensity) <= 1e-12 * max(fwd.intensity, 1e-300)
            assert abs(fwd.reduced_i - rev.reduced_i) <= 1e-12


def test_equivalence_principle_free_frame():
    # with f = 0 gravity enters nowhere; g = 0 and g = 9.8 must agree
    outputs = []
    for g in (0.0, 9.8):
        scenario = make_scenario(g=g, f=ConstantFunction(0.0), z1=0.2, z2=0.7)
        br = decompose(scenario, MODE_DERIVED)
        lit = decompose(scenario, MODE_LITERAL)
        outputs.append((br.i1, br.i2, br.i3, br.i4, br.i5, br.phase_difference,
                        br.reduced_i, br.intensity,
                        lit.i1, lit.i2, lit.i3, lit.i4, lit.i5))
    for x, y in zip(*outputs):
        assert abs(x - y) <= 1e-10


def test_resolution_difference_is_interference_source():
    # identical records, different resolutions: the quadratic terms survive
    scenario = make_scenario(z1=0.0, z2=1.0, a=ConstantFunction(0.2),
                             b=ConstantFunction(0.2), delta_a=1.0, delta_b=2.0)
    for mode in (MODE_LITERAL, MODE_DERIVED):
        br = decompose(scenario, mode)
        assert abs(br.i1) + abs(br.i2) > 1e-6


@pytest.mark.parametrize("lam", [0.5, 2.0, 10.0])
def test_m_over_hbar_invariance(lam):
    base = reduced_interference(make_scenario())
    scaled = reduced_interference(make_scenario(m=lam, hbar=lam))
    assert scaled == pytest.approx(base, abs=1e-9)

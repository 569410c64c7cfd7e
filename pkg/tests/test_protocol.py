import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import protocol_by_permanents

from spe_elacp.fock import basis_state, inner_product, mixture_distance, superposition
from spe_elacp.protocol import (
    ProtocolParams,
    amplification_boundary,
    analytic_eta_prime,
    analytic_g,
    analytic_success_probability,
    build_input_state,
    build_input_via_lossy_channels,
    concentration_t2,
    fidelity_to_maximal,
    g_limit,
    maximally_entangled,
    run_protocol,
)

S2 = 1 / math.sqrt(2)
open_unit = st.floats(0.01, 0.99)

# Frozen from tests/oracles.protocol_by_permanents (permanent-based linear optics):
# eta=0.6, alpha2=0.4, t1=0.3, t2=0.18/0.46
REF_T2 = 0.391304347826087
REF_P = 0.17843478260869572
REF_ETA_PRIME = 0.7368421052631579
REF_G = REF_ETA_PRIME / 0.6


def test_reference_values_from_oracle():
    p, eta_prime, _ = protocol_by_permanents(0.6, 0.4, 0.3, REF_T2)
    assert abs(p - REF_P) < 1e-14
    assert abs(eta_prime - REF_ETA_PRIME) < 1e-14


def test_params_validation():
    with pytest.raises(ValueError, match="eta"):
        ProtocolParams(1.5, 0.4, 0.3, 0.3)
    with pytest.raises(ValueError, match="t2"):
        ProtocolParams(0.5, 0.4, 0.3, -0.1)


def test_input_state_pure_maximal():
    m = build_input_state(1.0, 0.5)
    assert len(m) == 1
    assert abs(fidelity_to_maximal(m) - 1) < 1e-15


def test_input_state_vacuum():
    m = build_input_state(0.0, 0.3)
    (w, s), = m.branches
    assert s.amplitudes == {(0, 0): 1}


def test_input_state_mixture():
    m = build_input_state(0.6, 0.4)
    psi = superposition(("a1", "b1"), {(1, 0): math.sqrt(0.4), (0, 1): math.sqrt(0.6)})
    weights = {}
    for w, s in m.branches:
        key = "psi" if abs(abs(inner_product(psi, s)) - 1) < 1e-12 else "vac"
        weights[key] = w
    assert weights == pytest.approx({"psi": 0.6, "vac": 0.4}, abs=1e-15)


def test_input_state_rejects_out_of_range():
    with pytest.raises(ValueError):
        build_input_state(0.5, 1.2)


@pytest.mark.parametrize("alpha2,eta", [(0.5, 1.0), (0.4, 0.6), (0.9, 0.0), (0.1, 0.25)])
def test_lossy_channels_reproduce_input(alpha2, eta):
    assert mixture_distance(build_input_via_lossy_channels(alpha2, eta), build_input_state(eta, alpha2)) < 1e-12


def test_lossy_channels_pure_maximal():
    m = build_input_via_lossy_channels(0.5, 1.0)
    assert len(m) == 1 and abs(fidelity_to_maximal(m) - 1) < 1e-15


@given(open_unit, st.floats(0, 0.99))
def test_concentration_t2_satisfies_condition(a2, t1):
    t2 = concentration_t2(a2, t1)
    assert abs(a2 * t2 * (1 - t1) - (1 - a2) * t1 * (1 - t2)) < 1e-12


@pytest.mark.parametrize("t", [0.05, 0.3, 0.5, 0.77])
def test_concentration_symmetric(t):
    assert concentration_t2(0.5, t) == pytest.approx(t, abs=1e-15)


def test_concentration_examples():
    assert concentration_t2(0.4, 0.3) == pytest.approx(0.18 / 0.46, abs=1e-15)
    assert abs(concentration_t2(0.4, 0.3) - 0.3913043478) < 1e-10
    assert concentration_t2(0.7, 0.0) == 0.0
    for bad in (0.0, 1.0):
        with pytest.raises(ValueError):
            concentration_t2(bad, 0.3)


def test_success_probability_examples():
    assert analytic_success_probability(ProtocolParams(0.0, 0.3, 0.2, 0.7)) == pytest.approx(0.14, abs=1e-15)
    assert analytic_success_probability(ProtocolParams(1.0, 0.5, 0.5, 0.5)) == pytest.approx(0.25, abs=1e-15)
    p = ProtocolParams(0.6, 0.4, 0.3, REF_T2)
    assert abs(analytic_success_probability(p) - REF_P) < 1e-12
    assert abs(analytic_success_probability(p) - 0.1784347826) < 1e-10


def test_eta_prime_examples():
    assert analytic_eta_prime(ProtocolParams(1.0, 0.3, 0.4, 0.6)) == pytest.approx(1.0, abs=1e-15)
    assert analytic_eta_prime(ProtocolParams(0.0, 0.3, 0.4, 0.6)) == 0.0
    assert abs(analytic_eta_prime(ProtocolParams(0.6, 0.4, 0.3, REF_T2)) - REF_ETA_PRIME) < 1e-12
    with pytest.raises(ValueError):
        analytic_eta_prime(ProtocolParams(0.0, 0.3, 0.0, 0.6))


def test_g_examples():
    assert analytic_g(ProtocolParams(1.0, 0.2, 0.35, 0.8)) == pytest.approx(1.0, abs=1e-15)
    assert analytic_g(ProtocolParams(0.6, 0.5, 0.2, 0.2)) == pytest.approx(0.8 / 0.56, abs=1e-14)
    assert abs(analytic_g(ProtocolParams(0.6, 0.4, 0.3, REF_T2)) - 1.2280702) < 1e-7
    with pytest.raises(ValueError):
        analytic_g(ProtocolParams(0.0, 0.4, 0.3, 0.3))


def test_g_limit():
    assert g_limit(0.2) == pytest.approx(5.0)
    assert g_limit(1.0) == 1.0
    assert g_limit(0.5) == 2.0
    with pytest.raises(ValueError):
        g_limit(0.0)


@pytest.mark.parametrize(
    "alpha2,t1,t2",
    [(0.4, 0.8 / 1.8, 0.6 / 1.1), (0.5, 0.5, 0.5), (0.8, 1.6 / 2.6, 0.2 / 0.7)],
)
def test_amplification_boundary(alpha2, t1, t2):
    got = amplification_boundary(alpha2)
    assert got == pytest.approx((t1, t2), abs=1e-14)
    # g = 1 there, independent of eta
    for eta in (0.1, 0.5, 0.9):
        assert abs(analytic_g(ProtocolParams(eta, alpha2, *got)) - 1) < 1e-12


def test_fidelity_to_maximal_examples():
    from spe_elacp.fock import MixedState

    assert fidelity_to_maximal(MixedState.pure(maximally_entangled())) == pytest.approx(1.0, abs=1e-15)
    assert fidelity_to_maximal(MixedState.pure(basis_state(("a1", "b1"), (1, 0)))) == pytest.approx(0.5)
    assert fidelity_to_maximal(build_input_state(0.35, 0.5)) == pytest.approx(0.35, abs=1e-15)
    with pytest.raises(ValueError):
        fidelity_to_maximal(MixedState.pure(basis_state(("a",), (1,))))


def test_run_reference_point():
    out = run_protocol(ProtocolParams.on_concentration_curve(0.6, 0.4, 0.3))
    assert abs(out.success_probability - REF_P) < 1e-12
    assert abs(out.eta_prime - REF_ETA_PRIME) < 1e-12
    assert abs(out.gain - REF_G) < 1e-12
    assert abs(out.fidelity - 1) < 1e-12
    assert out.heralded_state.modes == ("d2", "c2")
    assert len(out.heralded_state) == 2
    assert out.mixture_fidelity == pytest.approx(REF_ETA_PRIME, abs=1e-12)


def test_run_balanced_pure():
    out = run_protocol(ProtocolParams(1.0, 0.5, 0.5, 0.5))
    assert out.success_probability == pytest.approx(0.25, abs=1e-14)
    assert out.eta_prime == pytest.approx(1.0, abs=1e-14)
    assert out.fidelity == pytest.approx(1.0, abs=1e-14)


def test_run_unbalanced_fidelity():
    out = run_protocol(ProtocolParams(1.0, 0.8, 0.5, 0.5))
    a, b = math.sqrt(0.8), math.sqrt(0.2)
    assert abs(out.fidelity - (a + b) ** 2 / 2) < 1e-12
    assert abs(out.fidelity - 0.9) < 1e-12


def test_run_patterns_equal():
    out = run_protocol(ProtocolParams(0.7, 0.3, 0.45, 0.62))
    assert set(out.per_pattern) == {"D1D3", "D1D4", "D2D3", "D2D4"}
    for v in out.per_pattern.values():
        assert abs(v - out.success_probability / 4) < 1e-14


def test_feed_forward_needed():
    p = ProtocolParams.on_concentration_curve(1.0, 0.4, 0.3)
    assert run_protocol(p, feed_forward=False).fidelity == pytest.approx(0.5, abs=1e-12)
    assert run_protocol(p).fidelity == pytest.approx(1.0, abs=1e-12)


def test_run_rejects_endpoints():
    with pytest.raises(ValueError, match="t1"):
        run_protocol(ProtocolParams(0.5, 0.4, 0.0, 0.3))
    with pytest.raises(ValueError, match="t2"):
        run_protocol(ProtocolParams(0.5, 0.4, 0.3, 1.0))


@settings(max_examples=60, deadline=None)
@given(st.floats(0, 1), open_unit, open_unit, open_unit)
def test_run_matches_permanent_oracle(eta, a2, t1, t2):
    p = ProtocolParams(eta, a2, t1, t2)
    out = run_protocol(p)
    ref_p, ref_eta_prime, _ = protocol_by_permanents(eta, a2, t1, t2)
    assert abs(out.success_probability - ref_p) < 1e-10
    assert abs(out.eta_prime - ref_eta_prime) < 1e-10
    assert abs(out.success_probability - analytic_success_probability(p)) < 1e-10
    assert abs(out.eta_prime - analytic_eta_prime(p)) < 1e-10


@settings(max_examples=60, deadline=None)
@given(st.floats(0.05, 1), open_unit, open_unit)
def test_concentration_gives_unit_fidelity(eta, a2, t1):
    out = run_protocol(ProtocolParams.on_concentration_curve(eta, a2, t1))
    assert out.fidelity >= 1 - 1e-10


@settings(max_examples=60, deadline=None)
@given(st.floats(0.05, 1), open_unit, open_unit, open_unit)
def test_balanced_iff_concentration(eta, a2, t1, t2):
    out = run_protocol(ProtocolParams(eta, a2, t1, t2))
    on_curve = abs(t2 - concentration_t2(a2, t1)) < 1e-9
    if on_curve:
        assert out.fidelity >= 1 - 1e-10
    elif abs(t2 - concentration_t2(a2, t1)) > 1e-3:
        assert out.fidelity < 1 - 1e-10


@settings(max_examples=60, deadline=None)
@given(st.floats(0.05, 0.95), st.floats(0.05, 0.95), st.floats(0.02, 0.98))
def test_gain_sign_flips_at_boundary(eta, a2, t1):
    t1_star, _ = amplification_boundary(a2)
    if abs(t1 - t1_star) < 1e-6:
        return
    g = run_protocol(ProtocolParams.on_concentration_curve(eta, a2, t1)).gain
    assert (g > 1) == (t1 < t1_star)


def test_success_probability_vanishes_toward_zero_t1():
    probs = [
        run_protocol(ProtocolParams.on_concentration_curve(0.6, 0.4, t1)).success_probability
        for t1 in (1e-1, 1e-2, 1e-3, 1e-4, 1e-5)
    ]
    assert all(a > b for a, b in zip(probs, probs[1:]))
    assert probs[-1] < 1e-4

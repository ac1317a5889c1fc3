import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import full_obe_ground_state
from polscatter import (DarkStateMultiplicityError, InvalidInputError, LevelScheme, LinPerpLin,
                        LocalField, PumpingParameters, SigmaPlusMinus, nonadiabatic_populations,
                        steady_state)
from polscatter.bloch import (ground_generator, polarization_axis, populations_along,
                              steady_state_profile)

HALF = LevelScheme(0.5, 1.5, 1e-4)
ONE = LevelScheme(1, 2, 1e-4)
XS = np.linspace(-1.3, 4.0, 23)


@pytest.mark.parametrize("x", XS)
def test_lin_perp_lin_populations(x):
    rho = steady_state(HALF, LinPerpLin()(x))
    np.testing.assert_allclose(rho.entries, np.diag([np.cos(x) ** 2, np.sin(x) ** 2]), atol=1e-12)


@pytest.mark.parametrize("x", XS)
def test_lin_perp_lin_symmetries(x):
    profile = LinPerpLin(k=2.0)
    p = steady_state(HALF, profile(x)).populations
    shifted = steady_state(HALF, profile(x + np.pi / (2 * profile.k))).populations
    assert p.sum() == pytest.approx(1, abs=1e-12)
    assert shifted[1] == pytest.approx(p[0], abs=1e-12)


def test_pure_sigma_plus_pumps_to_stretched_state():
    rho = steady_state(ONE, LocalField(1.0, 0.0))
    np.testing.assert_allclose(rho.entries, np.diag([0, 0, 1]), atol=1e-12)


@pytest.mark.parametrize("x", [0.0, 0.3, 1.1, -2.0])
def test_sigma_plus_minus_local_axis_populations(x):
    field = SigmaPlusMinus()(x)
    rho = steady_state(ONE, field)
    local = populations_along(rho, polarization_axis(field))
    np.testing.assert_allclose(local, [4 / 17, 9 / 17, 4 / 17], atol=1e-12)
    np.testing.assert_allclose(np.linalg.eigvalsh(rho.entries), [4 / 17, 4 / 17, 9 / 17], atol=1e-12)


@pytest.mark.parametrize("x", [0.0, 0.3, 1.1, -2.0])
def test_sigma_plus_minus_beam_axis_state(x):
    rho = steady_state(ONE, SigmaPlusMinus()(x))
    np.testing.assert_allclose(rho.populations, [13 / 34, 8 / 34, 13 / 34], atol=1e-12)
    rotated = rho.coherence(1, -1) * np.exp(-2j * x)
    assert rotated == pytest.approx(5 / 34, abs=1e-12)
    assert rho.coherence(0, 1) == pytest.approx(0, abs=1e-12)


@pytest.mark.parametrize("profile", [LinPerpLin(0.8, 1.7), SigmaPlusMinus(1.3, 0.6)])
@pytest.mark.parametrize("scheme", [HALF, ONE])
def test_closed_forms_agree_with_null_space(profile, scheme):
    for x in np.linspace(0, 3, 7):
        exact = profile.closed_form(scheme, x)
        if exact is None:
            continue
        np.testing.assert_allclose(steady_state(scheme, profile(x)).entries, exact[0], atol=1e-12)


@pytest.mark.parametrize("profile", [LinPerpLin(1.0, 1.3), SigmaPlusMinus(1.0, 0.7)])
@pytest.mark.parametrize("scheme", [HALF, ONE])
def test_closed_form_derivatives_match_central_difference(profile, scheme):
    class Plain:
        def __call__(self, x):
            return profile(x)

    for x in [0.1, 0.9, 2.2]:
        exact = profile.closed_form(scheme, x)
        if exact is None:
            continue
        _, numeric = steady_state_profile(scheme, Plain(), x)
        np.testing.assert_allclose(numeric, exact[1], atol=1e-8)


@pytest.mark.parametrize("j_g, j_e", [(0.5, 1.5), (1, 2), (1, 1), (1.5, 2.5), (2, 2)])
def test_against_full_bloch_equations(j_g, j_e):
    rng = np.random.default_rng(int(4 * j_g + j_e))
    scheme = LevelScheme(j_g, j_e)
    for detuning in (0.0, 1.5, -3.0):
        comps = {q: complex(*rng.normal(size=2)) for q in (-1, 0, 1)}
        ours = steady_state(scheme, LocalField(comps[1], comps[-1], e_pi=comps[0]), detuning)
        ref = full_obe_ground_state(j_g, j_e, comps, detuning=detuning)
        np.testing.assert_allclose(ours.entries, ref, atol=1e-5)


def test_sigma_plus_minus_against_full_bloch_equations():
    field = SigmaPlusMinus()(0.4)
    ref = full_obe_ground_state(1, 2, {1: field.e_plus, -1: field.e_minus})
    np.testing.assert_allclose(steady_state(ONE, field).entries, ref, atol=1e-6)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([(0.5, 1.5), (1, 2), (1, 1), (2, 3)]))
def test_steady_state_properties(seed, transition):
    rng = np.random.default_rng(seed)
    scheme = LevelScheme(*transition)
    comps = rng.normal(size=3) + 1j * rng.normal(size=3)
    field = LocalField(comps[0], comps[1], e_pi=comps[2])
    detuning = rng.normal()
    rho = steady_state(scheme, field, detuning)
    gen = ground_generator(scheme, field, detuning)
    assert np.linalg.norm(gen @ rho.entries.reshape(-1)) < 1e-12
    assert rho.is_positive
    assert np.trace(rho.entries) == pytest.approx(1, abs=1e-12)

    scale = rng.uniform(1e-3, 1e3)
    scaled = steady_state(scheme, LocalField(scale * comps[0], scale * comps[1],
                                             e_pi=scale * comps[2]), detuning)
    np.testing.assert_allclose(scaled.entries, rho.entries, atol=1e-12)

    phase = np.exp(1j * rng.uniform(0, 2 * np.pi))
    rotated = steady_state(scheme, LocalField(phase * comps[0], phase * comps[1],
                                              e_pi=phase * comps[2]), detuning)
    np.testing.assert_allclose(rotated.entries, rho.entries, atol=1e-12)


def test_standard_configurations_do_not_depend_on_detuning():
    for scheme, profile in [(HALF, LinPerpLin()), (ONE, SigmaPlusMinus())]:
        base = steady_state(scheme, profile(0.7)).entries
        for detuning in (-5.0, 2.0):
            np.testing.assert_allclose(steady_state(scheme, profile(0.7), detuning).entries, base,
                                       atol=1e-12)


def test_dark_state_manifold_is_reported():
    scheme = LevelScheme(1, 0)
    with pytest.raises(DarkStateMultiplicityError) as err:
        steady_state(scheme, LocalField(1.0, 1.0))
    assert err.value.null_dimension > 1
    assert len(err.value.dark_states) == 2
    for state in err.value.dark_states:
        coupled = sum(c * scheme.dipole(q) for q, c in ((1, 1.0), (-1, 1.0))) @ state
        assert np.linalg.norm(coupled) < 1e-12


def test_zero_field_is_rejected():
    with pytest.raises(InvalidInputError):
        steady_state(HALF, LocalField(0, 0))


def test_pumping_parameters_validation():
    with pytest.raises(InvalidInputError, match="tau_p must be positive"):
        PumpingParameters(tau_p=-1)


@pytest.mark.parametrize("x", XS)
def test_nonadiabatic_at_rest_is_steady_state(x):
    lagged = nonadiabatic_populations(HALF, LinPerpLin(), PumpingParameters(2.0, 0.0), x)
    np.testing.assert_allclose(lagged.entries, steady_state(HALF, LinPerpLin()(x)).entries, atol=1e-12)


@pytest.mark.parametrize("x", XS)
@pytest.mark.parametrize("v", [-0.05, 0.02, 0.1])
def test_nonadiabatic_lin_perp_lin(x, v):
    k, tau = 1.7, 0.6
    lagged = nonadiabatic_populations(HALF, LinPerpLin(k=k), PumpingParameters(tau, v), x)
    assert lagged.population(-0.5) == pytest.approx(
        np.cos(k * x) ** 2 + v * tau * k * np.sin(2 * k * x), abs=1e-14)
    assert np.trace(lagged.entries) == pytest.approx(1, abs=1e-14)


def test_nonadiabatic_numeric_profile_preserves_trace():
    def profile(x):
        return LocalField(np.cos(x) + 0.2j, 0.5 * np.exp(1j * x), k=1.0, x=x, e_pi=0.3)

    lagged = nonadiabatic_populations(ONE, profile, PumpingParameters(1.0, 0.3), 0.4)
    assert np.trace(lagged.entries) == pytest.approx(1, abs=1e-9)


def test_polarization_axis_requires_linear_light():
    with pytest.raises(InvalidInputError):
        polarization_axis(LocalField(1.0, 0.0))
    axis = polarization_axis(LocalField(0, 0, e_pi=1j))
    np.testing.assert_allclose(np.abs(axis), [0, 0, 1], atol=1e-15)

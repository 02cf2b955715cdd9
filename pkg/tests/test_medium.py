import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from polariton import (
    DegenerateMedium,
    Medium,
    MediumError,
    MicroscopicMedium,
    PoleHit,
    Resonance,
    bare_lorentz,
    clausius_mossotti_permittivity,
    cm_to_lorentz,
    permittivity,
)
from polariton.medium import susceptibility_sum

from _support import random_microscopic

WORKED = Medium.from_arrays([1.0], [0.5])


@pytest.mark.parametrize("kwargs", [
    dict(omega=0.0, g=1.0), dict(omega=-1.0, g=1.0), dict(omega=1.0, g=0.0),
    dict(omega=1.0, g=-0.1), dict(omega=1.0, g=1.0, beta=-1e-3), dict(omega=math.nan, g=1.0),
])
def test_resonance_rejects_bad_parameters(kwargs):
    with pytest.raises(MediumError):
        Resonance(**kwargs)


def test_resonances_must_ascend():
    with pytest.raises(MediumError):
        Medium.from_arrays([2.0, 1.0], [0.1, 0.1])
    with pytest.raises(MediumError):
        Medium.from_arrays([1.0, 1.0], [0.1, 0.1])


def test_branch_count_and_flags():
    assert Medium(()).n_branches == 1
    assert WORKED.M == 1 and WORKED.n_branches == 2
    assert not WORKED.spatially_dispersive
    assert Medium.from_arrays([1.0], [0.5], [0.01]).spatially_dispersive


def test_worked_permittivity():
    assert permittivity(WORKED, 0.0) == pytest.approx(1.5, rel=1e-15)
    assert permittivity(WORKED, math.sqrt(0.5)) == pytest.approx(2.0, rel=1e-14)
    assert permittivity(WORKED, math.sqrt(2.0)) == pytest.approx(0.5, rel=1e-14)
    # zero at the longitudinal frequency sqrt(1.5)
    assert abs(permittivity(WORKED, math.sqrt(1.5))) < 1e-14


def test_permittivity_vectorized_matches_scalar():
    m = Medium.from_arrays([1.0, 3.0], [0.5, 2.0])
    w = np.array([0.3, 1.7, 4.0])
    np.testing.assert_allclose(permittivity(m, w), [permittivity(m, v) for v in w], rtol=1e-15)


def test_permittivity_pole_hit():
    with pytest.raises(PoleHit):
        permittivity(WORKED, 1.0)
    with pytest.raises(PoleHit):
        permittivity(WORKED, np.array([0.5, 1.0]))


def test_spatial_dispersion_shifts_pole():
    m = Medium.from_arrays([1.0], [0.5], [0.01])
    k = 3.0
    np.testing.assert_allclose(m.shifted_poles(k), [1.0 + 0.01 * 9.0])
    w = 1.3
    expected = 1.0 + 0.5 / (1.09 - w * w)
    assert permittivity(m, w, k) == pytest.approx(expected, rel=1e-15)


def test_vacuum_permittivity_is_one():
    assert permittivity(Medium(()), 2.0) == 1.0


# -- local-field mapping ------------------------------------------------------

def test_single_transition_shift_closed_form():
    micro = MicroscopicMedium.from_arrays(2.0, [1.3], [0.2])
    s = 0.4
    m = cm_to_lorentz(micro)
    assert m.omegas[0] ** 2 == pytest.approx(1.3**2 - s / 3, rel=1e-15)
    assert m.gs[0] == pytest.approx(s, rel=1e-15)


def test_two_transition_poles_match_reference():
    # reference from an independent 40-digit root solve of chi(x) = 3
    micro = MicroscopicMedium.from_arrays(1.0, [1.0, 2.5], [0.3, 0.8])
    m = cm_to_lorentz(micro)
    np.testing.assert_allclose(m.omegas**2, [0.89475950088478229, 5.988573832448551], rtol=1e-14)
    np.testing.assert_allclose(m.gs, [0.33192504456825882, 0.76807495543174122], rtol=1e-12)


def test_bare_map_keeps_poles():
    micro = MicroscopicMedium.from_arrays(3.0, [1.0, 2.0], [0.1, 0.2])
    m = bare_lorentz(micro)
    np.testing.assert_array_equal(m.omegas, [1.0, 2.0])
    np.testing.assert_allclose(m.gs, [0.3, 0.6])


def test_polarization_catastrophe_rejected():
    # chi(0) = s / omega^2 = 3 exactly
    with pytest.raises(DegenerateMedium):
        cm_to_lorentz(MicroscopicMedium.from_arrays(1.0, [1.0], [3.0]))
    with pytest.raises(DegenerateMedium):
        cm_to_lorentz(MicroscopicMedium.from_arrays(1.0, [1.0, 2.0], [2.0, 8.0]))


def test_microscopic_validation():
    with pytest.raises(MediumError):
        MicroscopicMedium.from_arrays(0.0, [1.0], [0.1])
    with pytest.raises(MediumError):
        MicroscopicMedium.from_arrays(1.0, [2.0, 1.0], [0.1, 0.1])


@given(st.integers(0, 2**32 - 1))
def test_cm_permittivity_equals_mapped_pole_sum(seed):
    rng = np.random.default_rng(seed)
    micro = random_microscopic(rng)
    m = cm_to_lorentz(micro)
    poles = np.concatenate((micro.omegas, m.omegas))
    w = np.linspace(0.05, 1.2 * poles.max(), 400)
    gap = np.min(np.abs(w[:, None] ** 2 - poles[None, :] ** 2), axis=1)
    w = w[gap > 1e-3 * poles.max() ** 2]
    lhs = clausius_mossotti_permittivity(micro, w)
    rhs = permittivity(m, w)
    np.testing.assert_allclose(rhs, lhs, rtol=1e-10, atol=1e-10)


@given(st.integers(0, 2**32 - 1))
def test_effective_poles_interlace_bare_poles(seed):
    micro = random_microscopic(np.random.default_rng(seed))
    m = cm_to_lorentz(micro)
    bare = np.concatenate(([0.0], micro.omegas))
    assert np.all(bare[:-1] < m.omegas) and np.all(m.omegas < bare[1:])
    assert np.all(m.gs > 0)
    # chi(x) - 3 vanishes up to roundoff in x amplified by x chi'(x)
    x = m.omegas**2
    slope = np.sum(micro.strengths / (micro.omegas**2 - x[:, None]) ** 2, axis=1)
    residual = np.abs(susceptibility_sum(micro, m.omegas) - 3.0)
    assert np.all(residual <= 1e-13 * (3.0 + x * slope))

"""Spectrum, level densities, and eigenfunction sampling."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kgconfine import heun, spectrum
from kgconfine.errors import DomainError
from kgconfine.params import PhysicalParams

# Frozen first-run eigenvalues for the benchmark parameter set
# (a1=a2=a3=0.1, mass=0.5, hbar_c=1).
FIG1_ENERGIES = {
    0: 0.47114794945097205,
    1: 0.6496001772412441,
    5: 1.105432218759638,
    10: 1.4906308698909518,
}

params_strategy = st.builds(
    PhysicalParams,
    a1=st.floats(min_value=-2.0, max_value=2.0),
    a2=st.floats(min_value=1e-2, max_value=10.0),
    a3=st.floats(min_value=1e-3, max_value=10.0),
    mass=st.floats(min_value=0.0, max_value=10.0),
    hbar_c=st.floats(min_value=0.1, max_value=10.0),
)


def test_energy_a3_zero_collapses():
    p = PhysicalParams(a1=0.0, a2=1.0, a3=0.0, mass=1.0)
    assert math.isclose(spectrum.energy(0, p).energy, math.sqrt(2.0), rel_tol=1e-15)
    assert math.isclose(spectrum.energy(3, p).energy, math.sqrt(8.0), rel_tol=1e-15)


def test_energy_q1_ground_state():
    p = PhysicalParams(a1=0.0, a2=1.0, a3=1.0, mass=0.0)
    e0 = spectrum.energy(0, p).energy
    assert math.isclose(e0, math.sqrt(3.0 + math.sqrt(5.0)), rel_tol=1e-14)
    assert math.isclose(e0, 2.288245611270737, rel_tol=1e-14)
    assert abs(spectrum.quantization_residual(e0, 0, p)) < 1e-12


def test_fig1_energies_frozen(fig1_params):
    for n, expected in FIG1_ENERGIES.items():
        assert math.isclose(spectrum.energy(n, fig1_params).energy, expected,
                            rel_tol=1e-13)


@given(params=params_strategy, n=st.integers(min_value=0, max_value=30))
def test_negative_branch_mirrors_positive(params, n):
    pos = spectrum.energy(n, params, spectrum.Branch.POSITIVE)
    neg = spectrum.energy(n, params, spectrum.Branch.NEGATIVE)
    assert neg.energy == -pos.energy
    assert pos.branch is spectrum.Branch.POSITIVE
    assert neg.branch is spectrum.Branch.NEGATIVE


@given(params=params_strategy, n=st.integers(min_value=0, max_value=30))
def test_energy_squared_closed_form(params, n):
    e = spectrum.energy(n, params).energy
    Q = params.Q
    expected = 2.0 * params.a2 * params.a3 + (params.a2 / Q) * (
        2.0 * n + 1.0 + math.sqrt(1.0 + 4.0 * (Q * params.a3) ** 2)
    )
    assert math.isclose(e * e, expected, rel_tol=1e-12)


@given(params=params_strategy, n=st.integers(min_value=0, max_value=30))
def test_energy_squared_spacing(params, n):
    e_n = spectrum.energy(n, params).energy
    e_next = spectrum.energy(n + 1, params).energy
    assert math.isclose(e_next**2 - e_n**2, 2.0 * params.a2 / params.Q, rel_tol=1e-12)


@given(params=params_strategy, n=st.integers(min_value=0, max_value=30),
       delta=st.floats(min_value=-1.0, max_value=1.0))
def test_energy_independent_of_a1(params, n, delta):
    shifted = PhysicalParams(a1=params.a1 + delta, a2=params.a2, a3=params.a3,
                             mass=params.mass, hbar_c=params.hbar_c)
    assert spectrum.energy(n, params).energy == spectrum.energy(n, shifted).energy


def test_invalid_quantum_numbers():
    p = PhysicalParams(a1=0.0, a2=1.0, a3=1.0, mass=1.0)
    for bad in (-1, 1.5, True, "2"):
        with pytest.raises(DomainError):
            spectrum.energy(bad, p)


def test_quantization_residual_zero_on_grid():
    for a2 in (0.1, 1.0, 2.5):
        for a3 in (0.05, 0.5, 2.0):
            p = PhysicalParams(a1=0.1, a2=a2, a3=a3, mass=0.5)
            for n in range(0, 51, 10):
                e = spectrum.energy(n, p).energy
                assert abs(spectrum.quantization_residual(e, n, p)) < 1e-9


def test_quantization_residual_perturbation_sensitivity(fig1_params):
    eps = math.sqrt(fig1_params.a2 * fig1_params.a3)
    for n in (0, 3, 7):
        e = spectrum.energy(n, fig1_params).energy
        assert abs(spectrum.quantization_residual(e + 0.1 * eps, n, fig1_params)) >= 1e-3


def test_quantization_residual_rejects_nonfinite(fig1_params):
    with pytest.raises(DomainError):
        spectrum.quantization_residual(math.inf, 0, fig1_params)


def test_level_density_paper_examples():
    p1 = PhysicalParams(a1=0.0, a2=1.0, a3=1.0, mass=1.0)
    p2 = PhysicalParams(a1=0.0, a2=2.0, a3=1.0, mass=1.0)
    assert math.isclose(spectrum.level_density_paper(1.0, p1), 1.0, rel_tol=1e-15)
    assert math.isclose(spectrum.level_density_paper(4.0, p2), 1.0, rel_tol=1e-15)
    with pytest.raises(DomainError):
        spectrum.level_density_paper(0.0, p1)
    with pytest.raises(DomainError):
        spectrum.level_density_paper(-1.0, p1)


def test_level_density_consistent_examples():
    p = PhysicalParams(a1=0.0, a2=1.0, a3=1.0, mass=1.0)
    assert math.isclose(spectrum.level_density_consistent(1.0, p), 1.0, rel_tol=1e-15)
    assert math.isclose(spectrum.level_density_consistent(3.0, p), 3.0, rel_tol=1e-15)


def test_level_density_consistent_matches_finite_difference(fig1_params):
    # Treat n as continuous by inverting the closed-form E(n); dn/dE from
    # central differences must match Q*E/a2 to O(h^2).
    p = fig1_params
    Q = p.Q
    root = math.sqrt(1.0 + 4.0 * (Q * p.a3) ** 2)

    def n_of(E):
        return ((E * E - 2.0 * p.a2 * p.a3) * Q / p.a2 - 1.0 - root) / 2.0

    h = 1e-6
    for E in (0.7, 1.0, 1.6):
        fd = (n_of(E + h) - n_of(E - h)) / (2.0 * h)
        assert math.isclose(fd, spectrum.level_density_consistent(E, p), rel_tol=1e-8)


def test_heun_parameters_polynomial_degree(fig1_params):
    for n in (0, 1, 5, 10):
        hp = spectrum.heun_parameters(n, fig1_params)
        assert heun.polynomial_degree(hp) == n


def test_heun_parameters_values(fig1_params):
    # c1 = sqrt(1+4q^2), c2 = -A3, c4 = -2*A1 for the benchmark set.
    hp = spectrum.heun_parameters(0, fig1_params)
    q = fig1_params.Q * fig1_params.a3
    shift = fig1_params.mass + fig1_params.a1
    sq = math.sqrt(fig1_params.Q / fig1_params.a2)
    assert math.isclose(hp.c1, math.sqrt(1.0 + 4.0 * q * q), rel_tol=1e-14)
    assert math.isclose(hp.c2, 2.0 * sq * shift, rel_tol=1e-14)
    assert math.isclose(hp.c4, 4.0 * fig1_params.Q * fig1_params.a3 * shift * sq,
                        rel_tol=1e-14)
    # At E_0 the degree condition pins c3 exactly two above c1.
    assert math.isclose(hp.c3, hp.c1 + 2.0, rel_tol=1e-12)


def test_wavefunction_zero_at_origin(fig1_params):
    grid = np.linspace(0.0, 3.0, 301)
    sample = spectrum.wavefunction(0, fig1_params, grid)
    assert sample.values[0] == 0.0
    assert sample.n == 0


def test_wavefunction_grid_validation(fig1_params):
    with pytest.raises(DomainError):
        spectrum.wavefunction(0, fig1_params, np.array([0.5]))
    with pytest.raises(DomainError):
        spectrum.wavefunction(0, fig1_params, np.array([0.0, 0.0, 1.0]))
    with pytest.raises(DomainError):
        spectrum.wavefunction(0, fig1_params, np.array([-0.5, 0.5]))
    with pytest.raises(DomainError):
        spectrum.wavefunction(0, fig1_params, np.array([0.0, math.nan]))
    with pytest.raises(DomainError):
        spectrum.wavefunction(0, fig1_params, np.ones((2, 2)))


def test_wavefunction_n0_nodeless_decaying(fig1_params):
    grid = spectrum.auto_grid(0, fig1_params)
    sample = spectrum.wavefunction(0, fig1_params, grid, normalize=True)
    vals = sample.values
    assert np.all(vals >= 0.0)
    peak = float(np.max(vals))
    assert peak > 0.0
    assert abs(vals[-1]) < spectrum.DECAY_FRACTION * peak * 1.01
    assert sample.normalized


def test_wavefunction_normalization_quadrature(fig1_params):
    for n in (0, 5, 10):
        grid = spectrum.auto_grid(n, fig1_params)
        sample = spectrum.wavefunction(n, fig1_params, grid, normalize=True)
        norm_sq = 2.0 * np.trapezoid(sample.values**2, grid)
        assert abs(norm_sq - 1.0) < 1e-6
        assert sample.normalized


def test_wavefunction_short_grid_refuses_normalized_flag(fig1_params):
    grid = np.linspace(0.0, 1.0, 101)  # stops well inside the profile
    sample = spectrum.wavefunction(0, fig1_params, grid, normalize=True)
    assert not sample.normalized


def test_wavefunction_unnormalized_flag(fig1_params):
    grid = spectrum.auto_grid(0, fig1_params)
    sample = spectrum.wavefunction(0, fig1_params, grid, normalize=False)
    assert not sample.normalized


def test_wavefunction_uses_degree_n_truncation(fig1_params):
    # The sampled Heun factor is the degree-n cut of the series: dividing the
    # profile by the prefactor recovers that polynomial.
    n = 5
    hp = spectrum.heun_parameters(n, fig1_params)
    poly = heun.truncated_polynomial(hp, n)
    grid = np.linspace(0.1, 3.0, 40)
    sample = spectrum.wavefunction(n, fig1_params, grid)
    q = fig1_params.Q * fig1_params.a3
    shift = fig1_params.mass + fig1_params.a1
    A3 = -2.0 * math.sqrt(fig1_params.Q / fig1_params.a2) * shift
    p = 0.5 + 0.5 * math.sqrt(1.0 + 4.0 * q * q)
    prefactor = grid**p * np.exp(0.5 * (A3 * grid - grid**2))
    assert np.allclose(sample.values / prefactor, heun.evaluate_series(poly, grid),
                       rtol=1e-10)


@settings(deadline=None)
@given(n=st.integers(min_value=0, max_value=8))
def test_auto_grid_covers_decay(n):
    phys = PhysicalParams(a1=0.1, a2=0.1, a3=0.1, mass=0.5)
    grid = spectrum.auto_grid(n, phys, points=801)
    assert grid[0] == 0.0
    assert grid.shape == (801,)
    sample = spectrum.wavefunction(n, phys, grid)
    mag = np.abs(sample.values)
    assert mag[-1] <= spectrum.DECAY_FRACTION * float(np.max(mag)) * 1.01


def test_auto_grid_point_count_validation(fig1_params):
    with pytest.raises(DomainError):
        spectrum.auto_grid(0, fig1_params, points=1)

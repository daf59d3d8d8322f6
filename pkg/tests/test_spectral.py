import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fermient.entanglement import lattice_entanglement, shannon_filling
from fermient.errors import DegeneracyError, DomainError
from fermient.fock import SpinResolved, TotalN
from fermient.models import ModelKind, ModelSpec, build_hamiltonian, momentum_energy, momentum_grid
from fermient.spectral import (
    ThermalParams,
    boltzmann_weights,
    canonical_partition_functions,
    diagonalize,
    grand_canonical_shannon,
    ground_entries,
    log_partition_function,
    mean_filling,
    partition_function,
    restrict,
    thermal_local_entanglement,
)

EKS = ModelSpec(ModelKind.EKS_DIMER)


def test_eks_spectrum():
    d = diagonalize(EKS)
    assert len(d) == 16
    assert np.array_equal(np.round(np.sort(d.energies)), [-1] * 8 + [1] * 8)


def test_hubbard_noninteracting_half_filled_sector():
    spec = ModelSpec(ModelKind.HUBBARD, n_sites=2, t=1.0, U=0.0, boundary="open")
    d = restrict(diagonalize(spec), SpinResolved(1, 1))
    assert np.allclose(np.sort(d.energies), [-2, 0, 0, 2])


def test_free_chain_three_sites_single_particle():
    d = restrict(diagonalize(ModelSpec(ModelKind.FREE_CHAIN, n_sites=3)), TotalN(1))
    assert np.allclose(np.sort(d.energies), [-2, 1, 1])
    # the k <-> -k pair is labelled by momentum, so nothing is flagged
    assert not d.degenerate
    assert sorted(e.label for e in d) == [(0,), (1,), (2,)]


@pytest.mark.parametrize(
    "spec",
    [
        ModelSpec(ModelKind.FREE_CHAIN, n_sites=4, boundary="open"),
        ModelSpec(ModelKind.FREE_CHAIN, n_sites=5),
        ModelSpec(ModelKind.HUBBARD, n_sites=3, U=2.0),
        EKS,
    ],
    ids=["open", "ring", "hubbard", "eks"],
)
def test_decomposition_is_complete_and_orthonormal(spec):
    d = diagonalize(spec)
    assert len(d) == 2**spec.n_modes
    h = build_hamiltonian(spec).matrix()
    vecs = np.array([e.vector.full() for e in d]).T
    assert np.allclose(vecs.conj().T @ vecs, np.eye(len(d)))
    assert np.allclose(h @ vecs, vecs * d.energies)


def test_partition_function_examples():
    for beta in (0.0, 0.3, 2.0):
        assert np.isclose(partition_function(diagonalize(EKS), ThermalParams(beta)), 16 * np.cosh(beta))
        opened = diagonalize(ModelSpec(ModelKind.FREE_CHAIN, n_sites=2, boundary="open"))
        assert np.isclose(partition_function(opened, ThermalParams(beta)), 2 + 2 * np.cosh(beta))
    hub = diagonalize(ModelSpec(ModelKind.HUBBARD, n_sites=2, U=1.5))
    assert np.isclose(partition_function(hub, ThermalParams(0.0, mu=0.7)), 16)


def test_free_chain_partition_function_factorizes():
    spec = ModelSpec(ModelKind.FREE_CHAIN, n_sites=5)
    d = diagonalize(spec)
    band = -2 * np.cos(momentum_grid(5))
    for beta, mu in [(0.4, 0.0), (1.3, -0.6), (2.0, 0.9)]:
        expected = np.prod(1 + np.exp(-beta * (band - mu)))
        assert np.isclose(partition_function(d, ThermalParams(beta, mu)), expected)


@settings(max_examples=20, deadline=None)
@given(st.floats(0, 5), st.floats(0, 5))
def test_partition_function_decreases_with_beta(b1, b2):
    # Z falls with beta whenever every level is non-negative
    d = diagonalize(ModelSpec(ModelKind.FREE_CHAIN, n_sites=3, mu=-3.0))
    assert np.all(d.energies >= 0)
    lo, hi = sorted((b1, b2))
    assert partition_function(d, ThermalParams(lo)) >= partition_function(d, ThermalParams(hi)) - 1e-12


def test_log_partition_function_survives_large_beta():
    d = diagonalize(EKS)
    assert np.isclose(log_partition_function(d, ThermalParams(1e4)), 1e4 + np.log(8))


def test_thermal_params_validation():
    with pytest.raises(DomainError):
        ThermalParams(-1.0)
    with pytest.raises(DomainError):
        ThermalParams(1.0, mu=np.inf)
    with pytest.raises(DomainError):
        partition_function(diagonalize(EKS), ThermalParams(np.inf))


def test_chemical_potential_applied_once():
    d = diagonalize(ModelSpec(ModelKind.FREE_CHAIN, n_sites=3, mu=0.5))
    with pytest.raises(DomainError):
        boltzmann_weights(d, ThermalParams(1.0, mu=0.5))
    shifted = diagonalize(ModelSpec(ModelKind.FREE_CHAIN, n_sites=3))
    assert np.allclose(
        boltzmann_weights(d, ThermalParams(1.0)),
        boltzmann_weights(shifted, ThermalParams(1.0, mu=0.5)),
    )


def test_infinite_temperature_is_uniform():
    d = diagonalize(ModelSpec(ModelKind.HUBBARD, n_sites=2, U=2.0))
    assert np.allclose(boltzmann_weights(d, ThermalParams(0.0)), 1 / 16)


def test_zero_temperature_selects_ground_states():
    d = diagonalize(EKS)
    w = boltzmann_weights(d, ThermalParams(np.inf))
    assert np.allclose(w[d.energies < 0], 1 / 8)
    assert np.all(w[d.energies > 0] == 0)
    half = ground_entries(diagonalize(ModelSpec(ModelKind.HUBBARD, n_sites=2, U=3.0, boundary="open")), mu=1.5)
    assert len(half) == 1 and half[0].n_particles == 2


def test_eks_thermal_entanglement_is_temperature_independent():
    d = diagonalize(EKS)
    for beta in (0.0, 0.5, 1.0, 5.0, 20.0):
        value = thermal_local_entanglement(d, ThermalParams(beta))
        assert abs(value - 0.75 * np.log(2)) < 1e-10


def test_degenerate_contribution_is_refused():
    spec = ModelSpec(ModelKind.FREE_CHAIN, n_sites=4, boundary="open")
    d = diagonalize(spec)
    assert d.degenerate
    with pytest.raises(DegeneracyError, match="N=2"):
        thermal_local_entanglement(d, ThermalParams(1.0))


def test_degeneracy_ignored_when_weight_vanishes():
    # the open four-site chain has a degenerate two-particle sector, but at
    # beta = inf and mu = -1 only the single-particle ground orbital contributes
    spec = ModelSpec(ModelKind.FREE_CHAIN, n_sites=4, boundary="open")
    d = diagonalize(spec)
    assert (TotalN(2), None) in d.degenerate
    assert (TotalN(1), None) not in d.degenerate
    value = thermal_local_entanglement(d, ThermalParams(np.inf, mu=-1.0))
    occupation = 2 / 5 * np.sin(np.pi * np.arange(1, 5) / 5) ** 2
    assert np.isclose(value, np.mean([shannon_filling(n) for n in occupation]))


@pytest.mark.parametrize("beta,mu", list(itertools.product([0.5, 1.0], [-1.0, 0.0, 1.0])))
def test_free_chain_thermal_entanglement_from_sectors(beta, mu):
    spec = ModelSpec(ModelKind.FREE_CHAIN, n_sites=6)
    d = diagonalize(spec)
    params = ThermalParams(beta, mu)
    direct = thermal_local_entanglement(d, params)
    assert abs(direct - grand_canonical_shannon(spec, params)) < 1e-10


def test_canonical_partition_functions():
    spec = ModelSpec(ModelKind.FREE_CHAIN, n_sites=4)
    z_n, shift = canonical_partition_functions(spec, 0.8)
    for n in range(5):
        levels = [momentum_energy(ks) for ks in itertools.combinations(momentum_grid(4), n)]
        assert np.isclose(z_n[n] * np.exp(-0.8 * shift), np.exp(-0.8 * np.array(levels)).sum())
    with pytest.raises(DomainError):
        canonical_partition_functions(EKS, 1.0)


def test_mean_filling():
    spec = ModelSpec(ModelKind.FREE_CHAIN, n_sites=4)
    d = diagonalize(spec)
    assert np.isclose(mean_filling(d, ThermalParams(0.0)), 0.5)
    band = -2 * np.cos(momentum_grid(4))
    beta, mu = 1.2, 0.4
    fermi = 1 / (np.exp(beta * (band - mu)) + 1)
    assert np.isclose(mean_filling(d, ThermalParams(beta, mu)), fermi.mean())


def test_momentum_entries_have_shannon_entropy():
    d = diagonalize(ModelSpec(ModelKind.FREE_CHAIN, n_sites=5))
    for e in d:
        assert np.isclose(lattice_entanglement(e.vector, 5), shannon_filling(e.n_particles / 5))

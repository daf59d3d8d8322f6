"""
Acceptance criteria, one test per criterion.  Each test records a PASS/FAIL
line that is repeated in the terminal summary of the pytest run.
"""

import itertools
from functools import reduce

import numpy as np
from scipy.stats import unitary_group

from fermient.dimer import DEFAULT_GRID, dimer_curve, dimer_ground
from fermient.entanglement import (
    entropy,
    local_rho_number_eigenstate,
    local_rho_spinful_symmetric,
    partial_trace_site,
    shannon_filling,
)
from fermient.errors import DomainError
from fermient.fock import TotalN, build_basis, popcount
from fermient.models import ModelKind, ModelSpec, alpha_minus, alpha_plus, hubbard_dimer_spec
from fermient.spectral import (
    ThermalParams,
    diagonalize,
    entry_entanglement,
    grand_canonical_shannon,
    thermal_local_entanglement,
)
from fermient.cli import car_deviations
from fermient.transform import ModeMap, induce_fock_unitary
from oracles import random_sector_state

LN2 = np.log(2)


def jordan_wigner_annihilators(n_modes):
    """Independent fermion operators from Pauli strings; bit b of the index is mode b."""
    lower = np.array([[0.0, 1.0], [0.0, 0.0]])
    z = np.diag([1.0, -1.0])
    ops = []
    for b in range(n_modes):
        # the first kron factor is the highest mode
        factors = [np.eye(2) if m > b else lower if m == b else z for m in reversed(range(n_modes))]
        ops.append(reduce(np.kron, factors))
    return ops


def test_criterion_01_real_lattice_curve(criterion):
    curve = dimer_curve(grid=DEFAULT_GRID, decomposition="real")
    values = np.array([s for _, s in curve])
    closed = 1 - (alpha_plus(DEFAULT_GRID) ** 4 + 1) / (2 * (alpha_plus(DEFAULT_GRID) ** 2 + 1) ** 2)
    err0 = abs(values[0] - 0.75)
    (_, s_far), = dimer_curve(grid=[1e4], decomposition="real")
    err_far = abs(s_far - 0.5)
    err_grid = np.abs(values - closed).max()
    ok = err0 < 1e-12 and err_far < 1e-6 and err_grid < 1e-10 and len(values) == 201
    criterion(1, ok, f"S(0) err {err0:.1e}, S(1e4) err {err_far:.1e}, closed-form err {err_grid:.1e}")
    assert ok


def test_criterion_02_reciprocal_lattice_curve(criterion):
    curve = dimer_curve(grid=DEFAULT_GRID, decomposition="reciprocal")
    values = np.array([s for _, s in curve])
    a = 1 + alpha_plus(DEFAULT_GRID)
    b = 1 - alpha_plus(DEFAULT_GRID)
    closed = 1 - (a**4 + b**4) / (a**2 + b**2) ** 2
    err0 = abs(values[0])
    (_, s_far), = dimer_curve(grid=[1e4], decomposition="reciprocal")
    err_far = abs(s_far - 0.5)
    err_grid = np.abs(values - closed).max()
    min_step = np.diff(values).min()
    ok = err0 < 1e-12 and min_step >= 0 and err_far < 1e-6 and err_grid < 1e-10
    criterion(2, ok, f"S*(0) {err0:.1e}, min step {min_step:.1e}, S*(1e4) err {err_far:.1e}, closed-form err {err_grid:.1e}")
    assert ok


def test_criterion_03_real_curve_monotone(criterion):
    values = np.array([s for _, s in dimer_curve(grid=DEFAULT_GRID, decomposition="real")])
    max_step = np.diff(values).max()
    ok = max_step <= 0
    criterion(3, ok, f"largest step {max_step:.2e}")
    assert ok


def test_criterion_04_eks_dimer(criterion):
    d = diagonalize(ModelSpec(ModelKind.EKS_DIMER))
    e = np.sort(d.energies)
    spectrum_ok = np.abs(e - np.repeat([-1.0, 1.0], 8)).max() < 1e-12
    thermal = [thermal_local_entanglement(d, ThermalParams(beta)) for beta in (0.0, 0.5, 1.0, 5.0, 20.0)]
    thermal_err = max(abs(s - 0.75 * LN2) for s in thermal)
    per_state = entry_entanglement(d)
    n_zero = int(np.sum(np.abs(per_state) < 1e-10))
    n_ln2 = int(np.sum(np.abs(per_state - LN2) < 1e-10))
    ok = spectrum_ok and thermal_err < 1e-10 and n_zero == 4 and n_ln2 == 12
    criterion(4, ok, f"spectrum +-1 x8: {spectrum_ok}, thermal err {thermal_err:.1e}, {n_zero} zero / {n_ln2} ln2 states")
    assert ok


def test_criterion_05_free_chain(criterion):
    n_sites = 8
    spec = ModelSpec(ModelKind.FREE_CHAIN, n_sites=n_sites)
    d = diagonalize(spec)
    occ_err = ent_err = 0.0
    for entry in d:
        v = entry.vector
        p = np.abs(v.amplitudes) ** 2
        filling = entry.n_particles / n_sites
        for j in range(n_sites):
            occ_err = max(occ_err, abs(p @ ((v.basis.states >> j) & 1) - filling))
            s = entropy(partial_trace_site(v, j))
            ent_err = max(ent_err, abs(s - shannon_filling(filling)))
    thermal_err = 0.0
    for beta, mu in itertools.product([0.5, 1.0], [-1.0, 0.0, 1.0]):
        params = ThermalParams(beta, mu)
        thermal_err = max(thermal_err, abs(thermal_local_entanglement(d, params) - grand_canonical_shannon(spec, params)))
    ok = len(d) == 256 and occ_err < 1e-10 and ent_err < 1e-10 and thermal_err < 1e-10
    criterion(5, ok, f"{len(d)} states, <n_j> err {occ_err:.1e}, entropy err {ent_err:.1e}, thermal err {thermal_err:.1e}")
    assert ok


def test_criterion_06_car(criterion):
    worst = max(car_deviations(5).values())
    ok = worst < 1e-12
    criterion(6, ok, f"M=5 max deviation {worst:.1e}")
    assert ok


def test_criterion_07_fast_paths_match_partial_trace(criterion):
    rng = np.random.default_rng(20240607)
    spinless_err = 0.0
    for _ in range(100):
        n_sites = int(rng.integers(1, 9))
        n = int(rng.integers(0, n_sites + 1))
        v = random_sector_state(build_basis(n_sites, TotalN(n)), rng)
        for mode in range(n_sites):
            diff = local_rho_number_eigenstate(v, mode).rho - partial_trace_site(v, mode).rho
            spinless_err = max(spinless_err, np.abs(diff).max())

    specs = [ModelSpec(ModelKind.EKS_DIMER)] + [hubbard_dimer_spec(1.0, U) for U in (0.0, 1.0, 3.0, 10.0)]
    spinful_err, checked = 0.0, 0
    for spec in specs:
        for entry in diagonalize(spec):
            try:
                fast = local_rho_spinful_symmetric(entry.vector)
            except DomainError:
                continue
            checked += 1
            for site in range(2):
                diff = fast.rho - partial_trace_site(entry.vector, site, 4).rho
                spinful_err = max(spinful_err, np.abs(diff).max())
    ok = spinless_err < 1e-12 and spinful_err < 1e-10 and checked > 0
    criterion(7, ok, f"spinless err {spinless_err:.1e} (100 states), spinful err {spinful_err:.1e} ({checked} states)")
    assert ok


def test_criterion_08_induced_unitaries(criterion):
    n_modes = 3
    c = jordan_wigner_annihilators(n_modes)
    eye = np.eye(2**n_modes)
    rel_err = car_err = vac_err = 0.0
    for seed in range(20):
        u = unitary_group.rvs(n_modes, random_state=seed)
        w = induce_fock_unitary(ModeMap(u)).matrix
        tc = [w @ ci @ w.conj().T for ci in c]
        for i in range(n_modes):
            rel_err = max(rel_err, np.abs(tc[i] - sum(u[i, j] * c[j] for j in range(n_modes))).max())
            for j in range(n_modes):
                car_err = max(car_err, np.abs(tc[i] @ tc[j] + tc[j] @ tc[i]).max())
                dag = tc[j].conj().T
                car_err = max(car_err, np.abs(tc[i] @ dag + dag @ tc[i] - (eye if i == j else 0)).max())
        vac_err = max(vac_err, np.abs(w[:, 0] - eye[:, 0]).max())
    ok = rel_err < 1e-10 and car_err < 1e-10 and vac_err < 1e-10
    criterion(8, ok, f"relation err {rel_err:.1e}, CAR err {car_err:.1e}, vacuum err {vac_err:.1e}")
    assert ok


def test_criterion_09_decomposition_relativity(criterion):
    (_, real), = dimer_curve(grid=[0.0], decomposition="real")
    (_, recip), = dimer_curve(grid=[0.0], decomposition="reciprocal")
    ok = abs(real - 0.75) < 1e-12 and abs(recip) < 1e-12
    criterion(9, ok, f"U=0 ground state: real {real:.12f}, reciprocal {recip:.1e}")
    assert ok


def test_criterion_10_ground_energy(criterion):
    # dense oracle: Hubbard dimer from Pauli-string operators, restricted to one up and one down fermion
    c = jordan_wigner_annihilators(4)
    n = [ci.conj().T @ ci for ci in c]
    hop = sum(c[a].conj().T @ c[a + 2] + c[a + 2].conj().T @ c[a] for a in (0, 1))
    states = np.arange(16)
    half = np.flatnonzero((popcount(states & 0b0101) == 1) & (popcount(states & 0b1010) == 1))
    worst = 0.0
    for x in DEFAULT_GRID:
        t, U = 1.0, 4.0 * x
        h = -t * hop + U * (n[0] @ n[1] + n[2] @ n[3])
        oracle = np.linalg.eigvalsh(h[np.ix_(half, half)])[0]
        energy, _ = dimer_ground(t, U)
        closed = 2 * t * alpha_minus(x)
        worst = max(worst, abs(energy - closed), abs(oracle - closed))
    ok = worst < 1e-10
    criterion(10, ok, f"max |E0 - 2t alpha_-| {worst:.1e} over {len(DEFAULT_GRID)} points")
    assert ok

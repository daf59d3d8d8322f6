import numpy as np
import pytest

from fermient.dimer import (
    DEFAULT_GRID,
    dimer_curve,
    dimer_ground,
    real_lattice_entropy,
    reciprocal_lattice_entropy,
)
from fermient.entanglement import EntropyKind
from fermient.errors import DomainError
from fermient.models import alpha_minus


def test_default_grid():
    assert len(DEFAULT_GRID) == 201
    assert DEFAULT_GRID[0] == 0 and DEFAULT_GRID[-1] == 10


def test_free_dimer_endpoints():
    assert dimer_curve(grid=[0.0])[0][1] == pytest.approx(0.75, abs=1e-12)
    assert dimer_curve(grid=[0.0], decomposition="reciprocal")[0][1] == pytest.approx(0, abs=1e-12)


def test_strong_coupling_approaches_one_half():
    for decomposition in ("real", "reciprocal"):
        (_, s), = dimer_curve(grid=[25.0], decomposition=decomposition)
        assert abs(s - 0.5) < 1e-3


@pytest.mark.parametrize("t", [0.5, 1.0, 3.0])
def test_curve_depends_only_on_ratio(t):
    grid = [0.0, 0.4, 2.0]
    a = dimer_curve(t=t, grid=grid)
    b = dimer_curve(t=1.0, grid=grid)
    assert np.allclose([s for _, s in a], [s for _, s in b], atol=1e-12)


def test_closed_forms_at_sample_points():
    # x = 3/4 gives alpha_+ = 2
    assert real_lattice_entropy(0.75) == pytest.approx(1 - 17 / 50)
    assert reciprocal_lattice_entropy(0.75) == pytest.approx(1 - 82 / 100)


def test_von_neumann_curve_at_zero():
    (_, s), = dimer_curve(grid=[0.0], kind=EntropyKind.VON_NEUMANN)
    assert s == pytest.approx(2 * np.log(2))


def test_ground_energy():
    for U in (0.0, 1.0, 8.0):
        energy, v = dimer_ground(1.0, U)
        assert energy == pytest.approx(2 * alpha_minus(U / 4), abs=1e-12)
        assert v.norm() == pytest.approx(1)


def test_curve_errors():
    with pytest.raises(DomainError):
        dimer_curve(t=0.0)
    with pytest.raises(DomainError):
        dimer_curve(decomposition="momentum")

"""
The EKS dimer swaps the local states of two sites with a fermionic sign.
Its eigenstates are either products or maximally entangled pairs, and the
thermal site entropy does not depend on temperature.
"""
import numpy as np

from fermient import ModelKind, ModelSpec, ThermalParams, diagonalize, thermal_local_entanglement
from fermient.spectral import entry_entanglement

decomp = diagonalize(ModelSpec(ModelKind.EKS_DIMER))
levels, counts = np.unique(np.round(decomp.energies, 12), return_counts=True)
print("spectrum:", dict(zip(levels.tolist(), counts.tolist())))

per_state = entry_entanglement(decomp)
print(f"product eigenstates: {np.sum(per_state < 1e-10)}, "
      f"ln 2 eigenstates: {np.sum(np.abs(per_state - np.log(2)) < 1e-10)}")

for beta in (0.0, 0.5, 1.0, 5.0, 20.0):
    s = thermal_local_entanglement(decomp, ThermalParams(beta))
    print(f"beta = {beta:4.1f}  S = {s:.12f}")
print(f"3/4 ln 2 = {0.75 * np.log(2):.12f}")

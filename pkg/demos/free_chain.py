"""
Free fermions on a ring.  Every plane-wave eigenstate spreads its particles
evenly, so a site's entropy depends only on the filling N/L.  The thermal
site entropy then follows from particle-number statistics alone.
"""
import itertools

import numpy as np

from fermient import ModelKind, ModelSpec, ThermalParams, diagonalize, thermal_local_entanglement
from fermient.entanglement import lattice_entanglement, shannon_filling
from fermient.spectral import grand_canonical_shannon, mean_filling

L = 8
spec = ModelSpec(ModelKind.FREE_CHAIN, n_sites=L)
decomp = diagonalize(spec)

worst = max(abs(lattice_entanglement(e.vector, L) - shannon_filling(e.n_particles / L)) for e in decomp)
print(f"{len(decomp)} momentum eigenstates; largest |S - S(N/L)| = {worst:.1e}")

print(" beta    mu   filling   S(eigenstates)   S(sectors)")
for beta, mu in itertools.product([0.5, 1.0], [-1.0, 0.0, 1.0]):
    params = ThermalParams(beta, mu)
    direct = thermal_local_entanglement(decomp, params)
    print(f"{beta:5.1f} {mu:5.1f}  {mean_filling(decomp, params):8.4f}   "
          f"{direct:.12f}   {grand_canonical_shannon(spec, params):.12f}")

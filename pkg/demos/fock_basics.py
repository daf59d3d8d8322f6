"""
Fermionic Fock space on a few modes: bit-string states, operator signs,
the anticommutation relations and particle-number sectors.
"""
import numpy as np

from fermient import (
    StateVector,
    TotalN,
    annihilate,
    apply_operator,
    build_basis,
    create,
    number_operator,
    realize_matrix,
    sector_split,
)

M = 3

# c†_2 on |mode 0 occupied> passes one fermion -> sign -1
sign, state = apply_operator(2, True, 0b001)
print(f"c+_2 |001> = {sign:+d} |{state:03b}>")

basis = build_basis(M)
c = [realize_matrix(annihilate(i), basis) for i in range(M)]
cd = [realize_matrix(create(i), basis) for i in range(M)]

worst = 0.0
for i in range(M):
    for j in range(M):
        worst = max(worst, np.abs(c[i] @ c[j] + c[j] @ c[i]).max())
        worst = max(worst, np.abs(c[i] @ cd[j] + cd[j] @ c[i] - (i == j) * np.eye(2**M)).max())
print(f"largest CAR deviation on {M} modes: {worst:.1e}")

n_hat = realize_matrix(number_operator(range(M)), basis)
print("N on the full basis:", np.diag(n_hat).real.astype(int))

for n in range(M + 1):
    sector = build_basis(M, TotalN(n))
    print(f"  {TotalN(n)}: {[format(s, f'0{M}b') for s in sector]}")

# split a superposition into its particle-number components
vec = np.zeros(2**M)
vec[0b001] = vec[0b011] = vec[0b111] = 1 / np.sqrt(3)
for label, part in sector_split(StateVector.from_full(vec, M)):
    print(f"  component in {label}: weight {part.norm() ** 2:.3f}")

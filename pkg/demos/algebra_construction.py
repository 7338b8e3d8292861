"""Re-deriving the process from deformed ladder operators.

A q-deformed spin Hamiltonian built from site ladder operators is
symmetric, commutes with the coproduct symmetries, and after a
ground-state conjugation reproduces the hopping rates of the particle
system exactly.  Conjugating the exponential symmetry yields the
duality kernel.
"""

import numpy as np

from asymtransport import configspace as cs
from asymtransport import dualitylab as dl
from asymtransport import models, qalgebra as qa
from asymtransport.configspace import ModelParams
from asymtransport.qcalc import q_number

Q, K, L, n_max = 0.7, 0.85, 3, 3

C = qa.casimir_matrix(K, Q, 8)
scalar = q_number(K, Q) * q_number(K - 1.0, Q)
print("Casimir is scalar: max deviation %.2e (value %.6f)"
      % (np.abs(C - scalar * np.eye(9)).max(), scalar))

H = qa.build_hamiltonian(L, K, Q, n_max)
sym = qa.coproduct_symmetries(L, K, Q, n_max)
worst = max(qa.sector_symmetry_residual(H, sym[name], L, n_max, n_max - 1)
            for name in ("Kplus", "Kminus", "K0", "E", "F"))
print("Hamiltonian commutes with coproduct symmetries: %.2e" % worst)

rates = qa.derive_generator(L, K, Q, n_max)
worst = 0.0
for n in range(n_max + 1):
    sec = cs.enumerate_sector(L, n)
    idx = qa.sector_indices(sec, n_max)
    ref = models.build_generator(
        sec, "asip", ModelParams(q=Q, k=K, L=L)).matrix.toarray()
    worst = max(worst, np.abs(rates[np.ix_(idx, idx)] - ref).max())
print("derived generator matches hopping rates: %.2e" % worst)

D = qa.derive_duality(L, K, Q, n_max)
worst = 0.0
for ne in range(1, n_max + 1):
    for nx in range(ne + 1):
        s_eta = cs.enumerate_sector(L, ne)
        s_xi = cs.enumerate_sector(L, nx)
        ref = dl.d_asip_matrix(s_eta, s_xi, ModelParams(q=Q, k=K, L=L))
        blk = D[np.ix_(qa.sector_indices(s_eta, n_max),
                       qa.sector_indices(s_xi, n_max))]
        worst = max(worst, np.abs(blk - ref).max())
print("derived duality matches kernel:          %.2e" % worst)

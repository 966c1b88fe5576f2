# %% [markdown]
# # Shield-state spectra without matrices
#
# The toy repeater keeps ``l`` copies of a two-qudit shield.  For a phase
# error it is left in ``rho_s^{x l}``, otherwise in
# ``((rho_s + rho_a)/2)^{x l}``.  All of these commute, so every trace norm
# we need is a sum over eigenspace classes, indexed by how many factors are
# symmetric.

# %%
import numpy as np

from noisyrep.chain import ShieldParams, shield_repeater
from noisyrep.operator_spectra import (
    DenseHermitian,
    dense_power,
    dense_projector_asym,
    dense_projector_sym,
    trace_norm_combo,
    trace_norm_dense,
)

# %%
rep = shield_repeater(ShieldParams(d=2, l=4))
for ev, mult, label in rep[1].entries:
    print(f"class {label}: eigenvalue {ev:.6g} x {mult}")
print("trace", rep[1].trace())

# %% [markdown]
# ## Spectral versus dense
#
# The dense oracle builds the same operators from the swap operator and
# explicit Kronecker products.  At ``d = 2, l = 4`` that is a 256 x 256
# eigenproblem; the spectral path touches five numbers.

# %%
rho_s, rho_a = dense_projector_sym(2), dense_projector_asym(2)
eta1 = dense_power(DenseHermitian((rho_s.matrix + rho_a.matrix) / 2), 4)
eta2 = dense_power(rho_s, 4)
b1, b2 = 0.81, 0.09
spectral = trace_norm_combo([b1, -b2], [rep[1], rep[2]])
dense = trace_norm_dense(DenseHermitian(b1 * eta1.matrix - b2 * eta2.matrix))
closed = b1 * (1 - 2**-4) + abs(b1 * 2**-4 - b2)
print(f"spectral {spectral:.15f}\ndense    {dense:.15f}\nclosed   {closed:.15f}")

# %% [markdown]
# ## Large shields
#
# Multiplicities are exact integers, so shields far beyond any dense
# representation are cheap.

# %%
for l in (10, 30, 64):
    big = shield_repeater(ShieldParams(d=3, l=l))
    print(l, len(big[1].entries), "classes, dimension", big[1].dim)

# %% [markdown]
# # Entanglement swapping and the Bell-index group
#
# A noisy channel leaves each link in one of the four Bell states.  When a
# repeater swaps two links, the end-to-end Bell state depends only on the two
# incoming error types.  Here we check that with an explicit state-vector
# simulation, then use the resulting group law to push error distributions
# through several segments.

# %%
import itertools

import numpy as np

from noisyrep.bell_algebra import BellDiagonalDist, compose, convolve, swap_outcomes

# %% [markdown]
# ## Composition table
#
# Rows are the error on the left link, columns the error on the right link.

# %%
table = np.array([[int(compose(i, j)) for j in range(1, 5)] for i in range(1, 5)])
print(table)

# %% [markdown]
# The table is the Klein four-group: 1 is the identity and every element is
# its own inverse.  Simulating the 4-qubit swap for every input pair and every
# Bell-measurement outcome reproduces it.

# %%
for i, j in itertools.product(range(1, 5), repeat=2):
    results = {int(o.result) for o in swap_outcomes(i, j)}
    worst = min(o.overlap for o in swap_outcomes(i, j))
    print(f"phi_{i} x phi_{j} -> {results}  (worst overlap {worst:.12f})")

# %% [markdown]
# ## Phase errors over several segments
#
# With phase-flip probability ``q`` per segment, the end-to-end phase error is
# the parity of the individual flips.

# %%
q = 0.05
segment = BellDiagonalDist((1 - q, q, 0.0, 0.0))
for hops in range(1, 7):
    beta = convolve([segment] * hops).beta
    closed = (1 - (1 - 2 * q) ** hops) / 2
    print(f"{hops} segments: P(phase error) = {beta[1]:.6f}  closed form {closed:.6f}")

# %% [markdown]
# # Chains of noisy repeaters
#
# With several repeaters each one ends up in a state that depends on the
# Bell index it saw locally.  The honest parties' final index is fixed by the
# group law, but the joint repeater state is a correlated mixture, which we
# track exactly.

# %%
from noisyrep.bell_algebra import BellDiagonalDist, convolve
from noisyrep.chain import ShieldParams, chain_state, shield_repeater
from noisyrep.secrecy import oneway_rate, untwist

# %%
def phase_segment(q):
    return BellDiagonalDist((1 - q, q, 0.0, 0.0))


q = 0.03
for n in (1, 2, 3, 4):
    segments = [phase_segment(q)] * (n + 1)
    reps = [shield_repeater(ShieldParams(2, 4))] * n
    state = chain_state(segments, reps)
    bare = convolve(segments)
    report = oneway_rate(state)
    print(
        f"N={n}: beta={tuple(round(b, 5) for b in state.beta)}  "
        f"lambda={tuple(round(v, 5) for v in untwist(state))}  rate={report.rate_oneway:.4f}"
    )
    assert max(abs(a - b) for a, b in zip(state.beta, bare.beta)) < 1e-12

# %% [markdown]
# The Bell weights are just the convolution of the segment noise.  A single
# repeater gains nothing here (its phase-error class is still dominated by the
# no-error weight), but from two repeaters on the joint shield states absorb
# most of the accumulated phase errors.

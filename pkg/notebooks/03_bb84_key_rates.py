# %% [markdown]
# # BB84 through a noisy repeater: key-rate curves and thresholds
#
# The shared state is Bell-diagonal with weights
# ``((1-Q)^2, Q(1-Q), Q(1-Q), Q^2)``.  A shield repeater that reacts only to
# phase errors lets the honest parties ignore part of those errors, raising
# the tolerable QBER.

# %%
import numpy as np

from noisyrep.chain import ShieldParams, bb84_state, shield_repeater, shield_repeater_asymptotic
from noisyrep.secrecy import oneway_rate, qber_threshold

# %%
qs = np.round(np.arange(0.0, 0.2501, 0.01), 4)
models = {f"l={l}": shield_repeater(ShieldParams(2, l)) for l in (0, 4, 10)}
models["l=inf"] = shield_repeater_asymptotic()

print("    Q  " + "  ".join(f"{name:>8}" for name in models))
for q in qs:
    rates = [oneway_rate(bb84_state(q, rep)).rate_oneway for rep in models.values()]
    print(f"{q:.2f}  " + "  ".join(f"{r:8.4f}" for r in rates))

# %% [markdown]
# ## Thresholds
#
# Without repeaters the one-way bound dies at the familiar 11%.  With an
# infinitely large shield it reaches the root of ``1 = (1+Q) h(Q)``.

# %%
for name, rep in models.items():
    q_one = qber_threshold(lambda q: bb84_state(q, rep), "oneway")
    q_two = qber_threshold(lambda q: bb84_state(q, rep), "twoway")
    print(f"{name:>6}: one-way {q_one:.4f}   two-way {q_two:.4f}")

# %% [markdown]
# ## Optional plot

# %%
try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    fine = np.linspace(0, 0.3, 301)
    fig, ax = plt.subplots(figsize=(5, 3.5))
    for name, rep in models.items():
        ax.plot(fine, [oneway_rate(bb84_state(q, rep)).rate_oneway for q in fine], label=name)
    ax.axhline(0, color="k", lw=0.5)
    ax.set_ylim(-0.05, 1)
    ax.set_xlabel("QBER")
    ax.set_ylabel("one-way key rate bound")
    ax.legend()
    fig.tight_layout()
    fig.savefig("bb84_key_rates.png", dpi=120)

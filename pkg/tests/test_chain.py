import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import brute_force_chain, dense_shield, random_simplex
from noisyrep.bell_algebra import BellDiagonalDist, convolve
from noisyrep.chain import (
    ChainState,
    RepeaterModel,
    ShieldParams,
    bb84_state,
    chain_state,
    shield_repeater,
    shield_repeater_asymptotic,
    shield_repeater_orthogonal,
    single_repeater_state,
    trivial_repeater,
)
from noisyrep.errors import BadDimension, BadQber, FamilyMismatch, SizeLimit
from noisyrep.operator_spectra import (
    DenseHermitian,
    overlap,
    projector_sym,
    tensor,
    trace_norm_combo,
    trace_norm_dense,
)

IDEAL = BellDiagonalDist.point(1)


def phase(q):
    return BellDiagonalDist((1 - q, q, 0.0, 0.0))


def eigs(op):
    return np.sort(np.concatenate([np.full(m, ev) for ev, m in op.spectrum()]))


def test_single_repeater_ideal():
    rep = shield_repeater(ShieldParams(2, 3))
    s = single_repeater_state(IDEAL, IDEAL, rep)
    assert s.beta.beta == (1.0, 0.0, 0.0, 0.0)
    assert s.eta[0] == rep[1]


def test_single_repeater_one_sided_noise():
    rep = shield_repeater(ShieldParams(2, 2))
    s = single_repeater_state(phase(0.2), IDEAL, rep)
    np.testing.assert_allclose(s.beta.beta, (0.8, 0.2, 0, 0), atol=1e-15)
    assert s.eta == rep.eta


@pytest.mark.parametrize("q", [0.05, 0.2, 0.5])
def test_single_repeater_two_sided_noise(q):
    s = single_repeater_state(phase(q), phase(q), trivial_repeater())
    np.testing.assert_allclose(s.beta.beta, (1 - 2 * q + 2 * q * q, 2 * q * (1 - q), 0, 0), atol=1e-15)


def test_single_repeater_family_check():
    with pytest.raises(FamilyMismatch):
        RepeaterModel((projector_sym(2), projector_sym(3), projector_sym(2), projector_sym(2)))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_chain_all_ideal(n):
    reps = [shield_repeater(ShieldParams(2, l)) for l in range(1, n + 1)]
    s = chain_state([IDEAL] * (n + 1), reps)
    assert s.beta.beta == (1.0, 0.0, 0.0, 0.0)
    assert s.eta[0] == tensor(*(r[1] for r in reps))


def test_chain_n1_reduces_to_single_repeater(rng):
    rep = shield_repeater(ShieldParams(3, 2))
    for _ in range(10):
        left = BellDiagonalDist(tuple(random_simplex(rng)))
        right = BellDiagonalDist(tuple(random_simplex(rng)))
        a = chain_state([left, right], [rep])
        b = single_repeater_state(left, right, rep)
        np.testing.assert_allclose(a.beta.beta, b.beta.beta, atol=1e-15)
        assert a.eta == b.eta


def test_chain_n2_phase_noise_matches_dense_enumeration():
    q = 0.07
    segments = [phase(q)] * 3
    reps = [shield_repeater(ShieldParams(2, 1))] * 2
    s = chain_state(segments, reps)
    beta, etas = brute_force_chain([seg.beta for seg in segments], [dense_shield(2, 1)] * 2)
    np.testing.assert_allclose(s.beta.beta, beta, atol=1e-12)
    for k in range(4):
        if etas[k] is not None:
            np.testing.assert_allclose(eigs(s.eta[k]), np.linalg.eigvalsh(etas[k]), atol=1e-12)
    dense = trace_norm_dense(DenseHermitian(beta[0] * etas[0] - beta[1] * etas[1]))
    spectral = trace_norm_combo([s.beta[1], -s.beta[2]], [s.eta[0], s.eta[1]])
    assert spectral == pytest.approx(dense, abs=1e-12)


@pytest.mark.parametrize("n", [2, 3])
def test_chain_random_segments_match_dense_enumeration(rng, n):
    segments = [random_simplex(rng) for _ in range(n + 1)]
    sizes = [1] * n
    reps = [shield_repeater(ShieldParams(2, l)) for l in sizes]
    s = chain_state([BellDiagonalDist(tuple(b)) for b in segments], reps)
    beta, etas = brute_force_chain(segments, [dense_shield(2, l) for l in sizes])
    np.testing.assert_allclose(s.beta.beta, beta, atol=1e-12)
    for k, m in itertools.product(range(4), repeat=2):
        if etas[k] is None or etas[m] is None:
            continue
        for sign in (1, -1):
            ref = trace_norm_dense(DenseHermitian(beta[k] * etas[k] + sign * beta[m] * etas[m]))
            got = trace_norm_combo([s.beta.beta[k], sign * s.beta.beta[m]], [s.eta[k], s.eta[m]])
            assert got == pytest.approx(ref, abs=1e-10)


def test_chain_tracks_correlations_jointly():
    segments = [phase(0.3)] * 3
    reps = [shield_repeater_orthogonal(ShieldParams(2, 1))] * 2
    s = chain_state(segments, reps)
    # End index 1 arises from local histories (1, 1) and (2, 1).
    w11 = (0.7**2 + 0.3**2) * 0.7
    w21 = (2 * 0.7 * 0.3) * 0.3
    assert s.beta[1] == pytest.approx(w11 + w21, abs=1e-15)
    a, sym = (("a", 1),), (("s", 1),)
    labels = {label: (ev, m) for ev, m, label in s.eta[0].entries}
    assert labels[(a, a)] == pytest.approx((w11 / (w11 + w21), 1))
    assert labels[(sym, a)] == pytest.approx((w21 / (w11 + w21) / 3, 3))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5), st.randoms(use_true_random=False), st.data())
def test_chain_beta_is_convolution(n, rnd, data):
    segs = []
    for _ in range(n + 1):
        v = np.array(data.draw(st.lists(st.floats(0.01, 1.0), min_size=4, max_size=4)))
        segs.append(BellDiagonalDist(tuple(v / v.sum())))
    sizes = [rnd.randint(0, 2) for _ in range(n)]
    reps = [shield_repeater(ShieldParams(2, l)) for l in sizes]
    s = chain_state(segs, reps)
    np.testing.assert_allclose(s.beta.beta, convolve(segs).beta, atol=1e-12)
    assert abs(sum(s.beta.beta) - 1) <= 1e-12
    for op in s.eta:
        assert op.trace() == pytest.approx(1, abs=1e-10)
    shuffled = list(sizes)
    rnd.shuffle(shuffled)
    s2 = chain_state(segs, [shield_repeater(ShieldParams(2, l)) for l in shuffled])
    np.testing.assert_allclose(s.beta.beta, s2.beta.beta, atol=1e-15)


def test_chain_placeholder_for_zero_weight():
    reps = [shield_repeater(ShieldParams(2, 1))] * 2
    s = chain_state([phase(0.1)] * 3, reps)
    assert s.beta[3] == 0
    assert s.eta[2] == tensor(reps[0][1], reps[1][3])


def test_chain_size_limit():
    reps = [trivial_repeater()] * 9
    with pytest.raises(SizeLimit):
        chain_state([IDEAL] * 10, reps)
    # the default cap admits eight repeaters
    s = chain_state([phase(0.01)] * 9, [trivial_repeater()] * 8)
    assert s.beta[1] > 0.9


def test_chain_allows_different_repeaters_per_node():
    reps = [shield_repeater(ShieldParams(2, 1)), trivial_repeater()]
    s = chain_state([phase(0.1)] * 3, reps)
    assert s.eta[0].dim == 4


def test_chain_state_rejects_mixed_families():
    with pytest.raises(FamilyMismatch):
        ChainState(IDEAL, (projector_sym(2), projector_sym(2), projector_sym(2), projector_sym(3)))


def test_chain_segment_count_checked():
    with pytest.raises(ValueError):
        chain_state([IDEAL] * 2, [trivial_repeater()] * 2)


def test_bb84_state_examples():
    rep = shield_repeater(ShieldParams(2, 2))
    assert bb84_state(0.0, rep).beta.beta == (1.0, 0.0, 0.0, 0.0)
    np.testing.assert_allclose(bb84_state(0.1, rep).beta.beta, (0.81, 0.09, 0.09, 0.01), atol=1e-15)
    np.testing.assert_allclose(bb84_state(0.5, rep).beta.beta, (0.25,) * 4, atol=1e-15)
    assert bb84_state(0.1, rep).eta == rep.eta
    for q in (-0.01, 0.51):
        with pytest.raises(BadQber):
            bb84_state(q, rep)


def test_shield_repeater_l0_is_scalar():
    rep = shield_repeater(ShieldParams(3, 0))
    for op in rep.eta:
        assert op.dim == 1
        assert op.entries == ((1.0, 1, ()),)


def test_shield_repeater_d2_l1():
    rep = shield_repeater(ShieldParams(2, 1))
    assert rep[2].entries == ((1 / 3, 3, (("s", 1),)),)
    assert sorted((ev, m) for ev, m, _ in rep[1].entries) == [(1 / 6, 3), (0.5, 1)]
    assert rep[1] == rep[3] == rep[4]


def test_shield_variants():
    orth = shield_repeater_orthogonal(ShieldParams(2, 3))
    assert overlap(orth[1], orth[2]) == 0
    asym = shield_repeater_asymptotic()
    assert overlap(asym[1], asym[2]) == 0
    assert trace_norm_combo([0.4, -0.3], [asym[1], asym[2]]) == pytest.approx(0.7)
    with pytest.raises(BadDimension):
        ShieldParams(1, 2)


def test_chain_state_validation():
    rep = trivial_repeater()
    with pytest.raises(ValueError):
        ChainState((0.5, 0.5, 0.5, 0.0), rep.eta)

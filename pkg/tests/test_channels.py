import numpy as np
import pytest

from dofnet.channels import (ChannelRealization, apply_channel, assemble_T, assemble_T_multi,
                             generate_base_vectors, generate_channels, multi_blocks, stacked,
                             stacked_all)
from dofnet.demand import DemandSpec
from dofnet.errors import SingularChannelError, SpecError

from networks import CHAIN, MIMO


def test_channels_deterministic():
    a = generate_channels(CHAIN, 24, 42)
    b = generate_channels(CHAIN, 24, 42)
    assert a.H.shape == (3, 4, 24, 1, 1)
    assert np.array_equal(a.H, b.H)


def test_channels_bounded():
    for seed in range(5):
        mags = np.abs(generate_channels(MIMO, 64, seed).H)
        assert mags.min() >= 0.5 and mags.max() <= 2.0


def test_channels_differ_across_seeds():
    assert not np.array_equal(generate_channels(CHAIN, 24, 1).H, generate_channels(CHAIN, 24, 2).H)


def test_channels_and_bases_use_separate_streams():
    h = generate_channels(DemandSpec(1, 1, ({1},)), 8, 5).H.reshape(-1)
    w = generate_base_vectors(8, 1, 5)[1]
    assert not np.allclose(h, w)


def test_channel_argument_checks():
    with pytest.raises(SpecError):
        generate_channels(CHAIN, 0, 1)
    with pytest.raises(SpecError):
        generate_channels(CHAIN, 4, -1)
    with pytest.raises(SpecError):
        generate_channels(CHAIN, 4, 1, lo=2.0, hi=1.0)


def test_base_vectors():
    b = generate_base_vectors(24, 1, 7)
    assert len(b) == 1 and b[1].shape == (24,)
    assert 0.5 <= np.abs(b[1]).min() and np.abs(b[1]).max() <= 2.0
    assert np.array_equal(b.w, generate_base_vectors(24, 1, 7).w)
    assert len(generate_base_vectors(24, 0, 7)) == 0


def fixed_realization(spec, H):
    H = np.asarray(H, dtype=complex)
    return ChannelRealization(spec, H.shape[2], H, seed=0)


def test_T_identity_for_equal_channels():
    chan = generate_channels(CHAIN, 16, 3)
    H = np.array(chan.H)
    H[0, 3] = H[0, 2]
    T = assemble_T(fixed_realization(CHAIN, H), 3, 4, 1)
    assert np.max(np.abs(T.diag - 1.0)) < 1e-15


def test_T_reconstruction_and_bounds():
    chan = generate_channels(CHAIN, 24, 11)
    w = generate_base_vectors(24, 1, 11)[1]
    for m, n, j in [(3, 4, 1), (1, 4, 2), (1, 2, 3)]:
        T = assemble_T(chan, m, n, j)
        lhs = chan.scalar(j, m) * (T.diag * w)
        assert np.max(np.abs(lhs - chan.scalar(j, n) * w)) < 1e-12
        assert np.all(np.abs(T.diag) >= 0.25) and np.all(np.abs(T.diag) <= 4.0)


def test_assemble_T_needs_single_antenna():
    with pytest.raises(SpecError):
        assemble_T(generate_channels(MIMO, 4, 0), 2, 3, 1)


def test_stacked_layout():
    chan = generate_channels(MIMO, 5, 0)
    S = stacked(chan, 1, 2, 2)
    assert S.shape == (10, 5)
    assert S[5 + 3, 3] == chan.H[0, 1, 3, 1, 1]
    assert S[3, 3] == chan.H[0, 1, 3, 0, 1]
    assert stacked_all(chan, 1, 2).shape == (10, 10)


@pytest.mark.parametrize("seed", range(3))
def test_multi_blocks_are_diagonal(seed):
    chan = generate_channels(MIMO, 256, seed)
    for m, n, j in [(2, 3, 1), (1, 3, 2)]:
        for p in (1, 2):
            diags, residuals = multi_blocks(chan, m, n, p, j)
            assert diags.shape == (2, 256)
            assert max(residuals) < 1e-9


def test_multi_reconstruction():
    chan = generate_channels(MIMO, 32, 4)
    for p in (1, 2):
        blocks = [np.diag(assemble_T_multi(chan, 2, 3, p, q, 1).diag) for q in (1, 2)]
        rebuilt = stacked_all(chan, 1, 2) @ np.vstack(blocks)
        assert np.max(np.abs(rebuilt - stacked(chan, 1, 3, p))) < 1e-10


def test_multi_identity_channels():
    tau = 6
    H = np.broadcast_to(np.eye(2), (2, 3, tau, 2, 2))
    chan = fixed_realization(MIMO, H)
    for p in (1, 2):
        for q in (1, 2):
            T = assemble_T_multi(chan, 2, 3, p, q, 1)
            assert np.array_equal(T.diag, np.full(tau, 1.0 if p == q else 0.0))
            assert T.residual == 0.0


def test_multi_dense_limit_skips_residual():
    chan = generate_channels(MIMO, 16, 0)
    diags, residuals = multi_blocks(chan, 2, 3, 1, 1, dense_limit=8)
    _, dense = multi_blocks(chan, 2, 3, 1, 1)
    assert residuals == [None, None]
    assert np.allclose(diags, multi_blocks(chan, 2, 3, 1, 1)[0])
    assert all(r < 1e-12 for r in dense)


def test_multi_singular_channel():
    H = np.array(generate_channels(MIMO, 4, 0).H)
    H[0, 1, 2] = [[1, 2], [2, 4]]
    with pytest.raises(SingularChannelError):
        multi_blocks(fixed_realization(MIMO, H), 2, 3, 1, 1)


def test_apply_channel_shapes():
    V = np.ones((8, 3), dtype=complex)
    chan = generate_channels(MIMO, 8, 0)
    out = apply_channel(chan, 1, 2, V, p=1)
    assert out.shape == (16, 3)
    assert np.allclose(out[:8, 0], chan.H[0, 1, :, 0, 0])
    single = generate_channels(CHAIN, 8, 0)
    assert np.allclose(apply_channel(single, 1, 2, V)[:, 0], single.scalar(1, 2))

import math

import numpy as np
import pytest

from exchange_ft.encoding import (
    BlockLayout,
    BlockResult,
    DecodeFailure,
    decode,
    encode,
    measure_block,
    reset_block,
    total_leakage_weight,
)
from exchange_ft.linalg import basis_state, expm_hermitian
from exchange_ft.pulses import logical_generators


def test_encode_basis_states():
    layout = BlockLayout(1)
    assert np.allclose(encode(0, layout), basis_state(2, "01"))
    assert np.allclose(encode(1, layout), basis_state(2, "10"))


def test_encode_is_linear():
    layout = BlockLayout(1)
    plus = np.array([1.0, 1.0]) / math.sqrt(2)
    expected = (basis_state(2, "01") + basis_state(2, "10")) / math.sqrt(2)
    assert np.allclose(encode(plus, layout), expected)


def test_encode_decode_roundtrip():
    rng = np.random.default_rng(1)
    layout = BlockLayout(3)
    logical = rng.normal(size=8) + 1j * rng.normal(size=8)
    logical = logical / np.linalg.norm(logical)
    state = encode(logical, layout)
    out, leak = decode(state, layout)
    assert leak < 1e-15
    assert np.allclose(out, logical)


def test_decode_failure_on_pure_leakage():
    layout = BlockLayout(1)
    with pytest.raises(DecodeFailure):
        decode(basis_state(2, "00"), layout)


def test_decode_partial_leakage():
    layout = BlockLayout(1)
    state = (basis_state(2, "01") + basis_state(2, "00")) / math.sqrt(2)
    logical, leak = decode(state, layout)
    assert abs(leak - 0.5) < 1e-12
    assert np.allclose(logical, [1.0, 0.0])


def test_measure_block_deterministic_outcomes():
    layout = BlockLayout(2)
    rng = np.random.default_rng(0)
    state = np.kron(basis_state(2, "01"), basis_state(2, "10"))
    out = measure_block(state, 1, layout, rng)
    assert out.result is BlockResult.ZERO_L and abs(out.probability - 1.0) < 1e-12
    state = np.kron(basis_state(2, "00"), basis_state(2, "01"))
    out = measure_block(state, 1, layout, rng)
    assert out.result is BlockResult.LEAK00


def test_measure_block_born_statistics():
    layout = BlockLayout(2)
    plus_l = (basis_state(2, "01") + basis_state(2, "10")) / math.sqrt(2)
    state = np.kron(plus_l, basis_state(2, "01"))
    rng = np.random.default_rng(314)
    hits = sum(
        measure_block(state, 1, layout, rng).result is BlockResult.ZERO_L
        for _ in range(10_000)
    )
    assert abs(hits / 10_000 - 0.5) < 0.02


def test_measure_block_leaves_other_blocks_alone():
    layout = BlockLayout(2)
    rng = np.random.default_rng(9)
    other = np.array([0.6, 0.0, 0.8j, 0.0])  # block-2 state in its own 4-dim space
    other = other / np.linalg.norm(other)
    plus_l = (basis_state(2, "01") + basis_state(2, "10")) / math.sqrt(2)
    state = np.kron(plus_l, other)
    out = measure_block(state, 1, layout, rng)
    post = out.post_state.reshape(4, 4)
    # the post state is (block-1 basis state) (x) other, so every nonzero row
    # of the reshape must be proportional to `other`
    for row in post:
        if np.linalg.norm(row) > 1e-12:
            overlap = abs(np.vdot(other, row)) / np.linalg.norm(row)
            assert abs(overlap - 1.0) < 1e-12


def test_misassignment_flips_label_only():
    layout = BlockLayout(1)
    state = basis_state(2, "01")
    rng = np.random.default_rng(4)
    out = measure_block(state, 1, layout, rng, misassign=1.0)
    assert out.result is BlockResult.ONE_L  # reported label flipped
    assert np.allclose(out.post_state, state)  # physics unaffected


def test_logical_x_pulse_swaps_codewords():
    layout = BlockLayout(1)
    gen = logical_generators(1, 2)
    U = expm_hermitian(gen.x, math.pi / 2)  # half rotation: |0_L> -> -i|1_L>
    out = U @ encode(0, layout)
    assert abs(abs(np.vdot(encode(1, layout), out)) - 1.0) < 1e-12


def test_logical_generators_annihilate_leakage():
    gen = logical_generators(1, 2)
    for bits in ("00", "11"):
        v = basis_state(2, bits)
        assert np.max(np.abs(gen.x @ v)) == 0.0
        assert np.max(np.abs(gen.z @ v)) == 0.0


def test_reset_block_returns_to_zero_l():
    layout = BlockLayout(2)
    for bits, outcome in (
        ("01", BlockResult.ZERO_L),
        ("10", BlockResult.ONE_L),
        ("00", BlockResult.LEAK00),
        ("11", BlockResult.LEAK11),
    ):
        state = np.kron(basis_state(2, bits), basis_state(2, "10"))
        out = reset_block(state, 1, layout, outcome)
        assert np.allclose(out, np.kron(basis_state(2, "01"), basis_state(2, "10")))


def test_total_leakage_weight():
    layout = BlockLayout(1)
    state = (basis_state(2, "01") + basis_state(2, "11")) / math.sqrt(2)
    assert abs(total_leakage_weight(state, layout) - 0.5) < 1e-12

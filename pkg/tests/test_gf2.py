"""Tests for packed-word GF(2) linear algebra.

Fixed cases pin down the contract; randomized cases compare against the
independent integer-bitmask oracles; hypothesis properties cover rank
symmetry, solve-by-substitution, and span closure under XOR.
"""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from stc3d import gf2
from stc3d.gf2 import BinMatrix, BitVec, Echelon

from oracles import (
    bits_of_mask,
    mask_of_bits,
    naive_in_span,
    naive_matvec,
    naive_rank,
    naive_solve,
)


def random_dense(rng, n_rows, n_cols, density=0.5):
    return (rng.random((n_rows, n_cols)) < density).astype(np.uint8)


def row_masks(dense):
    return [mask_of_bits(row) for row in dense]


# ---------------------------------------------------------------------------
# BitVec basics
# ---------------------------------------------------------------------------


def test_bitvec_roundtrip_and_weight():
    bits = [1, 0, 1, 1, 0, 0, 1] + [0] * 120 + [1]
    v = BitVec.from_bits(bits)
    assert v.n == len(bits)
    assert v.to_bits().tolist() == bits
    assert v.weight() == sum(bits)
    assert v.support().tolist() == [i for i, b in enumerate(bits) if b]


def test_bitvec_from_indices_duplicates_cancel():
    v = BitVec.from_indices(10, [3, 5, 3])
    assert v.support().tolist() == [5]


def test_bitvec_xor_and_dot():
    a = BitVec.from_bits([1, 1, 0, 0, 1])
    b = BitVec.from_bits([1, 0, 1, 0, 1])
    assert (a ^ b).to_bits().tolist() == [0, 1, 1, 0, 0]
    assert (a & b).to_bits().tolist() == [1, 0, 0, 0, 1]
    assert a.dot(b) == 0
    assert a.dot(BitVec.from_bits([0, 1, 0, 0, 0])) == 1


def test_bitvec_getitem_and_len():
    v = BitVec.from_indices(130, [0, 64, 129])
    assert len(v) == 130
    assert v[0] == 1 and v[64] == 1 and v[129] == 1 and v[1] == 0
    assert v[-1] == 1
    with pytest.raises(IndexError):
        v[130]


def test_bitvec_is_immutable():
    v = BitVec.from_bits([1, 0, 1])
    with pytest.raises(ValueError):
        v.words[0] = 0


def test_basis_labels_checked_on_xor():
    a = BitVec.from_bits([1, 0], basis="qubits")
    b = BitVec.from_bits([0, 1], basis="edges")
    with pytest.raises(ValueError, match="basis mismatch"):
        a ^ b
    unlabeled = BitVec.from_bits([0, 1])
    assert (a ^ unlabeled).basis == "qubits"


def test_empty_bitvec():
    v = BitVec.zeros(0)
    assert v.weight() == 0
    assert v.is_zero()


# ---------------------------------------------------------------------------
# BinMatrix basics
# ---------------------------------------------------------------------------


def test_binmatrix_dense_roundtrip():
    rng = np.random.default_rng(7)
    dense = random_dense(rng, 13, 70)
    m = BinMatrix.from_dense(dense)
    assert m.shape == (13, 70)
    assert np.array_equal(m.to_dense(), dense)
    assert np.array_equal(m.transpose().to_dense(), dense.T)
    assert m.row(4) == BitVec.from_bits(dense[4])


def test_binmatrix_from_rows_checks_lengths():
    rows = [BitVec.from_bits([1, 0, 1]), BitVec.from_bits([0, 1])]
    with pytest.raises(ValueError):
        BinMatrix.from_rows(rows)


def test_matvec_matches_dense_arithmetic():
    rng = np.random.default_rng(11)
    for _ in range(20):
        n_rows = int(rng.integers(0, 40))
        n_cols = int(rng.integers(1, 90))
        dense = random_dense(rng, n_rows, n_cols)
        x_bits = random_dense(rng, 1, n_cols)[0]
        m = BinMatrix.from_dense(dense)
        x = BitVec.from_bits(x_bits)
        got = m.matvec(x).to_bits()
        want = (dense @ x_bits) % 2
        assert np.array_equal(got, want.astype(np.uint8))


def test_matmat_matches_dense_arithmetic():
    rng = np.random.default_rng(13)
    for _ in range(10):
        a = random_dense(rng, int(rng.integers(1, 25)), int(rng.integers(1, 25)))
        b = random_dense(rng, a.shape[1], int(rng.integers(1, 25)))
        got = (BinMatrix.from_dense(a) @ BinMatrix.from_dense(b)).to_dense()
        want = (a @ b) % 2
        assert np.array_equal(got, want.astype(np.uint8))


def test_stacking():
    a = BinMatrix.from_dense([[1, 0], [0, 1]])
    b = BinMatrix.from_dense([[1, 1]])
    v = BinMatrix.vstack([a, b])
    assert v.to_dense().tolist() == [[1, 0], [0, 1], [1, 1]]
    h = BinMatrix.hstack([a, a])
    assert h.to_dense().tolist() == [[1, 0, 1, 0], [0, 1, 0, 1]]


# ---------------------------------------------------------------------------
# rank: fixed cases, then oracle comparison
# ---------------------------------------------------------------------------


def test_rank_identity_3x3():
    assert gf2.rank(BinMatrix.identity(3)) == 3


def test_rank_zero_4x7():
    assert gf2.rank(BinMatrix.zeros(4, 7)) == 0


def test_rank_duplicate_rows_is_one():
    row = [1, 0, 1, 1, 0]
    m = BinMatrix.from_dense([row, row])
    assert gf2.rank(m) == 1


def test_rank_does_not_modify_input():
    rng = np.random.default_rng(3)
    dense = random_dense(rng, 12, 18)
    m = BinMatrix.from_dense(dense)
    gf2.rank(m)
    assert np.array_equal(m.to_dense(), dense)


def test_rank_empty_shapes():
    assert gf2.rank(BinMatrix.zeros(0, 5)) == 0
    assert gf2.rank(BinMatrix.zeros(5, 0)) == 0


def test_rank_against_oracle():
    rng = np.random.default_rng(101)
    for _ in range(60):
        n_rows = int(rng.integers(1, 50))
        n_cols = int(rng.integers(1, 50))
        dense = random_dense(rng, n_rows, n_cols, density=rng.uniform(0.05, 0.9))
        m = BinMatrix.from_dense(dense)
        assert gf2.rank(m) == naive_rank(row_masks(dense))


def test_rank_equals_transpose_rank_up_to_200():
    rng = np.random.default_rng(202)
    sizes = [(200, 200), (200, 120), (7, 200)] + [
        (int(rng.integers(1, 201)), int(rng.integers(1, 201))) for _ in range(12)
    ]
    for n_rows, n_cols in sizes:
        dense = random_dense(rng, n_rows, n_cols, density=rng.uniform(0.05, 0.9))
        m = BinMatrix.from_dense(dense)
        assert gf2.rank(m) == gf2.rank(m.transpose())


# ---------------------------------------------------------------------------
# solve: fixed cases, substitution checks, oracle comparison
# ---------------------------------------------------------------------------


def test_solve_identity_returns_rhs():
    b = BitVec.from_bits([1, 0, 1, 1])
    x = gf2.solve(BinMatrix.identity(4), b)
    assert x == b


def test_solve_zero_rhs_returns_zero():
    rng = np.random.default_rng(5)
    m = BinMatrix.from_dense(random_dense(rng, 6, 9))
    x = gf2.solve(m, BitVec.zeros(6))
    assert x is not None and x.is_zero()


def test_solve_random_20x30_by_substitution():
    rng = np.random.default_rng(20)
    dense = random_dense(rng, 20, 30)
    m = BinMatrix.from_dense(dense)
    x0 = BitVec.from_bits(random_dense(rng, 1, 30)[0])
    b = m.matvec(x0)
    x = gf2.solve(m, b)
    assert x is not None
    assert m.matvec(x) == b


def test_solve_returns_none_outside_column_span():
    # Row space of m never sets output bit 2.
    m = BinMatrix.from_dense([[1, 0, 1], [0, 1, 1], [0, 0, 0]])
    b = BitVec.from_bits([0, 0, 1])
    assert gf2.solve(m, b) is None


def test_solve_dimension_mismatch_raises():
    m = BinMatrix.zeros(4, 6)
    with pytest.raises(ValueError):
        gf2.solve(m, BitVec.zeros(5))


def test_solve_against_oracle():
    rng = np.random.default_rng(303)
    for _ in range(60):
        n_rows = int(rng.integers(1, 30))
        n_cols = int(rng.integers(1, 30))
        dense = random_dense(rng, n_rows, n_cols, density=rng.uniform(0.1, 0.9))
        m = BinMatrix.from_dense(dense)
        if rng.random() < 0.5:
            b_bits = (dense @ random_dense(rng, 1, n_cols)[0]) % 2
        else:
            b_bits = random_dense(rng, 1, n_rows)[0]
        b = BitVec.from_bits(b_bits.astype(np.uint8))
        got = gf2.solve(m, b)
        want = naive_solve(row_masks(dense), n_cols, mask_of_bits(b_bits))
        if want is None:
            assert got is None
        else:
            assert got is not None
            assert m.matvec(got) == b
            # Oracle witness must satisfy the system too.
            assert naive_matvec(row_masks(dense), mask_of_bits(got.to_bits())) == mask_of_bits(
                b_bits
            )


# ---------------------------------------------------------------------------
# in_span: fixed cases, oracle comparison
# ---------------------------------------------------------------------------


def test_in_span_generator_row():
    rng = np.random.default_rng(8)
    dense = random_dense(rng, 5, 12)
    g = BinMatrix.from_dense(dense)
    assert gf2.in_span(g, g.row(2))


def test_in_span_zero_vector():
    g = BinMatrix.from_dense([[1, 1, 0], [0, 1, 1]])
    assert gf2.in_span(g, BitVec.zeros(3))


def test_in_span_xor_of_three_rows_true_extra_bit_false():
    rng = np.random.default_rng(9)
    # Column 7 is zeroed in every generator, so no combination can set it.
    dense = random_dense(rng, 6, 15)
    dense[:, 7] = 0
    g = BinMatrix.from_dense(dense)
    v = g.row(0) ^ g.row(3) ^ g.row(5)
    assert gf2.in_span(g, v)
    poisoned = v ^ BitVec.from_indices(15, [7])
    assert not gf2.in_span(g, poisoned)


def test_in_span_dimension_mismatch_raises():
    g = BinMatrix.zeros(3, 4)
    with pytest.raises(ValueError):
        gf2.in_span(g, BitVec.zeros(5))


def test_in_span_against_oracle():
    rng = np.random.default_rng(404)
    for _ in range(60):
        n_rows = int(rng.integers(1, 25))
        n_cols = int(rng.integers(1, 25))
        dense = random_dense(rng, n_rows, n_cols, density=rng.uniform(0.1, 0.9))
        g = BinMatrix.from_dense(dense)
        if rng.random() < 0.5:
            coeffs = random_dense(rng, 1, n_rows)[0]
            v_bits = (coeffs @ dense) % 2
        else:
            v_bits = random_dense(rng, 1, n_cols)[0]
        v = BitVec.from_bits(v_bits.astype(np.uint8))
        assert gf2.in_span(g, v) == naive_in_span(row_masks(dense), mask_of_bits(v_bits))


# ---------------------------------------------------------------------------
# Echelon transformation record
# ---------------------------------------------------------------------------


def test_echelon_express_returns_valid_combination():
    rng = np.random.default_rng(21)
    dense = random_dense(rng, 14, 22)
    m = BinMatrix.from_dense(dense)
    ech = Echelon(m)
    for _ in range(20):
        coeffs = random_dense(rng, 1, 14)[0]
        v_bits = (coeffs @ dense) % 2
        v = BitVec.from_bits(v_bits.astype(np.uint8))
        combo = ech.express(v)
        assert combo is not None
        # Recombine the original rows according to the returned record.
        acc = BitVec.zeros(22)
        for i in combo.support():
            acc = acc ^ m.row(int(i))
        assert acc == v


def test_echelon_reuse_beats_one_shot_queries():
    rng = np.random.default_rng(22)
    dense = random_dense(rng, 30, 30)
    m = BinMatrix.from_dense(dense)
    ech = Echelon(m)
    for _ in range(30):
        v_bits = random_dense(rng, 1, 30)[0]
        v = BitVec.from_bits(v_bits)
        assert ech.contains(v) == gf2.in_span(m, v)


# ---------------------------------------------------------------------------
# hypothesis properties
# ---------------------------------------------------------------------------


@st.composite
def dense_matrices(draw, max_rows=64, max_cols=64):
    n_rows = draw(st.integers(1, max_rows))
    n_cols = draw(st.integers(1, max_cols))
    seed = draw(st.integers(0, 2**32 - 1))
    density = draw(st.sampled_from([0.1, 0.3, 0.5, 0.8]))
    rng = np.random.default_rng(seed)
    return random_dense(rng, n_rows, n_cols, density=density)


@settings(max_examples=40, deadline=None)
@given(dense_matrices())
def test_property_rank_transpose_symmetry(dense):
    m = BinMatrix.from_dense(dense)
    assert gf2.rank(m) == gf2.rank(m.transpose())


@settings(max_examples=40, deadline=None)
@given(dense_matrices(), st.integers(0, 2**32 - 1))
def test_property_solvable_systems_verify_by_substitution(dense, seed):
    rng = np.random.default_rng(seed)
    m = BinMatrix.from_dense(dense)
    x0 = BitVec.from_bits(random_dense(rng, 1, dense.shape[1])[0])
    b = m.matvec(x0)
    x = gf2.solve(m, b)
    assert x is not None
    assert m.matvec(x) == b


@settings(max_examples=40, deadline=None)
@given(dense_matrices(max_rows=32, max_cols=32), st.integers(0, 2**32 - 1))
def test_property_span_closed_under_xor(dense, seed):
    rng = np.random.default_rng(seed)
    g = BinMatrix.from_dense(dense)
    coeff_a = random_dense(rng, 1, dense.shape[0])[0]
    coeff_b = random_dense(rng, 1, dense.shape[0])[0]
    a = BitVec.from_bits(((coeff_a @ dense) % 2).astype(np.uint8))
    b = BitVec.from_bits(((coeff_b @ dense) % 2).astype(np.uint8))
    assert gf2.in_span(g, a) and gf2.in_span(g, b)
    assert gf2.in_span(g, a ^ b)

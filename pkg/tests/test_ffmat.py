import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from modtalg.errors import DimensionMismatch, NotPrime
from modtalg.ffmat import (
    GfpMatrix,
    Subspace,
    charpoly_coeffs,
    field_ctx,
    kernel,
    kernel_array,
    rref,
    rref_array,
    solve_array,
)
from modtalg.oracles import charpoly_leibniz, rank_by_minors


def test_field_ctx_accepts_primes():
    assert field_ctx(5).p == 5
    assert field_ctx(2).p == 2


def test_field_ctx_rejects_composites():
    with pytest.raises(NotPrime):
        field_ctx(4)
    with pytest.raises(NotPrime):
        field_ctx(1)


def test_field_inverse():
    f = field_ctx(7)
    for a in range(1, 7):
        assert (a * f.inv(a)) % 7 == 1
    with pytest.raises(ZeroDivisionError):
        f.inv(0)


def test_rref_identity_fixed():
    eye = np.eye(3, dtype=np.int64)
    reduced, rank, pivots = rref_array(eye, 2)
    assert np.array_equal(reduced, eye)
    assert rank == 3 and pivots == [0, 1, 2]
    m = GfpMatrix(field_ctx(2), eye)
    wrapped, wrank, wpiv = rref(m)
    assert wrapped == m and wrank == 3 and wpiv == [0, 1, 2]


def test_rref_all_ones_gf2():
    reduced, rank, _ = rref_array(np.ones((2, 2), dtype=np.int64), 2)
    assert np.array_equal(reduced, [[1, 1], [0, 0]])
    assert rank == 1


def test_rref_rank_matches_minor_oracle():
    rng = np.random.default_rng(7)
    for _ in range(6):
        a = rng.integers(0, 3, size=(6, 6))
        _, rank, _ = rref_array(a, 3)
        assert rank == rank_by_minors(a, 3)


small_prime = st.sampled_from([2, 3, 5])


@settings(max_examples=40, deadline=None)
@given(
    p=small_prime,
    rows=st.integers(1, 5),
    cols=st.integers(1, 5),
    data=st.data(),
)
def test_rref_idempotent_and_transpose_rank(p, rows, cols, data):
    flat = data.draw(st.lists(st.integers(0, p - 1), min_size=rows * cols, max_size=rows * cols))
    a = np.array(flat, dtype=np.int64).reshape(rows, cols)
    reduced, rank, _ = rref_array(a, p)
    again, rank2, _ = rref_array(reduced, p)
    assert np.array_equal(reduced, again) and rank == rank2
    assert rank == rref_array(a.T, p)[1]


def test_kernel_fixed_cases():
    f = field_ctx(2)
    assert kernel(GfpMatrix.identity(f, 3)).dim == 0
    full = kernel(GfpMatrix.zeros(f, 2, 3))
    assert full.dim == 3
    parity = kernel(GfpMatrix(f, [[1, 1]]))
    assert parity.dim == 1
    assert np.array_equal(parity.basis, [[1, 1]])


def test_kernel_vectors_annihilate():
    rng = np.random.default_rng(3)
    for p in (2, 3, 5):
        a = rng.integers(0, p, size=(4, 6))
        basis = kernel_array(a, p)
        assert basis.shape[0] == 6 - rref_array(a, p)[1]
        assert not ((a % p) @ basis.T % p).any()


def test_subspace_membership_of_basis():
    f = field_ctx(3)
    s = Subspace.span(f, [[1, 2, 0], [0, 1, 1]])
    for row in s.basis:
        assert s.member(row)
    assert not s.member([0, 0, 1]) or s.dim == 3


def test_subspace_intersect_idempotent():
    f = field_ctx(3)
    s = Subspace.span(f, [[1, 0, 2], [0, 1, 1]])
    assert s.intersect(s) == s


def test_subspace_axis_intersection_zero():
    f = field_ctx(2)
    e1 = Subspace.span(f, [[1, 0]])
    e2 = Subspace.span(f, [[0, 1]])
    assert e1.intersect(e2).dim == 0
    assert e1.sum(e2).dim == 2


def test_dimension_mismatch_raises():
    f = field_ctx(2)
    s1 = Subspace.span(f, [[1, 0]])
    s2 = Subspace.span(f, [[1, 0, 0]])
    with pytest.raises(DimensionMismatch):
        s1.sum(s2)
    with pytest.raises(DimensionMismatch):
        s1.intersect(s2)


def _enumerate_vectors(basis, p):
    from itertools import product

    dim, amb = basis.shape
    out = set()
    for coeffs in product(range(p), repeat=dim):
        v = (np.array(coeffs, dtype=np.int64) @ basis) % p
        out.add(tuple(int(x) for x in v))
    return out


def test_grassmann_identity_against_enumeration():
    # dim(A+B) + dim(A ∩ B) = dim A + dim B, checked against raw vector sets
    rng = np.random.default_rng(11)
    p = 3
    f = field_ctx(p)
    for _ in range(8):
        a = Subspace.span(f, rng.integers(0, p, size=(2, 6)))
        b = Subspace.span(f, rng.integers(0, p, size=(2, 6)))
        total = a.sum(b)
        meet = a.intersect(b)
        assert total.dim + meet.dim == a.dim + b.dim
        va, vb = _enumerate_vectors(a.basis, p), _enumerate_vectors(b.basis, p)
        sums = {tuple((np.array(x) + np.array(y)) % p) for x in va for y in vb}
        assert len(sums) == p**total.dim
        assert len(va & vb) == p**meet.dim


@settings(max_examples=25, deadline=None)
@given(p=small_prime, data=st.data())
def test_grassmann_identity_random(p, data):
    f = field_ctx(p)
    amb = data.draw(st.integers(2, 6))
    va = data.draw(st.lists(st.lists(st.integers(0, p - 1), min_size=amb, max_size=amb), min_size=1, max_size=3))
    vb = data.draw(st.lists(st.lists(st.integers(0, p - 1), min_size=amb, max_size=amb), min_size=1, max_size=3))
    a = Subspace.span(f, np.array(va, dtype=np.int64))
    b = Subspace.span(f, np.array(vb, dtype=np.int64))
    assert a.sum(b).dim + a.intersect(b).dim == a.dim + b.dim


def test_subspace_contains_and_equality():
    f = field_ctx(5)
    big = Subspace.span(f, [[1, 0, 0], [0, 1, 0]])
    small = Subspace.span(f, [[2, 3, 0]])
    assert big.contains(small)
    assert not small.contains(big)
    assert Subspace.span(f, [[2, 0, 0], [2, 1, 0]]) == big


def test_solve_array():
    p = 7
    a = np.array([[1, 2], [3, 4], [4, 6]])
    x_true = np.array([5, 6])
    b = (a @ x_true) % p
    x = solve_array(a, b, p)
    assert x is not None
    assert np.array_equal((a @ x) % p, b)
    assert solve_array(np.array([[1, 1], [1, 1]]), np.array([0, 1]), p) is None


def test_charpoly_against_leibniz_oracle():
    rng = np.random.default_rng(5)
    for p in (2, 3, 5):
        for n in (1, 2, 3, 4):
            m = rng.integers(0, p, size=(n, n))
            fast = charpoly_coeffs(m[None], p)[0]
            assert fast.tolist() == charpoly_leibniz(m, p)


def test_charpoly_truncation_is_prefix():
    rng = np.random.default_rng(9)
    m = rng.integers(0, 3, size=(4, 5, 5))
    full = charpoly_coeffs(m, 3)
    part = charpoly_coeffs(m, 3, upto=2)
    assert np.array_equal(full[:, :3], part)


def test_charpoly_cayley_hamilton():
    rng = np.random.default_rng(13)
    for p in (2, 3):
        m = rng.integers(0, p, size=(4, 4))
        coeffs = charpoly_coeffs(m[None], p)[0]
        acc = np.zeros((4, 4), dtype=np.int64)
        power = np.eye(4, dtype=np.int64)
        for c in coeffs[::-1]:
            acc = (acc + int(c) * power) % p
            power = (power @ m) % p
        assert not acc.any()


def test_gfpmatrix_operations():
    f = field_ctx(3)
    a = GfpMatrix(f, [[1, 2], [0, 1]])
    b = GfpMatrix(f, [[2, 0], [1, 1]])
    assert (a @ b).a.tolist() == [[4 % 3, 2], [1, 1]]
    assert (a + b).a.tolist() == [[0, 2], [1, 2]]
    assert (a - a).is_zero()
    assert a.T.a.tolist() == [[1, 0], [2, 1]]
    assert a.scale(2).a.tolist() == [[2, 4 % 3], [0, 2]]
    assert a.vec().tolist() == [1, 2, 0, 1]
    with pytest.raises(DimensionMismatch):
        a @ GfpMatrix(f, [[1, 2, 3]])

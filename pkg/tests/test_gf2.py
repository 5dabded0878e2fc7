from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hitchmono.gf2 import (BitMat2, BitVec2, SpanTracker, echelon, inverse, kernel_basis,
                           parity, rank, solve_in_span)


def brute_rank(rows: list[int]) -> int:
    """log2 of the number of distinct subset sums."""
    sums = set()
    for mask in range(1 << len(rows)):
        acc = 0
        for i, r in enumerate(rows):
            if (mask >> i) & 1:
                acc ^= r
        sums.add(acc)
    return len(sums).bit_length() - 1


@st.composite
def matrices(draw, max_dim: int = 9, nrows: int | None = None, ncols: int | None = None):
    r = nrows or draw(st.integers(1, max_dim))
    c = ncols or draw(st.integers(1, max_dim))
    rows = draw(st.lists(st.integers(0, (1 << c) - 1), min_size=r, max_size=r))
    return BitMat2(r, c, tuple(rows))


# -- vectors ---------------------------------------------------------------------------


def test_vector_string_order():
    v = BitVec2.from_str("1010")
    assert v.support() == [0, 2]
    assert str(v) == "1010"
    assert v.to_list() == [1, 0, 1, 0]


def test_vector_is_its_own_inverse():
    v = BitVec2.from_str("110101")
    assert (v + v).is_zero()
    assert v - v == BitVec2.zero(6)


def test_vector_length_mismatch():
    with pytest.raises(ValueError):
        BitVec2.from_str("101") + BitVec2.from_str("1010")


def test_vector_rejects_overflow():
    with pytest.raises(ValueError):
        BitVec2(3, 0b1000)


def test_dot_and_weight():
    a, b = BitVec2.from_str("1101"), BitVec2.from_str("1011")
    assert a.dot(b) == 0
    assert a.weight() == 3
    assert BitVec2.from_support(5, [1, 1, 3]).support() == [3]


# -- rank ------------------------------------------------------------------------------


def test_rank_identity():
    assert rank(BitMat2.identity(5)) == 5


def test_rank_zero():
    assert rank(BitMat2.zero(4, 7)) == 0


def test_rank_dependent_rows():
    m = BitMat2.from_rows(["1100", "0110", "1010"])
    assert rank(m) == 2
    assert brute_rank(list(m.rows)) == 2


@settings(max_examples=200, deadline=None)
@given(matrices(max_dim=7))
def test_rank_matches_subset_sum_oracle(m):
    assert rank(m) == brute_rank(list(m.rows))


@settings(max_examples=200, deadline=None)
@given(matrices())
def test_rank_of_transpose(m):
    assert rank(m) == rank(m.transpose())
    assert rank(m) <= min(m.shape)


def test_echelon_is_reproducible_and_reduced():
    rows = [0b1011, 0b0110, 0b1101, 0b0011]
    red = echelon(rows)
    assert red == echelon(rows)
    pivots = [(r & -r).bit_length() - 1 for r in red]
    assert pivots == sorted(pivots)
    for p, r in zip(pivots, red):
        assert sum((other >> p) & 1 for other in red) == 1


# -- kernels ---------------------------------------------------------------------------


def test_kernel_of_identity_is_trivial():
    assert kernel_basis(BitMat2.identity(3)) == []


def test_kernel_of_zero_map():
    assert len(kernel_basis(BitMat2.zero(2, 3))) == 3


def test_kernel_of_triangle_boundary():
    # vertices 0,1,2; edges (0,1), (1,2), (0,2); boundary is vertices x edges
    bd = BitMat2.from_columns([BitVec2.from_support(3, e) for e in [(0, 1), (1, 2), (0, 2)]])
    ker = kernel_basis(bd)
    brute = [c for c in range(1, 8) if bd.apply(c).is_zero()]
    assert [v.bits for v in ker] == brute == [0b111]


@settings(max_examples=200, deadline=None)
@given(matrices())
def test_rank_nullity(m):
    ker = kernel_basis(m)
    assert len(ker) + rank(m) == m.ncols
    assert all(m.apply(v).is_zero() for v in ker)
    assert rank([v.bits for v in ker]) == len(ker)


# -- products --------------------------------------------------------------------------


def test_linearity_random_trials():
    rng = random.Random(7)
    for _ in range(1000):
        r, c = rng.randint(1, 12), rng.randint(1, 12)
        m = BitMat2.random(r, c, rng)
        v, w = BitVec2(c, rng.getrandbits(c)), BitVec2(c, rng.getrandbits(c))
        assert m @ (v + w) == (m @ v) + (m @ w)


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_product_is_associative(data):
    a, b, c, d = (data.draw(st.integers(1, 8)) for _ in range(4))
    x = data.draw(matrices(nrows=a, ncols=b))
    y = data.draw(matrices(nrows=b, ncols=c))
    z = data.draw(matrices(nrows=c, ncols=d))
    assert (x @ y) @ z == x @ (y @ z)


def test_product_matches_entrywise_definition():
    rng = random.Random(3)
    x, y = BitMat2.random(4, 5, rng), BitMat2.random(5, 3, rng)
    p = x @ y
    for i, j in itertools.product(range(4), range(3)):
        assert p[i, j] == sum(x[i, k] * y[k, j] for k in range(5)) % 2


def test_shape_mismatch():
    with pytest.raises(ValueError):
        BitMat2.identity(3) @ BitMat2.identity(4)


def test_inverse_round_trip():
    rng = random.Random(11)
    found = 0
    while found < 20:
        m = BitMat2.random(6, 6, rng)
        if rank(m) < 6:
            with pytest.raises(ValueError):
                inverse(m)
            continue
        found += 1
        assert (m @ inverse(m)).is_identity()
        assert (inverse(m) @ m).is_identity()


def test_submatrix_and_columns():
    m = BitMat2.from_rows(["1100", "0110", "1011"])
    assert m.submatrix(range(1, 3), range(2, 4)).to_strings() == ["10", "11"]
    assert str(m.column(0)) == "101"
    assert m.transpose().transpose() == m


# -- spans -----------------------------------------------------------------------------


def test_solve_zero_target():
    gens = [BitVec2.from_str("1100"), BitVec2.from_str("0011")]
    assert solve_in_span(BitVec2.zero(4), gens) == BitVec2.zero(2)


def test_solve_recovers_coefficients():
    g1, g2, g3 = BitVec2.from_str("1000"), BitVec2.from_str("0110"), BitVec2.from_str("0011")
    coeffs = solve_in_span(g1 + g3, [g1, g2, g3])
    assert str(coeffs) == "101"


def test_solve_outside_span():
    gens = [BitVec2.from_str("1100"), BitVec2.from_str("0011")]
    target = BitVec2.from_str("1000")
    reachable = {(a * gens[0].bits) ^ (b * gens[1].bits) for a in (0, 1) for b in (0, 1)}
    assert target.bits not in reachable
    assert solve_in_span(target, gens) is None


def test_solve_length_mismatch():
    with pytest.raises(ValueError):
        solve_in_span(BitVec2.from_str("101"), [BitVec2.from_str("1010")])


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 255), min_size=1, max_size=6), st.integers(0, 255))
def test_solution_reproduces_target(gens, target):
    vecs = [BitVec2(8, g) for g in gens]
    coeffs = solve_in_span(BitVec2(8, target), vecs)
    in_span = any(
        target == 0 or sum_bits(vecs, mask) == target for mask in range(1 << len(vecs)))
    assert (coeffs is not None) == in_span
    if coeffs is not None:
        assert sum_bits(vecs, coeffs.bits) == target


def sum_bits(vecs: list[BitVec2], mask: int) -> int:
    acc = 0
    for i, v in enumerate(vecs):
        if (mask >> i) & 1:
            acc ^= v.bits
    return acc


def test_span_tracker_growth():
    span = SpanTracker(4)
    assert span.add(0b0011)
    assert span.add(0b0110)
    assert not span.add(0b0101)
    assert span.contains(0b0101)
    assert len(span) == 2
    assert parity(0b0111) == 1

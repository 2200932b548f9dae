from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from hochschild.linalg import (ComplexError, ComplexSlice, Echelon, IntegerEchelon, SparseMatrix,
                               complex_homology, image_basis, kernel_basis, sparse_rank)


def test_rank_examples():
    assert sparse_rank(SparseMatrix.from_dense([[1, 2], [2, 4]])) == 1
    assert sparse_rank(SparseMatrix(3, 3)) == 0
    eye = SparseMatrix(4, 4, {(i, i): 1 for i in range(4)})
    assert sparse_rank(eye) == 4


def test_kernel_examples():
    ker = kernel_basis(SparseMatrix.from_dense([[1, 1]]))
    assert len(ker) == 1
    v = ker[0]
    assert v[0] == -v[1] != 0
    assert kernel_basis(SparseMatrix(3, 3, {(i, i): 1 for i in range(3)})) == []
    # [[alpha - beta]] with alpha = 2, beta = 3
    assert kernel_basis(SparseMatrix.from_dense([[2 - 3]])) == []


def test_no_stored_zeros():
    m = SparseMatrix(2, 2, {(0, 0): 0, (1, 1): Fraction(1, 2)})
    assert m.entries == {(1, 1): Fraction(1, 2)}


def _two_term(scalar):
    d = SparseMatrix(1, 1, {(0, 0): scalar})
    return ComplexSlice({0: ["a"], 1: ["b"]}, {1: d}, "chain")


def test_two_term_homology():
    dims = {i: g.dimension for i, g in complex_homology(_two_term(0)).items()}
    assert dims == {0: 1, 1: 1}
    dims = {i: g.dimension for i, g in complex_homology(_two_term(1)).items()}
    assert dims == {0: 0, 1: 0}


def test_twisted_degree_one_slice():
    # H of k[x] twisted by the dilation 2 in polynomial degree 1: the map is 1 - 2
    dims = {i: g.dimension for i, g in complex_homology(_two_term(1 - 2)).items()}
    assert dims[0] == 0


def test_complex_rejects_nonzero_square():
    d1 = SparseMatrix(1, 1, {(0, 0): 1})
    d2 = SparseMatrix(1, 1, {(0, 0): 1})
    with pytest.raises(ComplexError):
        ComplexSlice({0: ["a"], 1: ["b"], 2: ["c"]}, {1: d1, 2: d2}, "chain")


def test_complex_rejects_bad_shape():
    with pytest.raises((ComplexError, ValueError)):
        ComplexSlice({0: ["a"], 1: ["b", "c"]}, {1: SparseMatrix(1, 1, {(0, 0): 1})}, "chain")


entry = st.integers(-3, 3)


@st.composite
def matrices(draw, max_dim=6):
    rows = draw(st.integers(1, max_dim))
    cols = draw(st.integers(1, max_dim))
    dense = draw(st.lists(st.lists(entry, min_size=cols, max_size=cols),
                          min_size=rows, max_size=rows))
    return SparseMatrix.from_dense(dense)


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_rank_nullity(m):
    ker = kernel_basis(m)
    assert sparse_rank(m) + len(ker) == m.cols
    for v in ker:
        assert not m.apply(v)


@settings(max_examples=100, deadline=None)
@given(matrices())
def test_rank_of_transpose(m):
    assert sparse_rank(m) == sparse_rank(m.transpose())
    assert len(image_basis(m)) == sparse_rank(m)


@settings(max_examples=100, deadline=None)
@given(matrices(), st.lists(entry, min_size=6, max_size=6))
def test_integer_echelon_agrees_with_rational(m, combo):
    ech, iech = Echelon(), IntegerEchelon()
    for row in m.row_dicts():
        ech.add(row)
        iech.add(row)
    assert len(ech) == len(iech) == sparse_rank(m)
    # a combination of rows is in the span, a half-step off usually is not
    vec = {}
    for r, c in zip(m.row_dicts(), combo):
        for k, v in r.items():
            vec[k] = vec.get(k, 0) + c * v
    vec = {k: v for k, v in vec.items() if v}
    assert ech.contains(vec) and iech.contains(vec)
    probe = {m.cols: 1}
    assert not ech.contains(probe) and not iech.contains(probe)


@st.composite
def complexes(draw):
    """A random three-term complex d1 d2 with d1 d2 = 0, built as d2 = K . X
    with K a kernel basis of d1."""
    d1 = draw(matrices(4))
    ker = kernel_basis(d1)
    n2 = draw(st.integers(1, 4))
    cols = []
    for _ in range(n2):
        coeffs = draw(st.lists(entry, min_size=len(ker), max_size=len(ker)))
        v = {}
        for k, c in zip(ker, coeffs):
            for i, x in k.items():
                v[i] = v.get(i, 0) + c * x
        cols.append({i: x for i, x in v.items() if x})
    d2 = SparseMatrix.from_columns(d1.cols, cols)
    return d1, d2


def _dims(d1, d2, perm=None):
    n0, n1, n2 = d1.rows, d1.cols, d2.cols
    if perm is not None:
        # reorder the middle basis; both differentials change with it
        d1 = SparseMatrix(n0, n1, {(r, perm[c]): v for (r, c), v in d1.entries.items()})
        d2 = SparseMatrix(n1, n2, {(perm[r], c): v for (r, c), v in d2.entries.items()})
    c = ComplexSlice({0: list(range(n0)), 1: list(range(n1)), 2: list(range(n2))},
                     {1: d1, 2: d2}, "chain")
    return {i: g.dimension for i, g in complex_homology(c).items()}


@settings(max_examples=100, deadline=None)
@given(complexes(), st.randoms(use_true_random=False))
def test_homology_is_basis_independent(pair, rnd):
    d1, d2 = pair
    perm = list(range(d1.cols))
    rnd.shuffle(perm)
    assert _dims(d1, d2) == _dims(d1, d2, perm)


@settings(max_examples=100, deadline=None)
@given(complexes())
def test_euler_characteristic(pair):
    d1, d2 = pair
    dims = _dims(d1, d2)
    assert dims[0] - dims[1] + dims[2] == d1.rows - d1.cols + d2.cols

from itertools import combinations
from math import gcd, prod

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from aligned_graphs.lattice import (
    IntMatrix,
    InvariantFactors,
    QuotientMap,
    coset_representatives,
    degree_zero_basis,
    hermite_normal_form,
    kernel_basis,
    quotient,
    smith_normal_form,
)
from aligned_graphs.validation import GuardLimitExceededError


@st.composite
def int_matrices(draw, max_rows=5, max_cols=5, bound=9):
    rows = draw(st.integers(1, max_rows))
    cols = draw(st.integers(1, max_cols))
    entries = st.lists(st.integers(-bound, bound), min_size=cols, max_size=cols)
    return IntMatrix.from_rows(draw(st.lists(entries, min_size=rows, max_size=rows)))


@st.composite
def square_matrices(draw, max_size=4, bound=9):
    n = draw(st.integers(1, max_size))
    entries = st.lists(st.integers(-bound, bound), min_size=n, max_size=n)
    return IntMatrix.from_rows(draw(st.lists(entries, min_size=n, max_size=n)))


def minor_gcd(m, k):
    """Gcd of all k x k minors, computed with sympy."""
    a = sympy.Matrix(m.tolist())
    g = 0
    for rows in combinations(range(m.rows), k):
        for cols in combinations(range(m.cols), k):
            g = gcd(g, int(a.extract(list(rows), list(cols)).det()))
    return g


def diagonal(m):
    return [m.entries[i * m.cols + i] for i in range(min(m.rows, m.cols))]


class TestIntMatrix:
    def test_shape_checked(self):
        """Tests that entries must fill the shape."""
        with pytest.raises(ValueError):
            IntMatrix(2, 2, (1, 2, 3))

    def test_ragged_rows(self):
        """Tests that rows must have equal length."""
        with pytest.raises(ValueError):
            IntMatrix.from_rows([[1, 2], [3]])

    def test_empty_rows_keep_width(self):
        """Tests that a matrix without rows remembers its width."""
        m = IntMatrix.from_rows([], cols=3)
        assert (m.rows, m.cols) == (0, 3)

    def test_matmul_and_transpose(self):
        """Tests exact multiplication and transposition."""
        a = IntMatrix.from_rows([[1, 2], [3, 4]])
        assert (a @ IntMatrix.identity(2)) == a
        assert (a @ a).tolist() == [[7, 10], [15, 22]]
        assert a.transpose().tolist() == [[1, 3], [2, 4]]

    def test_big_entries_stay_exact(self):
        """Tests that entries beyond machine integers are exact."""
        big = 10**40
        a = IntMatrix.from_rows([[big, 1], [1, big]])
        assert a.determinant() == big * big - 1

    @given(square_matrices())
    def test_determinant_matches_sympy(self, m):
        """Tests the Bareiss determinant against sympy."""
        assert m.determinant() == int(sympy.Matrix(m.tolist()).det())

    @given(square_matrices(), square_matrices())
    def test_determinant_multiplicative(self, a, b):
        """Tests det(ab) = det(a) det(b) on equal shapes."""
        if a.rows == b.rows:
            assert (a @ b).determinant() == a.determinant() * b.determinant()

    def test_str(self):
        """Tests the stable rendering."""
        assert str(IntMatrix.identity(2)) == "[[1, 0], [0, 1]]"


class TestInvariantFactors:
    def test_divisibility_chain_checked(self):
        """Tests that factors must divide each other in order."""
        with pytest.raises(ValueError):
            InvariantFactors(factors=(2, 3))

    @pytest.mark.parametrize(
        ("group", "text", "order"),
        [
            (InvariantFactors(), "trivial", 1),
            (InvariantFactors(factors=(5,)), "Z/5", 5),
            (InvariantFactors(factors=(2, 4)), "Z/2 x Z/4", 8),
            (InvariantFactors(free_rank=1), "Z", None),
            (InvariantFactors(factors=(3,), free_rank=2), "Z^2 x Z/3", None),
        ],
    )
    def test_rendering_and_order(self, group, text, order):
        """Tests the text form and the order."""
        assert str(group) == text
        assert group.order == order
        assert group.to_dict()["group"] == text

    def test_from_diagonal(self):
        """Tests reading off a Smith diagonal."""
        assert InvariantFactors.from_diagonal([1, 2, 6, 0]) == InvariantFactors(factors=(2, 6), free_rank=1)


def check_smith(m):
    u, d, v = smith_normal_form(m)
    assert u @ m @ v == d
    assert u.is_unimodular()
    assert v.is_unimodular()
    diag = diagonal(d)
    assert all(x >= 0 for x in diag)
    assert all(d.entries[i * d.cols + j] == 0 for i in range(d.rows) for j in range(d.cols) if i != j)
    nonzero = [x for x in diag if x]
    assert diag[: len(nonzero)] == nonzero
    assert all(b % a == 0 for a, b in zip(nonzero, nonzero[1:]))
    if m.rows <= 4 and m.cols <= 4:  # noqa: PLR2004
        for k in range(1, min(m.rows, m.cols) + 1):
            assert prod(diag[:k]) == minor_gcd(m, k)


class TestSmithNormalForm:
    def test_example(self):
        """Tests the diagonal of diag(2, 3)."""
        snf = smith_normal_form(IntMatrix.from_rows([[2, 0], [0, 3]]))
        assert snf.d == IntMatrix.from_rows([[1, 0], [0, 6]])

    def test_zero_matrix(self):
        """Tests that the zero matrix is its own normal form."""
        snf = smith_normal_form(IntMatrix.zeros(2, 3))
        assert snf.d == IntMatrix.zeros(2, 3)

    @settings(max_examples=1000)
    @given(int_matrices())
    def test_properties(self, m):
        """Tests u m v = d, unimodularity, shape and the divisibility chain."""
        check_smith(m)

    @pytest.mark.slow()
    @settings(max_examples=10_000, deadline=None)
    @given(int_matrices())
    def test_properties_at_scale(self, m):
        """Tests the Smith form properties and minor gcds on 10^4 matrices up to 5 x 5."""
        check_smith(m)

    @settings(max_examples=200)
    @given(int_matrices(max_rows=4, max_cols=4, bound=6))
    def test_determinantal_divisors(self, m):
        """Tests that d_1 ... d_k is the gcd of the k x k minors."""
        diag = diagonal(smith_normal_form(m).d)
        for k in range(1, min(m.rows, m.cols) + 1):
            assert prod(diag[:k]) == minor_gcd(m, k)


class TestHermiteNormalForm:
    def test_example(self):
        """Tests the reduced row form of a 2 x 2 matrix."""
        h, u = hermite_normal_form(IntMatrix.from_rows([[2, 4], [1, 3]]))
        assert h.tolist() == [[1, 1], [0, 2]]
        assert u @ IntMatrix.from_rows([[2, 4], [1, 3]]) == h

    @settings(max_examples=1000)
    @given(int_matrices())
    def test_properties(self, m):
        """Tests u m = h, unimodularity, positive pivots and reduced entries above pivots."""
        h, u = hermite_normal_form(m)
        assert u @ m == h
        assert u.is_unimodular()
        previous = -1
        for row in h.tolist():
            if not any(row):
                previous = m.cols
                continue
            assert previous < m.cols
            pivot = next(j for j, x in enumerate(row) if x)
            assert pivot > previous
            assert row[pivot] > 0
            previous = pivot
        rows = h.tolist()
        for i, row in enumerate(rows):
            if any(row):
                pivot = next(j for j, x in enumerate(row) if x)
                assert all(0 <= rows[k][pivot] < row[pivot] for k in range(i))


class TestKernelAndQuotient:
    @settings(max_examples=300)
    @given(int_matrices())
    def test_kernel(self, m):
        """Tests that kernel rows are killed by m and span a space of the right rank."""
        k = kernel_basis(m)
        assert k.rows == m.cols - sympy.Matrix(m.tolist()).rank()
        for i in range(k.rows):
            assert all(sum(a * b for a, b in zip(m.row(r), k.row(i))) == 0 for r in range(m.rows))

    def test_degree_zero_basis(self):
        """Tests the basis of sum-zero vectors."""
        assert degree_zero_basis(3).tolist() == [[1, 0, -1], [0, 1, -1]]
        assert degree_zero_basis(1).rows == 0

    def test_examples(self):
        """Tests small quotients, finite and infinite."""
        assert str(quotient(degree_zero_basis(2), IntMatrix.from_rows([[2, -2]]))) == "Z/2"
        assert str(quotient(IntMatrix.identity(2), IntMatrix.from_rows([[1, -1]]))) == "Z"
        assert quotient(degree_zero_basis(1), IntMatrix.from_rows([], cols=1)).is_trivial

    def test_generator_outside_ambient(self):
        """Tests that a generator outside the ambient lattice is rejected."""
        with pytest.raises(ValueError):
            QuotientMap(degree_zero_basis(2), IntMatrix.from_rows([[1, 0]]))

    def test_dependent_ambient(self):
        """Tests that the ambient rows must be independent."""
        with pytest.raises(ValueError):
            QuotientMap(IntMatrix.from_rows([[1, 0], [2, 0]]), IntMatrix.zeros(0, 2))

    def test_representatives_cover_each_coset_once(self):
        """Tests coset representatives of Z^2 modulo 2Z x 3Z."""
        quotient_map = QuotientMap(IntMatrix.identity(2), IntMatrix.from_rows([[2, 0], [0, 3]]))
        representatives = list(quotient_map.representatives())
        assert representatives[0] == (0, 0)
        assert len(representatives) == 6
        assert len({quotient_map.coset_key(r) for r in representatives}) == 6
        assert quotient_map.coset_key((2, 3)) == quotient_map.coset_key((0, 0))

    def test_representatives_guard(self):
        """Tests the coset enumeration limit and infinite quotients."""
        with pytest.raises(GuardLimitExceededError):
            coset_representatives(IntMatrix.identity(1), IntMatrix.from_rows([[7]]), limit=5)
        with pytest.raises(ValueError):
            coset_representatives(IntMatrix.identity(2), IntMatrix.from_rows([[1, 1]]))

    @settings(max_examples=200)
    @given(int_matrices(max_rows=3, max_cols=3, bound=4))
    def test_coset_key_respects_sublattice(self, m):
        """Tests that adding a generator never changes the coset."""
        quotient_map = QuotientMap(IntMatrix.identity(m.cols), m)
        base = tuple(range(1, m.cols + 1))
        for i in range(m.rows):
            shifted = tuple(a + b for a, b in zip(base, m.row(i)))
            assert quotient_map.coset_key(shifted) == quotient_map.coset_key(base)

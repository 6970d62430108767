import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wellrounded.exact import (
    Matrix,
    NotPositiveDefinite,
    Singular,
    SymmetricForm,
    canonical,
    det,
    format_rational,
    hnf,
    invert,
    ldlt,
    psd_rank,
    to_rational,
)
from wellrounded.paperlab import counterexample

from oracles import index_by_counting, sympy_det
from strategies import pd_forms, rational_matrices


def reassemble(L, D):
    return L @ Matrix.diag(D) @ L.T


class TestRationals:
    def test_parse_and_format_round_trip(self):
        for text in ["0", "7", "-3/4", "10/4"]:
            x = to_rational(text)
            assert to_rational(format_rational(x)) == x
        assert format_rational(F(10, 4)) == "5/2"
        assert format_rational(F(-6, 3)) == "-2"

    @pytest.mark.parametrize("bad", ["0.5", "1e3", "abc", "1/2/3", ""])
    def test_rejects_inexact_strings(self, bad):
        with pytest.raises(ValueError):
            to_rational(bad)

    @pytest.mark.parametrize("bad", [0.5, True, None])
    def test_rejects_non_rational_types(self, bad):
        with pytest.raises(TypeError):
            to_rational(bad)

    def test_canonical_sign(self):
        assert canonical((0, -1, 2)) == (0, 1, -2)
        assert canonical((3, -1)) == (3, -1)
        assert canonical((0, 0)) == (0, 0)


class TestLDLT:
    def test_identity(self):
        L, D = ldlt(Matrix.identity(3))
        assert L == Matrix.identity(3)
        assert D == (1, 1, 1)

    def test_hexagonal(self):
        L, D = ldlt(Matrix([[1, F(1, 2)], [F(1, 2), 1]]))
        assert L == Matrix([[1, 0], [F(1, 2), 1]])
        assert D == (1, F(3, 4))
        assert reassemble(L, D) == Matrix([[1, F(1, 2)], [F(1, 2), 1]])

    def test_indefinite(self):
        with pytest.raises(NotPositiveDefinite):
            ldlt(Matrix([[1, 2], [2, 1]]))

    def test_symmetric_form_rejects_asymmetric(self):
        with pytest.raises(ValueError, match="symmetric"):
            SymmetricForm([[1, 0], [1, 1]])

    @given(pd_forms(max_n=5))
    @settings(max_examples=60, deadline=None)
    def test_reassembly_exact(self, form):
        L, D = form.factors
        assert all(d > 0 for d in D)
        assert reassemble(L, D) == form.matrix

    def test_from_upper(self):
        q = SymmetricForm.from_upper(3, [2, 1, 0, 2, 1, 2])
        assert q.matrix == Matrix([[2, 1, 0], [1, 2, 1], [0, 1, 2]])


class TestDet:
    def test_identity(self):
        assert det(Matrix.identity(4)) == 1

    def test_diagonal(self):
        assert det(Matrix.diag([F(1, 2), 1, 2])) == 1

    def test_counterexample_basis(self):
        assert det(counterexample(5).basis) == F(1, 2)

    def test_needs_pivoting(self):
        assert det(Matrix([[0, 1], [1, 0]])) == -1
        assert det(Matrix([[0, 0], [1, 0]])) == 0

    @given(rational_matrices(), rational_matrices())
    @settings(max_examples=60, deadline=None)
    def test_multiplicative(self, a, b):
        assert det(a @ b) == det(a) * det(b)

    @given(rational_matrices(n=4))
    @settings(max_examples=40, deadline=None)
    def test_matches_sympy(self, a):
        assert det(a) == sympy_det(a.rows)


class TestInvert:
    def test_identity(self):
        assert invert(Matrix.identity(3)) == Matrix.identity(3)

    def test_diagonal(self):
        assert invert(Matrix.diag([2, F(1, 2)])) == Matrix.diag([F(1, 2), 2])

    def test_hexagonal(self):
        m = Matrix([[1, F(1, 2)], [F(1, 2), 1]])
        inv = invert(m)
        assert inv == Matrix([[F(4, 3), F(-2, 3)], [F(-2, 3), F(4, 3)]])
        assert m @ inv == Matrix.identity(2)

    def test_singular(self):
        with pytest.raises(Singular):
            invert(Matrix([[1, 2], [2, 4]]))

    @given(rational_matrices(n=4))
    @settings(max_examples=40, deadline=None)
    def test_inverse_product(self, a):
        if det(a) == 0:
            return
        assert a @ invert(a) == Matrix.identity(4)


class TestHNF:
    def test_unit_vectors(self):
        h = hnf([(1, 0, 0), (0, 1, 0), (0, 0, 1)])
        assert (h.rank, h.index) == (3, 1)

    def test_counterexample_index_two(self):
        vecs = [tuple(int(i == j) for j in range(5)) for i in range(4)] + [(-1, -1, -1, -1, 2)]
        h = hnf(vecs)
        assert h.rank == 5
        assert h.index == 2

    def test_rank_deficient(self):
        h = hnf([(1, 0), (2, 0)])
        assert h.rank == 1
        assert h.index is None

    def test_reduced_shape(self):
        h = hnf([(2, 3), (0, 4), (4, 1)])
        for j, (col, p) in enumerate(zip(h.columns, h.pivots)):
            assert col[p] > 0
            assert all(x == 0 for x in col[:p])
            for i in range(j):
                assert 0 <= h.columns[i][p] < col[p]

    @given(st.lists(st.lists(st.integers(-6, 6), min_size=3, max_size=3), min_size=1, max_size=5), st.randoms())
    @settings(max_examples=80, deadline=None)
    def test_invariant_under_permutation_and_negation(self, vecs, r):
        shuffled = [list(v) for v in vecs]
        r.shuffle(shuffled)
        shuffled = [[-x for x in v] if r.random() < 0.5 else v for v in shuffled]
        assert hnf(vecs) == hnf(shuffled)

    def test_index_matches_coset_count(self):
        rng = random.Random(7)
        checked = 0
        while checked < 25:
            cols = [[rng.randint(-2, 2) for _ in range(3)] for _ in range(3)]
            d = abs(det(Matrix.from_columns(cols)))
            if d == 0 or d > 12:
                continue
            assert hnf(cols).index == index_by_counting(cols) == d
            checked += 1


class TestPsdRank:
    def test_ranks(self):
        assert psd_rank(Matrix.identity(3)) == 3
        assert psd_rank(Matrix([[1, 1], [1, 1]])) == 1
        assert psd_rank(Matrix.zeros(2, 2)) == 0

    def test_rejects_indefinite(self):
        with pytest.raises(ValueError):
            psd_rank(Matrix([[1, 2], [2, 1]]))
        with pytest.raises(ValueError):
            psd_rank(Matrix([[0, 1], [1, 0]]))

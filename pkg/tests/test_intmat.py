import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

import ckshift.intmat as im
from ckshift.errors import ValidationError


def random_matrix(rng, rows, cols, lo=-9, hi=9):
    return tuple(tuple(rng.randint(lo, hi) for _ in range(cols))
                 for _ in range(rows))


class TestBasics:
    def test_as_matrix_validates(self):
        with pytest.raises(ValidationError, match="ragged"):
            im.as_matrix([[1, 2], [3]])
        with pytest.raises(ValidationError, match="integer"):
            im.as_matrix([[1.5]])
        with pytest.raises(ValidationError):
            im.as_matrix([])

    def test_mul_identity(self):
        rng = random.Random(0)
        m = random_matrix(rng, 3, 3)
        assert im.mat_mul(m, im.identity(3)) == m
        assert im.mat_mul(im.identity(3), m) == m

    def test_pow(self):
        a = ((1, 1), (1, 0))
        assert im.mat_pow(a, 0) == im.identity(2)
        assert im.mat_pow(a, 1) == a
        assert im.mat_pow(a, 5) == im.mat_mul(im.mat_mul(im.mat_mul(
            im.mat_mul(a, a), a), a), a)

    def test_trace(self):
        assert im.trace(((1, 2), (3, 4))) == 5


class TestDet:
    def test_examples(self):
        assert im.det(((2,),)) == 2
        assert im.det(((1, 2), (3, 4))) == -2
        assert im.det(((0, 0), (0, 0))) == 0

    def test_against_sympy(self):
        rng = random.Random(1)
        for _ in range(60):
            n = rng.randint(1, 5)
            m = random_matrix(rng, n, n)
            assert im.det(m) == int(sympy.Matrix(m).det())

    def test_det_of_x_minus_a_is_charpoly_at_x(self):
        rng = random.Random(2)
        for _ in range(40):
            n = rng.randint(1, 4)
            a = random_matrix(rng, n, n, -4, 4)
            p = im.charpoly(a)
            i_minus_a = im.mat_sub(im.identity(n), a)
            assert im.poly_eval(p, 1) == im.det(i_minus_a)


class TestCharpoly:
    def test_examples(self):
        assert im.charpoly(((2,),)) == (1, -2)
        assert im.charpoly(((1, 1), (1, 1))) == (1, -2, 0)
        assert im.charpoly(((1, 1), (1, 0))) == (1, -1, -1)

    def test_against_sympy(self):
        rng = random.Random(3)
        for _ in range(40):
            n = rng.randint(1, 4)
            a = random_matrix(rng, n, n, -5, 5)
            lam = sympy.symbols("x")
            want = sympy.Poly(sympy.Matrix(a).charpoly(lam), lam).all_coeffs()
            assert list(im.charpoly(a)) == [int(c) for c in want]


class TestSmith:
    def test_examples(self):
        assert im.smith_normal_form(((0, -1), (-1, 1))).factors == (1, 1)
        assert im.smith_normal_form(((2, 0), (0, 3))).factors == (1, 6)
        assert im.smith_normal_form(((0, 0), (0, 0))).factors == (0, 0)

    def test_transforms_exact(self):
        rng = random.Random(4)
        for _ in range(60):
            r, c = rng.randint(1, 4), rng.randint(1, 4)
            m = random_matrix(rng, r, c, -6, 6)
            snf = im.smith_normal_form(m)
            assert im.mat_mul(im.mat_mul(snf.U, m), snf.V) == snf.D
            assert abs(im.det(snf.U)) == 1 and abs(im.det(snf.V)) == 1

    def test_against_sympy_invariant_factors(self):
        from sympy.matrices.normalforms import invariant_factors
        rng = random.Random(5)
        for _ in range(60):
            n = rng.randint(1, 4)
            m = random_matrix(rng, n, n, -6, 6)
            got = im.smith_normal_form(m).factors
            want = tuple(abs(int(d)) for d in invariant_factors(sympy.Matrix(m)))
            assert got == want, m

    @settings(max_examples=50, deadline=None)
    @given(st.integers(1, 4), st.integers(1, 4), st.data())
    def test_divisibility_chain(self, r, c, data):
        m = tuple(tuple(data.draw(st.integers(-20, 20)) for _ in range(c))
                  for _ in range(r))
        factors = im.smith_normal_form(m).factors
        for x, y in zip(factors, factors[1:]):
            assert x >= 0 and y >= 0
            if x == 0:
                assert y == 0
            else:
                assert y % x == 0

    def test_entry_growth_case(self):
        # dense 4x4 with mixed signs exercises the arbitrary-precision path
        m = ((7, -3, 2, 5), (-6, 4, -8, 1), (9, -2, 3, -7), (1, 8, -5, 6))
        snf = im.smith_normal_form(m)
        assert im.mat_mul(im.mat_mul(snf.U, m), snf.V) == snf.D
        prod = 1
        for d in snf.factors:
            prod *= d
        assert prod == abs(im.det(m))

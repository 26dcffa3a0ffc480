from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modeldomain.exactalg import (
    I,
    ExactMatrix,
    GaussQ,
    LinearConstraint,
    as_fraction,
    complexify,
    format_gaussq,
    nullspace,
    real_linearize,
    row_reduce,
)

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)
gauss = st.builds(GaussQ, fractions, fractions)


def test_as_fraction_rejects_float():
    with pytest.raises(TypeError):
        as_fraction(0.5)
    assert as_fraction("3/4") == Fraction(3, 4)


def test_i_squared():
    assert I * I == -1
    assert (1 + I).abs2() == 2
    assert (2 + 3 * I).conj() == GaussQ(2, -3)


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        GaussQ(1, 1) / GaussQ(0)


@pytest.mark.parametrize("x, text", [
    (GaussQ(Fraction(3, 4)), "3/4"),
    (GaussQ(0, 1), "i"),
    (GaussQ(0, -1), "-i"),
    (GaussQ(0, Fraction(1, 3)), "1/3i"),
    (GaussQ(Fraction(1, 2), Fraction(-1, 3)), "(1/2-1/3i)"),
])
def test_format(x, text):
    assert format_gaussq(x) == text


@given(gauss, gauss, gauss)
def test_field_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b).conj() == a.conj() * b.conj()
    assert (a * b).abs2() == a.abs2() * b.abs2()
    if b:
        assert (a / b) * b == a


@given(gauss, st.integers(min_value=0, max_value=6))
def test_integer_power(a, k):
    expected = GaussQ(1)
    for _ in range(k):
        expected = expected * a
    assert a ** k == expected


small = st.integers(min_value=-4, max_value=4)


@settings(max_examples=60)
@given(st.integers(1, 5), st.integers(1, 6), st.data())
def test_real_nullspace_sound(rows, cols, data):
    M = [[Fraction(data.draw(small)) for _ in range(cols)] for _ in range(rows)]
    mat = ExactMatrix.from_rows(M, cols, "real")
    kernel = nullspace(mat)
    assert len(kernel) + mat.rank() == cols
    for v in kernel:
        assert all(x == 0 for x in mat.apply(v))


@settings(max_examples=40)
@given(st.integers(1, 4), st.integers(1, 5), st.data())
def test_complex_nullspace_sound(rows, cols, data):
    M = [[GaussQ(data.draw(small), data.draw(small)) for _ in range(cols)] for _ in range(rows)]
    mat = ExactMatrix.from_rows(M, cols, "complex")
    kernel = nullspace(mat)
    assert len(kernel) + mat.rank() == cols
    for v in kernel:
        assert all(not x for x in mat.apply(v))


def test_row_reduce_is_canonical():
    a = [[Fraction(2), Fraction(4), Fraction(0)], [Fraction(1), Fraction(1), Fraction(1)]]
    b = [[Fraction(3), Fraction(3), Fraction(3)], [Fraction(0), Fraction(1), Fraction(-1)]]
    assert row_reduce(a, 3, "real") == row_reduce(b, 3, "real")
    rr = row_reduce(a, 3, "real")
    assert rr[0][0] == 1 and rr[1][0] == 0


def test_real_linearize_re_constraint():
    # Re(x0) = 0 leaves im x0 and all of x1 free
    c = LinearConstraint.from_terms({((0, False),): 1}, kind="re")
    M = real_linearize([c], 2)
    kernel = nullspace(M)
    assert len(kernel) == 3
    for v in kernel:
        assert complexify(v)[0].re == 0


def test_real_linearize_conjugate_terms():
    # x0 - conj(x0) = 0 means x0 real
    c = LinearConstraint({0: GaussQ(1)}, {0: GaussQ(-1)}, "zero")
    kernel = nullspace(real_linearize([c], 1))
    assert [complexify(v)[0] for v in kernel] == [GaussQ(1)]


def test_linear_constraint_rejects_constant_key():
    with pytest.raises(ValueError):
        LinearConstraint.from_terms({(): 1})
    with pytest.raises(ValueError):
        LinearConstraint.from_terms({((0, False), (1, True)): 1})

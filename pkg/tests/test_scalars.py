from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from genred.errors import DivisionByZero, ParseError
from genred.quotient import triangle_factorization
from genred.scalars import GaussianRational, QiLambda, parse_scalar

fracs = st.fractions(max_denominator=50).filter(lambda q: abs(q) < 1000)
gauss = st.builds(GaussianRational, fracs, fracs)


def test_parse_scalar_forms():
    assert parse_scalar("3/2+1/2i") == GaussianRational(Fraction(3, 2), Fraction(1, 2))
    assert parse_scalar("i") == GaussianRational(0, 1)
    assert parse_scalar("-i") == GaussianRational(0, -1)
    assert parse_scalar("-2+3/2i") == GaussianRational(-2, Fraction(3, 2))
    assert parse_scalar("7") == GaussianRational(7)


@pytest.mark.parametrize("bad", ["", "1/0", "x", "1+", "2*i", "1//2"])
def test_parse_scalar_rejects(bad):
    with pytest.raises(ParseError):
        parse_scalar(bad)


def test_str_roundtrip():
    for text in ["3/2+1/2i", "-i", "0", "5", "-1/3-2i"]:
        z = parse_scalar(text)
        assert parse_scalar(str(z)) == z


def test_division_by_zero():
    with pytest.raises(DivisionByZero):
        GaussianRational(1, 1) / GaussianRational(0)
    with pytest.raises(DivisionByZero):
        QiLambda(1) / QiLambda(0)


def test_immutable():
    z = GaussianRational(1, 2)
    with pytest.raises(AttributeError):
        z.re = 3


@settings(max_examples=200)
@given(gauss, gauss, gauss)
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a.conjugate().conjugate() == a
    assert (a * b).conjugate() == a.conjugate() * b.conjugate()
    if b:
        assert (a / b) * b == a
    assert complex(a * b) == pytest.approx(complex(a) * complex(b))


def test_lambda_is_primitive_cube_root():
    lam = QiLambda.lam()
    assert lam ** 3 == 1
    assert lam != 1
    assert lam * lam + lam + 1 == 0
    assert lam.conjugate() == lam ** 2
    assert complex(lam) ** 3 == pytest.approx(1)


@settings(max_examples=200)
@given(gauss, gauss, gauss, gauss)
def test_lambda_field(a, b, c, d):
    x, y = QiLambda(a, b), QiLambda(c, d)
    assert complex(x * y) == pytest.approx(complex(x) * complex(y), abs=1e-6, rel=1e-9)
    assert complex(x.conjugate()) == pytest.approx(complex(x).conjugate(), abs=1e-9)
    if y:
        assert (x / y) * y == x


def test_triangle_factorization():
    ok, product = triangle_factorization()
    assert ok
    # the product has exactly the four monomials of the cubic
    assert len(product) == 4

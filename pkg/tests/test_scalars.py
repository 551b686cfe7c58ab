from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qholo.scalars import I_EXACT, GaussianRational, imag_unit, is_zero, to_scalar

fractions = st.fractions(min_value=-100, max_value=100, max_denominator=50)
gauss = st.builds(GaussianRational, fractions, fractions)


def test_i_squared():
    assert I_EXACT * I_EXACT == -1


def test_rejects_floats():
    with pytest.raises(TypeError):
        GaussianRational(0.5)
    with pytest.raises(TypeError):
        GaussianRational.coerce(1.5)


def test_division_and_conjugate():
    z = GaussianRational(1, 2)
    assert z / z == 1
    assert z * z.conjugate() == 5
    assert z.abs2() == 5
    assert (1 / z) == GaussianRational(Fraction(1, 5), Fraction(-2, 5))
    with pytest.raises(ZeroDivisionError):
        z / 0


def test_mixed_comparisons():
    assert GaussianRational(Fraction(1, 2)) == 0.5
    assert GaussianRational(1, 1) == complex(1, 1)
    assert hash(GaussianRational(3)) == hash(Fraction(3))


def test_power():
    assert GaussianRational(1, 1) ** 4 == -4
    with pytest.raises(ValueError):
        GaussianRational(1, 1) ** -1


def test_backend_helpers():
    assert isinstance(to_scalar(1, True), GaussianRational)
    assert to_scalar(1, False) == 1 + 0j
    assert imag_unit(False) == 1j
    assert is_zero(GaussianRational(0), True, 0.0)
    assert is_zero(1e-16, False, 1e-14)


@given(gauss, gauss, gauss)
def test_field_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert (a * b).conjugate() == a.conjugate() * b.conjugate()
    if a:
        assert (b / a) * a == b

"""
Scalar arithmetic shared by every engine.

A computation runs either in exact mode, where values are Gaussian rationals from sympy's ``QQ_I``
domain, or in numeric mode, where values are Python ``complex`` numbers.
"""

from fractions import Fraction
from numbers import Integral, Rational
from typing import Any, Sequence, Tuple, Union

from sympy.polys.domains import QQ, QQ_I

from .exceptions import DomainError

Scalar = Any
RealLike = Union[int, float, Fraction]


def to_fraction(value: Any) -> Fraction:
    """
    Converts an integer, rational, decimal string or float to an exact ``Fraction``.

    Floats are converted through their shortest decimal representation so that ``0.1`` becomes ``1/10``.

    Args:
        value: The value to convert.

    Returns:
        The exact rational value.

    Raises:
        DomainError: If the value has no rational interpretation.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise DomainError(f"Cannot interpret {value!r} as a rational number.")
    if isinstance(value, Integral):
        return Fraction(int(value))
    if isinstance(value, Rational):
        return Fraction(int(value.numerator), int(value.denominator))
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except ValueError:
            raise DomainError(f"Cannot interpret {value!r} as a rational number.")
    numerator = getattr(value, "numerator", None)
    denominator = getattr(value, "denominator", None)
    if numerator is not None and denominator is not None:
        return Fraction(int(numerator), int(denominator))
    raise DomainError(f"Cannot interpret {value!r} as a rational number.")


class ScalarField:
    """
    The scalar field a computation runs over.

    Attributes:
        exact: True for Gaussian-rational arithmetic, False for double precision complex arithmetic.
    """

    def __init__(self, exact: bool = False) -> None:
        """
        Args:
            exact: Select exact Gaussian-rational arithmetic.
        """
        self.exact = exact

    def __repr__(self) -> str:
        return f"ScalarField(exact={self.exact})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ScalarField) and other.exact == self.exact

    def __hash__(self) -> int:
        return hash(("ScalarField", self.exact))

    @property
    def mode(self) -> str:
        return "exact" if self.exact else "numeric"

    @property
    def zero(self) -> Scalar:
        return self(0)

    @property
    def one(self) -> Scalar:
        return self(1)

    def __call__(self, value: Any) -> Scalar:
        """
        Converts a value into this field.

        Accepted inputs are integers, fractions, floats, rational strings such as ``"1/2"``, complex
        numbers, ``[re, im]`` pairs and elements of the field itself.

        Args:
            value: The value to convert.

        Returns:
            The converted scalar.
        """
        if self.exact:
            return self._exact(value)
        return self._numeric(value)

    def _exact(self, value: Any) -> Scalar:
        if isinstance(value, QQ_I.dtype):
            return value
        real, imag = _split(value)
        re, im = to_fraction(real), to_fraction(imag)
        return QQ_I(QQ(re.numerator, re.denominator), QQ(im.numerator, im.denominator))

    def _numeric(self, value: Any) -> complex:
        if isinstance(value, QQ_I.dtype):
            return complex(_qq_to_float(value.x), _qq_to_float(value.y))
        real, imag = _split(value)
        return complex(_real_to_float(real), _real_to_float(imag))

    def conj(self, value: Scalar) -> Scalar:
        """Complex conjugate."""
        if self.exact:
            return QQ_I(value.x, -value.y)
        return value.conjugate()

    def real(self, value: Scalar) -> RealLike:
        """Real part, as a ``Fraction`` in exact mode and a float in numeric mode."""
        if self.exact:
            return Fraction(int(value.x.numerator), int(value.x.denominator))
        return value.real

    def is_zero(self, value: Scalar) -> bool:
        if self.exact:
            return value.x == 0 and value.y == 0
        return value == 0

    def to_complex(self, value: Scalar) -> complex:
        """Converts a scalar of this field to a Python complex."""
        return self._numeric(value)

    def to_json(self, value: Scalar) -> Tuple[Any, Any]:
        """
        Serializes a scalar as a ``(re, im)`` pair: rational strings in exact mode, floats otherwise.
        """
        if self.exact:
            return (_qq_to_str(value.x), _qq_to_str(value.y))
        value = complex(value)
        return (value.real, value.imag)

    def sum(self, values: Sequence[Scalar]) -> Scalar:
        total = self.zero
        for value in values:
            total = total + value
        return total

    def power(self, value: Scalar, exponent: int) -> Scalar:
        result = self.one
        for _ in range(exponent):
            result = result * value
        return result


def _split(value: Any) -> Tuple[Any, Any]:
    if isinstance(value, complex):
        return value.real, value.imag
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise DomainError(f"Expected a [re, im] pair, got {value!r}.")
        return value[0], value[1]
    return value, 0


def _real_to_float(value: Any) -> float:
    if isinstance(value, str):
        return float(Fraction(value.strip()))
    if isinstance(value, (int, float, Fraction)):
        return float(value)
    return _qq_to_float(value)


def _qq_to_float(value: Any) -> float:
    return int(value.numerator) / int(value.denominator)


def _qq_to_str(value: Any) -> str:
    return str(Fraction(int(value.numerator), int(value.denominator)))

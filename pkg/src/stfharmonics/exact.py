from __future__ import annotations

import math
import re
from fractions import Fraction
from numbers import Rational
from typing import Union

from .errors import ExactArithmeticError, FormatError

Scalar = Union[int, Fraction, float, complex, "Exact", "GaussianRational"]

_EXACT_RE = re.compile(r"^\s*(?P<value>[+-]?\d+(?:/\d+)?)\s*(?:\*\s*pi(?:\^(?P<power>\d+))?)?\s*$")


def _as_fraction(value: object) -> Fraction | None:
    if isinstance(value, bool):
        return None
    if isinstance(value, Rational):
        return Fraction(value)
    return None


class Exact:
    """A rational number times an integer power of pi.

    All closed-form angular integrals are rational multiples of pi, so the
    power is carried symbolically instead of rounding pi into a float.
    """

    __slots__ = ("value", "pi_power")

    def __init__(self, value: int | Fraction = 0, pi_power: int = 0) -> None:
        if pi_power < 0:
            raise ExactArithmeticError(f"negative power of pi is not representable: {pi_power}")
        self.value = Fraction(value)
        self.pi_power = pi_power if self.value != 0 else 0

    @classmethod
    def pi(cls, coefficient: int | Fraction = 1) -> Exact:
        return cls(coefficient, 1)

    @classmethod
    def parse(cls, text: str) -> Exact:
        match = _EXACT_RE.match(text)
        if match is None:
            raise FormatError(f"not an exact scalar: {text!r}")
        power = match.group("power")
        has_pi = "pi" in text
        try:
            value = Fraction(match.group("value"))
        except ZeroDivisionError as exc:
            raise FormatError(f"zero denominator in {text!r}") from exc
        return cls(value, int(power) if power else int(has_pi))

    def _coerce(self, other: object) -> Exact | None:
        if isinstance(other, Exact):
            return other
        fraction = _as_fraction(other)
        if fraction is not None:
            return Exact(fraction)
        return None

    def __add__(self, other: object) -> Scalar:
        exact = self._coerce(other)
        if exact is None:
            if isinstance(other, (float, complex)):
                return float(self) + other
            return NotImplemented
        if exact.value == 0:
            return self
        if self.value == 0:
            return exact
        if exact.pi_power != self.pi_power:
            raise ExactArithmeticError(f"cannot add {self} and {exact}: different powers of pi")
        return Exact(self.value + exact.value, self.pi_power)

    __radd__ = __add__

    def __neg__(self) -> Exact:
        return Exact(-self.value, self.pi_power)

    def __pos__(self) -> Exact:
        return self

    def __sub__(self, other: object) -> Scalar:
        return self + (-other)  # type: ignore[operator]

    def __rsub__(self, other: object) -> Scalar:
        return (-self) + other

    def __mul__(self, other: object) -> Scalar:
        exact = self._coerce(other)
        if exact is None:
            if isinstance(other, (float, complex)):
                return float(self) * other
            return NotImplemented
        return Exact(self.value * exact.value, self.pi_power + exact.pi_power)

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> Scalar:
        exact = self._coerce(other)
        if exact is None:
            if isinstance(other, (float, complex)):
                return float(self) / other
            return NotImplemented
        if exact.value == 0:
            raise ZeroDivisionError("division of an exact scalar by zero")
        if self.value == 0:
            return Exact(0)
        return Exact(self.value / exact.value, self.pi_power - exact.pi_power)

    def __rtruediv__(self, other: object) -> Scalar:
        exact = self._coerce(other)
        if exact is None:
            if isinstance(other, (float, complex)):
                return other / float(self)
            return NotImplemented
        return exact / self

    def __float__(self) -> float:
        return float(self.value) * math.pi**self.pi_power

    def __complex__(self) -> complex:
        return complex(float(self))

    def __abs__(self) -> Exact:
        return Exact(abs(self.value), self.pi_power)

    def __bool__(self) -> bool:
        return self.value != 0

    def __eq__(self, other: object) -> bool:
        exact = self._coerce(other)
        if exact is None:
            if isinstance(other, (float, complex)):
                return float(self) == other
            return NotImplemented
        return self.value == exact.value and self.pi_power == exact.pi_power

    def __hash__(self) -> int:
        if self.pi_power == 0:
            return hash(self.value)
        return hash((self.value, self.pi_power))

    def __str__(self) -> str:
        text = str(self.value)
        if self.pi_power == 1:
            return f"{text}*pi"
        if self.pi_power > 1:
            return f"{text}*pi^{self.pi_power}"
        return text

    def __repr__(self) -> str:
        return f"Exact({self})"


class GaussianRational:
    """Complex number with exact rational real and imaginary parts."""

    __slots__ = ("real", "imag")

    def __init__(self, real: int | Fraction = 0, imag: int | Fraction = 0) -> None:
        self.real = Fraction(real)
        self.imag = Fraction(imag)

    @staticmethod
    def _coerce(other: object) -> GaussianRational | None:
        if isinstance(other, GaussianRational):
            return other
        fraction = _as_fraction(other)
        if fraction is not None:
            return GaussianRational(fraction)
        return None

    def conjugate(self) -> GaussianRational:
        return GaussianRational(self.real, -self.imag)

    def abs_squared(self) -> Fraction:
        return self.real * self.real + self.imag * self.imag

    def __add__(self, other: object) -> Scalar:
        gauss = self._coerce(other)
        if gauss is None:
            if isinstance(other, (float, complex)):
                return complex(self) + other
            return NotImplemented
        return GaussianRational(self.real + gauss.real, self.imag + gauss.imag)

    __radd__ = __add__

    def __neg__(self) -> GaussianRational:
        return GaussianRational(-self.real, -self.imag)

    def __sub__(self, other: object) -> Scalar:
        return self + (-other)  # type: ignore[operator]

    def __rsub__(self, other: object) -> Scalar:
        return (-self) + other

    def __mul__(self, other: object) -> Scalar:
        gauss = self._coerce(other)
        if gauss is None:
            if isinstance(other, (float, complex)):
                return complex(self) * other
            return NotImplemented
        return GaussianRational(
            self.real * gauss.real - self.imag * gauss.imag,
            self.real * gauss.imag + self.imag * gauss.real,
        )

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> Scalar:
        fraction = _as_fraction(other)
        if fraction is None:
            if isinstance(other, (float, complex)):
                return complex(self) / other
            return NotImplemented
        return GaussianRational(self.real / fraction, self.imag / fraction)

    def __complex__(self) -> complex:
        return complex(float(self.real), float(self.imag))

    def __bool__(self) -> bool:
        return self.real != 0 or self.imag != 0

    def __eq__(self, other: object) -> bool:
        gauss = self._coerce(other)
        if gauss is None:
            if isinstance(other, (float, complex)):
                return complex(self) == other
            return NotImplemented
        return self.real == gauss.real and self.imag == gauss.imag

    def __hash__(self) -> int:
        if self.imag == 0:
            return hash(self.real)
        return hash((self.real, self.imag))

    def __repr__(self) -> str:
        return f"GaussianRational({self.real}, {self.imag})"


I = GaussianRational(0, 1)

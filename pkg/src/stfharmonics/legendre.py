from __future__ import annotations

import functools
import logging
import math
from collections.abc import Callable, Iterable, Sequence
from fractions import Fraction

import numpy as np
from tenacity import Retrying, retry_if_exception_type, stop_after_attempt

from .errors import QuadratureNotConvergedError
from .exact import Scalar

logger = logging.getLogger(__name__)


class LegendrePoly:
    """Legendre polynomial P_ℓ with exact coefficients; coefficients[k] multiplies x**k."""

    __slots__ = ("degree", "coefficients")

    def __init__(self, degree: int, coefficients: Sequence[Fraction]) -> None:
        self.degree = degree
        self.coefficients = tuple(Fraction(c) for c in coefficients)

    @property
    def leading_coefficient(self) -> Fraction:
        return self.coefficients[self.degree]

    def evaluate(self, x: Scalar) -> Scalar:
        result: Scalar = Fraction(0)
        for c in reversed(self.coefficients):
            result = result * x + c
        return result

    __call__ = evaluate

    def __mul__(self, other: LegendrePoly) -> tuple[Fraction, ...]:
        """Coefficient list of the product polynomial."""
        product = [Fraction(0)] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, a in enumerate(self.coefficients):
            if a == 0:
                continue
            for j, b in enumerate(other.coefficients):
                product[i + j] += a * b
        return tuple(product)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LegendrePoly):
            return NotImplemented
        return self.degree == other.degree and self.coefficients == other.coefficients

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        terms = [f"{c}*x^{k}" for k, c in enumerate(self.coefficients) if c != 0]
        return f"LegendrePoly({self.degree}: {' + '.join(terms) or '0'})"


@functools.cache
def legendre(degree: int) -> LegendrePoly:
    """P_ℓ from (ℓ+1) P_{ℓ+1} = (2ℓ+1) x P_ℓ - ℓ P_{ℓ-1}."""
    if degree < 0:
        raise ValueError(f"Legendre degree must be non-negative, got {degree}")
    previous = [Fraction(1)]
    if degree == 0:
        return LegendrePoly(0, previous)
    current = [Fraction(0), Fraction(1)]
    for n in range(1, degree):
        following = [Fraction(0)] * (n + 2)
        for k, c in enumerate(current):
            following[k + 1] += Fraction(2 * n + 1, n + 1) * c
        for k, c in enumerate(previous):
            following[k] -= Fraction(n, n + 1) * c
        previous, current = current, following
    return LegendrePoly(degree, current)


def moment_integral(power: int) -> Fraction:
    """∫_{-1}^{1} x**power dx."""
    if power < 0:
        raise ValueError(f"moment power must be non-negative, got {power}")
    if power % 2:
        return Fraction(0)
    return Fraction(2, power + 1)


def integrate_coefficients(coefficients: Sequence[Fraction]) -> Fraction:
    return sum((c * moment_integral(k) for k, c in enumerate(coefficients) if c != 0), Fraction(0))


def legendre_inner(a: LegendrePoly, b: LegendrePoly) -> Fraction:
    """Exact ∫_{-1}^{1} a(x) b(x) dx."""
    return integrate_coefficients(a * b)


def leading_coefficient(degree: int) -> Fraction:
    """C(2ℓ, ℓ) / 2**ℓ, the prefactor of the Maxwell multipole of order ℓ."""
    return Fraction(math.comb(2 * degree, degree), 2**degree)


def legendre_gram_schmidt(max_degree: int) -> list[LegendrePoly]:
    """The same polynomials built by orthogonalising 1, x, x², ... and fixing P_ℓ(1) = 1."""
    basis: list[LegendrePoly] = []
    for degree in range(max_degree + 1):
        candidate = [Fraction(0)] * degree + [Fraction(1)]
        monomial = LegendrePoly(degree, candidate)
        for lower in basis:
            projection = legendre_inner(monomial, lower) / legendre_inner(lower, lower)
            for k, c in enumerate(lower.coefficients):
                candidate[k] -= projection * c
        scale = sum(candidate, Fraction(0))
        basis.append(LegendrePoly(degree, [c / scale for c in candidate]))
    return basis


def compensated_sum(values: Iterable[Scalar]) -> Scalar:
    """Order-independent float summation; complex values are summed per part."""
    reals: list[float] = []
    imags: list[float] = []
    is_complex = False
    for v in values:
        c = complex(v)
        reals.append(c.real)
        imags.append(c.imag)
        is_complex = is_complex or isinstance(v, complex)
    total_real = math.fsum(reals)
    if is_complex:
        return complex(total_real, math.fsum(imags))
    return total_real


@functools.cache
def gauss_legendre(count: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on [-1, 1], exact for polynomials of degree <= 2*count - 1."""
    nodes, weights = np.polynomial.legendre.leggauss(count)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def _gauss_sum(fn: Callable[[float], Scalar], count: int) -> Scalar:
    nodes, weights = gauss_legendre(count)
    return compensated_sum(float(w) * fn(float(x)) for x, w in zip(nodes, weights))


def integrate_interval(
    fn: Callable[[float], Scalar],
    nodes: int = 16,
    tolerance: float = 1e-12,
    max_doublings: int = 8,
) -> Scalar:
    """∫_{-1}^{1} fn(x) dx by Gauss–Legendre, doubling the node count until two rules agree."""
    result: Scalar = 0.0
    for attempt in Retrying(
        stop=stop_after_attempt(max_doublings),
        retry=retry_if_exception_type(QuadratureNotConvergedError),
        reraise=True,
    ):
        with attempt:
            count = nodes * 2 ** (attempt.retry_state.attempt_number - 1)
            coarse = _gauss_sum(fn, count)
            result = _gauss_sum(fn, 2 * count)
            difference = abs(result - coarse)
            if difference > tolerance * max(1.0, abs(result)):
                logger.debug(f"Gauss-Legendre with {count} and {2 * count} nodes differ by {difference:.3e}")
                raise QuadratureNotConvergedError(
                    f"Gauss-Legendre quadrature did not converge: {count} vs {2 * count} nodes differ by {difference:.3e}",
                    difference,
                )
    return result

"""Numerical machinery that checks the analytic results independently.

Nothing here is used to compute a result the library returns; it exists so
that exact formulas can be compared against brute-force quadrature, a
textbook spherical-harmonic recurrence and finite differences.
"""

from __future__ import annotations

import cmath
import functools
import logging
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

import numpy as np
from tenacity import Retrying, retry_if_exception_type, stop_after_attempt

from .errors import ArgumentError, PoleProximityError, QuadratureNotConvergedError
from .exact import Exact, Scalar
from .harmonics import ylm_eval
from .legendre import compensated_sum, gauss_legendre
from .maxwell import UnitVec
from .sym_tensor import SymTensor

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SphereQuadrature:
    """Gauss–Legendre in cos θ times the uniform rule in φ.

    Exact for polynomials in n of total degree <= min(2 n_theta - 1, n_phi - 1).
    """

    n_theta: int
    n_phi: int

    @classmethod
    def from_degree(cls, degree: int) -> SphereQuadrature:
        if degree < 0:
            raise ArgumentError(f"degree must be non-negative, got {degree}")
        return cls(n_theta=degree // 2 + 1, n_phi=degree + 1)

    @property
    def degree(self) -> int:
        return min(2 * self.n_theta - 1, self.n_phi - 1)

    @functools.cached_property
    def nodes(self) -> tuple[np.ndarray, np.ndarray]:
        """(points of shape (N, 3), weights of shape (N,))."""
        cos_theta, theta_weights = gauss_legendre(self.n_theta)
        phi = 2 * math.pi * (np.arange(self.n_phi) + 0.5) / self.n_phi
        sin_theta = np.sqrt(1.0 - cos_theta**2)
        points = np.stack(
            [
                np.outer(sin_theta, np.cos(phi)).ravel(),
                np.outer(sin_theta, np.sin(phi)).ravel(),
                np.repeat(cos_theta, self.n_phi),
            ],
            axis=1,
        )
        weights = np.repeat(theta_weights, self.n_phi) * (2 * math.pi / self.n_phi)
        return points, weights

    def unit_vectors(self) -> list[UnitVec]:
        points, _ = self.nodes
        return [UnitVec(*(float(c) for c in p)) for p in points]

    def integrate_values(self, values: Sequence[Scalar]) -> Scalar:
        _, weights = self.nodes
        return compensated_sum(float(w) * v for w, v in zip(weights, values))

    def integrate(self, f: Callable[[UnitVec], Scalar]) -> Scalar:
        return self.integrate_values([f(n) for n in self.unit_vectors()])

    def gram(self, left: np.ndarray, right: np.ndarray) -> np.ndarray:
        """G[a, b] = Σ_nodes w left[node, a] right[node, b], each entry summed compensated."""
        _, weights = self.nodes
        dtype = complex if np.iscomplexobj(left) or np.iscomplexobj(right) else float
        result = np.empty((left.shape[1], right.shape[1]), dtype=dtype)
        for a in range(left.shape[1]):
            weighted = weights * left[:, a]
            for b in range(right.shape[1]):
                result[a, b] = compensated_sum((weighted * right[:, b]).tolist())
        return result


def integrate_sphere(
    f: Callable[[UnitVec], Scalar],
    degree_hint: int,
    tolerance: float = 1e-12,
    max_doublings: int = 4,
) -> Scalar:
    """∫ f dΩ, accepted once the rule for degree d and the rule for 2d+1 agree."""
    if degree_hint < 0:
        raise ArgumentError(f"degree hint must be non-negative, got {degree_hint}")
    result: Scalar = 0.0
    degree = degree_hint
    for attempt in Retrying(
        stop=stop_after_attempt(max_doublings),
        retry=retry_if_exception_type(QuadratureNotConvergedError),
        reraise=True,
    ):
        with attempt:
            coarse = SphereQuadrature.from_degree(degree).integrate(f)
            result = SphereQuadrature.from_degree(2 * degree + 1).integrate(f)
            difference = abs(result - coarse)
            if difference > tolerance * max(1.0, abs(result)):
                logger.warning(
                    f"sphere quadrature attempt {attempt.retry_state.attempt_number}: degree {degree} vs "
                    f"{2 * degree + 1} differ by {difference:.3e}"
                )
                degree = 2 * degree + 1
                raise QuadratureNotConvergedError(
                    f"sphere quadrature did not converge up to degree {degree}: last difference {difference:.3e}",
                    difference,
                )
    return result


def gamma_integrals(m: int, n: int, M: int) -> tuple[Exact, Exact]:
    """The two one-dimensional integrals behind every monomial on the sphere.

    phi:   ∫_0^{2π} cos^{2m}φ sin^{2(n-m)}φ dφ = 2π (2m)! (2p)! / (4^n m! p! n!),  p = n - m
    theta: ∫_0^π sin^{2n+1}θ cos^{2k}θ dθ = 4^{n+1} n! (M+1)! (2k)! / (k! (2M+2)!),  k = M - n
    """
    if not 0 <= m <= n <= M:
        raise ArgumentError(f"need 0 <= m <= n <= M, got m={m}, n={n}, M={M}")
    p = n - m
    k = M - n
    f = math.factorial
    phi = Fraction(2 * f(2 * m) * f(2 * p), 4**n * f(m) * f(p) * f(n))
    theta = Fraction(4 ** (n + 1) * f(n) * f(M + 1) * f(2 * k), f(k) * f(2 * M + 2))
    return Exact.pi(phi), Exact(theta)


def gamma_monomial_integral(exponents: Sequence[int]) -> Exact:
    """∫ n_x^a n_y^b n_z^c dΩ assembled from gamma_integrals."""
    a, b, c = exponents
    if a % 2 or b % 2 or c % 2:
        return Exact(0)
    phi, theta = gamma_integrals(a // 2, (a + b) // 2, (a + b + c) // 2)
    return phi * theta  # type: ignore[return-value]


def gamma_integral_tensor(rank: int) -> SymTensor:
    """∫ n_{i1} ... n_{iℓ} dΩ, componentwise from the φ and θ integrals."""
    return SymTensor.from_function(rank, 3, gamma_monomial_integral)


@functools.lru_cache(maxsize=256)
def _normalized_legendre_table(lmax: int, x: float) -> np.ndarray:
    """P̄_ℓ^m(x) for 0 <= m <= ℓ <= lmax, normalised for unit-norm Y_ℓm, without the (-1)^m phase."""
    table = np.zeros((lmax + 1, lmax + 1))
    sin_theta = math.sqrt(max(0.0, 1.0 - x * x))
    for m in range(lmax + 1):
        a_mm = 1.0
        for k in range(1, m + 1):
            a_mm *= (2 * k + 1) / (2 * k)
        table[m, m] = math.sqrt(a_mm / (4 * math.pi)) * sin_theta**m
        if m + 1 <= lmax:
            table[m + 1, m] = math.sqrt(2 * m + 3) * x * table[m, m]
        for ell in range(m + 2, lmax + 1):
            a_lm = math.sqrt((4 * ell * ell - 1) / (ell * ell - m * m))
            b_lm = -math.sqrt(
                (2 * ell + 1) * ((ell - 1) ** 2 - m * m) / ((2 * ell - 3) * (ell * ell - m * m))
            )
            table[ell, m] = a_lm * x * table[ell - 1, m] + b_lm * table[ell - 2, m]
    table.setflags(write=False)
    return table


def reference_ylm(order: int, m: int, theta: float, phi: float) -> complex:
    """Textbook Y_ℓm with the Condon–Shortley phase, from the associated-Legendre recurrence."""
    if order < 0 or abs(m) > order:
        raise ArgumentError(f"need |m| <= ℓ, got ℓ={order}, m={m}")
    table = _normalized_legendre_table(order, math.cos(theta))
    positive = (-1) ** abs(m) * float(table[order, abs(m)]) * cmath.exp(1j * abs(m) * phi)
    if m >= 0:
        return positive
    return (-1) ** abs(m) * positive.conjugate()


def fd_angular_laplacian(f: Callable[[UnitVec], Any], theta: float, phi: float, h: float) -> Any:
    """Central-difference f_θθ + cot θ f_θ + f_φφ / sin²θ.

    Works for anything supporting +, - and scalar *, so a whole SymTensor of
    components can be differentiated in one call.
    """
    if h <= 0:
        raise ArgumentError(f"step must be positive, got {h}")
    sin_theta = math.sin(theta)
    if sin_theta <= 0.1:
        raise PoleProximityError(f"θ={theta} is too close to a pole for the angular Laplacian stencil")
    centre = f(UnitVec.from_angles(theta, phi))
    up = f(UnitVec.from_angles(theta + h, phi))
    down = f(UnitVec.from_angles(theta - h, phi))
    east = f(UnitVec.from_angles(theta, phi + h))
    west = f(UnitVec.from_angles(theta, phi - h))
    second_theta = (up + down - centre * 2.0) * (1.0 / h**2)
    first_theta = (up - down) * (1.0 / (2.0 * h))
    second_phi = (east + west - centre * 2.0) * (1.0 / h**2)
    return second_theta + first_theta * (math.cos(theta) / sin_theta) + second_phi * (1.0 / sin_theta**2)


def phase_convention(order: int, m: int, theta: float = 1.1, phi: float = 0.7) -> complex:
    """ylm_eval / reference_ylm at a generic point; +1 means the two conventions coincide."""
    return ylm_eval(order, m, theta, phi) / reference_ylm(order, m, theta, phi)

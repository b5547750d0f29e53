"""Invariant suites run by `stf verify`: analytic results against independent numerics."""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .config import Config
from .errors import ArgumentError
from .harmonics import basis_family, completeness_residual, exactly_orthonormal
from .maxwell import UnitVec, angular_integral_monomial, maxwell_eval, orthogonality_tensor, recurrence_check
from .oracle import SphereQuadrature, fd_angular_laplacian, gamma_monomial_integral
from .sym_tensor import exponent_tuples

logger = logging.getLogger(__name__)

Suite = Literal["orthogonality", "recurrence", "laplacian", "eq19", "basis"]
SUITES: tuple[Suite, ...] = ("orthogonality", "recurrence", "laplacian", "eq19", "basis")

LAPLACIAN_POINTS = ((1.1, 0.7), (0.6, 2.3), (2.0, -1.2))


@dataclass(frozen=True)
class OrderResult:
    order: int
    residual: float
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class SuiteReport:
    suite: str
    results: list[OrderResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def max_residual(self) -> float:
        return max((r.residual for r in self.results), default=0.0)


def monomial_integrals_suite(lmax: int, config: Config) -> SuiteReport:
    """Closed-form monomial integrals against the φ/θ Gamma-function products, exactly."""
    results = []
    for rank in range(lmax + 1):
        residual = 0.0
        exact = True
        for e in exponent_tuples(rank, 3):
            closed = angular_integral_monomial(e)
            assembled = gamma_monomial_integral(e)
            if closed != assembled:
                exact = False
                residual = max(residual, abs(float(closed) - float(assembled)))
        results.append(OrderResult(rank, residual, exact))
    return SuiteReport("eq19", results)


def _component_values(order: int, directions: list[UnitVec]) -> np.ndarray:
    keys = exponent_tuples(order, 3)
    rows = []
    for n in directions:
        tensor = maxwell_eval(order, n)
        rows.append([float(tensor.component(e)) for e in keys])
    return np.array(rows)


def orthogonality_suite(lmax: int, config: Config) -> SuiteReport:
    """Quadrature of P^(ℓ)_I P^(ℓ')_J against the closed-form orthogonality tensor."""
    quadrature = SphereQuadrature.from_degree(config.degree_for(2 * lmax))
    directions = quadrature.unit_vectors()
    values = {order: _component_values(order, directions) for order in range(lmax + 1)}
    results = []
    for order in range(lmax + 1):
        residual = 0.0
        for other in range(lmax + 1):
            numeric = quadrature.gram(values[order], values[other])
            analytic = orthogonality_tensor(order, other)
            for a, left in enumerate(exponent_tuples(order, 3)):
                for b, right in enumerate(exponent_tuples(other, 3)):
                    residual = max(residual, abs(numeric[a, b] - float(analytic.component(left, right))))
        results.append(OrderResult(order, residual, residual <= config.tolerance))
    return SuiteReport("orthogonality", results)


def recurrence_suite(lmax: int, config: Config, samples: int = 50, seed: int = 0) -> SuiteReport:
    """Both recurrences at random directions, judged against the identity tolerance."""
    rng = np.random.default_rng(seed)
    directions = [UnitVec.from_vector(v) for v in rng.normal(size=(samples, 3))]
    results = []
    for order in range(1, lmax + 1):
        residual = max(recurrence_check(order, n).max_abs() for n in directions)
        results.append(OrderResult(order, residual, residual <= config.identity_tolerance))
    return SuiteReport("recurrence", results)


def laplacian_error(order: int, h: float) -> float:
    """max |Δ_fd P^(ℓ) + ℓ(ℓ+1) P^(ℓ)| over the sample points."""
    worst = 0.0
    for theta, phi in LAPLACIAN_POINTS:
        estimate = fd_angular_laplacian(lambda n: maxwell_eval(order, n).to_float(), theta, phi, h)
        exact = maxwell_eval(order, UnitVec.from_angles(theta, phi)).to_float() * (-order * (order + 1))
        worst = max(worst, estimate.max_abs_difference(exact))
    return worst


def laplacian_suite(lmax: int, config: Config, h: float = 0.02) -> SuiteReport:
    """Finite-difference Laplacian eigenvalue check; halving h must cut the error by about 4."""
    results = []
    for order in range(lmax + 1):
        coarse = laplacian_error(order, h)
        fine = laplacian_error(order, h / 2)
        if order == 0:
            results.append(OrderResult(0, fine, fine <= config.identity_tolerance))
            continue
        ratio = coarse / fine if fine > 0 else math.inf
        results.append(OrderResult(order, fine, 3.5 <= ratio <= 4.5, detail=f"ratio={ratio:.3f}"))
    return SuiteReport("laplacian", results)


def basis_suite(lmax: int, config: Config) -> SuiteReport:
    """Exact orthonormality of the basis tensors and numeric completeness."""
    results = []
    for order in range(lmax + 1):
        family = basis_family(order)
        exact = all(exactly_orthonormal(a, b) for a in family for b in family)
        residual = completeness_residual(order)
        results.append(OrderResult(order, residual, exact and residual <= config.identity_tolerance))
    return SuiteReport("basis", results)


RUNNERS: dict[str, Callable[[int, Config], SuiteReport]] = {
    "orthogonality": orthogonality_suite,
    "recurrence": recurrence_suite,
    "laplacian": laplacian_suite,
    "eq19": monomial_integrals_suite,
    "basis": basis_suite,
}


def run_suite(suite: str, lmax: int, config: Config | None = None) -> SuiteReport:
    if suite not in RUNNERS:
        raise ArgumentError(f"unknown suite {suite!r}, expected one of {SUITES}")
    config = config or Config()
    logger.debug(f"running suite {suite} up to ℓ={lmax}")
    return RUNNERS[suite](lmax, config)

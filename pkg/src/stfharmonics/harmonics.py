from __future__ import annotations

import functools
import logging
import math
from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal

from .errors import ArgumentError, BasisMismatchError
from .exact import GaussianRational, Scalar
from .legendre import leading_coefficient
from .maxwell import MultipoleExpansion, UnitVec, maxwell_eval
from .sym_tensor import SymTensor, contract_full, detrace, stf_projector, sym_outer

logger = logging.getLogger(__name__)

Basis = Literal["complex", "real"]
BASES: tuple[Basis, ...] = ("complex", "real")


def u_vector(m: int) -> tuple[GaussianRational, GaussianRational, GaussianRational]:
    """u^(-1) = (1, i, 0), u^(0) = (0, 0, 1), u^(1) = (-1, i, 0)."""
    if m == -1:
        return (GaussianRational(1), GaussianRational(0, 1), GaussianRational(0))
    if m == 0:
        return (GaussianRational(0), GaussianRational(0), GaussianRational(1))
    if m == 1:
        return (GaussianRational(-1), GaussianRational(0, 1), GaussianRational(0))
    raise ArgumentError(f"u-vectors exist for m in {{-1, 0, 1}}, got {m}")


def _check_order(order: int, m: int) -> None:
    if order < 0:
        raise ArgumentError(f"order must be non-negative, got {order}")
    if abs(m) > order:
        raise ArgumentError(f"|m| must not exceed ℓ, got ℓ={order}, m={m}")


@dataclass(frozen=True)
class BasisTensor:
    """𝒴^(ℓ,m) = sqrt(norm_squared) · unscaled.

    `unscaled` holds exact Gaussian-rational (complex basis) or rational (real
    basis) components; the square root stays out of the exact part.
    """

    order: int
    m: int
    basis: Basis
    norm_squared: Fraction
    unscaled: SymTensor

    @functools.cached_property
    def tensor(self) -> SymTensor:
        scale = math.sqrt(self.norm_squared)
        return self.unscaled.map(lambda v: complex(v) * scale if self.basis == "complex" else float(v) * scale)

    def exact_inner(self, other: BasisTensor) -> tuple[Fraction, Scalar]:
        """(s, c) with 𝒴*·𝒴' = sqrt(s) · c, both parts exact."""
        return self.norm_squared * other.norm_squared, contract_full(self.unscaled.conjugate(), other.unscaled)

    def inner(self, other: BasisTensor) -> complex:
        scale_squared, raw = self.exact_inner(other)
        return math.sqrt(scale_squared) * complex(raw)


def _u_product(order: int, m: int) -> SymTensor:
    """Symmetrised u^(±1)^{⊗|m|} ⊗ u^(0)^{⊗(ℓ-|m|)}."""
    sign = 1 if m >= 0 else -1
    raising = SymTensor.outer_power(u_vector(sign), abs(m))
    axial = SymTensor.outer_power(u_vector(0), order - abs(m))
    return sym_outer(raising, axial)


@functools.cache
def basis_tensor(order: int, m: int) -> BasisTensor:
    _check_order(order, m)
    return BasisTensor(
        order=order,
        m=m,
        basis="complex",
        norm_squared=Fraction(math.comb(2 * order, order - abs(m)), 2**order),
        unscaled=detrace(_u_product(order, m)),
    )


@functools.cache
def real_basis_tensor(order: int, m: int) -> BasisTensor:
    """√2 Re 𝒴^(ℓ,m) for m > 0, √2 Im 𝒴^(ℓ,|m|) for m < 0, 𝒴^(ℓ,0) itself for m = 0."""
    _check_order(order, m)
    complex_tensor = basis_tensor(order, abs(m))
    if m == 0:
        unscaled = complex_tensor.unscaled.real()
        norm_squared = complex_tensor.norm_squared
    else:
        unscaled = complex_tensor.unscaled.real() if m > 0 else complex_tensor.unscaled.imag()
        norm_squared = 2 * complex_tensor.norm_squared
    return BasisTensor(order=order, m=m, basis="real", norm_squared=norm_squared, unscaled=unscaled)


def basis_family(order: int, basis: Basis = "complex") -> list[BasisTensor]:
    """All 2ℓ+1 basis tensors of one order, m = -ℓ ... ℓ."""
    build = basis_tensor if basis == "complex" else real_basis_tensor
    return [build(order, m) for m in range(-order, order + 1)]


def completeness_residual(order: int, basis: Basis = "complex") -> float:
    """max |Σ_m 𝒴*_I ⊗ 𝒴_J - δ_I^{{J}}| over components."""
    family = [b.tensor for b in basis_family(order, basis)]
    projector = stf_projector(order)
    worst = 0.0
    for (left, right), expected in projector.items():
        total = sum(y.component(left).conjugate() * y.component(right) for y in family)
        worst = max(worst, abs(total - float(expected)))
    return worst


def _prefactor(order: int) -> float:
    """sqrt(4π/(2ℓ+1) · C(2ℓ,ℓ)/2^ℓ)."""
    return math.sqrt(4 * math.pi / (2 * order + 1) * float(leading_coefficient(order)))


@dataclass(frozen=True)
class SphCoeffs:
    """Spherical-harmonic coefficients f_{ℓ,m} tagged with the basis they refer to."""

    basis: Basis
    coefficients: Mapping[tuple[int, int], complex]

    def __post_init__(self) -> None:
        if self.basis not in BASES:
            raise ArgumentError(f"unknown basis {self.basis!r}, expected one of {BASES}")
        for order, m in self.coefficients:
            _check_order(order, m)

    def __getitem__(self, key: tuple[int, int]) -> complex:
        return self.coefficients.get(key, 0j)

    def items(self) -> Iterator[tuple[tuple[int, int], complex]]:
        return iter(sorted(self.coefficients.items()))

    def orders(self) -> list[int]:
        return sorted({order for order, _ in self.coefficients})

    def max_abs_difference(self, other: SphCoeffs) -> float:
        keys = set(self.coefficients) | set(other.coefficients)
        return max((abs(self[k] - other[k]) for k in keys), default=0.0)


def stf_to_sph(expansion: MultipoleExpansion, basis: Basis = "complex") -> SphCoeffs:
    """f_{ℓ,m} = sqrt(4π/(2ℓ+1) · C(2ℓ,ℓ)/2^ℓ) · 𝒴^(ℓ,m) · f^(ℓ)."""
    coefficients: dict[tuple[int, int], complex] = {}
    for order, tensor in expansion.items():
        scale = _prefactor(order)
        for y in basis_family(order, basis):
            coefficients[(order, y.m)] = scale * complex(contract_full(y.tensor, tensor))
    return SphCoeffs(basis, coefficients)


def sph_to_stf(
    coefficients: SphCoeffs, basis: Basis | None = None, tolerance: float = 1e-12
) -> MultipoleExpansion:
    """Inverse of stf_to_sph: f^(ℓ) = Σ_m f_{ℓ,m} 𝒴^(ℓ,m)* / sqrt(4π/(2ℓ+1) · C(2ℓ,ℓ)/2^ℓ).

    Imaginary parts at or below `tolerance` are dropped, so real functions come
    back with real coefficients.
    """
    if basis is not None and basis != coefficients.basis:
        raise BasisMismatchError(f"coefficients are in the {coefficients.basis} basis, {basis} was requested")
    result: dict[int, SymTensor] = {}
    for order in coefficients.orders():
        total = SymTensor.zeros(order).to_float()
        for y in basis_family(order, coefficients.basis):
            value = coefficients[(order, y.m)]
            if value != 0:
                total = total + y.tensor.conjugate() * value
        total = total / _prefactor(order)
        if total.imag().max_abs() <= tolerance * max(1.0, total.max_abs()):
            total = total.real()
        else:
            logger.warning(
                f"order {order} keeps complex STF coefficients, imaginary parts up to {total.imag().max_abs():.3e}"
            )
        result[order] = total
    return MultipoleExpansion(result)


def sph_inner(c: SphCoeffs, d: SphCoeffs) -> complex:
    """Σ_{ℓ,m} conj(c_{ℓm}) d_{ℓm}; equals ∫ f* g dΩ for orthonormal harmonics."""
    if c.basis != d.basis:
        raise BasisMismatchError(f"cannot pair {c.basis} with {d.basis} coefficients")
    keys = set(c.coefficients) | set(d.coefficients)
    return sum((c[k].conjugate() * d[k] for k in sorted(keys)), 0j)


def ylm_eval(order: int, m: int, theta: float, phi: float, basis: Basis = "complex") -> complex:
    """Y_{ℓ,m}(θ, φ) = sqrt((2ℓ+1)/(4π) · 2^ℓ/C(2ℓ,ℓ)) · P^(ℓ)(n) · 𝒴^(ℓ,m)*."""
    _check_order(order, m)
    y = basis_tensor(order, m) if basis == "complex" else real_basis_tensor(order, m)
    n = UnitVec.from_angles(theta, phi)
    return complex(contract_full(maxwell_eval(order, n), y.tensor.conjugate())) / _prefactor(order)


def ylm_eval_real(order: int, m: int, theta: float, phi: float) -> float:
    return ylm_eval(order, m, theta, phi, basis="real").real


def u_contraction(order: int, ms: Sequence[int], n: UnitVec | Sequence[Scalar]) -> complex:
    """P^(ℓ)(n) contracted with u^(m1) ⊗ ... ⊗ u^(mℓ)."""
    if len(ms) != order:
        raise ArgumentError(f"need {order} u-vector labels, got {len(ms)}")
    product = SymTensor.scalar(1)
    for m in ms:
        product = sym_outer(product, SymTensor.vector(u_vector(m)))
    return complex(contract_full(maxwell_eval(order, n), product))


def u_contraction_rhs(order: int, m: int, theta: float, phi: float) -> complex:
    """(-1)^m sqrt(4π/(2ℓ+1)) sqrt((ℓ-m)!(ℓ+m)!)/ℓ! · Y_{ℓ,-m}, with m = Σ m_j."""
    _check_order(order, m)
    scale = math.sqrt(4 * math.pi / (2 * order + 1)) * math.sqrt(
        math.factorial(order - m) * math.factorial(order + m)
    ) / math.factorial(order)
    return (-1) ** m * scale * ylm_eval(order, -m, theta, phi)


def exactly_orthonormal(a: BasisTensor, b: BasisTensor) -> bool:
    """𝒴_a* · 𝒴_b == δ_ab decided in exact arithmetic."""
    scale_squared, raw = a.exact_inner(b)
    if a.m != b.m or a.order != b.order:
        return raw == 0
    real = raw.real if isinstance(raw, GaussianRational) else raw
    imag = raw.imag if isinstance(raw, GaussianRational) else 0
    return imag == 0 and real > 0 and scale_squared * real * real == 1

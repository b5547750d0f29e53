from __future__ import annotations

import functools
import logging
import math
from collections.abc import Callable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.special import sici

from .errors import (
    ArgumentError,
    NotOrthogonalError,
    NotUnitVectorError,
    PreconditionError,
    RankMismatchError,
)
from .exact import Exact, GaussianRational, Scalar
from .legendre import gauss_legendre, integrate_interval, leading_coefficient, legendre
from .sym_tensor import (
    Exponents,
    PairedTensor,
    SymTensor,
    _sub,
    contract_full,
    contract_partial,
    contract_vector,
    delta_product,
    detrace,
    exponent_tuples,
    exponents_of,
    is_traceless,
    multiplicity,
    stf_projector,
    sym_outer,
    unit_exponents,
)

logger = logging.getLogger(__name__)

UNIT_TOLERANCE = 1e-9
ORTHOGONALITY_TOLERANCE = 1e-10


@dataclass(frozen=True)
class UnitVec:
    """A direction n on the unit sphere.

    Components may be floats or exact rationals such as (3/5, 4/5, 0); the
    rational case keeps every downstream evaluation exact.
    """

    x: Scalar
    y: Scalar
    z: Scalar

    def __post_init__(self) -> None:
        norm_squared = self.x * self.x + self.y * self.y + self.z * self.z
        if abs(float(norm_squared) - 1.0) > UNIT_TOLERANCE:
            raise NotUnitVectorError(
                f"({self.x}, {self.y}, {self.z}) is not a unit vector: |n|^2 = {float(norm_squared):.12g}"
            )

    @classmethod
    def from_angles(cls, theta: float, phi: float) -> UnitVec:
        return cls(
            math.sin(theta) * math.cos(phi),
            math.sin(theta) * math.sin(phi),
            math.cos(theta),
        )

    @classmethod
    def from_vector(cls, vector: Sequence[float]) -> UnitVec:
        """Normalise an arbitrary non-zero vector."""
        norm = math.sqrt(sum(float(v) ** 2 for v in vector))
        if len(vector) != 3 or norm == 0.0:
            raise ArgumentError(f"cannot normalise {tuple(vector)} to a unit vector")
        return cls(*(float(v) / norm for v in vector))

    @classmethod
    def coerce(cls, value: UnitVec | Sequence[Scalar]) -> UnitVec:
        if isinstance(value, UnitVec):
            return value
        if len(value) != 3:
            raise NotUnitVectorError(f"a direction needs three components, got {len(value)}")
        return cls(*value)

    @property
    def components(self) -> tuple[Scalar, Scalar, Scalar]:
        return (self.x, self.y, self.z)

    def angles(self) -> tuple[float, float]:
        """(θ, φ) with θ in [0, π] and φ in (-π, π]."""
        z = min(1.0, max(-1.0, float(self.z)))
        return math.acos(z), math.atan2(float(self.y), float(self.x))

    def dot(self, other: Sequence[Scalar]) -> Scalar:
        return self.x * other[0] + self.y * other[1] + self.z * other[2]

    def __iter__(self) -> Iterator[Scalar]:
        return iter(self.components)

    def __len__(self) -> int:
        return 3

    def __getitem__(self, axis: int) -> Scalar:
        return self.components[axis]


def _four_pi_times(value: Scalar) -> Scalar:
    if isinstance(value, (int, Fraction)):
        return Exact.pi(4 * Fraction(value))
    if isinstance(value, Exact):
        return value * Exact.pi(4)
    if isinstance(value, GaussianRational):
        value = complex(value)
    return 4 * math.pi * value


class AngularPolynomial:
    """f(n) = Σ_k A^(k) · n^{⊗k}, one symmetric coefficient tensor per rank."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Sequence[SymTensor] | Mapping[int, SymTensor] = ()) -> None:
        merged: dict[int, SymTensor] = {}
        for tensor in terms.values() if isinstance(terms, Mapping) else terms:
            if tensor.dim != 3:
                raise RankMismatchError(f"angular polynomials live on three axes, got a tensor over {tensor.dim}")
            merged[tensor.rank] = merged[tensor.rank] + tensor if tensor.rank in merged else tensor
        self._terms = dict(sorted(merged.items()))

    @classmethod
    def constant(cls, value: Scalar) -> AngularPolynomial:
        return cls([SymTensor.scalar(value)])

    @classmethod
    def monomial(cls, exponents: Exponents, coefficient: Scalar = 1) -> AngularPolynomial:
        """coefficient · n_x^a n_y^b n_z^c."""
        return cls([SymTensor.unit(tuple(exponents)) * coefficient])

    @classmethod
    def from_tensor(cls, tensor: SymTensor) -> AngularPolynomial:
        return cls([tensor])

    @property
    def terms(self) -> list[SymTensor]:
        return list(self._terms.values())

    @property
    def ranks(self) -> list[int]:
        return list(self._terms)

    @property
    def max_rank(self) -> int:
        return max(self._terms, default=0)

    def term(self, rank: int) -> SymTensor:
        return self._terms.get(rank, SymTensor.zeros(rank))

    def evaluate(self, n: UnitVec | Sequence[Scalar]) -> Scalar:
        n = UnitVec.coerce(n)
        total: Scalar = Fraction(0)
        for rank, tensor in self._terms.items():
            total = total + contract_full(tensor, SymTensor.outer_power(n, rank))
        return total

    __call__ = evaluate

    def __add__(self, other: AngularPolynomial) -> AngularPolynomial:
        return AngularPolynomial(self.terms + other.terms)

    def __neg__(self) -> AngularPolynomial:
        return AngularPolynomial([-t for t in self.terms])

    def __sub__(self, other: AngularPolynomial) -> AngularPolynomial:
        return self + (-other)

    def __mul__(self, other: Scalar | AngularPolynomial) -> AngularPolynomial:
        if isinstance(other, AngularPolynomial):
            return AngularPolynomial([sym_outer(a, b) for a in self.terms for b in other.terms])
        return AngularPolynomial([t * other for t in self.terms])

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        """True when every coefficient tensor vanishes (not merely the function on the sphere)."""
        return all(t.is_zero() for t in self._terms.values())

    def equivalent(self, other: AngularPolynomial) -> bool:
        """Exact equality as functions on the sphere, decided through the multipole expansion."""
        difference = expand(self - other)
        return all(t.is_zero() for _, t in difference.items())

    def integral(self) -> Scalar:
        """∫ f dΩ, exact for rational coefficients."""
        mean: Scalar = Fraction(0)
        for rank, tensor in self._terms.items():
            if rank % 2 == 0:
                mean = mean + contract_full(tensor, mean_tensor(rank))
        return _four_pi_times(mean)

    def __repr__(self) -> str:
        return f"AngularPolynomial(ranks={self.ranks})"


class PolynomialTensor:
    """A symmetric rank-ℓ tensor whose components are angular polynomials."""

    __slots__ = ("rank", "_components")

    def __init__(self, rank: int, components: Mapping[Exponents, AngularPolynomial]) -> None:
        self.rank = rank
        self._components = {e: components[e] for e in exponent_tuples(rank, 3)}

    def component(self, exponents: Exponents) -> AngularPolynomial:
        return self._components[tuple(exponents)]

    def __getitem__(self, index: int | Sequence[int]) -> AngularPolynomial:
        if isinstance(index, int):
            index = (index,)
        if len(index) != self.rank:
            raise RankMismatchError(f"index {tuple(index)} has length {len(index)}, tensor has rank {self.rank}")
        return self._components[exponents_of(index, 3)]

    def items(self) -> Iterator[tuple[Exponents, AngularPolynomial]]:
        return iter(self._components.items())

    def trace(self) -> PolynomialTensor:
        """Contraction over one index pair, componentwise."""
        if self.rank < 2:
            raise RankMismatchError(f"trace needs rank >= 2, got {self.rank}")
        doubled = [tuple(2 * u for u in unit_exponents(a, 3)) for a in range(3)]
        traced = {}
        for e in exponent_tuples(self.rank - 2, 3):
            total = AngularPolynomial()
            for step in doubled:
                total = total + self._components[tuple(x + y for x, y in zip(e, step))]
            traced[e] = total
        return PolynomialTensor(self.rank - 2, traced)

    def evaluate(self, n: UnitVec | Sequence[Scalar]) -> SymTensor:
        n = UnitVec.coerce(n)
        return SymTensor(self.rank, 3, {e: p.evaluate(n) for e, p in self._components.items()})


@functools.cache
def monomial_mean(exponents: Exponents) -> Fraction:
    """Average of n_x^a n_y^b n_z^c over the unit sphere."""
    if any(k < 0 for k in exponents):
        raise ArgumentError(f"exponents must be non-negative, got {exponents}")
    rank = sum(exponents)
    if any(k % 2 for k in exponents):
        return Fraction(0)
    return Fraction(delta_product(rank).component(tuple(exponents))) / (rank + 1)


@functools.cache
def mean_tensor(rank: int) -> SymTensor:
    """⟨n_{i1} ... n_{iℓ}⟩ over the sphere: δ_(i1i2 ... δ_iℓ-1iℓ) / (ℓ+1) for even ℓ, zero otherwise."""
    if rank % 2:
        return SymTensor.zeros(rank)
    return delta_product(rank) / (rank + 1)


def angular_integral_monomial(exponents: Exponents) -> Exact:
    """∫ n_x^a n_y^b n_z^c dΩ as a rational multiple of π."""
    if len(exponents) != 3:
        raise ArgumentError(f"expected three exponents, got {tuple(exponents)}")
    return Exact.pi(4 * monomial_mean(tuple(exponents)))


@functools.cache
def maxwell_tensor(order: int) -> PolynomialTensor:
    """P^(ℓ)(n) = C(2ℓ,ℓ)/2^ℓ · n_{{i1} ... n_{iℓ}}, each component as a polynomial in n."""
    if order < 0:
        raise ArgumentError(f"multipole order must be non-negative, got {order}")
    scale = leading_coefficient(order)
    return PolynomialTensor(
        order,
        {e: AngularPolynomial([detrace(SymTensor.unit(e)) * scale]) for e in exponent_tuples(order, 3)},
    )


@functools.cache
def legendre_recipe_tensor(order: int) -> PolynomialTensor:
    """P^(ℓ) written by replacing x^k in P_ℓ(x) with n_(i1 ... n_ik δ ... δ).

    Equal to maxwell_tensor(ℓ) on the sphere; kept as an independent construction.
    """
    poly = legendre(order)
    components = {}
    for target in exponent_tuples(order, 3):
        terms = []
        for k in range(order % 2, order + 1, 2):
            a_k = poly.coefficients[k]
            deltas = delta_product(order - k)

            def coefficient(alpha: Exponents, deltas: SymTensor = deltas, target: Exponents = target) -> Scalar:
                beta = _sub(target, alpha)
                if beta is None:
                    return Fraction(0)
                return deltas.component(beta) * Fraction(multiplicity(beta), multiplicity(target))

            terms.append(SymTensor.from_function(k, 3, coefficient) * a_k)
        components[target] = AngularPolynomial(terms)
    return PolynomialTensor(order, components)


def maxwell_eval(order: int, n: UnitVec | Sequence[Scalar]) -> SymTensor:
    """P^(ℓ) at a direction: exact for rational n, floats otherwise."""
    if order < 0:
        raise ArgumentError(f"multipole order must be non-negative, got {order}")
    n = UnitVec.coerce(n)
    return detrace(SymTensor.outer_power(n, order)) * leading_coefficient(order)


def scalar_multipole(tensor: SymTensor, n: UnitVec | Sequence[Scalar]) -> Scalar:
    """Y_{i1...iℓ} n_{i1} ... n_{iℓ} for an STF tensor Y: a degree-ℓ harmonic on the sphere."""
    return contract_full(tensor, SymTensor.outer_power(UnitVec.coerce(n), tensor.rank))


def integrate_product(f: AngularPolynomial, g: AngularPolynomial) -> Scalar:
    """∫ f g dΩ reduced to monomial integrals."""
    mean: Scalar = Fraction(0)
    for a in f.terms:
        for b in g.terms:
            if (a.rank + b.rank) % 2:
                continue
            mean = mean + contract_full(a, contract_partial(mean_tensor(a.rank + b.rank), b))
    return _four_pi_times(mean)


def orthogonality_tensor(order: int, other_order: int) -> PairedTensor:
    """∫ P^(ℓ)_I P^(ℓ')_J dΩ, indexed (I, J)."""
    if order != other_order:
        return PairedTensor(order, other_order)
    scale = Exact.pi(4 * leading_coefficient(order) / (2 * order + 1))
    return stf_projector(order) * scale


def lower_monomial_integral(order: int, monomial_rank: int) -> PairedTensor:
    """∫ P^(ℓ)_I n_J dΩ for |J| = monomial_rank; identically zero when monomial_rank < ℓ."""
    scale = leading_coefficient(order)
    means = mean_tensor(order + monomial_rank)
    rows = {
        e: contract_partial(means, detrace(SymTensor.unit(e)) * scale).map(_four_pi_times)
        for e in exponent_tuples(order, 3)
    }
    return PairedTensor.from_rows(order, 3, rows)


class MultipoleExpansion:
    """f(n) = Σ_ℓ f^(ℓ) · P^(ℓ)(n) with traceless symmetric coefficients."""

    __slots__ = ("_coefficients",)

    def __init__(self, coefficients: Mapping[int, SymTensor]) -> None:
        checked: dict[int, SymTensor] = {}
        for order, tensor in sorted(coefficients.items()):
            if tensor.rank != order:
                raise RankMismatchError(f"coefficient for order {order} has rank {tensor.rank}")
            if tensor.dim != 3:
                raise RankMismatchError(f"coefficient for order {order} lives on {tensor.dim} axes, expected 3")
            exact = all(isinstance(v, (Fraction, Exact, GaussianRational)) for _, v in tensor.items())
            tol = 0.0 if exact else 1e-9 * max(1.0, tensor.max_abs())
            if not is_traceless(tensor, tol):
                raise PreconditionError(f"coefficient for order {order} is not trace-free")
            checked[order] = tensor
        self._coefficients = checked

    def __getitem__(self, order: int) -> SymTensor:
        return self._coefficients[order]

    def __contains__(self, order: object) -> bool:
        return order in self._coefficients

    def get(self, order: int) -> SymTensor:
        return self._coefficients.get(order, SymTensor.zeros(order))

    def items(self) -> Iterator[tuple[int, SymTensor]]:
        return iter(self._coefficients.items())

    def orders(self) -> list[int]:
        return list(self._coefficients)

    def __len__(self) -> int:
        return len(self._coefficients)

    def truncated(self, max_order: int) -> MultipoleExpansion:
        return MultipoleExpansion({k: v for k, v in self._coefficients.items() if k <= max_order})

    def max_abs_difference(self, other: MultipoleExpansion) -> float:
        orders = set(self._coefficients) | set(other._coefficients)
        return max((self.get(k).max_abs_difference(other.get(k)) for k in orders), default=0.0)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MultipoleExpansion):
            return NotImplemented
        orders = set(self._coefficients) | set(other._coefficients)
        return all(self.get(k) == other.get(k) for k in orders)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"MultipoleExpansion(orders={self.orders()})"


def expand(f: AngularPolynomial) -> MultipoleExpansion:
    """f^(ℓ) = (2ℓ+1)/(4π) · 2^ℓ/C(2ℓ,ℓ) · ∫ P^(ℓ) f dΩ, evaluated through monomial integrals.

    A rank-r term feeds only orders ℓ <= r of the same parity. Every such
    order gets an entry, even when its coefficient comes out zero.
    """
    coefficients: dict[int, SymTensor] = {}
    for term in f.terms:
        for order in range(term.rank % 2, term.rank + 1, 2):
            projected = detrace(contract_partial(mean_tensor(order + term.rank), term)) * (2 * order + 1)
            coefficients[order] = coefficients[order] + projected if order in coefficients else projected
    if not coefficients:
        coefficients[0] = SymTensor.scalar(0)
    return MultipoleExpansion(coefficients)


def reconstruct(expansion: MultipoleExpansion, n: UnitVec | Sequence[Scalar]) -> Scalar:
    n = UnitVec.coerce(n)
    total: Scalar = Fraction(0)
    for order, tensor in expansion.items():
        total = total + contract_full(tensor, maxwell_eval(order, n))
    return total


def expansion_polynomial(expansion: MultipoleExpansion) -> AngularPolynomial:
    """The expansion written back as an angular polynomial, one STF term per order."""
    return AngularPolynomial([tensor * leading_coefficient(order) for order, tensor in expansion.items()])


def parseval_product(f: MultipoleExpansion, g: MultipoleExpansion) -> Scalar:
    """∫ f g dΩ = Σ_ℓ 4π/(2ℓ+1) · C(2ℓ,ℓ)/2^ℓ · f^(ℓ)·g^(ℓ)."""
    total: Scalar = Fraction(0)
    for order, tensor in f.items():
        if order in g:
            weight = leading_coefficient(order) / (2 * order + 1)
            total = total + contract_full(tensor, g[order]) * weight
    return _four_pi_times(total)


def generating_closed_form(n: UnitVec | Sequence[Scalar], q: Sequence[float]) -> float:
    """1 / sqrt(1 - 2 n·q + |q|²)."""
    n = UnitVec.coerce(n)
    q_squared = sum(float(c) ** 2 for c in q)
    return 1.0 / math.sqrt(1.0 - 2.0 * float(n.dot(q)) + q_squared)


def generating_partial_sum(n: UnitVec | Sequence[Scalar], q: Sequence[float], max_order: int) -> float:
    """Σ_{ℓ <= L} P^(ℓ)(n) · q^{⊗ℓ}."""
    n = UnitVec.coerce(n)
    if len(q) != 3:
        raise ArgumentError(f"q needs three components, got {len(q)}")
    norm = math.sqrt(sum(float(c) ** 2 for c in q))
    if norm >= 1.0:
        raise PreconditionError(f"the generating series needs |q| < 1, got {norm}")
    q_float = [float(c) for c in q]
    return math.fsum(
        float(contract_full(maxwell_eval(order, n), SymTensor.outer_power(q_float, order)))
        for order in range(max_order + 1)
    )


@dataclass(frozen=True)
class RecurrenceResiduals:
    order: int
    raising: PairedTensor
    lowering: SymTensor

    def max_abs(self) -> float:
        return max(self.raising.max_abs(), self.lowering.max_abs())


def recurrence_check(order: int, n: UnitVec | Sequence[Scalar]) -> RecurrenceResiduals:
    """Residuals of the two recurrences linking P^(ℓ-1), P^(ℓ), P^(ℓ+1).

    raising[j, I] = (2ℓ+1) n_j P^(ℓ)_I - (ℓ+1) P^(ℓ+1)_{jI} - (2ℓ-1) δ_{j{i1} P^(ℓ-1)_{i2...iℓ}}
    lowering[I]   = n_j P^(ℓ)_{jI} - P^(ℓ-1)_I
    """
    if order < 1:
        raise ArgumentError(f"recurrences need order >= 1, got {order}")
    n = UnitVec.coerce(n)
    current = maxwell_eval(order, n)
    upper = maxwell_eval(order + 1, n)
    lower = maxwell_eval(order - 1, n)
    rows = {}
    for axis in range(3):
        unit = [Fraction(int(a == axis)) for a in range(3)]
        rows[unit_exponents(axis, 3)] = (
            current * ((2 * order + 1) * n[axis])
            - contract_vector(upper, unit) * (order + 1)
            - detrace(sym_outer(SymTensor.vector(unit), lower)) * (2 * order - 1)
        )
    return RecurrenceResiduals(
        order=order,
        raising=PairedTensor.from_rows(1, 3, rows),
        lowering=contract_vector(current, n) - lower,
    )


def link_to_legendre(
    order: int, n: UnitVec | Sequence[Scalar], s: UnitVec | Sequence[Scalar]
) -> tuple[Scalar, Scalar]:
    """(s^{⊗ℓ} · P^(ℓ)(n), P^(ℓ)(s) · P^(ℓ)(n)); equal to P_ℓ(n·s) and C(2ℓ,ℓ)/2^ℓ · P_ℓ(n·s)."""
    n = UnitVec.coerce(n)
    s = UnitVec.coerce(s)
    at_n = maxwell_eval(order, n)
    return (
        contract_full(SymTensor.outer_power(s, order), at_n),
        contract_full(maxwell_eval(order, s), at_n),
    )


def funk_hecke(
    order: int,
    f: Callable[[float], Scalar],
    s: UnitVec | Sequence[Scalar],
    tolerance: float = 1e-12,
    nodes: int = 16,
) -> SymTensor:
    """∫ P^(ℓ)(n) f(n·s) dΩ = 2π P^(ℓ)(s) ∫_{-1}^{1} P_ℓ(x) f(x) dx."""
    s = UnitVec.coerce(s)
    poly = legendre(order)
    radial = integrate_interval(
        lambda x: float(poly(x)) * f(x), nodes=max(nodes, order + 1), tolerance=tolerance
    )
    return maxwell_eval(order, s).to_float() * (2 * math.pi * radial)


def _check_orthogonal(R: np.ndarray) -> np.ndarray:
    R = np.asarray(R, dtype=float)
    if R.shape != (3, 3):
        raise NotOrthogonalError(f"rotation must be 3x3, got shape {R.shape}")
    deviation = float(np.max(np.abs(R.T @ R - np.eye(3))))
    if deviation > ORTHOGONALITY_TOLERANCE:
        raise NotOrthogonalError(f"matrix is not orthogonal: max |RᵀR - I| = {deviation:.3e}")
    return R


def rotate(order: int, R: np.ndarray | Sequence[Sequence[float]], tensor: SymTensor) -> SymTensor:
    """R_{i1j1} ... R_{iℓjℓ} T_{j1...jℓ}."""
    if tensor.rank != order:
        raise RankMismatchError(f"expected a rank-{order} tensor, got rank {tensor.rank}")
    R = _check_orthogonal(np.asarray(R))
    dtype = complex if any(isinstance(v, (complex, GaussianRational)) for _, v in tensor.items()) else float
    array = tensor.to_array(dtype)
    for axis in range(order):
        array = np.moveaxis(np.tensordot(R, array, axes=([1], [axis])), 0, axis)
    return SymTensor.from_array(array)


@dataclass(frozen=True)
class QuadrupoleFourierResult:
    numeric: float
    closed_form: float
    relative_error: float
    # (r_min, r_max, value) per cutoff pair, widest window last
    history: list[tuple[float, float, float]] = field(default_factory=list)

    @property
    def estimated_error(self) -> float:
        if len(self.history) < 2:
            return math.inf
        return abs(self.history[-1][2] - self.history[-2][2])

    @property
    def extrapolated(self) -> float:
        """Richardson step over the two widest windows; the inner-cutoff error goes as r_min²."""
        if len(self.history) < 2:
            return self.numeric
        (coarse_lo, _, coarse), (fine_lo, _, fine) = self.history[-2:]
        ratio = (coarse_lo / fine_lo) ** 2
        return (ratio * fine - coarse) / (ratio - 1.0)


def legendre2_radial_kernel(a: float, b: float, points_per_panel: int = 16) -> float:
    """∫_{-1}^{1} P_2(x) [Ci(b|x|) - Ci(a|x|)] dx for 0 < a < b.

    This is the real part of ∫_a^b du/u ∫ P_2(x) e^{iux} dx; the sine part
    vanishes by parity. Panels are narrower than half an oscillation of the
    faster cosine integral.
    """
    panels = max(64, math.ceil(b / math.pi))
    nodes, weights = gauss_legendre(points_per_panel)
    edges = np.linspace(0.0, 1.0, panels + 1)
    half_width = 0.5 * (edges[1:] - edges[:-1])
    centers = 0.5 * (edges[1:] + edges[:-1])
    x = (centers[:, None] + half_width[:, None] * nodes[None, :]).ravel()
    w = (half_width[:, None] * weights[None, :]).ravel()
    _, ci_b = sici(b * x)
    _, ci_a = sici(a * x)
    p2 = 1.5 * x * x - 0.5
    return 2.0 * math.fsum(w * p2 * (ci_b - ci_a))


def quadrupole_fourier_demo(
    Q: np.ndarray | Sequence[Sequence[float]] | SymTensor,
    k: Sequence[float],
    r_min: float = 1e-4,
    r_max: float = 1e4,
    refinements: int = 3,
) -> QuadrupoleFourierResult:
    """Fourier transform of V(r) = (2/(3r³)) Q_ij P^(2)_ij(n) against the closed form -(4π/3) k·Q·k / k².

    Angular integration uses the Funk–Hecke reduction; the radial integral is
    taken over [r_min, r_max] and repeated on narrower windows so the history
    shows convergence as the cutoffs widen. `extrapolated` on the result
    removes the leading r_min² term from the two widest windows.
    """
    k_vec = np.asarray(k, dtype=float)
    if k_vec.shape != (3,):
        raise ArgumentError(f"k needs three components, got shape {k_vec.shape}")
    k_norm = float(np.linalg.norm(k_vec))
    if k_norm == 0.0:
        raise ArgumentError("the wave vector k must be non-zero")
    if not 0.0 < r_min < r_max:
        raise ArgumentError(f"need 0 < r_min < r_max, got r_min={r_min}, r_max={r_max}")

    q_array = Q.to_array(float) if isinstance(Q, SymTensor) else np.asarray(Q, dtype=float)
    if q_array.shape != (3, 3):
        raise RankMismatchError(f"Q must be 3x3, got shape {q_array.shape}")
    if float(np.max(np.abs(q_array - q_array.T))) > 1e-12:
        raise PreconditionError("Q must be symmetric")
    if abs(float(np.trace(q_array))) > 1e-12:
        raise PreconditionError(f"Q must be traceless, trace is {float(np.trace(q_array)):.3e}")

    s = UnitVec.from_vector(k_vec)
    angular = (2.0 / 3.0) * 2.0 * math.pi * float(contract_full(SymTensor.from_array(q_array), maxwell_eval(2, s)))
    closed_form = -(4.0 * math.pi / 3.0) * float(k_vec @ q_array @ k_vec) / k_norm**2

    history: list[tuple[float, float, float]] = []
    for step in range(refinements - 1, -1, -1):
        lo, hi = r_min * 10.0**step, r_max / 10.0**step
        if lo >= hi:
            continue
        value = angular * legendre2_radial_kernel(k_norm * lo, k_norm * hi)
        logger.debug(f"quadrupole transform with cutoffs [{lo:g}, {hi:g}]: {value:.12g}")
        history.append((lo, hi, value))

    numeric = history[-1][2]
    difference = abs(numeric - closed_form)
    relative_error = difference / abs(closed_form) if closed_form != 0.0 else difference
    return QuadrupoleFourierResult(numeric, closed_form, relative_error, history)

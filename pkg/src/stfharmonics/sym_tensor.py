from __future__ import annotations

import functools
import itertools
import math
from collections.abc import Callable, Iterator, Mapping, Sequence
from fractions import Fraction

import numpy as np

from .errors import DimensionError, RankMismatchError
from .exact import GaussianRational, Scalar

Exponents = tuple[int, ...]


# Multiset bookkeeping. A component of a symmetric tensor is labelled by how
# many times each axis occurs among its indices; every ordering of those
# indices reads the same value.


@functools.cache
def multiplicity(exponents: Exponents) -> int:
    """Number of index tuples that sort to the multiset `exponents`."""
    count = math.factorial(sum(exponents))
    for e in exponents:
        count //= math.factorial(e)
    return count


@functools.cache
def exponent_tuples(rank: int, dim: int) -> tuple[Exponents, ...]:
    """All exponent vectors of total degree `rank` over `dim` axes, in descending lexicographic order."""
    if dim == 1:
        return ((rank,),)
    result: list[Exponents] = []
    for first in range(rank, -1, -1):
        for rest in exponent_tuples(rank - first, dim - 1):
            result.append((first, *rest))
    return tuple(result)


def exponents_of(index: Sequence[int], dim: int) -> Exponents:
    counts = [0] * dim
    for i in index:
        if not 0 <= i < dim:
            raise DimensionError(f"index {i} out of range for dimension {dim}")
        counts[i] += 1
    return tuple(counts)


def index_of(exponents: Exponents) -> tuple[int, ...]:
    """Sorted index tuple representing a multiset."""
    return tuple(axis for axis, e in enumerate(exponents) for _ in range(e))


def unit_exponents(axis: int, dim: int) -> Exponents:
    return tuple(int(a == axis) for a in range(dim))


def _add(a: Exponents, b: Exponents) -> Exponents:
    return tuple(x + y for x, y in zip(a, b))


def _sub(a: Exponents, b: Exponents) -> Exponents | None:
    diff = tuple(x - y for x, y in zip(a, b))
    if any(d < 0 for d in diff):
        return None
    return diff


def _normalize(value: Scalar) -> Scalar:
    if isinstance(value, bool):
        raise TypeError("booleans are not tensor components")
    if isinstance(value, int):
        return Fraction(value)
    return value


def _magnitude(value: Scalar) -> float:
    return abs(complex(value))


class SymTensor:
    """Fully symmetric tensor of rank `rank` over `dim` axes.

    Components are stored once per index multiset, so reading `T[0, 1, 1]`
    and `T[1, 0, 1]` returns the same stored value. Instances are immutable.
    """

    __slots__ = ("rank", "dim", "_components")

    def __init__(self, rank: int, dim: int = 3, components: Mapping[Exponents, Scalar] | None = None) -> None:
        if rank < 0:
            raise RankMismatchError(f"rank must be non-negative, got {rank}")
        if dim < 1:
            raise DimensionError(f"dimension must be positive, got {dim}")
        self.rank = rank
        self.dim = dim
        stored: dict[Exponents, Scalar] = dict.fromkeys(exponent_tuples(rank, dim), Fraction(0))
        for key, value in (components or {}).items():
            key = tuple(key)
            if len(key) != dim or sum(key) != rank or any(e < 0 for e in key):
                raise RankMismatchError(f"exponents {key} do not describe a rank-{rank} component over {dim} axes")
            stored[key] = _normalize(value)
        self._components = stored

    @classmethod
    def zeros(cls, rank: int, dim: int = 3) -> SymTensor:
        return cls(rank, dim)

    @classmethod
    def scalar(cls, value: Scalar, dim: int = 3) -> SymTensor:
        return cls(0, dim, {(0,) * dim: value})

    @classmethod
    def from_function(cls, rank: int, dim: int, fn: Callable[[Exponents], Scalar]) -> SymTensor:
        return cls(rank, dim, {e: fn(e) for e in exponent_tuples(rank, dim)})

    @classmethod
    def unit(cls, exponents: Exponents) -> SymTensor:
        """The tensor E with contract_full(E, X) == X[exponents] for every symmetric X."""
        return cls(sum(exponents), len(exponents), {tuple(exponents): Fraction(1, multiplicity(tuple(exponents)))})

    @classmethod
    def identity(cls, dim: int = 3) -> SymTensor:
        return cls(2, dim, {_add(unit_exponents(a, dim), unit_exponents(a, dim)): 1 for a in range(dim)})

    @classmethod
    def vector(cls, components: Sequence[Scalar]) -> SymTensor:
        dim = len(components)
        return cls(1, dim, {unit_exponents(a, dim): c for a, c in enumerate(components)})

    @classmethod
    def outer_power(cls, vector: Sequence[Scalar], rank: int) -> SymTensor:
        """v ⊗ v ⊗ ... ⊗ v, `rank` times."""
        dim = len(vector)

        def power(e: Exponents) -> Scalar:
            value: Scalar = Fraction(1)
            for component, k in zip(vector, e):
                for _ in range(k):
                    value = value * component
            return value

        return cls.from_function(rank, dim, power)

    @classmethod
    def from_array(cls, array: np.ndarray) -> SymTensor:
        """Read one representative per multiset from a dense array; the array is assumed symmetric."""
        rank = array.ndim
        dim = array.shape[0] if rank else 3
        return cls.from_function(rank, dim, lambda e: array[index_of(e)].item())

    def component(self, exponents: Exponents) -> Scalar:
        return self._components[tuple(exponents)]

    def __getitem__(self, index: int | Sequence[int]) -> Scalar:
        if isinstance(index, int):
            index = (index,)
        if len(index) != self.rank:
            raise RankMismatchError(f"index {tuple(index)} has length {len(index)}, tensor has rank {self.rank}")
        return self._components[exponents_of(index, self.dim)]

    def items(self) -> Iterator[tuple[Exponents, Scalar]]:
        return iter(self._components.items())

    def keys(self) -> Iterator[Exponents]:
        return iter(self._components)

    def __len__(self) -> int:
        return len(self._components)

    def value(self) -> Scalar:
        """The single component of a rank-0 tensor."""
        if self.rank != 0:
            raise RankMismatchError(f"value() needs a rank-0 tensor, got rank {self.rank}")
        return self._components[(0,) * self.dim]

    def map(self, fn: Callable[[Scalar], Scalar]) -> SymTensor:
        return SymTensor(self.rank, self.dim, {e: fn(v) for e, v in self._components.items()})

    def _check_same_shape(self, other: SymTensor) -> None:
        if other.rank != self.rank:
            raise RankMismatchError(f"rank mismatch: {self.rank} vs {other.rank}")
        if other.dim != self.dim:
            raise DimensionError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other: SymTensor) -> SymTensor:
        self._check_same_shape(other)
        return SymTensor(self.rank, self.dim, {e: v + other._components[e] for e, v in self._components.items()})

    def __sub__(self, other: SymTensor) -> SymTensor:
        self._check_same_shape(other)
        return SymTensor(self.rank, self.dim, {e: v - other._components[e] for e, v in self._components.items()})

    def __neg__(self) -> SymTensor:
        return self.map(lambda v: -v)

    def __mul__(self, factor: Scalar) -> SymTensor:
        if isinstance(factor, SymTensor):
            return NotImplemented
        return self.map(lambda v: v * factor)

    __rmul__ = __mul__

    def __truediv__(self, divisor: Scalar) -> SymTensor:
        return self.map(lambda v: v / divisor)

    def conjugate(self) -> SymTensor:
        def conj(v: Scalar) -> Scalar:
            if isinstance(v, (complex, GaussianRational)):
                return v.conjugate()
            return v

        return self.map(conj)

    def real(self) -> SymTensor:
        return self.map(lambda v: v.real if isinstance(v, (complex, GaussianRational)) else v)

    def imag(self) -> SymTensor:
        return self.map(lambda v: v.imag if isinstance(v, (complex, GaussianRational)) else Fraction(0))

    def to_float(self) -> SymTensor:
        return self.map(lambda v: v if isinstance(v, complex) else complex(v) if isinstance(v, GaussianRational) else float(v))

    def is_zero(self, tol: float = 0.0) -> bool:
        if tol == 0.0:
            return all(v == 0 for v in self._components.values())
        return self.max_abs() <= tol

    def max_abs(self) -> float:
        return max((_magnitude(v) for v in self._components.values()), default=0.0)

    def max_abs_difference(self, other: SymTensor) -> float:
        self._check_same_shape(other)
        return max(_magnitude(complex(v) - complex(other._components[e])) for e, v in self._components.items())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SymTensor):
            return NotImplemented
        return (
            self.rank == other.rank
            and self.dim == other.dim
            and all(v == other._components[e] for e, v in self._components.items())
        )

    __hash__ = None  # type: ignore[assignment]

    def to_array(self, dtype: type = float) -> np.ndarray:
        array = np.empty((self.dim,) * self.rank, dtype=dtype)
        for index in itertools.product(range(self.dim), repeat=self.rank):
            array[index] = dtype(self._components[exponents_of(index, self.dim)])
        return array

    def __repr__(self) -> str:
        nonzero = {e: v for e, v in self._components.items() if v != 0}
        return f"SymTensor(rank={self.rank}, dim={self.dim}, {nonzero})"


class PairedTensor:
    """Tensor symmetric within a left and a right group of indices.

    Carries objects such as the detraced delta δ_{i1}^{{j1} ... δ_{iℓ}^{jℓ}}
    that are symmetric in each group but not across the groups.
    """

    __slots__ = ("left_rank", "right_rank", "dim", "_components")

    def __init__(
        self,
        left_rank: int,
        right_rank: int,
        dim: int = 3,
        components: Mapping[tuple[Exponents, Exponents], Scalar] | None = None,
    ) -> None:
        self.left_rank = left_rank
        self.right_rank = right_rank
        self.dim = dim
        stored = {
            (left, right): Fraction(0)
            for left in exponent_tuples(left_rank, dim)
            for right in exponent_tuples(right_rank, dim)
        }
        for (left, right), value in (components or {}).items():
            if (tuple(left), tuple(right)) not in stored:
                raise RankMismatchError(f"({left}, {right}) is not a component of a ({left_rank}, {right_rank}) tensor")
            stored[(tuple(left), tuple(right))] = _normalize(value)
        self._components: dict[tuple[Exponents, Exponents], Scalar] = stored

    @classmethod
    def from_rows(cls, left_rank: int, dim: int, rows: Mapping[Exponents, SymTensor]) -> PairedTensor:
        """Assemble from one right-hand SymTensor per left multiset."""
        right_rank = next(iter(rows.values())).rank
        return cls(
            left_rank,
            right_rank,
            dim,
            {(left, right): value for left, row in rows.items() for right, value in row.items()},
        )

    def component(self, left: Exponents, right: Exponents) -> Scalar:
        return self._components[(tuple(left), tuple(right))]

    def __getitem__(self, index: tuple[Sequence[int], Sequence[int]]) -> Scalar:
        left, right = index
        return self._components[(exponents_of(left, self.dim), exponents_of(right, self.dim))]

    def row(self, left: Exponents) -> SymTensor:
        return SymTensor(
            self.right_rank,
            self.dim,
            {right: v for (lk, right), v in self._components.items() if lk == tuple(left)},
        )

    def items(self) -> Iterator[tuple[tuple[Exponents, Exponents], Scalar]]:
        return iter(self._components.items())

    def map(self, fn: Callable[[Scalar], Scalar]) -> PairedTensor:
        return PairedTensor(
            self.left_rank, self.right_rank, self.dim, {k: fn(v) for k, v in self._components.items()}
        )

    def __mul__(self, factor: Scalar) -> PairedTensor:
        return self.map(lambda v: v * factor)

    __rmul__ = __mul__

    def is_zero(self, tol: float = 0.0) -> bool:
        if tol == 0.0:
            return all(v == 0 for v in self._components.values())
        return self.max_abs() <= tol

    def max_abs(self) -> float:
        return max((_magnitude(v) for v in self._components.values()), default=0.0)

    def max_abs_difference(self, other: PairedTensor) -> float:
        if (other.left_rank, other.right_rank, other.dim) != (self.left_rank, self.right_rank, self.dim):
            raise RankMismatchError("paired tensors of different shapes")
        return max(_magnitude(complex(v) - complex(other._components[k])) for k, v in self._components.items())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PairedTensor):
            return NotImplemented
        return (other.left_rank, other.right_rank, other.dim) == (self.left_rank, self.right_rank, self.dim) and all(
            v == other._components[k] for k, v in self._components.items()
        )

    __hash__ = None  # type: ignore[assignment]


def symmetrize(full: Mapping[Sequence[int], Scalar], rank: int, dim: int = 3) -> SymTensor:
    """Averaged symmetrisation T_(i1...iℓ) of a tensor given as index tuple -> value."""
    sums: dict[Exponents, Scalar] = {}
    for index, value in full.items():
        if len(index) != rank:
            raise RankMismatchError(f"index {tuple(index)} has length {len(index)}, declared rank is {rank}")
        key = exponents_of(index, dim)
        sums[key] = sums.get(key, Fraction(0)) + _normalize(value)
    return SymTensor(rank, dim, {e: total / multiplicity(e) for e, total in sums.items()})


def trace(tensor: SymTensor, pair: tuple[int, int] = (0, 1)) -> SymTensor:
    """Contract two index slots. For a symmetric tensor every pair gives the same result."""
    if tensor.rank < 2:
        raise RankMismatchError(f"trace needs rank >= 2, got {tensor.rank}")
    first, second = pair
    if first == second or not (0 <= first < tensor.rank and 0 <= second < tensor.rank):
        raise RankMismatchError(f"invalid index pair {pair} for rank {tensor.rank}")
    dim = tensor.dim
    doubled = [_add(unit_exponents(a, dim), unit_exponents(a, dim)) for a in range(dim)]

    def contracted(e: Exponents) -> Scalar:
        total: Scalar = Fraction(0)
        for step in doubled:
            total = total + tensor.component(_add(e, step))
        return total

    return SymTensor.from_function(tensor.rank - 2, dim, contracted)


def trace_power(tensor: SymTensor, times: int) -> SymTensor:
    result = tensor
    for _ in range(times):
        result = trace(result)
    return result


@functools.cache
def delta_product(rank: int, dim: int = 3) -> SymTensor:
    """Symmetrised product δ_(i1i2 ... δ_iℓ-1iℓ) of rank/2 Kronecker deltas."""
    if rank % 2:
        raise RankMismatchError(f"delta product needs an even rank, got {rank}")

    def pairings(e: Exponents) -> Fraction:
        if any(k % 2 for k in e):
            return Fraction(0)
        halves = tuple(k // 2 for k in e)
        return Fraction(multiplicity(halves), multiplicity(e))

    return SymTensor.from_function(rank, dim, pairings)


def sym_outer(a: SymTensor, b: SymTensor) -> SymTensor:
    """Averaged symmetrisation of the outer product a ⊗ b."""
    if a.dim != b.dim:
        raise DimensionError(f"dimension mismatch: {a.dim} vs {b.dim}")
    sparse, dense = (a, b) if _nonzero_count(a) <= _nonzero_count(b) else (b, a)
    terms = [(beta, value, multiplicity(beta)) for beta, value in sparse.items() if value != 0]

    def combined(e: Exponents) -> Scalar:
        total: Scalar = Fraction(0)
        for beta, value, weight in terms:
            alpha = _sub(e, beta)
            if alpha is None:
                continue
            other = dense.component(alpha)
            if other == 0:
                continue
            total = total + value * other * (weight * multiplicity(alpha)) / multiplicity(e)
        return total

    return SymTensor.from_function(a.rank + b.rank, a.dim, combined)


def _nonzero_count(tensor: SymTensor) -> int:
    return sum(1 for _, v in tensor.items() if v != 0)


def contract_full(a: SymTensor, b: SymTensor) -> Scalar:
    """a_{i1...iℓ} b_{i1...iℓ} summed over all index tuples."""
    if a.rank != b.rank:
        raise RankMismatchError(f"full contraction needs equal ranks, got {a.rank} and {b.rank}")
    if a.dim != b.dim:
        raise DimensionError(f"dimension mismatch: {a.dim} vs {b.dim}")
    total: Scalar = Fraction(0)
    for e, value in a.items():
        if value == 0:
            continue
        other = b.component(e)
        if other == 0:
            continue
        total = total + value * other * multiplicity(e)
    return total


def contract_vector(tensor: SymTensor, vector: Sequence[Scalar]) -> SymTensor:
    """v_j T_{j i1 ... iℓ-1}."""
    if tensor.rank < 1:
        raise RankMismatchError("cannot contract a vector into a rank-0 tensor")
    dim = tensor.dim

    def contracted(e: Exponents) -> Scalar:
        total: Scalar = Fraction(0)
        for a in range(dim):
            total = total + vector[a] * tensor.component(_add(e, unit_exponents(a, dim)))
        return total

    return SymTensor.from_function(tensor.rank - 1, dim, contracted)


def contract_partial(tensor: SymTensor, other: SymTensor) -> SymTensor:
    """other_{J} tensor_{J I}: contract all indices of `other` into the leading slots of `tensor`."""
    if other.rank > tensor.rank:
        raise RankMismatchError(f"cannot contract rank {other.rank} into rank {tensor.rank}")
    terms = [(f, v * multiplicity(f)) for f, v in other.items() if v != 0]

    def contracted(e: Exponents) -> Scalar:
        total: Scalar = Fraction(0)
        for f, weighted in terms:
            total = total + weighted * tensor.component(_add(e, f))
        return total

    return SymTensor.from_function(tensor.rank - other.rank, tensor.dim, contracted)


@functools.cache
def _detrace_coefficients(rank: int) -> tuple[Fraction, ...]:
    norm = math.comb(2 * rank, rank)
    return tuple(
        Fraction((-1) ** k * math.comb(rank, k) * math.comb(2 * rank - 2 * k, rank), norm) for k in range(rank // 2 + 1)
    )


@functools.cache
def _general_detrace_coefficients(rank: int, dim: int) -> tuple[Fraction, ...]:
    # Γ(n/2+ℓ-k-1)/Γ(n/2+ℓ-1) = 1 / Π_{j=1..k} (n/2 + ℓ - 1 - j)
    half = Fraction(dim, 2)
    coefficients = []
    for k in range(rank // 2 + 1):
        gamma_ratio = Fraction(1)
        for j in range(1, k + 1):
            gamma_ratio /= half + rank - 1 - j
        coefficients.append(
            Fraction((-1) ** k, 4**k)
            * Fraction(math.factorial(rank), math.factorial(rank - 2 * k) * math.factorial(k))
            * gamma_ratio
        )
    return tuple(coefficients)


def _remove_traces(tensor: SymTensor, coefficients: Sequence[Fraction]) -> SymTensor:
    result = tensor * coefficients[0]
    traced = tensor
    for k in range(1, len(coefficients)):
        traced = trace(traced)
        result = result + sym_outer(traced, delta_product(2 * k, tensor.dim)) * coefficients[k]
    return result


def detrace(tensor: SymTensor) -> SymTensor:
    """Symmetric trace-free part T_{i1...iℓ} of a symmetric tensor over three axes."""
    if tensor.dim != 3:
        raise DimensionError(f"detrace works over three axes, got {tensor.dim}; use detrace_general")
    return _remove_traces(tensor, _detrace_coefficients(tensor.rank))


def detrace_general(tensor: SymTensor, dim: int | None = None) -> SymTensor:
    """Symmetric trace-free part over `dim` >= 2 axes."""
    dim = tensor.dim if dim is None else dim
    if dim < 2:
        raise DimensionError(f"detracing needs at least two axes, got {dim}")
    if dim != tensor.dim:
        raise DimensionError(f"tensor has {tensor.dim} axes, asked to detrace over {dim}")
    return _remove_traces(tensor, _general_detrace_coefficients(tensor.rank, dim))


def is_traceless(tensor: SymTensor, tol: float = 0.0) -> bool:
    if tensor.rank < 2:
        return True
    return trace(tensor).is_zero(tol)


@functools.cache
def stf_projector(rank: int) -> PairedTensor:
    """δ_{i1}^{{j1} ... δ_{iℓ}^{jℓ}}: detraced over the right group, for three axes."""
    rows = {e: detrace(SymTensor.unit(e)) for e in exponent_tuples(rank, 3)}
    return PairedTensor.from_rows(rank, 3, rows)


__all__ = [
    "Exponents",
    "PairedTensor",
    "SymTensor",
    "contract_full",
    "contract_partial",
    "contract_vector",
    "delta_product",
    "detrace",
    "detrace_general",
    "exponent_tuples",
    "exponents_of",
    "index_of",
    "is_traceless",
    "multiplicity",
    "stf_projector",
    "sym_outer",
    "symmetrize",
    "trace",
    "trace_power",
    "unit_exponents",
]

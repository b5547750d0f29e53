"""JSON encodings of tensors, polynomials, expansions and spherical-harmonic coefficients.

Exact values are written as strings ("2/3", "4/15*pi"), floats as numbers and
complex values as [re, im] pairs. Readers accept all of them.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from .errors import DimensionError, FormatError, RankMismatchError
from .exact import Exact, GaussianRational, Scalar
from .harmonics import BASES, SphCoeffs
from .maxwell import AngularPolynomial, MultipoleExpansion
from .sym_tensor import Exponents, SymTensor, exponents_of, index_of

AXIS_LETTERS = "xyz"


def index_label(exponents: Exponents) -> str:
    """'xxy' over three axes, 'i1i1i2' over any other count."""
    axes = index_of(tuple(exponents))
    if len(exponents) == 3:
        return "".join(AXIS_LETTERS[a] for a in axes)
    return "".join(f"i{a + 1}" for a in axes)


def parse_index_label(label: str, dim: int) -> Exponents:
    if dim == 3 and not label.startswith("i"):
        if any(ch not in AXIS_LETTERS for ch in label):
            raise FormatError(f"component label {label!r} uses letters other than x, y, z")
        return exponents_of([AXIS_LETTERS.index(ch) for ch in label], dim)
    tokens = [t for t in label.split("i") if t]
    if label and not label.startswith("i"):
        raise FormatError(f"component label {label!r} must be a sequence of i<k> tokens")
    try:
        axes = [int(t) - 1 for t in tokens]
    except ValueError as exc:
        raise FormatError(f"component label {label!r} must be a sequence of i<k> tokens") from exc
    return exponents_of(axes, dim)


def scalar_to_json(value: Scalar) -> Any:
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, Exact):
        return str(value)
    if isinstance(value, GaussianRational):
        return [str(value.real), str(value.imag)]
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, int):
        return str(value)
    return float(value)


def _real_from_json(value: Any) -> Scalar:
    if isinstance(value, bool):
        raise FormatError(f"booleans are not numbers: {value!r}")
    if isinstance(value, str):
        exact = Exact.parse(value)
        return exact.value if exact.pi_power == 0 else exact
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return value
    raise FormatError(f"not a number: {value!r}")


def scalar_from_json(value: Any) -> Scalar:
    if isinstance(value, list):
        if len(value) != 2:
            raise FormatError(f"complex values are [re, im] pairs, got {value!r}")
        real, imag = (_real_from_json(v) for v in value)
        if isinstance(real, Fraction) and isinstance(imag, Fraction):
            return GaussianRational(real, imag) if imag != 0 else real
        return complex(float(real), float(imag))
    return _real_from_json(value)


def tensor_to_json(tensor: SymTensor) -> dict[str, Any]:
    return {
        "rank": tensor.rank,
        "dim": tensor.dim,
        "components": {index_label(e): scalar_to_json(v) for e, v in tensor.items() if v != 0},
    }


def tensor_from_json(data: Any) -> SymTensor:
    if not isinstance(data, dict):
        raise FormatError(f"a tensor is a JSON object, got {type(data).__name__}")
    rank = data.get("rank")
    dim = data.get("dim", 3)
    if not isinstance(rank, int) or isinstance(rank, bool) or rank < 0:
        raise FormatError(f"tensor rank must be a non-negative integer, got {rank!r}")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise FormatError(f"tensor dim must be a positive integer, got {dim!r}")
    components = data.get("components", {})
    if not isinstance(components, dict):
        raise FormatError("tensor components must be a JSON object")
    parsed: dict[Exponents, Scalar] = {}
    for label, value in components.items():
        try:
            exponents = parse_index_label(label, dim)
        except DimensionError as exc:
            raise DimensionError(f"component {label!r} does not fit a tensor over {dim} axes") from exc
        if sum(exponents) != rank:
            raise RankMismatchError(f"component {label!r} has {sum(exponents)} indices, tensor rank is {rank}")
        parsed[exponents] = scalar_from_json(value)
    return SymTensor(rank, dim, parsed)


def polynomial_to_json(polynomial: AngularPolynomial) -> dict[str, Any]:
    return {"terms": [{"rank": t.rank, "tensor": tensor_to_json(t)} for t in polynomial.terms]}


def polynomial_from_json(data: Any) -> AngularPolynomial:
    if not isinstance(data, dict) or not isinstance(data.get("terms"), list):
        raise FormatError('an angular polynomial is {"terms": [...]}')
    terms = []
    for entry in data["terms"]:
        if not isinstance(entry, dict) or "tensor" not in entry:
            raise FormatError(f"polynomial term must carry a tensor, got {entry!r}")
        tensor = tensor_from_json(entry["tensor"])
        if entry.get("rank", tensor.rank) != tensor.rank:
            raise RankMismatchError(f"term declares rank {entry['rank']} but its tensor has rank {tensor.rank}")
        if tensor.dim != 3:
            raise DimensionError(f"angular polynomials need tensors over 3 axes, got {tensor.dim}")
        terms.append(tensor)
    return AngularPolynomial(terms)


def expansion_to_json(expansion: MultipoleExpansion) -> dict[str, Any]:
    return {"coeffs": {str(order): tensor_to_json(t) for order, t in expansion.items()}}


def expansion_from_json(data: Any) -> MultipoleExpansion:
    if not isinstance(data, dict) or not isinstance(data.get("coeffs"), dict):
        raise FormatError('a multipole expansion is {"coeffs": {...}}')
    coefficients = {}
    for key, value in data["coeffs"].items():
        try:
            order = int(key)
        except ValueError as exc:
            raise FormatError(f"expansion keys are orders, got {key!r}") from exc
        coefficients[order] = tensor_from_json(value)
    return MultipoleExpansion(coefficients)


def sph_to_json(coefficients: SphCoeffs) -> dict[str, Any]:
    return {
        "basis": coefficients.basis,
        "coeffs": {f"{order},{m}": [repr(v.real), repr(v.imag)] for (order, m), v in coefficients.items()},
    }


def sph_from_json(data: Any) -> SphCoeffs:
    if not isinstance(data, dict) or not isinstance(data.get("coeffs"), dict):
        raise FormatError('spherical-harmonic coefficients are {"basis": ..., "coeffs": {...}}')
    basis = data.get("basis", "complex")
    if basis not in BASES:
        raise FormatError(f"unknown basis {basis!r}, expected one of {BASES}")
    parsed: dict[tuple[int, int], complex] = {}
    for key, value in data["coeffs"].items():
        try:
            order, m = (int(part) for part in key.split(","))
        except ValueError as exc:
            raise FormatError(f'coefficient keys look like "ℓ,m", got {key!r}') from exc
        parsed[(order, m)] = _complex_from_json(value)
    return SphCoeffs(basis, parsed)


def _complex_from_json(value: Any) -> complex:
    parts = value if isinstance(value, list) else [value, 0.0]
    if len(parts) != 2:
        raise FormatError(f"complex values are [re, im] pairs, got {value!r}")
    numbers = []
    for part in parts:
        if isinstance(part, str):
            try:
                numbers.append(float(part))
                continue
            except ValueError:
                pass
        numbers.append(float(_real_from_json(part)))
    return complex(numbers[0], numbers[1])


def detect_kind(data: Any) -> str:
    """'tensor', 'polynomial', 'expansion' or 'sph' for a decoded JSON document."""
    if isinstance(data, dict):
        if "terms" in data:
            return "polynomial"
        if "basis" in data and "coeffs" in data:
            return "sph"
        if "coeffs" in data:
            return "expansion"
        if "rank" in data:
            return "tensor"
    raise FormatError("file is not a tensor, polynomial, expansion or coefficient document")


def read_json(path: Path) -> Any:
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except UnicodeDecodeError as exc:
        raise FormatError(f"{path}: not UTF-8 text ({exc.reason} at byte {exc.start})") from exc
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: malformed JSON ({exc.msg} at line {exc.lineno})") from exc
    except OSError as exc:
        raise FormatError(f"{path}: cannot read ({exc.strerror})") from exc


def write_json(path: Path, data: Any) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(data, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")

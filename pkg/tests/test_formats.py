import json
from fractions import Fraction

import pytest

from stfharmonics.errors import DimensionError, FormatError, RankMismatchError
from stfharmonics.exact import Exact, GaussianRational
from stfharmonics.formats import (
    detect_kind,
    expansion_from_json,
    expansion_to_json,
    index_label,
    parse_index_label,
    polynomial_from_json,
    polynomial_to_json,
    read_json,
    scalar_from_json,
    scalar_to_json,
    sph_from_json,
    sph_to_json,
    tensor_from_json,
    tensor_to_json,
    write_json,
)
from stfharmonics.harmonics import stf_to_sph
from stfharmonics.maxwell import AngularPolynomial, expand
from stfharmonics.sym_tensor import SymTensor


def test_identity_is_written_with_axis_letters():
    assert tensor_to_json(SymTensor.identity()) == {
        "rank": 2,
        "dim": 3,
        "components": {"xx": "1", "yy": "1", "zz": "1"},
    }


def test_labels():
    assert index_label((1, 2, 0)) == "xyy"
    assert index_label((0, 2, 0, 1)) == "i2i2i4"
    assert parse_index_label("yxy", 3) == (1, 2, 0)
    assert parse_index_label("i1i3", 3) == (1, 0, 1)
    assert parse_index_label("i2i2i4", 4) == (0, 2, 0, 1)


def test_tensor_from_json_reads_exact_and_float_values():
    tensor = tensor_from_json({"rank": 2, "components": {"xy": "1/3", "zz": 0.25, "xx": 2}})
    assert tensor[1, 0] == Fraction(1, 3)
    assert tensor[2, 2] == 0.25
    assert tensor[0, 0] == Fraction(2)
    assert tensor[1, 1] == 0


def test_tensor_in_four_dimensions():
    tensor = tensor_from_json({"rank": 2, "dim": 4, "components": {"i1i1": "1", "i4i4": "-1"}})
    assert tensor.dim == 4
    assert tensor[3, 3] == -1
    assert tensor_from_json(tensor_to_json(tensor)) == tensor


@pytest.mark.parametrize(
    "document,error",
    [
        ({"rank": 2, "components": {"xq": "1"}}, FormatError),
        ({"rank": 2, "components": {"xyz": "1"}}, RankMismatchError),
        ({"rank": 1, "dim": 4, "components": {"i5": "1"}}, DimensionError),
        ({"rank": -1}, FormatError),
        ({"rank": 1, "components": {"x": "one"}}, FormatError),
        ([1, 2, 3], FormatError),
    ],
)
def test_malformed_tensors(document, error):
    with pytest.raises(error):
        tensor_from_json(document)


def test_scalars():
    assert scalar_to_json(Exact.pi(Fraction(4, 15))) == "4/15*pi"
    assert scalar_to_json(GaussianRational(Fraction(1, 2), -1)) == ["1/2", "-1"]
    assert scalar_to_json(1.5 - 2j) == [1.5, -2.0]
    assert scalar_from_json(["1/2", "1/3"]) == GaussianRational(Fraction(1, 2), Fraction(1, 3))
    assert scalar_from_json([0.5, 1.0]) == 0.5 + 1j
    assert scalar_from_json("2/3*pi") == Exact.pi(Fraction(2, 3))
    assert scalar_from_json(["3", "0"]) == Fraction(3)
    with pytest.raises(FormatError):
        scalar_from_json(True)


def test_polynomial_and_expansion_documents():
    polynomial = AngularPolynomial.monomial((2, 1, 0), Fraction(1, 2)) + AngularPolynomial.constant(3)
    document = polynomial_to_json(polynomial)
    assert detect_kind(document) == "polynomial"
    assert polynomial_from_json(document).terms == polynomial.terms

    expansion = expand(polynomial)
    document = expansion_to_json(expansion)
    assert detect_kind(document) == "expansion"
    assert expansion_from_json(document) == expansion


def test_expansion_keys_must_be_orders():
    with pytest.raises(FormatError):
        expansion_from_json({"coeffs": {"two": {"rank": 2, "components": {}}}})


def test_sph_document():
    coefficients = stf_to_sph(expand(AngularPolynomial.monomial((0, 0, 2))), "real")
    document = sph_to_json(coefficients)
    assert document["basis"] == "real"
    assert set(document["coeffs"]) >= {"0,0", "2,0", "2,-2"}
    assert detect_kind(document) == "sph"
    assert sph_from_json(document).max_abs_difference(coefficients) == 0.0


def test_sph_document_validation():
    with pytest.raises(FormatError):
        sph_from_json({"basis": "hexagonal", "coeffs": {}})
    with pytest.raises(FormatError):
        sph_from_json({"basis": "complex", "coeffs": {"2;0": [1.0, 0.0]}})


def test_detect_kind_rejects_unknown_documents():
    with pytest.raises(FormatError):
        detect_kind({"hello": "world"})


def test_read_and_write(tmp_path):
    path = tmp_path / "nested" / "tensor.json"
    write_json(path, tensor_to_json(SymTensor.vector([Fraction(1, 2), 0, -1])))
    assert json.loads(path.read_text(encoding="utf-8"))["components"] == {"x": "1/2", "z": "-1"}
    assert tensor_from_json(read_json(path)) == SymTensor.vector([Fraction(1, 2), 0, -1])


def test_read_json_errors(tmp_path):
    broken = tmp_path / "broken.json"
    broken.write_text("{ not json", encoding="utf-8")
    with pytest.raises(FormatError):
        read_json(broken)
    with pytest.raises(FormatError):
        read_json(tmp_path / "missing.json")

import json
import sys
from fractions import Fraction
from pathlib import Path

# Ensure local src/ is importable before any stfharmonics imports
sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

import pytest
from typer.testing import CliRunner

from stfharmonics.cli import app

runner = CliRunner()


def write(path: Path, data) -> Path:
    path.write_text(json.dumps(data), encoding="utf-8")
    return path


def quadratic_form(components):
    return {"terms": [{"rank": 2, "tensor": {"rank": 2, "components": components}}]}


def test_detrace_identity_gives_zero(tmp_path):
    source = write(tmp_path / "delta.json", {"rank": 2, "components": {"xx": "1", "yy": "1", "zz": "1"}})
    target = tmp_path / "out.json"

    result = runner.invoke(app, ["detrace", str(source), str(target)])

    assert result.exit_code == 0
    assert json.loads(target.read_text(encoding="utf-8"))["components"] == {}
    assert "exact_zero_trace: True" in result.stdout


def test_detrace_diagonal(tmp_path):
    source = write(tmp_path / "xx.json", {"rank": 2, "components": {"xx": "1"}})
    target = tmp_path / "out.json"

    result = runner.invoke(app, ["detrace", str(source), str(target)])

    assert result.exit_code == 0
    assert json.loads(target.read_text(encoding="utf-8"))["components"] == {"xx": "2/3", "yy": "-1/3", "zz": "-1/3"}


def test_detrace_in_four_dimensions(tmp_path):
    source = write(tmp_path / "t.json", {"rank": 2, "dim": 4, "components": {"i1i1": "1"}})
    target = tmp_path / "out.json"

    result = runner.invoke(app, ["detrace", str(source), str(target)])

    assert result.exit_code == 0
    components = json.loads(target.read_text(encoding="utf-8"))["components"]
    assert components == {"i1i1": "3/4", "i2i2": "-1/4", "i3i3": "-1/4", "i4i4": "-1/4"}


@pytest.mark.parametrize(
    "content",
    [
        b"{ nope",
        b"\xff\xfe",
        b'{"rank": 2, "components": {"xx": "1/0"}}',
    ],
    ids=["bad-json", "not-utf8", "zero-denominator"],
)
def test_malformed_input_exits_with_parse_code(tmp_path, content):
    source = tmp_path / "broken.json"
    source.write_bytes(content)

    result = runner.invoke(app, ["detrace", str(source), str(tmp_path / "out.json")])

    assert result.exit_code == 2


def test_rank_mismatch_exits_with_argument_code(tmp_path):
    source = write(tmp_path / "bad.json", {"rank": 2, "components": {"xyz": "1"}})

    result = runner.invoke(app, ["detrace", str(source), str(tmp_path / "out.json")])

    assert result.exit_code == 3


def test_expand_quadratic_form(tmp_path):
    source = write(tmp_path / "q.json", quadratic_form({"xx": "1", "yy": "-1"}))
    target = tmp_path / "expansion.json"

    result = runner.invoke(app, ["--format", "json", "expand", str(source), str(target)])

    assert result.exit_code == 0
    report = json.loads(result.stdout)
    assert report["orders"] == [0, 2]
    assert report["parseval_direct"] == report["parseval_expansion"] == "16/15*pi"
    assert report["reconstruction_residual"] < 1e-12
    coeffs = json.loads(target.read_text(encoding="utf-8"))["coeffs"]
    assert coeffs["2"]["components"] == {"xx": "2/3", "yy": "-2/3"}


def test_expand_warns_when_truncating(tmp_path):
    source = write(tmp_path / "q.json", quadratic_form({"xy": "1"}))
    target = tmp_path / "expansion.json"

    result = runner.invoke(app, ["expand", str(source), str(target), "--lmax", "1"])

    assert result.exit_code == 0
    assert "truncated" in result.output
    assert set(json.loads(target.read_text(encoding="utf-8"))["coeffs"]) == {"0"}


def test_convert_round_trip(tmp_path):
    source = write(tmp_path / "q.json", quadratic_form({"xz": "1", "zz": "1/2"}))
    expansion = tmp_path / "expansion.json"
    sph = tmp_path / "sph.json"
    back = tmp_path / "back.json"
    runner.invoke(app, ["expand", str(source), str(expansion)])

    to_sph = runner.invoke(app, ["convert", str(expansion), str(sph), "--to", "sph", "--basis", "real"])
    to_stf = runner.invoke(app, ["convert", str(sph), str(back), "--to", "stf"])

    assert to_sph.exit_code == 0
    assert to_stf.exit_code == 0
    assert json.loads(sph.read_text(encoding="utf-8"))["basis"] == "real"
    original = json.loads(expansion.read_text(encoding="utf-8"))["coeffs"]["2"]["components"]
    restored = json.loads(back.read_text(encoding="utf-8"))["coeffs"]["2"]["components"]
    assert restored["xz"] == pytest.approx(float(Fraction(original["xz"])), abs=1e-12)


def test_convert_rejects_the_wrong_document(tmp_path):
    source = write(tmp_path / "t.json", {"rank": 1, "components": {"x": "1"}})

    result = runner.invoke(app, ["convert", str(source), str(tmp_path / "out.json"), "--to", "sph"])

    assert result.exit_code == 2


def test_convert_basis_mismatch(tmp_path):
    source = write(tmp_path / "sph.json", {"basis": "real", "coeffs": {"0,0": [1.0, 0.0]}})

    result = runner.invoke(app, ["convert", str(source), str(tmp_path / "out.json"), "--to", "stf", "--basis", "complex"])

    assert result.exit_code == 3


def test_eval_multipole_on_the_axis():
    result = runner.invoke(app, ["--format", "json", "eval", "--ell", "2", "--theta", "0", "--phi", "0"])

    assert result.exit_code == 0
    report = json.loads(result.stdout)
    assert report["ell"] == 2
    components = report["tensor"]["components"]
    assert components["zz"] == pytest.approx(1.0)
    assert components["xx"] == pytest.approx(-0.5)


def test_eval_needs_a_target():
    result = runner.invoke(app, ["eval", "--theta", "0", "--phi", "0"])

    assert result.exit_code == 3


def test_eval_polynomial_file(tmp_path):
    source = write(tmp_path / "q.json", quadratic_form({"zz": "1"}))

    result = runner.invoke(app, ["--format", "json", "eval", "--theta", "0", "--phi", "0", "--file", str(source)])

    assert result.exit_code == 0
    assert json.loads(result.stdout)["value"] == pytest.approx(1.0)


def test_integrate(tmp_path):
    source = write(tmp_path / "q.json", quadratic_form({"zz": "1"}))

    result = runner.invoke(app, ["integrate", str(source)])
    product = runner.invoke(app, ["integrate", str(source), "--with", str(source)])

    assert result.exit_code == 0
    assert "integral: 4/3*pi" in result.stdout
    assert "integral: 4/5*pi" in product.stdout


def test_demo_quadrupole(tmp_path):
    q = write(tmp_path / "Q.json", {"rank": 2, "components": {"xx": "1", "yy": "1", "zz": "-2"}})

    result = runner.invoke(app, ["--format", "json", "demo-quadrupole", "--Q", str(q), "--k", "0", "0", "1"])

    assert result.exit_code == 0
    report = json.loads(result.stdout)
    assert report["relative_error"] < 1e-4
    assert report["extrapolated"] == pytest.approx(report["closed_form"], rel=1e-4)
    assert len(report["history"]) == 3


def test_demo_quadrupole_errors(tmp_path):
    traced = write(tmp_path / "traced.json", {"rank": 2, "components": {"xx": "1"}})
    good = write(tmp_path / "Q.json", {"rank": 2, "components": {"xx": "1", "yy": "-1"}})

    assert runner.invoke(app, ["demo-quadrupole", "--Q", str(traced), "--k", "0", "0", "1"]).exit_code == 4
    assert runner.invoke(app, ["demo-quadrupole", "--Q", str(good), "--k", "0", "0", "0"]).exit_code == 3


@pytest.mark.parametrize("suite,lmax", [("eq19", "8"), ("basis", "4"), ("recurrence", "4"), ("orthogonality", "3")])
def test_verify_suites_pass(suite, lmax):
    result = runner.invoke(app, ["verify", "--suite", suite, "--lmax", lmax])

    assert result.exit_code == 0
    assert f"{suite}: passed" in result.stdout
    assert "ℓ=0" in result.stdout or suite == "recurrence"


def test_verify_json_output():
    result = runner.invoke(app, ["--format", "json", "verify", "--suite", "eq19", "--lmax", "4"])

    assert result.exit_code == 0
    report = json.loads(result.stdout)
    assert report["passed"] is True
    assert [entry["ell"] for entry in report["orders"]] == [0, 1, 2, 3, 4]


def test_verify_fails_with_an_impossible_tolerance():
    result = runner.invoke(app, ["--tolerance", "1e-30", "verify", "--suite", "orthogonality", "--lmax", "2"])

    assert result.exit_code == 1
    assert "orthogonality: failed" in result.stdout


def test_unknown_suite_is_a_usage_error():
    result = runner.invoke(app, ["verify", "--suite", "everything"])

    assert result.exit_code == 2


def test_help_lists_commands():
    result = runner.invoke(app, ["--help"])

    assert result.exit_code == 0
    for command in ["detrace", "expand", "convert", "eval", "integrate", "demo-quadrupole", "verify"]:
        assert command in result.stdout


@pytest.mark.skipif(sys.version_info < (3, 11), reason="tomllib requires Python 3.11+")
def test_pyproject_defines_stf_script():
    import tomllib

    pyproject = Path(__file__).resolve().parents[1] / "pyproject.toml"
    data = tomllib.loads(pyproject.read_text(encoding="utf-8"))

    assert data["project"]["scripts"]["stf"] == "stfharmonics.cli:app"


@pytest.mark.skipif(sys.version_info < (3, 11), reason="tomllib requires Python 3.11+")
def test_pyproject_keeps_build_and_test_tools_out_of_runtime_dependencies():
    import tomllib

    pyproject = Path(__file__).resolve().parents[1] / "pyproject.toml"
    data = tomllib.loads(pyproject.read_text(encoding="utf-8"))

    runtime = " ".join(data["project"]["dependencies"])
    for tool in ("setuptools", "wheel", "pytest", "hypothesis"):
        assert tool not in runtime
    assert any(req.startswith("pytest") for req in data["project"]["optional-dependencies"]["test"])
    assert "setuptools>=69" in data["build-system"]["requires"]

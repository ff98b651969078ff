"""Fixture files, the .coalg format, and the command-line interface."""
import json
import subprocess
import sys

import pytest

from einfty.cli import main
from einfty.errors import RelationViolation
from einfty.formats import (CoalgParseError, fixture_path, list_fixtures,
                            load_structure_fixture)
from einfty.simplicial import parse_sset, torus


def run_cli(*argv, expect=0):
    import io
    from contextlib import redirect_stdout, redirect_stderr
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(list(argv))
    assert code == expect, (code, err.getvalue(), out.getvalue())
    return out.getvalue(), err.getvalue()


def test_bundled_fixture_roundtrip():
    assert set(list_fixtures()) == {"point", "circle", "wedge2", "wedge3",
                                    "sphere", "torus", "rp2", "borromean",
                                    "zero"}
    text = fixture_path("torus").read_text()
    assert parse_sset(text) == torus()


def test_load_structure_fixture():
    w = load_structure_fixture(fixture_path("borromean"))
    assert (w.h1_rank, w.h2_rank) == (3, 2)
    assert not w.triple.is_zero()
    z = load_structure_fixture(fixture_path("zero"))
    assert z.triple.is_zero()


def test_coalg_rejects_bad_schema(tmp_path):
    p = tmp_path / "bad.coalg"
    p.write_text("{}")
    with pytest.raises(CoalgParseError):
        load_structure_fixture(p)
    p.write_text("not json at all")
    with pytest.raises(CoalgParseError):
        load_structure_fixture(p)


def test_coalg_rejects_noncocommutative(tmp_path):
    data = json.loads(fixture_path("borromean").read_text())
    data["comul"][0][0 * 3 + 1] = 1  # breaks antisymmetry
    p = tmp_path / "defect.coalg"
    p.write_text(json.dumps(data))
    with pytest.raises(RelationViolation):
        load_structure_fixture(p)


def test_cli_homology():
    out, _ = run_cli("homology", "torus")
    rep = json.loads(out)
    assert rep["results"]["homology"]["1"] == {"rank": 2, "torsion": []}


def test_cli_cobar_wedge():
    out, _ = run_cli("cobar", "wedge2", "--max-len", "4")
    rep = json.loads(out)
    ranks = [p["rank"] for p in rep["results"]["graded_pieces"]]
    assert ranks == [1, 2, 4, 8]


def test_cli_invariant_and_compare():
    out, _ = run_cli("invariant", "borromean")
    rep = json.loads(out)
    assert rep["results"]["massey"]["is_zero"] is False
    out, _ = run_cli("invariant", "zero")
    assert json.loads(out)["results"]["massey"]["is_zero"] is True
    out, _ = run_cli("compare", "borromean", "zero")
    res = json.loads(out)["results"]
    assert res["massey_equal"] is False and res["sq_dual_equal"] is True


def test_cli_validate_and_errors(tmp_path):
    out, _ = run_cli("validate", "rp2")
    assert json.loads(out)["results"]["valid"] is True
    bad = tmp_path / "bad.sset"
    bad.write_text("dim 0\nv: []\ndim 1\na: [v, w]\n")
    _, err = run_cli("validate", str(bad), expect=1)
    payload = json.loads(err)
    assert payload["ok"] is False
    assert payload["error"]["error"] == "SSetValidationError"
    _, err = run_cli("transfer", "rp2", expect=1)
    assert json.loads(err)["error"]["error"] == "TorsionPresent"
    _, err = run_cli("homology", "no-such-input", expect=1)
    assert "no such file" in json.loads(err)["error"]["message"]


def test_cli_determinism_and_out(tmp_path):
    a, _ = run_cli("transfer", "torus")
    b, _ = run_cli("transfer", "torus")
    assert a == b
    target = tmp_path / "report.json"
    out, _ = run_cli("coalgebra", "circle", "--out", str(target))
    assert out == ""
    rep = json.loads(target.read_text())
    assert rep["command"] == "coalgebra"
    assert rep["results"]["operators"]["m2_1"] == {"a": "-a(x)a"}


def test_cli_selfcheck_green():
    out, _ = run_cli("selfcheck", "--seed", "3", "--max-len", "3")
    rep = json.loads(out)
    assert rep["results"]["all_ok"] is True
    assert all(c["ok"] for c in rep["results"]["checks"])


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "einfty.cli", "homology", "circle"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["results"]["homology"]["1"]["rank"] == 1

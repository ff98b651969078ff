"""Bundled fixtures and the homology-level structure file format.

A ``.coalg`` file is a JSON document carrying the H1/H2 window of a
homology-level structure directly -- the escape hatch for examples whose
simplicial models are not desk-scale.  Schema::

    {
      "format": "einfty-coalg",
      "h1_rank": m,
      "h2_rank": r,
      "comul":  [r rows of m*m ints],    # H2 -> H1 (x) H1, antisymmetric
      "sq":     [m rows of m*m ints],    # H1 -> H1 (x) H1, symmetric
      "triple": [r rows of m^3 ints]     # H2 -> H1 (x) H1 (x) H1
    }

Row t of each block lists the tensor coordinates of the image of the t-th
generator (index (i, j) flattened as i*m + j, and (i, j, k) as
(i*m + j)*m + k).  The symmetry checks run at load time; a file violating
them is rejected.
"""
from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from .errors import EinftyError, RelationViolation
from .intlinalg import IntMatrix
from .invariants import InvariantWindow

SSET_FIXTURES = ("point", "circle", "wedge2", "wedge3", "sphere", "torus", "rp2")
COALG_FIXTURES = ("borromean", "zero")


def fixture_path(name: str) -> Path:
    """Filesystem path of a bundled fixture, by bare name or file name."""
    base = name
    if name in SSET_FIXTURES:
        base = f"{name}.sset"
    elif name in COALG_FIXTURES:
        base = f"{name}.coalg"
    ref = resources.files("einfty") / "fixtures" / base
    with resources.as_file(ref) as p:
        if not p.exists():
            raise EinftyError(f"no bundled fixture named {name!r}")
        return Path(p)


def list_fixtures() -> list[str]:
    return sorted(SSET_FIXTURES) + sorted(COALG_FIXTURES)


class CoalgParseError(EinftyError):
    pass


def load_structure_fixture(path: str | Path) -> InvariantWindow:
    """Load and validate a ``.coalg`` window file."""
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise CoalgParseError(f"not valid JSON: {exc}") from exc
    if not isinstance(data, dict) or data.get("format") != "einfty-coalg":
        raise CoalgParseError("missing 'format': 'einfty-coalg' marker")
    try:
        m = int(data["h1_rank"])
        r = int(data["h2_rank"])
        comul = _block(data["comul"], r, m * m, "comul")
        sq = _block(data["sq"], m, m * m, "sq")
        triple = _block(data["triple"], r, m ** 3, "triple")
    except KeyError as exc:
        raise CoalgParseError(f"missing field {exc}") from exc
    window = InvariantWindow(m, r, comul, sq, triple)
    bad = window.validate()
    if bad:
        raise RelationViolation(bad[0])
    return window


def _block(rows, expected_rows: int, width: int, label: str) -> IntMatrix:
    if not isinstance(rows, list) or len(rows) != expected_rows:
        raise CoalgParseError(f"{label}: expected {expected_rows} rows")
    for row in rows:
        if not isinstance(row, list) or len(row) != width:
            raise CoalgParseError(f"{label}: rows must have {width} integer entries")
        for v in row:
            if not isinstance(v, int):
                raise CoalgParseError(f"{label}: non-integer entry {v!r}")
    return IntMatrix.from_columns(rows, nrows=width)

"""Homology against a brute-force counting oracle; retraction identities."""
import random
from fractions import Fraction
from itertools import product

import pytest

from einfty.chains import ChainComplex
from einfty.errors import TorsionPresent
from einfty.homology import (build_sdr, homology, identity_sdr, sdr_variant)
from einfty.intlinalg import IntMatrix
from einfty.simplicial import (circle, normalized_chains, point,
                               projective_plane, sphere, torus,
                               wedge_of_circles)

FIXTURE_COMPLEXES = {
    "point": normalized_chains(point()),
    "circle": normalized_chains(circle()),
    "wedge2": normalized_chains(wedge_of_circles(2)),
    "wedge3": normalized_chains(wedge_of_circles(3)),
    "sphere": normalized_chains(sphere()),
    "torus": normalized_chains(torus()),
    "rp2": normalized_chains(projective_plane()),
}

SYNTHETIC = {
    "times2": ChainComplex({0: ("x",), 1: ("y",)}, {1: IntMatrix.from_rows([[2]])}),
    "mixed": ChainComplex(
        {0: ("a", "b"), 1: ("c", "d"), 2: ("e",)},
        {1: IntMatrix.from_rows([[0, 0], [0, 0]]),
         2: IntMatrix.from_rows([[6], [0]])}),
    "acyclic": ChainComplex({0: ("x",), 1: ("y",)}, {1: IntMatrix.from_rows([[1]])}),
}


def count_homology_mod(c: ChainComplex, d: int, n: int) -> int:
    """|H_d(C; Z/n)| by literally enumerating cycles and boundaries."""
    rd = c.rank(d)
    out_mat = c.boundary_matrix(d)
    in_mat = c.boundary_matrix(d + 1)
    cycles = 0
    for vec in product(range(n), repeat=rd):
        if all(v % n == 0 for v in out_mat.apply(list(vec))):
            cycles += 1
    boundaries = set()
    for vec in product(range(n), repeat=c.rank(d + 1)):
        img = tuple(v % n for v in in_mat.apply(list(vec)))
        boundaries.add(img)
    return cycles // len(boundaries)


def predicted_order_mod(report, d: int, n: int) -> int:
    """Universal coefficients: |H_d (x) Z/n| * |Tor(H_{d-1}, Z/n)|."""
    from math import gcd
    order = n ** report.rank(d)
    for t in report.torsion_in(d):
        order *= gcd(t, n)
    for t in report.torsion_in(d - 1):
        order *= gcd(t, n)
    return order


def rational_rank(m: IntMatrix) -> int:
    rows = [[Fraction(v) for v in row] for row in m.to_rows()]
    r = 0
    for j in range(m.ncols):
        piv = next((i for i in range(r, m.nrows) if rows[i][j]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(m.nrows):
            if i != r and rows[i][j]:
                f = rows[i][j] / rows[r][j]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
    return r


@pytest.mark.parametrize("name", sorted(FIXTURE_COMPLEXES) + sorted(SYNTHETIC))
def test_homology_matches_counting_oracle(name):
    c = FIXTURE_COMPLEXES.get(name) or SYNTHETIC[name]
    assert c.total_rank() <= 12
    report = homology(c)
    degs = range(min(c.degrees()), max(c.degrees()) + 1)
    for d in degs:
        # free rank against fraction-free elimination
        expected_rank = c.rank(d) - rational_rank(c.boundary_matrix(d)) \
            - rational_rank(c.boundary_matrix(d + 1))
        assert report.rank(d) == expected_rank
        for n in (2, 3, 4, 5, 9):
            assert count_homology_mod(c, d, n) == predicted_order_mod(report, d, n)


def test_known_tables():
    assert homology(FIXTURE_COMPLEXES["circle"]).as_table() == {
        "0": {"rank": 1, "torsion": []}, "1": {"rank": 1, "torsion": []}}
    assert homology(FIXTURE_COMPLEXES["torus"]).as_table() == {
        "0": {"rank": 1, "torsion": []}, "1": {"rank": 2, "torsion": []},
        "2": {"rank": 1, "torsion": []}}
    assert homology(FIXTURE_COMPLEXES["rp2"]).as_table() == {
        "0": {"rank": 1, "torsion": []}, "1": {"rank": 0, "torsion": [2]}}


def test_representatives_are_cycles():
    for name, c in FIXTURE_COMPLEXES.items():
        report = homology(c)
        for d, reps in report.representatives.items():
            assert (c.boundary_matrix(d) @ reps).is_zero(), name


@pytest.mark.parametrize("name", ["circle", "wedge2", "wedge3", "sphere", "torus"])
def test_sdr_five_identities(name):
    sdr = build_sdr(FIXTURE_COMPLEXES[name])
    assert sdr.verify() == []


def test_sdr_matches_homology_basis():
    c = FIXTURE_COMPLEXES["torus"]
    report = homology(c)
    sdr = build_sdr(c)
    for d in sdr.retract.degrees():
        assert sdr.retract.rank(d) == report.rank(d)
        assert sdr.g.block(d) == report.representatives[d]
    assert not sdr.retract.boundary


def test_torsion_raises():
    with pytest.raises(TorsionPresent) as exc:
        build_sdr(FIXTURE_COMPLEXES["rp2"])
    assert exc.value.degree == 1 and exc.value.coefficient == 2


def test_acyclic_complex_sdr():
    sdr = build_sdr(SYNTHETIC["acyclic"])
    assert sdr.f.is_zero() and sdr.g.is_zero()
    assert sdr.verify() == []
    assert not sdr.h.is_zero()


def test_circle_sdr_is_identity():
    sdr = build_sdr(FIXTURE_COMPLEXES["circle"])
    assert sdr.h.is_zero()
    for d in (0, 1):
        assert sdr.f.block(d) == IntMatrix.identity(1)
        assert sdr.g.block(d) == IntMatrix.identity(1)


def test_identity_sdr_requires_zero_differential():
    with pytest.raises(ValueError):
        identity_sdr(SYNTHETIC["acyclic"])
    sdr = identity_sdr(FIXTURE_COMPLEXES["circle"])
    assert sdr.verify() == []


def test_gauge_variant_is_sdr_and_differs():
    c = FIXTURE_COMPLEXES["torus"]
    sdr = build_sdr(c)
    rng = random.Random(9)
    theta = {}
    for d in sdr.retract.degrees():
        m = IntMatrix(c.rank(d), sdr.retract.rank(d))
        for i in range(m.nrows):
            for j in range(m.ncols):
                m[i, j] = rng.randint(-2, 2)
        theta[d] = m
    v = sdr_variant(sdr, theta)
    assert v.verify() == []
    assert v.g != sdr.g or v.h != sdr.h

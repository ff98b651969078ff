"""Derive the arity-3 generator differentials that have no closed form.

The arity-2 tower alternates 1 -/+ sigma.  For arity 3 the differential of
each generator m3_{k+1} must be a cycle in the degree-k part of the arity-3
component whose symmetric-group orbit, together with the boundaries coming
from binary composites, spans the whole cycle lattice -- that is exactly
the condition that the next homology group dies, keeping the fragment a
resolution.  This script finds such cycles degree by degree and prints a
frozen table for einfty.operads.

Run:  python tools/derive_arity3.py
"""
from __future__ import annotations

import itertools
import sys

sys.setrecursionlimit(10000)

import einfty.operads as O
from einfty.intlinalg import IntMatrix, kernel_basis, smith, solve
from einfty.operads import (act, compose_i, differential, el_add, el_scale,
                            render, single, symmetric_group, zero)

S3 = symmetric_group(3)

# trial table injected into the operads module while we search
TABLE: dict[int, dict] = {}
O._frozen_m3_table = lambda: TABLE  # type: ignore[assignment]


def reset_caches():
    O.generator_differential.cache_clear()


def composite_specs(degree: int):
    """(a, i, b) with m2_a substituted into slot i of m2_b, a + b = degree."""
    out = []
    for a in range(degree + 1):
        b = degree - a
        for i in (1, 2):
            out.append((a, i, b))
    return out


def basis_elements(degree: int, with_m3: bool):
    """List of (element, descriptor) pairs spanning the degree-d component."""
    out = []
    for a, i, b in composite_specs(degree):
        base = compose_i(single(f"m2_{a}"), single(f"m2_{b}"), i)
        for s in S3:
            out.append((act(s, base), ("comp", s, a, i, b)))
    if with_m3 and degree >= 1:
        base = single(f"m3_{degree}")
        for s in S3:
            out.append((act(s, base), ("gen", s, degree)))
    return out


def monomial_index(elements):
    monos = {}
    for el, _ in elements:
        for mono in el:
            monos.setdefault(mono, len(monos))
    return monos


def to_matrix(elements, index):
    m = IntMatrix(len(index), len(elements))
    for j, (el, _) in enumerate(elements):
        for mono, c in el.items():
            m[index[mono], j] = c
    return m


def element_vector(el, index):
    col = IntMatrix(len(index), 1)
    for mono, c in el.items():
        if mono not in index:
            raise KeyError(f"monomial outside space: {mono}")
        col[index[mono], 0] = c
    return col


def boundary_matrix(degree: int, with_m3_src: bool, with_m3_dst: bool):
    src = basis_elements(degree, with_m3_src)
    dst = basis_elements(degree - 1, with_m3_dst) if degree >= 1 else []
    dst_index = monomial_index(dst)
    dst_matrix = to_matrix(dst, dst_index) if dst else IntMatrix(0, 0)
    cols = []
    for el, _ in src:
        d = differential(el)
        if not dst:
            assert not d, "nonzero differential into empty space"
            cols.append(IntMatrix(0, 1))
            continue
        vec = element_vector(d, dst_index)
        coords = solve(dst_matrix, vec)
        assert coords is not None, "differential not in the monomial span"
        cols.append(coords)
    out = IntMatrix(dst_matrix.ncols if dst else 0, len(src))
    for j, col in enumerate(cols):
        for (i, _), v in col.data.items():
            out[i, j] = v
    return src, out


def orbit_span_is_everything(z_basis, b_in_z, xi_vec, src_elems, src_index):
    """Does ZS3 * xi + boundaries fill the whole cycle lattice?"""
    cols = [b_in_z] if b_in_z.ncols else []
    xi_el = zero()
    coords = z_basis @ xi_vec
    for j, (el, _) in enumerate(src_elems):
        pass
    # rebuild xi as an element from its big-space coordinates
    big = coords
    xi_el = {}
    for mono, idx in src_index.items():
        c = big[idx, 0]
        if c:
            xi_el[mono] = c
    for s in S3:
        moved = act(s, xi_el)
        vec = element_vector(moved, src_index)
        inz = solve(z_basis, vec)
        if inz is None:
            return False, None
        cols.append(inz)
    joined = cols[0]
    for c in cols[1:]:
        joined = joined.hstack(c)
    sf = smith(joined)
    ok = sf.rank == z_basis.ncols and all(f == 1 for f in sf.invariant_factors())
    return ok, xi_el


def derive(k: int):
    """Find xi = d(m3_{k+1}) in degree k."""
    src_elems, dmat = boundary_matrix(k, with_m3_src=True, with_m3_dst=(k - 1 >= 1))
    src_index = monomial_index(src_elems)
    src_matrix = to_matrix(src_elems, src_index)
    # express the abstract columns in monomial space for kernel computation
    big_d_cols = []
    dst = basis_elements(k - 1, k - 1 >= 1)
    dst_index = monomial_index(dst)
    big = IntMatrix(len(dst_index), len(src_elems))
    for j, (el, _) in enumerate(src_elems):
        d = differential(el)
        for mono, c in d.items():
            big[dst_index[mono], j] = c
    zker = kernel_basis(big)  # abstract coords of cycles
    # boundaries of degree-(k+1) binary composites
    up = basis_elements(k + 1, with_m3=False)
    b_cols = []
    for el, _ in up:
        d = differential(el)
        vec = element_vector(d, src_index)
        coords = solve(src_matrix, vec)
        assert coords is not None
        b_cols.append(coords)
    bmat = IntMatrix(len(src_elems), len(b_cols))
    for j, col in enumerate(b_cols):
        for (i, _), v in col.data.items():
            bmat[i, j] = v
    b_in_z = solve(zker, bmat)
    assert b_in_z is not None, "boundaries not inside cycles"
    z = zker.ncols
    sf = smith(b_in_z)
    free_cols = list(range(sf.rank, z))
    tors_cols = [i for i in range(sf.rank) if sf.invariant_factors()[i] >= 2]
    cand_cols = tors_cols + free_cols
    print(f"  degree {k}: dim={len(src_elems)} cycles={z} "
          f"boundary-rank={sf.rank} torsion={[f for f in sf.invariant_factors() if f >= 2]} "
          f"free-defect={len(free_cols)}")
    gens = [sf.uinv.submatrix_columns([c]) for c in cand_cols]
    # try single generators, then small combinations
    combos = [(1,) * 0]
    trials = []
    for g in gens:
        trials.append(g)
    for (i, gi), (j, gj) in itertools.combinations(enumerate(gens), 2):
        for sa, sb in ((1, 1), (1, -1)):
            m = gi.scale(sa) + gj.scale(sb)
            trials.append(m)
    if len(gens) >= 3:
        for combo in itertools.combinations(range(len(gens)), 3):
            for signs in itertools.product((1, -1), repeat=3):
                m = gens[combo[0]].scale(signs[0])
                m = m + gens[combo[1]].scale(signs[1])
                m = m + gens[combo[2]].scale(signs[2])
                trials.append(m)
    for xi_vec in trials:
        ok, xi_el = orbit_span_is_everything(zker, b_in_z, xi_vec, src_elems, src_index)
        if ok:
            return xi_el, src_elems, src_index, src_matrix
    raise RuntimeError(f"no single-orbit differential found in degree {k}")


def describe(xi_el, src_elems, src_index, src_matrix):
    vec = element_vector(xi_el, src_index)
    coords = solve(src_matrix, vec)
    assert coords is not None
    terms = []
    for j, (_, desc) in enumerate(src_elems):
        c = coords[j, 0]
        if c:
            terms.append((c, desc))
    return terms


def main():
    print("solving arity-3 differentials")
    frozen = {}
    for k in (1, 2, 3):
        xi_el, src_elems, src_index, src_matrix = derive(k)
        # consistency: d(xi) == 0 and orbit property already checked
        assert not differential(xi_el)
        TABLE[k + 1] = xi_el
        reset_caches()
        dd = differential(O.generator_differential(f"m3_{k + 1}"))
        assert not dd, render(dd)
        frozen[k + 1] = describe(xi_el, src_elems, src_index, src_matrix)
        print(f"  d m3_{k + 1} = {render(xi_el)}")
    print("\nfrozen table (paste into operads.py):")
    print("_M3_TABLE_DATA = {")
    for deg, terms in frozen.items():
        print(f"    {deg}: [")
        for c, desc in terms:
            if desc[0] == "comp":
                _, s, a, i, b = desc
                print(f"        ({c}, {s!r}, 'comp', {a}, {i}, {b}),")
            else:
                _, s, kk = desc
                print(f"        ({c}, {s!r}, 'gen', {kk}, 0, 0),")
        print("    ],")
    print("}")
    # exactness sweep with the found table
    print("\nexactness of the arity-3 column (H_k for k=1..3 must vanish):")
    for k in (1, 2, 3):
        src_elems, _ = boundary_matrix(k, True, k - 1 >= 1)
        src_index = monomial_index(src_elems)
        src_matrix = to_matrix(src_elems, src_index)
        dst = basis_elements(k - 1, k - 1 >= 1)
        dst_index = monomial_index(dst)
        big = IntMatrix(len(dst_index), len(src_elems))
        for j, (el, _) in enumerate(src_elems):
            for mono, c in differential(el).items():
                big[dst_index[mono], j] = c
        zker = kernel_basis(big)
        up = basis_elements(k + 1, with_m3=True)
        bcols = IntMatrix(len(src_index), len(up))
        for j, (el, _) in enumerate(up):
            for mono, c in differential(el).items():
                bcols[src_index[mono], j] = c
        b_in_z = solve(zker, bcols)
        sf = smith(b_in_z)
        hk_rank = zker.ncols - sf.rank
        tors = [f for f in sf.invariant_factors() if f >= 2]
        print(f"  H_{k}: rank {hk_rank}, torsion {tors}")
    # H_0 should be Z (rank 1, the commutative triple product class)
    src_elems, _ = boundary_matrix(0, False, False)
    src_index = monomial_index(src_elems)
    up = basis_elements(1, with_m3=True)
    bcols = IntMatrix(len(src_index), len(up))
    for j, (el, _) in enumerate(up):
        for mono, c in differential(el).items():
            bcols[src_index[mono], j] = c
    sf = smith(bcols)
    print(f"  H_0: rank {len(src_index) - sf.rank}, torsion "
          f"{[f for f in sf.invariant_factors() if f >= 2]}")


if __name__ == "__main__":
    main()

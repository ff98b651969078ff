"""Bounded complexes of free Z-modules and degree-homogeneous operators.

Sign conventions used throughout the package (all homological):

* differentials have degree -1;
* (f (x) g)(x (x) y) = (-1)^{deg g * deg x} f(x) (x) g(y);
* the bracket with the differential is [d, F] = d o F - (-1)^{deg F} F o d;
* a permutation acts on a tensor by moving the factor at position p to
  position sigma(p), with the Koszul sign of the factor degrees;
* T = the signed swap on two factors, T(x (x) y) = (-1)^{deg x deg y} y (x) x.

Operators K -> L^{(x) n} are stored blockwise: one integer matrix per source
degree, written in the induced tensor basis of the target power.  Tensor
bases are enumerated in lexicographic order of ((degree, index), ...) tuples
and the enumeration is cached on the target complex, so row indices are
stable and equality of operators is literal equality of sparse matrices.
"""
from __future__ import annotations

from typing import Sequence

from .intlinalg import IntMatrix

TensorKey = tuple[tuple[int, int], ...]


class ChainComplex:
    """Finitely generated free chain complex with chosen ordered bases."""

    def __init__(self, basis: dict[int, Sequence], boundary: dict[int, IntMatrix],
                 check: bool = True):
        self.basis = {d: tuple(labels) for d, labels in basis.items() if labels}
        self.boundary = {}
        for d, mat in boundary.items():
            if mat.is_zero():
                continue
            self.boundary[d] = mat
        self._tensor_cache: dict[tuple[int, int], list[TensorKey]] = {}
        self._tensor_index_cache: dict[tuple[int, int], dict[TensorKey, int]] = {}
        if check:
            self.validate()

    def degrees(self) -> list[int]:
        return sorted(self.basis)

    def rank(self, d: int) -> int:
        return len(self.basis.get(d, ()))

    def total_rank(self) -> int:
        return sum(len(b) for b in self.basis.values())

    def labels(self, d: int) -> tuple:
        return self.basis.get(d, ())

    def boundary_matrix(self, d: int) -> IntMatrix:
        mat = self.boundary.get(d)
        if mat is None:
            return IntMatrix(self.rank(d - 1), self.rank(d))
        return mat

    def validate(self) -> None:
        for d, mat in self.boundary.items():
            if mat.shape != (self.rank(d - 1), self.rank(d)):
                raise ValueError(
                    f"boundary in degree {d} has shape {mat.shape}, "
                    f"expected {(self.rank(d - 1), self.rank(d))}"
                )
        for d in list(self.boundary):
            if d - 1 in self.boundary:
                if not (self.boundary_matrix(d - 1) @ self.boundary_matrix(d)).is_zero():
                    raise ValueError(f"d o d != 0 between degrees {d} and {d - 2}")

    # -- tensor power bookkeeping -------------------------------------------

    def tensor_basis(self, n: int, total_degree: int) -> list[TensorKey]:
        """Basis of (C^{(x) n})_total_degree as tuples of (degree, index)."""
        key = (n, total_degree)
        cached = self._tensor_cache.get(key)
        if cached is not None:
            return cached
        if n == 0:
            out = [()] if total_degree == 0 else []
        else:
            out = []
            degs = self.degrees()
            for d in degs:
                r = self.rank(d)
                for rest in self.tensor_basis(n - 1, total_degree - d):
                    for i in range(r):
                        out.append(((d, i),) + rest)
            # lexicographic in ((deg, idx), ...) with the recursion above
            out.sort()
        self._tensor_cache[key] = out
        return out

    def tensor_index(self, n: int, total_degree: int) -> dict[TensorKey, int]:
        key = (n, total_degree)
        cached = self._tensor_index_cache.get(key)
        if cached is None:
            cached = {t: i for i, t in enumerate(self.tensor_basis(n, total_degree))}
            self._tensor_index_cache[key] = cached
        return cached

    def tensor_rank(self, n: int, total_degree: int) -> int:
        return len(self.tensor_basis(n, total_degree))

    def tensor_boundary(self, n: int, total_degree: int) -> IntMatrix:
        """Matrix of the tensor differential (C^n)_D -> (C^n)_{D-1}."""
        src = self.tensor_basis(n, total_degree)
        dst_index = self.tensor_index(n, total_degree - 1)
        out = IntMatrix(len(dst_index), len(src))
        for col, word in enumerate(src):
            sign = 1
            for slot, (d, i) in enumerate(word):
                mat = self.boundary.get(d)
                if mat is not None:
                    for (r, c), v in mat.data.items():
                        if c != i or not v:
                            continue
                        new = word[:slot] + (((d - 1), r),) + word[slot + 1:]
                        row = dst_index[new]
                        out[row, col] = out[row, col] + sign * v
                d_parity = d & 1
                if d_parity:
                    sign = -sign
        return out

    def __repr__(self):
        ranks = {d: self.rank(d) for d in self.degrees()}
        return f"ChainComplex(ranks={ranks})"


def unit_complex() -> ChainComplex:
    """The ground ring Z concentrated in degree 0."""
    return ChainComplex({0: ("1",)}, {})


def tensor_complex(c: ChainComplex, n: int) -> ChainComplex:
    """Materialized n-th tensor power with tuple labels (n >= 0)."""
    if n < 0:
        raise ValueError("tensor arity must be nonnegative")
    if n == 1:
        return c
    degs = c.degrees()
    if n == 0 or not degs:
        return unit_complex() if n == 0 else ChainComplex({}, {})
    lo, hi = n * degs[0], n * degs[-1]
    basis = {}
    for total in range(lo, hi + 1):
        words = c.tensor_basis(n, total)
        if words:
            basis[total] = tuple(
                tuple(c.labels(d)[i] for (d, i) in word) for word in words
            )
    boundary = {}
    for total in range(lo, hi + 1):
        if basis.get(total):
            mat = c.tensor_boundary(n, total)
            if not mat.is_zero():
                boundary[total] = mat
    return ChainComplex(basis, boundary)


def perm_sign(perm: Sequence[int], degrees: Sequence[int]) -> int:
    """Koszul sign of moving factor p to position perm[p], for all p."""
    sign = 1
    n = len(perm)
    for p in range(n):
        for q in range(p + 1, n):
            if perm[p] > perm[q] and (degrees[p] & 1) and (degrees[q] & 1):
                sign = -sign
    return sign


class GradedOperator:
    """Degree-homogeneous operator source -> target^{(x) arity}."""

    __slots__ = ("source", "target", "arity", "degree", "blocks")

    def __init__(self, source: ChainComplex, target: ChainComplex, arity: int,
                 degree: int, blocks: dict[int, IntMatrix] | None = None):
        self.source = source
        self.target = target
        self.arity = arity
        self.degree = degree
        self.blocks = {}
        if blocks:
            for d, mat in blocks.items():
                expected = (target.tensor_rank(arity, d + degree), source.rank(d))
                if mat.shape != expected:
                    raise ValueError(
                        f"block at degree {d} has shape {mat.shape}, expected {expected}"
                    )
                if not mat.is_zero():
                    self.blocks[d] = mat

    def block(self, d: int) -> IntMatrix:
        mat = self.blocks.get(d)
        if mat is None:
            return IntMatrix(self.target.tensor_rank(self.arity, d + self.degree),
                             self.source.rank(d))
        return mat

    def is_zero(self) -> bool:
        return not self.blocks

    def same_shape(self, other: "GradedOperator") -> bool:
        return (self.source is other.source and self.target is other.target
                and self.arity == other.arity and self.degree == other.degree)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GradedOperator):
            return NotImplemented
        if not (self.source is other.source and self.target is other.target):
            return False
        if (self.arity, self.degree) != (other.arity, other.degree):
            return False
        return self.blocks == other.blocks

    def __hash__(self):
        raise TypeError("GradedOperator is not hashable")

    def __add__(self, other: "GradedOperator") -> "GradedOperator":
        if not self.same_shape(other):
            raise ValueError("operator shape mismatch in +")
        degs = set(self.blocks) | set(other.blocks)
        return GradedOperator(self.source, self.target, self.arity, self.degree,
                              {d: self.block(d) + other.block(d) for d in degs})

    def __sub__(self, other: "GradedOperator") -> "GradedOperator":
        return self + (-other)

    def __neg__(self) -> "GradedOperator":
        return self.scale(-1)

    def scale(self, c: int) -> "GradedOperator":
        return GradedOperator(self.source, self.target, self.arity, self.degree,
                              {d: m.scale(c) for d, m in self.blocks.items()})

    def image_of(self, d: int, idx: int) -> list[tuple[int, TensorKey]]:
        """Expansion of the image of one source basis element."""
        out = []
        mat = self.blocks.get(d)
        if mat is None:
            return out
        words = self.target.tensor_basis(self.arity, d + self.degree)
        for (r, c), v in mat.data.items():
            if c == idx:
                out.append((v, words[r]))
        out.sort(key=lambda t: t[1])
        return out

    def __repr__(self):
        return (f"GradedOperator(arity={self.arity}, degree={self.degree}, "
                f"blocks@{sorted(self.blocks)})")


def zero_operator(source: ChainComplex, target: ChainComplex, arity: int,
                  degree: int) -> GradedOperator:
    return GradedOperator(source, target, arity, degree, {})


def identity_operator(c: ChainComplex) -> GradedOperator:
    blocks = {d: IntMatrix.identity(c.rank(d)) for d in c.degrees()}
    return GradedOperator(c, c, 1, 0, blocks)


def boundary_operator(c: ChainComplex) -> GradedOperator:
    blocks = {d: c.boundary_matrix(d) for d in c.boundary}
    return GradedOperator(c, c, 1, -1, blocks)


def bracket_d(f: GradedOperator) -> GradedOperator:
    """[d, f] = d_target o f - (-1)^{deg f} f o d_source."""
    out: dict[int, IntMatrix] = {}
    sign = -1 if f.degree & 1 else 1
    src_degrees = set(f.blocks)
    src_degrees.update(d + 1 for d in f.blocks)
    src_degrees.update(f.source.boundary.keys())
    for d in src_degrees:
        if f.source.rank(d) == 0:
            continue
        left = f.target.tensor_boundary(f.arity, d + f.degree) @ f.block(d)
        right = f.block(d - 1) @ f.source.boundary_matrix(d)
        mat = left - right.scale(sign)
        if not mat.is_zero():
            out[d] = mat
    return GradedOperator(f.source, f.target, f.arity, f.degree - 1, out)


def plain_compose(a: GradedOperator, b: GradedOperator) -> GradedOperator:
    """a o b where b has arity 1 (ordinary composition)."""
    if b.arity != 1:
        raise ValueError("plain_compose needs arity-1 inner operator")
    if a.source is not b.target:
        raise ValueError("source/target mismatch in composition")
    out = {}
    for d in b.blocks:
        mat = a.block(d + b.degree) @ b.block(d)
        if not mat.is_zero():
            out[d] = mat
    return GradedOperator(b.source, a.target, a.arity, a.degree + b.degree, out)


def tensor_compose(ops: Sequence[GradedOperator], b: GradedOperator) -> GradedOperator:
    """(op_1 (x) ... (x) op_n) o b with the Koszul sign convention.

    All ops must share b.target as source and must share a common target
    complex; arbitrary arities (including 0) are allowed per slot.
    """
    n = b.arity
    if len(ops) != n:
        raise ValueError(f"need {n} slot operators, got {len(ops)}")
    for op in ops:
        if op.source is not b.target:
            raise ValueError("slot operator source must equal inner target")
    tgt = None
    for op in ops:
        if op.arity > 0:
            if tgt is None:
                tgt = op.target
            elif op.target is not tgt:
                raise ValueError("slot operators must share one target complex")
    if tgt is None:
        # all slots have arity 0; any carrier works since the result is a
        # functional into the ground ring
        tgt = ops[0].target if ops else unit_complex()
    out_arity = sum(op.arity for op in ops)
    out_degree = b.degree + sum(op.degree for op in ops)
    blocks: dict[int, IntMatrix] = {}
    for d, bmat in b.blocks.items():
        src_words = b.target.tensor_basis(n, d + b.degree)
        dst_index = tgt.tensor_index(out_arity, d + out_degree)
        acc = IntMatrix(len(dst_index), b.source.rank(d))
        for (r, col), coeff in bmat.data.items():
            word = src_words[r]
            # moving op_j past the earlier inputs costs their degrees
            base_sign = 1
            running = 0
            pieces: list[list[tuple[int, TensorKey]]] = []
            dead = False
            for slot, (e, i) in enumerate(word):
                op = ops[slot]
                if (op.degree & 1) and (running & 1):
                    base_sign = -base_sign
                running += e
                img = op.image_of(e, i)
                if not img:
                    dead = True
                    break
                pieces.append(img)
            if dead:
                continue
            stack = [(1, ())]
            for img in pieces:
                stack = [(s * v, w + frag) for (s, w) in stack for (v, frag) in img]
            for s, w in stack:
                row = dst_index[w]
                val = acc[row, col] + base_sign * s * coeff
                acc[row, col] = val
        if not acc.is_zero():
            blocks[d] = acc
    return GradedOperator(b.source, tgt, out_arity, out_degree, blocks)


def compose_slot(a: GradedOperator, b: GradedOperator, i: int) -> GradedOperator:
    """Substitute ``a`` into tensor slot ``i`` (1-based) of b's target."""
    if not 1 <= i <= max(b.arity, 1):
        raise ValueError(f"slot {i} out of range for arity {b.arity}")
    if b.arity == 1:
        return plain_compose(a, b)
    if a.target is not b.target and a.arity != 0:
        raise ValueError("mixed-target slot substitution needs arity-1 inner operator")
    ident = identity_operator(b.target)
    ops = [ident] * b.arity
    ops[i - 1] = a
    return tensor_compose(ops, b)


def sigma_twist(perm: Sequence[int], f: GradedOperator) -> GradedOperator:
    """Post-compose with the signed permutation of target factors.

    ``perm[p]`` is the destination position (0-based) of factor p.
    """
    if len(perm) != f.arity:
        raise ValueError("permutation length must match arity")
    blocks = {}
    for d, mat in f.blocks.items():
        words = f.target.tensor_basis(f.arity, d + f.degree)
        index = f.target.tensor_index(f.arity, d + f.degree)
        out = IntMatrix(len(words), mat.ncols)
        for (r, c), v in mat.data.items():
            word = words[r]
            new = [None] * f.arity
            for p, fac in enumerate(word):
                new[perm[p]] = fac
            sign = perm_sign(perm, [fac[0] for fac in word])
            row = index[tuple(new)]
            out[row, c] = out[row, c] + sign * v
        if not out.is_zero():
            blocks[d] = out
    return GradedOperator(f.source, f.target, f.arity, f.degree, blocks)


def transpose_swap(f: GradedOperator) -> GradedOperator:
    """The signed factor swap T applied after an arity-2 operator."""
    if f.arity != 2:
        raise ValueError("transpose_swap needs arity 2")
    return sigma_twist((1, 0), f)

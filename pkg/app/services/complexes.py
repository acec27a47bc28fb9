"""Bounded complexes of indecomposable projectives and their homotopy category.

A term ``X^d`` is a tuple of vertex indices standing for ``(+)_c e_{v_c} A``.
Maps between such sums are *algebra matrices*: arrays of shape
``(rows, cols, dim A)`` whose ``(r, c)`` entry is the algebra element ``x`` in
``e_{w_r} A e_{v_c}`` acting by left multiplication ``e_{v_c} A -> e_{w_r} A``.
Composition ``g . f`` is then the matrix product with entries multiplied in
the order ``g[r, m] f[m, c]``.

Sign conventions live here and nowhere else:

* ``shift(X, n)^d = X^{d+n}`` with differential multiplied by ``(-1)^n``;
  shifting a degree-zero map does not change its components.
* ``cone(f)^d = X^{d+1} (+) Y^d`` with differential
  ``[[-d_X, 0], [f, d_Y]]``.
* The Hom complex differential is ``D f = d_Y f - (-1)^n f d_X`` on degree
  ``n``, so degree-``n`` cycles are the chain maps ``X -> Y[n]``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .algebra import Algebra
from .exactlin import (
    Coordinates,
    extend_basis,
    hstack,
    image_basis,
    inverse,
    nullspace,
    rank,
    solve,
)
from .modules import ModuleRep, hom_module, projective_module, projective_offsets, top_and_min_generators

logger = logging.getLogger(__name__)


class ComplexValidationError(ValueError):
    """Raised for malformed complexes; carries the degree and the offending entry."""

    def __init__(self, degree: int, entry: Optional[Tuple[int, int]], message: str) -> None:
        where = f"degree {degree}" + (f", entry {entry}" if entry is not None else "")
        super().__init__(f"{where}: {message}")
        self.degree = degree
        self.entry = entry


# -- algebra matrices ---------------------------------------------------------


def amat_zeros(A: Algebra, rows: int, cols: int) -> np.ndarray:
    return A.field.zeros((rows, cols, A.dim))


def amat_mul(A: Algebra, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Product of algebra matrices, ``Z[r, c] = sum_m X[r, m] Y[m, c]``."""
    F = A.field
    rows, inner, _ = X.shape
    inner_y, cols, _ = Y.shape
    if inner != inner_y:
        raise ValueError(f"cannot compose {X.shape[:2]} with {Y.shape[:2]}")
    if rows == 0 or cols == 0 or inner == 0 or A.dim == 0:
        return amat_zeros(A, rows, cols)
    left = F.reduce(np.tensordot(X, A.table, axes=(2, 0)))  # (r, m, j, k)
    product = np.tensordot(left, Y, axes=([1, 2], [0, 2]))  # (r, k, c)
    return F.reduce(product.transpose(0, 2, 1))


def amat_identity(A: Algebra, vertices: Sequence[int]) -> np.ndarray:
    out = amat_zeros(A, len(vertices), len(vertices))
    for k, v in enumerate(vertices):
        out[k, k] = A.idempotents[v]
    return out


def amat_blocks(A: Algebra, grid: Sequence[Sequence[Optional[np.ndarray]]], rows: Sequence[int], cols: Sequence[int]) -> np.ndarray:
    """Assemble a block matrix; ``None`` blocks are zero."""
    out = amat_zeros(A, sum(rows), sum(cols))
    r0 = 0
    for i, height in enumerate(rows):
        c0 = 0
        for j, width in enumerate(cols):
            block = grid[i][j]
            if block is not None and height and width:
                out[r0 : r0 + height, c0 : c0 + width] = block
            c0 += width
        r0 += height
    return out


def residue_matrix(A: Algebra, M: np.ndarray, rows: Sequence[int], cols: Sequence[int]) -> np.ndarray:
    """Image of ``M`` modulo the radical: residues of same-vertex entries."""
    F = A.field
    out = F.zeros((len(rows), len(cols)))
    for r, w in enumerate(rows):
        for c, v in enumerate(cols):
            if w == v:
                out[r, c] = A.residue_value(M[r, c], v)
    return out


def amat_inverse(A: Algebra, M: np.ndarray, rows: Sequence[int], cols: Sequence[int]) -> np.ndarray:
    """Inverse of a map between projectives whose residue matrix is invertible."""
    F = A.field
    rho_inv = inverse(F, residue_matrix(A, M, rows, cols))
    lift = amat_zeros(A, len(cols), len(rows))
    for c, v in enumerate(cols):
        for r, w in enumerate(rows):
            if v == w and not F.is_zero(rho_inv[c, r]):
                lift[c, r] = F.reduce(rho_inv[c, r] * A.idempotents[v])
    identity = amat_identity(A, rows)
    nilpotent = F.reduce(identity - amat_mul(A, M, lift))
    # (1 - N)^-1 = 1 + N + N^2 + ... terminates because N has radical entries.
    total = identity
    power = identity
    for _ in range(A.dim + 1):
        power = amat_mul(A, power, nilpotent)
        if F.is_zero(power):
            break
        total = F.reduce(total + power)
    else:
        raise RuntimeError("residue lift did not converge; radical is not nilpotent")
    return amat_mul(A, lift, total)


def klinear(A: Algebra, M: np.ndarray, rows: Sequence[int], cols: Sequence[int]) -> np.ndarray:
    """The k-linear matrix of an algebra matrix on the expanded projectives."""
    F = A.field
    row_blocks = [A.row_block(w) for w in rows]
    col_blocks = [A.row_block(v) for v in cols]
    out = F.zeros((sum(len(b) for b in row_blocks), sum(len(b) for b in col_blocks)))
    r0 = 0
    for r, rb in enumerate(row_blocks):
        c0 = 0
        for c, cb in enumerate(col_blocks):
            if not F.is_zero(M[r, c]):
                out[r0 : r0 + len(rb), c0 : c0 + len(cb)] = A.left_matrix(M[r, c])[np.ix_(rb, cb)]
            c0 += len(cb)
        r0 += len(rb)
    return out


# -- complexes ----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ProjComplex:
    algebra: Algebra
    terms: Mapping[int, Tuple[int, ...]]
    diffs: Mapping[int, np.ndarray]

    @classmethod
    def build(
        cls,
        algebra: Algebra,
        terms: Mapping[int, Sequence[int]],
        diffs: Optional[Mapping[int, np.ndarray]] = None,
    ) -> "ProjComplex":
        """Normalize: drop empty terms and zero differentials, check shapes."""
        F = algebra.field
        clean_terms: Dict[int, Tuple[int, ...]] = {}
        for degree, vertices in sorted(terms.items()):
            vertices = tuple(int(v) for v in vertices)
            for v in vertices:
                if not 0 <= v < algebra.n_idempotents:
                    raise ComplexValidationError(int(degree), None, f"vertex {v} out of range")
            if vertices:
                clean_terms[int(degree)] = vertices
        clean_diffs: Dict[int, np.ndarray] = {}
        for degree, matrix in (diffs or {}).items():
            degree = int(degree)
            rows = len(clean_terms.get(degree + 1, ()))
            cols = len(clean_terms.get(degree, ()))
            matrix = F.array(matrix)
            if rows == 0 or cols == 0:
                if matrix.size and not F.is_zero(matrix):
                    raise ComplexValidationError(degree, None, "nonzero differential next to an empty term")
                continue
            if matrix.shape != (rows, cols, algebra.dim):
                raise ComplexValidationError(
                    degree, None, f"differential shape {matrix.shape}, expected {(rows, cols, algebra.dim)}"
                )
            if not F.is_zero(matrix):
                clean_diffs[degree] = matrix
        return cls(algebra, clean_terms, clean_diffs)

    @classmethod
    def zero(cls, algebra: Algebra) -> "ProjComplex":
        return cls(algebra, {}, {})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def lo(self) -> int:
        return min(self.terms) if self.terms else 0

    @property
    def hi(self) -> int:
        return max(self.terms) if self.terms else -1

    @property
    def width(self) -> int:
        """``hi - lo``; the complex has ``width + 1`` possibly nonzero degrees."""
        return self.hi - self.lo if self.terms else 0

    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    def term(self, degree: int) -> Tuple[int, ...]:
        return self.terms.get(degree, ())

    def diff(self, degree: int) -> np.ndarray:
        matrix = self.diffs.get(degree)
        if matrix is not None:
            return matrix
        return amat_zeros(self.algebra, len(self.term(degree + 1)), len(self.term(degree)))

    def support(self) -> frozenset:
        return frozenset(v for vertices in self.terms.values() for v in vertices)

    def term_dim(self, degree: int) -> int:
        return sum(len(self.algebra.row_block(v)) for v in self.term(degree))

    def class_vector(self) -> List[int]:
        """``sum_d (-1)^d [X^d]`` in the Grothendieck group of projectives."""
        counts = [0] * self.algebra.n_idempotents
        for degree, vertices in self.terms.items():
            for v in vertices:
                counts[v] += -1 if degree % 2 else 1
        return counts

    def signature(self) -> Tuple[Tuple[int, Tuple[int, ...]], ...]:
        """Degreewise sorted term multisets; equal for isomorphic complexes."""
        return tuple((d, tuple(sorted(v))) for d, v in sorted(self.terms.items()))

    def equals(self, other: "ProjComplex") -> bool:
        if self.algebra is not other.algebra or dict(self.terms) != dict(other.terms):
            return False
        F = self.algebra.field
        return all(F.equal(self.diff(d), other.diff(d)) for d in self.terms)

    def is_minimal(self) -> bool:
        A = self.algebra
        for degree, matrix in self.diffs.items():
            rho = residue_matrix(A, matrix, self.term(degree + 1), self.term(degree))
            if not A.field.is_zero(rho):
                return False
        return True

    def __repr__(self) -> str:
        names = self.algebra.vertex_names
        body = ", ".join(
            f"{d}: {'+'.join(names[v] for v in vertices)}" for d, vertices in sorted(self.terms.items())
        )
        return f"ProjComplex({self.algebra.name}; {body or '0'})"


def validate(X: ProjComplex) -> None:
    """Check Peirce placement of every entry and ``d^{d+1} d^d = 0``."""
    A = X.algebra
    F = A.field
    slot_rows = np.array([s[0] for s in A.slots], dtype=np.intp)
    slot_cols = np.array([s[1] for s in A.slots], dtype=np.intp)
    for degree in sorted(X.diffs):
        matrix = X.diffs[degree]
        rows, cols = X.term(degree + 1), X.term(degree)
        for r, w in enumerate(rows):
            for c, v in enumerate(cols):
                outside = ~((slot_rows == w) & (slot_cols == v))
                if not F.is_zero(matrix[r, c][outside]):
                    raise ComplexValidationError(
                        degree,
                        (r, c),
                        f"entry is not in e_{A.vertex_names[w]} A e_{A.vertex_names[v]}",
                    )
    for degree in sorted(X.terms):
        square = amat_mul(A, X.diff(degree + 1), X.diff(degree))
        if not F.is_zero(square):
            r, c = (int(k) for k in np.argwhere(np.any(square != 0, axis=2))[0])
            raise ComplexValidationError(degree, (r, c), "d composed with d is nonzero")


def stalk(A: Algebra, vertices: Optional[Sequence[int]] = None, degree: int = 0) -> ProjComplex:
    """``(+)_v e_v A`` concentrated in one degree; all vertices by default."""
    chosen = tuple(range(A.n_idempotents)) if vertices is None else tuple(vertices)
    return ProjComplex.build(A, {degree: chosen})


def shift(X: ProjComplex, n: int) -> ProjComplex:
    sign = -1 if n % 2 else 1
    F = X.algebra.field
    terms = {d - n: v for d, v in X.terms.items()}
    diffs = {d - n: F.reduce(sign * m) for d, m in X.diffs.items()}
    return ProjComplex(X.algebra, terms, diffs)


@dataclass(frozen=True, eq=False)
class DirectSum:
    """A direct sum with its structure maps."""

    complex: ProjComplex
    parts: Tuple[ProjComplex, ...]
    offsets: Tuple[Dict[int, int], ...]

    def inclusion(self, k: int) -> "ChainMap":
        part = self.parts[k]
        A = part.algebra
        comps = {}
        for d, vertices in part.terms.items():
            m = amat_zeros(A, len(self.complex.term(d)), len(vertices))
            start = self.offsets[k][d]
            m[start : start + len(vertices)] = amat_identity(A, vertices)
            comps[d] = m
        return ChainMap.build(part, self.complex, comps)

    def projection(self, k: int) -> "ChainMap":
        part = self.parts[k]
        A = part.algebra
        comps = {}
        for d, vertices in part.terms.items():
            m = amat_zeros(A, len(vertices), len(self.complex.term(d)))
            start = self.offsets[k][d]
            m[:, start : start + len(vertices)] = amat_identity(A, vertices)
            comps[d] = m
        return ChainMap.build(self.complex, part, comps)

    def copair(self, maps: Sequence["ChainMap"]) -> "ChainMap":
        """The map out of the sum restricting to ``maps[k]`` on part ``k``."""
        if len(maps) != len(self.parts):
            raise ValueError(f"{len(maps)} maps for {len(self.parts)} summands")
        target = maps[0].target if maps else ProjComplex.zero(self.complex.algebra)
        degree = maps[0].degree if maps else 0
        A = self.complex.algebra
        comps = {}
        for d, vertices in self.complex.terms.items():
            m = amat_zeros(A, len(target.term(d + degree)), len(vertices))
            for k, f in enumerate(maps):
                if f.target is not target or f.degree != degree:
                    raise ValueError("copair needs maps with one target and one degree")
                width = len(self.parts[k].term(d))
                if width:
                    start = self.offsets[k][d]
                    m[:, start : start + width] = f.comp(d)
            comps[d] = m
        return ChainMap.build(self.complex, target, comps, degree)


def direct_sum_all(parts: Sequence[ProjComplex], algebra: Optional[Algebra] = None) -> DirectSum:
    if not parts and algebra is None:
        raise ValueError("empty direct sum needs an algebra")
    A = algebra if algebra is not None else parts[0].algebra
    for part in parts:
        if part.algebra is not A:
            raise ValueError("direct sum of complexes over different algebras")
    degrees = sorted({d for part in parts for d in part.terms})
    terms: Dict[int, Tuple[int, ...]] = {}
    offsets: List[Dict[int, int]] = [dict() for _ in parts]
    for d in degrees:
        row: List[int] = []
        for k, part in enumerate(parts):
            offsets[k][d] = len(row)
            row.extend(part.term(d))
        terms[d] = tuple(row)
    diffs = {}
    for d in degrees:
        grid = []
        for i, pi in enumerate(parts):
            grid.append([pi.diff(d) if i == j else None for j in range(len(parts))])
        diffs[d] = amat_blocks(A, grid, [len(p.term(d + 1)) for p in parts], [len(p.term(d)) for p in parts])
    return DirectSum(ProjComplex.build(A, terms, diffs), tuple(parts), tuple(offsets))


def direct_sum(X: ProjComplex, Y: ProjComplex) -> ProjComplex:
    return direct_sum_all([X, Y]).complex


# -- chain maps ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ChainMap:
    """Components ``comps[p] : X^p -> Y^{p + degree}`` as algebra matrices."""

    source: ProjComplex
    target: ProjComplex
    comps: Mapping[int, np.ndarray]
    degree: int = 0

    @classmethod
    def build(
        cls,
        source: ProjComplex,
        target: ProjComplex,
        comps: Mapping[int, np.ndarray],
        degree: int = 0,
    ) -> "ChainMap":
        if source.algebra is not target.algebra:
            raise ValueError("chain map between complexes over different algebras")
        A = source.algebra
        F = A.field
        clean = {}
        for p, matrix in comps.items():
            rows = len(target.term(p + degree))
            cols = len(source.term(p))
            if rows == 0 or cols == 0:
                continue
            matrix = F.array(matrix)
            if matrix.shape != (rows, cols, A.dim):
                raise ValueError(f"component {p} has shape {matrix.shape}, expected {(rows, cols, A.dim)}")
            if not F.is_zero(matrix):
                clean[int(p)] = matrix
        return cls(source, target, clean, degree)

    @property
    def algebra(self) -> Algebra:
        return self.source.algebra

    def comp(self, p: int) -> np.ndarray:
        matrix = self.comps.get(p)
        if matrix is not None:
            return matrix
        return amat_zeros(self.algebra, len(self.target.term(p + self.degree)), len(self.source.term(p)))

    def is_zero(self) -> bool:
        return not self.comps

    def equals(self, other: "ChainMap") -> bool:
        F = self.algebra.field
        degrees = set(self.comps) | set(other.comps)
        return self.degree == other.degree and all(F.equal(self.comp(p), other.comp(p)) for p in degrees)

    def boundary(self) -> Dict[int, np.ndarray]:
        """Components of ``d_Y f - (-1)^n f d_X``, keyed by source degree."""
        A = self.algebra
        F = A.field
        sign = -1 if self.degree % 2 else 1
        out = {}
        degrees = set(self.source.terms) | {p - 1 for p in self.source.terms}
        for p in sorted(degrees):
            value = F.reduce(
                amat_mul(A, self.target.diff(p + self.degree), self.comp(p))
                - sign * amat_mul(A, self.comp(p + 1), self.source.diff(p))
            )
            if value.size and not F.is_zero(value):
                out[p] = value
        return out

    def is_chain_map(self) -> bool:
        return not self.boundary()

    def __add__(self, other: "ChainMap") -> "ChainMap":
        self._check_parallel(other)
        F = self.algebra.field
        degrees = set(self.comps) | set(other.comps)
        return ChainMap.build(
            self.source, self.target, {p: F.reduce(self.comp(p) + other.comp(p)) for p in degrees}, self.degree
        )

    def __sub__(self, other: "ChainMap") -> "ChainMap":
        return self + other.scale(-1)

    def scale(self, value) -> "ChainMap":
        F = self.algebra.field
        s = F.scalar(value)
        return ChainMap.build(self.source, self.target, {p: F.reduce(s * m) for p, m in self.comps.items()}, self.degree)

    def _check_parallel(self, other: "ChainMap") -> None:
        if self.source is not other.source or self.target is not other.target or self.degree != other.degree:
            raise ValueError("maps are not parallel")

    def compose(self, other: "ChainMap") -> "ChainMap":
        """``self . other``: apply ``other`` first."""
        if other.target is not self.source:
            raise ValueError("composition endpoints do not match")
        A = self.algebra
        comps = {p: amat_mul(A, self.comp(p + other.degree), m) for p, m in other.comps.items()}
        return ChainMap.build(other.source, self.target, comps, self.degree + other.degree)

    def shift(self, n: int, source: Optional[ProjComplex] = None, target: Optional[ProjComplex] = None) -> "ChainMap":
        """``f[n]`` for a degree-zero map; pass the shifted complexes to keep identities."""
        if self.degree != 0:
            raise ValueError("only degree-zero maps are shifted")
        source = source if source is not None else shift(self.source, n)
        target = target if target is not None else shift(self.target, n)
        return ChainMap.build(source, target, {p - n: m for p, m in self.comps.items()})

    def as_degree_zero(self) -> "ChainMap":
        """A degree-``k`` map ``X -> Y`` read as a chain map ``X[-k] -> Y``."""
        k = self.degree
        source = shift(self.source, -k)
        return ChainMap.build(source, self.target, {p + k: m for p, m in self.comps.items()})

    def residues(self, p: int) -> np.ndarray:
        return residue_matrix(self.algebra, self.comp(p), self.target.term(p + self.degree), self.source.term(p))

    def is_degreewise_iso(self) -> bool:
        F = self.algebra.field
        degrees = set(self.source.terms) | {p - self.degree for p in self.target.terms}
        for p in degrees:
            rho = self.residues(p)
            if rho.shape[0] != rho.shape[1] or rank(F, rho) != rho.shape[0]:
                return False
        return True


def compose(f: ChainMap, g: ChainMap) -> ChainMap:
    """``f . g``."""
    return f.compose(g)


def identity_map(X: ProjComplex) -> ChainMap:
    return ChainMap.build(X, X, {d: amat_identity(X.algebra, v) for d, v in X.terms.items()})


def zero_map(X: ProjComplex, Y: ProjComplex, degree: int = 0) -> ChainMap:
    return ChainMap.build(X, Y, {}, degree)


# -- cones --------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Cone:
    """``X -f-> Y -inclusion-> C -projection-> X[1]``."""

    map: ChainMap
    complex: ProjComplex
    inclusion: ChainMap
    projection: ChainMap


def cone(f: ChainMap) -> Cone:
    if f.degree != 0:
        raise ValueError("cone needs a degree-zero chain map")
    X, Y = f.source, f.target
    A = X.algebra
    F = A.field
    degrees = sorted({d - 1 for d in X.terms} | set(Y.terms))
    terms = {d: X.term(d + 1) + Y.term(d) for d in degrees}
    diffs = {}
    for d in degrees:
        grid = [
            [F.reduce(-X.diff(d + 1)), None],
            [f.comp(d + 1), Y.diff(d)],
        ]
        diffs[d] = amat_blocks(
            A, grid, [len(X.term(d + 2)), len(Y.term(d + 1))], [len(X.term(d + 1)), len(Y.term(d))]
        )
    C = ProjComplex.build(A, terms, diffs)
    X1 = shift(X, 1)
    inclusion = {}
    projection = {}
    for d in degrees:
        width_x, ny = len(X.term(d + 1)), len(Y.term(d))
        inclusion[d] = amat_blocks(A, [[None], [amat_identity(A, Y.term(d))]], [width_x, ny], [ny])
        projection[d] = amat_blocks(A, [[amat_identity(A, X.term(d + 1)), None]], [width_x], [width_x, ny])
    return Cone(
        map=f,
        complex=C,
        inclusion=ChainMap.build(Y, C, inclusion),
        projection=ChainMap.build(C, X1, projection),
    )


# -- Hom complexes ------------------------------------------------------------


@dataclass(frozen=True)
class HomBlock:
    degree: int
    row: int
    col: int
    indices: np.ndarray
    offset: int


class HomComplex:
    """``Hom^n(X, Y) = prod_p Hom(X^p, Y^{p+n})`` in Peirce coordinates."""

    def __init__(self, source: ProjComplex, target: ProjComplex) -> None:
        if source.algebra is not target.algebra:
            raise ValueError("Hom complex between complexes over different algebras")
        self.source = source
        self.target = target
        self.algebra = source.algebra
        self._layouts: Dict[int, Tuple[List[HomBlock], int]] = {}
        self._differentials: Dict[int, np.ndarray] = {}

    def window(self) -> range:
        """Degrees in which the Hom complex can be nonzero."""
        if self.source.is_zero or self.target.is_zero:
            return range(0)
        return range(self.target.lo - self.source.hi, self.target.hi - self.source.lo + 1)

    def layout(self, n: int) -> List[HomBlock]:
        return self._layout(n)[0]

    def dim(self, n: int) -> int:
        return self._layout(n)[1]

    def _layout(self, n: int) -> Tuple[List[HomBlock], int]:
        cached = self._layouts.get(n)
        if cached is not None:
            return cached
        A = self.algebra
        blocks: List[HomBlock] = []
        offset = 0
        for p in sorted(self.source.terms):
            q = p + n
            if q not in self.target.terms:
                continue
            for r, w in enumerate(self.target.term(q)):
                for c, v in enumerate(self.source.term(p)):
                    indices = A.block(w, v)
                    if len(indices):
                        blocks.append(HomBlock(p, r, c, indices, offset))
                        offset += len(indices)
        self._layouts[n] = (blocks, offset)
        return blocks, offset

    def differential(self, n: int) -> np.ndarray:
        """Matrix of ``D : Hom^n -> Hom^{n+1}``."""
        cached = self._differentials.get(n)
        if cached is not None:
            return cached
        A = self.algebra
        F = A.field
        out = F.zeros((self.dim(n + 1), self.dim(n)))
        targets = {(b.degree, b.row, b.col): b for b in self.layout(n + 1)}
        sign = -1 if n % 2 else 1
        for block in self.layout(n):
            p, r, c = block.degree, block.row, block.col
            cols = slice(block.offset, block.offset + len(block.indices))
            d_y = self.target.diff(p + n)
            for r2 in range(d_y.shape[0]):
                x = d_y[r2, r]
                hit = targets.get((p, r2, c))
                if hit is None or F.is_zero(x):
                    continue
                rows = slice(hit.offset, hit.offset + len(hit.indices))
                out[rows, cols] = F.reduce(out[rows, cols] + A.left_matrix(x)[np.ix_(hit.indices, block.indices)])
            d_x = self.source.diff(p - 1)
            for c2 in range(d_x.shape[1]):
                x = d_x[c, c2]
                hit = targets.get((p - 1, r, c2))
                if hit is None or F.is_zero(x):
                    continue
                rows = slice(hit.offset, hit.offset + len(hit.indices))
                out[rows, cols] = F.reduce(
                    out[rows, cols] - sign * A.right_matrix(x)[np.ix_(hit.indices, block.indices)]
                )
        self._differentials[n] = out
        return out

    def vector(self, f: ChainMap) -> np.ndarray:
        if f.source is not self.source or f.target is not self.target:
            raise ValueError("map does not belong to this Hom complex")
        F = self.algebra.field
        out = F.zeros(self.dim(f.degree))
        for block in self.layout(f.degree):
            out[block.offset : block.offset + len(block.indices)] = f.comp(block.degree)[block.row, block.col, block.indices]
        return out

    def element(self, vector: np.ndarray, n: int) -> ChainMap:
        A = self.algebra
        comps: Dict[int, np.ndarray] = {}
        for block in self.layout(n):
            p = block.degree
            if p not in comps:
                comps[p] = amat_zeros(A, len(self.target.term(p + n)), len(self.source.term(p)))
            comps[p][block.row, block.col, block.indices] = vector[block.offset : block.offset + len(block.indices)]
        return ChainMap.build(self.source, self.target, comps, n)


def hom_complex(X: ProjComplex, Y: ProjComplex) -> HomComplex:
    return HomComplex(X, Y)


@dataclass(frozen=True, eq=False)
class HomotopyHomSpace:
    """``Hom_K(X, Y[n])`` with cycle representatives of a basis."""

    hom: HomComplex
    degree: int
    representatives: np.ndarray
    boundaries: np.ndarray

    @property
    def dim(self) -> int:
        return self.representatives.shape[1]

    @property
    def basis(self) -> List[ChainMap]:
        return [self.hom.element(self.representatives[:, k], self.degree) for k in range(self.dim)]

    def element(self, coords: np.ndarray) -> ChainMap:
        F = self.hom.algebra.field
        return self.hom.element(F.dot(self.representatives, F.array(coords)), self.degree)

    @cached_property
    def _coordinates(self) -> Coordinates:
        F = self.hom.algebra.field
        return Coordinates(F, hstack(F, [self.representatives, self.boundaries], self.hom.dim(self.degree)))

    def classify(self, f: ChainMap) -> Optional[np.ndarray]:
        """Coordinates of the class of ``f``, or ``None`` if ``f`` is not a chain map."""
        x = self._coordinates.of(self.hom.vector(f))
        return None if x is None else x[: self.dim]

    def is_null_homotopic(self, f: ChainMap) -> bool:
        coords = self.classify(f)
        return coords is not None and self.hom.algebra.field.is_zero(coords)

    def homotopy(self, f: ChainMap) -> Optional[ChainMap]:
        """``h`` of degree ``n - 1`` with ``D h = f``, if any."""
        F = self.hom.algebra.field
        x = solve(F, self.hom.differential(self.degree - 1), self.hom.vector(f))
        return None if x is None else self.hom.element(x, self.degree - 1)


def homotopy_hom(X: ProjComplex, Y: ProjComplex, n: int, hom: Optional[HomComplex] = None) -> HomotopyHomSpace:
    hom = hom if hom is not None else HomComplex(X, Y)
    F = X.algebra.field
    cycles = nullspace(F, hom.differential(n)) if hom.dim(n) else F.zeros((0, 0))
    boundaries = image_basis(F, hom.differential(n - 1)) if hom.dim(n) else F.zeros((0, 0))
    representatives = extend_basis(F, boundaries, cycles) if cycles.shape[1] else cycles
    return HomotopyHomSpace(hom, n, representatives, boundaries)


def hom_dimensions(X: ProjComplex, Y: ProjComplex, degrees: Optional[Iterable[int]] = None) -> Dict[int, int]:
    """``n -> dim Hom_K(X, Y[n])`` over the window (or the given degrees)."""
    hom = HomComplex(X, Y)
    chosen = hom.window() if degrees is None else degrees
    return {n: homotopy_hom(X, Y, n, hom).dim for n in chosen}


# -- minimization -------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Minimization:
    """``forward: X -> minimal`` and ``backward: minimal -> X``, mutually inverse up to homotopy."""

    source: ProjComplex
    complex: ProjComplex
    forward: ChainMap
    backward: ChainMap

    def verify(self) -> bool:
        """``forward . backward = id`` exactly and ``backward . forward ~ id``."""
        there = compose(self.forward, self.backward)
        if not there.equals(identity_map(self.complex)):
            return False
        back = compose(self.backward, self.forward) - identity_map(self.source)
        return homotopy_hom(self.source, self.source, 0).is_null_homotopic(back)


def _find_pivot(X: ProjComplex) -> Optional[Tuple[int, int, int]]:
    A = X.algebra
    F = A.field
    for degree in sorted(X.diffs):
        matrix = X.diffs[degree]
        rows, cols = X.term(degree + 1), X.term(degree)
        for c, v in enumerate(cols):
            for r, w in enumerate(rows):
                if v == w and not F.is_zero(A.residue_value(matrix[r, c], v)):
                    return degree, r, c
    return None


def _eliminate(X: ProjComplex, degree: int, r: int, c: int) -> Tuple[ProjComplex, ChainMap, ChainMap]:
    """Split off ``e_v A -phi-> e_v A`` at ``(degree, r, c)`` by Gaussian elimination."""
    A = X.algebra
    F = A.field
    d = degree
    cols, rows = X.term(d), X.term(d + 1)
    v = cols[c]
    matrix = X.diff(d)
    phi_inv = A.corner_inverse(matrix[r, c], v).reshape(1, 1, A.dim)
    keep_c = [j for j in range(len(cols)) if j != c]
    keep_r = [i for i in range(len(rows)) if i != r]
    delta = matrix[r : r + 1][:, keep_c]
    gamma = matrix[keep_r][:, c : c + 1]
    eps = matrix[np.ix_(keep_r, keep_c)]
    gamma_phi = amat_mul(A, gamma, phi_inv)
    phi_delta = amat_mul(A, phi_inv, delta)

    terms = dict(X.terms)
    terms[d] = tuple(cols[j] for j in keep_c)
    terms[d + 1] = tuple(rows[i] for i in keep_r)
    diffs = dict(X.diffs)
    diffs[d] = F.reduce(eps - amat_mul(A, gamma_phi, delta))
    diffs[d - 1] = X.diff(d - 1)[keep_c]
    diffs[d + 1] = X.diff(d + 1)[:, keep_r]
    reduced = ProjComplex.build(A, terms, diffs)

    forward = {p: amat_identity(A, vertices) for p, vertices in X.terms.items()}
    backward = dict(forward)
    f_d = amat_zeros(A, len(keep_c), len(cols))
    f_d[:, keep_c] = amat_identity(A, terms[d])
    f_next = amat_zeros(A, len(keep_r), len(rows))
    f_next[:, keep_r] = amat_identity(A, terms[d + 1])
    f_next[:, r : r + 1] = F.reduce(-gamma_phi)
    g_d = amat_zeros(A, len(cols), len(keep_c))
    g_d[keep_c] = amat_identity(A, terms[d])
    g_d[c : c + 1] = F.reduce(-phi_delta)
    g_next = amat_zeros(A, len(rows), len(keep_r))
    g_next[keep_r] = amat_identity(A, terms[d + 1])
    forward[d], forward[d + 1] = f_d, f_next
    backward[d], backward[d + 1] = g_d, g_next
    return reduced, ChainMap.build(X, reduced, forward), ChainMap.build(reduced, X, backward)


def minimize(X: ProjComplex) -> Minimization:
    """Eliminate every invertible differential entry until all entries are radical."""
    current = X
    forward = identity_map(X)
    backward = forward
    steps = 0
    while True:
        pivot = _find_pivot(current)
        if pivot is None:
            break
        current, f, g = _eliminate(current, *pivot)
        forward = compose(f, forward)
        backward = compose(backward, g)
        steps += 1
    if steps:
        logger.debug("minimize: %d contractible pairs removed, %s left", steps, current)
    return Minimization(X, current, forward, backward)


# -- k-linear cohomology ------------------------------------------------------


def klinear_differential(X: ProjComplex, degree: int) -> np.ndarray:
    return klinear(X.algebra, X.diff(degree), X.term(degree + 1), X.term(degree))


def klinear_map(f: ChainMap, p: int) -> np.ndarray:
    return klinear(f.algebra, f.comp(p), f.target.term(p + f.degree), f.source.term(p))


@dataclass(frozen=True, eq=False)
class CohomologyGroup:
    complex: ProjComplex
    degree: int
    representatives: np.ndarray
    boundaries: np.ndarray

    @property
    def dim(self) -> int:
        return self.representatives.shape[1]

    @cached_property
    def _coordinates(self) -> Coordinates:
        F = self.complex.algebra.field
        return Coordinates(F, hstack(F, [self.representatives, self.boundaries], self.complex.term_dim(self.degree)))

    def classify(self, v: np.ndarray) -> Optional[np.ndarray]:
        x = self._coordinates.of(v)
        return None if x is None else x[: self.dim]


def cohomology(X: ProjComplex, degree: int) -> CohomologyGroup:
    F = X.algebra.field
    size = X.term_dim(degree)
    if size == 0:
        empty = F.zeros((0, 0))
        return CohomologyGroup(X, degree, empty, empty)
    outgoing = klinear_differential(X, degree)
    cycles = nullspace(F, outgoing) if outgoing.shape[0] else F.eye(size)
    incoming = klinear_differential(X, degree - 1)
    boundaries = image_basis(F, incoming) if incoming.shape[1] else F.zeros((size, 0))
    representatives = extend_basis(F, boundaries, cycles) if cycles.shape[1] else cycles
    return CohomologyGroup(X, degree, representatives, boundaries)


def cohomology_dims(X: ProjComplex) -> Dict[int, int]:
    """``d -> dim_k H^d(X)`` over the support of ``X``."""
    return {d: cohomology(X, d).dim for d in X.degrees()}


def induced_cohomology_map(f: ChainMap, degree: int) -> np.ndarray:
    """Matrix of ``H^d(f) : H^d(X) -> H^d(Y)`` in the representative bases."""
    if f.degree != 0:
        raise ValueError("cohomology maps need a degree-zero chain map")
    F = f.algebra.field
    source = cohomology(f.source, degree)
    target = cohomology(f.target, degree)
    out = F.zeros((target.dim, source.dim))
    if source.dim == 0 or target.dim == 0:
        return out
    images = F.dot(klinear_map(f, degree), source.representatives)
    for k in range(source.dim):
        coords = target.classify(images[:, k])
        if coords is None:
            raise ValueError("map does not send cycles to cycles")
        out[:, k] = coords
    return out


# -- brute-force oracle -------------------------------------------------------


class HomotopyOracle:
    """Homotopy-category Hom computed from A-linear maps between the expanded terms.

    Independent of the Peirce-coordinate Hom complex: module maps come from
    :func:`hom_module` and the differential acts on full k-linear matrices.
    """

    def __init__(self, source: ProjComplex, target: ProjComplex) -> None:
        self.source = source
        self.target = target
        self.algebra = source.algebra
        self._modules: Dict[Tuple[str, int], ModuleRep] = {}

    def _module(self, side: str, degree: int) -> ModuleRep:
        key = (side, degree)
        if key not in self._modules:
            complex_ = self.source if side == "source" else self.target
            self._modules[key] = projective_module(self.algebra, complex_.term(degree))
        return self._modules[key]

    def _pieces(self, n: int) -> List[Tuple[int, int, int]]:
        """(source degree, rows, cols) of the k-linear blocks in degree ``n``."""
        out = []
        for p in sorted(self.source.terms):
            q = p + n
            if q in self.target.terms:
                out.append((p, self.target.term_dim(q), self.source.term_dim(p)))
        return out

    def _parameters(self, n: int) -> np.ndarray:
        """Columns: stacked row-major vecs of a basis of ``prod_p Hom_A(X^p, Y^{p+n})``."""
        F = self.algebra.field
        pieces = self._pieces(n)
        total = sum(r * c for _, r, c in pieces)
        columns = []
        offset = 0
        for p, r, c in pieces:
            for phi in hom_module(self.algebra, self._module("source", p), self._module("target", p + n)):
                column = F.zeros(total)
                column[offset : offset + r * c] = phi.reshape(-1)
                columns.append(column)
            offset += r * c
        if not columns:
            return F.zeros((total, 0))
        return np.column_stack(columns)

    def _apply_d(self, n: int, stacked: np.ndarray) -> np.ndarray:
        """``D`` on one stacked degree-``n`` vector, landing in degree ``n + 1``."""
        F = self.algebra.field
        sign = -1 if n % 2 else 1
        blocks: Dict[int, np.ndarray] = {}
        offset = 0
        for p, r, c in self._pieces(n):
            blocks[p] = stacked[offset : offset + r * c].reshape(r, c)
            offset += r * c
        out = []
        for p, r, c in self._pieces(n + 1):
            value = F.zeros((r, c))
            if p in blocks:
                value = value + F.dot(klinear_differential(self.target, p + n), blocks[p])
            if p + 1 in blocks:
                value = value - sign * F.dot(blocks[p + 1], klinear_differential(self.source, p))
            out.append(F.reduce(value).reshape(-1))
        if not out:
            return F.zeros(0)
        return np.concatenate(out)

    def _d_matrix(self, n: int, params: np.ndarray) -> np.ndarray:
        F = self.algebra.field
        size = sum(r * c for _, r, c in self._pieces(n + 1))
        if params.shape[1] == 0:
            return F.zeros((size, 0))
        return np.column_stack([self._apply_d(n, params[:, k]) for k in range(params.shape[1])])

    def cycles_and_boundaries(self, n: int) -> Tuple[np.ndarray, np.ndarray]:
        F = self.algebra.field
        params = self._parameters(n)
        d_here = self._d_matrix(n, params)
        coeffs = nullspace(F, d_here) if d_here.shape[0] else F.eye(params.shape[1])
        cycles = F.dot(params, coeffs) if params.shape[1] else params
        below = self._parameters(n - 1)
        boundaries = self._d_matrix(n - 1, below)
        return cycles, boundaries

    def dim(self, n: int) -> int:
        cycles, boundaries = self.cycles_and_boundaries(n)
        F = self.algebra.field
        return rank(F, cycles) - rank(F, boundaries)

    def stacked(self, f: ChainMap) -> np.ndarray:
        F = self.algebra.field
        parts = []
        for p, r, c in self._pieces(f.degree):
            parts.append(klinear_map(f, p).reshape(-1))
        return np.concatenate(parts) if parts else F.zeros(0)

    def same_span(self, space: HomotopyHomSpace) -> bool:
        """Whether the representatives of ``space`` span the same classes as the oracle."""
        F = self.algebra.field
        cycles, boundaries = self.cycles_and_boundaries(space.degree)
        size = cycles.shape[0]
        converted = [self.stacked(f).reshape(-1, 1) for f in space.basis]
        reps = hstack(F, converted, size)
        oracle_rank = rank(F, hstack(F, [boundaries, cycles], size))
        ours = rank(F, hstack(F, [boundaries, reps], size))
        joint = rank(F, hstack(F, [boundaries, cycles, reps], size))
        return ours == oracle_rank == joint and ours - rank(F, boundaries) == space.dim


# -- projective resolutions ---------------------------------------------------


@dataclass(frozen=True, eq=False)
class Resolution:
    """``P_i`` in degree ``-i`` and the augmentation ``P_0 -> M`` as a k-matrix."""

    complex: ProjComplex
    augmentation: np.ndarray
    module: ModuleRep


def projective_resolution(A: Algebra, M: ModuleRep, length: int) -> Resolution:
    """Minimal projective resolution ``P_length -> ... -> P_0 -> M``."""
    F = A.field
    if length < 0:
        raise ValueError("resolution length must be non-negative")
    terms: Dict[int, Tuple[int, ...]] = {}
    diffs: Dict[int, np.ndarray] = {}
    augmentation = F.zeros((M.dim, 0))
    current = M
    embed: Optional[np.ndarray] = None
    previous: Tuple[int, ...] = ()
    for i in range(length + 1):
        if current.dim == 0:
            break
        generators = top_and_min_generators(A, current).generators()
        vertices = tuple(v for v, _ in generators)
        columns = []
        for v, g in generators:
            for b in A.row_block(v):
                columns.append(current.act(g, A.basis_vector(int(b))))
        cover = np.column_stack(columns)
        if i == 0:
            augmentation = cover
        else:
            d = amat_zeros(A, len(previous), len(vertices))
            blocks = projective_offsets(A, previous)
            for t, (_, g) in enumerate(generators):
                element = F.dot(embed, g)
                for c, (start, indices) in enumerate(blocks):
                    d[c, t, indices] = element[start : start + len(indices)]
            diffs[-i] = d
        terms[-i] = vertices
        kernel = nullspace(F, cover)
        if kernel.shape[1] == 0:
            break
        current = projective_module(A, vertices).submodule(kernel)
        embed = kernel
        previous = vertices
    complex_ = ProjComplex.build(A, terms, diffs)
    logger.debug("projective resolution: %s", complex_)
    return Resolution(complex_, augmentation, M)

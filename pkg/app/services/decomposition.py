"""Krull-Schmidt decomposition of minimal complexes and isomorphism tests.

Endomorphisms of a minimal complex are read modulo the radical through
their residue matrices: ``rho(phi)`` keeps the residues of same-vertex
entries, degree by degree. A chain map between minimal complexes is an
isomorphism exactly when every ``rho`` block is invertible.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from ..config import DEFAULT_SEARCH, SearchSettings
from .algebra import Algebra, primitive_idempotents, radical_by_representation
from .complexes import (
    ChainMap,
    HomComplex,
    ProjComplex,
    amat_inverse,
    amat_mul,
    compose,
    identity_map,
    minimize,
    residue_matrix,
)
from .exactlin import Coordinates, nullspace, rref

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class StrictEnd:
    """Chain maps ``X -> X`` (no homotopy quotient) as an algebra under composition."""

    complex: ProjComplex
    hom: HomComplex
    cycles: np.ndarray
    algebra: Algebra

    def element(self, coords: np.ndarray) -> ChainMap:
        F = self.complex.algebra.field
        return self.hom.element(F.dot(self.cycles, coords), 0)

    def residues(self, f: ChainMap) -> np.ndarray:
        return block_residues(self.complex, f)


def block_residues(X: ProjComplex, f: ChainMap) -> np.ndarray:
    """Block diagonal of ``rho(f^d)`` over the degrees of ``X``."""
    F = X.algebra.field
    size = sum(len(v) for v in X.terms.values())
    out = F.zeros((size, size))
    start = 0
    for d, vertices in sorted(X.terms.items()):
        width = len(vertices)
        out[start : start + width, start : start + width] = f.residues(d)
        start += width
    return out


def strict_end(X: ProjComplex) -> StrictEnd:
    A = X.algebra
    F = A.field
    hom = HomComplex(X, X)
    cycles = nullspace(F, hom.differential(0)) if hom.dim(0) else F.zeros((0, 0))
    m = cycles.shape[1]
    coordinates = Coordinates(F, cycles)
    maps = [hom.element(cycles[:, k], 0) for k in range(m)]
    table = F.zeros((m, m, m))
    for i in range(m):
        for j in range(m):
            table[i, j] = coordinates.require(hom.vector(compose(maps[i], maps[j])))
    unit = coordinates.require(hom.vector(identity_map(X)))

    radical = radical_by_representation(F, [block_residues(X, f) for f in maps])
    algebra = Algebra(
        field=F,
        labels=tuple(f"phi{k}" for k in range(m)),
        table=table,
        idempotents=(unit,),
        slots=((0, 0),) * m,
        vertex_names=("X",),
        name=f"End({A.name} complex)",
        radical_hint=radical,
    )
    return StrictEnd(X, hom, cycles, algebra)


@dataclass(frozen=True, eq=False)
class Summand:
    complex: ProjComplex
    inclusion: ChainMap
    projection: ChainMap


@dataclass(frozen=True, eq=False)
class Decomposition:
    """Indecomposable summands of a minimal complex grouped by isomorphism type."""

    complex: ProjComplex
    summands: Tuple[Summand, ...]
    types: Tuple[Tuple[int, ...], ...]

    @property
    def n_types(self) -> int:
        return len(self.types)

    def type_of(self, k: int) -> int:
        for t, members in enumerate(self.types):
            if k in members:
                return t
        raise IndexError(k)

    def multiplicities(self) -> List[Tuple[ProjComplex, int]]:
        return [(self.summands[members[0]].complex, len(members)) for members in self.types]


def _split(X: ProjComplex, eps: ChainMap) -> Summand:
    """Image of an idempotent chain map, with split inclusion and projection."""
    A = X.algebra
    F = A.field
    terms, diffs, iota, pi = {}, {}, {}, {}
    for d, vertices in X.terms.items():
        e = eps.comp(d)
        rho = residue_matrix(A, e, vertices, vertices)
        _, columns = rref(F, rho)
        if not columns:
            continue
        _, rows = rref(F, rho[:, columns].T)
        chosen = e[:, columns]
        square = e[np.ix_(rows, columns)]
        inv = amat_inverse(A, square, [vertices[r] for r in rows], [vertices[c] for c in columns])
        terms[d] = tuple(vertices[c] for c in columns)
        iota[d] = chosen
        pi[d] = amat_mul(A, inv, e[rows])
    for d in terms:
        if d + 1 in terms:
            diffs[d] = amat_mul(A, amat_mul(A, pi[d + 1], X.diff(d)), iota[d])
    Z = ProjComplex.build(A, terms, diffs)
    return Summand(Z, ChainMap.build(Z, X, iota), ChainMap.build(X, Z, pi))


def indecomposables_isomorphic(Z1: ProjComplex, Z2: ProjComplex) -> bool:
    """Exact test for indecomposable minimal complexes.

    ``End(Z1)`` is local, so ``Z1 = Z2`` iff some composite ``g . f`` of basis
    chain maps ``f : Z1 -> Z2`` and ``g : Z2 -> Z1`` is an isomorphism.
    """
    if Z1.signature() != Z2.signature():
        return False
    if Z1.is_zero:
        return True
    F = Z1.algebra.field
    there, back = HomComplex(Z1, Z2), HomComplex(Z2, Z1)
    if there.dim(0) == 0 or back.dim(0) == 0:
        return False
    fs = nullspace(F, there.differential(0))
    gs = nullspace(F, back.differential(0))
    forward = [there.element(fs[:, k], 0) for k in range(fs.shape[1])]
    backward = [back.element(gs[:, k], 0) for k in range(gs.shape[1])]
    for f in forward:
        for g in backward:
            if compose(g, f).is_degreewise_iso():
                return True
    return False


def _summand_key(summand: Summand):
    Z = summand.complex
    return (Z.lo, Z.hi, Z.signature())


def decompose(X: ProjComplex, search: SearchSettings = DEFAULT_SEARCH) -> Decomposition:
    """Split a complex into indecomposables; non-minimal input is minimized first."""
    if not X.is_minimal():
        logger.debug("decompose: minimizing %s first", X)
        X = minimize(X).complex
    if X.is_zero:
        return Decomposition(X, (), ())
    end = strict_end(X)
    E = end.algebra
    if E.dim - E.radical().shape[1] == 1:
        identity = identity_map(X)
        summands = [Summand(X, identity, identity)]
    else:
        idempotents = primitive_idempotents(E, search)
        summands = [_split(X, end.element(eps)) for eps in idempotents]
        summands.sort(key=_summand_key)

    groups: List[List[int]] = []
    for k, summand in enumerate(summands):
        for group in groups:
            if indecomposables_isomorphic(summands[group[0]].complex, summand.complex):
                group.append(k)
                break
        else:
            groups.append([k])
    result = Decomposition(X, tuple(summands), tuple(tuple(g) for g in groups))
    logger.debug("decompose: %d summands in %d types", len(summands), len(groups))
    return result


def decompose_parts(parts: Sequence[ProjComplex], search: SearchSettings = DEFAULT_SEARCH) -> List[Decomposition]:
    return [decompose(part, search) for part in parts]


def _same_decomposition(X: ProjComplex, Y: ProjComplex, search: SearchSettings) -> bool:
    left, right = decompose(X, search), decompose(Y, search)
    if sorted(len(t) for t in left.types) != sorted(len(t) for t in right.types):
        return False
    unmatched = list(range(right.n_types))
    for members in left.types:
        Z = left.summands[members[0]].complex
        for t in unmatched:
            other = right.types[t]
            if len(other) == len(members) and indecomposables_isomorphic(Z, right.summands[other[0]].complex):
                unmatched.remove(t)
                break
        else:
            return False
    return not unmatched


def iso_test(X: ProjComplex, Y: ProjComplex, search: SearchSettings = DEFAULT_SEARCH) -> bool:
    """Whether some chain map ``X -> Y`` is a degreewise isomorphism.

    Unit coefficient vectors are tried first, then seeded random elements
    over F_p or points on the moment curve over the rationals. If none is
    invertible there is no enumeration of coefficient vectors: the answer is
    decided exactly by matching indecomposable types and multiplicities.
    """
    if X.algebra is not Y.algebra:
        return False
    if not X.is_minimal():
        X = minimize(X).complex
    if not Y.is_minimal():
        Y = minimize(Y).complex
    if X.signature() != Y.signature():
        return False
    if X.is_zero:
        return True
    F = X.algebra.field
    hom = HomComplex(X, Y)
    if hom.dim(0) == 0:
        return False
    cycles = nullspace(F, hom.differential(0))
    m = cycles.shape[1]
    if m == 0:
        return False

    def works(coeffs: np.ndarray) -> bool:
        return hom.element(F.dot(cycles, coeffs), 0).is_degreewise_iso()

    for k in range(m):
        if works(F.unit_vector(m, k)):
            return True
    rng = np.random.default_rng(search.seed)
    for trial in range(search.sampling_trials):
        if F.characteristic:
            coeffs = F.random(rng, m)
        else:
            coeffs = F.array([(trial + 2) ** k for k in range(m)])
        if works(coeffs):
            return True
    logger.debug("iso_test: sampling inconclusive on %d maps, comparing decompositions", m)
    return _same_decomposition(X, Y, search)


def idempotent_map(X: ProjComplex, summand: Summand) -> ChainMap:
    """``inclusion . projection``, the strict idempotent of a summand."""
    return compose(summand.inclusion, summand.projection)


"""Finite-dimensional right modules given by action matrices."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .algebra import Algebra, NonSplitError
from .exactlin import Coordinates, complement_indices, extend_basis, hstack, image_basis, kron, nullspace, rref

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ModuleRep:
    """Right module with ``coords(m . b_a) = action[a] @ coords(m)``."""

    algebra: Algebra
    action: np.ndarray

    @property
    def dim(self) -> int:
        return self.action.shape[1] if self.action.ndim == 3 else 0

    def element_matrix(self, x: np.ndarray) -> np.ndarray:
        F = self.algebra.field
        if self.algebra.dim == 0:
            return F.zeros((self.dim, self.dim))
        return F.reduce(np.tensordot(x, self.action, axes=(0, 0)))

    def act(self, m: np.ndarray, x: np.ndarray) -> np.ndarray:
        return self.algebra.field.dot(self.element_matrix(x), m)

    def validate(self) -> None:
        A = self.algebra
        F = A.field
        if not F.equal(self.element_matrix(A.unit), F.eye(self.dim)):
            raise ValueError("unit does not act as the identity")
        for a in range(A.dim):
            for b in range(A.dim):
                product = A.multiply(A.basis_vector(a), A.basis_vector(b))
                expected = F.dot(self.action[b], self.action[a])
                if not F.equal(self.element_matrix(product), expected):
                    raise ValueError(f"action fails on ({A.labels[a]}, {A.labels[b]})")

    def submodule(self, basis: np.ndarray) -> "ModuleRep":
        """The submodule spanned by ``basis`` columns, which must be stable."""
        F = self.algebra.field
        coords = Coordinates(F, basis)
        k = basis.shape[1]
        action = F.zeros((self.algebra.dim, k, k))
        for a in range(self.algebra.dim):
            image = coords.of(F.dot(self.action[a], basis))
            if image is None:
                raise ValueError("span is not a submodule")
            action[a] = image
        return ModuleRep(self.algebra, action)

    def quotient(self, sub: np.ndarray) -> Tuple["ModuleRep", np.ndarray]:
        """``M / sub`` on a complement of unit vectors, with the projection."""
        F = self.algebra.field
        sub = image_basis(F, sub) if sub.size else F.zeros((self.dim, 0))
        keep = complement_indices(F, sub, self.dim)
        projection = F.zeros((len(keep), self.dim))
        for k, b in enumerate(keep):
            projection[k, b] = F.scalar(1)
        if sub.shape[1]:
            reduced, pivots = rref(F, sub.T)
            for r, p in enumerate(pivots):
                projection[:, p] = F.reduce(-reduced[r, keep])
        section = F.eye(self.dim)[:, keep]
        action = F.zeros((self.algebra.dim, len(keep), len(keep)))
        for a in range(self.algebra.dim):
            action[a] = F.dot(F.dot(projection, self.action[a]), section)
        return ModuleRep(self.algebra, action), projection


def regular_module(A: Algebra) -> ModuleRep:
    action = np.stack([A.right_matrix(A.basis_vector(a)) for a in range(A.dim)]) if A.dim else A.field.zeros((0, 0, 0))
    return ModuleRep(A, action)


def projective_module(A: Algebra, vertices: Sequence[int]) -> ModuleRep:
    """``(+)_t e_{v_t} A`` with basis ordered generator by generator."""
    F = A.field
    rows = [A.row_block(v) for v in vertices]
    size = sum(len(r) for r in rows)
    action = F.zeros((A.dim, size, size))
    for a in range(A.dim):
        right = A.right_matrix(A.basis_vector(a))
        offset = 0
        for r in rows:
            action[a, offset : offset + len(r), offset : offset + len(r)] = right[np.ix_(r, r)]
            offset += len(r)
    return ModuleRep(A, action)


def projective_offsets(A: Algebra, vertices: Sequence[int]) -> List[Tuple[int, np.ndarray]]:
    """(offset, basis indices) of each generator inside ``projective_module``."""
    out = []
    offset = 0
    for v in vertices:
        rows = A.row_block(v)
        out.append((offset, rows))
        offset += len(rows)
    return out


def algebra_generators(A: Algebra) -> List[np.ndarray]:
    """Idempotents plus a lift of ``rad / rad^2``; they generate ``A``."""
    F = A.field
    rad = A.radical()
    if rad.shape[1] == 0:
        return [A.basis_vector(b) for b in range(A.dim)]
    square = A.product_space(rad, rad)
    lifts = extend_basis(F, square, rad)
    gens = list(A.idempotents)
    gens.extend(lifts[:, k] for k in range(lifts.shape[1]))
    return gens


def hom_module(A: Algebra, M: ModuleRep, N: ModuleRep) -> List[np.ndarray]:
    """Basis of ``Hom_A(M, N)`` as ``dim N x dim M`` matrices."""
    F = A.field
    if M.algebra is not N.algebra:
        raise ValueError("modules over different algebras")
    m, n = M.dim, N.dim
    if m == 0 or n == 0:
        return []
    blocks = []
    for x in algebra_generators(A):
        # Row-major vec: vec(phi M_x) = (I kron M_x^T) vec(phi), vec(N_x phi) = (N_x kron I) vec(phi).
        blocks.append(
            F.reduce(kron(F, F.eye(n), M.element_matrix(x).T) - kron(F, N.element_matrix(x), F.eye(m)))
        )
    solutions = nullspace(F, np.vstack(blocks))
    return [solutions[:, k].reshape(n, m) for k in range(solutions.shape[1])]


@dataclass(frozen=True, eq=False)
class SimpleTop:
    idempotent: int
    members: Tuple[int, ...]
    multiplicity: int
    generators: np.ndarray


@dataclass(frozen=True, eq=False)
class TopDecomposition:
    tops: Tuple[SimpleTop, ...]
    radical_part: np.ndarray

    @property
    def dimension(self) -> int:
        return sum(t.multiplicity * len(t.members) for t in self.tops)

    def per_type(self) -> List[Tuple[int, int]]:
        return [(t.idempotent, t.multiplicity) for t in self.tops]

    def generators(self) -> List[Tuple[int, np.ndarray]]:
        """(idempotent, generator) pairs in a fixed order."""
        out = []
        for t in self.tops:
            for k in range(t.generators.shape[1]):
                out.append((t.idempotent, t.generators[:, k]))
        return out


def top_and_min_generators(
    A: Algebra,
    M: ModuleRep,
    classes: Optional[Sequence[Sequence[int]]] = None,
) -> TopDecomposition:
    """``M / M rad`` split by simple type, with minimal generators lifting a basis."""
    F = A.field
    if M.algebra is not A:
        raise ValueError("module over a different algebra")
    rad = A.radical()
    images = [M.element_matrix(rad[:, c]) for c in range(rad.shape[1])]
    radical_part = image_basis(F, hstack(F, images, M.dim)) if M.dim else F.zeros((0, 0))
    groups = classes if classes is not None else A.idempotent_classes

    tops: List[SimpleTop] = []
    for members in groups:
        rep = members[0]
        e = M.element_matrix(A.idempotents[rep])
        corner = image_basis(F, e) if M.dim else F.zeros((0, 0))
        corner_rad = F.dot(e, radical_part) if radical_part.shape[1] else F.zeros((M.dim, 0))
        generators = extend_basis(F, corner_rad, corner) if corner.shape[1] else corner
        if generators.shape[1]:
            tops.append(SimpleTop(rep, tuple(members), generators.shape[1], generators))

    result = TopDecomposition(tuple(tops), radical_part)
    if result.dimension != M.dim - radical_part.shape[1]:
        raise NonSplitError(M.dim - radical_part.shape[1], F.name)
    logger.debug("top of a %d-dimensional module: %s", M.dim, result.per_type())
    return result

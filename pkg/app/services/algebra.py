"""Finite-dimensional algebras given by structure constants.

Paths compose left to right: a path from vertex i to vertex j lies in
``e_i A e_j``, and ``Hom_A(e_i A, e_j A)`` is ``e_j A e_i`` acting by left
multiplication. Every algebra carries a complete list of orthogonal
idempotents and a Peirce-adapted basis: basis element ``b`` satisfies
``e_i b e_j = b`` for exactly one slot ``(i, j)``.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction
from functools import cached_property
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
from sympy import Matrix, Poly, Rational, symbols

from ..config import DEFAULT_SEARCH, SearchSettings
from .exactlin import (
    Field,
    complement_indices,
    image_basis,
    nullspace,
    rank,
    rref,
    solve,
)

logger = logging.getLogger(__name__)

NEWTON_MAX_STEPS = 64
SYMBOLIC_DET_MAX_DIM = 12
EXHAUSTIVE_FORM_LIMIT = 4096


class PresentationError(ValueError):
    """Raised for malformed quivers, relations or non-admissible ideals."""


class StructureError(ValueError):
    """Raised when structure constants violate the algebra axioms."""


class RadicalError(RuntimeError):
    """Raised when the radical cannot be computed in the given characteristic."""


class NonSplitError(RuntimeError):
    """Raised when a semisimple quotient does not split over the ground field."""

    def __init__(self, component_dim: int, field_name: str) -> None:
        super().__init__(
            f"semisimple component of dimension {component_dim} does not split over {field_name}"
        )
        self.component_dim = component_dim


@dataclass(frozen=True)
class Arrow:
    label: str
    source: str
    target: str


# A relation term is (coefficient, arrow labels); coefficients are field scalars.
Term = Tuple[Any, Tuple[str, ...]]


@dataclass(frozen=True)
class QuiverPresentation:
    field: Field
    vertices: Tuple[str, ...]
    arrows: Tuple[Arrow, ...]
    relations: Tuple[Tuple[Term, ...], ...]
    bound: int
    name: str = "algebra"

    def graph(self) -> nx.MultiDiGraph:
        graph = nx.MultiDiGraph()
        graph.add_nodes_from(self.vertices)
        for arrow in self.arrows:
            graph.add_edge(arrow.source, arrow.target, key=arrow.label)
        return graph

    def path_endpoints(self, word: Sequence[str]) -> Tuple[str, str]:
        """Source and target of a composable arrow word."""
        arrows = {a.label: a for a in self.arrows}
        try:
            steps = [arrows[label] for label in word]
        except KeyError as exc:
            raise PresentationError(f"unknown arrow {exc.args[0]!r}") from None
        for left, right in zip(steps, steps[1:]):
            if left.target != right.source:
                raise PresentationError(
                    f"path '{' '.join(word)}' is not composable at '{left.label} {right.label}'"
                )
        return steps[0].source, steps[-1].target


@dataclass(frozen=True)
class Embedding:
    """How a corner algebra sits inside its parent."""

    parent: "Algebra"
    basis: Tuple[int, ...]
    vertices: Tuple[int, ...]


@dataclass(frozen=True)
class LinearForm:
    coefficients: np.ndarray

    def __call__(self, field: Field, x: np.ndarray) -> Any:
        return field.dot(self.coefficients, x)


@dataclass(frozen=True, eq=False)
class Algebra:
    """Structure constants ``b_i b_j = sum_k table[i, j, k] b_k``."""

    field: Field
    labels: Tuple[str, ...]
    table: np.ndarray
    idempotents: Tuple[np.ndarray, ...]
    slots: Tuple[Tuple[int, int], ...]
    vertex_names: Tuple[str, ...]
    name: str = "A"
    radical_hint: Optional[np.ndarray] = None
    presentation: Optional[QuiverPresentation] = None
    symbols: Mapping[str, int] = dataclass_field(default_factory=dict)
    origin: Optional[Embedding] = None

    @property
    def dim(self) -> int:
        return len(self.labels)

    @property
    def n_idempotents(self) -> int:
        return len(self.idempotents)

    @cached_property
    def unit(self) -> np.ndarray:
        total = self.field.zeros(self.dim)
        for e in self.idempotents:
            total = total + e
        return self.field.reduce(total)

    def zero(self) -> np.ndarray:
        return self.field.zeros(self.dim)

    def basis_vector(self, index: int) -> np.ndarray:
        return self.field.unit_vector(self.dim, index)

    def multiply(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        if len(x) != self.dim or len(y) != self.dim:
            raise ValueError(f"elements of length {len(x)}, {len(y)} in an algebra of dim {self.dim}")
        if self.dim == 0:
            return self.zero()
        left = self.field.reduce(np.tensordot(x, self.table, axes=(0, 0)))
        return self.field.dot(y, left)

    def left_matrix(self, x: np.ndarray) -> np.ndarray:
        """Matrix of ``y -> x y`` in basis coordinates."""
        return self.field.reduce(np.tensordot(x, self.table, axes=(0, 0)).T)

    def right_matrix(self, x: np.ndarray) -> np.ndarray:
        """Matrix of ``y -> y x`` in basis coordinates."""
        return self.field.reduce(np.tensordot(self.table, x, axes=(1, 0)).T)

    @cached_property
    def _blocks(self) -> Dict[Tuple[int, int], np.ndarray]:
        blocks: Dict[Tuple[int, int], List[int]] = {}
        for index, slot in enumerate(self.slots):
            blocks.setdefault(slot, []).append(index)
        return {slot: np.array(indices, dtype=np.intp) for slot, indices in blocks.items()}

    def block(self, i: int, j: int) -> np.ndarray:
        """Indices of the basis elements lying in ``e_i A e_j``."""
        if not (0 <= i < self.n_idempotents and 0 <= j < self.n_idempotents):
            raise IndexError(f"idempotent pair ({i}, {j}) out of range")
        return self._blocks.get((i, j), np.zeros(0, dtype=np.intp))

    def row_block(self, i: int) -> np.ndarray:
        """Indices spanning ``e_i A``."""
        return np.array([b for b, slot in enumerate(self.slots) if slot[0] == i], dtype=np.intp)

    def in_block(self, x: np.ndarray, i: int, j: int) -> bool:
        mask = np.ones(self.dim, dtype=bool)
        mask[self.block(i, j)] = False
        return self.field.is_zero(x[mask])

    def radical(self) -> np.ndarray:
        return self._radical

    @cached_property
    def _radical(self) -> np.ndarray:
        if self.radical_hint is not None:
            return self.radical_hint
        return radical_by_trace_form(self)

    @cached_property
    def _residues(self) -> Dict[int, np.ndarray]:
        return {}

    def residue(self, i: int) -> np.ndarray:
        """The functional ``e_i A e_i -> e_i A e_i / rad = k`` normalized at ``e_i``."""
        cached = self._residues.get(i)
        if cached is not None:
            return cached
        F = self.field
        idx = self.block(i, i)
        rad = self.radical()
        e = self.idempotents[i]
        corner_rad = F.zeros((len(idx), rad.shape[1]))
        for c in range(rad.shape[1]):
            corner_rad[:, c] = self.multiply(self.multiply(e, rad[:, c]), e)[idx]
        corner_rad = image_basis(F, corner_rad)
        if len(idx) - corner_rad.shape[1] != 1:
            raise NonSplitError(len(idx) - corner_rad.shape[1], F.name)
        if corner_rad.shape[1]:
            w = nullspace(F, corner_rad.T)[:, 0]
        else:
            w = F.array([1])
        w = F.reduce(w * F.inverse(F.dot(w, e[idx])))
        full = F.zeros(self.dim)
        full[idx] = w
        self._residues[i] = full
        return full

    def residue_value(self, x: np.ndarray, i: int) -> Any:
        return self.field.dot(self.residue(i), x)

    def corner_inverse(self, x: np.ndarray, i: int) -> np.ndarray:
        """``y`` in ``e_i A e_i`` with ``x y = e_i``."""
        idx = self.block(i, i)
        columns = self.field.zeros((self.dim, len(idx)))
        for k, b in enumerate(idx):
            columns[:, k] = self.multiply(x, self.basis_vector(int(b)))
        coeffs = solve(self.field, columns, self.idempotents[i])
        if coeffs is None:
            raise ZeroDivisionError(f"element is not invertible in corner {i}")
        y = self.zero()
        y[idx] = coeffs
        return y

    @cached_property
    def idempotent_classes(self) -> Tuple[Tuple[int, ...], ...]:
        """Groups of distinguished idempotents with isomorphic ``e_i A``."""
        classes: List[List[int]] = []
        for i in range(self.n_idempotents):
            for group in classes:
                if self._idempotents_isomorphic(group[0], i):
                    group.append(i)
                    break
            else:
                classes.append([i])
        return tuple(tuple(group) for group in classes)

    def _idempotents_isomorphic(self, i: int, j: int) -> bool:
        if i == j:
            return True
        for x in self.block(i, j):
            for y in self.block(j, i):
                product = self.multiply(self.basis_vector(int(x)), self.basis_vector(int(y)))
                if self.residue_value(product, i) != 0:
                    return True
        return False

    def two_sided_ideal(self, generators: np.ndarray) -> np.ndarray:
        """Basis of the ideal generated by the given columns (closure under both actions)."""
        F = self.field
        span = image_basis(F, generators)
        while True:
            if span.shape[1] == 0 or self.dim == 0:
                return span
            left = np.tensordot(self.table, span, axes=(1, 0))  # (k, m, r)
            right = np.tensordot(span, self.table, axes=(0, 0))  # (r, k, m)
            left = F.reduce(left.transpose(1, 0, 2).reshape(self.dim, -1))
            right = F.reduce(right.transpose(2, 0, 1).reshape(self.dim, -1))
            grown = image_basis(F, np.hstack([span, left, right]))
            if grown.shape[1] == span.shape[1]:
                return span
            span = grown

    def product_space(self, left: np.ndarray, right: np.ndarray) -> np.ndarray:
        """Basis of ``span{x y}`` for ``x`` in the first span and ``y`` in the second."""
        F = self.field
        products = [
            self.multiply(left[:, a], right[:, b])
            for a in range(left.shape[1])
            for b in range(right.shape[1])
        ]
        if not products:
            return F.zeros((self.dim, 0))
        return image_basis(F, np.column_stack(products))

    def validate(self) -> None:
        """Check associativity, unit, idempotents and Peirce adaptation."""
        F = self.field
        n = self.dim
        if self.table.shape != (n, n, n):
            raise StructureError(f"table shape {self.table.shape} for dimension {n}")
        if n == 0:
            return
        left_assoc = F.reduce(np.tensordot(self.table, self.table, axes=([2], [0])))
        right_assoc = F.reduce(np.tensordot(self.table, self.table, axes=([2], [1])))
        right_assoc = right_assoc.transpose(2, 0, 1, 3)
        if not F.equal(left_assoc, right_assoc):
            raise StructureError("multiplication is not associative")
        for b in range(n):
            vector = self.basis_vector(b)
            if not (F.equal(self.multiply(self.unit, vector), vector) and F.equal(self.multiply(vector, self.unit), vector)):
                raise StructureError(f"unit does not act as identity on {self.labels[b]}")
            i, j = self.slots[b]
            sandwiched = self.multiply(self.multiply(self.idempotents[i], vector), self.idempotents[j])
            if not F.equal(sandwiched, vector):
                raise StructureError(f"basis element {self.labels[b]} is not in slot {(i, j)}")
        for i, e in enumerate(self.idempotents):
            for j, f in enumerate(self.idempotents):
                expected = e if i == j else self.zero()
                if not F.equal(self.multiply(e, f), expected):
                    raise StructureError(f"idempotents {i} and {j} are not orthogonal idempotents")


# -- construction from quivers ------------------------------------------------


def _validate_presentation(q: QuiverPresentation) -> None:
    if len(set(q.vertices)) != len(q.vertices) or not q.vertices:
        raise PresentationError("vertex labels must be nonempty and unique")
    labels = [a.label for a in q.arrows]
    if len(set(labels)) != len(labels):
        raise PresentationError("arrow labels must be unique")
    for arrow in q.arrows:
        if arrow.source not in q.vertices or arrow.target not in q.vertices:
            raise PresentationError(f"arrow {arrow.label!r} joins unknown vertices")
        if arrow.label.startswith("@") or _is_number(arrow.label):
            raise PresentationError(f"arrow label {arrow.label!r} is reserved")
    if q.bound < 1 or (q.arrows and q.bound < 2):
        raise PresentationError(f"nilpotency bound {q.bound} would kill arrows")
    for relation in q.relations:
        if not relation:
            raise PresentationError("empty relation")
        ends = set()
        for _, word in relation:
            expression = " ".join(word)
            if len(word) < 2:
                raise PresentationError(
                    f"relation term '{expression}' has length {len(word)}; relations must lie in the square of the arrow ideal"
                )
            ends.add(q.path_endpoints(word))
        if len(ends) != 1:
            raise PresentationError(
                "relation mixes endpoints: " + " + ".join(" ".join(w) for _, w in relation)
            )


def _is_number(text: str) -> bool:
    try:
        Fraction(text)
    except ValueError:
        return False
    return True


def _enumerate_paths(graph: nx.MultiDiGraph, vertices: Sequence[str], max_length: int):
    """All paths of length at most ``max_length`` as (source, target, word)."""
    paths = [(v, v, ()) for v in vertices]
    frontier = list(paths)
    for _ in range(max_length):
        grown = []
        for source, end, word in frontier:
            for _, head, label in graph.out_edges(end, keys=True):
                grown.append((source, head, word + (label,)))
        paths.extend(grown)
        frontier = grown
    return paths


def path_label(source: str, word: Sequence[str]) -> str:
    return " ".join(word) if word else f"@{source}"


def algebra_from_quiver(q: QuiverPresentation) -> Algebra:
    """Basis of normal paths modulo the relation ideal, with reduced concatenation."""
    _validate_presentation(q)
    F = q.field
    graph = q.graph()
    vertex_index = {v: k for k, v in enumerate(q.vertices)}

    blocks: Dict[Tuple[str, str], List[Tuple[str, ...]]] = {}
    by_source: Dict[str, List[Tuple[str, Tuple[str, ...]]]] = {}
    for source, target, word in _enumerate_paths(graph, q.vertices, q.bound):
        blocks.setdefault((source, target), []).append(word)
        by_source.setdefault(source, []).append((target, word))
    for words in blocks.values():
        words.sort(key=lambda w: (-len(w), w))
    column = {key: {w: c for c, w in enumerate(words)} for key, words in blocks.items()}

    generators: Dict[Tuple[str, str], List[np.ndarray]] = {}
    for relation in q.relations:
        u, v = q.path_endpoints(relation[0][1])
        shortest = min(len(word) for _, word in relation)
        for s in q.vertices:
            for mid, left in by_source.get(s, []):
                if mid != u or len(left) + shortest > q.bound:
                    continue
                for t, right in by_source.get(v, []):
                    if len(left) + shortest + len(right) > q.bound:
                        continue
                    row = F.zeros(len(blocks[(s, t)]))
                    for coeff, word in relation:
                        full = left + tuple(word) + right
                        if len(full) <= q.bound:
                            row[column[(s, t)][full]] += F.scalar(coeff)
                    generators.setdefault((s, t), []).append(F.reduce(row))

    # Per block: normal paths are the non-pivot columns, longest paths first.
    normal_forms: Dict[Tuple[str, str], Dict[Tuple[str, ...], Dict[Tuple[str, ...], Any]]] = {}
    normal_words: List[Tuple[str, str, Tuple[str, ...]]] = []
    for key, words in blocks.items():
        rows = generators.get(key)
        reduced, pivots = (rref(F, np.vstack(rows)) if rows else (F.zeros((0, len(words))), []))
        pivot_row = {p: r for r, p in enumerate(pivots)}
        free = [c for c in range(len(words)) if c not in pivot_row]
        forms: Dict[Tuple[str, ...], Dict[Tuple[str, ...], Any]] = {}
        for c, word in enumerate(words):
            if c in pivot_row:
                r = pivot_row[c]
                forms[word] = {
                    words[f]: F.scalar(-reduced[r, f]) for f in free if reduced[r, f] != 0
                }
            else:
                if len(word) >= q.bound:
                    raise PresentationError(
                        f"relations do not annihilate path '{path_label(key[0], word)}' of length {len(word)}"
                    )
                forms[word] = {word: F.scalar(1)}
                normal_words.append((key[0], key[1], word))
        normal_forms[key] = forms

    normal_words.sort(key=lambda p: (len(p[2]), vertex_index[p[0]], vertex_index[p[1]], p[2]))
    index = {(s, w): k for k, (s, _, w) in enumerate(normal_words)}
    dim = len(normal_words)

    def reduce_path(source: str, target: str, word: Tuple[str, ...]) -> np.ndarray:
        vector = F.zeros(dim)
        if len(word) > q.bound:
            return vector
        for normal, coeff in normal_forms[(source, target)][word].items():
            vector[index[(source, normal)]] = coeff
        return vector

    table = F.zeros((dim, dim, dim))
    for a, (s, t, left) in enumerate(normal_words):
        for b, (s2, t2, right) in enumerate(normal_words):
            if t == s2:
                table[a, b] = reduce_path(s, t2, left + right)

    idempotents = tuple(F.unit_vector(dim, index[(v, ())]) for v in q.vertices)
    slots = tuple((vertex_index[s], vertex_index[t]) for s, t, _ in normal_words)
    labels = tuple(path_label(s, w) for s, _, w in normal_words)
    radical_cols = [k for k, (_, _, w) in enumerate(normal_words) if w]
    radical = F.eye(dim)[:, radical_cols]
    symbols_map = {f"@{v}": index[(v, ())] for v in q.vertices}
    symbols_map.update({a.label: index[(a.source, (a.label,))] for a in q.arrows})

    logger.info("Algebra %s: dim %d over %s with %d vertices", q.name, dim, F.name, len(q.vertices))
    return Algebra(
        field=F,
        labels=labels,
        table=table,
        idempotents=idempotents,
        slots=slots,
        vertex_names=tuple(q.vertices),
        name=q.name,
        radical_hint=radical,
        presentation=q,
        symbols=symbols_map,
    )


# -- free functions ---------------------------------------------------------


def multiply(A: Algebra, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return A.multiply(x, y)


def peirce(A: Algebra, i: int, j: int) -> np.ndarray:
    """Basis vectors (columns) of ``e_i A e_j``."""
    return A.field.eye(A.dim)[:, A.block(i, j)]


def radical(A: Algebra) -> np.ndarray:
    return A.radical()


def radical_by_trace_form(A: Algebra) -> np.ndarray:
    """``{x : tr(L_{x y}) = 0 for all y}``, valid in characteristic 0 or above ``dim A``."""
    F = A.field
    if F.characteristic and F.characteristic <= A.dim:
        raise RadicalError(
            f"characteristic {F.characteristic} does not exceed dim {A.dim}; supply a radical hint"
        )
    if A.dim == 0:
        return F.zeros((0, 0))
    gram = F.reduce(np.tensordot(A.table, A.table, axes=([1, 2], [2, 1])))
    return nullspace(F, gram)


def radical_by_representation(field: Field, matrices: Sequence[np.ndarray]) -> np.ndarray:
    """Radical from the trace form of a representation ``rho(b_a)``.

    Exact when the representation is faithful modulo the radical and the
    characteristic is 0 or exceeds the representation dimension.
    """
    n = len(matrices)
    if n == 0:
        return field.zeros((0, 0))
    size = matrices[0].shape[0]
    if field.characteristic and field.characteristic <= size:
        raise RadicalError(
            f"characteristic {field.characteristic} does not exceed representation dimension {size}"
        )
    stack = np.stack(matrices)
    gram = field.reduce(np.tensordot(stack, stack, axes=([1, 2], [2, 1])))
    return nullspace(field, gram)


def corner(A: Algebra, subset: Sequence[int]) -> Algebra:
    """The corner algebra ``eAe`` for ``e`` the sum of the listed idempotents."""
    chosen = tuple(sorted(set(subset)))
    if not chosen:
        raise ValueError("corner needs a nonempty idempotent subset")
    if any(not 0 <= i < A.n_idempotents for i in chosen):
        raise IndexError(f"idempotent subset {chosen} out of range")
    if len(chosen) == A.n_idempotents:
        return A
    F = A.field
    keep = [b for b, (i, j) in enumerate(A.slots) if i in chosen and j in chosen]
    position = {v: k for k, v in enumerate(chosen)}
    table = A.table[np.ix_(keep, keep, keep)].copy()
    idempotents = tuple(A.idempotents[i][keep] for i in chosen)
    slots = tuple((position[A.slots[b][0]], position[A.slots[b][1]]) for b in keep)

    e = F.zeros(A.dim)
    for i in chosen:
        e = e + A.idempotents[i]
    rad = A.radical()
    squeezed = F.zeros((len(keep), rad.shape[1]))
    for c in range(rad.shape[1]):
        squeezed[:, c] = A.multiply(A.multiply(e, rad[:, c]), e)[keep]
    names = tuple(A.vertex_names[i] for i in chosen)
    return Algebra(
        field=F,
        labels=tuple(A.labels[b] for b in keep),
        table=table,
        idempotents=idempotents,
        slots=slots,
        vertex_names=names,
        name=f"{A.name}[{','.join(names)}]",
        radical_hint=image_basis(F, squeezed),
        origin=Embedding(parent=A, basis=tuple(keep), vertices=chosen),
    )


def quotient_algebra(A: Algebra, ideal: np.ndarray, name: str) -> Tuple[Algebra, np.ndarray]:
    """``A / I`` on the complement basis, and the projection matrix."""
    F = A.field
    ideal = image_basis(F, ideal) if ideal.size else F.zeros((A.dim, 0))
    keep = complement_indices(F, ideal, A.dim)
    position = {b: k for k, b in enumerate(keep)}
    projection = F.zeros((len(keep), A.dim))
    for b in keep:
        projection[position[b], b] = F.scalar(1)
    if ideal.shape[1]:
        reduced, pivots = rref(F, ideal.T)
        for r, p in enumerate(pivots):
            projection[:, p] = F.reduce(-reduced[r, keep])

    if keep:
        table = F.reduce(np.tensordot(A.table[np.ix_(keep, keep)], projection, axes=(2, 1)))
    else:
        table = F.zeros((0, 0, 0))
    survivors = [i for i, e in enumerate(A.idempotents) if not F.is_zero(F.dot(projection, e))]
    renumber = {old: new for new, old in enumerate(survivors)}
    idempotents = tuple(F.dot(projection, A.idempotents[i]) for i in survivors)
    slots = tuple((renumber[A.slots[b][0]], renumber[A.slots[b][1]]) for b in keep)
    rad = A.radical()
    rad_image = F.dot(projection, rad) if rad.shape[1] else F.zeros((len(keep), 0))
    quotient = Algebra(
        field=F,
        labels=tuple(A.labels[b] for b in keep),
        table=table,
        idempotents=idempotents,
        slots=slots,
        vertex_names=tuple(A.vertex_names[i] for i in survivors),
        name=name,
        radical_hint=image_basis(F, rad_image) if keep else F.zeros((0, 0)),
    )
    return quotient, projection


def idempotent_sum(A: Algebra, subset: Sequence[int]) -> np.ndarray:
    e = A.zero()
    for i in subset:
        e = e + A.idempotents[i]
    return A.field.reduce(e)


def idempotent_ideal(A: Algebra, subset: Sequence[int]) -> np.ndarray:
    """``AeA`` by closure from the idempotents in ``subset``."""
    F = A.field
    if not subset:
        return F.zeros((A.dim, 0))
    gens = np.column_stack([A.idempotents[i] for i in sorted(set(subset))])
    return A.two_sided_ideal(gens)


def quotient_by_idempotent_ideal(A: Algebra, subset: Sequence[int]) -> Tuple[Algebra, np.ndarray]:
    """``A/AeA`` and its projection; an empty subset gives ``A`` itself."""
    if any(not 0 <= i < A.n_idempotents for i in subset):
        raise IndexError(f"idempotent subset {tuple(subset)} out of range")
    ideal = idempotent_ideal(A, subset)
    quotient, projection = quotient_algebra(A, ideal, f"{A.name}/AeA")
    logger.info("A/AeA for %s: dim AeA %d, quotient dim %d", A.name, ideal.shape[1], quotient.dim)
    return quotient, projection


def center_dimension(A: Algebra) -> int:
    if A.dim == 0:
        return 0
    F = A.field
    constraints = A.table.transpose(1, 2, 0) - A.table.transpose(0, 2, 1)
    return nullspace(F, F.reduce(constraints.reshape(A.dim * A.dim, A.dim))).shape[1]


def radical_layers(A: Algebra) -> List[int]:
    """``dim rad^k / rad^(k+1)`` for k = 0, 1, ... until the radical power vanishes."""
    F = A.field
    rad = A.radical()
    layers: List[int] = []
    power = rad
    layers.append(A.dim - rad.shape[1])
    while power.shape[1]:
        following = A.product_space(power, rad)
        layers.append(power.shape[1] - following.shape[1])
        if following.shape[1] == power.shape[1]:
            raise StructureError("radical is not nilpotent")
        power = following
    return layers


# -- symmetrizing forms -------------------------------------------------------


def _gram(A: Algebra, coefficients: np.ndarray) -> np.ndarray:
    return A.field.reduce(np.tensordot(A.table, coefficients, axes=(2, 0)))


def _symmetric_form_space(A: Algebra) -> np.ndarray:
    F = A.field
    constraints = A.table - A.table.transpose(1, 0, 2)
    return nullspace(F, F.reduce(constraints.reshape(A.dim * A.dim, A.dim)))


def symmetrizing_form(A: Algebra, search: SearchSettings = DEFAULT_SEARCH) -> Optional[LinearForm]:
    """A nondegenerate form with ``l(xy) = l(yx)``, or ``None`` once none is certified to exist.

    Unit and seeded random combinations of the symmetric forms come first. After a
    shared kernel vector rules symmetry out, F_p enumerates every combination only
    when ``s <= exhaustive_limit`` and ``p**s <= EXHAUSTIVE_FORM_LIMIT``; over F_101
    that means a single symmetric form. Otherwise the generic Gram determinant
    decides for ``dim A <= SYMBOLIC_DET_MAX_DIM``.

    Raises ``RuntimeError`` when neither a form nor a certificate is found.
    """
    F = A.field
    if A.dim == 0:
        return LinearForm(F.zeros(0))
    space = _symmetric_form_space(A)
    s = space.shape[1]
    if s == 0:
        logger.info("%s: no symmetric linear forms", A.name)
        return None

    def nondegenerate(coeffs: np.ndarray) -> Optional[LinearForm]:
        candidate = F.dot(space, coeffs)
        if rank(F, _gram(A, candidate)) == A.dim:
            return LinearForm(candidate)
        return None

    for k in range(s):
        form = nondegenerate(F.unit_vector(s, k))
        if form is not None:
            return form
    rng = np.random.default_rng(search.seed)
    for trial in range(search.sampling_trials):
        if F.characteristic:
            coeffs = F.random(rng, s)
        else:
            coeffs = F.array([(trial + 2) ** k for k in range(s)])
        form = nondegenerate(coeffs)
        if form is not None:
            return form

    if _common_kernel(A, space):
        logger.info("%s: every symmetric form shares a kernel vector; not symmetric", A.name)
        return None
    if F.characteristic and s <= search.exhaustive_limit and F.characteristic**s <= EXHAUSTIVE_FORM_LIMIT:
        for values in itertools.product(range(F.characteristic), repeat=s):
            form = nondegenerate(F.array(values))
            if form is not None:
                return form
        return None
    if A.dim <= SYMBOLIC_DET_MAX_DIM:
        return _symbolic_certificate(A, space)
    raise RuntimeError(f"symmetry of {A.name} undecided within the search budget")


def _common_kernel(A: Algebra, space: np.ndarray) -> bool:
    F = A.field
    grams = [_gram(A, space[:, k]) for k in range(space.shape[1])]
    return (
        nullspace(F, np.vstack(grams)).shape[1] > 0
        or nullspace(F, np.vstack([g.T for g in grams])).shape[1] > 0
    )


def _symbolic_certificate(A: Algebra, space: np.ndarray) -> Optional[LinearForm]:
    """Decide via the determinant of the generic Gram matrix."""
    F = A.field
    s = space.shape[1]
    params = symbols(f"c0:{s}")
    grams = [_gram(A, space[:, k]) for k in range(s)]

    def lift(value: Any) -> Any:
        if F.characteristic:
            return int(value)
        value = Fraction(value)
        return Rational(value.numerator, value.denominator)

    generic = Matrix(
        A.dim,
        A.dim,
        lambda i, j: sum(lift(grams[k][i, j]) * params[k] for k in range(s)),
    )
    det = generic.det(method="berkowitz")
    if F.characteristic:
        poly = Poly(det, *params, modulus=F.characteristic)
    else:
        poly = Poly(det, *params)
    if poly.is_zero:
        return None
    raise RuntimeError(f"a nondegenerate symmetric form for {A.name} exists but was not sampled")


# -- primitive idempotents ----------------------------------------------------


def primitive_idempotents(A: Algebra, search: SearchSettings = DEFAULT_SEARCH) -> List[np.ndarray]:
    """A complete orthogonal set of primitive idempotents, lifted from ``A/rad``."""
    F = A.field
    if A.dim == 0:
        return []
    if _distinguished_are_primitive(A):
        return list(A.idempotents)
    rad = A.radical()
    semisimple, projection = quotient_algebra(A, rad, f"{A.name}/rad")
    rng = np.random.default_rng(search.seed)
    pieces = _split_semisimple(semisimple, semisimple.unit, rng, search)
    logger.info("%s: %d primitive idempotents", A.name, len(pieces))

    keep = complement_indices(F, image_basis(F, rad) if rad.size else F.zeros((A.dim, 0)), A.dim)
    lifted: List[np.ndarray] = []
    taken = A.zero()
    for position, piece in enumerate(pieces):
        if position == len(pieces) - 1:
            lifted.append(F.reduce(A.unit - taken))
            break
        x = A.zero()
        x[keep] = piece
        rest = F.reduce(A.unit - taken)
        x = A.multiply(A.multiply(rest, x), rest)
        x = _newton_idempotent(A, x)
        lifted.append(x)
        taken = F.reduce(taken + x)
    return lifted


def _distinguished_are_primitive(A: Algebra) -> bool:
    try:
        for i in range(A.n_idempotents):
            A.residue(i)
    except NonSplitError:
        return False
    return True


def _newton_idempotent(A: Algebra, x: np.ndarray) -> np.ndarray:
    F = A.field
    for _ in range(NEWTON_MAX_STEPS):
        square = A.multiply(x, x)
        if F.equal(square, x):
            return x
        cube = A.multiply(square, x)
        x = F.reduce(3 * square - 2 * cube)
    raise RuntimeError("idempotent refinement did not converge; radical is not nilpotent")


def _split_semisimple(Q: Algebra, eps: np.ndarray, rng: np.random.Generator, search: SearchSettings) -> List[np.ndarray]:
    F = Q.field
    columns = [Q.multiply(Q.multiply(eps, Q.basis_vector(k)), eps) for k in range(Q.dim)]
    corner_basis = image_basis(F, np.column_stack(columns))
    if corner_basis.shape[1] == 1:
        return [eps]
    divisor = _find_zero_divisor(Q, eps, corner_basis, rng, search)
    if divisor is None:
        raise NonSplitError(corner_basis.shape[1], F.name)
    sandwich = np.column_stack(
        [Q.multiply(Q.multiply(divisor, corner_basis[:, k]), divisor) for k in range(corner_basis.shape[1])]
    )
    coeffs = solve(F, sandwich, divisor)
    if coeffs is None:
        raise RuntimeError("semisimple quotient is not regular; radical computation is wrong")
    first = Q.multiply(divisor, F.dot(corner_basis, coeffs))
    return _split_semisimple(Q, first, rng, search) + _split_semisimple(Q, F.reduce(eps - first), rng, search)


def _find_zero_divisor(Q, eps, corner_basis, rng, search) -> Optional[np.ndarray]:
    F = Q.field
    c = corner_basis.shape[1]

    def candidates():
        for k in range(c):
            yield corner_basis[:, k]
        for a, b in itertools.combinations(range(c), 2):
            yield F.reduce(corner_basis[:, a] + corner_basis[:, b])
        for _ in range(search.sampling_trials):
            yield F.dot(corner_basis, F.random(rng, c))

    for y in candidates():
        if F.is_zero(y):
            continue
        products = np.column_stack([Q.multiply(y, corner_basis[:, k]) for k in range(c)])
        if rank(F, products) < c:
            return y
        factor = _proper_factor(Q, eps, y)
        if factor is not None:
            return factor
    return None


def _proper_factor(Q: Algebra, eps: np.ndarray, y: np.ndarray) -> Optional[np.ndarray]:
    """``f(y)`` for a proper factor ``f`` of the minimal polynomial of ``y``, if reducible."""
    F = Q.field
    powers = [eps]
    while True:
        nxt = Q.multiply(powers[-1], y)
        coeffs = solve(F, np.column_stack(powers), nxt)
        if coeffs is not None:
            break
        powers.append(nxt)
    degree = len(powers)
    if degree == 1:
        return None
    t = symbols("t")
    lifted = [_to_sympy(F, -coeffs[k]) for k in range(degree)]
    minpoly = t**degree + sum(lifted[k] * t**k for k in range(degree))
    if F.characteristic:
        poly = Poly(minpoly, t, modulus=F.characteristic)
    else:
        poly = Poly(minpoly, t, domain="QQ")
    _, factors = poly.factor_list()
    if len(factors) == 1 and factors[0][1] == 1:
        return None
    factor = factors[0][0]
    value = Q.zero()
    for coeff in factor.all_coeffs():
        value = F.reduce(Q.multiply(value, y) + _from_sympy(F, coeff) * eps)
    return value


def _to_sympy(field: Field, value: Any) -> Any:
    if field.characteristic:
        return int(value)
    value = Fraction(value)
    return Rational(value.numerator, value.denominator)


def _from_sympy(field: Field, value: Any) -> Any:
    if field.characteristic:
        return field.scalar(int(value))
    return field.scalar(Fraction(int(value.p), int(value.q)))

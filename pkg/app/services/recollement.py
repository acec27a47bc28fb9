"""Induction and restriction along an idempotent, recollement checks and the gluing pipeline."""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..config import DEFAULT_SEARCH, SearchSettings
from .algebra import (
    Algebra,
    center_dimension,
    corner,
    idempotent_ideal,
    quotient_by_idempotent_ideal,
    radical_layers,
    symmetrizing_form,
)
from .complexes import (
    ChainMap,
    ProjComplex,
    compose,
    direct_sum_all,
    homotopy_hom,
    minimize,
    projective_resolution,
    shift,
    stalk,
    zero_map,
)
from .decomposition import decompose, indecomposables_isomorphic
from .exactlin import Coordinates, extend_basis, image_basis, is_invertible, rank
from .modules import ModuleRep
from .tilting import (
    CompletionTrace,
    EndAlgebra,
    TiltingReport,
    TraceCheck,
    complete,
    complex_length,
    end_algebra,
    is_partial_tilting,
    verify_tilting,
)

logger = logging.getLogger(__name__)

PERMUTATION_LIMIT = 7


class SupportError(ValueError):
    """Raised when a complex or subset leaves the support of the idempotent."""


class PipelineError(RuntimeError):
    def __init__(self, stage: str, message: str) -> None:
        super().__init__(f"{stage}: {message}")
        self.stage = stage


class VerdictLevel(str, Enum):
    MISMATCH = "mismatch"
    DIMENSIONS = "dimensions-match"
    FINGERPRINTS = "fingerprints-match"
    EXPLICIT = "explicit-iso-found"


def _check_subset(A: Algebra, subset: Sequence[int]) -> Tuple[int, ...]:
    chosen = tuple(sorted(set(subset)))
    if not chosen:
        raise SupportError("idempotent subset is empty")
    if any(not 0 <= i < A.n_idempotents for i in chosen):
        raise SupportError(f"idempotent subset {chosen} out of range for {A.name}")
    return chosen


# -- induction and restriction -------------------------------------------------


def induce_up(Q: ProjComplex, parent: Algebra) -> ProjComplex:
    """Reread a complex over a corner ``eAe`` as a complex over ``A``."""
    C = Q.algebra
    if C is parent:
        return Q
    origin = C.origin
    if origin is None or origin.parent is not parent:
        raise SupportError(f"{C.name} is not a corner of {parent.name}")
    F = parent.field
    basis = list(origin.basis)
    terms = {d: tuple(origin.vertices[v] for v in vertices) for d, vertices in Q.terms.items()}
    diffs = {}
    for d, m in Q.diffs.items():
        lifted = F.zeros((m.shape[0], m.shape[1], parent.dim))
        lifted[:, :, basis] = m
        diffs[d] = lifted
    return ProjComplex.build(parent, terms, diffs)


def restrict(X: ProjComplex, target) -> ProjComplex:
    """Reread a complex supported on ``add eA`` as a complex over ``eAe``.

    ``target`` is the corner algebra or the idempotent subset. A complex with
    terms outside the subset is minimized first; if that does not help the
    complex is not in the image of induction.
    """
    A = X.algebra
    C = target if isinstance(target, Algebra) else corner(A, _check_subset(A, target))
    if C is A:
        return X
    origin = C.origin
    if origin is None or origin.parent is not A:
        raise SupportError(f"{C.name} is not a corner of {A.name}")
    position = {v: k for k, v in enumerate(origin.vertices)}
    if not X.support() <= set(position):
        X = minimize(X).complex
        outside = sorted(X.support() - set(position))
        if outside:
            names = ", ".join(A.vertex_names[v] for v in outside)
            raise SupportError(f"complex has terms at vertices {names} outside the corner")
    basis = list(origin.basis)
    terms = {d: tuple(position[v] for v in vertices) for d, vertices in X.terms.items()}
    diffs = {d: m[:, :, basis].copy() for d, m in X.diffs.items()}
    return ProjComplex.build(C, terms, diffs)


# -- recollement check ---------------------------------------------------------


@dataclass(frozen=True, eq=False)
class RecollementCheck:
    complex: ProjComplex
    subset: Tuple[int, ...]
    end: EndAlgebra
    first: Tuple[int, ...]
    second: Tuple[int, ...]
    restricted: Optional[ProjComplex]
    corner_report: Optional[TiltingReport]
    idempotent: np.ndarray
    projection: ChainMap
    idempotent_ok: bool

    @property
    def verdict(self) -> bool:
        return bool(
            self.first
            and self.idempotent_ok
            and self.corner_report is not None
            and self.corner_report.verdict
        )


def _same_types(X: ProjComplex, Y: ProjComplex, search: SearchSettings) -> bool:
    """Same indecomposable types after one common shift; multiplicities are ignored."""
    X, Y = minimize(X).complex, minimize(Y).complex
    if X.is_zero or Y.is_zero:
        return X.is_zero and Y.is_zero
    Y = shift(Y, Y.hi - X.hi)
    left, right = decompose(X, search), decompose(Y, search)
    ours = [left.summands[t[0]].complex for t in left.types]
    theirs = [right.summands[t[0]].complex for t in right.types]
    return len(ours) == len(theirs) and all(
        any(indecomposables_isomorphic(Z, R) for R in theirs) for Z in ours
    )


def recollement_tilting_check(
    P: ProjComplex,
    subset: Sequence[int],
    end: Optional[EndAlgebra] = None,
    corner_report: Optional[TiltingReport] = None,
    search: SearchSettings = DEFAULT_SEARCH,
) -> RecollementCheck:
    """Split off the summands living on ``add eA`` and test their restriction.

    The first part collects every indecomposable summand of ``P`` whose terms
    lie at vertices of ``subset``; ``f`` is the projection onto it, both as a
    strict endomorphism and as an element of ``End_K(P)``.

    ``corner_report`` certifies some complex over the corner. It is reused
    when the restriction has the same indecomposable types up to one shift;
    otherwise the restriction gets its own report.
    """
    A = P.algebra
    chosen = _check_subset(A, subset)
    end = end if end is not None else end_algebra(minimize(P).complex, search=search)
    first = tuple(k for k, Z in enumerate(end.summands) if Z.support() <= set(chosen))
    second = tuple(k for k in range(len(end.summands)) if k not in first)

    total = end.total
    strict = zero_map(total.complex, total.complex)
    for k in first:
        strict = strict + compose(total.inclusion(k), total.projection(k))
    f = end.idempotent_sum(first)
    B = end.algebra
    idempotent_ok = B.field.equal(B.multiply(f, f), f) and compose(strict, strict).equals(strict)

    known = corner_report
    if known is not None and _corner_vertices(known.complex.algebra, A) != chosen:
        known = None
    restricted = None
    report = None
    if first:
        P1 = direct_sum_all([end.summands[k] for k in first], algebra=A).complex
        restricted = restrict(P1, known.complex.algebra if known is not None else chosen)
        if known is not None and _same_types(restricted, known.complex, search):
            report = known
        else:
            C = restricted.algebra
            decide = symmetrizing_form(C, search) is not None
            report = verify_tilting(restricted, decide=decide, search=search)
    check = RecollementCheck(P, chosen, end, first, second, restricted, report, f, strict, idempotent_ok)
    logger.info(
        "recollement check on %s: %d of %d summands in add eA, verdict %s",
        A.name,
        len(first),
        len(end.summands),
        check.verdict,
    )
    return check


# -- quotient comparison -------------------------------------------------------


@dataclass(frozen=True)
class Fingerprint:
    dim: int
    center: int
    cartan: Tuple[Tuple[int, ...], ...]
    layers: Tuple[int, ...]


def fingerprint(Q: Algebra) -> Fingerprint:
    if Q.dim == 0:
        return Fingerprint(0, 0, (), ())
    representatives = [members[0] for members in Q.idempotent_classes]
    cartan = tuple(tuple(len(Q.block(i, j)) for j in representatives) for i in representatives)
    return Fingerprint(Q.dim, center_dimension(Q), cartan, tuple(radical_layers(Q)))


def _cartan_equivalent(left: Tuple[Tuple[int, ...], ...], right: Tuple[Tuple[int, ...], ...]) -> bool:
    n = len(left)
    if n != len(right):
        return False
    if n > PERMUTATION_LIMIT:
        # Too many relabelings; compare permutation invariants only.
        def invariants(c):
            return sorted(c[i][i] for i in range(n)), sorted(sorted(row) for row in c)

        return invariants(left) == invariants(right)
    for sigma in itertools.permutations(range(n)):
        if all(left[i][j] == right[sigma[i]][sigma[j]] for i in range(n) for j in range(n)):
            return True
    return False


def fingerprints_match(left: Fingerprint, right: Fingerprint) -> bool:
    return (
        left.dim == right.dim
        and left.center == right.center
        and left.layers == right.layers
        and _cartan_equivalent(left.cartan, right.cartan)
    )


def _arrow_lifts(Q: Algebra) -> Dict[Tuple[int, int], np.ndarray]:
    """Per Peirce block, lifts of a basis of ``e_i (rad / rad^2) e_j``."""
    F = Q.field
    rad = Q.radical()
    square = Q.product_space(rad, rad)
    out = {}
    for i, e in enumerate(Q.idempotents):
        for j, e2 in enumerate(Q.idempotents):
            corner_rad = [Q.multiply(Q.multiply(e, rad[:, c]), e2) for c in range(rad.shape[1])]
            corner_sq = [Q.multiply(Q.multiply(e, square[:, c]), e2) for c in range(square.shape[1])]
            space = image_basis(F, np.column_stack(corner_rad)) if corner_rad else F.zeros((Q.dim, 0))
            sub = image_basis(F, np.column_stack(corner_sq)) if corner_sq else F.zeros((Q.dim, 0))
            lifts = extend_basis(F, sub, space) if space.shape[1] else space
            if lifts.shape[1]:
                out[(i, j)] = lifts
    return out


def _extend_multiplicatively(
    source: Algebra,
    target: Algebra,
    pairs: List[Tuple[np.ndarray, np.ndarray]],
    arrows: List[Tuple[np.ndarray, np.ndarray]],
) -> Optional[np.ndarray]:
    """The linear map determined by generator images, or ``None`` if inconsistent."""
    F = source.field
    chosen_a: List[np.ndarray] = []
    chosen_b: List[np.ndarray] = []
    frontier = list(pairs) + list(arrows)
    while frontier:
        a, b = frontier.pop(0)
        if F.is_zero(a):
            if not F.is_zero(b):
                return None
            continue
        span = Coordinates(F, np.column_stack(chosen_a)) if chosen_a else None
        coords = span.of(a) if span is not None else None
        if coords is not None:
            if not F.equal(F.dot(np.column_stack(chosen_b), coords), b):
                return None
            continue
        chosen_a.append(a)
        chosen_b.append(b)
        for x, y in arrows:
            frontier.append((source.multiply(a, x), target.multiply(b, y)))
    if len(chosen_a) != source.dim:
        return None
    images = np.column_stack(chosen_b)
    if rank(F, images) != target.dim:
        return None
    preimages = np.column_stack(chosen_a)
    basis = Coordinates(F, preimages)
    phi = F.zeros((target.dim, source.dim))
    for k in range(source.dim):
        phi[:, k] = F.dot(images, basis.require(source.basis_vector(k)))
    return phi


def _is_homomorphism(source: Algebra, target: Algebra, phi: np.ndarray) -> bool:
    F = source.field
    if not is_invertible(F, phi):
        return False
    for a in range(source.dim):
        for b in range(source.dim):
            left = F.dot(phi, source.multiply(source.basis_vector(a), source.basis_vector(b)))
            right = target.multiply(phi[:, a], phi[:, b])
            if not F.equal(left, right):
                return False
    return True


def _random_invertible(F, rng: np.random.Generator, m: int) -> np.ndarray:
    while True:
        change = F.random(rng, (m, m))
        if is_invertible(F, change):
            return change


def find_isomorphism(source: Algebra, target: Algebra, search: SearchSettings = DEFAULT_SEARCH) -> Optional[np.ndarray]:
    """Randomized search within ``iso_budget`` for an isomorphism matching distinguished idempotents.

    ``None`` means nothing was found, not that no isomorphism exists. For each bijection of idempotents with matching Peirce dimensions the
    arrow blocks are matched first by the identity and then by seeded random
    invertible changes of basis, ``sampling_trials`` per bijection and at
    most ``iso_budget`` candidates overall.
    """
    F = source.field
    if source.dim != target.dim or source.n_idempotents != target.n_idempotents:
        return None
    if source.dim == 0:
        return F.zeros((0, 0))
    n = source.n_idempotents
    arrows_a = _arrow_lifts(source)
    arrows_b = _arrow_lifts(target)
    keys = sorted(arrows_a)
    rng = np.random.default_rng(search.seed)
    tried = 0
    for sigma in itertools.permutations(range(n)):
        if any(len(source.block(i, j)) != len(target.block(sigma[i], sigma[j])) for i in range(n) for j in range(n)):
            continue
        if len(keys) != len(arrows_b) or any(
            arrows_b.get((sigma[i], sigma[j]), F.zeros((0, 0))).shape[1] != arrows_a[(i, j)].shape[1] for i, j in keys
        ):
            continue
        pairs = [(source.idempotents[i], target.idempotents[sigma[i]]) for i in range(n)]
        for attempt in range(search.sampling_trials):
            if tried >= search.iso_budget:
                return None
            tried += 1
            arrows = []
            for i, j in keys:
                lifts_a = arrows_a[(i, j)]
                m = lifts_a.shape[1]
                change = F.eye(m) if attempt == 0 else _random_invertible(F, rng, m)
                mapped = F.dot(arrows_b[(sigma[i], sigma[j])], change)
                arrows.extend((lifts_a[:, c], mapped[:, c]) for c in range(m))
            phi = _extend_multiplicatively(source, target, pairs, arrows)
            if phi is not None and _is_homomorphism(source, target, phi):
                logger.info("explicit isomorphism found after %d candidates", tried)
                return phi
            if not keys:
                break
    return None


@dataclass(frozen=True, eq=False)
class QuotientComparison:
    left: Algebra
    right: Algebra
    dims: Tuple[int, int]
    fingerprints: Tuple[Fingerprint, Fingerprint]
    isomorphism: Optional[np.ndarray]
    level: VerdictLevel

    @property
    def dimensions_match(self) -> bool:
        return self.dims[0] == self.dims[1]


def quotient_compare(
    A: Algebra,
    subset: Sequence[int],
    B: Algebra,
    f_subset: Sequence[int],
    search: SearchSettings = DEFAULT_SEARCH,
) -> QuotientComparison:
    """Compare ``A/AeA`` with ``B/BfB`` as far as the search allows."""
    left, _ = quotient_by_idempotent_ideal(A, subset)
    right, _ = quotient_by_idempotent_ideal(B, f_subset)
    prints = (fingerprint(left), fingerprint(right))
    isomorphism = None
    if left.dim != right.dim:
        level = VerdictLevel.MISMATCH
    elif not fingerprints_match(*prints):
        level = VerdictLevel.DIMENSIONS
    else:
        isomorphism = find_isomorphism(left, right, search)
        level = VerdictLevel.EXPLICIT if isomorphism is not None else VerdictLevel.FINGERPRINTS
    logger.info("quotient comparison: dims %d / %d, %s", left.dim, right.dim, level.value)
    return QuotientComparison(left, right, (left.dim, right.dim), prints, isomorphism, level)


# -- the gluing pipeline -------------------------------------------------------


def _corner_vertices(C: Algebra, A: Algebra) -> Optional[Tuple[int, ...]]:
    if C is A:
        return tuple(range(A.n_idempotents))
    if C.origin is None or C.origin.parent is not A:
        return None
    return tuple(C.origin.vertices)


@dataclass(frozen=True, eq=False)
class PipelineResult:
    algebra: Algebra
    subset: Tuple[int, ...]
    corner_complex: ProjComplex
    corner_report: TiltingReport
    induced: ProjComplex
    trace: CompletionTrace
    trace_check: TraceCheck
    theta: ProjComplex
    report: TiltingReport
    end: EndAlgebra
    f_summands: Tuple[int, ...]
    recollement: RecollementCheck
    comparison: QuotientComparison

    @property
    def f(self) -> np.ndarray:
        return self.end.idempotent_sum(self.f_summands)

    @property
    def verdict(self) -> bool:
        return self.report.verdict and self.recollement.verdict and self.comparison.dimensions_match


def pipeline(
    A: Algebra,
    subset: Sequence[int],
    Q: ProjComplex,
    n: int,
    search: SearchSettings = DEFAULT_SEARCH,
) -> PipelineResult:
    """Glue a tilting complex over ``eAe`` to one over ``A`` and compare the quotients."""
    chosen = _check_subset(A, subset)
    if symmetrizing_form(A, search) is None:
        raise PipelineError("symmetry", f"{A.name} is not symmetric")
    if _corner_vertices(Q.algebra, A) != chosen:
        raise PipelineError("corner-tilting", "complex is not over the requested corner")
    corner_report = verify_tilting(Q, decide=True, search=search)
    if not corner_report.verdict:
        raise PipelineError("corner-tilting", "complex is not tilting over the corner")

    P = induce_up(Q, A)
    if not is_partial_tilting(P).verdict:
        raise PipelineError("partial-tilting", "induced complex has self-extensions")
    r = complex_length(P) - 1
    if n < r:
        raise PipelineError("stage-bound", f"need at least {r} stages, got {n}")

    trace, theta = complete(P, n, search=search)
    trace_check = trace.verify()
    if not trace_check.ok:
        raise PipelineError("completion", f"trace verification failed: {trace_check}")
    report = verify_tilting(theta, trace, search=search)
    if not report.verdict:
        raise PipelineError("verify", f"completion is not tilting: {report.vanishing.nonvanishing}")

    end = end_algebra(theta, parts=list(trace.theta_parts()), basic=True, search=search)
    f_summands = tuple(end.from_part(1))
    if not f_summands:
        raise PipelineError("end-algebra", "no summand of the induced complex survives in the basic version")
    recollement = recollement_tilting_check(theta, chosen, corner_report=corner_report, search=search)
    if not recollement.verdict:
        raise PipelineError(
            "recollement",
            f"summands {list(recollement.first)} on add eA do not restrict to a corner tilting complex",
        )
    comparison = quotient_compare(A, chosen, end.algebra, f_summands, search)
    if not comparison.dimensions_match:
        raise PipelineError("quotient", f"dim A/AeA = {comparison.dims[0]} but dim B/BfB = {comparison.dims[1]}")
    return PipelineResult(
        A, chosen, Q, corner_report, P, trace, trace_check, theta, report, end, f_summands, recollement, comparison
    )


# -- diagnostics ---------------------------------------------------------------


@dataclass(frozen=True)
class AeaCheck:
    image_dim: int
    ideal_dim: int
    quotient_dim: int

    @property
    def ok(self) -> bool:
        return self.image_dim == self.ideal_dim


def aea_cokernel_check(A: Algebra, subset: Sequence[int]) -> AeaCheck:
    """The multiplication ``Ae (x) eA -> A`` has image ``AeA``; its cokernel is ``A/AeA``."""
    F = A.field
    chosen = tuple(sorted(set(subset)))
    left = [b for b, (_, j) in enumerate(A.slots) if j in chosen]
    right = [b for b, (i, _) in enumerate(A.slots) if i in chosen]
    products = [A.multiply(A.basis_vector(x), A.basis_vector(y)) for x in left for y in right]
    image = image_basis(F, np.column_stack(products)) if products else F.zeros((A.dim, 0))
    ideal = idempotent_ideal(A, chosen)
    if image.shape[1] != ideal.shape[1] or (
        ideal.shape[1] and not all(Coordinates(F, ideal).contains(image[:, k]) for k in range(image.shape[1]))
    ):
        raise RuntimeError(f"image of Ae (x) eA has dim {image.shape[1]} but AeA has dim {ideal.shape[1]}")
    return AeaCheck(image.shape[1], ideal.shape[1], A.dim - ideal.shape[1])


@dataclass(frozen=True)
class ExtReport:
    table: Dict[int, int]
    vanishing_up_to: int
    quotient_dim: int
    completion: Dict[int, bool] = field(default_factory=dict)


def quotient_module(A: Algebra, subset: Sequence[int]) -> ModuleRep:
    """``A/AeA`` as a right ``A``-module."""
    Q, projection = quotient_by_idempotent_ideal(A, subset)
    F = A.field
    if Q.dim == 0:
        return ModuleRep(A, F.zeros((A.dim, 0, 0)))
    action = np.stack([Q.right_matrix(projection[:, a]) for a in range(A.dim)])
    return ModuleRep(A, action)


def ext_vanishing_check(
    A: Algebra,
    subset: Sequence[int],
    n: int,
    with_completion: int = 0,
    search: SearchSettings = DEFAULT_SEARCH,
) -> ExtReport:
    """``dim Ext^i_A(A/AeA, eA)`` for ``0 <= i < n``, optionally beside the tilting status of ``Theta_m(eA, A)``."""
    if n < 1:
        raise ValueError("need at least one Ext degree")
    chosen = _check_subset(A, subset)
    M = quotient_module(A, chosen)
    target = stalk(A, chosen)
    table: Dict[int, int] = {}
    if M.dim:
        resolution = projective_resolution(A, M, n)
        for i in range(n):
            table[i] = homotopy_hom(resolution.complex, target, i).dim
    else:
        table = {i: 0 for i in range(n)}
    vanishing = 0
    while vanishing < n and table[vanishing] == 0:
        vanishing += 1

    completion: Dict[int, bool] = {}
    for m in range(1, with_completion + 1):
        trace, theta = complete(target, m, search=search)
        completion[m] = verify_tilting(theta, trace, search=search).verdict
    logger.info("Ext table for %s: %s", A.name, table)
    return ExtReport(table, vanishing, M.dim, completion)

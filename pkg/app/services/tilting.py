"""Partial tilting certificates, the iterated completion and tilting verdicts.

The completion works with a normalized copy of the input: the minimal
complex shifted so that its top nonzero degree is 0, written as the direct
sum of its indecomposable summands. With ``r`` the support width, stage ``n``
looks at ``Hom_K(P, Delta_{n-1}[r - n + 1])`` as a right module over
``End_K(P)``, covers it by summands of ``P`` and cones the resulting map
into ``Delta_{n-1}``. The candidate after ``n`` stages is
``Delta_n (+) P[n - r]``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import cached_property
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form

from ..config import DEFAULT_SEARCH, SearchSettings
from .algebra import Algebra, radical_by_representation, symmetrizing_form
from .complexes import (
    ChainMap,
    Cone,
    DirectSum,
    HomComplex,
    HomotopyHomSpace,
    Minimization,
    ProjComplex,
    cohomology_dims,
    compose,
    cone,
    direct_sum_all,
    homotopy_hom,
    identity_map,
    induced_cohomology_map,
    minimize,
    shift,
    stalk,
    validate,
    zero_map,
)
from .decomposition import (
    block_residues,
    decompose,
    indecomposables_isomorphic,
    iso_test,
)
from .exactlin import Coordinates, is_invertible, nullspace, rank
from .modules import ModuleRep, TopDecomposition, top_and_min_generators

logger = logging.getLogger(__name__)


class NotSymmetricError(RuntimeError):
    """Raised when an operation valid only over symmetric algebras meets another one."""


class DegenerateComplexError(ValueError):
    """Raised when completion is asked for a zero or contractible complex."""


class GenerationMode(str, Enum):
    WITNESS = "witness"
    DECIDED = "decided"
    HEURISTIC = "heuristic"


# -- Hom tables ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class PartialTiltingCert:
    complex: ProjComplex
    table: Dict[int, int]
    verdict: bool

    @property
    def nonvanishing(self) -> List[int]:
        return [n for n, dim in sorted(self.table.items()) if n != 0 and dim]


def hom_table(X: ProjComplex, Y: ProjComplex) -> Dict[int, int]:
    """``n -> dim Hom_K(X, Y[n])`` over the window where it can be nonzero."""
    X = minimize(X).complex
    Y = minimize(Y).complex
    if X.is_zero or Y.is_zero:
        return {}
    hom = HomComplex(X, Y)
    return {n: homotopy_hom(X, Y, n, hom).dim for n in hom.window()}


def is_partial_tilting(X: ProjComplex) -> PartialTiltingCert:
    minimal = minimize(X).complex
    if minimal.is_zero:
        return PartialTiltingCert(minimal, {}, True)
    w = minimal.width
    hom = HomComplex(minimal, minimal)
    table = {n: homotopy_hom(minimal, minimal, n, hom).dim for n in range(-w, w + 1)}
    verdict = all(dim == 0 for n, dim in table.items() if n != 0)
    logger.info("partial tilting check over %s: %s", X.algebra.name, "yes" if verdict else "no")
    return PartialTiltingCert(minimal, table, verdict)


def complex_length(X: ProjComplex) -> int:
    """Span of the degrees with nonzero cohomology; 0 for contractible complexes."""
    nonzero = [d for d, dim in cohomology_dims(X).items() if dim]
    if not nonzero:
        return 0
    return max(nonzero) - min(nonzero) + 1


def support_width(X: ProjComplex) -> int:
    return minimize(X).complex.width


# -- endomorphism algebras ----------------------------------------------------


@dataclass(frozen=True, eq=False)
class EndAlgebra:
    """``End_K`` of a direct sum of indecomposables, with a basis of realized maps.

    Slot ``(k, l)`` holds ``Hom_K(Z_l, Z_k)`` and the product is composition,
    ``x . y = x o y``.
    """

    algebra: Algebra
    summands: Tuple[ProjComplex, ...]
    total: DirectSum
    spaces: Dict[Tuple[int, int], HomotopyHomSpace]
    offsets: Dict[Tuple[int, int], int]
    types: Tuple[Tuple[int, ...], ...]
    origins: Tuple[Tuple[int, ...], ...] = ()

    @property
    def complex(self) -> ProjComplex:
        return self.total.complex

    def block_map(self, k: int, l: int, coords: np.ndarray) -> ChainMap:
        """The map ``Z_l -> Z_k`` with the given coordinates, placed into the sum."""
        inner = self.spaces[(k, l)].element(coords)
        return compose(self.total.inclusion(k), compose(inner, self.total.projection(l)))

    def realize(self, coords: np.ndarray) -> ChainMap:
        F = self.algebra.field
        out = zero_map(self.complex, self.complex)
        for (k, l), space in self.spaces.items():
            start = self.offsets[(k, l)]
            piece = coords[start : start + space.dim]
            if space.dim and not F.is_zero(piece):
                out = out + self.block_map(k, l, piece)
        return out

    @cached_property
    def basis_maps(self) -> List[ChainMap]:
        return [self.realize(self.algebra.basis_vector(a)) for a in range(self.algebra.dim)]

    def classify(self, f: ChainMap) -> np.ndarray:
        """Coordinates of the homotopy class of an endomorphism of the sum."""
        F = self.algebra.field
        out = F.zeros(self.algebra.dim)
        for (k, l), space in self.spaces.items():
            if not space.dim:
                continue
            piece = compose(self.total.projection(k), compose(f, self.total.inclusion(l)))
            coords = space.classify(piece)
            if coords is None:
                raise ValueError("not a chain map")
            start = self.offsets[(k, l)]
            out[start : start + space.dim] = coords
        return out

    def idempotent_sum(self, indices: Sequence[int]) -> np.ndarray:
        F = self.algebra.field
        total = self.algebra.zero()
        for k in indices:
            total = total + self.algebra.idempotents[k]
        return F.reduce(total)

    def from_part(self, part: int) -> List[int]:
        """Summand indices whose type occurs in the given part."""
        return [k for k, parts in enumerate(self.origins) if part in parts]


def _group_types(summands: Sequence[ProjComplex]) -> Tuple[Tuple[int, ...], ...]:
    groups: List[List[int]] = []
    for k, Z in enumerate(summands):
        for group in groups:
            if indecomposables_isomorphic(summands[group[0]], Z):
                group.append(k)
                break
        else:
            groups.append([k])
    return tuple(tuple(g) for g in groups)


def end_algebra(
    theta: ProjComplex,
    parts: Optional[Sequence[ProjComplex]] = None,
    basic: bool = False,
    search: SearchSettings = DEFAULT_SEARCH,
    name: Optional[str] = None,
) -> EndAlgebra:
    """``End_K(theta)`` with one distinguished idempotent per indecomposable summand.

    With ``parts`` the summands are collected part by part, so callers can
    tell which idempotents come from which part. ``basic`` keeps one summand
    per isomorphism type.
    """
    A = theta.algebra
    F = A.field
    pieces = list(parts) if parts is not None else [theta]
    summands: List[ProjComplex] = []
    origins: List[Tuple[int, ...]] = []
    for index, piece in enumerate(pieces):
        found = decompose(piece, search).summands
        summands.extend(s.complex for s in found)
        origins.extend([(index,)] * len(found))
    types = _group_types(summands)
    if basic:
        summands = [summands[group[0]] for group in types]
        origins = [tuple(sorted({origins[k][0] for k in group})) for group in types]
        types = tuple((k,) for k in range(len(summands)))
    total = direct_sum_all(summands, algebra=A)

    m = len(summands)
    spaces: Dict[Tuple[int, int], HomotopyHomSpace] = {}
    offsets: Dict[Tuple[int, int], int] = {}
    labels: List[str] = []
    slots: List[Tuple[int, int]] = []
    offset = 0
    for k in range(m):
        for l in range(m):
            space = homotopy_hom(summands[l], summands[k], 0)
            spaces[(k, l)] = space
            offsets[(k, l)] = offset
            labels.extend(f"T{k + 1}<-T{l + 1}#{i}" for i in range(space.dim))
            slots.extend([(k, l)] * space.dim)
            offset += space.dim
    dim = offset

    elements = {key: space.basis for key, space in spaces.items()}
    table = F.zeros((dim, dim, dim))
    for (k, l), left in elements.items():
        for (l2, m2), right in elements.items():
            if l2 != l or not left or not right:
                continue
            target = spaces[(k, m2)]
            start = offsets[(k, m2)]
            for i, x in enumerate(left):
                for j, y in enumerate(right):
                    coords = target.classify(compose(x, y))
                    table[offsets[(k, l)] + i, offsets[(l, m2)] + j, start : start + target.dim] = coords

    idempotents = []
    for k in range(m):
        e = F.zeros(dim)
        coords = spaces[(k, k)].classify(identity_map(summands[k]))
        e[offsets[(k, k)] : offsets[(k, k)] + spaces[(k, k)].dim] = coords
        idempotents.append(e)

    placeholder = EndAlgebra(
        algebra=Algebra(F, tuple(labels), table, tuple(idempotents), tuple(slots), tuple(f"T{k + 1}" for k in range(m))),
        summands=tuple(summands),
        total=total,
        spaces=spaces,
        offsets=offsets,
        types=types,
        origins=tuple(origins),
    )
    matrices = [block_residues(total.complex, f) for f in placeholder.basis_maps]
    radical = radical_by_representation(F, matrices) if dim else F.zeros((0, 0))
    algebra = Algebra(
        field=F,
        labels=tuple(labels),
        table=table,
        idempotents=tuple(idempotents),
        slots=tuple(slots),
        vertex_names=tuple(f"T{k + 1}" for k in range(m)),
        name=name or f"End({A.name} complex)",
        radical_hint=radical,
    )
    logger.info("End algebra: %d summands, %d types, dim %d", m, len(types), dim)
    return replace(placeholder, algebra=algebra)


# -- completion ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Stage:
    index: int
    degree: int
    previous: ProjComplex
    module: ModuleRep
    top: Optional[TopDecomposition]
    cover_summands: Tuple[int, ...]
    cover: ProjComplex
    map: Optional[ChainMap]
    cone: Optional[Cone]
    minimization: Optional[Minimization]
    delta: ProjComplex
    transition: ChainMap

    @property
    def trivial(self) -> bool:
        return self.map is None


@dataclass(frozen=True)
class TraceCheck:
    cones: bool
    minimizations: bool
    covers_minimal: bool
    vanishing: bool
    stability: bool
    vanishing_tables: Dict[int, Dict[int, int]] = field(default_factory=dict)
    stability_records: List[Dict[str, int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.cones and self.minimizations and self.covers_minimal and self.vanishing and self.stability


@dataclass(frozen=True, eq=False)
class CompletionTrace:
    algebra: Algebra
    source: ProjComplex
    normalized: ProjComplex
    top_degree: int
    r: int
    base: ProjComplex
    base_is_algebra: bool
    end: EndAlgebra
    stages: Tuple[Stage, ...] = ()

    @property
    def length(self) -> int:
        return len(self.stages)

    def delta(self, n: int) -> ProjComplex:
        if n == 0:
            return self.base
        return self.stages[n - 1].delta

    def theta_parts(self, n: Optional[int] = None) -> Tuple[ProjComplex, ProjComplex]:
        n = self.length if n is None else n
        return self.delta(n), shift(self.normalized, n - self.r)

    def theta(self, n: Optional[int] = None) -> ProjComplex:
        return direct_sum_all(list(self.theta_parts(n)), algebra=self.algebra).complex

    def ladder(self) -> List[Dict[str, Any]]:
        """Triangles ``P_n[-k] -> Delta_{n-1} -> Delta_n`` exhibiting the base in thick(theta)."""
        names = self.algebra.vertex_names
        records = []
        for stage in self.stages:
            records.append(
                {
                    "stage": stage.index,
                    "degree": stage.degree,
                    "module_dim": stage.module.dim,
                    "cover": [f"T{k + 1}" for k in stage.cover_summands],
                    "delta_terms": {
                        str(d): [names[v] for v in vertices] for d, vertices in sorted(stage.delta.terms.items())
                    },
                }
            )
        return records

    def cover_is_minimal(self, stage: Stage) -> bool:
        """``(+) e_k B0 -> V`` is onto with kernel inside ``(+) e_k rad B0``."""
        if stage.top is None:
            return stage.module.dim == 0
        B0 = self.end.algebra
        F = B0.field
        V = stage.module
        columns, blocks = [], []
        for kappa, g in stage.top.generators():
            rows = B0.row_block(kappa)
            blocks.append(rows)
            for b in rows:
                columns.append(V.act(g, B0.basis_vector(int(b))))
        matrix = np.column_stack(columns)
        if rank(F, matrix) != V.dim:
            return False
        kernel = nullspace(F, matrix)
        radical = Coordinates(F, B0.radical()) if B0.radical().shape[1] else None
        for k in range(kernel.shape[1]):
            start = 0
            for rows in blocks:
                x = B0.zero()
                x[rows] = kernel[start : start + len(rows), k]
                start += len(rows)
                if F.is_zero(x):
                    continue
                if radical is None or not radical.contains(x):
                    return False
        return True

    def vanishing_table(self, n: int) -> Dict[int, int]:
        delta = self.delta(n)
        if delta.is_zero:
            return {}
        hom = HomComplex(self.normalized, delta)
        return {i: homotopy_hom(self.normalized, delta, i, hom).dim for i in hom.window()}

    def verify(self) -> TraceCheck:
        cones_ok = True
        minimizations_ok = True
        covers_ok = True
        for stage in self.stages:
            validate(stage.delta)
            covers_ok = covers_ok and self.cover_is_minimal(stage)
            if stage.trivial:
                continue
            again = cone(stage.map)
            cones_ok = cones_ok and again.complex.equals(stage.cone.complex)
            minimizations_ok = minimizations_ok and stage.minimization.verify()

        tables: Dict[int, Dict[int, int]] = {}
        vanishing_ok = True
        for n in range(max(self.r, 0), self.length + 1):
            table = self.vanishing_table(n)
            tables[n] = table
            vanishing_ok = vanishing_ok and all(dim == 0 for i, dim in table.items() if i != self.r - n)

        records: List[Dict[str, int]] = []
        stability_ok = True
        for n in range(self.length + 1):
            carried = identity_map(self.delta(n))
            for j in range(1, self.length - n + 1):
                carried = compose(self.stages[n + j - 1].transition, carried)
                later = self.delta(n + j)
                top = max(self.delta(n).hi, later.hi)
                for t in range(self.r - n + 1, top + 1):
                    induced = induced_cohomology_map(carried, t)
                    iso = induced.shape[0] == induced.shape[1] and (
                        induced.shape[0] == 0 or is_invertible(self.algebra.field, induced)
                    )
                    records.append({"stage": n, "later": n + j, "degree": t, "dim": int(induced.shape[1]), "iso": int(iso)})
                    stability_ok = stability_ok and iso
        return TraceCheck(cones_ok, minimizations_ok, covers_ok, vanishing_ok, stability_ok, tables, records)


def _module_over_end(space: HomotopyHomSpace, end: EndAlgebra) -> ModuleRep:
    """``Hom_K(P, Y[k])`` as a right ``End_K(P)``-module, ``v . b = v o b``."""
    B0 = end.algebra
    F = B0.field
    action = F.zeros((B0.dim, space.dim, space.dim))
    basis = space.basis
    for a, b in enumerate(end.basis_maps):
        for j, v in enumerate(basis):
            action[a, :, j] = space.classify(compose(v, b))
    return ModuleRep(B0, action)


def delta_step(trace: CompletionTrace, search: SearchSettings = DEFAULT_SEARCH) -> CompletionTrace:
    """Run the next completion stage and return the extended trace."""
    A = trace.algebra
    n = trace.length + 1
    k = trace.r - n + 1
    previous = trace.delta(n - 1)
    P = trace.normalized
    space = homotopy_hom(P, previous, k)
    module = _module_over_end(space, trace.end)
    if module.dim == 0:
        logger.info("stage %d: Hom_K(P, Delta[%d]) = 0, nothing to cover", n, k)
        stage = Stage(
            index=n,
            degree=k,
            previous=previous,
            module=module,
            top=None,
            cover_summands=(),
            cover=ProjComplex.zero(A),
            map=None,
            cone=None,
            minimization=None,
            delta=previous,
            transition=identity_map(previous),
        )
        return replace(trace, stages=trace.stages + (stage,))

    top = top_and_min_generators(trace.end.algebra, module, classes=trace.end.types)
    generators = top.generators()
    kappas = tuple(kappa for kappa, _ in generators)
    parts = [trace.end.summands[kappa] for kappa in kappas]
    cover_sum = direct_sum_all(parts, algebra=A)
    components = [
        compose(space.element(g), trace.end.total.inclusion(kappa)) for kappa, g in generators
    ]
    combined = cover_sum.copair(components)
    g_n = combined.as_degree_zero()
    triangle = cone(g_n)
    minimization = minimize(triangle.complex)
    delta = minimization.complex
    transition = compose(minimization.forward, triangle.inclusion)
    logger.info(
        "stage %d: V dim %d, top %s, Delta has %d terms",
        n,
        module.dim,
        top.per_type(),
        sum(len(v) for v in delta.terms.values()),
    )
    stage = Stage(
        index=n,
        degree=k,
        previous=previous,
        module=module,
        top=top,
        cover_summands=kappas,
        cover=cover_sum.complex,
        map=g_n,
        cone=triangle,
        minimization=minimization,
        delta=delta,
        transition=transition,
    )
    return replace(trace, stages=trace.stages + (stage,))


def start_trace(
    P: ProjComplex,
    base: Optional[ProjComplex] = None,
    search: SearchSettings = DEFAULT_SEARCH,
) -> CompletionTrace:
    A = P.algebra
    minimal = minimize(P).complex
    if minimal.is_zero:
        raise DegenerateComplexError("cannot complete a zero or contractible complex")
    s = minimal.hi
    normalized = shift(minimal, s)
    r = normalized.width
    end = end_algebra(normalized, search=search)
    if base is None:
        start = stalk(A)
    else:
        if base.algebra is not A:
            raise ValueError("base complex lives over a different algebra")
        start = minimize(base).complex
    return CompletionTrace(
        algebra=A,
        source=P,
        normalized=end.complex,
        top_degree=s,
        r=r,
        base=start,
        base_is_algebra=base is None,
        end=end,
    )


def complete(
    P: ProjComplex,
    n: int,
    base: Optional[ProjComplex] = None,
    search: SearchSettings = DEFAULT_SEARCH,
) -> Tuple[CompletionTrace, ProjComplex]:
    """Stages ``1..n`` starting from ``base`` (the algebra by default); returns the trace and theta."""
    if n < 0:
        raise ValueError("number of stages must be non-negative")
    trace = start_trace(P, base, search)
    logger.info("completion over %s: r = %d, top degree %d, %d stages", P.algebra.name, trace.r, trace.top_degree, n)
    for _ in range(n):
        trace = delta_step(trace, search)
    return trace, trace.theta()


# -- verdicts -----------------------------------------------------------------


@dataclass(frozen=True)
class CriterionResult:
    holds: bool
    r: int
    positive_cohomology: Dict[int, int]

    def __bool__(self) -> bool:
        return self.holds


def _require_symmetric(A: Algebra, search: SearchSettings) -> None:
    if symmetrizing_form(A, search) is None:
        raise NotSymmetricError(f"{A.name} carries no symmetrizing form")


def tilting_criterion_symmetric(P: ProjComplex, search: SearchSettings = DEFAULT_SEARCH) -> CriterionResult:
    """Over a symmetric algebra: the completion is tilting iff ``H^i(Delta_r) = 0`` for ``i > 0``."""
    _require_symmetric(P.algebra, search)
    if not is_partial_tilting(P).verdict:
        raise ValueError("the criterion applies to partial tilting complexes")
    trace, _ = complete(P, support_width(P), search=search)
    delta = trace.delta(trace.r)
    positive = {d: dim for d, dim in cohomology_dims(delta).items() if d > 0 and dim}
    return CriterionResult(not positive, trace.r, positive)


def grothendieck_class(X: ProjComplex) -> List[int]:
    """Class vector with isomorphic vertices merged, one coordinate per indecomposable projective."""
    counts = X.class_vector()
    return [sum(counts[v] for v in members) for members in X.algebra.idempotent_classes]


def lattice_spans(vectors: Sequence[Sequence[int]], rank_needed: int) -> bool:
    """Whether integer vectors span ``Z^rank_needed`` (all invariant factors are units)."""
    if rank_needed == 0:
        return True
    if len(vectors) < rank_needed:
        return False
    snf = smith_normal_form(Matrix(vectors), domain=ZZ)
    diagonal = [abs(int(snf[i, i])) for i in range(min(snf.shape))]
    return diagonal.count(1) >= rank_needed


@dataclass(frozen=True, eq=False)
class TiltingReport:
    complex: ProjComplex
    vanishing: PartialTiltingCert
    generation_mode: GenerationMode
    generation: bool
    n_types: int
    n_algebra: int
    lattice_spans: bool
    witness: Optional[List[Dict[str, Any]]] = None
    missing_types: int = 0

    @property
    def verdict(self) -> bool:
        return self.vanishing.verdict and self.generation


def verify_tilting(
    theta: ProjComplex,
    trace: Optional[CompletionTrace] = None,
    decide: bool = False,
    search: SearchSettings = DEFAULT_SEARCH,
) -> TiltingReport:
    """Self-Hom vanishing plus a generation verdict.

    Generation is witnessed by the completion ladder when ``trace`` built
    ``theta`` from the algebra, decided exactly over a symmetric algebra when
    ``decide`` is set, and otherwise checked only through necessary
    conditions (type count and Grothendieck lattice).
    """
    A = theta.algebra
    certificate = is_partial_tilting(theta)
    decomposition = decompose(certificate.complex, search)
    n_types = decomposition.n_types
    n_algebra = len(A.idempotent_classes)
    vectors = [grothendieck_class(decomposition.summands[t[0]].complex) for t in decomposition.types]
    spans = lattice_spans(vectors, n_algebra)

    if trace is not None and trace.base_is_algebra:
        produced = trace.theta()
        if not (theta.equals(produced) or iso_test(theta, produced, search)):
            raise ValueError("trace does not produce the given complex")
        report = TiltingReport(
            theta, certificate, GenerationMode.WITNESS, True, n_types, n_algebra, spans, witness=trace.ladder()
        )
    elif decide:
        _require_symmetric(A, search)
        generation, missing = False, 0
        if certificate.verdict and not certificate.complex.is_zero:
            own_trace, _ = complete(certificate.complex, certificate.complex.width, search=search)
            delta = own_trace.delta(own_trace.r)
            found = decompose(delta, search)
            representatives = [decomposition.summands[t[0]].complex for t in decomposition.types]
            for members in found.types:
                Z = found.summands[members[0]].complex
                if not any(indecomposables_isomorphic(Z, R) for R in representatives):
                    missing += 1
            generation = missing == 0
        report = TiltingReport(
            theta, certificate, GenerationMode.DECIDED, generation, n_types, n_algebra, spans, missing_types=missing
        )
    else:
        generation = n_types == n_algebra and spans
        report = TiltingReport(theta, certificate, GenerationMode.HEURISTIC, generation, n_types, n_algebra, spans)
    logger.info(
        "tilting verdict %s (generation %s, %d/%d types)",
        report.verdict,
        report.generation_mode.value,
        n_types,
        n_algebra,
    )
    return report


def count_indec_types(X: ProjComplex, search: SearchSettings = DEFAULT_SEARCH) -> int:
    return decompose(minimize(X).complex, search).n_types


def bongartz_extend_length2(P: ProjComplex, search: SearchSettings = DEFAULT_SEARCH) -> ProjComplex:
    """One completion stage for a partial tilting complex of length at most two."""
    _require_symmetric(P.algebra, search)
    if support_width(P) > 1:
        raise ValueError("length-two extension needs a complex supported in two degrees")
    if not is_partial_tilting(P).verdict:
        raise ValueError("input is not partial tilting")
    trace, theta = complete(P, 1, search=search)
    report = verify_tilting(theta, trace, search=search)
    if not report.verdict:
        raise RuntimeError(f"completion of a length-two partial tilting complex failed: {report.vanishing.table}")
    return theta

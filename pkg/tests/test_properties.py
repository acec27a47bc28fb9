"""Seeded randomized checks over the two symmetric sample algebras."""

import itertools

import numpy as np
import pytest

from app.services.complexes import (
    HomComplex,
    HomotopyOracle,
    cone,
    direct_sum_all,
    homotopy_hom,
    minimize,
    shift,
    stalk,
    zero_map,
)
from app.services.decomposition import decompose, indecomposables_isomorphic
from app.services.formats import load_algebra
from app.services.tilting import (
    complete,
    complex_length,
    count_indec_types,
    is_partial_tilting,
    support_width,
    tilting_criterion_symmetric,
    verify_tilting,
)
from conftest import SAMPLES, two_term_complex

ALGEBRAS = ["sn2", "nakayama3"]


@pytest.fixture(scope="module", params=ALGEBRAS)
def algebra(request):
    return load_algebra(str(SAMPLES / f"{request.param}.alg"))


def _random_two_term(A, seed):
    rng = np.random.default_rng(1000 + seed)
    n = A.n_idempotents
    lower = [int(v) for v in rng.integers(0, n, size=int(rng.integers(1, 3)))]
    upper = [int(v) for v in rng.integers(0, n, size=int(rng.integers(1, 3)))]
    return two_term_complex(A, lower, upper, seed)


def _random_three_term(A, seed):
    """Cone of a random chain map between two random two-term complexes, in degrees -2..0."""
    X, Y = _random_two_term(A, seed), _random_two_term(A, seed + 300)
    space = homotopy_hom(X, Y, 0)
    if space.dim:
        rng = np.random.default_rng(2000 + seed)
        f = space.element(A.field.random(rng, space.dim))
    else:
        f = zero_map(X, Y)
    return cone(f).complex


def _random_complex(A, seed, terms):
    return _random_two_term(A, seed) if terms == 2 else _random_three_term(A, seed)


def _partial_tilting_of_width_one(A, seeds=range(120), cap=12):
    found = []
    for seed in seeds:
        cert = is_partial_tilting(_random_two_term(A, seed))
        if cert.verdict and cert.complex.width == 1:
            found.append(cert.complex)
        if len(found) >= cap:
            break
    return found


@pytest.fixture(scope="module")
def length_two_pool():
    """Width-one minimal partial tilting complexes, keyed by algebra name."""
    return {name: _partial_tilting_of_width_one(load_algebra(str(SAMPLES / f"{name}.alg"))) for name in ALGEBRAS}


@pytest.fixture(scope="module")
def partial_tilting_samples(algebra):
    """Minimal two-term partial tilting complexes, plus the indecomposable projectives."""
    samples = [stalk(algebra, [v]) for v in range(algebra.n_idempotents)]
    return samples + _partial_tilting_of_width_one(algebra, range(40), 12 - len(samples))


@pytest.mark.parametrize("terms", [(2, 2), (2, 3), (3, 2), (3, 3)])
@pytest.mark.parametrize("seed", range(8))
def test_hom_duality(algebra, seed, terms):
    X = _random_complex(algebra, seed, terms[0])
    Y = _random_complex(algebra, seed + 500, terms[1])
    for n in HomComplex(X, Y).window():
        assert homotopy_hom(X, Y, n).dim == homotopy_hom(Y, X, -n).dim


@pytest.mark.parametrize("terms", [(2, 2), (2, 3), (3, 3)])
@pytest.mark.parametrize("seed", range(6))
def test_oracle_equivalence(algebra, seed, terms):
    X = _random_complex(algebra, seed, terms[0])
    Y = _random_complex(algebra, seed + 200, terms[1])
    hom = HomComplex(X, Y)
    oracle = HomotopyOracle(X, Y)
    for n in hom.window():
        space = homotopy_hom(X, Y, n, hom)
        assert oracle.dim(n) == space.dim
        assert oracle.same_span(space)


def test_three_term_complexes_reach_width_two(algebra):
    widths = [_random_three_term(algebra, seed).width for seed in range(8)]
    assert all(w == 2 for w in widths)


def test_samples_are_usable(partial_tilting_samples, algebra):
    assert len(partial_tilting_samples) > algebra.n_idempotents
    assert all(support_width(P) <= 1 for P in partial_tilting_samples)


def test_length_two_pool_is_large_enough(length_two_pool):
    assert sum(len(pool) for pool in length_two_pool.values()) >= 20
    for pool in length_two_pool.values():
        assert all(complex_length(P) == 2 for P in pool)


def test_length_two_completion_is_tilting(partial_tilting_samples):
    for P in partial_tilting_samples:
        trace, theta = complete(P, 1)
        check = trace.verify()
        assert check.ok, (P, check)
        report = verify_tilting(theta, trace)
        assert report.verdict, (P, report.vanishing.table)
        assert report.witness is not None


def test_tilting_iff_enough_types(partial_tilting_samples, algebra):
    n_algebra = len(algebra.idempotent_classes)
    for P in partial_tilting_samples:
        decided = verify_tilting(P, decide=True).verdict
        assert decided == (count_indec_types(P) == n_algebra), P


def _types(X):
    found = decompose(minimize(X).complex)
    return [found.summands[group[0]].complex for group in found.types]


def _closure_reaches_projectives(P, rounds=3, max_types=10, max_width=2):
    """Grow indecomposable types of ``P`` by cones of Hom-basis maps and of their sums.

    Types are kept up to shift with top degree 0. True as soon as every ``e_vA`` turns up.
    """
    A = P.algebra
    wanted = [stalk(A, [v]) for v in range(A.n_idempotents)]
    types = []

    def add(Z):
        Z = shift(Z, Z.hi)
        if Z.width > max_width or len(types) >= max_types:
            return None
        if any(indecomposables_isomorphic(Z, T) for T in types):
            return None
        types.append(Z)
        return Z

    def reached():
        return all(any(indecomposables_isomorphic(W, T) for T in types if T.width == 0) for W in wanted)

    fresh = [Z for Z in map(add, _types(P)) if Z is not None]
    for _ in range(rounds):
        if reached():
            return True
        fresh_ids = {id(Z) for Z in fresh}
        new = []
        for X, Y in itertools.product(list(types), repeat=2):
            if id(X) not in fresh_ids and id(Y) not in fresh_ids:
                continue
            hom = HomComplex(Y, X)
            for n in hom.window():
                maps = homotopy_hom(Y, X, n, hom).basis
                candidates = [f.as_degree_zero() for f in maps]
                if len(maps) > 1:
                    candidates.append(direct_sum_all([Y] * len(maps)).copair(maps).as_degree_zero())
                for f in candidates:
                    new.extend(Z for Z in map(add, _types(cone(f).complex)) if Z is not None)
        fresh = new
        if not fresh:
            break
    return reached()


def test_bounded_closure_matches_type_count(partial_tilting_samples, algebra):
    n_algebra = len(algebra.idempotent_classes)
    outcomes = []
    for P in partial_tilting_samples[:8]:
        enough = count_indec_types(P) == n_algebra
        assert _closure_reaches_projectives(P) == enough, P
        outcomes.append(enough)
    assert not all(outcomes)


def test_closure_of_a_single_projective_misses_the_others(sn2):
    assert not _closure_reaches_projectives(stalk(sn2, [0]))
    assert _closure_reaches_projectives(stalk(sn2))


@pytest.fixture(scope="module")
def criterion_samples(length_two_pool):
    samples = []
    for name in ALGEBRAS:
        pool = length_two_pool[name]
        A = pool[0].algebra if pool else load_algebra(str(SAMPLES / f"{name}.alg"))
        for v in range(A.n_idempotents):
            samples.append(stalk(A, [v]))
            samples.append(minimize(complete(stalk(A, [v]), 2)[0].delta(2)).complex)
        samples.extend(pool[:8])
    return samples


def test_criterion_matches_completion(criterion_samples):
    lengths = [complex_length(P) for P in criterion_samples]
    assert len(criterion_samples) >= 20
    assert set(lengths) == {1, 2, 3}
    for P in criterion_samples:
        criterion = tilting_criterion_symmetric(P)
        for n in (criterion.r, criterion.r + 1):
            trace, theta = complete(P, n)
            assert verify_tilting(theta, trace).verdict == criterion.holds, (P, n)

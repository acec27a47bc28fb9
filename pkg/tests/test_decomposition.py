from app.config import SearchSettings
from app.services import decomposition
from app.services.complexes import ProjComplex, amat_zeros, compose, cone, direct_sum, identity_map, shift, stalk
from app.services.decomposition import decompose, idempotent_map, indecomposables_isomorphic, iso_test


def test_regular_stalk_splits_into_vertex_projectives(sn2):
    result = decompose(stalk(sn2))
    assert result.n_types == 2
    assert [s.complex.terms for s in result.summands] == [{0: (0,)}, {0: (1,)}]


def test_repeated_projective_is_one_type(sn2):
    result = decompose(stalk(sn2, [0, 0]))
    assert len(result.summands) == 2
    assert result.n_types == 1
    assert result.multiplicities()[0][1] == 2


def test_repeated_projective_over_rationals(sn2_q):
    result = decompose(stalk(sn2_q, [1, 1, 0]))
    assert len(result.summands) == 3
    assert result.n_types == 2


def test_two_term_complex_is_indecomposable(two_term):
    result = decompose(two_term)
    assert len(result.summands) == 1
    assert result.summands[0].complex is two_term


def test_mixed_sum_and_summand_idempotents(two_term, sn2):
    X = direct_sum(two_term, stalk(sn2, [0], degree=-1))
    result = decompose(X)
    assert result.n_types == 2
    for summand in result.summands:
        eps = idempotent_map(result.complex, summand)
        assert compose(eps, eps).equals(eps)
        assert compose(summand.projection, summand.inclusion).equals(identity_map(summand.complex))
    assert {s.complex.width for s in result.summands} == {0, 1}


def test_decompose_minimizes_first(two_term):
    C = cone(identity_map(two_term)).complex
    assert decompose(C).n_types == 0


def test_iso_test_up_to_scaling_and_shift(sn2, two_term, element):
    F = sn2.field
    d = amat_zeros(sn2, 1, 1)
    d[0, 0] = F.reduce(5 * element(sn2, "b"))
    scaled = ProjComplex.build(sn2, {-1: (0,), 0: (1,)}, {-1: d})
    assert iso_test(two_term, scaled)
    assert iso_test(two_term, shift(shift(two_term, 1), -1))
    assert not iso_test(stalk(sn2, [0]), stalk(sn2, [1]))
    assert not iso_test(two_term, shift(two_term, 1))


def test_indecomposables_compare_by_maps(sn2, two_term):
    assert indecomposables_isomorphic(stalk(sn2, [0]), stalk(sn2, [0]))
    assert not indecomposables_isomorphic(stalk(sn2, [0]), two_term)


def test_iso_test_on_permuted_sums(sn2, two_term):
    left = direct_sum(two_term, stalk(sn2, [0], degree=-1))
    right = direct_sum(stalk(sn2, [0], degree=-1), two_term)
    assert iso_test(left, right)


def test_iso_test_matches_decompositions_when_sampling_is_off(sn2, monkeypatch):
    calls = []
    original = decomposition._same_decomposition

    def spy(X, Y, search):
        calls.append((X, Y))
        return original(X, Y, search)

    monkeypatch.setattr(decomposition, "_same_decomposition", spy)
    no_sampling = SearchSettings(sampling_trials=0)
    # Each unit cycle hits one summand only, so none is invertible on e1A^2.
    assert iso_test(stalk(sn2, [0, 0]), stalk(sn2, [0, 0]), no_sampling)
    assert len(calls) == 1

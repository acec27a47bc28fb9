import pytest

from app.services.algebra import center_dimension, symmetrizing_form
from app.services.complexes import ProjComplex, amat_zeros, cone, direct_sum, identity_map, stalk
from app.services.decomposition import iso_test
from app.services.tilting import (
    DegenerateComplexError,
    GenerationMode,
    NotSymmetricError,
    bongartz_extend_length2,
    complete,
    complex_length,
    count_indec_types,
    end_algebra,
    grothendieck_class,
    is_partial_tilting,
    lattice_spans,
    support_width,
    tilting_criterion_symmetric,
    verify_tilting,
)


@pytest.fixture
def self_extension(sn2, element):
    """``e1A --ab--> e1A``, which has a degree-one self-extension."""
    d = amat_zeros(sn2, 1, 1)
    d[0, 0] = element(sn2, "a b")
    return ProjComplex.build(sn2, {-1: (0,), 0: (0,)}, {-1: d})


def test_partial_tilting_certificates(sn2, two_term, self_extension):
    stalk_cert = is_partial_tilting(stalk(sn2))
    assert stalk_cert.verdict
    assert stalk_cert.table == {0: 6}
    cert = is_partial_tilting(two_term)
    assert cert.verdict
    assert cert.table == {-1: 0, 0: 2, 1: 0}
    bad = is_partial_tilting(self_extension)
    assert not bad.verdict
    assert 1 in bad.nonvanishing


def test_length_and_width(sn2, two_term):
    assert complex_length(stalk(sn2)) == 1
    assert complex_length(two_term) == 2
    assert complex_length(cone(identity_map(two_term)).complex) == 0
    assert support_width(two_term) == 1
    assert support_width(cone(identity_map(two_term)).complex) == 0


def test_count_types(sn2, two_term):
    assert count_indec_types(stalk(sn2)) == 2
    assert count_indec_types(stalk(sn2, [0, 0, 0])) == 1
    assert count_indec_types(two_term) == 1


def test_completion_of_the_algebra_at_stage_zero(sn2):
    trace, theta = complete(stalk(sn2), 0)
    assert trace.r == 0
    assert trace.length == 0
    assert theta.terms == {0: (0, 1, 0, 1)}
    assert iso_test(theta, direct_sum(stalk(sn2), stalk(sn2)))


def test_completion_of_the_algebra_at_stage_one(sn2):
    trace, theta = complete(stalk(sn2), 1)
    assert trace.delta(1).is_zero
    assert iso_test(theta, stalk(sn2, degree=-1))
    assert trace.verify().ok


def test_completion_of_e1A(sn2, two_term):
    trace, theta = complete(stalk(sn2, [0]), 1)
    stage = trace.stages[0]
    assert stage.degree == 0
    assert stage.module.dim == 3
    assert trace.end.algebra.dim == 2
    assert stage.top.per_type() == [(0, 2)]
    assert trace.cover_is_minimal(stage)
    assert iso_test(trace.delta(1), two_term)
    assert iso_test(theta, direct_sum(two_term, stalk(sn2, [0], degree=-1)))
    assert count_indec_types(theta) == 2


def test_completion_trace_verifies(sn2):
    trace, theta = complete(stalk(sn2, [0]), 1)
    check = trace.verify()
    assert check.ok
    assert set(check.vanishing_tables) == {0, 1}
    report = verify_tilting(theta, trace)
    assert report.verdict
    assert report.generation_mode is GenerationMode.WITNESS
    assert report.witness[0]["cover"] == ["T1", "T1"]
    assert report.witness[0]["delta_terms"] == {"-1": ["1"], "0": ["2"]}


def test_second_stage_stays_tilting(sn2):
    trace, theta = complete(stalk(sn2, [0]), 2)
    assert trace.stages[1].degree == -1
    assert trace.stages[1].module.dim == 1
    assert trace.delta(2).terms == {-2: (0,), -1: (0,), 0: (1,)}
    assert trace.verify().ok
    assert verify_tilting(theta, trace).verdict
    assert count_indec_types(theta) == 2


def test_heuristic_generation(sn2):
    single = verify_tilting(stalk(sn2, [0]))
    assert single.generation_mode is GenerationMode.HEURISTIC
    assert single.vanishing.verdict
    assert not single.verdict
    assert single.n_types == 1 and single.n_algebra == 2
    _, theta = complete(stalk(sn2), 0)
    assert verify_tilting(theta).verdict


def test_decided_generation(sn2, two_term):
    lonely = verify_tilting(two_term, decide=True)
    assert lonely.generation_mode is GenerationMode.DECIDED
    assert not lonely.verdict
    assert lonely.missing_types == 1
    _, theta = complete(stalk(sn2, [0]), 1)
    assert verify_tilting(theta, decide=True).verdict
    assert not verify_tilting(stalk(sn2, [0]), decide=True).verdict


def test_decided_generation_needs_symmetry(radsq_cycle):
    with pytest.raises(NotSymmetricError):
        verify_tilting(stalk(radsq_cycle, [0]), decide=True)


def test_symmetric_criterion(sn2, two_term, radsq_cycle, self_extension):
    result = tilting_criterion_symmetric(two_term)
    assert result
    assert result.r == 1
    assert result.positive_cohomology == {}
    assert tilting_criterion_symmetric(stalk(sn2, [1])).holds
    with pytest.raises(NotSymmetricError):
        tilting_criterion_symmetric(stalk(radsq_cycle, [0]))
    with pytest.raises(ValueError):
        tilting_criterion_symmetric(self_extension)


def test_endomorphism_algebra_of_completion(sn2):
    trace, theta = complete(stalk(sn2, [0]), 1)
    end = end_algebra(theta, parts=list(trace.theta_parts()))
    assert end.algebra.dim == 6
    assert len(end.summands) == 2
    assert end.from_part(1) != []
    end.algebra.validate()
    assert center_dimension(end.algebra) == center_dimension(sn2)
    assert symmetrizing_form(end.algebra) is not None


def test_basic_end_algebra_drops_repeats(sn2):
    _, theta = complete(stalk(sn2), 0)
    full = end_algebra(theta)
    assert full.algebra.dim == 24
    basic = end_algebra(theta, basic=True)
    assert basic.algebra.dim == 6
    assert basic.types == ((0,), (1,))


def test_end_algebra_classifies_its_basis(sn2):
    end = end_algebra(stalk(sn2))
    F = end.algebra.field
    for a, f in enumerate(end.basis_maps):
        assert F.equal(end.classify(f), end.algebra.basis_vector(a))


def test_grothendieck_lattice(two_term):
    assert grothendieck_class(two_term) == [-1, 1]
    assert lattice_spans([[1, 0], [0, 1]], 2)
    assert lattice_spans([[-1, 1], [1, 0]], 2)
    assert not lattice_spans([[2, 0], [0, 1]], 2)
    assert not lattice_spans([[1, 1]], 2)
    assert lattice_spans([], 0)


def test_bongartz_extension(sn2):
    theta = bongartz_extend_length2(stalk(sn2, [1]))
    assert count_indec_types(theta) == 2
    assert is_partial_tilting(theta).verdict


def test_bongartz_extension_rejects_long_complexes(sn2):
    trace, _ = complete(stalk(sn2, [0]), 2)
    with pytest.raises(ValueError):
        bongartz_extend_length2(trace.delta(2))


def test_degenerate_inputs(two_term, dual_numbers):
    with pytest.raises(DegenerateComplexError):
        complete(cone(identity_map(two_term)).complex, 1)
    with pytest.raises(ValueError):
        complete(two_term, -1)
    with pytest.raises(ValueError, match="different algebra"):
        complete(two_term, 1, base=stalk(dual_numbers))

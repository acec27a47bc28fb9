import pytest

from app.services.modules import (
    hom_module,
    projective_module,
    regular_module,
    top_and_min_generators,
)


def test_projective_modules_are_modules(sn2):
    P = projective_module(sn2, [0])
    assert P.dim == 3
    P.validate()
    R = regular_module(sn2)
    assert R.dim == 6
    R.validate()


def test_hom_between_projectives_is_peirce(sn2):
    P1 = projective_module(sn2, [0])
    P2 = projective_module(sn2, [1])
    both = projective_module(sn2, [0, 1])
    assert len(hom_module(sn2, P1, P1)) == 2
    assert len(hom_module(sn2, P1, P2)) == 1
    assert len(hom_module(sn2, P2, P1)) == 1
    assert len(hom_module(sn2, P1, both)) == 3


def test_hom_matrices_commute_with_the_action(sn2):
    F = sn2.field
    P1 = projective_module(sn2, [0])
    P2 = projective_module(sn2, [1])
    for phi in hom_module(sn2, P1, P2):
        for b in range(sn2.dim):
            x = sn2.basis_vector(b)
            assert F.equal(F.dot(phi, P1.element_matrix(x)), F.dot(P2.element_matrix(x), phi))


def test_radical_submodule_and_quotient(sn2):
    F = sn2.field
    P1 = projective_module(sn2, [0])
    radical_part = F.eye(3)[:, [1, 2]]
    sub = P1.submodule(radical_part)
    assert sub.dim == 2
    sub.validate()
    top, projection = P1.quotient(radical_part)
    assert top.dim == 1
    assert projection.shape == (1, 3)
    top.validate()


def test_non_stable_span_is_rejected(sn2):
    F = sn2.field
    P1 = projective_module(sn2, [0])
    with pytest.raises(ValueError):
        P1.submodule(F.eye(3)[:, [0]])


def test_top_of_regular_module(sn2):
    top = top_and_min_generators(sn2, regular_module(sn2))
    assert top.per_type() == [(0, 1), (1, 1)]
    assert top.dimension == 2
    assert len(top.generators()) == 2


def test_top_counts_multiplicity(sn2):
    top = top_and_min_generators(sn2, projective_module(sn2, [1, 0, 1]))
    assert top.per_type() == [(0, 1), (1, 2)]

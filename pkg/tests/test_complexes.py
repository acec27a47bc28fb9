import pytest

from app.services.complexes import (
    ComplexValidationError,
    HomotopyOracle,
    ProjComplex,
    amat_zeros,
    cohomology_dims,
    compose,
    cone,
    direct_sum_all,
    hom_dimensions,
    homotopy_hom,
    identity_map,
    minimize,
    projective_resolution,
    shift,
    stalk,
    validate,
)
from app.services.recollement import quotient_module


def _single_entry(A, lower, upper, value):
    d = amat_zeros(A, 1, 1)
    d[0, 0] = value
    return ProjComplex.build(A, {-1: (lower,), 0: (upper,)}, {-1: d})


def test_two_term_complex_is_valid(two_term):
    validate(two_term)
    assert two_term.terms == {-1: (0,), 0: (1,)}
    assert two_term.width == 1
    assert two_term.is_minimal()


def test_entry_outside_its_peirce_block(sn2, element):
    X = _single_entry(sn2, 0, 1, element(sn2, "a"))
    with pytest.raises(ComplexValidationError, match="is not in"):
        validate(X)


def test_square_of_differential_must_vanish(sn2, element):
    first = amat_zeros(sn2, 1, 1)
    first[0, 0] = element(sn2, "b")
    second = amat_zeros(sn2, 1, 1)
    second[0, 0] = element(sn2, "a")
    X = ProjComplex.build(sn2, {-1: (0,), 0: (1,), 1: (0,)}, {-1: first, 0: second})
    with pytest.raises(ComplexValidationError, match="nonzero"):
        validate(X)


def test_shift_moves_terms_and_flips_sign(two_term):
    F = two_term.algebra.field
    moved = shift(two_term, 1)
    assert moved.terms == {-2: (0,), -1: (1,)}
    assert F.equal(moved.diff(-2), F.reduce(-two_term.diff(-1)))
    assert shift(moved, -1).equals(two_term)


def test_cohomology_of_two_term_complex(two_term):
    assert cohomology_dims(two_term) == {-1: 1, 0: 1}


def test_cohomology_of_stalk(sn2):
    assert cohomology_dims(stalk(sn2)) == {0: 6}


def test_hom_between_stalks(sn2):
    assert homotopy_hom(stalk(sn2), stalk(sn2), 0).dim == 6
    e1 = stalk(sn2, [0])
    assert homotopy_hom(e1, e1, 0).dim == 2
    assert homotopy_hom(e1, stalk(sn2, [1]), 0).dim == 1


def test_self_hom_of_two_term_complex(two_term):
    assert hom_dimensions(two_term, two_term) == {-1: 0, 0: 2, 1: 0}


def test_hom_to_shifted_projective(two_term, sn2):
    e1_shifted = stalk(sn2, [0], degree=-1)
    assert homotopy_hom(e1_shifted, two_term, 0).dim == 1
    assert homotopy_hom(two_term, e1_shifted, 0).dim == 1


@pytest.mark.parametrize("n", [-1, 0, 1])
def test_oracle_agrees_with_peirce_hom(two_term, n):
    space = homotopy_hom(two_term, two_term, n)
    oracle = HomotopyOracle(two_term, two_term)
    assert oracle.dim(n) == space.dim
    assert oracle.same_span(space)


def test_basis_maps_are_chain_maps(two_term):
    space = homotopy_hom(two_term, two_term, 0)
    assert all(f.is_chain_map() for f in space.basis)
    assert not space.is_null_homotopic(identity_map(two_term))


def test_cone_of_identity_is_contractible(two_term):
    C = cone(identity_map(two_term)).complex
    validate(C)
    assert C.terms == {-2: (0,), -1: (1, 0), 0: (1,)}
    m = minimize(C)
    assert m.complex.is_zero
    assert m.verify()


def test_cone_structure_maps_are_chain_maps(sn2, two_term):
    f = homotopy_hom(stalk(sn2, [0], degree=-1), two_term, 0).basis[0]
    c = cone(f)
    validate(c.complex)
    assert c.inclusion.is_chain_map()
    assert c.projection.is_chain_map()
    assert compose(c.inclusion, f).is_chain_map()


def test_minimize_cancels_invertible_entries(sn2, element):
    F = sn2.field
    unit_plus_radical = F.reduce(element(sn2, "@1") + 3 * element(sn2, "a b"))
    X = _single_entry(sn2, 0, 0, unit_plus_radical)
    m = minimize(X)
    assert m.complex.is_zero
    assert m.verify()


def test_minimize_keeps_minimal_complex(two_term):
    m = minimize(two_term)
    assert m.complex.equals(two_term)
    assert m.verify()


def test_minimize_random_complex(sn2, random_complex):
    X = random_complex(sn2, (0, 1), (0, 1), seed=5)
    validate(X)
    m = minimize(X)
    assert m.complex.is_minimal()
    assert m.verify()
    assert cohomology_dims(m.complex) == {d: dim for d, dim in cohomology_dims(X).items() if d in m.complex.terms}


def test_direct_sum_structure_maps(two_term, sn2):
    ds = direct_sum_all([two_term, stalk(sn2, [0], degree=-1)])
    assert ds.complex.terms == {-1: (0, 0), 0: (1,)}
    back = compose(ds.projection(0), ds.inclusion(0))
    assert back.equals(identity_map(ds.parts[0]))
    assert compose(ds.projection(1), ds.inclusion(0)).is_zero()


def test_projective_resolution_of_simple(sn2):
    S2 = quotient_module(sn2, [0])
    assert S2.dim == 1
    resolution = projective_resolution(sn2, S2, 2)
    validate(resolution.complex)
    assert resolution.complex.terms == {0: (1,), -1: (0,), -2: (0,)}
    dims = cohomology_dims(resolution.complex)
    assert dims[0] == 1
    assert dims[-1] == 0

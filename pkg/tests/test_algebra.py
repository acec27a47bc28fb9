import numpy as np
import pytest

from app.services.algebra import (
    corner,
    center_dimension,
    idempotent_ideal,
    peirce,
    primitive_idempotents,
    quotient_by_idempotent_ideal,
    radical,
    radical_layers,
    symmetrizing_form,
)
from app.services.formats import SpecParseError, parse_algebra


def test_symmetric_nakayama_basis(sn2):
    assert sn2.dim == 6
    assert sn2.labels == ("@1", "@2", "a", "b", "a b", "b a")
    assert sn2.n_idempotents == 2
    sn2.validate()


def test_paths_compose_left_to_right(sn2, element):
    F = sn2.field
    a, b = element(sn2, "a"), element(sn2, "b")
    assert F.equal(sn2.multiply(a, b), element(sn2, "a b"))
    assert F.equal(sn2.multiply(b, a), element(sn2, "b a"))
    assert F.is_zero(sn2.multiply(a, a))
    assert F.is_zero(sn2.multiply(a, element(sn2, "b a")))


def test_unit_is_sum_of_vertex_idempotents(sn2, element):
    F = sn2.field
    expected = F.reduce(element(sn2, "@1") + element(sn2, "@2"))
    assert F.equal(sn2.unit, expected)


def test_peirce_blocks(sn2):
    assert peirce(sn2, 0, 0).shape == (6, 2)
    assert peirce(sn2, 0, 1).shape == (6, 1)
    assert [sn2.labels[b] for b in sn2.block(1, 0)] == ["b"]


def test_radical_and_layers(sn2, nakayama3, dual_numbers):
    assert radical(sn2).shape == (6, 4)
    assert radical_layers(sn2) == [2, 2, 2]
    assert nakayama3.dim == 12
    assert radical_layers(nakayama3) == [3, 3, 3, 3]
    assert radical_layers(dual_numbers) == [1, 1]


def test_center_dimensions(sn2, dual_numbers, radsq_cycle):
    assert center_dimension(sn2) == 3
    assert center_dimension(dual_numbers) == 2
    # Only the unit and nothing else commutes with both arrows.
    assert center_dimension(radsq_cycle) == 1


def test_symmetrizing_forms(sn2, nakayama3, dual_numbers, radsq_cycle):
    for A in (sn2, nakayama3, dual_numbers):
        form = symmetrizing_form(A)
        assert form is not None
        x = A.basis_vector(2 % A.dim)
        y = A.basis_vector(A.dim - 1)
        assert form(A.field, A.multiply(x, y)) == form(A.field, A.multiply(y, x))
    assert symmetrizing_form(radsq_cycle) is None


def test_symmetrizing_form_over_rationals(sn2_q):
    assert symmetrizing_form(sn2_q) is not None


def test_corner_algebra(sn2):
    C = corner(sn2, [0])
    assert C.dim == 2
    assert C.labels == ("@1", "a b")
    assert C.origin.parent is sn2
    assert C.origin.vertices == (0,)
    assert corner(sn2, [0, 1]) is sn2
    with pytest.raises(ValueError):
        corner(sn2, [])
    with pytest.raises(IndexError):
        corner(sn2, [2])


def test_idempotent_ideal_and_quotient(sn2, nakayama3):
    assert idempotent_ideal(sn2, [0]).shape[1] == 5
    Q, projection = quotient_by_idempotent_ideal(sn2, [0])
    assert Q.dim == 1
    assert Q.vertex_names == ("2",)
    assert projection.shape == (1, 6)
    assert quotient_by_idempotent_ideal(sn2, [])[0].dim == 6
    assert quotient_by_idempotent_ideal(sn2, [0, 1])[0].dim == 0
    N, _ = quotient_by_idempotent_ideal(nakayama3, [0])
    assert N.dim == 3
    assert sorted(N.labels) == ["@2", "@3", "b"]


def test_primitive_idempotents_are_the_vertices(sn2):
    pieces = primitive_idempotents(sn2)
    assert len(pieces) == 2
    assert all(np.array_equal(p, e) for p, e in zip(pieces, sn2.idempotents))


def test_idempotent_classes_of_basic_algebra(sn2):
    assert sn2.idempotent_classes == ((0,), (1,))


def test_residue_normalized_at_vertex(sn2, element):
    assert sn2.residue_value(element(sn2, "@1"), 0) == 1
    assert sn2.residue_value(element(sn2, "a b"), 0) == 0


def test_non_composable_relation_is_reported():
    text = "vertices 1 2\narrow a 1 2\nrelation a a\nbound 2\n"
    with pytest.raises(SpecParseError, match="not composable"):
        parse_algebra(text)


def test_relations_must_kill_long_paths():
    text = "vertices 1\narrow x 1 1\nbound 2\n"
    with pytest.raises(SpecParseError, match="do not annihilate"):
        parse_algebra(text)

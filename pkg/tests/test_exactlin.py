from fractions import Fraction

import numpy as np
import pytest

from app.services.exactlin import (
    Coordinates,
    extend_basis,
    image_basis,
    inverse,
    is_invertible,
    make_field,
    nullspace,
    quotient_basis,
    rank,
    rref,
    solve,
)


@pytest.mark.parametrize("descriptor", ["4", "1", "banana"])
def test_make_field_rejects_bad_descriptors(descriptor):
    with pytest.raises(ValueError):
        make_field(descriptor)


def test_make_field_accepts_aliases():
    assert make_field("QQ").characteristic == 0
    assert make_field(" Rational ").name == "QQ"
    assert make_field(7).name == "F_7"


def test_prime_field_reduces_and_inverts(gf101):
    assert gf101.scalar(-1) == 100
    assert gf101.scalar(Fraction(1, 2)) == 51
    assert gf101.inverse(2) == 51
    with pytest.raises(ZeroDivisionError):
        gf101.inverse(101)


def test_parse_scalars(gf101, qq):
    assert qq.parse("-3/4") == Fraction(-3, 4)
    assert gf101.parse("1/2") == 51
    with pytest.raises(ValueError):
        qq.parse("x")
    with pytest.raises(ValueError):
        gf101.parse("1/0")


def test_rref_pivots_over_rationals(qq):
    m = qq.array([[2, 4, 1], [1, 2, 1]])
    reduced, pivots = rref(qq, m)
    assert pivots == [0, 2]
    assert reduced[0, 1] == Fraction(2)
    assert reduced[1, 2] == 1


@pytest.mark.parametrize("field_name", ["gf101", "qq"])
def test_rank_and_nullspace_agree(field_name, request):
    F = request.getfixturevalue(field_name)
    m = F.array([[1, 2, 3], [2, 4, 6], [0, 1, 1]])
    assert rank(F, m) == 2
    kernel = nullspace(F, m)
    assert kernel.shape == (3, 1)
    assert F.is_zero(F.dot(m, kernel))


def test_nullspace_of_empty_rows_is_everything(qq):
    assert nullspace(qq, qq.zeros((0, 3))).shape == (3, 3)


def test_solve_consistent_and_inconsistent(qq):
    m = qq.array([[1, 1], [0, 2]])
    x = solve(qq, m, qq.array([3, 4]))
    assert list(x) == [Fraction(1), Fraction(2)]
    assert solve(qq, qq.array([[1, 1], [1, 1]]), qq.array([1, 2])) is None


def test_solve_matrix_right_hand_side(gf101):
    m = gf101.array([[1, 0], [0, 3]])
    x = solve(gf101, m, gf101.eye(2))
    assert gf101.equal(gf101.dot(m, x), gf101.eye(2))


def test_inverse_and_singular(gf101, qq):
    m = gf101.array([[2, 1], [1, 1]])
    assert gf101.equal(gf101.dot(m, inverse(gf101, m)), gf101.eye(2))
    assert not is_invertible(qq, qq.array([[1, 2], [2, 4]]))
    with pytest.raises(ZeroDivisionError):
        inverse(qq, qq.array([[1, 2], [2, 4]]))


def test_image_basis_keeps_original_columns(qq):
    m = qq.array([[1, 2, 0], [0, 0, 1]])
    basis = image_basis(qq, m)
    assert basis.shape == (2, 2)
    assert qq.equal(basis, m[:, [0, 2]])


def test_extend_basis_prefers_earlier_candidates(qq):
    sub = qq.array([[1], [0], [0]])
    candidates = qq.eye(3)
    extension = extend_basis(qq, sub, candidates)
    assert qq.equal(extension, candidates[:, [1, 2]])


def test_coordinates_roundtrip_and_membership(gf101):
    basis = gf101.array([[1, 0], [1, 1], [0, 1]])
    coords = Coordinates(gf101, basis)
    v = gf101.reduce(3 * basis[:, 0] + 5 * basis[:, 1])
    assert list(coords.of(v)) == [3, 5]
    assert not coords.contains(gf101.array([1, 0, 0]))
    with pytest.raises(ValueError):
        Coordinates(gf101, gf101.array([[1, 2], [1, 2]]))


def test_prime_field_random_is_seeded(gf101):
    a = gf101.random(np.random.default_rng(3), (4,))
    b = gf101.random(np.random.default_rng(3), (4,))
    assert np.array_equal(a, b)
    assert a.min() >= 0 and a.max() < 101


def test_quotient_basis_completes_the_subspace(qq):
    sub = qq.array([[1], [1], [0]])
    reps = quotient_basis(qq, sub, 3)
    assert qq.equal(reps, qq.array([[0, 0], [1, 0], [0, 1]]))
    assert rank(qq, np.hstack([sub, reps])) == 3
    assert quotient_basis(qq, qq.zeros((3, 0)), 3).shape == (3, 3)

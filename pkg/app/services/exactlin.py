"""Exact dense linear algebra over a prime field or the rationals.

Matrices are plain numpy arrays. Over F_p they are ``int64`` arrays kept
reduced into ``[0, p)``; over the rationals they are ``object`` arrays of
:class:`fractions.Fraction`. Every function takes the :class:`Field` first so
that the arithmetic rule travels with the call rather than with the data.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, List, Optional, Sequence, Tuple, Union

import numpy as np
from sympy import isprime

logger = logging.getLogger(__name__)

# Dense dot products over F_p sum up to a few thousand residues squared.
MAX_PRIME = 2**21

Shape = Union[int, Tuple[int, ...]]


class FieldMismatchError(ValueError):
    """Raised when objects defined over different fields are combined."""


class Field:
    """Arithmetic rules for one ground field."""

    name: str = "field"
    characteristic: int = 0
    dtype: Any = object

    def array(self, data: Any) -> np.ndarray:
        raise NotImplementedError

    def zeros(self, shape: Shape) -> np.ndarray:
        raise NotImplementedError

    def reduce(self, arr: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def scalar(self, value: Any) -> Any:
        raise NotImplementedError

    def inverse(self, value: Any) -> Any:
        raise NotImplementedError

    def random(self, rng: np.random.Generator, shape: Shape) -> np.ndarray:
        raise NotImplementedError

    def to_json(self, value: Any) -> Union[int, str]:
        raise NotImplementedError

    def eye(self, n: int) -> np.ndarray:
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i] = self.scalar(1)
        return out

    def unit_vector(self, n: int, index: int) -> np.ndarray:
        out = self.zeros(n)
        out[index] = self.scalar(1)
        return out

    def dot(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.reduce(np.dot(a, b))

    def is_zero(self, arr: Any) -> bool:
        return not np.any(arr)

    def equal(self, a: np.ndarray, b: np.ndarray) -> bool:
        return a.shape == b.shape and self.is_zero(self.reduce(a - b))

    def parse(self, token: str) -> Any:
        """Parse ``3``, ``-2`` or ``1/2`` into a field scalar."""
        try:
            return self.scalar(Fraction(token.strip()))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a scalar: {token!r}") from exc

    def check(self, other: "Field") -> None:
        if self != other:
            raise FieldMismatchError(f"field {other.name} used with {self.name}")


@dataclass(frozen=True)
class PrimeField(Field):
    """The prime field F_p with residues stored as ``int64``."""

    p: int

    def __post_init__(self) -> None:
        if not isprime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.p >= MAX_PRIME:
            raise ValueError(f"prime {self.p} exceeds the supported bound {MAX_PRIME}")

    @property
    def name(self) -> str:  # type: ignore[override]
        return f"F_{self.p}"

    @property
    def characteristic(self) -> int:  # type: ignore[override]
        return self.p

    @property
    def dtype(self) -> Any:  # type: ignore[override]
        return np.int64

    def array(self, data: Any) -> np.ndarray:
        arr = np.asarray(data)
        if arr.dtype == object:
            flat = [self.scalar(v) for v in arr.ravel()]
            return np.array(flat, dtype=np.int64).reshape(arr.shape)
        return np.asarray(arr, dtype=np.int64) % self.p

    def zeros(self, shape: Shape) -> np.ndarray:
        return np.zeros(shape, dtype=np.int64)

    def reduce(self, arr: np.ndarray) -> np.ndarray:
        return np.asarray(arr, dtype=np.int64) % self.p

    def scalar(self, value: Any) -> int:
        if isinstance(value, Fraction):
            return (value.numerator * self.inverse(value.denominator)) % self.p
        return int(value) % self.p

    def inverse(self, value: Any) -> int:
        residue = int(value) % self.p
        if residue == 0:
            raise ZeroDivisionError(f"division by zero in {self.name}")
        return pow(residue, -1, self.p)

    def random(self, rng: np.random.Generator, shape: Shape) -> np.ndarray:
        return rng.integers(0, self.p, size=shape, dtype=np.int64)

    def to_json(self, value: Any) -> int:
        return int(value) % self.p


@dataclass(frozen=True)
class RationalField(Field):
    """The rationals, with exact :class:`Fraction` entries."""

    @property
    def name(self) -> str:  # type: ignore[override]
        return "QQ"

    @property
    def characteristic(self) -> int:  # type: ignore[override]
        return 0

    def array(self, data: Any) -> np.ndarray:
        arr = np.asarray(data, dtype=object)
        out = np.empty(arr.shape, dtype=object)
        for idx, value in np.ndenumerate(arr):
            out[idx] = Fraction(value)
        return out

    def zeros(self, shape: Shape) -> np.ndarray:
        return np.full(shape, Fraction(0), dtype=object)

    def reduce(self, arr: np.ndarray) -> np.ndarray:
        return np.asarray(arr, dtype=object)

    def scalar(self, value: Any) -> Fraction:
        return Fraction(value)

    def inverse(self, value: Any) -> Fraction:
        value = Fraction(value)
        if value == 0:
            raise ZeroDivisionError("division by zero in QQ")
        return 1 / value

    def random(self, rng: np.random.Generator, shape: Shape) -> np.ndarray:
        return self.array(rng.integers(-3, 4, size=shape))

    def to_json(self, value: Any) -> Union[int, str]:
        value = Fraction(value)
        if value.denominator == 1:
            return value.numerator
        return f"{value.numerator}/{value.denominator}"


def make_field(descriptor: Union[str, int, Field]) -> Field:
    """Build a field from ``"rational"``/``"QQ"`` or a prime number."""
    if isinstance(descriptor, Field):
        return descriptor
    text = str(descriptor).strip().lower()
    if text in {"rational", "rationals", "q", "qq"}:
        return RationalField()
    try:
        prime = int(text)
    except ValueError as exc:
        raise ValueError(f"unknown field descriptor {descriptor!r}") from exc
    return PrimeField(prime)


def rref(field: Field, m: np.ndarray) -> Tuple[np.ndarray, List[int]]:
    """Reduced row echelon form and the strictly increasing pivot columns."""
    a = field.array(m).copy()
    if a.ndim != 2:
        raise ValueError("rref expects a matrix")
    rows, cols = a.shape
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nonzero = np.nonzero(a[r:, c])[0]
        if nonzero.size == 0:
            continue
        pivot_row = r + int(nonzero[0])
        if pivot_row != r:
            a[[r, pivot_row]] = a[[pivot_row, r]]
        a[r] = field.reduce(a[r] * field.inverse(a[r, c]))
        column = a[:, c].copy()
        column[r] = field.scalar(0)
        others = np.nonzero(column)[0]
        if others.size:
            a[others] = field.reduce(a[others] - np.outer(column[others], a[r]))
        pivots.append(c)
        r += 1
    return a, pivots


def rank(field: Field, m: np.ndarray) -> int:
    m = np.asarray(m)
    if m.size == 0:
        return 0
    return len(rref(field, m)[1])


def nullspace(field: Field, m: np.ndarray) -> np.ndarray:
    """Columns spanning ``{x : m x = 0}``; there are ``cols - rank`` of them."""
    m = np.asarray(m)
    cols = m.shape[1]
    if m.shape[0] == 0:
        return field.eye(cols)
    reduced, pivots = rref(field, m)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = field.zeros((cols, len(free)))
    for k, f in enumerate(free):
        basis[f, k] = field.scalar(1)
        for i, p in enumerate(pivots):
            basis[p, k] = field.reduce(-reduced[i, f])
    return basis


def solve(field: Field, m: np.ndarray, b: np.ndarray) -> Optional[np.ndarray]:
    """A particular solution of ``m x = b``, or ``None`` when inconsistent.

    ``b`` may be a vector or a matrix of right-hand sides.
    """
    m = field.array(m)
    b = field.array(b)
    vector = b.ndim == 1
    rhs = b.reshape(-1, 1) if vector else b
    if m.shape[0] != rhs.shape[0]:
        raise ValueError(f"solve: {m.shape[0]} rows but right-hand side has {rhs.shape[0]}")
    cols = m.shape[1]
    if m.shape[0] == 0:
        x = field.zeros((cols, rhs.shape[1]))
        return x[:, 0] if vector else x
    reduced, pivots = rref(field, np.hstack([m, rhs]))
    if pivots and pivots[-1] >= cols:
        return None
    x = field.zeros((cols, rhs.shape[1]))
    for i, p in enumerate(pivots):
        x[p] = reduced[i, cols:]
    return x[:, 0] if vector else x


def image_basis(field: Field, m: np.ndarray) -> np.ndarray:
    """Independent columns of ``m`` spanning its image (original columns)."""
    m = field.array(m)
    if m.size == 0:
        return field.zeros((m.shape[0], 0))
    _, pivots = rref(field, m)
    return m[:, pivots]


def is_invertible(field: Field, m: np.ndarray) -> bool:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    return rank(field, m) == m.shape[0]


def inverse(field: Field, m: np.ndarray) -> np.ndarray:
    m = field.array(m)
    n = m.shape[0]
    if m.ndim != 2 or m.shape[1] != n:
        raise ValueError(f"cannot invert a {m.shape} matrix")
    if n == 0:
        return field.zeros((0, 0))
    reduced, pivots = rref(field, np.hstack([m, field.eye(n)]))
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return reduced[:, n:]


def complement_indices(field: Field, sub: np.ndarray, ambient_dim: int) -> List[int]:
    """Coordinates whose unit vectors complete ``sub``'s columns to a basis."""
    sub = np.asarray(sub)
    if sub.size == 0:
        return list(range(ambient_dim))
    if sub.shape[0] != ambient_dim:
        raise ValueError(f"subspace lives in dimension {sub.shape[0]}, not {ambient_dim}")
    _, pivots = rref(field, sub.T)
    covered = set(pivots)
    return [j for j in range(ambient_dim) if j not in covered]


def quotient_basis(field: Field, sub: np.ndarray, ambient_dim: int) -> np.ndarray:
    """Coset representatives (unit vectors) spanning a complement of ``sub``."""
    keep = complement_indices(field, sub, ambient_dim)
    return field.eye(ambient_dim)[:, keep]


def extend_basis(field: Field, sub: np.ndarray, candidates: np.ndarray) -> np.ndarray:
    """Columns of ``candidates`` that extend the span of ``sub`` to the joint span.

    The first independent candidates are taken, so the choice is deterministic.
    """
    sub = field.array(sub)
    candidates = field.array(candidates)
    if candidates.size == 0:
        return candidates
    k = sub.shape[1] if sub.ndim == 2 else 0
    joined = np.hstack([sub, candidates]) if k else candidates
    _, pivots = rref(field, joined)
    chosen = [p - k for p in pivots if p >= k]
    return candidates[:, chosen]


def hstack(field: Field, blocks: Sequence[np.ndarray], rows: int) -> np.ndarray:
    """Column concatenation that tolerates an empty block list."""
    blocks = [b for b in blocks if b.shape[1]]
    if not blocks:
        return field.zeros((rows, 0))
    return np.hstack(blocks)


def kron(field: Field, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return field.reduce(np.kron(a, b))


class Coordinates:
    """Coordinates of vectors with respect to fixed independent columns.

    A square invertible block of the basis is inverted once; each lookup is
    then a product plus a membership check.
    """

    def __init__(self, field: Field, basis: np.ndarray) -> None:
        self.field = field
        self.basis = field.array(basis)
        n, k = self.basis.shape
        self.dim = k
        if k == 0:
            self._rows: List[int] = []
            self._inverse = field.zeros((0, 0))
            return
        _, rows = rref(field, self.basis.T)
        if len(rows) != k:
            raise ValueError("basis columns are not independent")
        self._rows = rows
        self._inverse = inverse(field, self.basis[rows, :])

    def of(self, v: np.ndarray) -> Optional[np.ndarray]:
        """Coordinates of ``v`` (vector or matrix of columns), or ``None`` if outside the span."""
        v = self.field.array(v)
        x = self.field.dot(self._inverse, v[self._rows])
        if not self.field.equal(self.field.dot(self.basis, x), v):
            return None
        return x

    def contains(self, v: np.ndarray) -> bool:
        return self.of(v) is not None

    def require(self, v: np.ndarray) -> np.ndarray:
        x = self.of(v)
        if x is None:
            raise ValueError("vector lies outside the coordinate span")
        return x

"""Exact integer linear algebra for component groups.

Matrices hold arbitrary-precision Python ints; elimination runs on numpy object
arrays so that no entry ever goes through a machine integer or a float.

Example:
-------
    snf = smith_normal_form(IntMatrix.from_rows([[2, 0], [0, 3]]))
    assert snf.d == IntMatrix.from_rows([[1, 0], [0, 6]])

    group = quotient(degree_zero_basis(2), IntMatrix.from_rows([[2, -2]]))
    assert str(group) == "Z/2"

"""

import logging
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from itertools import product
from math import prod
from typing import NamedTuple

import numpy as np
from pydantic import NonNegativeInt, conint, dataclasses, field_validator

from aligned_graphs.configuration import DEFAULT_LIMITS
from aligned_graphs.validation import check_limit


@dataclass(frozen=True)
class IntMatrix:
    """An immutable integer matrix in row-major order."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        """Check the shape against the entry count."""
        if self.rows < 0 or self.cols < 0 or len(self.entries) != self.rows * self.cols:
            msg = f"Cannot shape {len(self.entries)} entries as {self.rows}x{self.cols}"
            raise ValueError(msg)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        """Build from a list of rows; ``cols`` is needed only when there are no rows."""
        rows = [tuple(int(x) for x in r) for r in rows]
        width = len(rows[0]) if rows else (cols or 0)
        if any(len(r) != width for r in rows):
            msg = "Rows have different lengths"
            raise ValueError(msg)
        return cls(len(rows), width, tuple(x for r in rows for x in r))

    @classmethod
    def from_array(cls, array: np.ndarray) -> "IntMatrix":
        """Build from a two-dimensional numpy array."""
        rows, cols = array.shape
        return cls(rows, cols, tuple(int(x) for x in array.reshape(-1)))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        """Return the n x n identity."""
        return cls.from_array(_eye(n))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        """Return the zero matrix of the given shape."""
        return cls(rows, cols, (0,) * (rows * cols))

    def to_array(self) -> np.ndarray:
        """Return a fresh numpy object array (safe to mutate)."""
        array = np.empty((self.rows, self.cols), dtype=object)
        for i in range(self.rows):
            for j in range(self.cols):
                array[i, j] = self.entries[i * self.cols + j]
        return array

    def row(self, i: int) -> tuple[int, ...]:
        """Return row ``i``."""
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def tolist(self) -> list[list[int]]:
        """Return the rows as nested lists."""
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "IntMatrix":
        """Return the transpose."""
        return IntMatrix(
            self.cols,
            self.rows,
            tuple(self.entries[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)),
        )

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        """Multiply exactly."""
        if self.cols != other.rows:
            msg = f"Cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
            raise ValueError(msg)
        return IntMatrix(
            self.rows,
            other.cols,
            tuple(
                sum(self.entries[i * self.cols + k] * other.entries[k * other.cols + j] for k in range(self.cols))
                for i in range(self.rows)
                for j in range(other.cols)
            ),
        )

    def determinant(self) -> int:
        """Return the determinant, by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            msg = f"Determinant of a non-square {self.rows}x{self.cols} matrix"
            raise ValueError(msg)
        a = self.tolist()
        n, sign, previous = self.rows, 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
                if swap is None:
                    return 0
                a[k], a[swap] = a[swap], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // previous
            previous = a[k][k]
        return sign * a[n - 1][n - 1] if n else 1

    def is_unimodular(self) -> bool:
        """Whether the matrix is square with determinant +1 or -1."""
        return self.rows == self.cols and abs(self.determinant()) == 1

    def __str__(self) -> str:
        """Render in a stable bracketed form, e.g. ``[[1, 0], [0, 1]]``."""
        return str(self.tolist())


@dataclasses.dataclass(frozen=True)
class InvariantFactors:
    """A finitely generated abelian group Z^free_rank + Z/d_1 + ... + Z/d_k, d_i | d_(i+1)."""

    factors: tuple[conint(ge=2), ...] = ()
    free_rank: NonNegativeInt = 0

    @field_validator("factors")
    @classmethod
    def check_divisibility_chain(cls, value: tuple[int, ...]) -> tuple[int, ...]:
        """Check that each factor divides the next."""
        if any(b % a for a, b in zip(value, value[1:])):
            msg = f"Factors {value} do not form a divisibility chain"
            raise ValueError(msg)
        return value

    @classmethod
    def from_diagonal(cls, diagonal: Sequence[int]) -> "InvariantFactors":
        """Read the group off Smith normal form diagonal entries (0 means a free factor)."""
        return cls(
            factors=tuple(d for d in diagonal if d > 1),
            free_rank=sum(1 for d in diagonal if d == 0),
        )

    @property
    def is_finite(self) -> bool:
        """Whether there is no free part."""
        return self.free_rank == 0

    @property
    def is_trivial(self) -> bool:
        """Whether the group is trivial."""
        return self.is_finite and not self.factors

    @property
    def order(self) -> int | None:
        """Group order, or None when the group is infinite."""
        return prod(self.factors) if self.is_finite else None

    def __str__(self) -> str:
        """Render as ``Z/d1 x Z/d2 x ...``, with ``Z`` or ``Z^r`` for a free part."""
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        parts += [f"Z/{d}" for d in self.factors]
        return " x ".join(parts) or "trivial"

    def to_dict(self) -> dict:
        """Serialize to JSON-compatible types; ``order`` is None for infinite groups."""
        return {
            "group": str(self),
            "factors": list(self.factors),
            "free_rank": self.free_rank,
            "order": self.order,
        }


class SmithNormalForm(NamedTuple):
    """Matrices with ``u @ m @ v == d``; u and v unimodular, d diagonal."""

    u: IntMatrix
    d: IntMatrix
    v: IntMatrix


class HermiteNormalForm(NamedTuple):
    """Matrices with ``u @ m == h``; u unimodular, h in row Hermite form."""

    h: IntMatrix
    u: IntMatrix


def _eye(n: int) -> np.ndarray:
    array = np.zeros((n, n), dtype=object)
    for i in range(n):
        array[i, i] = 1
    return array


def _swap_rows(a: np.ndarray, i: int, j: int) -> None:
    if i != j:
        a[[i, j]] = a[[j, i]]


def _swap_cols(a: np.ndarray, i: int, j: int) -> None:
    if i != j:
        a[:, [i, j]] = a[:, [j, i]]


def _min_abs_position(a: np.ndarray, t: int) -> tuple[int, int] | None:
    best = None
    for i in range(t, a.shape[0]):
        for j in range(t, a.shape[1]):
            if a[i, j] != 0 and (best is None or abs(a[i, j]) < abs(a[best])):
                best = (i, j)
    return best


def _smith(m: IntMatrix) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Return (u, d, v, v_inv) with u @ m @ v == d.

    Pivots are chosen by minimal absolute value; every restart of the inner loop
    strictly lowers the pivot, so the elimination terminates.
    """
    d = m.to_array()
    u, v, v_inv = _eye(m.rows), _eye(m.cols), _eye(m.cols)

    for t in range(min(m.rows, m.cols)):
        while True:
            pivot = _min_abs_position(d, t)
            if pivot is None:
                return u, d, v, v_inv

            _swap_rows(d, t, pivot[0])
            _swap_rows(u, t, pivot[0])
            _swap_cols(d, t, pivot[1])
            _swap_cols(v, t, pivot[1])
            _swap_rows(v_inv, t, pivot[1])

            clean = True
            for i in range(t + 1, m.rows):
                if q := d[i, t] // d[t, t]:
                    d[i] -= q * d[t]
                    u[i] -= q * u[t]
                clean = clean and d[i, t] == 0
            for j in range(t + 1, m.cols):
                if q := d[t, j] // d[t, t]:
                    d[:, j] -= q * d[:, t]
                    v[:, j] -= q * v[:, t]
                    v_inv[t] += q * v_inv[j]
                clean = clean and d[t, j] == 0
            if not clean:
                continue

            offender = next(
                (i for i in range(t + 1, m.rows) for j in range(t + 1, m.cols) if d[i, j] % d[t, t]),
                None,
            )
            if offender is None:
                break
            d[t] += d[offender]
            u[t] += u[offender]

        if d[t, t] < 0:
            d[t] = -d[t]
            u[t] = -u[t]

    return u, d, v, v_inv


def _hermite(m: IntMatrix) -> tuple[np.ndarray, np.ndarray, int]:
    """Return (h, u, rank) with u @ m == h in row Hermite form.

    Pivots are positive, entries above a pivot lie in [0, pivot), and the
    ``rank`` nonzero rows come first.
    """
    h = m.to_array()
    u = _eye(m.rows)
    r = 0

    for c in range(m.cols):
        if r == m.rows:
            break
        while True:
            nonzero = [i for i in range(r, m.rows) if h[i, c] != 0]
            if not nonzero:
                break
            p = min(nonzero, key=lambda i: abs(h[i, c]))
            _swap_rows(h, r, p)
            _swap_rows(u, r, p)
            for i in range(r + 1, m.rows):
                if q := h[i, c] // h[r, c]:
                    h[i] -= q * h[r]
                    u[i] -= q * u[r]
            if all(h[i, c] == 0 for i in range(r + 1, m.rows)):
                break

        if h[r, c] == 0:
            continue
        if h[r, c] < 0:
            h[r] = -h[r]
            u[r] = -u[r]
        for i in range(r):
            if q := h[i, c] // h[r, c]:
                h[i] -= q * h[r]
                u[i] -= q * u[r]
        r += 1

    return h, u, r


def smith_normal_form(m: IntMatrix) -> SmithNormalForm:
    """Compute u, d, v with ``u @ m @ v == d``.

    d is diagonal with non-negative entries d_1 | d_2 | ..., zeros last; u and v
    have determinant +1 or -1.
    """
    u, d, v, _ = _smith(m)
    return SmithNormalForm(IntMatrix.from_array(u), IntMatrix.from_array(d), IntMatrix.from_array(v))


def hermite_normal_form(m: IntMatrix) -> HermiteNormalForm:
    """Compute h, u with ``u @ m == h``, h in row-style Hermite normal form."""
    h, u, _ = _hermite(m)
    return HermiteNormalForm(IntMatrix.from_array(h), IntMatrix.from_array(u))


def kernel_basis(m: IntMatrix) -> IntMatrix:
    """Return a basis of {x : m @ x == 0} as rows, in Hermite normal form.

    The rows of the transforming matrix that kill the transpose span the kernel
    and form a primitive (saturated) basis.
    """
    _, u, rank = _hermite(m.transpose())
    kernel = IntMatrix.from_rows(u[rank:].tolist(), cols=m.cols)
    h, _, _ = _hermite(kernel)
    return IntMatrix.from_array(h)


def degree_zero_basis(n: int) -> IntMatrix:
    """Return a basis of the vectors in Z^n with entries summing to zero."""
    rows = []
    for i in range(n - 1):
        row = [0] * n
        row[i], row[n - 1] = 1, -1
        rows.append(row)
    return IntMatrix.from_rows(rows, cols=n)


def _vector_times(vector: Sequence[int], array: np.ndarray) -> list[int]:
    return [sum(vector[k] * array[k, j] for k in range(len(vector))) for j in range(array.shape[1])]


class QuotientMap:
    """The quotient of a lattice by a sublattice, with a coset classifier.

    Parameters
    ----------
    ambient_basis : IntMatrix
        Linearly independent rows spanning the ambient lattice L
    sub_generators : IntMatrix
        Rows generating a sublattice of L

    Raises
    ------
    ValueError
        The ambient rows are dependent, or a generator is not in L
    """

    def __init__(self, ambient_basis: IntMatrix, sub_generators: IntMatrix) -> None:
        """Express the generators in ambient coordinates and diagonalize."""
        self.log = logging.getLogger(__name__)

        if ambient_basis.cols != sub_generators.cols:
            msg = f"Ambient vectors have length {ambient_basis.cols}, generators {sub_generators.cols}"
            raise ValueError(msg)

        self.ambient = ambient_basis.to_array()
        self._h, self._u, rank = _hermite(ambient_basis)
        if rank != ambient_basis.rows:
            msg = "Ambient basis rows must be linearly independent"
            raise ValueError(msg)

        coordinates = []
        for i in range(sub_generators.rows):
            if (c := self.coordinates(sub_generators.row(i))) is None:
                msg = f"Generator {list(sub_generators.row(i))} is not in the ambient lattice"
                raise ValueError(msg)
            coordinates.append(c)

        rank = ambient_basis.rows
        _, d, self._v, self._v_inv = _smith(IntMatrix.from_rows(coordinates, cols=rank))
        self.moduli = tuple(d[i, i] if i < d.shape[0] else 0 for i in range(rank))
        self.invariant_factors = InvariantFactors.from_diagonal(self.moduli)
        self.log.debug(f"Quotient of rank {rank} by {sub_generators.rows} generators: {self.invariant_factors}")

    def coordinates(self, vector: Sequence[int]) -> list[int] | None:
        """Return c with ``c @ ambient == vector``, or None if vector is not in L."""
        residual = list(vector)
        echelon = []
        for k in range(self._h.shape[0]):
            pc = next(j for j in range(self._h.shape[1]) if self._h[k, j] != 0)
            coefficient, remainder = divmod(residual[pc], self._h[k, pc])
            if remainder:
                return None
            echelon.append(coefficient)
            residual = [r - coefficient * x for r, x in zip(residual, self._h[k])]
        if any(residual):
            return None
        return _vector_times(echelon, self._u)

    def coset_key(self, vector: Sequence[int]) -> tuple[int, ...]:
        """Return a key equal for two vectors of L iff they lie in the same coset.

        Raises
        ------
        ValueError
            The vector is not in the ambient lattice
        """
        if (c := self.coordinates(vector)) is None:
            msg = f"Vector {list(vector)} is not in the ambient lattice"
            raise ValueError(msg)
        y = _vector_times(c, self._v)
        return tuple(yi % m if m else yi for yi, m in zip(y, self.moduli))

    def representatives(self, limit: int | None = DEFAULT_LIMITS.coset_enumeration) -> Iterator[tuple[int, ...]]:
        """Yield one vector per coset, starting with zero.

        Raises
        ------
        ValueError
            The quotient is infinite
        GuardLimitExceededError
            The quotient has more elements than ``limit``
        """
        if not self.invariant_factors.is_finite:
            msg = f"Quotient {self.invariant_factors} is infinite"
            raise ValueError(msg)
        check_limit("coset_enumeration", self.invariant_factors.order, limit)

        for y in product(*(range(m) for m in self.moduli)):
            c = _vector_times(y, self._v_inv)
            yield tuple(_vector_times(c, self.ambient)) if c else (0,) * self.ambient.shape[1]


def quotient(ambient_basis: IntMatrix, sub_generators: IntMatrix) -> InvariantFactors:
    """Return the invariant factors and free rank of ambient / sub.

    Raises
    ------
    ValueError
        The sublattice is not contained in the ambient lattice
    """
    return QuotientMap(ambient_basis, sub_generators).invariant_factors


def coset_representatives(
    ambient_basis: IntMatrix,
    sub_generators: IntMatrix,
    limit: int | None = DEFAULT_LIMITS.coset_enumeration,
) -> list[tuple[int, ...]]:
    """Return one representative per coset of sub in ambient, zero first.

    Raises
    ------
    ValueError
        The quotient is infinite
    GuardLimitExceededError
        The quotient has more elements than ``limit``
    """
    return list(QuotientMap(ambient_basis, sub_generators).representatives(limit=limit))

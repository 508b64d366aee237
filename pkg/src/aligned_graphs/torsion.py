"""Uniform torsion bounds from point counts over finite fields.

A connected commutative group of dimension g over F_q has at most
floor((1 + sqrt(q))^(2g)) points. Reducing a torsion section modulo two primes
of good reduction bounds its order by the product of two such counts.

Example:
-------
    bound_b(1, 2)                                   # 5
    torsion_order_bound(BoundQuery(g=1, N=1))       # 35

"""

import logging
from dataclasses import dataclass
from math import isqrt

from pydantic import NonNegativeInt, PositiveInt, conint, dataclasses, validate_call
from sympy import factorint, nextprime

from aligned_graphs.alignment import neron_model_exists
from aligned_graphs.configuration import DEFAULT_LIMITS
from aligned_graphs.graph import LabelledGraph, jacobian_dimension
from aligned_graphs.validation import check_limit


@dataclass(frozen=True)
class QuadraticInteger:
    """Exact element a + b*sqrt(q) of Z[sqrt(q)]."""

    a: int
    b: int
    q: int

    def _check_same_ring(self, other: "QuadraticInteger") -> None:
        if self.q != other.q:
            msg = f"Cannot combine elements of Z[sqrt({self.q})] and Z[sqrt({other.q})]"
            raise ValueError(msg)

    def __add__(self, other: "QuadraticInteger") -> "QuadraticInteger":
        self._check_same_ring(other)
        return QuadraticInteger(self.a + other.a, self.b + other.b, self.q)

    def __mul__(self, other: "QuadraticInteger") -> "QuadraticInteger":
        self._check_same_ring(other)
        return QuadraticInteger(
            self.a * other.a + self.b * other.b * self.q,
            self.a * other.b + self.b * other.a,
            self.q,
        )

    def __pow__(self, exponent: int) -> "QuadraticInteger":
        if exponent < 0:
            msg = f"Negative exponent: {exponent}"
            raise ValueError(msg)
        result, base = QuadraticInteger(1, 0, self.q), self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    @property
    def norm(self) -> int:
        """Return a^2 - q*b^2."""
        return self.a * self.a - self.q * self.b * self.b

    def floor(self) -> int:
        """Return the largest integer not above a + b*sqrt(q), exactly."""
        root = isqrt(self.b * self.b * self.q)
        if self.b >= 0:
            return self.a + root
        # b*sqrt(q) = -sqrt(b^2 q) lies in [-(root+1), -root], with -root only when exact
        return self.a - root - (root * root != self.b * self.b * self.q)

    def __str__(self) -> str:
        return f"{self.a} + {self.b}*sqrt({self.q})"


def is_prime_power(q: int) -> bool:
    """Return whether ``q`` is p^k for a prime p and k >= 1."""
    return q >= 2 and len(factorint(q)) == 1  # noqa: PLR2004


@validate_call
def bound_b(g: NonNegativeInt, q: conint(ge=2)) -> int:
    """Bound the number of F_q-points of a connected commutative group of dimension g.

    Parameters
    ----------
    g : NonNegativeInt
        Dimension of the group
    q : int
        Size of the finite field, a prime power

    Returns
    -------
    int
        floor((1 + sqrt(q))^(2g)), computed in exact arithmetic

    Raises
    ------
    ValueError
        ``q`` is not a prime power
    """
    if not is_prime_power(q):
        msg = f"Field size must be a prime power, got {q}"
        raise ValueError(msg)
    return (QuadraticInteger(1, 1, q) ** (2 * g)).floor()


def splitting_bounds(g: int, q: int) -> dict[tuple[int, int, int], int]:
    """Bound the point count of each extension shape of a dimension-g group.

    A connected commutative group is an extension of an abelian variety of
    dimension gA by a torus of dimension gT and a unipotent group of dimension
    gU. Keys are ``(gU, gT, gA)`` with gU + gT + gA = g; values are
    q^gU * (q+1)^gT * bound_b(gA, q).
    """
    b = {g_a: bound_b(g_a, q) for g_a in range(g + 1)}
    return {
        (g_u, g_t, g - g_u - g_t): q**g_u * (q + 1) ** g_t * b[g - g_u - g_t]
        for g_u in range(g + 1)
        for g_t in range(g + 1 - g_u)
    }


@validate_call
def dominance_check(
    g: NonNegativeInt,
    q: conint(ge=2),
    limit: PositiveInt | None = DEFAULT_LIMITS.dominance_dimension,
) -> bool:
    """Check that the purely abelian shape gives the largest point count bound.

    Raises
    ------
    GuardLimitExceededError
        ``g`` exceeds ``limit``
    """
    check_limit("dominance_dimension", g, limit)
    table = splitting_bounds(g, q)
    return max(table.values()) == bound_b(g, q) == table[(0, 0, g)]


@dataclasses.dataclass(frozen=True)
class BoundQuery:
    """Dimension, bad-reduction level and degree of a torsion bound question.

    The group scheme is assumed spread out over Z[1/N]; sections are defined
    over number fields of degree at most d.
    """

    g: NonNegativeInt
    N: PositiveInt
    d: PositiveInt = 1


def auxiliary_primes(level: int) -> tuple[int, int]:
    """Return the two smallest primes not dividing ``level``."""
    primes = []
    p = 2
    while len(primes) < 2:  # noqa: PLR2004
        if level % p:
            primes.append(p)
        p = int(nextprime(p))
    return primes[0], primes[1]


def torsion_order_bound(query: BoundQuery) -> int:
    """Bound the order of a torsion section of a g-dimensional group scheme.

    With p < l the two smallest primes of good reduction, a torsion section of
    degree at most d has prime-to-p order at most bound_b(g, p^d) and
    prime-to-l order at most bound_b(g, l^d).
    """
    log = logging.getLogger(__name__)

    p, l = auxiliary_primes(query.N)  # noqa: E741
    bound = bound_b(query.g, p**query.d) * bound_b(query.g, l**query.d)
    log.info(f"Torsion bound for {query}: primes {p}, {l} give {bound}")
    return bound


@dataclasses.dataclass(frozen=True)
class GraphTorsionBound:
    """Torsion bound for the jacobian of a family with the given dual graph."""

    query: BoundQuery
    primes: tuple[PositiveInt, PositiveInt]
    bound: PositiveInt
    applicable: bool

    def to_dict(self) -> dict:
        """Serialize to JSON-compatible types."""
        return {
            "g": self.query.g,
            "N": self.query.N,
            "d": self.query.d,
            "primes": list(self.primes),
            "bound": self.bound,
            "applicable": self.applicable,
        }


def graph_torsion_bound(
    g: LabelledGraph,
    level: int,
    degree: int = 1,
    limit: int | None = DEFAULT_LIMITS.strata_parameters,
) -> GraphTorsionBound:
    """Bound torsion of sections of the jacobian of a family with dual graph ``g``.

    The dimension is the arithmetic genus of the fibre. The bound holds for
    sections extending over the whole base, which requires a Néron model;
    ``applicable`` records whether one exists.
    """
    query = BoundQuery(g=jacobian_dimension(g), N=level, d=degree)
    applicable = neron_model_exists(g, limit=limit).exists
    if not applicable:
        logging.getLogger(__name__).warning("Graph is not aligned: the torsion bound does not apply to this family")
    return GraphTorsionBound(
        query=query,
        primes=auxiliary_primes(level),
        bound=torsion_order_bound(query),
        applicable=applicable,
    )

"""Monomial edge labels.

A label is the ideal generated by a monomial in a fixed, ordered set of
parameters, stored as its exponent vector. The zero vector is the unit label.

Example:
-------
    params = ParameterSet(names=("x", "y"))
    a = Label.from_mapping(params, {"x": 2})
    b = Label.from_mapping(params, {"x": 3})
    assert parallel(a, b)

Notes:
-----
All values are immutable; exponents are arbitrary-precision integers and
parallelism is decided by exact cross-multiplication.

"""

from collections.abc import Iterable, Mapping

from pydantic import NonNegativeInt, constr, dataclasses, field_validator, model_validator


@dataclasses.dataclass(frozen=True)
class ParameterSet:
    """Ordered names of the parameters that labels are monomials in."""

    names: tuple[constr(min_length=1, strict=True), ...] = ()

    @field_validator("names")
    @classmethod
    def check_no_duplicate_names(cls, value: tuple[str, ...]) -> tuple[str, ...]:
        """Check that every parameter name appears once."""
        if duplicates := sorted({n for n in value if value.count(n) > 1}):
            msg = f"Duplicate parameter names: {', '.join(duplicates)}"
            raise ValueError(msg)
        return value

    def __len__(self) -> int:
        """Return the number of parameters."""
        return len(self.names)

    def __iter__(self):  # noqa: ANN204
        """Iterate over parameter names in canonical order."""
        return iter(self.names)

    def __contains__(self, name: object) -> bool:
        """Return whether ``name`` is one of the parameters."""
        return name in self.names

    def index(self, name: str) -> int:
        """Return the position of ``name`` in canonical order."""
        try:
            return self.names.index(name)
        except ValueError as e:
            msg = f"Unknown parameter: {name}"
            raise ValueError(msg) from e

    def restrict(self, keep: Iterable[str]) -> "ParameterSet":
        """Return the parameters in ``keep``, in canonical order.

        Raises
        ------
        ValueError
            ``keep`` names a parameter outside this set
        """
        keep = set(keep)
        if unknown := sorted(keep - set(self.names)):
            msg = f"Cannot keep unknown parameters: {', '.join(unknown)}"
            raise ValueError(msg)
        return ParameterSet(names=tuple(n for n in self.names if n in keep))


@dataclasses.dataclass(frozen=True)
class Label:
    """A principal monomial ideal, as an exponent vector over ``parameters``."""

    parameters: ParameterSet
    exponents: tuple[NonNegativeInt, ...]

    @model_validator(mode="after")
    def check_exponent_count(self) -> "Label":
        """Check that there is one exponent per parameter."""
        if len(self.exponents) != len(self.parameters):
            msg = f"Expected {len(self.parameters)} exponents, got {len(self.exponents)}"
            raise ValueError(msg)
        return self

    @classmethod
    def unit(cls, parameters: ParameterSet) -> "Label":
        """Return the unit label over ``parameters``."""
        return cls(parameters=parameters, exponents=(0,) * len(parameters))

    @classmethod
    def monomial(cls, parameters: ParameterSet, name: str, power: int = 1) -> "Label":
        """Return the label of ``name ** power``."""
        exponents = [0] * len(parameters)
        exponents[parameters.index(name)] = power
        return cls(parameters=parameters, exponents=tuple(exponents))

    @classmethod
    def from_mapping(cls, parameters: ParameterSet, mapping: Mapping[str, int]) -> "Label":
        """Build a label from ``{parameter_name: exponent}``; missing names are zero.

        Raises
        ------
        ValueError
            The mapping names an unknown parameter
        """
        if unknown := sorted(set(mapping) - set(parameters)):
            msg = f"Label uses unknown parameters: {', '.join(unknown)}"
            raise ValueError(msg)
        return cls(
            parameters=parameters,
            exponents=tuple(mapping.get(n, 0) for n in parameters),
        )

    def to_mapping(self) -> dict[str, int]:
        """Return ``{parameter_name: exponent}`` in canonical order, zeros omitted."""
        return {n: e for n, e in zip(self.parameters, self.exponents) if e}

    @property
    def support(self) -> frozenset[str]:
        """Parameters with a nonzero exponent."""
        return frozenset(n for n, e in zip(self.parameters, self.exponents) if e)

    @property
    def degree(self) -> int:
        """Total degree of the monomial."""
        return sum(self.exponents)

    def __str__(self) -> str:
        """Render as a monomial, e.g. ``x^2*y``; the unit label renders as ``1``."""
        factors = [n if e == 1 else f"{n}^{e}" for n, e in self.to_mapping().items()]
        return "*".join(factors) or "1"


def _check_same_parameters(l1: Label, l2: Label) -> None:
    if l1.parameters != l2.parameters:
        msg = f"Labels over different parameters: {l1.parameters.names} vs {l2.parameters.names}"
        raise ValueError(msg)


def is_unit(l: Label) -> bool:  # noqa: E741
    """Return whether the label generates the unit ideal."""
    return not any(l.exponents)


def parallel(l1: Label, l2: Label) -> bool:
    """Decide whether ``l1 ** n1 == l2 ** n2`` for some positive integers n1, n2.

    Two unit labels are parallel; a unit label is never parallel to a nonzero one.

    Raises
    ------
    ValueError
        The labels are over different parameter sets
    """
    _check_same_parameters(l1, l2)

    a, b = l1.exponents, l2.exponents
    if not any(a) or not any(b):
        return not any(a) and not any(b)

    pivot = next(i for i, e in enumerate(a) if e)
    if not b[pivot]:
        return False

    return all(ai * b[pivot] == bi * a[pivot] for ai, bi in zip(a, b))


def project(l: Label, keep: Iterable[str]) -> Label:  # noqa: E741
    """Drop the exponents of parameters outside ``keep``; they became units."""
    parameters = l.parameters.restrict(keep)
    return Label(
        parameters=parameters,
        exponents=tuple(l.exponents[l.parameters.index(n)] for n in parameters),
    )


def multiply(l1: Label, l2: Label) -> Label:
    """Return the product ideal.

    Raises
    ------
    ValueError
        The labels are over different parameter sets
    """
    _check_same_parameters(l1, l2)
    return Label(
        parameters=l1.parameters,
        exponents=tuple(a + b for a, b in zip(l1.exponents, l2.exponents)),
    )

import pytest
from hypothesis import given
from hypothesis import strategies as st

from aligned_graphs.labels import (
    Label,
    ParameterSet,
    is_unit,
    multiply,
    parallel,
    project,
)

XY = ParameterSet(names=("x", "y"))
XYZ = ParameterSet(names=("x", "y", "z"))


def label(mapping, parameters=XY):
    return Label.from_mapping(parameters, mapping)


exponent_vectors = st.lists(st.integers(0, 6), min_size=3, max_size=3)


class TestParameterSet:
    def test_duplicate_names_rejected(self):
        """Tests that a parameter name cannot appear twice."""
        with pytest.raises(ValueError) as e:
            ParameterSet(names=("x", "y", "x"))
        assert "Duplicate parameter names: x" in str(e.value)

    def test_empty_name_rejected(self):
        """Tests that parameter names must be non-empty."""
        with pytest.raises(ValueError):
            ParameterSet(names=("",))

    def test_restrict_keeps_canonical_order(self):
        """Tests that restrict returns names in the original order whatever the order of keep."""
        assert XYZ.restrict(["z", "x"]).names == ("x", "z")

    def test_restrict_unknown_name(self):
        """Tests that restricting to an unknown parameter raises."""
        with pytest.raises(ValueError) as e:
            XY.restrict(["w"])
        assert "unknown parameters: w" in str(e.value)

    def test_index_and_contains(self):
        """Tests membership and position lookups."""
        assert "y" in XY
        assert "z" not in XY
        assert XY.index("y") == 1
        with pytest.raises(ValueError):
            XY.index("z")


class TestLabel:
    def test_exponent_count_checked(self):
        """Tests that a label needs exactly one exponent per parameter."""
        with pytest.raises(ValueError) as e:
            Label(parameters=XY, exponents=(1,))
        assert "Expected 2 exponents, got 1" in str(e.value)

    def test_negative_exponent_rejected(self):
        """Tests that exponents are non-negative."""
        with pytest.raises(ValueError):
            Label(parameters=XY, exponents=(1, -1))

    def test_from_mapping_unknown_parameter(self):
        """Tests that a mapping with an unknown parameter raises."""
        with pytest.raises(ValueError) as e:
            label({"w": 1})
        assert "unknown parameters: w" in str(e.value)

    def test_mapping_round_trip(self):
        """Tests that to_mapping omits zero exponents and inverts from_mapping."""
        l = label({"x": 0, "y": 3})
        assert l.to_mapping() == {"y": 3}
        assert label(l.to_mapping()) == l

    def test_support_and_degree(self):
        """Tests the derived support and total degree."""
        l = label({"x": 2, "z": 1}, XYZ)
        assert l.support == frozenset({"x", "z"})
        assert l.degree == 3

    def test_str(self):
        """Tests rendering as a monomial."""
        assert str(label({"x": 2, "y": 1})) == "x^2*y"
        assert str(Label.unit(XY)) == "1"

    def test_monomial(self):
        """Tests the single-parameter constructor."""
        assert Label.monomial(XY, "y", 4) == label({"y": 4})


class TestParallel:
    @pytest.mark.parametrize(
        ("first", "second", "expected"),
        [
            ({"x": 1}, {"x": 2}, True),
            ({"x": 1}, {"y": 1}, False),
            ({"x": 2, "y": 4}, {"x": 3, "y": 6}, True),
            ({"x": 1, "y": 1}, {"x": 1}, False),
            ({"x": 2, "y": 1}, {"x": 1, "y": 2}, False),
            ({}, {}, True),
            ({}, {"x": 1}, False),
        ],
    )
    def test_examples(self, first, second, expected):
        """Tests parallelism on hand-picked label pairs."""
        assert parallel(label(first), label(second)) is expected
        assert parallel(label(second), label(first)) is expected

    def test_different_parameters(self):
        """Tests that labels over different parameter sets cannot be compared."""
        with pytest.raises(ValueError):
            parallel(label({"x": 1}), label({"x": 1}, XYZ))

    @given(exponent_vectors, st.integers(1, 5), st.integers(1, 5))
    def test_powers_are_parallel(self, exponents, n1, n2):
        """Tests that any two positive powers of a nonzero label are parallel."""
        if not any(exponents):
            return
        base = Label(parameters=XYZ, exponents=tuple(exponents))
        first = Label(parameters=XYZ, exponents=tuple(n1 * e for e in exponents))
        second = Label(parameters=XYZ, exponents=tuple(n2 * e for e in exponents))
        assert parallel(first, second)
        assert parallel(base, first)

    @given(exponent_vectors, exponent_vectors, exponent_vectors)
    def test_transitive_on_nonzero_labels(self, a, b, c):
        """Tests that parallelism is transitive away from the unit label."""
        la, lb, lc = (Label(parameters=XYZ, exponents=tuple(v)) for v in (a, b, c))
        if is_unit(la) or is_unit(lb) or is_unit(lc):
            return
        if parallel(la, lb) and parallel(lb, lc):
            assert parallel(la, lc)

    @given(exponent_vectors, exponent_vectors)
    def test_matches_rational_proportionality(self, a, b):
        """Tests agreement with the rank of the 2 x 3 exponent matrix."""
        la, lb = Label(parameters=XYZ, exponents=tuple(a)), Label(parameters=XYZ, exponents=tuple(b))
        if not any(a) or not any(b):
            return
        rank_one = all(a[i] * b[j] == a[j] * b[i] for i in range(3) for j in range(3))
        assert parallel(la, lb) is rank_one


class TestProjectAndMultiply:
    def test_project_drops_inverted_parameters(self):
        """Tests that projection keeps only the exponents of kept parameters."""
        l = project(label({"x": 2, "y": 1, "z": 5}, XYZ), ["z", "x"])
        assert l.parameters.names == ("x", "z")
        assert l.exponents == (2, 5)

    def test_project_to_nothing_is_unit(self):
        """Tests that projecting to no parameters gives the unit label."""
        assert is_unit(project(label({"x": 2}), []))

    def test_multiply_adds_exponents(self):
        """Tests that multiplication adds exponent vectors."""
        assert multiply(label({"x": 1}), label({"x": 1, "y": 2})) == label({"x": 2, "y": 2})

    def test_is_unit(self):
        """Tests the unit label test."""
        assert is_unit(Label.unit(XY))
        assert not is_unit(label({"y": 1}))

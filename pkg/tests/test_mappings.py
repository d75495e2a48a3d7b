"""Tests for mappings, right inverses and coincidence points"""
import pytest
import sys
import os

# Add src to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from src.core.errors import NotSurjective, UnsupportedSpace
from src.core.reports import Verdict
from src.core.validators import ValidationError
from src.services.mappings import (
    Example1Shift,
    FiniteTableMapping,
    LinearMapping,
    PiecewiseLinearMapping,
    build_right_inverse,
    coincidence_points,
    verify_containment,
    verify_surjective,
    verify_weak_compatibility,
)
from src.services.spaces import FiniteTabulatedSpace, RealIntervalSpace, ShrinkingFractionsSpace


def discrete_space(*names):
    n = len(names)
    return FiniteTabulatedSpace(list(names), [[0 if i == j else 1 for j in range(n)] for i in range(n)])


def table(space, mapping, name="U"):
    return FiniteTableMapping(space, mapping.items(), name)


class TestMappings:
    """Test construction and evaluation"""

    def test_example1_shift(self):
        space = ShrinkingFractionsSpace(10)
        U = Example1Shift(space)

        assert U(space.zero) == space.zero
        assert U(space.one) == space.one
        assert U(space.fraction(2)) == space.one
        assert U(space.fraction(7)) == space.fraction(6)

    def test_example1_preimages(self):
        space = ShrinkingFractionsSpace(10)
        U = Example1Shift(space)

        assert U.preimages(space.one) == [space.fraction(2), space.one]
        assert U.least_preimage(space.fraction(10)) == space.fraction(11)
        assert U.preimages(space.zero) == [space.zero]

    def test_table_must_be_total(self):
        space = discrete_space("a", "b")
        with pytest.raises(ValidationError, match="undefined at: b"):
            FiniteTableMapping(space, [("a", "b")])

    def test_table_needs_enumeration(self):
        with pytest.raises(UnsupportedSpace):
            FiniteTableMapping(RealIntervalSpace(0.0, 1.0), [])

    def test_linear_map_must_stay_inside(self):
        with pytest.raises(ValidationError, match="not into itself"):
            LinearMapping(RealIntervalSpace(0.0, 1.0), 2.0)

    def test_piecewise_linear_preimage(self):
        space = RealIntervalSpace(0.0, 1.0)
        U = PiecewiseLinearMapping(space, [0.0, 0.5, 1.0], [0.0, 0.8, 1.0])

        assert U.least_preimage(space.at(0.4)).coord == pytest.approx(0.25, abs=1e-9)
        assert U.preimages(space.at(0.9))[0].coord == pytest.approx(0.75, abs=1e-9)

    def test_piecewise_linear_validation(self):
        space = RealIntervalSpace(0.0, 1.0)
        with pytest.raises(ValidationError, match="strictly increasing"):
            PiecewiseLinearMapping(space, [0.0, 0.5, 1.0], [0.0, 0.8, 0.7])

        with pytest.raises(ValidationError, match="span the whole interval"):
            PiecewiseLinearMapping(space, [0.0, 0.5], [0.0, 0.5])


class TestSurjectivity:
    """Test surjectivity checks and right inverses"""

    def test_example1_is_surjective(self):
        space = ShrinkingFractionsSpace(64)
        report = verify_surjective(Example1Shift(space), space)
        assert report.passed
        assert report.pairs_examined == 65

    def test_constant_map_is_not(self):
        space = discrete_space("a", "b")
        report = verify_surjective(table(space, {"a": "a", "b": "a"}), space)

        assert report.verdict is Verdict.FAIL
        assert report.details["uncovered"] == ["b"]
        assert str(report.witness.x) == "b"

    def test_interval_image_range(self):
        space = RealIntervalSpace(0.0, 1.0)
        report = verify_surjective(PiecewiseLinearMapping(space, [0.0, 1.0], [0.0, 1.0]), space)
        assert report.passed
        assert report.coverage == "analytic"

    def test_right_inverse_of_example1(self):
        space = ShrinkingFractionsSpace(64)
        U = Example1Shift(space)
        Ustar = build_right_inverse(U, space)

        assert Ustar(space.zero) == space.zero
        for r in range(1, 65):
            assert Ustar(space.fraction(r)) == space.fraction(r + 1)
        for y in space.points():
            assert U(Ustar(y)) == y

    def test_right_inverse_of_swap(self):
        space = discrete_space("a", "b")
        swap = table(space, {"a": "b", "b": "a"})
        Ustar = build_right_inverse(swap, space)

        assert str(Ustar(space.point("a"))) == "b"
        assert str(Ustar(space.point("b"))) == "a"

    def test_uncovered_points_raise(self):
        space = discrete_space("a", "b", "c")
        U = table(space, {"a": "a", "b": "a", "c": "b"})
        with pytest.raises(NotSurjective) as excinfo:
            build_right_inverse(U, space)
        assert excinfo.value.uncovered == ["c"]

        U = table(space, {"a": "c", "b": "a", "c": "a"})
        with pytest.raises(NotSurjective):
            build_right_inverse(U, space)

        U = table(space, {"a": "b", "b": "b", "c": "c"})
        with pytest.raises(NotSurjective):
            build_right_inverse(U, space)

    def test_deterministic(self):
        space = discrete_space("a", "b", "c")
        U = table(space, {"a": "b", "b": "c", "c": "a"})
        assert build_right_inverse(U, space).to_dict() == build_right_inverse(U, space).to_dict()

    def test_quarter_map_is_not_surjective(self):
        space = RealIntervalSpace(0.0, 1.0)
        with pytest.raises(NotSurjective):
            build_right_inverse(LinearMapping(space, 0.25), space)

    def test_supplied_rule_is_checked(self):
        space = discrete_space("a", "b")
        swap = table(space, {"a": "b", "b": "a"})
        with pytest.raises(ValidationError, match="not a right inverse"):
            build_right_inverse(swap, space, rule=lambda y: y)


class TestCoincidences:
    """Test coincidence points, weak compatibility and containment"""

    def test_example2_coincidence_at_zero(self):
        space = RealIntervalSpace(0.0, 1.0)
        U, V = LinearMapping(space, 0.25), LinearMapping(space, 1.0 / 12.0, "V")

        points = coincidence_points(U, V, space)
        assert [p.coord for p in points] == [0.0]

        report = verify_weak_compatibility(U, V, space)
        assert report.passed
        assert report.details["coincidence_points"] == ["0"]

    def test_equal_maps_coincide_everywhere(self):
        space = discrete_space("a", "b", "c")
        U = table(space, {"a": "b", "b": "c", "c": "c"})
        V = table(space, {"a": "b", "b": "c", "c": "c"}, "V")
        assert coincidence_points(U, V, space) == space.points()

    def test_no_coincidences_holds_vacuously(self):
        space = discrete_space("a", "b")
        U = table(space, {"a": "a", "b": "b"})
        V = table(space, {"a": "b", "b": "a"}, "V")

        report = verify_weak_compatibility(U, V, space)
        assert report.passed
        assert "vacuously" in report.notes[0]

    def test_non_commuting_coincidence(self):
        space = discrete_space("a", "b", "c")
        U = table(space, {"a": "b", "b": "b", "c": "c"})
        V = table(space, {"a": "b", "b": "c", "c": "c"}, "V")

        report = verify_weak_compatibility(U, V, space)
        assert report.verdict is Verdict.FAIL
        assert str(report.witness.x) == "a"

    def test_containment(self):
        space = discrete_space("a", "b")
        U = table(space, {"a": "a", "b": "a"})
        V = table(space, {"a": "a", "b": "b"}, "V")

        report = verify_containment(V, U, space)
        assert report.verdict is Verdict.FAIL
        assert str(report.witness.x) == "b"
        assert verify_containment(U, V, space).passed

    def test_containment_on_intervals(self):
        space = RealIntervalSpace(0.0, 1.0)
        U, V = LinearMapping(space, 0.25), LinearMapping(space, 1.0 / 12.0, "V")

        assert verify_containment(V, U, space).passed
        assert not verify_containment(U, V, space).passed


if __name__ == "__main__":
    pytest.main([__file__, "-v"])

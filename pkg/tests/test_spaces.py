"""Tests for metric spaces and partial orders"""
import pytest
import sys
import os

from hypothesis import given, settings, strategies as st

# Add src to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from src.core.errors import EmptySpace, UnsupportedSpace
from src.core.reports import Verdict
from src.core.validators import ValidationError
from src.services.spaces import (
    FiniteTabulatedSpace,
    RealIntervalSpace,
    ShrinkingFractionsSpace,
    comparable_pairs,
    diagonal_order,
    example1_order,
    table_order,
    usual_order,
    verify_metric_axioms,
    verify_order_axioms,
)


def labels(pairs):
    return [(str(x), str(z)) for x, z in pairs]


class TestMetricAxioms:
    """Test the identity, symmetry and triangle scans"""

    def test_shrinking_fractions_is_metric(self):
        report = verify_metric_axioms(ShrinkingFractionsSpace(50))
        assert report.verdict is Verdict.PASS
        assert report.coverage == "exhaustive"
        assert report.pairs_examined == 51 ** 3

    def test_two_point_space(self):
        space = FiniteTabulatedSpace(["a", "b"], [[0, 1], [1, 0]])
        assert verify_metric_axioms(space).passed

    def test_triangle_violation_witness(self):
        space = FiniteTabulatedSpace(["a", "b", "c"], [[0, 1, 5], [1, 0, 1], [5, 1, 0]])
        report = verify_metric_axioms(space)

        assert report.verdict is Verdict.FAIL
        assert report.witness.axiom == "triangle"
        assert (str(report.witness.x), str(report.witness.z), str(report.witness.y)) == ("a", "b", "c")

    def test_asymmetric_table(self):
        space = FiniteTabulatedSpace(["a", "b"], [[0, 1], [2, 0]])
        report = verify_metric_axioms(space)
        assert report.witness.axiom == "symmetry"

    def test_zero_distance_between_distinct_points(self):
        space = FiniteTabulatedSpace(["a", "b"], [[0, 0], [0, 0]])
        assert verify_metric_axioms(space).witness.axiom == "positivity"

    def test_empty_space(self):
        with pytest.raises(EmptySpace):
            verify_metric_axioms(FiniteTabulatedSpace([], []))

    def test_interval_sampling_is_reproducible(self):
        space = RealIntervalSpace(0.0, 1.0)
        first = verify_metric_axioms(space, sample_budget=500, seed=7)
        second = verify_metric_axioms(space, sample_budget=500, seed=7)

        assert first.passed
        assert first.coverage == "sampled"
        assert first.seed == 7
        assert first.to_dict() == second.to_dict()

    def test_malformed_table(self):
        with pytest.raises(ValidationError, match="must be 2x2"):
            FiniteTabulatedSpace(["a", "b"], [[0, 1, 2], [1, 0, 2]])

        with pytest.raises(ValidationError, match="unique"):
            FiniteTabulatedSpace(["a", "a"], [[0, 1], [1, 0]])


class TestShrinkingFractions:
    """Test the {1/r} ∪ {0} space"""

    def test_enumeration_is_ascending(self):
        space = ShrinkingFractionsSpace(3)
        assert [str(p) for p in space.points()] == ["0", "1/3", "1/2", "1"]

    @given(depth=st.integers(min_value=1, max_value=40))
    @settings(max_examples=20, deadline=None)
    def test_closed_form_distance(self, depth):
        space = ShrinkingFractionsSpace(depth)
        pts = space.points()
        for x in pts:
            for z in pts:
                assert space.distance(x, z) == pytest.approx(space.closed_form_distance(x, z), abs=1e-15)

    def test_point_parsing(self):
        space = ShrinkingFractionsSpace(10)
        assert space.point("1/5") == space.fraction(5)
        assert space.point(0.2) == space.fraction(5)
        assert space.point("0.2") == space.fraction(5)
        assert space.point(0) == space.zero
        assert space.point(1) == space.one

        with pytest.raises(ValidationError, match="not of the form 1/r"):
            space.point(0.3)

        with pytest.raises(ValidationError, match="not a point"):
            space.point(2)

    @pytest.mark.parametrize("label", ["abc", "1/0", "1/x", None])
    def test_unparseable_labels(self, label):
        with pytest.raises(ValidationError, match="not a point"):
            ShrinkingFractionsSpace(10).point(label)

    def test_unparseable_interval_label(self):
        with pytest.raises(ValidationError, match="not a real number"):
            RealIntervalSpace(0.0, 1.0).point("abc")

    def test_membership_extends_past_depth(self):
        space = ShrinkingFractionsSpace(4)
        assert space.contains(space.fraction(1000))
        assert space.fraction(1000) not in space.points()


class TestOrders:
    """Test order axiom scans"""

    def test_example1_order(self):
        report = verify_order_axioms(ShrinkingFractionsSpace(20), example1_order())
        assert report.passed
        assert "regularity" in report.details

    def test_usual_order_on_tabulated_subset(self):
        coords = [0.0, 0.1, 0.4, 0.7, 1.0]
        names = [str(c) for c in coords]
        space = FiniteTabulatedSpace(names, [[abs(a - b) for b in coords] for a in coords])
        assert verify_order_axioms(space, usual_order()).passed

    def test_antisymmetry_violation(self):
        space = FiniteTabulatedSpace(["a", "b"], [[0, 1], [1, 0]])
        report = verify_order_axioms(space, table_order([("a", "b"), ("b", "a")]))

        assert report.verdict is Verdict.FAIL
        assert report.witness.axiom == "antisymmetry"

    def test_transitivity_violation(self):
        space = FiniteTabulatedSpace(["a", "b", "c"], [[0, 1, 1], [1, 0, 1], [1, 1, 0]])
        report = verify_order_axioms(space, table_order([("a", "b"), ("b", "c")]))

        assert report.witness.axiom == "transitivity"
        assert (str(report.witness.x), str(report.witness.z), str(report.witness.y)) == ("a", "b", "c")

    def test_interval_has_no_enumeration(self):
        with pytest.raises(UnsupportedSpace):
            verify_order_axioms(RealIntervalSpace(0.0, 1.0), usual_order())


class TestComparablePairs:
    """Test the canonical stream of x ⪯ z pairs"""

    def test_two_point_chain(self):
        space = FiniteTabulatedSpace(["a", "b"], [[0, 1], [1, 0]])
        pairs = labels(comparable_pairs(space, table_order([("a", "b")])))
        assert pairs == [("a", "a"), ("a", "b"), ("b", "b")]

    def test_example1_order_at_depth_3(self):
        pairs = labels(comparable_pairs(ShrinkingFractionsSpace(3), example1_order()))

        assert ("0", "1/3") in pairs
        assert ("0", "1/2") in pairs
        assert ("1/3", "1/2") in pairs
        assert ("1/2", "1") not in pairs
        assert ("0", "1") not in pairs

    def test_diagonal_only(self):
        space = ShrinkingFractionsSpace(5)
        pairs = list(comparable_pairs(space, diagonal_order()))
        assert all(x == z for x, z in pairs)
        assert len(pairs) == len(space.points())


if __name__ == "__main__":
    pytest.main([__file__, "-v"])

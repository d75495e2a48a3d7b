"""Tests for the expansive-inequality checkers and the counterexample search"""
import math
import pytest
import sys
import os

from hypothesis import given, settings, strategies as st

# Add src to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from src.core.errors import ContainmentViolated, MissingOrder
from src.core.reports import Verdict
from src.core.validators import ValidationError
from src.services.checkers import (
    ExpansiveProblem,
    check_increasing,
    check_jungck_condition,
    check_min_condition,
    check_phi_expansive,
    check_wang_expansive,
    search_violation,
)
from src.services.growth import example1, exp_t
from src.services.mappings import Example1Shift, FiniteTableMapping, LinearMapping, build_right_inverse
from src.services.spaces import (
    FiniteTabulatedSpace,
    RealIntervalSpace,
    ShrinkingFractionsSpace,
    diagonal_order,
    example1_order,
    table_order,
    usual_order,
)


def example1_problem(depth=64, eta=2.0):
    space = ShrinkingFractionsSpace(depth)
    return ExpansiveProblem(space, Example1Shift(space), example1(), eta, example1_order())


def example2_problem(eta=2.0, budget=10_000):
    space = RealIntervalSpace(0.0, 1.0)
    return ExpansiveProblem(space, LinearMapping(space, 0.25), exp_t(), eta, usual_order(),
                            LinearMapping(space, 1.0 / 12.0, "V"), sample_budget=budget, seed=11)


def doubling_space():
    return RealIntervalSpace(0.0, math.inf, window=(0.0, 10.0))


def line_space(coords):
    names = [f"p{i}" for i in range(len(coords))]
    return FiniteTabulatedSpace(names, [[abs(a - b) for b in coords] for a in coords])


def discrete_space(*names):
    n = len(names)
    return FiniteTabulatedSpace(list(names), [[0 if i == j else 1 for j in range(n)] for i in range(n)])


class TestPhiExpansive:
    """Test the ordered φ-condition on the shrinking fractions"""

    def test_example1_holds_at_eta_2(self):
        report = check_phi_expansive(example1_problem())
        assert report.verdict is Verdict.PASS
        assert report.coverage == "exhaustive"
        assert report.pairs_examined > 0

    def test_example1_fails_at_eta_3(self):
        report = check_phi_expansive(example1_problem(eta=3.0))

        assert report.verdict is Verdict.FAIL
        assert (str(report.witness.x), str(report.witness.z)) == ("0", "1/64")
        assert report.witness.reproduces()

    @pytest.mark.parametrize("eta,expected", [
        (2.0, Verdict.PASS), (2.5, Verdict.PASS), (2.7, Verdict.PASS),
        (2.75, Verdict.FAIL), (3.0, Verdict.FAIL),
    ])
    def test_threshold_is_e(self, eta, expected):
        assert check_phi_expansive(example1_problem(depth=40, eta=eta)).verdict is expected

    def test_underflowed_distances_are_decided(self):
        passing = search_violation(example1_problem(depth=1024), "phi", budget=2000, depth_limit=1024)
        failing = search_violation(example1_problem(depth=1024, eta=3.0), "phi", budget=2000, depth_limit=1024)

        assert passing.verdict is Verdict.PASS
        assert failing.verdict is Verdict.FAIL
        assert failing.witness.domain == "loglog"
        assert failing.witness.reproduces()

    def test_needs_an_order(self):
        p = example1_problem()
        p.order = None
        with pytest.raises(MissingOrder):
            check_phi_expansive(p)

    def test_eta_must_exceed_one(self):
        with pytest.raises(ValidationError, match="greater than 1"):
            example1_problem(eta=1.0)

    def test_incomparable_pairs_are_ignored(self):
        space = discrete_space("a", "b")
        swap = FiniteTableMapping(space, [("a", "b"), ("b", "a")])
        report = check_phi_expansive(ExpansiveProblem(space, swap, exp_t(), 5.0, diagonal_order()))

        assert report.passed
        assert report.pairs_examined == 0
        assert "vacuously" in report.notes[0]


class TestWangExpansive:
    """Test d(Ux,Uz) >= q·d(x,z)"""

    @pytest.mark.parametrize("q,depth", [(2.0, 64), (1.1, 64), (1.01, 128), (1.001, 1024)])
    def test_example1_fails_every_q(self, q, depth):
        space = ShrinkingFractionsSpace(depth)
        report = check_wang_expansive(Example1Shift(space), space, q, order=example1_order())

        assert report.verdict is Verdict.FAIL
        assert report.details["q"] == q
        r = report.witness.z.key - 1
        assert report.witness.ratio == pytest.approx((r + 1) / r)
        assert report.witness.ratio < q

    def test_total_order_pairs_zero_with_one(self):
        space = ShrinkingFractionsSpace(16)
        report = check_wang_expansive(Example1Shift(space), space, 1.001)

        assert (str(report.witness.x), str(report.witness.z)) == ("0", "1")
        assert report.witness.ratio == 1.0

    def test_doubling_map(self):
        space = doubling_space()
        U = LinearMapping(space, 2.0)

        assert check_wang_expansive(U, space, 2.0).passed
        assert check_wang_expansive(U, space, 2.5).verdict is Verdict.FAIL

    def test_collapsed_pairs_fail(self):
        space = discrete_space("a", "b", "c")
        constant = FiniteTableMapping(space, [("a", "a"), ("b", "a"), ("c", "a")])
        report = check_wang_expansive(constant, space, 1.5)

        assert report.verdict is Verdict.FAIL
        assert report.witness.axiom == "injectivity"
        assert (str(report.witness.x), str(report.witness.z)) == ("a", "b")
        assert report.details["collapsed_pairs"] == 1

    def test_constant_interval_map_fails(self):
        space = RealIntervalSpace(0.0, 1.0)
        report = check_wang_expansive(LinearMapping(space, 0.0), space, 2.0)

        assert report.verdict is Verdict.FAIL
        assert report.pairs_examined == 1
        assert report.witness.image_distance == 0.0


class TestWangPhiAgreement:
    """Wang with q matches the φ-condition with φ = e^t and η = q when no collapsed pair comes first"""

    def instances(self):
        doubling = doubling_space()
        sf = ShrinkingFractionsSpace(64)
        line = line_space([0.0, 1.0, 2.0])
        return [
            (doubling, LinearMapping(doubling, 2.0), 2.0, usual_order()),
            (doubling, LinearMapping(doubling, 2.0), 2.5, usual_order()),
            (sf, Example1Shift(sf), 1.1, usual_order()),
            (sf, Example1Shift(sf), 1.001, example1_order()),
            (line, FiniteTableMapping(line, [("p0", "p0"), ("p1", "p2"), ("p2", "p1")]), 1.5, usual_order()),
        ]

    def test_same_verdict_and_witness(self):
        for space, U, q, order in self.instances():
            wang = check_wang_expansive(U, space, q, order=order, sample_budget=2000, seed=3)
            phi = check_phi_expansive(ExpansiveProblem(space, U, exp_t(), q, order, sample_budget=2000, seed=3))

            assert wang.verdict == phi.verdict
            assert wang.witness == phi.witness


class TestMinCondition:
    """Test the min{d(x,z), d(x,Ux), d(z,Uz)} condition"""

    def test_example1(self):
        assert check_min_condition(example1_problem()).passed

        report = check_min_condition(example1_problem(eta=3.0))
        assert report.verdict is Verdict.FAIL
        assert (str(report.witness.x), str(report.witness.z)) == ("1/64", "1/63")

    def test_doubling_map(self):
        space = doubling_space()
        p = ExpansiveProblem(space, LinearMapping(space, 2.0), exp_t(), 2.0, sample_budget=2000)
        report = check_min_condition(p)

        assert report.passed
        assert report.coverage == "sampled"

    def test_fixed_points_only(self):
        space = discrete_space("a", "b")
        identity = FiniteTableMapping(space, [("a", "a"), ("b", "b")])
        report = check_min_condition(ExpansiveProblem(space, identity, exp_t(), 2.0))

        assert report.passed
        assert report.pairs_examined == 0

    def test_three_cycle_fails(self):
        space = discrete_space("a", "b", "c")
        cycle = FiniteTableMapping(space, [("a", "b"), ("b", "c"), ("c", "a")])
        report = check_min_condition(ExpansiveProblem(space, cycle, exp_t(), 2.0))

        assert report.verdict is Verdict.FAIL
        assert (str(report.witness.x), str(report.witness.z)) == ("a", "b")


class TestJungckCondition:
    """Test log φ(d(Ux,Uz)) >= η·log φ(d(Vx,Vz))"""

    @pytest.mark.parametrize("eta,expected", [
        (1.5, Verdict.PASS), (2.0, Verdict.PASS), (2.9, Verdict.PASS),
        (3.1, Verdict.FAIL), (4.0, Verdict.FAIL),
    ])
    def test_example2(self, eta, expected):
        report = check_jungck_condition(example2_problem(eta))
        assert report.verdict is expected
        assert report.details["containment"]["verdict"] == "PASS"

    def test_identical_maps_fail(self):
        space = line_space([0.0, 1.0, 3.0])
        identity = FiniteTableMapping(space, [("p0", "p0"), ("p1", "p1"), ("p2", "p2")])
        same = FiniteTableMapping(space, [("p0", "p0"), ("p1", "p1"), ("p2", "p2")], "V")
        report = check_jungck_condition(ExpansiveProblem(space, identity, exp_t(), 2.0, V=same))

        assert report.verdict is Verdict.FAIL
        assert report.witness.reproduces()

    def test_containment_violation(self):
        space = discrete_space("a", "b")
        constant = FiniteTableMapping(space, [("a", "a"), ("b", "a")])
        identity = FiniteTableMapping(space, [("a", "a"), ("b", "b")], "V")

        with pytest.raises(ContainmentViolated):
            check_jungck_condition(ExpansiveProblem(space, constant, exp_t(), 2.0, V=identity))

    def test_needs_second_mapping(self):
        space = RealIntervalSpace(0.0, 1.0)
        with pytest.raises(ValidationError, match="second mapping"):
            check_jungck_condition(ExpansiveProblem(space, LinearMapping(space, 0.25), exp_t(), 2.0))

    @given(a=st.floats(min_value=1.01, max_value=3.5), b=st.floats(min_value=1.01, max_value=3.5))
    @settings(max_examples=15, deadline=None)
    def test_monotone_in_eta(self, a, b):
        low, high = min(a, b), max(a, b)
        if check_jungck_condition(example2_problem(high, budget=500)).passed:
            assert check_jungck_condition(example2_problem(low, budget=500)).passed


class TestIncreasing:
    """Test monotonicity of the right inverse"""

    def test_example1_right_inverse(self):
        space = ShrinkingFractionsSpace(64)
        Ustar = build_right_inverse(Example1Shift(space), space)
        assert check_increasing(Ustar, example1_order(), space).passed

    def test_swap_is_decreasing(self):
        space = discrete_space("a", "b")
        swap = FiniteTableMapping(space, [("a", "b"), ("b", "a")])
        Ustar = build_right_inverse(swap, space)
        order = table_order([("a", "b")])

        report = check_increasing(Ustar, order, space)
        assert report.verdict is Verdict.FAIL
        assert (str(report.witness.x), str(report.witness.z)) == ("a", "b")
        assert check_increasing(Ustar, diagonal_order(), space).passed


class TestSearchViolation:
    """Test the escalating counterexample search"""

    def test_wang_needs_depth_beyond_1000(self):
        p = example1_problem(eta=1.001)
        report = search_violation(p, "wang", budget=10_000)

        assert report.verdict is Verdict.FAIL
        assert report.coverage == "search"
        assert report.witness.z.key == 1024
        assert [s["depth"] for s in report.details["stages"]] == [64, 128, 256, 512, 1024]

    def test_wang_finer_q(self):
        report = search_violation(example1_problem(eta=1.0001), "wang", budget=10_000)
        assert report.witness.z.key == 16384

    def test_pass_at_budget(self):
        report = search_violation(example1_problem(), "phi", budget=5_000, depth_limit=256)

        assert report.verdict is Verdict.PASS
        assert [s["depth"] for s in report.details["stages"]] == [64, 128, 256]
        assert "no violation within budget 5000" in report.notes

    def test_interval_stages(self):
        report = search_violation(example2_problem(4.0), "jungck", budget=5_000)

        assert report.verdict is Verdict.FAIL
        assert report.details["stages"][0]["seed"] == 11

    def test_interval_pass_spends_budget(self):
        report = search_violation(example2_problem(2.0), "jungck", budget=5_000)

        assert report.passed
        assert sum(s["samples"] for s in report.details["stages"]) == 5_000

    def test_unknown_condition(self):
        with pytest.raises(ValidationError, match="Unknown condition"):
            search_violation(example1_problem(), "contraction")


if __name__ == "__main__":
    pytest.main([__file__, "-v"])

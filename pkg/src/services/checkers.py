"""
Expansiveness-type inequality checks over enumerated or sampled pairs.

Every check walks its pairs in canonical order and stops at the first
violation, so the reported witness does not depend on how the scan is run.
"""
import logging
from dataclasses import dataclass, replace
from itertools import islice
from typing import Iterator, Optional, Tuple

import numpy as np

from src.core.config import ToolkitConfig
from src.core.errors import ContainmentViolated, MissingOrder, UnsupportedSpace
from src.core.reports import CheckReport, Witness
from src.core.validators import (
    ValidationError,
    validate_eta,
    validate_positive_int,
    validate_seed,
)
from src.services.growth import GrowthFunction, compare_powered, eval_log, exp_t
from src.services.mappings import Mapping, RightInverse, verify_containment
from src.services.spaces import (
    MetricSpace,
    PartialOrder,
    Point,
    ShrinkingFractionsSpace,
    comparable_pairs,
    usual_order,
)

log = logging.getLogger("expansive.checkers")

CONDITIONS = ("phi", "wang", "min", "jungck")

Pair = Tuple[Point, Point]


@dataclass
class ExpansiveProblem:
    space: MetricSpace
    U: Mapping
    growth: GrowthFunction
    eta: float
    order: Optional[PartialOrder] = None
    V: Optional[Mapping] = None
    sample_budget: int = ToolkitConfig.SAMPLE_BUDGET
    seed: int = ToolkitConfig.SEED

    def __post_init__(self):
        self.eta = validate_eta(self.eta)
        self.sample_budget = validate_positive_int(self.sample_budget, name="sample_budget")
        self.seed = validate_seed(self.seed)

    def with_eta(self, eta: float) -> "ExpansiveProblem":
        return replace(self, eta=eta)


# --- Pair streams ---

def _sampled_pairs(space: MetricSpace, budget: int, seed: int,
                   order: Optional[PartialOrder]) -> Iterator[Pair]:
    """Independent uniform pairs, oriented along the order (or by coordinate)"""
    rng = np.random.default_rng(seed)
    xs = space.sample_coords(budget, rng)
    zs = space.sample_coords(budget, rng)
    for a, b in zip(xs, zs):
        x, z = space.at(a), space.at(b)
        if x == z:
            continue
        if order is None:
            yield (x, z) if a < b else (z, x)
        elif order(x, z):
            yield x, z
        elif order(z, x):
            yield z, x


def _enumerated_pairs(space: MetricSpace, order: Optional[PartialOrder]) -> Iterator[Pair]:
    if order is not None:
        return ((x, z) for x, z in comparable_pairs(space, order) if x != z)
    pts = space.points()
    return ((x, z) for i, x in enumerate(pts) for z in pts[i + 1:])


def _pairs(space: MetricSpace, order: Optional[PartialOrder], budget: int, seed: int) -> Iterator[Pair]:
    if space.enumerable:
        return _enumerated_pairs(space, order)
    return _sampled_pairs(space, budget, seed, order)


def _start_report(name: str, p: ExpansiveProblem, max_pairs: Optional[int]) -> CheckReport:
    report = CheckReport(name=name)
    if not p.space.enumerable:
        report.coverage = "sampled"
        report.seed = p.seed
    report.details["eta"] = p.eta
    report.details["growth"] = p.growth.name
    if max_pairs is not None:
        report.details["max_pairs"] = max_pairs
    return report


def _witness(x: Point, z: Point, du: float, dx: float, cmp, eta: float) -> Witness:
    return Witness(
        x=x, z=z,
        image_distance=du, argument_distance=dx,
        lhs_log=cmp.lhs_log, rhs_log=cmp.rhs_log,
        lhs_loglog=cmp.lhs_loglog, rhs_loglog=cmp.rhs_loglog,
        eta=eta, domain=cmp.domain,
    )


def _finish(report: CheckReport, pairs_seen: int, max_pairs: Optional[int]) -> CheckReport:
    if max_pairs is not None and pairs_seen >= max_pairs:
        report.coverage = "budget"
    return report


# --- Scans ---

def _scan_ordered(p: ExpansiveProblem, name: str, max_pairs: Optional[int] = None,
                  collapse_fails: bool = False) -> CheckReport:
    """log φ(d(Ux,Uz)) >= η·log φ(d(x,z)) over x ⪯ z with d(Ux,Uz) > 0"""
    space, U = p.space, p.U
    report = _start_report(name, p, max_pairs)
    collapsed = 0
    seen = 0

    for x, z in islice(_pairs(space, p.order, p.sample_budget, p.seed), max_pairs):
        seen += 1
        du = space.distance(U(x), U(z))
        dx = space.distance(x, z)
        if not space.separated(du):
            collapsed += 1
            if collapse_fails:
                report.pairs_examined += 1
                report.details["collapsed_pairs"] = collapsed
                return report.fail(Witness(
                    x=x, z=z, axiom="injectivity", image_distance=du, argument_distance=dx,
                    lhs_log=0.0, rhs_log=eval_log(p.growth, dx), eta=p.eta,
                ))
            continue
        report.pairs_examined += 1
        cmp = compare_powered(p.growth, du, dx, p.eta)
        if not cmp.holds:
            report.details["collapsed_pairs"] = collapsed
            log.debug("%s violated at (%s, %s)", name, x, z)
            return report.fail(_witness(x, z, du, dx, cmp, p.eta))

    report.details["collapsed_pairs"] = collapsed
    if report.pairs_examined == 0:
        report.notes.append("no pair with d(Ux,Uz) > 0 among comparable pairs; holds vacuously")
    return _finish(report, seen, max_pairs)


def _scan_min(p: ExpansiveProblem, max_pairs: Optional[int] = None) -> CheckReport:
    space, U = p.space, p.U
    report = _start_report("min condition", p, max_pairs)
    report.notes.append(
        "the min{d(x,z), d(x,Ux), d(z,Uz)} inequality is the operative hypothesis here; "
        "the ordered φ-condition is checked separately"
    )
    seen = 0

    for x, z in islice(_pairs(space, None, p.sample_budget, p.seed), max_pairs):
        seen += 1
        ux, uz = U(x), U(z)
        dxu, dzu = space.distance(x, ux), space.distance(z, uz)
        if not (space.separated(dxu) and space.separated(dzu)):
            continue
        du = space.distance(ux, uz)
        if not space.separated(du):
            continue
        m = min(space.distance(x, z), dxu, dzu)
        if not space.separated(m):
            report.skipped += 1
            continue
        report.pairs_examined += 1
        cmp = compare_powered(p.growth, du, m, p.eta)
        if not cmp.holds:
            return report.fail(_witness(x, z, du, m, cmp, p.eta))

    if report.pairs_examined == 0:
        report.notes.append("no pair of non-fixed points with Ux ≠ Uz; holds vacuously")
    return _finish(report, seen, max_pairs)


def _scan_jungck(p: ExpansiveProblem, max_pairs: Optional[int] = None) -> CheckReport:
    space, U, V = p.space, p.U, p.V
    report = _start_report(f"Jungck condition ({U.name}, {V.name})", p, max_pairs)

    containment = verify_containment(V, U, space)
    report.details["containment"] = containment.to_dict()
    if not containment.passed:
        if space.enumerable:
            w = containment.witness
            raise ContainmentViolated(f"{V.name}({w.x}) = {w.z} is not in {U.name}(M)", w)
        report.notes.append(f"{V.name}(M) ⊆ {U.name}(M) fails on the closed-form ranges")
    seen = 0

    for x, z in islice(_pairs(space, None, p.sample_budget, p.seed), max_pairs):
        seen += 1
        dv = space.distance(V(x), V(z))
        if not space.separated(dv):
            continue
        du = space.distance(U(x), U(z))
        report.pairs_examined += 1
        if not space.separated(du):
            # φ is undefined at 0, so a collapsed image under distinct V-images breaks the condition
            return report.fail(Witness(
                x=x, z=z, axiom=f"{U.name}x ≠ {U.name}z", image_distance=du, argument_distance=dv,
                lhs_log=0.0, rhs_log=eval_log(p.growth, dv), eta=p.eta,
            ))
        cmp = compare_powered(p.growth, du, dv, p.eta)
        if not cmp.holds:
            return report.fail(_witness(x, z, du, dv, cmp, p.eta))

    return _finish(report, seen, max_pairs)


# --- Public checks ---

def check_phi_expansive(p: ExpansiveProblem) -> CheckReport:
    """
    Check log φ(d(Ux,Uz)) >= η·log φ(d(x,z)) for every (x, z) with x ⪯ z and
    d(Ux,Uz) > 0.

    Raises:
        MissingOrder: If the problem carries no partial order
    """
    if p.order is None:
        raise MissingOrder("φ-expansiveness is imposed on comparable pairs; the problem has no order")
    return _scan_ordered(p, f"φ-expansive ({p.growth.name}, η={p.eta:g})")


def check_wang_expansive(U: Mapping, space: MetricSpace, q: float,
                         order: Optional[PartialOrder] = None,
                         sample_budget: int = ToolkitConfig.SAMPLE_BUDGET,
                         seed: int = ToolkitConfig.SEED) -> CheckReport:
    """
    Check d(Ux,Uz) >= q·d(x,z).

    Runs the φ scan with φ(t) = e^t, whose log is the distance itself, so on
    injective maps the verdict and first witness coincide with
    check_phi_expansive for that φ. Pairs default to the usual total order.
    A collapsed pair (Ux = Uz, x ≠ z) violates the inequality and fails with
    an "injectivity" witness.
    """
    p = ExpansiveProblem(space, U, exp_t(), q, order or usual_order(),
                         sample_budget=sample_budget, seed=seed)
    report = _scan_ordered(p, f"Wang q-expansive (q={p.eta:g})", collapse_fails=True)
    report.details["q"] = report.details.pop("eta")
    report.details.pop("growth", None)
    return report


def check_min_condition(p: ExpansiveProblem) -> CheckReport:
    """
    Check log φ(d(Ux,Uz)) >= η·log φ(min{d(x,z), d(x,Ux), d(z,Uz)}) over pairs
    of non-fixed points with Ux ≠ Uz. Pairs whose min is zero are skipped and
    counted.
    """
    return _scan_min(p)


def check_jungck_condition(p: ExpansiveProblem) -> CheckReport:
    """
    Check log φ(d(Ux,Uz)) >= η·log φ(d(Vx,Vz)) for every pair with Vx ≠ Vz,
    after confirming V(M) ⊆ U(M).

    Raises:
        ContainmentViolated: If V(M) is not contained in U(M) on an enumerable space
        ValidationError: If the problem has no second mapping
    """
    if p.V is None:
        raise ValidationError("The Jungck condition needs a second mapping V")
    return _scan_jungck(p)


def check_increasing(Ustar: RightInverse, order: PartialOrder, space: MetricSpace) -> CheckReport:
    """x ⪯ z must give U*x ⪯ U*z on every enumerated pair"""
    if not space.enumerable:
        raise UnsupportedSpace("Monotonicity of U* is checked on enumerable spaces")

    report = CheckReport(name=f"U* is {order.name}-increasing")
    for x, z in comparable_pairs(space, order):
        report.pairs_examined += 1
        sx, sz = Ustar(x), Ustar(z)
        if not order(sx, sz):
            return report.fail(Witness(x=x, z=z, axiom=f"U*{x} = {sx} ⪯ U*{z} = {sz}"))
    return report


# --- Counterexample search ---

def _run_condition(p: ExpansiveProblem, which: str, max_pairs: Optional[int]) -> CheckReport:
    if which == "phi":
        if p.order is None:
            raise MissingOrder("φ-expansiveness is imposed on comparable pairs; the problem has no order")
        return _scan_ordered(p, f"φ-expansive ({p.growth.name}, η={p.eta:g})", max_pairs)
    if which == "wang":
        wang = ExpansiveProblem(p.space, p.U, exp_t(), p.eta, p.order or usual_order(),
                                sample_budget=p.sample_budget, seed=p.seed)
        return _scan_ordered(wang, f"Wang q-expansive (q={p.eta:g})", max_pairs, collapse_fails=True)
    if which == "min":
        return _scan_min(p, max_pairs)
    if p.V is None:
        raise ValidationError("The Jungck condition needs a second mapping V")
    return _scan_jungck(p, max_pairs)


def _rebindable(p: ExpansiveProblem) -> bool:
    try:
        p.U.rebind(p.space)
        if p.V is not None:
            p.V.rebind(p.space)
    except UnsupportedSpace:
        return False
    return True


def search_violation(p: ExpansiveProblem, which: str,
                     budget: int = ToolkitConfig.SAMPLE_BUDGET,
                     depth_limit: int = ToolkitConfig.SEARCH_DEPTH_LIMIT) -> CheckReport:
    """
    Hunt for a counterexample with escalating density.

    Shrinking-fractions problems double the truncation depth per stage (up to
    `depth_limit`), scanning at most `budget` pairs per stage. Interval
    problems draw stages of 256·4^k pairs with seeds seed+k until `budget`
    pairs are spent. Other finite spaces get a single exhaustive stage.

    Returns:
        FAIL with the first witness found, else PASS at budget
    """
    if which not in CONDITIONS:
        raise ValidationError(f"Unknown condition '{which}'. Choose from: {', '.join(CONDITIONS)}")
    budget = validate_positive_int(budget, name="budget")
    stages = []

    if isinstance(p.space, ShrinkingFractionsSpace) and _rebindable(p):
        depth = p.space.depth
        while True:
            space = p.space.truncated(depth)
            U = p.U.rebind(space)
            V = p.V.rebind(space) if p.V is not None else None
            report = _run_condition(replace(p, space=space, U=U, V=V), which, budget)
            stages.append({"depth": depth, "pairs": report.pairs_examined})
            log.info("search %s: depth %d, %d pairs, %s", which, depth, report.pairs_examined, report.verdict.value)
            if not report.passed or depth * 2 > depth_limit:
                break
            depth *= 2

    elif not p.space.enumerable:
        spent, k = 0, 0
        while spent < budget:
            size = min(256 * 4 ** k, budget - spent)
            stage = replace(p, sample_budget=size, seed=p.seed + k)
            report = _run_condition(stage, which, None)
            stages.append({"seed": p.seed + k, "samples": size, "pairs": report.pairs_examined})
            spent += size
            k += 1
            if not report.passed:
                break

    else:
        report = _run_condition(p, which, budget)
        stages.append({"pairs": report.pairs_examined})

    report.name = f"search {which}: {report.name}"
    report.coverage = "search"
    report.pairs_examined = sum(s["pairs"] for s in stages)
    report.details["stages"] = stages
    if report.passed:
        report.notes.append(f"no violation within budget {budget}")
    return report

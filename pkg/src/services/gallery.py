"""
Built-in reproductions, each run end to end against its expected outcomes
"""
import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

from src.core.errors import ExpansiveError, UnknownGalleryItem
from src.services import growth as growth_functions
from src.services.checkers import (
    ExpansiveProblem,
    check_jungck_condition,
    check_min_condition,
    check_phi_expansive,
    check_wang_expansive,
)
from src.services.mappings import build_right_inverse, coincidence_points
from src.services.problem import ProblemSpec, parse_spec
from src.services.runner import Expectation, RunReport, run_checks, run_solve
from src.services.solvers import SolverConfig, enumerate_fixed_points, solve_ordered, solve_preimage
from src.services.spaces import usual_order

log = logging.getLogger("expansive.gallery")


def _verdict(report) -> str:
    return report.verdict.value


def _outcome(run: Callable[[], object]) -> str:
    """Verdict-like label for a solver call, including the error it raised"""
    try:
        trace = run()
    except ExpansiveError as e:
        return type(e).__name__
    return trace.verdict.value


# --- Specs ---

def example1_spec() -> ProblemSpec:
    return parse_spec({
        "space": {"kind": "shrinking_fractions", "depth": 64},
        "order": {"kind": "example1"},
        "U": {"kind": "example1_shift"},
        "growth": {"name": "example1"},
        "eta": 2.0,
        "theorem": "ordered",
        "x0": "0",
    })


def example2_spec() -> ProblemSpec:
    return parse_spec({
        "space": {"kind": "real_interval", "a": 0.0, "b": 1.0},
        "order": {"kind": "usual"},
        "U": {"kind": "linear", "slope": 0.25},
        "V": {"kind": "linear", "slope": 1.0 / 12.0},
        "growth": {"name": "exp_t"},
        "eta": 2.0,
        "theorem": "common",
        "x0": 1.0,
    })


def wang_linear_spec() -> ProblemSpec:
    return parse_spec({
        "space": {"kind": "real_interval", "a": 0.0, "b": "inf", "window": [0.0, 10.0]},
        "order": {"kind": "usual"},
        "U": {"kind": "linear", "slope": 2.0},
        "growth": {"name": "exp_t"},
        "eta": 2.0,
        "wang_q": 2.0,
        "theorem": "min",
        "x0": 1.0,
    })


# --- Runs ---

def run_example1() -> RunReport:
    spec = example1_spec()
    built = spec.build()
    report = RunReport("gallery example1", spec.echo())
    run_checks(built, report)
    expect = report.expectations

    for check in report.checks:
        expect.append(Expectation(check.name, "PASS", _verdict(check)))

    p, space, U = built.problem, built.space, built.U
    expect.append(Expectation("φ-expansive at η=3", "FAIL", _verdict(check_phi_expansive(p.with_eta(3.0)))))
    expect.append(Expectation("min condition at η=2", "PASS", _verdict(check_min_condition(p))))

    wang = check_wang_expansive(U, space, 1.1, order=built.order)
    expect.append(Expectation("Wang q=1.1", "FAIL", _verdict(wang)))
    if wang.witness is not None:
        report.notes.append(f"Wang witness ratio d(Ux,Uz)/d(x,z) = {wang.witness.ratio:.6g}")

    Ustar = build_right_inverse(U, space)
    start = solve_ordered(U, Ustar, space.zero, built.order, spec.solver, spec.eta)
    report.traces.append(start)
    expect.append(Expectation("ordered iteration from 0", "Converged at 0", f"{start.verdict.value} at {start.final}"))
    expect.append(Expectation(
        "ordered iteration from 1/5", "StartConditionViolated",
        _outcome(lambda: solve_ordered(U, Ustar, space.point("1/5"), built.order, spec.solver)),
    ))

    # steps shrink like 1/r, so a practical tolerance is coarse
    walk = solve_preimage(U, space.point("1/5"), space, SolverConfig(tol=1e-3, max_iter=5000), spec.eta)
    report.traces.append(walk)
    expect.append(Expectation("preimage walk from 1/5", "Converged", walk.verdict.value))
    expect.append(Expectation("preimage steps strictly decrease", "True", str(walk.strictly_decreasing())))

    fixed = [str(x) for x in enumerate_fixed_points(U, space, 0.0)]
    report.fixed_points = fixed
    expect.append(Expectation("fixed points", "{0, 1}", "{" + ", ".join(fixed) + "}"))
    report.notes.append(
        "U fixes both 0 and 1 although uniqueness is claimed; 1 is comparable only to itself, "
        "so the uniqueness argument never reaches it"
    )
    report.notes.append(
        "the fraction set is indexed from 1/1 here so that U(1) = 1 is a point of the space"
    )
    return report


def run_example2() -> RunReport:
    spec = example2_spec()
    built = spec.build()
    report = RunReport("gallery example2", spec.echo())
    run_checks(built, report)
    expect = report.expectations
    p = built.problem

    for check in report.checks:
        expect.append(Expectation(check.name, "PASS", _verdict(check)))
    for eta, expected in ((1.5, "PASS"), (2.9, "PASS"), (3.1, "FAIL"), (4.0, "FAIL")):
        expect.append(Expectation(f"Jungck condition at η={eta:g}", expected,
                                  _verdict(check_jungck_condition(p.with_eta(eta)))))

    coincidences = [str(z) for z in coincidence_points(built.U, built.V, built.space)]
    expect.append(Expectation("coincidence points", "{0}", "{" + ", ".join(coincidences) + "}"))

    run_solve(built, report)
    trace = report.traces[-1] if report.traces else None
    actual = "no trace" if trace is None else f"{trace.verdict.value}, u≈0: {abs(trace.final.coord) <= 1e-9}"
    expect.append(Expectation("common fixed point from 1", "Converged, u≈0: True", actual))
    if trace is not None:
        expect.append(Expectation("at most 60 iterations", "True", str(trace.iterations <= 60)))
    return report


def run_wang_linear() -> RunReport:
    spec = wang_linear_spec()
    built = spec.build()
    report = RunReport("gallery wang_linear", spec.echo())
    run_checks(built, report)
    expect = report.expectations
    space, U, p = built.space, built.U, built.problem

    for check in report.checks:
        expect.append(Expectation(check.name, "PASS", _verdict(check)))

    for q, expected in ((2.0, "PASS"), (2.5, "FAIL")):
        wang = check_wang_expansive(U, space, q, sample_budget=p.sample_budget, seed=p.seed)
        phi = check_phi_expansive(ExpansiveProblem(space, U, growth_functions.exp_t(), q, usual_order(),
                                                    sample_budget=p.sample_budget, seed=p.seed))
        expect.append(Expectation(f"Wang q={q:g}", expected, _verdict(wang)))
        expect.append(Expectation(f"φ=e^t agrees with Wang at q={q:g}", "True",
                                  str(wang.verdict == phi.verdict and wang.witness == phi.witness)))

    run_solve(built, report)
    trace = report.traces[-1] if report.traces else None
    expect.append(Expectation("preimage walk from 1", "Converged",
                              trace.verdict.value if trace is not None else "no trace"))
    return report


def run_theta_profile() -> RunReport:
    report = RunReport("gallery theta_profile")
    expect = report.expectations
    profiles = {
        "exp_t": growth_functions.exp_t(),
        "exp_sqrt": growth_functions.exp_sqrt(),
        "example1": growth_functions.example1(),
        "power_shift": growth_functions.power_shift(0.5),
    }
    expected_theta3 = {"exp_t": "FAIL", "exp_sqrt": "PASS", "example1": "FAIL", "power_shift": "PASS"}

    for name, f in profiles.items():
        result = growth_functions.classify_theta(f)
        report.theta.append(result)
        expect.append(Expectation(f"{name} θ1", "PASS", result.theta1.value))
        expect.append(Expectation(f"{name} θ3", expected_theta3[name], result.theta3.value))
        if result.theta3.value == "PASS" and result.limit is not None:
            report.notes.append(f"{name}: r = {result.exponent:g}, limit ≈ {result.limit:.6g}")
    return report


@dataclass(frozen=True)
class GalleryItem:
    name: str
    description: str
    spec: Optional[Callable[[], ProblemSpec]]
    run: Callable[[], RunReport]


GALLERY: Dict[str, GalleryItem] = {
    item.name: item for item in (
        GalleryItem("example1", "shrinking fractions, φ = e^{e^{-1/t}}, ordered iteration",
                    example1_spec, run_example1),
        GalleryItem("example2", "Ux = x/4, Vx = x/12 on [0, 1], common fixed point",
                    example2_spec, run_example2),
        GalleryItem("wang_linear", "Ux = 2x on [0, inf), Wang and min conditions",
                    wang_linear_spec, run_wang_linear),
        GalleryItem("theta_profile", "θ1/θ2/θ3 verdicts for every built-in growth function",
                    None, run_theta_profile),
    )
}


def gallery_item(name: str) -> GalleryItem:
    if name not in GALLERY:
        raise UnknownGalleryItem(f"Unknown gallery item '{name}'. Available: {', '.join(GALLERY)}")
    return GALLERY[name]


def gallery_spec(name: str) -> ProblemSpec:
    """The problem behind a gallery item, for check / solve / falsify"""
    item = gallery_item(name)
    if item.spec is None:
        raise UnknownGalleryItem(f"Gallery item '{name}' has no problem spec")
    return item.spec()


def gallery_names() -> List[str]:
    return list(GALLERY)


def cmd_gallery(name: str) -> RunReport:
    """
    Run a built-in end to end and compare against its expected outcomes.

    Raises:
        UnknownGalleryItem: For names outside the gallery
    """
    item = gallery_item(name)
    log.info("gallery %s: %s", item.name, item.description)
    return item.run()

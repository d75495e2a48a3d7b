"""
Run reports and the check / solve / falsify drivers behind the CLI
"""
import json
import logging
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

from src.core.config import RESIDUAL_FACTOR, ToolkitConfig
from src.core.errors import ExpansiveError, MissingOrder, NonMonotoneTrace
from src.core.reports import CheckReport, format_check_report
from src.services.checkers import (
    check_increasing,
    check_jungck_condition,
    check_min_condition,
    check_phi_expansive,
    check_wang_expansive,
    search_violation,
)
from src.services.growth import ThetaClassification, classify_theta
from src.services.mappings import build_right_inverse, verify_surjective, verify_weak_compatibility
from src.services.problem import BuiltProblem, ProblemSpec
from src.services.solvers import (
    IterationTrace,
    cauchy_diagnostics,
    enumerate_fixed_points,
    solve_common,
    solve_ordered,
    solve_preimage,
)
from src.services.spaces import verify_metric_axioms, verify_order_axioms

log = logging.getLogger("expansive.runner")

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


@dataclass
class Expectation:
    name: str
    expected: str
    actual: str

    @property
    def ok(self) -> bool:
        return self.expected == self.actual

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "expected": self.expected, "actual": self.actual, "ok": self.ok}


@dataclass
class RunReport:
    """Everything one CLI invocation produced, with the spec that produced it"""
    command: str
    spec: Optional[Dict[str, Any]] = None
    timestamp: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat())
    version: str = ToolkitConfig.VERSION
    config: Dict[str, Any] = field(default_factory=ToolkitConfig.summary)
    checks: List[CheckReport] = field(default_factory=list)
    traces: List[IterationTrace] = field(default_factory=list)
    fixed_points: Optional[List[str]] = None
    theta: List[ThetaClassification] = field(default_factory=list)
    expectations: List[Expectation] = field(default_factory=list)
    errors: List[Dict[str, str]] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)
    right_inverse: Optional[Dict[str, Any]] = None
    solve_required: bool = False

    @property
    def passed(self) -> bool:
        if self.errors:
            return False
        if self.expectations:
            return all(e.ok for e in self.expectations)
        if self.solve_required and not (self.traces and all(t.converged for t in self.traces)):
            return False
        return all(c.passed for c in self.checks)

    @property
    def exit_code(self) -> int:
        return EXIT_OK if self.passed else EXIT_FAILURE

    @property
    def verdict(self) -> str:
        return "PASS" if self.passed else "FAIL"

    def record_error(self, where: str, error: Exception) -> None:
        self.errors.append({"where": where, "error": type(error).__name__, "message": str(error)})

    def to_dict(self) -> Dict[str, Any]:
        return {
            "command": self.command,
            "timestamp": self.timestamp,
            "version": self.version,
            "verdict": self.verdict,
            "exit_code": self.exit_code,
            "spec": self.spec,
            "config": self.config,
            "checks": [c.to_dict() for c in self.checks],
            "traces": [t.summary() for t in self.traces],
            "fixed_points": self.fixed_points,
            "theta": [t.to_dict() for t in self.theta],
            "expectations": [e.to_dict() for e in self.expectations],
            "errors": list(self.errors),
            "notes": list(self.notes),
        }

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent, default=str)


def format_run_report(report: RunReport) -> str:
    """
    Format a run for the terminal.

    Args:
        report: RunReport object

    Returns:
        Formatted report string
    """
    lines = [
        f"{'✅' if report.passed else '⛔'} expansive {report.command} (v{report.version})",
        "",
    ]

    for check in report.checks:
        lines.append(format_check_report(check))

    for trace in report.traces:
        lines.append(
            f"{'✅' if trace.converged else '⛔'} {trace.solver} iteration: {trace.verdict.value} "
            f"after {trace.iterations} steps at {trace.final}"
        )
        if trace.residual is not None:
            lines.append(f"   residual: {trace.residual:.3g}")
        if trace.s is not None:
            ratio = trace.envelope_ratio
            realized = f"{ratio:.4g}" if ratio is not None else "n/a"
            lines.append(f"   s = 1/η = {trace.s:.4g}, realized step ratio {realized}")
        if trace.cauchy is not None:
            c = trace.cauchy
            previous = f"{c.previous_diameter:.3g}" if c.previous_diameter is not None else "n/a"
            lines.append(
                f"   Cauchy window {c.window}: diameter {c.diameter:.3g} (previous {previous}), "
                f"{'not Cauchy-like' if c.not_cauchy_like else 'consistent with Cauchy'}"
            )
        for note in trace.notes:
            lines.append(f"   💡 {note}")

    if report.fixed_points is not None:
        shown = ", ".join(report.fixed_points[:12])
        more = f" (+{len(report.fixed_points) - 12} more)" if len(report.fixed_points) > 12 else ""
        lines.append(f"🔎 fixed points: {{{shown}}}{more}")

    if report.theta:
        lines.append("")
        lines.append("Θ-class profile:")
        for t in report.theta:
            exponent = f" r={t.exponent:g}" if t.exponent is not None else ""
            lines.append(
                f"  {t.name:<12} θ1 {t.theta1.value:<12} θ2 {t.theta2.value:<12} θ3 {t.theta3.value}{exponent}"
            )

    if report.expectations:
        lines.append("")
        lines.append("Expected vs actual:")
        for e in report.expectations:
            lines.append(f"  {'✅' if e.ok else '❌'} {e.name}: expected {e.expected}, got {e.actual}")

    for error in report.errors:
        lines.append(f"❌ {error['where']}: {error['error']}: {error['message']}")

    if report.notes:
        lines.append("")
        lines.extend(f"💡 {note}" for note in report.notes)

    return "\n".join(lines)


# --- Drivers ---

def _guarded(report: RunReport, where: str, run: Callable[[], Any]) -> Any:
    try:
        return run()
    except NonMonotoneTrace as e:
        if e.trace is not None:
            report.traces.append(e.trace)
        report.record_error(where, e)
    except ExpansiveError as e:
        report.record_error(where, e)
    return None


def _add_check(report: RunReport, where: str, run: Callable[[], CheckReport]) -> Optional[CheckReport]:
    result = _guarded(report, where, run)
    if result is not None:
        report.checks.append(result)
    return result


def _uniqueness_note(report: RunReport, built: BuiltProblem) -> None:
    fixed = _guarded(report, "fixed points",
                     lambda: enumerate_fixed_points(built.U, built.space, built.spec.solver.tol))
    if fixed is None:
        return
    report.fixed_points = [str(p) for p in fixed]
    if len(fixed) > 1:
        report.notes.append(
            f"{len(fixed)} fixed points found; the uniqueness conclusion does not hold on this space "
            "(its hypothesis only covers comparable pairs)"
        )


def run_checks(built: BuiltProblem, report: RunReport) -> RunReport:
    """Every checker that applies to the selected theorem"""
    spec, space, p = built.spec, built.space, built.problem

    _add_check(report, "metric axioms", lambda: verify_metric_axioms(space, p.sample_budget, p.seed))
    if built.order is not None:
        if space.enumerable:
            _add_check(report, "order axioms", lambda: verify_order_axioms(space, built.order))
        else:
            report.notes.append("order axioms are not scanned on interval spaces")

    if spec.theorem == "ordered":
        if _add_check(report, "surjectivity", lambda: verify_surjective(built.U, space)) is not None:
            Ustar = _guarded(report, "right inverse", lambda: build_right_inverse(built.U, space))
            if Ustar is not None:
                report.right_inverse = Ustar.to_dict()
            if Ustar is not None and space.enumerable and built.order is not None:
                _add_check(report, "U* increasing", lambda: check_increasing(Ustar, built.order, space))
        _add_check(report, "φ-expansive", lambda: check_phi_expansive(p))
        _uniqueness_note(report, built)

    elif spec.theorem == "min":
        _add_check(report, "surjectivity", lambda: verify_surjective(built.U, space))
        _add_check(report, "min condition", lambda: check_min_condition(p))

    else:
        _add_check(report, "weak compatibility", lambda: verify_weak_compatibility(built.U, built.V, space))
        _add_check(report, "Jungck condition", lambda: check_jungck_condition(p))

    if spec.wang_q is not None:
        _add_check(report, "Wang", lambda: check_wang_expansive(
            built.U, space, spec.wang_q, built.order, p.sample_budget, p.seed))

    report.theta.append(classify_theta(built.growth))
    return report


def cmd_check(spec: ProblemSpec) -> RunReport:
    """
    Run every applicable checker.

    Raises:
        SpecParseError: If the spec cannot be built
    """
    built = spec.build()
    report = RunReport("check", spec.echo())
    return run_checks(built, report)


def run_solve(built: BuiltProblem, report: RunReport) -> RunReport:
    spec, space, cfg = built.spec, built.space, built.spec.solver
    report.solve_required = True

    if spec.theorem == "ordered":
        def solve() -> IterationTrace:
            if built.order is None:
                raise MissingOrder("theorem 'ordered' needs a partial order")
            Ustar = build_right_inverse(built.U, space)
            report.right_inverse = Ustar.to_dict()
            return solve_ordered(built.U, Ustar, built.x0, built.order, cfg, spec.eta)
    elif spec.theorem == "min":
        def solve() -> IterationTrace:
            return solve_preimage(built.U, built.x0, space, cfg, spec.eta)
    else:
        def solve() -> IterationTrace:
            result = solve_common(built.U, built.V, built.x0, space, cfg, spec.eta)
            report.notes.append(f"common fixed point u = {result.u}, Uu = {result.w}")
            return result.trace

    trace = _guarded(report, f"solve ({spec.theorem})", solve)
    if trace is None:
        return report
    report.traces.append(trace)
    if len(trace.points) >= cfg.cauchy_window:
        trace.cauchy = cauchy_diagnostics(trace, cfg.cauchy_window)
        if trace.cauchy.not_cauchy_like:
            trace.notes.append(f"steps vanish but the last {cfg.cauchy_window} points do not contract")

    fixed = _guarded(report, "fixed points",
                     lambda: enumerate_fixed_points(built.U, space, RESIDUAL_FACTOR * cfg.tol))
    if fixed is not None:
        report.fixed_points = [str(p) for p in fixed]
        if trace.converged and space.enumerable and trace.final not in fixed:
            report.notes.append(f"{trace.final} is not among the enumerated fixed points")
    return report


def cmd_solve(spec: ProblemSpec, strict: bool = False) -> RunReport:
    """
    Solve with the iteration of the selected theorem.

    With `strict`, the theorem's checks run first and any failure stops the
    run before iterating.
    """
    built = spec.build()
    report = RunReport("solve", spec.echo())
    if strict:
        run_checks(built, report)
        if not report.passed:
            report.notes.append("strict mode: hypotheses failed, iteration skipped")
            report.solve_required = True
            return report
    return run_solve(built, report)


def cmd_falsify(spec: ProblemSpec, which: str, budget: int = ToolkitConfig.SAMPLE_BUDGET) -> RunReport:
    """Counterexample search; exit status 1 when a violation turns up"""
    built = spec.build()
    report = RunReport("falsify", spec.echo())
    _add_check(report, f"search {which}", lambda: search_violation(built.problem, which, budget))
    return report


def write_outputs(report: RunReport, out_dir: Path) -> List[Path]:
    """report.json, right_inverse.json when U* was built, and one CSV and one summary JSON per trace"""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = [out_dir / "report.json"]
    written[0].write_text(report.to_json())
    if report.right_inverse is not None:
        path = out_dir / "right_inverse.json"
        path.write_text(json.dumps(report.right_inverse, indent=2))
        written.append(path)
    for i, trace in enumerate(report.traces):
        stem = f"trace_{i}_{trace.solver}"
        written.append(trace.write_csv(out_dir / f"{stem}.csv"))
        written.append(trace.write_summary(out_dir / f"{stem}_summary.json"))
    log.info("wrote %d files to %s", len(written), out_dir)
    return written

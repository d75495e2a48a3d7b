"""
Fixed-point iterations with full traces and convergence diagnostics
"""
import csv
import json
import logging
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from src.core.config import RESIDUAL_FACTOR, TAU_EQ, ToolkitConfig
from src.core.errors import (
    CoincidenceNotFixed,
    ContainmentViolated,
    NonMonotoneTrace,
    NotSurjective,
    StartConditionViolated,
    TraceTooShort,
)
from src.core.validators import validate_eta, validate_positive_int, validate_tolerance
from src.services.mappings import Mapping, RightInverse, refine_roots, verify_containment
from src.services.spaces import MetricSpace, PartialOrder, Point

log = logging.getLogger("expansive.solvers")

# consecutive increasing steps tolerated before the trace is declared non-monotone
MAX_INCREASES = 3


class SolverConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    tol: float = Field(default=ToolkitConfig.TOL, gt=0)
    max_iter: int = Field(default=ToolkitConfig.MAX_ITER, ge=1)
    cauchy_window: int = Field(default=ToolkitConfig.CAUCHY_WINDOW, ge=2)


class StopReason(str, Enum):
    CONVERGED = "Converged"
    MAX_ITERATIONS = "MaxIterations"
    STALLED = "StalledNonMonotone"


@dataclass
class IterationTrace:
    """
    x_0..x_N with the step distances between them.

    `residual` is d(x_N, Ux_N). A Converged trace has residual <= residual_bound,
    which is RESIDUAL_FACTOR·tol for single-map solvers and tol for the common
    fixed point solver.
    """
    solver: str
    space: MetricSpace = field(repr=False)
    points: List[Point] = field(default_factory=list)
    step_distances: List[float] = field(default_factory=list)
    residual: Optional[float] = None
    verdict: StopReason = StopReason.MAX_ITERATIONS
    tol: float = ToolkitConfig.TOL
    residual_bound: Optional[float] = None
    s: Optional[float] = None
    cauchy: Optional["CauchyDiagnostic"] = None
    notes: List[str] = field(default_factory=list)

    @classmethod
    def from_points(cls, space: MetricSpace, points: List[Point], solver: str = "external",
                    tol: float = ToolkitConfig.TOL) -> "IterationTrace":
        steps = [space.distance(a, b) for a, b in zip(points, points[1:])]
        return cls(solver, space, list(points), steps, tol=tol)

    @property
    def iterations(self) -> int:
        return len(self.step_distances)

    @property
    def final(self) -> Point:
        return self.points[-1]

    @property
    def converged(self) -> bool:
        return self.verdict is StopReason.CONVERGED

    @property
    def envelope_ratio(self) -> Optional[float]:
        """Geometric mean of d_{n+1}/d_n over consecutive positive steps"""
        steps = np.asarray(self.step_distances, dtype=float)
        pairs = (steps[:-1] > 0) & (steps[1:] > 0)
        if not np.any(pairs):
            return None
        return float(np.exp(np.mean(np.log(steps[1:][pairs] / steps[:-1][pairs]))))

    def strictly_decreasing(self) -> bool:
        """Positive steps shrink strictly; a final zero step is allowed"""
        positive = [d for d in self.step_distances if self.space.separated(d)]
        return all(b < a for a, b in zip(positive, positive[1:]))

    def summary(self) -> Dict[str, Any]:
        return {
            "solver": self.solver,
            "verdict": self.verdict.value,
            "iterations": self.iterations,
            "final": str(self.final) if self.points else None,
            "residual": self.residual,
            "residual_bound": self.residual_bound,
            "tol": self.tol,
            "s": self.s,
            "envelope_ratio": self.envelope_ratio,
            "cauchy": self.cauchy.to_dict() if self.cauchy is not None else None,
            "notes": list(self.notes),
        }

    def to_dict(self) -> Dict[str, Any]:
        data = self.summary()
        data["points"] = [str(p) for p in self.points]
        data["step_distances"] = list(self.step_distances)
        return data

    def write_csv(self, path: Path) -> Path:
        """Columns n, point, step_distance (empty for n = 0)"""
        path = Path(path)
        with path.open("w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(["n", "point", "step_distance"])
            for n, p in enumerate(self.points):
                step = self.step_distances[n - 1] if n > 0 else ""
                writer.writerow([n, str(p), step])
        return path

    def write_summary(self, path: Path) -> Path:
        path = Path(path)
        path.write_text(json.dumps(self.summary(), indent=2))
        return path


# --- Core loop ---

def _iterate(name: str, space: MetricSpace, U: Mapping, x0: Point,
             step: Callable[[Point], Point], cfg: SolverConfig,
             eta: Optional[float], stop_at_fixed: bool) -> IterationTrace:
    trace = IterationTrace(name, space, [x0], tol=cfg.tol, residual_bound=RESIDUAL_FACTOR * cfg.tol)
    if eta is not None:
        trace.s = 1.0 / validate_eta(eta)

    x = x0
    increases = 0
    for _ in range(cfg.max_iter):
        if stop_at_fixed and not space.separated(space.distance(x, U(x))):
            trace.residual = space.distance(x, U(x))
            trace.verdict = StopReason.CONVERGED
            log.debug("%s: x_%d = %s is fixed", name, trace.iterations, x)
            return trace

        nxt = step(x)
        d = space.distance(x, nxt)
        if trace.step_distances and d > trace.step_distances[-1] + TAU_EQ:
            increases += 1
        else:
            increases = 0
        trace.points.append(nxt)
        trace.step_distances.append(d)
        x = nxt

        if increases >= MAX_INCREASES:
            trace.verdict = StopReason.STALLED
            trace.residual = space.distance(x, U(x))
            raise NonMonotoneTrace(
                f"{name}: step distances increased {MAX_INCREASES} times in a row at n={trace.iterations}",
                trace,
            )

        if d <= cfg.tol:
            trace.residual = space.distance(x, U(x))
            if trace.residual <= trace.residual_bound:
                trace.verdict = StopReason.CONVERGED
            else:
                trace.notes.append(
                    f"steps vanished but d(x, Ux) = {trace.residual:.3g} exceeds {trace.residual_bound:.3g}"
                )
            log.debug("%s stopped after %d steps: %s", name, trace.iterations, trace.verdict.value)
            return trace

    trace.residual = space.distance(x, U(x))
    trace.notes.append(f"max_iter={cfg.max_iter} reached")
    return trace


def solve_ordered(U: Mapping, Ustar: RightInverse, x0: Point, order: PartialOrder,
                  cfg: Optional[SolverConfig] = None, eta: Optional[float] = None) -> IterationTrace:
    """
    Iterate x_{n+1} = U*x_n from a start with x_0 ⪯ U*x_0.

    Raises:
        StartConditionViolated: If x_0 is not below U*x_0
        NonMonotoneTrace: If step distances keep increasing
    """
    cfg = cfg or SolverConfig()
    first = Ustar(x0)
    if not order(x0, first):
        raise StartConditionViolated(f"x0 = {x0} is not {order.name}-below U*x0 = {first}")
    return _iterate("ordered", U.space, U, x0, Ustar, cfg, eta, stop_at_fixed=False)


def solve_preimage(U: Mapping, x0: Point, space: MetricSpace,
                   cfg: Optional[SolverConfig] = None, eta: Optional[float] = None) -> IterationTrace:
    """
    Iterate x_{n+1} = least U-preimage of x_n, stopping at a fixed point.

    Steps need not shrink geometrically. On the shrinking fractions the walk
    from 1/r visits 1/(r+1), 1/(r+2), ... and the step leaving 1/n is 1/n, so a
    tolerance of about 1e-3 converges in roughly a thousand steps while the
    default 1e-10 exhausts max_iter.

    Raises:
        NotSurjective: If some x_n has no preimage
        NonMonotoneTrace: If step distances keep increasing
    """
    cfg = cfg or SolverConfig()

    def step(x: Point) -> Point:
        pre = U.least_preimage(x)
        if pre is None or not space.contains(pre):
            raise NotSurjective(f"{x} has no preimage under {U.name}", [str(x)])
        return pre

    return _iterate("preimage", space, U, x0, step, cfg, eta, stop_at_fixed=True)


# --- Common fixed points ---

@dataclass
class CommonFixedPoint:
    trace: IterationTrace
    u: Point
    w: Point

    def to_dict(self) -> Dict[str, Any]:
        return {"u": str(self.u), "w": str(self.w), "trace": self.trace.summary()}


def _fixed_by_both(U: Mapping, V: Mapping, space: MetricSpace, p: Point, tol: float) -> Optional[float]:
    """max(d(Up, p), d(Vp, p)) when both are within tol, else None"""
    worst = max(space.distance(U(p), p), space.distance(V(p), p))
    return worst if worst <= tol else None


def solve_common(U: Mapping, V: Mapping, x0: Point, space: MetricSpace,
                 cfg: Optional[SolverConfig] = None, eta: Optional[float] = None) -> CommonFixedPoint:
    """
    Jungck iteration y_{n+1} = Ux_{n+1} = Vx_n.

    Iterates until the current preimage u = x_n, or failing that the
    coincidence value w = y_n, is fixed by both maps within tol. A constant
    y-sequence means x_n is a coincidence point; the iteration then restarts
    from w, provided U and V commute there.

    Raises:
        ContainmentViolated: If V(M) ⊄ U(M), or some Vx_n has no U-preimage
        CoincidenceNotFixed: If a coincidence point breaks UVz = VUz, or the
            coincidence values cycle without a common fixed point
        NonMonotoneTrace: If y-step distances keep increasing
    """
    cfg = cfg or SolverConfig()
    containment = verify_containment(V, U, space)
    if not containment.passed:
        w = containment.witness
        raise ContainmentViolated(f"{V.name}(M) is not contained in {U.name}(M) at {w.x}", w)

    trace = IterationTrace("common", space, [], tol=cfg.tol, residual_bound=cfg.tol)
    if eta is not None:
        trace.s = 1.0 / validate_eta(eta)

    def preimage(y: Point) -> Point:
        pre = U.least_preimage(y)
        if pre is None or not space.contains(pre):
            raise ContainmentViolated(f"{y} = {V.name}x has no {U.name}-preimage", y)
        return pre

    x = x0
    restarts = {x0}
    y = V(x)
    trace.points.append(y)
    increases = 0

    for _ in range(cfg.max_iter):
        x = preimage(y)
        y_next = V(x)
        d = space.distance(y, y_next)
        if trace.step_distances and d > trace.step_distances[-1] + TAU_EQ:
            increases += 1
        else:
            increases = 0
        trace.points.append(y_next)
        trace.step_distances.append(d)

        if increases >= MAX_INCREASES:
            trace.verdict = StopReason.STALLED
            raise NonMonotoneTrace(f"common: y-steps increased {MAX_INCREASES} times in a row", trace)

        # Ux = y; u = x, else w = y
        for candidate in (x, y):
            residual = _fixed_by_both(U, V, space, candidate, cfg.tol)
            if residual is not None:
                trace.residual = residual
                trace.verdict = StopReason.CONVERGED
                log.debug("common fixed point %s after %d steps", candidate, trace.iterations)
                return CommonFixedPoint(trace, candidate, U(candidate))

        if not space.separated(d):
            # x is a coincidence point with value y
            uv, vu = U(V(x)), V(U(x))
            if space.separated(space.distance(uv, vu)):
                raise CoincidenceNotFixed(
                    f"{U.name}{V.name}z ≠ {V.name}{U.name}z at the coincidence point {x}", x, trace
                )
            if y in restarts:
                raise CoincidenceNotFixed(f"coincidence value {y} is not a common fixed point", y, trace)
            restarts.add(y)
            trace.notes.append(f"restart from coincidence value {y}")
            y_next = V(y)
            trace.points.append(y_next)
            trace.step_distances.append(space.distance(y, y_next))
            increases = 0
        y = y_next

    trace.residual = max(space.distance(U(x), x), space.distance(V(x), x))
    trace.notes.append(f"max_iter={cfg.max_iter} reached")
    return CommonFixedPoint(trace, x, y)


# --- Diagnostics and oracles ---

@dataclass
class CauchyDiagnostic:
    window: int
    diameter: float
    previous_diameter: Optional[float]
    decays: bool
    steps_vanish: bool

    @property
    def not_cauchy_like(self) -> bool:
        return self.steps_vanish and not self.decays

    def to_dict(self) -> Dict[str, Any]:
        return {
            "window": self.window,
            "diameter": self.diameter,
            "previous_diameter": self.previous_diameter,
            "decays": self.decays,
            "steps_vanish": self.steps_vanish,
            "not_cauchy_like": self.not_cauchy_like,
        }


def _diameter(space: MetricSpace, pts: List[Point]) -> float:
    return float(space.distance_matrix(pts).max()) if len(pts) > 1 else 0.0


def cauchy_diagnostics(trace: IterationTrace, window: int = ToolkitConfig.CAUCHY_WINDOW) -> CauchyDiagnostic:
    """
    Compare the diameter of the last `window` points with the window before it.

    The diameter decays when it is at most half the previous one (or within
    tol). Steps vanish when the last one is at most 1% of the largest. Vanishing
    steps with a non-decaying diameter are flagged as not Cauchy-like.

    Raises:
        TraceTooShort: If the trace holds fewer than `window` points
    """
    window = validate_positive_int(window, name="window")
    n = len(trace.points)
    if n < window:
        raise TraceTooShort(f"trace has {n} points, window needs {window}")

    space = trace.space
    diameter = _diameter(space, trace.points[n - window:])
    previous = None
    if n - window >= 2:
        previous = _diameter(space, trace.points[max(0, n - 2 * window):n - window])

    decays = diameter <= trace.tol or (previous is not None and diameter <= 0.5 * previous)
    steps = trace.step_distances
    steps_vanish = bool(steps) and steps[-1] <= 0.01 * max(steps)
    return CauchyDiagnostic(window, diameter, previous, decays, steps_vanish)


def enumerate_fixed_points(U: Mapping, space: MetricSpace, tol: float = ToolkitConfig.TOL,
                           grid_points: int = ToolkitConfig.GRID_POINTS) -> List[Point]:
    """
    Every x with d(x, Ux) <= tol. Intervals are scanned on a grid; adjacent
    hits merge into one point and sign changes of Ux - x are refined.
    """
    tol = validate_tolerance(tol) if tol > 0 else 0.0
    if space.enumerable:
        return [x for x in space.points() if space.distance(x, U(x)) <= tol]

    grid = space.grid(grid_points)
    values = U.apply_coords(grid) - grid

    def g(x: float) -> float:
        return float(U.apply_coords(np.array([x]))[0] - x)

    return [space.at(x) for x in refine_roots(g, grid, values, max(tol, TAU_EQ))]

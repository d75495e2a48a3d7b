"""
Growth functions φ: (0, inf) -> (1, inf), evaluated as log φ (and log log φ).

Nothing here ever exponentiates φ itself: e^t overflows long before the
toolkit's working range ends, and e^{e^{-1/t}} is indistinguishable from 1
in linear precision for the distances of the shrinking-fractions space.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, NamedTuple, Optional, Sequence

import numpy as np

from src.core.config import TAU_EQ
from src.core.errors import DomainError
from src.core.reports import Verdict
from src.core.validators import (
    ValidationError,
    validate_probe_scales,
    validate_unit_interval_grid,
)

log = logging.getLogger("expansive.growth")

# log values below this are treated as underflowed
UNDERFLOW_FLOOR = 1e-280

DEFAULT_PROBE_SCALES = tuple(10.0 ** -k for k in range(1, 13))
DEFAULT_R_GRID = tuple(round(0.1 * k, 1) for k in range(1, 10))
DEFAULT_MONOTONE_GRID = tuple(np.logspace(-12, 8, 241))

# θ3 heuristic thresholds
STABLE_SPREAD = 0.10
DIVERGENT_FLOOR = 1e6
VANISHING_CEILING = 1e-9
SLOPE_THRESHOLD = 0.05

# φ(t) - 1 at the finest probe must be below this for θ2
THETA2_CEILING = 1e-3


@dataclass(frozen=True)
class GrowthFunction:
    name: str
    log_value: Callable[[float], float]
    log_log_value: Optional[Callable[[float], float]] = None
    params: Dict[str, Any] = field(default_factory=dict)

    def describe(self) -> Dict[str, Any]:
        return {"name": self.name, **self.params}


def eval_log(f: GrowthFunction, t: float) -> float:
    """
    log φ(t).

    Raises:
        DomainError: For t <= 0 (φ is only defined on (0, inf))
    """
    if not t > 0.0:
        raise DomainError(f"{f.name}: growth functions are defined for t > 0, got {t}")
    return float(f.log_value(t))


def eval_log_log(f: GrowthFunction, t: float) -> Optional[float]:
    if not t > 0.0:
        raise DomainError(f"{f.name}: growth functions are defined for t > 0, got {t}")
    if f.log_log_value is not None:
        return float(f.log_log_value(t))
    value = eval_log(f, t)
    return math.log(value) if value > 0.0 else None


# --- Built-ins ---

def exp_t() -> GrowthFunction:
    """φ(t) = e^t"""
    return GrowthFunction("exp_t", lambda t: t, math.log)


def exp_sqrt() -> GrowthFunction:
    """φ(t) = e^{√t}"""
    return GrowthFunction("exp_sqrt", math.sqrt, lambda t: 0.5 * math.log(t))


def example1() -> GrowthFunction:
    """φ(t) = e^{e^{-1/t}}"""
    return GrowthFunction("example1", lambda t: math.exp(-1.0 / t), lambda t: -1.0 / t)


def power_shift(p: float) -> GrowthFunction:
    """φ(t) = 1 + t^p"""
    if not p > 0.0:
        raise ValidationError(f"power_shift needs p > 0, got {p}")

    def log_value(t: float) -> float:
        return float(np.logaddexp(0.0, p * math.log(t)))

    def log_log_value(t: float) -> float:
        u = p * math.log(t)
        # log(1 + e^u) ~ e^u far below zero
        return u if u < -30.0 else math.log(float(np.logaddexp(0.0, u)))

    return GrowthFunction("power_shift", log_value, log_log_value, {"p": p})


def tabulated(ts: Sequence[float], log_values: Sequence[float]) -> GrowthFunction:
    """
    Piecewise-linear log φ through the given knots, clamped at both ends.

    Raises:
        ValidationError: If knots are not increasing in t, or log φ is not
            positive and non-decreasing
    """
    ts = np.asarray(ts, dtype=float)
    ys = np.asarray(log_values, dtype=float)
    if ts.ndim != 1 or ts.shape != ys.shape or len(ts) < 2:
        raise ValidationError("Tabulated growth needs matching knot lists of length >= 2")
    if np.any(ts <= 0) or np.any(np.diff(ts) <= 0):
        raise ValidationError("Tabulated knots must be positive and strictly increasing")
    if np.any(ys <= 0) or np.any(np.diff(ys) < 0):
        raise ValidationError("Tabulated log φ must be positive and non-decreasing")

    return GrowthFunction(
        "tabulated",
        lambda t: float(np.interp(t, ts, ys)),
        None,
        {"t": ts.tolist(), "log_phi": ys.tolist()},
    )


BUILTINS: Dict[str, Callable[..., GrowthFunction]] = {
    "exp_t": exp_t,
    "exp_sqrt": exp_sqrt,
    "example1": example1,
    "power_shift": power_shift,
}


def builtin(name: str, **params: Any) -> GrowthFunction:
    if name not in BUILTINS:
        raise ValidationError(f"Unknown growth function '{name}'. Built-ins: {', '.join(BUILTINS)}")
    return BUILTINS[name](**params)


# --- Powered comparison used by every checker ---

class Comparison(NamedTuple):
    holds: bool
    lhs_log: float
    rhs_log: float
    lhs_loglog: Optional[float]
    rhs_loglog: Optional[float]
    domain: str


def compare_powered(f: GrowthFunction, lhs_t: float, rhs_t: float, eta: float) -> Comparison:
    """
    φ(lhs_t) >= φ(rhs_t)^η, decided as log φ(lhs_t) >= η·log φ(rhs_t).

    Falls back to log φ(lhs_t)'s logarithm when either side underflows.
    """
    lhs, rhs = eval_log(f, lhs_t), eval_log(f, rhs_t)
    if min(lhs, rhs) >= UNDERFLOW_FLOOR or f.log_log_value is None:
        return Comparison(lhs >= eta * rhs * (1.0 - TAU_EQ), lhs, rhs, None, None, "log")

    lhs_ll, rhs_ll = eval_log_log(f, lhs_t), eval_log_log(f, rhs_t)
    holds = lhs_ll >= math.log(eta) + rhs_ll - TAU_EQ
    return Comparison(holds, lhs, rhs, lhs_ll, rhs_ll, "loglog")


# --- Θ-class profiler ---

@dataclass
class ThetaClassification:
    name: str
    theta1: Verdict
    theta2: Verdict
    theta3: Verdict
    exponent: Optional[float] = None
    limit: Optional[float] = None
    probe_log: List[Dict[str, Any]] = field(default_factory=list)

    @property
    def in_class(self) -> bool:
        return all(v is Verdict.PASS for v in (self.theta1, self.theta2, self.theta3))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "theta1": self.theta1.value,
            "theta2": self.theta2.value,
            "theta3": self.theta3.value,
            "exponent": self.exponent,
            "limit": None if self.limit is None else (self.limit if math.isfinite(self.limit) else "inf"),
            "in_class": self.in_class,
            "probe_log": self.probe_log,
        }


def check_monotone(f: GrowthFunction, grid: Sequence[float] = DEFAULT_MONOTONE_GRID) -> Optional[tuple]:
    """First (t1, t2) on the grid with log φ(t1) > log φ(t2) + TAU_EQ, or None"""
    values = [eval_log(f, t) for t in grid]
    for (t1, v1), (t2, v2) in zip(zip(grid, values), zip(grid[1:], values[1:])):
        if v1 > v2 + TAU_EQ:
            return t1, t2
    return None


def _theta3_for(estimates: Sequence[float], scales: Sequence[float]) -> tuple:
    """Verdict and limit estimate for one exponent r from the three finest probes"""
    e = list(estimates[-3:])
    t = list(scales[-3:])

    if all(v < VANISHING_CEILING for v in e) and e[0] >= e[1] >= e[2]:
        return Verdict.FAIL, 0.0
    if min(e) > 0.0 and max(e) <= (1.0 + STABLE_SPREAD) * min(e):
        return Verdict.PASS, e[-1]
    if all(v > DIVERGENT_FLOOR for v in e):
        return Verdict.PASS, math.inf

    if min(e) > 0.0:
        slope = (math.log(e[-1]) - math.log(e[0])) / (math.log(t[-1]) - math.log(t[0]))
        # estimates behave like t^slope as t -> 0+
        if slope <= -SLOPE_THRESHOLD and e[0] < e[1] < e[2]:
            return Verdict.PASS, math.inf
        if slope >= SLOPE_THRESHOLD and e[0] > e[1] > e[2]:
            return Verdict.FAIL, 0.0
    return Verdict.INCONCLUSIVE, e[-1]


def classify_theta(f: GrowthFunction,
                   probe_scales: Sequence[float] = DEFAULT_PROBE_SCALES,
                   r_grid: Sequence[float] = DEFAULT_R_GRID) -> ThetaClassification:
    """
    Numerically classify f against the conditions θ1–θ3 of the class Θ.

    θ1: monotone on a log-spaced grid. θ2: φ(t_k) - 1 -> 0 along the probes
    while φ stays above 1 away from 0. θ3: (φ(t) - 1)/t^r stabilizes, for
    some r, to a limit in (0, inf] at the finest probes.
    """
    scales = validate_probe_scales(probe_scales)
    rs = validate_unit_interval_grid(r_grid)
    result = ThetaClassification(f.name, Verdict.PASS, Verdict.PASS, Verdict.INCONCLUSIVE)

    broken = check_monotone(f)
    if broken is not None:
        result.theta1 = Verdict.FAIL
        result.probe_log.append({"theta1_violation": list(broken)})

    # φ(t) - 1 computed as expm1(log φ(t))
    excess = [float(np.expm1(eval_log(f, t))) for t in scales]
    result.probe_log.append({"scales": scales, "phi_minus_one": excess})
    vanishes = excess[-1] <= THETA2_CEILING and all(b <= a + TAU_EQ for a, b in zip(excess, excess[1:]))
    bounded_away = float(np.expm1(eval_log(f, scales[0]))) > 0.0 and result.theta1 is Verdict.PASS
    result.theta2 = Verdict.PASS if vanishes and bounded_away else Verdict.FAIL

    finite_pass, infinite_pass, verdicts = None, None, []
    for r in rs:
        estimates = [x / t ** r for x, t in zip(excess, scales)]
        verdict, limit = _theta3_for(estimates, scales)
        verdicts.append(verdict)
        result.probe_log.append({"r": r, "estimates": estimates[-3:], "verdict": verdict.value})
        if verdict is Verdict.PASS:
            if math.isfinite(limit) and finite_pass is None:
                finite_pass = (r, limit)
            elif not math.isfinite(limit) and infinite_pass is None:
                infinite_pass = (r, limit)

    chosen = finite_pass or infinite_pass
    if chosen is not None:
        result.theta3 = Verdict.PASS
        result.exponent, result.limit = chosen
    elif all(v is Verdict.FAIL for v in verdicts):
        result.theta3 = Verdict.FAIL

    log.debug("theta profile %s: %s %s %s", f.name, result.theta1, result.theta2, result.theta3)
    return result

"""
Self-maps of a space: preimages, right inverses, coincidence points
"""
import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Callable, ClassVar, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import bisect, brentq

from src.core.config import TAU_EQ, ToolkitConfig
from src.core.errors import NotSurjective, UnsupportedSpace
from src.core.reports import CheckReport, Witness
from src.core.validators import ValidationError
from src.services.spaces import MetricSpace, Point, RealIntervalSpace, ShrinkingFractionsSpace

log = logging.getLogger("expansive.mappings")

# preimages of monotone interval maps are bracketed to this width
BISECT_XTOL = 1e-12


class Mapping(ABC):
    kind: ClassVar[str]

    def __init__(self, space: MetricSpace, name: str):
        self.space = space
        self.name = name

    @abstractmethod
    def apply(self, x: Point) -> Point:
        ...

    def __call__(self, x: Point) -> Point:
        return self.apply(x)

    def preimages(self, y: Point) -> List[Point]:
        """All preimages of y within the enumeration, canonical order"""
        return self._inverse_index.get(y, [])

    def least_preimage(self, y: Point) -> Optional[Point]:
        candidates = self.preimages(y)
        return candidates[0] if candidates else None

    def image_range(self) -> Optional[Tuple[float, float]]:
        """Image of an interval map, when known in closed form"""
        return None

    def apply_coords(self, xs: np.ndarray) -> np.ndarray:
        raise UnsupportedSpace(f"{self.name} has no vectorized form")

    def rebind(self, space: MetricSpace) -> "Mapping":
        """The same rule on another truncation of the space"""
        raise UnsupportedSpace(f"{self.kind} mappings cannot be moved to another space")

    @cached_property
    def _inverse_index(self) -> Dict[Point, List[Point]]:
        index: Dict[Point, List[Point]] = {}
        for x in self.space.points():
            index.setdefault(self.apply(x), []).append(x)
        for candidates in index.values():
            candidates.sort(key=lambda p: p.coord)
        return index

    @abstractmethod
    def describe(self) -> Dict[str, Any]:
        ...

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name})"


class FiniteTableMapping(Mapping):
    """Explicit table over an enumerable space"""
    kind = "table"

    def __init__(self, space: MetricSpace, pairs: Iterable[Sequence[Any]], name: str = "U"):
        super().__init__(space, name)
        if not space.enumerable:
            raise UnsupportedSpace("Table mappings need an enumerable space")

        self._table: Dict[Point, Point] = {}
        for source, target in pairs:
            self._table[space.point(source)] = space.point(target)

        missing = [str(p) for p in space.points() if p not in self._table]
        if missing:
            raise ValidationError(f"Mapping '{name}' is undefined at: {', '.join(missing)}")

    def apply(self, x: Point) -> Point:
        try:
            return self._table[x]
        except KeyError:
            raise ValidationError(f"Mapping '{self.name}' is undefined at {x}") from None

    def describe(self) -> Dict[str, Any]:
        return {"kind": self.kind, "pairs": [[str(x), str(y)] for x, y in self._table.items()]}


class Example1Shift(Mapping):
    """
    U(1/(r+1)) = 1/r for r >= 1, U(0) = 0, U(1) = 1 on the shrinking fractions.
    Preimages are known in closed form, so they reach past the enumeration depth.
    """
    kind = "example1_shift"

    def __init__(self, space: ShrinkingFractionsSpace, name: str = "U"):
        if not isinstance(space, ShrinkingFractionsSpace):
            raise ValidationError("example1_shift lives on the shrinking-fractions space")
        super().__init__(space, name)

    def apply(self, x: Point) -> Point:
        r = x.key
        if r in (ShrinkingFractionsSpace.ZERO, ShrinkingFractionsSpace.ONE):
            return x
        return self.space.fraction(r - 1)

    def preimages(self, y: Point) -> List[Point]:
        r = y.key
        if r == ShrinkingFractionsSpace.ZERO:
            return [y]
        if r == ShrinkingFractionsSpace.ONE:
            return [self.space.fraction(2), y]
        return [self.space.fraction(r + 1)]

    def rebind(self, space: MetricSpace) -> "Example1Shift":
        return Example1Shift(space, self.name)

    def describe(self) -> Dict[str, Any]:
        return {"kind": self.kind}


class LinearMapping(Mapping):
    """U(x) = c·x on an interval; must map the interval into itself"""
    kind = "linear"

    def __init__(self, space: RealIntervalSpace, slope: float, name: str = "U"):
        if not isinstance(space, RealIntervalSpace):
            raise ValidationError("linear mappings live on real intervals")
        super().__init__(space, name)
        self.slope = float(slope)

        lo, hi = self.image_range()
        if lo < space.a - TAU_EQ or hi > space.b + TAU_EQ:
            raise ValidationError(
                f"x -> {self.slope}·x maps [{space.a}, {space.b}] onto [{lo}, {hi}], not into itself"
            )

    def apply(self, x: Point) -> Point:
        return self.space.at(self.slope * x.coord)

    def apply_coords(self, xs: np.ndarray) -> np.ndarray:
        return self.slope * xs

    def image_range(self) -> Tuple[float, float]:
        a, b = self.space.a, self.space.b
        if self.slope == 0.0:
            return 0.0, 0.0
        ends = [self.slope * a, self.slope * b if math.isfinite(b) else math.copysign(math.inf, self.slope)]
        return min(ends), max(ends)

    def preimages(self, y: Point) -> List[Point]:
        if self.slope == 0.0:
            return [self.space.at(self.space.a)] if abs(y.coord) <= TAU_EQ else []
        x = self.space.at(y.coord / self.slope)
        return [x] if self.space.contains(x) else []

    def describe(self) -> Dict[str, Any]:
        return {"kind": self.kind, "slope": self.slope}


class PiecewiseLinearMapping(Mapping):
    """
    Strictly increasing piecewise-linear map through knots spanning a bounded
    interval. Preimages come from bisection, bracketed by the interval.
    """
    kind = "piecewise_linear"

    def __init__(self, space: RealIntervalSpace, xs: Sequence[float], ys: Sequence[float], name: str = "U"):
        if not isinstance(space, RealIntervalSpace) or not math.isfinite(space.b):
            raise ValidationError("piecewise_linear mappings live on bounded real intervals")
        super().__init__(space, name)
        xs, ys = np.asarray(xs, dtype=float), np.asarray(ys, dtype=float)
        if xs.shape != ys.shape or len(xs) < 2:
            raise ValidationError("Knot lists must match and hold at least two knots")
        if np.any(np.diff(xs) <= 0) or np.any(np.diff(ys) <= 0):
            raise ValidationError("Knots must be strictly increasing in both coordinates")
        if abs(xs[0] - space.a) > TAU_EQ or abs(xs[-1] - space.b) > TAU_EQ:
            raise ValidationError("Knots must span the whole interval")
        if ys[0] < space.a - TAU_EQ or ys[-1] > space.b + TAU_EQ:
            raise ValidationError("Knot values must stay inside the interval")
        self.xs, self.ys = xs, ys

    def apply(self, x: Point) -> Point:
        return self.space.at(float(np.interp(x.coord, self.xs, self.ys)))

    def apply_coords(self, xs: np.ndarray) -> np.ndarray:
        return np.interp(xs, self.xs, self.ys)

    def image_range(self) -> Tuple[float, float]:
        return float(self.ys[0]), float(self.ys[-1])

    def preimages(self, y: Point) -> List[Point]:
        lo, hi = self.image_range()
        if not lo - TAU_EQ <= y.coord <= hi + TAU_EQ:
            return []
        target = min(max(y.coord, lo), hi)
        root = bisect(lambda x: np.interp(x, self.xs, self.ys) - target,
                      self.space.a, self.space.b, xtol=BISECT_XTOL)
        return [self.space.at(root)]

    def describe(self) -> Dict[str, Any]:
        return {"kind": self.kind, "xs": self.xs.tolist(), "ys": self.ys.tolist()}


# --- Right inverse ---

@dataclass(frozen=True)
class RightInverse:
    """U* with U(U*(y)) = y; tabulated on the enumeration when there is one"""
    base: Mapping
    rule: Callable[[Point], Point]
    table: Optional[Dict[Point, Point]] = None

    def __call__(self, y: Point) -> Point:
        if self.table is not None and y in self.table:
            return self.table[y]
        return self.rule(y)

    def to_dict(self) -> Dict[str, Any]:
        entries = [[str(y), str(x)] for y, x in (self.table or {}).items()]
        return {"base": self.base.name, "entries": entries}


def verify_surjective(U: Mapping, space: MetricSpace) -> CheckReport:
    """
    Every point needs a preimage.

    Enumerable spaces are checked point by point; interval maps are checked
    on their closed-form image range (advisory).

    Raises:
        UnsupportedSpace: For interval maps without a known image range
    """
    report = CheckReport(name=f"surjectivity of {U.name}")

    if not space.enumerable:
        image = U.image_range()
        if image is None:
            raise UnsupportedSpace(f"Cannot decide surjectivity of {U.name} on {space.kind}")
        report.coverage = "analytic"
        report.notes.append(f"image range [{image[0]:.6g}, {image[1]:.6g}]")
        if image[0] > space.a + TAU_EQ or image[1] < space.b - TAU_EQ:
            missing = space.a if image[0] > space.a + TAU_EQ else space.window[1]
            report.details["uncovered"] = [f"{missing:.12g}"]
            return report.fail(Witness(x=space.at(missing), z=None, axiom="surjectivity"))
        return report

    uncovered = []
    for y in space.points():
        report.pairs_examined += 1
        if not any(space.contains(x) for x in U.preimages(y)):
            uncovered.append(y)

    if uncovered:
        report.details["uncovered"] = [str(p) for p in uncovered]
        report.fail(Witness(x=uncovered[0], z=None, axiom="surjectivity"))
    return report


def build_right_inverse(U: Mapping, space: MetricSpace,
                        rule: Optional[Callable[[Point], Point]] = None) -> RightInverse:
    """
    Construct U* with U∘U* = identity, selecting the canonically least
    preimage whenever several exist.

    Raises:
        NotSurjective: If some point has no preimage
        ValidationError: If a supplied rule is not a right inverse on the enumeration
    """
    def least(y: Point) -> Point:
        x = U.least_preimage(y)
        if x is None or not space.contains(x):
            raise NotSurjective(f"{y} has no preimage under {U.name}", [str(y)])
        return x

    if rule is not None:
        if space.enumerable:
            for y in space.points():
                if U(rule(y)) != y:
                    raise ValidationError(f"Supplied rule is not a right inverse of {U.name} at {y}")
        return RightInverse(U, rule)

    report = verify_surjective(U, space)
    if not report.passed:
        uncovered = report.details.get("uncovered", [])
        raise NotSurjective(f"{U.name} is not surjective; uncovered: {', '.join(uncovered[:10])}", uncovered)

    if not space.enumerable:
        return RightInverse(U, least)

    table = {y: least(y) for y in space.points()}
    return RightInverse(U, least, table)


# --- Coincidences ---

def refine_roots(g: Callable[[float], float], grid: np.ndarray, values: np.ndarray,
                 tol: float = TAU_EQ) -> List[float]:
    """Cluster near-zero grid hits (|g| <= tol) and refine sign changes with brentq"""
    roots: List[float] = []
    hits = np.abs(values) <= tol
    i, n = 0, len(grid)
    while i < n:
        if hits[i]:
            j = i
            while j + 1 < n and hits[j + 1]:
                j += 1
            roots.append(float(grid[i] if i == j else 0.5 * (grid[i] + grid[j])))
            i = j + 1
            continue
        if i + 1 < n and not hits[i + 1] and values[i] * values[i + 1] < 0.0:
            roots.append(float(brentq(g, grid[i], grid[i + 1], xtol=BISECT_XTOL)))
        i += 1
    return sorted(roots)


def coincidence_points(U: Mapping, V: Mapping, space: MetricSpace,
                       grid_points: int = ToolkitConfig.GRID_POINTS) -> List[Point]:
    """All x with d(Ux, Vx) <= TAU_EQ, canonical order (grid scan on intervals)"""
    if space.enumerable:
        return [x for x in space.points() if not space.separated(space.distance(U(x), V(x)))]

    grid = space.grid(grid_points)
    values = U.apply_coords(grid) - V.apply_coords(grid)

    def g(x: float) -> float:
        point = np.array([x])
        return float(U.apply_coords(point)[0] - V.apply_coords(point)[0])

    return [space.at(x) for x in refine_roots(g, grid, values)]


def verify_weak_compatibility(U: Mapping, V: Mapping, space: MetricSpace,
                              grid_points: int = ToolkitConfig.GRID_POINTS) -> CheckReport:
    """U and V must commute (UVz = VUz) at every coincidence point z"""
    report = CheckReport(name=f"weak compatibility of {U.name}, {V.name}")
    if not space.enumerable:
        report.coverage = f"grid {grid_points}"

    coincidences = coincidence_points(U, V, space, grid_points)
    report.details["coincidence_points"] = [str(z) for z in coincidences]
    if not coincidences:
        report.notes.append("no coincidence points; holds vacuously")

    for z in coincidences:
        report.pairs_examined += 1
        uv, vu = U(V(z)), V(U(z))
        gap = space.distance(uv, vu)
        if space.separated(gap):
            return report.fail(Witness(x=z, z=None, y=None, axiom="UVz = VUz",
                                       image_distance=gap))
    return report


def verify_containment(V: Mapping, U: Mapping, space: MetricSpace) -> CheckReport:
    """V(M) ⊆ U(M); closed-form ranges on intervals (advisory)"""
    report = CheckReport(name=f"{V.name}(M) ⊆ {U.name}(M)")

    if not space.enumerable:
        v_range, u_range = V.image_range(), U.image_range()
        if v_range is None or u_range is None:
            raise UnsupportedSpace("Containment on intervals needs closed-form image ranges")
        report.coverage = "analytic"
        report.details["ranges"] = {V.name: list(v_range), U.name: list(u_range)}
        if v_range[0] < u_range[0] - TAU_EQ or v_range[1] > u_range[1] + TAU_EQ:
            x = space.at(space.a if v_range[0] < u_range[0] - TAU_EQ else space.window[1])
            report.fail(Witness(x=x, z=None, axiom="containment"))
        return report

    for x in space.points():
        report.pairs_examined += 1
        vx = V(x)
        if not any(space.contains(p) for p in U.preimages(vx)):
            return report.fail(Witness(x=x, z=vx, axiom="containment"))
    return report

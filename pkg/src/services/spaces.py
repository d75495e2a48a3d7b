"""
Metric spaces and partial orders: finite tables and the built-in families
"""
import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, ClassVar, Dict, Hashable, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from src.core.config import TAU_EQ, ToolkitConfig
from src.core.errors import EmptySpace, UnsupportedSpace
from src.core.reports import CheckReport, Witness
from src.core.validators import ValidationError, validate_depth, validate_positive_int

log = logging.getLogger("expansive.spaces")


@dataclass(frozen=True)
class Point:
    """
    A point of a space. Equality and hashing use `key` only; `coord` is the
    canonical sort coordinate (numeric value, or insertion index for tables).
    """
    key: Hashable
    coord: float = field(default=0.0, compare=False)
    label: Optional[str] = field(default=None, compare=False)

    def __str__(self) -> str:
        if self.label is not None:
            return self.label
        return f"{self.coord:.12g}"


class MetricSpace(ABC):
    """Base class for every space the toolkit understands"""
    kind: ClassVar[str]
    # exact spaces test strict positivity with `> 0`, real ones with `> TAU_EQ`
    exact: ClassVar[bool] = True

    @property
    def enumerable(self) -> bool:
        return True

    @abstractmethod
    def distance(self, x: Point, z: Point) -> float:
        ...

    @abstractmethod
    def points(self) -> List[Point]:
        """Enumeration in canonical order"""
        ...

    @abstractmethod
    def contains(self, p: Point) -> bool:
        ...

    @abstractmethod
    def point(self, value: Any) -> Point:
        """Resolve a user-supplied value (number or label) to a Point"""
        ...

    @abstractmethod
    def describe(self) -> Dict[str, Any]:
        """JSON spec that rebuilds this space"""
        ...

    def separated(self, d: float) -> bool:
        """d(x, z) > 0 in the sense of this space"""
        return d > 0.0 if self.exact else d > TAU_EQ

    def same(self, x: Point, z: Point) -> bool:
        return not self.separated(self.distance(x, z))

    def distance_matrix(self, pts: Sequence[Point]) -> np.ndarray:
        n = len(pts)
        matrix = np.zeros((n, n), dtype=float)
        for i, x in enumerate(pts):
            for j, z in enumerate(pts):
                matrix[i, j] = self.distance(x, z)
        return matrix

    def sample_points(self, n: int, rng: np.random.Generator) -> List[Point]:
        pts = self.points()
        if not pts:
            raise EmptySpace(f"{self.kind} space has no points")
        return [pts[i] for i in rng.integers(0, len(pts), size=n)]

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.describe()})"


class FiniteTabulatedSpace(MetricSpace):
    """Finitely many labelled points with a distance table"""
    kind = "finite"

    def __init__(self, labels: Sequence[str], distance: Sequence[Sequence[float]]):
        labels = [str(label) for label in labels]
        if len(set(labels)) != len(labels):
            raise ValidationError("Point labels must be unique")

        matrix = np.asarray(distance, dtype=float).reshape(len(labels), -1) if labels else np.zeros((0, 0))
        if matrix.shape != (len(labels), len(labels)):
            raise ValidationError(
                f"Distance table must be {len(labels)}x{len(labels)}, got {matrix.shape}"
            )
        if np.any(matrix < 0) or not np.all(np.isfinite(matrix)):
            raise ValidationError("Distances must be finite and non-negative")

        self.labels = labels
        self._matrix = matrix
        self._points = [Point(label, float(i), label) for i, label in enumerate(labels)]
        self._index = {label: i for i, label in enumerate(labels)}

    def distance(self, x: Point, z: Point) -> float:
        return float(self._matrix[self._index[x.key], self._index[z.key]])

    def points(self) -> List[Point]:
        return list(self._points)

    def contains(self, p: Point) -> bool:
        return p.key in self._index

    def point(self, value: Any) -> Point:
        key = str(value)
        if key not in self._index:
            raise ValidationError(f"Unknown point '{key}'. Known points: {', '.join(self.labels)}")
        return self._points[self._index[key]]

    def distance_matrix(self, pts: Sequence[Point]) -> np.ndarray:
        idx = [self._index[p.key] for p in pts]
        return self._matrix[np.ix_(idx, idx)]

    def describe(self) -> Dict[str, Any]:
        return {"kind": self.kind, "points": list(self.labels), "distance": self._matrix.tolist()}


class ShrinkingFractionsSpace(MetricSpace):
    """
    Y = {1/r : r >= 1} ∪ {0} with d(1/r, 1/(r+p)) = 1/r and d(0, 1/r) = 1/r.

    Keys are integers: 0 is the point 0 and r >= 1 is 1/r (so 1 is the point 1).
    Membership covers the whole infinite family; only the enumeration is cut
    at `depth`, which keeps exhaustive scans finite.
    """
    kind = "shrinking_fractions"
    ZERO = 0
    ONE = 1

    def __init__(self, depth: int = ToolkitConfig.DEPTH):
        self.depth = validate_depth(depth)

    @staticmethod
    def fraction(r: int) -> Point:
        if r < 0:
            raise ValidationError(f"Index must be non-negative, got {r}")
        if r == 0:
            return Point(0, 0.0, "0")
        return Point(r, 1.0 / r, "1" if r == 1 else f"1/{r}")

    @property
    def zero(self) -> Point:
        return self.fraction(self.ZERO)

    @property
    def one(self) -> Point:
        return self.fraction(self.ONE)

    def distance(self, x: Point, z: Point) -> float:
        if x.key == z.key:
            return 0.0
        if x.key == self.ZERO or z.key == self.ZERO:
            return 1.0 / max(x.key, z.key)
        return 1.0 / min(x.key, z.key)

    @staticmethod
    def closed_form_distance(x: Point, z: Point) -> float:
        """max(x, z) off the diagonal"""
        return 0.0 if x.key == z.key else max(x.coord, z.coord)

    def points(self) -> List[Point]:
        return [self.zero] + [self.fraction(r) for r in range(self.depth, 0, -1)]

    def contains(self, p: Point) -> bool:
        return isinstance(p.key, int) and not isinstance(p.key, bool) and p.key >= 0

    def point(self, value: Any) -> Point:
        try:
            if isinstance(value, str) and "/" in value:
                value = Fraction(value.strip())
            value = Fraction(value).limit_denominator(10**12) if not isinstance(value, Fraction) else value
        except (ValueError, TypeError, ZeroDivisionError, OverflowError) as e:
            raise ValidationError(f"'{value}' is not a point of the shrinking-fractions space") from e
        if value == 0:
            return self.zero
        if value < 0 or value > 1:
            raise ValidationError(f"{value} is not a point of the shrinking-fractions space")
        r = round(1 / value)
        if abs(Fraction(1, r) - value) > Fraction(1, 10**9):
            raise ValidationError(f"{float(value)} is not of the form 1/r")
        return self.fraction(r)

    def truncated(self, depth: int) -> "ShrinkingFractionsSpace":
        return ShrinkingFractionsSpace(depth)

    def describe(self) -> Dict[str, Any]:
        return {"kind": self.kind, "depth": self.depth}


class RealIntervalSpace(MetricSpace):
    """[a, b] with |x - z|; b may be +inf, in which case `window` is required"""
    kind = "real_interval"
    exact = False

    def __init__(self, a: float = 0.0, b: float = 1.0, window: Optional[Tuple[float, float]] = None):
        a, b = float(a), float(b)
        if not math.isfinite(a) or math.isnan(b) or b < a:
            raise ValidationError(f"Invalid interval [{a}, {b}]")
        if window is None:
            if not math.isfinite(b):
                raise ValidationError("Unbounded intervals need a sampling window")
            window = (a, b)
        lo, hi = float(window[0]), float(window[1])
        if not (a <= lo < hi <= b):
            raise ValidationError(f"Window [{lo}, {hi}] must be a non-degenerate part of [{a}, {b}]")
        self.a, self.b = a, b
        self.window = (lo, hi)

    @property
    def enumerable(self) -> bool:
        return False

    @staticmethod
    def at(x: float) -> Point:
        x = float(x)
        return Point(x, x)

    def distance(self, x: Point, z: Point) -> float:
        return abs(x.coord - z.coord)

    def points(self) -> List[Point]:
        raise UnsupportedSpace("Interval spaces are sampled, not enumerated")

    def contains(self, p: Point) -> bool:
        return self.a - TAU_EQ <= p.coord <= self.b + TAU_EQ

    def point(self, value: Any) -> Point:
        try:
            p = self.at(float(value))
        except (ValueError, TypeError) as e:
            raise ValidationError(f"'{value}' is not a real number") from e
        if not self.contains(p):
            raise ValidationError(f"{value} lies outside [{self.a}, {self.b}]")
        return p

    def grid(self, n: int = ToolkitConfig.GRID_POINTS) -> np.ndarray:
        validate_positive_int(n, name="grid points")
        return np.linspace(self.window[0], self.window[1], max(n, 2))

    def sample_coords(self, n: int, rng: np.random.Generator) -> np.ndarray:
        return rng.uniform(self.window[0], self.window[1], size=n)

    def sample_points(self, n: int, rng: np.random.Generator) -> List[Point]:
        return [self.at(x) for x in self.sample_coords(n, rng)]

    def describe(self) -> Dict[str, Any]:
        data = {"kind": self.kind, "a": self.a, "b": self.b if math.isfinite(self.b) else "inf"}
        if self.window != (self.a, self.b):
            data["window"] = list(self.window)
        return data


# --- Partial orders ---

@dataclass(frozen=True)
class PartialOrder:
    """relation(x, z) reads x ⪯ z"""
    name: str
    relation: Callable[[Point, Point], bool]
    regular: bool = False
    pairs: Tuple[Tuple[str, str], ...] = ()

    def __call__(self, x: Point, z: Point) -> bool:
        return bool(self.relation(x, z))

    def describe(self) -> Dict[str, Any]:
        if self.name == "table":
            return {"kind": "table", "pairs": [list(p) for p in self.pairs], "regular": self.regular}
        return {"kind": self.name, "regular": self.regular}


def usual_order(regular: bool = True) -> PartialOrder:
    """x ≤ z on canonical coordinates (insertion order for tabulated spaces)"""
    return PartialOrder("usual", lambda x, z: x == z or x.coord < z.coord, regular)


def example1_order(regular: bool = True) -> PartialOrder:
    """x ⪯ z iff x = z or x < z < 1"""
    return PartialOrder("example1", lambda x, z: x == z or x.coord < z.coord < 1.0, regular)


def diagonal_order() -> PartialOrder:
    return PartialOrder("diagonal", lambda x, z: x == z, True)


def table_order(pairs: Iterable[Sequence[Any]], regular: bool = False) -> PartialOrder:
    """Explicit pairs (by label); the diagonal is always included"""
    related = tuple((str(x), str(z)) for x, z in pairs)
    lookup = frozenset(related)
    return PartialOrder(
        "table",
        lambda x, z: x == z or (str(x), str(z)) in lookup,
        regular,
        related,
    )


# --- Operations ---

def _first_true(mask: np.ndarray) -> Optional[Tuple[int, ...]]:
    hits = np.argwhere(mask)
    return tuple(int(v) for v in hits[0]) if len(hits) else None


def verify_metric_axioms(space: MetricSpace, sample_budget: int = ToolkitConfig.SAMPLE_BUDGET,
                         seed: int = ToolkitConfig.SEED) -> CheckReport:
    """
    Scan identity, positivity, symmetry and the triangle inequality.

    Finite spaces are scanned exhaustively over all triples; interval spaces
    over `sample_budget` independently drawn triples.

    Raises:
        EmptySpace: If the space has no points
    """
    if not space.enumerable:
        return _sampled_metric_axioms(space, sample_budget, seed)

    pts = space.points()
    if not pts:
        raise EmptySpace(f"{space.kind} space has no points")

    report = CheckReport(name="metric axioms", coverage="exhaustive")
    report.details["unit"] = "triples"
    n = len(pts)
    d = space.distance_matrix(pts)

    hit = _first_true(d.diagonal() != 0.0 if space.exact else np.abs(d.diagonal()) > TAU_EQ)
    if hit is not None:
        i = hit[0]
        return report.fail(Witness(x=pts[i], z=pts[i], axiom="identity"))

    off = ~np.eye(n, dtype=bool)
    hit = _first_true(off & ((d <= 0.0) if space.exact else (d <= TAU_EQ)))
    if hit is not None:
        return report.fail(Witness(x=pts[hit[0]], z=pts[hit[1]], axiom="positivity"))

    hit = _first_true(np.abs(d - d.T) > TAU_EQ)
    if hit is not None:
        return report.fail(Witness(x=pts[hit[0]], z=pts[hit[1]], axiom="symmetry"))

    # d(x, y) <= d(x, z) + d(z, y), scanned one x at a time in (x, z, y) order
    for i in range(n):
        broken = d[i][None, :] > d[i][:, None] + d + TAU_EQ
        report.pairs_examined += n * n
        hit = _first_true(broken)
        if hit is not None:
            k, j = hit
            return report.fail(Witness(x=pts[i], z=pts[k], y=pts[j], axiom="triangle"))

    log.debug("metric axioms hold on %d points", n)
    return report


def _sampled_metric_axioms(space: RealIntervalSpace, budget: int, seed: int) -> CheckReport:
    validate_positive_int(budget, name="sample_budget")
    rng = np.random.default_rng(seed)
    x, z, y = (space.sample_coords(budget, rng) for _ in range(3))
    report = CheckReport(name="metric axioms", coverage="sampled", seed=seed, pairs_examined=budget)
    report.details["unit"] = "triples"

    dxz, dzx = np.abs(x - z), np.abs(z - x)
    dxy, dzy = np.abs(x - y), np.abs(z - y)
    checks = [
        ("positivity", (x != z) & (dxz <= 0.0)),
        ("symmetry", np.abs(dxz - dzx) > TAU_EQ),
        ("triangle", dxy > dxz + dzy + TAU_EQ),
    ]
    for axiom, broken in checks:
        hit = _first_true(broken)
        if hit is not None:
            i = hit[0]
            return report.fail(Witness(x=space.at(x[i]), z=space.at(z[i]), y=space.at(y[i]), axiom=axiom))
    return report


def relation_matrix(space: MetricSpace, order: PartialOrder) -> Tuple[List[Point], np.ndarray]:
    pts = space.points()
    rel = np.array([[order(x, z) for z in pts] for x in pts], dtype=bool).reshape(len(pts), len(pts))
    return pts, rel


def verify_order_axioms(space: MetricSpace, order: PartialOrder) -> CheckReport:
    """
    Reflexivity, antisymmetry and transitivity over every enumerated triple.

    On a finite metric space a convergent sequence is eventually constant,
    so regularity reduces to the chains x ⪯ y ⪯ x* already covered by the
    transitivity scan.

    Raises:
        UnsupportedSpace: For interval spaces (no enumeration to scan)
    """
    if not space.enumerable:
        raise UnsupportedSpace("Order axioms need an enumerable space or an order table")

    pts, rel = relation_matrix(space, order)
    n = len(pts)
    report = CheckReport(name=f"order axioms ({order.name})", coverage="exhaustive")
    report.pairs_examined = n * n
    if order.regular:
        report.details["regularity"] = "chains x ⪯ y ⪯ x* scanned with transitivity"

    hit = _first_true(~rel.diagonal())
    if hit is not None:
        return report.fail(Witness(x=pts[hit[0]], z=pts[hit[0]], axiom="reflexivity"))

    off = ~np.eye(n, dtype=bool)
    hit = _first_true(rel & rel.T & off)
    if hit is not None:
        return report.fail(Witness(x=pts[hit[0]], z=pts[hit[1]], axiom="antisymmetry"))

    as_int = rel.astype(np.int64)
    hit = _first_true(((as_int @ as_int) > 0) & ~rel)
    if hit is not None:
        i, j = hit
        k = int(np.argmax(rel[i] & rel[:, j]))
        return report.fail(Witness(x=pts[i], z=pts[k], y=pts[j], axiom="transitivity"))

    return report


def comparable_pairs(space: MetricSpace, order: PartialOrder) -> Iterator[Tuple[Point, Point]]:
    """Every (x, z) with x ⪯ z, once each, in canonical enumeration order"""
    pts = space.points()
    for x in pts:
        for z in pts:
            if order(x, z):
                yield x, z

"""
Problem specs: the JSON schema the CLI reads, and builders for live objects
"""
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Annotated, Any, Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError as SchemaError, model_validator

from src.core.config import ToolkitConfig
from src.core.errors import SpecParseError
from src.core.validators import ValidationError
from src.services import growth as growth_functions
from src.services.checkers import ExpansiveProblem
from src.services.growth import GrowthFunction
from src.services.mappings import (
    Example1Shift,
    FiniteTableMapping,
    LinearMapping,
    Mapping,
    PiecewiseLinearMapping,
)
from src.services.solvers import SolverConfig
from src.services.spaces import (
    FiniteTabulatedSpace,
    MetricSpace,
    PartialOrder,
    Point,
    RealIntervalSpace,
    ShrinkingFractionsSpace,
    diagonal_order,
    example1_order,
    table_order,
    usual_order,
)

THEOREMS = ("ordered", "min", "common")
Label = Union[str, int, float]


class _Spec(BaseModel):
    model_config = ConfigDict(extra="forbid")


# --- Spaces ---

class ShrinkingFractionsSpec(_Spec):
    kind: Literal["shrinking_fractions"]
    depth: int = Field(default=ToolkitConfig.DEPTH, ge=1)

    def build(self) -> MetricSpace:
        return ShrinkingFractionsSpace(self.depth)


class RealIntervalSpec(_Spec):
    kind: Literal["real_interval"]
    a: float = 0.0
    b: Union[float, Literal["inf"]] = 1.0
    window: Optional[Tuple[float, float]] = None

    @model_validator(mode="after")
    def _spell_infinity(self) -> "RealIntervalSpec":
        # JSON has no infinity literal
        if isinstance(self.b, float) and math.isinf(self.b):
            self.b = "inf"
        return self

    def build(self) -> MetricSpace:
        b = math.inf if self.b == "inf" else self.b
        return RealIntervalSpace(self.a, b, self.window)


class FiniteSpaceSpec(_Spec):
    kind: Literal["finite"]
    points: List[str]
    distance: List[List[float]]

    def build(self) -> MetricSpace:
        return FiniteTabulatedSpace(self.points, self.distance)


SpaceSpec = Annotated[
    Union[ShrinkingFractionsSpec, RealIntervalSpec, FiniteSpaceSpec],
    Field(discriminator="kind"),
]


# --- Orders ---

class NamedOrderSpec(_Spec):
    kind: Literal["usual", "example1", "diagonal"]
    regular: bool = True

    def build(self) -> PartialOrder:
        if self.kind == "usual":
            return usual_order(self.regular)
        if self.kind == "example1":
            return example1_order(self.regular)
        return diagonal_order()


class TableOrderSpec(_Spec):
    kind: Literal["table"]
    pairs: List[Tuple[Label, Label]]
    regular: bool = False

    def build(self) -> PartialOrder:
        return table_order(self.pairs, self.regular)


OrderSpec = Annotated[Union[NamedOrderSpec, TableOrderSpec], Field(discriminator="kind")]


# --- Mappings ---

class Example1ShiftSpec(_Spec):
    kind: Literal["example1_shift"]

    def build(self, space: MetricSpace, name: str) -> Mapping:
        return Example1Shift(space, name)


class LinearSpec(_Spec):
    kind: Literal["linear"]
    slope: float

    def build(self, space: MetricSpace, name: str) -> Mapping:
        return LinearMapping(space, self.slope, name)


class PiecewiseLinearSpec(_Spec):
    kind: Literal["piecewise_linear"]
    xs: List[float]
    ys: List[float]

    def build(self, space: MetricSpace, name: str) -> Mapping:
        return PiecewiseLinearMapping(space, self.xs, self.ys, name)


class TableMappingSpec(_Spec):
    kind: Literal["table"]
    pairs: List[Tuple[Label, Label]]

    def build(self, space: MetricSpace, name: str) -> Mapping:
        return FiniteTableMapping(space, self.pairs, name)


MappingSpec = Annotated[
    Union[Example1ShiftSpec, LinearSpec, PiecewiseLinearSpec, TableMappingSpec],
    Field(discriminator="kind"),
]


# --- Growth ---

class GrowthSpec(_Spec):
    name: Literal["exp_t", "exp_sqrt", "example1", "power_shift", "tabulated"] = "exp_t"
    p: Optional[float] = None
    t: Optional[List[float]] = None
    log_phi: Optional[List[float]] = None

    @model_validator(mode="after")
    def _parameters_match(self) -> "GrowthSpec":
        if self.name == "power_shift" and self.p is None:
            raise ValueError("power_shift needs 'p'")
        if self.name == "tabulated" and (self.t is None or self.log_phi is None):
            raise ValueError("tabulated growth needs 't' and 'log_phi'")
        return self

    def build(self) -> GrowthFunction:
        if self.name == "tabulated":
            return growth_functions.tabulated(self.t, self.log_phi)
        if self.name == "power_shift":
            return growth_functions.power_shift(self.p)
        return growth_functions.builtin(self.name)


# --- Problem ---

@dataclass
class BuiltProblem:
    spec: "ProblemSpec"
    space: MetricSpace
    order: Optional[PartialOrder]
    U: Mapping
    V: Optional[Mapping]
    growth: GrowthFunction
    problem: ExpansiveProblem
    x0: Point


class ProblemSpec(_Spec):
    space: SpaceSpec
    order: Optional[OrderSpec] = None
    U: MappingSpec
    V: Optional[MappingSpec] = None
    growth: GrowthSpec = Field(default_factory=GrowthSpec)
    eta: float = Field(default=2.0, gt=1)
    wang_q: Optional[float] = Field(default=None, gt=1)
    theorem: Literal["ordered", "min", "common"] = "ordered"
    x0: Optional[Label] = None
    seed: int = Field(default=ToolkitConfig.SEED, ge=0)
    sample_budget: int = Field(default=ToolkitConfig.SAMPLE_BUDGET, ge=1)
    solver: SolverConfig = Field(default_factory=SolverConfig)

    @model_validator(mode="after")
    def _common_needs_v(self) -> "ProblemSpec":
        if self.theorem == "common" and self.V is None:
            raise ValueError("theorem 'common' needs a second mapping 'V'")
        return self

    def echo(self) -> Dict[str, Any]:
        """JSON-ready copy that rebuilds this spec"""
        return self.model_dump(mode="json", exclude_none=True)

    def with_overrides(self, **updates: Any) -> "ProblemSpec":
        """
        Apply CLI overrides (None values are ignored) and revalidate.

        Raises:
            SpecParseError: If an override breaks the schema
        """
        data = self.echo()
        solver = dict(data.get("solver", {}))
        for key in ("tol", "max_iter", "cauchy_window"):
            value = updates.pop(key, None)
            if value is not None:
                solver[key] = value
        data["solver"] = solver
        data.update({k: v for k, v in updates.items() if v is not None})
        return parse_spec(data)

    def build(self) -> BuiltProblem:
        """
        Materialize the spec.

        Raises:
            SpecParseError: If a builder rejects the values
        """
        try:
            space = self.space.build()
            order = self.order.build() if self.order is not None else None
            U = self.U.build(space, "U")
            V = self.V.build(space, "V") if self.V is not None else None
            growth = self.growth.build()
            problem = ExpansiveProblem(space, U, growth, self.eta, order, V,
                                       sample_budget=self.sample_budget, seed=self.seed)
            x0 = self._start(space)
        except ValidationError as e:
            raise SpecParseError(str(e)) from e
        return BuiltProblem(self, space, order, U, V, growth, problem, x0)

    def _start(self, space: MetricSpace) -> Point:
        if self.x0 is not None:
            return space.point(self.x0)
        if space.enumerable:
            return space.points()[0]
        return space.at(space.window[0])


def _location(error: Dict[str, Any]) -> str:
    return ".".join(str(part) for part in error.get("loc", ()))


def parse_spec(data: Dict[str, Any]) -> ProblemSpec:
    """
    Validate a decoded spec document.

    Raises:
        SpecParseError: With the offending field on schema violations
    """
    try:
        return ProblemSpec.model_validate(data)
    except SchemaError as e:
        first = e.errors()[0]
        raise SpecParseError(first.get("msg", "invalid spec"), field=_location(first)) from e


def loads_spec(text: str) -> ProblemSpec:
    """
    Parse a JSON spec.

    Raises:
        SpecParseError: With line/column for malformed JSON, or the field path
            for schema violations
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise SpecParseError(f"malformed JSON: {e.msg}", line=e.lineno, column=e.colno) from e
    if not isinstance(data, dict):
        raise SpecParseError("spec must be a JSON object", line=1, column=1)
    return parse_spec(data)


def load_spec(path: Union[str, Path]) -> ProblemSpec:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise SpecParseError(f"cannot read spec file {path}: {e.strerror}") from e
    return loads_spec(text)

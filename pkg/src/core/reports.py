"""Check reports and witnesses shared by every checker"""
import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional

from src.core.config import TAU_EQ


class Verdict(str, Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    INCONCLUSIVE = "INCONCLUSIVE"


def _label(point: Any) -> Optional[str]:
    return None if point is None else str(point)


@dataclass
class Witness:
    """
    A concrete violation.

    For inequality checks `lhs_log` is log φ of the image distance and
    `rhs_log` is log φ of the argument distance, so the violation reads
    lhs_log < eta * rhs_log. When the log values underflow the comparison is
    carried by the log-log values instead (`domain == "loglog"`).
    """
    x: Any
    z: Any
    y: Any = None
    axiom: Optional[str] = None
    image_distance: Optional[float] = None
    argument_distance: Optional[float] = None
    lhs_log: Optional[float] = None
    rhs_log: Optional[float] = None
    lhs_loglog: Optional[float] = None
    rhs_loglog: Optional[float] = None
    eta: Optional[float] = None
    domain: str = "log"

    def reproduces(self) -> bool:
        """Re-evaluate the recorded inequality; True when it is still violated"""
        if self.eta is None:
            return self.axiom is not None
        if self.domain == "loglog":
            return self.lhs_loglog < math.log(self.eta) + self.rhs_loglog - TAU_EQ
        return self.lhs_log < self.eta * self.rhs_log * (1.0 - TAU_EQ)

    @property
    def ratio(self) -> Optional[float]:
        """d(Ux,Uz) / d(x,z), when both distances are known"""
        if self.image_distance is None or not self.argument_distance:
            return None
        return self.image_distance / self.argument_distance

    def to_dict(self) -> Dict[str, Any]:
        data = {
            "x": _label(self.x),
            "z": _label(self.z),
            "y": _label(self.y),
            "axiom": self.axiom,
            "image_distance": self.image_distance,
            "argument_distance": self.argument_distance,
            "lhs_log": self.lhs_log,
            "rhs_log": self.rhs_log,
            "lhs_loglog": self.lhs_loglog,
            "rhs_loglog": self.rhs_loglog,
            "eta": self.eta,
            "domain": self.domain,
        }
        return {k: v for k, v in data.items() if v is not None}


@dataclass
class CheckReport:
    """Outcome of one hypothesis check"""
    name: str
    verdict: Verdict = Verdict.PASS
    pairs_examined: int = 0
    skipped: int = 0
    witness: Optional[Witness] = None
    coverage: str = "exhaustive"
    seed: Optional[int] = None
    notes: List[str] = field(default_factory=list)
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict is Verdict.PASS

    @property
    def status_emoji(self) -> str:
        return "✅" if self.passed else "⛔"

    def fail(self, witness: Witness) -> "CheckReport":
        self.verdict = Verdict.FAIL
        self.witness = witness
        return self

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "verdict": self.verdict.value,
            "pairs_examined": self.pairs_examined,
            "skipped": self.skipped,
            "witness": self.witness.to_dict() if self.witness else None,
            "coverage": self.coverage,
            "seed": self.seed,
            "notes": list(self.notes),
            "details": dict(self.details),
        }

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)


def format_check_report(report: CheckReport) -> str:
    """
    Format one check for display.

    Args:
        report: CheckReport object

    Returns:
        Multi-line string with verdict, coverage and the witness if any
    """
    coverage = report.coverage
    if report.seed is not None:
        coverage += f", seed {report.seed}"

    lines = [
        f"{report.status_emoji} {report.name}: {report.verdict.value}",
        f"   pairs examined: {report.pairs_examined} ({coverage})",
    ]
    if report.skipped:
        lines.append(f"   skipped: {report.skipped}")

    w = report.witness
    if w is not None:
        points = ", ".join(_label(p) for p in (w.x, w.z, w.y) if p is not None)
        lines.append(f"   witness: ({points})" + (f" broke {w.axiom}" if w.axiom else ""))
        if w.ratio is not None:
            lines.append(f"   distance ratio: {w.ratio:.9g}")
        if w.lhs_log is not None and w.eta is not None:
            lines.append(f"   log φ lhs {w.lhs_log:.6g} < η·rhs {w.eta * w.rhs_log:.6g}")

    for note in report.notes:
        lines.append(f"   💡 {note}")

    return "\n".join(lines)

"""Verdict records shared by the bound catalog, the suites and the reports."""

import math
from dataclasses import asdict, dataclass
from enum import Enum
from typing import Any, Dict, Optional

from config.settings import get_setting, get_slack


class Direction(str, Enum):
    ABS_LE = "|T|<=bound"
    LE = "T<=bound"
    GE = "T>=bound"
    EQ = "T=bound"


class Status(str, Enum):
    HOLDS = "holds"
    VIOLATED = "violated"
    NOT_MET = "hypotheses-not-met"
    ERROR = "error"


@dataclass(frozen=True)
class Verdict:
    """
    One directed comparison between a measured value T and a bound.

    ``slack`` is the signed margin: bound - |T| for ABS_LE, bound - T for LE,
    T - bound for GE and -|T - bound| for EQ. A verdict holds when the margin
    is at least -tolerance. Advisory verdicts are reported but never fail a run.
    """

    case_id: str
    T: float
    bound: float
    direction: Direction
    slack: float
    status: Status
    advisory: bool = False

    @property
    def ratio(self) -> Optional[float]:
        """How close T comes to the bound (1.0 means equality); None when undefined."""
        T, bound = self.T, self.bound
        if self.status in (Status.NOT_MET, Status.ERROR) or not (math.isfinite(T) and math.isfinite(bound)):
            return None
        if self.direction in (Direction.ABS_LE, Direction.EQ):
            if bound > 0:
                return abs(T) / bound
            return None if abs(T) <= 1e-15 else math.inf
        if self.direction == Direction.LE:
            return T / bound if bound > 0 and T > 0 else None
        return bound / T if bound > 0 and T > 0 else None

    @property
    def failed(self) -> bool:
        return self.status == Status.ERROR or (self.status == Status.VIOLATED and not self.advisory)

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["direction"] = self.direction.value
        data["status"] = self.status.value
        data["ratio"] = self.ratio
        for key in ("T", "bound", "slack"):
            if not math.isfinite(data[key]):
                data[key] = None
        if data["ratio"] is not None and not math.isfinite(data["ratio"]):
            data["ratio"] = None
        return data


def margin(T: float, bound: float, direction: Direction) -> float:
    if direction == Direction.ABS_LE:
        return bound - abs(T)
    if direction == Direction.LE:
        return bound - T
    if direction == Direction.GE:
        return T - bound
    return -abs(T - bound)


def judge(
    case_id: str,
    T: float,
    bound: float,
    direction: Direction,
    tolerance: Optional[float] = None,
    advisory: bool = False,
) -> Verdict:
    """
    Compare T against bound in the given direction.

    Args:
        case_id: Identifier echoed in reports
        T: Measured value (Čebyšev functional or mean difference)
        bound: Bound value
        direction: Comparison direction
        tolerance: Slack (defaults to get_slack(); equality uses numerics.equality_tol)
        advisory: Mark the verdict as non-failing
    """
    if tolerance is None:
        tolerance = (
            float(get_setting("numerics.equality_tol", 1e-7)) if direction == Direction.EQ else get_slack()
        )
    m = margin(T, bound, direction)
    status = Status.HOLDS if m >= -tolerance else Status.VIOLATED
    return Verdict(case_id, float(T), float(bound), direction, float(m), status, advisory)


def not_met(case_id: str, T: float, direction: Direction, advisory: bool = False) -> Verdict:
    return Verdict(case_id, float(T), math.nan, direction, math.nan, Status.NOT_MET, advisory)


def errored(case_id: str, direction: Direction = Direction.ABS_LE) -> Verdict:
    """A case that could not be evaluated; always fails, even for advisory suites."""
    return Verdict(case_id, math.nan, math.nan, direction, math.nan, Status.ERROR)

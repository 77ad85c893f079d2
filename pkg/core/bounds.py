"""
Catalog of Čebyšev-type and Grüss-type bounds.

Each operation checks its hypotheses through FuncProfile and returns a
BoundResult. Hypothesis failures are data (``applicable`` is False), never
exceptions; the bound value is still filled in whenever its inputs exist so
callers can show what the bound would have been.

Bounds on |T| and on |mean difference| compare against absolute values;
the convex/concave pair bounds are signed.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable, Dict, Iterable, List, Optional, Sequence

from config.settings import get_setting, get_tolerance
from core.calculus import (
    FuncProfile,
    Monotonicity,
    chebyshev_T,
    first_moment,
    mean_difference,
    profile,
)
from core.expr import ArgumentError, Expr, Interval
from core.special import log_beta
from core.verdict import Direction, Verdict, judge, not_met

logger = logging.getLogger(__name__)


class TheoremId(str, Enum):
    CHEB1 = "cheb1"
    SIGN = "sign"
    BARNETT = "barnett"
    CERONE_BV = "cerone_bv"
    CERONE_LIP = "cerone_lip"
    HWANG = "hwang"
    THM21 = "thm21"
    THM22 = "thm22"
    REMARK1 = "remark1"
    THM23 = "thm23"
    REMARK2 = "remark2"
    THM24 = "thm24"
    THM25 = "thm25"
    ATKINSON = "atkinson"
    LUPAS = "lupas"
    CONVEX_UPPER = "convex_upper"
    CONCAVE_LOWER = "concave_lower"


@dataclass(frozen=True)
class Hypothesis:
    name: str
    passed: bool
    detail: str = ""

    def to_dict(self) -> Dict[str, object]:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


@dataclass(frozen=True)
class KernelIJ:
    I: float
    J: float


@dataclass(frozen=True)
class MNPair:
    M: float
    N: float


def _finite_or_none(value: Optional[float]) -> Optional[float]:
    return value if value is not None and math.isfinite(value) else None


@dataclass(frozen=True)
class BoundResult:
    """
    Value of one bound for one input.

    ``value`` is the sharpest (first-level) bound; ``secondary_value`` the
    coarser chained bound where the theorem states two. ``measured`` is the
    quantity the bound controls (T or a mean difference) when known.
    ``companions`` are extra sign checks attached by the theorem's remarks.
    """

    theorem_id: TheoremId
    value: float
    direction: Direction
    hypotheses: List[Hypothesis]
    secondary_value: Optional[float] = None
    measured: Optional[float] = None
    companions: List[Verdict] = field(default_factory=list)
    parameters: Dict[str, float] = field(default_factory=dict)

    @property
    def applicable(self) -> bool:
        return all(h.passed for h in self.hypotheses) and math.isfinite(self.value)

    @property
    def label(self) -> str:
        suffix = "".join(f"@{v:g}" for v in self.parameters.values() if self.theorem_id == TheoremId.THM24)
        return f"{self.theorem_id.value}{suffix}"

    def verdicts(self, case_id: str, advisory_levels: Iterable[str] = ()) -> List[Verdict]:
        """
        Verdicts for each level, the chain ordering and any companion checks.

        Args:
            case_id: Prefix for the verdict ids
            advisory_levels: Levels ("level1", "level2", "chain") whose
                violations are recorded without failing
        """
        if self.measured is None:
            raise ArgumentError(f"{self.label}: no measured value attached")
        advisory = set(advisory_levels)
        if not self.applicable:
            return [not_met(f"{case_id}/level1", self.measured, self.direction, "level1" in advisory)]
        out = [
            judge(f"{case_id}/level1", self.measured, self.value, self.direction, advisory="level1" in advisory)
        ]
        if self.secondary_value is not None:
            out.append(
                judge(
                    f"{case_id}/level2",
                    self.measured,
                    self.secondary_value,
                    self.direction,
                    advisory="level2" in advisory,
                )
            )
            out.append(
                judge(
                    f"{case_id}/chain",
                    self.value,
                    self.secondary_value,
                    Direction.LE,
                    tolerance=float(get_setting("bounds.chain_tol", 1e-12)),
                    advisory="chain" in advisory,
                )
            )
        out.extend(replace(v, case_id=f"{case_id}/{v.case_id}") for v in self.companions)
        return out

    def to_dict(self) -> Dict[str, object]:
        return {
            "theorem_id": self.theorem_id.value,
            "label": self.label,
            "value": _finite_or_none(self.value),
            "secondary_value": _finite_or_none(self.secondary_value),
            "direction": self.direction.value,
            "measured": _finite_or_none(self.measured),
            "applicable": self.applicable,
            "hypotheses": [h.to_dict() for h in self.hypotheses],
            "companions": [v.to_dict() for v in self.companions],
            "parameters": dict(self.parameters),
        }


def with_measured(result: BoundResult, measured: float) -> BoundResult:
    return replace(result, measured=float(measured))


# --- helpers -----------------------------------------------------------------


def _hyp(name: str, verdict: Optional[bool]) -> Hypothesis:
    if verdict is None:
        return Hypothesis(name, False, "unavailable")
    return Hypothesis(name, bool(verdict), "" if verdict else "failed")


def _endpoint_max(p: FuncProfile) -> Optional[float]:
    a, b = p.endpoint_deriv_a, p.endpoint_deriv_b
    if a is None or b is None:
        return None
    return max(abs(a), abs(b))


def _endpoint_sum(p: FuncProfile) -> Optional[float]:
    a, b = p.endpoint_deriv_a, p.endpoint_deriv_b
    if a is None or b is None:
        return None
    return abs(a) + abs(b)


def _product(*factors: Optional[float]) -> float:
    if any(f is None for f in factors):
        return math.nan
    out = 1.0
    for f in factors:
        out *= f
    return out


def _pair(f: Expr, g: Expr, iv: Interval, tol: Optional[float]):
    tol = tol or get_tolerance()
    return profile(f, iv, tol), profile(g, iv, tol), chebyshev_T(f, g, iv, tol)


# --- classical bounds --------------------------------------------------------


def cheb_first(fp: FuncProfile, gp: FuncProfile, iv: Interval) -> BoundResult:
    """(b-a)²/12 · ‖f'‖∞ · ‖g'‖∞ bounds |T|."""
    hyps = [_hyp("f' bounded", fp.sup_norm_deriv is not None), _hyp("g' bounded", gp.sup_norm_deriv is not None)]
    value = _product(iv.length**2 / 12, fp.sup_norm_deriv, gp.sup_norm_deriv)
    return BoundResult(TheoremId.CHEB1, value, Direction.ABS_LE, hyps)


def _sign_direction(fp: FuncProfile, gp: FuncProfile) -> Optional[Direction]:
    mf, mg = fp.monotone, gp.monotone
    if mf in (None, Monotonicity.NONE) or mg in (None, Monotonicity.NONE):
        return None
    return Direction.GE if mf == mg else Direction.LE


def cheb_second_sign(fp: FuncProfile, gp: FuncProfile, T: float, case_id: str = "sign") -> Verdict:
    """T >= 0 for functions monotone in the same sense, T <= 0 for opposite senses."""
    direction = _sign_direction(fp, gp)
    if direction is None:
        return not_met(case_id, T, Direction.GE)
    return judge(case_id, T, 0.0, direction)


def sign_bound(f: Expr, g: Expr, iv: Interval, tol: Optional[float] = None) -> BoundResult:
    fp, gp, T = _pair(f, g, iv, tol)
    direction = _sign_direction(fp, gp)
    hyps = [_hyp("f monotone", fp.monotone not in (None, Monotonicity.NONE)),
            _hyp("g monotone", gp.monotone not in (None, Monotonicity.NONE))]
    return BoundResult(TheoremId.SIGN, 0.0, direction or Direction.GE, hyps, measured=T)


def _check_inner(outer: Interval, inner: Interval) -> float:
    if not outer.contains(inner):
        raise ArgumentError(f"inner interval {inner} is not contained in {outer}")
    gap = outer.length - inner.length
    if gap <= 0:
        raise ArgumentError(f"inner interval {inner} has the same length as {outer}")
    return gap


def barnett_mean_bound(fp: FuncProfile, outer: Interval, inner: Interval) -> BoundResult:
    """
    Bound on |mean_[a,b] f - mean_[c,d] f| by ‖f'‖∞.

    value = [1/4 + (midpoint offset / gap)²] · gap · ‖f'‖∞, secondary = gap/2 · ‖f'‖∞,
    where gap = (b-a) - (d-c).
    """
    gap = _check_inner(outer, inner)
    sup = fp.sup_norm_deriv
    offset = outer.midpoint - inner.midpoint
    value = _product(0.25 + (offset / gap) ** 2, gap, sup)
    secondary = _product(0.5, gap, sup)
    return BoundResult(
        TheoremId.BARNETT,
        value,
        Direction.ABS_LE,
        [_hyp("f' bounded", sup is not None)],
        secondary_value=secondary,
        parameters={"c": inner.a, "d": inner.b},
    )


def cerone_dragomir_mean_bound(fp: FuncProfile, outer: Interval, inner: Interval) -> List[BoundResult]:
    """
    Bounded-variation and Lipschitz branches for the mean difference.

    Both branches are always returned; a branch whose data is missing comes
    back with applicable False.
    """
    gap = _check_inner(outer, inner)
    variation = fp.total_variation
    bv_value = _product(gap / 2 + abs(inner.midpoint - outer.midpoint), variation, 1.0 / outer.length)
    lipschitz = fp.lipschitz
    lip_value = _product(
        lipschitz, ((inner.a - outer.a) ** 2 + (outer.b - inner.b) ** 2) / (2 * gap)
    )
    params = {"c": inner.a, "d": inner.b}
    return [
        BoundResult(
            TheoremId.CERONE_BV,
            bv_value,
            Direction.ABS_LE,
            [_hyp("f of bounded variation", variation is not None)],
            parameters=params,
        ),
        BoundResult(
            TheoremId.CERONE_LIP,
            lip_value,
            Direction.ABS_LE,
            [_hyp("f Lipschitz", lipschitz is not None)],
            parameters=params,
        ),
    ]


def _kernel_args(iv: Interval, x: float, y: float):
    if not (iv.a <= x < y <= iv.b):
        raise ArgumentError(f"kernels need a <= x < y <= b, got x={x}, y={y} on {iv}")
    length = iv.length
    inner = y - x
    gap = length - inner
    if gap <= 0:
        raise ArgumentError("kernels are undefined for x=a and y=b together")
    return length, inner, gap


def _kernel_I(length: float, inner: float, gap: float, q: float) -> float:
    return (
        q * q * inner / (length * gap)
        - q**3 * inner / (3 * length * gap**2)
        - q * inner / (2 * length)
        + inner * gap / (6 * length)
        + q * q / (3 * length)
    )


def hwang_kernels(iv: Interval, x: float, y: float) -> KernelIJ:
    """
    Weights of |f'(x)| and |f'(y)| in the convex-|f'| mean-difference bound.

    I integrates the Peano kernel against the hat function at x, J against
    the hat function at y; J is I with x-a replaced by b-y.

    Raises:
        ArgumentError: x=a and y=b together, or x, y out of order
    """
    length, inner, gap = _kernel_args(iv, x, y)
    return KernelIJ(
        _kernel_I(length, inner, gap, x - iv.a),
        _kernel_I(length, inner, gap, iv.b - y),
    )


def hwang_kernels_displayed(iv: Interval, x: float, y: float) -> KernelIJ:
    """The kernel pair as commonly printed, with J a copy of I (kept for comparison)."""
    length, inner, gap = _kernel_args(iv, x, y)
    i_value = _kernel_I(length, inner, gap, x - iv.a)
    return KernelIJ(i_value, i_value)


def hwang_dragomir_bound(
    f: Expr, iv: Interval, x: float, y: float, tol: Optional[float] = None
) -> BoundResult:
    """
    Mean-difference bound for convex |f'|:

        q²/(6B)|f'(a)| + I|f'(x)| + J|f'(y)| + r²/(6B)|f'(b)|

    with q = x-a, r = b-y, B = b-a. The measured value is the mean difference
    between [a,b] and [x,y].
    """
    tol = tol or get_tolerance()
    kernel = hwang_kernels(iv, x, y)
    fp = profile(f, iv, tol)
    d = fp.derivative
    length = iv.length
    if d is None:
        value = math.nan
    else:
        value = (
            (x - iv.a) ** 2 / (6 * length) * abs(d.side_value(iv.a, 1))
            + kernel.I * abs(d.side_value(x, 1 if x == iv.a else -1))
            + kernel.J * abs(d.side_value(y, -1 if y == iv.b else 1))
            + (iv.b - y) ** 2 / (6 * length) * abs(d.side_value(iv.b, -1))
        )
    measured = mean_difference(f, iv, Interval(x, y), tol)
    return BoundResult(
        TheoremId.HWANG,
        value,
        Direction.ABS_LE,
        [_hyp("|f'| convex", fp.deriv_abs_convex)],
        measured=measured,
        parameters={"x": x, "y": y},
    )


# --- bounds through endpoint derivatives -------------------------------------


def mn_pair(fp: FuncProfile, gp: FuncProfile) -> Optional[MNPair]:
    """M = |f'(a)||g'(a)| + |f'(b)||g'(b)|, N = |f'(a)||g'(b)| + |f'(b)||g'(a)|; None if any is missing."""
    fa, fb, ga, gb = fp.endpoint_deriv_a, fp.endpoint_deriv_b, gp.endpoint_deriv_a, gp.endpoint_deriv_b
    if None in (fa, fb, ga, gb):
        return None
    return MNPair(
        abs(fa) * abs(ga) + abs(fb) * abs(gb),
        abs(fa) * abs(gb) + abs(fb) * abs(ga),
    )


def thm21_bound(f: Expr, g: Expr, iv: Interval, tol: Optional[float] = None) -> BoundResult:
    """|T| <= (b-a)²/48·[M+N+|M-N|] <= (b-a)²/12·max|g'(a,b)|·max|f'(a,b)| for convex |f'|, |g'|."""
    fp, gp, T = _pair(f, g, iv, tol)
    mn = mn_pair(fp, gp)
    length2 = iv.length**2
    value = math.nan if mn is None else length2 / 48 * (mn.M + mn.N + abs(mn.M - mn.N))
    secondary = _product(length2 / 12, _endpoint_max(gp), _endpoint_max(fp))
    hyps = [_hyp("|f'| convex", fp.deriv_abs_convex), _hyp("|g'| convex", gp.deriv_abs_convex)]
    return BoundResult(TheoremId.THM21, value, Direction.ABS_LE, hyps, secondary_value=secondary, measured=T)


def _lipschitz_bound(
    theorem_id: TheoremId, f: Expr, g: Expr, iv: Interval, lipschitz: Optional[float], tol: Optional[float]
) -> BoundResult:
    fp, gp, T = _pair(f, g, iv, tol)
    if lipschitz is None:
        lipschitz = fp.lipschitz if theorem_id == TheoremId.THM22 else fp.sup_norm_deriv
    length2 = iv.length**2
    value = _product(lipschitz, length2 / 24, _endpoint_sum(gp))
    secondary = _product(lipschitz, length2 / 12, _endpoint_max(gp))
    name = "f Lipschitz" if theorem_id == TheoremId.THM22 else "f' bounded"
    hyps = [_hyp(name, lipschitz is not None), _hyp("|g'| convex", gp.deriv_abs_convex)]
    return BoundResult(theorem_id, value, Direction.ABS_LE, hyps, secondary_value=secondary, measured=T)


def thm22_bound(
    f: Expr, g: Expr, iv: Interval, lipschitz: Optional[float] = None, tol: Optional[float] = None
) -> BoundResult:
    """
    |T| <= L(b-a)²/24·(|g'(a)|+|g'(b)|) <= L(b-a)²/12·max|g'(a,b)| for L-Lipschitz f, convex |g'|.

    Args:
        lipschitz: Explicit L; defaults to the profile's Lipschitz constant
    """
    return _lipschitz_bound(TheoremId.THM22, f, g, iv, lipschitz, tol)


def remark1_bound(f: Expr, g: Expr, iv: Interval, tol: Optional[float] = None) -> BoundResult:
    """thm22 with L = ‖f'‖∞."""
    return _lipschitz_bound(TheoremId.REMARK1, f, g, iv, None, tol)


def thm23_bound(f: Expr, g: Expr, iv: Interval, tol: Optional[float] = None) -> BoundResult:
    """|T| <= (b-a)/16·(|g'(a)|+|g'(b)|)·V(f) <= (b-a)/8·max|g'(a,b)|·V(f) for f of bounded variation."""
    fp, gp, T = _pair(f, g, iv, tol)
    variation = fp.total_variation
    value = _product(iv.length / 16, _endpoint_sum(gp), variation)
    secondary = _product(iv.length / 8, _endpoint_max(gp), variation)
    hyps = [_hyp("f of bounded variation", variation is not None), _hyp("|g'| convex", gp.deriv_abs_convex)]
    return BoundResult(TheoremId.THM23, value, Direction.ABS_LE, hyps, secondary_value=secondary, measured=T)


def remark2_bound(f: Expr, g: Expr, iv: Interval, tol: Optional[float] = None) -> BoundResult:
    """(b-a)/8·max|g'(a,b)|·‖f'‖₁ for differentiable f (variation written as ∫|f'|)."""
    fp, gp, T = _pair(f, g, iv, tol)
    l1 = fp.l1_norm_deriv if not fp.has_jumps else None
    value = _product(iv.length / 8, _endpoint_max(gp), l1)
    hyps = [_hyp("f' integrable, no jumps", l1 is not None), _hyp("|g'| convex", gp.deriv_abs_convex)]
    return BoundResult(TheoremId.REMARK2, value, Direction.ABS_LE, hyps, measured=T)


def h_constant(beta: float) -> float:
    """
    h(β) = B(β+1, β+1)^(1/β) / 2; h(∞) is the limit 1/8.

    Raises:
        ArgumentError: beta <= 0
    """
    if not beta > 0:
        raise ArgumentError(f"h_constant requires beta > 0, got {beta}")
    if math.isinf(beta):
        return 0.125
    return 0.5 * math.exp(log_beta(beta + 1.0, beta + 1.0) / beta)


def thm24_bound(
    f: Expr,
    g: Expr,
    iv: Interval,
    alpha: float,
    use_sup_norm: bool = False,
    tol: Optional[float] = None,
) -> BoundResult:
    """
    |T| <= (b-a)^(1+1/β)·h(β)·max|g'(a,b)|·‖f'‖_α with 1/α + 1/β = 1.

    α = 1 and α = ∞ use the closed forms (b-a)/8 and (b-a)²/12.

    Args:
        alpha: Hölder exponent of f' (>= 1, math.inf allowed)
        use_sup_norm: Replace max|g'(a,b)| by ‖g'‖∞
    """
    if not alpha >= 1:
        raise ArgumentError(f"thm24 requires alpha >= 1, got {alpha}")
    fp, gp, T = _pair(f, g, iv, tol)
    length = iv.length
    if alpha == 1:
        coefficient = length / 8
    elif math.isinf(alpha):
        coefficient = length**2 / 12
    else:
        beta = alpha / (alpha - 1)
        coefficient = length ** (1 + 1 / beta) * h_constant(beta)
    g_factor = gp.sup_norm_deriv if use_sup_norm else _endpoint_max(gp)
    norm = fp.lp_norm_deriv(alpha)
    value = _product(coefficient, g_factor, norm)
    hyps = [_hyp(f"f' in L_{alpha:g}", norm is not None), _hyp("|g'| convex", gp.deriv_abs_convex)]
    return BoundResult(
        TheoremId.THM24, value, Direction.ABS_LE, hyps, measured=T, parameters={"alpha": alpha}
    )


def thm25_bound(f: Expr, g: Expr, iv: Interval, tol: Optional[float] = None) -> BoundResult:
    """|T| <= (b-a)²/12·‖g'‖∞·max|f'(a,b)| for convex |f'|."""
    fp, gp, T = _pair(f, g, iv, tol)
    value = _product(iv.length**2 / 12, gp.sup_norm_deriv, _endpoint_max(fp))
    hyps = [_hyp("|f'| convex", fp.deriv_abs_convex), _hyp("g' bounded", gp.sup_norm_deriv is not None)]
    return BoundResult(TheoremId.THM25, value, Direction.ABS_LE, hyps, measured=T)


# --- convex pairs --------------------------------------------------------------


def _endpoint_rise(p: FuncProfile) -> Optional[float]:
    if p.value_a is None or p.value_b is None:
        return None
    return p.value_b - p.value_a


def convex_pair_upper(f: Expr, g: Expr, iv: Interval, tol: Optional[float] = None) -> BoundResult:
    """
    Signed upper estimate T <= (f(b)-f(a))(g(b)-g(a))/12 for convex f, g.

    When f and g are monotone in the same sense the result also carries the
    companion check T >= 0.
    """
    fp, gp, T = _pair(f, g, iv, tol)
    value = _product(_endpoint_rise(fp), _endpoint_rise(gp), 1 / 12)
    hyps = [_hyp("f convex", fp.convex), _hyp("g convex", gp.convex)]
    companions = []
    if _sign_direction(fp, gp) == Direction.GE:
        companions.append(judge("monotone-same-sense", T, 0.0, Direction.GE))
    return BoundResult(TheoremId.CONVEX_UPPER, value, Direction.LE, hyps, measured=T, companions=companions)


def concave_pair_lower(f: Expr, g: Expr, iv: Interval, tol: Optional[float] = None) -> BoundResult:
    """
    Signed lower estimate T >= (f(b)-f(a))(g(b)-g(a))/12 for concave f, g.

    Opposite monotonicity adds the companion check T <= 0.
    """
    fp, gp, T = _pair(f, g, iv, tol)
    value = _product(_endpoint_rise(fp), _endpoint_rise(gp), 1 / 12)
    hyps = [_hyp("f concave", fp.concave), _hyp("g concave", gp.concave)]
    companions = []
    if _sign_direction(fp, gp) == Direction.LE:
        companions.append(judge("monotone-opposite-sense", T, 0.0, Direction.LE))
    return BoundResult(TheoremId.CONCAVE_LOWER, value, Direction.GE, hyps, measured=T, companions=companions)


def lupas_lower(f: Expr, g: Expr, iv: Interval, tol: Optional[float] = None) -> BoundResult:
    """T >= 12/(b-a)⁴ · ∫(t-m)f · ∫(t-m)g for convex f, g (equality if one is linear)."""
    tol = tol or get_tolerance()
    fp, gp, T = _pair(f, g, iv, tol)
    value = 12 / iv.length**4 * first_moment(f, iv, tol) * first_moment(g, iv, tol)
    hyps = [_hyp("f convex", fp.convex), _hyp("g convex", gp.convex)]
    return BoundResult(TheoremId.LUPAS, value, Direction.GE, hyps, measured=T)


def atkinson_bound(f: Expr, g: Expr, iv: Interval, tol: Optional[float] = None) -> BoundResult:
    """T >= 0 for convex f, g when ∫(t-(a+b)/2)g = 0."""
    tol = tol or get_tolerance()
    fp, gp, T = _pair(f, g, iv, tol)
    moment = first_moment(g, iv, tol)
    moment_tol = float(get_setting("bounds.atkinson_moment_tol", 1e-8))
    hyps = [
        _hyp("f convex", fp.convex),
        _hyp("g convex", gp.convex),
        Hypothesis("g has zero first moment", abs(moment) <= moment_tol, f"m={moment:.3g}"),
    ]
    return BoundResult(TheoremId.ATKINSON, 0.0, Direction.GE, hyps, measured=T, parameters={"moment": moment})


def atkinson_check(f: Expr, g: Expr, iv: Interval, tol: Optional[float] = None, case_id: str = "atkinson") -> Verdict:
    """Verdict form of atkinson_bound; hypotheses-not-met when the moment is nonzero."""
    verdict = atkinson_bound(f, g, iv, tol).verdicts(case_id)[0]
    return replace(verdict, case_id=case_id)


# --- registry --------------------------------------------------------------------


@dataclass(frozen=True)
class CatalogEntry:
    theorem_id: TheoremId
    title: str
    kind: str  # "pair" (bounds T(f,g)) or "mean" (bounds a mean difference of f)
    compute: Callable[..., List[BoundResult]]


def _pair_entry(fn: Callable[..., BoundResult]) -> Callable[..., List[BoundResult]]:
    def compute(f, g, iv, inner=None, alpha=2.0, tol=None):
        return [fn(f, g, iv, tol=tol)]

    return compute


def _cheb1(f, g, iv, inner=None, alpha=2.0, tol=None):
    fp, gp, T = _pair(f, g, iv, tol)
    return [with_measured(cheb_first(fp, gp, iv), T)]


def _thm24(f, g, iv, inner=None, alpha=2.0, tol=None):
    return [thm24_bound(f, g, iv, alpha, tol=tol)]


def _default_inner(iv: Interval, inner: Optional[Interval]) -> Interval:
    return inner or Interval(iv.a, iv.midpoint)


def _barnett(f, g, iv, inner=None, alpha=2.0, tol=None):
    inner = _default_inner(iv, inner)
    fp = profile(f, iv, tol or get_tolerance())
    return [with_measured(barnett_mean_bound(fp, iv, inner), mean_difference(f, iv, inner, tol))]


def _cerone(f, g, iv, inner=None, alpha=2.0, tol=None):
    inner = _default_inner(iv, inner)
    fp = profile(f, iv, tol or get_tolerance())
    measured = mean_difference(f, iv, inner, tol)
    return [with_measured(r, measured) for r in cerone_dragomir_mean_bound(fp, iv, inner)]


def _hwang(f, g, iv, inner=None, alpha=2.0, tol=None):
    inner = _default_inner(iv, inner)
    return [hwang_dragomir_bound(f, iv, inner.a, inner.b, tol)]


def catalog() -> Dict[TheoremId, CatalogEntry]:
    """Ordered registry of every bound, consumed by the CLI and the suites."""
    entries = [
        CatalogEntry(TheoremId.CHEB1, "first Čebyšev inequality, ‖f'‖∞‖g'‖∞", "pair", _cheb1),
        CatalogEntry(TheoremId.SIGN, "Čebyšev sign rule for monotone pairs", "pair", _pair_entry(sign_bound)),
        CatalogEntry(TheoremId.BARNETT, "mean difference by ‖f'‖∞", "mean", _barnett),
        CatalogEntry(TheoremId.CERONE_BV, "mean difference by variation / Lipschitz", "mean", _cerone),
        CatalogEntry(TheoremId.HWANG, "mean difference for convex |f'|", "mean", _hwang),
        CatalogEntry(TheoremId.THM21, "convex |f'| and |g'|, endpoint products", "pair", _pair_entry(thm21_bound)),
        CatalogEntry(TheoremId.THM22, "Lipschitz f, convex |g'|", "pair", _pair_entry(thm22_bound)),
        CatalogEntry(TheoremId.REMARK1, "Lipschitz constant as ‖f'‖∞", "pair", _pair_entry(remark1_bound)),
        CatalogEntry(TheoremId.THM23, "f of bounded variation, convex |g'|", "pair", _pair_entry(thm23_bound)),
        CatalogEntry(TheoremId.REMARK2, "variation as ‖f'‖₁", "pair", _pair_entry(remark2_bound)),
        CatalogEntry(TheoremId.THM24, "f' in L_α, Beta-function constant", "pair", _thm24),
        CatalogEntry(TheoremId.THM25, "convex |f'|, ‖g'‖∞", "pair", _pair_entry(thm25_bound)),
        CatalogEntry(TheoremId.ATKINSON, "convex pair, zero first moment", "pair", _pair_entry(atkinson_bound)),
        CatalogEntry(TheoremId.LUPAS, "convex pair, first-moment lower bound", "pair", _pair_entry(lupas_lower)),
        CatalogEntry(TheoremId.CONVEX_UPPER, "convex pair, endpoint-rise upper estimate", "pair", _pair_entry(convex_pair_upper)),
        CatalogEntry(TheoremId.CONCAVE_LOWER, "concave pair, endpoint-rise lower estimate", "pair", _pair_entry(concave_pair_lower)),
    ]
    return {entry.theorem_id: entry for entry in entries}


def resolve_theorems(names: Optional[Sequence[str]]) -> List[TheoremId]:
    """Map user-supplied ids to catalog ids (all catalog ids when names is empty)."""
    known = catalog()
    if not names:
        return list(known)
    out = []
    for name in names:
        key = "cerone_bv" if name in ("cerone", "cerone_lip") else name
        try:
            theorem_id = TheoremId(key)
        except ValueError:
            raise ArgumentError(f"unknown theorem id '{name}'; choose from {', '.join(t.value for t in known)}")
        if theorem_id not in out:
            out.append(theorem_id)
    return out

"""
Verification harness: randomized suites, sharpness witnesses, tightness
search and the h(β) curve.

Each suite case is a pure function of (suite id, seed, case index), so runs
are reproducible and can be spread over worker processes; results are always
merged back in case order.
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from config.settings import get_setting, get_tolerance, rescale_enabled
from core.bounds import (
    BoundResult,
    atkinson_check,
    barnett_mean_bound,
    cerone_dragomir_mean_bound,
    cheb_first,
    cheb_second_sign,
    concave_pair_lower,
    convex_pair_upper,
    h_constant,
    hwang_dragomir_bound,
    lupas_lower,
    remark1_bound,
    remark2_bound,
    thm21_bound,
    thm22_bound,
    thm23_bound,
    thm24_bound,
    thm25_bound,
    with_measured,
)
from core.calculus import (
    chebyshev_T,
    chebyshev_T_centered,
    chebyshev_T_identity,
    mean_difference,
    profile,
)
from core.expr import ArgumentError, ChebyError, Expr, Interval, neg
from core.families import (
    UNIT,
    Family,
    FamilyParams,
    FamilySpec,
    anchor,
    build,
    perturb,
    random_interval,
    sample,
    step_scale,
)
from core.parser import parse
from core.verdict import Direction, Status, Verdict, errored, judge, not_met

logger = logging.getLogger(__name__)

IDENTITY_TOL = 1e-8
THM24_ALPHAS = (1.0, 1.5, 2.0, 4.0, math.inf)

CheckFn = Callable[[Expr, Optional[Expr], Interval, np.random.Generator, float, str, Tuple[str, ...]], List[Verdict]]
PairBound = Callable[[Expr, Expr, Interval, float], BoundResult]


@dataclass(frozen=True)
class Suite:
    """
    One randomized suite.

    Pair suites give ``bound`` (f, g, iv, tol) -> BoundResult and get the
    generic check; other suites supply ``check`` directly. ``alt_f_family``
    is used for odd case indices. Violations of ``advisory_levels`` are
    recorded but never fail a run.
    """

    suite_id: str
    description: str
    f_family: Family
    g_family: Optional[Family] = None
    bound: Optional[PairBound] = None
    check: Optional[CheckFn] = None
    alt_f_family: Optional[Family] = None
    advisory_levels: Tuple[str, ...] = ()
    negate_randomly: bool = False

    @property
    def searchable(self) -> bool:
        return self.bound is not None

    @property
    def hard(self) -> bool:
        return not self.advisory_levels


def _pair_check(suite: Suite, f, g, iv, rng, tol, case_id) -> List[Verdict]:
    return suite.bound(f, g, iv, tol).verdicts(case_id, suite.advisory_levels)


def _random_inner(iv: Interval, rng: np.random.Generator) -> Interval:
    c, d = np.sort(rng.uniform(iv.a, iv.b, 2))
    if d - c < 1e-3 * iv.length:
        d = min(iv.b, c + 0.25 * iv.length)
        c = d - 0.25 * iv.length
    return Interval(float(c), float(d))


def _cheb1(f, g, iv, rng, tol, case_id, advisory):
    fp, gp = profile(f, iv, tol), profile(g, iv, tol)
    T = chebyshev_T(f, g, iv, tol)
    return with_measured(cheb_first(fp, gp, iv), T).verdicts(case_id, advisory)


def _sign(f, g, iv, rng, tol, case_id, advisory):
    T = chebyshev_T(f, g, iv, tol)
    return [cheb_second_sign(profile(f, iv, tol), profile(g, iv, tol), T, case_id)]


def _barnett(f, g, iv, rng, tol, case_id, advisory):
    inner = _random_inner(iv, rng)
    measured = mean_difference(f, iv, inner, tol)
    return with_measured(barnett_mean_bound(profile(f, iv, tol), iv, inner), measured).verdicts(case_id, advisory)


def _cerone_branch(index: int) -> CheckFn:
    def check(f, g, iv, rng, tol, case_id, advisory):
        inner = _random_inner(iv, rng)
        measured = mean_difference(f, iv, inner, tol)
        branch = cerone_dragomir_mean_bound(profile(f, iv, tol), iv, inner)[index]
        return with_measured(branch, measured).verdicts(case_id, advisory)

    return check


def _hwang(f, g, iv, rng, tol, case_id, advisory):
    if rng.random() < 0.2:
        x, y = iv.a, float(rng.uniform(iv.a + 0.05 * iv.length, iv.b))
    else:
        x, y = (float(p) for p in np.sort(rng.uniform(iv.a, iv.b, 2)))
    if y - x < 1e-3 * iv.length:
        y = min(iv.b, x + 0.1 * iv.length)
    if x == iv.a and y == iv.b:
        y = iv.b - 0.1 * iv.length
    return hwang_dragomir_bound(f, iv, x, y, tol).verdicts(case_id, advisory)


def _atkinson(f, g, iv, rng, tol, case_id, advisory):
    return [atkinson_check(f, g, iv, tol, case_id=f"{case_id}/level1")]


def _lupas_linear(f, g, iv, rng, tol, case_id, advisory):
    result = lupas_lower(f, g, iv, tol)
    if not result.applicable:
        return [not_met(f"{case_id}/equality", result.measured, Direction.EQ)]
    return [judge(f"{case_id}/equality", result.measured, result.value, Direction.EQ)]


def _identity(f, g, iv, rng, tol, case_id, advisory):
    T = chebyshev_T(f, g, iv, tol)
    return [
        judge(f"{case_id}/identity", chebyshev_T_identity(f, g, iv, tol), T, Direction.EQ, IDENTITY_TOL),
        judge(f"{case_id}/centered", chebyshev_T_centered(f, g, iv, tol), T, Direction.EQ, IDENTITY_TOL),
    ]


def _thm24_at(alpha: float) -> PairBound:
    def bound(f, g, iv, tol):
        return thm24_bound(f, g, iv, alpha, tol=tol)

    return bound


def _alpha_tag(alpha: float) -> str:
    return "inf" if math.isinf(alpha) else f"{alpha:g}"


def _build_suites() -> Dict[str, Suite]:
    cpd, cpl = Family.CONVEX_POSITIVE_DERIV, Family.CONVEX_PIECEWISE_LINEAR
    smooth, step = Family.SMOOTH_GENERAL, Family.STEP_FUNCTION
    suites = [
        Suite("cheb1", "first Čebyšev inequality", smooth, smooth, check=_cheb1),
        Suite("sign", "sign of T for monotone pairs", cpd, cpd, check=_sign, negate_randomly=True),
        Suite("barnett", "mean difference by ‖f'‖∞", smooth, check=_barnett),
        Suite("cerone_bv", "mean difference by variation", smooth, check=_cerone_branch(0), alt_f_family=step),
        Suite("cerone_lip", "mean difference by Lipschitz constant", smooth, check=_cerone_branch(1)),
        Suite("hwang", "mean difference for convex |f'|", cpd, check=_hwang),
        Suite("thm21", "convex |f'|, |g'|", cpd, cpd, bound=thm21_bound),
        Suite("thm22", "Lipschitz f, convex |g'|", smooth, cpd, bound=lambda f, g, iv, tol: thm22_bound(f, g, iv, tol=tol)),
        Suite("remark1", "thm22 with L = ‖f'‖∞", smooth, cpd, bound=remark1_bound),
        Suite("thm23", "f of bounded variation, convex |g'|", step, cpd, bound=thm23_bound, advisory_levels=("level1",)),
        Suite("remark2", "variation as ‖f'‖₁", smooth, cpd, bound=remark2_bound),
    ]
    suites.extend(
        Suite(f"thm24@{_alpha_tag(alpha)}", f"f' in L_{_alpha_tag(alpha)}", smooth, cpd, bound=_thm24_at(alpha))
        for alpha in THM24_ALPHAS
    )
    suites.extend(
        [
            Suite("thm25", "convex |f'|, ‖g'‖∞", cpd, smooth, bound=thm25_bound),
            Suite("atkinson", "convex pair, zero first moment", cpd, Family.SYMMETRIC_CONVEX, check=_atkinson, alt_f_family=cpl),
            Suite("lupas", "first-moment lower bound", cpd, cpl, bound=lupas_lower, alt_f_family=cpl),
            Suite("lupas_linear", "first-moment bound with a linear factor", cpd, Family.LINEAR, check=_lupas_linear, alt_f_family=cpl),
            Suite("convex_upper", "convex pair upper estimate", cpd, cpl, bound=convex_pair_upper, alt_f_family=cpl, advisory_levels=("level1",)),
            Suite("concave_lower", "concave pair lower estimate", Family.CONCAVE, Family.CONCAVE, bound=concave_pair_lower, advisory_levels=("level1",)),
            Suite("identity", "integration-by-parts cross-check", smooth, smooth, check=_identity),
        ]
    )
    return {suite.suite_id: suite for suite in suites}


SUITES: Dict[str, Suite] = _build_suites()
_ALIASES = {"thm24": "thm24@2", "cerone": "cerone_bv"}


def resolve_suite(name: str) -> Suite:
    """
    Look up a suite by id (aliases: thm24 -> thm24@2, cerone -> cerone_bv).

    Raises:
        ArgumentError: unknown id
    """
    key = _ALIASES.get(name, name)
    if key not in SUITES:
        raise ArgumentError(f"unknown suite '{name}'; choose from {', '.join(SUITES)}")
    return SUITES[key]


def _family_spec(family: Family, rng: np.random.Generator) -> FamilySpec:
    degree_key = "families.segments" if family == Family.STEP_FUNCTION else "families.degree"
    lo, hi = get_setting("families.coefficient_range", [0.0, 3.0])
    return FamilySpec(family, int(get_setting(degree_key, 3)), (float(lo), float(hi)), int(rng.integers(2**63)))


def _draw(family: Family, rng: np.random.Generator, iv: Interval) -> Expr:
    return build(sample(_family_spec(family, rng), rng), iv)


def run_case(suite_id: str, seed: int, index: int, tol: Optional[float] = None) -> List[Verdict]:
    """Verdicts of one case; a pure function of (suite_id, seed, index)."""
    suite = resolve_suite(suite_id)
    tol = tol or get_tolerance()
    rng = np.random.default_rng([int(seed), int(index)])
    if rescale_enabled():
        iv = random_interval(
            rng,
            tuple(get_setting("families.interval_offset_range", [-2.0, 2.0])),
            tuple(get_setting("families.interval_length_range", [0.5, 3.0])),
        )
    else:
        iv = UNIT
    f_family = suite.alt_f_family if suite.alt_f_family and index % 2 else suite.f_family
    f = _draw(f_family, rng, iv)
    g = _draw(suite.g_family, rng, iv) if suite.g_family else None
    if suite.negate_randomly:
        f = neg(f) if rng.random() < 0.5 else f
        g = neg(g) if g is not None and rng.random() < 0.5 else g
    case_id = f"{suite.suite_id}/{index:04d}"
    try:
        if suite.check is not None:
            return suite.check(f, g, iv, rng, tol, case_id, suite.advisory_levels)
        return _pair_check(suite, f, g, iv, rng, tol, case_id)
    except ChebyError as exc:
        logger.warning(f"{case_id}: case failed ({type(exc).__name__}: {exc})")
        return [errored(f"{case_id}/error")]


def _run_case_args(args: Tuple[str, int, int, float]) -> List[Verdict]:
    return run_case(*args)


def run_suite(
    theorem_id: str,
    n_cases: int,
    seed: int = 0,
    workers: Optional[int] = None,
    tol: Optional[float] = None,
) -> List[Verdict]:
    """
    Run n_cases random hypothesis-satisfying cases of one suite.

    Args:
        theorem_id: Suite id (see SUITES)
        n_cases: Number of cases (>= 1)
        seed: Base seed; case i uses default_rng([seed, i])
        workers: Worker processes (defaults to suites.workers; 1 runs inline)

    Returns:
        Verdicts in case order
    """
    if n_cases < 1:
        raise ArgumentError(f"n_cases must be >= 1, got {n_cases}")
    suite = resolve_suite(theorem_id)
    tol = tol or get_tolerance()
    workers = workers or int(get_setting("suites.workers", 1))
    jobs = [(suite.suite_id, seed, index, tol) for index in range(n_cases)]
    logger.info(f"running suite {suite.suite_id}: {n_cases} cases, seed={seed}, workers={workers}")
    if workers <= 1:
        batches = [_run_case_args(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            batches = list(pool.map(_run_case_args, jobs, chunksize=max(1, n_cases // (4 * workers))))
    return [verdict for batch in batches for verdict in batch]


@dataclass
class SuiteSummary:
    total: int = 0
    holds: int = 0
    violated: int = 0
    not_met: int = 0
    errors: int = 0
    hard_violations: int = 0
    advisory_violations: int = 0
    max_ratio: Optional[float] = None
    worst_case: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.hard_violations == 0 and self.errors == 0

    def to_dict(self) -> Dict[str, object]:
        data = dict(self.__dict__)
        data["passed"] = self.passed
        return data


def summarize(verdicts: Sequence[Verdict]) -> SuiteSummary:
    """Counts by status plus the largest finite ratio and the case that produced it."""
    summary = SuiteSummary(total=len(verdicts))
    for v in verdicts:
        if v.status == Status.HOLDS:
            summary.holds += 1
        elif v.status == Status.VIOLATED:
            summary.violated += 1
            if v.advisory:
                summary.advisory_violations += 1
            else:
                summary.hard_violations += 1
        elif v.status == Status.ERROR:
            summary.errors += 1
        else:
            summary.not_met += 1
        ratio = v.ratio
        if v.direction != Direction.EQ and ratio is not None and math.isfinite(ratio):
            if summary.max_ratio is None or ratio > summary.max_ratio:
                summary.max_ratio, summary.worst_case = ratio, v.case_id
    return summary


# --- sharpness -------------------------------------------------------------------

STEP_TEXT = "piecewise{[0,0.5]: -1; [0.5,1]: 1}"

# (case id, f, g, bound, level)
WITNESSES: Tuple[Tuple[str, str, str, str, str], ...] = (
    ("thm21/level1", "x^2/6", "x", "thm21", "level1"),
    ("thm21/level2", "x", "x", "thm21", "level2"),
    ("thm22/level1", "x", "x^2/3", "thm22", "level1"),
    ("thm22/level2", "x", "x", "thm22", "level2"),
    ("remark1/level2", "x", "x", "remark1", "level2"),
    ("thm23/level1", STEP_TEXT, "x^2/2", "thm23", "level1"),
    ("thm23/level2", STEP_TEXT, "x", "thm23", "level2"),
    ("thm24@inf/level1", "x", "x", "thm24@inf", "level1"),
    ("thm25/level1", "x", "x", "thm25", "level1"),
    ("convex_upper/level1", "x", "x", "convex_upper", "level1"),
    ("lupas/level1", "x^2", "x", "lupas", "level1"),
)


def _level_value(result: BoundResult, level: str) -> Optional[float]:
    return result.secondary_value if level == "level2" else result.value


def sharpness_suite(tol: Optional[float] = None) -> List[Verdict]:
    """Equality verdicts for the extremal pairs on [0, 1]; each must match to 1e-7."""
    tol = tol or get_tolerance()
    verdicts = []
    for case_id, f_text, g_text, suite_id, level in WITNESSES:
        result = resolve_suite(suite_id).bound(parse(f_text), parse(g_text), UNIT, tol)
        value = _level_value(result, level)
        measured = abs(result.measured) if result.direction == Direction.ABS_LE else result.measured
        if not result.applicable or value is None:
            verdicts.append(not_met(f"sharpness/{case_id}", measured, Direction.EQ))
            continue
        verdicts.append(judge(f"sharpness/{case_id}", measured, value, Direction.EQ))
    return verdicts


# --- tightness search --------------------------------------------------------------


@dataclass
class TightnessReport:
    theorem_id: str
    level: str
    iterations: int
    evaluated: int = 0
    skipped: int = 0
    errors: int = 0
    best_ratio: Optional[float] = None
    best_f: Optional[str] = None
    best_g: Optional[str] = None
    ceiling: float = 1.000001
    history: List[float] = field(default_factory=list)

    @property
    def exceeded(self) -> bool:
        return self.best_ratio is not None and self.best_ratio > self.ceiling

    def to_dict(self) -> Dict[str, object]:
        data = {k: v for k, v in self.__dict__.items() if k != "history"}
        data["exceeded"] = self.exceeded
        data["restart_best"] = list(self.history)
        return data


def _ratio(suite: Suite, f: Expr, g: Expr, level: str, tol: float) -> Optional[float]:
    result = suite.bound(f, g, UNIT, tol)
    value = _level_value(result, level)
    if not result.applicable or value is None or not math.isfinite(value):
        return None
    return judge("search", result.measured, value, result.direction).ratio


def tightness_search(
    theorem_id: str,
    family: Optional[FamilySpec] = None,
    iterations: int = 10000,
    level: str = "level1",
    tol: Optional[float] = None,
) -> TightnessReport:
    """
    Random-restart hill climb maximizing T/bound over family parameters.

    f is drawn from ``family`` (defaults to the suite's f family); g from the
    suite's g family with the same degree and coefficient range. The first
    restart begins at the anchor members, later restarts at random members.
    Inapplicable candidates and 0/0 ratios are skipped.
    """
    if iterations < 1:
        raise ArgumentError(f"iterations must be >= 1, got {iterations}")
    suite = resolve_suite(theorem_id)
    if not suite.searchable:
        raise ArgumentError(f"suite '{suite.suite_id}' has no pair bound to search")
    tol = tol or get_tolerance()
    f_spec = family or FamilySpec(suite.f_family)
    g_spec = FamilySpec(suite.g_family, f_spec.degree, f_spec.coefficient_range, f_spec.seed)
    rng = np.random.default_rng(f_spec.seed)

    sigma0 = float(get_setting("search.sigma", 0.5)) * step_scale(f_spec)
    factor = float(get_setting("search.anneal_factor", 0.9))
    anneal_every = int(get_setting("search.anneal_every", 100))
    restart_every = int(get_setting("search.restart_every", 1000))
    report = TightnessReport(
        suite.suite_id, level, iterations, ceiling=float(get_setting("search.ratio_ceiling", 1.000001))
    )

    def evaluate(fp: FamilyParams, gp: FamilyParams) -> Optional[float]:
        f, g = build(fp), build(gp)
        try:
            ratio = _ratio(suite, f, g, level, tol)
        except ChebyError as exc:
            logger.debug(f"search candidate failed: {exc}")
            report.errors += 1
            ratio = None
        if ratio is None or not math.isfinite(ratio):
            report.skipped += 1
            return None
        report.evaluated += 1
        if report.best_ratio is None or ratio > report.best_ratio:
            report.best_ratio, report.best_f, report.best_g = ratio, f.to_text(), g.to_text()
        return ratio

    current: Tuple[FamilyParams, FamilyParams] = (anchor(f_spec), anchor(g_spec))
    current_ratio: Optional[float] = None
    sigma, stale = sigma0, 0
    for it in range(iterations):
        if it % restart_every == 0:
            if it:
                report.history.append(current_ratio if current_ratio is not None else math.nan)
                current = (sample(f_spec, rng), sample(g_spec, rng))
            current_ratio = evaluate(*current)
            sigma, stale = sigma0, 0
            continue
        proposal = (perturb(current[0], rng, sigma), perturb(current[1], rng, sigma))
        ratio = evaluate(*proposal)
        if ratio is not None and (current_ratio is None or ratio > current_ratio):
            current, current_ratio, stale = proposal, ratio, 0
        else:
            stale += 1
            if stale % anneal_every == 0:
                sigma *= factor
    report.history.append(current_ratio if current_ratio is not None else math.nan)
    logger.info(
        f"tightness {suite.suite_id}/{level}: best={report.best_ratio} "
        f"evaluated={report.evaluated} skipped={report.skipped}"
    )
    return report


# --- h(β) curve ----------------------------------------------------------------------


@dataclass(frozen=True)
class HCurvePoint:
    beta: float
    h: float
    dh: float


def h_curve(beta_grid: Sequence[float], delta: Optional[float] = None) -> List[HCurvePoint]:
    """
    (β, h(β), (h(β+δ) - h(β))/δ) for every β in the grid.

    Raises:
        ArgumentError: any β <= 0
    """
    delta = delta or float(get_setting("hcurve.delta", 1e-4))
    bad = [b for b in beta_grid if not b > 0]
    if bad:
        raise ArgumentError(f"h_curve requires beta > 0, got {bad[0]}")
    points = []
    for beta in beta_grid:
        h = h_constant(beta)
        points.append(HCurvePoint(float(beta), h, (h_constant(beta + delta) - h) / delta))
    return points


def linear_grid(start: float, stop: float, steps: int) -> List[float]:
    if steps < 1:
        raise ArgumentError(f"steps must be >= 1, got {steps}")
    return [float(b) for b in np.linspace(start, stop, steps + 1)]

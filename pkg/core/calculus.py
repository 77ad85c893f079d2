"""
Numerical engine: adaptive quadrature, norms, variation, the Čebyšev functional.

Every bound in core.bounds is checked against the values computed here, so
this module is the oracle of the toolkit. Integrals use an adaptive
Gauss-Kronrod 7-15 rule whose panels are pre-split at the breakpoints of the
integrand; nothing here holds mutable state beyond an LRU cache of profiles.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property, lru_cache
from typing import Callable, Dict, Iterable, List, Optional, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from config.settings import get_setting, get_tolerance
from core.expr import (
    X,
    ArgumentError,
    ChebyError,
    Const,
    DomainError,
    Expr,
    Interval,
    NotDifferentiableError,
    breakpoints,
    differentiate,
    mul,
    power,
    sub,
    unary,
)

logger = logging.getLogger(__name__)

# Gauss-Kronrod 7-15 abscissae (non-negative half, descending) and weights
_XGK = np.array(
    [
        0.991455371120812639206854697526329,
        0.949107912342758524526189684047851,
        0.864864423359769072789712788640926,
        0.741531185599394439863864773280788,
        0.586087235467691130294144845693013,
        0.405845151377397166906606412076961,
        0.207784955007898467600689403773245,
        0.000000000000000000000000000000000,
    ]
)
_WGK = np.array(
    [
        0.022935322010529224963732008058970,
        0.063092092629978553290700663189204,
        0.104790010322250183839876322541518,
        0.140653259715525918745189590510238,
        0.169004726639267902826583426598550,
        0.190350578064785409913256402421014,
        0.204432940075298892414161999234649,
        0.209482141084727828012999174891714,
    ]
)
_WG = np.array(
    [
        0.129484966168869693270611432679082,
        0.279705391489276667901467771423780,
        0.381830050505118944950369775488975,
        0.417959183673469387755102040816327,
    ]
)

# Full 15-point rule on [-1, 1]
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
# Gauss nodes are the odd-indexed Kronrod nodes of the half rule
_GAUSS_INDEX = np.array([1, 3, 5, 7, 9, 11, 13])
_GAUSS_WEIGHTS = np.concatenate([_WG[:-1], _WG[::-1]])


class QuadratureError(ChebyError):
    """Raised when the tolerance cannot be met within the subdivision budget."""

    def __init__(self, message: str, best: "QuadResult"):
        super().__init__(message)
        self.best = best


class Monotonicity(str, Enum):
    """Monotonicity verdict; INCREASING means non-decreasing (constants included)."""

    INCREASING = "increasing"
    DECREASING = "decreasing"
    NONE = "no"


@dataclass(frozen=True)
class QuadResult:
    value: float
    err_estimate: float
    subdivisions: int

    def to_dict(self) -> Dict[str, float]:
        return {"value": self.value, "err_estimate": self.err_estimate, "subdivisions": self.subdivisions}


def _gk15(fn: Callable[[np.ndarray], np.ndarray], lo: np.ndarray, hi: np.ndarray):
    """Kronrod and Gauss estimates for every panel [lo_i, hi_i] in one evaluation."""
    center = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    points = center[:, None] + half[:, None] * _NODES[None, :]
    values = np.asarray(fn(points.ravel()), dtype=float).reshape(points.shape)
    kronrod = half * (values @ _KRONROD_WEIGHTS)
    gauss = half * (values[:, _GAUSS_INDEX] @ _GAUSS_WEIGHTS)
    return kronrod, gauss


def integrate_function(
    fn: Callable[[np.ndarray], np.ndarray],
    edges: Sequence[float],
    tol: float,
    max_subdivisions: Optional[int] = None,
) -> QuadResult:
    """
    Adaptive Gauss-Kronrod over [edges[0], edges[-1]] starting from the given panels.

    Each panel must meet a share of tol proportional to its width, so the
    accepted error estimates sum to at most tol.

    Args:
        fn: Vectorised integrand
        edges: Sorted panel edges; breakpoints of fn belong here
        tol: Absolute tolerance (> 0)
        max_subdivisions: Panel budget (defaults to numerics.max_subdivisions)

    Raises:
        QuadratureError: Budget exhausted; .best carries the current estimate
    """
    if not tol > 0:
        raise ArgumentError(f"tolerance must be positive, got {tol}")
    budget = max_subdivisions or int(get_setting("numerics.max_subdivisions", 2000))
    lo = np.asarray(edges[:-1], dtype=float)
    hi = np.asarray(edges[1:], dtype=float)
    total = float(edges[-1] - edges[0])
    value, err, panels = 0.0, 0.0, int(lo.size)

    while lo.size:
        kronrod, gauss = _gk15(fn, lo, hi)
        panel_err = np.abs(kronrod - gauss)
        width = hi - lo
        tiny = width <= 64 * np.finfo(float).eps * np.maximum(1.0, np.abs(lo))
        done = (panel_err <= tol * width / total) | tiny
        value += float(kronrod[done].sum())
        err += float(panel_err[done].sum())
        lo, hi = lo[~done], hi[~done]
        if not lo.size:
            break
        panels += int(lo.size)
        if panels > budget:
            best = QuadResult(
                value + float(kronrod[~done].sum()),
                err + float(panel_err[~done].sum()),
                panels,
            )
            raise QuadratureError(
                f"tolerance {tol:g} not reached within {budget} panels "
                f"(best {best.value:.12g} ± {best.err_estimate:.2g})",
                best,
            )
        mid = 0.5 * (lo + hi)
        lo, hi = np.concatenate([lo, mid]), np.concatenate([mid, hi])

    if err > tol:
        best = QuadResult(value, err, panels)
        raise QuadratureError(f"accumulated error {err:.2g} exceeds tolerance {tol:g}", best)
    return QuadResult(value, err, panels)


def _edges(f: Expr, iv: Interval, extra: Iterable[float] = ()) -> List[float]:
    inner = sorted(set(breakpoints(f, iv)) | {p for p in extra if iv.a < p < iv.b})
    return [iv.a, *inner, iv.b]


def integrate(
    f: Expr,
    iv: Interval,
    tol: Optional[float] = None,
    max_subdivisions: Optional[int] = None,
) -> QuadResult:
    """
    ∫_a^b f with panels pre-split at breakpoints(f, iv).

    Args:
        f: Integrand
        iv: Integration interval
        tol: Absolute tolerance (defaults to get_tolerance())
        max_subdivisions: Panel budget

    Returns:
        QuadResult with value, error estimate and panel count
    """
    tol = tol or get_tolerance()
    return integrate_function(f.evaluate, _edges(f, iv), tol, max_subdivisions)


def _mean(f: Expr, iv: Interval, tol: float) -> float:
    return integrate(f, iv, tol).value / iv.length


def chebyshev_T(f: Expr, g: Expr, iv: Interval, tol: Optional[float] = None) -> float:
    """
    Čebyšev functional T(f,g) = mean(fg) - mean(f)·mean(g) over iv.

    Each of the three integrals runs at tol/4.
    """
    tol = tol or get_tolerance()
    quarter = tol / 4
    return _mean(mul(f, g), iv, quarter) - _mean(f, iv, quarter) * _mean(g, iv, quarter)


def chebyshev_T_centered(f: Expr, g: Expr, iv: Interval, tol: Optional[float] = None) -> float:
    """T(f,g) as (1/B)∫[f - (f(a)+f(b))/2][g - mean g]."""
    tol = tol or get_tolerance()
    centre_f = 0.5 * (f.side_value(iv.a, 1) + f.side_value(iv.b, -1))
    mean_g = _mean(g, iv, tol / 4)
    integrand = mul(sub(f, Const(centre_f)), sub(g, Const(mean_g)))
    return _mean(integrand, iv, tol / 2)


def chebyshev_T_identity(f: Expr, g: Expr, iv: Interval, tol: Optional[float] = None) -> float:
    """
    T(f,g) through integration by parts:

        (1/B²) ∫_a^b [(t-a)·∫_a^b g - B·∫_a^t g] f'(t) dt,   B = b - a

    The inner integral is computed per node with the same adaptive rule, so
    this is an independent path through the engine. f must be differentiable.
    """
    tol = tol or get_tolerance()
    df = differentiate(f)
    length = iv.length
    g_edges = _edges(g, iv)
    inner_tol = tol * 1e-3
    total_g = integrate_function(g.evaluate, g_edges, inner_tol).value

    def running_integral(t: np.ndarray) -> np.ndarray:
        order = np.argsort(t)
        sorted_t = t[order]
        cumulative = np.empty_like(sorted_t)
        acc, left = 0.0, iv.a
        for k, right in enumerate(sorted_t):
            if right > left:
                cuts = [p for p in g_edges if left < p < right]
                acc += integrate_function(g.evaluate, [left, *cuts, right], inner_tol).value
                left = right
            cumulative[k] = acc
        out = np.empty_like(cumulative)
        out[order] = cumulative
        return out

    def integrand(t: np.ndarray) -> np.ndarray:
        kernel = (t - iv.a) * total_g - length * running_integral(t)
        return kernel * df.evaluate(t)

    edges = sorted(set(_edges(f, iv)) | set(g_edges))
    return integrate_function(integrand, edges, tol).value / length**2


def mean_difference(f: Expr, outer: Interval, inner: Interval, tol: Optional[float] = None) -> float:
    """
    Difference of integral means (1/(b-a))∫_a^b f - (1/(d-c))∫_c^d f.

    Raises:
        ArgumentError: inner is not contained in outer or is not shorter
    """
    if not outer.contains(inner):
        raise ArgumentError(f"inner interval {inner} is not contained in {outer}")
    if not inner.length < outer.length:
        raise ArgumentError(f"inner interval {inner} must be strictly shorter than {outer}")
    tol = tol or get_tolerance()
    return _mean(f, outer, tol / 2) - _mean(f, inner, tol / 2)


def first_moment(f: Expr, iv: Interval, tol: Optional[float] = None) -> float:
    """∫_a^b (t - (a+b)/2) f(t) dt."""
    tol = tol or get_tolerance()
    return integrate(mul(sub(X, Const(iv.midpoint)), f), iv, tol).value


def sup_norm(f: Expr, iv: Interval) -> float:
    """
    max |f| over iv: dense mesh, bounded scalar refinement around the best
    candidates, plus both one-sided values at breakpoints and endpoints.

    A lower-bound estimator; the mesh is dense enough that C¹ functions on
    unit-scale intervals are captured to about 1e-6 before refinement.
    """
    n_mesh = int(get_setting("profile.sup_mesh_points", 1025))
    n_refine = int(get_setting("profile.sup_refine_candidates", 5))
    mesh = np.linspace(iv.a, iv.b, n_mesh)
    magnitudes = np.abs(f.evaluate(mesh))
    best = float(magnitudes.max())

    for i in np.argsort(magnitudes)[-n_refine:]:
        lo, hi = mesh[max(i - 1, 0)], mesh[min(i + 1, n_mesh - 1)]
        try:
            res = minimize_scalar(
                lambda t: -abs(f.evaluate(t)),
                bounds=(lo, hi),
                method="bounded",
                options={"xatol": 1e-12},
            )
        except DomainError:
            continue
        best = max(best, float(-res.fun))

    for p in [iv.a, iv.b, *breakpoints(f, iv)]:
        sides = [1] if p == iv.a else [-1] if p == iv.b else [-1, 1]
        for side in sides:
            best = max(best, abs(f.side_value(p, side)))
    return best


def lp_norm(f: Expr, iv: Interval, p: float, tol: Optional[float] = None) -> float:
    """
    ‖f‖_p on iv; p = math.inf gives the sup norm.

    Raises:
        ArgumentError: p < 1
    """
    if math.isinf(p):
        return sup_norm(f, iv)
    if p < 1:
        raise ArgumentError(f"lp_norm requires p >= 1, got {p}")
    tol = tol or get_tolerance()
    integrand = unary("abs", f) if p == 1 else power(unary("abs", f), float(p))
    value = integrate(integrand, iv, tol).value
    return max(value, 0.0) ** (1.0 / p)


def jump_heights(f: Expr, iv: Interval) -> List[float]:
    """Signed jumps f(p+) - f(p-) at every interior breakpoint."""
    return [f.side_value(p, 1) - f.side_value(p, -1) for p in breakpoints(f, iv)]


def total_variation(f: Expr, iv: Interval, tol: Optional[float] = None) -> float:
    """∫|f'| over the smooth pieces plus the absolute jump heights."""
    tol = tol or get_tolerance()
    smooth = differentiate(f, allow_steps=True)
    continuous_part = integrate(unary("abs", smooth), iv, tol).value
    return continuous_part + sum(abs(j) for j in jump_heights(f, iv))


def _test_points(f: Expr, iv: Interval, mesh_points: int) -> np.ndarray:
    return np.union1d(np.linspace(iv.a, iv.b, mesh_points), breakpoints(f, iv))


def is_midpoint_convex(
    h: Callable[[np.ndarray], np.ndarray],
    points: np.ndarray,
    eps: Optional[float] = None,
) -> bool:
    """
    Midpoint test h((s+t)/2) <= (h(s)+h(t))/2 + eps over all pairs of points.

    Continuous midpoint-convex functions are convex; on a finite mesh the
    test is a falsifiable proxy.
    """
    eps = get_setting("profile.convexity_eps", 1e-9) if eps is None else eps
    values = np.asarray(h(points), dtype=float)
    i, j = np.triu_indices(points.size, 1)
    mid_values = np.asarray(h(0.5 * (points[i] + points[j])), dtype=float)
    return bool(np.all(mid_values <= 0.5 * (values[i] + values[j]) + eps))


def is_midpoint_concave(
    h: Callable[[np.ndarray], np.ndarray],
    points: np.ndarray,
    eps: Optional[float] = None,
) -> bool:
    return is_midpoint_convex(lambda t: -np.asarray(h(t)), points, eps)


@dataclass(frozen=True)
class FuncProfile:
    """
    Hypothesis data of one function on one interval.

    Fields are computed on first access. Derivative-dependent fields are None
    when f has no derivative in the node set (sgn); the reason is recorded in
    ``unavailable``.
    """

    f: Expr
    iv: Interval
    tol: float
    unavailable: Dict[str, str] = field(default_factory=dict, compare=False, hash=False)

    @cached_property
    def derivative(self) -> Optional[Expr]:
        # f is not absolutely continuous across a jump, so f' carries no bound data
        if self.has_jumps:
            self.unavailable["derivative"] = "function has jumps"
            return None
        try:
            return differentiate(self.f)
        except NotDifferentiableError as exc:
            self.unavailable["derivative"] = str(exc)
            logger.debug(f"profile: no derivative for {self.f.to_text()}: {exc}")
            return None

    def _guarded(self, name: str, compute: Callable[[], float]):
        try:
            return compute()
        except ChebyError as exc:
            self.unavailable[name] = str(exc)
            logger.warning(f"profile: {name} unavailable for {self.f.to_text()} on {self.iv}: {exc}")
            return None

    @cached_property
    def value_a(self) -> Optional[float]:
        return self._guarded("value_a", lambda: self.f.side_value(self.iv.a, 1))

    @cached_property
    def value_b(self) -> Optional[float]:
        return self._guarded("value_b", lambda: self.f.side_value(self.iv.b, -1))

    @cached_property
    def endpoint_deriv_a(self) -> Optional[float]:
        d = self.derivative
        if d is None:
            self.unavailable["endpoint_deriv_a"] = "no derivative"
            return None
        return self._guarded("endpoint_deriv_a", lambda: d.side_value(self.iv.a, 1))

    @cached_property
    def endpoint_deriv_b(self) -> Optional[float]:
        d = self.derivative
        if d is None:
            self.unavailable["endpoint_deriv_b"] = "no derivative"
            return None
        return self._guarded("endpoint_deriv_b", lambda: d.side_value(self.iv.b, -1))

    @cached_property
    def sup_norm_deriv(self) -> Optional[float]:
        d = self.derivative
        if d is None:
            self.unavailable["sup_norm_deriv"] = "no derivative"
            return None
        return self._guarded("sup_norm_deriv", lambda: sup_norm(d, self.iv))

    @cached_property
    def l1_norm_deriv(self) -> Optional[float]:
        return self.lp_norm_deriv(1.0)

    def lp_norm_deriv(self, p: float) -> Optional[float]:
        """‖f'‖_p, or None when f' is unavailable."""
        if math.isinf(p):
            return self.sup_norm_deriv
        d = self.derivative
        if d is None:
            self.unavailable[f"lp_norm_deriv({p:g})"] = "no derivative"
            return None
        return self._guarded(f"lp_norm_deriv({p:g})", lambda: lp_norm(d, self.iv, p, self.tol))

    @cached_property
    def jumps(self) -> List[float]:
        return self._guarded("jumps", lambda: jump_heights(self.f, self.iv)) or []

    @cached_property
    def has_jumps(self) -> bool:
        scale = max(1.0, abs(self.value_a or 0.0), abs(self.value_b or 0.0))
        return any(abs(j) > 1e-9 * scale for j in self.jumps)

    @cached_property
    def total_variation(self) -> Optional[float]:
        return self._guarded("total_variation", lambda: total_variation(self.f, self.iv, self.tol))

    @cached_property
    def lipschitz(self) -> Optional[float]:
        if self.has_jumps:
            self.unavailable["lipschitz"] = "function has jumps"
            return None
        return self.sup_norm_deriv

    @cached_property
    def sup_norm(self) -> Optional[float]:
        return self._guarded("sup_norm", lambda: sup_norm(self.f, self.iv))

    @cached_property
    def _points(self) -> np.ndarray:
        return _test_points(self.f, self.iv, int(get_setting("profile.convexity_mesh_points", 65)))

    @cached_property
    def deriv_abs_convex(self) -> Optional[bool]:
        d = self.derivative
        if d is None:
            self.unavailable["deriv_abs_convex"] = "no derivative"
            return None
        points = np.union1d(self._points, breakpoints(d, self.iv))
        return self._guarded("deriv_abs_convex", lambda: is_midpoint_convex(lambda t: np.abs(d.evaluate(t)), points))

    @cached_property
    def convex(self) -> Optional[bool]:
        return self._guarded("convex", lambda: is_midpoint_convex(self.f.evaluate, self._points))

    @cached_property
    def concave(self) -> Optional[bool]:
        return self._guarded("concave", lambda: is_midpoint_concave(self.f.evaluate, self._points))

    @cached_property
    def monotone(self) -> Optional[Monotonicity]:
        def decide() -> Monotonicity:
            n_mesh = int(get_setting("profile.monotone_mesh_points", 1025))
            eps = float(get_setting("profile.convexity_eps", 1e-9))
            slope = differentiate(self.f, allow_steps=True)
            # interior only: sqrt-type slopes are unbounded at an endpoint
            points = _test_points(self.f, self.iv, n_mesh)
            interior = points[(points > self.iv.a) & (points < self.iv.b)]
            signs = np.concatenate([slope.evaluate(interior), self.jumps])
            if np.all(signs >= -eps):
                return Monotonicity.INCREASING
            if np.all(signs <= eps):
                return Monotonicity.DECREASING
            return Monotonicity.NONE

        return self._guarded("monotone", decide)

    def to_dict(self) -> Dict[str, object]:
        """Materialise every field (used by reports)."""
        data = {
            "f": self.f.to_text(),
            "interval": [self.iv.a, self.iv.b],
            "value_a": self.value_a,
            "value_b": self.value_b,
            "endpoint_deriv_a": self.endpoint_deriv_a,
            "endpoint_deriv_b": self.endpoint_deriv_b,
            "sup_norm_deriv": self.sup_norm_deriv,
            "l1_norm_deriv": self.l1_norm_deriv,
            "total_variation": self.total_variation,
            "lipschitz": self.lipschitz,
            "deriv_abs_convex": self.deriv_abs_convex,
            "convex": self.convex,
            "concave": self.concave,
            "monotone": self.monotone.value if self.monotone else None,
            "has_jumps": self.has_jumps,
        }
        data["unavailable"] = dict(self.unavailable)
        return data


@lru_cache(maxsize=4096)
def _cached_profile(f: Expr, iv: Interval, tol: float) -> FuncProfile:
    return FuncProfile(f, iv, tol)


def profile(f: Expr, iv: Interval, tol: Optional[float] = None) -> FuncProfile:
    """
    Hypothesis profile of f on iv (cached per (f, iv, tol)).

    Never raises: fields that cannot be computed come back as None and are
    listed in ``profile.unavailable``.
    """
    return _cached_profile(f, iv, tol or get_tolerance())

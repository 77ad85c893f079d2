"""
Random function families whose hypotheses hold by construction.

Every member is built on the unit variable u = (x-a)/(b-a) from atoms with
sign-constrained coefficients, so membership never depends on a numerical
test:

- convex-positive-deriv: f' = c0 + c1·u + Σ cᵢ·(u-tᵢ)₊^pᵢ with all c >= 0,
  so f' is convex and nonnegative and |f'| = f' is convex
- convex-piecewise-linear: d0 + c0·u + Σ cᵢ·(u-tᵢ)₊ with cᵢ >= 0
- smooth-general: signed polynomial plus one sine term
- step-function: piecewise constant with k jumps
- concave: the negative of a convex-positive-deriv member, optionally mirrored
- linear: c0 + c1·u
- symmetric-convex: φ(u) + φ(1-u) for convex φ (zero first moment)
"""

import logging
from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from core.expr import (
    ONE,
    ZERO,
    X,
    Const,
    Expr,
    Interval,
    add,
    affine_map,
    compose,
    mul,
    neg,
    positive_part,
    power,
    step_function,
    sub,
    unary,
)

logger = logging.getLogger(__name__)

UNIT = Interval(0.0, 1.0)

# Knots stay away from the endpoints so every atom is active on the interval
_KNOT_RANGE = (0.05, 0.95)
_MIN_KNOT_GAP = 0.02


class Family(str, Enum):
    CONVEX_POSITIVE_DERIV = "convex-positive-deriv"
    CONVEX_PIECEWISE_LINEAR = "convex-piecewise-linear"
    SMOOTH_GENERAL = "smooth-general"
    STEP_FUNCTION = "step-function"
    CONCAVE = "concave"
    LINEAR = "linear"
    SYMMETRIC_CONVEX = "symmetric-convex"


@dataclass(frozen=True)
class FamilySpec:
    """
    Which family to draw from and how.

    Attributes:
        family: Family tag
        degree: Number of atoms (convex families), polynomial degree
            (smooth-general) or number of jumps (step-function)
        coefficient_range: (lo, hi) for coefficient draws; signed families
            draw from [-max|lo|,|hi|, +max|lo|,|hi|]
        seed: 64-bit seed; generate() is deterministic per seed
    """

    family: Family
    degree: int = 3
    coefficient_range: Tuple[float, float] = (0.0, 3.0)
    seed: int = 0


@dataclass(frozen=True)
class FamilyParams:
    """Concrete parameters of one family member (what the tightness search perturbs)."""

    family: Family
    coefficients: Tuple[float, ...]
    knots: Tuple[float, ...] = ()
    powers: Tuple[int, ...] = ()
    mirrored: bool = False


def _signed_bound(spec: FamilySpec) -> float:
    lo, hi = spec.coefficient_range
    return max(abs(lo), abs(hi))


def _nonneg_draw(rng: np.random.Generator, spec: FamilySpec, size: int) -> np.ndarray:
    lo, hi = spec.coefficient_range
    return np.abs(rng.uniform(lo, hi, size)) if hi > lo else np.full(size, abs(lo))


def _signed_draw(rng: np.random.Generator, spec: FamilySpec, size: int) -> np.ndarray:
    bound = _signed_bound(spec)
    return rng.uniform(-bound, bound, size) if bound > 0 else np.zeros(size)


def _knots(rng: np.random.Generator, count: int) -> Tuple[float, ...]:
    return tuple(float(t) for t in rng.uniform(*_KNOT_RANGE, count))


def _separated_knots(rng: np.random.Generator, count: int) -> Tuple[float, ...]:
    for _ in range(100):
        knots = np.sort(rng.uniform(*_KNOT_RANGE, count))
        if count < 2 or np.min(np.diff(knots)) > _MIN_KNOT_GAP:
            return tuple(float(t) for t in knots)
    return tuple(float(t) for t in np.linspace(0.2, 0.8, count))


def sample(spec: FamilySpec, rng: Optional[np.random.Generator] = None) -> FamilyParams:
    """Draw member parameters for spec (rng defaults to default_rng(spec.seed))."""
    rng = rng if rng is not None else np.random.default_rng(spec.seed)
    k = max(int(spec.degree), 0)
    family = spec.family
    if family in (Family.CONVEX_POSITIVE_DERIV, Family.CONCAVE, Family.SYMMETRIC_CONVEX):
        d0 = _signed_draw(rng, spec, 1)
        slopes = _nonneg_draw(rng, spec, 2 + k)
        return FamilyParams(
            family,
            tuple(float(c) for c in np.concatenate([d0, slopes])),
            knots=_knots(rng, k),
            powers=tuple(int(p) for p in rng.choice([1, 2], k)),
            mirrored=bool(rng.integers(2)) if family == Family.CONCAVE else False,
        )
    if family == Family.CONVEX_PIECEWISE_LINEAR:
        head = _signed_draw(rng, spec, 2)
        ramps = _nonneg_draw(rng, spec, k)
        return FamilyParams(
            family, tuple(float(c) for c in np.concatenate([head, ramps])), knots=_knots(rng, k)
        )
    if family == Family.SMOOTH_GENERAL:
        poly = _signed_draw(rng, spec, k + 1)
        amplitude = _signed_draw(rng, spec, 1)
        frequency = rng.uniform(1.0, 6.0, 1)
        phase = rng.uniform(0.0, 2 * np.pi, 1)
        return FamilyParams(
            family, tuple(float(c) for c in np.concatenate([poly, amplitude, frequency, phase]))
        )
    if family == Family.STEP_FUNCTION:
        levels = _signed_draw(rng, spec, k + 1)
        return FamilyParams(family, tuple(float(c) for c in levels), knots=_separated_knots(rng, k))
    return FamilyParams(family, tuple(float(c) for c in _signed_draw(rng, spec, 2)))


def anchor(spec: FamilySpec) -> FamilyParams:
    """
    Low-complexity member used as the first start of a tightness search.

    The convex, smooth and linear anchors are f = u; the step anchor is a
    single jump of height 2 at the midpoint.
    A zero coefficient range gives the zero member.
    """
    params = _anchor(spec)
    if _signed_bound(spec) == 0:
        return replace(params, coefficients=(0.0,) * len(params.coefficients))
    return params


def _anchor(spec: FamilySpec) -> FamilyParams:
    k = max(int(spec.degree), 0)
    family = spec.family
    if family in (Family.CONVEX_POSITIVE_DERIV, Family.CONCAVE, Family.SYMMETRIC_CONVEX):
        return FamilyParams(
            family,
            (0.0, 1.0, 0.0) + (0.0,) * k,
            knots=tuple(float(t) for t in np.linspace(0.25, 0.75, k)),
            powers=(2,) * k,
        )
    if family == Family.CONVEX_PIECEWISE_LINEAR:
        return FamilyParams(family, (0.0, 1.0) + (0.0,) * k, knots=tuple(float(t) for t in np.linspace(0.25, 0.75, k)))
    if family == Family.SMOOTH_GENERAL:
        return FamilyParams(family, (0.0, 1.0) + (0.0,) * max(k - 1, 0) + (0.0, 1.0, 0.0))
    if family == Family.STEP_FUNCTION:
        jumps = max(k, 1)
        knots = tuple(0.5 + 0.4 * j / jumps for j in range(jumps))
        return FamilyParams(family, (-1.0,) + (1.0,) * jumps, knots=knots)
    return FamilyParams(family, (0.0, 1.0))


def _nonneg_indices(params: FamilyParams) -> range:
    if params.family in (Family.CONVEX_POSITIVE_DERIV, Family.CONCAVE, Family.SYMMETRIC_CONVEX):
        return range(1, len(params.coefficients))
    if params.family == Family.CONVEX_PIECEWISE_LINEAR:
        return range(2, len(params.coefficients))
    return range(0)


def perturb(params: FamilyParams, rng: np.random.Generator, sigma: float) -> FamilyParams:
    """Gaussian step on coefficients and knots, projected back into the family."""
    coefficients = np.array(params.coefficients) + rng.normal(0.0, sigma, len(params.coefficients))
    for i in _nonneg_indices(params):
        coefficients[i] = max(coefficients[i], 0.0)
    if params.family == Family.SMOOTH_GENERAL:
        # frequency stays positive
        coefficients[-2] = max(coefficients[-2], 0.1)
    knots = params.knots
    if knots:
        moved = np.clip(np.array(knots) + rng.normal(0.0, 0.1 * sigma, len(knots)), 0.01, 0.99)
        if params.family == Family.STEP_FUNCTION:
            moved = np.sort(moved)
            if len(moved) > 1 and np.min(np.diff(moved)) <= _MIN_KNOT_GAP:
                moved = np.array(knots)
        knots = tuple(float(t) for t in moved)
    return replace(params, coefficients=tuple(float(c) for c in coefficients), knots=knots)


def _convex_positive_deriv(params: FamilyParams, u: Expr) -> Expr:
    d0, c0, c1, *weights = params.coefficients
    f = add(add(Const(d0), mul(Const(c0), u)), mul(Const(c1 / 2), power(u, 2)))
    # f'' = c1 + Σ w·p·(u-t)₊^(p-1) >= 0 and f' >= c0 >= 0
    for weight, knot, p in zip(weights, params.knots, params.powers):
        if weight == 0:
            continue
        atom = mul(Const(weight / (p + 1)), power(positive_part(sub(u, Const(knot))), p + 1))
        f = add(f, atom)
    return f


def _unit_member(params: FamilyParams) -> Expr:
    """Member as an expression in x on [0, 1]."""
    u = X
    family = params.family
    if family == Family.CONVEX_POSITIVE_DERIV:
        return _convex_positive_deriv(params, u)
    if family == Family.CONCAVE:
        inner = sub(ONE, u) if params.mirrored else u
        return neg(_convex_positive_deriv(params, inner))
    if family == Family.SYMMETRIC_CONVEX:
        return add(_convex_positive_deriv(params, u), _convex_positive_deriv(params, sub(ONE, u)))
    if family == Family.CONVEX_PIECEWISE_LINEAR:
        d0, c0, *ramps = params.coefficients
        f = add(Const(d0), mul(Const(c0), u))
        for weight, knot in zip(ramps, params.knots):
            if weight:
                f = add(f, mul(Const(weight), positive_part(sub(u, Const(knot)))))
        return f
    if family == Family.SMOOTH_GENERAL:
        *poly, amplitude, frequency, phase = params.coefficients
        f: Expr = ZERO
        for k, c in enumerate(poly):
            if c:
                f = add(f, mul(Const(c), power(u, k)))
        if amplitude:
            f = add(f, mul(Const(amplitude), unary("sin", add(mul(Const(frequency), u), Const(phase)))))
        return f
    if family == Family.LINEAR:
        c0, c1 = params.coefficients
        return add(Const(c0), mul(Const(c1), u))
    raise ValueError(f"no unit builder for {family}")


def build(params: FamilyParams, iv: Interval = UNIT) -> Expr:
    """
    Expression of the member on iv.

    Smooth members are built on [0,1] and precomposed with the affine map
    iv -> [0,1]; step members place their jumps on iv directly so the
    piecewise guards match iv exactly.
    """
    if params.family == Family.STEP_FUNCTION:
        jumps = [iv.a + iv.length * t for t in sorted(params.knots)]
        return step_function(jumps, params.coefficients, iv)
    member = _unit_member(params)
    if iv == UNIT:
        return member
    return compose(member, affine_map(UNIT, iv))


def generate(spec: FamilySpec, iv: Interval = UNIT) -> Expr:
    """Deterministic member of spec.family for spec.seed, expressed on iv."""
    params = sample(spec)
    logger.debug(f"generate {spec.family.value} seed={spec.seed}: {params.coefficients}")
    return build(params, iv)


def random_interval(rng: np.random.Generator, offset_range: Tuple[float, float], length_range: Tuple[float, float]) -> Interval:
    a = float(rng.uniform(*offset_range))
    return Interval(a, a + float(rng.uniform(*length_range)))


def step_scale(spec: FamilySpec) -> float:
    """Perturbation scale relative to the default coefficient range [0, 3]."""
    return _signed_bound(spec) / 3.0

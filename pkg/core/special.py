"""Log-gamma and Euler Beta via the Lanczos approximation (g=7, n=9)."""

import math

from core.expr import ArgumentError

LANCZOS_G = 7
LANCZOS_COEFFICIENTS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_LOG_SQRT_TWO_PI = 0.5 * math.log(2.0 * math.pi)


def log_gamma(z: float) -> float:
    """
    ln Γ(z) for real z > 0.

    Raises:
        ArgumentError: z is not a positive finite number
    """
    if not (math.isfinite(z) and z > 0):
        raise ArgumentError(f"log_gamma requires z > 0, got {z}")
    if z < 0.5:
        # reflection: Γ(z)Γ(1-z) = π / sin(πz)
        return math.log(math.pi / math.sin(math.pi * z)) - log_gamma(1.0 - z)
    z -= 1.0
    series = LANCZOS_COEFFICIENTS[0]
    for i, coefficient in enumerate(LANCZOS_COEFFICIENTS[1:], start=1):
        series += coefficient / (z + i)
    t = z + LANCZOS_G + 0.5
    return _LOG_SQRT_TWO_PI + (z + 0.5) * math.log(t) - t + math.log(series)


def gamma_function(z: float) -> float:
    return math.exp(log_gamma(z))


def beta_function(p: float, q: float) -> float:
    """
    Euler Beta B(p, q) = Γ(p)Γ(q)/Γ(p+q), computed in log space.

    Args:
        p: First argument, > 0
        q: Second argument, > 0

    Raises:
        ArgumentError: Either argument is non-positive
    """
    if not (p > 0 and q > 0):
        raise ArgumentError(f"beta_function requires positive arguments, got ({p}, {q})")
    return math.exp(log_gamma(p) + log_gamma(q) - log_gamma(p + q))


def log_beta(p: float, q: float) -> float:
    if not (p > 0 and q > 0):
        raise ArgumentError(f"log_beta requires positive arguments, got ({p}, {q})")
    return log_gamma(p) + log_gamma(q) - log_gamma(p + q)

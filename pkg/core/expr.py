"""
Expression trees for real functions of one variable.

Nodes are immutable frozen dataclasses, so an Expr can be hashed, cached and
shared between threads or worker processes without coordination.

Features:
- Vectorised evaluation over numpy arrays (scalars come back as float)
- Symbolic differentiation by structural rules, closed over the node set
- Breakpoint discovery (kinks and jumps) so quadrature never straddles one
- One-sided limits for exact jump heights at breakpoints
- Affine composition, used to rescale [0,1] families onto any [a,b]
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import brentq

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

UNARY_OPS = ("neg", "abs", "exp", "ln", "sin", "cos", "sqrt", "sgn")
BINARY_OPS = ("add", "sub", "mul", "div", "pow")

# Root scan density used when an argument of abs/sgn is not affine
ROOT_SCAN_POINTS = 1025


class ChebyError(Exception):
    """Base class for every error raised by the toolkit."""


class ArgumentError(ChebyError):
    """Raised when an operation receives arguments outside its contract."""


class ExprSyntaxError(ChebyError):
    """Raised when function text does not conform to the grammar."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnknownIdentifierError(ExprSyntaxError):
    """Raised for identifiers that are neither x, a constant nor a function."""


class PiecewiseGuardError(ChebyError):
    """Raised when piecewise guards leave gaps or are malformed."""


class OverlappingPiecesError(PiecewiseGuardError):
    """Raised when two piecewise guards share more than an endpoint."""


class DomainError(ChebyError):
    """Raised when evaluation leaves the domain of a node."""


class NotDifferentiableError(ChebyError):
    """Raised when a node has no derivative in the supported node set."""


@dataclass(frozen=True)
class Interval:
    """Closed interval [a, b] with a < b."""

    a: float
    b: float

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise ArgumentError(f"Interval endpoints must be finite, got [{self.a}, {self.b}]")
        if not self.a < self.b:
            raise ArgumentError(f"Interval requires a < b, got [{self.a}, {self.b}]")

    @property
    def length(self) -> float:
        return self.b - self.a

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.a + self.b)

    def contains(self, other: "Interval") -> bool:
        return self.a <= other.a and other.b <= self.b

    def __str__(self) -> str:
        return f"[{self.a:g}, {self.b:g}]"


def _as_points(t: ArrayLike) -> Tuple[np.ndarray, bool]:
    scalar = np.ndim(t) == 0
    return np.atleast_1d(np.asarray(t, dtype=float)), scalar


def _first_bad(x: np.ndarray, mask: np.ndarray) -> float:
    return float(x[np.argmax(mask)])


class Expr:
    """Base class of all expression nodes."""

    def evaluate(self, t: ArrayLike) -> ArrayLike:
        """
        Evaluate the expression at one point or an array of points.

        Args:
            t: Scalar or numpy array of evaluation points

        Returns:
            float for scalar input, numpy array otherwise

        Raises:
            DomainError: ln/sqrt of an invalid value, division by zero,
                or a point outside every piecewise guard
        """
        x, scalar = _as_points(t)
        with np.errstate(over="ignore", invalid="ignore"):
            out = self._eval(x)
        return float(out[0]) if scalar else out

    def side_value(self, t: float, side: int) -> float:
        """One-sided limit at t from the right (side=+1) or the left (side=-1)."""
        return float(self._side(float(t), 1 if side >= 0 else -1))

    # Subclasses implement these
    def _eval(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _side(self, t: float, side: int) -> float:
        return float(self._eval(np.array([t]))[0])

    def derivative(self, allow_steps: bool = False) -> "Expr":
        raise NotImplementedError

    def kinks(self, iv: Interval) -> List[float]:
        raise NotImplementedError

    def substitute(self, inner: "Expr") -> "Expr":
        raise NotImplementedError

    def to_text(self) -> str:
        raise NotImplementedError

    def is_constant(self) -> bool:
        return False

    def __str__(self) -> str:
        return self.to_text()

    # Builders used by the families and by the differentiation rules
    def __add__(self, other):
        return add(self, as_expr(other))

    def __radd__(self, other):
        return add(as_expr(other), self)

    def __sub__(self, other):
        return sub(self, as_expr(other))

    def __rsub__(self, other):
        return sub(as_expr(other), self)

    def __mul__(self, other):
        return mul(self, as_expr(other))

    def __rmul__(self, other):
        return mul(as_expr(other), self)

    def __truediv__(self, other):
        return div(self, as_expr(other))

    def __rtruediv__(self, other):
        return div(as_expr(other), self)

    def __neg__(self):
        return neg(self)

    def __pow__(self, exponent):
        return power(self, float(exponent))


@dataclass(frozen=True, eq=True)
class Const(Expr):
    value: float

    def _eval(self, x):
        return np.full(x.shape, self.value, dtype=float)

    def _side(self, t, side):
        return self.value

    def derivative(self, allow_steps=False):
        return ZERO

    def kinks(self, iv):
        return []

    def substitute(self, inner):
        return self

    def is_constant(self):
        return True

    def to_text(self):
        if self.value == math.pi:
            return "pi"
        text = repr(float(self.value))
        if text.endswith(".0"):
            text = text[:-2]
        return f"({text})" if self.value < 0 else text


@dataclass(frozen=True, eq=True)
class Var(Expr):
    def _eval(self, x):
        return x

    def _side(self, t, side):
        return t

    def derivative(self, allow_steps=False):
        return ONE

    def kinks(self, iv):
        return []

    def substitute(self, inner):
        return inner

    def to_text(self):
        return "x"


ZERO = Const(0.0)
ONE = Const(1.0)
X = Var()


@dataclass(frozen=True, eq=True)
class Unary(Expr):
    op: str
    arg: Expr

    def __post_init__(self):
        if self.op not in UNARY_OPS:
            raise ArgumentError(f"Unknown unary operator '{self.op}'")

    def _apply(self, v: np.ndarray, x: np.ndarray) -> np.ndarray:
        op = self.op
        if op == "neg":
            return -v
        if op == "abs":
            return np.abs(v)
        if op == "exp":
            return np.exp(v)
        if op == "ln":
            bad = v <= 0
            if np.any(bad):
                raise DomainError(f"ln of non-positive value at t={_first_bad(x, bad):.17g}")
            return np.log(v)
        if op == "sin":
            return np.sin(v)
        if op == "cos":
            return np.cos(v)
        if op == "sqrt":
            bad = v < 0
            if np.any(bad):
                raise DomainError(f"sqrt of negative value at t={_first_bad(x, bad):.17g}")
            return np.sqrt(v)
        return np.sign(v)

    def _eval(self, x):
        return self._apply(self.arg._eval(x), x)

    def _side(self, t, side):
        inner = self.arg._side(t, side)
        if self.op == "sgn" and abs(inner) <= 1e-9:
            # sign of the argument just beside t decides the one-sided limit
            step = 1e-9 * max(1.0, abs(t))
            inner = self.arg._side(t + side * step, side)
        return float(self._apply(np.array([inner]), np.array([t]))[0])

    def derivative(self, allow_steps=False):
        u = self.arg
        du = u.derivative(allow_steps)
        op = self.op
        if op == "neg":
            return neg(du)
        if op == "abs":
            return mul(unary("sgn", u), du)
        if op == "exp":
            return mul(self, du)
        if op == "ln":
            return div(du, u)
        if op == "sin":
            return mul(unary("cos", u), du)
        if op == "cos":
            return neg(mul(unary("sin", u), du))
        if op == "sqrt":
            return div(du, mul(Const(2.0), self))
        # sgn: piecewise constant, derivative vanishes almost everywhere
        if allow_steps:
            return ZERO
        raise NotDifferentiableError(
            f"sgn({u.to_text()}) is a step function; differentiate it as a piecewise constant"
        )

    def kinks(self, iv):
        points = list(self.arg.kinks(iv))
        if self.op in ("abs", "sgn", "sqrt", "ln"):
            points.extend(roots_in(self.arg, iv))
        return points

    def substitute(self, inner):
        return unary(self.op, self.arg.substitute(inner))

    def is_constant(self):
        return self.arg.is_constant()

    def to_text(self):
        if self.op == "neg":
            return f"(-{self.arg.to_text()})"
        return f"{self.op}({self.arg.to_text()})"


@dataclass(frozen=True, eq=True)
class Binary(Expr):
    op: str
    left: Expr
    right: Expr

    def __post_init__(self):
        if self.op not in BINARY_OPS:
            raise ArgumentError(f"Unknown binary operator '{self.op}'")
        if self.op == "pow" and not isinstance(self.right, Const):
            raise ArgumentError("'^' requires a constant exponent; use exp(b*ln(a))")

    def _combine(self, lv: np.ndarray, rv: np.ndarray, x: np.ndarray) -> np.ndarray:
        op = self.op
        if op == "add":
            return lv + rv
        if op == "sub":
            return lv - rv
        if op == "mul":
            return lv * rv
        if op == "div":
            bad = rv == 0
            if np.any(bad):
                raise DomainError(f"division by zero at t={_first_bad(x, bad):.17g}")
            return lv / rv
        p = self.right.value
        if float(p).is_integer():
            if p < 0:
                bad = lv == 0
                if np.any(bad):
                    raise DomainError(f"zero raised to negative power at t={_first_bad(x, bad):.17g}")
            return np.power(lv, p)
        bad = lv < 0 if p > 0 else lv <= 0
        if np.any(bad):
            raise DomainError(f"fractional power of invalid base at t={_first_bad(x, bad):.17g}")
        return np.power(lv, p)

    def _eval(self, x):
        return self._combine(self.left._eval(x), self.right._eval(x), x)

    def _side(self, t, side):
        lv = np.array([self.left._side(t, side)])
        rv = np.array([self.right._side(t, side)])
        return float(self._combine(lv, rv, np.array([t]))[0])

    def derivative(self, allow_steps=False):
        u, v = self.left, self.right
        op = self.op
        if op == "pow":
            p = v.value
            if p == 0:
                return ZERO
            du = u.derivative(allow_steps)
            if p == 1:
                return du
            return mul(mul(Const(p), power(u, p - 1)), du)
        du = u.derivative(allow_steps)
        dv = v.derivative(allow_steps)
        if op == "add":
            return add(du, dv)
        if op == "sub":
            return sub(du, dv)
        if op == "mul":
            return add(mul(du, v), mul(u, dv))
        return div(sub(mul(du, v), mul(u, dv)), power(v, 2.0))

    def kinks(self, iv):
        points = list(self.left.kinks(iv)) + list(self.right.kinks(iv))
        if self.op == "div":
            points.extend(roots_in(self.right, iv))
        elif self.op == "pow" and not (self.right.value >= 0 and float(self.right.value).is_integer()):
            points.extend(roots_in(self.left, iv))
        return points

    def substitute(self, inner):
        if self.op == "pow":
            return power(self.left.substitute(inner), self.right.value)
        return binary(self.op, self.left.substitute(inner), self.right.substitute(inner))

    def is_constant(self):
        return self.left.is_constant() and self.right.is_constant()

    def to_text(self):
        symbol = {"add": "+", "sub": "-", "mul": "*", "div": "/", "pow": "^"}[self.op]
        return f"({self.left.to_text()}{symbol}{self.right.to_text()})"


@dataclass(frozen=True, eq=True)
class Piecewise(Expr):
    """Piecewise expression; guards are sorted, contiguous and non-overlapping."""

    pieces: Tuple[Tuple[Interval, Expr], ...]

    def __post_init__(self):
        if not self.pieces:
            raise PiecewiseGuardError("piecewise needs at least one piece")
        ordered = tuple(sorted(self.pieces, key=lambda piece: (piece[0].a, piece[0].b)))
        for (left, _), (right, _) in zip(ordered, ordered[1:]):
            if right.a < left.b:
                raise OverlappingPiecesError(f"piecewise guards {left} and {right} overlap")
            if right.a > left.b:
                raise PiecewiseGuardError(f"piecewise guards leave a gap between {left} and {right}")
        object.__setattr__(self, "pieces", ordered)

    @property
    def domain(self) -> Interval:
        return Interval(self.pieces[0][0].a, self.pieces[-1][0].b)

    def _eval(self, x):
        out = np.empty_like(x)
        remaining = np.ones(x.shape, dtype=bool)
        for guard, piece in self.pieces:
            mask = remaining & (x >= guard.a) & (x <= guard.b)
            if np.any(mask):
                out[mask] = piece._eval(x[mask])
                remaining &= ~mask
        if np.any(remaining):
            raise DomainError(
                f"t={_first_bad(x, remaining):.17g} lies outside piecewise domain {self.domain}"
            )
        return out

    def _side(self, t, side):
        for guard, piece in self.pieces:
            inside = guard.a < t <= guard.b if side < 0 else guard.a <= t < guard.b
            if inside:
                return piece._side(t, side)
        # t sits on the outer edge of the domain: use the bordering piece
        guard, piece = self.pieces[0] if t <= self.pieces[0][0].a else self.pieces[-1]
        if guard.a <= t <= guard.b:
            return piece._side(t, side)
        raise DomainError(f"t={t:.17g} lies outside piecewise domain {self.domain}")

    def derivative(self, allow_steps=False):
        return Piecewise(tuple((guard, piece.derivative(allow_steps)) for guard, piece in self.pieces))

    def kinks(self, iv):
        points = [guard.b for guard, _ in self.pieces[:-1]]
        for guard, piece in self.pieces:
            lo, hi = max(guard.a, iv.a), min(guard.b, iv.b)
            if lo < hi:
                points.extend(piece.kinks(Interval(lo, hi)))
        return points

    def substitute(self, inner):
        slope, intercept = affine_coefficients(inner) or (None, None)
        if slope is None or slope == 0:
            raise ArgumentError("piecewise expressions compose only with non-constant affine maps")
        pulled = []
        for guard, piece in self.pieces:
            lo = (guard.a - intercept) / slope
            hi = (guard.b - intercept) / slope
            pulled.append((Interval(min(lo, hi), max(lo, hi)), piece.substitute(inner)))
        return Piecewise(tuple(pulled))

    def is_constant(self):
        return len(self.pieces) == 1 and self.pieces[0][1].is_constant()

    def to_text(self):
        body = "; ".join(
            f"[{Const(g.a).to_text()},{Const(g.b).to_text()}]: {p.to_text()}" for g, p in self.pieces
        )
        return f"piecewise{{{body}}}"


# --- constructors with light constant folding -------------------------------


def as_expr(value: Union[Expr, float, int]) -> Expr:
    return value if isinstance(value, Expr) else Const(float(value))


def _const(e: Expr) -> Optional[float]:
    return e.value if isinstance(e, Const) else None


def neg(u: Expr) -> Expr:
    c = _const(u)
    if c is not None:
        return Const(-c)
    if isinstance(u, Unary) and u.op == "neg":
        return u.arg
    return Unary("neg", u)


def unary(op: str, u: Expr) -> Expr:
    if op == "neg":
        return neg(u)
    c = _const(u)
    if c is not None and op != "sgn":
        return Const(float(Unary(op, u).evaluate(0.0)))
    return Unary(op, u)


def add(u: Expr, v: Expr) -> Expr:
    cu, cv = _const(u), _const(v)
    if cu is not None and cv is not None:
        return Const(cu + cv)
    if cu == 0:
        return v
    if cv == 0:
        return u
    return Binary("add", u, v)


def sub(u: Expr, v: Expr) -> Expr:
    cu, cv = _const(u), _const(v)
    if cu is not None and cv is not None:
        return Const(cu - cv)
    if cv == 0:
        return u
    if cu == 0:
        return neg(v)
    return Binary("sub", u, v)


def mul(u: Expr, v: Expr) -> Expr:
    cu, cv = _const(u), _const(v)
    if cu is not None and cv is not None:
        return Const(cu * cv)
    if cu == 0 or cv == 0:
        return ZERO
    if cu == 1:
        return v
    if cv == 1:
        return u
    return Binary("mul", u, v)


def div(u: Expr, v: Expr) -> Expr:
    cu, cv = _const(u), _const(v)
    if cv == 0:
        raise DomainError("division by the constant zero")
    if cu is not None and cv is not None:
        return Const(cu / cv)
    if cu == 0:
        return ZERO
    if cv == 1:
        return u
    return Binary("div", u, v)


def power(u: Expr, p: float) -> Expr:
    if p == 0:
        return ONE
    if p == 1:
        return u
    c = _const(u)
    if c is not None:
        return Const(float(Binary("pow", u, Const(p)).evaluate(0.0)))
    return Binary("pow", u, Const(float(p)))


def binary(op: str, u: Expr, v: Expr) -> Expr:
    return {"add": add, "sub": sub, "mul": mul, "div": div}[op](u, v)


def positive_part(u: Expr) -> Expr:
    """(u + |u|) / 2, i.e. max(u, 0), written with nodes of the grammar."""
    return mul(Const(0.5), add(u, Unary("abs", u)))


# --- analysis helpers --------------------------------------------------------


def affine_coefficients(e: Expr) -> Optional[Tuple[float, float]]:
    """Return (slope, intercept) when e is affine in x, else None."""
    if isinstance(e, Const):
        return 0.0, e.value
    if isinstance(e, Var):
        return 1.0, 0.0
    if isinstance(e, Unary) and e.op == "neg":
        inner = affine_coefficients(e.arg)
        return None if inner is None else (-inner[0], -inner[1])
    if isinstance(e, Binary):
        left = affine_coefficients(e.left)
        right = affine_coefficients(e.right) if e.op != "pow" else None
        if e.op == "pow":
            if left is not None and e.right.value == 1:
                return left
            return None
        if left is None or right is None:
            return None
        if e.op == "add":
            return left[0] + right[0], left[1] + right[1]
        if e.op == "sub":
            return left[0] - right[0], left[1] - right[1]
        if e.op == "mul":
            if left[0] == 0:
                return left[1] * right[0], left[1] * right[1]
            if right[0] == 0:
                return right[1] * left[0], right[1] * left[1]
            return None
        if e.op == "div" and right[0] == 0 and right[1] != 0:
            return left[0] / right[1], left[1] / right[1]
    return None


def roots_in(e: Expr, iv: Interval) -> List[float]:
    """
    Zeros of e strictly inside iv.

    Affine arguments are solved exactly; anything else is scanned for sign
    changes on a mesh and refined with Brent's method.
    """
    coeffs = affine_coefficients(e)
    if coeffs is not None:
        slope, intercept = coeffs
        if slope == 0:
            return []
        root = -intercept / slope
        return [root] if iv.a < root < iv.b else []

    mesh = np.linspace(iv.a, iv.b, ROOT_SCAN_POINTS)
    try:
        values = e.evaluate(mesh)
    except DomainError:
        logger.debug(f"root scan of {e.to_text()} hit a domain error on {iv}")
        return []
    roots: List[float] = []
    signs = np.sign(values)
    # zeros hit exactly on the mesh count only where the sign flips across them
    exact = np.nonzero((values[1:-1] == 0) & (signs[:-2] * signs[2:] < 0))[0] + 1
    roots.extend(float(mesh[i]) for i in exact)
    crossings = np.nonzero(signs[:-1] * signs[1:] < 0)[0]
    for i in crossings:
        try:
            roots.append(float(brentq(lambda t: e.evaluate(t), mesh[i], mesh[i + 1], xtol=1e-15)))
        except (ValueError, DomainError):
            roots.append(float(0.5 * (mesh[i] + mesh[i + 1])))
    return [r for r in roots if iv.a < r < iv.b]


# --- module-level operations -------------------------------------------------


def evaluate(e: Expr, t: ArrayLike) -> ArrayLike:
    """Evaluate e at t (scalar or array); left piece wins on shared guard endpoints."""
    return e.evaluate(t)


def differentiate(e: Expr, allow_steps: bool = False) -> Expr:
    """
    Symbolic derivative of e.

    Args:
        e: Expression to differentiate
        allow_steps: Treat sgn nodes as locally constant (derivative zero
            almost everywhere). Only total variation uses this; jumps are
            accounted for separately.

    Raises:
        NotDifferentiableError: e contains sgn and allow_steps is False
    """
    return e.derivative(allow_steps)


def breakpoints(e: Expr, iv: Interval) -> List[float]:
    """Sorted interior points of iv where e or e' may be discontinuous."""
    tol = 1e-13 * max(1.0, abs(iv.a), abs(iv.b))
    result: List[float] = []
    for p in sorted(p for p in e.kinks(iv) if iv.a < p < iv.b):
        if not result or p - result[-1] > tol:
            result.append(float(p))
    return result


def compose(outer: Expr, inner: Expr) -> Expr:
    """Substitute inner for x in outer."""
    return outer.substitute(inner)


def affine_map(source: Interval, target: Interval) -> Expr:
    """Affine Expr sending target onto source, used to pull functions from source to target."""
    scale = source.length / target.length
    return add(mul(Const(scale), sub(X, Const(target.a))), Const(source.a))


def to_text(e: Expr) -> str:
    return e.to_text()


def step_function(jumps: Sequence[float], levels: Sequence[float], iv: Interval) -> Piecewise:
    """
    Piecewise-constant function on iv.

    Args:
        jumps: Interior jump locations (strictly increasing)
        levels: len(jumps) + 1 values, one per segment
    """
    if len(levels) != len(jumps) + 1:
        raise ArgumentError("step_function needs exactly one more level than jumps")
    edges = [iv.a, *jumps, iv.b]
    pieces = tuple(
        (Interval(lo, hi), Const(float(level))) for lo, hi, level in zip(edges, edges[1:], levels)
    )
    return Piecewise(pieces)

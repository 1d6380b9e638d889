"""Symbolic real-number expressions.

Angles and classical parameters in Qunity are written as closed real
expressions over ``pi``, ``euler``, integer literals, arithmetic, and a fixed
set of analytic functions.  This module defines the expression tree, an
evaluator that stays in exact rational arithmetic whenever the expression
permits it, and a recognizer for exact multiples of pi (used when printing
gate angles).

Two node kinds — :class:`RName` and :class:`RIf` — exist only in surface
syntax.  The preprocessor substitutes definitions and resolves conditionals,
so evaluation rejects them: seeing one after preprocessing is a bug in the
caller, reported as a :class:`~qunic.errors.RealError`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import RealError

UNARY_OPS = (
    "sin",
    "cos",
    "tan",
    "arcsin",
    "arccos",
    "arctan",
    "exp",
    "ln",
    "log2",
    "sqrt",
    "ceil",
    "floor",
)

BINARY_OPS = ("+", "-", "*", "/", "^", "%")


@dataclass(frozen=True)
class RConst:
    value: int


@dataclass(frozen=True)
class RPi:
    pass


@dataclass(frozen=True)
class REuler:
    pass


@dataclass(frozen=True)
class RUnary:
    op: str
    arg: "Real"


@dataclass(frozen=True)
class RBinary:
    op: str
    left: "Real"
    right: "Real"


@dataclass(frozen=True)
class RName:
    """Reference to a ``#name`` definition, with generic arguments.

    The arguments are surface-syntax nodes (types, expressions, programs, or
    reals); they are typed loosely here to keep this module independent of the
    surface AST.
    """

    name: str
    args: tuple[object, ...] = ()


@dataclass(frozen=True)
class RIf:
    cond: "BoolExpr"
    then: "Real"
    els: "Real"


Real = Union[RConst, RPi, REuler, RUnary, RBinary, RName, RIf]


@dataclass(frozen=True)
class BNot:
    arg: "BoolExpr"


@dataclass(frozen=True)
class BAnd:
    left: "BoolExpr"
    right: "BoolExpr"


@dataclass(frozen=True)
class BOr:
    left: "BoolExpr"
    right: "BoolExpr"


@dataclass(frozen=True)
class BCmp:
    op: str  # one of = != <= < >= >
    left: Real
    right: Real


BoolExpr = Union[BNot, BAnd, BOr, BCmp]

Number = Union[Fraction, float]


def _is_int(x: Number) -> bool:
    return isinstance(x, Fraction) and x.denominator == 1


def evaluate_real(r: Real) -> Number:
    """Evaluate a closed real expression.

    Returns a :class:`~fractions.Fraction` whenever every operation along the
    way is rational-closed (including ``%``, integer powers, ``ceil``/``floor``
    and perfect-square ``sqrt``); otherwise falls back to a float.
    """
    if isinstance(r, RConst):
        return Fraction(r.value)
    if isinstance(r, RPi):
        return math.pi
    if isinstance(r, REuler):
        return math.e
    if isinstance(r, RUnary):
        return _eval_unary(r.op, evaluate_real(r.arg))
    if isinstance(r, RBinary):
        return _eval_binary(r.op, evaluate_real(r.left), evaluate_real(r.right))
    if isinstance(r, RName):
        raise RealError(f"unresolved real name #{r.name} (not substituted)")
    if isinstance(r, RIf):
        raise RealError("unresolved conditional in real expression")
    raise RealError(f"not a real expression: {r!r}")


def _eval_unary(op: str, x: Number) -> Number:
    if op == "ceil":
        return Fraction(math.ceil(x))
    if op == "floor":
        return Fraction(math.floor(x))
    if op == "sqrt":
        if isinstance(x, Fraction) and x >= 0:
            ns, ds = math.isqrt(x.numerator), math.isqrt(x.denominator)
            if ns * ns == x.numerator and ds * ds == x.denominator:
                return Fraction(ns, ds)
        if x < 0:
            raise RealError(f"sqrt of negative value {x}")
        return math.sqrt(x)
    f = float(x)
    try:
        if op == "sin":
            return math.sin(f)
        if op == "cos":
            return math.cos(f)
        if op == "tan":
            return math.tan(f)
        if op == "arcsin":
            return math.asin(f)
        if op == "arccos":
            return math.acos(f)
        if op == "arctan":
            return math.atan(f)
        if op == "exp":
            return math.exp(f)
        if op == "ln":
            return math.log(f)
        if op == "log2":
            return math.log2(f)
    except ValueError as exc:
        raise RealError(f"{op}({f}) is undefined") from exc
    except OverflowError as exc:
        raise RealError(f"{op}({f}) overflows") from exc
    raise RealError(f"unknown real operation {op!r}")


def _eval_binary(op: str, a: Number, b: Number) -> Number:
    exact = isinstance(a, Fraction) and isinstance(b, Fraction)
    if op == "+":
        return a + b if exact else float(a) + float(b)
    if op == "-":
        return a - b if exact else float(a) - float(b)
    if op == "*":
        return a * b if exact else float(a) * float(b)
    if op == "/":
        if b == 0:
            raise RealError("division by zero in real expression")
        return a / b if exact else float(a) / float(b)
    if op == "%":
        # Floored modulus, so that the result has the sign of the divisor.
        if b == 0:
            raise RealError("modulus by zero in real expression")
        if exact:
            return a - b * math.floor(a / b)
        fa, fb = float(a), float(b)
        return fa - fb * math.floor(fa / fb)
    if op == "^":
        if exact and _is_int(b):
            e = b.numerator
            if a == 0 and e < 0:
                raise RealError("zero raised to a negative power")
            return a**e
        try:
            return math.pow(float(a), float(b))
        except ValueError as exc:
            raise RealError(f"{float(a)} ^ {float(b)} is undefined") from exc
        except OverflowError as exc:
            raise RealError(f"{float(a)} ^ {float(b)} overflows") from exc
    raise RealError(f"unknown real operation {op!r}")


def evaluate_bool(b: BoolExpr) -> bool:
    """Evaluate a closed boolean expression over real comparisons."""
    if isinstance(b, BNot):
        return not evaluate_bool(b.arg)
    if isinstance(b, BAnd):
        return evaluate_bool(b.left) and evaluate_bool(b.right)
    if isinstance(b, BOr):
        return evaluate_bool(b.left) or evaluate_bool(b.right)
    if isinstance(b, BCmp):
        x, y = evaluate_real(b.left), evaluate_real(b.right)
        # Fraction/float comparisons in Python are exact, no rounding step.
        if b.op == "=":
            return x == y
        if b.op == "!=":
            return x != y
        if b.op == "<=":
            return x <= y
        if b.op == "<":
            return x < y
        if b.op == ">=":
            return x >= y
        if b.op == ">":
            return x > y
        raise RealError(f"unknown comparison {b.op!r}")
    raise RealError(f"not a boolean expression: {b!r}")


def _pi_linear(r: Real) -> tuple[Fraction, Fraction] | None:
    """Express ``r`` as ``a + b*pi`` with rational a, b, if possible."""
    if isinstance(r, RConst):
        return Fraction(r.value), Fraction(0)
    if isinstance(r, RPi):
        return Fraction(0), Fraction(1)
    if isinstance(r, (RName, RIf)):
        raise RealError("unresolved name or conditional in real expression")
    if isinstance(r, RBinary):
        lhs = _pi_linear(r.left)
        rhs = _pi_linear(r.right)
        if lhs is None or rhs is None:
            return None
        a, b = lhs
        c, d = rhs
        if r.op == "+":
            return a + c, b + d
        if r.op == "-":
            return a - c, b - d
        if r.op == "*":
            if d == 0:
                return a * c, b * c
            if b == 0:
                return a * c, a * d
            return None  # would introduce a pi^2 term
        if r.op == "/":
            if d == 0 and c != 0:
                return a / c, b / c
            if a == 0 and c == 0 and d != 0:
                return b / d, Fraction(0)  # a ratio of pi-multiples is rational
            return None
        if r.op == "%":
            if b == 0 and d == 0 and c != 0:
                return a - c * math.floor(a / c), Fraction(0)
            return None
        if r.op == "^":
            if b == 0 and d == 0 and c.denominator == 1:
                if a == 0 and c.numerator < 0:
                    return None
                return a**c.numerator, Fraction(0)
            return None
        return None
    if isinstance(r, RUnary):
        inner = _pi_linear(r.arg)
        if inner is None or inner[1] != 0:
            return None
        a = inner[0]
        if r.op == "ceil":
            return Fraction(math.ceil(a)), Fraction(0)
        if r.op == "floor":
            return Fraction(math.floor(a)), Fraction(0)
        if r.op == "sqrt" and a >= 0:
            ns, ds = math.isqrt(a.numerator), math.isqrt(a.denominator)
            if ns * ns == a.numerator and ds * ds == a.denominator:
                return Fraction(ns, ds), Fraction(0)
        return None
    return None


def as_pi_multiple(r: Real) -> Fraction | None:
    """Return ``q`` when ``r`` is *exactly* ``q * pi`` with nonzero q.

    This is a structural check in the semiring of ``a + b*pi`` terms, so it
    never mistakes a float that merely lands near a multiple of pi for the
    exact thing.
    """
    lin = _pi_linear(r)
    if lin is None:
        return None
    a, b = lin
    if a == 0 and b != 0:
        return b
    return None


def as_rational(r: Real) -> Fraction | None:
    """Return the exact rational value of ``r``, or None if it has none."""
    lin = _pi_linear(r)
    if lin is None:
        return None
    a, b = lin
    return a if b == 0 else None


def require_int(r: Real, what: str) -> int:
    """Evaluate ``r`` and insist on an exact integer (for sizes, indices...)."""
    v = evaluate_real(r)
    if isinstance(v, Fraction) and v.denominator == 1:
        return v.numerator
    raise RealError(f"{what} must be an integer, got {v}")


_PREC_ADD, _PREC_MUL, _PREC_POW, _PREC_ATOM = 1, 2, 3, 4
_BIN_PREC = {"+": _PREC_ADD, "-": _PREC_ADD, "*": _PREC_MUL, "/": _PREC_MUL, "%": _PREC_MUL, "^": _PREC_POW}


def real_to_str(r: Real, _prec: int = 0) -> str:
    """Render a real expression in surface syntax, with minimal parentheses.

    ``+ - * / %`` print left-associatively and ``^`` right-associatively,
    matching how the parser rebuilds them.
    """
    if isinstance(r, RConst):
        s = str(r.value)
        return s if r.value >= 0 or _prec == 0 else f"({s})"
    if isinstance(r, RPi):
        return "pi"
    if isinstance(r, REuler):
        return "euler"
    if isinstance(r, RUnary):
        return f"{r.op}({real_to_str(r.arg)})"
    if isinstance(r, RBinary):
        prec = _BIN_PREC[r.op]
        if r.op == "^":
            left = real_to_str(r.left, prec + 1)
            right = real_to_str(r.right, prec)
        else:
            left = real_to_str(r.left, prec)
            right = real_to_str(r.right, prec + 1)
        s = f"{left} {r.op} {right}"
        return f"({s})" if prec < _prec else s
    if isinstance(r, RName):
        from .surface import generic_args_to_str  # late import, printer lives there

        return f"#{r.name}{generic_args_to_str(r.args)}"
    if isinstance(r, RIf):
        return f"if {bool_to_str(r.cond)} then {real_to_str(r.then)} else {real_to_str(r.els)} endif"
    raise RealError(f"not a real expression: {r!r}")


def bool_to_str(b: BoolExpr, _prec: int = 0) -> str:
    # precedence: ! binds tightest, then &&, then ||
    if isinstance(b, BNot):
        return f"!{bool_to_str(b.arg, 3)}"
    if isinstance(b, BAnd):
        s = f"{bool_to_str(b.left, 2)} && {bool_to_str(b.right, 3)}"
        return f"({s})" if _prec > 2 else s
    if isinstance(b, BOr):
        s = f"{bool_to_str(b.left, 1)} || {bool_to_str(b.right, 2)}"
        return f"({s})" if _prec > 1 else s
    if isinstance(b, BCmp):
        return f"{real_to_str(b.left)} {b.op} {real_to_str(b.right)}"
    raise RealError(f"not a boolean expression: {b!r}")

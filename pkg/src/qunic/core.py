"""The core language: what survives preprocessing.

Types are built from Void, Unit, sums, and products; named types, variants,
and compile-time conditionals are gone.  Expressions keep only the quantum
constructs (unit, variables, pairs, ``ctrl``, ``match``, ``try``, application)
and programs keep only the primitives (``u3``, the two sum injections,
abstraction, ``rphase``, ``pmatch``).

``ctrl`` and ``match`` nodes may still carry an ``else`` body: expanding it
into concrete arms needs the scrutinee's type, so the typechecker does that
expansion while building the typing derivation.

This module also fixes the canonical enumeration of a type's basis values —
sums list all ``left`` values before all ``right`` values, products are
ordered lexicographically with the left component major — which everything
downstream (interpreter matrices, circuit encodings, output distributions)
relies on.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Union

from .errors import CapacityError
from .reals import Real, real_to_str

DIM_LIMIT = 2**62

# --------------------------------------------------------------------------
# Types


@dataclass(frozen=True)
class TyVoid:
    pass


@dataclass(frozen=True)
class TySum:
    left: "CoreType"
    right: "CoreType"


@dataclass(frozen=True)
class TyUnit:
    pass


@dataclass(frozen=True)
class TyProd:
    left: "CoreType"
    right: "CoreType"


CoreType = Union[TyVoid, TyUnit, TySum, TyProd]


@lru_cache(maxsize=None)
def dim(t: CoreType) -> int:
    """Dimension of the Hilbert space for ``t``."""
    if isinstance(t, TyVoid):
        return 0
    if isinstance(t, TyUnit):
        return 1
    if isinstance(t, TySum):
        d = dim(t.left) + dim(t.right)
    elif isinstance(t, TyProd):
        d = dim(t.left) * dim(t.right)
    else:
        raise TypeError(f"not a core type: {t!r}")
    if d > DIM_LIMIT:
        raise CapacityError(f"type dimension exceeds {DIM_LIMIT}")
    return d


@lru_cache(maxsize=None)
def qubit_size(t: CoreType) -> int:
    """Number of qubits in the binary encoding of ``t``.

    Void and Unit need none; a sum spends one qubit on the tag and pads the
    shorter branch; a product concatenates.
    """
    if isinstance(t, (TyVoid, TyUnit)):
        return 0
    if isinstance(t, TySum):
        return 1 + max(qubit_size(t.left), qubit_size(t.right))
    if isinstance(t, TyProd):
        return qubit_size(t.left) + qubit_size(t.right)
    raise TypeError(f"not a core type: {t!r}")


# --------------------------------------------------------------------------
# Values


@dataclass(frozen=True)
class VUnit:
    pass


@dataclass(frozen=True)
class VLeft:
    value: "Value"


@dataclass(frozen=True)
class VRight:
    value: "Value"


@dataclass(frozen=True)
class VPair:
    left: "Value"
    right: "Value"


Value = Union[VUnit, VLeft, VRight, VPair]


def iter_values(t: CoreType) -> Iterator[Value]:
    if isinstance(t, TyVoid):
        return
    elif isinstance(t, TyUnit):
        yield VUnit()
    elif isinstance(t, TySum):
        for v in iter_values(t.left):
            yield VLeft(v)
        for v in iter_values(t.right):
            yield VRight(v)
    elif isinstance(t, TyProd):
        for l in iter_values(t.left):
            for r in iter_values(t.right):
                yield VPair(l, r)
    else:
        raise TypeError(f"not a core type: {t!r}")


@lru_cache(maxsize=None)
def enumerate_values(t: CoreType) -> tuple[Value, ...]:
    """All basis values of ``t`` in canonical order (index = basis index)."""
    return tuple(iter_values(t))


def value_index(t: CoreType, v: Value) -> int:
    """Position of ``v`` in ``enumerate_values(t)``, computed structurally."""
    if isinstance(t, TyUnit) and isinstance(v, VUnit):
        return 0
    if isinstance(t, TySum):
        if isinstance(v, VLeft):
            return value_index(t.left, v.value)
        if isinstance(v, VRight):
            return dim(t.left) + value_index(t.right, v.value)
    if isinstance(t, TyProd) and isinstance(v, VPair):
        return value_index(t.left, v.left) * dim(t.right) + value_index(t.right, v.right)
    raise ValueError(f"value {v!r} does not inhabit type {core_type_to_str(t)}")


def value_to_str(v: Value) -> str:
    if isinstance(v, VUnit):
        return "()"
    if isinstance(v, VLeft):
        return f"left {value_to_str(v.value)}"
    if isinstance(v, VRight):
        return f"right {value_to_str(v.value)}"
    if isinstance(v, VPair):
        return f"({value_to_str(v.left)}, {value_to_str(v.right)})"
    raise TypeError(f"not a value: {v!r}")


# --------------------------------------------------------------------------
# Expressions and programs


@dataclass(frozen=True)
class ExUnit:
    pass


@dataclass(frozen=True)
class ExVar:
    name: str


@dataclass(frozen=True)
class ExPair:
    left: "CoreExpr"
    right: "CoreExpr"


@dataclass(frozen=True)
class CoreArm:
    pattern: "CoreExpr"
    body: "CoreExpr"


@dataclass(frozen=True)
class ExCtrl:
    scrutinee: "CoreExpr"
    arms: tuple[CoreArm, ...]
    else_body: "CoreExpr | None" = None


@dataclass(frozen=True)
class ExMatch:
    scrutinee: "CoreExpr"
    arms: tuple[CoreArm, ...]
    else_body: "CoreExpr | None" = None


@dataclass(frozen=True)
class ExTry:
    attempt: "CoreExpr"
    fallback: "CoreExpr"


@dataclass(frozen=True)
class ExApp:
    fn: "CoreProg"
    arg: "CoreExpr"


CoreExpr = Union[ExUnit, ExVar, ExPair, ExCtrl, ExMatch, ExTry, ExApp]


@dataclass(frozen=True)
class PrU3:
    theta: Real
    phi: Real
    lam: Real


@dataclass(frozen=True)
class PrLeft:
    left_ty: CoreType
    right_ty: CoreType


@dataclass(frozen=True)
class PrRight:
    left_ty: CoreType
    right_ty: CoreType


@dataclass(frozen=True)
class PrAbs:
    pattern: CoreExpr
    body: CoreExpr


@dataclass(frozen=True)
class PrRphase:
    pattern: CoreExpr
    on_phase: Real
    off_phase: Real


@dataclass(frozen=True)
class PrPmatch:
    arms: tuple[CoreArm, ...]


CoreProg = Union[PrU3, PrLeft, PrRight, PrAbs, PrRphase, PrPmatch]

# --------------------------------------------------------------------------
# Syntactic predicates


def free_qvars(e: CoreExpr) -> frozenset[str]:
    if isinstance(e, ExUnit):
        return frozenset()
    if isinstance(e, ExVar):
        return frozenset((e.name,))
    if isinstance(e, ExPair):
        return free_qvars(e.left) | free_qvars(e.right)
    if isinstance(e, (ExCtrl, ExMatch)):
        out = free_qvars(e.scrutinee)
        for arm in e.arms:
            out |= free_qvars(arm.body) - free_qvars(arm.pattern)
        if e.else_body is not None:
            out |= free_qvars(e.else_body)
        return out
    if isinstance(e, ExTry):
        return free_qvars(e.attempt) | free_qvars(e.fallback)
    if isinstance(e, ExApp):
        return free_qvars(e.arg)  # programs are closed
    raise TypeError(f"not a core expression: {e!r}")


def is_classical(e: CoreExpr) -> bool:
    """True when ``e`` contains no ``u3`` and no ``rphase``, anywhere."""
    if isinstance(e, (ExUnit, ExVar)):
        return True
    if isinstance(e, ExPair):
        return is_classical(e.left) and is_classical(e.right)
    if isinstance(e, (ExCtrl, ExMatch)):
        return (
            is_classical(e.scrutinee)
            and all(is_classical(a.pattern) and is_classical(a.body) for a in e.arms)
            and (e.else_body is None or is_classical(e.else_body))
        )
    if isinstance(e, ExTry):
        return is_classical(e.attempt) and is_classical(e.fallback)
    if isinstance(e, ExApp):
        return _prog_classical(e.fn) and is_classical(e.arg)
    raise TypeError(f"not a core expression: {e!r}")


def _prog_classical(f: CoreProg) -> bool:
    if isinstance(f, (PrU3, PrRphase)):
        return False
    if isinstance(f, (PrLeft, PrRight)):
        return True
    if isinstance(f, PrAbs):
        return is_classical(f.pattern) and is_classical(f.body)
    if isinstance(f, PrPmatch):
        return all(is_classical(a.pattern) and is_classical(a.body) for a in f.arms)
    raise TypeError(f"not a core program: {f!r}")


# --------------------------------------------------------------------------
# Printers (used by --dump-core and error messages)


def core_type_to_str(t: CoreType) -> str:
    if isinstance(t, TyVoid):
        return "Void"
    if isinstance(t, TyUnit):
        return "Unit"
    if isinstance(t, TySum):
        return f"({core_type_to_str(t.left)} + {core_type_to_str(t.right)})"
    if isinstance(t, TyProd):
        return f"({core_type_to_str(t.left)} * {core_type_to_str(t.right)})"
    raise TypeError(f"not a core type: {t!r}")


def _core_arms_to_str(arms: tuple[CoreArm, ...], else_body: CoreExpr | None) -> str:
    parts = [f"{core_expr_to_str(a.pattern)} -> {core_expr_to_str(a.body)}" for a in arms]
    if else_body is not None:
        parts.append(f"else -> {core_expr_to_str(else_body)}")
    return "[" + "; ".join(parts) + "]"


def core_expr_to_str(e: CoreExpr) -> str:
    if isinstance(e, ExUnit):
        return "()"
    if isinstance(e, ExVar):
        return e.name
    if isinstance(e, ExPair):
        return f"({core_expr_to_str(e.left)}, {core_expr_to_str(e.right)})"
    if isinstance(e, ExCtrl):
        return f"ctrl {core_expr_to_str(e.scrutinee)} {_core_arms_to_str(e.arms, e.else_body)}"
    if isinstance(e, ExMatch):
        return f"match {core_expr_to_str(e.scrutinee)} {_core_arms_to_str(e.arms, e.else_body)}"
    if isinstance(e, ExTry):
        return f"try {core_expr_to_str(e.attempt)} catch {core_expr_to_str(e.fallback)}"
    if isinstance(e, ExApp):
        return f"{core_prog_to_str(e.fn)}({core_expr_to_str(e.arg)})"
    raise TypeError(f"not a core expression: {e!r}")


def core_prog_to_str(f: CoreProg) -> str:
    if isinstance(f, PrU3):
        return f"u3{{{real_to_str(f.theta)}, {real_to_str(f.phi)}, {real_to_str(f.lam)}}}"
    if isinstance(f, PrLeft):
        return f"left{{{core_type_to_str(f.left_ty)}, {core_type_to_str(f.right_ty)}}}"
    if isinstance(f, PrRight):
        return f"right{{{core_type_to_str(f.left_ty)}, {core_type_to_str(f.right_ty)}}}"
    if isinstance(f, PrAbs):
        return f"(lambda {core_expr_to_str(f.pattern)} -> {core_expr_to_str(f.body)})"
    if isinstance(f, PrRphase):
        return (
            f"rphase{{{core_expr_to_str(f.pattern)}, "
            f"{real_to_str(f.on_phase)}, {real_to_str(f.off_phase)}}}"
        )
    if isinstance(f, PrPmatch):
        arms = "; ".join(
            f"{core_expr_to_str(a.pattern)} -> {core_expr_to_str(a.body)}" for a in f.arms
        )
        return f"pmatch [{arms}]"
    raise TypeError(f"not a core program: {f!r}")

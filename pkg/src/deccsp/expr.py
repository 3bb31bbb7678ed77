"""Integer and boolean expressions over the local store."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DivisionByZero, UnboundDataVariable


@dataclass(frozen=True)
class IntLit:
    value: int


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: object


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * /
    left: object
    right: object


@dataclass(frozen=True)
class BoolLit:
    value: bool


@dataclass(frozen=True)
class Cmp:
    op: str  # one of = != < <= > >=
    left: object
    right: object


@dataclass(frozen=True)
class And:
    left: object
    right: object


@dataclass(frozen=True)
class Or:
    left: object
    right: object


@dataclass(frozen=True)
class Not:
    operand: object


TRUE = BoolLit(True)
FALSE = BoolLit(False)


def _div(a, b):
    if b == 0:
        raise DivisionByZero()
    q = abs(a) // abs(b)
    return q if (a >= 0) == (b >= 0) else -q


_ARITH = {
    "+": lambda a, b: a + b,
    "-": lambda a, b: a - b,
    "*": lambda a, b: a * b,
    "/": _div,
}

_CMP = {
    "=": lambda a, b: a == b,
    "!=": lambda a, b: a != b,
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
    ">": lambda a, b: a > b,
    ">=": lambda a, b: a >= b,
}


def eval_int(e, sigma) -> int:
    """Evaluate an integer expression; division truncates toward zero."""
    if isinstance(e, IntLit):
        return e.value
    if isinstance(e, Var):
        return sigma.lookup(e.name)
    if isinstance(e, Neg):
        return -eval_int(e.operand, sigma)
    if isinstance(e, BinOp):
        return _ARITH[e.op](eval_int(e.left, sigma), eval_int(e.right, sigma))
    raise TypeError(f"not an integer expression: {e!r}")


def eval_bool(b, sigma) -> bool:
    if isinstance(b, BoolLit):
        return b.value
    if isinstance(b, Cmp):
        return _CMP[b.op](eval_int(b.left, sigma), eval_int(b.right, sigma))
    if isinstance(b, And):
        # both sides are evaluated so unbound reads are reported either way
        left = eval_bool(b.left, sigma)
        right = eval_bool(b.right, sigma)
        return left and right
    if isinstance(b, Or):
        left = eval_bool(b.left, sigma)
        right = eval_bool(b.right, sigma)
        return left or right
    if isinstance(b, Not):
        return not eval_bool(b.operand, sigma)
    raise TypeError(f"not a boolean expression: {b!r}")


def expr_vars(e) -> set:
    """Data variables read by an integer or boolean expression."""
    if isinstance(e, Var):
        return {e.name}
    if isinstance(e, (IntLit, BoolLit)):
        return set()
    if isinstance(e, (Neg, Not)):
        return expr_vars(e.operand)
    if isinstance(e, (BinOp, Cmp, And, Or)):
        return expr_vars(e.left) | expr_vars(e.right)
    raise TypeError(f"not an expression: {e!r}")


def subst_expr(e, values):
    """Replace variables found in ``values`` (name -> int) by literals."""
    if isinstance(e, Var):
        return IntLit(values[e.name]) if e.name in values else e
    if isinstance(e, (IntLit, BoolLit)):
        return e
    if isinstance(e, Neg):
        return Neg(subst_expr(e.operand, values))
    if isinstance(e, Not):
        return Not(subst_expr(e.operand, values))
    if isinstance(e, BinOp):
        return BinOp(e.op, subst_expr(e.left, values), subst_expr(e.right, values))
    if isinstance(e, Cmp):
        return Cmp(e.op, subst_expr(e.left, values), subst_expr(e.right, values))
    if isinstance(e, And):
        return And(subst_expr(e.left, values), subst_expr(e.right, values))
    if isinstance(e, Or):
        return Or(subst_expr(e.left, values), subst_expr(e.right, values))
    raise TypeError(f"not an expression: {e!r}")


class _Empty:
    def lookup(self, name):
        raise UnboundDataVariable(name)


def fold_int(e):
    """Return the value of a variable-free expression, or None."""
    if expr_vars(e):
        return None
    return eval_int(e, _Empty())

import pytest

from deccsp import core as c
from deccsp import expr as x
from deccsp.errors import DivisionByZero, UnboundDataVariable

S = c.LocalStore.of(n=7, m=-2)


@pytest.mark.parametrize("e, want", [
    (x.BinOp("+", x.Var("n"), x.IntLit(1)), 8),
    (x.BinOp("*", x.Var("n"), x.Var("m")), -14),
    (x.BinOp("/", x.Var("n"), x.IntLit(2)), 3),
    (x.BinOp("/", x.Neg(x.Var("n")), x.IntLit(2)), -3),
    (x.BinOp("-", x.Var("m"), x.IntLit(3)), -5),
])
def test_eval_int(e, want):
    assert x.eval_int(e, S) == want


def test_division_by_zero():
    with pytest.raises(DivisionByZero):
        x.eval_int(x.BinOp("/", x.IntLit(1), x.IntLit(0)), S)


def test_unbound_read():
    with pytest.raises(UnboundDataVariable):
        x.eval_int(x.Var("k"), S)


def test_eval_bool_connectives():
    lt = x.Cmp("<", x.Var("m"), x.Var("n"))
    assert x.eval_bool(lt, S)
    assert not x.eval_bool(x.Not(lt), S)
    assert x.eval_bool(x.Or(x.FALSE, lt), S)
    assert not x.eval_bool(x.And(lt, x.FALSE), S)


def test_and_reports_unbound_on_either_side():
    with pytest.raises(UnboundDataVariable):
        x.eval_bool(x.And(x.FALSE, x.Cmp("=", x.Var("k"), x.IntLit(0))), S)


def test_vars_subst_and_fold():
    e = x.BinOp("+", x.Var("n"), x.Var("k"))
    assert x.expr_vars(e) == {"n", "k"}
    closed = x.subst_expr(e, {"n": 1, "k": 2})
    assert x.expr_vars(closed) == set()
    assert x.fold_int(closed) == 3
    assert x.fold_int(e) is None

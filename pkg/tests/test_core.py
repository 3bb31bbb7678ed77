import itertools

import pytest

from deccsp import core as c
from deccsp.errors import UnboundDataVariable

W = (c.FAULT, c.YIELD, c.DONE)


def test_terminal_table_is_commutative():
    for w, w2 in itertools.product(W, W):
        assert c.compose_terminal(w, w2) == c.compose_terminal(w2, w)


def test_fault_absorbs_and_done_is_identity():
    for w in W:
        assert c.compose_terminal(c.FAULT, w) == c.FAULT
        assert c.compose_terminal(c.DONE, w) == w


def test_terminal_symbols():
    assert [str(w) for w in W] == ["!", "?", "✓"]


def test_event_parse_and_print():
    e = c.event("restock.1.4")
    assert e.parts == ("restock",) and e.data == (1, 4)
    assert str(e) == "restock.1.4"
    assert str(c.event("a.b")) == "a.b"
    assert e.channel == c.event("restock")


@pytest.mark.parametrize("bad", ["", "a b", "a.{"])
def test_event_rejects_bad_atoms(bad):
    with pytest.raises(ValueError):
        c.event(bad)


def test_bare_channel_covers_data_events():
    events = frozenset({c.event("Unpack")})
    assert c.in_event_set(c.event("Unpack.1"), events)
    assert c.in_event_set(c.event("Unpack"), events)
    assert not c.in_event_set(c.event("Pack.1"), events)
    assert not c.in_event_set(c.event("Unpack"), frozenset({c.event("Unpack.1")}))


def test_label_order():
    labels = [c.TICK, c.TAU, c.obs("b"), c.BANG, c.obs("a"), c.QUERY]
    assert sorted(labels, key=c.label_key) == [c.obs("a"), c.obs("b"), c.TAU, c.BANG, c.QUERY, c.TICK]


def test_stores_are_values():
    s = c.LocalStore.of(x=1)
    assert s.set("y", 2) == c.LocalStore.of(y=2, x=1)
    assert s.set("x", 1) == s
    assert hash(s.update({"x": 3})) == hash(c.LocalStore.of(x=3))
    assert s.lookup("x") == 1
    with pytest.raises(UnboundDataVariable):
        s.lookup("z")


def test_configuration_equality_includes_both_stores():
    a = c.Configuration(c.SKIP, c.LocalStore.of(x=1))
    b = c.Configuration(c.SKIP, c.LocalStore.of(x=1), c.GlobalStore.of(X=c.SKIP))
    assert a != b
    assert a == c.Configuration(c.SKIP, c.LocalStore.of(x=1))


def test_sugar_constants_are_pairs():
    assert c.SKIPP == c.CompPair(c.SKIP, c.SKIP)
    assert c.THROWW.forward == c.THROW
    assert c.YIELDD.comp == c.SKIP


def test_free_process_vars():
    p = c.Seq(c.Assign("X", c.SKIP), c.ProcVarRef("Y"))
    assert c.free_process_vars(p) == {"X", "Y"}


def test_internal_forms_detected():
    assert c.has_internal_forms(c.Seq(c.SKIP, c.AuxStd(c.SKIP, c.SKIP)))
    assert not c.has_internal_forms(c.Seq(c.SKIP, c.THROW))

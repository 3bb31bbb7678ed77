import json

import pytest

from deccsp import core as c
from deccsp.errors import NoMatchingPath, UnboundProcessVariable
from deccsp.explorer import (
    DONE,
    FAULT,
    TRUNCATED,
    FaultSelector,
    Stepper,
    build_lts,
    compensation_trace,
    compensation_traces,
    find_deadlocks,
    lts_to_dot,
    lts_to_json,
    lts_to_text,
    traces,
)
from deccsp.options import FaultMode
from deccsp.parser import parse_event, parse_model


def init(text):
    m = parse_model(text)
    return m, m.initial_configuration()


def strs(found, elide=False):
    return sorted(str(t) for t in found)


def test_skip_lts():
    m, cfg = init("init SKIP")
    lts = build_lts(cfg, model=m)
    assert len(lts.states) == 2
    assert lts.transitions == [(0, c.TICK, "skip", 1)]
    assert lts.terminal_completions() == {1}


def test_choice_lts_shares_target():
    m, cfg = init("init a [] b")
    lts = build_lts(cfg, model=m)
    # both branches reach SKIP, then one tick to STOP
    assert len(lts.states) == 3


def test_depth_zero_truncates():
    m, cfg = init("init [ THROWW ]")
    lts = build_lts(cfg, max_depth=0, model=m)
    assert len(lts.states) == 1 and lts.truncated == {0}


def test_state_cap_truncates():
    m, cfg = init("init a || b || c")
    lts = build_lts(cfg, max_states=3, model=m)
    assert len(lts.states) == 3 and lts.truncated


def test_bad_bounds():
    m, cfg = init("init SKIP")
    with pytest.raises(ValueError):
        build_lts(cfg, max_depth=-1, model=m)


def test_deadlocks():
    m, cfg = init("init STOP")
    assert find_deadlocks(build_lts(cfg, model=m)) == [(0, [])]
    m, cfg = init("init (a -> SKIP) ||{a, b} (b -> SKIP)")
    assert [i for i, _ in find_deadlocks(build_lts(cfg, model=m))] == [0]
    m, cfg = init("init a ; SKIP")
    assert find_deadlocks(build_lts(cfg, model=m)) == []


def test_deadlock_witness_path():
    m, cfg = init("init a -> STOP")
    ((i, path),) = find_deadlocks(build_lts(cfg, model=m))
    assert [str(l) for _, l, _, _ in path] == ["a"]


def test_traces_basic():
    m, cfg = init("init SKIP ; SKIP")
    assert strs(traces(cfg, model=m, elide_tau=True)) == ["✓ DONE"]
    m, cfg = init("init YIELD")
    assert strs(traces(cfg, model=m)) == ["? YIELDED", "✓ DONE"]


def test_propagate_and_contain_traces():
    text = "init [ (a / a1) ; (b / b1) ; THROWW ]"
    m, cfg = init(text)
    assert strs(traces(cfg, model=m, elide_tau=True)) == ["a b ! b1 a1 ✓ DONE"]
    contain = m.options.with_(fault_mode=FaultMode.CONTAIN)
    assert strs(traces(cfg, opts=contain, model=m, elide_tau=True)) == ["a b b1 a1 ✓ DONE"]


def test_trace_markers():
    m, cfg = init("init THROW")
    assert {t.marker for t in traces(cfg, model=m)} == {FAULT}
    m, cfg = init("init a -> a -> a -> SKIP")
    assert {t.marker for t in traces(cfg, max_depth=2, model=m)} == {TRUNCATED}
    assert {t.marker for t in traces(cfg, max_depth=4, model=m)} == {DONE}


def test_depth_monotonicity():
    m, cfg = init("init (a / a1) <> ((b / b1) ; THROWW)")
    prev = None
    for d in range(1, 8):
        cur = {(t.labels, t.marker) for t in traces(cfg, max_depth=d, model=m)}
        if prev is not None:
            finished = {x for x in prev if x[1] != TRUNCATED}
            assert finished <= cur
        prev = cur


def test_semantic_error_carries_path():
    m, cfg = init("init a ; X")
    with pytest.raises(UnboundProcessVariable) as info:
        build_lts(cfg, model=m)
    assert info.value.path == ("a", "tau")


def test_compensation_reverse_order():
    m, cfg = init("init [ (a / a1) ; (b / b1) ; (c / c1) ; THROWW ]")
    assert compensation_trace(cfg, model=m) == tuple(map(c.event, ["c1", "b1", "a1"]))


def test_compensation_replace():
    m, cfg = init("init [ (a / X) ; (X := c / SKIP) ; THROWW ]")
    assert compensation_trace(cfg, model=m) == (c.event("c"),)


def test_compensation_selector():
    m, cfg = init("init [ ((a / a1) [] (b / b1)) ; THROWW ]")
    sel = FaultSelector(require=(parse_event("b"),))
    assert compensation_traces(cfg, sel, model=m) == [(c.event("b1"),)]
    sel = FaultSelector(forbid=frozenset({parse_event("a"), parse_event("b")}))
    with pytest.raises(NoMatchingPath):
        compensation_trace(cfg, sel, model=m)


def test_compensation_within_filters_events():
    m, cfg = init("options mode = contain\ninit [ (a / a1) ; (b / b1) ; THROWW ] ; z")
    assert compensation_traces(cfg, model=m) == [tuple(map(c.event, ["b1", "a1", "z"]))]
    sel = FaultSelector(within=frozenset({parse_event("a1"), parse_event("b1")}))
    assert compensation_traces(cfg, sel, model=m) == [(c.event("b1"), c.event("a1"))]


def test_serialisations():
    m, cfg = init("init a [] b")
    lts = build_lts(cfg, model=m)
    text = lts_to_text(lts)
    assert text.splitlines()[0].startswith("state 0")
    data = json.loads(lts_to_json(lts))
    assert len(data["states"]) == 3
    dot = lts_to_dot(lts)
    assert dot.startswith("digraph") and "lightgrey" in dot


def test_lts_text_is_stable():
    m, cfg = init("init (a / a1) || (b / b1) || THROWW")
    assert lts_to_text(build_lts(cfg, model=m)) == lts_to_text(build_lts(cfg, model=m))


def test_stepper_choose_undo_and_walk():
    m, cfg = init("init a [] b")
    s = Stepper(cfg, m)
    assert [str(t.label) for t in s.enabled()] == ["a", "b"]
    s.choose(1)
    assert s.labels == [c.obs("b")]
    assert s.undo() and not s.undo()
    with pytest.raises(IndexError):
        s.choose(5)
    walk1 = [t.label for t in Stepper(cfg, m, seed=3).random_walk(5)]
    walk2 = [t.label for t in Stepper(cfg, m, seed=3).random_walk(5)]
    assert walk1 == walk2 and len(walk1) == 2

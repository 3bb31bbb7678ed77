"""Acceptance gate: one test per criterion, numbered 1 to 8.

Run with ``pytest tests/test_acceptance.py`` (or execute this file); the
summary prints one PASS/FAIL line per criterion.
"""

import itertools
import os
import subprocess
import sys
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import pytest

from deccsp import cli
from deccsp import core as c
from deccsp.errors import FreshnessViolation
from deccsp.explorer import FaultSelector, build_lts, compensation_trace, compensation_traces, traces
from deccsp.options import FaultMode
from deccsp.oracle import oracle_traces
from deccsp.parser import load_model, parse_event, parse_model
from deccsp.rulecheck import check_all
from deccsp.rules import INNER_ONLY, RULES
from deccsp.semantics import Engine

import randterms
from test_oracle import COMBOS, combo_opts, engine_set, oracle_set, outcome

CORPUS = cli.corpus_dir()
W = (c.FAULT, c.YIELD, c.DONE)


def events(*names):
    return tuple(parse_event(n) for n in names)


# -- 1 -------------------------------------------------------------------------


def expected_terminal(w, w2):
    # fault dominates, then yield, then success
    for winner in (c.FAULT, c.YIELD):
        if winner in (w, w2):
            return winner
    return c.DONE


def test_criterion_1_terminal_algebra():
    engine = Engine()
    for w, w2 in itertools.product(W, W):
        assert c.compose_terminal(w, w2) == expected_terminal(w, w2)
        assert c.compose_terminal(w, w2) == c.compose_terminal(w2, w)
        # the same entry as produced by a parallel composition finishing
        par = c.Parallel(frozenset(), c.EmitTerminal(w), c.EmitTerminal(w2))
        (t,) = engine.step(c.Configuration(par))
        assert (t.label, t.rule, t.target.proc) == (c.Terminal(expected_terminal(w, w2)), "par.terminal", c.NIL)
    assert len(c.TERMINAL_TABLE) == 9
    for w in W:
        assert c.compose_terminal(c.FAULT, w) == c.FAULT
        assert c.compose_terminal(c.DONE, w) == w


# -- 2 -------------------------------------------------------------------------


def test_criterion_2_rule_coverage():
    results = check_all()
    failed = [r.describe() for r in results if not r.ok]
    assert failed == []
    covered = {r.model.rule for r in results}
    assert set(RULES) - covered == set()
    exhibited = set()
    for r in results:
        exhibited |= {line.split("[", 1)[1].split("]", 1)[0] for line in r.actual}
    assert set(RULES) - INNER_ONLY <= exhibited


# -- 3 -------------------------------------------------------------------------


@pytest.mark.parametrize("mode", list(FaultMode), ids=[m.value for m in FaultMode])
def test_criterion_3_backward_recovery_order(mode):
    for n in range(1, 6):
        pairs = " ; ".join(f"(f{i} / g{i})" for i in range(1, n + 1))
        m = parse_model(f"init [ {pairs} ; THROWW ]")
        opts = m.options.with_(fault_mode=mode)
        found = compensation_traces(m.initial_configuration(), opts=opts, model=m)
        assert found == [events(*(f"g{i}" for i in range(n, 0, -1)))]


# -- 4 -------------------------------------------------------------------------


def comp(text):
    m = parse_model(text)
    return compensation_trace(m.initial_configuration(), model=m)


def test_criterion_4_dynamic_recovery():
    # (a) replace: the value held at fault time is used
    assert comp("init X := b ; [ (a / X) ; THROWW ]") == events("b")
    assert comp("init X := b ; [ (a / X) ; (X := c / SKIP) ; THROWW ]") == events("c")
    # (b) discard: X := SKIP removes X's contribution
    assert comp("init X := b ; [ (a / a1) ; (e / X) ; THROWW ]") == events("b", "a1")
    assert comp("init X := b ; [ (a / a1) ; (e / X) ; (X := SKIP / SKIP) ; THROWW ]") == events("a1")
    # (c) a second binding pair for X is rejected before anything runs
    with pytest.raises(FreshnessViolation):
        parse_model("init [ (a / X) ; (b / X) ; THROWW ]")


# -- 5 -------------------------------------------------------------------------

WITHIN = frozenset(events("Unpack", "cancelcourier", "penalty", "restock", "Cancelbranch1", "Cancelbranch2"))


def warehouse_phases(name, require):
    m = load_model(CORPUS / name)
    sel = FaultSelector(require=events(*require), forbid=frozenset(events("RequestMembership")),
                        within=WITHIN)
    return compensation_traces(m.initial_configuration(), sel, 64, model=m)


def test_criterion_5_case_study():
    basic = warehouse_phases("warehouse_basic.dec", ["NotOk"])
    want = Counter({parse_event("Unpack.1"): 4, parse_event("cancelcourier"): 1,
                    parse_event("penalty"): 1, parse_event("restock.1.4"): 1})
    matching = [p for p in basic if Counter(p) == want and p[-1] == parse_event("restock.1.4")]
    assert matching
    # penalty always follows cancelcourier (cancelcourier1 = cancelcourier ; penalty)
    assert all(p.index(parse_event("cancelcourier")) < p.index(parse_event("penalty")) for p in matching)

    branches = warehouse_phases("warehouse_branches.dec", ["okbranch1", "NotOk"])
    assert branches
    for p in branches:
        assert p[-2:] == events("restock.1.4", "Cancelbranch1")
        assert Counter(p[:-2]) == want - Counter(events("restock.1.4"))


# -- 6 -------------------------------------------------------------------------


def test_criterion_6_oracle_equivalence():
    mismatches = []
    for fault_mode, interruptible in COMBOS:
        for seed in range(500):
            cfg = randterms.random_config(seed)
            opts = combo_opts(fault_mode, interruptible, seed)
            if outcome(engine_set, cfg, opts) != outcome(oracle_set, cfg, opts):
                mismatches.append((seed, fault_mode.value, interruptible))
    assert mismatches == []


# -- 7 -------------------------------------------------------------------------


def after_first_event(engine, proc, first):
    """Derivatives of ``proc`` reachable on a path that has performed ``first``."""
    lts = build_lts(c.Configuration(proc), 20, engine=engine)
    done, out = set(), set()
    stack = [(0, False)]
    while stack:
        i, seen = stack.pop()
        if (i, seen) in done:
            continue
        done.add((i, seen))
        if seen:
            out.add(lts.states[i].proc)
        for _, label, _, j in lts.successors(i):
            stack.append((j, seen or label == c.obs(first)))
    return out


def fault_stops(engine, proc):
    """Whether ``proc || THROW`` can end with ! as a whole."""
    par = c.Configuration(c.Parallel(frozenset(), proc, c.THROW))
    return any(t.label == c.BANG and t.target.proc == c.NIL for t in engine.step(par))


def test_criterion_7_prefix_vs_sequencing():
    m = load_model(CORPUS / "interrupt.dec")
    engine = Engine(m)
    p_after = after_first_event(engine, m.definition("P"), "a")
    q_after = after_first_event(engine, m.definition("Q"), "a")
    lts = build_lts(m.initial_configuration(), 40, engine=engine)
    witnesses = []
    for cfg in lts.states:
        if not (isinstance(cfg.proc, c.Parallel) and isinstance(cfg.proc.right, c.Parallel)):
            continue
        p_side, rest = cfg.proc.left, cfg.proc.right
        q_side = rest.left
        if p_side in p_after and q_side in q_after and fault_stops(engine, q_side):
            offers = {t.label for t in engine.step(c.Configuration(p_side))}
            if c.obs("b") in offers:
                witnesses.append(cfg)
    assert witnesses
    # while the prefixed process still owes b, the fault cannot stop it
    owing = [p for p in p_after
             if c.obs("b") in {t.label for t in engine.step(c.Configuration(p))}]
    assert owing and not any(fault_stops(engine, p) for p in owing)


# -- 8 -------------------------------------------------------------------------


def golden_commands():
    out = []
    for g in sorted((CORPUS / "golden").glob("*.golden")):
        header = dict(line[3:].split(":", 1) for line in g.read_text().splitlines()
                      if line.startswith("-- "))
        out.append(header["args"].split() + [str(CORPUS / header["model"].strip())])
    out.append(["lts", str(CORPUS / "interrupt.dec")])
    out.append(["lts", "--json", str(CORPUS / "rollback.dec")])
    out.append(["run", "--seed", "11", str(CORPUS / "warehouse_basic.dec")])
    return out


def run_cli(argv, hash_seed):
    env = dict(os.environ, PYTHONHASHSEED=str(hash_seed))
    proc = subprocess.run([sys.executable, "-m", "deccsp", *argv], capture_output=True, env=env)
    return proc.returncode, proc.stdout


def test_criterion_8_determinism():
    cmds = golden_commands()
    jobs = [(argv, seed) for argv in cmds for seed in (1, 2)]
    with ThreadPoolExecutor(max_workers=max(2, os.cpu_count() or 2)) as pool:
        results = list(pool.map(lambda job: run_cli(*job), jobs))
    for i, argv in enumerate(cmds):
        first, second = results[2 * i], results[2 * i + 1]
        assert first[0] == 0, argv
        assert first == second, argv


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))

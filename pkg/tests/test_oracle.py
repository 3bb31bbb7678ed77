import itertools

import pytest

from deccsp.errors import DeccspError
from deccsp.explorer import traces
from deccsp.options import EngineOptions, FaultMode, UnassignedMode
from deccsp.oracle import oracle_traces
from deccsp.parser import parse_model

import randterms

SEEDS = range(500)
DEPTH = 8
COMBOS = list(itertools.product(FaultMode, (False, True)))


def combo_opts(fault_mode, interruptible, seed):
    unassigned = UnassignedMode.DEFAULT_SKIP if seed % 2 else UnassignedMode.ERROR
    return EngineOptions(interruptible_atoms=interruptible, fault_mode=fault_mode,
                         unassigned_vars=unassigned)


def outcome(fn, cfg, opts):
    try:
        return fn(cfg, opts)
    except DeccspError as err:
        return type(err).__name__


def engine_set(cfg, opts):
    return {(t.labels, t.marker) for t in traces(cfg, DEPTH, opts)}


def oracle_set(cfg, opts):
    return oracle_traces(cfg, DEPTH, opts)


@pytest.mark.parametrize("fault_mode, interruptible", COMBOS,
                         ids=[f"{m.value}-{'int' if i else 'plain'}" for m, i in COMBOS])
def test_engine_matches_oracle_on_random_terms(fault_mode, interruptible):
    mismatches = []
    for seed in SEEDS:
        cfg = randterms.random_config(seed)
        opts = combo_opts(fault_mode, interruptible, seed)
        if outcome(engine_set, cfg, opts) != outcome(oracle_set, cfg, opts):
            mismatches.append(seed)
    assert mismatches == []


@pytest.mark.parametrize("text", [
    "init SKIP",
    "init YIELD",
    "init [ (a / a1) ; (b / b1) ; THROWW ]",
    "domain ch = {1, 2}\ninit (ch?x -> out.x -> SKIP) [] (ch!2 -> SKIP)",
    "init (a / a1) <> ((b / b1) || THROWW)",
])
def test_engine_matches_oracle_on_examples(text):
    m = parse_model(text)
    cfg = m.initial_configuration()
    for mode in FaultMode:
        opts = m.options.with_(fault_mode=mode)
        for elide in (False, True):
            eng = {(t.labels, t.marker) for t in traces(cfg, 20, opts, elide, m)}
            assert eng == oracle_traces(cfg, 20, opts, elide, m)


def test_generator_is_seeded():
    assert randterms.random_term(7) == randterms.random_term(7)
    kinds = {type(randterms.random_term(s)).__name__ for s in SEEDS}
    assert len(kinds) > 15


def test_engine_matches_oracle_on_deeper_terms():
    # larger terms, longer runs: fewer seeds keep the naive oracle affordable
    mismatches = []
    for seed in range(80):
        cfg = randterms.random_config(seed, depth=6)
        for fault_mode, interruptible in COMBOS:
            opts = combo_opts(fault_mode, interruptible, seed)
            eng = outcome(lambda k, o: {(t.labels, t.marker) for t in traces(k, 12, o)}, cfg, opts)
            ora = outcome(lambda k, o: oracle_traces(k, 12, o), cfg, opts)
            if eng != ora:
                mismatches.append((seed, fault_mode.value, interruptible))
    assert mismatches == []

"""Bounded exploration: LTS construction, traces, deadlocks and compensation phases."""

from __future__ import annotations

import json
import random
from collections import deque
from dataclasses import dataclass, field

from . import core as c
from .core import Observable, Tau, Terminal
from .errors import NoMatchingPath, SemanticError
from .printer import show, show_config, show_label, show_rho, show_sigma
from .semantics import Engine

DEFAULT_DEPTH = 64
DEFAULT_MAX_STATES = 100_000

DONE, FAULT, YIELDED, DEADLOCK, TRUNCATED = "DONE", "FAULT", "YIELDED", "DEADLOCK", "TRUNCATED"
_MARKER = {c.DONE: DONE, c.FAULT: FAULT, c.YIELD: YIELDED}


def _engine(model, opts, engine):
    return engine if engine is not None else Engine(model, opts)


# -- LTS ---------------------------------------------------------------------


@dataclass
class Lts:
    states: list = field(default_factory=list)
    transitions: list = field(default_factory=list)  # (src, label, rule, dst)
    initial: int = 0
    truncated: set = field(default_factory=set)
    index: dict = field(default_factory=dict, repr=False)
    parent: dict = field(default_factory=dict, repr=False)  # state -> (src, label, rule)

    def successors(self, i):
        return [t for t in self.transitions if t[0] == i]

    def out_degree(self):
        deg = [0] * len(self.states)
        for src, *_ in self.transitions:
            deg[src] += 1
        return deg

    def path_to(self, i):
        """Transitions (src, label, rule, dst) of a shortest path from the initial state."""
        path = []
        while i != self.initial:
            src, label, rule = self.parent[i]
            path.append((src, label, rule, i))
            i = src
        return path[::-1]

    def terminal_completions(self):
        """States entered by a terminal transition that have no successors."""
        deg = self.out_degree()
        return {dst for _, label, _, dst in self.transitions
                if isinstance(label, Terminal) and deg[dst] == 0}


def _annotate(err, path):
    if isinstance(err, SemanticError) and err.path is None:
        err.path = tuple(path)
    return err


def build_lts(init: c.Configuration, max_depth=DEFAULT_DEPTH, max_states=DEFAULT_MAX_STATES,
              opts=None, model=None, engine=None) -> Lts:
    """Breadth-first closure of the transition relation within the bounds.

    A state is marked truncated when it has successors that were not explored,
    either because it sits at ``max_depth`` or because the state budget ran out.
    """
    if max_depth < 0 or max_states < 1:
        raise ValueError("max_depth must be >= 0 and max_states >= 1")
    eng = _engine(model, opts, engine)
    lts = Lts(states=[init], index={init: 0})
    depth = {0: 0}
    frontier = deque([0])
    while frontier:
        i = frontier.popleft()
        try:
            succ = eng.step(lts.states[i])
        except SemanticError as err:
            raise _annotate(err, [show_label(t[1]) for t in lts.path_to(i)])
        if depth[i] >= max_depth:
            if succ:
                lts.truncated.add(i)
            continue
        for t in succ:
            j = lts.index.get(t.target)
            if j is None:
                if len(lts.states) >= max_states:
                    lts.truncated.add(i)
                    continue
                j = len(lts.states)
                lts.states.append(t.target)
                lts.index[t.target] = j
                lts.parent[j] = (i, t.label, t.rule)
                depth[j] = depth[i] + 1
                frontier.append(j)
            lts.transitions.append((i, t.label, t.rule, j))
    return lts


def find_deadlocks(lts: Lts) -> list:
    """Stuck states that are not a normal end after a terminal event, with witness paths."""
    deg = lts.out_degree()
    finished = lts.terminal_completions()
    out = []
    for i in range(len(lts.states)):
        if deg[i] or i in lts.truncated or i in finished:
            continue
        out.append((i, lts.path_to(i)))
    return out


# -- traces ------------------------------------------------------------------


@dataclass(frozen=True)
class Trace:
    labels: tuple
    marker: str

    def sort_key(self):
        return (tuple(c.label_key(l) for l in self.labels), self.marker)

    def __str__(self):
        body = " ".join(show_label(l) for l in self.labels)
        return f"{body} {self.marker}" if body else self.marker


def sorted_traces(traces):
    return sorted(traces, key=Trace.sort_key)


def _end_marker(incoming):
    if isinstance(incoming, Terminal):
        return _MARKER[incoming.terminal]
    return DEADLOCK


def traces(init: c.Configuration, max_depth=DEFAULT_DEPTH, opts=None, elide_tau=False,
           model=None, engine=None) -> set:
    """All maximal label sequences of at most ``max_depth`` steps from ``init``.

    A sequence ends in the terminal's marker if its last label is a terminal event
    and nothing follows, DEADLOCK if it is stuck otherwise, and TRUNCATED if the
    depth ran out while successors remained. Depth counts tau steps even when
    they are elided from the output.
    """
    eng = _engine(model, opts, engine)
    memo = {}

    def walk(cfg, remaining, incoming, path):
        key = (cfg, remaining, incoming if isinstance(incoming, Terminal) else None)
        hit = memo.get(key)
        if hit is not None:
            return hit
        try:
            succ = eng.step(cfg)
        except SemanticError as err:
            raise _annotate(err, path)
        if not succ:
            result = {((), _end_marker(incoming))}
        elif remaining == 0:
            result = {((), TRUNCATED)}
        else:
            result = set()
            for t in succ:
                head = () if elide_tau and isinstance(t.label, Tau) else (t.label,)
                for labels, marker in walk(t.target, remaining - 1, t.label,
                                           path + [show_label(t.label)]):
                    result.add((head + labels, marker))
        result = frozenset(result)
        memo[key] = result
        return result

    return {Trace(labels, marker) for labels, marker in walk(init, max_depth, None, [])}


# -- compensation phases -----------------------------------------------------


@dataclass(frozen=True)
class FaultSelector:
    """Chooses the fault paths whose compensation phase is reported.

    ``require`` events must occur in order before the fault, ``forbid`` events
    never occur before it, and after it only ``within`` events are followed
    (all observable events when ``within`` is None). ``terminals`` lists which
    block endings count: FAULT, YIELD or both.
    """

    require: tuple = ()
    forbid: frozenset = frozenset()
    within: frozenset | None = None
    terminals: tuple = (c.FAULT,)

    def allows_before(self, ev):
        return not c.in_event_set(ev, self.forbid)

    def allows_after(self, ev):
        return self.within is None or c.in_event_set(ev, self.within)


_BLOCK_END = {"block.fault": c.FAULT, "block.yield": c.YIELD}


def compensation_traces(init: c.Configuration, selector=FaultSelector(), max_depth=DEFAULT_DEPTH,
                        opts=None, model=None, engine=None) -> list:
    """Observable sequences emitted after a selected transaction-block ending.

    Searches breadth-first over (state, progress through ``require``) for
    block-ending transitions, then collects the maximal observable sequences
    from the block's continuation, restricted to ``selector.within``.
    Results are sorted and deduplicated.
    """
    eng = _engine(model, opts, engine)
    need = len(selector.require)
    start = (init, 0)
    seen = {start}
    frontier = deque([(init, 0, 0)])
    results = set()
    after_memo = {}

    def after(cfg, remaining):
        key = (cfg, remaining)
        hit = after_memo.get(key)
        if hit is not None:
            return hit
        out = set()
        if remaining > 0:
            for t in eng.step(cfg):
                if isinstance(t.label, Observable):
                    if not selector.allows_after(t.label.event):
                        continue
                    head = (t.label.event,)
                else:
                    head = ()
                for tail in after(t.target, remaining - 1):
                    out.add(head + tail)
        if not out:
            out = {()}
        out = frozenset(out)
        after_memo[key] = out
        return out

    while frontier:
        cfg, progress, depth = frontier.popleft()
        if depth >= max_depth:
            continue
        for t in eng.step(cfg):
            nxt = progress
            if isinstance(t.label, Observable):
                ev = t.label.event
                if not selector.allows_before(ev):
                    continue
                if progress < need and ev == selector.require[progress]:
                    nxt += 1
            kind = _BLOCK_END.get(t.block_end)
            if kind is not None and kind in selector.terminals and nxt == need:
                results |= after(t.target, max_depth - depth - 1)
            key = (t.target, nxt)
            if key not in seen:
                seen.add(key)
                frontier.append((t.target, nxt, depth + 1))
    return sorted(results, key=lambda seq: [e.sort_key() for e in seq])


def compensation_trace(init, selector=FaultSelector(), max_depth=DEFAULT_DEPTH, opts=None,
                       model=None, engine=None) -> tuple:
    """The first (in sorted order) compensation phase matching the selector."""
    found = compensation_traces(init, selector, max_depth, opts, model, engine)
    if not found:
        raise NoMatchingPath("no block-ending transition matches the selector within the bounds")
    return found[0]


# -- serialisation -----------------------------------------------------------


def lts_to_text(lts: Lts) -> str:
    """Canonical text: sorted state lines, then sorted transition lines."""
    lines = []
    for i, cfg in enumerate(lts.states):
        flags = " truncated" if i in lts.truncated else ""
        init = " initial" if i == lts.initial else ""
        lines.append((0, i, f"state {i} {show_config(cfg)}{init}{flags}"))
    for src, label, rule, dst in lts.transitions:
        lines.append((1, (src, dst, show_label(label), rule),
                      f"trans {src} {show_label(label)} {rule} {dst}"))
    return "\n".join(text for *_, text in sorted(lines)) + "\n"


def lts_to_json(lts: Lts) -> str:
    data = {
        "initial": lts.initial,
        "states": [
            {
                "id": i,
                "process": show(cfg.proc),
                "sigma": dict(cfg.sigma.items),
                "rho": {k: show(v) for k, v in cfg.rho.items},
                "truncated": i in lts.truncated,
            }
            for i, cfg in enumerate(lts.states)
        ],
        "transitions": [
            {"src": s, "label": show_label(l), "rule": r, "dst": d}
            for s, l, r, d in sorted(lts.transitions, key=lambda t: (t[0], t[3], show_label(t[1]), t[2]))
        ],
    }
    return json.dumps(data, indent=2, ensure_ascii=False, sort_keys=True) + "\n"


def _dot_escape(text):
    return text.replace("\\", "\\\\").replace('"', '\\"')


def lts_to_dot(lts: Lts) -> str:
    """Graphviz rendering; states that completed with a terminal event are shaded."""
    shaded = lts.terminal_completions()
    out = ["digraph lts {", "  node [shape=box, fontname=monospace];"]
    for i, cfg in enumerate(lts.states):
        attrs = [f'label="{i}: {_dot_escape(show(cfg.proc))}"']
        if cfg.sigma.items or cfg.rho.items:
            attrs[0] = (f'label="{i}: {_dot_escape(show(cfg.proc))}\\n'
                        f'{_dot_escape(show_sigma(cfg.sigma))} {_dot_escape(show_rho(cfg.rho))}"')
        if i in shaded:
            attrs.append("style=filled, fillcolor=lightgrey")
        if i in lts.truncated:
            attrs.append("peripheries=2")
        if i == lts.initial:
            attrs.append("penwidth=2")
        out.append(f"  s{i} [{', '.join(attrs)}];")
    for src, label, rule, dst in sorted(lts.transitions, key=lambda t: (t[0], t[3], show_label(t[1]), t[2])):
        out.append(f'  s{src} -> s{dst} [label="{_dot_escape(show_label(label))}"];')
    out.append("}")
    return "\n".join(out) + "\n"


def traces_to_json(found) -> str:
    data = [{"labels": [show_label(l) for l in t.labels], "marker": t.marker}
            for t in sorted_traces(found)]
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


# -- interactive stepping ----------------------------------------------------


class Stepper:
    """Walks one execution, keeping history for undo; drives the REPL."""

    def __init__(self, init, model=None, opts=None, seed=0, engine=None):
        self.engine = _engine(model, opts, engine)
        self.history = [init]
        self.labels = []
        self.rng = random.Random(seed)

    @property
    def current(self):
        return self.history[-1]

    def enabled(self):
        return self.engine.step(self.current)

    def choose(self, n):
        options = self.enabled()
        if not 0 <= n < len(options):
            raise IndexError(f"choice {n} out of range (0..{len(options) - 1})")
        t = options[n]
        self.history.append(t.target)
        self.labels.append(t.label)
        return t

    def undo(self):
        if len(self.history) == 1:
            return False
        self.history.pop()
        self.labels.pop()
        return True

    def random_walk(self, steps):
        taken = []
        for _ in range(steps):
            options = self.enabled()
            if not options:
                break
            taken.append(self.choose(self.rng.randrange(len(options))))
        return taken

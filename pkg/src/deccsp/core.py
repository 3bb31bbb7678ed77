"""Events, labels, process terms, stores and configurations.

Every value here is immutable and compares structurally, so configurations
can be used directly as dictionary keys by the explorer.
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass, fields

from .errors import UnboundDataVariable


# -- terminal events ---------------------------------------------------------


class TerminalEvent(enum.IntEnum):
    """The three completion signals, ordered FAULT < YIELD < DONE."""

    FAULT = 0
    YIELD = 1
    DONE = 2

    @property
    def symbol(self):
        return _TERMINAL_SYMBOL[self]

    def __str__(self):
        return self.symbol


_TERMINAL_SYMBOL = {
    TerminalEvent.FAULT: "!",
    TerminalEvent.YIELD: "?",
    TerminalEvent.DONE: "✓",
}

FAULT, YIELD, DONE = TerminalEvent.FAULT, TerminalEvent.YIELD, TerminalEvent.DONE

# Composition of terminal events of two parallel branches.
TERMINAL_TABLE = {
    (FAULT, FAULT): FAULT, (FAULT, YIELD): FAULT, (FAULT, DONE): FAULT,
    (YIELD, FAULT): FAULT, (YIELD, YIELD): YIELD, (YIELD, DONE): YIELD,
    (DONE, FAULT): FAULT, (DONE, YIELD): YIELD, (DONE, DONE): DONE,
}


def compose_terminal(w: TerminalEvent, w2: TerminalEvent) -> TerminalEvent:
    return TERMINAL_TABLE[w, w2]


# -- hash-caching frozen dataclasses -----------------------------------------


def node(cls):
    """Frozen dataclass whose (recursive) hash is computed once."""
    cls = dataclass(frozen=True)(cls)
    generated = cls.__hash__

    def __hash__(self):
        try:
            return self.__dict__["_hash"]
        except KeyError:
            h = generated(self)
            object.__setattr__(self, "_hash", h)
            return h

    cls.__hash__ = __hash__
    return cls


# -- events and labels -------------------------------------------------------


@node
class EventName:
    """``a``, ``a.b`` or ``a.b.3.4``: atoms followed by integer data."""

    parts: tuple
    data: tuple = ()

    def __post_init__(self):
        if not self.parts:
            raise ValueError("an event name needs at least one atom")
        for p in self.parts:
            if not p or not isinstance(p, str) or any(c in p for c in " \t\n.!?{},;()[]"):
                raise ValueError(f"bad atom {p!r} in event name")

    @classmethod
    def parse(cls, text):
        """Build from dotted text; integer components become data."""
        parts, data = [], []
        for comp in text.split("."):
            if comp.lstrip("-").isdigit():
                data.append(int(comp))
            elif data:
                raise ValueError(f"atom after data in {text!r}")
            else:
                parts.append(comp)
        return cls(tuple(parts), tuple(data))

    @functools.cached_property
    def channel(self):
        return EventName(self.parts) if self.data else self

    def with_data(self, data):
        return EventName(self.parts, tuple(data))

    def __str__(self):
        comps = list(self.parts)
        comps += [str(d) if d >= 0 else f"({d})" for d in self.data]
        return ".".join(comps)

    def sort_key(self):
        return (self.parts, self.data)


def event(text) -> EventName:
    return EventName.parse(text)


class Label:
    """What a transition emits."""

    __slots__ = ()


@node
class Observable(Label):
    event: EventName

    def __str__(self):
        return str(self.event)


@node
class Tau(Label):
    def __str__(self):
        return "tau"


@node
class Terminal(Label):
    terminal: TerminalEvent

    def __str__(self):
        return self.terminal.symbol


TAU = Tau()
TICK = Terminal(DONE)
BANG = Terminal(FAULT)
QUERY = Terminal(YIELD)


def obs(text) -> Observable:
    return Observable(EventName.parse(text))


def label_key(label):
    """Observable (lexicographic) < tau < terminal (! < ? < tick)."""
    if isinstance(label, Observable):
        return (0, label.event.sort_key(), 0)
    if isinstance(label, Tau):
        return (1, (), 0)
    return (2, (), int(label.terminal))


def in_event_set(e: EventName, events) -> bool:
    """Membership where a bare channel name covers all of its data events."""
    if e in events:
        return True
    return bool(e.data) and e.channel in events


# -- communication events ----------------------------------------------------


class CommEvent:
    __slots__ = ()


@node
class Plain(CommEvent):
    name: EventName


@node
class Input(CommEvent):
    """``ch?x?y``: binds one data variable per field."""

    channel: EventName
    vars: tuple


@node
class Output(CommEvent):
    """``ch!e1!e2``: emits the values of the expressions."""

    channel: EventName
    exprs: tuple


@node
class Dotted(CommEvent):
    """``base.e1.e2`` with non-constant data components."""

    base: EventName
    exprs: tuple


# -- process terms -----------------------------------------------------------


class Process:
    __slots__ = ()


class StandardProcess(Process):
    __slots__ = ()


class CompensableProcess(Process):
    __slots__ = ()


@node
class Nil(StandardProcess):
    """The inert process; stands for both the empty process and STOP."""


@node
class Skip(StandardProcess):
    pass


@node
class Throw(StandardProcess):
    pass


@node
class Yield(StandardProcess):
    pass


@node
class Atomic(StandardProcess):
    event: CommEvent


@node
class Prefix(StandardProcess):
    event: CommEvent
    body: StandardProcess


@node
class Seq(StandardProcess):
    left: StandardProcess
    right: StandardProcess


@node
class ExtChoice(StandardProcess):
    left: StandardProcess
    right: StandardProcess


@node
class IntChoice(StandardProcess):
    left: StandardProcess
    right: StandardProcess


@node
class Parallel(StandardProcess):
    sync: frozenset
    left: StandardProcess
    right: StandardProcess


@node
class InterruptHandler(StandardProcess):
    body: StandardProcess
    handler: StandardProcess


@node
class Hide(StandardProcess):
    body: StandardProcess
    hidden: frozenset


@node
class Rename(StandardProcess):
    body: StandardProcess
    relation: frozenset  # of (EventName, EventName) pairs


@node
class TransactionBlock(StandardProcess):
    body: CompensableProcess


@node
class If(StandardProcess):
    cond: object
    then: StandardProcess
    orelse: StandardProcess


@node
class While(StandardProcess):
    cond: object
    body: StandardProcess


@node
class Named(StandardProcess):
    name: str


@node
class Assign(StandardProcess):
    var: str
    value: StandardProcess


@node
class ProcVarRef(StandardProcess):
    var: str


@node
class AuxStd(StandardProcess):
    """Runs ``first``; when it terminates, continues as ``second``. Internal."""

    first: StandardProcess
    second: StandardProcess


@node
class EmitTerminal(StandardProcess):
    """Performs one terminal event and stops. Internal."""

    terminal: TerminalEvent


@node
class CompPair(CompensableProcess):
    forward: StandardProcess
    comp: StandardProcess


@node
class VarCompPair(CompensableProcess):
    forward: StandardProcess
    var: str


@node
class CSeq(CompensableProcess):
    left: CompensableProcess
    right: CompensableProcess


@node
class CExtChoice(CompensableProcess):
    left: CompensableProcess
    right: CompensableProcess


@node
class CIntChoice(CompensableProcess):
    left: CompensableProcess
    right: CompensableProcess


@node
class CParallel(CompensableProcess):
    sync: frozenset
    left: CompensableProcess
    right: CompensableProcess


@node
class SpecChoice(CompensableProcess):
    left: CompensableProcess
    right: CompensableProcess


@node
class CHide(CompensableProcess):
    body: CompensableProcess
    hidden: frozenset


@node
class CRename(CompensableProcess):
    body: CompensableProcess
    relation: frozenset


@node
class CIf(CompensableProcess):
    cond: object
    then: CompensableProcess
    orelse: CompensableProcess


@node
class CWhile(CompensableProcess):
    cond: object
    body: CompensableProcess


@node
class NamedComp(CompensableProcess):
    name: str


@node
class AuxComp(CompensableProcess):
    """Runs ``rest``; ``accumulated`` is the compensation recorded so far. Internal."""

    rest: CompensableProcess
    accumulated: StandardProcess


NIL = Nil()
SKIP = Skip()
THROW = Throw()
YIELD_P = Yield()

SKIPP = CompPair(SKIP, SKIP)
THROWW = CompPair(THROW, SKIP)
YIELDD = CompPair(YIELD_P, SKIP)

INTERNAL_FORMS = (AuxStd, AuxComp, EmitTerminal)


def children(proc):
    """Direct process sub-terms, in field order."""
    return [getattr(proc, f.name) for f in fields(proc)
            if isinstance(getattr(proc, f.name), Process)]


def subterms(proc):
    """Pre-order walk over the term (named definitions are not followed)."""
    stack = [proc]
    while stack:
        p = stack.pop()
        yield p
        stack.extend(reversed(children(p)))


def has_internal_forms(proc) -> bool:
    return any(isinstance(p, INTERNAL_FORMS) for p in subterms(proc))


def free_process_vars(proc) -> set:
    """Process variables occurring in variable pairs, references or assignments."""
    out = set()
    for p in subterms(proc):
        if isinstance(p, (VarCompPair, Assign, ProcVarRef)):
            out.add(p.var)
    return out


# -- stores and configurations -----------------------------------------------


@node
class _FrozenMap:
    items: tuple = ()

    @classmethod
    def of(cls, mapping=None, **kw):
        merged = dict(mapping or {}, **kw)
        return cls(tuple(sorted(merged.items())))

    def as_dict(self):
        return dict(self.items)

    def __contains__(self, key):
        return any(k == key for k, _ in self.items)

    def __len__(self):
        return len(self.items)

    def keys(self):
        return [k for k, _ in self.items]

    def get(self, key, default=None):
        for k, v in self.items:
            if k == key:
                return v
        return default

    def set(self, key, value):
        d = dict(self.items)
        d[key] = value
        return type(self)(tuple(sorted(d.items())))

    def update(self, mapping):
        if not mapping:
            return self
        d = dict(self.items)
        d.update(mapping)
        return type(self)(tuple(sorted(d.items())))


@node
class LocalStore(_FrozenMap):
    """Data variables to integers."""

    def lookup(self, name) -> int:
        for k, v in self.items:
            if k == name:
                return v
        raise UnboundDataVariable(name)


@node
class GlobalStore(_FrozenMap):
    """Process variables to (closed) standard processes."""


EMPTY_SIGMA = LocalStore()
EMPTY_RHO = GlobalStore()


@node
class Configuration:
    proc: Process
    sigma: LocalStore = EMPTY_SIGMA
    rho: GlobalStore = EMPTY_RHO

    @property
    def is_compensable(self):
        return isinstance(self.proc, CompensableProcess)


# -- data variables inside process terms -------------------------------------


def _comm_reads(ev):
    from .expr import expr_vars

    if isinstance(ev, (Output, Dotted)):
        out = set()
        for e in ev.exprs:
            out |= expr_vars(e)
        return out
    return set()


def data_reads(proc) -> set:
    """Data variables read by expressions anywhere in the term."""
    from .expr import expr_vars

    out = set()
    for p in subterms(proc):
        if isinstance(p, (Atomic, Prefix)):
            out |= _comm_reads(p.event)
        elif isinstance(p, (If, CIf, While, CWhile)):
            out |= expr_vars(p.cond)
    return out


def data_binders(proc) -> set:
    """Data variables bound by inputs anywhere in the term."""
    out = set()
    for p in subterms(proc):
        if isinstance(p, (Atomic, Prefix)) and isinstance(p.event, Input):
            out.update(p.event.vars)
    return out


def _subst_comm(ev, values):
    from .expr import fold_int, subst_expr

    if isinstance(ev, Output):
        return Output(ev.channel, tuple(subst_expr(e, values) for e in ev.exprs))
    if isinstance(ev, Dotted):
        exprs = tuple(subst_expr(e, values) for e in ev.exprs)
        folded = [fold_int(e) for e in exprs]
        if all(v is not None for v in folded):
            return Plain(ev.base.with_data(tuple(folded)))
        return Dotted(ev.base, exprs)
    return ev


def substitute_data(proc, values):
    """Replace reads of the given data variables by integer literals.

    Input binders are left in place; constant dotted events fold to plain ones.
    """
    from .expr import subst_expr

    if not values:
        return proc
    inner = values
    if isinstance(proc, Prefix) and isinstance(proc.event, Input):
        # the input rebinds its variables for the body
        inner = {k: v for k, v in values.items() if k not in proc.event.vars}
    kwargs = {}
    for f in fields(proc):
        v = getattr(proc, f.name)
        if isinstance(v, Process):
            v = substitute_data(v, inner)
        elif isinstance(v, CommEvent):
            v = _subst_comm(v, values)
        elif f.name == "cond":
            v = subst_expr(v, values)
        kwargs[f.name] = v
    return type(proc)(**kwargs)

"""Small-step transition function over configurations ((p, sigma), rho).

``step`` returns every transition derivable from the rule set, in a fixed
order: rule group, then left operand before right, then label order inside
the operand. Each transition carries the identifier of the outermost rule
that produced it (see ``deccsp.rules`` for the catalogue).

Inputs are handled symbolically while the derivation climbs the term: an
``ch?x`` step yields an internal ``Recv`` label that is resolved either by a
synchronising partner inside a parallel composition, or by enumerating the
channel's declared domain when it reaches a hiding/renaming operator that
mentions the channel or the top of the term.
"""

from __future__ import annotations

import itertools
from typing import NamedTuple

from . import core as c
from .core import BANG, QUERY, TAU, TICK, Observable, Tau, Terminal
from .errors import (
    EnumerationLimitExceeded,
    SemanticError,
    UnboundProcessVariable,
    UnresolvedName,
    UnsynchronizedInputWithoutDomain,
)
from .expr import BoolLit, eval_bool, eval_int  # noqa: F401  (re-exported)
from .options import DEFAULT_OPTIONS, EngineOptions, FaultMode, UnassignedMode  # noqa: F401


@c.node
class Recv:
    """Pending input on ``channel``; never escapes ``step``."""

    channel: c.EventName
    vars: tuple

    def __str__(self):
        return str(self.channel) + "".join(f"?{v}" for v in self.vars)


class Transition(NamedTuple):
    label: object
    target: c.Configuration
    rule: str
    block_end: str = ""  # "block.fault"/"block.yield" when a transaction block ended inside


class _Step(NamedTuple):
    label: object
    proc: c.Process
    sigma: c.LocalStore
    rho: c.GlobalStore
    rule: str
    block_end: str = ""


_MISSING = object()


def _merge(base, left, right):
    """Combine two stores derived from ``base`` by independent steps."""
    if right is base:
        return left
    if left is base:
        return right
    changes = {k: v for k, v in right.items if base.get(k, _MISSING) != v}
    return left.update(changes)


def _touches(channel, events):
    """Whether an event set mentions ``channel`` or any of its data events."""
    return any(e.parts == channel.parts for e in events)


def _matches(recv, ev):
    return ev.parts == recv.channel.parts and len(ev.data) == len(recv.vars)


def apply_renaming(label, relation):
    """Images of ``label`` under the renaming relation, in label order."""
    if not isinstance(label, Observable):
        return [label]
    a = label.event
    images = set()
    for old, new in relation:
        if old == a:
            images.add(new)
        elif a.data and not old.data and old.parts == a.parts:
            images.add(new.with_data(new.data + a.data))
    if not images:
        return [label]
    return sorted((Observable(b) for b in images), key=c.label_key)


class Engine:
    """Transition function bound to one model's definitions, domains and options."""

    def __init__(self, model=None, opts=None):
        self.model = model
        if opts is None:
            opts = model.options if model is not None else DEFAULT_OPTIONS
        self.opts = opts
        self._cache = {}
        self._step_cache = {}

    # -- public ---------------------------------------------------------------

    def step(self, config: c.Configuration) -> list:
        hit = self._step_cache.get(config)
        if hit is None:
            hit = self._step_cache[config] = tuple(self._step(config))
        return list(hit)

    def _step(self, config):
        out, seen = [], set()
        for s in self._steps(config.proc, config.sigma, config.rho):
            for e in self._expand(s):
                target = c.Configuration(e.proc, e.sigma, e.rho)
                key = (e.label, target)
                if key not in seen:
                    seen.add(key)
                    out.append(Transition(e.label, target, e.rule, e.block_end))
        return out

    # -- helpers --------------------------------------------------------------

    def _definition(self, name):
        model = self.model
        if model is not None:
            if name in model.standard_defs:
                return model.standard_defs[name]
            if name in model.compensable_defs:
                return model.compensable_defs[name]
        raise UnresolvedName(f"no definition for process {name}")

    def domain_values(self, channel, arity):
        """All data tuples the channel may carry, in sorted order."""
        domains = self.model.channel_domains if self.model is not None else {}
        fields_ = domains.get(channel)
        if fields_ is None:
            raise UnsynchronizedInputWithoutDomain(channel)
        if len(fields_) != arity:
            raise SemanticError(
                f"channel {channel} is declared with {len(fields_)} fields but used with {arity}")
        size = 1
        for f in fields_:
            size *= len(f)
        limit = self.opts.max_channel_enumeration
        if size > limit:
            raise EnumerationLimitExceeded(channel, size, limit)
        return list(itertools.product(*(sorted(f) for f in fields_)))

    def _expand(self, s):
        """Resolve a pending input over the channel domain (no-op for other labels)."""
        if not isinstance(s.label, Recv):
            return [s]
        r = s.label
        out = []
        for vals in self.domain_values(r.channel, len(r.vars)):
            ev = r.channel.with_data(vals)
            sigma = s.sigma.update(dict(zip(r.vars, vals)))
            out.append(_Step(Observable(ev), s.proc, sigma, s.rho, s.rule))
        return out

    def _fire(self, ev, sigma):
        if isinstance(ev, c.Plain):
            return Observable(ev.name)
        if isinstance(ev, c.Input):
            return Recv(ev.channel, ev.vars)
        if isinstance(ev, c.Output):
            return Observable(ev.channel.with_data(tuple(eval_int(e, sigma) for e in ev.exprs)))
        if isinstance(ev, c.Dotted):
            values = tuple(eval_int(e, sigma) for e in ev.exprs)
            return Observable(ev.base.with_data(ev.base.data + values))
        raise TypeError(ev)

    def _steps(self, p, sigma, rho):
        key = (p, sigma, rho)
        hit = self._cache.get(key)
        if hit is None:
            hit = tuple(_DISPATCH[type(p)](self, p, sigma, rho))
            self._cache[key] = hit
        return hit

    # -- primitives -------------------------------------------------------------

    def _nil(self, p, sigma, rho):
        return []

    def _skip(self, p, sigma, rho):
        return [_Step(TICK, c.NIL, sigma, rho, "skip")]

    def _throw(self, p, sigma, rho):
        return [_Step(BANG, c.NIL, sigma, rho, "throw")]

    def _yield(self, p, sigma, rho):
        return [_Step(QUERY, c.NIL, sigma, rho, "yield.yield"),
                _Step(TICK, c.NIL, sigma, rho, "yield.done")]

    def _emit(self, p, sigma, rho):
        return [_Step(Terminal(p.terminal), c.NIL, sigma, rho, "emit")]

    def _atomic(self, p, sigma, rho):
        label = self._fire(p.event, sigma)
        out = [_Step(label, c.SKIP, sigma, rho, "atomic")]
        if self.opts.interruptible_atoms:
            out.append(_Step(QUERY, c.NIL, sigma, rho, "atomic.interrupt-before"))
            out.append(_Step(label, c.NIL, sigma, rho, "atomic.interrupt-after"))
        return out

    def _prefix(self, p, sigma, rho):
        return [_Step(self._fire(p.event, sigma), p.body, sigma, rho, "prefix")]

    # -- standard operators -----------------------------------------------------

    def _seq(self, p, sigma, rho):
        out = []
        for s in self._steps(p.left, sigma, rho):
            if s.label == TICK:
                out.append(_Step(TAU, p.right, s.sigma, s.rho, "seq.done"))
            elif isinstance(s.label, Terminal):
                if s.proc == c.NIL:
                    out.append(s._replace(rule="seq.abort"))
            else:
                out.append(s._replace(proc=c.Seq(s.proc, p.right), rule="seq.lift"))
        return out

    def _choice(self, p, sigma, rho, make, prefix):
        out = []
        for side, other in (("left", p.right), ("right", p.left)):
            sub = p.left if side == "left" else p.right
            for s in self._steps(sub, sigma, rho):
                if isinstance(s.label, Tau):
                    lifted = make(s.proc, other) if side == "left" else make(other, s.proc)
                    out.append(s._replace(proc=lifted, rule=f"{prefix}.tau-{side}"))
                else:
                    out.append(s._replace(rule=f"{prefix}.{side}"))
        return out

    def _ext(self, p, sigma, rho):
        return self._choice(p, sigma, rho, c.ExtChoice, "ext")

    def _int(self, p, sigma, rho):
        return [_Step(TAU, p.left, sigma, rho, "int.left"),
                _Step(TAU, p.right, sigma, rho, "int.right")]

    def _handler(self, p, sigma, rho):
        out = []
        for s in self._steps(p.body, sigma, rho):
            if s.label == BANG:
                out.append(_Step(TAU, p.handler, s.sigma, s.rho, "handler.catch", s.block_end))
            elif isinstance(s.label, Terminal):
                if s.proc == c.NIL:
                    out.append(s._replace(rule="handler.pass"))
            else:
                out.append(s._replace(proc=c.InterruptHandler(s.proc, p.handler),
                                      rule="handler.lift"))
        return out

    def _prepare_sync(self, steps, sync):
        """Split into (interleaving steps, synchronisation candidates, terminal steps)."""
        solo, cands, terms = [], [], []
        for s in steps:
            if isinstance(s.label, Terminal):
                terms.append(s)
            elif isinstance(s.label, Tau):
                solo.append(s)
            elif isinstance(s.label, Recv):
                ch = s.label.channel
                if ch in sync:
                    cands.append(s)
                elif _touches(ch, sync):
                    for e in self._expand(s):
                        (cands if c.in_event_set(e.label.event, sync) else solo).append(e)
                else:
                    solo.append(s)
            elif c.in_event_set(s.label.event, sync):
                cands.append(s)
            else:
                solo.append(s)
        return solo, cands, terms

    def _sync_pairs(self, sigma, ls, rs):
        """Matching synchronisation candidates; yields (label, left, right, sigma')."""
        for l in ls:
            for r in rs:
                a, b = l.label, r.label
                if isinstance(a, Observable) and isinstance(b, Observable):
                    if a == b:
                        yield a, l, r, _merge(sigma, l.sigma, r.sigma)
                elif isinstance(a, Recv) and isinstance(b, Observable):
                    if _matches(a, b.event):
                        bound = l.sigma.update(dict(zip(a.vars, b.event.data)))
                        yield b, l, r, _merge(sigma, bound, r.sigma)
                elif isinstance(a, Observable) and isinstance(b, Recv):
                    if _matches(b, a.event):
                        bound = r.sigma.update(dict(zip(b.vars, a.event.data)))
                        yield a, l, r, _merge(sigma, l.sigma, bound)
                elif (isinstance(a, Recv) and isinstance(b, Recv)
                      and a.channel == b.channel and len(a.vars) == len(b.vars)):
                    for e in self._expand(l):
                        vals = e.label.event.data
                        bound = r.sigma.update(dict(zip(b.vars, vals)))
                        yield e.label, e, r, _merge(sigma, e.sigma, bound)

    def _parallel(self, p, sigma, rho, compensable=False):
        prefix = "cpar" if compensable else "par"
        make = c.CParallel if compensable else c.Parallel
        sync = p.sync
        ls, lc, lt = self._prepare_sync(self._steps(p.left, sigma, rho), sync)
        rs, rc, rt = self._prepare_sync(self._steps(p.right, sigma, rho), sync)
        out = []
        for s in ls:
            out.append(s._replace(proc=make(sync, s.proc, p.right), rule=f"{prefix}.left"))
        for s in rs:
            out.append(s._replace(proc=make(sync, p.left, s.proc), rule=f"{prefix}.right"))
        for label, l, r, sig in self._sync_pairs(sigma, lc, rc):
            out.append(_Step(label, make(sync, l.proc, r.proc), sig,
                             _merge(rho, l.rho, r.rho), f"{prefix}.sync"))
        for l in lt:
            for r in rt:
                label = Terminal(c.compose_terminal(l.label.terminal, r.label.terminal))
                sig, rh = _merge(sigma, l.sigma, r.sigma), _merge(rho, l.rho, r.rho)
                if compensable:
                    out.append(_Step(label, c.Parallel(sync, l.proc, r.proc), sig, rh,
                                     "cpar.terminal"))
                elif l.proc == c.NIL and r.proc == c.NIL:
                    out.append(_Step(label, c.NIL, sig, rh, "par.terminal"))
        return out

    def _hide(self, p, sigma, rho, compensable=False):
        prefix = "chide" if compensable else "hide"
        make = c.CHide if compensable else c.Hide
        out = []
        for s in self._steps(p.body, sigma, rho):
            if isinstance(s.label, Terminal):
                if compensable:
                    out.append(s._replace(proc=c.Hide(s.proc, p.hidden), rule="chide.terminal"))
                elif s.proc == c.NIL:
                    out.append(s._replace(rule="hide.terminal"))
                continue
            expanded = [s]
            if isinstance(s.label, Recv) and _touches(s.label.channel, p.hidden):
                expanded = self._expand(s)
            for e in expanded:
                lifted = make(e.proc, p.hidden)
                if isinstance(e.label, Observable) and c.in_event_set(e.label.event, p.hidden):
                    out.append(e._replace(label=TAU, proc=lifted, rule=f"{prefix}.hide"))
                else:
                    out.append(e._replace(proc=lifted, rule=f"{prefix}.lift"))
        return out

    def _rename(self, p, sigma, rho, compensable=False):
        prefix = "crename" if compensable else "rename"
        make = c.CRename if compensable else c.Rename
        sources = {a for a, _ in p.relation}
        out = []
        for s in self._steps(p.body, sigma, rho):
            if isinstance(s.label, Terminal):
                if compensable:
                    out.append(s._replace(proc=c.Rename(s.proc, p.relation),
                                          rule="crename.terminal"))
                elif s.proc == c.NIL:
                    out.append(s._replace(rule="rename.terminal"))
                continue
            if isinstance(s.label, Tau):
                out.append(s._replace(proc=make(s.proc, p.relation), rule=f"{prefix}.tau"))
                continue
            expanded = [s]
            if isinstance(s.label, Recv) and _touches(s.label.channel, sources):
                expanded = self._expand(s)
            for e in expanded:
                lifted = make(e.proc, p.relation)
                for label in apply_renaming(e.label, p.relation):
                    out.append(e._replace(label=label, proc=lifted, rule=f"{prefix}.event"))
        return out

    def _block(self, p, sigma, rho):
        out = []
        for s in self._steps(p.body, sigma, rho):
            if s.label == BANG:
                label = TAU if self.opts.fault_mode == FaultMode.CONTAIN else BANG
                out.append(s._replace(label=label, rule="block.fault", block_end="block.fault"))
            elif s.label == QUERY:
                out.append(s._replace(rule="block.yield", block_end="block.yield"))
            elif s.label == TICK:
                out.append(s._replace(proc=c.NIL, rule="block.done"))
            else:
                out.append(s._replace(proc=c.TransactionBlock(s.proc), rule="block.lift"))
        return out

    def _if(self, p, sigma, rho, compensable=False):
        prefix = "cif" if compensable else "if"
        if isinstance(p.cond, BoolLit):
            if p.cond.value:
                return [_Step(TAU, p.then, sigma, rho, f"{prefix}.true")]
            return [_Step(TAU, p.orelse, sigma, rho, f"{prefix}.false")]
        value = BoolLit(eval_bool(p.cond, sigma))
        make = c.CIf if compensable else c.If
        return [_Step(TAU, make(value, p.then, p.orelse), sigma, rho, f"{prefix}.eval")]

    def _while(self, p, sigma, rho):
        unfolded = c.If(p.cond, c.Seq(p.body, p), c.SKIP)
        return [_Step(TAU, unfolded, sigma, rho, "while")]

    def _named(self, p, sigma, rho):
        return [_Step(TAU, self._definition(p.name), sigma, rho, "named")]

    def _assign(self, p, sigma, rho):
        free = c.data_reads(p.value) - c.data_binders(p.value)
        values = {v: sigma.lookup(v) for v in sorted(free)}
        closed = c.substitute_data(p.value, values)
        return [_Step(TAU, c.SKIP, sigma, rho.set(p.var, closed), "assign")]

    def _retrieve(self, p, sigma, rho):
        value = rho.get(p.var)
        if value is not None:
            return [_Step(TAU, value, sigma, rho, "retrieve")]
        if self.opts.unassigned_vars == UnassignedMode.DEFAULT_SKIP:
            return [_Step(TAU, c.SKIP, sigma, rho, "retrieve.default-skip")]
        raise UnboundProcessVariable(p.var)

    def _aux_std(self, p, sigma, rho):
        out = []
        for s in self._steps(p.first, sigma, rho):
            if isinstance(s.label, Terminal):
                if s.proc == c.NIL:
                    out.append(s._replace(proc=p.second, rule="aux-std.end"))
            else:
                out.append(s._replace(proc=c.AuxStd(s.proc, p.second), rule="aux-std.lift"))
        return out

    # -- compensable operators --------------------------------------------------

    def _pair(self, p, sigma, rho):
        sugar = {c.SKIPP: "skipp", c.THROWW: "throww", c.YIELDD: "yieldd"}.get(p)
        out = []
        for s in self._steps(p.forward, sigma, rho):
            if s.label == TICK:
                if s.proc == c.NIL:
                    out.append(s._replace(proc=p.comp, rule=sugar or "pair.done"))
            elif isinstance(s.label, Terminal):
                if s.proc == c.NIL:
                    out.append(s._replace(proc=c.SKIP, rule=sugar or "pair.abort"))
            else:
                out.append(s._replace(proc=c.CompPair(s.proc, p.comp), rule="pair.lift"))
        return out

    def _var_pair(self, p, sigma, rho):
        out = []
        for s in self._steps(p.forward, sigma, rho):
            if s.label == TICK:
                if s.proc == c.NIL:
                    out.append(s._replace(proc=c.ProcVarRef(p.var), rule="varpair.done"))
            elif isinstance(s.label, Terminal):
                if s.proc == c.NIL:
                    out.append(s._replace(proc=c.SKIP, rule="varpair.abort"))
            else:
                out.append(s._replace(proc=c.VarCompPair(s.proc, p.var), rule="varpair.lift"))
        return out

    def _cseq(self, p, sigma, rho):
        out = []
        for s in self._steps(p.left, sigma, rho):
            if s.label == TICK:
                out.append(_Step(TAU, c.AuxComp(p.right, s.proc), s.sigma, s.rho, "cseq.done"))
            elif isinstance(s.label, Terminal):
                out.append(s._replace(rule="cseq.abort"))
            else:
                out.append(s._replace(proc=c.CSeq(s.proc, p.right), rule="cseq.lift"))
        return out

    def _aux_comp(self, p, sigma, rho):
        out = []
        for s in self._steps(p.rest, sigma, rho):
            if isinstance(s.label, Terminal):
                out.append(s._replace(proc=c.Seq(s.proc, p.accumulated), rule="aux-comp.end"))
            else:
                out.append(s._replace(proc=c.AuxComp(s.proc, p.accumulated),
                                      rule="aux-comp.lift"))
        return out

    def _cext(self, p, sigma, rho):
        return self._choice(p, sigma, rho, c.CExtChoice, "cext")

    def _cint(self, p, sigma, rho):
        return [_Step(TAU, p.left, sigma, rho, "cint.left"),
                _Step(TAU, p.right, sigma, rho, "cint.right")]

    def _spec(self, p, sigma, rho):
        out, lt, rt = [], [], []
        for s in self._steps(p.left, sigma, rho):
            if isinstance(s.label, Terminal):
                lt.append(s)
            else:
                out.append(s._replace(proc=c.SpecChoice(s.proc, p.right), rule="speculative.left"))
        for s in self._steps(p.right, sigma, rho):
            if isinstance(s.label, Terminal):
                rt.append(s)
            else:
                out.append(s._replace(proc=c.SpecChoice(p.left, s.proc), rule="speculative.right"))
        for l in lt:
            for r in rt:
                sig, rh = _merge(sigma, l.sigma, r.sigma), _merge(rho, l.rho, r.rho)
                lw, rw = l.label.terminal, r.label.terminal
                if lw != c.DONE and rw != c.DONE:
                    w = c.compose_terminal(lw, rw)
                    target = c.AuxStd(c.EmitTerminal(w), c.Parallel(frozenset(), l.proc, r.proc))
                    out.append(_Step(Terminal(w), target, sig, rh, "speculative.both-fail"))
                elif lw == c.DONE and rw != c.DONE:
                    out.append(_Step(TICK, c.AuxStd(r.proc, l.proc), sig, rh, "speculative.left-commits"))
                elif lw != c.DONE:
                    out.append(_Step(TICK, c.AuxStd(l.proc, r.proc), sig, rh, "speculative.right-commits"))
                else:
                    target = c.ExtChoice(c.AuxStd(r.proc, l.proc), c.AuxStd(l.proc, r.proc))
                    out.append(_Step(TICK, target, sig, rh, "speculative.both-commit"))
        return out

    def _cwhile(self, p, sigma, rho):
        unfolded = c.CIf(p.cond, c.CSeq(p.body, p), c.SKIPP)
        return [_Step(TAU, unfolded, sigma, rho, "cwhile")]

    def _named_comp(self, p, sigma, rho):
        return [_Step(TAU, self._definition(p.name), sigma, rho, "named-comp")]


_DISPATCH = {
    c.Nil: Engine._nil,
    c.Skip: Engine._skip,
    c.Throw: Engine._throw,
    c.Yield: Engine._yield,
    c.EmitTerminal: Engine._emit,
    c.Atomic: Engine._atomic,
    c.Prefix: Engine._prefix,
    c.Seq: Engine._seq,
    c.ExtChoice: Engine._ext,
    c.IntChoice: Engine._int,
    c.InterruptHandler: Engine._handler,
    c.Parallel: Engine._parallel,
    c.Hide: Engine._hide,
    c.Rename: Engine._rename,
    c.TransactionBlock: Engine._block,
    c.If: Engine._if,
    c.While: Engine._while,
    c.Named: Engine._named,
    c.Assign: Engine._assign,
    c.ProcVarRef: Engine._retrieve,
    c.AuxStd: Engine._aux_std,
    c.CompPair: Engine._pair,
    c.VarCompPair: Engine._var_pair,
    c.CSeq: Engine._cseq,
    c.AuxComp: Engine._aux_comp,
    c.CExtChoice: Engine._cext,
    c.CIntChoice: Engine._cint,
    c.CParallel: lambda self, p, s, r: self._parallel(p, s, r, compensable=True),
    c.SpecChoice: Engine._spec,
    c.CHide: lambda self, p, s, r: self._hide(p, s, r, compensable=True),
    c.CRename: lambda self, p, s, r: self._rename(p, s, r, compensable=True),
    c.CIf: lambda self, p, s, r: self._if(p, s, r, compensable=True),
    c.CWhile: Engine._cwhile,
    c.NamedComp: Engine._named_comp,
}


def step(config: c.Configuration, model=None, opts: EngineOptions | None = None) -> list:
    """All transitions of ``config``. Builds a fresh engine; reuse ``Engine`` in loops."""
    return Engine(model, opts).step(config)


def _check(config, *types):
    if not isinstance(config.proc, types):
        names = " or ".join(t.__name__ for t in types)
        raise TypeError(f"expected a {names} configuration, got {type(config.proc).__name__}")


def step_parallel(config, model=None, opts=None) -> list:
    _check(config, c.Parallel, c.CParallel)
    return step(config, model, opts)


def step_transaction(config, model=None, opts=None) -> list:
    _check(config, c.TransactionBlock)
    return step(config, model, opts)


def step_spec_choice(config, model=None, opts=None) -> list:
    _check(config, c.SpecChoice)
    return step(config, model, opts)

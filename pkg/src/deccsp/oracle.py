"""Naive reference interpreter used to cross-check the engine.

Deliberately shares no code with ``semantics`` or ``explorer`` beyond the term
and store types: every rule is restated here as a plain function over the
term, paths are enumerated depth-first with no state sharing, and inputs are
expanded over their channel domain at the point where they fire (so an input
on a channel without a declared domain is an error even when a partner would
supply the value).
"""

from __future__ import annotations

import itertools

from . import core as c
from .errors import (
    EnumerationLimitExceeded,
    SemanticError,
    UnboundProcessVariable,
    UnresolvedName,
    UnsynchronizedInputWithoutDomain,
)
from .expr import BoolLit, eval_bool, eval_int
from .options import DEFAULT_OPTIONS, FaultMode, UnassignedMode

TICK, BANG, QUERY, TAU = c.TICK, c.BANG, c.QUERY, c.TAU


def _term(label):
    return isinstance(label, c.Terminal)


def _obs(label):
    return isinstance(label, c.Observable)


def _member(ev, events):
    return ev in events or (bool(ev.data) and c.EventName(ev.parts) in events)


def _fresh(base, left, right):
    merged = dict(left.items)
    for k, v in right.items:
        if k not in base or base.get(k) != v:
            merged[k] = v
    return type(base).of(merged)


class Oracle:
    def __init__(self, model=None, opts=None):
        self.model = model
        self.opts = opts or (model.options if model is not None else DEFAULT_OPTIONS)

    # event firing

    def events_of(self, ev, sigma):
        """(event, new sigma) pairs the communication can perform."""
        if isinstance(ev, c.Plain):
            return [(ev.name, sigma)]
        if isinstance(ev, c.Output):
            return [(ev.channel.with_data([eval_int(e, sigma) for e in ev.exprs]), sigma)]
        if isinstance(ev, c.Dotted):
            vals = [eval_int(e, sigma) for e in ev.exprs]
            return [(ev.base.with_data(list(ev.base.data) + vals), sigma)]
        domains = self.model.channel_domains if self.model is not None else {}
        if ev.channel not in domains:
            raise UnsynchronizedInputWithoutDomain(ev.channel)
        fields_ = domains[ev.channel]
        if len(fields_) != len(ev.vars):
            raise SemanticError(f"arity mismatch on channel {ev.channel}")
        total = 1
        for f in fields_:
            total *= len(f)
        if total > self.opts.max_channel_enumeration:
            raise EnumerationLimitExceeded(ev.channel, total, self.opts.max_channel_enumeration)
        out = []
        for vals in itertools.product(*[sorted(f) for f in fields_]):
            s2 = sigma
            for var, v in zip(ev.vars, vals):
                s2 = s2.set(var, v)
            out.append((ev.channel.with_data(vals), s2))
        return out

    def lookup(self, name):
        m = self.model
        if m is not None and name in m.standard_defs:
            return m.standard_defs[name]
        if m is not None and name in m.compensable_defs:
            return m.compensable_defs[name]
        raise UnresolvedName(f"no definition for process {name}")

    # the rule table: returns a list of (label, proc, sigma, rho)

    def moves(self, p, s, r):
        k = type(p).__name__
        opts = self.opts
        if k == "Nil":
            return []
        if k == "Skip":
            return [(TICK, c.NIL, s, r)]
        if k == "Throw":
            return [(BANG, c.NIL, s, r)]
        if k == "Yield":
            return [(QUERY, c.NIL, s, r), (TICK, c.NIL, s, r)]
        if k == "EmitTerminal":
            return [(c.Terminal(p.terminal), c.NIL, s, r)]
        if k == "Atomic":
            res = []
            fired = self.events_of(p.event, s)
            for e, s2 in fired:
                res.append((c.Observable(e), c.SKIP, s2, r))
            if opts.interruptible_atoms:
                res.append((QUERY, c.NIL, s, r))
                for e, s2 in fired:
                    res.append((c.Observable(e), c.NIL, s2, r))
            return res
        if k == "Prefix":
            return [(c.Observable(e), p.body, s2, r) for e, s2 in self.events_of(p.event, s)]
        if k == "Seq":
            res = []
            for lab, p2, s2, r2 in self.moves(p.left, s, r):
                if lab == TICK:
                    res.append((TAU, p.right, s2, r2))
                elif _term(lab):
                    if p2 == c.NIL:
                        res.append((lab, c.NIL, s2, r2))
                else:
                    res.append((lab, c.Seq(p2, p.right), s2, r2))
            return res
        if k in ("ExtChoice", "CExtChoice"):
            mk = getattr(c, k)
            res = []
            for lab, p2, s2, r2 in self.moves(p.left, s, r):
                res.append((lab, mk(p2, p.right) if lab == TAU else p2, s2, r2))
            for lab, q2, s2, r2 in self.moves(p.right, s, r):
                res.append((lab, mk(p.left, q2) if lab == TAU else q2, s2, r2))
            return res
        if k in ("IntChoice", "CIntChoice"):
            return [(TAU, p.left, s, r), (TAU, p.right, s, r)]
        if k == "InterruptHandler":
            res = []
            for lab, p2, s2, r2 in self.moves(p.body, s, r):
                if lab == BANG:
                    res.append((TAU, p.handler, s2, r2))
                elif _term(lab):
                    if p2 == c.NIL:
                        res.append((lab, c.NIL, s2, r2))
                else:
                    res.append((lab, c.InterruptHandler(p2, p.handler), s2, r2))
            return res
        if k in ("Parallel", "CParallel"):
            return self.parallel(p, s, r, k == "CParallel")
        if k in ("Hide", "CHide"):
            res = []
            for lab, p2, s2, r2 in self.moves(p.body, s, r):
                if _term(lab):
                    if k == "CHide":
                        res.append((lab, c.Hide(p2, p.hidden), s2, r2))
                    elif p2 == c.NIL:
                        res.append((lab, c.NIL, s2, r2))
                    continue
                hidden = _obs(lab) and _member(lab.event, p.hidden)
                res.append((TAU if hidden else lab, getattr(c, k)(p2, p.hidden), s2, r2))
            return res
        if k in ("Rename", "CRename"):
            res = []
            for lab, p2, s2, r2 in self.moves(p.body, s, r):
                if _term(lab):
                    if k == "CRename":
                        res.append((lab, c.Rename(p2, p.relation), s2, r2))
                    elif p2 == c.NIL:
                        res.append((lab, c.NIL, s2, r2))
                    continue
                wrapped = getattr(c, k)(p2, p.relation)
                if not _obs(lab):
                    res.append((lab, wrapped, s2, r2))
                    continue
                a = lab.event
                targets = [b for x, b in p.relation if x == a]
                targets += [b.with_data(tuple(b.data) + a.data) for x, b in p.relation
                            if a.data and not x.data and x.parts == a.parts]
                for b in (targets or [a]):
                    res.append((c.Observable(b), wrapped, s2, r2))
            return res
        if k == "TransactionBlock":
            res = []
            for lab, p2, s2, r2 in self.moves(p.body, s, r):
                if lab == BANG:
                    res.append((TAU if opts.fault_mode == FaultMode.CONTAIN else BANG, p2, s2, r2))
                elif lab == QUERY:
                    res.append((QUERY, p2, s2, r2))
                elif lab == TICK:
                    res.append((TICK, c.NIL, s2, r2))
                else:
                    res.append((lab, c.TransactionBlock(p2), s2, r2))
            return res
        if k in ("If", "CIf"):
            if isinstance(p.cond, BoolLit):
                return [(TAU, p.then if p.cond.value else p.orelse, s, r)]
            return [(TAU, getattr(c, k)(BoolLit(eval_bool(p.cond, s)), p.then, p.orelse), s, r)]
        if k == "While":
            return [(TAU, c.If(p.cond, c.Seq(p.body, p), c.SKIP), s, r)]
        if k == "CWhile":
            return [(TAU, c.CIf(p.cond, c.CSeq(p.body, p), c.SKIPP), s, r)]
        if k in ("Named", "NamedComp"):
            return [(TAU, self.lookup(p.name), s, r)]
        if k == "Assign":
            binders = c.data_binders(p.value)
            vals = {}
            for v in sorted(c.data_reads(p.value)):
                if v not in binders:
                    vals[v] = s.lookup(v)
            return [(TAU, c.SKIP, s, r.set(p.var, c.substitute_data(p.value, vals)))]
        if k == "ProcVarRef":
            if p.var in r:
                return [(TAU, r.get(p.var), s, r)]
            if opts.unassigned_vars == UnassignedMode.DEFAULT_SKIP:
                return [(TAU, c.SKIP, s, r)]
            raise UnboundProcessVariable(p.var)
        if k == "AuxStd":
            res = []
            for lab, p2, s2, r2 in self.moves(p.first, s, r):
                if not _term(lab):
                    res.append((lab, c.AuxStd(p2, p.second), s2, r2))
                elif p2 == c.NIL:
                    res.append((lab, p.second, s2, r2))
            return res
        if k in ("CompPair", "VarCompPair"):
            res = []
            for lab, p2, s2, r2 in self.moves(p.forward, s, r):
                if not _term(lab):
                    rebuilt = (c.CompPair(p2, p.comp) if k == "CompPair"
                               else c.VarCompPair(p2, p.var))
                    res.append((lab, rebuilt, s2, r2))
                elif p2 != c.NIL:
                    continue
                elif lab == TICK:
                    res.append((lab, p.comp if k == "CompPair" else c.ProcVarRef(p.var), s2, r2))
                else:
                    res.append((lab, c.SKIP, s2, r2))
            return res
        if k == "CSeq":
            res = []
            for lab, p2, s2, r2 in self.moves(p.left, s, r):
                if lab == TICK:
                    res.append((TAU, c.AuxComp(p.right, p2), s2, r2))
                elif _term(lab):
                    res.append((lab, p2, s2, r2))
                else:
                    res.append((lab, c.CSeq(p2, p.right), s2, r2))
            return res
        if k == "AuxComp":
            res = []
            for lab, q2, s2, r2 in self.moves(p.rest, s, r):
                if _term(lab):
                    res.append((lab, c.Seq(q2, p.accumulated), s2, r2))
                else:
                    res.append((lab, c.AuxComp(q2, p.accumulated), s2, r2))
            return res
        if k == "SpecChoice":
            return self.speculative(p, s, r)
        raise TypeError(f"oracle has no rule for {k}")

    def parallel(self, p, s, r, comp):
        mk = c.CParallel if comp else c.Parallel
        A = p.sync
        left = self.moves(p.left, s, r)
        right = self.moves(p.right, s, r)
        res = []
        for lab, p2, s2, r2 in left:
            if lab == TAU or (_obs(lab) and not _member(lab.event, A)):
                res.append((lab, mk(A, p2, p.right), s2, r2))
        for lab, q2, s2, r2 in right:
            if lab == TAU or (_obs(lab) and not _member(lab.event, A)):
                res.append((lab, mk(A, p.left, q2), s2, r2))
        for la, p2, sl, rl in left:
            for lb, q2, sr, rr in right:
                if _obs(la) and la == lb and _member(la.event, A):
                    res.append((la, mk(A, p2, q2), _fresh(s, sl, sr), _fresh(r, rl, rr)))
        for la, p2, sl, rl in left:
            for lb, q2, sr, rr in right:
                if _term(la) and _term(lb):
                    w = c.Terminal(c.TERMINAL_TABLE[la.terminal, lb.terminal])
                    if comp:
                        res.append((w, c.Parallel(A, p2, q2), _fresh(s, sl, sr), _fresh(r, rl, rr)))
                    elif p2 == c.NIL and q2 == c.NIL:
                        res.append((w, c.NIL, _fresh(s, sl, sr), _fresh(r, rl, rr)))
        return res

    def speculative(self, p, s, r):
        left = self.moves(p.left, s, r)
        right = self.moves(p.right, s, r)
        res = []
        for lab, p2, s2, r2 in left:
            if not _term(lab):
                res.append((lab, c.SpecChoice(p2, p.right), s2, r2))
        for lab, q2, s2, r2 in right:
            if not _term(lab):
                res.append((lab, c.SpecChoice(p.left, q2), s2, r2))
        for la, p2, sl, rl in left:
            for lb, q2, sr, rr in right:
                if not (_term(la) and _term(lb)):
                    continue
                s3, r3 = _fresh(s, sl, sr), _fresh(r, rl, rr)
                if la != TICK and lb != TICK:
                    w = c.TERMINAL_TABLE[la.terminal, lb.terminal]
                    res.append((c.Terminal(w),
                                c.AuxStd(c.EmitTerminal(w), c.Parallel(frozenset(), p2, q2)), s3, r3))
                elif la == TICK and lb != TICK:
                    res.append((TICK, c.AuxStd(q2, p2), s3, r3))
                elif la != TICK and lb == TICK:
                    res.append((TICK, c.AuxStd(p2, q2), s3, r3))
                else:
                    res.append((TICK, c.ExtChoice(c.AuxStd(q2, p2), c.AuxStd(p2, q2)), s3, r3))
        return res


def oracle_traces(init: c.Configuration, max_depth=64, opts=None, elide_tau=False, model=None):
    """Trace set computed by walking every path of the naive interpreter."""
    o = Oracle(model, opts)
    found = set()
    markers = {c.DONE: "DONE", c.FAULT: "FAULT", c.YIELD: "YIELDED"}

    def go(p, s, r, depth, acc, last):
        nxt = o.moves(p, s, r)
        if not nxt:
            end = markers[last.terminal] if _term(last) else "DEADLOCK"
            found.add((tuple(acc), end))
            return
        if depth == 0:
            found.add((tuple(acc), "TRUNCATED"))
            return
        for lab, p2, s2, r2 in nxt:
            if elide_tau and lab == TAU:
                go(p2, s2, r2, depth - 1, acc, lab)
            else:
                acc.append(lab)
                go(p2, s2, r2, depth - 1, acc, lab)
                acc.pop()

    go(init.proc, init.sigma, init.rho, max_depth, [], None)
    return found

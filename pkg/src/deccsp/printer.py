"""Canonical ASCII rendering of terms, stores, labels and models.

The output of ``show`` reparses to a structurally equal term for every
parser-reachable AST; internal forms print in a notation the parser rejects.
"""

from __future__ import annotations

from . import core as c
from . import expr as x

# process precedence, loosest first
PAR, PAIR, CHOICE, SEQ, PREFIX, POSTFIX, ATOM = range(1, 8)

_CHOICE_OPS = {
    c.ExtChoice: "[]", c.IntChoice: "|~|", c.InterruptHandler: "[>",
    c.CExtChoice: "[]", c.CIntChoice: "|~|", c.SpecChoice: "<>",
}


def _wrap(text, own, level):
    return f"({text})" if own < level else text


def show_set(events):
    return "{" + ", ".join(str(e) for e in sorted(events, key=c.EventName.sort_key)) + "}"


def show_renaming(relation):
    pairs = sorted(relation, key=lambda ab: (ab[0].sort_key(), ab[1].sort_key()))
    return "[[" + ", ".join(f"{a} <- {b}" for a, b in pairs) + "]]"


def show_comm(ev):
    if isinstance(ev, c.Plain):
        return str(ev.name)
    if isinstance(ev, c.Input):
        return str(ev.channel) + "".join(f"?{v}" for v in ev.vars)
    if isinstance(ev, c.Output):
        return str(ev.channel) + "".join(f"!{show_expr(e, 8)}" for e in ev.exprs)
    if isinstance(ev, c.Dotted):
        return str(ev.base) + "".join(f".{show_expr(e, 8)}" for e in ev.exprs)
    raise TypeError(ev)


def show(p, level=PAR) -> str:
    """Render a process term at the given context precedence."""
    if isinstance(p, c.Nil):
        return "STOP"
    if isinstance(p, c.Skip):
        return "SKIP"
    if isinstance(p, c.Throw):
        return "THROW"
    if isinstance(p, c.Yield):
        return "YIELD"
    if isinstance(p, c.Atomic):
        return show_comm(p.event)
    if isinstance(p, (c.Named, c.NamedComp)):
        return p.name
    if isinstance(p, c.ProcVarRef):
        return p.var
    if isinstance(p, c.Prefix):
        return _wrap(f"{show_comm(p.event)} -> {show(p.body, PREFIX)}", PREFIX, level)
    if isinstance(p, c.Assign):
        return _wrap(f"{p.var} := {show(p.value, POSTFIX)}", PREFIX, level)
    if isinstance(p, (c.Seq, c.CSeq)):
        return _wrap(f"{show(p.left, SEQ)} ; {show(p.right, SEQ + 1)}", SEQ, level)
    if type(p) in _CHOICE_OPS:
        left = p.body if isinstance(p, c.InterruptHandler) else p.left
        right = p.handler if isinstance(p, c.InterruptHandler) else p.right
        text = f"{show(left, CHOICE)} {_CHOICE_OPS[type(p)]} {show(right, CHOICE + 1)}"
        return _wrap(text, CHOICE, level)
    if isinstance(p, (c.Parallel, c.CParallel)):
        op = "||" if not p.sync else "||" + show_set(p.sync)
        return _wrap(f"{show(p.left, PAR + 1)} {op} {show(p.right, PAR)}", PAR, level)
    if isinstance(p, c.CompPair):
        if p == c.SKIPP:
            return "SKIPP"
        if p == c.THROWW:
            return "THROWW"
        if p == c.YIELDD:
            return "YIELDD"
        return _wrap(f"{show(p.forward, CHOICE)} / {show(p.comp, CHOICE)}", PAIR, level)
    if isinstance(p, c.VarCompPair):
        return _wrap(f"{show(p.forward, CHOICE)} / {p.var}", PAIR, level)
    if isinstance(p, (c.Hide, c.CHide)):
        return _wrap(f"{show(p.body, POSTFIX)} \\ {show_set(p.hidden)}", POSTFIX, level)
    if isinstance(p, (c.Rename, c.CRename)):
        return _wrap(f"{show(p.body, POSTFIX)} {show_renaming(p.relation)}", POSTFIX, level)
    if isinstance(p, c.TransactionBlock):
        return f"[ {show(p.body)} ]"
    if isinstance(p, (c.If, c.CIf)):
        text = f"If {show_expr(p.cond)} Then {show(p.then)} Else {show(p.orelse)}"
        return _wrap(text, PAR, level)
    if isinstance(p, (c.While, c.CWhile)):
        return _wrap(f"While {show_expr(p.cond)} Do {show(p.body)}", PAR, level)
    if isinstance(p, c.AuxStd):
        return f"<| {show(p.first)} , {show(p.second)} |>"
    if isinstance(p, c.AuxComp):
        return f"<| {show(p.rest)} ;; {show(p.accumulated)} |>"
    if isinstance(p, c.EmitTerminal):
        return f"EMIT({p.terminal.symbol})"
    raise TypeError(f"cannot print {p!r}")


# expression precedence: or < and < not < comparison < additive < multiplicative < unary < atom
_E_OR, _E_AND, _E_NOT, _E_CMP, _E_ADD, _E_MUL, _E_NEG, _E_ATOM = range(1, 9)


def show_expr(e, level=_E_OR) -> str:
    if isinstance(e, x.IntLit):
        return _wrap(str(e.value), _E_NEG, level) if e.value < 0 else str(e.value)
    if isinstance(e, x.Var):
        return e.name
    if isinstance(e, x.BoolLit):
        return "true" if e.value else "false"
    if isinstance(e, x.Neg):
        return _wrap(f"-{show_expr(e.operand, _E_NEG)}", _E_NEG, level)
    if isinstance(e, x.BinOp):
        own = _E_ADD if e.op in "+-" else _E_MUL
        return _wrap(f"{show_expr(e.left, own)} {e.op} {show_expr(e.right, own + 1)}", own, level)
    if isinstance(e, x.Cmp):
        text = f"{show_expr(e.left, _E_ADD)} {e.op} {show_expr(e.right, _E_ADD)}"
        return _wrap(text, _E_CMP, level)
    if isinstance(e, x.Not):
        return _wrap(f"not {show_expr(e.operand, _E_NOT)}", _E_NOT, level)
    if isinstance(e, x.And):
        return _wrap(f"{show_expr(e.left, _E_AND)} and {show_expr(e.right, _E_AND + 1)}", _E_AND, level)
    if isinstance(e, x.Or):
        return _wrap(f"{show_expr(e.left, _E_OR)} or {show_expr(e.right, _E_OR + 1)}", _E_OR, level)
    raise TypeError(f"cannot print expression {e!r}")


def show_sigma(sigma) -> str:
    return "{" + ", ".join(f"{k}={v}" for k, v in sigma.items) + "}"


def show_rho(rho) -> str:
    return "{" + ", ".join(f"{k}={show(v)}" for k, v in rho.items) + "}"


def show_config(cfg) -> str:
    return f"{show(cfg.proc)} | {show_sigma(cfg.sigma)} | {show_rho(cfg.rho)}"


def show_label(label) -> str:
    return str(label)


def _show_domain(fields_):
    out = []
    for values in fields_:
        vs = sorted(values)
        if len(vs) > 1 and vs == list(range(vs[0], vs[-1] + 1)):
            out.append(f"{vs[0]}..{vs[-1]}")
        else:
            out.append("{" + ", ".join(str(v) for v in vs) + "}")
    return " . ".join(out)


def show_model(model) -> str:
    """Render a ModelDefinition in the model-file syntax."""
    lines = []
    o = model.options
    lines.append(
        "options "
        f"mode = {o.fault_mode.value}, "
        f"interruptible_atoms = {'on' if o.interruptible_atoms else 'off'}, "
        f"unassigned_vars = {o.unassigned_vars.value}, "
        f"max_channel_enumeration = {o.max_channel_enumeration}"
    )
    for ch, fields_ in sorted(model.channel_domains.items(), key=lambda kv: kv[0].sort_key()):
        lines.append(f"domain {ch} = {_show_domain(fields_)}")
    for name, events in model.syncset_aliases.items():
        lines.append(f"syncset {name} = {show_set(events)}")
    for name, body in model.standard_defs.items():
        lines.append(f"{name} = {show(body)}")
    for name, body in model.compensable_defs.items():
        lines.append(f"{name} = {show(body)}")
    if model.initial is not None:
        init = f"init {show(model.initial.proc)}"
        if model.initial.bindings:
            init += " with " + ", ".join(f"{k} = {v}" for k, v in model.initial.bindings.items())
        lines.append(init)
    return "\n".join(lines) + "\n"

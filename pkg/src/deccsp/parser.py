"""Model-file parser.

Surface syntax (ASCII):

    ->  prefix            ;    sequence          []   external choice
    |~| internal choice   [>   interrupt handler <>   speculative choice
    ||  parallel, synchronising on terminal events only
    ||{a, b}  parallel synchronising on a and b
    /   compensation pair \\{a} hiding             [[a <- b]] renaming
    [ pp ]  transaction block                   X := p  assignment
    ||[i = 0 .. n] p  indexed parallel          mu N @ p  recursion

Precedence, loosest first: parallel (right-assoc), compensation pair
(non-assoc), the choice operators (left-assoc), ``;`` (left-assoc), prefix
and assignment, postfix hiding/renaming. ``If``/``While``/``mu`` extend as
far right as possible.

Identifiers: data variables start lowercase; identifiers written entirely in
capitals are process variables unless defined as process names; any other
capitalised identifier is a process name if it is defined, otherwise an event.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from . import core as c
from . import expr as x
from .errors import (
    FreshnessViolation,
    ParseError,
    StaticError,
    SyncSetError,
    UnresolvedName,
)
from .options import EngineOptions, FaultMode, UnassignedMode

# -- lexer -------------------------------------------------------------------

_GLYPHS = {
    "÷": "/", "□": "[]", "⊓": "|~|", "∥": "||", "⊠": "<>", "▷": "[>",
    "→": "->", "μ": "mu", "∅": "STOP",
}

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+) | (?P<nl>\n) | (?P<comment>--[^\n]*)
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*'*)
  | (?P<op>\|~\||\|\||->|:=|\[\]|\[>|<>|<-|<=|>=|!=|\.\.|[\[\]{}()<>=.;/\\,!?@+\-*✓])
    """,
    re.VERBOSE,
)

KEYWORDS = {
    "SKIP", "STOP", "THROW", "YIELD", "SKIPP", "THROWW", "YIELDD",
    "If", "Then", "Else", "While", "Do", "if", "then", "else", "while", "do",
    "mu", "init", "with", "domain", "syncset", "options", "option",
    "true", "false", "and", "or", "not",
}

_CONTROL = {"if": "If", "then": "Then", "else": "Else", "while": "While", "do": "Do"}


@dataclass
class Token:
    kind: str  # 'int', 'ident', 'op', 'eof'
    text: str
    line: int
    col: int
    gap: bool = False  # preceded by whitespace

    def __repr__(self):
        return f"{self.text!r}@{self.line}:{self.col}"


def tokenize(text):
    for glyph, ascii_ in _GLYPHS.items():
        text = text.replace(glyph, f" {ascii_} " if glyph in "μ∅" else ascii_)
    toks, pos, line, line_start, gap = [], 0, 1, 0, True
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line, line_start, gap = line + 1, m.end(), True
        elif kind in ("ws", "comment"):
            gap = True
        else:
            t = m.group()
            if kind == "ident" and t in _CONTROL:
                t = _CONTROL[t]
            toks.append(Token(kind, t, line, pos - line_start + 1, gap))
            gap = False
        pos = m.end()
    toks.append(Token("eof", "<end of input>", line, pos - line_start + 1, True))
    return toks


# -- model definition --------------------------------------------------------


@dataclass
class InitialSpec:
    proc: c.Process
    bindings: dict = field(default_factory=dict)


@dataclass
class ModelDefinition:
    standard_defs: dict = field(default_factory=dict)
    compensable_defs: dict = field(default_factory=dict)
    channel_domains: dict = field(default_factory=dict)  # EventName -> tuple of frozensets
    syncset_aliases: dict = field(default_factory=dict)
    options: EngineOptions = field(default_factory=EngineOptions)
    initial: InitialSpec | None = None

    def definition(self, name):
        if name in self.standard_defs:
            return self.standard_defs[name]
        return self.compensable_defs[name]

    def initial_configuration(self, **bindings) -> c.Configuration:
        """The init configuration; keyword arguments override init bindings."""
        if self.initial is None:
            raise StaticError("model has no init statement")
        sigma = dict(self.initial.bindings)
        sigma.update(bindings)
        return c.Configuration(self.initial.proc, c.LocalStore.of(sigma), c.EMPTY_RHO)

    def with_options(self, **changes):
        from dataclasses import replace

        return replace(self, options=self.options.with_(**changes))


@dataclass(frozen=True)
class FreshnessIssue:
    var: str
    sites: int

    def __str__(self):
        return f"process variable {self.var} is bound by {self.sites} variable compensation pairs"


# -- raw syntax tree ---------------------------------------------------------


@dataclass
class Raw:
    kind: str
    args: tuple
    tok: Token


_STD_LEAVES = {"skip": c.SKIP, "stop": c.NIL, "throw": c.THROW, "yield": c.YIELD_P}
_COMP_LEAVES = {"skipp": c.SKIPP, "throww": c.THROWW, "yieldd": c.YIELDD}
_KEYWORD_LEAVES = {
    "SKIP": "skip", "STOP": "stop", "THROW": "throw", "YIELD": "yield",
    "SKIPP": "skipp", "THROWW": "throww", "YIELDD": "yieldd",
}
_CHOICE_TOKENS = {"[]": "ext", "|~|": "int", "[>": "handler", "<>": "spec"}
_CMP_OPS = {"=", "!=", "<", "<=", ">", ">="}
_TERMINALISH = {"!", "?", "✓", "tau", "tick"}


def _is_var_name(name):
    return name[0].islower() or name[0] == "_"


def _is_all_caps(name):
    return name[0].isupper() and not any(ch.islower() for ch in name)


class _Parser:
    def __init__(self, text):
        self.toks = tokenize(text)
        self.pos = 0
        self.def_names = set()
        self.data_vars = set()
        self.aliases = {}
        self.scopes = []
        self.mu_count = 0
        self.mu_defs = []  # (name, raw body)
        self._prescan()

    # token helpers

    @property
    def tok(self):
        return self.toks[self.pos]

    def peek(self, k=1):
        return self.toks[min(self.pos + k, len(self.toks) - 1)]

    def at(self, *texts):
        t = self.tok
        return t.kind in ("op", "ident") and t.text in texts

    def advance(self):
        t = self.tok
        self.pos += 1
        return t

    def expect(self, text):
        if not self.at(text):
            self.error(f"expected {text!r} but found {self.tok.text!r}")
        return self.advance()

    def expect_ident(self, what="identifier"):
        if self.tok.kind != "ident" or self.tok.text in KEYWORDS:
            self.error(f"expected {what} but found {self.tok.text!r}")
        return self.advance()

    def error(self, message, tok=None, cls=ParseError):
        tok = tok or self.tok
        raise cls(message, tok.line, tok.col)

    def _prescan(self):
        toks = self.toks
        for i, t in enumerate(toks):
            prev = toks[i - 1].text if i else None
            nxt = toks[i + 1] if i + 1 < len(toks) else None
            if t.kind != "ident" or t.text in KEYWORDS:
                continue
            if nxt is not None and nxt.text == "=" and t.text[0].isupper():
                if prev == "syncset":
                    self.aliases.setdefault(t.text, None)
                elif prev != "domain":
                    self.def_names.add(t.text)
            if prev == "?" and _is_var_name(t.text):
                self.data_vars.add(t.text)
            if nxt is not None and nxt.text == "=" and _is_var_name(t.text) and prev in ("with", ",", "["):
                # init bindings and indexed-parallel variables
                self.data_vars.add(t.text)

    # statements

    def parse_model(self):
        model = ModelDefinition()
        raw_defs = {}
        raw_init = None
        init_bindings = {}
        while self.tok.kind != "eof":
            t = self.tok
            if self.at("options", "option"):
                self.advance()
                model.options = self._parse_options(model.options)
            elif self.at("domain"):
                self.advance()
                ch, fields_ = self._parse_domain()
                model.channel_domains[ch] = fields_
            elif self.at("syncset"):
                self.advance()
                name = self.expect_ident("syncset name")
                self.expect("=")
                events = self._parse_event_set()
                self.aliases[name.text] = events
                model.syncset_aliases[name.text] = events
            elif self.at("init"):
                self.advance()
                if raw_init is not None:
                    self.error("duplicate init statement", t, StaticError)
                raw_init = self.parse_process()
                if self.at("with"):
                    self.advance()
                    init_bindings = self._parse_bindings()
            elif t.kind == "ident" and self.peek().text == "=" and t.text not in KEYWORDS:
                self.advance()
                self.advance()
                if t.text in raw_defs:
                    self.error(f"process {t.text} is defined twice", t, StaticError)
                raw_defs[t.text] = self.parse_process()
            else:
                self.error(f"unexpected {self.tok.text!r}; expected a definition or section")
        for name, body in self.mu_defs:
            raw_defs[name] = body
        _Builder(self, model, raw_defs, raw_init, init_bindings).build()
        return model

    def _parse_options(self, opts):
        changes = {}
        while True:
            name = self.expect_ident("option name")
            self.expect("=")
            value = self.advance()
            v = value.text
            key = name.text
            try:
                if key == "mode":
                    changes["fault_mode"] = FaultMode(v)
                elif key == "interruptible_atoms":
                    changes["interruptible_atoms"] = _flag(v)
                elif key == "unassigned_vars":
                    changes["unassigned_vars"] = UnassignedMode("skip" if v == "default_skip" else v)
                elif key == "default_skip_vars":
                    changes["unassigned_vars"] = (
                        UnassignedMode.DEFAULT_SKIP if _flag(v) else UnassignedMode.ERROR)
                elif key == "max_channel_enumeration":
                    changes["max_channel_enumeration"] = int(v)
                else:
                    self.error(f"unknown option {key!r}", name)
            except ValueError:
                self.error(f"bad value {v!r} for option {key!r}", value)
            if not self.at(","):
                break
            self.advance()
        return opts.with_(**changes)

    def _parse_domain(self):
        ch = self._parse_static_event(allow_data=False)
        self.expect("=")
        fields_ = [self._parse_value_set()]
        while self.at("."):
            self.advance()
            fields_.append(self._parse_value_set())
        return ch, tuple(fields_)

    def _parse_signed_int(self):
        neg = False
        if self.at("-"):
            self.advance()
            neg = True
        if self.tok.kind != "int":
            self.error(f"expected an integer but found {self.tok.text!r}")
        v = int(self.advance().text)
        return -v if neg else v

    def _parse_value_set(self):
        if self.at("{"):
            self.advance()
            values = [self._parse_signed_int()]
            while self.at(","):
                self.advance()
                values.append(self._parse_signed_int())
            self.expect("}")
            return frozenset(values)
        lo = self._parse_signed_int()
        if self.at(".."):
            self.advance()
            hi = self._parse_signed_int()
            if hi < lo:
                self.error("empty domain range")
            return frozenset(range(lo, hi + 1))
        return frozenset([lo])

    def _parse_bindings(self):
        out = {}
        while True:
            name = self.expect_ident("data variable")
            if not _is_var_name(name.text):
                self.error("data variables must start with a lowercase letter", name)
            self.expect("=")
            out[name.text] = self._parse_signed_int()
            if not self.at(","):
                return out
            self.advance()

    # event sets

    def _parse_static_event(self, allow_data=True):
        """An event name in a set: atoms, integer data; data variables act as wildcards."""
        first = self.tok
        if first.text in _TERMINALISH:
            self.error(f"event sets may not contain the terminal or silent event {first.text!r}",
                       first, SyncSetError)
        name = self.expect_ident("event name")
        parts, data, wildcard = [name.text], [], False
        while self.at(".") and self.peek().kind in ("ident", "int"):
            self.advance()
            comp = self.advance()
            if comp.kind == "int":
                if not allow_data:
                    self.error("channel names carry no data", comp)
                data.append(int(comp.text))
            elif comp.text in self.data_vars:
                wildcard = True
            elif data or wildcard:
                self.error("atom after data component", comp)
            else:
                parts.append(comp.text)
        if wildcard:
            data = []
        return c.EventName(tuple(parts), tuple(data))

    def _parse_event_set(self):
        self.expect("{")
        events = set()
        if not self.at("}"):
            while True:
                t = self.tok
                if t.kind == "ident" and t.text in self.aliases and self.peek().text in (",", "}"):
                    self.advance()
                    if self.aliases[t.text] is None:
                        self.error(f"syncset {t.text} used before its definition", t, UnresolvedName)
                    events |= self.aliases[t.text]
                else:
                    events.add(self._parse_static_event())
                if not self.at(","):
                    break
                self.advance()
        self.expect("}")
        return frozenset(events)

    # processes

    def parse_process(self):
        return self.parse_par()

    def parse_par(self):
        left = self.parse_pair()
        if self.at("||"):
            t = self.advance()
            sync = frozenset()
            if self.at("{") and not self.tok.gap:
                sync = self._parse_event_set()
            right = self.parse_par()
            return Raw("par", (sync, left, right), t)
        return left

    def parse_pair(self):
        left = self.parse_choice()
        if self.at("/"):
            t = self.advance()
            right = self.parse_choice()
            if self.at("/"):
                self.error("compensation pairs do not chain; add parentheses")
            if right.kind == "pvar":
                return Raw("varpair", (left, right.args[0]), t)
            return Raw("pair", (left, right), t)
        return left

    def parse_choice(self):
        left = self.parse_seq()
        while self.at(*_CHOICE_TOKENS):
            t = self.advance()
            right = self.parse_seq()
            left = Raw(_CHOICE_TOKENS[t.text], (left, right), t)
        return left

    def parse_seq(self):
        left = self.parse_prefix()
        while self.at(";"):
            t = self.advance()
            left = Raw("seq", (left, self.parse_prefix()), t)
        return left

    def parse_prefix(self):
        t = self.tok
        if t.kind == "ident" and self.peek().text == ":=":
            if not _is_all_caps(t.text) or t.text in KEYWORDS:
                self.error(f"{t.text!r} is not a process variable (use capitals)", t)
            if t.text in self.def_names:
                self.error(f"{t.text} is a process name and cannot be assigned", t, StaticError)
            self.advance()
            self.advance()
            return Raw("assign", (t.text, self.parse_postfix()), t)
        left = self.parse_postfix()
        if self.at("->"):
            arrow = self.advance()
            if left.kind != "event":
                self.error("the left operand of -> must be an event", arrow)
            return Raw("prefix", (left.args[0], self.parse_prefix()), arrow)
        return left

    def parse_postfix(self):
        p = self.parse_atom()
        while True:
            if self.at("\\"):
                t = self.advance()
                p = Raw("hide", (p, self._parse_event_set()), t)
            elif self.at("[") and self.peek().text == "[" and not self.peek().gap:
                t = self.advance()
                self.advance()
                p = Raw("rename", (p, self._parse_renaming()), t)
            else:
                return p

    def _parse_renaming(self):
        pairs = set()
        while True:
            a = self._parse_static_event()
            self.expect("<-")
            b = self._parse_static_event()
            pairs.add((a, b))
            if not self.at(","):
                break
            self.advance()
        self.expect("]")
        if not (self.at("]") and not self.tok.gap):
            self.error("expected ']]' to close the renaming")
        self.advance()
        return frozenset(pairs)

    def parse_atom(self):
        t = self.tok
        if self.at("("):
            self.advance()
            p = self.parse_par()
            self.expect(")")
            return p
        if self.at("["):
            self.advance()
            body = self.parse_par()
            self.expect("]")
            return Raw("block", (body,), t)
        if self.at("||") and self.peek().text == "[":
            return self._parse_indexed()
        if t.kind == "ident" and t.text in _KEYWORD_LEAVES:
            self.advance()
            return Raw(_KEYWORD_LEAVES[t.text], (), t)
        if self.at("If"):
            self.advance()
            cond = self.parse_bool()
            self.expect("Then")
            then = self.parse_par()
            self.expect("Else")
            return Raw("if", (cond, then, self.parse_par()), t)
        if self.at("While"):
            self.advance()
            cond = self.parse_bool()
            self.expect("Do")
            return Raw("while", (cond, self.parse_par()), t)
        if self.at("mu"):
            return self._parse_mu()
        if t.kind == "ident" and t.text not in KEYWORDS:
            return self._parse_ident_term()
        self.error(f"unexpected {t.text!r} where a process was expected")

    def _parse_mu(self):
        t = self.advance()
        var = self.expect_ident("recursion variable")
        self.expect("@")
        self.mu_count += 1
        base = var.text[0].upper() + var.text[1:]
        name = f"Mu{self.mu_count}_{base}"
        self.scopes.append({var.text: name})
        try:
            body = self.parse_par()
        finally:
            self.scopes.pop()
        self.mu_defs.append((name, body))
        self.def_names.add(name)
        return Raw("name", (name,), t)

    def _parse_indexed(self):
        t = self.advance()
        self.expect("[")
        var = self.expect_ident("index variable")
        if not _is_var_name(var.text):
            self.error("index variables start with a lowercase letter", var)
        self.expect("=")
        lo = self.parse_int_expr()
        self.expect("..")
        hi = self.parse_int_expr()
        self.expect("]")
        body = self.parse_postfix()
        return Raw("indexed", (var.text, lo, hi, body), t)

    def _resolve_name(self, name):
        for scope in reversed(self.scopes):
            if name in scope:
                return scope[name]
        return name if name in self.def_names else None

    def _parse_ident_term(self):
        t = self.tok
        name = t.text
        resolved = self._resolve_name(name)
        nxt = self.peek()
        is_event_syntax = nxt.text in ("!", "?") or (nxt.text == "." and not nxt.gap)
        if resolved is not None and not is_event_syntax:
            self.advance()
            return Raw("name", (resolved,), t)
        if _is_all_caps(name) and not is_event_syntax:
            self.advance()
            return Raw("pvar", (name,), t)
        return Raw("event", (self._parse_comm_event(),), t)

    def _parse_comm_event(self):
        head = self.expect_ident("event")
        parts, exprs = [head.text], []
        while self.at(".") and not self.tok.gap:
            self.advance()
            comp = self.tok
            if comp.kind == "int":
                self.advance()
                exprs.append(x.IntLit(int(comp.text)))
            elif self.at("("):
                self.advance()
                exprs.append(self.parse_int_expr())
                self.expect(")")
            elif comp.kind == "ident" and comp.text not in KEYWORDS:
                self.advance()
                if comp.text in self.data_vars:
                    exprs.append(x.Var(comp.text))
                elif exprs:
                    self.error("atom after a data component", comp)
                else:
                    parts.append(comp.text)
            else:
                self.error(f"bad event component {comp.text!r}", comp)
        base = c.EventName(tuple(parts))
        if self.at("!", "?") and not self.tok.gap:
            if exprs:
                self.error("channel names carry no data components")
            direction = self.tok.text
            items = []
            while self.at(direction) and not self.tok.gap:
                self.advance()
                if direction == "?":
                    v = self.expect_ident("input variable")
                    if not _is_var_name(v.text):
                        self.error("input variables start with a lowercase letter", v)
                    items.append(v.text)
                else:
                    items.append(self._parse_int_atom())
            if self.at("!", "?") and not self.tok.gap:
                self.error("mixed input and output fields are not supported")
            if direction == "?":
                return c.Input(base, tuple(items))
            return c.Output(base, tuple(items))
        if not exprs:
            return c.Plain(base)
        values = [x.fold_int(e) for e in exprs]
        if all(v is not None for v in values):
            return c.Plain(base.with_data(tuple(values)))
        return c.Dotted(base, tuple(exprs))

    # expressions

    def parse_int_expr(self):
        left = self._parse_mul()
        while self.at("+", "-"):
            op = self.advance().text
            left = x.BinOp(op, left, self._parse_mul())
        return left

    def _parse_mul(self):
        left = self._parse_unary()
        while self.at("*", "/"):
            op = self.advance().text
            left = x.BinOp(op, left, self._parse_unary())
        return left

    def _parse_unary(self):
        if self.at("-"):
            self.advance()
            operand = self._parse_unary()
            if isinstance(operand, x.IntLit):
                return x.IntLit(-operand.value)
            return x.Neg(operand)
        return self._parse_int_atom()

    def _parse_int_atom(self):
        t = self.tok
        if t.kind == "int":
            self.advance()
            return x.IntLit(int(t.text))
        if self.at("("):
            self.advance()
            e = self.parse_int_expr()
            self.expect(")")
            return e
        if self.at("-"):
            return self._parse_unary()
        if t.kind == "ident" and t.text not in KEYWORDS and _is_var_name(t.text):
            self.advance()
            return x.Var(t.text)
        self.error(f"expected an integer expression but found {t.text!r}")

    def parse_bool(self):
        left = self._parse_and()
        while self.at("or"):
            self.advance()
            left = x.Or(left, self._parse_and())
        return left

    def _parse_and(self):
        left = self._parse_not()
        while self.at("and"):
            self.advance()
            left = x.And(left, self._parse_not())
        return left

    def _parse_not(self):
        if self.at("not"):
            self.advance()
            return x.Not(self._parse_not())
        if self.at("true", "false"):
            return x.BoolLit(self.advance().text == "true")
        if self.at("("):
            saved = self.pos
            self.advance()
            try:
                inner = self.parse_bool()
                self.expect(")")
                if not self.at(*_CMP_OPS, "+", "-", "*", "/"):
                    return inner
            except ParseError:
                pass
            self.pos = saved
        left = self.parse_int_expr()
        if not self.at(*_CMP_OPS):
            self.error(f"expected a comparison but found {self.tok.text!r}")
        op = self.advance().text
        return x.Cmp(op, left, self.parse_int_expr())


def _flag(v):
    if v in ("on", "true", "yes", "1"):
        return True
    if v in ("off", "false", "no", "0"):
        return False
    raise ValueError(v)


# -- sort inference and typed construction -----------------------------------

_S, _C = "standard", "compensable"

_BINARY = {
    "seq": (c.Seq, c.CSeq),
    "ext": (c.ExtChoice, c.CExtChoice),
    "int": (c.IntChoice, c.CIntChoice),
}


class _Builder:
    def __init__(self, parser, model, raw_defs, raw_init, init_bindings):
        self.parser = parser
        self.model = model
        self.raw_defs = raw_defs
        self.raw_init = raw_init
        self.bindings = init_bindings
        self.sorts = {}

    def error(self, message, raw, cls=StaticError):
        raise cls(message, raw.tok.line, raw.tok.col)

    def build(self):
        self._infer_def_sorts()
        for name, raw in self.raw_defs.items():
            body, sort = self.to_ast(raw)
            target = self.model.standard_defs if sort == _S else self.model.compensable_defs
            target[name] = body
        if self.raw_init is not None:
            r = self.raw_init
            if r.kind == "event" and isinstance(r.args[0], c.Plain) and r.tok.text[0].isupper():
                self.error(f"init refers to undefined process {r.tok.text}", r, UnresolvedName)
            proc, _ = self.to_ast(r)
            self.model.initial = InitialSpec(proc, dict(self.bindings))
        issues = check_freshness(self.model)
        if issues:
            raise FreshnessViolation("; ".join(str(i) for i in issues))

    def _infer_def_sorts(self):
        changed = True
        while changed:
            changed = False
            for name, raw in self.raw_defs.items():
                if name in self.sorts:
                    continue
                s = self._sort(raw)
                if s is not None:
                    self.sorts[name] = s
                    changed = True
        for name in self.raw_defs:
            self.sorts.setdefault(name, _S)

    def _join(self, a, b, raw):
        if a and b and a != b:
            self.error(f"operands of {raw.tok.text!r} mix standard and compensable processes", raw)
        return a or b

    def _sort(self, r):
        k = r.kind
        if k in _STD_LEAVES or k in ("event", "prefix", "assign", "pvar", "handler", "block"):
            return _S
        if k in _COMP_LEAVES or k in ("pair", "varpair", "spec"):
            return _C
        if k == "name":
            return self.sorts.get(r.args[0])
        if k in _BINARY:
            return self._join(self._sort(r.args[0]), self._sort(r.args[1]), r)
        if k == "par":
            return self._join(self._sort(r.args[1]), self._sort(r.args[2]), r)
        if k in ("hide", "rename"):
            return self._sort(r.args[0])
        if k == "if":
            return self._join(self._sort(r.args[1]), self._sort(r.args[2]), r)
        if k == "while":
            return self._sort(r.args[1])
        if k == "indexed":
            return self._sort(r.args[3])
        raise AssertionError(k)

    def _want(self, r, sort, context):
        p, s = self.to_ast(r)
        if s != sort:
            self.error(f"{context} needs a {sort} process", r)
        return p

    def to_ast(self, r):
        """Return (typed term, sort)."""
        k, a = r.kind, r.args
        if k in _STD_LEAVES:
            return _STD_LEAVES[k], _S
        if k in _COMP_LEAVES:
            return _COMP_LEAVES[k], _C
        if k == "event":
            return c.Atomic(a[0]), _S
        if k == "pvar":
            return c.ProcVarRef(a[0]), _S
        if k == "name":
            name = a[0]
            if self.sorts[name] == _S:
                return c.Named(name), _S
            return c.NamedComp(name), _C
        if k == "prefix":
            return c.Prefix(a[0], self._want(a[1], _S, "the body of a prefix")), _S
        if k == "assign":
            return c.Assign(a[0], self._want(a[1], _S, "an assignment")), _S
        if k == "handler":
            return c.InterruptHandler(self._want(a[0], _S, "an interrupt handler"),
                                      self._want(a[1], _S, "an interrupt handler")), _S
        if k == "block":
            return c.TransactionBlock(self._want(a[0], _C, "a transaction block")), _S
        if k == "pair":
            return c.CompPair(self._want(a[0], _S, "a compensation pair"),
                              self._want(a[1], _S, "a compensation pair")), _C
        if k == "varpair":
            return c.VarCompPair(self._want(a[0], _S, "a compensation pair"), a[1]), _C
        if k == "spec":
            return c.SpecChoice(self._want(a[0], _C, "speculative choice"),
                                self._want(a[1], _C, "speculative choice")), _C
        if k in _BINARY:
            left, ls = self.to_ast(a[0])
            right, rs = self.to_ast(a[1])
            self._join(ls, rs, r)
            cls = _BINARY[k][ls == _C]
            return cls(left, right), ls
        if k == "par":
            left, ls = self.to_ast(a[1])
            right, rs = self.to_ast(a[2])
            self._join(ls, rs, r)
            cls = c.CParallel if ls == _C else c.Parallel
            return cls(a[0], left, right), ls
        if k == "hide":
            body, s = self.to_ast(a[0])
            return (c.CHide if s == _C else c.Hide)(body, a[1]), s
        if k == "rename":
            body, s = self.to_ast(a[0])
            return (c.CRename if s == _C else c.Rename)(body, a[1]), s
        if k == "if":
            then, ts = self.to_ast(a[1])
            orelse, es = self.to_ast(a[2])
            self._join(ts, es, r)
            return (c.CIf if ts == _C else c.If)(a[0], then, orelse), ts
        if k == "while":
            body, s = self.to_ast(a[1])
            return (c.CWhile if s == _C else c.While)(a[0], body), s
        if k == "indexed":
            var, lo, hi, raw_body = a
            body, s = self.to_ast(raw_body)
            bounds = []
            for e in (lo, hi):
                missing = x.expr_vars(e) - set(self.bindings)
                if missing:
                    self.error(f"indexed parallel bound uses unresolvable {sorted(missing)}", r)
                bounds.append(x.eval_int(e, c.LocalStore.of(self.bindings)))
            try:
                return expand_indexed_parallel(var, bounds[0], bounds[1], body), s
            except ValueError as exc:
                self.error(str(exc), r)
        raise AssertionError(k)


def expand_indexed_parallel(var, lo, hi, body):
    """Right-nested interleaving of ``body`` with ``var`` = lo..hi substituted."""
    if hi < lo:
        raise ValueError(f"negative range {lo}..{hi} in indexed parallel")
    copies = [c.substitute_data(body, {var: i}) for i in range(lo, hi + 1)]
    cls = c.CParallel if isinstance(body, c.CompensableProcess) else c.Parallel
    out = copies[-1]
    for p in reversed(copies[:-1]):
        out = cls(frozenset(), p, out)
    return out


# -- static checks -----------------------------------------------------------


def _reachable_terms(model):
    """Definition bodies and init reachable from init (all definitions if no init)."""
    if model.initial is None:
        roots = list(model.standard_defs.values()) + list(model.compensable_defs.values())
    else:
        roots = [model.initial.proc]
    seen_names, out, stack = set(), [], list(roots)
    while stack:
        term = stack.pop()
        out.append(term)
        for p in c.subterms(term):
            if isinstance(p, (c.Named, c.NamedComp)) and p.name not in seen_names:
                seen_names.add(p.name)
                stack.append(model.definition(p.name))
    return out


def check_freshness(model) -> list:
    """Process variables bound by more than one variable compensation pair."""
    counts = {}
    for term in _reachable_terms(model):
        for p in c.subterms(term):
            if isinstance(p, c.VarCompPair):
                counts[p.var] = counts.get(p.var, 0) + 1
    return [FreshnessIssue(v, n) for v, n in sorted(counts.items()) if n > 1]


# -- entry points ------------------------------------------------------------


def parse_model(text) -> ModelDefinition:
    return _Parser(text).parse_model()


def parse_process(text, model=None) -> c.Process:
    """Parse a single process term, resolving names against ``model``."""
    defs = ""
    if model is not None:
        from .printer import show_model

        defs = show_model(model)
        defs = "\n".join(line for line in defs.splitlines() if not line.startswith("init "))
    try:
        m = parse_model("init " + text + "\n" + defs)
    except ParseError as err:
        if err.line == 1:
            raise type(err)(err.message, 1, err.column - len("init ")) from None
        raise
    return m.initial.proc


def load_model(path) -> ModelDefinition:
    with open(path, encoding="utf-8") as fh:
        return parse_model(fh.read())


def parse_event(text, data_vars=()) -> c.EventName:
    """A single event name such as ``restock.1.4``; a bare channel acts as a wildcard in sets."""
    p = _Parser(text)
    p.data_vars |= set(data_vars)
    ev = p._parse_static_event()
    if p.tok.kind != "eof":
        p.error(f"unexpected {p.tok.text!r} after event name")
    return ev

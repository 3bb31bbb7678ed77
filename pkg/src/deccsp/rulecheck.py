"""Per-rule micro-models: loading and checking against the engine.

A micro-model is an ordinary model file whose leading comment lines carry
a header::

    -- rule: seq.done
    -- path: tau            (optional; follow the first step with each label)
    -- expect: tau [seq.done] a | {} | {}

After following the path, the set of ``label [rule] configuration`` lines
produced by the engine must equal the set of ``expect`` lines exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .parser import parse_model
from .printer import show_config, show_label
from .semantics import Engine


@dataclass
class MicroModel:
    name: str
    rule: str
    text: str
    path: tuple = ()
    expect: list = field(default_factory=list)


@dataclass
class CheckResult:
    model: MicroModel
    actual: list
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None and sorted(self.actual) == sorted(self.model.expect)

    def describe(self) -> str:
        if self.ok:
            return f"ok   {self.model.name}"
        lines = [f"FAIL {self.model.name}"]
        if self.error:
            lines.append(f"  error: {self.error}")
        for e in sorted(set(self.model.expect) - set(self.actual)):
            lines.append(f"  missing:    {e}")
        for a in sorted(set(self.actual) - set(self.model.expect)):
            lines.append(f"  unexpected: {a}")
        return "\n".join(lines)


def parse_micro(name: str, text: str) -> MicroModel:
    m = MicroModel(name=name, rule="", text=text)
    for line in text.splitlines():
        line = line.strip()
        if not line.startswith("--"):
            continue
        body = line[2:].strip()
        key, _, value = body.partition(":")
        value = value.strip()
        if key == "rule":
            m.rule = value
        elif key == "path":
            m.path = tuple(value.split())
        elif key == "expect":
            m.expect.append(value)
    if not m.rule:
        raise ValueError(f"{name}: missing '-- rule:' header")
    return m


def rules_dir():
    return resources.files("deccsp") / "corpus" / "rules"


def load_micro_models(directory=None) -> list:
    base = Path(directory) if directory is not None else rules_dir()
    out = []
    for entry in sorted(base.iterdir(), key=lambda p: p.name):
        if entry.name.endswith(".dec"):
            out.append(parse_micro(entry.name[:-4], entry.read_text(encoding="utf-8")))
    return out


def _line(t) -> str:
    return f"{show_label(t.label)} [{t.rule}] {show_config(t.target)}"


def check_micro(m: MicroModel) -> CheckResult:
    try:
        model = parse_model(m.text)
        engine = Engine(model, model.options)
        cfg = model.initial_configuration()
        for label in m.path:
            for t in engine.step(cfg):
                if show_label(t.label) == label:
                    cfg = t.target
                    break
            else:
                return CheckResult(m, [], f"path label {label!r} not enabled")
        return CheckResult(m, [_line(t) for t in engine.step(cfg)])
    except Exception as err:  # reported, not raised: one bad file should not hide the rest
        return CheckResult(m, [], f"{type(err).__name__}: {err}")


def check_all(directory=None) -> list:
    return [check_micro(m) for m in load_micro_models(directory)]

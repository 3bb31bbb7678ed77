"""Command-line front end.

Exit codes: 0 success, 1 parse/static error or missing golden files,
2 semantic error during exploration, 3 interactive stepping without a
terminal, 4 corpus check mismatch.
"""

from __future__ import annotations

import argparse
import difflib
import io
import json
import sys
from contextlib import redirect_stdout
from dataclasses import replace
from importlib import resources
from pathlib import Path

from . import explorer as ex
from .errors import DeccspError, NoMatchingPath, ParseError, SemanticError
from .options import FaultMode, UnassignedMode
from .parser import load_model, parse_event
from .printer import show, show_config, show_label, show_model, show_rho, show_sigma
from .rulecheck import check_all

EXIT_PARSE, EXIT_SEMANTIC, EXIT_NOT_INTERACTIVE, EXIT_MISMATCH = 1, 2, 3, 4


def _common(p):
    p.add_argument("--depth", type=int, default=ex.DEFAULT_DEPTH, help="maximum steps explored")
    p.add_argument("--max-states", type=int, default=ex.DEFAULT_MAX_STATES)
    p.add_argument("--mode", choices=["contain", "propagate"], help="transaction-block fault mode")
    p.add_argument("--interruptible-atoms", action="store_true", default=None)
    p.add_argument("--default-skip-vars", action="store_true", default=None,
                   help="unassigned process variables behave as SKIP")
    p.add_argument("--elide-tau", action="store_true")
    p.add_argument("--dot", metavar="FILE", help="also write the LTS as Graphviz DOT")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true", help="machine-readable output")


def build_parser():
    ap = argparse.ArgumentParser(prog="deccsp", description="DEcCSP interpreter and explorer")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, text in [
        ("parse", "parse a model and print it in canonical form"),
        ("run", "follow one random execution"),
        ("traces", "list the bounded trace set"),
        ("lts", "print the bounded labelled transition system"),
        ("deadlocks", "report stuck states with witness paths"),
        ("compensations", "list compensation phases after transaction-block faults"),
        ("step", "walk transitions interactively"),
    ]:
        p = sub.add_parser(name, help=text)
        p.add_argument("model")
        _common(p)
        if name == "run":
            p.add_argument("--steps", type=int, help="walk length (default: --depth)")
        if name == "compensations":
            p.add_argument("--require", default="", help="comma-separated events seen in order before the fault")
            p.add_argument("--forbid", default="", help="comma-separated events never seen before the fault")
            p.add_argument("--within", default="", help="comma-separated events kept after the fault")
            p.add_argument("--yields", action="store_true", help="also count blocks ended by a yield")
        if name == "step":
            p.add_argument("--choices", help="replay a recorded choice sequence, e.g. '0 1 u r5'")
    p = sub.add_parser("check", help="run the bundled corpus against its golden files")
    p.add_argument("--corpus", help="corpus directory (default: the installed one)")
    return ap


def _options(args, model):
    changes = {}
    if args.mode:
        changes["fault_mode"] = FaultMode(args.mode)
    if args.interruptible_atoms:
        changes["interruptible_atoms"] = True
    if args.default_skip_vars:
        changes["unassigned_vars"] = UnassignedMode.DEFAULT_SKIP
    return model.options.with_(**changes)


def _events(text):
    return [parse_event(part.strip()) for part in text.split(",") if part.strip()]


# -- commands ----------------------------------------------------------------


def cmd_parse(args, model, opts, out):
    out.write(show_model(replace(model, options=opts)))


def cmd_run(args, model, opts, out):
    stepper = ex.Stepper(model.initial_configuration(), model, opts, seed=args.seed)
    n = args.steps if args.steps is not None else args.depth
    for t in stepper.random_walk(n):
        if not (args.elide_tau and show_label(t.label) == "tau"):
            out.write(f"{show_label(t.label)} [{t.rule}]\n")
    out.write(f"final: {show_config(stepper.current)}\n")


def cmd_traces(args, model, opts, out):
    found = ex.traces(model.initial_configuration(), args.depth, opts, args.elide_tau, model)
    if args.json:
        out.write(ex.traces_to_json(found))
    else:
        for t in ex.sorted_traces(found):
            out.write(f"{t}\n")


def _lts(args, model, opts):
    lts = ex.build_lts(model.initial_configuration(), args.depth, args.max_states, opts, model)
    if args.dot:
        Path(args.dot).write_text(ex.lts_to_dot(lts), encoding="utf-8")
    return lts


def cmd_lts(args, model, opts, out):
    lts = _lts(args, model, opts)
    out.write(ex.lts_to_json(lts) if args.json else ex.lts_to_text(lts))


def cmd_deadlocks(args, model, opts, out):
    lts = _lts(args, model, opts)
    found = ex.find_deadlocks(lts)
    if args.json:
        data = [{"state": i, "config": show_config(lts.states[i]),
                 "path": [show_label(l) for _, l, _, _ in path]} for i, path in found]
        out.write(json.dumps(data, indent=2, ensure_ascii=False) + "\n")
        return
    if not found:
        out.write("no deadlocks\n")
    for i, path in found:
        out.write(f"s{i}: {show_config(lts.states[i])}\n")
        out.write("  path: " + " ".join(show_label(l) for _, l, _, _ in path) + "\n")


def cmd_compensations(args, model, opts, out):
    within = _events(args.within)
    selector = ex.FaultSelector(
        require=tuple(_events(args.require)),
        forbid=frozenset(_events(args.forbid)),
        within=frozenset(within) if within else None,
        terminals=(ex.c.FAULT, ex.c.YIELD) if args.yields else (ex.c.FAULT,),
    )
    found = ex.compensation_traces(model.initial_configuration(), selector, args.depth, opts, model)
    if args.json:
        out.write(json.dumps([[str(e) for e in seq] for seq in found], indent=2) + "\n")
        return
    if not found:
        raise NoMatchingPath("no transaction-block fault matches the selector within the bounds")
    for seq in found:
        out.write(" ".join(str(e) for e in seq) + "\n")


def _show_menu(stepper, out):
    cfg = stepper.current
    out.write(f"process: {show(cfg.proc)}\n")
    out.write(f"sigma:   {show_sigma(cfg.sigma)}\n")
    out.write(f"rho:     {show_rho(cfg.rho)}\n")
    enabled = stepper.enabled()
    if not enabled:
        out.write("  (no transitions)\n")
    for n, t in enumerate(enabled):
        out.write(f"  {n}: {show_label(t.label)} [{t.rule}]\n")


def _apply(stepper, cmd, out):
    """Run one REPL command; returns False on quit."""
    if cmd == "q":
        return False
    if cmd == "u":
        if not stepper.undo():
            out.write("nothing to undo\n")
    elif cmd.startswith("r"):
        n = int(cmd[1:].strip() or 1)
        for t in stepper.random_walk(n):
            out.write(f"> {show_label(t.label)} [{t.rule}]\n")
    else:
        t = stepper.choose(int(cmd))
        out.write(f"> {show_label(t.label)} [{t.rule}]\n")
    return True


def cmd_step(args, model, opts, out, stdin=None):
    stdin = stdin if stdin is not None else sys.stdin
    stepper = ex.Stepper(model.initial_configuration(), model, opts, seed=args.seed)
    if args.choices is not None:
        for cmd in args.choices.split():
            _show_menu(stepper, out)
            if not _apply(stepper, cmd, out):
                return 0
        _show_menu(stepper, out)
        return 0
    if not stdin.isatty():
        sys.stderr.write("deccsp step needs an interactive terminal (or use --choices)\n")
        return EXIT_NOT_INTERACTIVE
    while True:
        _show_menu(stepper, out)
        out.write("choice (number, u, r N, q)> ")
        out.flush()
        line = stdin.readline()
        if not line:
            return 0
        line = line.strip().replace(" ", "")
        if not line:
            continue
        try:
            if not _apply(stepper, line, out):
                return 0
        except (ValueError, IndexError) as err:
            out.write(f"{err}\n")


COMMANDS = {
    "parse": cmd_parse, "run": cmd_run, "traces": cmd_traces, "lts": cmd_lts,
    "deadlocks": cmd_deadlocks, "compensations": cmd_compensations, "step": cmd_step,
}


# -- corpus check ------------------------------------------------------------


def corpus_dir():
    return Path(str(resources.files("deccsp") / "corpus"))


def _golden_header(text):
    header = {}
    for line in text.splitlines():
        if not line.startswith("-- "):
            break
        key, _, value = line[3:].partition(":")
        header[key.strip()] = value.strip()
    body = "".join(line + "\n" for line in text.splitlines() if not line.startswith("-- "))
    return header, body


def run_golden(path: Path, corpus: Path):
    """Re-run the command recorded in a golden file; returns (ok, diff text)."""
    header, expected = _golden_header(path.read_text(encoding="utf-8"))
    argv = header["args"].split() + [str(corpus / header["model"])]
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = main(argv)
    actual = buf.getvalue()
    if code == 0 and actual == expected:
        return True, ""
    diff = "".join(difflib.unified_diff(expected.splitlines(True), actual.splitlines(True),
                                        f"{path.name} (golden)", f"{path.name} (actual)"))
    return False, diff or f"exit code {code}\n"


def cmd_check(args, out):
    corpus = Path(args.corpus) if args.corpus else corpus_dir()
    golden_dir = corpus / "golden"
    goldens = sorted(golden_dir.glob("*.golden")) if golden_dir.is_dir() else []
    rules_dir = corpus / "rules"
    if not goldens or not rules_dir.is_dir():
        sys.stderr.write(
            f"golden files not found under {corpus}\n"
            "expected golden/*.golden and rules/*.dec; reinstall the package or pass\n"
            "--corpus pointing at a checkout of src/deccsp/corpus\n")
        return EXIT_PARSE
    failed = []
    for r in check_all(rules_dir):
        out.write(r.describe() + "\n")
        if not r.ok:
            failed.append(r.model.name)
    for g in goldens:
        ok, diff = run_golden(g, corpus)
        out.write(f"ok   {g.name}\n" if ok else f"FAIL {g.name}\n{diff}")
        if not ok:
            failed.append(g.name)
    if failed:
        out.write(f"{len(failed)} mismatch(es): {', '.join(failed)}\n")
        return EXIT_MISMATCH
    out.write("all corpus checks passed\n")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    out = sys.stdout
    if args.command == "check":
        return cmd_check(args, out)
    try:
        model = load_model(args.model)
        opts = _options(args, model)
        code = COMMANDS[args.command](args, model, opts, out)
        return code or 0
    except OSError as err:
        sys.stderr.write(f"error: {err}\n")
        return EXIT_PARSE
    except ParseError as err:
        sys.stderr.write(f"{args.model}:{err}\n")
        return EXIT_PARSE
    except SemanticError as err:
        where = f" (after: {' '.join(err.path) or '<start>'})" if err.path is not None else ""
        sys.stderr.write(f"semantic error: {err}{where}\n")
        return EXIT_SEMANTIC
    except NoMatchingPath as err:
        sys.stderr.write(f"{err}\n")
        return EXIT_SEMANTIC
    except DeccspError as err:
        sys.stderr.write(f"error: {err}\n")
        return EXIT_SEMANTIC


if __name__ == "__main__":
    sys.exit(main())

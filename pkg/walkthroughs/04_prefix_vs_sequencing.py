"""a -> b -> SKIP and a ; b ; SKIP differ next to a fault.

With interruptible atoms each event may offer a yield before it happens.
Sequencing turns that yield into a terminal event of the whole process, which
the parallel THROW then absorbs into !, so Q can be cut short after a. The
prefix form has no terminal event between a and b, so P must carry on.
"""

from deccsp import Engine, load_model, parse_process
from deccsp.cli import corpus_dir
from deccsp.core import Configuration, Parallel, THROW
from deccsp.printer import show

model = load_model(corpus_dir() / "interrupt.dec")
engine = Engine(model)


def can_be_stopped(proc):
    par = Configuration(Parallel(frozenset(), proc, THROW))
    return [f"{t.label} [{t.rule}] -> {show(t.target.proc)}" for t in engine.step(par)]


for name, text in [("P after a", "b -> SKIP"), ("Q after a", "b ; SKIP")]:
    proc = parse_process(text, model)
    print(name, show(proc), "||", "THROW:", can_be_stopped(proc) or "stuck until b")

"""The warehouse order models: which compensations run when the credit check fails."""

from collections import Counter

from deccsp import FaultSelector, compensation_traces, load_model, parse_event
from deccsp.cli import corpus_dir

corpus = corpus_dir()
ev = parse_event
within = frozenset(map(ev, ["Unpack", "cancelcourier", "penalty", "restock", "Cancelbranch1", "Cancelbranch2"]))

basic = load_model(corpus / "warehouse_basic.dec")
sel = FaultSelector(require=(ev("NotOk"),), forbid=frozenset({ev("RequestMembership")}), within=within)
phases = compensation_traces(basic.initial_configuration(), sel, 64, model=basic)
print(len(phases), "orderings of the compensation phase, for example")
print(" ".join(map(str, phases[0])))
print(Counter(str(e) for e in phases[0]))

# with the stock check, X is set to (restock.x.y ; Cancelbranch1) on the okbranch1 path
branches = load_model(corpus / "warehouse_branches.dec")
sel = FaultSelector(require=(ev("okbranch1"), ev("NotOk")),
                    forbid=frozenset({ev("RequestMembership")}), within=within)
for p in compensation_traces(branches.initial_configuration(), sel, 64, model=branches)[:3]:
    print(" ".join(map(str, p)))

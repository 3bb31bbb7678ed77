"""Backward recovery: compensations run in reverse order of the forward steps."""

from deccsp import FaultMode, compensation_trace, parse_model, traces
from deccsp.explorer import sorted_traces

model = parse_model("""
Book = (bookflight / cancelflight) ; (bookhotel / cancelhotel) ; (bookcar / cancelcar)
init [ Book ; THROWW ]
""")
init = model.initial_configuration()

# with the default mode the block reports the fault after compensating
for t in sorted_traces(traces(init, model=model, elide_tau=True)):
    print(t)

# contained faults end the block silently, so the enclosing process goes on
contain = model.options.with_(fault_mode=FaultMode.CONTAIN)
for t in sorted_traces(traces(init, opts=contain, model=model, elide_tau=True)):
    print(t)

# just the compensation phase
print(" ".join(map(str, compensation_trace(init, model=model))))

# parallel pairs compensate in parallel: every interleaving shows up
par = parse_model("init [ ((a / a1) || (b / b1)) ; THROWW ]")
for t in sorted_traces(traces(par.initial_configuration(), model=par, elide_tau=True)):
    print(t)

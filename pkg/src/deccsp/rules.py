"""Catalogue of rule identifiers reported on transitions.

Each identifier names one inference rule; ``INNER_ONLY`` rules never appear
as the outermost rule of a transition because their conclusion is always
consumed by an enclosing rule.
"""

RULES = {
    # primitives
    "skip": "SKIP performs tick and stops",
    "throw": "THROW performs ! and stops",
    "yield.yield": "YIELD performs ? and stops",
    "yield.done": "YIELD performs tick and stops",
    "emit": "internal: performs one given terminal event and stops",
    "atomic": "an event a performs a and continues as SKIP",
    "atomic.interrupt-before": "interruptible atom yields (?) before its event",
    "atomic.interrupt-after": "interruptible atom performs its event and stops",
    "prefix": "a -> p performs a and continues as p",
    # sequential composition
    "seq.lift": "p ; q follows a non-terminal step of p",
    "seq.done": "p ; q turns tick of p into tau and continues as q",
    "seq.abort": "p ; q ends with ! or ? when p does so to STOP",
    # choice
    "ext.left": "p [] q resolved by a visible or terminal step of p",
    "ext.right": "p [] q resolved by a visible or terminal step of q",
    "ext.tau-left": "tau of p leaves p [] q unresolved",
    "ext.tau-right": "tau of q leaves p [] q unresolved",
    "int.left": "p |~| q silently picks p",
    "int.right": "p |~| q silently picks q",
    # interrupt handler
    "handler.lift": "p [> q follows a non-terminal step of p",
    "handler.catch": "p [> q turns ! of p into tau and runs q",
    "handler.pass": "p [> q passes tick or ? of p to STOP",
    # parallel
    "par.left": "left operand steps alone outside the sync set",
    "par.right": "right operand steps alone outside the sync set",
    "par.sync": "both operands perform the same event of the sync set",
    "par.terminal": "both operands terminate to STOP; labels compose by the terminal table",
    # hiding and renaming
    "hide.lift": "p \\ A follows a step whose event is outside A",
    "hide.hide": "p \\ A turns an event of A into tau",
    "hide.terminal": "p \\ A passes a terminal step to STOP",
    "rename.event": "p [[R]] relabels an event by every image under R",
    "rename.tau": "p [[R]] follows a tau step",
    "rename.terminal": "p [[R]] passes a terminal step to STOP",
    # transaction block
    "block.lift": "[pp] follows a non-terminal step of pp",
    "block.fault": "[pp] ends on ! of pp and runs its compensation",
    "block.yield": "[pp] ends on ? of pp and runs its compensation",
    "block.done": "[pp] ends on tick of pp and discards the compensation",
    # control blocks, names, process variables
    "if.eval": "the condition of If is evaluated in the local store",
    "if.true": "If true Then p Else q becomes p",
    "if.false": "If false Then p Else q becomes q",
    "while": "While b Do p unfolds once into an If",
    "named": "a process name unfolds to its definition",
    "assign": "X := p records p (with data reads fixed) in the global store",
    "retrieve": "X becomes its stored process",
    "retrieve.default-skip": "an unassigned X becomes SKIP (when enabled)",
    "aux-std.lift": "internal <| p , q |> follows a non-terminal step of p",
    "aux-std.end": "internal <| p , q |> continues as q once p terminates to STOP",
    # compensation pairs
    "pair.lift": "p / q follows a non-terminal step of p",
    "pair.done": "p / q on tick of p continues as the compensation q",
    "pair.abort": "p / q on ! or ? of p continues as SKIP",
    "skipp": "SKIPP performs tick with compensation SKIP",
    "throww": "THROWW performs ! with compensation SKIP",
    "yieldd": "YIELDD performs ? or tick with compensation SKIP",
    "varpair.lift": "p / X follows a non-terminal step of p",
    "varpair.done": "p / X on tick of p leaves X as the compensation",
    "varpair.abort": "p / X on ! or ? of p continues as SKIP",
    # compensable composition
    "cseq.lift": "pp ; qq follows a non-terminal step of pp",
    "cseq.done": "pp ; qq on tick of pp becomes <| qq ;; p |>",
    "cseq.abort": "pp ; qq ends with ! or ? of pp and its compensation",
    "aux-comp.lift": "internal <| qq ;; p |> follows a non-terminal step of qq",
    "aux-comp.end": "internal <| qq ;; p |> on a terminal of qq composes q ; p",
    "cext.left": "pp [] qq resolved by pp",
    "cext.right": "pp [] qq resolved by qq",
    "cext.tau-left": "tau of pp leaves pp [] qq unresolved",
    "cext.tau-right": "tau of qq leaves pp [] qq unresolved",
    "cint.left": "pp |~| qq silently picks pp",
    "cint.right": "pp |~| qq silently picks qq",
    "cpar.left": "left compensable operand steps alone",
    "cpar.right": "right compensable operand steps alone",
    "cpar.sync": "both compensable operands perform the same sync event",
    "cpar.terminal": "both terminate; compensations run in parallel",
    "chide.lift": "pp \\ A follows a step outside A",
    "chide.hide": "pp \\ A turns an event of A into tau",
    "chide.terminal": "pp \\ A terminates with compensation p \\ A",
    "crename.event": "pp [[R]] relabels events",
    "crename.tau": "pp [[R]] follows a tau step",
    "crename.terminal": "pp [[R]] terminates with compensation p [[R]]",
    "speculative.left": "pp <> qq follows a non-terminal step of pp",
    "speculative.right": "pp <> qq follows a non-terminal step of qq",
    "speculative.both-fail": "both sides fail; both compensations run after the composed terminal",
    "speculative.left-commits": "pp commits while qq fails",
    "speculative.right-commits": "qq commits while pp fails",
    "speculative.both-commit": "both commit; the compensation order is chosen externally",
    "cif.eval": "compensable If evaluates its condition",
    "cif.true": "compensable If true picks the Then branch",
    "cif.false": "compensable If false picks the Else branch",
    "cwhile": "compensable While unfolds once into an If with Else SKIPP",
    "named-comp": "a compensable process name unfolds to its definition",
}

INNER_ONLY = frozenset({"emit"})

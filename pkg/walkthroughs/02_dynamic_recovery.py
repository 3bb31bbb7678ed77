"""Process variables: a compensation decided (or dropped) while the transaction runs."""

from deccsp import compensation_trace, parse_model
from deccsp.errors import FreshnessViolation


def comp(text):
    m = parse_model(text)
    return " ".join(map(str, compensation_trace(m.initial_configuration(), model=m))) or "(nothing)"


# X stands in the compensation slot; its value is looked up when the fault hits
print(comp("init X := refund ; [ (charge / X) ; THROWW ]"))

# replace: a later step installs a better compensation
print(comp("init X := refund ; [ (charge / X) ; (X := partialrefund / SKIP) ; THROWW ]"))

# discard: X := SKIP drops the contribution altogether
print(comp("init X := refund ; [ (reserve / release) ; (charge / X) ; (X := SKIP / SKIP) ; THROWW ]"))

# assignment takes a snapshot of the data it mentions
print(comp("init X := refund.amt ; [ (charge.amt / X) ; THROWW ] with amt = 30"))

# two pairs bound to the same variable are rejected before anything runs
try:
    parse_model("init [ (a / X) ; (b / X) ; THROWW ]")
except FreshnessViolation as err:
    print("rejected:", err)

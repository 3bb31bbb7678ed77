import re

import pytest

from deccsp.rulecheck import check_micro, load_micro_models, parse_micro
from deccsp.rules import INNER_ONLY, RULES

MODELS = load_micro_models()


@pytest.mark.parametrize("model", MODELS, ids=[m.name for m in MODELS])
def test_micro_model(model):
    result = check_micro(model)
    assert result.ok, result.describe()


def _rules_in(model):
    return {re.search(r"\[([^\]]+)\]", e).group(1) for e in model.expect}


def test_every_rule_has_a_micro_model():
    by_rule = {m.rule for m in MODELS}
    assert set(RULES) <= by_rule


def test_each_model_exhibits_its_rule():
    for m in MODELS:
        if m.rule not in INNER_ONLY:
            assert m.rule in _rules_in(m), m.name


def test_expectations_name_known_rules():
    for m in MODELS:
        assert _rules_in(m) <= set(RULES), m.name


def test_checker_detects_a_wrong_target():
    m = parse_micro("wrong", "-- rule: skip\n-- expect: ✓ [skip] SKIP | {} | {}\ninit SKIP\n")
    result = check_micro(m)
    assert not result.ok
    assert "unexpected: ✓ [skip] STOP" in result.describe()


def test_checker_reports_blocked_path():
    m = parse_micro("blocked", "-- rule: skip\n-- path: a\n-- expect: x\ninit SKIP\n")
    assert "not enabled" in check_micro(m).describe()


def test_header_requires_rule():
    with pytest.raises(ValueError):
        parse_micro("bare", "init SKIP\n")

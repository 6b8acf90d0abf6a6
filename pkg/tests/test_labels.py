"""Strategy label parsing and printing"""

import pytest

from airdrop_svc.cost_model.enums import Side, StrategyFamily
from airdrop_svc.cost_model.labels import calibration_key, format_label, parse_label
from airdrop_svc.cost_model.scenario_runner import enumerate_scenarios
from airdrop_svc.errors import LabelError


def test_every_benchmark_label_round_trips():
    for scenario in enumerate_scenarios():
        d = parse_label(scenario.label)
        assert format_label(d) == scenario.label
        assert parse_label(format_label(d)) == d


def test_parse_batched_label():
    d = parse_label("INTERNAL_BATCH|PUSH|UNIFORM|100")
    assert d.family == StrategyFamily.INTERNAL_BATCH_PUSH
    assert d.batch_size == 100
    assert d.uniform
    assert not d.zero_reset


def test_parse_is_case_and_whitespace_insensitive():
    assert parse_label("  external_batch|push|200 ") == parse_label("EXTERNAL_BATCH|PUSH|200")


def test_special_labels():
    assert parse_label("NAIVE|PUSH").family == StrategyFamily.NAIVE_PUSH
    recipient = parse_label("PULL|RECIPIENT_COST")
    assert recipient.family == StrategyFamily.INTERNAL_BATCH_PULL
    assert recipient.side == Side.RECIPIENT
    assert parse_label("POOLED|MERKLE").family == StrategyFamily.POOLED_MERKLE
    baseline = parse_label("BASE_LINE|INTERNAL_BATCH|PUSH|UNIFORM|800")
    assert baseline.family == StrategyFamily.BASELINE
    assert baseline.batch_size == 800


def test_zero_reset_token():
    d = parse_label("INTERNAL_BATCH|PULL|ZERO_RESET|UNIFORM|100")
    assert d.zero_reset and d.uniform
    assert format_label(d) == "INTERNAL_BATCH|PULL|ZERO_RESET|UNIFORM|100"
    assert calibration_key(d) == "INTERNAL_BATCH|PULL|UNIFORM|100"


@pytest.mark.parametrize("label", [
    "",
    "NAIVE",
    "EXTERNAL_BATCH|PULL|100",
    "INTERNAL_BATCH|PUSH|0",
    "INTERNAL_BATCH|PUSH|abc",
    "INTERNAL_BATCH|PUSH|UNIFORM|ZERO_RESET|100",
    "INTERNAL_BATCH|PUSH|ZERO_RESET|100",
    "INTERNAL_BATCH|PUSH|FAST|100",
    "BASE_LINE|INTERNAL_BATCH|PUSH|UNIFORM|",
])
def test_bad_labels(label):
    with pytest.raises(LabelError):
        parse_label(label)


@pytest.mark.parametrize("label, family", [
    ("PULL|RECIPIENT_COST", StrategyFamily.INTERNAL_BATCH_PULL),
    ("POOLED|RECIPIENT_COST", StrategyFamily.POOLED_MERKLE),
])
def test_recipient_side_labels_round_trip(label, family):
    d = parse_label(label)
    assert (d.family, d.side) == (family, Side.RECIPIENT)
    assert format_label(d) == label
    assert parse_label(format_label(d)) == d

"""Benchmark scenarios, sweeps, exports and the OmiseGO cross-check"""

from decimal import Decimal

import numpy as np
import pytest

from airdrop_svc.cost_model.enums import ExportFormat, ScenarioRole
from airdrop_svc.cost_model.labels import parse_label
from airdrop_svc.cost_model.scenario_runner import (
    BASELINE_BATCH_SIZES,
    BATCH_SIZES,
    DEFAULT_N_VALUES,
    enumerate_scenarios,
    export_rows,
    group_by_label,
    omisego_estimate,
    parse_n_range,
    parse_rows,
    plot_file_name,
    run_sweep,
)
from airdrop_svc.cost_model.strategies import distributor_cost
from airdrop_svc.errors import DomainError

BLUE = [0.5, 0.75, 1.0]
BROWN = [0.75, 1.0]
RED = [1.0]
BLACK = []
GREEN = [0.1, 0.25, 0.5, 0.75, 1.0]

EXPECTED_FEASIBILITY = {
    "NAIVE|PUSH": GREEN,
    "PULL|RECIPIENT_COST": GREEN,
    "INTERNAL_BATCH|PULL|UNIFORM|1": GREEN,
    "EXTERNAL_BATCH|PUSH|UNIFORM|100": BLUE,
    "EXTERNAL_BATCH|PUSH|100": BLUE,
    "INTERNAL_BATCH|PUSH|UNIFORM|100": BLUE,
    "INTERNAL_BATCH|PUSH|100": BLUE,
    "INTERNAL_BATCH|PULL|UNIFORM|100": BLUE,
    "INTERNAL_BATCH|PULL|100": BLUE,
    "BASE_LINE|INTERNAL_BATCH|PUSH|UNIFORM|100": BLUE,
    "INTERNAL_BATCH|PUSH|UNIFORM|200": BROWN,
    "INTERNAL_BATCH|PUSH|200": RED,
    "EXTERNAL_BATCH|PUSH|UNIFORM|200": RED,
    "EXTERNAL_BATCH|PUSH|200": RED,
    "INTERNAL_BATCH|PULL|UNIFORM|200": BROWN,
    "INTERNAL_BATCH|PULL|200": BROWN,
    "INTERNAL_BATCH|PULL|UNIFORM|300": RED,
    "INTERNAL_BATCH|PULL|300": RED,
    "INTERNAL_BATCH|PULL|UNIFORM|400": BLACK,
    "INTERNAL_BATCH|PULL|400": BLACK,
    "BASE_LINE|INTERNAL_BATCH|PUSH|UNIFORM|200": BROWN,
    "BASE_LINE|INTERNAL_BATCH|PUSH|UNIFORM|300": RED,
    "BASE_LINE|INTERNAL_BATCH|PUSH|UNIFORM|400": BLACK,
    "BASE_LINE|INTERNAL_BATCH|PUSH|UNIFORM|800": BLACK,
}


@pytest.fixture(scope="module")
def rows_at_1000(table):
    return {r.label: r for r in run_sweep(enumerate_scenarios(), [1000], table=table)}


def test_enumerates_35_scenarios():
    scenarios = enumerate_scenarios()
    assert len(scenarios) == 35
    assert len({s.label for s in scenarios}) == 35
    roles = [s.role for s in scenarios]
    assert roles.count(ScenarioRole.UPPER_BOUND) == 1
    assert roles.count(ScenarioRole.LOWER_BOUND) == 8


@pytest.mark.parametrize("text, expected", [
    ("100:500:100", [100, 200, 300, 400, 500]),
    ("100:450:100", [100, 200, 300, 400]),
    ("7:7:1", [7]),
])
def test_parse_n_range(text, expected):
    assert parse_n_range(text) == expected


@pytest.mark.parametrize("text", ["", "100:500", "0:10:1", "10:5:1", "1:10:0", "a:b:c"])
def test_parse_n_range_errors(text):
    with pytest.raises(DomainError):
        parse_n_range(text)


def test_sweep_reproduces_measured_totals(rows_at_1000, targets):
    for label, target in targets.items():
        assert abs(rows_at_1000[label].total_gas - target) <= 10, label


@pytest.mark.parametrize("label, grades", sorted(EXPECTED_FEASIBILITY.items()))
def test_feasibility_at_1000(rows_at_1000, label, grades):
    assert rows_at_1000[label].feasible_at == grades


def test_every_push_batch_of_300_or_more_is_infeasible(rows_at_1000):
    for label, row in rows_at_1000.items():
        if "|PUSH|" in label and not label.startswith("BASE_LINE") and label.endswith(("|300", "|400")):
            assert row.feasible_at == [], label


def test_sides_are_reported_separately(rows_at_1000):
    recipient = rows_at_1000["PULL|RECIPIENT_COST"]
    assert recipient.distributor_gas == 0
    assert recipient.recipient_gas_total == recipient.total_gas
    pull = rows_at_1000["INTERNAL_BATCH|PULL|UNIFORM|100"]
    assert pull.recipient_gas_total == 0
    assert pull.total_gas == pull.distributor_gas


def test_headline_savings(rows_at_1000):
    def total(label):
        return rows_at_1000[label].total_gas

    def saving(cheaper, dearer):
        return round(100 * (total(dearer) - total(cheaper)) / total(dearer), 2)

    naive = "NAIVE|PUSH"
    assert saving("INTERNAL_BATCH|PUSH|UNIFORM|100", naive) == 41.92
    assert saving("BASE_LINE|INTERNAL_BATCH|PUSH|UNIFORM|100", naive) == 58.19
    assert saving("INTERNAL_BATCH|PUSH|UNIFORM|100", "EXTERNAL_BATCH|PUSH|UNIFORM|100") == 8.03
    assert saving("INTERNAL_BATCH|PUSH|UNIFORM|100", "INTERNAL_BATCH|PUSH|100") == 1.07
    pull = total("INTERNAL_BATCH|PULL|100") + total("PULL|RECIPIENT_COST")
    assert round(100 * (pull - total(naive)) / total(naive), 1) == 32.5


def test_sweep_rows_are_ordered(table):
    rows = run_sweep(enumerate_scenarios()[:3], [300, 100, 200], table=table)
    keys = [(r.label, r.n) for r in rows]
    assert keys == sorted(keys)
    assert len(rows) == 9


def test_fill_grade_filters_whole_scenarios(table):
    rows = run_sweep(enumerate_scenarios(), [100, 1000], fill_grade=0.5, table=table)
    labels = {r.label for r in rows}
    assert "INTERNAL_BATCH|PUSH|UNIFORM|100" in labels
    assert "INTERNAL_BATCH|PUSH|UNIFORM|200" not in labels
    assert all(0.5 in r.feasible_at for r in rows)


def test_half_fill_scenarios_scale_linearly(table):
    rows = run_sweep(enumerate_scenarios(), DEFAULT_N_VALUES, fill_grade=0.5, table=table)
    groups = group_by_label(rows)
    assert "NAIVE|PUSH" in groups and "INTERNAL_BATCH|PULL|UNIFORM|100" in groups
    for label, group in groups.items():
        n = np.array([r.n for r in group], dtype=float)
        gas = np.array([r.total_gas for r in group], dtype=float)
        fitted = np.polyval(np.polyfit(n, gas, 1), n)
        assert np.max(np.abs(gas - fitted) / gas) < 0.005, label


@pytest.mark.parametrize("prefix, sizes", [
    ("EXTERNAL_BATCH|PUSH|UNIFORM", BATCH_SIZES),
    ("EXTERNAL_BATCH|PUSH", BATCH_SIZES),
    ("INTERNAL_BATCH|PUSH|UNIFORM", BATCH_SIZES),
    ("INTERNAL_BATCH|PUSH", BATCH_SIZES),
    ("INTERNAL_BATCH|PULL|UNIFORM", BATCH_SIZES),
    ("INTERNAL_BATCH|PULL", BATCH_SIZES),
    ("BASE_LINE|INTERNAL_BATCH|PUSH|UNIFORM", BASELINE_BATCH_SIZES),
])
def test_larger_batches_never_shrink_the_largest_transaction(table, prefix, sizes):
    largest = [max(b.gas for b in distributor_cost(table.apply(parse_label(f"{prefix}|{bs}")), 1000).batches)
               for bs in sizes]
    assert largest == sorted(largest)


def test_rejects_unknown_fill_grade(table):
    with pytest.raises(DomainError):
        run_sweep(enumerate_scenarios(), [100], fill_grade=0.3, table=table)


def test_discounted_sweep_drops_pull_and_saves_storage(table):
    rows = run_sweep(enumerate_scenarios(), [1000], discounted=True, table=table)
    labels = {r.label for r in rows}
    assert not any("PULL" in label for label in labels)
    for r in rows:
        assert r.total_gas - r.discounted_gas == 1000 * 15000


def test_table_export_round_trips(table):
    rows = run_sweep(enumerate_scenarios()[:2], [100, 200], discounted=True, table=table)
    text = export_rows(rows, ExportFormat.TABLE)
    assert text.splitlines()[0] == ("label,n,distributor_gas,recipient_gas_total,total_gas,"
                                    "discounted_gas,blocks_at_half_fill,feasible_at")
    assert parse_rows(text) == rows


def test_plot_pairs_are_scaled(table):
    rows = run_sweep(enumerate_scenarios()[-9:-8], [1000], table=table)
    assert rows[0].label == "NAIVE|PUSH"
    assert export_rows(rows, "plot-pairs") == f"1000 {(Decimal(rows[0].total_gas) / 100000).normalize():f}\n"
    assert export_rows(rows, "plot-pairs", scaled=False) == f"1000 {rows[0].total_gas}\n"


def test_unknown_export_format():
    with pytest.raises(DomainError):
        export_rows([], "xml")


def test_grouping_and_file_names(table):
    rows = run_sweep(enumerate_scenarios()[:2], [100, 200], table=table)
    groups = group_by_label(rows)
    assert list(groups) == sorted(groups)
    assert all(len(g) == 2 for g in groups.values())
    assert plot_file_name("EXTERNAL_BATCH|PUSH|UNIFORM|100") == "external_batch_push_uniform_100.dat"


class TestOmiseGo:

    def test_cross_check(self, table):
        estimate = omisego_estimate(table=table)
        assert estimate.recipients == 450_000
        assert abs(estimate.total_gas - 450 * 32_979_650) <= 450 * 10
        assert estimate.blocks == 3712
        assert estimate.duration_s == 3712 * 15
        assert estimate.discrepancy
        assert estimate.published_blocks == 1440

    def test_usd(self, table):
        rate = Decimal(44523) / Decimal(14_840_842_500)
        estimate = omisego_estimate(usd_per_gas=rate, table=table)
        assert abs(estimate.usd - Decimal(44523)) < 10

    @pytest.mark.parametrize("rate", ["0", "-1", "abc"])
    def test_rejects_bad_rate(self, table, rate):
        with pytest.raises(DomainError):
            omisego_estimate(usd_per_gas=rate, table=table)

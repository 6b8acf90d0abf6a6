"""Command-line front end: output, exit statuses and file artifacts"""

import json

import pytest

from airdrop_svc.cli import EXIT_DOMAIN, EXIT_OK, EXIT_USAGE, main


def fields(text: str) -> dict:
    result = {}
    for line in text.splitlines():
        name, _, value = line.partition(" ")
        result[name] = value.strip()
    return result


def test_cost_itemizes_naive(capsys):
    assert main(["cost", "NAIVE|PUSH", "-n", "1000"]) == EXIT_OK
    out = fields(capsys.readouterr().out)
    assert out["strategy"] == "NAIVE|PUSH"
    assert out["intrinsic"] == str(1000 * 21000)
    assert out["total_gas"] == "51704880"
    assert out["batches"] == "1000"
    assert out["blocks_at_half_fill"] == "13"
    assert out["feasible_at"] == "0.1,0.25,0.5,0.75,1"


def test_cost_batch_size_override(capsys):
    assert main(["cost", "INTERNAL_BATCH|PUSH|UNIFORM|100", "-n", "1000", "--batch-size", "400"]) == EXIT_OK
    out = fields(capsys.readouterr().out)
    assert out["strategy"] == "INTERNAL_BATCH|PUSH|UNIFORM|400"
    assert out["feasible_at"] == "infeasible"


def test_cost_of_pull_reports_both_sides(capsys):
    assert main(["cost", "INTERNAL_BATCH|PULL|UNIFORM|100", "-n", "1000", "--no-zero-reset"]) == EXIT_OK
    out = fields(capsys.readouterr().out)
    assert out["recipient_gas_each"] == "44240.88"
    assert out["recipient_gas_total"] == "44240880"


def test_cost_of_pull_defaults_to_zero_reset(capsys):
    assert main(["cost", "INTERNAL_BATCH|PULL|UNIFORM|100", "-n", "100"]) == EXIT_OK
    assert fields(capsys.readouterr().out)["strategy"] == "INTERNAL_BATCH|PULL|ZERO_RESET|UNIFORM|100"


def test_cost_of_recipient_side(capsys):
    assert main(["cost", "PULL|RECIPIENT_COST", "-n", "1000"]) == EXIT_OK
    assert fields(capsys.readouterr().out)["total_gas"] == "44240880"


def test_discounted_cost(capsys):
    assert main(["cost", "NAIVE|PUSH", "-n", "10", "--discounted"]) == EXIT_OK
    discounted = int(fields(capsys.readouterr().out)["distributor_gas"])
    main(["cost", "NAIVE|PUSH", "-n", "10"])
    assert int(fields(capsys.readouterr().out)["distributor_gas"]) - discounted == 10 * 15000


def test_discount_of_pull_is_a_domain_error(capsys):
    assert main(["cost", "INTERNAL_BATCH|PULL|100", "-n", "10", "--discounted"]) == EXIT_DOMAIN
    assert "DiscountError" in capsys.readouterr().err


def test_discount_of_recipient_side_is_a_domain_error(capsys):
    assert main(["cost", "PULL|RECIPIENT_COST", "-n", "10", "--discounted"]) == EXIT_DOMAIN
    assert "DiscountError" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [
    ["cost", "NAIVE|PUSH"],
    ["cost", "NOT|A|STRATEGY", "-n", "10"],
    ["cost", "NAIVE|PUSH", "-n", "0"],
    ["frobnicate"],
    ["sweep", "--n-range", "10:1:1"],
    ["sweep", "--fill", "0.3"],
    ["fiat", "--gas", "100"],
    ["--schedule", "/nonexistent/schedule.txt", "cost", "NAIVE|PUSH", "-n", "1"],
])
def test_usage_errors(capsys, argv):
    assert main(argv) == EXIT_USAGE
    assert "usage error" in capsys.readouterr().err


def test_bad_label_lists_valid_forms(capsys):
    main(["cost", "NOT|A|STRATEGY", "-n", "10"])
    assert "INTERNAL_BATCH|PULL[|ZERO_RESET][|UNIFORM]|<bs>" in capsys.readouterr().err


def test_schedule_override(tmp_path, capsys):
    schedule = tmp_path / "schedule.txt"
    schedule.write_text("block_gas_limit=100000000\n")
    assert main(["--schedule", str(schedule), "feasibility", "INTERNAL_BATCH|PUSH|UNIFORM|400",
                 "-n", "1000"]) == EXIT_OK
    out = fields(capsys.readouterr().out)
    assert out["block_gas_limit"] == "100000000"
    assert out["min_fill_grade"] == "0.25"


def test_feasibility(capsys):
    assert main(["feasibility", "INTERNAL_BATCH|PUSH|UNIFORM|200", "-n", "1000"]) == EXIT_OK
    out = fields(capsys.readouterr().out)
    assert out["feasible_at"] == "0.75,1"
    assert out["min_fill_grade"] == "0.75"


def test_sweep_table_to_stdout(capsys):
    assert main(["sweep", "--n-range", "100:200:100", "--label", "NAIVE|PUSH",
                 "--label", "internal_batch|push|uniform|100"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("label,n,")
    assert len(lines) == 5


def test_sweep_benchmark_scenarios_flag(capsys):
    argv = ["sweep", "--n-range", "1000:1000:1", "--fill", "0.5"]
    assert main(argv) == EXIT_OK
    default = capsys.readouterr().out
    assert main(["sweep", "--paper-scenarios", *argv[1:]]) == EXIT_OK
    assert capsys.readouterr().out == default
    assert "NAIVE|PUSH,1000," in default


def test_benchmark_scenarios_flag_excludes_label(capsys):
    assert main(["sweep", "--paper-scenarios", "--label", "NAIVE|PUSH"]) == EXIT_USAGE
    assert "not allowed with" in capsys.readouterr().err


def test_sweep_plot_files(tmp_path, capsys):
    out = tmp_path / "plots"
    assert main(["sweep", "--n-range", "1000:1000:1", "--format", "plot-pairs", "--fill", "0.5",
                 "--out", str(out)]) == EXIT_OK
    names = {p.name for p in out.iterdir()}
    assert "naive_push.dat" in names
    assert "internal_batch_push_uniform_200.dat" not in names
    assert (out / "naive_push.dat").read_text() == "1000 517.0488\n"


def test_sweep_table_file(tmp_path):
    assert main(["sweep", "--n-range", "100:100:1", "--discounted", "--out", str(tmp_path)]) == EXIT_OK
    text = (tmp_path / "sweep.csv").read_text()
    assert "PULL" not in text
    assert len(text.splitlines()) == 1 + 25


def test_calibrate_and_reuse(tmp_path, fixtures_dir, capsys):
    path = tmp_path / "calibration.txt"
    assert main(["calibrate", "--targets", str(fixtures_dir / "fig7.csv"), "--out", str(path)]) == EXIT_OK
    assert "NAIVE|PUSH=2012.88" in path.read_text().splitlines()
    assert main(["--calibration", str(path), "cost", "NAIVE|PUSH", "-n", "1000"]) == EXIT_OK
    assert fields(capsys.readouterr().out)["total_gas"] == "51704880"


def test_calibrate_unreachable_target(tmp_path, capsys):
    targets = tmp_path / "targets.csv"
    targets.write_text("label,gas\nINTERNAL_BATCH|PUSH|100,1000\n")
    assert main(["calibrate", "--targets", str(targets)]) == EXIT_DOMAIN
    err = capsys.readouterr().err
    assert "CalibrationError" in err
    assert "intrinsic" in err


def test_calibrate_missing_targets(tmp_path, capsys):
    assert main(["calibrate", "--targets", str(tmp_path / "none.csv")]) == EXIT_USAGE


def test_fiat_from_rate(capsys):
    assert main(["fiat", "--rate", "2.90115E-6", "--strategy", "NAIVE|PUSH", "-n", "1000"]) == EXIT_OK
    assert fields(capsys.readouterr().out)["usd_per_recipient"] == "0.1500"


def test_fiat_from_price_file(fixtures_dir, capsys):
    assert main(["fiat", "--prices", str(fixtures_dir / "prices_sample.csv"), "--date", "2018-01-03",
                 "--gas", "1000000"]) == EXIT_OK
    out = fields(capsys.readouterr().out)
    assert out["gas_price_gwei"] == "52"
    assert out["gas_price_median"] == "39.000000000"
    assert out["usd"] == "50.0614"


def test_fiat_moving_average_too_long(fixtures_dir, capsys):
    assert main(["fiat", "--prices", str(fixtures_dir / "prices_sample.csv"), "--ma", "60",
                 "--gas", "1"]) == EXIT_DOMAIN
    assert "series too short" in capsys.readouterr().err


def test_merkle_workflow(tmp_path, fixtures_dir, capsys):
    dist_path = tmp_path / "dist.json"
    assert main(["merkle-build", "--in", str(fixtures_dir / "recipients_sample.txt"),
                 "--out", str(dist_path)]) == EXIT_OK
    root = fields(capsys.readouterr().out)["root"]

    assert main(["merkle-prove", "--dist", str(dist_path), "--index", "1"]) == EXIT_OK
    proof = json.loads(capsys.readouterr().out)
    assert proof["amount"] == 2500
    proof_path = tmp_path / "proof.json"
    proof_path.write_text(json.dumps(proof))

    assert main(["merkle-verify", "--proof-file", str(proof_path), "--root", root]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "accept"
    assert main(["merkle-verify", "--proof-file", str(proof_path), "--root", root,
                 "--amount", "2501"]) == EXIT_DOMAIN
    assert capsys.readouterr().out.strip() == "reject"

    registry_path = tmp_path / "registry.json"
    claim = ["merkle-claim", "--proof-file", str(proof_path), "--registry", str(registry_path),
             "--dist", str(dist_path), "--deadline", "100", "--now", "5"]
    assert main(claim) == EXIT_OK
    assert fields(capsys.readouterr().out)["total_claimed"] == "2500"
    assert main(claim) == EXIT_DOMAIN
    assert "AlreadyClaimed" in capsys.readouterr().err

    assert main(["merkle-reclaim", "--registry", str(registry_path), "--now", "50"]) == EXIT_DOMAIN
    assert main(["merkle-reclaim", "--registry", str(registry_path), "--now", "101"]) == EXIT_OK
    assert fields(capsys.readouterr().out)["returned"] == "1500"


def test_merkle_prove_by_address(tmp_path, fixtures_dir, capsys):
    dist_path = tmp_path / "dist.json"
    main(["merkle-build", "--in", str(fixtures_dir / "recipients_sample.txt"), "--out", str(dist_path)])
    capsys.readouterr()
    assert main(["merkle-prove", "--dist", str(dist_path), "--address",
                 "0x3333333333333333333333333333333333333333"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["amount"] == 500
    assert main(["merkle-prove", "--dist", str(dist_path), "--index", "9"]) == EXIT_DOMAIN


def test_new_registry_needs_distribution(tmp_path, capsys):
    proof = tmp_path / "proof.json"
    proof.write_text(json.dumps({"address": "0x" + "11" * 20, "amount": 1, "siblings": []}))
    assert main(["merkle-claim", "--proof-file", str(proof), "--registry", str(tmp_path / "r.json"),
                 "--now", "1"]) == EXIT_USAGE


def test_merkle_gas(capsys):
    assert main(["merkle-gas", "-n", "1000"]) == EXIT_OK
    assert fields(capsys.readouterr().out)["claim_gas"] == "86462.88"


def test_malformed_registry_is_a_domain_error(tmp_path, capsys):
    registry = tmp_path / "registry.json"
    registry.write_text('{"root": 5}')
    assert main(["merkle-reclaim", "--registry", str(registry), "--now", "1"]) == EXIT_DOMAIN
    assert "MerkleError" in capsys.readouterr().err

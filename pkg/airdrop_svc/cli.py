"""
Command-line front end

Exit status: 0 success, 1 domain error, 2 usage error.
Results go to stdout; diagnostics and logs go to stderr.
"""
import argparse
import logging
import sys
from datetime import date as Date
from decimal import Decimal, InvalidOperation
from pathlib import Path
from typing import List, Optional

from airdrop_svc.cost_model import fiat
from airdrop_svc.cost_model.calibration import CalibrationTable, default_table, load_targets
from airdrop_svc.cost_model.enums import ExportFormat, Side, StrategyFamily
from airdrop_svc.cost_model.gas_model import load_schedule
from airdrop_svc.cost_model.labels import VALID_LABEL_FORMS, format_label, parse_label
from airdrop_svc.cost_model.scenario_runner import (
    DEFAULT_N_VALUES,
    enumerate_scenarios,
    export_rows,
    group_by_label,
    parse_n_range,
    plot_file_name,
    run_sweep,
)
from airdrop_svc.cost_model.schemas import FILL_GRADES, GasSchedule, StrategyDescriptor
from airdrop_svc.cost_model.strategies import (
    apply_discount,
    blocks_needed,
    distributor_cost,
    feasibility,
    feasibility_report,
    recipient_cost,
    round_gas,
)
from airdrop_svc.errors import AirdropError, CalibrationError, DiscountError, LabelError, UsageError
from airdrop_svc.merkle import distribution, registry
from airdrop_svc.merkle.schemas import ProofEntry, Recipient

logger = logging.getLogger("airdrop_svc")

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that raises instead of exiting so main() owns the exit status"""

    def error(self, message: str):
        raise UsageError(message)


def _field(name: str, value) -> str:
    return f"{name:<22}{value}"


def _grades(grades: List[float]) -> str:
    return ",".join(f"{g:g}" for g in grades) if grades else "infeasible"


def _positive_int(text: str) -> int:
    if not text.isdigit() or int(text) < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return int(text)


def _table(args: argparse.Namespace, schedule: GasSchedule) -> CalibrationTable:
    if args.calibration:
        return CalibrationTable.load(args.calibration)
    return default_table(schedule)


def _descriptor(args: argparse.Namespace) -> StrategyDescriptor:
    try:
        d = parse_label(args.label)
    except LabelError as e:
        raise UsageError(f"{e}; valid labels: {', '.join(VALID_LABEL_FORMS)}") from e
    update = {}
    if getattr(args, "batch_size", None):
        update["batch_size"] = args.batch_size
    if getattr(args, "uniform", False):
        update["uniform"] = True
    if (d.family == StrategyFamily.INTERNAL_BATCH_PULL and d.side == Side.DISTRIBUTOR
            and not getattr(args, "no_zero_reset", True)):
        update["zero_reset"] = True
    if not update:
        return d
    try:
        return StrategyDescriptor(**{**d.model_dump(), **update})
    except ValueError as e:
        raise UsageError(str(e)) from e


# ------------------------------------------------------------
# Cost model commands
# ------------------------------------------------------------

def cmd_cost(args: argparse.Namespace, schedule: GasSchedule) -> int:
    d = _table(args, schedule).apply(_descriptor(args))
    n = args.recipients
    print(_field("strategy", format_label(d)))
    print(_field("recipients", n))

    if d.side == Side.RECIPIENT:
        if args.discounted:
            raise DiscountError("discount is undefined for the recipient side")
        each = recipient_cost(d, n, schedule)
        total = round_gas(each * n)
        print(_field("recipient_gas_each", each))
        print(_field("recipient_gas_total", total))
        print(_field("total_gas", total))
        report = feasibility(d, n, schedule)
    else:
        breakdown = distributor_cost(d, n, schedule)
        if args.discounted:
            breakdown = apply_discount(breakdown, schedule)
        for item in breakdown.items:
            print(_field(item.label, item.gas))
        print(_field("batches", len(breakdown.batches)))
        print(_field("distributor_gas", breakdown.distributor_gas))
        print(_field("recipient_gas_each", breakdown.recipient_gas_each))
        print(_field("recipient_gas_total", breakdown.recipient_gas_total))
        print(_field("total_gas", breakdown.total_gas))
        total = breakdown.total_gas
        report = feasibility_report(max(b.gas for b in breakdown.batches), schedule)

    print(_field("max_batch_gas", report.max_batch_gas))
    print(_field("feasible_at", _grades(report.feasible_at)))
    print(_field("blocks_at_half_fill", blocks_needed(total, 0.5, schedule)))
    return EXIT_OK


def cmd_feasibility(args: argparse.Namespace, schedule: GasSchedule) -> int:
    d = _table(args, schedule).apply(_descriptor(args))
    report = feasibility(d, args.recipients, schedule)
    print(_field("strategy", format_label(d)))
    print(_field("max_batch_gas", report.max_batch_gas))
    print(_field("block_gas_limit", schedule.block_gas_limit))
    print(_field("feasible_at", _grades(report.feasible_at)))
    print(_field("min_fill_grade", report.min_fill_grade if report.min_fill_grade is not None else "none"))
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace, schedule: GasSchedule) -> int:
    try:
        n_values = parse_n_range(args.n_range) if args.n_range else DEFAULT_N_VALUES
    except AirdropError as e:
        raise UsageError(str(e)) from e
    if args.fill is not None and args.fill not in FILL_GRADES:
        raise UsageError(f"--fill must be one of {', '.join(f'{g:g}' for g in FILL_GRADES)}")

    scenarios = enumerate_scenarios()
    if args.label:
        try:
            wanted = {format_label(parse_label(label)) for label in args.label}
        except LabelError as e:
            raise UsageError(f"{e}; valid labels: {', '.join(VALID_LABEL_FORMS)}") from e
        scenarios = [s for s in scenarios if s.label in wanted]
    rows = run_sweep(scenarios, n_values, discounted=args.discounted, fill_grade=args.fill,
                     schedule=schedule, table=_table(args, schedule))
    fmt = ExportFormat(args.format)

    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        if fmt == ExportFormat.PLOT_PAIRS:
            for label, group in group_by_label(rows).items():
                (out / plot_file_name(label)).write_text(export_rows(group, fmt, scaled=not args.unscaled))
        else:
            (out / "sweep.csv").write_text(export_rows(rows, fmt))
        logger.info(f"[sweep] wrote {len(rows)} rows to {out}")
        return EXIT_OK

    if fmt == ExportFormat.PLOT_PAIRS:
        for label, group in group_by_label(rows).items():
            sys.stdout.write(f"# {label}\n")
            sys.stdout.write(export_rows(group, fmt, scaled=not args.unscaled))
    else:
        sys.stdout.write(export_rows(rows, fmt))
    return EXIT_OK


def cmd_calibrate(args: argparse.Namespace, schedule: GasSchedule) -> int:
    targets = load_targets(args.targets)
    try:
        table = CalibrationTable.fit(targets, n=args.recipients, schedule=schedule)
    except CalibrationError as e:
        for label, gas in e.items:
            print(_field(label, gas), file=sys.stderr)
        raise
    if args.out:
        table.save(args.out)
        logger.info(f"[calibrate] wrote {len(table)} entries to {args.out}")
    else:
        sys.stdout.write(table.to_text())
    return EXIT_OK


def cmd_fiat(args: argparse.Namespace, schedule: GasSchedule) -> int:
    point = None
    if args.prices:
        series = fiat.load_prices_file(args.prices)
        if args.ma:
            series = fiat.moving_average(series, window=args.ma)
        if not len(series):
            raise AirdropError("price file has no data rows")
        if args.date:
            matches = [p for p in series.points if p.date == args.date]
            if not matches:
                raise AirdropError(f"no price point on {args.date}")
            point = matches[0]
        else:
            point = series.points[-1]
        summary = fiat.price_summary(series)
        print(_field("date", point.date.isoformat()))
        print(_field("gas_price_gwei", point.gas_price_gwei))
        print(_field("eth_usd", point.eth_usd))
        print(_field("gas_price_low", summary["low"]))
        print(_field("gas_price_median", summary["median"]))
        print(_field("gas_price_high", summary["high"]))

    if args.rate is not None:
        rate = args.rate
    elif point is not None:
        rate = fiat.usd_per_gas(point)
    else:
        raise UsageError("fiat needs --prices or --rate")
    print(_field("usd_per_gas", f"{rate:E}"))

    if args.gas is not None:
        print(_field("gas", args.gas))
        print(_field("usd", fiat.gas_to_usd(args.gas, rate)))
    elif args.strategy:
        if not args.recipients:
            raise UsageError("--strategy requires --recipients")
        args.label = args.strategy
        d = _table(args, schedule).apply(_descriptor(args))
        each = fiat.per_recipient_usd(d, args.recipients, rate, schedule)
        print(_field("strategy", format_label(d)))
        print(_field("usd_per_recipient", each))
        print(_field("usd_total", (each * args.recipients).quantize(fiat.USD_PLACES)))
    return EXIT_OK


# ------------------------------------------------------------
# Merkle commands
# ------------------------------------------------------------

def _read_proof(path: str) -> ProofEntry:
    p = Path(path)
    if not p.exists():
        raise UsageError(f"proof file not found: {p}")
    try:
        return ProofEntry.model_validate_json(p.read_text())
    except ValueError as e:
        raise UsageError(f"invalid proof file {p}: {e}") from e


def _claim_from(args: argparse.Namespace):
    entry = _read_proof(args.proof_file)
    address = args.address or entry.address
    amount = args.amount if args.amount is not None else entry.amount
    try:
        recipient = Recipient(address=address, amount=amount)
    except ValueError as e:
        raise UsageError(str(e)) from e
    siblings = [distribution.parse_hex(s) for s in entry.siblings]
    return recipient, distribution.MerkleProof(leaf_index=0, siblings=siblings)


def cmd_merkle_build(args: argparse.Namespace, schedule: GasSchedule) -> int:
    dist = distribution.build(distribution.load_recipients(args.input))
    document = distribution.export_distribution(dist)
    if args.out:
        Path(args.out).write_text(document)
        print(_field("root", dist.root_hex))
        print(_field("depth", dist.depth))
        print(_field("recipients", len(dist)))
    else:
        sys.stdout.write(document)
    return EXIT_OK


def cmd_merkle_prove(args: argparse.Namespace, schedule: GasSchedule) -> int:
    doc = distribution.load_distribution(Path(args.dist).read_text())
    index = args.index if args.index is not None else distribution.find_entry(doc, args.address)
    recipient, proof = distribution.entry_claim(doc, index)
    entry = ProofEntry(address=recipient.address, amount=recipient.amount, siblings=proof.hex_siblings())
    sys.stdout.write(entry.model_dump_json(indent=2) + "\n")
    return EXIT_OK


def cmd_merkle_verify(args: argparse.Namespace, schedule: GasSchedule) -> int:
    recipient, proof = _claim_from(args)
    root = distribution.parse_hex(args.root)
    accepted = distribution.verify(root, recipient, proof)
    print("accept" if accepted else "reject")
    return EXIT_OK if accepted else EXIT_DOMAIN


def cmd_merkle_claim(args: argparse.Namespace, schedule: GasSchedule) -> int:
    recipient, proof = _claim_from(args)
    registry_path = Path(args.registry)
    if registry_path.exists():
        current = registry.load_registry(registry_path.read_text())
    else:
        if not args.dist or args.deadline is None:
            raise UsageError("a new registry needs --dist and --deadline")
        dist = distribution.build(_recipients_of(args.dist))
        current = registry.open_registry(dist, deadline=args.deadline)

    updated = registry.claim(current, recipient, proof, now=args.now)
    registry_path.write_text(registry.export_registry(updated))
    print(_field("claimed", recipient.address))
    print(_field("amount", recipient.amount))
    print(_field("total_claimed", updated.total_claimed))
    return EXIT_OK


def cmd_merkle_reclaim(args: argparse.Namespace, schedule: GasSchedule) -> int:
    registry_path = Path(args.registry)
    if not registry_path.exists():
        raise UsageError(f"registry file not found: {registry_path}")
    updated, returned = registry.reclaim(registry.load_registry(registry_path.read_text()), now=args.now)
    registry_path.write_text(registry.export_registry(updated))
    print(_field("returned", returned))
    print(_field("total_claimed", updated.total_claimed))
    return EXIT_OK


def cmd_merkle_gas(args: argparse.Namespace, schedule: GasSchedule) -> int:
    gas = registry.claim_gas_estimate(args.recipients, schedule, table=_table(args, schedule))
    print(_field("claim_gas", gas))
    return EXIT_OK


def _recipients_of(dist_path: str) -> List[Recipient]:
    doc = distribution.load_distribution(Path(dist_path).read_text())
    return [Recipient(address=e.address, amount=e.amount) for e in doc.proofs]


# ------------------------------------------------------------
# Parser
# ------------------------------------------------------------

def _decimal(text: str) -> Decimal:
    try:
        value = Decimal(text)
    except InvalidOperation:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}")
    if value <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}")
    return value


def _iso_date(text: str) -> Date:
    try:
        return Date.fromisoformat(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected YYYY-MM-DD, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="airdrop", description="Gas and fiat cost model for airdrop strategies")
    parser.add_argument("--schedule", help="key=value file overriding fee schedule constants")
    parser.add_argument("--calibration", help="label=epsilon file (default: fit the measured totals fixture)")
    parser.add_argument("--verbose", "-v", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("cost", help="itemized cost of one strategy")
    p.add_argument("label")
    p.add_argument("--recipients", "-n", type=_positive_int, required=True)
    p.add_argument("--batch-size", type=_positive_int)
    p.add_argument("--uniform", action="store_true")
    p.add_argument("--discounted", action="store_true", help="recipients already hold the token")
    p.add_argument("--no-zero-reset", action="store_true",
                   help="pull strategies: skip zeroing allowances before re-approval")
    p.set_defaults(func=cmd_cost)

    p = sub.add_parser("feasibility", help="block fill grades a strategy's batches fit")
    p.add_argument("label")
    p.add_argument("--recipients", "-n", type=_positive_int, required=True)
    p.add_argument("--batch-size", type=_positive_int)
    p.add_argument("--uniform", action="store_true")
    p.set_defaults(func=cmd_feasibility)

    p = sub.add_parser("sweep", help="sweep the 35 benchmark scenarios over recipient counts")
    p.add_argument("--n-range", help="A:B:STEP (default 100:5000:100)")
    p.add_argument("--fill", type=float, help="keep scenarios feasible at this fill grade")
    p.add_argument("--discounted", action="store_true")
    scope = p.add_mutually_exclusive_group()
    scope.add_argument("--paper-scenarios", action="store_true",
                       help="all 35 benchmark scenarios (the default scope)")
    scope.add_argument("--label", action="append", help="restrict to this scenario label (repeatable)")
    p.add_argument("--format", choices=[f.value for f in ExportFormat], default=ExportFormat.TABLE.value)
    p.add_argument("--unscaled", action="store_true", help="plot-pairs in gas instead of 1e5 gas")
    p.add_argument("--out", help="output directory")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("calibrate", help="fit residuals against measured totals")
    p.add_argument("--targets", required=True, help="label,gas csv")
    p.add_argument("--recipients", "-n", type=_positive_int, default=1000)
    p.add_argument("--out", help="write the label=epsilon table here")
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("fiat", help="USD cost from a daily price series")
    p.add_argument("--prices", help="date,gas_price_gwei,eth_usd csv")
    p.add_argument("--rate", type=_decimal, help="USD per gas, instead of a price point")
    p.add_argument("--date", type=_iso_date, help="price day (default: last)")
    p.add_argument("--ma", type=_positive_int, help="moving-average window in days")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--gas", type=_positive_int)
    group.add_argument("--strategy")
    p.add_argument("--recipients", "-n", type=_positive_int)
    p.set_defaults(func=cmd_fiat, no_zero_reset=True)

    p = sub.add_parser("merkle-build", help="commit a recipient list")
    p.add_argument("--in", dest="input", required=True, help="address,amount lines")
    p.add_argument("--out", help="distribution document path")
    p.set_defaults(func=cmd_merkle_build)

    p = sub.add_parser("merkle-prove", help="print one recipient's proof")
    p.add_argument("--dist", required=True)
    target = p.add_mutually_exclusive_group(required=True)
    target.add_argument("--index", type=int)
    target.add_argument("--address")
    p.set_defaults(func=cmd_merkle_prove)

    for name, func, text in (("merkle-verify", cmd_merkle_verify, "check a proof against a root"),
                             ("merkle-claim", cmd_merkle_claim, "claim against a registry")):
        p = sub.add_parser(name, help=text)
        p.add_argument("--proof-file", required=True, help="proof document from merkle-prove")
        p.add_argument("--address")
        p.add_argument("--amount", type=int)
        if name == "merkle-verify":
            p.add_argument("--root", required=True)
        else:
            p.add_argument("--registry", required=True, help="registry document (created if missing)")
            p.add_argument("--dist", help="distribution document, for a new registry")
            p.add_argument("--deadline", type=int, help="claim deadline, for a new registry")
            p.add_argument("--now", type=int, required=True, help="logical time of the claim")
        p.set_defaults(func=func)

    p = sub.add_parser("merkle-reclaim", help="return unclaimed tokens after the deadline")
    p.add_argument("--registry", required=True)
    p.add_argument("--now", type=int, required=True)
    p.set_defaults(func=cmd_merkle_reclaim)

    p = sub.add_parser("merkle-gas", help="claim gas against a pooled distribution")
    p.add_argument("--recipients", "-n", type=_positive_int, required=True)
    p.set_defaults(func=cmd_merkle_gas)
    return parser


def configure_logging(verbose: bool) -> None:
    logging.basicConfig(stream=sys.stderr, level=logging.INFO if verbose else logging.WARNING,
                        format="%(asctime)s - %(levelname)s - %(message)s")


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    configure_logging(args.verbose)

    try:
        if args.schedule and not Path(args.schedule).exists():
            raise UsageError(f"schedule file not found: {args.schedule}")
        schedule = load_schedule(args.schedule)
        if args.calibration and not Path(args.calibration).exists():
            raise UsageError(f"calibration file not found: {args.calibration}")
        return args.func(args, schedule)
    except (UsageError, FileNotFoundError) as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except AirdropError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())

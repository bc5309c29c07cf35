"""Command-line front end: ledger operations, simulation, statistics.

Ledger subcommands (register, rate, opinion, replay) work against an
append-only event log; nothing is written unless the operation passed
every domain check against the replayed state.  simulate and compare
run scenario files, stats covers the survey arithmetic.  Exit codes:
0 success, 1 domain error, 2 usage error.
"""

import argparse
import json
import os
import sys
from dataclasses import replace

from .engine import DEFAULT_ENGINE, ListingContext, compute_opinion
from .errors import TrustMarketError
from .eventlog import (KIND_RATING, KIND_REGISTER, EventLog, replay)
from .identity import (BusinessDetails, CredentialSet, EvidenceDetails,
                       PersonalDetails, initial_trust)
from .ratings import Rating
from .sim import (Scenario, VARIANTS, build_world, compare_variants,
                  run_scenario, step)
from .stats import (REPORTED_NEW_SELLER_SUPPORT, SCALE_LABELS, compare_reported,
                    frequency_table, kruskal_wallis, load_likert_csv,
                    new_seller_support_dataset, summarize)

DEFAULT_LOG = "market.jsonl"


def _log_path(args) -> str:
    return args.log or os.environ.get("TRUSTMARKET_LOG", DEFAULT_LOG)


def _emit(args, payload: dict, text_lines) -> None:
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


# ------------------------------------------------------------------
# ledger subcommands
# ------------------------------------------------------------------

def _credentials_from_args(args) -> CredentialSet:
    personal = PersonalDetails(
        full_name=args.full_name, address=args.address, phone=args.phone,
        city=args.city, country=args.country)
    business = None
    if any((args.national_id, args.bank_or_card,
            args.business_phone, args.business_address)):
        business = BusinessDetails(
            national_id=args.national_id or "",
            bank_or_card=args.bank_or_card or "",
            business_phone=args.business_phone or "",
            business_address=args.business_address or "")
    evidence = None
    if any((args.reference_account, args.id_document,
            args.registration_document, args.signed_declaration)):
        evidence = EvidenceDetails(
            reference_account=args.reference_account or "",
            id_document=args.id_document or "",
            registration_document=args.registration_document or "",
            signed_declaration=args.signed_declaration)
    return CredentialSet(personal=personal, business=business,
                         evidence=evidence)


def cmd_register(args) -> int:
    path = _log_path(args)
    credentials = _credentials_from_args(args)
    state = replay(path)
    account = state.registry.register(
        credentials, is_seller=not args.buyer_only,
        is_buyer=not args.seller_only)
    log = EventLog(path)
    log.append(KIND_REGISTER, {
        "credentials": credentials.to_dict(),
        "is_seller": account.is_seller,
        "is_buyer": account.is_buyer,
    })
    trust = initial_trust(account.tier)
    _emit(args,
          {"account_id": account.account_id, "tier": account.tier.label,
           "initial_trust": trust},
          [f"registered {account.account_id} tier {account.tier.label} "
           f"(initial trust {trust:.2f})"])
    return 0


def cmd_rate(args) -> int:
    path = _log_path(args)
    state = replay(path)
    log = EventLog(path)
    at = log.last_seq + 1
    rating = Rating(rater=args.rater, ratee=args.ratee, scope=args.scope,
                    value=args.value, cost=args.cost, at=at)
    state.store.record(rating, registry=state.registry)
    log.append(KIND_RATING, {
        "rater": rating.rater, "ratee": rating.ratee, "scope": rating.scope,
        "value": rating.value, "cost": rating.cost, "at": at}, at=at)
    _emit(args,
          {"rater": rating.rater, "ratee": rating.ratee,
           "scope": rating.scope, "value": rating.value, "at": at},
          [f"recorded {rating.value:+d} from {rating.rater} on "
           f"{rating.ratee} in {rating.scope}"])
    return 0


def _opinion_payload(opinion) -> dict:
    direct = None
    if opinion.direct is not None:
        direct = {"value": opinion.direct.value, "scope": opinion.direct.scope,
                  "at": opinion.direct.at,
                  "cross_scope": opinion.direct.cross_scope}
    return {
        "seller": opinion.seller, "scope": opinion.scope,
        "recommended": opinion.recommended,
        "recommended_source": opinion.recommended_source,
        "unit_score": opinion.unit_score,
        "display_score": opinion.display_score,
        "label": opinion.label, "tier": opinion.tier.label,
        "direct": direct, "advisories": sorted(opinion.advisories),
        "revision": opinion.revision,
    }


def cmd_opinion(args) -> int:
    state = replay(_log_path(args))
    config = DEFAULT_ENGINE
    if args.max_delivery_days is not None:
        config = replace(config, max_delivery_days=args.max_delivery_days)
    listing = ListingContext(scope=args.scope, price=args.price,
                             delivery_days=args.delivery_days,
                             deliverable=not args.not_deliverable)
    opinion = compute_opinion(args.buyer, args.seller, listing,
                              state.store, state.registry, config)
    if opinion.is_fallback:
        recommended = f"{opinion.recommended:.2f}"
    else:
        recommended = f"{opinion.recommended:.4f}"
    lines = [
        f"seller: {opinion.seller}",
        f"scope: {opinion.scope}",
        f"recommended: {recommended} (source {opinion.recommended_source})",
        f"score: {opinion.display_score}/100 label {opinion.label} "
        f"tier {opinion.tier.label}",
    ]
    if opinion.direct is not None:
        suffix = " (other scope)" if opinion.direct.cross_scope else ""
        lines.append(f"direct: {opinion.direct.value:+d} in "
                     f"{opinion.direct.scope}{suffix}")
    else:
        lines.append("direct: none")
    lines.append("advisories: " + (", ".join(sorted(opinion.advisories))
                                   or "none"))
    _emit(args, _opinion_payload(opinion), lines)
    return 0


def cmd_replay(args) -> int:
    state = replay(args.logfile)
    described = state.describe()
    lines = [
        f"accounts: {len(described['accounts'])}",
        f"ratings: {len(described['ratings'])} "
        f"(store revision {described['revision']})",
        f"rejections: {len(state.rejections)}",
    ]
    for line_no, seq, message in state.rejections:
        lines.append(f"  line {line_no} seq {seq}: {message}")
    _emit(args, described, lines)
    return 0


# ------------------------------------------------------------------
# simulation subcommands
# ------------------------------------------------------------------

def _load_scenario(path) -> Scenario:
    with open(path, encoding="utf-8") as handle:
        return Scenario.from_dict(json.load(handle))


def _report_lines(report) -> list:
    lines = [
        f"variant {report.variant} seed {report.seed} "
        f"horizon {report.horizon}",
        f"deals {report.completed_deals} spend {report.total_spend} "
        f"honest {report.honest_revenue} fraud {report.fraud_gain}",
        f"blocked duplicate registrations "
        f"{report.blocked_duplicate_registrations}",
        "time to first sale: " + ", ".join(
            f"{name}={value}" for name, value
            in report.time_to_first_sale.items()),
        "final scores: " + ", ".join(
            f"{name}={values[-1]:.3f}" for name, values
            in report.trajectories.items()),
    ]
    if report.trust_calibration is not None:
        lines.append(f"trust calibration {report.trust_calibration:.3f}")
    return lines


def _write_trace(scenario: Scenario, path) -> None:
    """Write a replayable trace of the run's final state."""
    world = build_world(scenario)
    for _ in range(scenario.horizon):
        step(world)
    log = EventLog(path)
    for account in world.registry.accounts.values():
        log.append(KIND_REGISTER, {
            "credentials": account.credentials.to_dict(),
            "is_seller": account.is_seller,
            "is_buyer": account.is_buyer})
    for rating in sorted(world.store.snapshot().values(),
                         key=lambda r: r.at):
        log.append(KIND_RATING, {
            "rater": rating.rater, "ratee": rating.ratee,
            "scope": rating.scope, "value": rating.value,
            "cost": rating.cost, "at": rating.at}, at=rating.at)


def cmd_simulate(args) -> int:
    scenario = _load_scenario(args.scenario)
    report = run_scenario(scenario)
    if args.trace:
        _write_trace(scenario, args.trace)
    if args.format == "json":
        print(report.to_json())
    else:
        for line in _report_lines(report):
            print(line)
    return 0


def cmd_compare(args) -> int:
    scenario = _load_scenario(args.scenario)
    variants = tuple(args.variants.split(",")) if args.variants else VARIANTS
    comparison = compare_variants(scenario, variants)
    if args.format == "json":
        print(comparison.to_json())
        return 0
    for name, report in comparison.reports.items():
        print(f"--- {name} ---")
        for line in _report_lines(report):
            print(line)
    print(f"--- deltas vs {comparison.baseline} ---")
    for name, delta in comparison.deltas.items():
        parts = ", ".join(f"{metric}={value:+g}"
                          for metric, value in delta.items())
        print(f"{name}: {parts}")
    return 0


# ------------------------------------------------------------------
# statistics subcommands
# ------------------------------------------------------------------

def _load_dataset(args) -> dict:
    if args.data:
        return load_likert_csv(args.data)
    return new_seller_support_dataset()


def cmd_stats_freq(args) -> int:
    dataset = _load_dataset(args)
    payload = {}
    lines = []
    for name in sorted(dataset):
        table = frequency_table(dataset[name])
        payload[name] = {"counts": {str(k): v for k, v
                                    in table.counts.items()},
                         "n": table.n}
        lines.append(f"{name} (n={table.n})")
        for point, count in table.counts.items():
            lines.append(f"  {point} {SCALE_LABELS[point]:<17} "
                         f"{count:>4}  {table.relative[point]:6.1%}")
    _emit(args, payload, lines)
    return 0


def cmd_stats_summarize(args) -> int:
    dataset = _load_dataset(args)
    payload = {}
    header = f"{'group':<12}{'count':>6}{'min':>5}{'max':>5}{'sum':>6}" \
             f"{'mean':>8}{'median':>8}{'variance':>10}"
    lines = [header]
    for name in sorted(dataset):
        summary = summarize(dataset[name])
        payload[name] = summary
        lines.append(
            f"{name:<12}{summary['count']:>6}{summary['min']:>5}"
            f"{summary['max']:>5}{summary['sum']:>6}"
            f"{summary['mean']:>8.3f}{summary['median']:>8g}"
            f"{summary['variance']:>10.4f}")
    _emit(args, payload, lines)
    return 0


def cmd_stats_kruskal(args) -> int:
    dataset = _load_dataset(args)
    result = kruskal_wallis(dataset, alpha=args.alpha)
    reported = None
    if args.reference:
        with open(args.reference, encoding="utf-8") as handle:
            reported = json.load(handle)
    elif not args.data:
        reported = REPORTED_NEW_SELLER_SUPPORT
    sizes = ", ".join(f"{name} (n={len(dataset[name])})"
                      for name in sorted(dataset))
    lines = [
        f"groups: {sizes}",
        f"H: {result.h:.4f}",
        f"H (tie-corrected): {result.h_tie_corrected:.4f}",
        f"df: {result.df}",
        f"critical value (alpha {result.alpha:g}): {result.critical:.2f}",
        f"decision: {'REJECT' if result.reject else 'RETAIN'}",
        "rank sums: " + ", ".join(
            f"{name}={total:g}"
            for name, total in sorted(result.rank_sums.items())),
        f"rank sum total: {result.rank_sum_total:g}",
    ]
    payload = {
        "h": result.h, "h_tie_corrected": result.h_tie_corrected,
        "df": result.df, "critical": result.critical,
        "alpha": result.alpha, "reject": result.reject,
        "rank_sums": result.rank_sums,
        "rank_sum_total": result.rank_sum_total,
        "midranks": {str(k): v for k, v in result.midranks.items()},
    }
    if reported is not None:
        discrepancies = compare_reported(result, reported)
        payload["reported_discrepancies"] = discrepancies
        if discrepancies:
            lines.append("previously reported figures disagree:")
            lines.extend(f"  {line}" for line in discrepancies)
    _emit(args, payload, lines)
    return 0


# ------------------------------------------------------------------
# parser
# ------------------------------------------------------------------

def _add_format(parser) -> None:
    parser.add_argument("--format", choices=("text", "json"),
                        default="text", help="output format")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trustmarket",
        description="trust-aware marketplace toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("register", help="register an account on the ledger")
    p.add_argument("--log", help="event log path")
    p.add_argument("--full-name", required=True)
    p.add_argument("--address", required=True)
    p.add_argument("--phone", required=True)
    p.add_argument("--city", required=True)
    p.add_argument("--country", required=True)
    p.add_argument("--national-id")
    p.add_argument("--bank-or-card")
    p.add_argument("--business-phone")
    p.add_argument("--business-address")
    p.add_argument("--reference-account")
    p.add_argument("--id-document")
    p.add_argument("--registration-document")
    p.add_argument("--signed-declaration", action="store_true")
    p.add_argument("--buyer-only", action="store_true")
    p.add_argument("--seller-only", action="store_true")
    _add_format(p)
    p.set_defaults(func=cmd_register)

    p = sub.add_parser("rate", help="record a rating on the ledger")
    p.add_argument("--log", help="event log path")
    p.add_argument("--rater", required=True)
    p.add_argument("--ratee", required=True)
    p.add_argument("--scope", required=True)
    p.add_argument("--value", type=int, choices=(1, 0, -1), required=True)
    p.add_argument("--cost", type=float, default=0.0)
    _add_format(p)
    p.set_defaults(func=cmd_rate)

    p = sub.add_parser("opinion", help="trust opinion for a listing")
    p.add_argument("--log", help="event log path")
    p.add_argument("--buyer", required=True)
    p.add_argument("--seller", required=True)
    p.add_argument("--scope", required=True)
    p.add_argument("--price", type=float, required=True)
    p.add_argument("--delivery-days", type=float, default=0.0)
    p.add_argument("--not-deliverable", action="store_true")
    p.add_argument("--max-delivery-days", type=float, default=None)
    _add_format(p)
    p.set_defaults(func=cmd_opinion)

    p = sub.add_parser("replay", help="rebuild state from an event log")
    p.add_argument("logfile")
    _add_format(p)
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("simulate", help="run a scenario file")
    p.add_argument("scenario")
    p.add_argument("--trace", help="write a replayable event trace here")
    _add_format(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("compare", help="run a scenario under variants")
    p.add_argument("scenario")
    p.add_argument("--variants",
                   help="comma-separated subset of " + ",".join(VARIANTS))
    _add_format(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("stats", help="survey statistics")
    stats_sub = p.add_subparsers(dest="stats_command", required=True)
    for name, func in (("freq", cmd_stats_freq),
                       ("summarize", cmd_stats_summarize),
                       ("kruskal", cmd_stats_kruskal)):
        sp = stats_sub.add_parser(name)
        sp.add_argument("data", nargs="?",
                        help="CSV dataset; bundled example when omitted")
        if name == "kruskal":
            sp.add_argument("--alpha", type=float, default=0.05)
            sp.add_argument("--reference",
                            help="JSON file of previously reported figures")
        _add_format(sp)
        sp.set_defaults(func=func)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except TrustMarketError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

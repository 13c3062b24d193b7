"""Command line entry point.

    qhpp <campaign-id> [--bound N] [--format jsonl|csv|table] [--params k=v,...]
    qhpp invariants "<basket>"
    qhpp coverage

Exit status: 0 verified, 1 counterexample or mismatch, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import sys

from qhpp import campaigns, surface
from qhpp.campaigns import CampaignError
from qhpp.rational import fmt

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise CampaignError(message)


def _parse_params(text: str | None) -> dict:
    out = {}
    if not text:
        return out
    for item in text.split(","):
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise CampaignError(f"bad --params item {item!r}; expected k=v")
        out[key.strip()] = value.strip()
    return out


def _campaign_parser():
    p = _Parser(prog="qhpp", description="Run a verification campaign.")
    p.add_argument("campaign", help="campaign id, or 'invariants' / 'coverage'")
    p.add_argument("--bound", type=int, default=None)
    p.add_argument("--format", default="table", choices=campaigns.FORMATS)
    p.add_argument("--params", default=None, help="comma separated k=v pairs")
    return p


def _invariants(argv, out) -> int:
    if len(argv) != 1:
        raise CampaignError('usage: qhpp invariants "<basket>"')
    try:
        basket = surface.Basket.parse(argv[0])
    except ValueError as exc:
        raise CampaignError(str(exc)) from exc
    inv = surface.surface_invariants(basket)
    verdict = surface.bmy_verdict(inv.k_squared, inv.e_orb)
    print(f"basket: {basket}", file=out)
    print(f"L: {basket.L}", file=out)
    print(f"K2: {fmt(inv.k_squared)}", file=out)
    print(f"e_orb: {fmt(inv.e_orb)}", file=out)
    print(f"3e_orb: {fmt(3 * inv.e_orb)}", file=out)
    print(f"bmy: {verdict}", file=out)
    reason = basket.validity()
    if reason:
        print(f"invalid: {reason}", file=out)
    return EXIT_OK


def _coverage(out) -> int:
    rows, missing = campaigns.coverage()
    width = max(len(cid) for cid, _ in rows)
    for cid, anchor in rows:
        print(f"{cid.ljust(width)}  {anchor}", file=out)
    for op in missing:
        print(f"unreached: {op}", file=out)
    return EXIT_OK if not missing else EXIT_MISMATCH


def main(argv=None, out=None, err=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        if argv and argv[0] == "invariants":
            return _invariants(argv[1:], out)
        if argv and argv[0] == "coverage":
            return _coverage(out)
        args = _campaign_parser().parse_args(argv)
        report = campaigns.run_campaign(args.campaign, _parse_params(args.params), args.bound)
        out.write(campaigns.emit_report(report, args.format))
        print(report.summary(), file=err)
        return EXIT_OK if report.overall == campaigns.VERIFIED else EXIT_MISMATCH
    except CampaignError as exc:
        print(f"qhpp: error: {exc}", file=err)
        print(f"campaigns: {', '.join(sorted(campaigns.CAMPAIGNS))}", file=err)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

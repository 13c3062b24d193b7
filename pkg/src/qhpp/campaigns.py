"""Named verification campaigns and their reports.

Each campaign recomputes one statement from scratch and compares it with a
fixture in ``data/expected.json``.  Records carry exact rationals as strings,
so a jsonl report is lossless and byte-stable between runs.
"""

from __future__ import annotations

import csv
import io
import json
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

from qhpp import blowdown, curves, fibration, surface
from qhpp.hj import Chain, uv_profile
from qhpp.rational import fmt


class CampaignError(ValueError):
    """Unknown campaign, bad parameter or out-of-range bound."""


VERIFIED, COUNTEREXAMPLE, ERROR = "verified", "counterexample", "error"
FORMATS = ("jsonl", "csv", "table")


def load_expected() -> dict:
    with resources.files("qhpp").joinpath("data/expected.json").open() as fh:
        return json.load(fh)


@dataclass
class VerdictReport:
    campaign: str
    anchor: str
    records: list[dict] = field(default_factory=list)
    elapsed: float = 0.0
    error: str | None = None

    @property
    def overall(self) -> str:
        if self.error is not None:
            return ERROR
        return VERIFIED if all(r.get("status") == "ok" for r in self.records) else COUNTEREXAMPLE

    def summary(self) -> str:
        bad = sum(r.get("status") != "ok" for r in self.records)
        return f"{self.campaign}: {self.overall} ({len(self.records)} records, {bad} mismatched, {self.elapsed:.3f}s) [{self.anchor}]"


def _rec(status_ok: bool, **fields) -> dict:
    fields["status"] = "ok" if status_ok else "mismatch"
    return fields


def _int_param(params, key, default, lo=None, hi=None):
    try:
        value = int(params.get(key, default))
    except (TypeError, ValueError) as exc:
        raise CampaignError(f"parameter {key} must be an integer") from exc
    if (lo is not None and value < lo) or (hi is not None and value > hi):
        raise CampaignError(f"parameter {key}={value} outside [{lo}, {hi}]")
    return value


# --- the campaigns -------------------------------------------------------------------------

def _table1(params, bound, exp):
    chain = Chain(tuple(exp["chain"]))
    u, v, c = uv_profile(chain)
    out = []
    for j in range(chain.length):
        ok = u[j] == exp["u"][j] and v[j] == exp["v"][j] and fmt(c[j]) == exp["c"][j]
        out.append(_rec(ok, j=j + 1, u=u[j], v=v[j], c=fmt(c[j]), expected=exp["c"][j]))
    return out


def _l13(params, bound, exp):
    out = []
    for case in ("L13_sum10", "L13_sum11"):
        want = exp[case]
        result = surface.scan_corollary(case)
        if len(result.records) != want["count"]:
            out.append(_rec(False, case=case, note=f"{len(result.records)} triples, expected {want['count']}"))
        for r in result.records:
            row = r.to_json()
            out.append(_rec(row["verdict"] == want["verdict"], **row))
    return out


def _odd_chain(params, bound, exp):
    hi = bound if bound is not None else _int_param(params, "l_max", 100, 1, 10_000)
    lo = _int_param(params, "l_min", exp["first_live"], 1, hi)
    result = surface.scan_corollary("odd_chain", {"l_min": lo, "l_max": hi})
    out = []
    for r in result.records:
        row = r.to_json()
        l = r.params["l"]
        if l < exp["first_live"]:
            want = "excluded_by_import"
        else:
            want = exp["verdicts"].get(str(l), exp["default_verdict"])
        out.append(_rec(row["verdict"] == want, **row))
    return out


def _pair_scan(params, bound, exp):
    scan = curves.pair_scan_23719()
    best, at = scan.max_distinct
    any_best, any_at = scan.max_any
    return [
        _rec(fmt(best) == exp["max_distinct"] and list(at) == exp["max_distinct_at"],
             item="max over j < k", value=fmt(best), at=list(at)),
        _rec(fmt(any_best) == exp["max_any"] and list(any_at) == exp["max_any_at"],
             item="max over j <= k", value=fmt(any_best), at=list(any_at)),
        _rec(scan.all_below_one, item="every sum below 1", value=str(scan.all_below_one)),
    ]


def _random_chain(rng, max_length=8, max_weight=5):
    return Chain(tuple(rng.randint(2, max_weight) for _ in range(rng.randint(1, max_length))))


def _rdp_n3(params, bound, exp):
    count = bound if bound is not None else _int_param(params, "count", 100, 1, 100_000)
    seed = _int_param(params, "seed", 0)
    rng = random.Random(seed)
    spot = exp["spot"]
    out = []
    r = curves.infer_from_curve(curves.contracted_end_curve(3), [Chain(tuple(spot["chain"]))])
    out.append(_rec(fmt(r.m) == spot["m"] and fmt(r.k_squared) == spot["K2"],
                    chain=str(Chain(tuple(spot["chain"]))), m=fmt(r.m), K2=fmt(r.k_squared),
                    classification=str(r.classification)))
    for _ in range(count):
        bar = _random_chain(rng)
        inv = bar.invariants
        q, q1 = inv.q, inv.q1
        r = curves.infer_from_curve(curves.contracted_end_curve(3), [bar])
        m_want = -Fraction(q + q1, q1 + 1)
        k2_want = Fraction((q1 + 1) ** 2, q * (q1 + q))
        square = surface.arithmetic_obstructions(q=q, q1=q1)
        ok = (r.m == m_want and r.k_squared == k2_want
              and str(r.classification) == exp["classification"])
        out.append(_rec(ok, chain=str(bar), m=fmt(r.m), K2=fmt(r.k_squared),
                        classification=str(r.classification),
                        square_30_q1_plus_q=bool(square.square_ok)))
    return out


def _rdp_n4(params, bound, exp):
    count = bound if bound is not None else _int_param(params, "count", 100, 1, 100_000)
    rng = random.Random(_int_param(params, "seed", 0))
    out = []
    spot = exp["spot"]
    r = curves.infer_from_curve(curves.contracted_end_curve(4), [Chain(tuple(spot["chain"]))])
    out.append(_rec(fmt(r.m) == spot["m"], chain=str(Chain(tuple(spot["chain"]))), m=fmt(r.m),
                    classification=str(r.classification)))
    for _ in range(count):
        bar = _random_chain(rng)
        inv = bar.invariants
        if inv.q == inv.q1 + 1:
            continue  # rational double point: m K^2 = 0, handled by the lemma separately
        r = curves.infer_from_curve(curves.contracted_end_curve(4), [bar])
        ok = (r.alpha == 1 - Fraction(inv.q1 + 1, inv.q) and r.beta == Fraction(inv.q1, inv.q)
              and r.m == Fraction(inv.q1, inv.q - inv.q1 - 1))
        out.append(_rec(ok, chain=str(bar), m=fmt(r.m), K2=fmt(r.k_squared),
                        classification=str(r.classification)))
    return out


def _all_chains(max_length, max_weight, first=None):
    from itertools import product

    for l in range(1, max_length + 1):
        for w in product(range(2, max_weight + 1), repeat=l):
            if first is None or w[0] == first:
                yield Chain(w)


def _contraction_identities(params, bound, exp):
    max_length = bound if bound is not None else exp["max_length"]
    max_weight = _int_param(params, "max_weight", exp["max_weight"], 2, 9)
    per_length = {}
    for chain in _all_chains(max_length, max_weight, first=2):
        if chain.length < 2:
            continue
        rep = blowdown.contraction_identities(chain)
        row = per_length.setdefault(chain.length, {"checked": 0, "failures": 0, "zero_difference": 0, "rdp": 0})
        row["checked"] += 1
        row["failures"] += not rep.ok
        row["zero_difference"] += rep.difference_vanishes
        row["rdp"] += Chain(chain.weights[1:]).is_rdp()
    return [
        _rec(row["failures"] == 0 and row["zero_difference"] == row["rdp"], length=l, **row)
        for l, row in sorted(per_length.items())
    ]


def _end_end(params, bound, exp):
    max_length = bound if bound is not None else _int_param(params, "max_length", 6, 1, 8)
    max_weight = _int_param(params, "max_weight", 5, 2, 9)
    per_length = {}
    for chain in _all_chains(max_length, max_weight):
        inv = chain.invariants
        r = curves.infer_from_curve(curves.cycle_curve(chain), [chain])
        want = 1 - Fraction(inv.q1 + inv.ql + 2, inv.q)
        ok = r.alpha == want and r.beta == -want and str(r.classification) != exp["classification_never"]
        row = per_length.setdefault(chain.length, {"checked": 0, "failures": 0})
        row["checked"] += 1
        row["failures"] += not ok
    return [_rec(row["failures"] == 0, length=l, **row) for l, row in sorted(per_length.items())]


def _basket_values(params, bound, exp):
    out = []
    for text, want in exp.items():
        b = surface.Basket.parse(text)
        inv = surface.surface_invariants(b)
        got = {"L": b.L, "K2": fmt(inv.k_squared), "e_orb": fmt(inv.e_orb),
               "verdict": str(surface.bmy_verdict(inv.k_squared, inv.e_orb))}
        out.append(_rec(got == want, basket=text, **got))
    return out


def _k2_cases(params, bound, exp):
    max_length = bound if bound is not None else exp["max_length"]
    out = []
    for case in surface.k2_case_identities(max_length):
        out.append(_rec(case.ok, p3=str(case.p3), tr=f"3l-{case.offset}", constant=fmt(case.constant),
                        checked=case.checked, failures=len(case.failures)))
    return out


def _fiber(params, bound, exp):
    n = bound if bound is not None else exp["bound"]
    if n > fibration.DEFAULT_BOUND:
        raise CampaignError(f"fibre bound {n} exceeds {fibration.DEFAULT_BOUND}")
    levels = fibration.enumerate_fibers(n)
    out = []
    for size, items in levels.items():
        want = exp["level_counts"].get(str(size))
        out.append(_rec(want is None or len(items) == want, item="fibres", components=size, count=len(items)))
    for case in fibration.verify_fiber_lemmas(n):
        out.append(_rec(case.ok, item="lemma", **case.to_json()))
    return out


def _ed_ge_2(params, bound, exp):
    out = []
    for name, (before, after) in blowdown.ed_ge_2_constructions().items():
        b, a = blowdown.qhpp_check(before), blowdown.qhpp_check(after)
        want = exp[name]
        ok = b.valid == want["before_valid"] and a.valid == want["after_valid"] and a.n_chains == want["chains"]
        out.append(_rec(ok, construction=name, before_valid=b.valid, after_valid=a.valid,
                        chains=a.n_chains, reasons="; ".join(a.reasons)))
    return out


def _cascade_demo(params, bound, exp):
    depth = bound if bound is not None else _int_param(params, "depth", 1, 0, 12)
    min_depth = _int_param(params, "min_depth", 1 if "graph" not in params else 0, 0, depth)
    if "graph" in params:
        try:
            with open(params["graph"]) as fh:
                state = blowdown.MarkedResolution.from_text(fh.read())
        except OSError as exc:
            raise CampaignError(f"cannot read graph file: {exc}") from exc
        except blowdown.GraphError as exc:
            raise CampaignError(f"bad graph file: {exc}") from exc
        start, target = state, None
    else:
        target, start = blowdown.cascade_toy(_int_param(params, "n", 3, 2, 50))
    if not blowdown.qhpp_check(start).valid:
        raise CampaignError("starting graph fails the Q-homology projective plane check")
    path = blowdown.cascade_search(start, depth, min_depth=min_depth)
    if path is None:
        return [_rec(False, steps="", terminal_class="none", note="no cascade within the depth bound")]
    ok = path.terminal_class == exp["terminal_class"]
    if target is not None:
        ok = ok and path.steps == exp["steps"] and path.terminal_state == target
    return [_rec(ok, steps=",".join(path.steps), terminal_class=path.terminal_class,
                 classes=",".join(path.classes), picard=path.terminal_state.picard_rank)]


@dataclass(frozen=True)
class Campaign:
    id: str
    anchor: str
    run: object
    operations: tuple[str, ...]
    fixture: str | None = None


CAMPAIGNS = {
    c.id: c
    for c in (
        Campaign("table1", "Lemma 23719final, Table 1: c_j of [3,2^8]", _table1,
                 ("hj.uv_profile", "hj.continuant", "hj.hj_expand")),
        Campaign("L13", "Corollary L=13: a+b+c in {10, 11} fails 0 < K^2 <= 3/q + 1/10", _l13,
                 ("surface.scan_corollary", "surface.k_squared", "surface.orbifold_euler", "surface.bmy_gate")),
        Campaign("odd-chain", "Corollary on A_1 + 1/3(1,1) + 1/5(1,1) + 1/(2l+1)(1,l)", _odd_chain,
                 ("surface.scan_corollary", "surface.bmy_gate", "hj.hj_expand")),
        Campaign("pair-scan-23719", "Lemma 23719final: no double hit on [3,2^8] reaches 1", _pair_scan,
                 ("curves.pair_scan_23719", "curves.equation_one")),
        Campaign("rdp-case-n3", "Lemma RDP-case, n_1 = 3: m = -(q+q_1)/(q_1+1)", _rdp_n3,
                 ("curves.infer_from_curve", "curves.equation_two", "surface.arithmetic_obstructions")),
        Campaign("rdp-case-n4", "Lemma RDP-case, n_1 = 4: m = q_1/(q-q_1-1)", _rdp_n4,
                 ("curves.infer_from_curve",)),
        Campaign("contraction-identities", "Lemma RDP-case, n_1 = 2: bar-chain identities", _contraction_identities,
                 ("blowdown.contraction_identities",)),
        Campaign("end-end", "Lemma end-end: cycle through both chain ends", _end_end,
                 ("curves.infer_from_curve", "curves.equation_one", "curves.equation_two")),
        Campaign("basket-values", "Lemma 235type (1) baskets and the K^2 formula", _basket_values,
                 ("surface.k_squared", "surface.orbifold_euler", "surface.bmy_gate", "hj.discrepancies")),
        Campaign("k2-cases", "Corollary 235K^2: K^2 along each tr-relation", _k2_cases,
                 ("surface.enumerate_chains", "surface.k_squared")),
        Campaign("fiberD2", "Lemmas fiberD_2 and fiberD_3: fibre case lists", _fiber,
                 ("fibration.enumerate_fibers", "fibration.fibers_containing", "fibration.verify_fiber_lemmas")),
        Campaign("ed-ge-2", "Corollary ED>=2: the three blow-up reductions", _ed_ge_2,
                 ("blowdown.blow_up", "blowdown.contract", "blowdown.qhpp_check")),
        Campaign("cascade-demo", "Definition of a cascade: undo one blow-up", _cascade_demo,
                 ("blowdown.cascade_search", "blowdown.contract", "blowdown.blow_up")),
    )
}

# public operations that should be reached by some campaign
OPERATIONS = (
    "hj.continuant", "hj.hj_expand", "hj.uv_profile", "hj.discrepancies",
    "surface.k_squared", "surface.orbifold_euler", "surface.bmy_gate", "surface.arithmetic_obstructions",
    "surface.scan_corollary", "surface.enumerate_chains",
    "curves.equation_one", "curves.equation_two", "curves.infer_from_curve", "curves.pair_scan_23719",
    "blowdown.blow_up", "blowdown.contract", "blowdown.qhpp_check", "blowdown.contraction_identities",
    "blowdown.cascade_search",
    "fibration.enumerate_fibers", "fibration.fibers_containing", "fibration.verify_fiber_lemmas",
)


def coverage() -> tuple[list[tuple[str, str]], list[str]]:
    """(campaign -> anchor rows, operations no campaign reaches)."""
    rows = [(c.id, c.anchor) for c in sorted(CAMPAIGNS.values(), key=lambda c: c.id)]
    reached = {op for c in CAMPAIGNS.values() for op in c.operations}
    return rows, [op for op in OPERATIONS if op not in reached]


def run_campaign(campaign_id: str, params: dict | None = None, bound: int | None = None) -> VerdictReport:
    if campaign_id not in CAMPAIGNS:
        raise CampaignError(f"unknown campaign {campaign_id!r}; known: {', '.join(sorted(CAMPAIGNS))}")
    if bound is not None and bound < 1:
        raise CampaignError("--bound must be positive")
    camp = CAMPAIGNS[campaign_id]
    expected = load_expected()[campaign_id if camp.fixture is None else camp.fixture]
    report = VerdictReport(campaign_id, camp.anchor)
    t0 = time.perf_counter()
    report.records = camp.run(dict(params or {}), bound, expected)
    report.elapsed = time.perf_counter() - t0
    return report


# --- output ----------------------------------------------------------------------------------

def _columns(records):
    cols = []
    for r in records:
        for k in r:
            if k not in cols:
                cols.append(k)
    return cols or ["status"]


def _cell(value):
    if isinstance(value, (dict, list)):
        return json.dumps(value, sort_keys=True)
    if isinstance(value, Fraction):
        return fmt(value)
    return str(value)


def emit_report(report: VerdictReport, fmt_name: str = "jsonl") -> str:
    if fmt_name not in FORMATS:
        raise CampaignError(f"unknown format {fmt_name!r}; expected one of {', '.join(FORMATS)}")
    records = report.records
    if fmt_name == "jsonl":
        return "".join(json.dumps(r, sort_keys=True) + "\n" for r in records)
    cols = _columns(records)
    rows = [[_cell(r.get(c, "")) for c in cols] for r in records]
    if fmt_name == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(cols)
        writer.writerows(rows)
        return buf.getvalue()
    widths = [max([len(c)] + [len(row[i]) for row in rows]) for i, c in enumerate(cols)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(cols, widths)).rstrip(),
             "  ".join("-" * w for w in widths)]
    lines += ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in rows]
    return "\n".join(lines) + "\n"


def parse_jsonl(text: str) -> list[dict]:
    return [json.loads(line) for line in text.splitlines() if line.strip()]

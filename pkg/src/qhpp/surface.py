"""Candidate-surface bookkeeping for a basket of cyclic quotient singularities.

K^2 and the orbifold Euler number of a Q-homology projective plane are both
determined by its singularities; this module evaluates them exactly, applies
the Bogomolov-Miyaoka-Yau gate and runs the nonexistence scans.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import gcd, isqrt

from qhpp.hj import Chain, CyclicSingularity, discrepancies, hj_expand
from qhpp.rational import fmt


class BasketError(ValueError):
    pass


@dataclass(frozen=True)
class Basket:
    singularities: tuple[CyclicSingularity, ...] = ()
    rational: bool = True

    def __post_init__(self):
        object.__setattr__(self, "singularities", tuple(self.singularities))
        if len(self.singularities) > 5:
            raise BasketError("a Q-homology projective plane has at most 5 singular points")

    @classmethod
    def parse(cls, text: str, rational: bool = True) -> Basket:
        """Parse ``"A1 + 1/3(1,1) + 1/5(1,2) + [2,3,2,3]"``; an empty string is the empty basket."""
        text = text.strip()
        if not text:
            return cls((), rational)
        parts = []
        depth = 0
        cur = ""
        for ch in text:
            if ch in "([":
                depth += 1
            elif ch in ")]":
                depth -= 1
            if ch == "+" and depth == 0:
                parts.append(cur)
                cur = ""
            else:
                cur += ch
        parts.append(cur)
        return cls(tuple(CyclicSingularity.parse(p) for p in parts), rational)

    @classmethod
    def of_chains(cls, *chains, rational: bool = True) -> Basket:
        return cls(tuple(CyclicSingularity.of_chain(c) for c in chains), rational)

    def __str__(self):
        return " + ".join(str(s) for s in self.singularities) or "(smooth)"

    def __len__(self):
        return len(self.singularities)

    @property
    def chains(self) -> tuple[Chain, ...]:
        return tuple(s.chain for s in self.singularities)

    @property
    def L(self) -> int:
        return sum(s.chain.length for s in self.singularities)

    @property
    def orders(self) -> tuple[int, ...]:
        return tuple(s.q for s in self.singularities)

    def validity(self) -> str | None:
        """Reason the basket cannot occur on a Q-homology projective plane, or None."""
        n = len(self.singularities)
        if self.rational and n > 4:
            return "a rational Q-homology projective plane has at most 4 singular points"
        if n == 5:
            kinds = sorted(s.chain.weights for s in self.singularities)
            if kinds != [(2,)] * 3 + [(2, 2, 2)] * 2:
                return "5 singular points forces type 3A_1 + 2A_3"
        return None


def _contribution(chain: Chain) -> Fraction:
    inv = chain.invariants
    return inv.tr - 2 * chain.length - 2 + Fraction(inv.q1 + inv.ql + 2, inv.q)


def k_squared(basket: Basket) -> Fraction:
    return 9 - basket.L + sum((_contribution(c) for c in basket.chains), Fraction(0))


def k_squared_via_discrepancies(basket: Basket) -> Fraction:
    """9 - L - sum of D_p^2, with each D_p^2 from the discrepancy linear system."""
    return 9 - basket.L - sum(
        (discrepancies(c).d_squared for c in basket.chains if c.length), Fraction(0)
    )


def orbifold_euler(basket: Basket) -> Fraction:
    return 3 - sum((1 - Fraction(1, q) for q in basket.orders), Fraction(0))


@dataclass(frozen=True)
class SurfaceInvariants:
    k_squared: Fraction
    e_orb: Fraction
    k_squared_smooth: int


def surface_invariants(basket: Basket) -> SurfaceInvariants:
    k2 = k_squared(basket)
    if k2 != k_squared_via_discrepancies(basket):
        raise ArithmeticError(f"K^2 paths disagree on {basket}")
    return SurfaceInvariants(k2, orbifold_euler(basket), 9 - basket.L)


class Verdict(str, enum.Enum):
    PASS = "pass"
    FAIL_UPPER = "fail_upper"
    FAIL_POSITIVE = "fail_positive"
    EXCLUDED_BY_IMPORT = "excluded_by_import"

    def __str__(self):
        return self.value


def bmy_verdict(k2: Fraction, e_orb: Fraction) -> Verdict:
    if k2 <= 0:
        return Verdict.FAIL_POSITIVE
    if k2 > 3 * e_orb:
        return Verdict.FAIL_UPPER
    return Verdict.PASS


def bmy_gate(basket: Basket) -> Verdict:
    """Necessary condition 0 < K^2 <= 3 e_orb for ample K."""
    return bmy_verdict(k_squared(basket), orbifold_euler(basket))


def is_perfect_square(x) -> bool:
    """True iff x is a nonnegative integer square (Fractions must be integral)."""
    x = Fraction(x)
    if x.denominator != 1 or x < 0:
        return False
    r = isqrt(x.numerator)
    return r * r == x.numerator


@dataclass
class ObstructionReport:
    pairwise_coprime: bool | None = None
    gcd30_ok: bool | None = None
    square_value: Fraction | None = None
    square_ok: bool | None = None

    @property
    def triggered(self) -> list[str]:
        out = []
        if self.pairwise_coprime is False:
            out.append("orders not pairwise coprime")
        if self.gcd30_ok is False:
            out.append("gcd(q, 30) != 1")
        if self.square_ok is False:
            out.append(f"{fmt(self.square_value)} is not a perfect square")
        return out

    @property
    def obstructed(self) -> bool:
        return bool(self.triggered)


def arithmetic_obstructions(
    basket: Basket | None = None,
    *,
    orders=None,
    q: int | None = None,
    q1: int | None = None,
    k_squared_value=None,
) -> ObstructionReport:
    """Order conditions forced by trivial H_1 of the smooth locus, plus the square test.

    With ``q`` and ``q1`` the square test is on 30 (q1 + q); with
    ``k_squared_value`` (and ``q``) it is on 30 q K^2.
    """
    report = ObstructionReport()
    if basket is not None:
        orders = basket.orders
    if orders is not None:
        orders = tuple(orders)
        report.pairwise_coprime = all(gcd(a, b) == 1 for a, b in combinations(orders, 2))
        rest = sorted(orders)
        if q is None and len(rest) == 4 and rest[:3] == [2, 3, 5]:
            q = rest[3]
    if q is not None:
        report.gcd30_ok = gcd(q, 30) == 1
    if k_squared_value is not None:
        if q is None:
            raise ValueError("the square test on 30 q K^2 needs q")
        report.square_value = 30 * q * Fraction(k_squared_value)
        report.square_ok = is_perfect_square(report.square_value)
    elif q1 is not None:
        if q is None:
            raise ValueError("the square test on 30 (q1 + q) needs q")
        report.square_value = Fraction(30 * (q1 + q))
        report.square_ok = is_perfect_square(report.square_value)
    return report


# --- nonexistence scans -----------------------------------------------------

SCAN_CASES = ("L13_sum10", "L13_sum11", "odd_chain")

# imported bound L >= 11 excludes these chain lengths for the odd-chain family
ODD_CHAIN_MIN_L = 8


def l13_chain(a: int, b: int, c: int) -> Chain:
    return Chain((2, a, 2, b, 2, c, 2))


def l13_polynomials(a: int, b: int, c: int) -> tuple[int, int, int]:
    """(q1, ql, q) of [2,a,2,b,2,c,2] as closed polynomials in a, b, c."""
    q1 = 8 * a * b * c - 8 * a * b - 4 * b * c - 8 * c * a + 6 * a + 4 * b + 2 * c - 1
    ql = 8 * a * b * c - 4 * a * b - 8 * b * c - 8 * c * a + 2 * a + 4 * b + 6 * c - 1
    q = 16 * a * b * c - 16 * a * b - 16 * b * c - 16 * c * a + 12 * a + 16 * b + 12 * c - 8
    return q1, ql, q


def l13_basket(a: int, b: int, c: int) -> Basket:
    return Basket.of_chains(Chain((2,)), Chain((3,)), Chain((2, 2, 2, 2)), l13_chain(a, b, c))


def odd_chain_basket(l: int) -> Basket:
    """A_1 + 1/3(1,1) + 1/5(1,1) + 1/(2l+1)(1,l); the last chain is [3,2,...,2] of length l."""
    return Basket.of_chains(Chain((2,)), Chain((3,)), Chain((5,)), hj_expand(2 * l + 1, l))


@dataclass
class ScanRecord:
    case: str
    params: dict
    k2: Fraction
    bound: Fraction
    verdict: Verdict

    def to_json(self) -> dict:
        return {
            "case": self.case,
            "params": self.params,
            "K2": fmt(self.k2),
            "bound": fmt(self.bound),
            "verdict": str(self.verdict),
        }


@dataclass
class ScanResult:
    case: str
    records: list[ScanRecord] = field(default_factory=list)

    @property
    def confirmed(self) -> bool:
        """Nonexistence confirmed: every scanned tuple fails the BMY gate."""
        live = [r for r in self.records if r.verdict is not Verdict.EXCLUDED_BY_IMPORT]
        return bool(live) and all(r.verdict is not Verdict.PASS for r in live)


def _l13_triples(total: int):
    for a, b in product(range(2, total + 1), repeat=2):
        c = total - a - b
        if c >= 2:
            yield a, b, c


def scan_corollary(case_id: str, bounds: dict | None = None) -> ScanResult:
    """Run a nonexistence scan; ``bounds`` only matters for ``odd_chain`` (``l_min``, ``l_max``)."""
    bounds = dict(bounds or {})
    result = ScanResult(case_id)
    if case_id in ("L13_sum10", "L13_sum11"):
        total = 10 if case_id == "L13_sum10" else 11
        shift = Fraction(-2, 3) if total == 10 else Fraction(1, 3)
        for a, b, c in _l13_triples(total):
            basket = l13_basket(a, b, c)
            inv = basket.chains[3].invariants
            if l13_polynomials(a, b, c) != (inv.q1, inv.ql, inv.q):
                raise ArithmeticError(f"polynomial q-formulas disagree with the continuant at {(a, b, c)}")
            k2 = k_squared(basket)
            if k2 != Fraction(4 * (b - 1) * (a + c - 2), inv.q) + shift:
                raise ArithmeticError(f"closed K^2 disagrees at {(a, b, c)}")
            e = orbifold_euler(basket)
            result.records.append(
                ScanRecord(case_id, {"a": a, "b": b, "c": c}, k2, 3 * e, bmy_verdict(k2, e))
            )
    elif case_id == "odd_chain":
        lo = int(bounds.get("l_min", 1))
        hi = int(bounds.get("l_max", 100))
        if lo < 1 or hi < lo:
            raise ValueError(f"bad odd_chain bounds {lo}..{hi}")
        for l in range(lo, hi + 1):
            basket = odd_chain_basket(l)
            k2 = k_squared(basket)
            e = orbifold_euler(basket)
            verdict = Verdict.EXCLUDED_BY_IMPORT if l < ODD_CHAIN_MIN_L else bmy_verdict(k2, e)
            result.records.append(ScanRecord(case_id, {"l": l}, k2, 3 * e, verdict))
    else:
        raise ValueError(f"unknown scan case {case_id!r}; expected one of {SCAN_CASES}")
    return result


# --- chain enumeration ------------------------------------------------------

@dataclass(frozen=True)
class ChainConstraints:
    max_length: int
    max_weight: int
    min_length: int = 1
    # tr = tr_slope * l - tr_offset, e.g. (3, 2) for tr = 3l - 2
    tr_relation: tuple[int, int] | None = None
    # with a partial basket, the chain completes it and must pass the BMY gate
    partial: Basket | None = None
    total_L: int | None = None
    min_q: int | None = None

    def __post_init__(self):
        if self.max_length is None or self.max_weight is None:
            raise ValueError("enumeration needs finite max_length and max_weight")
        if self.max_length < 0 or self.max_weight < 2 or self.min_length < 0:
            raise ValueError("bounds out of range")


def enumerate_chains(constraints: ChainConstraints):
    """Yield every chain meeting the constraints, by length then lexicographically."""
    c = constraints
    lengths = range(c.min_length, c.max_length + 1)
    if c.total_L is not None and c.partial is not None:
        need = c.total_L - c.partial.L
        lengths = [need] if c.min_length <= need <= c.max_length else []
    for l in lengths:
        for weights in product(range(2, c.max_weight + 1), repeat=l):
            if c.tr_relation is not None:
                slope, offset = c.tr_relation
                if sum(weights) != slope * l - offset:
                    continue
            chain = Chain(weights)
            if c.min_q is not None and chain.q < c.min_q:
                continue
            if c.partial is not None:
                basket = Basket(c.partial.singularities + (CyclicSingularity.of_chain(chain),), c.partial.rational)
                if bmy_gate(basket) is not Verdict.PASS:
                    continue
            yield chain


# --- K^2 along a tr-relation --------------------------------------------------

# (order-5 chain, tr offset d with tr = 3l - d, constant term of K^2 - (q1+ql+2)/q)
K2_CASES = (
    ((2, 2, 2, 2), 2, Fraction(-2, 3)),
    ((2, 2, 2, 2), 3, Fraction(-5, 3)),
    ((2, 3), 4, Fraction(-4, 15)),
    ((2, 3), 5, Fraction(-19, 15)),
    ((5,), 7, Fraction(-13, 15)),
    ((5,), 8, Fraction(-28, 15)),
)


@dataclass
class CaseIdentity:
    p3: Chain
    offset: int
    constant: Fraction
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def k2_case_identities(max_length: int = 7, max_weight: int | None = None, p3_only=None) -> list[CaseIdentity]:
    """Check K^2 = const + (q1+ql+2)/q for A_1 + 1/3(1,1) + p_3 + chain over every chain with tr = 3l - d.

    Weights are bounded by the relation itself: n_i <= tr - 2(l - 1).
    ``p3_only`` restricts the run to one order-5 chain.
    """
    out = []
    for p3, d, const in K2_CASES:
        if p3_only is not None and tuple(p3_only) != p3:
            continue
        case = CaseIdentity(Chain(p3), d, const)
        for l in range(1, max_length + 1):
            tr = 3 * l - d
            top = tr - 2 * (l - 1)
            if max_weight is not None:
                top = min(top, max_weight)
            if top < 2:
                continue
            cons = ChainConstraints(max_length=l, min_length=l, max_weight=top, tr_relation=(3, d))
            for chain in enumerate_chains(cons):
                inv = chain.invariants
                basket = Basket.of_chains(Chain((2,)), Chain((3,)), Chain(p3), chain)
                want = const + Fraction(inv.q1 + inv.ql + 2, inv.q)
                case.checked += 1
                if k_squared(basket) != want:
                    case.failures.append(str(chain))
        out.append(case)
    return out

"""Numerical feasibility of a curve on the minimal resolution.

For an irreducible curve C on the resolution, two identities tie its data
(K.C, C^2 and how it meets each exceptional chain) to an unknown rational
m_C and K_S^2:

    alpha := K.C + sum_p sum_j c_j(p) (C.A_j)      = m_C K^2
    beta  := C^2 + sum_p Q_p(C)                    = m_C^2 K^2

where c_j = 1 - (u_j + v_j)/q and Q_p is the quadratic correction, valid when
C meets at most two components of each chain.  The sign of m_C decides
whether K_S is ample, numerically trivial or anti-ample.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from fractions import Fraction

from qhpp.hj import Chain, uv_profile
from qhpp.rational import fmt
from qhpp.surface import Verdict, bmy_verdict


class Eq2Inapplicable(ValueError):
    """The curve meets more than two components of one chain."""

    code = "eq2_inapplicable"


@dataclass(frozen=True)
class Hit:
    point: int  # 0-based index into the supplied chains
    component: int  # 1-based position along the chain
    mult: int


@dataclass(frozen=True)
class CurveHypothesis:
    kc: int
    c2: int
    hits: tuple[Hit, ...] = ()
    label: str = "C"

    def __post_init__(self):
        object.__setattr__(self, "hits", tuple(self.hits))
        for h in self.hits:
            if h.mult < 1:
                raise ValueError(f"hit multiplicities must be >= 1: {h}")
            if h.component < 1 or h.point < 0:
                raise ValueError(f"bad hit position {h}")

    @classmethod
    def minus_one(cls, hits=(), label="E") -> CurveHypothesis:
        return cls(kc=-1, c2=-1, hits=tuple(Hit(*h) for h in hits), label=label)

    @classmethod
    def parse(cls, text: str) -> CurveHypothesis:
        """Parse ``"E(-1): D4[1]*1, D4[9]*1"``.

        The parenthesis holds C^2 and optionally ``K=<K.C>``; without it K.C
        defaults to the smooth rational value -2 - C^2.  ``Dp`` is 1-based.
        """
        head, _, tail = text.partition(":")
        m = re.fullmatch(r"\s*(\w+)\s*\(\s*(-?\d+)\s*(?:,\s*K\s*=\s*(-?\d+)\s*)?\)\s*", head)
        if not m:
            raise ValueError(f"bad curve header {head!r}")
        label, c2 = m.group(1), int(m.group(2))
        kc = int(m.group(3)) if m.group(3) is not None else -2 - c2
        hits = []
        for item in filter(None, (t.strip() for t in tail.split(","))):
            hm = re.fullmatch(r"D(\d+)\[(\d+)\](?:\s*\*\s*(\d+))?", item)
            if not hm:
                raise ValueError(f"bad hit {item!r}")
            hits.append(Hit(int(hm.group(1)) - 1, int(hm.group(2)), int(hm.group(3) or 1)))
        return cls(kc, c2, tuple(hits), label)

    def __str__(self):
        head = f"{self.label}({self.c2}" + ("" if self.kc == -2 - self.c2 else f",K={self.kc}") + ")"
        body = ", ".join(f"D{h.point + 1}[{h.component}]*{h.mult}" for h in self.hits)
        return f"{head}: {body}"


def _grouped(curve: CurveHypothesis, chains) -> dict[int, dict[int, int]]:
    out: dict[int, dict[int, int]] = {}
    for h in curve.hits:
        if h.point >= len(chains):
            raise IndexError(f"hit on D{h.point + 1} but only {len(chains)} chains given")
        if h.component > len(chains[h.point]):
            raise IndexError(f"component {h.component} outside chain {chains[h.point]}")
        comps = out.setdefault(h.point, {})
        comps[h.component] = comps.get(h.component, 0) + h.mult
    return out


def equation_one(curve: CurveHypothesis, chains) -> Fraction:
    """alpha = m_C K^2."""
    alpha = Fraction(curve.kc)
    for p, comps in _grouped(curve, chains).items():
        _, _, coeffs = uv_profile(chains[p])
        for j, mult in comps.items():
            alpha += coeffs[j - 1] * mult
    return alpha


def equation_two(curve: CurveHypothesis, chains) -> Fraction:
    """beta = m_C^2 K^2; raises Eq2Inapplicable past two components per chain."""
    beta = Fraction(curve.c2)
    for p, comps in _grouped(curve, chains).items():
        if len(comps) > 2:
            raise Eq2Inapplicable(f"curve meets {len(comps)} components of D{p + 1}")
        inv = chains[p].invariants
        u, v, q = inv.u, inv.v, inv.q
        idx = sorted(comps)
        s = idx[0]
        x = comps[s]
        beta += Fraction(v[s - 1] * u[s - 1] * x * x, q)
        if len(idx) == 2:
            t = idx[1]
            y = comps[t]
            beta += Fraction(v[t - 1] * u[t - 1] * y * y + 2 * v[t - 1] * u[s - 1] * x * y, q)
    return beta


class Classification(str, enum.Enum):
    K_AMPLE = "K ample"
    NUMERICALLY_TRIVIAL = "numerically trivial"
    MINUS_K_AMPLE = "-K ample"
    INCONSISTENT = "inconsistent"
    UNDETERMINED = "undetermined"

    def __str__(self):
        return self.value


def _by_sign(x: Fraction) -> Classification:
    if x > 0:
        return Classification.K_AMPLE
    if x < 0:
        return Classification.MINUS_K_AMPLE
    return Classification.NUMERICALLY_TRIVIAL


@dataclass
class InferenceResult:
    alpha: Fraction
    beta: Fraction | None
    m: Fraction | None
    k_squared: Fraction | None
    classification: Classification
    infeasible_for_log_general_type: bool = True
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "alpha": fmt(self.alpha),
            "beta": fmt(self.beta),
            "m": fmt(self.m),
            "K2": fmt(self.k_squared),
            "classification": str(self.classification),
            "infeasible_for_log_general_type": self.infeasible_for_log_general_type,
        }


def _e_orb(chains) -> Fraction:
    return 3 - sum((1 - Fraction(1, c.q) for c in chains if c.length), Fraction(0))


def infer_from_curve(curve: CurveHypothesis, chains, k_squared: Fraction | None = None) -> InferenceResult:
    """Solve both identities for (m_C, K^2), or check them against a known K^2.

    ``chains`` should list every singular point of the surface: the BMY check on
    a derived K^2 uses their orders.
    """
    chains = [c if isinstance(c, Chain) else Chain(tuple(c)) for c in chains]
    alpha = equation_one(curve, chains)
    notes = []
    try:
        beta = equation_two(curve, chains)
    except Eq2Inapplicable as exc:
        beta = None
        notes.append(f"{Eq2Inapplicable.code}: {exc}")

    m = k2 = None
    if k_squared is not None:
        k2 = Fraction(k_squared)
        if k2 == 0:
            cls = _by_sign(alpha) if alpha == 0 else Classification.INCONSISTENT
            if cls is Classification.NUMERICALLY_TRIVIAL:
                m = Fraction(0)
        else:
            m = alpha / k2
            cls = _by_sign(m)
            if k2 < 0 and cls is not Classification.NUMERICALLY_TRIVIAL:
                cls = Classification.INCONSISTENT
                notes.append("K^2 < 0 rules out an ample or anti-ample K")
            if beta is not None and beta != m * m * k2:
                cls = Classification.INCONSISTENT
                notes.append(f"m^2 K^2 = {fmt(m * m * k2)} but the curve gives {fmt(beta)}")
    elif beta is None:
        # Picard number one: K^2 > 0 unless K is numerically trivial, so alpha = m K^2 carries the sign of m
        cls = _by_sign(alpha)
        notes.append("classified from the sign of alpha alone")
    elif alpha != 0 and beta > 0:
        m = beta / alpha
        k2 = alpha * alpha / beta
        cls = _by_sign(m)
    elif alpha == 0 and beta == 0:
        m, k2 = Fraction(0), Fraction(0)
        cls = Classification.NUMERICALLY_TRIVIAL
    elif alpha == 0:
        cls = Classification.INCONSISTENT
        notes.append("alpha = 0 forces m = 0, contradicting beta != 0")
    else:
        cls = Classification.INCONSISTENT
        notes.append("alpha != 0 needs beta = m^2 K^2 > 0")

    infeasible = cls is not Classification.K_AMPLE
    if not infeasible and k2 is not None and bmy_verdict(k2, _e_orb(chains)) is not Verdict.PASS:
        infeasible = True
        notes.append("derived K^2 fails the BMY gate")
    return InferenceResult(alpha, beta, m, k2, cls, infeasible, notes)


# --- configurations used in the lemmas --------------------------------------

def cycle_curve(chain: Chain, point: int = 0) -> CurveHypothesis:
    """A (-1)-curve meeting both ends of a chain once, closing it into a cycle."""
    l = chain.length
    if l == 1:
        return CurveHypothesis.minus_one([(point, 1, 2)])
    return CurveHypothesis.minus_one([(point, 1, 1), (point, l, 1)])


def double_end_curve(chain: Chain, point: int = 0) -> CurveHypothesis:
    """A (-1)-curve meeting the first component of a chain with multiplicity 2."""
    return CurveHypothesis.minus_one([(point, 1, 2)])


def contracted_end_curve(first_weight: int, point: int = 0) -> CurveHypothesis:
    """Image of the first component D_1 after contracting a (-1)-curve E with E.D_1 = 2.

    It meets the remaining chain once at its first component, with
    C^2 = 4 - n_1 and K.C = n_1 - 4.
    """
    return CurveHypothesis(kc=first_weight - 4, c2=4 - first_weight, hits=(Hit(point, 1, 1),), label="C")


@dataclass
class PairScan:
    sums: dict[tuple[int, int], Fraction]

    @property
    def max_distinct(self) -> tuple[Fraction, tuple[int, int]]:
        """Largest c_j + c_k over distinct components j < k."""
        jk = max((p for p in self.sums if p[0] < p[1]), key=lambda p: (self.sums[p], -p[0], -p[1]))
        return self.sums[jk], jk

    @property
    def max_any(self) -> tuple[Fraction, tuple[int, int]]:
        """Largest sum when the two hits may fall on one component (j = k)."""
        jk = max(self.sums, key=lambda p: (self.sums[p], -p[0], -p[1]))
        return self.sums[jk], jk

    @property
    def all_below_one(self) -> bool:
        return all(s < 1 for s in self.sums.values())


def pair_scan_23719() -> PairScan:
    """Coefficient sums c_j + c_k, j <= k, over double hits on the order-19 chain [3,2,...,2].

    m > 0 with E.D_4 = 2 needs some sum to exceed 1; none does.
    """
    chain = Chain((3,) + (2,) * 8)
    _, _, coeffs = uv_profile(chain)
    sums = {(j, k): coeffs[j - 1] + coeffs[k - 1] for j in range(1, 10) for k in range(j, 10)}
    scan = PairScan(sums)
    if not scan.all_below_one:
        raise ArithmeticError("a coefficient pair reaches 1")
    return scan

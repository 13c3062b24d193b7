"""Blow-ups and blow-downs on marked dual graphs.

A :class:`MarkedResolution` is the configuration of curves on a smooth
rational surface that we care about: the exceptional divisor D of a minimal
resolution (disjoint chains) together with extra curves such as (-1)-curves.
Each curve carries its self-intersection and its degree against K, so
images of curves that become singular after a contraction keep a correct K.C.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from fractions import Fraction

from qhpp.curves import Classification, CurveHypothesis, Hit, infer_from_curve
from qhpp.hj import Chain


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class MarkedResolution:
    labels: tuple[str, ...]
    matrix: tuple[tuple[int, ...], ...]  # diagonal holds self-intersections
    k_degrees: tuple[int, ...]
    exceptional: frozenset[str]
    picard_rank: int
    non_snc: tuple[str, ...] = ()
    rational: bool = True

    def __post_init__(self):
        n = len(self.labels)
        if len(set(self.labels)) != n:
            raise GraphError("duplicate curve labels")
        if len(self.matrix) != n or any(len(r) != n for r in self.matrix) or len(self.k_degrees) != n:
            raise GraphError("matrix / K-degree sizes do not match the labels")
        for i in range(n):
            for j in range(i + 1, n):
                if self.matrix[i][j] != self.matrix[j][i]:
                    raise GraphError(f"intersection matrix not symmetric at {self.labels[i]}, {self.labels[j]}")
                if self.matrix[i][j] < 0:
                    raise GraphError("distinct curves have nonnegative intersection")
        unknown = set(self.exceptional) - set(self.labels)
        if unknown:
            raise GraphError(f"exceptional labels not in the graph: {sorted(unknown)}")

    @classmethod
    def build(cls, curves, edges=(), exceptional=(), picard_rank=None, rational=True) -> MarkedResolution:
        """``curves`` is a list of (label, self_int) or (label, self_int, K.C); K.C defaults to -2 - C^2.

        ``edges`` is a list of (a, b) or (a, b, mult).  Without ``picard_rank`` the
        Q-homology projective plane value 1 + L is used.
        """
        labels = []
        selfs = []
        ks = []
        for c in curves:
            label, s = c[0], c[1]
            labels.append(label)
            selfs.append(s)
            ks.append(c[2] if len(c) > 2 else -2 - s)
        idx = {lab: i for i, lab in enumerate(labels)}
        n = len(labels)
        m = [[0] * n for _ in range(n)]
        for i, s in enumerate(selfs):
            m[i][i] = s
        for e in edges:
            a, b = e[0], e[1]
            mult = e[2] if len(e) > 2 else 1
            if a == b:
                raise GraphError("self-edges are not allowed")
            m[idx[a]][idx[b]] += mult
            m[idx[b]][idx[a]] += mult
        exceptional = frozenset(exceptional)
        if picard_rank is None:
            picard_rank = 1 + len(exceptional)
        return cls(tuple(labels), tuple(map(tuple, m)), tuple(ks), exceptional, picard_rank, (), rational)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise GraphError(f"no curve labelled {label!r}") from None

    def self_int(self, label: str) -> int:
        i = self.index(label)
        return self.matrix[i][i]

    def k_degree(self, label: str) -> int:
        return self.k_degrees[self.index(label)]

    def dot(self, a: str, b: str) -> int:
        return self.matrix[self.index(a)][self.index(b)]

    @property
    def extra_curves(self) -> tuple[str, ...]:
        return tuple(lab for lab in self.labels if lab not in self.exceptional)

    @property
    def L(self) -> int:
        return len(self.exceptional)

    def dot_d(self, label: str) -> int:
        """Intersection of a curve with the reduced exceptional divisor."""
        i = self.index(label)
        return sum(self.matrix[i][self.index(d)] for d in self.exceptional if d != label)

    def neighbours(self, label: str) -> dict[str, int]:
        i = self.index(label)
        return {lab: self.matrix[i][j] for j, lab in enumerate(self.labels) if j != i and self.matrix[i][j]}

    def with_exceptional(self, add=(), remove=()) -> MarkedResolution:
        for lab in list(add) + list(remove):
            self.index(lab)
        return replace(self, exceptional=(self.exceptional | set(add)) - set(remove))

    def exceptional_chains(self) -> list[list[str]]:
        """Connected components of D as ordered label lists; raises GraphError if one is not a chain."""
        exc = sorted(self.exceptional, key=self.index)
        seen = set()
        chains = []
        for start in exc:
            if start in seen:
                continue
            comp = []
            stack = [start]
            while stack:
                x = stack.pop()
                if x in seen:
                    continue
                seen.add(x)
                comp.append(x)
                stack.extend(y for y in self.neighbours(x) if y in self.exceptional and y not in seen)
            edges = 0
            for x in comp:
                nb = {y: k for y, k in self.neighbours(x).items() if y in self.exceptional}
                if any(k > 1 for k in nb.values()):
                    raise GraphError(f"exceptional curves meeting with multiplicity > 1 at {x}")
                if len(nb) > 2:
                    raise GraphError(f"exceptional curve {x} has {len(nb)} exceptional neighbours")
                edges += len(nb)
            if edges // 2 != len(comp) - 1:
                raise GraphError(f"exceptional component through {start} contains a cycle")
            ends = [x for x in comp if sum(1 for y in self.neighbours(x) if y in self.exceptional) <= 1]
            first = min(ends, key=self.index)
            order = [first]
            while len(order) < len(comp):
                nxt = [y for y in self.neighbours(order[-1]) if y in self.exceptional and y not in order]
                order.append(nxt[0])
            chains.append(order)
        return chains

    def chain_weights(self, chain_labels) -> Chain:
        return Chain(tuple(-self.self_int(x) for x in chain_labels))

    def curve_hypothesis(self, label: str, chains=None) -> tuple[CurveHypothesis, list[Chain]]:
        """Numerical data of an extra curve against the exceptional chains."""
        if chains is None:
            chains = self.exceptional_chains()
        hits = []
        for p, labs in enumerate(chains):
            for j, x in enumerate(labs, start=1):
                k = self.dot(label, x)
                if k:
                    hits.append(Hit(p, j, k))
        curve = CurveHypothesis(self.k_degree(label), self.self_int(label), tuple(hits), label)
        return curve, [self.chain_weights(labs) for labs in chains]

    # --- serialization: one adjacency line per curve -------------------------

    def to_text(self) -> str:
        lines = [f"picard {self.picard_rank}"]
        if not self.rational:
            lines.append("rational no")
        for reason in self.non_snc:
            lines.append(f"non_snc {reason}")
        for i, lab in enumerate(self.labels):
            kind = "D" if lab in self.exceptional else "X"
            s = self.matrix[i][i]
            k = self.k_degrees[i]
            head = f"{lab}({s}" + ("" if k == -2 - s else f",K={k}") + ")"
            nbrs = ", ".join(
                f"{other}" + (f"*{mult}" if mult != 1 else "")
                for j, (other, mult) in enumerate(zip(self.labels, self.matrix[i]))
                if j != i and mult
            )
            lines.append(f"{kind} {head}: {nbrs}".rstrip())
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> MarkedResolution:
        picard = None
        rational = True
        non_snc = []
        curves = []
        adj = {}
        exc = []
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if line.startswith("picard "):
                picard = int(line.split()[1])
                continue
            if line.startswith("rational "):
                rational = line.split()[1].lower() not in ("no", "false", "0")
                continue
            if line.startswith("non_snc "):
                non_snc.append(line[len("non_snc "):])
                continue
            m = re.fullmatch(r"([DX])\s+([\w']+)\(\s*(-?\d+)\s*(?:,\s*K\s*=\s*(-?\d+)\s*)?\)\s*:?\s*(.*)", line)
            if not m:
                raise GraphError(f"cannot parse graph line {raw!r}")
            kind, lab, s = m.group(1), m.group(2), int(m.group(3))
            k = int(m.group(4)) if m.group(4) is not None else -2 - s
            curves.append((lab, s, k))
            if kind == "D":
                exc.append(lab)
            nbrs = {}
            for item in filter(None, (t.strip() for t in m.group(5).split(","))):
                nm = re.fullmatch(r"([\w']+)(?:\s*\*\s*(\d+))?", item)
                if not nm:
                    raise GraphError(f"bad neighbour {item!r} in {raw!r}")
                nbrs[nm.group(1)] = int(nm.group(2) or 1)
            adj[lab] = nbrs
        edges = []
        for a, nbrs in adj.items():
            for b, mult in nbrs.items():
                if b not in adj:
                    raise GraphError(f"{a} lists unknown neighbour {b}")
                if adj[b].get(a) != mult:
                    raise GraphError(f"adjacency of {a} and {b} is not symmetric")
                if a < b:
                    edges.append((a, b, mult))
        state = cls.build(curves, edges, exc, picard, rational)
        return replace(state, non_snc=tuple(non_snc))


# --- blow-up / blow-down -----------------------------------------------------

def _fresh_label(state: MarkedResolution, stem: str = "F") -> str:
    n = 1
    while f"{stem}{n}" in state.labels:
        n += 1
    return f"{stem}{n}"


def blow_up(state: MarkedResolution, location, new_label: str | None = None) -> MarkedResolution:
    """Blow up a point lying on the named curves (each smooth there).

    ``location`` is one label (a free point of that curve) or several labels
    meeting pairwise at the point.  Curves through the point lose 1 from their
    self-intersection and from each mutual intersection, gain 1 in K-degree and
    meet the new (-1)-curve once.
    """
    through = [location] if isinstance(location, str) else list(location)
    if not through or len(set(through)) != len(through):
        raise GraphError("blow-up location must name distinct curves")
    idx = [state.index(x) for x in through]
    for a in range(len(idx)):
        for b in range(a + 1, len(idx)):
            if state.matrix[idx[a]][idx[b]] < 1:
                raise GraphError(f"{through[a]} and {through[b]} do not meet")
    label = new_label or _fresh_label(state)
    if label in state.labels:
        raise GraphError(f"label {label!r} already used")
    n = len(state.labels)
    m = [list(r) + [0] for r in state.matrix] + [[0] * (n + 1)]
    m[n][n] = -1
    ks = list(state.k_degrees) + [-1]
    for a in idx:
        m[a][a] -= 1
        ks[a] += 1
        m[a][n] = m[n][a] = 1
    for a in idx:
        for b in idx:
            if a != b:
                m[a][b] -= 1
    return replace(
        state,
        labels=state.labels + (label,),
        matrix=tuple(map(tuple, m)),
        k_degrees=tuple(ks),
        picard_rank=state.picard_rank + 1,
    )


def contract(state: MarkedResolution, label: str) -> MarkedResolution:
    """Blow down the (-1)-curve ``label``.

    Remaining curves: A^2 += (A.E)^2, A.B += (A.E)(B.E), K.A -= A.E.  Exceptional
    images that are no longer negative enough (weight < 2) leave D.
    """
    e = state.index(label)
    if state.matrix[e][e] != -1:
        raise GraphError(f"{label} has self-intersection {state.matrix[e][e]}, not -1")
    row = state.matrix[e]
    keep = [i for i in range(len(state.labels)) if i != e]
    m = [[state.matrix[i][j] + row[i] * row[j] for j in keep] for i in keep]
    ks = tuple(state.k_degrees[i] - row[i] for i in keep)
    labels = tuple(state.labels[i] for i in keep)
    flags = list(state.non_snc)
    for i in keep:
        if row[i] >= 2:
            flags.append(f"{state.labels[i]} meets {label} with multiplicity {row[i]}: image not snc")
    touching = [state.labels[i] for i in keep if row[i]]
    if len(touching) >= 3:
        flags.append(f"{', '.join(touching)} pass through one point after contracting {label}")
    exceptional = frozenset(x for x in state.exceptional if x != label and m[labels.index(x)][labels.index(x)] <= -2)
    return replace(
        state,
        labels=labels,
        matrix=tuple(map(tuple, m)),
        k_degrees=ks,
        exceptional=exceptional,
        picard_rank=state.picard_rank - 1,
        non_snc=tuple(flags),
    )


@dataclass
class QhppVerdict:
    valid: bool
    reasons: list[str] = field(default_factory=list)
    chains: list[list[str]] = field(default_factory=list)

    @property
    def n_chains(self) -> int:
        return len(self.chains)


def qhpp_check(state: MarkedResolution) -> QhppVerdict:
    """Can this graph be the minimal resolution of a Q-homology projective plane?"""
    reasons = list(state.non_snc)
    chains = []
    for x in sorted(state.exceptional, key=state.index):
        if state.self_int(x) > -2:
            reasons.append(f"exceptional curve {x} has self-intersection {state.self_int(x)} > -2")
    try:
        chains = state.exceptional_chains()
    except GraphError as exc:
        reasons.append(str(exc))
    limit = 4 if state.rational else 5
    if len(chains) > limit:
        reasons.append(f"{len(chains)} singular points exceeds {limit}")
    elif len(chains) == 5:
        weights = sorted(tuple(-state.self_int(x) for x in c) for c in chains)
        if weights != [(2,)] * 3 + [(2, 2, 2)] * 2:
            reasons.append("5 singular points must be 3A_1 + 2A_3")
    if state.picard_rank != 1 + state.L:
        reasons.append(f"picard rank {state.picard_rank} != 1 + L = {1 + state.L}")
    return QhppVerdict(not reasons, reasons, chains)


# --- contraction identities ------------------------------------------------------

@dataclass
class IdentityReport:
    chain: Chain
    q: int
    q1: int
    ql: int
    bar_q: int
    bar_q1: int
    bar_ql: int
    bar_q_inner: int
    linear_ok: bool
    lhs: Fraction
    rhs: int

    @property
    def quadratic_ok(self) -> bool:
        return self.lhs == self.rhs

    @property
    def difference_vanishes(self) -> bool:
        return self.rhs == 0

    @property
    def ok(self) -> bool:
        return self.linear_ok and self.quadratic_ok


def contraction_identities(chain: Chain) -> IdentityReport:
    """Compare a chain [2, n_2, ..., n_l] with the chain obtained by dropping the first component.

    Checks q1 = bar q, ql = 2 bar ql - bar q_inner, q = 2 bar q - bar q1, and
    [(q1+ql+2)/q - (bar q1+bar ql+2)/bar q] * bar q * (2 bar q - bar q1) = (bar q - bar q1 - 1)^2.
    """
    if chain.length < 2 or chain.weights[0] != 2:
        raise ValueError("contraction identities need a chain of length >= 2 starting with weight 2")
    bar = Chain(chain.weights[1:])
    inv, binv = chain.invariants, bar.invariants
    linear_ok = inv.q1 == binv.q and inv.ql == 2 * binv.ql - binv.q_inner and inv.q == 2 * binv.q - binv.q1
    lhs = (Fraction(inv.q1 + inv.ql + 2, inv.q) - Fraction(binv.q1 + binv.ql + 2, binv.q)) * binv.q * (2 * binv.q - binv.q1)
    rhs = (binv.q - binv.q1 - 1) ** 2
    return IdentityReport(chain, inv.q, inv.q1, inv.ql, binv.q, binv.q1, binv.ql, binv.q_inner, linear_ok, lhs, rhs)


# --- cascades --------------------------------------------------------------------

LOG_DEL_PEZZO = "log del Pezzo"
LOG_GENERAL_TYPE = "log general type"
NUMERICALLY_TRIVIAL = "numerically trivial"
NOT_QHPP = "not_qhpp"
UNCLASSIFIED = "unclassified"

_CLASS_NAMES = {
    Classification.MINUS_K_AMPLE: LOG_DEL_PEZZO,
    Classification.K_AMPLE: LOG_GENERAL_TYPE,
    Classification.NUMERICALLY_TRIVIAL: NUMERICALLY_TRIVIAL,
}


def classify_state(state: MarkedResolution) -> str:
    """Classify the singular surface through the first extra curve with a decisive inference."""
    verdict = qhpp_check(state)
    if not verdict.valid:
        return NOT_QHPP
    for label in state.extra_curves:
        curve, chains = state.curve_hypothesis(label, verdict.chains)
        result = infer_from_curve(curve, chains)
        if result.classification in _CLASS_NAMES:
            return _CLASS_NAMES[result.classification]
    return UNCLASSIFIED


@dataclass
class CascadePath:
    steps: list[str]
    terminal_state: MarkedResolution
    terminal_class: str
    classes: list[str] = field(default_factory=list)  # class of every state along the path


def admissible_steps(state: MarkedResolution, max_ed: int = 2) -> list[str]:
    """Smooth rational (-1)-curves E with E.D <= max_ed, in label order."""
    out = []
    for label in state.extra_curves:
        if state.self_int(label) == -1 and state.k_degree(label) == -1 and state.dot_d(label) <= max_ed:
            out.append(label)
    return out


def cascade_search(
    state: MarkedResolution, max_depth: int, max_ed: int = 2, min_depth: int = 0
) -> CascadePath | None:
    """Depth-first search for blow-downs through valid states ending at a log del Pezzo surface.

    Returns the first path in label order, or None when the bounded search is exhausted.
    ``min_depth`` forces at least that many contractions before a log del Pezzo
    state counts as terminal, which lets a search undo blow-ups of a state that
    is already log del Pezzo.
    """
    if not qhpp_check(state).valid:
        raise GraphError("cascade search needs a valid starting state")

    def walk(s, steps, classes):
        cls = classify_state(s)
        classes = classes + [cls]
        if cls == LOG_DEL_PEZZO and len(steps) >= min_depth:
            return CascadePath(steps, s, cls, classes)
        if len(steps) >= max_depth:
            return None
        for label in admissible_steps(s, max_ed):
            nxt = contract(s, label)
            if not qhpp_check(nxt).valid:
                continue
            found = walk(nxt, steps + [label], classes)
            if found is not None:
                return found
        return None

    return walk(state, [], [])


# --- the three reductions behind E.D >= 2 ------------------------------------------------

def _base_state(hits):
    """A_1 + 1/3(1,1) + 1/5(1,2) + [2,3,2,2] with an extra (-1)-curve E meeting D as given."""
    curves = [("P1", -2), ("P2", -3), ("P3a", -3), ("P3b", -2)]
    edges = [("P3a", "P3b")]
    chain4 = [2, 3, 2, 2]
    for j, n in enumerate(chain4, start=1):
        curves.append((f"D{j}", -n))
        if j > 1:
            edges.append((f"D{j - 1}", f"D{j}"))
    curves.append(("E", -1))
    edges += [("E", lab, mult) for lab, mult in hits]
    exc = [c[0] for c in curves if c[0] != "E"]
    return MarkedResolution.build(curves, edges, exc)


def ed_ge_2_constructions() -> dict[str, tuple[MarkedResolution, MarkedResolution]]:
    """(before, after) states for the three blow-up reductions.

    after states add the new negative curves to D, as the new minimal resolution would.
    """
    out = {}
    base = _base_state([("D2", 1)])
    s = blow_up(base, ("E", "D2"), "F")
    out["ED=1"] = (base, s.with_exceptional(add=["E"]))

    base = _base_state([("D2", 1), ("D3", 1)])
    s = blow_up(base, ("E", "D2", "D3"), "F")
    out["ED=2 node"] = (base, s.with_exceptional(add=["E"]))

    base = _base_state([("D2", 2)])
    s = blow_up(base, ("E", "D2"), "F1")
    s = blow_up(s, ("E", "D2", "F1"), "F2")
    out["ED=2 tangent"] = (base, s.with_exceptional(add=["E", "F1"]))
    return out



# --- a one-step cascade toy -------------------------------------------------------------

def cascade_toy(n: int = 3) -> tuple[MarkedResolution, MarkedResolution]:
    """(S0, S1): S0 is log del Pezzo with D = [n,2] + [2], S1 blows up a free point of its (-1)-curve.

    S0 comes from the Hirzebruch surface F_n: blow up a point of a fibre, then
    the node of the two resulting (-1)-curves.  In S1 the old (-1)-curve drops
    to a (-2)-curve and joins D, which becomes the single chain [n,2,2,2].
    """
    s = MarkedResolution.build([("S", -n), ("f", 0)], [("S", "f")], ["S"], picard_rank=2)
    s = blow_up(s, ("f",), "G")
    s = blow_up(s, ("f", "G"), "H")
    s0 = s.with_exceptional(add=["f", "G"])
    s1 = blow_up(s0, ("H",), "F").with_exceptional(add=["H"])
    return s0, s1

"""Hirzebruch-Jung chains and their continuant invariants.

A chain ``[n_1, ..., n_l]`` (all ``n_i >= 2``) is the dual graph of the minimal
resolution of a cyclic quotient singularity; ``n_i`` is the negated
self-intersection of the i-th component.  Every quantity here is an exact
integer or :class:`~fractions.Fraction`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd

from qhpp import linalg
from qhpp.hj import _kernels


class ChainError(ValueError):
    pass


def _check_weights(weights):
    for n in weights:
        if not isinstance(n, int) or isinstance(n, bool):
            raise ChainError(f"weights must be integers, got {n!r}")
        if n <= 1:
            raise ChainError(f"chain weights must be >= 2, got {n}")


def continuant(weights) -> int:
    """Order of the group of the chain: K_j = n_j K_{j-1} - K_{j-2}, K_0 = 1.

    >>> continuant([3, 2, 2, 2, 2, 2, 2, 2, 2])
    19
    """
    weights = list(weights)
    _check_weights(weights)
    return _kernels.continuant(weights)


def _slice_continuant(weights, start, stop):
    """Continuant of weights[start..stop] (1-based, inclusive).

    A slice of length -1 has continuant 0 and the empty slice 1.
    """
    length = stop - start + 1
    if length == -1:
        return 0
    if length < -1:
        raise ValueError("slice shorter than -1")
    return _kernels.continuant(list(weights[start - 1:stop]))


@dataclass(frozen=True)
class ChainInvariants:
    q: int
    q1: int
    ql: int
    q_inner: int
    tr: int
    u: tuple[int, ...]
    v: tuple[int, ...]


@dataclass(frozen=True)
class Chain:
    weights: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(self.weights))
        _check_weights(self.weights)

    def __len__(self):
        return len(self.weights)

    def __iter__(self):
        return iter(self.weights)

    def __str__(self):
        return "[" + ",".join(map(str, self.weights)) + "]"

    @classmethod
    def parse(cls, text: str) -> Chain:
        text = text.strip()
        if not (text.startswith("[") and text.endswith("]")):
            raise ChainError(f"chain must be written as [n1,...,nl]: {text!r}")
        body = text[1:-1].strip()
        if not body:
            return cls(())
        try:
            return cls(tuple(int(t) for t in body.split(",")))
        except ValueError as exc:
            raise ChainError(f"bad chain {text!r}") from exc

    @property
    def length(self) -> int:
        return len(self.weights)

    @property
    def q(self) -> int:
        return self.invariants.q

    @cached_property
    def invariants(self) -> ChainInvariants:
        w = list(self.weights)
        q, q1, ql, q_inner, tr = _kernels.chain_numbers(w)
        l = len(w)
        if l:
            prefix, suffix = _kernels.prefix_suffix(w)
            u = tuple(prefix[j - 1] for j in range(1, l + 1))
            v = tuple(suffix[l - j] for j in range(1, l + 1))
        else:
            u = v = ()
        return ChainInvariants(q=q, q1=q1, ql=ql, q_inner=q_inner, tr=tr, u=u, v=v)

    def reversed(self) -> Chain:
        return Chain(self.weights[::-1])

    def is_rdp(self) -> bool:
        """True for an A_n chain (all weights 2), including the empty chain."""
        return all(n == 2 for n in self.weights)


def chain_invariants(weights) -> ChainInvariants:
    """Invariants straight from the definitions (slice continuants).

    Independent of the prefix/suffix path used by :attr:`Chain.invariants`.
    """
    w = list(weights)
    _check_weights(w)
    l = len(w)
    if l == 0:
        return ChainInvariants(1, 0, 0, 0, 0, (), ())
    return ChainInvariants(
        q=_slice_continuant(w, 1, l),
        q1=_slice_continuant(w, 2, l),
        ql=_slice_continuant(w, 1, l - 1),
        q_inner=_slice_continuant(w, 2, l - 1),
        tr=sum(w),
        u=tuple(_slice_continuant(w, 1, j - 1) for j in range(1, l + 1)),
        v=tuple(_slice_continuant(w, j + 1, l) for j in range(1, l + 1)),
    )


def hj_expand(q: int, a: int) -> Chain:
    """Hirzebruch-Jung expansion of q/a = n_1 - 1/(n_2 - 1/(...)).

    >>> hj_expand(19, 9)
    Chain(weights=(3, 2, 2, 2, 2, 2, 2, 2, 2))
    """
    if q < 2 or not 0 < a < q:
        raise ChainError(f"need 0 < a < q with q >= 2, got ({q}, {a})")
    if gcd(a, q) != 1:
        raise ChainError(f"gcd({a}, {q}) != 1")
    weights = []
    num, den = q, a
    while den:
        n = -(-num // den)
        weights.append(n)
        num, den = den, n * den - num
    return Chain(tuple(weights))


def chain_to_type(chain: Chain) -> tuple[int, int]:
    """Return (q, a) with chain = hj_expand(q, a); a is the continuant of all but the first weight."""
    if not chain.length:
        raise ChainError("the empty chain is a smooth point")
    inv = chain.invariants
    return inv.q, inv.q1


@dataclass(frozen=True)
class CyclicSingularity:
    """A cyclic quotient singularity 1/q(1,a) with its resolution chain."""

    q: int
    a: int
    chain: Chain

    def __post_init__(self):
        if hj_expand(self.q, self.a) != self.chain:
            raise ChainError(f"chain {self.chain} does not resolve 1/{self.q}(1,{self.a})")

    @classmethod
    def of_type(cls, q: int, a: int) -> CyclicSingularity:
        return cls(q, a, hj_expand(q, a))

    @classmethod
    def of_chain(cls, chain) -> CyclicSingularity:
        if not isinstance(chain, Chain):
            chain = Chain(tuple(chain))
        q, a = chain_to_type(chain)
        return cls(q, a, chain)

    @classmethod
    def parse(cls, text: str) -> CyclicSingularity:
        """Accept ``1/q(1,a)``, ``A_n`` / ``An`` or a bracketed chain."""
        text = text.strip()
        m = re.fullmatch(r"1\s*/\s*(\d+)\s*\(\s*1\s*,\s*(\d+)\s*\)", text)
        if m:
            return cls.of_type(int(m.group(1)), int(m.group(2)))
        m = re.fullmatch(r"A_?(\d+)", text)
        if m:
            n = int(m.group(1))
            if n < 1:
                raise ChainError(f"A_n needs n >= 1: {text!r}")
            return cls.of_chain(Chain((2,) * n))
        if text.startswith("["):
            return cls.of_chain(Chain.parse(text))
        raise ChainError(f"cannot parse singularity {text!r}")

    def __str__(self):
        if self.chain.is_rdp():
            return f"A_{self.chain.length}"
        return f"1/{self.q}({1},{self.a})"

    @property
    def order(self) -> int:
        return self.q

    def same_point(self, other: CyclicSingularity) -> bool:
        """Equality up to chain reversal (1/q(1,a) ~ 1/q(1,a') with a a' = 1 mod q)."""
        return self.chain == other.chain or self.chain == other.chain.reversed()


def reverse_conjugate(chain: Chain) -> tuple[Chain, CyclicSingularity]:
    """Reverse a chain; the reversed chain has type 1/q(1,a') with a a' = 1 (mod q)."""
    if not chain.length:
        raise ChainError("cannot reverse the empty chain")
    rev = chain.reversed()
    return rev, CyclicSingularity.of_chain(rev)


def uv_profile(chain: Chain) -> tuple[tuple[int, ...], tuple[int, ...], tuple[Fraction, ...]]:
    """(u, v, c) with c_j = 1 - (v_j + u_j) / q."""
    if not chain.length:
        raise ChainError("uv_profile needs a nonempty chain")
    inv = chain.invariants
    coeffs = tuple(1 - Fraction(vj + uj, inv.q) for uj, vj in zip(inv.u, inv.v))
    return inv.u, inv.v, coeffs


@dataclass(frozen=True)
class DiscrepancyData:
    a: tuple[Fraction, ...]
    d_squared: Fraction


def intersection_matrix(chain: Chain) -> list[list[int]]:
    l = chain.length
    m = [[0] * l for _ in range(l)]
    for i, n in enumerate(chain.weights):
        m[i][i] = -n
        if i + 1 < l:
            m[i][i + 1] = m[i + 1][i] = 1
    return m


def d_squared_closed_form(chain: Chain) -> Fraction:
    inv = chain.invariants
    return 2 * chain.length - inv.tr + 2 - Fraction(inv.q1 + inv.ql + 2, inv.q)


def discrepancies(chain: Chain) -> DiscrepancyData:
    """Discrepancy coefficients from the linear system D.A_i = 2 - n_i.

    D^2 is evaluated twice, by the closed form and as the quadratic form of the
    solution; a disagreement raises ``ArithmeticError``.
    """
    if not chain.length:
        raise ChainError("discrepancies need a nonempty chain")
    m = intersection_matrix(chain)
    a = linalg.solve(m, [2 - n for n in chain.weights])
    by_form = linalg.quadratic_form(m, a)
    closed = d_squared_closed_form(chain)
    if by_form != closed:
        raise ArithmeticError(f"D^2 mismatch on {chain}: {by_form} != {closed}")
    return DiscrepancyData(tuple(a), closed)

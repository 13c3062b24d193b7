"""Pure-Python continuant kernels.

Same surface as the compiled ``_ckernels`` module; selected automatically when
the extension is not built.
"""


def continuant(weights):
    prev, cur = 0, 1
    for n in weights:
        prev, cur = cur, n * cur - prev
    return cur


def prefix_suffix(weights):
    """Return (prefix, suffix) continuant lists of length l + 1.

    ``prefix[j]`` is the continuant of the first j weights and ``suffix[j]``
    that of the last j weights.
    """
    l = len(weights)
    prefix = [1] * (l + 1)
    suffix = [1] * (l + 1)
    prev = 0
    for j in range(l):
        prefix[j + 1] = weights[j] * prefix[j] - prev
        prev = prefix[j]
    prev = 0
    for j in range(l):
        suffix[j + 1] = weights[l - 1 - j] * suffix[j] - prev
        prev = suffix[j]
    return prefix, suffix


def chain_numbers(weights):
    """(q, q1, ql, q_inner, tr) with the length -1 slice convention."""
    l = len(weights)
    if l == 0:
        return 1, 0, 0, 0, 0
    prefix, suffix = prefix_suffix(weights)
    q_inner = continuant(weights[1:l - 1]) if l >= 2 else 0
    return prefix[l], suffix[l - 1], prefix[l - 1], q_inner, sum(weights)


def identity_sweep(max_length, max_weight):
    """Check the continuant identities on every chain up to the given bounds.

    Returns (number of chains checked, first failing chain or None).
    """
    from itertools import product
    from math import gcd

    checked = 0
    for l in range(1, max_length + 1):
        for weights in product(range(2, max_weight + 1), repeat=l):
            q, q1, ql, q_inner, _ = chain_numbers(weights)
            if q1 * ql - q * q_inner != 1 or gcd(q, q1) != 1:
                return checked, list(weights)
            if continuant(weights[::-1]) != q:
                return checked, list(weights)
            checked += 1
    return checked, None

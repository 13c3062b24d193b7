# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled continuant kernels (int64, with a Python-int escape on overflow)."""

from libc.stdint cimport int64_t

from qhpp.hj import _pykernels

# products of weights below this bound cannot overflow the recurrence
cdef object SAFE_BOUND = 2 ** 62


cdef bint _fits(weights):
    cdef object prod = 1
    for n in weights:
        prod *= n
        if prod >= SAFE_BOUND:
            return False
    return True


cdef int64_t _cont(int64_t* w, Py_ssize_t start, Py_ssize_t stop) nogil:
    cdef int64_t prev = 0, cur = 1, nxt
    cdef Py_ssize_t j
    for j in range(start, stop):
        nxt = w[j] * cur - prev
        prev = cur
        cur = nxt
    return cur


def continuant(weights):
    cdef Py_ssize_t l = len(weights), j
    cdef int64_t buf[64]
    if l > 64 or not _fits(weights):
        return _pykernels.continuant(weights)
    for j in range(l):
        buf[j] = weights[j]
    return _cont(buf, 0, l)


def prefix_suffix(weights):
    cdef Py_ssize_t l = len(weights), j
    cdef int64_t buf[64]
    cdef int64_t pre[65]
    cdef int64_t suf[65]
    cdef int64_t prev
    if l > 64 or not _fits(weights):
        return _pykernels.prefix_suffix(weights)
    for j in range(l):
        buf[j] = weights[j]
    pre[0] = 1
    suf[0] = 1
    prev = 0
    for j in range(l):
        pre[j + 1] = buf[j] * pre[j] - prev
        prev = pre[j]
    prev = 0
    for j in range(l):
        suf[j + 1] = buf[l - 1 - j] * suf[j] - prev
        prev = suf[j]
    return [pre[j] for j in range(l + 1)], [suf[j] for j in range(l + 1)]


def chain_numbers(weights):
    cdef Py_ssize_t l = len(weights), j
    cdef int64_t buf[64]
    cdef int64_t tr = 0
    if l == 0:
        return 1, 0, 0, 0, 0
    if l > 64 or not _fits(weights):
        return _pykernels.chain_numbers(weights)
    for j in range(l):
        buf[j] = weights[j]
        tr += buf[j]
    return (
        _cont(buf, 0, l),
        _cont(buf, 1, l),
        _cont(buf, 0, l - 1),
        _cont(buf, 1, l - 1) if l >= 2 else 0,
        tr,
    )


cdef int64_t _gcd(int64_t a, int64_t b) nogil:
    while b:
        a, b = b, a % b
    return a


def identity_sweep(int max_length, int max_weight):
    cdef int64_t w[64]
    cdef int64_t r[64]
    cdef int l, j
    cdef int64_t q, q1, ql, qi
    cdef long checked = 0
    if max_length > 64 or max_length < 0 or max_weight < 2:
        raise ValueError("bounds out of range")
    for l in range(1, max_length + 1):
        for j in range(l):
            w[j] = 2
        while True:
            q = _cont(w, 0, l)
            q1 = _cont(w, 1, l)
            ql = _cont(w, 0, l - 1)
            qi = _cont(w, 1, l - 1) if l >= 2 else 0
            for j in range(l):
                r[j] = w[l - 1 - j]
            if q1 * ql - q * qi != 1 or _gcd(q, q1) != 1 or _cont(r, 0, l) != q:
                return checked, [w[j] for j in range(l)]
            checked += 1
            # odometer increment, last position fastest (matches itertools.product)
            j = l - 1
            while j >= 0 and w[j] == max_weight:
                w[j] = 2
                j -= 1
            if j < 0:
                break
            w[j] += 1
    return checked, None

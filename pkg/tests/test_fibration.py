from itertools import permutations

import pytest

from qhpp.fibration import (
    FOUR_HORIZONTALS,
    SHAPE_D2,
    THREE_HORIZONTALS,
    FiberConfig,
    FiberError,
    HorizontalBudget,
    all_fibers,
    b_squared,
    d2_case,
    enumerate_fibers,
    fibers_containing,
    in_recursive_family,
    recursive_family,
    verify_fiber_lemmas,
)
from qhpp.hj import Chain

LEVELS = {2: 1, 3: 2, 4: 5, 5: 18, 6: 70, 7: 320, 8: 1525}


@pytest.fixture(scope="module")
def fibers8():
    return enumerate_fibers(8)


# --- a brute-force oracle: raw blow-ups, isomorphism by trying every relabelling ---------

def raw_children(w, m, edges):
    n = len(w)
    for i in range(n):
        w2 = list(w) + [-1]
        w2[i] -= 1
        yield tuple(w2), tuple(m) + (m[i],), edges | {frozenset((i, n))}
    for e in edges:
        a, b = tuple(e)
        w2 = list(w) + [-1]
        w2[a] -= 1
        w2[b] -= 1
        yield tuple(w2), tuple(m) + (m[a] + m[b],), (edges - {e}) | {frozenset((a, n)), frozenset((b, n))}


def brute_key(w, m, edges):
    n = len(w)
    best = None
    for p in permutations(range(n)):
        lab = tuple((w[p[i]], m[p[i]]) for i in range(n))
        inv = {v: i for i, v in enumerate(p)}
        es = tuple(sorted(tuple(sorted((inv[a], inv[b]))) for a, b in map(tuple, edges)))
        key = (lab, es)
        if best is None or key < best:
            best = key
    return best


def brute_levels(max_n):
    level = {brute_key((0,), (1,), frozenset()): ((0,), (1,), frozenset())}
    counts = {}
    for n in range(2, max_n + 1):
        nxt = {}
        for w, m, e in level.values():
            for child in raw_children(w, m, e):
                nxt.setdefault(brute_key(*child), child)
        counts[n] = len(nxt)
        level = nxt
    return counts


class TestEnumeration:
    def test_level_counts(self, fibers8):
        assert {n: len(v) for n, v in fibers8.items()} == LEVELS

    def test_brute_force_oracle(self, fibers8):
        assert brute_levels(6) == {n: LEVELS[n] for n in range(2, 7)}

    def test_deterministic(self, fibers8):
        again = enumerate_fibers(6)
        for n in range(2, 7):
            assert [f.canonical_form for f in again[n]] == [f.canonical_form for f in fibers8[n]]
            assert again[n] == fibers8[n]

    def test_every_fiber_is_a_fiber(self, fibers8):
        for level in fibers8.values():
            for f in level:
                f.check()
                assert f.f_squared() == 0
                assert f.k_dot_f() == -2

    def test_minus_one_curves(self, fibers8):
        for level in fibers8.values():
            for f in level:
                es = f.minus_one_curves()
                assert es
                if len(es) == 1:
                    assert f.mults[es[0]] >= 2
                for e in es:
                    # F.E = 0 gives E.(F - m E) = m, and a (-1)-curve meets at most two others
                    assert sum(f.mults[j] for j in f.adjacency[e]) == f.mults[e]
                    assert len(f.adjacency[e]) <= 2

    def test_unique_canonical_forms(self, fibers8):
        for level in fibers8.values():
            forms = [f.canonical_form for f in level]
            assert len(forms) == len(set(forms)) and forms == sorted(forms)

    def test_bound(self):
        with pytest.raises(FiberError):
            enumerate_fibers(10)
        assert enumerate_fibers(1) == {}
        assert len(all_fibers(4)) == 1 + 2 + 5


class TestConfig:
    def test_make_is_canonical(self):
        a = FiberConfig.make([-1, -2, -1], [1, 1, 1], [(0, 1), (1, 2)])
        b = FiberConfig.make([-2, -1, -1], [1, 1, 1], [(0, 2), (0, 1)])
        assert a == b

    def test_rejects_cycle(self):
        with pytest.raises(FiberError):
            FiberConfig.make([-2, -2, -2], [1, 1, 1], [(0, 1), (1, 2), (0, 2)])
        with pytest.raises(FiberError):
            FiberConfig.make([-2, -2], [1, 1], [])
        with pytest.raises(FiberError):
            FiberConfig.make([-2], [1], [(0, 0)])
        with pytest.raises(FiberError):
            FiberConfig.make([], [], [])

    def test_check_rejects(self):
        with pytest.raises(FiberError):
            FiberConfig.make([-1, -1], [1, 2], [(0, 1)]).check()

    def test_parse_print_round_trip(self, fibers8):
        for level in fibers8.values():
            for f in level:
                assert FiberConfig.parse(f.to_expression()) == f

    def test_parse_branch(self):
        f = FiberConfig.parse("A(-2,1) - {E1(-1,1), B(-3,1) - E2(-1,2)}")
        assert len(f) == 4 and len(f.edges) == 3

    @pytest.mark.parametrize("text", ["A(-2,1) -", "A(-2,1) B(-1,1)", "A(-2)", "A(-2,1) - {B(-1,1)"])
    def test_parse_errors(self, text):
        with pytest.raises((FiberError, IndexError)):
            FiberConfig.parse(text)

    def test_shape_d2(self):
        f = FiberConfig.parse(SHAPE_D2)
        f.check()
        assert sorted(f.mults) == [1, 1, 1, 2]


class TestBudget:
    def test_layouts_exact(self):
        assert all(s == 2 and t == 1 for s, t in THREE_HORIZONTALS.layouts())

    def test_layouts_free(self):
        lay = set(FOUR_HORIZONTALS.layouts())
        assert (4, 0) in lay and (3, 1) in lay and (0, 0) in lay
        assert all(s + t <= 4 for s, t in lay)

    def test_bad_budget(self):
        with pytest.raises(ValueError):
            HorizontalBudget(2, 1, 2, exact=True)
        with pytest.raises(ValueError):
            HorizontalBudget(2, 2, 4)


@pytest.fixture(scope="module")
def fibers9():
    return all_fibers(9)


class TestLemmas:
    def test_d2_three(self, fibers9):
        items = fibers_containing([Chain((3,))], THREE_HORIZONTALS, fibers=fibers9)
        assert [it.expression for it in items] == [SHAPE_D2]
        assert d2_case(items[0]) == "1"
        assert set().union(*items[0].piece_labels.values()) == {"D1"}

    def test_d2_four(self, fibers9):
        raw = fibers_containing([Chain((3,))], FOUR_HORIZONTALS, fibers=fibers9)
        # one witness per fibre; a fibre can hold the (-3)-curve at several places
        items = list({it.fiber.canonical_form: it for it in raw}.values())
        cases = [d2_case(it) for it in items]
        assert None not in cases
        assert cases.count("1") == 1 and cases.count("2") == 105
        forms = {it.fiber.canonical_form for it in items}
        assert recursive_family(9) <= forms
        assert sum(in_recursive_family(it) for it in items) == 15
        assert all(b_squared(it) == -2 for it in items)

    def test_recursive_family_small(self):
        fam = recursive_family(6)
        assert FiberConfig.parse(SHAPE_D2).canonical_form in fam
        assert len(fam) == 2

    def test_order5(self, fibers9):
        assert len(fibers_containing([Chain((2, 2, 2, 2))], fibers=fibers9)) == 1
        assert len(fibers_containing([Chain((2, 3))], fibers=fibers9)) == 1
        assert fibers_containing([Chain((5,))], fibers=fibers9) == []

    def test_secondary_fragment_filter(self, fibers9):
        assert fibers_containing([Chain((3,)), Chain((7,))], fibers=fibers9) == []

    def test_witness_json(self, fibers9):
        (item,) = fibers_containing([Chain((2, 3))], fibers=fibers9)
        js = item.to_json()
        assert js["fiber"] == item.expression and "=" in js["hits"]

    def test_needs_fragment(self):
        with pytest.raises(ValueError):
            fibers_containing([])

    def test_verify_all(self):
        cases = verify_fiber_lemmas(9)
        assert all(c.ok for c in cases), [c.to_json() for c in cases if not c.ok]
        assert cases[0].info["shape_2_outside_recursion"] == 90

import random
from fractions import Fraction
from itertools import product

import pytest

from qhpp import linalg
from qhpp.hj import Chain
from qhpp.surface import (
    Basket,
    BasketError,
    ChainConstraints,
    Verdict,
    arithmetic_obstructions,
    bmy_gate,
    bmy_verdict,
    enumerate_chains,
    is_perfect_square,
    k2_case_identities,
    k_squared,
    k_squared_via_discrepancies,
    l13_chain,
    l13_polynomials,
    odd_chain_basket,
    orbifold_euler,
    scan_corollary,
    surface_invariants,
)


class TestLinalg:
    def test_solve(self):
        assert linalg.solve([[2, 1], [1, 3]], [3, 5]) == [Fraction(4, 5), Fraction(7, 5)]

    def test_singular(self):
        with pytest.raises(linalg.SingularMatrixError):
            linalg.solve([[1, 2], [2, 4]], [1, 2])

    def test_needs_square(self):
        with pytest.raises(ValueError):
            linalg.solve([[1, 2]], [1])

    def test_determinant_with_swap(self):
        assert linalg.determinant([[0, 1], [1, 0]]) == -1
        assert linalg.determinant([[1, 2], [2, 4]]) == 0
        assert linalg.determinant([]) == 1

    def test_integer_path_matches_fraction_path(self):
        rng = random.Random(5)
        for _ in range(500):
            n = rng.randint(1, 6)
            m = [[rng.randint(-4, 4) for _ in range(n)] for _ in range(n)]
            b = [rng.randint(-4, 4) for _ in range(n)]
            if linalg.determinant(m) == 0:
                with pytest.raises(linalg.SingularMatrixError):
                    linalg.solve(m, b)
                continue
            x = linalg.solve(m, b)
            assert x == linalg.solve([[Fraction(v) for v in row] for row in m], b)
            assert [sum(a * xi for a, xi in zip(row, x)) for row in m] == b

    def test_quadratic_form(self):
        assert linalg.quadratic_form([[-2, 1], [1, -2]], [1, 1]) == -2


class TestBasket:
    def test_parse(self):
        b = Basket.parse("A1 + 1/3(1,1) + 1/5(1,2) + [2,3,2,3]")
        assert b.orders == (2, 3, 5, 19)
        assert b.L == 1 + 1 + 2 + 4

    def test_too_many(self):
        with pytest.raises(BasketError):
            Basket.parse("A1+A1+A1+A1+A1+A1")

    def test_validity(self):
        assert Basket.parse("A1+A1+A1+A3+A3", rational=False).validity() is None
        assert Basket.parse("A1+A1+A1+A3+A3").validity() is not None
        assert Basket.parse("A1+A1+A1+A3+A2", rational=False).validity() is not None

    def test_empty(self):
        b = Basket.parse("")
        assert k_squared(b) == 9
        assert orbifold_euler(b) == 3


class TestInvariants:
    def test_a8_basket(self):
        b = Basket.parse("A1 + 1/3(1,1) + 1/5(1,1) + A8")
        inv = surface_invariants(b)
        assert inv.k_squared == Fraction(2, 15)
        assert inv.e_orb == Fraction(13, 90)
        assert bmy_gate(b) is Verdict.PASS

    def test_fail_upper_example(self):
        b = Basket.parse("A1 + 1/3(1,1) + A4 + [2,3,2,3]")
        assert k_squared(b) == Fraction(28, 57)
        assert 3 * orbifold_euler(b) == Fraction(49, 190)
        assert bmy_gate(b) is Verdict.FAIL_UPPER

    @pytest.mark.parametrize("text,k2", [
        ("A1 + 1/3(1,1) + 1/5(1,2) + 1/22(1,7)", Fraction(1, 165)),
        ("A1 + 1/3(1,1) + 1/5(1,2) + 1/33(1,13)", Fraction(2, 55)),
        ("A1 + 1/3(1,1) + 1/5(1,2) + 1/43(1,19)", Fraction(8, 645)),
    ])
    def test_l11_baskets_pass(self, text, k2):
        b = Basket.parse(text)
        assert b.L == 11
        assert k_squared(b) == k2
        assert bmy_gate(b) is Verdict.PASS

    def test_two_paths_exhaustive(self):
        for l in range(1, 5):
            for w in product(range(2, 6), repeat=l):
                b = Basket.of_chains(Chain((2,)), Chain(w))
                assert k_squared(b) == k_squared_via_discrepancies(b)

    def test_verdicts(self):
        assert bmy_verdict(Fraction(0), Fraction(1)) is Verdict.FAIL_POSITIVE
        assert bmy_verdict(Fraction(4), Fraction(1)) is Verdict.FAIL_UPPER
        assert bmy_verdict(Fraction(3), Fraction(1)) is Verdict.PASS

    def test_case_identities(self):
        for case in k2_case_identities(7):
            assert case.ok, case.failures
        deep = k2_case_identities(10, p3_only=(5,))
        assert all(c.ok and c.checked for c in deep)


class TestObstructions:
    def test_squares(self):
        assert is_perfect_square(49)
        assert not is_perfect_square(Fraction(1, 4))
        assert not is_perfect_square(-4)

    def test_orders(self):
        r = arithmetic_obstructions(Basket.parse("A1 + 1/3(1,1) + A4 + [2,3,2,3]"))
        assert r.pairwise_coprime and r.gcd30_ok
        r = arithmetic_obstructions(orders=(2, 3, 5, 25))
        assert r.gcd30_ok is False and r.obstructed

    def test_square_on_k2(self):
        r = arithmetic_obstructions(q=19, k_squared_value=Fraction(1, 19 * 30))
        assert r.square_value == 1 and r.square_ok

    def test_square_needs_q(self):
        with pytest.raises(ValueError):
            arithmetic_obstructions(k_squared_value=Fraction(1))
        with pytest.raises(ValueError):
            arithmetic_obstructions(q1=3)

    def test_square_forces_q_prime_to_30(self):
        # 30 (q1 + q) square and p | q for p in {2, 3, 5} would force p | q1
        seen = 0
        for l in range(1, 7):
            for w in product(range(2, 6), repeat=l):
                inv = Chain(w).invariants
                r = arithmetic_obstructions(q=inv.q, q1=inv.q1)
                if r.square_ok:
                    seen += 1
                    assert r.gcd30_ok
        assert seen


class TestScans:
    def test_l13_polynomials(self):
        for a, b, c in product(range(2, 9), repeat=3):
            inv = l13_chain(a, b, c).invariants
            assert l13_polynomials(a, b, c) == (inv.q1, inv.ql, inv.q)

    def test_l13(self):
        s10 = scan_corollary("L13_sum10")
        s11 = scan_corollary("L13_sum11")
        assert len(s10.records) == 15 and len(s11.records) == 21
        assert all(r.k2 < 0 for r in s10.records)
        assert all(r.verdict is Verdict.FAIL_UPPER for r in s11.records)
        assert all(r.bound == Fraction(3, int(l13_chain(**r.params).q)) + Fraction(1, 10) for r in s11.records)
        assert s10.confirmed and s11.confirmed

    def test_odd_chain(self):
        res = scan_corollary("odd_chain", {"l_min": 1, "l_max": 100})
        by_l = {r.params["l"]: r for r in res.records}
        assert by_l[8].verdict is Verdict.FAIL_UPPER
        assert by_l[8].k2 == Fraction(154, 255)
        assert all(by_l[l].k2 < 0 for l in range(9, 101))
        assert all(by_l[l].verdict is Verdict.EXCLUDED_BY_IMPORT for l in range(1, 8))
        assert res.confirmed

    def test_odd_chain_basket_shape(self):
        b = odd_chain_basket(5)
        assert b.chains[-1] == Chain((3, 2, 2, 2, 2))

    def test_odd_chain_bad_bounds(self):
        with pytest.raises(ValueError):
            scan_corollary("odd_chain", {"l_min": 5, "l_max": 2})

    def test_unknown(self):
        with pytest.raises(ValueError):
            scan_corollary("nope")


class TestEnumeration:
    def test_tr_relation(self):
        found = list(enumerate_chains(ChainConstraints(max_length=4, min_length=4, max_weight=5, tr_relation=(3, 2))))
        assert Chain((2, 3, 2, 3)) in found
        assert all(sum(c.weights) == 10 for c in found)

    def test_matches_brute_force(self):
        cons = ChainConstraints(max_length=3, max_weight=4, min_q=7)
        got = list(enumerate_chains(cons))
        want = [Chain(w) for l in range(1, 4) for w in product(range(2, 5), repeat=l) if Chain(w).q >= 7]
        assert got == want

    def test_partial_basket_l11(self):
        partial = Basket.parse("A1 + 1/3(1,1) + 1/5(1,2)")
        cons = ChainConstraints(max_length=7, max_weight=4, partial=partial, total_L=11, min_q=20)
        found = {c.weights for c in enumerate_chains(cons)}
        assert (4, 2, 2, 2, 2, 2, 2) in found
        assert (3, 3, 2, 2, 2, 2, 2) in found
        assert (3, 2, 2, 3, 2, 2, 2) in found

    def test_needs_bounds(self):
        with pytest.raises(ValueError):
            ChainConstraints(max_length=None, max_weight=3)

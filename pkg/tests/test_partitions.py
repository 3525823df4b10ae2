"""Partition statistics, special constructions, and the d-coefficients."""

import random
from fractions import Fraction

import pytest

from hermdens.partitions import (
    check_partition,
    conj_inner_product,
    conjugate,
    conjugate_part,
    d_coefficients,
    format_partition,
    mu_lk,
    parse_partition,
    stats,
    trailing_zeros,
    weight,
    xi_plus,
)
from hermdens.qalgebra import ONE, neg_q_power


def test_validation():
    assert check_partition([3, 2, 0]) == (3, 2, 0)
    with pytest.raises(ValueError):
        check_partition((1, 2))
    with pytest.raises(ValueError):
        check_partition((2, -1))
    with pytest.raises(ValueError):
        check_partition(())


def test_text_roundtrip():
    assert parse_partition("8,3,2") == (8, 3, 2)
    assert format_partition((3, 0)) == "3,0"
    assert parse_partition("3,0") != parse_partition("3")


def test_conjugate_part_examples():
    assert conjugate_part((4, 3), 4) == 1
    assert conjugate_part((4, 3), 5) == 0
    assert conjugate_part((2, 2, 0), 1) == 2


def test_stats_examples():
    assert stats((4, 3)) == (7, 3, (5, 4))
    assert stats((0, 0)) == (0, 0, (1, 1))
    assert stats((2, 1, 0)) == (3, 1, (3, 2, 1))


def test_conj_inner_product_examples():
    assert conj_inner_product((1,), (1,)) == 1
    assert conj_inner_product((0, 0), (3, 2)) == 0
    # (2,1)' = (2,1), (2,2)' = (2,2): 2*2 + 1*2 = 6
    assert conj_inner_product((2, 1), (2, 2)) == 6


def test_xi_plus_examples():
    assert xi_plus((4, 3, 0, 0), 1, 1) == (4, 3, 2, 1)
    assert xi_plus((4, 1, 0, 0), 2, 0) == (4, 2, 2, 1)
    assert xi_plus((4, 3, 0, 0), 0, 0) == (4, 3, 0, 0)
    with pytest.raises(ValueError):
        xi_plus((4, 3, 0, 0), 2, 1)


def test_mu_lk_examples():
    assert mu_lk((3, 2), 2, 1, 4) == (3, 2, 1, 0)
    assert mu_lk((), 2, 2, 2) == (1, 1)
    assert mu_lk((2,), 0, 0, 1) == (2,)
    with pytest.raises(ValueError):
        mu_lk((1, 2), 1, 0, 3)


def test_d_coefficients_examples():
    for n in (1, 2, 3, 5):
        for s in range(1, n + 1):
            assert d_coefficients(n, s)[0] == ONE
    for n in (1, 2, 4):
        assert d_coefficients(n, 1)[1] == -neg_q_power(-n)
    for n in (2, 3, 5):
        assert d_coefficients(n, 2)[2] == neg_q_power(-(2 * n - 1))
    with pytest.raises(ValueError):
        d_coefficients(2, 3)


def test_d_coefficients_defining_product():
    # sum_i d_i z^i equals prod_j (1 - (-q)^(-n+j) z) numerically at q = 3
    q0 = Fraction(3)
    for n, s in ((2, 2), (3, 1), (4, 3), (5, 5)):
        ds = [c.evaluate_at(q0) for c in d_coefficients(n, s)]
        for z in (Fraction(1), Fraction(-3), Fraction(9)):
            lhs = sum(d * z ** i for i, d in enumerate(ds))
            rhs = Fraction(1)
            for j in range(s):
                rhs *= 1 - Fraction(-3) ** (-n + j) * z
            assert lhs == rhs, (n, s, z)


def test_conjugation_involution():
    rng = random.Random(11)
    for _ in range(200):
        n = rng.randint(1, 8)
        lam = tuple(sorted((rng.randint(0, 8) for _ in range(n)), reverse=True))
        cc = conjugate(conjugate(lam))
        padded = cc + (0,) * (len(lam) - len(cc))
        assert padded == lam, lam


def test_weight_equals_conjugate_sum():
    rng = random.Random(12)
    for _ in range(100):
        n = rng.randint(1, 6)
        lam = tuple(sorted((rng.randint(0, 9) for _ in range(n)), reverse=True))
        assert weight(lam) == sum(conjugate(lam))


def test_xi_plus_always_valid():
    rng = random.Random(13)
    for _ in range(200):
        n = rng.randint(1, 6)
        s = rng.randint(1, n)
        head = tuple(sorted((rng.randint(1, 6) for _ in range(n - s)), reverse=True))
        xi = head + (0,) * s
        a = rng.randint(0, s)
        b = rng.randint(0, s - a)
        out = xi_plus(xi, a, b)
        check_partition(out)
        assert len(out) == n
        assert weight(out) == weight(xi) + 2 * a + b
        assert trailing_zeros(out) == s - a - b

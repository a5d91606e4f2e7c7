import math
from fractions import Fraction

import numpy as np
import pytest

from flatsum.arith import factorize
from flatsum.characters import character_info, enumerate_characters, jacobi_character, principal_character
from flatsum.errors import BadDelta, BadThreshold, ModulusMismatch, UnsupportedModulus
from flatsum.flatnum import (
    flat_set,
    fourier_w_star,
    salie_w_star,
    w_star_sum,
    w_sum,
    zhang_count,
)


def brute_flat(q, h):
    out = []
    for n in range(1, q + 1):
        if math.gcd(n, q) == 1:
            nbar = pow(n, -1, q) or q
            if abs(n - nbar) <= h:
                out.append(n)
    return out


def brute_w_star(chi, h, q):
    total = 0j
    for n in range(1, q + 1):
        if math.gcd(n, q) == 1:
            nbar = pow(n, -1, q)
            for t in range(1, h + 1):
                if (n - nbar - t) % q == 0:
                    total += chi(n)
    return total


def grid(q):
    return sorted({1, q // 4, q // 2, q} - {0})


# ---- flat_set ---------------------------------------------------------------

def test_flat_set_examples():
    assert flat_set(7, 1).members == (1, 6)
    assert flat_set(5, 2).members == (1, 2, 3, 4)
    assert flat_set(17, 4).members == (1, 3, 5, 6, 7, 10, 11, 12, 14, 16)
    for q in (2, 9, 30):
        assert list(flat_set(q, q).members) == [n for n in range(1, q) if math.gcd(n, q) == 1]


def test_flat_set_json():
    assert flat_set(7, 1).to_json() == {"q": 7, "h": 1, "members": [1, 6]}


@pytest.mark.parametrize("q, h", [(7, -1), (7, 8), (1, 0)])
def test_flat_set_bad_threshold(q, h):
    with pytest.raises(BadThreshold):
        flat_set(q, h)


def test_flat_set_matches_brute_force():
    for q in range(2, 200):
        for h in (0, 1, min(2.5, q), q / 3, q // 2, q):
            assert list(flat_set(q, h).members) == brute_flat(q, h)


def test_flat_set_closure():
    for q in range(2, 1001):
        for h in sorted({1, q // 8, q // 4, q // 2, q}):
            members = set(flat_set(q, h).members)
            for n in members:
                assert q - n in members
                assert (pow(n, -1, q) or q) in members
                assert math.gcd(n, q) == 1


def test_flat_set_monotone():
    for q in range(2, 300):
        previous = set()
        for h in np.linspace(0, q, 13):
            current = set(flat_set(q, float(h)).members)
            assert previous <= current
            previous = current


# ---- w_sum ------------------------------------------------------------------

def test_w_sum_examples():
    assert w_sum(jacobi_character(17), 4, 17).w == pytest.approx(-6)
    for q in (10, 17, 36):
        assert w_sum(principal_character(q), q, q).w == pytest.approx(factorize(q).phi)


def test_w_sum_bounded_by_flat_count():
    for q in (15, 16, 29):
        for chi in enumerate_characters(q):
            for h in grid(q):
                assert abs(w_sum(chi, h, q)) <= len(flat_set(q, h)) + 1e-9


def test_w_sum_vanishes_for_odd_characters():
    for q in range(3, 501):
        for chi in enumerate_characters(q):
            if chi(q - 1).real < 0:
                for h in grid(q):
                    assert abs(w_sum(chi, h, q).w) < 1e-9
    assert character_info(enumerate_characters(7)[1]).parity == -1


def test_w_sum_mismatch():
    with pytest.raises(ModulusMismatch):
        w_sum(principal_character(5), 2, 7)


# ---- w_star_sum ---------------------------------------------------------------

def test_w_star_examples():
    chi = jacobi_character(17)
    assert w_star_sum(chi, 4, 17).w == pytest.approx(-4)
    assert brute_w_star(chi, 4, 17) == pytest.approx(-4)
    for chi in enumerate_characters(12)[1:]:
        assert abs(w_star_sum(chi, 12, 12).w) < 1e-12
    assert w_star_sum(principal_character(12), 12, 12).w == pytest.approx(4)


@pytest.mark.parametrize("h", [0, 18, 2.5])
def test_w_star_threshold(h):
    with pytest.raises(BadThreshold):
        w_star_sum(jacobi_character(17), h, 17)


def test_w_star_matches_brute_force():
    for q in range(2, 60):
        for chi in enumerate_characters(q)[:4]:
            for h in grid(q):
                assert abs(w_star_sum(chi, h, q).w - brute_w_star(chi, h, q)) < 1e-9


# ---- fourier_w_star -----------------------------------------------------------

def test_fourier_examples():
    assert fourier_w_star(jacobi_character(17), 4, 17).w == pytest.approx(-4, abs=1e-9)
    for chi in enumerate_characters(5)[1:]:
        assert fourier_w_star(chi, 2, 5).w == pytest.approx(brute_w_star(chi, 2, 5), abs=1e-9)
    for chi in enumerate_characters(11)[1:]:
        assert abs(fourier_w_star(chi, 11, 11).w) < 1e-9


def test_fourier_identity_small():
    for q in range(2, 80):
        for chi in enumerate_characters(q)[1:]:
            for h in grid(q):
                assert abs(fourier_w_star(chi, h, q).w - w_star_sum(chi, h, q).w) < 1e-7 * q


# ---- salie_w_star -------------------------------------------------------------

def test_salie_w_star_examples():
    assert salie_w_star(4, 17).w == pytest.approx(-4, abs=1e-9)
    for h in (1, 5, 21):
        assert salie_w_star(h, 21).w == 0
        assert w_star_sum(jacobi_character(21), h, 21).w == 0
    for q in (5, 13, 65):
        assert abs(salie_w_star(q, q).w) < 1e-9


@pytest.mark.parametrize("q", [18, 9, 45])
def test_salie_w_star_unsupported(q):
    with pytest.raises(UnsupportedModulus):
        salie_w_star(1, q)


def test_salie_w_star_identity():
    for q in range(3, 501, 2):
        if not factorize(q).is_squarefree:
            continue
        chi = jacobi_character(q)
        for h in grid(q):
            assert abs(salie_w_star(h, q).w - w_star_sum(chi, h, q).w) < 1e-7 * q


# ---- zhang_count --------------------------------------------------------------

def test_zhang_examples():
    assert zhang_count(17, 0.25) == (10, pytest.approx(7.0), pytest.approx(3.0))
    count, main, err = zhang_count(7, 0.2)
    assert count == 2 and main == pytest.approx(2.16) and err == pytest.approx(-0.16)
    assert zhang_count(7, "0.2").count == 2


def test_zhang_delta_one_exact():
    for q in range(2, 2001):
        count, main, err = zhang_count(q, 1)
        assert count == factorize(q).phi and err == 0
        assert zhang_count(q, 1.0).error == 0


def test_zhang_exact_ties():
    # threshold 0.1*30 = 3 lands on an integer gap; the float 0.1*30 is 3.0000000000000004
    exact = zhang_count(30, Fraction(1, 10)).count
    assert exact == zhang_count(30, "0.1").count == len(brute_flat(30, 3))


@pytest.mark.parametrize("delta", [0, -0.5, 1.5, "2"])
def test_zhang_bad_delta(delta):
    with pytest.raises(BadDelta):
        zhang_count(17, delta)


def test_zhang_matches_flat_set():
    for q in range(2, 300):
        for k in range(1, 11):
            assert zhang_count(q, Fraction(k, 10)).count == len(brute_flat(q, Fraction(k, 10) * q))

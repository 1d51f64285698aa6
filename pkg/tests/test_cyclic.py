from __future__ import annotations

from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qsync.cyclic import (
    CyclicCode,
    SyndromeDecoder,
    bch_code,
    bch_generator,
    contains,
    dual,
    is_dual_containing,
    min_distance_bruteforce,
    row_reduce,
)
from qsync.gf2 import BitPoly, factor_xn_minus_1, field_for, xn_minus_1

P = BitPoly.parse
HAMMING = CyclicCode(7, P("x^3+x+1"))


# --- independent oracles -----------------------------------------------------


def codeword_matrix(code: CyclicCode) -> np.ndarray:
    """Every codeword as a 0/1 row, via messages x generator matrix over the integers."""
    G = np.array([[(r >> i) & 1 for i in range(code.n)] for r in code.generator_rows], dtype=np.int64)
    msgs = (np.arange(1 << code.k)[:, None] >> np.arange(code.k)) & 1
    return (msgs @ G) % 2


def as_ints(rows: np.ndarray) -> set[int]:
    return {int(sum(int(b) << i for i, b in enumerate(r))) for r in rows}


def dual_by_inner_products(code: CyclicCode) -> set[int]:
    words = list(code.codewords())
    return {v for v in range(1 << code.n) if all((v & w).bit_count() % 2 == 0 for w in words)}


def lightest_multiple_of(g: BitPoly, n: int, max_w: int) -> int | None:
    """Smallest weight of a nonzero length-n word divisible by g, searched directly."""
    for w in range(1, max_w + 1):
        for pos in combinations(range(n), w):
            if g.divides(BitPoly.from_exponents(pos)):
                return w
    return None


def all_divisors(n: int) -> list[BitPoly]:
    factors = factor_xn_minus_1(n)
    out = []
    for mask in range(1 << len(factors)):
        d = BitPoly(1)
        for i, f in enumerate(factors):
            if mask >> i & 1:
                d = d * f
        out.append(d)
    return out


# --- basic codes -------------------------------------------------------------


def test_hamming_code():
    assert HAMMING.k == 4
    words = list(HAMMING.codewords())
    assert len(set(words)) == 16
    assert min_distance_bruteforce(HAMMING) == 3 == HAMMING.distance
    assert HAMMING.h == P("x^4+x^2+x+1")
    assert all(HAMMING.syndrome(w) == 0 for w in words)


def test_trivial_codes():
    full = CyclicCode(7, BitPoly(1))
    assert full.k == 7 and full.distance == 1 and full.radius == 0
    zero = CyclicCode(7, xn_minus_1(7))
    assert zero.k == 0 and list(zero.codewords()) == [0]
    assert zero.distance is None
    with pytest.raises(ValueError):
        min_distance_bruteforce(zero)
    assert dual(full) == zero and dual(zero) == full


def test_invalid_generator_rejected():
    with pytest.raises(ValueError):
        CyclicCode(7, P("x^2+1"))
    with pytest.raises(ValueError):
        CyclicCode(7, BitPoly(0))


def test_dual_of_hamming_is_simplex():
    d = dual(HAMMING)
    assert d.k == 3
    assert set(d.codewords()) == dual_by_inner_products(HAMMING)
    assert {w.bit_count() for w in d.codewords()} == {0, 4}


@pytest.mark.parametrize("n", [3, 5, 7, 9, 15])
def test_dual_matches_inner_products_and_is_involutive(n):
    for g in all_divisors(n):
        code = CyclicCode(n, g)
        d = dual(code)
        assert d.k == n - code.k
        assert dual(d) == code
        if n <= 9:
            assert set(d.codewords()) == dual_by_inner_products(code)


@pytest.mark.parametrize("n", [3, 5, 7, 9, 15])
def test_containment_matches_subset_check(n):
    codes = [CyclicCode(n, g) for g in all_divisors(n)]
    words = {c.g: set(c.codewords()) for c in codes}
    for outer in codes:
        for inner in codes:
            assert contains(outer, inner) == (words[inner.g] <= words[outer.g])
        perp = set(dual(outer).codewords())
        assert is_dual_containing(outer) == (perp <= words[outer.g])


def test_length_mismatch_rejected():
    with pytest.raises(ValueError):
        contains(HAMMING, CyclicCode(15, BitPoly(1)))


# --- parity checks ------------------------------------------------------------


@pytest.mark.parametrize("code", [HAMMING, bch_code(4, 5), bch_code(5, 7)], ids=str)
def test_parity_check_is_full_rank_and_annihilates(code):
    H = code.parity_check
    assert H.shape == (code.n - code.k, code.n)
    assert H.rank() == code.n - code.k
    arr = H.to_array()
    for w in code.generator_rows:
        v = np.array([(w >> i) & 1 for i in range(code.n)])
        assert not ((arr @ v) % 2).any()


@settings(max_examples=100)
@given(st.integers(0, (1 << 31) - 1))
def test_syndrome_zero_iff_codeword(word):
    code = bch_code(5, 5)
    assert (code.syndrome(word) == 0) == code.contains_word(word)


@settings(max_examples=100)
@given(st.integers(0, (1 << 21) - 1), st.integers(0, 30))
def test_cyclic_shift_closure(message, a):
    code = bch_code(5, 5)
    c = code.encode(message)
    shifted = ((c << a) | (c >> (31 - a))) & ((1 << 31) - 1)
    assert code.contains_word(shifted)


def test_row_reduce_spans_same_space():
    rows = [0b1011, 0b0110, 0b1101, 0b1011 ^ 0b0110]
    basis = row_reduce(rows)
    assert len(basis) == 2
    span = {0}
    for b in basis:
        span |= {s ^ b for s in span}
    assert span == {0, 0b1011, 0b0110, 0b1101}


# --- BCH --------------------------------------------------------------------


@pytest.mark.parametrize("d,k", [(3, 26), (5, 21), (7, 16), (9, 11), (11, 11), (13, 6), (15, 6)])
def test_bch_dimensions_m5(d, k):
    assert bch_code(5, d).k == k


@pytest.mark.parametrize("m,d", [(3, 3), (4, 3), (4, 5), (4, 7), (5, 3), (5, 5), (5, 7), (6, 5)])
def test_bch_roots_are_consecutive_powers(m, d):
    gf = field_for(m)
    g = bch_generator(m, d)
    for j in range(1, d):
        assert gf.evaluate(g, gf.alpha_pow(j)) == 0


@pytest.mark.parametrize("m,d", [(4, 3), (4, 5), (4, 7), (5, 7), (5, 11)])
def test_bch_distance_by_codeword_enumeration(m, d):
    code = bch_code(m, d)
    weights = codeword_matrix(code).sum(axis=1)
    oracle = int(weights[1:].min())
    assert oracle >= d
    assert min_distance_bruteforce(code) == oracle


@pytest.mark.parametrize("m,d", [(5, 3), (5, 5)])
def test_high_rate_distance_by_direct_divisibility(m, d):
    code = bch_code(m, d)
    assert min_distance_bruteforce(code) == lightest_multiple_of(code.g, code.n, d) == d


def test_bch_rejects_bad_parameters():
    for m, d in [(2, 3), (5, 4), (5, 1), (5, 33)]:
        with pytest.raises(ValueError):
            bch_code(m, d)


def test_descriptor_round_trip():
    code = bch_code(5, 7)
    desc = code.to_descriptor()
    assert desc["k"] == 16 and desc["distance"] == {"value": 7, "kind": "computed"}
    assert CyclicCode.from_descriptor(desc) == code
    bad = {**desc, "k": 15}
    with pytest.raises(ValueError):
        CyclicCode.from_descriptor(bad)


# --- decoding ---------------------------------------------------------------


@pytest.mark.parametrize("code", [HAMMING, bch_code(4, 5), bch_code(5, 5), bch_code(5, 7)], ids=str)
def test_decoder_recovers_every_error_within_radius(code):
    dec = SyndromeDecoder.build(code)
    t = code.radius
    rng = np.random.default_rng(code.n * 100 + code.k)
    msgs = rng.integers(0, 1 << code.k, size=3)
    for w in range(t + 1):
        for pos in combinations(range(code.n), w):
            e = sum(1 << p for p in pos)
            for m in msgs:
                c = code.encode(int(m))
                assert dec.correct(c ^ e) == e


def test_decoder_refuses_radius_beyond_unique_decoding():
    with pytest.raises(ValueError):
        SyndromeDecoder.build(HAMMING, t=2)


def test_decoder_reports_uncorrectable():
    dec = SyndromeDecoder.build(bch_code(4, 5))
    # a [15,7] t=2 code has 2^8 syndromes but only 121 leaders of weight <= 2
    misses = sum(dec.decode(s) is None for s in range(1 << 8))
    assert misses == 256 - 121


def test_distance_out_of_budget_falls_back_to_designed():
    code = bch_code(6, 7)  # [63,45]: neither 2^45 codewords nor the weight-7 shells fit
    assert code.distance is None
    assert code.guaranteed_distance == 7 and code.radius == 3
    with pytest.raises(ValueError):
        min_distance_bruteforce(code)

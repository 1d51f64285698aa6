"""Binary cyclic codes: construction, duals, containment, BCH generators,
brute-force distances and table-driven bounded-distance decoding."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from math import comb
from typing import Iterator

import numpy as np

from qsync.gf2 import BitPoly, cyclotomic_cosets, field_for, minimal_polynomial, xn_minus_1

MAX_ENUM_DIMENSION = 24
MAX_DECODER_TABLE = 2_000_000


def row_reduce(rows) -> list[int]:
    """Reduced row echelon basis of the GF(2) span of integer bit-rows.

    Each returned row has a distinct leading (highest) bit that is clear in
    every other row. Rows are sorted by leading bit, highest first.
    """
    basis: list[int] = []
    for r in rows:
        for b in basis:
            r = min(r, r ^ b)
        if r:
            # keep the basis fully reduced against the new pivot
            top = 1 << (r.bit_length() - 1)
            basis = [b ^ r if b & top else b for b in basis]
            basis.append(r)
    basis.sort(reverse=True)
    return basis


def reduce_against(word: int, basis: list[int]) -> int:
    for b in basis:
        word = min(word, word ^ b)
    return word


def parity(x: int) -> int:
    return x.bit_count() & 1


@dataclass(frozen=True)
class ParityCheckMatrix:
    """Full-rank parity-check matrix; rows are n-bit integers."""

    n: int
    rows: tuple[int, ...]

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), self.n

    def syndrome(self, word: int) -> int:
        """H.word as an integer, bit j = parity of row j against ``word``."""
        s = 0
        for j, row in enumerate(self.rows):
            s |= ((row & word).bit_count() & 1) << j
        return s

    def rank(self) -> int:
        return len(row_reduce(self.rows))

    def to_array(self) -> np.ndarray:
        return np.array([[(r >> i) & 1 for i in range(self.n)] for r in self.rows], dtype=np.uint8).reshape(
            len(self.rows), self.n
        )


@dataclass(frozen=True)
class CyclicCode:
    """Cyclic [n, k] code generated by g(x) | x^n - 1."""

    n: int
    g: BitPoly
    designed_distance: int | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("code length must be positive")
        if self.g.is_zero():
            raise ValueError("generator must be nonzero")
        if not self.g.divides(xn_minus_1(self.n)):
            raise ValueError(f"generator {self.g} does not divide x^{self.n}-1")

    @property
    def k(self) -> int:
        return self.n - self.g.degree

    @cached_property
    def h(self) -> BitPoly:
        """Check polynomial (x^n - 1)/g."""
        return xn_minus_1(self.n) // self.g

    @cached_property
    def generator_rows(self) -> tuple[int, ...]:
        return tuple(self.g.bits << i for i in range(self.k))

    @cached_property
    def parity_check(self) -> ParityCheckMatrix:
        # shifts of the reciprocal check polynomial span the dual
        hr = self.h.reciprocal(self.k).bits
        rows = [hr << i for i in range(self.n - self.k)]
        reduced = row_reduce(rows)
        if len(reduced) != self.n - self.k:
            raise ArithmeticError("parity-check rows are not independent")
        return ParityCheckMatrix(self.n, tuple(reduced))

    def encode(self, message: int) -> int:
        """Non-systematic encoding i(x) -> i(x) g(x) for deg i < k."""
        if message >> self.k:
            raise ValueError("message has more than k bits")
        return (BitPoly(message) * self.g).bits

    def contains_word(self, word: int) -> bool:
        if word >> self.n:
            return False
        return self.g.divides(BitPoly(word))

    def syndrome(self, word: int) -> int:
        return self.parity_check.syndrome(word)

    def codewords(self) -> Iterator[int]:
        """All 2^k codewords (intended for small k)."""
        if self.k > MAX_ENUM_DIMENSION:
            raise ValueError(f"k={self.k} exceeds enumeration budget {MAX_ENUM_DIMENSION}")
        words = [0]
        for row in self.generator_rows:
            words += [w ^ row for w in words]
        return iter(words)

    @cached_property
    def distance(self) -> int | None:
        """Exact minimum distance, or ``None`` when out of enumeration budget."""
        if self.k == 0:
            return None
        try:
            return min_distance_bruteforce(self)
        except ValueError:
            return None

    @property
    def guaranteed_distance(self) -> int | None:
        return self.distance if self.distance is not None else self.designed_distance

    @property
    def radius(self) -> int:
        d = self.guaranteed_distance
        return 0 if d is None else (d - 1) // 2

    def to_descriptor(self) -> dict:
        desc = {
            "n": self.n,
            "k": self.k,
            "generator_hex": self.g.to_hex(),
            "generator_pretty": str(self.g),
        }
        if self.distance is not None:
            desc["distance"] = {"value": self.distance, "kind": "computed"}
        elif self.designed_distance is not None:
            desc["distance"] = {"value": self.designed_distance, "kind": "designed"}
        return desc

    @classmethod
    def from_descriptor(cls, desc: dict) -> CyclicCode:
        designed = None
        dist = desc.get("distance")
        if dist and dist.get("kind") == "designed":
            designed = int(dist["value"])
        code = cls(int(desc["n"]), BitPoly.from_hex(desc["generator_hex"]), designed)
        if "k" in desc and int(desc["k"]) != code.k:
            raise ValueError(f"descriptor k={desc['k']} disagrees with generator (k={code.k})")
        return code

    def __str__(self) -> str:
        return f"[{self.n},{self.k}] cyclic code g={self.g}"


def from_generator(n: int, g: BitPoly) -> CyclicCode:
    return CyclicCode(n, g)


def dual(code: CyclicCode) -> CyclicCode:
    """Dual code, generated by the reciprocal x^k h(1/x) of the check polynomial."""
    return CyclicCode(code.n, code.h.reciprocal(code.k))


def contains(outer: CyclicCode, inner: CyclicCode) -> bool:
    if outer.n != inner.n:
        raise ValueError(f"length mismatch: {outer.n} != {inner.n}")
    return outer.g.divides(inner.g)


def is_dual_containing(code: CyclicCode) -> bool:
    if 2 * code.k < code.n:
        return False
    return contains(code, dual(code))


def bch_generator(m: int, designed_distance: int) -> BitPoly:
    gf = field_for(m)
    n = gf.order
    wanted = set(range(1, designed_distance))
    g = BitPoly(1)
    for coset in cyclotomic_cosets(n):
        if wanted.intersection(coset):
            g = g * minimal_polynomial(gf, coset[0])
    return g


def bch_code(m: int, designed_distance: int) -> CyclicCode:
    """Primitive narrow-sense BCH code of length 2^m - 1.

    The generator is the lcm of the minimal polynomials of alpha, ..., alpha^(d-1),
    i.e. the product over each cyclotomic coset that meets {1, ..., d-1}.
    """
    if m < 3:
        raise ValueError("BCH construction requires m >= 3")
    n = (1 << m) - 1
    d = designed_distance
    if d < 3 or d % 2 == 0 or d > n:
        raise ValueError(f"designed distance must be odd with 3 <= d <= {n}, got {d}")
    return CyclicCode(n, bch_generator(m, d), designed_distance=d)


def min_distance_bruteforce(code: CyclicCode, max_dimension: int = MAX_ENUM_DIMENSION) -> int:
    """Minimum weight over the 2^k - 1 nonzero codewords.

    Low-order message bits are expanded into a lookup table; the high-order
    ones are walked in Gray-code order so each step XORs a single row.
    """
    k = code.k
    if k == 0:
        raise ValueError("the zero code has no nonzero codewords")
    if k > max_dimension:
        return _min_distance_low_weight(code, budget=1 << max_dimension)
    rows = code.generator_rows
    if code.n > 64:
        best = code.n
        word = 0
        for i in range(1, 1 << k):
            word ^= rows[(i & -i).bit_length() - 1]
            best = min(best, word.bit_count())
        return best

    low = min(k, 16)
    table = np.zeros(1, dtype=np.uint64)
    for row in rows[:low]:
        table = np.concatenate([table, table ^ np.uint64(row)])
    weights = np.bitwise_count(table)
    best = int(weights[1:].min()) if len(weights) > 1 else code.n
    high_rows = rows[low:]
    offset = 0
    for i in range(1, 1 << len(high_rows)):
        offset ^= high_rows[(i & -i).bit_length() - 1]
        best = min(best, int(np.bitwise_count(table ^ np.uint64(offset)).min()))
        if best == 1:
            break
    return best


def _min_distance_low_weight(code: CyclicCode, budget: int) -> int:
    """Smallest w such that some weight-w vector has zero syndrome.

    Used for high-rate codes where 2^k codewords are out of reach but the
    weight-w shells up to the distance are small.
    """
    if code.designed_distance is not None:
        # the search cannot stop before the designed distance, so fail fast
        needed = sum(comb(code.n, w) for w in range(1, code.designed_distance + 1))
        if needed > budget:
            raise ValueError(f"distance search needs at least {needed} vectors (budget {budget})")
    H = code.parity_check
    spent = 0
    for w in range(1, code.n + 1):
        spent += comb(code.n, w)
        if spent > budget:
            raise ValueError(
                f"distance search exceeds the enumeration budget of {budget} vectors "
                f"(k={code.k}, weight {w} shell has {comb(code.n, w)} vectors)"
            )
        for positions in combinations(range(code.n), w):
            e = 0
            for p in positions:
                e |= 1 << p
            if H.syndrome(e) == 0:
                return w
    raise ArithmeticError("no nonzero codeword found")


@dataclass(frozen=True)
class SyndromeDecoder:
    """Bounded-distance decoder backed by a syndrome -> coset-leader table."""

    code: CyclicCode
    t: int
    table: dict[int, int] = field(repr=False, compare=False)

    @classmethod
    def build(cls, code: CyclicCode, t: int | None = None) -> SyndromeDecoder:
        if t is None:
            t = code.radius
        if t < 0:
            raise ValueError("correction radius must be nonnegative")
        size = sum(comb(code.n, i) for i in range(t + 1))
        if size > MAX_DECODER_TABLE:
            raise ValueError(f"decoder table would hold {size} entries (budget {MAX_DECODER_TABLE})")
        H = code.parity_check
        table: dict[int, int] = {}
        for w in range(t + 1):
            for positions in combinations(range(code.n), w):
                e = 0
                for p in positions:
                    e |= 1 << p
                s = H.syndrome(e)
                if s in table:
                    raise ValueError(f"radius t={t} exceeds the code's unique-decoding radius")
                table[s] = e
        return cls(code, t, table)

    def decode(self, syndrome: int) -> int | None:
        """Coset leader of weight <= t, or ``None`` when no such leader exists."""
        return self.table.get(syndrome)

    def correct(self, word: int) -> int | None:
        """Error estimate for a received word."""
        return self.decode(self.code.syndrome(word))


def decode_bounded(dec: SyndromeDecoder, received_syndrome: int) -> int | None:
    return dec.decode(received_syndrome)

"""Arithmetic over GF(2): plain polynomials, the cyclic ring GF(2)[x]/(x^n - 1),
and the extension fields GF(2^m) used to build BCH generators.

Polynomials are stored as nonnegative integers: bit ``i`` is the coefficient
of ``x^i``. This is the only coefficient ordering used anywhere in the
package, for polynomials, bit vectors and qubit registers alike.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property, lru_cache

# One fixed primitive polynomial per extension degree (x^m term included).
PRIMITIVE_POLYS: dict[int, int] = {
    2: 0b111,  # x^2+x+1
    3: 0b1011,  # x^3+x+1
    4: 0b10011,  # x^4+x+1
    5: 0b100101,  # x^5+x^2+1
    6: 0b1000011,  # x^6+x+1
    7: 0b10001001,  # x^7+x^3+1
    8: 0b100011101,  # x^8+x^4+x^3+x^2+1
    9: 0b1000010001,  # x^9+x^4+1
    10: 0b10000001001,  # x^10+x^3+1
    11: 0b100000000101,  # x^11+x^2+1
    12: 0x1053,  # x^12+x^6+x^4+x+1
    13: 0x201B,  # x^13+x^4+x^3+x+1
    14: 0x4443,  # x^14+x^10+x^6+x+1
    15: 0x8003,  # x^15+x+1
    16: 0x1100B,  # x^16+x^12+x^3+x+1
}


def _mul(a: int, b: int) -> int:
    if a < b:
        a, b = b, a
    c = 0
    while b:
        if b & 1:
            c ^= a
        a <<= 1
        b >>= 1
    return c


def _divmod(a: int, b: int) -> tuple[int, int]:
    if b == 0:
        raise ZeroDivisionError("division by zero polynomial")
    db = b.bit_length()
    q = 0
    while a.bit_length() >= db:
        shift = a.bit_length() - db
        q ^= 1 << shift
        a ^= b << shift
    return q, a


def _mod(a: int, b: int) -> int:
    return _divmod(a, b)[1]


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, _mod(a, b)
    return a


def _reduce_cyclic(a: int, n: int) -> int:
    """Reduce modulo x^n - 1 by folding high bits back onto low ones."""
    mask = (1 << n) - 1
    while a >> n:
        a = (a & mask) ^ (a >> n)
    return a


@dataclass(frozen=True, order=False)
class BitPoly:
    """Polynomial over GF(2).

    >>> BitPoly.parse("x^3+x+1") * BitPoly.parse("x+1")
    BitPoly('x^4+x^3+x^2+1')
    """

    bits: int = 0

    def __post_init__(self):
        if self.bits < 0:
            raise ValueError("coefficient bitmask must be nonnegative")

    @classmethod
    def from_coeffs(cls, coeffs) -> BitPoly:
        return cls(sum(1 << i for i, c in enumerate(coeffs) if int(c) & 1))

    @classmethod
    def from_exponents(cls, exponents) -> BitPoly:
        bits = 0
        for e in exponents:
            bits ^= 1 << e
        return cls(bits)

    @classmethod
    def monomial(cls, e: int) -> BitPoly:
        return cls(1 << e)

    @classmethod
    def from_hex(cls, text: str) -> BitPoly:
        return cls(int(text, 16))

    @classmethod
    def parse(cls, text: str) -> BitPoly:
        """Parse ``"x^3+x+1"``-style sums, or ``0x``-prefixed hex."""
        text = text.replace(" ", "")
        if text.lower().startswith("0x"):
            return cls(int(text, 16))
        if text == "0":
            return cls(0)
        bits = 0
        for term in text.split("+"):
            m = re.fullmatch(r"1|x(?:\^(\d+))?", term)
            if m is None:
                raise ValueError(f"cannot parse polynomial term {term!r}")
            if term == "1":
                e = 0
            else:
                e = int(m.group(1)) if m.group(1) else 1
            bits ^= 1 << e
        return cls(bits)

    @property
    def degree(self) -> int | None:
        """Degree, or ``None`` for the zero polynomial."""
        return self.bits.bit_length() - 1 if self.bits else None

    @property
    def weight(self) -> int:
        return self.bits.bit_count()

    def is_zero(self) -> bool:
        return self.bits == 0

    def coeffs(self, length: int | None = None) -> list[int]:
        if length is None:
            length = max(self.bits.bit_length(), 1)
        return [(self.bits >> i) & 1 for i in range(length)]

    def __getitem__(self, i: int) -> int:
        return (self.bits >> i) & 1

    def __add__(self, other: BitPoly) -> BitPoly:
        return BitPoly(self.bits ^ other.bits)

    __sub__ = __add__

    def __mul__(self, other: BitPoly) -> BitPoly:
        return BitPoly(_mul(self.bits, other.bits))

    def __divmod__(self, other: BitPoly) -> tuple[BitPoly, BitPoly]:
        q, r = _divmod(self.bits, other.bits)
        return BitPoly(q), BitPoly(r)

    def __floordiv__(self, other: BitPoly) -> BitPoly:
        return divmod(self, other)[0]

    def __mod__(self, other: BitPoly) -> BitPoly:
        return divmod(self, other)[1]

    def __bool__(self) -> bool:
        return self.bits != 0

    def divides(self, other: BitPoly) -> bool:
        return _mod(other.bits, self.bits) == 0

    def reciprocal(self, degree: int | None = None) -> BitPoly:
        """x^degree * p(1/x); ``degree`` defaults to deg(p)."""
        if degree is None:
            degree = self.degree or 0
        out = 0
        for i in range(degree + 1):
            if (self.bits >> i) & 1:
                out |= 1 << (degree - i)
        return BitPoly(out)

    def to_hex(self) -> str:
        return format(self.bits, "x")

    def __str__(self) -> str:
        if not self.bits:
            return "0"
        terms = []
        for e in range(self.bits.bit_length() - 1, -1, -1):
            if (self.bits >> e) & 1:
                terms.append("1" if e == 0 else "x" if e == 1 else f"x^{e}")
        return "+".join(terms)

    def __repr__(self) -> str:
        return f"BitPoly('{self}')"


ONE = BitPoly(1)
X = BitPoly(2)


def xn_minus_1(n: int) -> BitPoly:
    return BitPoly((1 << n) | 1)


def poly_divmod(a: BitPoly, b: BitPoly) -> tuple[BitPoly, BitPoly]:
    """Return ``(q, r)`` with ``a = q*b + r`` and ``deg r < deg b``."""
    if b.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    return divmod(a, b)


def poly_gcd(a: BitPoly, b: BitPoly) -> BitPoly:
    return BitPoly(_gcd(a.bits, b.bits))


def poly_lcm(a: BitPoly, b: BitPoly) -> BitPoly:
    return (a * b) // poly_gcd(a, b)


def poly_powmod(base: BitPoly, e: int, mod: BitPoly) -> BitPoly:
    if e < 0:
        raise ValueError("negative exponent")
    result, b = 1, _mod(base.bits, mod.bits)
    while e:
        if e & 1:
            result = _mod(_mul(result, b), mod.bits)
        b = _mod(_mul(b, b), mod.bits)
        e >>= 1
    return BitPoly(_mod(result, mod.bits))


def x_pow_mod(e: int, f: BitPoly, n: int) -> BitPoly:
    """x^e mod f for -n < e < n, using x^n = 1 (mod f) for negative e."""
    if not f.divides(xn_minus_1(n)):
        raise ValueError(f"{f} does not divide x^{n}-1")
    if not -n < e < n:
        raise ValueError(f"exponent {e} outside (-{n}, {n})")
    if e < 0:
        e += n
    return poly_powmod(X, e, f)


def is_irreducible(p: BitPoly) -> bool:
    """True iff p has no irreducible factor of degree <= deg(p)/2."""
    d = p.degree
    if d is None or d < 1:
        return False
    if d == 1:
        return True
    # x^(2^i) mod p, checked against gcd for each i <= d/2
    t = X
    for _ in range(d // 2):
        t = t * t % p
        if poly_gcd(t + X, p) != ONE:
            return False
    return True


@dataclass(frozen=True)
class RingElement:
    """Element of GF(2)[x]/(x^n - 1); multiplication by x is a cyclic shift."""

    n: int
    bits: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("ring modulus exponent must be positive")
        object.__setattr__(self, "bits", _reduce_cyclic(self.bits, self.n))

    @classmethod
    def from_poly(cls, p: BitPoly, n: int) -> RingElement:
        return cls(n, p.bits)

    @property
    def poly(self) -> BitPoly:
        return BitPoly(self.bits)

    def coeffs(self) -> list[int]:
        return [(self.bits >> i) & 1 for i in range(self.n)]

    def _check(self, other: RingElement):
        if other.n != self.n:
            raise ValueError("ring elements from different rings")

    def __add__(self, other: RingElement) -> RingElement:
        self._check(other)
        return RingElement(self.n, self.bits ^ other.bits)

    __sub__ = __add__

    def __mul__(self, other: RingElement) -> RingElement:
        self._check(other)
        return RingElement(self.n, _mul(self.bits, other.bits))

    def shift(self, a: int) -> RingElement:
        """Multiply by x^a (a may be negative)."""
        a %= self.n
        mask = (1 << self.n) - 1
        return RingElement(self.n, ((self.bits << a) | (self.bits >> (self.n - a))) & mask)


def cyclic_shift(bits: int, a: int, n: int) -> int:
    """Bit-vector form of multiplying by x^a modulo x^n - 1."""
    a %= n
    mask = (1 << n) - 1
    return ((bits << a) | (bits >> (n - a))) & mask


def cyclotomic_cosets(n: int) -> list[list[int]]:
    """Orbits of i -> 2i (mod n), each listed in doubling order from its least element."""
    if n < 1 or n % 2 == 0:
        raise ValueError("cyclotomic cosets require odd n")
    seen = set()
    cosets = []
    for s in range(n):
        if s in seen:
            continue
        coset, j = [], s
        while j not in coset:
            coset.append(j)
            j = (2 * j) % n
        seen.update(coset)
        cosets.append(coset)
    return cosets


def multiplicative_order_of_2(n: int) -> int:
    if n == 1:
        return 1
    k, v = 1, 2 % n
    while v != 1:
        v = (2 * v) % n
        k += 1
    return k


@dataclass(frozen=True)
class GF2mField:
    """GF(2^m) with log/antilog tables over a primitive polynomial.

    Elements are ints below 2^m in the polynomial basis; alpha is the class of x.
    """

    m: int
    primitive_poly: BitPoly | None = None

    def __post_init__(self):
        if self.primitive_poly is None:
            if self.m not in PRIMITIVE_POLYS:
                raise ValueError(f"no built-in primitive polynomial for m={self.m}")
            object.__setattr__(self, "primitive_poly", BitPoly(PRIMITIVE_POLYS[self.m]))
        if self.primitive_poly.degree != self.m:
            raise ValueError("primitive polynomial must have degree m")
        # building the tables fails loudly for non-primitive input
        self.exp  # noqa: B018

    @property
    def order(self) -> int:
        """Size of the multiplicative group, 2^m - 1."""
        return (1 << self.m) - 1

    @cached_property
    def exp(self) -> tuple[int, ...]:
        q = self.order
        table = [0] * (2 * q)
        v = 1
        for i in range(q):
            if i > 0 and v == 1:
                raise ValueError(f"{self.primitive_poly} is not primitive")
            table[i] = v
            v <<= 1
            if v >> self.m:
                v ^= self.primitive_poly.bits
        if v != 1:
            raise ValueError(f"{self.primitive_poly} is not primitive")
        table[q:] = table[:q]
        return tuple(table)

    @cached_property
    def log(self) -> tuple[int, ...]:
        table = [-1] * (1 << self.m)
        for i in range(self.order):
            table[self.exp[i]] = i
        return tuple(table)

    def alpha_pow(self, e: int) -> int:
        return self.exp[e % self.order]

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.exp[self.log[a] + self.log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no inverse in GF(2^m)")
        return self.exp[(self.order - self.log[a]) % self.order]

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            return 0 if e else 1
        return self.exp[(self.log[a] * e) % self.order]

    def evaluate(self, p: BitPoly, beta: int) -> int:
        """Evaluate a binary polynomial at a field element (Horner)."""
        acc = 0
        for e in range(p.bits.bit_length() - 1, -1, -1):
            acc = self.mul(acc, beta) ^ ((p.bits >> e) & 1)
        return acc


@lru_cache(maxsize=None)
def field_for(m: int) -> GF2mField:
    return GF2mField(m)


def minimal_polynomial(field: GF2mField, power: int, n: int | None = None) -> BitPoly:
    """Minimal polynomial over GF(2) of alpha^power.

    ``n`` defaults to 2^m - 1. The product of (x - alpha^j) over the coset of
    ``power`` is expanded with field coefficients, and every coefficient is
    required to land in GF(2).
    """
    if n is None:
        n = field.order
    if n != field.order:
        raise ValueError(f"n={n} must equal 2^m-1={field.order}")
    coset = [power % n]
    while (2 * coset[-1]) % n != coset[0]:
        coset.append((2 * coset[-1]) % n)
    # coefficients in GF(2^m), index = power of x
    poly = [1]
    for j in coset:
        root = field.alpha_pow(j)
        nxt = [0] * (len(poly) + 1)
        for i, c in enumerate(poly):
            nxt[i + 1] ^= c
            nxt[i] ^= field.mul(c, root)
        poly = nxt
    if any(c not in (0, 1) for c in poly):
        raise ArithmeticError("minimal polynomial has coefficients outside GF(2)")
    return BitPoly.from_coeffs(poly)


def factor_xn_minus_1(n: int) -> list[BitPoly]:
    """Irreducible factors of x^n - 1 over GF(2), one per cyclotomic coset (odd n).

    Factors are returned in coset order (coset of 0 first).
    """
    if n < 1 or n % 2 == 0:
        raise ValueError("x^n-1 is squarefree only for odd n; even n is not supported")
    if n == 1:
        return [BitPoly(0b11)]
    m = multiplicative_order_of_2(n)
    if m not in PRIMITIVE_POLYS:
        raise ValueError(f"x^{n}-1 splits over GF(2^{m}); only m <= 16 is supported")
    gf = field_for(m)
    step = gf.order // n  # alpha^step is a primitive n-th root of unity
    factors = []
    for coset in cyclotomic_cosets(n):
        factors.append(minimal_polynomial(gf, coset[0] * step))
    return factors

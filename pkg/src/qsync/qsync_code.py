"""Quantum synchronizable codes from a nested cyclic pair C^perp <= C < D.

Slip convention
---------------
A slip ``a`` in ``[-a_l, a_r]`` means the receiving device is misaligned by
``a`` qubits to the right: its n-qubit window starts at extended position
``a_l + a`` of the block. With bit ``i`` <-> coefficient of ``x^i``, that
window reads ``x^(-a) c(x)`` where ``c`` is the translated core. Two lookup
tables are therefore kept:

* ``sync_table[a] = x^a mod f`` -- the remainder of a codeword multiplied
  by ``x^a`` (``sync_syndrome``);
* ``window_table[a] = x^(-a) mod f`` -- the remainder the misaligned
  device actually observes (``read_slip``).
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from functools import cached_property

from qsync.cyclic import (
    CyclicCode,
    SyndromeDecoder,
    contains,
    dual,
    is_dual_containing,
    reduce_against,
    row_reduce,
)
from qsync.gf2 import BitPoly, RingElement, cyclic_shift, x_pow_mod, xn_minus_1


class ConstructionError(ValueError):
    """A precondition of the construction failed; ``clause`` names which one."""

    def __init__(self, clause: str, detail: str):
        super().__init__(f"{clause}: {detail}")
        self.clause = clause


@dataclass(frozen=True)
class LogicalBasisSpec:
    """Coset representatives of C / C^perp, indexed by logical basis label.

    Representative ``i`` is the XOR of the complement vectors picked by the
    binary digits of ``i``; it is computed on demand since high-rate codes
    have far too many logical basis states to list.
    """

    complement_basis: tuple[int, ...]

    def __len__(self) -> int:
        return 1 << len(self.complement_basis)

    def __getitem__(self, i: int) -> BitPoly:
        if not 0 <= i < len(self):
            raise IndexError(f"logical index {i} out of range")
        v = 0
        for j, c in enumerate(self.complement_basis):
            if (i >> j) & 1:
                v ^= c
        return BitPoly(v)

    def __iter__(self):
        return (self[i] for i in range(len(self)))

    @property
    def representatives(self) -> tuple[BitPoly, ...]:
        return tuple(self)


@dataclass(frozen=True)
class QsyncCode:
    """A validated (a_l, a_r)-[[n + a_l + a_r, 2 k1 - n]] synchronizable code.

    Build instances with :func:`build`; the constructor trusts its inputs.
    """

    C: CyclicCode
    D: CyclicCode
    a_l: int
    a_r: int
    f: BitPoly
    sync_table: dict[int, BitPoly] = field(compare=False, repr=False)

    @property
    def n(self) -> int:
        return self.C.n

    @property
    def k1(self) -> int:
        return self.C.k

    @property
    def k2(self) -> int:
        return self.D.k

    @property
    def n_ext(self) -> int:
        return self.n + self.a_l + self.a_r

    @property
    def k_logical(self) -> int:
        return 2 * self.k1 - self.n

    @property
    def g(self) -> BitPoly:
        """Generator of D, also the translation applied to every encoded word."""
        return self.D.g

    @property
    def slips(self) -> range:
        return range(-self.a_l, self.a_r + 1)

    @cached_property
    def C_perp(self) -> CyclicCode:
        return dual(self.C)

    @cached_property
    def window_table(self) -> dict[int, BitPoly]:
        return {a: x_pow_mod(-a, self.f, self.n) for a in self.slips}

    @cached_property
    def _slip_by_remainder(self) -> dict[int, int]:
        return {r.bits: a for a, r in self.sync_table.items()}

    @cached_property
    def _slip_by_window_remainder(self) -> dict[int, int]:
        return {r.bits: a for a, r in self.window_table.items()}

    @cached_property
    def representatives(self) -> LogicalBasisSpec:
        return canonical_representatives(self.C)

    @cached_property
    def decoder_C(self) -> SyndromeDecoder:
        return SyndromeDecoder.build(self.C)

    @cached_property
    def decoder_D(self) -> SyndromeDecoder:
        return SyndromeDecoder.build(self.D)

    @property
    def phase_radius(self) -> int:
        return self.C.radius

    @property
    def bit_radius(self) -> int:
        return self.D.radius

    @property
    def label(self) -> str:
        return f"({self.a_l},{self.a_r})-[[{self.n_ext},{self.k_logical}]]"

    def to_descriptor(self) -> dict:
        return {
            "C": self.C.to_descriptor(),
            "D": self.D.to_descriptor(),
            "f_hex": self.f.to_hex(),
            "f_pretty": str(self.f),
            "a_l": self.a_l,
            "a_r": self.a_r,
            "n_ext": self.n_ext,
            "k_logical": self.k_logical,
            "sync_table": [{"a": a, "remainder_hex": r.to_hex()} for a, r in sorted(self.sync_table.items())],
        }

    def descriptor_hash(self) -> str:
        blob = json.dumps(self.to_descriptor(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()

    @classmethod
    def from_descriptor(cls, desc: dict) -> QsyncCode:
        """Rebuild from JSON and re-validate every construction invariant."""
        code = build(
            CyclicCode.from_descriptor(desc["C"]),
            CyclicCode.from_descriptor(desc["D"]),
            int(desc["a_l"]),
            int(desc["a_r"]),
        )
        checks = {
            "f_hex": code.f.to_hex(),
            "n_ext": code.n_ext,
            "k_logical": code.k_logical,
        }
        for key, value in checks.items():
            if key in desc and desc[key] != value:
                raise ConstructionError("descriptor", f"{key}={desc[key]!r} but rebuilt code has {value!r}")
        if "sync_table" in desc:
            stored = {int(e["a"]): e["remainder_hex"] for e in desc["sync_table"]}
            rebuilt = {a: r.to_hex() for a, r in code.sync_table.items()}
            if stored != rebuilt:
                raise ConstructionError("descriptor", "stored sync table disagrees with the rebuilt one")
        return code


def orbit_length(g: BitPoly, n: int) -> int:
    """Number of distinct cyclic shifts of g in GF(2)[x]/(x^n - 1)."""
    if not g.divides(xn_minus_1(n)):
        raise ValueError(f"{g} does not divide x^{n}-1")
    start = RingElement.from_poly(g, n).bits
    if start == 0:
        return 1
    word = cyclic_shift(start, 1, n)
    length = 1
    while word != start:
        word = cyclic_shift(word, 1, n)
        length += 1
    return length


def build(C: CyclicCode, D: CyclicCode, a_l: int, a_r: int) -> QsyncCode:
    """Validate the nested pair and tolerances, derive f = g_C / g_D and the slip table."""
    if C.n != D.n:
        raise ConstructionError("equal lengths", f"C has n={C.n}, D has n={D.n}")
    n = C.n
    if n % 2 == 0:
        raise ConstructionError("odd length", f"n={n} is even")
    if not is_dual_containing(C):
        raise ConstructionError("C dual-containing", f"{C} does not contain its dual")
    if not contains(D, C):
        raise ConstructionError("D is C-containing", f"{D} does not contain {C}")
    if not C.k < D.k:
        raise ConstructionError("k1 < k2", f"k1={C.k}, k2={D.k}")
    if a_l < 0 or a_r < 0:
        raise ConstructionError("nonnegative a_l, a_r", f"a_l={a_l}, a_r={a_r}")
    if not a_l + a_r < D.k - C.k:
        raise ConstructionError(
            "a_l + a_r < k2 - k1", f"a_l + a_r = {a_l + a_r} >= k2 - k1 = {D.k - C.k}"
        )
    if 2 * C.k - n < 1:
        raise ConstructionError("2k1 - n >= 1", f"code carries no logical qubit (2k1-n={2 * C.k - n})")

    f, rem = divmod(C.g, D.g)
    if rem:
        raise ConstructionError("g_D divides g_C", f"remainder {rem}")
    # proof-tracking assertions: these cannot fail once the clauses above hold
    assert f.degree == D.k - C.k
    orbit = orbit_length(D.g, n)
    if orbit != n:
        raise ConstructionError("|Orb(g)| = n", f"orbit of g_D has size {orbit}")

    table = {a: x_pow_mod(a, f, n) for a in range(-a_l, a_r + 1)}
    if len({r.bits for r in table.values()}) != len(table):
        raise ConstructionError("injective sync table", "two slips share a remainder")
    return QsyncCode(C, D, a_l, a_r, f, table)


def sync_remainder(code: QsyncCode, window: int) -> BitPoly | None:
    """Two-step division: window / g_D (must be exact), then quotient mod f."""
    q, r = divmod(BitPoly(window), code.g)
    if r:
        return None
    return q % code.f


def sync_syndrome(code: QsyncCode, window_poly: RingElement | BitPoly | int) -> int | None:
    """Slip ``a`` such that ``window_poly = x^a (s + r_i + g)``, or ``None``."""
    bits = window_poly if isinstance(window_poly, int) else window_poly.bits
    rem = sync_remainder(code, bits)
    if rem is None:
        return None
    return code._slip_by_remainder.get(rem.bits)


def read_slip(code: QsyncCode, window: int) -> int | None:
    """Slip of a device whose window starts at extended position a_l + a."""
    rem = sync_remainder(code, window)
    if rem is None:
        return None
    return code._slip_by_window_remainder.get(rem.bits)


def canonical_representatives(C: CyclicCode) -> LogicalBasisSpec:
    """Deterministic system of representatives of C / C^perp.

    The generator rows of C are reduced, in order, against an echelon basis of
    C^perp; rows that survive form the complement basis.
    """
    if not is_dual_containing(C):
        raise ValueError(f"{C} is not dual-containing")
    basis = row_reduce(dual(C).generator_rows)
    complement: list[int] = []
    for row in C.generator_rows:
        r = reduce_against(row, basis)
        if r:
            top = 1 << (r.bit_length() - 1)
            basis = [b ^ r if b & top else b for b in basis] + [r]
            basis.sort(reverse=True)
            complement.append(r)
    kl = 2 * C.k - C.n
    if len(complement) != kl:
        raise ArithmeticError(f"expected {kl} complement vectors, found {len(complement)}")
    return LogicalBasisSpec(tuple(complement))

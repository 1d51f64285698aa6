from __future__ import annotations

import pytest

from qsync.cyclic import CyclicCode, bch_code
from qsync.gf2 import BitPoly
from qsync.qsync_code import build

ACCEPTANCE_LINES: list[str] = []


def record_acceptance(number: int, title: str, ok: bool, detail: str = "") -> None:
    line = f"criterion {number} [{'PASS' if ok else 'FAIL'}] {title}"
    if detail:
        line += f" -- {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def hamming7() -> CyclicCode:
    return CyclicCode(7, BitPoly.parse("x^3+x+1"))


def full7() -> CyclicCode:
    return CyclicCode(7, BitPoly(1))


@pytest.fixture(scope="session")
def code9():
    """(1,1)-[[9,1]] from the [7,4] Hamming code inside the full space."""
    return build(hamming7(), full7(), 1, 1)


@pytest.fixture(scope="session")
def code40():
    """(4,5)-[[40,1]] from BCH(31, d=7) inside BCH(31, d=3)."""
    return build(bch_code(5, 7), bch_code(5, 3), 4, 5)


def corpus():
    """Every code the round-trip suites sweep, keyed by a readable label."""
    h7b = CyclicCode(7, BitPoly.parse("x^3+x^2+1"))
    bch15 = bch_code(4, 3)
    full15 = CyclicCode(15, BitPoly(1))
    full31 = CyclicCode(31, BitPoly(1))
    return {
        "n7 hamming (1,1)": build(hamming7(), full7(), 1, 1),
        "n7 hamming (2,0)": build(hamming7(), full7(), 2, 0),
        "n7 hamming' (0,2)": build(h7b, full7(), 0, 2),
        "n7 hamming (0,0)": build(hamming7(), full7(), 0, 0),
        "n15 bch3 (1,2)": build(bch15, full15, 1, 2),
        "n15 bch3 (3,0)": build(bch15, full15, 3, 0),
        "n31 bch7<bch3 (4,5)": build(bch_code(5, 7), bch_code(5, 3), 4, 5),
        "n31 bch5<bch3 (2,2)": build(bch_code(5, 5), bch_code(5, 3), 2, 2),
        "n31 bch7<bch5 (0,4)": build(bch_code(5, 7), bch_code(5, 5), 0, 4),
        "n31 bch3<full (3,1)": build(bch_code(5, 3), full31, 3, 1),
        "n63 bch7<bch3 (5,6)": build(bch_code(6, 7), bch_code(6, 3), 5, 6),
    }


@pytest.fixture(scope="session")
def code_corpus():
    return corpus()

"""Brute-force parity-code decode probabilities by complete enumeration.

Every qubit of the n x m code is in one of three states: lost, arrived and
read correctly, or arrived and read flipped. All 3^(n*m) patterns are
classified once per (n, m, basis); probabilities then follow from the
(lost, flipped) exponents, so many (mu, eps_q) points reuse one table.
"""
from __future__ import annotations

import itertools
import math
from functools import lru_cache

LOST, RIGHT, WRONG = 0, 1, 2


def _classify_z(blocks) -> str:
    wrong_blocks = 0
    for block in blocks:
        right = sum(1 for q in block if q == RIGHT)
        wrong = sum(1 for q in block if q == WRONG)
        if right == wrong:  # empty block or split vote
            return "unknown"
        wrong_blocks += wrong > right
    return "incorrect" if wrong_blocks % 2 else "correct"


def _classify_x(blocks) -> str:
    right_blocks = wrong_blocks = 0
    for block in blocks:
        if any(q == LOST for q in block):
            continue  # parity of an incomplete block is undefined
        flips = sum(1 for q in block if q == WRONG)
        if flips % 2:
            wrong_blocks += 1
        else:
            right_blocks += 1
    if right_blocks == wrong_blocks:
        return "unknown"
    return "correct" if right_blocks > wrong_blocks else "incorrect"


@lru_cache(maxsize=None)
def _pattern_table(n: int, m: int, basis: str) -> dict:
    """Count patterns by (lost, flipped, outcome); outcome ignores mu/eps_q."""
    classify = _classify_z if basis == "z" else _classify_x
    table: dict[tuple[int, int, str], int] = {}
    for pattern in itertools.product((LOST, RIGHT, WRONG), repeat=n * m):
        blocks = [pattern[i * m : (i + 1) * m] for i in range(n)]
        lost = sum(1 for q in pattern if q == LOST)
        flipped = sum(1 for q in pattern if q == WRONG)
        key = (lost, flipped, classify(blocks))
        table[key] = table.get(key, 0) + 1
    return table


def enumerate_decode(n: int, m: int, mu: float, eps_q: float, basis: str):
    """(p_correct, p_incorrect, p_unknown) summed over every qubit pattern."""
    sums = {"correct": [], "incorrect": [], "unknown": []}
    total = n * m
    for (lost, flipped, outcome), count in _pattern_table(n, m, basis).items():
        arrived = total - lost
        prob = (
            (1.0 - mu) ** lost
            * mu**arrived
            * eps_q**flipped
            * (1.0 - eps_q) ** (arrived - flipped)
        )
        sums[outcome].append(count * prob)
    return (
        math.fsum(sums["correct"]),
        math.fsum(sums["incorrect"]),
        math.fsum(sums["unknown"]),
    )

"""Balanced parenthesis strings (p-strings).

Positions are reported 1-based. Enumeration and ranking use lexicographic
order with ``'(' < ')'``; uniform sampling draws an integer below the Catalan
number and unranks it, so it is exactly uniform.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .combinatorics import catalan

OPEN, CLOSE = "(", ")"
ENUMERATION_CAP = 8
# Largest s with catalan(s) < 2**63; the vectorized sampler works below it.
INT64_MAX_PAIRS = 35


class PStringError(ValueError):
    pass


class IllegalCharacterError(PStringError):
    pass


class OddLengthError(PStringError):
    pass


class UnbalancedError(PStringError):
    pass


@dataclass(frozen=True)
class PString:
    word: str

    @property
    def pairs(self) -> int:
        return len(self.word) // 2

    def __str__(self) -> str:
        return self.word


def parse(text: str) -> PString:
    for pos, ch in enumerate(text, 1):
        if ch not in "()":
            raise IllegalCharacterError(f"illegal character {ch!r} at position {pos}")
    if len(text) % 2:
        raise OddLengthError(f"odd length {len(text)}")
    depth = 0
    for pos, ch in enumerate(text, 1):
        depth += 1 if ch == OPEN else -1
        if depth < 0:
            raise UnbalancedError(f"unbalanced prefix: closing parenthesis at position {pos}")
    if depth:
        raise UnbalancedError(f"{depth} unclosed parentheses")
    return PString(text)


def nestings(p: PString) -> list[int]:
    """1-based positions i with word[i] == '(' and word[i+1] == ')'."""
    w = p.word
    return [i + 1 for i in range(len(w) - 1) if w[i] == OPEN and w[i + 1] == CLOSE]


def matching(p: PString) -> list[int]:
    """0-based partner index of every character."""
    partner = [0] * len(p.word)
    stack = []
    for i, ch in enumerate(p.word):
        if ch == OPEN:
            stack.append(i)
        else:
            j = stack.pop()
            partner[i], partner[j] = j, i
    return partner


@lru_cache(maxsize=None)
def _completions(s: int) -> tuple[tuple[int, ...], ...]:
    # table[m][h]: ways to finish with m characters left at depth h
    n = 2 * s
    table = [[0] * (n + 2) for _ in range(n + 1)]
    table[0][0] = 1
    for m in range(1, n + 1):
        for h in range(0, m + 1):
            up = table[m - 1][h + 1]
            down = table[m - 1][h - 1] if h > 0 else 0
            table[m][h] = up + down
    return tuple(tuple(row) for row in table)


def _check_pairs(s: int) -> None:
    if s < 0:
        raise ValueError(f"number of pairs must be >= 0, got {s}")


def unrank(s: int, index: int) -> PString:
    _check_pairs(s)
    total = catalan(s)
    if not 0 <= index < total:
        raise IndexError(f"index {index} outside [0, {total})")
    table = _completions(s)
    n = 2 * s
    out = []
    depth = opened = 0
    for pos in range(n):
        left = n - pos - 1
        with_open = table[left][depth + 1] if opened < s else 0
        if index < with_open:
            out.append(OPEN)
            depth += 1
            opened += 1
        else:
            index -= with_open
            out.append(CLOSE)
            depth -= 1
    return PString("".join(out))


def rank(p: PString) -> int:
    s = p.pairs
    table = _completions(s)
    n = 2 * s
    index = depth = 0
    for pos, ch in enumerate(p.word):
        if ch == OPEN:
            depth += 1
        else:
            index += table[n - pos - 1][depth + 1]
            depth -= 1
    return index


def enumerate_all(s: int, cap: int = ENUMERATION_CAP) -> list[PString]:
    _check_pairs(s)
    if s > cap:
        raise ValueError(f"s={s} exceeds enumeration cap {cap}")
    out: list[PString] = []

    def extend(prefix: str, opened: int, closed: int) -> None:
        if len(prefix) == 2 * s:
            out.append(PString(prefix))
            return
        if opened < s:
            extend(prefix + OPEN, opened + 1, closed)
        if closed < opened:
            extend(prefix + CLOSE, opened, closed + 1)

    extend("", 0, 0)
    return out


def randbelow(n: int, rng: np.random.Generator) -> int:
    """Uniform integer in [0, n) for arbitrarily large ``n``."""
    if n < 1:
        raise ValueError("n must be positive")
    if n < 2**63:
        return int(rng.integers(0, n))
    bits = n.bit_length()
    words = -(-bits // 32)
    while True:
        chunks = rng.integers(0, 2**32, size=words, dtype=np.uint64)
        value = 0
        for c in chunks:
            value = (value << 32) | int(c)
        value >>= words * 32 - bits
        if value < n:
            return value


def sample_uniform(s: int, rng: np.random.Generator) -> PString:
    _check_pairs(s)
    return unrank(s, randbelow(catalan(s), rng))


def sample_words(s: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """``size`` uniform p-strings as a boolean array, True for '('.

    Row t equals ``unrank(s, k_t)`` for uniform k_t; requires s <= 35.
    """
    if not 0 <= s <= INT64_MAX_PAIRS:
        raise ValueError(f"vectorized sampling supports 0 <= s <= {INT64_MAX_PAIRS}")
    n = 2 * s
    table = np.array(_completions(s), dtype=np.int64)
    index = rng.integers(0, catalan(s), size=size, dtype=np.int64)
    words = np.zeros((size, n), dtype=bool)
    depth = np.zeros(size, dtype=np.int64)
    opened = np.zeros(size, dtype=np.int64)
    for pos in range(n):
        left = n - pos - 1
        with_open = np.where(opened < s, table[left][depth + 1], 0)
        is_open = index < with_open
        index = np.where(is_open, index, index - with_open)
        words[:, pos] = is_open
        step = np.where(is_open, 1, -1)
        depth += step
        opened += is_open
    return words


def nesting_mask(words: np.ndarray) -> np.ndarray:
    """Column i-1 is True where a row has a nesting at position i."""
    return words[:, :-1] & ~words[:, 1:]


def from_bool_row(row: np.ndarray) -> PString:
    return PString("".join(OPEN if b else CLOSE for b in row))

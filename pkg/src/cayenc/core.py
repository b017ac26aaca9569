"""Cayley permutations: standardisation, containment, generation, counting.

A Cayley permutation is a word of positive integers that contains every value
from 1 up to its maximum.  Words are represented as tuples of ints; the empty
tuple is a valid Cayley permutation.  Everything in this module is pure and
serves as the brute-force oracle for the rest of the package.

Pattern text format: a pattern whose values are all at most 9 may be written
as a digit string ("2121"); otherwise values are comma-separated ("10,1,2").
A basis is a space-separated list of pattern tokens.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Iterable, Sequence

Cperm = tuple[int, ...]

GENERATE_SIZE_CAP = 10


class ResourceCapExceeded(Exception):
    """Raised when a size or state cap would be exceeded."""


def is_cayley(values: Sequence[int]) -> bool:
    """True iff values form a Cayley permutation.

    >>> is_cayley((2, 1, 3, 1)), is_cayley((1, 3)), is_cayley(())
    (True, False, True)
    """
    if not values:
        return True
    if any(v < 1 for v in values):
        return False
    return set(values) == set(range(1, max(values) + 1))


def check_cayley(values: Sequence[int]) -> Cperm:
    """Validate and return values as a Cayley permutation tuple."""
    word = tuple(values)
    if not is_cayley(word):
        raise ValueError(f"not a Cayley permutation: {word}")
    return word


def standardise(word: Sequence[int]) -> Cperm:
    """Relabel a word onto 1..m preserving order and equalities.

    >>> standardise((4, 6, 7, 4))
    (1, 2, 3, 1)
    >>> standardise((6, 6, 5))
    (2, 2, 1)
    """
    levels = {v: i + 1 for i, v in enumerate(sorted(set(word)))}
    return tuple(levels[v] for v in word)


def contains(w: Sequence[int], p: Sequence[int]) -> bool:
    """True iff some subsequence of w standardises to the pattern p.

    >>> contains((2, 1, 3, 2, 1), (1, 2, 1))
    True
    >>> contains((2, 1, 3, 2, 1), (1, 2, 3))
    False
    """
    k = len(p)
    if k == 0:
        return True
    n = len(w)
    if k > n:
        return False

    def extend(start: int, chosen: list[int]) -> bool:
        i = len(chosen)
        if i == k:
            return True
        # remaining positions must fit the remaining pattern length
        for j in range(start, n - (k - i) + 1):
            v = w[j]
            ok = True
            for t in range(i):
                if (v > chosen[t]) != (p[i] > p[t]) or (v < chosen[t]) != (p[i] < p[t]):
                    ok = False
                    break
            if ok:
                chosen.append(v)
                if extend(j + 1, chosen):
                    return True
                chosen.pop()
        return False

    return extend(0, [])


def avoids(w: Sequence[int], p: Sequence[int]) -> bool:
    """True iff w does not contain the pattern p."""
    return not contains(w, p)


def avoids_basis(w: Sequence[int], basis: Iterable[Sequence[int]]) -> bool:
    """True iff w avoids every pattern in the basis."""
    return all(not contains(w, p) for p in basis)


@lru_cache(maxsize=None)
def generate_cayley(n: int, cap: int = GENERATE_SIZE_CAP) -> tuple[Cperm, ...]:
    """All Cayley permutations of size n, sorted.

    Enumerates every function [n] -> [m] for m = 1..n and keeps the
    surjective ones (prefixes of Cayley permutations need not be Cayley
    permutations, so no prefix recursion is attempted).
    """
    if n < 0:
        raise ValueError("size must be nonnegative")
    if n > cap:
        raise ResourceCapExceeded(f"generate_cayley size {n} exceeds cap {cap}")
    if n == 0:
        return ((),)
    out = []
    for m in range(1, n + 1):
        for t in itertools.product(range(1, m + 1), repeat=n):
            if len(set(t)) == m:
                out.append(t)
    out.sort()
    return tuple(out)


def _std3(a: int, b: int, c: int) -> Cperm:
    """Standardise a 3-letter word without building intermediate sets."""
    ra = 1 + (a > b) + (a > c)
    rb = 1 + (b > a) + (b > c)
    rc = 1 + (c > a) + (c > b)
    # ranks computed with strict comparisons collapse ties upward; fix by
    # compressing to consecutive levels
    vals = sorted({ra, rb, rc})
    lev = {v: i + 1 for i, v in enumerate(vals)}
    return (lev[ra], lev[rb], lev[rc])


SIZE3_PATTERNS: tuple[Cperm, ...] = tuple(sorted(
    {p for p in generate_cayley(3)}
))


@lru_cache(maxsize=None)
def size3_pattern_masks(n: int) -> dict[Cperm, int]:
    """Map each size-n Cayley permutation to a bitmask of contained size-3 patterns.

    Bit i corresponds to SIZE3_PATTERNS[i].  Used as a fast path for counting
    avoiders of bases made of size-3 patterns only.
    """
    bit = {p: 1 << i for i, p in enumerate(SIZE3_PATTERNS)}
    triples = list(itertools.combinations(range(n), 3))
    table: dict[Cperm, int] = {}
    for w in generate_cayley(n):
        mask = 0
        for i, j, k in triples:
            mask |= bit[_std3(w[i], w[j], w[k])]
        table[w] = mask
    return table


def count_avoiders(basis: Iterable[Sequence[int]], n: int) -> int:
    """Number of size-n Cayley permutations avoiding every pattern in basis."""
    patterns = [tuple(p) for p in basis]
    if patterns and all(len(p) == 3 for p in patterns) and n <= GENERATE_SIZE_CAP:
        bit = {p: 1 << i for i, p in enumerate(SIZE3_PATTERNS)}
        bmask = 0
        for p in patterns:
            bmask |= bit[p]
        return sum(1 for m in size3_pattern_masks(n).values() if m & bmask == 0)
    return sum(1 for w in generate_cayley(n) if avoids_basis(w, patterns))


def minimal_elements(perms: Iterable[Sequence[int]]) -> frozenset[Cperm]:
    """Subset of perms containing no other element of perms as a pattern."""
    items = sorted({tuple(p) for p in perms}, key=lambda p: (len(p), p))
    kept: list[Cperm] = []
    for p in items:
        if all(not contains(p, q) for q in kept):
            kept.append(p)
    return frozenset(kept)


def normalise_basis(patterns: Iterable[Sequence[int]]) -> frozenset[Cperm]:
    """Validate patterns and reduce them to a minimal antichain."""
    checked = [check_cayley(p) for p in patterns]
    for p in checked:
        if not p:
            raise ValueError("basis patterns must be non-empty")
    return minimal_elements(checked)


def parse_pattern(text: str) -> Cperm:
    """Parse one pattern token: digit string or comma-separated values.

    >>> parse_pattern("2121"), parse_pattern("10,1,2")
    ((2, 1, 2, 1), (10, 1, 2))
    """
    text = text.strip()
    if not text:
        raise ValueError("empty pattern token")
    if "," in text:
        values = tuple(int(part) for part in text.split(","))
    else:
        if not text.isdigit():
            raise ValueError(f"bad pattern token: {text!r}")
        values = tuple(int(ch) for ch in text)
    return check_cayley(values)


def format_pattern(p: Sequence[int]) -> str:
    """Inverse of parse_pattern."""
    if p and max(p) > 9:
        return ",".join(str(v) for v in p)
    return "".join(str(v) for v in p)


def parse_basis(tokens: Iterable[str]) -> frozenset[Cperm]:
    """Parse pattern tokens into a normalised basis."""
    return normalise_basis(parse_pattern(tok) for tok in tokens)


def format_basis(basis: Iterable[Sequence[int]]) -> str:
    """Canonical space-separated form of a basis, sorted."""
    return " ".join(
        format_pattern(p) for p in sorted(basis, key=lambda p: (len(p), p))
    )

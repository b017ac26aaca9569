"""Regularity classification, juxtaposition classes, and slot-bound bases.

A class of Cayley permutations has a regular set of vertical insertion
encodings iff its basis contains a member of each of the nine vertical
juxtaposition classes V_ab (a, b in {I, D, C}: entries with values up to some
threshold form a strictly increasing / strictly decreasing / constant
sequence, the rest likewise).  The horizontal analogue uses the four classes
H_ab (a, b in {I, D}) of permutations split by position.

SB(k) and HSB(k) are the classes of Cayley permutations whose vertical and
horizontal evolutions never exceed k slots; their bases are computed here
from slot-exceeding configurations and cross-checked against the max_slots
oracle.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from .core import (
    Cperm,
    ResourceCapExceeded,
    check_cayley,
    contains,
    generate_cayley,
    minimal_elements,
)
from .encodings import (
    SLOT,
    HorizontalConfig,
    VerticalConfig,
    horizontal_trace,
    vertical_config,
    vertical_trace,
)

VERTICAL_CLASSES = ("II", "ID", "IC", "DI", "DD", "DC", "CI", "CD", "CC")
HORIZONTAL_CLASSES = ("II", "ID", "DI", "DD")

SB_K_CAP = 3

# bases of the nine vertical juxtaposition classes, keyed lower+upper
VERTICAL_JUX_BASES: dict[str, frozenset[Cperm]] = {
    "II": frozenset({(1, 1), (3, 2, 1), (2, 1, 4, 3), (2, 4, 1, 3)}),
    "ID": frozenset({(1, 1), (2, 1, 3), (2, 3, 1)}),
    "IC": frozenset({(1, 1, 2), (1, 2, 1), (2, 1, 1), (2, 1, 3), (2, 3, 1), (3, 2, 1)}),
    "DI": frozenset({(1, 1), (1, 3, 2), (3, 1, 2)}),
    "DD": frozenset({(1, 1), (1, 2, 3), (3, 1, 4, 2), (3, 4, 1, 2)}),
    "DC": frozenset({(1, 1, 2), (1, 2, 1), (1, 2, 3), (1, 3, 2), (2, 1, 1), (3, 1, 2)}),
    "CI": frozenset({(1, 2, 2), (1, 3, 2), (2, 1, 2), (2, 2, 1), (3, 1, 2), (3, 2, 1)}),
    "CD": frozenset({(1, 2, 2), (1, 2, 3), (2, 1, 2), (2, 1, 3), (2, 2, 1), (2, 3, 1)}),
    "CC": frozenset({(1, 2, 3), (1, 3, 2), (2, 1, 3), (2, 3, 1), (3, 1, 2), (3, 2, 1)}),
}


def _part_matches(part: tuple[int, ...], kind: str) -> bool:
    """A sequence matches I/D/C when strictly increasing/decreasing/constant.

    Parts of size at most one match every kind.
    """
    if len(part) <= 1:
        return True
    if kind == "I":
        return all(a < b for a, b in zip(part, part[1:]))
    if kind == "D":
        return all(a > b for a, b in zip(part, part[1:]))
    return len(set(part)) == 1


def in_vertical_jux(p: Cperm, cls: str) -> bool:
    """True iff p splits by some value threshold into a lower cls[0] part and an upper cls[1] part."""
    p = check_cayley(p)
    top = max(p) if p else 0
    for t in range(top + 1):
        lower = tuple(v for v in p if v <= t)
        upper = tuple(v for v in p if v > t)
        if _part_matches(lower, cls[0]) and _part_matches(upper, cls[1]):
            return True
    return False


def vertical_jux_basis(cls: str) -> frozenset[Cperm]:
    """Basis of the vertical juxtaposition class V_cls (embedded data)."""
    return VERTICAL_JUX_BASES[cls]


def in_horizontal_jux(p: Cperm, cls: str) -> bool:
    """True iff p is a permutation splitting by position into cls[0] and cls[1] parts."""
    p = check_cayley(p)
    if len(set(p)) != len(p):
        return False
    for i in range(len(p) + 1):
        if _part_matches(p[:i], cls[0]) and _part_matches(p[i:], cls[1]):
            return True
    return False


def is_vertical_regular(basis) -> bool:
    """True iff every vertical juxtaposition class has a member in the basis."""
    patterns = [tuple(p) for p in basis]
    return all(
        any(in_vertical_jux(p, cls) for p in patterns) for cls in VERTICAL_CLASSES
    )


def is_horizontal_regular(basis) -> bool:
    """True iff every horizontal juxtaposition class has a member in the basis."""
    patterns = [tuple(p) for p in basis]
    return all(
        any(in_horizontal_jux(p, cls) for p in patterns) for cls in HORIZONTAL_CLASSES
    )


def missing_jux_classes(basis, mode: str) -> tuple[str, ...]:
    """Juxtaposition classes with no member in the basis (witnesses for non-regularity)."""
    patterns = [tuple(p) for p in basis]
    if mode == "vertical":
        return tuple(
            cls
            for cls in VERTICAL_CLASSES
            if not any(in_vertical_jux(p, cls) for p in patterns)
        )
    return tuple(
        cls
        for cls in HORIZONTAL_CLASSES
        if not any(in_horizontal_jux(p, cls) for p in patterns)
    )


def survey_size3() -> dict:
    """Classify all non-empty bases of size-3 patterns.

    Returns rows keyed by basis size with the number of bases and how many
    are vertical-regular, horizontal-regular, and either, plus the grand
    total of either-regular bases.
    """
    patterns = generate_cayley(3)
    vert_mask = {
        cls: sum(
            1 << i for i, p in enumerate(patterns) if in_vertical_jux(p, cls)
        )
        for cls in VERTICAL_CLASSES
    }
    horiz_mask = {
        cls: sum(
            1 << i for i, p in enumerate(patterns) if in_horizontal_jux(p, cls)
        )
        for cls in HORIZONTAL_CLASSES
    }
    rows = {
        size: {"classes": 0, "vertical": 0, "horizontal": 0, "either": 0}
        for size in range(1, len(patterns) + 1)
    }
    total_either = 0
    for subset in range(1, 1 << len(patterns)):
        size = subset.bit_count()
        vert = all(subset & m for m in vert_mask.values())
        horiz = all(subset & m for m in horiz_mask.values())
        row = rows[size]
        row["classes"] += 1
        row["vertical"] += vert
        row["horizontal"] += horiz
        row["either"] += vert or horiz
        total_either += vert or horiz
    return {"rows": rows, "total_either": total_either}


@lru_cache(maxsize=None)
def _trace_configs(p: Cperm, mode: str) -> frozenset:
    trace = vertical_trace(p) if mode == "vertical" else horizontal_trace(p)
    return frozenset(trace)


def derivations(config, n: int) -> frozenset[Cperm]:
    """All size-n Cayley permutations whose evolution passes through config."""
    if isinstance(config, VerticalConfig):
        mode = "vertical"
        placed = len(config.placed)
    elif isinstance(config, HorizontalConfig):
        mode = "horizontal"
        placed = len(config.prefix)
    else:
        raise TypeError(f"not a configuration: {config!r}")
    if n < placed:
        raise ValueError("size smaller than the configuration's placed points")
    return frozenset(
        p for p in generate_cayley(n) if config in _trace_configs(p, mode)
    )


def sb_basis(k: int, cap: int = SB_K_CAP) -> frozenset[Cperm]:
    """Basis of SB(k): minimal size 2k+1 derivations of the k-point, k+1-slot configurations."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if k > cap:
        raise ResourceCapExceeded(f"sb_basis k {k} exceeds cap {cap}")
    out: set[Cperm] = set()
    for word in generate_cayley(k):
        items: list = [SLOT]
        for v in word:
            items.extend((v, SLOT))
        out |= derivations(vertical_config(items), 2 * k + 1)
    return minimal_elements(out)


def _hsb_slot_structures(prefix_size: int, k: int) -> list[tuple]:
    """Slot tuples (bottom to top) with k+1 slots over a size-s permutation prefix.

    Positions: ("new", g) for gaps g = 0..s, ("rep", v) for levels v = 1..s,
    ordered by height.  Applies the five structural conditions.
    """
    s = prefix_size
    positions = []
    for g in range(s + 1):
        positions.append(("new", g))
        if g + 1 <= s:
            positions.append(("rep", g + 1))
    # positions is height-ordered: new@0, rep@1, new@1, rep@2, ...
    return [
        combo
        for combo in itertools.combinations(positions, k + 1)
        if _hsb_conditions(combo, s)
    ]


def _between(a: tuple, b: tuple) -> range:
    """Prefix value levels strictly between two height-ordered slots."""
    high = b[1] - 1 if b[0] == "rep" else b[1]
    return range(a[1] + 1, high + 1)


def _hsb_conditions(slots: tuple, s: int) -> bool:
    bottom, top = slots[0], slots[-1]
    # no prefix values below the bottom slot or above the top slot
    if (bottom[0] == "new" and bottom[1] != 0) or (bottom[0] == "rep" and bottom[1] != 1):
        return False
    if (top[0] == "new" and top[1] != s) or (top[0] == "rep" and top[1] != s):
        return False
    # no values strictly between a repeating slot and an adjacent slot
    for a, b in zip(slots, slots[1:]):
        if ("rep" in (a[0], b[0])) and len(_between(a, b)) > 0:
            return False
    # no three consecutive repeating slots
    for a, b, c in zip(slots, slots[1:], slots[2:]):
        if a[0] == b[0] == c[0] == "rep":
            return False
    # no two consecutive repeating slots at the top or bottom
    if len(slots) >= 2:
        if slots[0][0] == slots[1][0] == "rep":
            return False
        if slots[-1][0] == slots[-2][0] == "rep":
            return False
    return True


def hsb_basis(k: int, cap: int = SB_K_CAP) -> frozenset[Cperm]:
    """Basis of HSB(k): minimal derivations of the valid k+1-slot configurations."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if k > cap:
        raise ResourceCapExceeded(f"hsb_basis k {k} exceeds cap {cap}")
    out: set[Cperm] = set()
    for s in range((k + 1) // 2, k + 1):
        structures = _hsb_slot_structures(s, k)
        for prefix in itertools.permutations(range(1, s + 1)):
            for slots in structures:
                config = HorizontalConfig(prefix, slots)
                out |= derivations(config, s + k + 1)
    return minimal_elements(out)


def vertical_alternation(cls: str, n: int) -> Cperm:
    """The size-2n vertical alternation a1 b1 ... an bn in V_cls."""
    if n < 1:
        raise ValueError("n must be >= 1")
    lower_kind, upper_kind = cls[0], cls[1]
    if lower_kind == "C":
        lows = [1] * n
        base = 1
    elif lower_kind == "I":
        lows = list(range(1, n + 1))
        base = n
    else:
        lows = list(range(n, 0, -1))
        base = n
    if upper_kind == "C":
        highs = [base + 1] * n
    elif upper_kind == "I":
        highs = [base + i for i in range(1, n + 1)]
    else:
        highs = [base + i for i in range(n, 0, -1)]
    word = []
    for a, b in zip(lows, highs):
        word.extend((a, b))
    return check_cayley(word)


def horizontal_alternation(cls: str, n: int) -> Cperm:
    """The size-2n horizontal alternation: odd values then even values, each monotone."""
    if n < 1:
        raise ValueError("n must be >= 1")
    odds = list(range(1, 2 * n, 2))
    evens = list(range(2, 2 * n + 1, 2))
    if cls[0] == "D":
        odds.reverse()
    if cls[1] == "D":
        evens.reverse()
    return check_cayley(odds + evens)

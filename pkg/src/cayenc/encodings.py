"""Vertical and horizontal insertion encodings of Cayley permutations.

The vertical evolution builds a Cayley permutation by inserting values from
the bottom level up, copies of equal values from left to right.  The
horizontal evolution inserts points strictly left to right.  Each insertion
is recorded as a letter kind + slot index + flag; the letter word is the
insertion encoding.

Letter word text format: letters joined by spaces, each as kind, slot index,
flag — e.g. "m1,1 l2,1 r2,0 f1,1 f1,0" (ASCII l for the left-insertion kind).
Vertical kinds are l/m/r/f with flag 1 for a new maximum and 0 for a repeat of
the current maximum; horizontal kinds are u/m/d/f with flag 1 when more copies
of the inserted value are still to come.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .core import Cperm, check_cayley, standardise

VERTICAL_KINDS = "lmrf"
HORIZONTAL_KINDS = "umdf"

SLOT = None  # slot marker inside vertical configuration items


class InvalidWord(ValueError):
    """A letter word that is not the encoding of any Cayley permutation.

    position is the 1-based letter index at fault, the string "end" when
    the word stops with slots still unfilled, or None for a token that does
    not parse as a letter at all.
    """

    def __init__(self, position, reason: str):
        self.position = position
        self.reason = reason
        if position is None:
            super().__init__(reason)
        else:
            super().__init__(f"invalid word at {position}: {reason}")


@dataclass(frozen=True)
class VerticalLetter:
    kind: str  # one of l, m, r, f
    slot: int  # slot index, counted from the left, starting at 1
    new_max: int  # 1 = new maximum value, 0 = repeat of the current maximum

    def __post_init__(self):
        if self.kind not in VERTICAL_KINDS:
            raise ValueError(f"bad vertical kind {self.kind!r}")
        if self.slot < 1:
            raise ValueError("slot index must be >= 1")
        if self.new_max not in (0, 1):
            raise ValueError("flag must be 0 or 1")

    def __str__(self) -> str:
        return f"{self.kind}{self.slot},{self.new_max}"


@dataclass(frozen=True)
class HorizontalLetter:
    kind: str  # one of u, m, d, f
    slot: int  # slot index, counted from the bottom, starting at 1
    more: int  # 1 = more copies of this value pending, 0 = last copy

    def __post_init__(self):
        if self.kind not in HORIZONTAL_KINDS:
            raise ValueError(f"bad horizontal kind {self.kind!r}")
        if self.slot < 1:
            raise ValueError("slot index must be >= 1")
        if self.more not in (0, 1):
            raise ValueError("flag must be 0 or 1")

    def __str__(self) -> str:
        return f"{self.kind}{self.slot},{self.more}"


def word_to_text(word: Iterable[object]) -> str:
    """Space-joined text form of a letter word."""
    return " ".join(str(letter) for letter in word)


def _parse_letter(token: str, kinds: str, cls):
    if len(token) < 4 or token[0] not in kinds or "," not in token:
        raise InvalidWord(None, f"bad letter token: {token!r}")
    slot_text, flag_text = token[1:].split(",", 1)
    try:
        return cls(token[0], int(slot_text), int(flag_text))
    except ValueError as exc:
        raise InvalidWord(None, f"bad letter token: {token!r}") from exc


def parse_vertical_word(text: str) -> tuple[VerticalLetter, ...]:
    """Parse "m1,1 l2,1 ..." into vertical letters."""
    return tuple(
        _parse_letter(tok, VERTICAL_KINDS, VerticalLetter) for tok in text.split()
    )


def parse_horizontal_word(text: str) -> tuple[HorizontalLetter, ...]:
    """Parse "m1,0 u2,1 ..." into horizontal letters."""
    return tuple(
        _parse_letter(tok, HORIZONTAL_KINDS, HorizontalLetter) for tok in text.split()
    )


@dataclass(frozen=True)
class VerticalConfig:
    """A vertical evolution state: placed values and slot markers, in position order.

    items holds placed values (ints) and SLOT (None) markers; between any two
    slot markers there is at least one placed value.
    """

    items: tuple

    @property
    def slot_count(self) -> int:
        return sum(1 for it in self.items if it is SLOT)

    @property
    def placed(self) -> Cperm:
        return tuple(it for it in self.items if it is not SLOT)

    @property
    def size(self) -> int:
        """Placed points plus slots."""
        return len(self.items)

    def __str__(self) -> str:
        return " ".join("◊" if it is SLOT else str(it) for it in self.items)


def vertical_config(items: Iterable) -> VerticalConfig:
    """Build and validate a vertical configuration from values and SLOT markers."""
    tup = tuple(items)
    last_slot = None
    for i, it in enumerate(tup):
        if it is SLOT:
            if last_slot == i - 1:
                raise ValueError("adjacent slots are not a valid configuration")
            last_slot = i
    placed = tuple(it for it in tup if it is not SLOT)
    if placed:
        check_cayley(standardise(placed))
        if standardise(placed) != placed:
            raise ValueError("placed values must be standardised")
    return VerticalConfig(tup)


@dataclass(frozen=True)
class HorizontalConfig:
    """A horizontal evolution state: standardised prefix plus slots, bottom to top.

    Each slot is ("new", g) for a new slot in gap g (g = number of prefix value
    levels strictly below the gap, so gap 0 is below everything) or
    ("rep", v) for a repeating slot at prefix value level v.
    """

    prefix: Cperm
    slots: tuple

    @property
    def slot_count(self) -> int:
        return len(self.slots)

    @property
    def size(self) -> int:
        """Placed points plus slots."""
        return len(self.prefix) + len(self.slots)

    def __str__(self) -> str:
        parts = [str(v) for v in self.prefix]
        for tag, pos in self.slots:
            parts.append(f"◊̄@{pos}" if tag == "rep" else f"◊@gap{pos}")
        return " ".join(parts)


ROOT_VERTICAL = VerticalConfig((SLOT,))
ROOT_HORIZONTAL = HorizontalConfig((), (("new", 0),))


def _vertical_insertion_order(p: Sequence[int]) -> list[int]:
    """Positions of p in insertion order: by value, then left to right."""
    return sorted(range(len(p)), key=lambda i: (p[i], i))


def _vertical_items(p: Sequence[int], placed: set[int]) -> tuple:
    """Configuration items for a placed-position set: values and slot markers."""
    values = standardise([p[i] for i in sorted(placed)]) if placed else ()
    items: list = []
    vi = 0
    i = 0
    n = len(p)
    while i < n:
        if i in placed:
            items.append(values[vi])
            vi += 1
            i += 1
        else:
            while i < n and i not in placed:
                i += 1
            items.append(SLOT)
    return tuple(items)


def vertical_trace(p: Sequence[int]) -> tuple[VerticalConfig, ...]:
    """All configurations of p's vertical evolution, from ◊ to p itself."""
    p = check_cayley(p)
    if not p:
        raise ValueError("empty permutation has no evolution")
    placed: set[int] = set()
    configs = [ROOT_VERTICAL]
    for idx in _vertical_insertion_order(p):
        placed.add(idx)
        configs.append(VerticalConfig(_vertical_items(p, placed)))
    return tuple(configs)


def vertical_encode(p: Sequence[int]) -> tuple[VerticalLetter, ...]:
    """The vertical insertion encoding of p, one letter per point."""
    p = check_cayley(p)
    if not p:
        raise ValueError("empty permutation has no encoding")
    n = len(p)
    placed: set[int] = set()
    letters = []
    cur_max = 0
    for idx in _vertical_insertion_order(p):
        # the slot containing idx is the maximal unplaced run around it
        lo = idx
        while lo > 0 and (lo - 1) not in placed:
            lo -= 1
        hi = idx
        while hi + 1 < n and (hi + 1) not in placed:
            hi += 1
        slot_index = 1 + sum(
            1
            for j in range(lo)
            if j not in placed and (j == 0 or (j - 1) in placed)
        )
        left_survives = lo < idx
        right_survives = idx < hi
        kind = {
            (True, True): "m",
            (False, True): "l",
            (True, False): "r",
            (False, False): "f",
        }[(left_survives, right_survives)]
        flag = 1 if p[idx] > cur_max else 0
        cur_max = max(cur_max, p[idx])
        letters.append(VerticalLetter(kind, slot_index, flag))
        placed.add(idx)
    return tuple(letters)


def vertical_decode(word: Sequence[VerticalLetter]) -> Cperm:
    """The unique Cayley permutation whose vertical evolution spells word."""
    items: list = [SLOT]
    cur_max = 0
    for pos, letter in enumerate(word, start=1):
        slot_locations = [i for i, it in enumerate(items) if it is SLOT]
        if letter.slot > len(slot_locations):
            raise InvalidWord(pos, "slot out of range")
        loc = slot_locations[letter.slot - 1]
        if letter.new_max:
            value = cur_max + 1
        else:
            if cur_max == 0:
                raise InvalidWord(pos, "no current maximum to repeat")
            rightmost = max(i for i, it in enumerate(items) if it == cur_max)
            if loc < rightmost:
                raise InvalidWord(
                    pos, "repeat must go right of the current maximum"
                )
            value = cur_max
        replacement = {
            "f": [value],
            "l": [value, SLOT],
            "r": [SLOT, value],
            "m": [SLOT, value, SLOT],
        }[letter.kind]
        items[loc : loc + 1] = replacement
        cur_max = max(cur_max, value)
    if any(it is SLOT for it in items):
        raise InvalidWord("end", "unfilled slot remains")
    return tuple(items)


def _horizontal_state(
    placed: Sequence[int], future: Sequence[int]
) -> tuple[Cperm, tuple]:
    """Standardised prefix and slot list for a prefix/future split of a word."""
    levels = sorted(set(placed))
    level_of = {v: t + 1 for t, v in enumerate(levels)}
    prefix = tuple(level_of[v] for v in placed)
    future_set = set(future)
    slots = []
    # gap g sits above level g (gap 0 below everything)
    for g in range(len(levels) + 1):
        low = levels[g - 1] if g > 0 else None
        high = levels[g] if g < len(levels) else None
        if any(
            (low is None or v > low) and (high is None or v < high)
            for v in future_set
        ):
            slots.append(("new", g))
        if high is not None and high in future_set:
            slots.append(("rep", g + 1))
    return prefix, tuple(slots)


def horizontal_trace(p: Sequence[int]) -> tuple[HorizontalConfig, ...]:
    """All configurations of p's horizontal evolution, from ◊ to p itself."""
    p = check_cayley(p)
    if not p:
        raise ValueError("empty permutation has no evolution")
    configs = []
    for i in range(len(p) + 1):
        prefix, slots = _horizontal_state(p[:i], p[i:])
        configs.append(HorizontalConfig(prefix, slots))
    return tuple(configs)


def horizontal_encode(p: Sequence[int]) -> tuple[HorizontalLetter, ...]:
    """The horizontal insertion encoding of p, one letter per point."""
    p = check_cayley(p)
    if not p:
        raise ValueError("empty permutation has no encoding")
    letters = []
    for i, value in enumerate(p):
        placed, future = p[:i], p[i:]
        _, slots = _horizontal_state(placed, future)
        levels = sorted(set(placed))
        rest = future[1:]
        if value in levels:
            target = ("rep", levels.index(value) + 1)
            kind = "f"
        else:
            below = [v for v in levels if v < value]
            target = ("new", len(below))
            low = below[-1] if below else None
            highs = [v for v in levels if v > value]
            high = highs[0] if highs else None
            lower_survives = any(
                v < value and (low is None or v > low) for v in rest
            )
            upper_survives = any(
                v > value and (high is None or v < high) for v in rest
            )
            kind = {
                (True, True): "m",
                (True, False): "u",
                (False, True): "d",
                (False, False): "f",
            }[(lower_survives, upper_survives)]
        flag = 1 if value in rest else 0
        letters.append(HorizontalLetter(kind, slots.index(target) + 1, flag))
    return tuple(letters)


def horizontal_decode(word: Sequence[HorizontalLetter]) -> Cperm:
    """The unique Cayley permutation whose horizontal evolution spells word."""
    # slots as ("new", low, high) with Fraction-or-None bounds, or ("rep", value)
    slots: list[tuple] = [("new", None, None)]
    values: list[Fraction] = []
    for pos, letter in enumerate(word, start=1):
        if letter.slot > len(slots):
            raise InvalidWord(pos, "slot out of range")
        target = slots[letter.slot - 1]
        if target[0] == "rep":
            if letter.kind != "f":
                raise InvalidWord(pos, "only f can insert into a repeating slot")
            value = target[1]
            replacement = [target] if letter.more else []
        else:
            _, low, high = target
            if low is None and high is None:
                value = Fraction(0)
            elif low is None:
                value = high - 1
            elif high is None:
                value = low + 1
            else:
                value = (low + high) / 2
            replacement = []
            if letter.kind in ("u", "m"):
                replacement.append(("new", low, value))
            if letter.more:
                replacement.append(("rep", value))
            if letter.kind in ("d", "m"):
                replacement.append(("new", value, high))
        slots[letter.slot - 1 : letter.slot] = replacement
        values.append(value)
    if slots:
        raise InvalidWord("end", "unfilled slot remains")
    return standardise(values)


def max_slots(p: Sequence[int], mode: str) -> int:
    """Largest slot count over the configurations of p's evolution."""
    if mode not in ("vertical", "horizontal"):
        raise ValueError(f"bad mode {mode!r}")
    trace = vertical_trace(p) if mode == "vertical" else horizontal_trace(p)
    return max(c.slot_count for c in trace)

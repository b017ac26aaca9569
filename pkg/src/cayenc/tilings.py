"""Gridded Cayley permutations and tilings.

A tiling is a rectangular grid with obstructions (gridded patterns that must
not occur) and requirement lists (non-empty sets of gridded patterns, at
least one of which must occur).  Tilings encode evolution states of the
insertion encodings: placed points become point cells, slots become
requirement lists, and basis patterns become obstructions.

Rows holding placed values are point rows: all points in a point row share
one value, which stands in for the pairwise size-2 obstructions along the
row.  Point rows are stored as a flag set on the tiling.

Tiling text serialization: one line "dimensions: WxH", one line
"point rows: 0,1" (or "none"), then an "obstructions:"/"requirements:"
block with one gridded pattern per line as "212 @ (0,1),(2,1),(4,1)";
members of one requirement list are joined with " | ".
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterable, Sequence

from .core import Cperm, check_cayley, format_pattern, normalise_basis, standardise
from .encodings import (
    SLOT,
    HorizontalConfig,
    HorizontalLetter,
    VerticalConfig,
    VerticalLetter,
)

Cell = tuple[int, int]


def _consistent(pattern: Sequence[int], positions: Sequence[Cell]) -> bool:
    """True iff the positions respect order and value relations of pattern."""
    for j in range(1, len(pattern)):
        xj, yj = positions[j]
        for i in range(j):
            xi, yi = positions[i]
            if xi > xj:
                return False
            if pattern[i] < pattern[j] and yi > yj:
                return False
            if pattern[i] > pattern[j] and yi < yj:
                return False
            if pattern[i] == pattern[j] and yi != yj:
                return False
    return True


@dataclass(frozen=True)
class GriddedCayleyPerm:
    """A Cayley permutation with one grid cell per index."""

    pattern: Cperm
    positions: tuple[Cell, ...]

    def __post_init__(self):
        if len(self.pattern) != len(self.positions):
            raise ValueError("pattern and positions must have equal length")
        if self.pattern:
            if standardise(self.pattern) != tuple(self.pattern):
                raise ValueError("pattern must be standardised")
            check_cayley(self.pattern)
        if not _consistent(self.pattern, self.positions):
            raise ValueError("positions are not consistent with pattern")

    @property
    def size(self) -> int:
        return len(self.pattern)

    def sort_key(self):
        return (len(self.pattern), self.pattern, self.positions)

    def __str__(self) -> str:
        cells = ",".join(f"({x},{y})" for x, y in self.positions)
        return f"{format_pattern(self.pattern)} @ {cells}"


def point_perm(cell: Cell) -> GriddedCayleyPerm:
    """The single-point gridded pattern in cell."""
    return GriddedCayleyPerm((1,), (cell,))


def grid_contains(g: GriddedCayleyPerm, p: GriddedCayleyPerm) -> bool:
    """True iff g has a subsequence standardising to p in exactly p's cells."""
    if p.size > g.size:
        return False
    if p.size == 0:
        return True
    chosen: list[int] = []

    def extend(j: int, start: int) -> bool:
        if j == p.size:
            return True
        for i in range(start, g.size - (p.size - j) + 1):
            if g.positions[i] != p.positions[j]:
                continue
            ok = True
            for jj, ii in enumerate(chosen):
                a, b = g.pattern[ii], g.pattern[i]
                c, d = p.pattern[jj], p.pattern[j]
                if (a < b) != (c < d) or (a > b) != (c > d):
                    ok = False
                    break
            if ok:
                chosen.append(i)
                if extend(j + 1, i + 1):
                    return True
                chosen.pop()
        return False

    return extend(0, 0)


@dataclass(frozen=True)
class Tiling:
    """Grid dimensions, obstructions, requirement lists, and point-row flags.

    Stored canonically: obstructions and requirement members sorted by
    (size, pattern, positions), lists themselves sorted, everything deduped.
    Build through make_tiling, which normalises and validates.
    """

    width: int
    height: int
    obstructions: tuple[GriddedCayleyPerm, ...]
    requirements: tuple[tuple[GriddedCayleyPerm, ...], ...]
    point_rows: frozenset[int]

    @property
    def is_empty_set(self) -> bool:
        return any(o.size == 0 for o in self.obstructions)

    def cells(self) -> list[Cell]:
        return [(x, y) for x in range(self.width) for y in range(self.height)]

    def dead_cells(self) -> frozenset[Cell]:
        """Cells carrying a single-point obstruction."""
        return frozenset(
            o.positions[0] for o in self.obstructions if o.size == 1
        )

    def point_cells(self) -> frozenset[Cell]:
        """Cells holding exactly one placed point.

        A point cell has a singleton point requirement, an 11 obstruction,
        sits in a point row, and every other cell of its column is dead.
        """
        dead = self.dead_cells()
        doubles = {
            o.positions[0]
            for o in self.obstructions
            if o.pattern == (1, 1) and o.positions[0] == o.positions[1]
        }
        found = set()
        for lst in self.requirements:
            if len(lst) != 1 or lst[0].size != 1:
                continue
            (cell,) = lst[0].positions
            x, y = cell
            if y not in self.point_rows or cell not in doubles:
                continue
            if all(
                (x, u) in dead for u in range(self.height) if u != y
            ):
                found.add(cell)
        return frozenset(found)

    def __str__(self) -> str:
        return tiling_to_text(self)


def make_tiling(
    width: int,
    height: int,
    obstructions: Iterable[GriddedCayleyPerm],
    requirements: Iterable[Iterable[GriddedCayleyPerm]],
    point_rows: Iterable[int] = (),
) -> Tiling:
    """Normalise, validate, and build a tiling; empty contents give EMPTY_SET."""
    obs = sorted(set(obstructions), key=GriddedCayleyPerm.sort_key)
    reqs = sorted(
        {tuple(sorted(set(lst), key=GriddedCayleyPerm.sort_key)) for lst in requirements},
        key=lambda lst: tuple(g.sort_key() for g in lst),
    )
    rows = frozenset(point_rows)
    for g in itertools.chain(obs, *reqs):
        for x, y in g.positions:
            if not (0 <= x < width and 0 <= y < height):
                raise ValueError(f"cell ({x},{y}) outside {width}x{height} grid")
    if any(r >= height or r < 0 for r in rows):
        raise ValueError("point row outside grid")
    if any(not lst for lst in reqs) or any(o.size == 0 for o in obs):
        return EMPTY_SET
    return Tiling(width, height, tuple(obs), tuple(reqs), rows)


EMPTY_SET = Tiling(0, 0, (GriddedCayleyPerm((), ()),), (), frozenset())

POINT_TILE = Tiling(
    1,
    1,
    (GriddedCayleyPerm((1, 1), ((0, 0), (0, 0))),),
    ((point_perm((0, 0)),),),
    frozenset({0}),
)


def gridded_to_text(g: GriddedCayleyPerm) -> str:
    return str(g)


def tiling_to_text(t: Tiling) -> str:
    if t.is_empty_set:
        return "empty set"
    rows = ",".join(str(r) for r in sorted(t.point_rows)) or "none"
    lines = [f"dimensions: {t.width}x{t.height}", f"point rows: {rows}"]
    lines.append("obstructions:")
    if t.obstructions:
        lines.extend(f"  {o}" for o in t.obstructions)
    else:
        lines.append("  (none)")
    lines.append("requirements:")
    if t.requirements:
        lines.extend("  " + " | ".join(str(r) for r in lst) for lst in t.requirements)
    else:
        lines.append("  (none)")
    return "\n".join(lines)


def _gridded_to_obj(g: GriddedCayleyPerm) -> dict:
    return {"pattern": list(g.pattern), "positions": [list(c) for c in g.positions]}


def _gridded_from_obj(data: dict) -> GriddedCayleyPerm:
    return GriddedCayleyPerm(
        tuple(data["pattern"]), tuple((x, y) for x, y in data["positions"])
    )


def tiling_to_json(t: Tiling) -> str:
    """Serialize a tiling; inverse of tiling_from_json."""
    if t.is_empty_set:
        return json.dumps({"empty_set": True}, indent=2)
    return json.dumps(
        {
            "width": t.width,
            "height": t.height,
            "obstructions": [_gridded_to_obj(o) for o in t.obstructions],
            "requirements": [
                [_gridded_to_obj(g) for g in lst] for lst in t.requirements
            ],
            "point_rows": sorted(t.point_rows),
        },
        indent=2,
    )


def tiling_from_json(text: str) -> Tiling:
    data = json.loads(text)
    if data.get("empty_set"):
        return EMPTY_SET
    return make_tiling(
        data["width"],
        data["height"],
        (_gridded_from_obj(o) for o in data["obstructions"]),
        ([_gridded_from_obj(g) for g in lst] for lst in data["requirements"]),
        data["point_rows"],
    )


def _point_row_clash(g: GriddedCayleyPerm, point_rows: frozenset[int]) -> bool:
    """True iff g puts two different values in one point row (never realisable)."""
    for j in range(g.size):
        for i in range(j):
            if (
                g.positions[i][1] == g.positions[j][1]
                and g.positions[i][1] in point_rows
                and g.pattern[i] != g.pattern[j]
            ):
                return True
    return False


def _cells_compatible(
    p: Cell,
    q: Cell,
    obs,
    point_rows: frozenset[int],
) -> bool:
    """True iff one point in p and one in q can coexist in some filling."""
    if p[0] < q[0]:
        orders = ((p, q),)
    elif p[0] > q[0]:
        orders = ((q, p),)
    else:
        orders = ((p, q), (q, p))
    for positions in orders:
        for pattern in ((1, 1), (1, 2), (2, 1)):
            try:
                g = GriddedCayleyPerm(pattern, positions)
            except ValueError:
                continue
            if _point_row_clash(g, point_rows):
                continue
            if any(grid_contains(g, o) for o in obs):
                continue
            return True
    return False


def _conflicting_requirements(reqs, obs, point_rows: frozenset[int]) -> bool:
    """True iff two requirement lists of single points can never both hold."""
    singleton_lists = []
    for lst in reqs:
        if all(g.size == 1 for g in lst):
            singleton_lists.append(frozenset(g.positions[0] for g in lst))
    for i, cells1 in enumerate(singleton_lists):
        for cells2 in singleton_lists[i + 1 :]:
            if cells1 & cells2:
                continue
            if not any(
                _cells_compatible(p, q, obs, point_rows)
                for p in cells1
                for q in cells2
            ):
                return True
    return False


def _griddings(
    pattern: Cperm,
    width: int,
    height: int,
    dead: frozenset[Cell],
    point_cells: frozenset[Cell],
    point_rows: frozenset[int],
) -> list[GriddedCayleyPerm]:
    """All consistent griddings of pattern into live cells.

    Skips griddings with two indices in one point cell or two values in one
    point row; those can never be realised.
    """
    n = len(pattern)
    out: list[GriddedCayleyPerm] = []
    positions: list[Cell] = []

    def place(i: int):
        if i == n:
            out.append(GriddedCayleyPerm(pattern, tuple(positions)))
            return
        min_x = positions[-1][0] if positions else 0
        for x in range(min_x, width):
            for y in range(height):
                cell = (x, y)
                if cell in dead:
                    continue
                if cell in point_cells and cell in positions:
                    continue
                ok = True
                for j in range(i):
                    xj, yj = positions[j]
                    if pattern[j] < pattern[i] and yj > y:
                        ok = False
                    elif pattern[j] > pattern[i] and yj < y:
                        ok = False
                    elif pattern[j] == pattern[i] and yj != y:
                        ok = False
                    elif (
                        yj == y
                        and y in point_rows
                        and pattern[j] != pattern[i]
                    ):
                        ok = False
                    if not ok:
                        break
                if ok:
                    positions.append(cell)
                    place(i + 1)
                    positions.pop()

    place(0)
    return out


def grid_count(t: Tiling, n: int) -> int:
    """Number of size-n gridded Cayley permutations represented by t."""
    if t.is_empty_set:
        return 0
    if n == 0:
        return 0 if t.requirements else 1
    count = 0
    # levels[k] = row of value level k+1; rows weakly increase with level and
    # a point row may carry at most one level.  values stays standardised by
    # construction, so the partial word is used directly, without building
    # GriddedCayleyPerm objects.
    values: list[int] = []
    cols: list[int] = []
    rows_of: list[int] = []

    def contains_raw(k: int, ppat: Cperm, ppos: tuple[Cell, ...]) -> bool:
        psize = len(ppat)
        if psize > k:
            return False
        chosen: list[int] = []

        def extend(j: int, start: int) -> bool:
            if j == psize:
                return True
            px, py = ppos[j]
            d = ppat[j]
            for i in range(start, k - (psize - j) + 1):
                if cols[i] != px or rows_of[i] != py:
                    continue
                b = values[i]
                ok = True
                for jj, ii in enumerate(chosen):
                    a = values[ii]
                    c = ppat[jj]
                    if (a < b) != (c < d) or (a > b) != (c > d):
                        ok = False
                        break
                if ok:
                    chosen.append(i)
                    if extend(j + 1, i + 1):
                        return True
                    chosen.pop()
            return False

        return extend(0, 0)

    def occurs_ending_at(k: int, psize: int, ppat: Cperm, ppos: tuple[Cell, ...]) -> bool:
        """Occurrence of the pattern whose final point is partial point k-1."""
        last = k - 1
        b_last = values[last]
        d_last = ppat[psize - 1]
        chosen: list[int] = []

        def extend(j: int, start: int) -> bool:
            if j == psize - 1:
                for jj in range(j):
                    a = values[chosen[jj]]
                    c = ppat[jj]
                    if (a < b_last) != (c < d_last) or (a > b_last) != (c > d_last):
                        return False
                return True
            px, py = ppos[j]
            d = ppat[j]
            for i in range(start, last - (psize - 1 - j) + 1):
                if cols[i] != px or rows_of[i] != py:
                    continue
                b = values[i]
                ok = True
                for jj, ii in enumerate(chosen):
                    a = values[ii]
                    c = ppat[jj]
                    if (a < b) != (c < d) or (a > b) != (c > d):
                        ok = False
                        break
                if ok:
                    chosen.append(i)
                    if extend(j + 1, i + 1):
                        return True
                    chosen.pop()
            return False

        return extend(0, 0)

    # every shorter partial already passed blocked, so only occurrences that
    # end at the newly placed point can appear; index obstructions by the
    # cell of their final point and skip those longer than n outright
    Entry = tuple[int, Cperm, tuple[Cell, ...], tuple[tuple[Cell, int], ...]]
    obs_by_last: dict[Cell, list[Entry]] = {}
    for o in t.obstructions:
        if len(o.pattern) <= n:
            needed: dict[Cell, int] = {}
            for c in o.positions:
                needed[c] = needed.get(c, 0) + 1
            obs_by_last.setdefault(o.positions[-1], []).append(
                (len(o.pattern), o.pattern, o.positions, tuple(needed.items()))
            )
    req_lists = tuple(
        tuple((r.pattern, r.positions) for r in lst) for lst in t.requirements
    )
    cell_count: dict[Cell, int] = {}

    def blocked(k: int) -> bool:
        entries = obs_by_last.get((cols[k - 1], rows_of[k - 1]))
        if not entries:
            return False
        for psize, ppat, ppos, needed in entries:
            if psize > k:
                continue
            for c, m in needed:
                if cell_count.get(c, 0) < m:
                    break
            else:
                if occurs_ending_at(k, psize, ppat, ppos):
                    return True
        return False

    def place(i: int, level_rows: tuple[int, ...]):
        nonlocal count
        if i == n:
            if all(
                any(contains_raw(n, rp, rq) for rp, rq in lst) for lst in req_lists
            ):
                count += 1
            return
        min_x = cols[-1] if cols else 0
        for x in range(min_x, t.width):
            # repeat an existing level
            for lvl, row in enumerate(level_rows, start=1):
                values.append(lvl)
                cols.append(x)
                rows_of.append(row)
                cell = (x, row)
                cell_count[cell] = cell_count.get(cell, 0) + 1
                if not blocked(i + 1):
                    place(i + 1, level_rows)
                cell_count[cell] -= 1
                values.pop()
                cols.pop()
                rows_of.pop()
            # insert a new level in any gap
            for gap in range(len(level_rows) + 1):
                low = level_rows[gap - 1] if gap > 0 else 0
                high = level_rows[gap] if gap < len(level_rows) else t.height - 1
                for row in range(low, high + 1):
                    if row in t.point_rows and row in level_rows:
                        continue
                    bumped = [v if v <= gap else v + 1 for v in values]
                    saved = values[:]
                    values[:] = bumped
                    values.append(gap + 1)
                    cols.append(x)
                    rows_of.append(row)
                    cell = (x, row)
                    cell_count[cell] = cell_count.get(cell, 0) + 1
                    if not blocked(i + 1):
                        new_rows = level_rows[:gap] + (row,) + level_rows[gap:]
                        place(i + 1, new_rows)
                    cell_count[cell] -= 1
                    values[:] = saved
                    cols.pop()
                    rows_of.pop()

    place(0, ())
    return count


def canonical_key(t: Tiling):
    """Hashable identity of a normalised tiling."""
    return (t.width, t.height, t.obstructions, t.requirements, tuple(sorted(t.point_rows)))


def simplify(t: Tiling) -> Tiling:
    """Reduce a tiling to an equivalent one; EMPTY_SET when nothing remains.

    Repeats until stable: drop obstructions that contain another obstruction
    or clash with a point row, strip obstruction indices in point cells,
    prune requirement members that contain an obstruction, and delete rows
    and columns that are dead in every cell.
    """
    if t.is_empty_set:
        return EMPTY_SET
    width, height = t.width, t.height
    obs = set(t.obstructions)
    reqs = {tuple(sorted(set(lst), key=GriddedCayleyPerm.sort_key)) for lst in t.requirements}
    point_rows = set(t.point_rows)

    while True:
        changed = False
        current = make_tiling(width, height, obs, reqs, point_rows)
        if current.is_empty_set:
            return EMPTY_SET
        point_cells = current.point_cells()

        # rule 1: minimal obstructions only, point-row clashes are vacuous
        kept: list[GriddedCayleyPerm] = []
        for o in sorted(obs, key=GriddedCayleyPerm.sort_key):
            if _point_row_clash(o, frozenset(point_rows)):
                changed = True
                continue
            if any(k != o and grid_contains(o, k) for k in kept):
                changed = True
                continue
            kept.append(o)
        obs = set(kept)

        # rule 2: strip obstruction indices sitting in point cells; the
        # defining 11 at a point cell is the cell's own constraint and stays
        stripped: set[GriddedCayleyPerm] = set()
        for o in obs:
            if (
                o.pattern == (1, 1)
                and o.positions[0] == o.positions[1]
                and o.positions[0] in point_cells
            ):
                stripped.add(o)
                continue
            keep_idx = [i for i, c in enumerate(o.positions) if c not in point_cells]
            if len(keep_idx) == o.size:
                stripped.add(o)
                continue
            changed = True
            if not keep_idx:
                return EMPTY_SET
            stripped.add(
                GriddedCayleyPerm(
                    standardise([o.pattern[i] for i in keep_idx]),
                    tuple(o.positions[i] for i in keep_idx),
                )
            )
        obs = stripped

        # rule 4: prune requirement members that can never be satisfied
        new_reqs = set()
        for lst in reqs:
            members = tuple(
                r
                for r in lst
                if not _point_row_clash(r, frozenset(point_rows))
                and not any(grid_contains(r, o) for o in obs)
            )
            if not members:
                return EMPTY_SET
            if len(members) != len(lst):
                changed = True
            new_reqs.add(members)
        reqs = new_reqs

        # two requirement lists whose cells are pairwise obstructed cannot
        # both be met; the four rewrite rules alone miss this and exploration
        # would then grow states without bound
        if _conflicting_requirements(reqs, obs, frozenset(point_rows)):
            return EMPTY_SET

        # rule 3: delete any row or column that is dead in every cell
        dead = {o.positions[0] for o in obs if o.size == 1}
        dead_row = next(
            (y for y in range(height) if all((x, y) in dead for x in range(width))),
            None,
        )
        dead_col = next(
            (x for x in range(width) if all((x, y) in dead for y in range(height))),
            None,
        )
        if dead_row is not None or dead_col is not None:
            def move(cell: Cell) -> Cell:
                x, y = cell
                if dead_col is not None and x > dead_col:
                    x -= 1
                if dead_row is not None and y > dead_row:
                    y -= 1
                return (x, y)

            def alive(g: GriddedCayleyPerm) -> bool:
                return not any(
                    (dead_col is not None and x == dead_col)
                    or (dead_row is not None and y == dead_row)
                    for x, y in g.positions
                )

            obs = {
                GriddedCayleyPerm(g.pattern, tuple(move(c) for c in g.positions))
                for g in obs
                if alive(g)
            }
            reqs = {
                tuple(
                    GriddedCayleyPerm(g.pattern, tuple(move(c) for c in g.positions))
                    for g in lst
                    if alive(g)
                )
                for lst in reqs
            }
            if any(not lst for lst in reqs):
                return EMPTY_SET
            point_rows = {
                r - (1 if dead_row is not None and r > dead_row else 0)
                for r in point_rows
                if r != dead_row
            }
            if dead_col is not None:
                width -= 1
            if dead_row is not None:
                height -= 1
            changed = True

        if not changed:
            return make_tiling(width, height, obs, reqs, point_rows)


def _add_basis(
    obs: set[GriddedCayleyPerm],
    basis: frozenset[Cperm],
    width: int,
    height: int,
    point_cells: frozenset[Cell],
    point_rows: frozenset[int],
) -> None:
    """Add every consistent gridding of every basis pattern over live cells."""
    dead = frozenset(o.positions[0] for o in obs if o.size == 1)
    for p in basis:
        obs.update(_griddings(p, width, height, dead, point_cells, point_rows))


def config_to_tiling(config, basis: Iterable[Cperm]) -> Tiling:
    """The simplified tiling whose griddings are the class derivations of config."""
    basis = normalise_basis(basis)
    if isinstance(config, VerticalConfig):
        return _vertical_config_tiling(config, basis)
    if isinstance(config, HorizontalConfig):
        return _horizontal_config_tiling(config, basis)
    raise TypeError(f"not a configuration: {config!r}")


def _vertical_config_tiling(config: VerticalConfig, basis: frozenset[Cperm]) -> Tiling:
    items = config.items
    placed = config.placed
    width = len(items)
    m = max(placed) if placed else 0
    height = m + 1
    point_rows = frozenset(range(m))
    point_cells = frozenset(
        (i, it - 1) for i, it in enumerate(items) if it is not SLOT
    )
    rightmost_max = max(
        (i for i, it in enumerate(items) if it is not SLOT and it == m),
        default=-1,
    )
    obs: set[GriddedCayleyPerm] = set()
    reqs: list[list[GriddedCayleyPerm]] = []
    for i, it in enumerate(items):
        if it is not SLOT:
            v = it
            cell = (i, v - 1)
            reqs.append([point_perm(cell)])
            obs.add(GriddedCayleyPerm((1, 1), (cell, cell)))
            for y in range(height):
                if y != v - 1:
                    obs.add(point_perm((i, y)))
            for x in range(i):
                if (x, v - 1) not in point_cells:
                    obs.add(point_perm((x, v - 1)))
        else:
            open_cells = []
            for y in range(height):
                if y == m or (y == m - 1 and i > rightmost_max):
                    open_cells.append((i, y))
                else:
                    obs.add(point_perm((i, y)))
            reqs.append([point_perm(c) for c in open_cells])
    _add_basis(obs, basis, width, height, point_cells, point_rows)
    return simplify(make_tiling(width, height, obs, reqs, point_rows))


def _horizontal_config_tiling(config: HorizontalConfig, basis: frozenset[Cperm]) -> Tiling:
    prefix = config.prefix
    n = len(prefix)
    m = max(prefix) if prefix else 0
    width = n + 1
    # rows bottom to top: for each gap g = 0..m a row per new slot in that
    # gap, with the value row for level g above gap g's slot row
    new_gaps = sorted(g for tag, g in config.slots if tag == "new")
    rep_levels = {v for tag, v in config.slots if tag == "rep"}
    row_of_level: dict[int, int] = {}
    slot_rows: list[tuple[int, Cell]] = []
    row = 0
    for level in range(1, m + 1):
        if level - 1 in new_gaps:
            slot_rows.append((row, (n, row)))
            row += 1
        row_of_level[level] = row
        row += 1
    if m in new_gaps:
        slot_rows.append((row, (n, row)))
        row += 1
    height = row
    point_rows = frozenset(row_of_level.values())
    point_cells = frozenset((i, row_of_level[v]) for i, v in enumerate(prefix))
    obs: set[GriddedCayleyPerm] = set()
    reqs: list[list[GriddedCayleyPerm]] = []
    for i, v in enumerate(prefix):
        cell = (i, row_of_level[v])
        reqs.append([point_perm(cell)])
        obs.add(GriddedCayleyPerm((1, 1), (cell, cell)))
        for y in range(height):
            if y != row_of_level[v]:
                obs.add(point_perm((i, y)))
    open_rows = {r for r, _ in slot_rows} | {
        row_of_level[v] for v in rep_levels
    }
    for y in range(height):
        if y not in open_rows:
            obs.add(point_perm((n, y)))
    for y in sorted(open_rows):
        reqs.append([point_perm((n, y))])
    _add_basis(obs, basis, width, height, point_cells, point_rows)
    return simplify(make_tiling(width, height, obs, reqs, point_rows))


def root_tiling(basis: Iterable[Cperm]) -> Tiling:
    """The 1x1 single-slot tiling for the class with the given basis."""
    basis = normalise_basis(basis)
    obs: set[GriddedCayleyPerm] = set()
    _add_basis(obs, basis, 1, 1, frozenset(), frozenset())
    return simplify(make_tiling(1, 1, obs, [[point_perm((0, 0))]], ()))


def _column_requirements(t: Tiling) -> dict[int, tuple[GriddedCayleyPerm, ...]]:
    """Map column -> its slot requirement list; raises if the shape is off."""
    lists: dict[int, tuple[GriddedCayleyPerm, ...]] = {}
    for lst in t.requirements:
        cols = {c[0] for g in lst for c in g.positions}
        if len(cols) != 1 or any(g.size != 1 for g in lst):
            raise ValueError("not a factored tiling: non-slot requirement list")
        (col,) = cols
        if col in lists:
            raise ValueError("not a factored tiling: two lists in one column")
        lists[col] = lst
    if set(lists) != set(range(t.width)):
        raise ValueError("not a factored tiling: column without requirement")
    return lists


def _row_requirements(t: Tiling) -> dict[int, tuple[GriddedCayleyPerm, ...]]:
    """Map row -> its slot requirement list; raises if the shape is off."""
    lists: dict[int, tuple[GriddedCayleyPerm, ...]] = {}
    for lst in t.requirements:
        rows = {c[1] for g in lst for c in g.positions}
        if len(rows) != 1 or any(g.size != 1 for g in lst):
            raise ValueError("not a factored tiling: non-slot requirement list")
        (row,) = rows
        if row in lists:
            raise ValueError("not a factored tiling: two lists in one row")
        lists[row] = lst
    if set(lists) != set(range(t.height)):
        raise ValueError("not a factored tiling: row without requirement")
    return lists


def _stretch_gridding(
    g: GriddedCayleyPerm,
    col_map,
    row_map,
) -> list[GriddedCayleyPerm]:
    """All consistent re-griddings of g with each cell mapped through the splits."""
    options = [
        [(x, y) for x in col_map(c[0]) for y in row_map(c[1])] for c in g.positions
    ]
    out = []
    for combo in itertools.product(*options):
        if _consistent(g.pattern, combo):
            out.append(GriddedCayleyPerm(g.pattern, tuple(combo)))
    return out


def expand_vertical(
    t: Tiling, basis: Iterable[Cperm]
) -> list[tuple[VerticalLetter, Tiling]]:
    """All one-letter vertical expansions of a factored tiling.

    Children are simplified; letters whose child is the empty set are
    dropped.  The parent must have at most two rows: an optional point row 0
    holding repeats of the current maximum and an optional top row above.
    """
    basis = normalise_basis(basis)
    if t.height > 2 or len(t.point_rows) > 1:
        raise ValueError("not a vertical factored tiling")
    if t.point_rows and 0 not in t.point_rows:
        raise ValueError("point row of a factored tiling must be row 0")
    slot_lists = _column_requirements(t)
    pt_row = 0 if t.point_rows else None
    top_row = next((y for y in range(t.height) if y != pt_row), None)
    rules: list[tuple[VerticalLetter, Tiling]] = []
    for c in range(t.width):
        slot_cells = {g.positions[0] for g in slot_lists[c]}
        for kind in "flrm":
            for flag in (1, 0):
                if flag == 1 and top_row is None:
                    continue
                if flag == 0 and (pt_row is None or (c, pt_row) not in slot_cells):
                    continue
                child = _vertical_child(t, basis, slot_lists, c, kind, flag, pt_row, top_row)
                if not child.is_empty_set:
                    rules.append((VerticalLetter(kind, c + 1, flag), child))
    return rules


def _vertical_child(
    t: Tiling,
    basis: frozenset[Cperm],
    slot_lists,
    c: int,
    kind: str,
    flag: int,
    pt_row,
    top_row,
) -> Tiling:
    width = t.width + 2
    height = t.height + (1 if flag == 1 else 0)

    def col_map(x: int):
        if x < c:
            return (x,)
        if x == c:
            return (c, c + 1, c + 2)
        return (x + 2,)

    if flag == 1:
        new_pt_row = top_row

        def row_map(y: int):
            return (y, y + 1) if y == top_row else (y,)

    else:
        new_pt_row = pt_row

        def row_map(y: int):
            return (y,)

    pc = (c + 1, new_pt_row)
    obs: set[GriddedCayleyPerm] = set()
    reqs: list[list[GriddedCayleyPerm]] = [[point_perm(pc)]]
    obs.add(GriddedCayleyPerm((1, 1), (pc, pc)))
    for y in range(height):
        if y != new_pt_row:
            obs.add(point_perm((c + 1, y)))
    if flag == 1 and pt_row is not None:
        for x in range(width):
            if (x, pt_row) != pc:
                obs.add(point_perm((x, pt_row)))
    for x in range(c + 1):
        if (x, new_pt_row) != pc:
            obs.add(point_perm((x, new_pt_row)))
    if kind in "fl":
        for y in range(height):
            obs.add(point_perm((c, y)))
    else:
        reqs.append([point_perm((c, y)) for y in range(height)])
    if kind in "fr":
        for y in range(height):
            obs.add(point_perm((c + 2, y)))
    else:
        reqs.append([point_perm((c + 2, y)) for y in range(height)])
    for col, lst in slot_lists.items():
        if col == c:
            continue
        members = []
        for g in lst:
            members.extend(_stretch_gridding(g, col_map, row_map))
        reqs.append(members)
    for o in t.obstructions:
        obs.update(_stretch_gridding(o, col_map, row_map))
    point_rows = frozenset(
        {new_pt_row} | ({pt_row} if pt_row is not None else set())
        if flag == 1
        else t.point_rows
    )
    _add_basis(obs, basis, width, height, frozenset({pc}), point_rows)
    return simplify(make_tiling(width, height, obs, reqs, point_rows))


def expand_horizontal(
    t: Tiling, basis: Iterable[Cperm]
) -> list[tuple[HorizontalLetter, Tiling]]:
    """All one-letter horizontal expansions of a factored tiling.

    The parent must be a single column whose rows are slots, bottom to top;
    point rows are repeating slots and accept only f letters.
    """
    basis = normalise_basis(basis)
    if t.width != 1:
        raise ValueError("not a horizontal factored tiling")
    _row_requirements(t)
    rules: list[tuple[HorizontalLetter, Tiling]] = []
    for r in range(t.height):
        kinds = "f" if r in t.point_rows else "umdf"
        for kind in kinds:
            for flag in (1, 0):
                child = _horizontal_child(t, basis, r, kind, flag)
                if not child.is_empty_set:
                    rules.append((HorizontalLetter(kind, r + 1, flag), child))
    return rules


def _horizontal_child(
    t: Tiling, basis: frozenset[Cperm], r: int, kind: str, flag: int
) -> Tiling:
    repeating = r in t.point_rows
    width = 2
    height = t.height + (0 if repeating else 2)

    def col_map(x: int):
        return (0, 1)

    if repeating:
        pc = (0, r)

        def row_map(y: int):
            return (y,)

    else:
        pc = (0, r + 1)

        def row_map(y: int):
            if y < r:
                return (y,)
            if y == r:
                return (r, r + 1, r + 2)
            return (y + 2,)

    obs: set[GriddedCayleyPerm] = set()
    reqs: list[list[GriddedCayleyPerm]] = [[point_perm(pc)]]
    obs.add(GriddedCayleyPerm((1, 1), (pc, pc)))
    for y in range(height):
        if y != pc[1]:
            obs.add(point_perm((0, y)))
    if repeating:
        if flag == 1:
            reqs.append([point_perm((1, r))])
        else:
            obs.add(point_perm((1, r)))
        point_rows = t.point_rows
    else:
        if kind in "um":
            reqs.append([point_perm((1, r))])
        else:
            obs.add(point_perm((1, r)))
        if kind in "dm":
            reqs.append([point_perm((1, r + 2))])
        else:
            obs.add(point_perm((1, r + 2)))
        if flag == 1:
            reqs.append([point_perm((1, r + 1))])
        else:
            obs.add(point_perm((1, r + 1)))
        point_rows = frozenset(
            {y if y < r else y + 2 for y in t.point_rows} | {r + 1}
        )
    for lst in t.requirements:
        rows = {g.positions[0][1] for g in lst}
        if rows == {r}:
            continue
        members = []
        for g in lst:
            members.extend(_stretch_gridding(g, col_map, row_map))
        reqs.append(members)
    for o in t.obstructions:
        obs.update(_stretch_gridding(o, col_map, row_map))
    _add_basis(obs, basis, width, height, frozenset({pc}), point_rows)
    return simplify(make_tiling(width, height, obs, reqs, point_rows))


def expand(t: Tiling, basis: Iterable[Cperm], mode: str):
    """Dispatch to the vertical or horizontal expansion."""
    if mode == "vertical":
        return expand_vertical(t, basis)
    if mode == "horizontal":
        return expand_horizontal(t, basis)
    raise ValueError(f"unknown mode {mode!r}")


def factor(t: Tiling) -> tuple[Tiling, ...]:
    """Split t into point tiles and at most one residual tiling.

    Point cells and their columns are removed (each contributes one point
    tile), then any fully dead rows or columns are dropped.  The residual
    keeps the remaining obstructions, requirement lists, and point-row
    flags; when nothing remains there is no residual factor.
    """
    if t.is_empty_set:
        raise ValueError("cannot factor the empty-set tiling")
    pcs = t.point_cells()
    if not pcs:
        return (t,)
    drop_cols = {x for x, _ in pcs}
    dead = t.dead_cells()
    for x in drop_cols:
        for y in range(t.height):
            if (x, y) not in dead and (x, y) not in pcs:
                raise ValueError("point cell column has a live cell")
    obs = []
    for o in t.obstructions:
        touched = [c for c in o.positions if c[0] in drop_cols]
        if not touched:
            obs.append(o)
            continue
        if o.size == 1 and o.positions[0] in dead:
            continue
        if o.size == 2 and o.pattern == (1, 1) and set(o.positions) <= pcs:
            continue
        raise ValueError("obstruction straddles a point column")
    reqs = []
    for lst in t.requirements:
        if len(lst) == 1 and lst[0].size == 1 and lst[0].positions[0] in pcs:
            continue
        if any(c[0] in drop_cols for g in lst for c in g.positions):
            raise ValueError("requirement straddles a point column")
        reqs.append(lst)
    keep_cols = [x for x in range(t.width) if x not in drop_cols]
    col_index = {x: i for i, x in enumerate(keep_cols)}
    obs = [
        GriddedCayleyPerm(g.pattern, tuple((col_index[x], y) for x, y in g.positions))
        for g in obs
    ]
    reqs = [
        tuple(
            GriddedCayleyPerm(g.pattern, tuple((col_index[x], y) for x, y in g.positions))
            for g in lst
        )
        for lst in reqs
    ]
    residual = make_tiling(len(keep_cols), t.height, obs, reqs, t.point_rows)
    residual = _drop_dead_lines(residual)
    parts = [POINT_TILE] * len(pcs)
    if residual.width and residual.height:
        parts.append(residual)
    return tuple(parts)


def _drop_dead_lines(t: Tiling) -> Tiling:
    """Delete rows and columns that are dead in every cell."""
    while t.width and t.height:
        dead = t.dead_cells()
        dead_row = next(
            (y for y in range(t.height) if all((x, y) in dead for x in range(t.width))),
            None,
        )
        dead_col = next(
            (x for x in range(t.width) if all((x, y) in dead for y in range(t.height))),
            None,
        )
        if dead_row is None and dead_col is None:
            return t

        def move(cell: Cell) -> Cell:
            x, y = cell
            if dead_col is not None and x > dead_col:
                x -= 1
            if dead_row is not None and y > dead_row:
                y -= 1
            return (x, y)

        def alive(g: GriddedCayleyPerm) -> bool:
            return not any(
                (dead_col is not None and x == dead_col)
                or (dead_row is not None and y == dead_row)
                for x, y in g.positions
            )

        t = make_tiling(
            t.width - (1 if dead_col is not None else 0),
            t.height - (1 if dead_row is not None else 0),
            {
                GriddedCayleyPerm(g.pattern, tuple(move(c) for c in g.positions))
                for g in t.obstructions
                if alive(g)
            },
            {
                tuple(
                    GriddedCayleyPerm(g.pattern, tuple(move(c) for c in g.positions))
                    for g in lst
                    if alive(g)
                )
                for lst in t.requirements
            },
            {
                r - (1 if dead_row is not None and r > dead_row else 0)
                for r in t.point_rows
                if r != dead_row
            },
        )
    return t

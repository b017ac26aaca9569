"""Acceptance checks, one numbered test per criterion.

Each test freezes its expected values (reference sequences, generating
functions, and survey rows) and asserts its stated wall-clock budget.
Reference generating functions and term lists include the size-0 term;
computed ones start at size 1, so the checks add the empty-permutation
term back before comparing.
"""

import itertools
import random
import time

import cayenc.tilings as tilings_mod
from cayenc.classify import (
    VERTICAL_JUX_BASES,
    hsb_basis,
    in_vertical_jux,
    is_horizontal_regular,
    is_vertical_regular,
    sb_basis,
    survey_size3,
)
from cayenc.core import (
    SIZE3_PATTERNS,
    avoids_basis,
    count_avoiders,
    generate_cayley,
    parse_basis,
)
from cayenc.encodings import (
    horizontal_decode,
    horizontal_encode,
    max_slots,
    vertical_decode,
    vertical_encode,
)
from cayenc.engine import ONE, enumerate_class, explore, gf_equal, make_gf, poly
from cayenc.tilings import canonical_key, expand, factor, grid_count, simplify

FUBINI = (1, 3, 13, 75, 541, 4683, 47293, 545835)

# num/den coefficients (index = exponent) and first 10 terms, size 0 up
HORIZONTAL_REFERENCE = {
    ("123", "321"): (
        (1, -4, 7, -2, 4),
        (1, -5, 9, -7, 2),
        (1, 1, 3, 11, 37, 105, 263, 607, 1329, 2813),
    ),
    ("123", "132"): (
        (1, -4, 2),
        (1, -5, 4),
        (1, 1, 3, 11, 43, 171, 683, 2731, 10923, 43691),
    ),
    ("132", "312"): (
        (1, -4, 2),
        (1, -5, 4),
        (1, 1, 3, 11, 43, 171, 683, 2731, 10923, 43691),
    ),
    ("132", "213"): (
        (1, -5, 8, -6, 1),
        (1, -6, 11, -10, 2),
        (1, 1, 3, 11, 42, 159, 596, 2225, 8300, 30967),
    ),
    ("123", "231"): (
        (1, -10, 41, -86, 96, -56, 12),
        (1, -11, 49, -113, 142, -92, 24),
        (1, 1, 3, 11, 41, 145, 483, 1531, 4677, 13925),
    ),
}

# size -> (bases, vertical-regular, horizontal-regular, either)
SURVEY_REFERENCE = {
    1: (13, 0, 0, 0),
    2: (78, 0, 13, 13),
    3: (286, 87, 111, 145),
    4: (715, 435, 428, 528),
    5: (1287, 1028, 986, 1124),
    6: (1716, 1550, 1513, 1625),
    7: (1716, 1645, 1631, 1687),
    8: (1287, 1269, 1267, 1283),
    9: (715, 713, 713, 715),
    10: (286, 286, 286, 286),
    11: (78, 78, 78, 78),
    12: (13, 13, 13, 13),
    13: (1, 1, 1, 1),
}
SURVEY_TOTAL_REFERENCE = 7498


def _with_empty_term(g):
    return g + make_gf(ONE, ONE)


def test_criterion_01_all_cayley_counts():
    start = time.monotonic()
    assert tuple(len(generate_cayley(n)) for n in range(1, 9)) == FUBINI
    assert time.monotonic() - start < 60


def test_criterion_02_brute_force_sequences():
    start = time.monotonic()
    assert tuple(
        count_avoiders(parse_basis(["211", "312"]), n) for n in range(1, 7)
    ) == (1, 3, 11, 45, 197, 903)
    assert tuple(
        count_avoiders(parse_basis(["112", "212", "213", "312"]), n) for n in range(1, 7)
    ) == (1, 3, 9, 27, 81, 243)
    assert time.monotonic() - start < 60


def test_criterion_03_single_slot_basis():
    assert sb_basis(1) == parse_basis(["112", "212", "213", "312"])


def test_criterion_03_single_slot_gf():
    start = time.monotonic()
    g, terms = enumerate_class(parse_basis(["112", "212", "213", "312"]), "vertical")
    assert gf_equal(g, make_gf(poly((0, 1)), poly((1, -3))))
    assert terms == (1, 3, 9, 27, 81, 243, 729, 2187, 6561, 19683)
    assert time.monotonic() - start < 10


def test_criterion_04_pop_stack_gf():
    start = time.monotonic()
    g, terms = enumerate_class(parse_basis(["231", "312", "2121"]), "vertical")
    assert gf_equal(g, make_gf(poly((0, -1, 2, -2)), poly((-1, 5, -6, 4))))
    assert terms == (1, 3, 11, 41, 151, 553, 2023, 7401, 27079, 99081)
    assert time.monotonic() - start < 60


def test_criterion_05_horizontal_pairs():
    start = time.monotonic()
    computed = {}
    for tokens, (num, den, ref_terms) in HORIZONTAL_REFERENCE.items():
        g, terms = enumerate_class(parse_basis(tokens), "horizontal", terms=9)
        assert gf_equal(_with_empty_term(g), make_gf(poly(num), poly(den))), tokens
        assert (1,) + terms == ref_terms, tokens
        computed[tokens] = g
    assert gf_equal(computed[("123", "132")], computed[("132", "312")])
    assert time.monotonic() - start < 300


def test_criterion_06_size3_survey():
    start = time.monotonic()
    data = survey_size3()
    rows = {
        size: (row["classes"], row["vertical"], row["horizontal"], row["either"])
        for size, row in data["rows"].items()
    }
    assert rows == SURVEY_REFERENCE
    assert data["total_either"] == SURVEY_TOTAL_REFERENCE
    assert time.monotonic() - start < 300


def test_criterion_07_encode_decode_roundtrip():
    # encoders are defined for non-empty permutations only
    start = time.monotonic()
    for n in range(1, 8):
        for p in generate_cayley(n):
            assert vertical_decode(vertical_encode(p)) == p
            assert horizontal_decode(horizontal_encode(p)) == p
    assert time.monotonic() - start < 300


def test_criterion_08_single_slot_letters():
    basis = parse_basis(["211", "312"])
    for n in range(1, 8):
        for p in generate_cayley(n):
            single = all(letter.slot == 1 for letter in vertical_encode(p))
            assert single == avoids_basis(p, basis)


def test_criterion_09_sampled_oracle_equivalence():
    start = time.monotonic()
    rng = random.Random(20250815)
    checks = (
        ("vertical", is_vertical_regular),
        ("horizontal", is_horizontal_regular),
    )
    for mode, is_regular in checks:
        chosen = []
        seen = set()
        while len(chosen) < 20:
            mask = rng.randrange(1, 1 << len(SIZE3_PATTERNS))
            if mask in seen:
                continue
            seen.add(mask)
            basis = frozenset(
                p for i, p in enumerate(SIZE3_PATTERNS) if mask >> i & 1
            )
            if is_regular(basis):
                chosen.append(basis)
        for basis in chosen:
            _, terms = enumerate_class(basis, mode, terms=8)
            assert terms == tuple(count_avoiders(basis, n) for n in range(1, 9)), (
                mode,
                sorted(basis),
            )
    assert time.monotonic() - start < 600


_COUNT_CACHE: dict = {}


def _count(t, n):
    key = (canonical_key(t), n)
    if key not in _COUNT_CACHE:
        _COUNT_CACHE[key] = grid_count(t, n)
    return _COUNT_CACHE[key]


def _raw_children(t, basis, mode):
    real = tilings_mod.simplify
    tilings_mod.simplify = lambda x: x
    try:
        return [child for _, child in expand(t, basis, mode)]
    finally:
        tilings_mod.simplify = real


def _convolved_count(parts, n):
    total = 0
    for split in itertools.product(range(n + 1), repeat=len(parts)):
        if sum(split) != n:
            continue
        prod = 1
        for part, k in zip(parts, split):
            prod *= _count(part, k)
            if prod == 0:
                break
        total += prod
    return total


def test_criterion_10_calculus_invariants():
    cases = [
        (["112", "212", "213", "312"], "vertical"),
        (["231", "312", "2121"], "vertical"),
        (["123", "321"], "horizontal"),
        (["123", "132"], "horizontal"),
        (["132", "312"], "horizontal"),
        (["132", "213"], "horizontal"),
        (["123", "231"], "horizontal"),
    ]
    for tokens, mode in cases:
        basis = parse_basis(tokens)
        system = explore(basis, mode)
        for name in system.productions:
            state = system.symbols[name]
            if state.is_empty_set:
                continue
            raw = _raw_children(state, basis, mode)
            for n in range(1, 7):
                assert _count(state, n) == sum(_count(c, n) for c in raw)
            for child in raw:
                simplified = simplify(child)
                for n in range(7):
                    assert _count(child, n) == _count(simplified, n)
                if simplified.is_empty_set:
                    continue
                parts = factor(simplified)
                for n in range(7):
                    assert _count(simplified, n) == _convolved_count(parts, n)


def test_criterion_11_juxtaposition_cross_check():
    start = time.monotonic()
    for n in range(6):
        for p in generate_cayley(n):
            for label, jux_basis in VERTICAL_JUX_BASES.items():
                assert in_vertical_jux(p, label) == avoids_basis(p, jux_basis)
    assert time.monotonic() - start < 60


def test_criterion_12_slot_bound_bases():
    for k in (1, 2):
        bound_basis = sb_basis(k)
        for n in range(1, 7):
            for p in generate_cayley(n):
                assert avoids_basis(p, bound_basis) == (max_slots(p, "vertical") <= k)
    horizontal_basis = hsb_basis(1)
    for n in range(1, 7):
        for p in generate_cayley(n):
            assert avoids_basis(p, horizontal_basis) == (max_slots(p, "horizontal") <= 1)

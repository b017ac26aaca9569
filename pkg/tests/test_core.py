"""Pattern containment, enumeration, and basis handling."""

import itertools

import pytest

from cayenc.core import (
    ResourceCapExceeded,
    avoids_basis,
    check_cayley,
    contains,
    count_avoiders,
    format_basis,
    format_pattern,
    generate_cayley,
    is_cayley,
    minimal_elements,
    normalise_basis,
    parse_basis,
    parse_pattern,
    standardise,
)

FUBINI = (1, 1, 3, 13, 75, 541)


def test_is_cayley():
    assert is_cayley(())
    assert is_cayley((1,))
    assert is_cayley((2, 1, 2))
    assert not is_cayley((2, 1, 4))
    assert not is_cayley((0, 1))
    assert not is_cayley((2, 3))


def test_check_cayley_rejects_non_cayley():
    with pytest.raises(ValueError):
        check_cayley((1, 3))
    assert check_cayley([2, 1, 2]) == (2, 1, 2)


def test_standardise():
    assert standardise((5, 2, 5)) == (2, 1, 2)
    assert standardise((10, 20, 10, 30)) == (1, 2, 1, 3)
    assert standardise(()) == ()
    for p in generate_cayley(4):
        assert standardise(p) == p


def _contains_reference(w, p):
    return any(
        standardise(sub) == tuple(p)
        for sub in itertools.combinations(w, len(p))
    )


def test_contains_fixtures():
    assert contains((3, 1, 2, 3, 2), (2, 1, 2))
    assert contains((3, 1, 2, 3, 2), (1, 2, 2))
    assert not contains((3, 2, 1), (1, 2))
    assert not contains((1, 2, 3), (1, 1))
    assert contains((2, 1, 2, 1), (2, 1, 2))
    assert contains(p := (2, 3, 1), p)
    assert not contains((2, 1, 2), (2, 1, 2, 1))


def test_contains_matches_subsequence_reference():
    patterns = generate_cayley(2) + generate_cayley(3)
    for w in generate_cayley(4):
        for p in patterns:
            assert contains(w, p) == _contains_reference(w, p)


def test_avoids_basis():
    assert avoids_basis((1, 2, 3), [(2, 1), (1, 1)])
    assert not avoids_basis((1, 2, 1), [(2, 1), (1, 1)])
    assert avoids_basis((2, 1), [])


def test_generate_cayley_counts():
    for n, expected in enumerate(FUBINI):
        perms = generate_cayley(n)
        assert len(perms) == expected
        assert len(set(perms)) == expected
        assert all(is_cayley(p) and len(p) == n for p in perms)


def test_generate_cayley_sorted_and_cached():
    assert generate_cayley(3) == tuple(sorted(generate_cayley(3)))


def test_generate_cayley_cap():
    with pytest.raises(ResourceCapExceeded):
        generate_cayley(11)
    with pytest.raises(ValueError):
        generate_cayley(-1)


def test_count_avoiders_mask_path_matches_direct_count():
    bases = [
        [(2, 1, 1), (3, 1, 2)],
        [(1, 1, 2), (2, 1, 2), (2, 1, 3), (3, 1, 2)],
        [(1, 2, 3)],
    ]
    for basis in bases:
        for n in range(0, 6):
            direct = sum(1 for w in generate_cayley(n) if avoids_basis(w, basis))
            assert count_avoiders(basis, n) == direct


def test_count_avoiders_general_path():
    basis = [(2, 3, 1), (3, 1, 2), (2, 1, 2, 1)]
    for n in range(0, 6):
        direct = sum(1 for w in generate_cayley(n) if avoids_basis(w, basis))
        assert count_avoiders(basis, n) == direct


def test_minimal_elements():
    assert minimal_elements([(1, 2, 3), (1, 2), (1, 2, 3, 4)]) == frozenset({(1, 2)})
    antichain = {(2, 1, 1), (1, 2)}
    assert minimal_elements(antichain) == frozenset(antichain)


def test_normalise_basis():
    assert normalise_basis([(1, 2), (1, 2, 3)]) == frozenset({(1, 2)})
    with pytest.raises(ValueError):
        normalise_basis([(1, 3)])
    with pytest.raises(ValueError):
        normalise_basis([()])


def test_parse_pattern():
    assert parse_pattern("2121") == (2, 1, 2, 1)
    assert parse_pattern("10,1,2,3,4,5,6,7,8,9") == (10, 1, 2, 3, 4, 5, 6, 7, 8, 9)
    with pytest.raises(ValueError):
        parse_pattern("2x1")
    with pytest.raises(ValueError):
        parse_pattern("")
    with pytest.raises(ValueError):
        parse_pattern("13")


def test_format_pattern_roundtrip():
    for p in generate_cayley(4):
        assert parse_pattern(format_pattern(p)) == p
    long = tuple(range(1, 12))
    assert parse_pattern(format_pattern(long)) == long


def test_parse_basis_normalises():
    basis = parse_basis(["123", "1234", "321"])
    assert basis == frozenset({(1, 2, 3), (3, 2, 1)})


def test_format_basis_sorted():
    assert format_basis([(3, 1, 2), (2, 3, 1)]) == "231 312"
    assert format_basis([(2, 1, 2, 1), (1, 2)]) == "12 2121"

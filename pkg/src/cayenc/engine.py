"""Rule systems, exact rational arithmetic, and class enumeration.

explore runs a worklist fixpoint over canonical factored tilings: each
state expands into one-letter children, every child factors into point
tiles plus at most one residual state, and the resulting right-linear
grammar is finite whenever the class is slot-bounded.  solve_gf turns the
grammar into a linear system over the field of rational functions and
eliminates exactly; series extracts counting terms.  Sequences exclude the
empty Cayley permutation, so every generating function has constant term
zero.

Polynomials are integer coefficient sequences indexed by exponent;
rational functions are kept in normal form (coprime, denominator constant
term positive).  Arithmetic is exact throughout.
"""

from __future__ import annotations

import itertools
import json
import string
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable

from .classify import is_horizontal_regular, is_vertical_regular
from .core import Cperm, format_basis, normalise_basis
from .tilings import (
    EMPTY_SET,
    POINT_TILE,
    Tiling,
    canonical_key,
    expand,
    factor,
    root_tiling,
)

DEFAULT_STATE_CAP = 10000

POINT_SYMBOL = "P"
EMPTY_SYMBOL = "E"


class NotSlotBounded(Exception):
    """The basis fails the slot-boundedness test for the requested mode."""


class StateCapExceeded(Exception):
    """Exploration grew past the configured state cap."""


class SingularSystem(Exception):
    """The grammar's linear system has no unique solution."""


@dataclass(frozen=True)
class Polynomial:
    """Integer polynomial; coeffs[i] is the coefficient of x^i."""

    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.coeffs and self.coeffs[-1] == 0:
            raise ValueError("trailing zero coefficient")

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def constant_term(self) -> int:
        return self.coeffs[0] if self.coeffs else 0

    def __add__(self, other: "Polynomial") -> "Polynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        return poly(
            (self.coeffs[i] if i < len(self.coeffs) else 0)
            + (other.coeffs[i] if i < len(other.coeffs) else 0)
            for i in range(n)
        )

    def __neg__(self) -> "Polynomial":
        return Polynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        if self.is_zero or other.is_zero:
            return ZERO
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return poly(out)

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        parts: list[str] = []
        for e, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mag = abs(c)
            if e == 0:
                body = str(mag)
            else:
                var = "x" if e == 1 else f"x^{e}"
                body = var if mag == 1 else f"{mag}{var}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts)


def poly(coeffs: Iterable[int]) -> Polynomial:
    """Build a polynomial, trimming trailing zeros."""
    out = list(coeffs)
    while out and out[-1] == 0:
        out.pop()
    return Polynomial(tuple(out))


ZERO = poly(())
ONE = poly((1,))
X = poly((0, 1))


def monomial(exponent: int, coefficient: int = 1) -> Polynomial:
    """coefficient * x^exponent."""
    if coefficient == 0:
        return ZERO
    return poly([0] * exponent + [coefficient])


def _content(p: Polynomial) -> int:
    out = 0
    for c in p.coeffs:
        out = gcd(out, c)
    return out


def _primitive(p: Polynomial) -> Polynomial:
    c = _content(p)
    if c <= 1:
        return p
    return Polynomial(tuple(a // c for a in p.coeffs))


def _pseudo_rem(a: Polynomial, b: Polynomial) -> Polynomial:
    """Remainder of a power of lc(b) times a divided by b."""
    lead = b.coeffs[-1]
    db = b.degree
    r = a
    while not r.is_zero and r.degree >= db:
        shift = r.degree - db
        r = poly(c * lead for c in r.coeffs) - monomial(shift, r.coeffs[-1]) * b
    return r


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Primitive gcd with positive leading coefficient."""
    if a.is_zero:
        g = _primitive(b)
    elif b.is_zero:
        g = _primitive(a)
    else:
        a, b = _primitive(a), _primitive(b)
        while not b.is_zero:
            if a.degree < b.degree:
                a, b = b, a
                continue
            a, b = b, _primitive(_pseudo_rem(a, b))
        g = a
    if g.coeffs and g.coeffs[-1] < 0:
        g = -g
    return g if not g.is_zero else ONE


def poly_div_exact(a: Polynomial, b: Polynomial) -> Polynomial:
    """Quotient a / b when b divides a over the integers."""
    if a.is_zero:
        return ZERO
    rem = list(a.coeffs)
    db = b.degree
    quot = [0] * (a.degree - db + 1)
    for k in range(len(quot) - 1, -1, -1):
        c = rem[k + db]
        q, r = divmod(c, b.coeffs[-1])
        if r:
            raise ValueError("division is not exact")
        quot[k] = q
        for i in range(db + 1):
            rem[k + i] -= q * b.coeffs[i]
    if any(rem):
        raise ValueError("division is not exact")
    return poly(quot)


@dataclass(frozen=True)
class RationalGF:
    """Quotient of integer polynomials in normal form.

    Normal form: numerator and denominator coprime with coprime integer
    contents, and the denominator's constant term positive (falling back
    to a positive leading coefficient when the constant term is zero, as
    happens for intermediate solver values).
    """

    num: Polynomial
    den: Polynomial

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    def __add__(self, other: "RationalGF") -> "RationalGF":
        return make_gf(self.num * other.den + other.num * self.den, self.den * other.den)

    def __neg__(self) -> "RationalGF":
        return RationalGF(-self.num, self.den)

    def __sub__(self, other: "RationalGF") -> "RationalGF":
        return self + (-other)

    def __mul__(self, other: "RationalGF") -> "RationalGF":
        return make_gf(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: "RationalGF") -> "RationalGF":
        if other.is_zero:
            raise ZeroDivisionError("rational function division by zero")
        return make_gf(self.num * other.den, self.den * other.num)

    def __str__(self) -> str:
        if self.den == ONE:
            return str(self.num)
        return f"({self.num})/({self.den})"


def make_gf(num: Polynomial, den: Polynomial) -> RationalGF:
    """Reduce num/den to normal form."""
    if den.is_zero:
        raise ZeroDivisionError("zero denominator")
    if num.is_zero:
        return RationalGF(ZERO, ONE)
    g = poly_gcd(num, den)
    if g != ONE:
        num, den = poly_div_exact(num, g), poly_div_exact(den, g)
    c = gcd(_content(num), _content(den))
    if c > 1:
        num = Polynomial(tuple(a // c for a in num.coeffs))
        den = Polynomial(tuple(a // c for a in den.coeffs))
    anchor = den.constant_term() or den.coeffs[-1]
    if anchor < 0:
        num, den = -num, -den
    return RationalGF(num, den)


GF_ZERO = make_gf(ZERO, ONE)
GF_X = make_gf(X, ONE)


def gf_equal(a: RationalGF, b: RationalGF) -> bool:
    """Equality by cross-multiplication, so presentation differences vanish."""
    return a.num * b.den == b.num * a.den


def gf_to_json(g: RationalGF) -> str:
    """Serialize as {"num": [...], "den": [...]} with index = exponent."""
    return json.dumps({"num": list(g.num.coeffs), "den": list(g.den.coeffs)})


def gf_from_json(text: str) -> RationalGF:
    """Inverse of gf_to_json."""
    data = json.loads(text)
    return make_gf(poly(data["num"]), poly(data["den"]))


@dataclass(frozen=True)
class Production:
    """One letter of an expansion rule and the factored child symbols."""

    letter: str
    children: tuple[str, ...]

    def point_count(self) -> int:
        return sum(1 for s in self.children if s == POINT_SYMBOL)

    def residual(self) -> str | None:
        for s in self.children:
            if s != POINT_SYMBOL:
                return s
        return None


@dataclass
class RuleSystem:
    """Right-linear grammar read off the tilings fixpoint.

    symbols binds each identifier to its canonical tiling, including the
    point symbol P and the empty symbol E; parsed systems keep only those
    two bindings, so symbols is excluded from equality.
    """

    start: str
    productions: dict[str, tuple[Production, ...]]
    symbols: dict[str, Tiling] = field(compare=False, default_factory=dict)

    def validate(self) -> None:
        """Check binding, right-linearity, and production coverage."""
        for sym, prods in self.productions.items():
            for p in prods:
                non_point = [s for s in p.children if s != POINT_SYMBOL]
                if len(non_point) > 1:
                    raise ValueError(f"production of {sym} is not right-linear")
                for child in non_point:
                    if child not in self.productions:
                        raise ValueError(f"unbound symbol {child}")
        if self.start not in self.productions:
            raise ValueError("start symbol has no productions")


def _symbol_names() -> Iterable[str]:
    yield "S"
    for c in string.ascii_uppercase:
        if c not in ("S", POINT_SYMBOL, EMPTY_SYMBOL):
            yield c
    for i in itertools.count(1):
        yield f"S{i}"


def explore(
    basis: Iterable[Cperm],
    mode: str = "vertical",
    max_states: int = DEFAULT_STATE_CAP,
) -> RuleSystem:
    """Breadth-first fixpoint over canonical factored tilings.

    Raises NotSlotBounded when the classification precondition fails and
    StateCapExceeded if more than max_states states appear.
    """
    basis = normalise_basis(basis)
    regular = is_vertical_regular(basis) if mode == "vertical" else is_horizontal_regular(basis)
    if not regular:
        raise NotSlotBounded(
            f"Av({format_basis(basis)}) is not {mode}-slot-bounded"
        )
    names = _symbol_names()
    start = next(names)
    root = root_tiling(basis)
    symbols: dict[str, Tiling] = {
        start: root,
        POINT_SYMBOL: POINT_TILE,
        EMPTY_SYMBOL: EMPTY_SET,
    }
    seen = {canonical_key(root): start}
    productions: dict[str, tuple[Production, ...]] = {}
    queue = deque([start])
    while queue:
        name = queue.popleft()
        tiling = symbols[name]
        if tiling.is_empty_set:
            productions[name] = ()
            continue
        prods: list[Production] = []
        for letter, child in expand(tiling, basis, mode):
            children: list[str] = []
            residual: Tiling | None = None
            for part in factor(child):
                if part == POINT_TILE:
                    children.append(POINT_SYMBOL)
                else:
                    residual = part
            if residual is not None:
                key = canonical_key(residual)
                if key not in seen:
                    if len(seen) >= max_states:
                        raise StateCapExceeded(
                            f"state cap exceeded: more than {max_states} states"
                        )
                    child_name = next(names)
                    seen[key] = child_name
                    symbols[child_name] = residual
                    queue.append(child_name)
                children.append(seen[key])
            prods.append(Production(str(letter), tuple(children)))
        productions[name] = tuple(prods)
    return RuleSystem(start=start, productions=productions, symbols=symbols)


def solve_gf(system: RuleSystem) -> RationalGF:
    """Solve the grammar's linear system for the start symbol's function.

    Each production contributes the product of its children's functions,
    with the point symbol standing for x; Gaussian elimination over the
    rational-function field keeps everything exact.
    """
    system.validate()
    names = list(system.productions)
    index = {n: i for i, n in enumerate(names)}
    size = len(names)
    matrix = [[GF_ZERO] * size for _ in range(size)]
    rhs = [GF_ZERO] * size
    for name, prods in system.productions.items():
        row = index[name]
        matrix[row][row] = matrix[row][row] + make_gf(ONE, ONE)
        for p in prods:
            weight = make_gf(monomial(p.point_count()), ONE)
            child = p.residual()
            if child is None:
                rhs[row] = rhs[row] + weight
            else:
                col = index[child]
                matrix[row][col] = matrix[row][col] - weight
    solution = _solve_linear(matrix, rhs)
    return solution[index[system.start]]


def _solve_linear(matrix: list[list[RationalGF]], rhs: list[RationalGF]) -> list[RationalGF]:
    """Gaussian elimination with exact rational-function arithmetic."""
    size = len(rhs)
    for col in range(size):
        pivot = next((r for r in range(col, size) if not matrix[r][col].is_zero), None)
        if pivot is None:
            raise SingularSystem("no pivot available")
        matrix[col], matrix[pivot] = matrix[pivot], matrix[col]
        rhs[col], rhs[pivot] = rhs[pivot], rhs[col]
        inv = matrix[col][col]
        for r in range(size):
            if r == col or matrix[r][col].is_zero:
                continue
            scale = matrix[r][col] / inv
            for c in range(col, size):
                matrix[r][c] = matrix[r][c] - scale * matrix[col][c]
            rhs[r] = rhs[r] - scale * rhs[col]
    return [rhs[r] / matrix[r][r] for r in range(size)]


def series(g: RationalGF, n: int) -> tuple[int, ...]:
    """Coefficients of x^1 .. x^n of the Taylor expansion at 0."""
    d0 = g.den.constant_term()
    if d0 == 0:
        raise ValueError("denominator constant term is zero")
    coeffs: list[Fraction] = []
    for k in range(n + 1):
        total = Fraction(g.num.coeffs[k] if k <= g.num.degree else 0)
        for i in range(1, min(k, g.den.degree) + 1):
            total -= g.den.coeffs[i] * coeffs[k - i]
        coeffs.append(total / d0)
    out = []
    for c in coeffs[1:]:
        if c.denominator != 1:
            raise ValueError("series has a non-integer coefficient")
        out.append(int(c))
    return tuple(out)


def enumerate_class(
    basis: Iterable[Cperm],
    mode: str = "vertical",
    terms: int = 10,
    max_states: int = DEFAULT_STATE_CAP,
) -> tuple[RationalGF, tuple[int, ...]]:
    """explore, solve, and expand; mode "both" tries vertical first."""
    if mode == "both":
        try:
            return enumerate_class(basis, "vertical", terms, max_states)
        except NotSlotBounded:
            return enumerate_class(basis, "horizontal", terms, max_states)
    system = explore(basis, mode, max_states)
    g = solve_gf(system)
    return g, series(g, terms)


def rule_system_to_json(system: RuleSystem) -> str:
    """Serialize per the fixed schema: start plus letter/children lists."""
    return json.dumps(
        {
            "start": system.start,
            "productions": {
                sym: [{"letter": p.letter, "children": list(p.children)} for p in prods]
                for sym, prods in system.productions.items()
            },
        },
        indent=2,
    )


def rule_system_from_json(text: str) -> RuleSystem:
    """Inverse of rule_system_to_json; tilings bindings are not restored."""
    data = json.loads(text)
    productions = {
        sym: tuple(Production(p["letter"], tuple(p["children"])) for p in prods)
        for sym, prods in data["productions"].items()
    }
    return RuleSystem(
        start=data["start"],
        productions=productions,
        symbols={POINT_SYMBOL: POINT_TILE, EMPTY_SYMBOL: EMPTY_SET},
    )


def grammar_text(system: RuleSystem) -> str:
    """Human-readable grammar listing, one symbol per line."""
    lines = []
    for sym, prods in system.productions.items():
        if not prods:
            lines.append(f"{sym} -> (empty)")
            continue
        alts = " | ".join(
            " ".join((p.letter, *p.children)) for p in prods
        )
        lines.append(f"{sym} -> {alts}")
    return "\n".join(lines)


def export_automaton(system: RuleSystem, format: str = "json") -> str:
    """Render the rule system as JSON (fixed schema) or Graphviz DOT.

    In DOT form each production is an edge labelled by its letter; a
    production with no residual child moves to the accepting node, so
    accepted words of length n correspond to class members of size n
    whenever every production places a single point.
    """
    if format == "json":
        return rule_system_to_json(system)
    if format != "dot":
        raise ValueError(f"unknown format {format!r}")
    lines = [
        "digraph rules {",
        "  rankdir=LR;",
        '  __start [shape=point, label=""];',
        '  accept [shape=doublecircle, label=""];',
        f"  __start -> {system.start};",
    ]
    for sym, prods in system.productions.items():
        lines.append(f"  {sym} [shape=circle];")
        for p in prods:
            target = p.residual() or "accept"
            lines.append(f'  {sym} -> {target} [label="{p.letter}"];')
    lines.append("}")
    return "\n".join(lines)


def word_count(system: RuleSystem, length: int) -> int:
    """Number of accepted words with exactly `length` letters."""
    cache: dict[tuple[str, int], int] = {}

    def walk(sym: str, n: int) -> int:
        if n == 0:
            return 0
        if (sym, n) in cache:
            return cache[sym, n]
        total = 0
        for p in system.productions[sym]:
            child = p.residual()
            if child is None:
                total += 1 if n == 1 else 0
            else:
                total += walk(child, n - 1)
        cache[sym, n] = total
        return total

    return walk(system.start, length)

"""Regular insertion encodings of Cayley permutation classes.

Decides whether a finitely based class of Cayley permutations has a
regular vertical or horizontal insertion encoding, builds the tilings
rule system for it, and computes the exact rational generating function
with a brute-force counting cross-check.
"""

from .classify import (
    hsb_basis,
    is_horizontal_regular,
    is_vertical_regular,
    missing_jux_classes,
    sb_basis,
    survey_size3,
)
from .core import (
    avoids_basis,
    contains,
    count_avoiders,
    format_basis,
    format_pattern,
    generate_cayley,
    parse_basis,
    parse_pattern,
    standardise,
)
from .encodings import (
    horizontal_decode,
    horizontal_encode,
    max_slots,
    vertical_decode,
    vertical_encode,
)
from .engine import (
    NotSlotBounded,
    RationalGF,
    RuleSystem,
    StateCapExceeded,
    enumerate_class,
    explore,
    gf_equal,
    series,
    solve_gf,
)
from .service import create_app

__all__ = [
    "NotSlotBounded",
    "RationalGF",
    "RuleSystem",
    "StateCapExceeded",
    "avoids_basis",
    "contains",
    "count_avoiders",
    "create_app",
    "enumerate_class",
    "explore",
    "format_basis",
    "format_pattern",
    "generate_cayley",
    "gf_equal",
    "horizontal_decode",
    "horizontal_encode",
    "hsb_basis",
    "is_horizontal_regular",
    "is_vertical_regular",
    "max_slots",
    "missing_jux_classes",
    "parse_basis",
    "parse_pattern",
    "sb_basis",
    "series",
    "solve_gf",
    "standardise",
    "survey_size3",
    "vertical_decode",
    "vertical_encode",
]

"""Filled groups: product-free sets, local maximality and the filled-group classifier."""

from __future__ import annotations

__version__ = "0.1.0"

from .automorphisms import Automorphisms, automorphism_group
from .classifier import KNOWN_FILLED_TABLE, ClassifierFlags, classify_filled, known_filled_members
from .elemset import ElemSet
from .errors import *  # noqa: F401,F403
from .groups import (
    ExtraspecialFrame,
    FiniteGroup,
    build_frame,
    build_group,
    center,
    conjugacy_classes,
    normal_subgroups,
    quotient,
    structure_predicates,
)
from .pfs import (
    addable_set,
    dihedral_split,
    fills,
    inverse_set,
    is_locally_maximal,
    is_product_free,
    product_set,
    sqrt_set,
    t_closure,
)
from .search import (
    SearchConfig,
    Verdict,
    exhaustive_filled_check,
    orbit_representatives_triples,
    random_nonfilling_lmpfs,
    verify_witness,
)
from .specs import GroupSpec, canonical, parse_group_spec
from .witnesses import central_c4_witness, d44_witness, dihedral_witness, extraspecial_witness

"""Edge-primitive graphs from subgroup lattices of permutation groups."""

from .perm import Permutation, parse_cycles, product, inverse, CycleSyntaxError
from .group import (
    PermGroup, bsgs, stabilizer, minimal_block_system, is_primitive, is_biprimitive,
    is_normalized, normal_closure, coset_action, is_maximal, intersection,
)

__version__ = "0.1.0"

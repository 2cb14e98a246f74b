"""Drury-Arveson-type Hilbert modules on products of rooted directed trees."""
from .errors import DartreeError
from .trees import (
    RootedTreePrefix,
    branching_index,
    canonical_form,
    generation_count,
    graph_isomorphic,
    make_standard,
    validate_tree,
)
from .product import ProductTree, build_product
from .multishift import Multishift, WeightSequence, cauchy_dual, family_weights
from .cokernel import KernelBlock, dim_E, joint_kernel_bruteforce, kernel_blocks
from .classify import build_intertwiner, modules_isomorphic

__all__ = [
    "DartreeError", "RootedTreePrefix", "branching_index", "canonical_form",
    "generation_count", "graph_isomorphic", "make_standard", "validate_tree",
    "ProductTree", "build_product", "Multishift", "WeightSequence", "cauchy_dual",
    "family_weights", "KernelBlock", "dim_E", "joint_kernel_bruteforce",
    "kernel_blocks", "build_intertwiner", "modules_isomorphic",
]

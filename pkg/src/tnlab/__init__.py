"""Transformation networks over finite unitary groups.

Build groups and nodes, compose them into hierarchical networks, and
measure how exactly the invariance identities hold.
"""
from .errors import (
    BlockSizeMismatch,
    ClosureError,
    ConfigError,
    DimensionError,
    EmptyNode,
    InvalidSupport,
    InvalidTemplate,
    NonFiniteInput,
    OrbitMismatch,
    OverlappingSupports,
    TNError,
    UnsupportedTransform,
)
from .groups import (
    AxiomReport,
    FiniteUnitaryGroup,
    GroupElement,
    SupportSet,
    act,
    cyclic_blocks,
    group_average,
    group_from_json,
    group_to_json,
    make_block_permutation_group,
    make_cyclic_translation_group,
    make_explicit_group,
    make_product_group,
    verify_group_axioms,
)
from .network import (
    SupportHierarchy,
    TNNetwork,
    TransformSpec,
    apply_transform,
    certified_network,
    feature_covariance_deficit,
    fig1_network,
    forward,
    hierarchy_cost,
    iter_transform_specs,
    layer_group_sizes,
    learn_layer_templates,
    nonlinear_invariance_deficit,
    random_transform_spec,
)
from .node import TemplateSet, TNNode, invariance_deficit, make_node, make_template_set, node_output
from .nonlinearity import HARD_RELU, IDENTITY, Activation, frac_power, stability_deficit, sup_distance

__version__ = "0.1.0"

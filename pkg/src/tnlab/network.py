"""Multi-layer TN networks over a hierarchy of disjoint supports.

Layers are 0-based here: ``net.layers[0]`` reads raw input patches and
``net.layers[l]`` (l >= 1) reads the concatenated output of layer l-1,
ordered by node and then by channel. An upper-layer node's support is
therefore a set of *feature* coordinates, while its receptive field is the
set of input coordinates beneath it.

A transform ``h = g_1 o eta o g_2 o ... o eta o g_L`` is represented by a
:class:`TransformSpec` whose elements all act on the input space; an
upper-layer group element becomes an input-space block permutation through
:func:`lift_element`.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

from . import nonlinearity as nl
from .errors import DimensionError, OrbitMismatch, UnsupportedTransform
from .groups import (
    FiniteUnitaryGroup,
    GroupElement,
    SupportSet,
    act,
    check_disjoint,
    cyclic_blocks,
    embed,
    make_block_permutation_group,
    make_cyclic_translation_group,
)
from .node import TemplateSet, TNNode, make_template_set, node_from_json, node_output, node_to_json
from .nonlinearity import Activation

ORBIT_TOL = 1e-12
INT64_MAX = 2**63 - 1


@dataclass(frozen=True)
class SupportHierarchy:
    """Input-space receptive fields per layer plus the child lists linking them.

    ``parent_map[l - 1][i]`` lists the layer-(l-1) supports whose union is
    ``layers[l][i]``; children must be contiguous and used at most once.
    """

    layers: tuple[tuple[SupportSet, ...], ...]
    parent_map: tuple[tuple[tuple[int, ...], ...], ...] = ()

    def __post_init__(self):
        layers = tuple(tuple(layer) for layer in self.layers)
        pmap = tuple(tuple(tuple(int(c) for c in ch) for ch in lvl) for lvl in self.parent_map)
        object.__setattr__(self, "layers", layers)
        object.__setattr__(self, "parent_map", pmap)
        if not layers or not all(layers):
            raise ValueError("every layer needs at least one support")
        if len(pmap) != len(layers) - 1:
            raise ValueError("parent_map needs one entry per layer above the first")
        for layer in layers:
            check_disjoint(layer)
        for l, children_lists in enumerate(pmap, start=1):
            if len(children_lists) != len(layers[l]):
                raise ValueError(f"layer {l}: parent_map lists {len(children_lists)} nodes, "
                                 f"hierarchy has {len(layers[l])}")
            used = [c for ch in children_lists for c in ch]
            if len(set(used)) != len(used):
                raise ValueError(f"layer {l}: a child is claimed by two parents")
            for i, ch in enumerate(children_lists):
                if not ch or list(ch) != list(range(ch[0], ch[0] + len(ch))):
                    raise ValueError(f"layer {l} node {i}: children {ch} are not contiguous")
                union = set().union(*(layers[l - 1][c].indices for c in ch))
                if union != set(layers[l][i].indices):
                    raise ValueError(f"layer {l} node {i}: support differs from its children's union")

    @classmethod
    def from_parent_map(cls, base: Sequence[SupportSet], parent_map) -> "SupportHierarchy":
        layers = [tuple(base)]
        for lvl in parent_map:
            below = layers[-1]
            layers.append(tuple(
                SupportSet(tuple(i for c in ch for i in below[c].indices), below[0].ambient_dim)
                for ch in lvl
            ))
        return cls(tuple(layers), tuple(tuple(tuple(ch) for ch in lvl) for lvl in parent_map))

    @classmethod
    def regular(cls, block_size: int, branching: Sequence[int]) -> "SupportHierarchy":
        """Consecutive blocks of ``block_size`` grouped ``branching[l]`` at a time."""
        n = math.prod(branching)
        base = cyclic_blocks(n, block_size)
        pmap, count = [], n
        for b in branching:
            pmap.append([tuple(range(k * b, (k + 1) * b)) for k in range(count // b)])
            count //= b
        return cls.from_parent_map(base, pmap)

    @property
    def depth(self) -> int:
        return len(self.layers)

    @property
    def input_dim(self) -> int:
        return self.layers[0][0].ambient_dim

    @property
    def is_covering(self) -> bool:
        top = self.layers[-1]
        return len(top) == 1 and set(top[0].indices) == set(range(self.input_dim))

    def truncate(self, depth: int) -> "SupportHierarchy":
        return SupportHierarchy(self.layers[:depth], self.parent_map[: depth - 1])


@dataclass(frozen=True, eq=False)
class TNNetwork:
    hierarchy: SupportHierarchy
    layers: tuple[tuple[TNNode, ...], ...]
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        layers = tuple(tuple(layer) for layer in self.layers)
        object.__setattr__(self, "layers", layers)
        h = self.hierarchy
        if len(layers) != h.depth:
            raise ValueError(f"{len(layers)} node layers for a hierarchy of depth {h.depth}")
        for l, (nodes, supports) in enumerate(zip(layers, h.layers)):
            if len(nodes) != len(supports):
                raise ValueError(f"layer {l}: {len(nodes)} nodes for {len(supports)} supports")
            if l == 0:
                for i, (node, s) in enumerate(zip(nodes, supports)):
                    if node.support.indices != s.indices:
                        raise DimensionError(f"layer 0 node {i}: support does not match hierarchy")
                continue
            offsets = _offsets(layers[l - 1])
            below = layers[l - 1]
            for i, node in enumerate(nodes):
                want = tuple(
                    offsets[c] + k for c in h.parent_map[l - 1][i] for k in range(below[c].n_channels)
                )
                if node.support.indices != want:
                    raise DimensionError(
                        f"layer {l} node {i}: support {node.support.indices} should address "
                        f"child feature coordinates {want}"
                    )

    @property
    def depth(self) -> int:
        return len(self.layers)

    @property
    def input_dim(self) -> int:
        return self.hierarchy.input_dim

    def output_dim(self, layer: int) -> int:
        return sum(n.n_channels for n in self.layers[layer])

    def offsets(self, layer: int) -> list[int]:
        return _offsets(self.layers[layer])

    def receptive_field(self, layer: int, node: int) -> tuple[int, ...]:
        """Ordered input coordinates under a node (children concatenated in order)."""
        key = ("rf", layer, node)
        if key not in self._cache:
            if layer == 0:
                rf = self.layers[0][node].support.indices
            else:
                rf = tuple(i for c in self.hierarchy.parent_map[layer - 1][node]
                           for i in self.receptive_field(layer - 1, c))
            self._cache[key] = rf
        return self._cache[key]

    def node_group(self, layer: int, node: int) -> FiniteUnitaryGroup:
        """The group shared by all channels of a node (needed to build transforms)."""
        chans = self.layers[layer][node].channels
        G = chans[0].group
        for ts in chans[1:]:
            if ts.group is not G and ts.group.description != G.description:
                raise UnsupportedTransform(f"layer {layer} node {node}: channels use different groups")
        return G

    def lifted_group(self, layer: int, node: int) -> FiniteUnitaryGroup:
        """A node's group acting on its input receptive field, in the node group's element order."""
        key = ("lift", layer, node)
        if key not in self._cache:
            G = self.node_group(layer, node)
            if layer == 0:
                lifted = _with_ambient(G, self.input_dim)
            else:
                elements = [lift_element(self, layer, node, g) for g in G.elements]
                lifted = FiniteUnitaryGroup(elements, elements[0].support, _table=G.composition_table)
            self._cache[key] = lifted
        return self._cache[key]

    @cached_property
    def input_support(self) -> SupportSet:
        return SupportSet.range(0, self.input_dim)


def _offsets(nodes: Sequence[TNNode]) -> list[int]:
    out, acc = [], 0
    for n in nodes:
        out.append(acc)
        acc += n.n_channels
    return out


def _with_ambient(G: FiniteUnitaryGroup, dim: int) -> FiniteUnitaryGroup:
    if G.support.ambient_dim == dim:
        return G
    support = G.support.with_ambient(dim)
    elements = [
        GroupElement(support, perm=g.perm, signs=g.signs, id=g.id) if g.perm is not None
        else GroupElement(support, matrix=g.matrix, id=g.id, check=False)
        for g in G.elements
    ]
    return FiniteUnitaryGroup(elements, support, description=G.description, _table=G.composition_table)


# ---------------------------------------------------------------------------
# forward pass


def forward(net: TNNetwork, x) -> list[np.ndarray]:
    """Feature vectors of every layer, shape (..., output_dim(l)) each."""
    x = np.asarray(x, dtype=float)
    if x.ndim == 0 or x.shape[-1] != net.input_dim:
        raise DimensionError(f"expected input of length {net.input_dim}, got shape {x.shape}")
    outs = []
    h = x
    for nodes in net.layers:
        h = np.concatenate([node_output(n, h) for n in nodes], axis=-1)
        outs.append(h)
    return outs


def top(net: TNNetwork, x) -> np.ndarray:
    return forward(net, x)[-1]


# ---------------------------------------------------------------------------
# transforms


def lift_block_permutation(g: GroupElement, child_fields: Sequence[Sequence[int]],
                           child_channels: Sequence[int], input_dim: int) -> GroupElement:
    """Turn a permutation of child channel blocks into an input-space permutation.

    ``g`` acts on the concatenated channel blocks of the children, in order.
    It must move each block onto another block coordinate for coordinate;
    input coordinate k under child c then maps to input coordinate k under
    the destination child.
    """
    if g.perm is None or not g.is_pure_permutation:
        raise UnsupportedTransform("only pure permutations of child blocks can be lifted")
    blocks, start = [], 0
    for n in child_channels:
        blocks.append(np.arange(start, start + n))
        start += n
    if start != len(g.perm):
        raise DimensionError("child channel blocks do not cover the element's support")
    block_at = {int(b[0]): j for j, b in enumerate(blocks)}
    rf = [i for f in child_fields for i in f]
    rf_pos = {idx: k for k, idx in enumerate(rf)}
    dest = np.empty(len(rf), dtype=np.intp)
    for j, block in enumerate(blocks):
        moved = g.perm[block]
        target = block_at.get(int(moved[0]))
        if target is None or not np.array_equal(moved, blocks[target]):
            raise UnsupportedTransform(f"element {g.id!r} does not move whole child blocks")
        src, dst = child_fields[j], child_fields[target]
        if len(src) != len(dst):
            raise UnsupportedTransform("children have receptive fields of different sizes")
        dest[[rf_pos[i] for i in src]] = [rf_pos[i] for i in dst]
    return GroupElement(SupportSet(tuple(rf), input_dim), perm=dest, id=g.id)


def lift_element(net: TNNetwork, layer: int, node: int, g: GroupElement) -> GroupElement:
    """Express an element of an upper-layer node's group as an input-space permutation."""
    if layer == 0:
        raise ValueError("layer-0 elements already act on the input")
    children = net.hierarchy.parent_map[layer - 1][node]
    below = net.layers[layer - 1]
    return lift_block_permutation(
        g,
        [net.receptive_field(layer - 1, c) for c in children],
        [below[c].n_channels for c in children],
        net.input_dim,
    )


@dataclass(frozen=True, eq=False)
class TransformSpec:
    """Input-space elements [g_1, ..., g_L] and the activation placed between them."""

    elements: tuple[GroupElement, ...]
    activation: Activation = nl.HARD_RELU
    choices: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        if not self.elements:
            raise ValueError("a transform needs at least one element")

    @property
    def depth(self) -> int:
        return len(self.elements)


def apply_transform(spec: TransformSpec, x, eta: Activation | None = None) -> np.ndarray:
    """g_1(eta(g_2(... eta(g_L(x)) ...))), evaluated right to left."""
    eta = spec.activation if eta is None else eta
    y = np.asarray(x, dtype=float)
    for l in range(spec.depth - 1, -1, -1):
        y = act(spec.elements[l], y)
        if l > 0:
            y = nl.apply(eta, y)
    return y


def layer_group_sizes(net: TNNetwork) -> list[int]:
    """Per layer, the order of the product of that layer's node groups."""
    return [math.prod(len(net.node_group(l, i)) for i in range(len(nodes)))
            for l, nodes in enumerate(net.layers)]


def make_transform_spec(net: TNNetwork, choices, activation: Activation | None = None) -> TransformSpec:
    """Transform picking element ``choices[l][i]`` of node (l, i)'s group at every layer."""
    if len(choices) != net.depth:
        raise DimensionError(f"need choices for {net.depth} layers, got {len(choices)}")
    elements = []
    for l, layer_choice in enumerate(choices):
        if len(layer_choice) != len(net.layers[l]):
            raise DimensionError(f"layer {l}: need one choice per node")
        pieces = [net.lifted_group(l, i).elements[k] for i, k in enumerate(layer_choice)]
        elements.append(embed(pieces, net.input_support, id=tuple(layer_choice)))
    eta = activation if activation is not None else net.layers[0][0].activation
    return TransformSpec(tuple(elements), eta, tuple(tuple(c) for c in choices))


def _choice_ranges(net: TNNetwork):
    return [[range(len(net.node_group(l, i))) for i in range(len(nodes))]
            for l, nodes in enumerate(net.layers)]


def iter_transform_specs(net: TNNetwork, activation: Activation | None = None) -> Iterator[TransformSpec]:
    """Every transform of the network's class, layer 0 varying fastest... last."""
    per_node = [r for layer in _choice_ranges(net) for r in layer]
    counts = [len(nodes) for nodes in net.layers]
    for flat in itertools.product(*per_node):
        choices, k = [], 0
        for c in counts:
            choices.append(flat[k:k + c])
            k += c
        yield make_transform_spec(net, choices, activation)


def random_transform_spec(net: TNNetwork, rng: np.random.Generator,
                          activation: Activation | None = None) -> TransformSpec:
    choices = [[int(rng.integers(len(r))) for r in layer] for layer in _choice_ranges(net)]
    return make_transform_spec(net, choices, activation)


def _full_perm(g: GroupElement, dim: int):
    if g.perm is None:
        return None
    idx = g.support.array
    dest = np.arange(dim)
    signs = np.ones(dim)
    dest[idx] = idx[g.perm]
    signs[idx] = g.signs
    return dest, signs


def _restrict(dest: np.ndarray, signs: np.ndarray, indices: Sequence[int], dim: int) -> GroupElement | None:
    """The element induced on ``indices`` if the full permutation maps them onto themselves."""
    idx = np.asarray(indices, dtype=np.intp)
    image = dest[idx]
    if set(image.tolist()) != set(idx.tolist()):
        return None
    pos = {int(i): k for k, i in enumerate(idx)}
    return GroupElement(SupportSet(tuple(indices), dim),
                        perm=[pos[int(i)] for i in image], signs=signs[idx])


def spec_choices(net: TNNetwork, spec: TransformSpec) -> tuple:
    """Recover per-node element indices of ``spec``; raise if it is outside the class."""
    if spec.depth != net.depth:
        raise UnsupportedTransform(f"transform has {spec.depth} stages, network has {net.depth} layers")
    dim = net.input_dim
    out = []
    for l, g in enumerate(spec.elements):
        full = _full_perm(g, dim)
        if full is None:
            raise UnsupportedTransform("dense-matrix transforms are outside the certified class")
        dest, signs = full
        covered = set()
        layer_choice = []
        for i in range(len(net.layers[l])):
            rf = net.receptive_field(l, i)
            covered |= set(rf)
            local = _restrict(dest, signs, rf, dim)
            G = net.lifted_group(l, i)
            k = None if local is None else G.index_of(local)
            if k is None:
                raise UnsupportedTransform(f"layer {l} element is not in node {i}'s group")
            layer_choice.append(k)
        rest = np.array(sorted(set(range(dim)) - covered), dtype=np.intp)
        if rest.size and not (np.array_equal(dest[rest], rest) and np.all(signs[rest] == 1)):
            raise UnsupportedTransform(f"layer {l} element moves coordinates outside every node")
        out.append(tuple(layer_choice))
    return tuple(out)


def is_certified_configuration(net: TNNetwork) -> bool:
    for l, nodes in enumerate(net.layers):
        for i, nd in enumerate(nodes):
            if nd.activation.kind not in ("hard_relu", "identity"):
                return False
            for ts in nd.channels:
                if not all(g.is_pure_permutation for g in ts.group.elements):
                    return False
            if l > 0:
                try:
                    net.lifted_group(l, i)
                except UnsupportedTransform:
                    return False
    return True


def nonlinear_invariance_deficit(net: TNNetwork, x, spec: TransformSpec, *, strict: bool = True,
                                 per_sample: bool = False):
    """max over channels of |top(h(x)) - top(x)|.

    With ``strict`` the network must be in the certified configuration and
    the transform must belong to its class; otherwise the deficit is only
    measured. ``per_sample`` returns one value per leading-axis row instead
    of the overall maximum.
    """
    if strict:
        if not is_certified_configuration(net):
            raise UnsupportedTransform("network is not in the certified configuration")
        spec_choices(net, spec)
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != net.input_dim:
        raise DimensionError(f"expected input of length {net.input_dim}, got shape {x.shape}")
    diff = np.abs(top(net, apply_transform(spec, x)) - top(net, x))
    if per_sample:
        return diff.max(axis=-1)
    return float(np.max(diff))


def induced_feature_map(net: TNNetwork, g: GroupElement) -> np.ndarray:
    """Feature-coordinate destinations for a block-aligned input permutation.

    Returns ``dest`` such that feature coordinate k of layer 0 moves to
    ``dest[k]``. Raises when ``g`` does not map every layer-0 support onto a
    layer-0 support with the same channel count.
    """
    full = _full_perm(g, net.input_dim)
    if full is None or not np.all(full[1] == 1):
        raise UnsupportedTransform("only pure permutations can be block-aligned")
    dest = full[0]
    nodes = net.layers[0]
    owner = {frozenset(n.support.indices): j for j, n in enumerate(nodes)}
    offsets = net.offsets(0)
    fdest = np.empty(net.output_dim(0), dtype=np.intp)
    for j, nd in enumerate(nodes):
        image = frozenset(dest[list(nd.support.indices)].tolist())
        k = owner.get(image)
        if k is None or nodes[k].n_channels != nd.n_channels:
            raise UnsupportedTransform(f"transform does not map layer-0 support {j} onto a support")
        for c in range(nd.n_channels):
            fdest[offsets[j] + c] = offsets[k] + c
    return fdest


def feature_covariance_deficit(net: TNNetwork, x, g2: GroupElement, *, per_sample: bool = False):
    """||features(g2(x)) - g'(features(x))||_inf on layer-0 features."""
    fdest = induced_feature_map(net, g2)
    x = np.asarray(x, dtype=float)
    f_x = forward(net, x)[0]
    f_gx = forward(net, act(g2, x))[0]
    moved = np.empty_like(f_x)
    moved[..., fdest] = f_x
    diff = np.abs(f_gx - moved)
    if per_sample:
        return diff.max(axis=-1)
    return float(np.max(diff))


# ---------------------------------------------------------------------------
# template learning


def learn_layer_templates(layer_inputs, G: FiniteUnitaryGroup, mode: str = "orbit_sample") -> list[TemplateSet]:
    """Template sets from observed data.

    ``orbit_sample``: the inputs are one or more consecutive runs of |G|
    vectors, each run the orbit g(t) of its first entry in element order.
    ``given_template``: each input is a base template.
    """
    vecs = [np.asarray(v, dtype=float) for v in layer_inputs]
    if mode == "given_template":
        return [make_template_set(v, G) for v in vecs]
    if mode != "orbit_sample":
        raise ValueError(f"unknown mode {mode!r}")
    n = len(G)
    if not vecs or len(vecs) % n:
        raise OrbitMismatch(f"expected a multiple of |G| = {n} samples, got {len(vecs)}")
    out = []
    for start in range(0, len(vecs), n):
        observed = np.stack(vecs[start:start + n])
        ts = make_template_set(observed[0], G)
        err = np.max(np.abs(ts.transformed - observed))
        if err > ORBIT_TOL * max(1.0, float(np.max(np.abs(observed)))):
            raise OrbitMismatch(f"samples {start}..{start + n - 1} deviate from a G-orbit by {err:.3g}")
        out.append(ts)
    return out


def hierarchy_cost(group_sizes: Sequence[int]) -> tuple[int, int]:
    """(flat, hierarchical) = (product, sum) of the per-layer group orders."""
    sizes = [int(s) for s in group_sizes]
    if not sizes or any(s < 1 for s in sizes):
        raise ValueError("group sizes must be positive")
    flat = 1
    for s in sizes:
        flat *= s
        if flat > INT64_MAX:
            raise OverflowError("flat cost exceeds the int64 range")
    hier = sum(sizes)
    return flat, hier


# ---------------------------------------------------------------------------
# construction


def default_branching(depth: int) -> list[int]:
    return {1: [], 2: [4], 3: [4, 2]}.get(depth) or [2] * (depth - 1)


def certified_network(
    depth: int = 2,
    block_size: int = 4,
    branching: Sequence[int] | None = None,
    channels: int = 1,
    pooling: str = "mean",
    top_pooling: str | None = None,
    activation: Activation = nl.HARD_RELU,
    templates: str = "one_hot",
    rng: np.random.Generator | int | None = 0,
) -> TNNetwork:
    """Weight-shared network in the certified class, templates learned from orbits.

    Layer 0 has C_{block_size} nodes on consecutive input blocks. Each upper
    node permutes its children's channel blocks (the full symmetric group on
    the children). Upper-layer templates are obtained by pushing the orbit of
    a random non-negative input template under the lifted group through the
    layers below and validating it as an orbit.
    """
    branching = list(default_branching(depth) if branching is None else branching)
    if len(branching) != depth - 1:
        raise ValueError("branching needs depth - 1 entries")
    rng = np.random.default_rng(rng)
    hier = SupportHierarchy.regular(block_size, branching)
    upper_pooling = pooling if top_pooling is None else top_pooling

    def base_templates():
        if templates == "one_hot":
            return [np.eye(block_size)[c % block_size] for c in range(channels)]
        if templates == "random":
            return [rng.uniform(0.0, 1.0, block_size) for _ in range(channels)]
        raise ValueError(f"unknown template scheme {templates!r}")

    layer0 = []
    bases = base_templates()
    for s in hier.layers[0]:
        G = make_cyclic_translation_group(s)
        sets = learn_layer_templates([row for t in bases for row in _orbit(G, t)], G)
        layer0.append(TNNode(tuple(sets), pooling, activation, s))
    layers = [tuple(layer0)]

    for l in range(1, depth):
        partial = TNNetwork(hier.truncate(l), tuple(layers))
        offsets = partial.offsets(l - 1)
        below = layers[l - 1]
        dim_below = partial.output_dim(l - 1)
        rf_len = len(hier.layers[l][0])
        input_templates = [rng.uniform(0.0, 1.0, rf_len) for _ in range(channels)]
        nodes = []
        for i, children in enumerate(hier.parent_map[l - 1]):
            blocks = [SupportSet(tuple(offsets[c] + k for k in range(below[c].n_channels)), dim_below)
                      for c in children]
            G = make_block_permutation_group(blocks)
            support = G.support
            fields = [partial.receptive_field(l - 1, c) for c in children]
            rf = [i for f in fields for i in f]
            samples = []
            for T in input_templates:
                for g in G.elements:
                    lifted = lift_block_permutation(g, fields, [below[c].n_channels for c in children],
                                                    partial.input_dim)
                    xin = np.zeros(partial.input_dim)
                    xin[rf] = lifted.apply_local(T)
                    samples.append(forward(partial, xin)[-1][list(support.indices)])
            sets = learn_layer_templates(samples, G)
            nodes.append(TNNode(tuple(sets), upper_pooling, activation, support))
        layers.append(tuple(nodes))
    return TNNetwork(hier, tuple(layers))


def _orbit(G: FiniteUnitaryGroup, t) -> list[np.ndarray]:
    return [g.apply_local(t) for g in G.elements]


def fig1_network(**kwargs) -> TNNetwork:
    """Four C_4 nodes on a 16-dim input under one node permuting their outputs."""
    return certified_network(depth=2, block_size=4, branching=[4], **kwargs)


# ---------------------------------------------------------------------------
# JSON


def network_to_json(net: TNNetwork) -> dict:
    return {
        "input_dim": net.input_dim,
        "layers": [[node_to_json(n) for n in nodes] for nodes in net.layers],
        "hierarchy": [[list(ch) for ch in lvl] for lvl in net.hierarchy.parent_map],
    }


def network_from_json(doc: dict) -> TNNetwork:
    """Inverse of :func:`network_to_json`; upper-layer node supports index features."""
    input_dim = int(doc["input_dim"])
    layer_docs = doc["layers"]
    layers, dim = [], input_dim
    for nodes_doc in layer_docs:
        nodes = tuple(node_from_json(nd, dim) for nd in nodes_doc)
        layers.append(nodes)
        dim = sum(n.n_channels for n in nodes)
    base = [n.support.with_ambient(input_dim) for n in layers[0]]
    hier = SupportHierarchy.from_parent_map(base, doc.get("hierarchy", []))
    return TNNetwork(hier, tuple(layers))

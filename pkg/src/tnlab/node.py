"""A single TN node: template orbits, group-integrated pooling, activation.

For input ``x`` the node computes, per channel ``c``::

    eta( pool_{g in G_c} <x_support, g(t_c)> )

with ``pool`` the uniform mean (normalized by 1/|G|) or the maximum.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import nonlinearity as nl
from .errors import DimensionError, EmptyNode, InvalidTemplate
from .groups import (
    FiniteUnitaryGroup,
    SupportSet,
    act,
    group_from_json,
    group_to_json,
)
from .nonlinearity import Activation

POOLINGS = ("mean", "max")
NORM_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class TemplateSet:
    """Base template and its cached orbit; row i of ``transformed`` is elements[i](t)."""

    template: np.ndarray
    group: FiniteUnitaryGroup
    transformed: np.ndarray

    def __len__(self):
        return len(self.transformed)

    @property
    def support(self) -> SupportSet:
        return self.group.support


def make_template_set(t, G: FiniteUnitaryGroup) -> TemplateSet:
    t = np.array(t, dtype=float)
    if t.shape != (len(G.support),):
        raise DimensionError(f"template shape {t.shape} does not match support size {len(G.support)}")
    if not np.all(np.isfinite(t)):
        raise InvalidTemplate("template contains NaN or inf")
    orbit = np.stack([g.apply_local(t) for g in G.elements])
    norms = np.linalg.norm(orbit, axis=1)
    if np.max(np.abs(norms - np.linalg.norm(t))) > NORM_TOL * max(1.0, np.linalg.norm(t)):
        raise InvalidTemplate("orbit norms differ; group is not unitary")
    t.setflags(write=False)
    orbit.setflags(write=False)
    return TemplateSet(t, G, orbit)


@dataclass(frozen=True, eq=False)
class TNNode:
    channels: tuple[TemplateSet, ...]
    pooling: str
    activation: Activation
    support: SupportSet

    def __post_init__(self):
        channels = tuple(self.channels)
        object.__setattr__(self, "channels", channels)
        if not channels:
            raise EmptyNode("a node needs at least one channel")
        if self.pooling not in POOLINGS:
            raise ValueError(f"pooling must be one of {POOLINGS}, got {self.pooling!r}")
        for ts in channels:
            if ts.support.indices != self.support.indices:
                raise DimensionError("every channel's group must act on the node's support")

    @property
    def n_channels(self) -> int:
        return len(self.channels)

    @property
    def has_zero_template(self) -> bool:
        return any(not np.any(ts.template) for ts in self.channels)


def make_node(
    templates,
    groups: FiniteUnitaryGroup | list[FiniteUnitaryGroup],
    pooling: str = "mean",
    activation: Activation = nl.HARD_RELU,
) -> TNNode:
    """Node with one channel per template; a single group is shared by all channels."""
    templates = [np.asarray(t, dtype=float) for t in templates]
    if not templates:
        raise EmptyNode("a node needs at least one channel")
    if isinstance(groups, FiniteUnitaryGroup):
        groups = [groups] * len(templates)
    if len(groups) != len(templates):
        raise ValueError("need one group per template")
    channels = tuple(make_template_set(t, G) for t, G in zip(templates, groups))
    node = TNNode(channels, pooling, activation, groups[0].support)
    if node.has_zero_template:
        warnings.warn("node has an all-zero template; its output is eta(0) for that channel",
                      stacklevel=2)
    return node


def pooled(node: TNNode, x) -> np.ndarray:
    """Pre-activation pooled dot products, shape (..., channels)."""
    x = np.asarray(x, dtype=float)
    if x.ndim == 0:
        raise DimensionError("node input must be a vector")
    idx = node.support.array
    if x.shape[-1] <= idx.max():
        raise DimensionError(
            f"input of length {x.shape[-1]} does not cover node support up to index {idx.max()}"
        )
    patch = x[..., idx]
    out = []
    for ts in node.channels:
        dots = _orbit_dots(patch, ts.transformed)
        if node.pooling == "mean":
            out.append(_fixed_order_sum(np.moveaxis(dots, -1, 0)) / len(ts))
        else:
            out.append(dots.max(axis=-1))
    return np.stack(out, axis=-1)


def _fixed_order_sum(terms: np.ndarray) -> np.ndarray:
    """Left-to-right sum over the first axis; rounding does not depend on batch shape."""
    acc = terms[0].copy()
    for t in terms[1:]:
        acc += t
    return acc


def _orbit_dots(patch: np.ndarray, orbit: np.ndarray) -> np.ndarray:
    """<patch, orbit[k]> for every k, shape (..., |G|)."""
    return _fixed_order_sum(np.moveaxis(patch[..., None, :] * orbit, -1, 0))


def node_output(node: TNNode, x) -> np.ndarray:
    """Node features for ``x`` (ambient coordinates, batched on leading axes)."""
    return nl.apply(node.activation, pooled(node, x))


def invariance_deficit(node: TNNode, x, probe: FiniteUnitaryGroup) -> float:
    """max over probe elements and channels of |out(x) - out(g(x))|."""
    x = np.asarray(x, dtype=float)
    if not set(probe.support.indices) <= set(node.support.indices):
        raise DimensionError("probe group must act within the node's support")
    base = node_output(node, x)
    worst = 0.0
    for g in probe.elements:
        worst = max(worst, float(np.max(np.abs(node_output(node, act(g, x)) - base))))
    return worst


def transfer_deficit(ts: TemplateSet, x) -> float:
    """max over g of |<x, g(t)> - <g^-1(x), t>| in support coordinates."""
    x = np.asarray(x, dtype=float)
    G = ts.group
    worst = 0.0
    for k, g in enumerate(G.elements):
        g_inv = G.elements[G.inverse_table[k]]
        worst = max(worst, abs(float(x @ ts.transformed[k]) - float(g_inv.apply_local(x) @ ts.template)))
    return worst


def node_to_json(node: TNNode) -> dict:
    doc = {
        "support": list(node.support.indices),
        "group": group_to_json(node.channels[0].group),
        "pooling": node.pooling,
        "activation": nl.to_string(node.activation),
        "templates": [ts.template.tolist() for ts in node.channels],
    }
    if any(ts.group is not node.channels[0].group for ts in node.channels[1:]):
        doc["groups"] = [group_to_json(ts.group) for ts in node.channels]
    return doc


def node_from_json(doc: dict, ambient_dim: int | None = None) -> TNNode:
    support = list(doc["support"])
    dim = ambient_dim if ambient_dim is not None else max(support) + 1
    if "groups" in doc:
        groups = [group_from_json(g, dim) for g in doc["groups"]]
    else:
        groups = group_from_json(doc["group"], dim)
    first = groups[0] if isinstance(groups, list) else groups
    if list(first.support.indices) != support:
        raise DimensionError("node support and group support differ")
    return make_node(doc["templates"], groups, doc.get("pooling", "mean"),
                     nl.parse(doc.get("activation", "relu")))

"""Pointwise activations and the diagnostics that certify them.

Three kinds are provided: ``hard_relu`` (max(0, x)), ``frac_power``
(x**d for x > 0, else 0) and ``identity``. Every kind maps 0 to 0 and
rejects non-finite input.

The diagnostics measure how far an activation is from being stable
(idempotent), unitary with respect to a group, and covariant with a group
element. Dot products in :func:`unitarity_deficit` use ``math.fsum`` so that
reordering the summands under a permutation cannot introduce rounding
differences.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, NonFiniteInput
from .groups import FiniteUnitaryGroup, GroupElement, act

KINDS = ("hard_relu", "frac_power", "identity")


@dataclass(frozen=True)
class Activation:
    kind: str
    degree: float | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown activation kind {self.kind!r}")
        if self.kind == "frac_power":
            if self.degree is None or not 0.0 < float(self.degree) <= 1.0:
                raise ValueError(f"frac_power degree must lie in (0, 1], got {self.degree}")
            object.__setattr__(self, "degree", float(self.degree))
        elif self.degree is not None:
            raise ValueError(f"{self.kind} takes no degree")

    def __call__(self, x) -> np.ndarray:
        return apply(self, x)

    @property
    def name(self) -> str:
        return to_string(self)


HARD_RELU = Activation("hard_relu")
IDENTITY = Activation("identity")


def frac_power(d: float) -> Activation:
    return Activation("frac_power", d)


def parse(text: str) -> Activation:
    """Parse ``"relu"``, ``"identity"`` or ``"fracpow:<d>"``."""
    text = text.strip()
    if text in ("relu", "hard_relu"):
        return HARD_RELU
    if text == "identity":
        return IDENTITY
    if text.startswith("fracpow:"):
        return frac_power(float(text.split(":", 1)[1]))
    raise ValueError(f"cannot parse activation {text!r}; use relu, identity or fracpow:<d>")


def to_string(eta: Activation) -> str:
    if eta.kind == "hard_relu":
        return "relu"
    if eta.kind == "identity":
        return "identity"
    return f"fracpow:{eta.degree:g}"


def apply(eta: Activation, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise NonFiniteInput("activation input contains NaN or inf")
    if eta.kind == "identity":
        return x.copy()
    pos = x > 0
    if eta.kind == "hard_relu":
        return np.where(pos, x, 0.0)
    return np.where(pos, np.power(np.where(pos, x, 1.0), eta.degree), 0.0)


def stability_deficit(eta: Activation, grid) -> float:
    """max over the grid of |eta(eta(x)) - eta(x)|."""
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise ValueError("grid must be non-empty")
    once = apply(eta, grid)
    return float(np.max(np.abs(apply(eta, once) - once)))


def _dot(u: np.ndarray, v: np.ndarray) -> float:
    return math.fsum((u * v).tolist())


def unitarity_gap(eta: Activation, g: GroupElement, x, y) -> float:
    """|<eta(g x), eta(g y)> - <eta(x), eta(y)>| for one pair."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise DimensionError(f"x and y differ in shape: {x.shape} vs {y.shape}")
    before = _dot(apply(eta, x), apply(eta, y))
    after = _dot(apply(eta, act(g, x)), apply(eta, act(g, y)))
    return abs(after - before)


def unitarity_deficit(eta: Activation, G: FiniteUnitaryGroup, trials: int, rng_seed: int) -> float:
    """Largest unitarity gap over seeded Gaussian pairs and every element."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    rng = np.random.default_rng(rng_seed)
    dim = G.support.ambient_dim
    worst = 0.0
    for _ in range(trials):
        x, y = rng.standard_normal((2, dim))
        for g in G.elements:
            worst = max(worst, unitarity_gap(eta, g, x, y))
    return worst


def covariance_deficit(eta: Activation, g: GroupElement, x) -> float:
    """||eta(g(x)) - g(eta(x))||_inf.

    Zero means the induced map on the activation's range is ``g`` itself.
    """
    x = np.asarray(x, dtype=float)
    return float(np.max(np.abs(apply(eta, act(g, x)) - act(g, apply(eta, x)))))


def activation_curve(eta: Activation, lo: float, hi: float, points: int) -> np.ndarray:
    """Array of shape (points, 2) with columns x and eta(x) on a uniform grid."""
    if not lo < hi:
        raise ValueError("need lo < hi")
    if points < 2:
        raise ValueError("need at least two points")
    xs = np.linspace(lo, hi, points)
    return np.column_stack([xs, apply(eta, xs)])


def sup_distance(a: Activation, b: Activation, lo: float, hi: float, points: int = 1001) -> float:
    xs = np.linspace(lo, hi, points)
    return float(np.max(np.abs(apply(a, xs) - apply(b, xs))))

"""Finite unitary groups acting on coordinate subsets of real vectors.

Elements come in two forms. The permutation form stores a destination
array ``perm`` and a sign vector: applying it to a local vector ``v`` gives
``y[perm[i]] = signs[i] * v[i]``, so arithmetic is exact. The dense form
stores an orthogonal matrix acting as ``y = M @ v``.

Groups carry eagerly built composition and inverse tables indexed by
element position. Group integration is the uniform average over elements.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence

import numpy as np

from .errors import (
    BlockSizeMismatch,
    ClosureError,
    DimensionError,
    InvalidSupport,
    OverlappingSupports,
)

#: Matrices closer than this are treated as the same group element.
MATCH_TOL = 1e-10
#: Largest group order for which tables are built.
MAX_ORDER = 10_000
#: Associativity is checked on every triple up to this order, sampled above.
EXHAUSTIVE_ASSOC_ORDER = 256


@dataclass(frozen=True)
class SupportSet:
    """Ordered, duplicate-free coordinate indices into an ambient space."""

    indices: tuple[int, ...]
    ambient_dim: int

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        object.__setattr__(self, "indices", idx)
        if self.ambient_dim < 1:
            raise InvalidSupport(f"ambient_dim must be positive, got {self.ambient_dim}")
        if len(set(idx)) != len(idx):
            raise InvalidSupport(f"duplicate indices in support {idx}")
        for i in idx:
            if not 0 <= i < self.ambient_dim:
                raise InvalidSupport(f"index {i} outside ambient dimension {self.ambient_dim}")

    @classmethod
    def range(cls, start: int, stop: int, ambient_dim: int | None = None) -> "SupportSet":
        return cls(tuple(range(start, stop)), stop if ambient_dim is None else ambient_dim)

    def __len__(self):
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.indices, dtype=np.intp)

    def disjoint(self, other: "SupportSet") -> bool:
        return not set(self.indices) & set(other.indices)

    def with_ambient(self, ambient_dim: int) -> "SupportSet":
        return SupportSet(self.indices, ambient_dim)


def union_support(supports: Sequence[SupportSet]) -> SupportSet:
    """Concatenate pairwise disjoint supports, keeping their order."""
    check_disjoint(supports)
    ambient = max(s.ambient_dim for s in supports)
    return SupportSet(tuple(i for s in supports for i in s.indices), ambient)


def check_disjoint(supports: Sequence[SupportSet]) -> None:
    seen: set[int] = set()
    for s in supports:
        overlap = seen & set(s.indices)
        if overlap:
            raise OverlappingSupports(f"supports overlap on indices {sorted(overlap)}")
        seen |= set(s.indices)


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class GroupElement:
    """A linear action on the coordinates of ``support``; identity elsewhere.

    Give exactly one of ``perm`` (optionally with ``signs``) or ``matrix``.
    With ``check=True`` a dense matrix must be orthogonal within 1e-12.
    """

    support: SupportSet
    perm: np.ndarray | None = None
    signs: np.ndarray | None = None
    matrix: np.ndarray | None = None
    id: Hashable = None
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        n = len(self.support)
        if (self.perm is None) == (self.matrix is None):
            raise ValueError("give exactly one of perm or matrix")
        if self.perm is not None:
            perm = np.array(self.perm, dtype=np.intp)
            if perm.shape != (n,) or sorted(perm.tolist()) != list(range(n)):
                raise ValueError(f"perm {perm.tolist()} is not a permutation of range({n})")
            signs = np.ones(n) if self.signs is None else np.array(self.signs, dtype=float)
            if signs.shape != (n,) or not np.all(np.abs(signs) == 1.0):
                raise ValueError("signs must be a vector of +1/-1")
            object.__setattr__(self, "perm", _readonly(perm))
            object.__setattr__(self, "signs", _readonly(signs))
        else:
            if self.signs is not None:
                raise ValueError("signs only apply to the permutation form")
            m = np.array(self.matrix, dtype=float)
            if m.shape != (n, n):
                raise DimensionError(f"matrix shape {m.shape} does not match support size {n}")
            if not np.all(np.isfinite(m)):
                raise ValueError("matrix has non-finite entries")
            object.__setattr__(self, "matrix", _readonly(m))
            if self.check and orthogonality_deficit(self) > 1e-12:
                raise ValueError("matrix is not orthogonal within 1e-12")

    @property
    def is_permutation(self) -> bool:
        return self.perm is not None

    @property
    def is_pure_permutation(self) -> bool:
        return self.perm is not None and bool(np.all(self.signs == 1.0))

    def __len__(self):
        return len(self.support)

    def as_matrix(self) -> np.ndarray:
        if self.matrix is not None:
            return self.matrix
        n = len(self.support)
        m = np.zeros((n, n))
        m[self.perm, np.arange(n)] = self.signs
        return m

    def apply_local(self, v) -> np.ndarray:
        """Act on vectors given in support coordinates (last axis)."""
        v = np.asarray(v, dtype=float)
        if v.shape[-1:] != (len(self.support),):
            raise DimensionError(
                f"expected last axis of length {len(self.support)}, got shape {v.shape}"
            )
        if self.perm is not None:
            out = np.empty_like(v)
            out[..., self.perm] = v * self.signs
            return out
        return v @ self.matrix.T

    def __repr__(self):
        form = "perm" if self.perm is not None else "matrix"
        return f"GroupElement(id={self.id!r}, {form}, support={list(self.support.indices)})"


def identity_element(support: SupportSet) -> GroupElement:
    return GroupElement(support, perm=np.arange(len(support)), id="e")


def orthogonality_deficit(g: GroupElement) -> float:
    """max |(M^T M - I)_ij| for the element's matrix."""
    if g.perm is not None:
        return 0.0
    m = g.matrix
    return float(np.max(np.abs(m.T @ m - np.eye(len(m)))))


def compose(a: GroupElement, b: GroupElement, id: Hashable = None) -> GroupElement:
    """The element ``a o b`` (apply ``b`` first)."""
    if a.support != b.support:
        raise DimensionError("cannot compose elements with different supports")
    if a.perm is not None and b.perm is not None:
        return GroupElement(a.support, perm=a.perm[b.perm], signs=a.signs[b.perm] * b.signs, id=id)
    return GroupElement(a.support, matrix=a.as_matrix() @ b.as_matrix(), id=id, check=False)


def inverse(g: GroupElement, id: Hashable = None) -> GroupElement:
    if g.perm is not None:
        inv = np.argsort(g.perm)
        return GroupElement(g.support, perm=inv, signs=g.signs[inv], id=id)
    return GroupElement(g.support, matrix=g.matrix.T, id=id, check=False)


def embed(pieces: Sequence[GroupElement], support: SupportSet, id: Hashable = None) -> GroupElement:
    """Combine elements on disjoint sub-supports into one element on ``support``.

    Coordinates of ``support`` not covered by any piece are left fixed.
    """
    check_disjoint([p.support for p in pieces])
    pos = {idx: k for k, idx in enumerate(support.indices)}
    n = len(support)
    try:
        locs = [np.array([pos[i] for i in p.support.indices], dtype=np.intp) for p in pieces]
    except KeyError as exc:
        raise InvalidSupport(f"index {exc.args[0]} not in target support") from None
    if all(p.perm is not None for p in pieces):
        dest = np.arange(n)
        signs = np.ones(n)
        for p, loc in zip(pieces, locs):
            dest[loc] = loc[p.perm]
            signs[loc] = p.signs
        return GroupElement(support, perm=dest, signs=signs, id=id)
    m = np.eye(n)
    for p, loc in zip(pieces, locs):
        m[np.ix_(loc, loc)] = p.as_matrix()
    return GroupElement(support, matrix=m, id=id, check=False)


def act(g: GroupElement, x) -> np.ndarray:
    """Apply ``g`` to ``x`` (last axis); off-support coordinates are copied unchanged."""
    x = np.asarray(x, dtype=float)
    if x.ndim == 0 or x.shape[-1] == 0:
        raise DimensionError("cannot act on an empty vector")
    idx = g.support.array
    if x.shape[-1] <= idx.max():
        raise DimensionError(
            f"vector of length {x.shape[-1]} too short for support reaching index {idx.max()}"
        )
    out = x.copy()
    out[..., idx] = g.apply_local(x[..., idx])
    return out


# ---------------------------------------------------------------------------
# groups


class FiniteUnitaryGroup:
    """A finite set of unitary actions on a common support, with Cayley tables.

    ``composition_table[a, b]`` is the index of ``elements[a] o elements[b]``,
    or -1 when that product is not among the elements. With
    ``validate=True`` (the default) a missing product, identity or inverse
    raises :class:`ClosureError`; pass ``validate=False`` to build an
    arbitrary element set for diagnosis with :func:`verify_group_axioms`.
    """

    def __init__(
        self,
        elements: Sequence[GroupElement],
        support: SupportSet | None = None,
        *,
        validate: bool = True,
        description: dict | None = None,
        _table: np.ndarray | None = None,
    ):
        elements = tuple(elements)
        if not elements:
            raise ValueError("a group needs at least one element")
        if len(elements) > MAX_ORDER:
            raise ValueError(f"group order {len(elements)} exceeds MAX_ORDER={MAX_ORDER}")
        support = elements[0].support if support is None else support
        for g in elements:
            if g.support != support:
                raise DimensionError("all elements must share the group's support")
        self.elements = elements
        self.support = support
        self.description = description
        table = _composition_table(elements) if _table is None else np.asarray(_table)
        table = table.astype(np.int32 if len(elements) < 2**31 else np.int64)
        self.composition_table = _readonly(table)
        self.identity_index = _find_identity(elements)
        self.inverse_table = _readonly(_inverse_table(table, self.identity_index))
        if validate:
            if np.any(table < 0):
                raise ClosureError("element set is not closed under composition")
            if self.identity_index is None:
                raise ClosureError("element set has no identity")
            if np.any(self.inverse_table < 0):
                raise ClosureError("some element has no inverse in the set")
        self._lookup = None

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, i) -> GroupElement:
        return self.elements[i]

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def is_permutation(self) -> bool:
        return all(g.perm is not None for g in self.elements)

    def index_of(self, g: GroupElement) -> int | None:
        """Position of an element equal to ``g`` (exact for permutations), or None."""
        if g.support != self.support:
            return None
        if g.perm is not None and self.is_permutation:
            if self._lookup is None:
                self._lookup = {_perm_key(e): k for k, e in enumerate(self.elements)}
            return self._lookup.get(_perm_key(g))
        mats = np.stack([e.as_matrix() for e in self.elements])
        diff = np.max(np.abs(mats - g.as_matrix()), axis=(1, 2))
        k = int(np.argmin(diff))
        return k if diff[k] <= MATCH_TOL else None

    def __repr__(self):
        kind = (self.description or {}).get("kind", "explicit")
        return f"FiniteUnitaryGroup({kind}, order={len(self)}, support={list(self.support.indices)})"


def _perm_key(g: GroupElement) -> tuple:
    return tuple(g.perm.tolist()) + tuple((g.signs < 0).tolist())


def _find_identity(elements) -> int | None:
    for k, g in enumerate(elements):
        if g.perm is not None:
            if np.array_equal(g.perm, np.arange(len(g.perm))) and np.all(g.signs == 1.0):
                return k
        elif np.max(np.abs(g.matrix - np.eye(len(g.matrix)))) <= MATCH_TOL:
            return k
    return None


def _inverse_table(table: np.ndarray, e: int | None) -> np.ndarray:
    n = len(table)
    inv = np.full(n, -1, dtype=table.dtype)
    if e is None:
        return inv
    both = (table == e) & (table.T == e)
    has = both.any(axis=1)
    inv[has] = np.argmax(both[has], axis=1)
    return inv


def _composition_table(elements: Sequence[GroupElement]) -> np.ndarray:
    if all(g.perm is not None for g in elements):
        dests = np.stack([g.perm for g in elements])
        signs = np.stack([g.signs for g in elements])
        return _perm_table(dests, signs)
    return _matrix_table(np.stack([g.as_matrix() for g in elements]))


def _perm_table(dests: np.ndarray, signs: np.ndarray) -> np.ndarray:
    """Composition table of signed permutations, matched exactly by key rows."""
    n, d = dests.shape
    keys = dests + d * (signs < 0)
    weights = np.random.default_rng(0x5EED).integers(1, 2**62, size=d, dtype=np.uint64)
    hashes = keys.astype(np.uint64) @ weights
    order = np.argsort(hashes, kind="stable")
    sorted_hashes = hashes[order]
    table = np.full((n, n), -1, dtype=np.int64)
    chunk = max(1, 2_000_000 // max(1, n * d))
    for start in range(0, n, chunk):
        a = np.arange(start, min(n, start + chunk))
        comp_dest = dests[a[:, None, None], dests[None, :, :]]
        comp_sign = signs[a[:, None, None], dests[None, :, :]] * signs[None, :, :]
        comp_keys = comp_dest + d * (comp_sign < 0)
        h = comp_keys.astype(np.uint64) @ weights
        pos = np.clip(np.searchsorted(sorted_hashes, h), 0, n - 1)
        cand = order[pos]
        ok = (sorted_hashes[pos] == h) & np.all(keys[cand] == comp_keys, axis=-1)
        table[a] = np.where(ok, cand, -1)
    return table


def _matrix_table(mats: np.ndarray) -> np.ndarray:
    n = len(mats)
    table = np.full((n, n), -1, dtype=np.int64)
    for a in range(n):
        prods = mats[a] @ mats
        diff = np.max(np.abs(prods[:, None] - mats[None, :]), axis=(2, 3))
        best = np.argmin(diff, axis=1)
        hit = diff[np.arange(n), best] <= MATCH_TOL
        table[a] = np.where(hit, best, -1)
    return table


# ---------------------------------------------------------------------------
# constructors


def make_cyclic_translation_group(support: SupportSet) -> FiniteUnitaryGroup:
    """Circular shifts of the support's coordinates.

    Shift-by-k sends coordinate i to coordinate (i + k) mod n, so shift-by-1
    maps [1, 2, 3, 4] to [4, 1, 2, 3].
    """
    n = len(support)
    if n < 1:
        raise InvalidSupport("cyclic group needs a non-empty support")
    base = np.arange(n)
    elements = [GroupElement(support, perm=(base + k) % n, id=k) for k in range(n)]
    table = (base[:, None] + base[None, :]) % n
    return FiniteUnitaryGroup(
        elements,
        support,
        description={"kind": "cyclic", "support": list(support.indices)},
        _table=table,
    )


def make_block_permutation_group(blocks: Sequence[SupportSet]) -> FiniteUnitaryGroup:
    """All k! rearrangements of k equal-size, disjoint blocks.

    The element with id ``pi`` moves block j onto block ``pi[j]``, keeping the
    order of coordinates inside the block. Elements are listed in
    ``itertools.permutations`` order, so the first one is the identity.
    """
    blocks = list(blocks)
    if not blocks:
        raise InvalidSupport("need at least one block")
    sizes = {len(b) for b in blocks}
    if len(sizes) != 1:
        raise BlockSizeMismatch(f"block sizes differ: {sorted(len(b) for b in blocks)}")
    size = sizes.pop()
    if size < 1:
        raise InvalidSupport("blocks must be non-empty")
    k = len(blocks)
    if math.factorial(k) > 5040:
        raise ValueError(f"{k} blocks give {math.factorial(k)} elements; at most 7 blocks supported")
    support = union_support(blocks)
    perms = list(itertools.permutations(range(k)))
    elements = []
    for pi in perms:
        dest = np.concatenate([pi[j] * size + np.arange(size) for j in range(k)])
        elements.append(GroupElement(support, perm=dest, id=pi))
    # tables of the block-level permutations coincide with the lifted ones
    table = _perm_table(np.array(perms, dtype=np.intp), np.ones((len(perms), k)))
    return FiniteUnitaryGroup(
        elements,
        support,
        description={"kind": "block_perm", "blocks": [list(b.indices) for b in blocks]},
        _table=table,
    )


def make_product_group(factors: Sequence[FiniteUnitaryGroup]) -> FiniteUnitaryGroup:
    """Direct product of groups on pairwise disjoint supports.

    Elements are indexed by tuples of factor indices in row-major order
    (last factor fastest); ids are tuples of factor ids.
    """
    factors = list(factors)
    if not factors:
        raise ValueError("need at least one factor")
    support = union_support([f.support for f in factors])
    sizes = [len(f) for f in factors]
    total = math.prod(sizes)
    if total > MAX_ORDER:
        raise ValueError(f"product order {total} exceeds MAX_ORDER={MAX_ORDER}")
    elements = []
    for combo in itertools.product(*(range(s) for s in sizes)):
        pieces = [f.elements[i] for f, i in zip(factors, combo)]
        elements.append(embed(pieces, support, id=tuple(p.id for p in pieces)))
    multi = np.array(np.unravel_index(np.arange(total), sizes))  # (m, total)
    table = np.zeros((total, total), dtype=np.int64)
    for f, idx, stride in zip(factors, multi, _strides(sizes)):
        table += f.composition_table[idx[:, None], idx[None, :]].astype(np.int64) * stride
    return FiniteUnitaryGroup(
        elements,
        support,
        description={"kind": "product", "factors": [f.description for f in factors]},
        _table=table,
    )


def _strides(sizes):
    out, acc = [], 1
    for s in reversed(sizes):
        out.append(acc)
        acc *= s
    return out[::-1]


def make_explicit_group(
    support: SupportSet,
    permutations: Sequence[Sequence[int]] | None = None,
    signs: Sequence[Sequence[float]] | None = None,
    matrices: Sequence[np.ndarray] | None = None,
    *,
    validate: bool = True,
) -> FiniteUnitaryGroup:
    """Group from listed permutations (destination arrays) or orthogonal matrices."""
    if (permutations is None) == (matrices is None):
        raise ValueError("give exactly one of permutations or matrices")
    if permutations is not None:
        signs = [None] * len(permutations) if signs is None else signs
        elements = [
            GroupElement(support, perm=p, signs=s, id=k)
            for k, (p, s) in enumerate(zip(permutations, signs))
        ]
        desc = {"kind": "explicit", "support": list(support.indices),
                "permutations": [list(map(int, p)) for p in permutations]}
        if any(s is not None for s in signs):
            desc["signs"] = [list(map(float, e.signs)) for e in elements]
    else:
        elements = [GroupElement(support, matrix=m, id=k, check=validate) for k, m in enumerate(matrices)]
        desc = {"kind": "explicit", "support": list(support.indices),
                "matrices": [np.asarray(m, dtype=float).tolist() for m in matrices]}
    return FiniteUnitaryGroup(elements, support, validate=validate, description=desc)


def trivial_group(support: SupportSet) -> FiniteUnitaryGroup:
    return FiniteUnitaryGroup([identity_element(support)], support,
                              description={"kind": "explicit", "support": list(support.indices),
                                           "permutations": [list(range(len(support)))]})


# ---------------------------------------------------------------------------
# checks and integration


@dataclass(frozen=True)
class AxiomReport:
    closure: bool
    identity: bool
    inverse: bool
    associativity: bool
    unitarity_deficit: float
    associativity_mode: str = "exhaustive"

    @property
    def passed(self) -> bool:
        return self.closure and self.identity and self.inverse and self.associativity

    def as_dict(self) -> dict:
        return {
            "closure": self.closure,
            "identity": self.identity,
            "inverse": self.inverse,
            "associativity": self.associativity,
            "associativity_mode": self.associativity_mode,
            "unitarity_deficit": self.unitarity_deficit,
            "passed": self.passed,
        }


def verify_group_axioms(G: FiniteUnitaryGroup, *, samples: int = 200_000) -> AxiomReport:
    """Check closure, identity, inverses, associativity and unitarity.

    Associativity is checked on all triples up to order 256 and on
    ``samples`` seeded random triples above that. Triples with an undefined
    product are skipped (closure already fails for them).
    """
    n = len(G)
    if n > MAX_ORDER:
        raise ValueError(f"group order {n} exceeds the {MAX_ORDER} cap")
    T = G.composition_table.astype(np.int64)
    e = G.identity_index
    closure = bool(np.all(T >= 0))
    identity = e is not None and bool(
        np.array_equal(T[e], np.arange(n)) and np.array_equal(T[:, e], np.arange(n))
    )
    inverse_ok = identity and bool(np.all(G.inverse_table >= 0))

    if n <= EXHAUSTIVE_ASSOC_ORDER:
        mode = "exhaustive"
        a, b, c = (g.ravel() for g in np.meshgrid(np.arange(n), np.arange(n), np.arange(n), indexing="ij"))
    else:
        mode = "sampled"
        a, b, c = np.random.default_rng(0).integers(0, n, size=(3, samples))
    ab, bc = T[a, b], T[b, c]
    ok = (ab >= 0) & (bc >= 0)
    lhs = T[ab[ok], c[ok]]
    rhs = T[a[ok], bc[ok]]
    assoc = bool(np.array_equal(lhs, rhs))

    deficit = max(orthogonality_deficit(g) for g in G.elements)
    return AxiomReport(closure, identity, inverse_ok, assoc, deficit, mode)


def group_average(G: FiniteUnitaryGroup, x) -> np.ndarray:
    """(1/|G|) * sum over g of g(x); x may be batched along leading axes."""
    x = np.asarray(x, dtype=float)
    total = np.zeros_like(act(G.elements[0], x))
    for g in G.elements:
        total += act(g, x)
    return total / len(G)


def haar_fixed_point_deficit(G: FiniteUnitaryGroup, x) -> float:
    """max over g' of ||g'(mu) - mu||_inf with mu the group average of x."""
    mu = group_average(G, x)
    return max(float(np.max(np.abs(act(g, mu) - mu))) for g in G.elements)


# ---------------------------------------------------------------------------
# JSON


def group_from_json(doc: dict, ambient_dim: int | None = None) -> FiniteUnitaryGroup:
    """Build a group from its JSON description.

    Kinds: ``cyclic`` (support), ``block_perm`` (blocks), ``product``
    (factors), ``explicit`` (support plus permutations [, signs] or
    matrices). ``ambient_dim`` defaults to the document's own field, then to
    one past the largest index.
    """
    kind = doc.get("kind")
    ambient = doc.get("ambient_dim", ambient_dim)

    def support_of(indices):
        indices = list(indices)
        dim = ambient if ambient is not None else (max(indices) + 1 if indices else 1)
        return SupportSet(tuple(indices), dim)

    if kind == "cyclic":
        return make_cyclic_translation_group(support_of(doc["support"]))
    if kind == "block_perm":
        blocks = doc["blocks"]
        if ambient is None:
            ambient = max((i for b in blocks for i in b), default=0) + 1
        return make_block_permutation_group([support_of(b) for b in blocks])
    if kind == "product":
        factors = doc["factors"]
        if ambient is None:
            ambient = max(_max_index(f) for f in factors) + 1
        return make_product_group([group_from_json(f, ambient) for f in factors])
    if kind == "explicit":
        support = support_of(doc["support"])
        if "matrices" in doc:
            return make_explicit_group(support, matrices=[np.array(m) for m in doc["matrices"]],
                                       validate=doc.get("validate", True))
        return make_explicit_group(support, permutations=doc["permutations"], signs=doc.get("signs"),
                                   validate=doc.get("validate", True))
    raise ValueError(f"unknown group kind {kind!r}")


def _max_index(doc: dict) -> int:
    if "support" in doc:
        return max(doc["support"])
    if "blocks" in doc:
        return max(i for b in doc["blocks"] for i in b)
    return max(_max_index(f) for f in doc["factors"])


def group_to_json(G: FiniteUnitaryGroup) -> dict:
    if G.description is not None:
        return dict(G.description)
    if G.is_permutation:
        doc = {"kind": "explicit", "support": list(G.support.indices),
               "permutations": [g.perm.tolist() for g in G.elements]}
        if not all(g.is_pure_permutation for g in G.elements):
            doc["signs"] = [g.signs.tolist() for g in G.elements]
        return doc
    return {"kind": "explicit", "support": list(G.support.indices),
            "matrices": [g.as_matrix().tolist() for g in G.elements]}


def cyclic_blocks(n_blocks: int, block_size: int, ambient_dim: int | None = None) -> list[SupportSet]:
    """Consecutive disjoint blocks [0, s), [s, 2s), ..."""
    dim = n_blocks * block_size if ambient_dim is None else ambient_dim
    return [SupportSet.range(k * block_size, (k + 1) * block_size, dim) for k in range(n_blocks)]


def elements_commute(a: GroupElement, b: GroupElement) -> bool:
    return np.array_equal(compose(a, b).as_matrix(), compose(b, a).as_matrix())


def orbit(G: FiniteUnitaryGroup, v: Iterable[float]) -> np.ndarray:
    """Stack of g(v) for every element, with v in support coordinates."""
    v = np.asarray(list(v) if not isinstance(v, np.ndarray) else v, dtype=float)
    return np.stack([g.apply_local(v) for g in G.elements])

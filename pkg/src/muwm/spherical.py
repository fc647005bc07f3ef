"""Antipodal spherical codes over the integers and their cross-polytope
decompositions.

A family of quasi-unbiased weighing matrices is the same thing as an antipodal
code in ``{-1,0,1}^d`` with few inner products, split into cross polytopes
(one per matrix: its rows and their negatives). This module converts in both
directions and searches for such splittings.

Conventions, fixed for reproducibility:

* canonical antipodal representative: first nonzero coordinate positive;
* antipodal classes are numbered by their representatives in increasing
  lexicographic order;
* rows of a matrix read off a cross polytope are canonical representatives in
  decreasing lexicographic order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Sequence

import numpy as np

from . import search
from .errors import (
    BadAlphabet,
    BadDecomposition,
    BadInnerProducts,
    BadNorm,
    DuplicateVector,
    InexactFrameCoordinates,
    NoDecomposition,
    NotAntipodal,
    WrongPartCount,
)
from .matrixcore import (
    FamilyParams,
    MatrixFamily,
    is_square,
    verify_family,
    verify_weighing,
)


def canonical_sign(v: Sequence[int]) -> tuple[int, ...]:
    v = tuple(int(x) for x in v)
    for x in v:
        if x:
            return v if x > 0 else tuple(-y for y in v)
    return v


@dataclass(frozen=True, eq=False)
class SphericalCode:
    """Distinct integer vectors of one common squared norm (rows of ``vectors``)."""

    vectors: np.ndarray
    norm_sq: int
    antipodal: bool

    def __post_init__(self):
        self.vectors.setflags(write=False)

    @classmethod
    def from_vectors(cls, vectors, sort: bool = False) -> "SphericalCode":
        V = np.array(vectors, dtype=np.int64)
        if V.ndim != 2 or V.shape[0] == 0:
            raise BadNorm("a code needs at least one vector")
        if sort:
            V = np.array(sorted(map(tuple, V.tolist())), dtype=np.int64)
        norms = (V * V).sum(axis=1)
        if (norms != norms[0]).any():
            raise BadNorm(f"vectors have differing squared norms {sorted(set(norms.tolist()))}")
        keys = [tuple(r) for r in V.tolist()]
        index = {}
        for i, key in enumerate(keys):
            if key in index:
                raise DuplicateVector(f"vectors {index[key]} and {i} coincide: {key}")
            index[key] = i
        antipodal = all(tuple(-x for x in key) in index for key in keys)
        return cls(V, int(norms[0]), antipodal)

    @property
    def dimension(self) -> int:
        return self.vectors.shape[1]

    def __len__(self) -> int:
        return self.vectors.shape[0]

    def gram(self) -> np.ndarray:
        return self.vectors @ self.vectors.T

    def index(self) -> dict[tuple[int, ...], int]:
        return {tuple(r): i for i, r in enumerate(self.vectors.tolist())}

    def __eq__(self, other):
        if not isinstance(other, SphericalCode):
            return NotImplemented
        return np.array_equal(self.vectors, other.vectors)


def inner_product_set(code: SphericalCode) -> set[int]:
    """Inner products over unordered pairs of distinct vectors."""
    G = code.gram()
    iu = np.triu_indices(len(code), k=1)
    return set(np.unique(G[iu]).tolist())


@dataclass(frozen=True)
class CrossPolytopeDecomposition:
    """Partition of a code's vector indices into frames ``{±v_1..±v_r}``."""

    code: SphericalCode
    parts: tuple[tuple[int, ...], ...]
    frame_size: int

    def validate(self) -> "CrossPolytopeDecomposition":
        check_decomposition(self.code, self.parts, self.frame_size)
        return self

    def representatives(self, part: int) -> np.ndarray:
        """Canonical representatives of one part, in decreasing lexicographic order."""
        reps = {canonical_sign(self.code.vectors[i]) for i in self.parts[part]}
        return np.array(sorted(reps, reverse=True), dtype=np.int64)


def check_decomposition(code: SphericalCode, parts: Sequence[Sequence[int]], r: int) -> None:
    n = len(code)
    seen = np.zeros(n, dtype=bool)
    for p, part in enumerate(parts):
        idx = np.array(sorted(part), dtype=np.int64)
        if idx.size and (idx.min() < 0 or idx.max() >= n):
            raise BadDecomposition(f"part {p} references an index outside 0..{n - 1}")
        if seen[idx].any():
            raise BadDecomposition(f"part {p} overlaps an earlier part")
        seen[idx] = True
        if idx.size != 2 * r:
            raise BadDecomposition(f"part {p} has {idx.size} vectors, expected {2 * r}")
        V = code.vectors[idx]
        keys = {tuple(v) for v in V.tolist()}
        if any(tuple(-x for x in key) not in keys for key in keys):
            raise BadDecomposition(f"part {p} is not closed under negation")
        reps = np.array(sorted({canonical_sign(v) for v in keys}), dtype=np.int64)
        G = reps @ reps.T
        if not np.array_equal(G, code.norm_sq * np.eye(len(reps), dtype=np.int64)):
            raise BadDecomposition(f"part {p} representatives are not pairwise orthogonal")
    if not seen.all():
        raise BadDecomposition(f"{int((~seen).sum())} vectors are not covered")


def antipodal_classes(code: SphericalCode) -> tuple[list[tuple[int, ...]], list[tuple[int, int]]]:
    """Canonical class representatives (sorted) and, per class, the (rep, negation) indices."""
    if not code.antipodal:
        raise NotAntipodal("code is not closed under negation")
    index = code.index()
    reps = sorted({canonical_sign(v) for v in code.vectors.tolist()})
    pairs = [(index[r], index[tuple(-x for x in r)]) for r in reps]
    return reps, pairs


def orthogonality_graph(reps: Sequence[Sequence[int]]) -> list[int]:
    R = np.array(reps, dtype=np.int64)
    G = R @ R.T
    n = len(reps)
    adj = [0] * n
    for i, j in zip(*np.nonzero(G == 0)):
        if i != j:
            adj[i] |= 1 << int(j)
    return adj


def candidate_frames(code: SphericalCode, r: int):
    """All sets of ``r`` pairwise orthogonal antipodal classes."""
    reps, pairs = antipodal_classes(code)
    adj = orthogonality_graph(reps)
    return reps, pairs, search.cliques_of_size(adj, r)


def find_decomposition(code: SphericalCode, frame_size: int,
                       budget: int = search.DEFAULT_NODE_BUDGET) -> CrossPolytopeDecomposition:
    """Partition an antipodal code into frames of ``frame_size`` orthogonal pairs.

    Exact cover over antipodal classes; candidate frames are the
    ``frame_size``-cliques of the orthogonality graph. Raises
    :class:`NoDecomposition` (with node and candidate counts) once the search
    space is exhausted.
    """
    if not code.antipodal:
        raise NotAntipodal("code is not closed under negation")
    if len(code) % (2 * frame_size):
        raise NoDecomposition(
            f"{len(code)} vectors cannot split into frames of {2 * frame_size}")
    reps, pairs, frames = candidate_frames(code, frame_size)
    if not frames:
        raise NoDecomposition(f"no {frame_size} pairwise orthogonal classes exist", 0, 0)
    solution, nodes = search.exact_cover(len(reps), frames, budget)
    if solution is None:
        raise NoDecomposition("exact-cover search exhausted", nodes, len(frames))
    parts = []
    for f in solution:
        part = sorted(i for c in frames[f] for i in pairs[c])
        parts.append(tuple(part))
    parts.sort()
    dec = CrossPolytopeDecomposition(code, tuple(parts), frame_size)
    return dec.validate()


def family_to_code(family: MatrixFamily) -> tuple[SphericalCode, CrossPolytopeDecomposition]:
    """Rows and negated rows of every member, one part per member.

    Vector order: member by member, each row followed by its negation.
    """
    vecs = []
    parts = []
    for W in family.members:
        start = len(vecs)
        for row in W.entries:
            vecs.append(row)
            vecs.append(-row)
        parts.append(tuple(range(start, len(vecs))))
    code = SphericalCode.from_vectors(vecs)
    dec = CrossPolytopeDecomposition(code, tuple(parts), family.params.d)
    return code, dec


def _check_inner_products(found: set[int], allowed: set[int], strict: bool, what: str) -> None:
    extra = found - allowed
    if extra:
        raise BadInnerProducts(f"{what}: inner products {sorted(extra)} outside {sorted(allowed)}")
    if strict and found != allowed:
        raise BadInnerProducts(
            f"{what}: strict mode needs exactly {sorted(allowed)}, attained {sorted(found)}")


def code_to_family(code: SphericalCode, decomposition: CrossPolytopeDecomposition, a: int,
                   strict: bool = False, debug: bool = False) -> MatrixFamily:
    """One weighing matrix per part, from a decomposed code in ``{-1,0,1}^d``.

    Inner products must lie in ``{±sqrt(a), 0, -k}``; with ``strict`` every one
    of those values must actually occur.
    """
    V = code.vectors
    if not np.isin(V, (-1, 0, 1)).all():
        raise BadAlphabet("vector entries must lie in {-1,0,1}")
    d = code.dimension
    k = code.norm_sq
    if not is_square(a):
        raise BadInnerProducts(f"a = {a} is not a perfect square")
    s = math.isqrt(a)
    if decomposition.frame_size != d:
        raise BadDecomposition(f"frames have {decomposition.frame_size} pairs, expected {d}")
    check_decomposition(code, decomposition.parts, d)
    allowed = {s, -s, 0, -k}
    if len(decomposition.parts) == 1:
        allowed = {0, -k}
    _check_inner_products(inner_product_set(code), allowed, strict, "code")
    params = FamilyParams.from_k_a(d, k, a)
    members = tuple(verify_weighing(decomposition.representatives(p), debug=debug)
                    for p in range(len(decomposition.parts)))
    family = MatrixFamily(params, members)
    verify_family(family, debug=debug)
    return family


def muwm_code_conversion(code: SphericalCode, decomposition: CrossPolytopeDecomposition,
                         reference: int = 0, strict: bool = False,
                         debug: bool = False) -> MatrixFamily:
    """Read a decomposed code as MUWM in the coordinates of one reference frame.

    The reference part ``{±v_1..±v_d}`` becomes the coordinate frame; every
    other vector ``x`` is rewritten as ``c_j = <x, v_j> / D`` where ``D`` is the
    common absolute value of the nonzero ``<x, v_j>``. Each remaining part then
    yields one weighing matrix; the frame is consumed, so ``f + 1`` parts give
    ``f`` matrices. Vectors may live in more coordinates than the frame rank
    (E7 sits in 8 coordinates).
    """
    parts = decomposition.parts
    if not parts or not 0 <= reference < len(parts):
        raise WrongPartCount(f"reference part {reference} not among {len(parts)} parts")
    r = decomposition.frame_size
    check_decomposition(code, parts, r)
    N = code.norm_sq
    frame = decomposition.representatives(reference)
    others = [p for p in range(len(parts)) if p != reference]
    if not others:
        return MatrixFamily(FamilyParams(r, 1, 1, 1), ())
    rest_idx = np.array([i for p in others for i in parts[p]], dtype=np.int64)
    raw = code.vectors[rest_idx] @ frame.T
    nonzero = np.abs(raw[raw != 0])
    D = int(reduce(math.gcd, nonzero.tolist()))
    if not np.isin(np.abs(raw), (0, D)).all():
        raise InexactFrameCoordinates(
            f"frame coordinates take magnitudes {sorted(set(np.abs(raw).ravel().tolist()))}")
    k = int((raw[0] != 0).sum())
    if k * D * D != N * N:
        raise InexactFrameCoordinates(
            f"weight {k} with divisor {D} is inconsistent with squared norm {N}")
    s = math.isqrt(k)
    if s * s != k:
        raise InexactFrameCoordinates(f"weight {k} is not a perfect square")
    # inner products scale by k / N from code units to frame units
    allowed = {x * N // k for x in (s, -s, 0, -k)}
    _check_inner_products(inner_product_set(code), allowed, strict, "code")
    coords = {}
    for row, i in zip(raw // D, rest_idx.tolist()):
        coords[i] = row
    members = []
    for p in others:
        rows = {canonical_sign(coords[i]) for i in parts[p]}
        members.append(verify_weighing(sorted(rows, reverse=True), debug=debug))
    family = MatrixFamily(FamilyParams(r, k, k, k), tuple(members))
    verify_family(family, debug=debug)
    return family


def muwm_family_to_code(family: MatrixFamily) -> tuple[SphericalCode, CrossPolytopeDecomposition]:
    """Inverse of :func:`muwm_code_conversion`: prepend the frame ``{±sqrt(k) e_j}``."""
    p = family.params
    s = math.isqrt(p.k)
    if s * s != p.k:
        raise InexactFrameCoordinates(f"weight {p.k} is not a perfect square")
    vecs = []
    eye = s * np.eye(p.d, dtype=np.int64)
    for row in eye:
        vecs.append(row)
        vecs.append(-row)
    parts = [tuple(range(2 * p.d))]
    for W in family.members:
        start = len(vecs)
        for row in W.entries:
            vecs.append(row)
            vecs.append(-row)
        parts.append(tuple(range(start, len(vecs))))
    code = SphericalCode.from_vectors(vecs)
    return code, CrossPolytopeDecomposition(code, tuple(parts), p.d)


def canonical_decomposition(dec: CrossPolytopeDecomposition) -> tuple[frozenset, ...]:
    """Parts as sets of vectors, sorted; independent of vector indexing."""
    parts = [frozenset(tuple(dec.code.vectors[i].tolist()) for i in part) for part in dec.parts]
    return tuple(sorted(parts, key=lambda s: sorted(s)))

"""Root systems in doubled integer coordinates, disjoint 2-frames, and the
maximum number of weight-4 MUWM per order.

Every root is stored doubled, so all squared norms equal 8 and the
half-integer roots of E7/E8 are integers. A 2-frame of a rank-``r`` system is
``{±v_1..±v_r}`` with ``(v_i, v_j) = 8 δ_ij``.

Pinned choices:

* A_d lives in ``d + 1`` coordinates, D_d in ``d``, E6/E7/E8 in 8;
* E7 = E8 roots orthogonal to ``(0,..,0,2,2)``; E6 = E8 roots orthogonal to
  ``(0,..,0,2,2)`` and ``(0,..,0,2,-2,0)``;
* D_d frames come from the round-robin (circle method) 1-factorization of K_d;
* orthogonal sums concatenate coordinate blocks in the order written.
"""

from __future__ import annotations

import itertools
import logging
import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import search
from .errors import BadSpec, OddD
from .matrixcore import MatrixFamily
from .spherical import (
    CrossPolytopeDecomposition,
    SphericalCode,
    antipodal_classes,
    canonical_sign,
    code_to_family,
    muwm_code_conversion,
    orthogonality_graph,
)

log = logging.getLogger(__name__)

ROOT_NORM = 8
E7_PIN = (0, 0, 0, 0, 0, 0, 2, 2)
E6_PIN = (0, 0, 0, 0, 0, 2, -2, 0)

_COMPONENT = re.compile(r"^(\d*)\s*([ADE])\s*(\d+)$")


@dataclass(frozen=True)
class Component:
    kind: str  # "A", "D" or "E"
    rank: int

    def __post_init__(self):
        k, n = self.kind, self.rank
        ok = (k == "A" and n >= 1) or (k == "D" and n >= 4) or (k == "E" and n in (6, 7, 8))
        if not ok:
            raise BadSpec(f"{k}{n} is not an irreducible root system")

    @property
    def name(self) -> str:
        return f"{self.kind}{self.rank}"

    @property
    def ambient(self) -> int:
        return {"A": self.rank + 1, "D": self.rank, "E": 8}[self.kind]

    @property
    def root_count(self) -> int:
        n = self.rank
        return {"A": n * (n + 1), "D": 2 * n * (n - 1)}.get(self.kind) or {6: 72, 7: 126, 8: 240}[n]


def parse_spec(spec: str) -> tuple[Component, ...]:
    """Parse ``"E7+D10"``, ``"2E7+E8"``, ``"D4 + E7"`` into components (in order)."""
    if not spec or not spec.strip():
        raise BadSpec("empty lattice spec")
    comps: list[Component] = []
    for token in spec.replace("⊥", "+").split("+"):
        mt = _COMPONENT.match(token.strip().upper())
        if not mt:
            raise BadSpec(f"cannot parse component {token!r}")
        mult = int(mt.group(1) or 1)
        if mult < 1:
            raise BadSpec(f"multiplicity must be positive in {token!r}")
        comps.extend([Component(mt.group(2), int(mt.group(3)))] * mult)
    return tuple(comps)


def spec_name(components: Sequence[Component]) -> str:
    return "+".join(c.name for c in components)


def odd_menu_valid(spec: str | Sequence[Component]) -> bool:
    """Whether a lattice has the shape ``a E7 + b E8 + sum t_i D_{d_i}``, even
    ``d_i >= 10``, ``a != 0`` (the odd-rank witnesses with 8 weight-4 MUWM)."""
    comps = parse_spec(spec) if isinstance(spec, str) else tuple(spec)
    if not any(c.name == "E7" for c in comps):
        return False
    for c in comps:
        if c.name in ("E7", "E8"):
            continue
        if c.kind == "D" and c.rank >= 10 and c.rank % 2 == 0:
            continue
        return False
    return True


def _a_roots(n: int) -> list[tuple[int, ...]]:
    out = []
    for i, j in itertools.permutations(range(n + 1), 2):
        v = [0] * (n + 1)
        v[i], v[j] = 2, -2
        out.append(tuple(v))
    return out


def _d_roots(n: int) -> list[tuple[int, ...]]:
    out = []
    for i, j in itertools.combinations(range(n), 2):
        for si, sj in itertools.product((2, -2), repeat=2):
            v = [0] * n
            v[i], v[j] = si, sj
            out.append(tuple(v))
    return out


def _e8_roots() -> list[tuple[int, ...]]:
    out = _d_roots(8)
    for signs in itertools.product((1, -1), repeat=8):
        if signs.count(-1) % 2 == 0:
            out.append(signs)
    return out


def _component_roots(c: Component) -> list[tuple[int, ...]]:
    if c.kind == "A":
        roots = _a_roots(c.rank)
    elif c.kind == "D":
        roots = _d_roots(c.rank)
    else:
        roots = _e8_roots()
        pins = {6: [E7_PIN, E6_PIN], 7: [E7_PIN], 8: []}[c.rank]
        roots = [r for r in roots if all(np.dot(r, p) == 0 for p in pins)]
    return sorted(roots)


@dataclass(frozen=True, eq=False)
class RootSystem:
    """Roots of an orthogonal sum of irreducible root systems (doubled)."""

    components: tuple[Component, ...]
    roots: np.ndarray
    blocks: tuple[tuple[int, int], ...]  # root index ranges per component

    def __post_init__(self):
        self.roots.setflags(write=False)

    @property
    def name(self) -> str:
        return spec_name(self.components)

    @property
    def rank(self) -> int:
        return sum(c.rank for c in self.components)

    @property
    def ambient_dim(self) -> int:
        return self.roots.shape[1]

    def __len__(self) -> int:
        return self.roots.shape[0]

    def code(self) -> SphericalCode:
        return SphericalCode.from_vectors(self.roots)


def generate_roots(spec: str | Sequence[Component]) -> RootSystem:
    comps = parse_spec(spec) if isinstance(spec, str) else tuple(spec)
    ambient = sum(c.ambient for c in comps)
    rows, blocks = [], []
    offset = 0
    for c in comps:
        start = len(rows)
        for r in _component_roots(c):
            v = [0] * ambient
            v[offset:offset + c.ambient] = r
            rows.append(v)
        blocks.append((start, len(rows)))
        offset += c.ambient
    return RootSystem(comps, np.array(rows, dtype=np.int64), tuple(blocks))


@dataclass(frozen=True)
class FrameDecomposition:
    """Disjoint 2-frames of a root system, each a tuple of root indices."""

    system: RootSystem
    frames: tuple[tuple[int, ...], ...]

    @property
    def count(self) -> int:
        return len(self.frames)

    @property
    def leftover(self) -> tuple[int, ...]:
        used = {i for f in self.frames for i in f}
        return tuple(i for i in range(len(self.system)) if i not in used)

    def frame_vectors(self, t: int) -> np.ndarray:
        return self.system.roots[list(self.frames[t])]

    def validate(self) -> "FrameDecomposition":
        r = self.system.rank
        seen: set[int] = set()
        for t, f in enumerate(self.frames):
            if seen.intersection(f):
                raise BadSpec(f"frame {t} overlaps an earlier frame")
            seen.update(f)
            V = self.frame_vectors(t)
            keys = {tuple(v) for v in V.tolist()}
            if len(f) != 2 * r or any(tuple(-x for x in k) not in keys for k in keys):
                raise BadSpec(f"frame {t} is not {r} antipodal pairs")
            reps = np.array(sorted({max(k, tuple(-x for x in k)) for k in keys}))
            if not np.array_equal(reps @ reps.T, ROOT_NORM * np.eye(r, dtype=np.int64)):
                raise BadSpec(f"frame {t} has Gram matrix != 8 I")
        return self

    def as_code(self) -> tuple[SphericalCode, CrossPolytopeDecomposition]:
        """The union of the frames as a decomposed spherical code."""
        idx = [i for f in self.frames for i in f]
        code = SphericalCode.from_vectors(self.system.roots[idx])
        parts, start = [], 0
        for f in self.frames:
            parts.append(tuple(range(start, start + len(f))))
            start += len(f)
        return code, CrossPolytopeDecomposition(code, tuple(parts), self.system.rank)


def symmetry_orbits(system: RootSystem) -> list[list[int]]:
    """Orbits of antipodal classes under coordinate symmetries of the root set.

    Candidate generators are adjacent transpositions, one sign change, two sign
    changes; each is kept only if it maps the root set onto itself (so it is an
    isometry of the system). Orbits are returned sorted by least element.
    """
    reps, _ = antipodal_classes(system.code())
    index = {r: i for i, r in enumerate(reps)}
    n = system.ambient_dim
    roots = {tuple(r) for r in system.roots.tolist()}
    candidates = []
    for i in range(n - 1):
        perm = list(range(n))
        perm[i], perm[i + 1] = perm[i + 1], perm[i]
        candidates.append((perm, [1] * n))
    for flips in ((0,), (0, 1)):
        signs = [-1 if j in flips else 1 for j in range(min(n, 2))] + [1] * (n - min(n, 2))
        candidates.append((list(range(n)), signs))

    def apply(perm, signs, v):
        return tuple(signs[j] * v[perm[j]] for j in range(n))

    parent = list(range(len(reps)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for perm, signs in candidates:
        if {apply(perm, signs, r) for r in roots} != roots:
            continue
        for r, i in index.items():
            a, b = find(i), find(index[canonical_sign(apply(perm, signs, r))])
            if a != b:
                parent[max(a, b)] = min(a, b)
    orbits: dict[int, list[int]] = {}
    for i in range(len(reps)):
        orbits.setdefault(find(i), []).append(i)
    return sorted(orbits.values())


def max_orthogonal_roots(system: RootSystem,
                         budget: int = search.DEFAULT_NODE_BUDGET) -> search.CliqueResult:
    """Largest set of mutually orthogonal roots (one per antipodal class).

    Maximum clique in the orthogonality graph, searched once per symmetry
    orbit: a clique meeting orbit ``O`` can be moved to contain ``O``'s least
    class, and cliques meeting earlier orbits are already covered.
    """
    reps, _ = antipodal_classes(system.code())
    adj = orthogonality_graph(reps)
    excluded = 0
    best: tuple[int, ...] = ()
    nodes = 0
    for orbit in symmetry_orbits(system):
        v = orbit[0]
        cand = adj[v] & ~excluded
        verts = [j for j in range(len(reps)) if (cand >> j) & 1]
        pos = {j: t for t, j in enumerate(verts)}
        sub = [sum(1 << pos[k] for k in verts if (adj[j] >> k) & 1) for j in verts]
        res = search.max_clique(sub, stop_at=system.rank - 1, budget=budget - nodes)
        nodes += res.nodes
        if res.size + 1 > len(best):
            best = tuple(sorted([v] + [verts[t] for t in res.witness]))
        if len(best) >= system.rank:
            break
        for j in orbit:
            excluded |= 1 << j
    return search.CliqueResult(len(best), best, nodes)


def round_robin(d: int) -> list[list[tuple[int, int]]]:
    """Circle-method 1-factorization of K_d: ``d - 1`` perfect matchings.

    Round ``r`` pairs ``r`` with the fixed vertex ``d - 1`` and
    ``(r + i) mod (d-1)`` with ``(r - i) mod (d-1)`` for ``i = 1..d/2-1``.
    """
    if d % 2:
        raise OddD(f"K_{d} has no perfect matching for odd d")
    n = d - 1
    rounds = []
    for r in range(n):
        pairs = [(r, n)] + [tuple(sorted(((r + i) % n, (r - i) % n))) for i in range(1, d // 2)]
        rounds.append(sorted(pairs))
    return rounds


def d_lattice_decomposition(d: int) -> FrameDecomposition:
    """``d - 1`` disjoint frames covering all roots of D_d (d even)."""
    if d % 2 or d < 4:
        raise OddD(f"need even d >= 4, got {d}")
    system = generate_roots(f"D{d}")
    index = {tuple(r): i for i, r in enumerate(system.roots.tolist())}
    frames = []
    for matching in round_robin(d):
        f = []
        for i, j in matching:
            for si, sj in itertools.product((2, -2), repeat=2):
                v = [0] * d
                v[i], v[j] = si, sj
                f.append(index[tuple(v)])
        frames.append(tuple(sorted(f)))
    return FrameDecomposition(system, tuple(frames)).validate()


@dataclass
class FrameSearchResult:
    count: int
    decomposition: FrameDecomposition
    optimal: bool
    upper_bound: int
    nodes: int
    method: str
    candidate_frames: int
    clique_number: int | None = None

    def certificate(self) -> dict:
        sys_ = self.decomposition.system
        return {
            "system": sys_.name,
            "rank": sys_.rank,
            "roots": len(sys_),
            "frames": self.count,
            "optimal": self.optimal,
            "counting_upper_bound": self.upper_bound,
            "candidate_frames": self.candidate_frames,
            "clique_number": self.clique_number,
            "method": self.method,
            "nodes": self.nodes,
            "witness": [list(f) for f in self.decomposition.frames],
        }


def max_disjoint_frames(system: RootSystem,
                        budget: int = search.DEFAULT_NODE_BUDGET) -> FrameSearchResult:
    """Exact maximum number of pairwise disjoint 2-frames, with a witness.

    Candidate frames are the rank-sized cliques of the orthogonality graph on
    antipodal classes. When there are none, the maximum clique size is
    recorded as the exhaustion certificate. Otherwise an exact cover is tried
    first (meeting the counting bound ``classes / rank`` proves optimality),
    then a branch and bound over packings.
    """
    code = system.code()
    reps, pairs = antipodal_classes(code)
    adj = orthogonality_graph(reps)
    r = system.rank
    upper = len(reps) // r
    frames = search.cliques_of_size(adj, r)
    if not frames:
        clique = search.max_clique(adj, stop_at=r, budget=budget)
        return FrameSearchResult(0, FrameDecomposition(system, ()), True, upper,
                                 clique.nodes, "no-frames", 0, clique.size)
    packing = search.max_packing(len(reps), frames, r, budget)
    # code order equals root order, so class pairs index roots directly
    chosen = [tuple(sorted(i for c in frames[f] for i in pairs[c])) for f in packing.chosen]
    chosen.sort()
    dec = FrameDecomposition(system, tuple(chosen)).validate()
    return FrameSearchResult(packing.count, dec, packing.optimal, upper, packing.nodes,
                             packing.method, len(frames), r)


def direct_sum_frames(parts: Sequence[FrameDecomposition]) -> FrameDecomposition:
    """Frames of an orthogonal sum: the t-th frame joins every component's t-th frame.

    Yields ``min_i m(L_i)`` frames when each input is maximum.
    """
    if not parts:
        raise BadSpec("need at least one component")
    comps = tuple(c for p in parts for c in p.system.components)
    system = generate_roots(comps)
    count = min(p.count for p in parts)
    index = {tuple(r): i for i, r in enumerate(system.roots.tolist())}
    frames = []
    for t in range(count):
        f = []
        offset = 0
        for p in parts:
            width = p.system.ambient_dim
            for v in p.frame_vectors(t).tolist():
                full = [0] * system.ambient_dim
                full[offset:offset + width] = v
                f.append(index[tuple(full)])
            offset += width
        frames.append(tuple(sorted(f)))
    return FrameDecomposition(system, tuple(frames)).validate()


@lru_cache(maxsize=None)
def irreducible_frames(name: str, budget: int = search.DEFAULT_NODE_BUDGET) -> FrameSearchResult:
    """Cached maximum frame decomposition of one irreducible system.

    D_d with even d uses the round-robin construction: it already meets the
    counting bound ``d(d-1)/d``, so it is maximum. Everything else is searched.
    """
    (comp,) = parse_spec(name)
    if comp.kind == "D" and comp.rank % 2 == 0:
        dec = d_lattice_decomposition(comp.rank)
        upper = len(dec.system) // 2 // comp.rank
        return FrameSearchResult(dec.count, dec, dec.count == upper, upper, 0,
                                 "round-robin", 0)
    return max_disjoint_frames(generate_roots(name), budget)


def frames_for(spec: str | Sequence[Component],
               budget: int = search.DEFAULT_NODE_BUDGET) -> FrameDecomposition:
    comps = parse_spec(spec) if isinstance(spec, str) else tuple(spec)
    parts = [irreducible_frames(c.name, budget).decomposition for c in comps]
    if len(parts) == 1:
        return parts[0]
    return direct_sum_frames(parts)


def weight4_table_value(d: int) -> tuple[int, str | None]:
    """Maximum number of MUWM of order ``d`` and weight 4, with the default witness lattice."""
    if d < 4 or d in (5, 9):
        return 0, None
    if d == 8:
        return 14, "E8"
    if d % 2 == 0:
        return d - 2, f"D{d}"
    if d == 7:
        return 8, "E7"
    if d == 11:
        return 2, "D4+E7"
    if d == 13:
        return 4, "D6+E7"
    if d == 15:
        return 8, "E7+E8"
    return 8, f"E7+D{d - 7}"


@dataclass
class Weight4Result:
    d: int
    m: int
    lattice: str | None
    family: MatrixFamily | None
    frames: FrameDecomposition | None


def weight4_maximum(d: int, lattice: str | None = None, budget: int = search.DEFAULT_NODE_BUDGET,
                    debug: bool = False) -> Weight4Result:
    """Table value for order ``d`` and a witness family built from root frames.

    The first frame is the reference coordinate frame; each further frame
    becomes one weighing matrix, so ``F`` frames give ``F - 1`` MUWM.
    ``lattice`` overrides the default witness (its rank must equal ``d``).
    """
    m, default = weight4_table_value(d)
    spec = lattice or default
    if spec is None:
        return Weight4Result(d, 0, None, None, None)
    comps = parse_spec(spec)
    if sum(c.rank for c in comps) != d:
        raise BadSpec(f"{spec} has rank {sum(c.rank for c in comps)}, expected {d}")
    frames = frames_for(comps, budget)
    if frames.count < 2:
        return Weight4Result(d, 0, spec, None, frames)
    code, dec = frames.as_code()
    family = muwm_code_conversion(code, dec, reference=0, debug=debug)
    return Weight4Result(d, family.size, spec, family, frames)


def irreducible_components(max_rank: int) -> list[Component]:
    out = [Component("A", n) for n in range(1, max_rank + 1)]
    out += [Component("D", n) for n in range(4, max_rank + 1)]
    out += [Component("E", n) for n in (6, 7, 8) if n <= max_rank]
    return out


def frame_upper_bound(c: Component) -> int:
    """Counting bound: antipodal classes divided by the rank."""
    return c.root_count // 2 // c.rank


def _component_frame_count(c: Component, budget: int) -> int:
    if c.kind == "D" and c.rank % 2 == 0 or c.rank <= 8:
        return irreducible_frames(c.name, budget).count
    # frames need a clique of size rank; only search for them if one exists
    system = generate_roots(c.name)
    if max_orthogonal_roots(system, budget).size < c.rank:
        return 0
    return max_disjoint_frames(system, budget).count


def lattices_of_rank(d: int) -> list[tuple[Component, ...]]:
    """All multisets of irreducible root systems of total rank ``d``."""
    comps = irreducible_components(d)
    out = []

    def rec(start: int, remaining: int, chosen: list[Component]) -> None:
        if remaining == 0:
            out.append(tuple(chosen))
            return
        for i in range(start, len(comps)):
            c = comps[i]
            if c.rank <= remaining:
                chosen.append(c)
                rec(i, remaining - c.rank, chosen)
                chosen.pop()

    rec(0, d, [])
    return out


@dataclass
class Confirmation:
    d: int
    m: int
    best_lattices: list[str]
    lattices_checked: int
    lattices_pruned: int
    component_frames: dict[str, int] = field(default_factory=dict)


def confirm_weight4(d: int, budget: int = search.DEFAULT_NODE_BUDGET) -> Confirmation:
    """Independent maximum over every root lattice of rank ``d``.

    Uses ``m(sum L_i) = min m(L_i)`` with irreducible counts found by search
    (even D_n: by a construction meeting the counting bound). Lattices are
    visited in decreasing order of their counting bound, and skipped once that
    bound cannot beat the best value found; ``best_lattices`` lists the
    evaluated lattices attaining the maximum.
    """
    lattices = lattices_of_rank(d)
    lattices.sort(key=lambda lat: (-min(frame_upper_bound(c) for c in lat), spec_name(lat)))
    counts: dict[str, int] = {}
    best, best_names, pruned = 0, [], 0
    for lat in lattices:
        if max(min(frame_upper_bound(c) for c in lat) - 1, 0) < best:
            pruned += 1
            continue
        for c in sorted(set(lat), key=lambda c: (frame_upper_bound(c), c.name)):
            if c.name not in counts:
                counts[c.name] = _component_frame_count(c, budget)
            if max(counts[c.name] - 1, 0) < best:
                break
        else:
            value = max(min(counts[c.name] for c in lat) - 1, 0)
            if value > best:
                best, best_names = value, []
            if value == best:
                best_names.append(spec_name(lat))
            continue
        pruned += 1
    return Confirmation(d, best, best_names, len(lattices), pruned, dict(sorted(counts.items())))


def d_frames_family(d: int, strict: bool = False,
                    debug: bool = False) -> tuple[MatrixFamily, SphericalCode,
                                                  CrossPolytopeDecomposition]:
    """MQUWM ``(d, 2, 4, 1)``: each D_d frame, halved back to ``±e_i ± e_j``, is one matrix.

    Disjoint frames never share a line, so cross inner products lie in
    ``{0, ±1}`` and ``d - 1`` frames give ``d - 1`` members.
    """
    dec = d_lattice_decomposition(d)
    code, parts = dec.as_code()
    halved = SphericalCode.from_vectors(code.vectors // 2)
    split = CrossPolytopeDecomposition(halved, parts.parts, d)
    family = code_to_family(halved, split, 1, strict=strict, debug=debug)
    return family, halved, split

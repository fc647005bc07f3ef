"""Exact-integer weighing-matrix algebra.

A weighing matrix of order ``d`` and weight ``k`` is a ``d x d`` matrix over
{-1, 0, 1} with ``W W^T = k I``. Two such matrices are quasi-unbiased with
scale ``a`` when every entry of ``W1 W2^T`` squares to 0 or ``a``; then
``W1 W2^T / sqrt(a)`` is again a weighing matrix, of weight ``l = k^2 / a``.

Irrational scalars never appear: ``sqrt(a)`` is only used when it is an
integer, and every predicate works on squared entries.
"""

from __future__ import annotations

import enum
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    BadEntry,
    BadParams,
    DimensionMismatch,
    InexactDivision,
    NonDiagonalProduct,
    NonSquareScale,
    NotMuwmParams,
    NotQuasiUnbiased,
    TooFewMembers,
    UnequalDiagonal,
)

log = logging.getLogger(__name__)


def is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def _as_int_matrix(M) -> np.ndarray:
    A = np.array(M, dtype=np.int64)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {A.shape}")
    return A


@dataclass(frozen=True, eq=False)
class WeighingMatrix:
    """Validated weighing matrix; build through :func:`verify_weighing`."""

    entries: np.ndarray
    weight: int

    def __post_init__(self):
        self.entries.setflags(write=False)

    @property
    def order(self) -> int:
        return self.entries.shape[0]

    @property
    def T(self) -> "WeighingMatrix":
        return WeighingMatrix(np.ascontiguousarray(self.entries.T), self.weight)

    def __eq__(self, other):
        if not isinstance(other, WeighingMatrix):
            return NotImplemented
        return self.weight == other.weight and np.array_equal(self.entries, other.entries)

    def __hash__(self):
        return hash((self.weight, self.entries.tobytes()))

    def tolist(self) -> list[list[int]]:
        return self.entries.tolist()


def verify_weighing(M, debug: bool = True) -> WeighingMatrix:
    """Check ``M M^T = k I`` exactly and return the matrix with its weight.

    With ``debug`` the consequences are re-checked independently: ``M^T M = k I``
    and exactly ``k`` nonzeros in every row and column.
    """
    A = _as_int_matrix(M)
    bad = ~np.isin(A, (-1, 0, 1))
    if bad.any():
        i, j = np.argwhere(bad)[0]
        raise BadEntry(f"entry ({i},{j}) = {A[i, j]} is not in {{-1,0,1}}")
    G = A @ A.T
    diag = np.diag(G)
    off = G - np.diag(diag)
    if off.any():
        i, j = np.argwhere(off)[0]
        raise NonDiagonalProduct(f"rows {i} and {j} have inner product {G[i, j]}")
    if len(set(diag.tolist())) != 1:
        raise UnequalDiagonal(f"row weights differ: {sorted(set(diag.tolist()))}")
    k = int(diag[0])
    if k < 1:
        raise UnequalDiagonal("zero rows: weight must be positive")
    if debug:
        d = A.shape[0]
        assert np.array_equal(A.T @ A, k * np.eye(d, dtype=np.int64))
        nz = A != 0
        assert (nz.sum(axis=0) == k).all() and (nz.sum(axis=1) == k).all()
    return WeighingMatrix(A, k)


def product_square_identity(W1: WeighingMatrix, W2: WeighingMatrix) -> bool:
    """``(W1 W2^T)(W1 W2^T)^T = k^2 I`` holds for any two weight-k weighing matrices:
    it expands to ``W1 (W2^T W2) W1^T = k W1 W1^T = k^2 I``."""
    P = W1.entries @ W2.entries.T
    k = W1.weight
    return np.array_equal(P @ P.T, k * k * np.eye(W1.order, dtype=np.int64))


def quasi_unbiased_check(W1: WeighingMatrix, W2: WeighingMatrix, a: int,
                         debug: bool = False) -> bool:
    """True iff every entry ``e`` of ``W1 W2^T`` has ``e^2`` in ``{0, a}``."""
    if W1.order != W2.order or W1.weight != W2.weight:
        raise DimensionMismatch(
            f"order/weight differ: ({W1.order},{W1.weight}) vs ({W2.order},{W2.weight})")
    if a <= 0:
        raise NonSquareScale(f"scale must be positive, got {a}")
    if not is_square(a):
        # W1 W2^T is invertible, so some entry is nonzero and would need e^2 = a
        raise NonSquareScale(f"scale {a} is not a perfect square")
    P = W1.entries @ W2.entries.T
    if debug:
        assert product_square_identity(W1, W2)
    sq = P * P
    return bool(np.isin(sq, (0, a)).all())


@dataclass(frozen=True)
class FamilyParams:
    d: int
    k: int
    l: int
    a: int

    def __post_init__(self):
        d, k, l, a = self.d, self.k, self.l, self.a
        if min(d, k, l, a) < 1:
            raise BadParams(f"parameters must be positive: {self}")
        if l * a != k * k:
            raise BadParams(f"l*a must equal k^2: {l}*{a} != {k}^2")
        if not is_square(a):
            raise BadParams(f"a = {a} is not a perfect square")
        if k > d or l > d:
            raise BadParams(f"weights exceed order: k={k}, l={l}, d={d}")

    @classmethod
    def from_k_a(cls, d: int, k: int, a: int) -> "FamilyParams":
        if (k * k) % a:
            raise BadParams(f"a = {a} does not divide k^2 = {k * k}")
        return cls(d, k, k * k // a, a)

    @property
    def scale_root(self) -> int:
        return math.isqrt(self.a)

    @property
    def is_muwm(self) -> bool:
        return self.a == self.k == self.l

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.d, self.k, self.l, self.a)


@dataclass(frozen=True)
class MatrixFamily:
    """Ordered set of weighing matrices, pairwise quasi-unbiased for ``params``.

    Construction does not verify; call :meth:`verify` (or :func:`verify_family`).
    """

    params: FamilyParams
    members: tuple[WeighingMatrix, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.members))

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __getitem__(self, i):
        return self.members[i]

    @property
    def size(self) -> int:
        return len(self.members)

    def verify(self, debug: bool = False, workers: int = 1) -> "MatrixFamily":
        verify_family(self, debug=debug, workers=workers)
        return self

    def __eq__(self, other):
        if not isinstance(other, MatrixFamily):
            return NotImplemented
        return self.params == other.params and self.members == other.members


def make_family(matrices: Iterable, params: FamilyParams | Sequence[int],
                debug: bool = False, workers: int = 1) -> MatrixFamily:
    """Validate raw matrices into a verified :class:`MatrixFamily`."""
    if not isinstance(params, FamilyParams):
        params = FamilyParams(*params)
    members = tuple(m if isinstance(m, WeighingMatrix) else verify_weighing(m, debug=debug)
                    for m in matrices)
    fam = MatrixFamily(params, members)
    verify_family(fam, debug=debug, workers=workers)
    return fam


def verify_family(family: MatrixFamily, debug: bool = False, workers: int = 1) -> None:
    """Raise on the first violated family invariant.

    Release level checks member order/weight and every pairwise product.
    Debug level also re-verifies each member from scratch and asserts the
    product identity and perfect-square weight of unbiased pairs.
    Pairs are checked in index order; with ``workers > 1`` products are
    computed concurrently but the first failing pair in index order is the
    one reported.
    """
    p = family.params
    for idx, W in enumerate(family.members):
        if W.order != p.d:
            raise DimensionMismatch(f"member {idx} has order {W.order}, expected {p.d}")
        if W.weight != p.k:
            raise UnequalDiagonal(f"member {idx} has weight {W.weight}, expected {p.k}")
        if debug:
            verify_weighing(W.entries, debug=True)
    if family.size >= 2 and p.is_muwm:
        # entries of W1 W2^T are integers squaring to k
        assert is_square(p.k), "unbiased weighing matrices need a square weight"
    pairs = list(combinations(range(family.size), 2))

    def check(pair):
        i, j = pair
        return quasi_unbiased_check(family.members[i], family.members[j], p.a, debug=debug)

    if workers > 1 and len(pairs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(check, pairs))
    else:
        results = []
        for pair in pairs:
            ok = check(pair)
            results.append(ok)
            if not ok:
                break
    for pair, ok in zip(pairs, results):
        if not ok:
            i, j = pair
            P = family.members[i].entries @ family.members[j].entries.T
            bad = sorted(set((P * P).ravel().tolist()) - {0, p.a})
            raise NotQuasiUnbiased(i, j, f"squared product entries {bad} outside {{0,{p.a}}}")


def derive_muwm(family: MatrixFamily, debug: bool = False) -> MatrixFamily:
    """Map MQUWM ``{W_1..W_f}`` to the ``f - 1`` MUWM ``W_i W_1^T / sqrt(a)``, i >= 2."""
    if family.size < 2:
        raise TooFewMembers(f"need at least 2 members, got {family.size}")
    p = family.params
    s = p.scale_root
    W1t = family.members[0].entries.T
    out = []
    for idx, W in enumerate(family.members[1:], start=2):
        P = W.entries @ W1t
        if (P % s).any():
            raise InexactDivision(f"W_{idx} W_1^T is not divisible by sqrt(a) = {s}")
        M = verify_weighing(P // s, debug=debug)
        if M.weight != p.l:
            raise InexactDivision(f"derived matrix {idx} has weight {M.weight}, expected {p.l}")
        out.append(M)
    derived = MatrixFamily(FamilyParams(p.d, p.l, p.l, p.l), tuple(out))
    verify_family(derived, debug=debug)
    return derived


def derive_muwm_with_transpose(family: MatrixFamily, debug: bool = False) -> MatrixFamily:
    """``{W_1^T} + derive_muwm(family)``; same size as the input MUWM family."""
    p = family.params
    if not p.is_muwm:
        raise NotMuwmParams(f"need a = k = l, got {p.as_tuple()}")
    if family.size < 2:
        rest: tuple[WeighingMatrix, ...] = ()
    else:
        rest = derive_muwm(family, debug=debug).members
    out = MatrixFamily(p, (family.members[0].T,) + tuple(rest))
    verify_family(out, debug=debug)
    return out


# -- parameter screening --------------------------------------------------

class Verdict(enum.Enum):
    INFEASIBLE = "INFEASIBLE"
    UNKNOWN = "UNKNOWN"


@dataclass(frozen=True)
class Violation:
    rule: str
    reason: str


@dataclass(frozen=True)
class Screening:
    d: int
    k: int
    a: int
    size: int | None
    violations: tuple[Violation, ...]

    @property
    def verdict(self) -> Verdict:
        return Verdict.INFEASIBLE if self.violations else Verdict.UNKNOWN

    @property
    def rules(self) -> list[str]:
        return [v.rule for v in self.violations]

    def to_dict(self) -> dict:
        return {
            "d": self.d, "k": self.k, "a": self.a, "size": self.size,
            "verdict": self.verdict.value,
            "violations": [{"rule": v.rule, "reason": v.reason} for v in self.violations],
        }


def screen_parameters(d: int, k: int, a: int, size: int | None = None) -> Screening:
    """Cheap necessary conditions for MQUWM with parameters ``(d, k, k^2/a, a)``.

    Every violated rule is reported, in this order: ``odd-order``,
    ``counting-bound``, ``lp-bound``, ``non-square-scale``. ``precondition``
    flags inputs outside the parameter domain (non-positive values, ``a`` not
    dividing ``k^2``, weights above the order). No rule firing means UNKNOWN.
    """
    found: list[Violation] = []
    if min(d, k, a) < 1 or (k * k) % a or k > d or k * k // a > d:
        found.append(Violation("precondition",
                               f"(d,k,a)=({d},{k},{a}) needs positive values, a | k^2 and k, k^2/a <= d"))
        return Screening(d, k, a, size, tuple(found))
    l = k * k // a
    if d % 2 == 1 and not is_square(k):
        found.append(Violation("odd-order",
                               f"no weighing matrix of odd order {d} has non-square weight {k}"))
    if (k, l, a) == (2, 4, 1) and size is not None and size > d - 1:
        found.append(Violation("counting-bound",
                               f"at most d-1 = {d - 1} MQUWM ({d},2,4,1); requested {size}"))
    if k == d and a == 2 * d and size is not None and size > d:
        found.append(Violation("lp-bound",
                               f"at most d = {d} MQUWM ({d},{d},{d // 2},{2 * d}); requested {size}"))
    if not is_square(a) and (size is None or size >= 2):
        found.append(Violation("non-square-scale",
                               f"a = {a} is not a perfect square, so no two matrices are quasi-unbiased"))
    return Screening(d, k, a, size, tuple(found))


def canonical_rows(A: np.ndarray) -> np.ndarray:
    """Rows flipped so the first nonzero entry is positive, sorted in decreasing
    lexicographic order (the identity matrix is its own canonical form)."""
    rows = []
    for r in np.asarray(A, dtype=np.int64):
        nz = np.flatnonzero(r)
        rows.append(tuple((-r if nz.size and r[nz[0]] < 0 else r).tolist()))
    rows.sort(reverse=True)
    return np.array(rows, dtype=np.int64).reshape(np.shape(A))


def canonical_member(W: WeighingMatrix) -> WeighingMatrix:
    return WeighingMatrix(canonical_rows(W.entries), W.weight)


def canonical_family(family: MatrixFamily) -> MatrixFamily:
    return MatrixFamily(family.params, tuple(canonical_member(W) for W in family.members))

"""Codes over Z4: Hensel-lifted primitive polynomials, the Kerdock code, the
first-order Z4 Reed-Muller code, the Gray map, and the Z4 MQUWM pipeline.

Coordinates of the cyclic code ``K'(m)`` follow powers of ``x``; the extension
coordinate is appended last and carries ``-(sum of coordinates) mod 4``. Under
this convention the Kerdock coordinates correspond to the points
``alpha^0..alpha^(n-1), 0``, the same order :func:`muwm.bincode.field_points`
uses, so ZRM(1,m) built on those points is a subcode.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .bincode import BinaryCode, field_points, primitive_polynomial, rm1
from .errors import HypothesisFailed, LiftFailure, NotSubcode, TooLarge, UnsupportedM
from .matrixcore import MatrixFamily
from .spherical import CrossPolytopeDecomposition, SphericalCode, code_to_family, inner_product_set

MAX_ENUMERATION = 1 << 22
UNIT_INVERSE = {1: 1, 3: 3}


# -- polynomials -------------------------------------------------------------

@dataclass(frozen=True)
class Z4Polynomial:
    """Polynomial over Z4, coefficients ascending; trailing zeros stripped."""

    coefficients: tuple[int, ...]

    def __post_init__(self):
        c = [int(x) % 4 for x in self.coefficients]
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coefficients", tuple(c or [0]))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1 if any(self.coefficients) else -1

    @property
    def lead(self) -> int:
        return self.coefficients[-1]

    def __mul__(self, other: "Z4Polynomial") -> "Z4Polynomial":
        a, b = self.coefficients, other.coefficients
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return Z4Polynomial(tuple(out))

    def __add__(self, other: "Z4Polynomial") -> "Z4Polynomial":
        a, b = self.coefficients, other.coefficients
        n = max(len(a), len(b))
        return Z4Polynomial(tuple((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
                                  for i in range(n)))

    def __neg__(self) -> "Z4Polynomial":
        return Z4Polynomial(tuple(-x for x in self.coefficients))

    def __sub__(self, other: "Z4Polynomial") -> "Z4Polynomial":
        return self + (-other)

    def divmod(self, divisor: "Z4Polynomial") -> tuple["Z4Polynomial", "Z4Polynomial"]:
        """Long division by a polynomial with unit leading coefficient."""
        if divisor.lead not in UNIT_INVERSE:
            raise ValueError("divisor must have a unit leading coefficient")
        inv = UNIT_INVERSE[divisor.lead]
        rem = list(self.coefficients)
        dc = divisor.coefficients
        dd = len(dc) - 1
        quot = [0] * max(len(rem) - dd, 1)
        for s in range(len(rem) - 1 - dd, -1, -1):
            c = (rem[s + dd] * inv) % 4
            if c:
                quot[s] = c
                for i, y in enumerate(dc):
                    rem[s + i] = (rem[s + i] - c * y) % 4
        return Z4Polynomial(tuple(quot)), Z4Polynomial(tuple(rem[:dd] or [0]))

    def reciprocal(self) -> "Z4Polynomial":
        return Z4Polynomial(tuple(reversed(self.coefficients)))

    def monic(self) -> "Z4Polynomial":
        inv = UNIT_INVERSE[self.lead]
        return Z4Polynomial(tuple(x * inv for x in self.coefficients))

    def mod2(self) -> int:
        return sum((c & 1) << i for i, c in enumerate(self.coefficients))

    def __str__(self):
        terms = []
        for i in range(len(self.coefficients) - 1, -1, -1):
            c = self.coefficients[i]
            if not c:
                continue
            mono = "" if i == 0 else "x" if i == 1 else f"x^{i}"
            terms.append(str(c) if not mono else (mono if c == 1 else f"{c}{mono}"))
        return " + ".join(terms) or "0"


def hensel_lift_primitive(m: int) -> Z4Polynomial:
    """Lift the pinned binary primitive polynomial ``f`` of degree ``m`` to Z4.

    Graeffe's method: split ``f = e(x) + o(x)`` into even and odd parts; then
    ``h(x^2) = ±(e(x)^2 - o(x)^2)`` mod 4, signed so ``h`` is monic. The lift
    is checked to reduce to ``f`` and to divide ``x^(2^m - 1) - 1``.
    """
    if m < 2:
        raise UnsupportedM(f"m must be at least 2, got {m}")
    f = primitive_polynomial(m)
    bits = [(f >> i) & 1 for i in range(m + 1)]
    even = Z4Polynomial(tuple(c if i % 2 == 0 else 0 for i, c in enumerate(bits)))
    odd = Z4Polynomial(tuple(c if i % 2 else 0 for i, c in enumerate(bits)))
    sq = even * even - odd * odd
    coeffs = sq.coefficients
    if any(coeffs[i] for i in range(1, len(coeffs), 2)):
        raise LiftFailure("e^2 - o^2 has odd-degree terms")
    h = Z4Polynomial(tuple(coeffs[::2]))
    if h.lead == 3:
        h = -h
    if h.degree != m or h.lead != 1:
        raise LiftFailure(f"lift {h} is not monic of degree {m}")
    if h.mod2() != f:
        raise LiftFailure(f"lift {h} does not reduce to the binary polynomial")
    n = (1 << m) - 1
    _, rem = x_n_minus_1(n).divmod(h)
    if rem.degree >= 0:
        raise LiftFailure(f"lift {h} does not divide x^{n} - 1 mod 4")
    return h


def x_n_minus_1(n: int) -> Z4Polynomial:
    return Z4Polynomial((3,) + (0,) * (n - 1) + (1,))


def divides_x_n_minus_1(h: Z4Polynomial, n: int) -> bool:
    return x_n_minus_1(n).divmod(h)[1].degree < 0


def kerdock_generator(m: int) -> Z4Polynomial:
    """Monic reciprocal of ``(x^n - 1) / ((x - 1) h(x))``."""
    h = hensel_lift_primitive(m)
    n = (1 << m) - 1
    q, rem = x_n_minus_1(n).divmod(Z4Polynomial((3, 1)) * h)
    if rem.degree >= 0:
        raise LiftFailure("(x - 1) h(x) does not divide x^n - 1")
    return q.reciprocal().monic()


# -- codes -------------------------------------------------------------------

def _standard_form(rows: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Split a Z4 generator matrix into order-4 rows (unit pivots) and order-2 rows.

    Unit pivots are taken left to right and cleared from every other row; the
    remaining rows are all even, so their halves are row-reduced over GF(2)
    and doubled. Returns ``(four_rows, two_rows)`` in pivot order.
    """
    A = np.array(rows, dtype=np.int64).reshape(-1, np.shape(rows)[-1]) % 4
    n = A.shape[1]
    four = []
    rest = [r for r in A]
    for c in range(n):
        pivot = next((i for i, r in enumerate(rest) if r[c] % 2 == 1), None)
        if pivot is None:
            continue
        p = rest.pop(pivot)
        p = (p * UNIT_INVERSE[int(p[c])]) % 4
        rest = [(r - r[c] * p) % 4 for r in rest]
        four = [(r - r[c] * p) % 4 for r in four]
        four.append(p)
    halves = BinaryCode.from_rows(n, [(r // 2) % 2 for r in rest if r.any()])
    two = [2 * np.array(halves_row, dtype=np.int64) for halves_row in
           (np.array([(g >> i) & 1 for i in range(n)]) for g in halves.generators)]
    # clear 2-pivot columns from the order-4 rows where possible
    for t in two:
        c = int(np.flatnonzero(t)[0])
        four = [(r - t) % 4 if r[c] >= 2 else r for r in four]
    four_arr = np.array(four, dtype=np.int64).reshape(len(four), n)
    two_arr = np.array(two, dtype=np.int64).reshape(len(two), n)
    return four_arr, two_arr


@dataclass(frozen=True, eq=False)
class Z4Code:
    """Z4-linear code of type ``4^k1 2^k2`` in standard form."""

    length: int
    four_rows: np.ndarray
    two_rows: np.ndarray
    name: str = field(default="")

    @classmethod
    def from_rows(cls, length: int, rows, name: str = "") -> "Z4Code":
        rows = np.array(rows, dtype=np.int64).reshape(-1, length)
        four, two = _standard_form(rows)
        four.setflags(write=False)
        two.setflags(write=False)
        return cls(length, four, two, name)

    @property
    def k1(self) -> int:
        return self.four_rows.shape[0]

    @property
    def k2(self) -> int:
        return self.two_rows.shape[0]

    @property
    def size(self) -> int:
        return 4 ** self.k1 * 2 ** self.k2

    @property
    def generators(self) -> np.ndarray:
        return np.vstack([self.four_rows, self.two_rows])

    def codewords(self) -> np.ndarray:
        """Every codeword, as rows of an array; order follows the coefficient
        tuples of the order-4 rows (0..3) then order-2 rows (0..1)."""
        if self.size > MAX_ENUMERATION:
            raise TooLarge(f"{self.size} codewords exceed {MAX_ENUMERATION}")
        ranges = [range(4)] * self.k1 + [range(2)] * self.k2
        coeffs = np.array(list(itertools.product(*ranges)), dtype=np.int64)
        coeffs = coeffs.reshape(-1, self.k1 + self.k2)
        return (coeffs @ self.generators) % 4

    def reduce(self, word) -> np.ndarray:
        w = np.array(word, dtype=np.int64) % 4
        for r in self.four_rows:
            c = int(np.flatnonzero(r % 2)[0])
            w = (w - w[c] * r) % 4
        for t in self.two_rows:
            c = int(np.flatnonzero(t)[0])
            if w[c] >= 2:
                w = (w - t) % 4
        return w

    def __contains__(self, word) -> bool:
        return not self.reduce(word).any()

    def contains_code(self, other: "Z4Code") -> bool:
        return other.length == self.length and all(r in self for r in other.generators)

    def __repr__(self):
        label = f"{self.name} " if self.name else ""
        return f"<Z4Code {label}n={self.length} type 4^{self.k1} 2^{self.k2}>"


def kerdock(m: int) -> Z4Code:
    """Extended Z4 Kerdock code K(m) of length ``2^m``."""
    if m < 2:
        raise UnsupportedM(f"m must be at least 2, got {m}")
    g = kerdock_generator(m)
    n = (1 << m) - 1
    rows = []
    for shift in range(n - g.degree):
        v = [0] * (n + 1)
        for j, c in enumerate(g.coefficients):
            v[shift + j] = c
        v[n] = (-sum(v[:n])) % 4
        rows.append(v)
    code = Z4Code.from_rows(n + 1, rows, f"K({m})")
    if code.size != 4 ** (m + 1):
        raise LiftFailure(f"|K({m})| = {code.size}, expected {4 ** (m + 1)}")
    return code


def zrm1(m: int, points: Sequence[int] | None = None) -> Z4Code:
    """ZRM(1,m): all-ones (order 4) plus twice each coordinate function."""
    if m < 1:
        raise UnsupportedM(f"m must be positive, got {m}")
    pts = list(field_points(m) if points is None else points)
    n = 1 << m
    rows = [[1] * n]
    for j in range(m):
        rows.append([2 * ((p >> j) & 1) for p in pts])
    return Z4Code.from_rows(n, rows, f"ZRM(1,{m})")


# -- Gray map and correlations ------------------------------------------------

GRAY = {0: (0, 0), 1: (0, 1), 2: (1, 1), 3: (1, 0)}
_GRAY_TABLE = np.array([GRAY[i] for i in range(4)], dtype=np.int64)


def gray(word) -> np.ndarray:
    """Gray image; the bits of coordinate ``i`` land at positions ``2i, 2i+1``."""
    w = np.asarray(word, dtype=np.int64) % 4
    return _GRAY_TABLE[w].reshape(*w.shape[:-1], 2 * w.shape[-1])


def lee_weight(word) -> int:
    w = np.asarray(word, dtype=np.int64) % 4
    return int(np.minimum(w, 4 - w).sum())


def gray_points(points: Sequence[int], m: int) -> list[int]:
    """Points of F_2^(m+1) labelling the Gray image coordinates ``2i, 2i+1``."""
    return [p | (t << m) for p in points for t in (0, 1)]


def counts(word) -> tuple[int, int, int, int]:
    w = np.asarray(word, dtype=np.int64) % 4
    return tuple(int((w == i).sum()) for i in range(4))


def correlation(word) -> tuple[int, int]:
    """``(n_0 - n_2, n_1 - n_3)``: real and imaginary parts of ``sum i^(x_j)``."""
    n0, n1, n2, n3 = counts(word)
    return (n0 - n2, n1 - n3)


def correlation_spectrum(code: Z4Code) -> set[tuple[int, int]]:
    words = code.codewords()
    cnt = np.stack([(words == i).sum(axis=1) for i in range(4)], axis=1)
    pairs = np.stack([cnt[:, 0] - cnt[:, 2], cnt[:, 1] - cnt[:, 3]], axis=1)
    return {tuple(p) for p in np.unique(pairs, axis=0).tolist()}


def psi_gray(words) -> np.ndarray:
    """``psi o phi`` applied row-wise."""
    return 1 - 2 * gray(words)


def coset_representatives(C: Z4Code, D: Z4Code) -> list[tuple[int, ...]]:
    """Lexicographically least word of each coset of ``D`` in ``C``; zero first."""
    if not C.contains_code(D):
        raise NotSubcode(f"{D!r} is not a subcode of {C!r}")
    sub = D.codewords()
    seen: set[tuple[int, ...]] = set()
    reps = []
    for w in C.codewords():
        key = tuple(w.tolist())
        if key in seen:
            continue
        coset = (w + sub) % 4
        members = sorted(map(tuple, coset.tolist()))
        seen.update(members)
        reps.append(members[0])
    assert len(reps) * D.size == C.size
    return sorted(reps)


def gray_nonlinearity_witness(code: Z4Code) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    """First pair ``(x, y)`` (codeword order) whose Gray images XOR outside the Gray image."""
    words = code.codewords()
    images = gray(words)
    image_set = {tuple(r) for r in images.tolist()}
    for i in range(len(words)):
        sums = images[i] ^ images[i + 1:]
        for j, s in enumerate(sums.tolist()):
            if tuple(s) not in image_set:
                return tuple(words[i].tolist()), tuple(words[i + 1 + j].tolist())
    return None


@dataclass
class Z4PipelineResult:
    m: int
    code: Z4Code
    subcode: Z4Code
    representatives: list[tuple[int, ...]]
    spherical: SphericalCode
    decomposition: CrossPolytopeDecomposition
    family: MatrixFamily
    checks: dict


def z4_pipeline(m: int, strict: bool = False, debug: bool = False) -> Z4PipelineResult:
    """Cosets of ZRM(1,m) in K(m), mapped by ``psi o phi`` to cross polytopes.

    Family parameters are measured from the result: the order is ``2^(m+1)``,
    the weight equals the order, and the scale is ``(2b)^2`` where ``b`` is the
    nonzero real correlation strictly between 0 and ``2^m``.
    """
    C = kerdock(m)
    D = zrm1(m)
    d = C.length
    if not C.contains_code(D):
        raise HypothesisFailed(f"ZRM(1,{m}) is not a subcode of K({m})")
    spectrum = correlation_spectrum(C)
    reals = {abs(x) for x, _ in spectrum} - {0, d}
    checks: dict = {
        "kerdock_size": C.size,
        "kerdock_type": [C.k1, C.k2],
        "zrm1_size": D.size,
        "zrm1_subcode": True,
        "hensel_lift": str(hensel_lift_primitive(m)),
        "generator_polynomial": str(kerdock_generator(m)),
        "correlation_spectrum": sorted(list(p) for p in spectrum),
    }
    if len(reals) != 1:
        raise HypothesisFailed(f"real correlations {sorted(reals)} do not give a single b")
    b = reals.pop()
    checks["b"] = b
    reps = coset_representatives(C, D)
    sub = D.codewords()
    blocks, parts = [], []
    gram_ok = True
    order = 2 * d
    for u in reps:
        coset = np.array(sorted(map(tuple, ((np.array(u) + sub) % 4).tolist())), dtype=np.int64)
        vecs = psi_gray(coset)
        start = sum(len(x) for x in blocks)
        blocks.append(vecs)
        parts.append(tuple(range(start, start + len(vecs))))
        G = vecs @ vecs.T
        gram_ok &= bool(np.isin(G, (order, 0, -order)).all())
    checks["cosets"] = len(reps)
    checks["cosets_are_cross_polytopes"] = gram_ok
    if not gram_ok:
        raise HypothesisFailed("a coset image is not a cross polytope")
    code = SphericalCode.from_vectors(np.vstack(blocks))
    ips = inner_product_set(code)
    checks["inner_products"] = sorted(ips)
    allowed = {0, 2 * b, -2 * b, -order}
    if not ips <= allowed:
        raise HypothesisFailed(f"inner products {sorted(ips - allowed)} outside {sorted(allowed)}")
    dec = CrossPolytopeDecomposition(code, tuple(parts), order)
    family = code_to_family(code, dec, (2 * b) ** 2, strict=strict, debug=debug)
    checks["params"] = list(family.params.as_tuple())
    checks["family_size"] = family.size
    checks["lp_bound"] = order
    checks["attains_lp_bound"] = family.size == order
    return Z4PipelineResult(m, C, D, reps, code, dec, family, checks)


def build_mquwm_z4(m: int, strict: bool = False) -> MatrixFamily:
    return z4_pipeline(m, strict=strict).family

"""Binary linear codes: cyclic/BCH construction, duals, extensions, first-order
Reed-Muller codes, coset representatives, and the binary MQUWM pipeline.

Words are Python ints: bit ``i`` holds coordinate ``i``. For cyclic codes the
coefficient of ``x^i`` sits at coordinate ``i`` and an extension coordinate is
appended last (coordinate ``n``). Evaluation-style codes (Reed-Muller) use the
matching point order ``alpha^0, alpha^1, ..., alpha^(n-1), 0`` so that they are
literally subcodes of the extended cyclic codes.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import EvenModulus, HypothesisFailed, NotSubcode, TooLarge, UnsupportedM
from .matrixcore import MatrixFamily
from .spherical import CrossPolytopeDecomposition, SphericalCode, code_to_family

log = logging.getLogger(__name__)

# Conway polynomials over GF(2), bit i = coefficient of x^i. Every build uses
# these, so alpha (a root of the entry for m) is pinned.
PRIMITIVE_POLYNOMIALS: dict[int, int] = {
    1: 0b11,                 # x + 1
    2: 0b111,                # x^2 + x + 1
    3: 0b1011,               # x^3 + x + 1
    4: 0b10011,              # x^4 + x + 1
    5: 0b100101,             # x^5 + x^2 + 1
    6: 0b1011011,            # x^6 + x^4 + x^3 + x + 1
    7: 0b10000011,           # x^7 + x + 1
    8: 0b100011101,          # x^8 + x^4 + x^3 + x^2 + 1
    9: 0b1000010001,         # x^9 + x^4 + 1
    10: 0b10001101111,       # x^10 + x^6 + x^5 + x^3 + x^2 + x + 1
}

MAX_ENUMERATION_DIM = 24


def primitive_polynomial(m: int) -> int:
    try:
        return PRIMITIVE_POLYNOMIALS[m]
    except KeyError:
        raise UnsupportedM(f"no primitive polynomial shipped for m = {m}") from None


def poly_str(p: int, var: str = "x") -> str:
    terms = []
    for i in range(p.bit_length() - 1, -1, -1):
        if (p >> i) & 1:
            terms.append("1" if i == 0 else var if i == 1 else f"{var}^{i}")
    return " + ".join(terms) or "0"


def gf2_polymul(a: int, b: int) -> int:
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


class GF2m:
    """GF(2^m) by exp/log tables over the pinned primitive polynomial."""

    def __init__(self, m: int):
        self.m = m
        self.poly = primitive_polynomial(m)
        self.order = (1 << m) - 1
        self.exp = [0] * (2 * self.order)
        self.log = [0] * (1 << m)
        x = 1
        for i in range(self.order):
            self.exp[i] = self.exp[i + self.order] = x
            self.log[x] = i
            x <<= 1
            if x >> m:
                x ^= self.poly
        if len(set(self.exp[: self.order])) != self.order:
            raise UnsupportedM(f"table polynomial for m = {m} is not primitive")

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.exp[self.log[a] + self.log[b]]

    def alpha_pow(self, i: int) -> int:
        return self.exp[i % self.order]

    def minimal_polynomial(self, i: int) -> int:
        """Minimal polynomial of alpha^i over GF(2), as a bitmask."""
        coeffs = [1]  # coefficients in GF(2^m), ascending
        for j in cyclotomic_coset(i % self.order, self.order):
            root = self.alpha_pow(j)
            nxt = [0] * (len(coeffs) + 1)
            for t, c in enumerate(coeffs):
                nxt[t + 1] ^= c
                nxt[t] ^= self.mul(c, root)
            coeffs = nxt
        assert all(c in (0, 1) for c in coeffs)
        return sum(c << t for t, c in enumerate(coeffs))


def cyclotomic_coset(i: int, n: int) -> list[int]:
    """Orbit of ``i`` under doubling modulo odd ``n``, in generation order."""
    if n % 2 == 0:
        raise EvenModulus(f"modulus {n} is even")
    i %= n
    orbit = [i]
    j = (2 * i) % n
    while j != i:
        orbit.append(j)
        j = (2 * j) % n
    return orbit


def cyclotomic_cosets(n: int) -> list[list[int]]:
    seen: set[int] = set()
    out = []
    for i in range(n):
        if i not in seen:
            c = cyclotomic_coset(i, n)
            seen.update(c)
            out.append(c)
    return out


def weight(word: int) -> int:
    return word.bit_count()


def word_from_bits(bits: Iterable[int]) -> int:
    return sum((int(b) & 1) << i for i, b in enumerate(bits))


def word_to_bits(word: int, n: int) -> list[int]:
    return [(word >> i) & 1 for i in range(n)]


def lex_key(word: int, n: int) -> tuple[int, ...]:
    """Sort key realising lexicographic order on coordinate tuples."""
    return tuple(word_to_bits(word, n))


def _rref(rows: Iterable[int]) -> list[int]:
    """Reduced echelon basis; pivot = lowest set bit, rows sorted by pivot."""
    basis: list[int] = []
    for r in rows:
        for b in basis:
            if r & (b & -b):
                r ^= b
        if r:
            piv = r & -r
            basis = [b ^ r if b & piv else b for b in basis]
            basis.append(r)
    basis.sort(key=lambda b: b & -b)
    return basis


@dataclass(frozen=True)
class BinaryCode:
    """Row space of ``generators``, held in reduced echelon form."""

    length: int
    generators: tuple[int, ...]
    name: str = field(default="", compare=False)

    @classmethod
    def from_rows(cls, length: int, rows: Iterable, name: str = "") -> "BinaryCode":
        ints = [r if isinstance(r, int) else word_from_bits(r) for r in rows]
        if any(r >> length for r in ints):
            raise ValueError(f"a generator is longer than {length}")
        return cls(length, tuple(_rref(ints)), name)

    @property
    def dimension(self) -> int:
        return len(self.generators)

    @property
    def size(self) -> int:
        return 1 << self.dimension

    @property
    def pivots(self) -> list[int]:
        return [(g & -g).bit_length() - 1 for g in self.generators]

    def reduce(self, word: int) -> int:
        """Coset representative of ``word``: zero on every pivot coordinate.

        This is the lexicographically least word of the coset, since any
        nonzero codeword first differs from zero at a pivot coordinate.
        """
        for g in self.generators:
            if word & (g & -g):
                word ^= g
        return word

    def __contains__(self, word: int) -> bool:
        return self.reduce(word) == 0

    def contains_code(self, other: "BinaryCode") -> bool:
        return other.length == self.length and all(g in self for g in other.generators)

    def codewords(self) -> Iterator[int]:
        """All codewords in Gray-code order (one XOR per step)."""
        if self.dimension > MAX_ENUMERATION_DIM:
            raise TooLarge(f"dimension {self.dimension} exceeds {MAX_ENUMERATION_DIM}")
        gens = self.generators
        word = 0
        yield word
        for step in range(1, 1 << len(gens)):
            word ^= gens[(step & -step).bit_length() - 1]
            yield word

    def matrix(self) -> np.ndarray:
        return np.array([word_to_bits(g, self.length) for g in self.generators],
                        dtype=np.uint8).reshape(self.dimension, self.length)

    def __repr__(self):
        label = f"{self.name} " if self.name else ""
        return f"<BinaryCode {label}[{self.length},{self.dimension}]>"


def cyclic_code(n: int, generator_poly: int, name: str = "") -> BinaryCode:
    deg = generator_poly.bit_length() - 1
    rows = [generator_poly << i for i in range(n - deg)]
    return BinaryCode.from_rows(n, rows, name)


def bch_narrow_sense(m: int) -> BinaryCode:
    """Narrow-sense BCH code of length ``2^m - 1`` with zeros ``alpha^i``,
    ``i`` in the union of the 2-cyclotomic cosets of 1, 2, 3, 4."""
    if m < 3:
        raise UnsupportedM(f"m must be at least 3, got {m}")
    field_ = GF2m(m)
    n = field_.order
    zeros = set()
    g = 1
    for i in (1, 2, 3, 4):
        c = cyclotomic_coset(i, n)
        if not zeros.intersection(c):
            g = gf2_polymul(g, field_.minimal_polynomial(i))
        zeros.update(c)
    return cyclic_code(n, g, f"B(2,{m})")


def dual(code: BinaryCode) -> BinaryCode:
    """Orthogonal complement under the standard dot product."""
    n = code.length
    pivots = code.pivots
    pivot_set = set(pivots)
    rows = []
    for f in range(n):
        if f in pivot_set:
            continue
        w = 1 << f
        for g, p in zip(code.generators, pivots):
            if (g >> f) & 1:
                w |= 1 << p
        rows.append(w)
    return BinaryCode.from_rows(n, rows, f"{code.name}^perp" if code.name else "")


def extend(code: BinaryCode) -> BinaryCode:
    """Append an overall parity coordinate (last)."""
    n = code.length
    rows = [g | ((weight(g) & 1) << n) for g in code.generators]
    return BinaryCode.from_rows(n + 1, rows, f"ext({code.name})" if code.name else "")


def all_ones(n: int) -> int:
    return (1 << n) - 1


def augment_all_ones(code: BinaryCode) -> BinaryCode:
    """Adjoin the all-ones word; returns ``code`` itself if it is already present."""
    one = all_ones(code.length)
    if one in code:
        log.info("all-ones word already in %r; augment is a no-op", code)
        return code
    return BinaryCode.from_rows(code.length, list(code.generators) + [one],
                                f"<{code.name},1>" if code.name else "")


def field_points(m: int) -> list[int]:
    """Evaluation points ``alpha^0..alpha^(2^m-2), 0`` as m-bit integers."""
    if m == 0:
        return [0]
    field_ = GF2m(m)
    return [field_.alpha_pow(i) for i in range(field_.order)] + [0]


def rm1(m: int, points: Sequence[int] | None = None) -> BinaryCode:
    """First-order Reed-Muller code: evaluations of affine functions on F_2^m.

    ``points`` lists the 2^m points (as m-bit ints) in coordinate order; the
    default is :func:`field_points`, matching the extended cyclic codes.
    """
    if m < 1:
        raise UnsupportedM(f"m must be positive, got {m}")
    pts = list(field_points(m) if points is None else points)
    if sorted(pts) != list(range(1 << m)):
        raise ValueError("points must enumerate F_2^m exactly once")
    n = 1 << m
    rows = [all_ones(n)]
    for j in range(m):
        rows.append(word_from_bits((p >> j) & 1 for p in pts))
    return BinaryCode.from_rows(n, rows, f"RM(1,{m})")


def weight_set(code: BinaryCode) -> set[int]:
    return {w.bit_count() for w in code.codewords()}


def weight_distribution(code: BinaryCode) -> dict[int, int]:
    counts: dict[int, int] = {}
    for w in code.codewords():
        c = w.bit_count()
        counts[c] = counts.get(c, 0) + 1
    return dict(sorted(counts.items()))


def minimum_distance(code: BinaryCode) -> int:
    return min((w.bit_count() for w in code.codewords() if w), default=0)


def coset_representatives(C: BinaryCode, D: BinaryCode) -> list[int]:
    """Lexicographically least word of each coset of ``D`` in ``C``.

    The zero word (the coset ``D`` itself) comes first; the rest follow in the
    order of their representatives' coordinate tuples.
    """
    if not C.contains_code(D):
        raise NotSubcode(f"{D!r} is not a subcode of {C!r}")
    # cosets of D in C correspond to the span of C's generators reduced mod D
    reduced = BinaryCode.from_rows(C.length, [D.reduce(g) for g in C.generators])
    reps = {D.reduce(w) for w in reduced.codewords()}
    expected = C.size // D.size
    assert len(reps) == expected, (len(reps), expected)
    return sorted(reps, key=lambda w: lex_key(w, C.length))


def psi(word: int, n: int) -> np.ndarray:
    """``(x_i) -> ((-1)^x_i)``."""
    bits = np.array(word_to_bits(word, n), dtype=np.int64)
    return 1 - 2 * bits


def psi_many(words: Sequence[int], n: int) -> np.ndarray:
    bits = np.array([word_to_bits(w, n) for w in words], dtype=np.int64).reshape(-1, n)
    return 1 - 2 * bits


@dataclass
class BinaryPipelineResult:
    m: int
    code: BinaryCode
    subcode: BinaryCode
    representatives: list[int]
    spherical: SphericalCode
    decomposition: CrossPolytopeDecomposition
    family: MatrixFamily
    checks: dict


def mquwm_code(m: int) -> BinaryCode:
    """``<ext(B(2,m)^perp), 1>``, the code feeding the binary construction."""
    return augment_all_ones(extend(dual(bch_narrow_sense(m))))


def binary_pipeline(m: int, strict: bool = False, debug: bool = False) -> BinaryPipelineResult:
    """MQUWM ``(d, d, d/2, 2d)`` with ``d = 2^m`` members, for odd ``m >= 3``.

    Checks the weight set ``{0, d/2 - a, d/2, d/2 + a, d}`` (``a = 2^((m-1)/2)``)
    and ``RM(1,m)`` containment, then maps each coset of ``RM(1,m)`` through
    ``psi`` to a cross polytope.
    """
    if m < 3 or m % 2 == 0:
        raise UnsupportedM(f"the binary construction needs odd m >= 3, got {m}")
    d = 1 << m
    a = 1 << ((m - 1) // 2)
    C = mquwm_code(m)
    D = rm1(m)
    weights = weight_set(C)
    expected_weights = {0, d // 2 - a, d // 2, d // 2 + a, d}
    checks = {
        "code_length": C.length,
        "code_dimension": C.dimension,
        "weight_set": sorted(weights),
        "expected_weight_set": sorted(expected_weights),
        "weight_set_ok": weights == expected_weights,
        "rm1_subcode": C.contains_code(D),
        "primitive_polynomial": poly_str(primitive_polynomial(m)),
    }
    if not checks["weight_set_ok"]:
        raise HypothesisFailed(f"weight set {sorted(weights)} != {sorted(expected_weights)}")
    if not checks["rm1_subcode"]:
        raise HypothesisFailed(f"RM(1,{m}) is not a subcode of {C!r}")
    reps = coset_representatives(C, D)
    sub_words = list(D.codewords())
    words, parts = [], []
    for u in reps:
        start = len(words)
        words.extend(sorted((u ^ w for w in sub_words), key=lambda x: lex_key(x, d)))
        parts.append(tuple(range(start, len(words))))
    vectors = psi_many(words, d)
    code = SphericalCode.from_vectors(vectors)
    dec = CrossPolytopeDecomposition(code, tuple(parts), d)
    scale = (2 * a) ** 2
    family = code_to_family(code, dec, scale, strict=strict, debug=debug)
    checks.update({
        "cosets": len(reps),
        "scale_a": scale,
        "params": list(family.params.as_tuple()),
        "family_size": family.size,
    })
    return BinaryPipelineResult(m, C, D, reps, code, dec, family, checks)


def build_mquwm_binary(m: int, strict: bool = False) -> MatrixFamily:
    return binary_pipeline(m, strict=strict).family

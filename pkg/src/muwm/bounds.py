"""Exact-rational certificates for the two upper bounds on MQUWM families.

* LP bound for parameters ``(d, d, d/2, 2d)``: the annihilator polynomial of
  the binary image of the family, expanded in binary Krawtchouk polynomials,
  gives ``f <= d``.
* Counting bound for ``(d, 2, 4, 1)``: rows come from the ``2d(d-1)`` vectors
  with two entries ±1, each matrix uses ``2d`` of them, so ``f <= d - 1``.

All arithmetic uses :class:`fractions.Fraction`; no floats reach a certificate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DegenerateD, ExpansionMismatch


class RationalPolynomial:
    """Polynomial in ``z`` with Fraction coefficients, ascending degree."""

    __slots__ = ("coefficients",)

    def __init__(self, coefficients: Iterable = (0,)):
        c = [Fraction(x) for x in coefficients]
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        self.coefficients: tuple[Fraction, ...] = tuple(c or [Fraction(0)])

    @classmethod
    def constant(cls, c) -> "RationalPolynomial":
        return cls([c])

    @classmethod
    def linear(cls, c0, c1) -> "RationalPolynomial":
        return cls([c0, c1])

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1 if any(self.coefficients) else -1

    @property
    def lead(self) -> Fraction:
        return self.coefficients[-1]

    def __call__(self, z) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * z + c
        return acc

    def _coerce(self, other) -> "RationalPolynomial":
        return other if isinstance(other, RationalPolynomial) else RationalPolynomial([other])

    def __add__(self, other):
        other = self._coerce(other)
        a, b = self.coefficients, other.coefficients
        n = max(len(a), len(b))
        return RationalPolynomial((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
                                  for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return RationalPolynomial(-c for c in self.coefficients)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        a, b = self.coefficients, other.coefficients
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return RationalPolynomial(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RationalPolynomial([other])
        if not isinstance(other, RationalPolynomial):
            return NotImplemented
        return self.coefficients == other.coefficients

    def __hash__(self):
        return hash(self.coefficients)

    def __repr__(self):
        return f"RationalPolynomial({[str(c) for c in self.coefficients]})"

    def to_strings(self) -> list[str]:
        return [frac_str(c) for c in self.coefficients]


def frac_str(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def falling_binomial(expr: RationalPolynomial, j: int) -> RationalPolynomial:
    """``binom(expr, j)`` as a polynomial: ``expr (expr-1) ... (expr-j+1) / j!``."""
    out = RationalPolynomial.constant(1)
    for i in range(j):
        out = out * (expr - i)
    return out * Fraction(1, math.factorial(j))


def krawtchouk(k: int, d: int) -> RationalPolynomial:
    """Binary Krawtchouk polynomial ``K_k(z) = sum_j (-1)^j C(z,j) C(d-z,k-j)``."""
    if not 0 <= k <= d:
        raise ValueError(f"need 0 <= k <= d, got k={k}, d={d}")
    z = RationalPolynomial.linear(0, 1)
    dz = RationalPolynomial.linear(d, -1)
    out = RationalPolynomial.constant(0)
    for j in range(k + 1):
        out = out + (-1) ** j * falling_binomial(z, j) * falling_binomial(dz, k - j)
    return out


def krawtchouk_value(k: int, d: int, z: int) -> int:
    """Direct integer evaluation of the defining sum at an integer ``z``."""
    return sum((-1) ** j * math.comb(z, j) * math.comb(d - z, k - j) for j in range(k + 1))


def annihilator(d: int) -> RationalPolynomial:
    """``alpha(z) / f`` for the binary image of an MQUWM family ``(d,d,d/2,2d)``:

    ``2d (1 - 2z/d)(1 - z/d)(1 - 2z/(d + s))(1 - 2z/(d - s))`` with ``s^2 = 2d``.
    The conjugate pair multiplies out to ``1 - 4z/(d-2) + 4z^2/(d(d-2))``.
    """
    if d <= 2:
        raise DegenerateD(f"d must exceed 2, got {d}")
    conj = RationalPolynomial([1, Fraction(-4, d - 2), Fraction(4, d * (d - 2))])
    return (2 * d) * RationalPolynomial([1, Fraction(-2, d)]) \
        * RationalPolynomial([1, Fraction(-1, d)]) * conj


def krawtchouk_expansion(poly: RationalPolynomial, d: int) -> list[Fraction]:
    """Coefficients ``c_k`` with ``poly = sum_k c_k K_k``, by back substitution.

    ``K_k`` has degree exactly ``k``, so the system is triangular: peel off the
    top-degree term, subtract, repeat.
    """
    deg = poly.degree
    if deg > d:
        raise ValueError(f"degree {deg} exceeds d = {d}")
    coeffs = [Fraction(0)] * (max(deg, 0) + 1)
    rest = poly
    for k in range(deg, -1, -1):
        K = krawtchouk(k, d)
        c = rest.coefficients[k] / K.lead if rest.degree >= k else Fraction(0)
        coeffs[k] = c
        rest = rest - c * K
    if rest.degree >= 0:
        raise ExpansionMismatch("nonzero remainder after expansion", rest, None)
    return coeffs


def stated_lp_coefficients(d: int) -> list[Fraction]:
    """The five expansion coefficients as printed with the LP bound."""
    return [Fraction(1, d), Fraction(1, d), Fraction(8, d * d),
            Fraction(6, d * (d - 2)), Fraction(6, d * d * (d - 2))]


@dataclass
class LPCertificate:
    d: int
    annihilator: RationalPolynomial
    coefficients: list[Fraction]
    stated: list[Fraction]
    roots: list[Fraction] | None
    roots_vanish: bool | None
    all_positive: bool
    alpha_at_zero: Fraction
    code_size_bound: Fraction
    family_bound: int

    @property
    def mismatches(self) -> list[int]:
        return [k for k, (c, s) in enumerate(zip(self.coefficients, self.stated)) if c != s]

    @property
    def matches_stated(self) -> bool:
        return not self.mismatches

    @property
    def conclusion(self) -> str:
        return f"f <= {self.family_bound}"

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "bound": "lp",
            "parameters": [self.d, self.d, self.d // 2, 2 * self.d],
            "annihilator_over_f": self.annihilator.to_strings(),
            "coefficients": [frac_str(c) for c in self.coefficients],
            "stated_coefficients": [frac_str(c) for c in self.stated],
            "stated_mismatch_indices": self.mismatches,
            "coefficients_positive": self.all_positive,
            "distance_roots": None if self.roots is None else [frac_str(r) for r in self.roots],
            "roots_vanish": self.roots_vanish,
            "alpha0_over_f": frac_str(self.alpha_at_zero),
            "code_size_bound": frac_str(self.code_size_bound),
            "conclusion": self.conclusion,
        }


def verify_lp_certificate(d: int, strict: bool = False) -> LPCertificate:
    """Build and check the LP certificate for MQUWM ``(d, d, d/2, 2d)``.

    Checks: exact expansion (re-summed to the annihilator), positivity of every
    coefficient, vanishing at the distances ``(d ± sqrt(2d))/2, d/2, d`` when
    ``sqrt(2d)`` is an integer. The binary image has ``2fd`` words, bounded by
    ``alpha(0) / c_0 = 2d^2``, hence ``f <= d``.

    The computed coefficients are compared with the printed ones; with
    ``strict`` a difference raises :class:`ExpansionMismatch`.
    """
    if d < 4 or d % 2:
        raise DegenerateD(f"need even d >= 4, got {d}")
    alpha = annihilator(d)
    coeffs = krawtchouk_expansion(alpha, d)
    resum = RationalPolynomial.constant(0)
    for k, c in enumerate(coeffs):
        resum = resum + c * krawtchouk(k, d)
    if resum != alpha:
        raise ExpansionMismatch("expansion does not re-sum to the annihilator", resum, alpha)
    stated = stated_lp_coefficients(d)
    s = math.isqrt(2 * d)
    if s * s == 2 * d:
        roots = [Fraction(d - s, 2), Fraction(d, 2), Fraction(d + s, 2), Fraction(d)]
        vanish = all(alpha(r) == 0 for r in roots)
    else:
        roots, vanish = None, None
    positive = all(c > 0 for c in coeffs)
    a0 = alpha(0)
    size_bound = a0 / coeffs[0]
    # |C| = 2 f d words  =>  f <= size_bound / (2d)
    fam = size_bound / (2 * d)
    cert = LPCertificate(d, alpha, coeffs, stated, roots, vanish, positive, a0, size_bound,
                         math.floor(fam))
    if strict and cert.mismatches:
        raise ExpansionMismatch(
            f"coefficients {cert.mismatches} differ: computed "
            f"{[frac_str(c) for c in coeffs]} vs stated {[frac_str(c) for c in stated]}",
            coeffs, stated)
    if not positive or vanish is False:
        raise ExpansionMismatch("certificate conditions fail", coeffs, stated)
    return cert


@dataclass
class CountingCertificate:
    d: int
    universe: int
    per_matrix: int
    family_bound: int

    @property
    def conclusion(self) -> str:
        return f"f <= {self.family_bound}"

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "bound": "count",
            "parameters": [self.d, 2, 4, 1],
            "coefficients": [],
            "row_universe": self.universe,
            "vectors_per_matrix": self.per_matrix,
            "conclusion": self.conclusion,
        }


def counting_bound(d: int) -> CountingCertificate:
    """MQUWM ``(d, 2, 4, 1)``: ``2d(d-1)`` possible ± rows, ``2d`` per matrix."""
    if d < 2:
        raise DegenerateD(f"need d >= 2, got {d}")
    universe = 2 * d * (d - 1)
    per = 2 * d
    return CountingCertificate(d, universe, per, universe // per)


def krawtchouk_orthogonality_defect(d: int, i: int, j: int) -> int:
    """``sum_z C(d,z) K_i(z) K_j(z) - 2^d C(d,i) δ_ij``; zero for every valid pair."""
    total = sum(math.comb(d, z) * krawtchouk_value(i, d, z) * krawtchouk_value(j, d, z)
                for z in range(d + 1))
    return total - (2 ** d * math.comb(d, i) if i == j else 0)


def family_size_meets(bound: int, sizes: Sequence[int]) -> bool:
    return all(s <= bound for s in sizes)

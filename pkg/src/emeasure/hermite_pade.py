"""Exact Hermite-Pade approximants of exp at integer nodes.

For a multi-index ``lbar = (l_0, ..., l_m)`` and nodes ``alpha`` with
``alpha_0 = 0`` the construction is

    Omega(w) = prod_j (beta_j - w)^(l_j),      sigma_i = [w^i] Omega
    A_0(t)   = sum_i t^(L-i) i! sigma_i(lbar, alpha)
    A_j(t)   = A_0(t) evaluated with the nodes shifted by -alpha_j

and ``e^(alpha_j t) A_0(t) - A_j(t)`` vanishes to order ``L + 1`` at ``t = 0``.

The integer system used for e takes ``alpha = (0, 1, ..., m)``, the
multi-indices ``lbar^(k)`` (all entries ``l`` except ``l_k = l - 1``) and the
normalisation ``B*_{k,0} = A*_{k,0}/(l-1)!``, ``B*_{k,j} = -A*_{k,j}/(l-1)!``
for ``j >= 1``.  With that sign choice

    B*_{k,0}(t) e^(j t) + B*_{k,j}(t) = L*_{k,j}(t)

is the small remainder.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import permutations
from math import comb
from typing import List, Sequence, Tuple

from flint import fmpz_poly

from .errors import PreconditionError, ResourceLimitError, TheoremViolation

# Degree above which products go through flint's fmpz_poly.
_FLINT_MUL_DEGREE = 48
# (m+1) * l above this needs build_system(..., allow_heavy=True).
MAX_ORDER = 4096


@dataclass(frozen=True)
class IntPolynomial:
    """Dense polynomial with Python-int coefficients, lowest degree first."""

    coeffs: Tuple[int, ...] = ()

    def __post_init__(self):
        c = tuple(int(x) for x in self.coeffs)
        n = len(c)
        while n and c[n - 1] == 0:
            n -= 1
        object.__setattr__(self, "coeffs", c[:n])

    @classmethod
    def monomial(cls, coeff: int, degree: int) -> "IntPolynomial":
        return cls((0,) * degree + (coeff,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __call__(self, t):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial(tuple(-c for c in self.coeffs))

    def __add__(self, other: "IntPolynomial") -> "IntPolynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        return IntPolynomial(tuple(self[i] + other[i] for i in range(n)))

    def __sub__(self, other: "IntPolynomial") -> "IntPolynomial":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return IntPolynomial(tuple(other * c for c in self.coeffs))
        if self.is_zero() or other.is_zero():
            return IntPolynomial()
        if min(self.degree, other.degree) > _FLINT_MUL_DEGREE:
            prod = fmpz_poly(list(self.coeffs)) * fmpz_poly(list(other.coeffs))
            return IntPolynomial(tuple(int(c) for c in prod.coeffs()))
        return IntPolynomial(_convolve(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def exact_div(self, d: int) -> "IntPolynomial":
        out = []
        for c in self.coeffs:
            q, r = divmod(c, d)
            if r:
                raise ArithmeticError(f"coefficient not divisible by {d}")
            out.append(q)
        return IntPolynomial(tuple(out))

    def content(self) -> int:
        return math.gcd(*self.coeffs) if self.coeffs else 0

    def to_json(self) -> str:
        return json.dumps([str(c) for c in self.coeffs])

    @classmethod
    def from_json(cls, s: str) -> "IntPolynomial":
        return cls(tuple(int(c) for c in json.loads(s)))


def _convolve(a: Sequence[int], b: Sequence[int]) -> Tuple[int, ...]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return tuple(out)


@dataclass(frozen=True)
class MultiIndex:
    entries: Tuple[int, ...]
    L: int = field(init=False)

    def __post_init__(self):
        e = tuple(int(x) for x in self.entries)
        if not e:
            raise PreconditionError("multi-index must be non-empty")
        if min(e) < 1:
            raise PreconditionError(f"multi-index entries must be >= 1, got {e}")
        object.__setattr__(self, "entries", e)
        object.__setattr__(self, "L", sum(e))

    @classmethod
    def lowered(cls, m: int, l: int, k: int) -> "MultiIndex":
        """(l, ..., l-1, ..., l) with the k-th entry lowered."""
        if not 0 <= k <= m:
            raise PreconditionError("k out of range")
        return cls(tuple(l - 1 if i == k else l for i in range(m + 1)))

    @property
    def m(self) -> int:
        return len(self.entries) - 1

    def __getitem__(self, i: int) -> int:
        return self.entries[i]

    def __len__(self) -> int:
        return len(self.entries)


def _as_index(lbar) -> MultiIndex:
    return lbar if isinstance(lbar, MultiIndex) else MultiIndex(tuple(lbar))


def linear_power(beta: int, l: int) -> IntPolynomial:
    """(beta - w)^l via the binomial theorem."""
    coeffs = []
    for i in range(l + 1):
        if beta == 0:
            c = (-1) ** i if i == l else 0
        else:
            c = comb(l, i) * beta ** (l - i) * (-1) ** i
        coeffs.append(c)
    return IntPolynomial(tuple(coeffs))


def omega_poly(lbar, beta: Sequence[int]) -> IntPolynomial:
    """prod_j (beta_j - w)^(l_j), multiplied smallest factors first."""
    lbar = _as_index(lbar)
    if len(beta) != len(lbar):
        raise PreconditionError("beta and lbar lengths differ")
    factors = sorted(
        (linear_power(int(b), lj) for b, lj in zip(beta, lbar.entries)),
        key=lambda p: p.degree,
    )
    # balanced product tree keeps the big multiplications few
    while len(factors) > 1:
        nxt = [factors[i] * factors[i + 1] for i in range(0, len(factors) - 1, 2)]
        if len(factors) % 2:
            nxt.append(factors[-1])
        factors = nxt
    return factors[0]


def sigma(i: int, lbar, beta: Sequence[int]) -> int:
    """Coefficient of w^i in Omega(w, beta); needs beta_0 = 0."""
    lbar = _as_index(lbar)
    if beta[0] != 0:
        raise PreconditionError("sigma requires beta_0 = 0")
    if not 0 <= i <= lbar.L:
        raise PreconditionError("i out of range 0..L")
    return omega_poly(lbar, beta)[i]


def _check_alpha(alpha: Sequence[int], lbar: MultiIndex) -> None:
    if len(alpha) != len(lbar):
        raise PreconditionError("alpha and lbar lengths differ")
    if len(set(alpha)) != len(alpha):
        raise PreconditionError("alpha entries must be distinct")


def _laplace_coeffs(omega: IntPolynomial, L: int, divisor_order: int) -> IntPolynomial:
    """sum_i t^(L-i) sigma_i i!/divisor_order!.

    ``divisor_order`` must not exceed the order of vanishing of ``omega`` at
    zero, so every ratio of factorials is an integer.
    """
    if any(omega[i] for i in range(divisor_order)):
        raise TheoremViolation("Omega vanishes to lower order than expected")
    coeffs = [0] * (L + 1)
    ratio = 1  # i! / divisor_order!
    for i in range(divisor_order, L + 1):
        if i > divisor_order:
            ratio *= i
        s = omega[i]
        if s:
            coeffs[L - i] = s * ratio
    return IntPolynomial(tuple(coeffs))


def build_A0(lbar, alpha: Sequence[int]) -> IntPolynomial:
    lbar = _as_index(lbar)
    _check_alpha(alpha, lbar)
    if alpha[0] != 0:
        raise PreconditionError("build_A0 requires alpha_0 = 0")
    return _laplace_coeffs(omega_poly(lbar, alpha), lbar.L, 0)


def build_Aj(lbar, alpha: Sequence[int], j: int) -> IntPolynomial:
    lbar = _as_index(lbar)
    _check_alpha(alpha, lbar)
    if not 1 <= j <= lbar.m:
        raise PreconditionError("j must be in 1..m")
    shifted = [a - alpha[j] for a in alpha]
    return _laplace_coeffs(omega_poly(lbar, shifted), lbar.L, 0)


def _normalised(lbar: MultiIndex, alpha: Sequence[int], j: int, l: int) -> IntPolynomial:
    """A_{lbar,j}/(l-1)! computed without ever forming the factorials."""
    shifted = [a - alpha[j] for a in alpha]
    return _laplace_coeffs(omega_poly(lbar, shifted), lbar.L, l - 1)


@dataclass(frozen=True)
class RemainderSeries:
    coefficients: Tuple[Fraction, ...]
    truncation_order: int

    def partial_sum(self, t: Fraction = Fraction(1)) -> Fraction:
        return sum((c * t ** n for n, c in enumerate(self.coefficients)), Fraction(0))


def exp_times(poly: IntPolynomial, a: int, order: int) -> List[Fraction]:
    """Coefficients 0..order of e^(a t) * poly(t)."""
    out = []
    for N in range(order + 1):
        acc = Fraction(0)
        fact = 1
        apow = 1
        for n in range(N + 1):
            h = N - n
            if n:
                fact *= n
                apow *= a
            ch = poly[h]
            if ch and apow:
                acc += Fraction(ch * apow, fact)
        out.append(acc)
    return out


def remainder_series(lbar, alpha: Sequence[int], j: int, order: int) -> RemainderSeries:
    """Exact series of e^(alpha_j t) A_0(t) - A_j(t) up to t^order."""
    lbar = _as_index(lbar)
    if order < lbar.L + 1:
        raise PreconditionError("order must be at least L+1")
    A0 = build_A0(lbar, alpha)
    Aj = build_Aj(lbar, alpha, j)
    series = exp_times(A0, alpha[j], order)
    coeffs = tuple(series[N] - Aj[N] for N in range(order + 1))
    bad = [N for N in range(lbar.L + 1) if coeffs[N]]
    if bad:
        raise TheoremViolation(f"remainder has non-zero coefficient at t^{bad[0]}")
    return RemainderSeries(coeffs, order)


@dataclass(frozen=True)
class ApproxSystem:
    """The (m+1) x (m+1) integer system B*_{k,j}(t) for one (m, l).

    ``polys[k][j]`` is B*_{k,j}(t) divided by ``content_factor``.  A freshly
    built system has ``content_factor == 1``.
    """

    m: int
    l: int
    alpha: Tuple[int, ...]
    polys: Tuple[Tuple[IntPolynomial, ...], ...]
    content_factor: int = 1

    @property
    def L(self) -> int:
        return (self.m + 1) * self.l - 1

    def lbar(self, k: int) -> MultiIndex:
        return MultiIndex.lowered(self.m, self.l, k)

    def __getitem__(self, kj: Tuple[int, int]) -> IntPolynomial:
        k, j = kj
        return self.polys[k][j]

    def divided(self, d: int) -> "ApproxSystem":
        polys = tuple(tuple(p.exact_div(d) for p in row) for row in self.polys)
        return replace(self, polys=polys, content_factor=self.content_factor * d)

    def values_at_one(self) -> List[List[int]]:
        return [[p(1) for p in row] for row in self.polys]

    def remainder_series(self, k: int, j: int, order: int) -> RemainderSeries:
        """Series of e^(j t) B_{k,0}(t) + B_{k,j}(t) for this (possibly reduced) system."""
        if not 1 <= j <= self.m:
            raise PreconditionError("j must be in 1..m")
        series = exp_times(self.polys[k][0], self.alpha[j], order)
        Bkj = self.polys[k][j]
        coeffs = tuple(series[N] + Bkj[N] for N in range(order + 1))
        bad = [N for N in range(min(order, self.L) + 1) if coeffs[N]]
        if bad:
            raise TheoremViolation(f"B-system remainder non-zero at t^{bad[0]} (k={k}, j={j})")
        return RemainderSeries(coeffs, order)

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "l": self.l,
            "content_factor": str(self.content_factor),
            "polys": [[[str(c) for c in p.coeffs] for p in row] for row in self.polys],
        }


def build_system(m: int, l: int, allow_heavy: bool = False) -> ApproxSystem:
    if m < 1:
        raise PreconditionError("m must be >= 1")
    if l < 2:
        raise PreconditionError("l must be >= 2 so every entry of lbar^(k) is >= 1")
    if (m + 1) * l > MAX_ORDER and not allow_heavy:
        raise ResourceLimitError(
            f"(m+1)l = {(m + 1) * l} exceeds {MAX_ORDER}; pass allow_heavy=True"
        )
    alpha = tuple(range(m + 1))
    rows = []
    for k in range(m + 1):
        lbar = MultiIndex.lowered(m, l, k)
        row = []
        for j in range(m + 1):
            p = _normalised(lbar, alpha, j, l)
            row.append(p if j == 0 else -p)
        rows.append(tuple(row))
    return ApproxSystem(m, l, alpha, tuple(rows))


def _det(matrix: Sequence[Sequence[IntPolynomial]]) -> IntPolynomial:
    n = len(matrix)
    total = IntPolynomial()
    for perm in permutations(range(n)):
        inversions = sum(1 for a in range(n) for b in range(a + 1, n) if perm[a] > perm[b])
        term = IntPolynomial((1,))
        for r, c in enumerate(perm):
            term = term * matrix[r][c]
            if term.is_zero():
                break
        total = total - term if inversions % 2 else total + term
    return total


def determinant_shape(m: int, l: int) -> Tuple[int, int]:
    """Return (c, e) with det[B*_{k,j}(t)] = c t^e, checking it is a monomial."""
    if m + 1 > 6:
        raise ResourceLimitError("Leibniz determinant limited to m <= 5")
    system = build_system(m, l)
    det = _det(system.polys)
    nonzero = [i for i, c in enumerate(det.coeffs) if c]
    if not nonzero:
        raise TheoremViolation("determinant vanishes identically")
    if len(nonzero) != 1:
        raise TheoremViolation(f"determinant is not a monomial: terms at degrees {nonzero}")
    e = nonzero[0]
    if e != m * (m + 1) * l:
        raise TheoremViolation(f"determinant exponent {e} != m(m+1)l = {m * (m + 1) * l}")
    return det[e], e

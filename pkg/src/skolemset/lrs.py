"""Exact integer linear recurrence sequences.

A recurrence of order k is u_{n+k} = a_0 u_{n+k-1} + ... + a_{k-1} u_n with
integer coefficients and initial terms.  This module evaluates terms exactly
and modulo m, recovers the minimal-order recurrence, detects degeneracy
(a quotient of distinct characteristic roots being a root of unity) and
splits a degenerate sequence into non-degenerate or identically-zero
subsequences along residue classes.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce

import sympy as sp

from .errors import ContractViolation, DomainError, ResourceError

__all__ = [
    "Lrs",
    "ZERO_LRS",
    "parse_lrs",
    "char_poly",
    "term_exact",
    "term_mod",
    "terms_exact",
    "minimize",
    "DegeneracyResult",
    "is_degenerate",
    "unity_quotient_orders",
    "Component",
    "Decomposition",
    "decompose",
]

DEFAULT_EXACT_CAP = 2_000_000


@dataclass(frozen=True)
class Lrs:
    """Integer linear recurrence: coefficients a_0..a_{k-1} and initial
    terms u_0..u_{k-1}.  Immutable; all operations on it are pure."""

    coeffs: tuple[int, ...]
    inits: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) < 1:
            raise DomainError("recurrence order must be >= 1")
        if len(self.coeffs) != len(self.inits):
            raise DomainError(
                f"{len(self.coeffs)} coefficients but {len(self.inits)} initial terms")
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))
        object.__setattr__(self, "inits", tuple(int(u) for u in self.inits))

    @property
    def order(self) -> int:
        return len(self.coeffs)

    @property
    def is_zero_sequence(self) -> bool:
        return all(u == 0 for u in self.inits)

    def format(self) -> str:
        return ("coeffs=" + ",".join(str(c) for c in self.coeffs)
                + "; inits=" + ",".join(str(u) for u in self.inits))


# Canonical order-1 representation of the identically-zero sequence.
ZERO_LRS = Lrs(coeffs=(0,), inits=(0,))

_LRS_RE = re.compile(
    r"^\s*coeffs\s*=\s*(?P<coeffs>-?\d+(?:\s*,\s*-?\d+)*)\s*;"
    r"\s*inits\s*=\s*(?P<inits>-?\d+(?:\s*,\s*-?\d+)*)\s*$")


def parse_lrs(text: str) -> Lrs:
    """Parse the textual format ``coeffs=a0,...,ak-1; inits=u0,...,uk-1``."""
    m = _LRS_RE.match(text)
    if not m:
        raise DomainError(f"cannot parse LRS description: {text!r}")
    coeffs = tuple(int(t) for t in m.group("coeffs").split(","))
    inits = tuple(int(t) for t in m.group("inits").split(","))
    return Lrs(coeffs=coeffs, inits=inits)


def char_poly(lrs: Lrs) -> list[int]:
    """Characteristic polynomial x^k - a_0 x^{k-1} - ... - a_{k-1} as an
    integer coefficient list, highest degree first."""
    return [1] + [-c for c in lrs.coeffs]


# ---------------------------------------------------------------------------
# Term evaluation
# ---------------------------------------------------------------------------

def term_exact(lrs: Lrs, n: int, cap: int = DEFAULT_EXACT_CAP) -> int:
    """u_n by exact linear iteration; n above the cap is a resource error
    (u_n has on the order of n bits; use term_mod beyond the cap)."""
    if n < 0:
        raise DomainError(f"term index must be >= 0, got {n}")
    if n > cap:
        raise ResourceError(
            f"n={n} above exact-evaluation cap {cap}; use term_mod instead")
    k = lrs.order
    if n < k:
        return lrs.inits[n]
    window = list(lrs.inits)
    coeffs = lrs.coeffs
    for _ in range(n - k + 1):
        nxt = sum(coeffs[i] * window[-1 - i] for i in range(k))
        window.append(nxt)
        window.pop(0)
    return window[-1]


def terms_exact(lrs: Lrs, count: int) -> list[int]:
    """First ``count`` terms by exact iteration."""
    k = lrs.order
    out = list(lrs.inits[:count])
    while len(out) < count:
        out.append(sum(lrs.coeffs[i] * out[-1 - i] for i in range(k)))
    return out


def _poly_mulmod(f: list[int], g: list[int], red: list[int], m: int) -> list[int]:
    # product of f, g reduced modulo (x^k - red, m); red[j] = coeff of x^j
    k = len(red)
    prod = [0] * (2 * k - 1)
    for i, fi in enumerate(f):
        if fi:
            for j, gj in enumerate(g):
                prod[i + j] = (prod[i + j] + fi * gj) % m
    for d in range(2 * k - 2, k - 1, -1):
        c = prod[d]
        if c:
            prod[d] = 0
            for j in range(k):
                if red[j]:
                    prod[d - k + j] = (prod[d - k + j] + c * red[j]) % m
    return prod[:k]


def term_mod(lrs: Lrs, n: int, m: int) -> int:
    """u_n mod m via x^n reduced modulo the characteristic polynomial,
    O(order^2 log n) word operations; n may be arbitrarily large."""
    if n < 0:
        raise DomainError(f"term index must be >= 0, got {n}")
    if m < 2:
        raise DomainError(f"modulus must be >= 2, got {m}")
    k = lrs.order
    if n < k:
        return lrs.inits[n] % m
    # x^k == red (mod characteristic polynomial); red[j] multiplies x^j
    red = [lrs.coeffs[k - 1 - j] % m for j in range(k)]
    if k == 1:
        acc = pow(lrs.coeffs[0] % m, n, m)
        return acc * lrs.inits[0] % m
    acc = [1] + [0] * (k - 1)
    base = [0] * k
    base[1] = 1
    e = n
    while e:
        if e & 1:
            acc = _poly_mulmod(acc, base, red, m)
        e >>= 1
        if e:
            base = _poly_mulmod(base, base, red, m)
    return sum(c * u for c, u in zip(acc, lrs.inits)) % m


# ---------------------------------------------------------------------------
# Minimisation
# ---------------------------------------------------------------------------

def _minimal_connection(terms: list[int]) -> tuple[int, list[Fraction]]:
    """Berlekamp-Massey over the rationals: minimal L and coefficients
    c_1..c_L with u_n = c_1 u_{n-1} + ... + c_L u_{n-L} for the given terms.

    Equivalent to exact elimination on the Hankel system; with 2k terms of a
    sequence satisfying an order-<=k recurrence it returns the true minimal
    recurrence of the whole sequence.
    """
    C: list[Fraction] = [Fraction(1)]
    B: list[Fraction] = [Fraction(1)]
    L, gap = 0, 1
    b = Fraction(1)
    for i, t in enumerate(terms):
        d = Fraction(t)
        for j in range(1, L + 1):
            d += C[j] * terms[i - j]
        if d == 0:
            gap += 1
            continue
        coef = d / b
        if 2 * L <= i:
            old = C[:]
            if len(C) < len(B) + gap:
                C = C + [Fraction(0)] * (len(B) + gap - len(C))
            for j, bj in enumerate(B):
                C[j + gap] -= coef * bj
            L, B, b, gap = i + 1 - L, old, d, 1
        else:
            if len(C) < len(B) + gap:
                C = C + [Fraction(0)] * (len(B) + gap - len(C))
            for j, bj in enumerate(B):
                C[j + gap] -= coef * bj
            gap += 1
    return L, [-c for c in C[1:L + 1]]


def minimize(lrs: Lrs) -> Lrs:
    """Minimal-order recurrence generating the same sequence.

    The zero sequence collapses to the canonical order-1 zero recurrence
    (recognisable through ``is_zero_sequence``).
    """
    if lrs.is_zero_sequence:
        return ZERO_LRS
    k = lrs.order
    sample = terms_exact(lrs, 2 * k)
    L, coeffs = _minimal_connection(sample)
    if L == 0:
        return ZERO_LRS
    ints = []
    for c in coeffs:
        if c.denominator != 1:
            # cannot happen for integer recurrences: the minimal polynomial
            # is a monic divisor of a monic integer polynomial
            raise ContractViolation(f"non-integer minimal coefficient {c}")
        ints.append(int(c))
    return Lrs(coeffs=tuple(ints), inits=tuple(sample[:L]))


def is_minimal(lrs: Lrs) -> bool:
    m = minimize(lrs)
    return m.coeffs == lrs.coeffs and m.inits == lrs.inits


def _require_minimal(lrs: Lrs, op: str) -> None:
    if not is_minimal(lrs):
        raise ContractViolation(f"{op} requires a minimised recurrence; "
                                f"call minimize() first")


# ---------------------------------------------------------------------------
# Degeneracy
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DegeneracyResult:
    degenerate: bool
    witness_order: int | None = None


def _nonzero_root_part(lrs: Lrs) -> sp.Poly:
    # characteristic polynomial with any x^t factor stripped (zero roots
    # contribute no root-of-unity quotients)
    y = sp.Symbol("y")
    coeffs = char_poly(lrs)
    while coeffs[-1] == 0 and len(coeffs) > 1:
        coeffs = coeffs[:-1]
    return sp.Poly(coeffs, y)


def _quotient_resultant(psi: sp.Poly) -> sp.Poly:
    """Polynomial whose roots are all quotients of roots of psi: the
    resultant in y of psi(y) and psi(x*y)."""
    x = sp.Symbol("x")
    y = psi.gen
    psi_xy = sp.Poly(psi.as_expr().subs(y, x * y), y)
    res = sp.resultant(psi, psi_xy, y)
    return sp.Poly(res, x)


def unity_quotient_orders(lrs: Lrs) -> list[int]:
    """All m >= 2 such that some quotient of distinct characteristic roots
    is a primitive m-th root of unity.  Requires a minimised recurrence."""
    _require_minimal(lrs, "unity_quotient_orders")
    k = lrs.order
    if k == 1:
        return []
    psi = _nonzero_root_part(lrs)
    if psi.degree() <= 1:
        return []
    r = _quotient_resultant(psi)
    x = r.gen
    one = sp.Poly(x - 1, x)
    while r.eval(1) == 0:
        r = sp.div(r, one)[0]
    bound = r.degree()  # quotients of distinct roots number at most k^2
    out = []
    for m in range(2, 2 * k**4 + 1):
        if sp.totient(m) > bound:
            continue
        phi_m = sp.Poly(sp.cyclotomic_poly(m, x), x)
        if sp.div(r, phi_m)[1].is_zero:
            out.append(m)
    return out


def is_degenerate(lrs: Lrs) -> DegeneracyResult:
    """Degeneracy test via the integer quotient resultant: exact, no
    floating-point roots.  Witness is the smallest order m >= 2 of a
    root-of-unity quotient.  Requires a minimised recurrence."""
    orders = unity_quotient_orders(lrs)
    if orders:
        return DegeneracyResult(degenerate=True, witness_order=orders[0])
    return DegeneracyResult(degenerate=False)


# ---------------------------------------------------------------------------
# Merge decomposition
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Component:
    """Subsequence (u_{jM+residue})_j; lrs is None for an identically-zero
    component."""

    residue: int
    lrs: Lrs | None

    @property
    def is_zero(self) -> bool:
        return self.lrs is None


@dataclass(frozen=True)
class Decomposition:
    modulus: int
    components: tuple[Component, ...]


def decompose(lrs: Lrs) -> Decomposition:
    """Split into subsequences along residues mod M, M the lcm of all
    root-of-unity quotient orders, so that every component is non-degenerate
    or identically zero.  M = 1 for non-degenerate input."""
    _require_minimal(lrs, "decompose")
    if lrs.is_zero_sequence:
        return Decomposition(modulus=1, components=(Component(0, None),))
    orders = unity_quotient_orders(lrs)
    if not orders:
        return Decomposition(modulus=1, components=(Component(0, lrs),))
    M = reduce(math.lcm, orders, 1)
    k = lrs.order
    sample = terms_exact(lrs, 4 * k * M)
    comps = []
    for i in range(M):
        sub = sample[i::M][:4 * k]
        if all(t == 0 for t in sub):
            # satisfies an order-<=k recurrence with 4k leading zeros, hence
            # identically zero
            comps.append(Component(i, None))
            continue
        L, coeffs = _minimal_connection(sub)
        ints = []
        for c in coeffs:
            if c.denominator != 1:
                raise ContractViolation(f"non-integer component coefficient {c}")
            ints.append(int(c))
        comps.append(Component(i, Lrs(coeffs=tuple(ints), inits=tuple(sub[:L]))))
    return Decomposition(modulus=M, components=tuple(comps))

"""Simultaneous-prime counting for pairs of integer linear forms.

For forms f1 = a1 x + b1 and f2 = a2 x + b2 (a1, a2 > 0) the product
f = f1 f2 is admissible when it does not vanish identically modulo any
prime.  The singular-series constant is the product over primes of
p (p - w_p) / (p-1)^2 with w_p the root count of f mod p; it is computed
by correcting the universal twin-type constant at the finitely many primes
dividing 2 * Delta, Delta = |a1 a2 (a1 b2 - a2 b1)|, which makes the
truncation error inherit the universal product's tail bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.integrate import quad

from . import arith
from .arith import PrimeTable
from .errors import DomainError, ResourceError

__all__ = [
    "LinearFormPair",
    "AdmissibilityResult",
    "admissible",
    "omega_f",
    "BhConstant",
    "bh_constant",
    "count_pairs",
    "BoundReport",
    "bound_report",
    "BRUN_KAPPA",
    "WU_KAPPA",
]

# Upper-bound constants kappa for #{x <= X : f1, f2 prime} <= kappa*C_f*X/(log X)^2:
# 8 from the Brun sieve, 3.418 from the large sieve.
BRUN_KAPPA = 8.0
WU_KAPPA = 3.418


@dataclass(frozen=True)
class LinearFormPair:
    """A pair of distinct affine forms a1*x + b1, a2*x + b2 with positive
    leading coefficients."""

    a1: int
    b1: int
    a2: int
    b2: int

    def __post_init__(self):
        if self.a1 <= 0 or self.a2 <= 0:
            raise DomainError("leading coefficients must be positive")
        if (self.a1, self.b1) == (self.a2, self.b2):
            raise DomainError("forms must be distinct as affine maps")

    @property
    def delta(self) -> int:
        return abs(self.a1 * self.a2 * (self.a1 * self.b2 - self.a2 * self.b1))

    def f1(self, x: int) -> int:
        return self.a1 * x + self.b1

    def f2(self, x: int) -> int:
        return self.a2 * x + self.b2

    @classmethod
    def parse(cls, f1: str, f2: str) -> "LinearFormPair":
        """Parse 'a,b' coefficient strings for each form."""
        try:
            a1, b1 = (int(t) for t in f1.split(","))
            a2, b2 = (int(t) for t in f2.split(","))
        except ValueError as exc:
            raise DomainError(f"cannot parse linear form: {exc}") from exc
        return cls(a1, b1, a2, b2)


def omega_f(pair: LinearFormPair, p: int) -> int:
    """Root count of f1*f2 over the field with p elements.

    Returns p itself when the product vanishes identically mod p (only
    possible for non-admissible input); otherwise a value in {0, 1, 2}.
    """
    if p < 100:
        count = 0
        for x in range(p):
            if pair.f1(x) * pair.f2(x) % p == 0:
                count += 1
        return count
    roots = set()
    for a, b in ((pair.a1, pair.b1), (pair.a2, pair.b2)):
        if a % p:
            roots.add(-b * pow(a, -1, p) % p)
        elif b % p == 0:
            return p  # this form vanishes identically
        # else: constant non-zero, no roots
    return len(roots)


@dataclass(frozen=True)
class AdmissibilityResult:
    admissible: bool
    certificate_prime: int | None = None


def admissible(pair: LinearFormPair) -> AdmissibilityResult:
    """f1*f2 is admissible iff its root count mod p stays below p for every
    prime; only p = 2 and odd primes dividing gcd(a_i, b_i) can fail."""
    if omega_f(pair, 2) >= 2:
        return AdmissibilityResult(False, 2)
    suspects = set()
    for a, b in ((pair.a1, pair.b1), (pair.a2, pair.b2)):
        g = math.gcd(a, b)
        for p, _ in arith.factorize(g):
            if p > 2:
                suspects.add(p)
    for p in sorted(suspects):
        if omega_f(pair, p) >= p:
            return AdmissibilityResult(False, p)
    return AdmissibilityResult(True, None)


@dataclass(frozen=True)
class BhConstant:
    """Singular-series constant with the relative tail bound inherited from
    the truncated universal product."""

    C_f: float
    tail_bound: float
    prime_limit: int


def bh_constant(pair: LinearFormPair, prime_limit: int = 10**6,
                table: PrimeTable | None = None) -> BhConstant:
    """Constant for the pair: the universal twin-type product times finite
    local corrections at p = 2 and odd primes dividing Delta (all other
    primes contribute the generic twin factor p(p-2)/(p-1)^2)."""
    adm = admissible(pair)
    if not adm.admissible:
        raise DomainError(
            f"non-admissible pair (vanishes mod {adm.certificate_prime}); "
            "its constant is 0")
    base = arith.euler_products(prime_limit, table)
    w2 = omega_f(pair, 2)
    value = base.C * (2 - w2)
    delta = pair.delta
    # admissible pairs always have delta != 0: a vanishing determinant forces
    # proportional forms, which fail admissibility at some prime
    for p, _ in arith.factorize(delta, table):
        if p <= 2:
            continue
        wp = omega_f(pair, p)
        value *= Fraction(p - wp, p - 2)
    return BhConstant(C_f=float(value), tail_bound=base.tail_bound,
                      prime_limit=prime_limit)


def count_pairs(pair: LinearFormPair, X: int,
                table: PrimeTable | None = None) -> int:
    """Exact #{1 <= x <= X : f1(x) and f2(x) both prime} via the shared
    prime table."""
    if X < 0:
        raise DomainError(f"X must be >= 0, got {X}")
    if X == 0:
        return 0
    needed = max(pair.f1(X), pair.f2(X), pair.f1(1), pair.f2(1), 2)
    if needed > arith.SIEVE_MEMORY_BOUND:
        raise ResourceError(
            f"form values reach {needed}, beyond sieve capacity")
    table = arith._ensure_table(table, needed)
    xs = np.arange(1, X + 1, dtype=np.int64)
    v1 = pair.a1 * xs + pair.b1
    v2 = pair.a2 * xs + pair.b2
    ok = (v1 >= 2) & (v2 >= 2)
    mask = np.zeros(xs.shape, dtype=bool)
    if ok.any():
        mask[ok] = table.contains_array(v1[ok]) & table.contains_array(v2[ok])
    return int(np.count_nonzero(mask))


@dataclass(frozen=True)
class BoundReport:
    """Actual count against the point/integral predictions and the sieve
    upper bounds at kappa = 8 (Brun) and kappa = 3.418 (Wu)."""

    X: int
    actual: int
    C_f: float
    tail_bound: float
    bh_point: float
    bh_integral: float
    brun8: float
    wu: float
    sieve_rhs: float

    def to_json_dict(self) -> dict:
        return {
            "X": self.X, "actual": self.actual, "C_f": self.C_f,
            "tail_bound": self.tail_bound, "bh_point": self.bh_point,
            "bh_integral": self.bh_integral, "brun8": self.brun8,
            "wu": self.wu, "sieve_rhs": self.sieve_rhs,
        }


BOUND_CSV_COLUMNS = ("X", "actual", "C_f", "bh_point", "bh_integral",
                     "brun8", "wu", "sieve_rhs")


def bound_report(pair: LinearFormPair, X: int,
                 prime_limit: int = 10**6,
                 table: PrimeTable | None = None) -> BoundReport:
    """All bound quantities at X >= 100; the integral is evaluated by
    adaptive quadrature to at least 1e-6 relative accuracy."""
    if X < 100:
        raise DomainError(f"bound_report requires X >= 100, got {X}")
    actual = count_pairs(pair, X, table)
    const = bh_constant(pair, prime_limit, table)
    log_x = math.log(X)
    point = const.C_f * X / log_x**2
    integral, _ = quad(lambda t: 1.0 / math.log(t) ** 2, 2, X,
                       epsrel=1e-9, limit=200)
    delta = pair.delta
    ratio = float(arith.phi_ratio(delta)) if delta else math.nan
    return BoundReport(
        X=X, actual=actual, C_f=const.C_f, tail_bound=const.tail_bound,
        bh_point=point, bh_integral=const.C_f * integral,
        brun8=BRUN_KAPPA * point, wu=WU_KAPPA * point,
        sieve_rhs=ratio * X / log_x**2)

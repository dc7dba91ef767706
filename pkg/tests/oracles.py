"""Independent reference implementations used to cross-check the library.

Everything here deliberately avoids the library's own code paths: trial
division instead of the sieve, double loops instead of (q, a, P) scans,
matrix powering instead of polynomial powering, numerical roots instead of
resultants.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np


# ---------------------------------------------------------------------------
# Primality / prime counting by trial division
# ---------------------------------------------------------------------------

def trial_isprime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def trial_prime_count(limit: int) -> int:
    """pi(limit) by vectorised trial division (no sieve marking)."""
    base = [p for p in range(2, math.isqrt(limit) + 1) if trial_isprime(p)]
    ns = np.arange(2, limit + 1, dtype=np.int64)
    isp = np.ones(ns.shape, dtype=bool)
    for p in base:
        isp &= (ns % p != 0) | (ns == p)
    return int(np.count_nonzero(isp))


# ---------------------------------------------------------------------------
# Window definitions, recomputed from scratch
# ---------------------------------------------------------------------------

def ilog(x: float, j: int) -> float:
    if j == 1:
        return math.log(x)
    y = math.log(x)
    if y <= 1:
        return 1.0
    return max(1.0, ilog(y, j - 1))


def window_quantities(w: int) -> dict:
    logx = w * math.log(2)
    a_lo, a_hi = max(1.0, math.log(logx)), math.sqrt(logx)
    log3 = ilog(float(2**w), 3) if w < 1000 else None
    b_lo, b_hi = logx / math.sqrt(log3), 2 * logx / math.sqrt(log3)
    tau = ilog(float(2**w), 4)
    qs = [q for q in range(2, math.floor(a_hi) + 1)
          if trial_isprime(q) and a_lo <= q <= a_hi]
    return dict(A=(a_lo, a_hi), B=(b_lo, b_hi), tau=tau,
                gap=math.sqrt(logx), qs=qs,
                a_values=list(range(math.ceil(b_lo), math.floor(b_hi) + 1)))


def brute_reps(n: int, w: int) -> list[tuple[int, int, int]]:
    """All (q, P, a) with n = Pq + a by plain double loop + trial division."""
    q = window_quantities(w)
    X = 2**w
    assert X <= n <= 2 * X
    out = []
    for qq in q["qs"]:
        for a in q["a_values"]:
            if (n - a) % qq == 0:
                P = (n - a) // qq
                if P >= 2 and trial_isprime(P):
                    out.append((qq, P, a))
    return out


def brute_window_members(w: int) -> dict[int, list[tuple[int, int, int]]]:
    """Full membership scan of [2^w, 2^{w+1}] via the naive oracle."""
    q = window_quantities(w)
    X = 2**w
    members = {}
    for n in range(X, 2 * X + 1):
        reps = brute_reps(n, w)
        if len(reps) <= q["tau"]:
            continue
        ok = True
        for i in range(len(reps)):
            for j in range(i + 1, len(reps)):
                q1, _, a1 = reps[i]
                q2, _, a2 = reps[j]
                if q1 != q2 and a1 != a2:
                    for eta in (1, -1):
                        if abs((a1 + eta * q1) - (a2 + eta * q2)) < q["gap"]:
                            ok = False
        if ok:
            members[n] = reps
    return members


# ---------------------------------------------------------------------------
# Recurrences
# ---------------------------------------------------------------------------

def matrix_term_mod(coeffs, inits, n: int, m: int) -> int:
    """u_n mod m by companion-matrix binary powering (independent of the
    polynomial-powering implementation)."""
    k = len(coeffs)
    if n < k:
        return inits[n] % m

    def mat_mul(A, B):
        return [[sum(A[i][t] * B[t][j] for t in range(k)) % m
                 for j in range(k)] for i in range(k)]

    # top row carries the coefficients: state (u_{i+k-1},...,u_i)
    M = [[0] * k for _ in range(k)]
    M[0] = [c % m for c in coeffs]
    for i in range(1, k):
        M[i][i - 1] = 1
    R = [[1 if i == j else 0 for j in range(k)] for i in range(k)]
    e = n - (k - 1)
    while e:
        if e & 1:
            R = mat_mul(R, M)
        e >>= 1
        if e:
            M = mat_mul(M, M)
    state = list(reversed([u % m for u in inits]))
    return sum(R[0][j] * state[j] for j in range(k)) % m


def numeric_root_quotients(coeffs) -> list[complex]:
    """All quotients of distinct characteristic roots, numerically."""
    poly = [1.0] + [-float(c) for c in coeffs]
    roots = np.roots(poly)
    roots = [r for r in roots if abs(r) > 1e-12]
    out = []
    for i, ri in enumerate(roots):
        for j, rj in enumerate(roots):
            if i != j and abs(ri - rj) > 1e-8:
                out.append(ri / rj)
    return out


def numeric_is_degenerate(coeffs, max_order: int) -> bool:
    """Numerical oracle: some quotient of distinct roots is within 1e-6 of a
    root of unity of order <= max_order."""
    for q in numeric_root_quotients(coeffs):
        if abs(abs(q) - 1.0) > 1e-6:
            continue
        for mm in range(1, max_order + 1):
            if abs(q**mm - 1.0) < 1e-6:
                return True
    return False


# ---------------------------------------------------------------------------
# Second moment via the pair parametrisation
# ---------------------------------------------------------------------------

def pair_count_oracle(w: int, isprime=trial_isprime) -> int:
    """Ordered pairs of representations sharing their n, counted through the
    linear parametrisation of simultaneous solutions of
    qP + a = q'P' + a' in [X, 2X]."""
    q = window_quantities(w)
    X = 2**w
    total = 0
    qa = [(qq, a) for qq in q["qs"] for a in q["a_values"]]
    for q1, a1 in qa:
        for q2, a2 in qa:
            lo1 = max((X - a1 + q1 - 1) // q1, 2)
            hi1 = (2 * X - a1) // q1
            if (q1, a1) == (q2, a2):
                total += sum(1 for P in range(lo1, hi1 + 1) if isprime(P))
            elif q1 == q2:
                # qP + a1 = qP' + a2 needs q | (a2 - a1); P' = P - (a2-a1)/q
                if (a2 - a1) % q1 != 0:
                    continue
                shift = (a2 - a1) // q1
                for P in range(lo1, hi1 + 1):
                    P2 = P - shift
                    if P2 >= 2 and isprime(P) and isprime(P2):
                        total += 1
            else:
                # P = P0 + q2*t, P' determined; walk t over the window
                inv = pow(q1, -1, q2)
                P0 = ((a2 - a1) * inv) % q2
                if P0 < 2:
                    P0 += q2 * ((2 - P0 + q2 - 1) // q2)
                P = P0
                while P <= hi1:
                    if P >= lo1:
                        n = q1 * P + a1
                        if X <= n <= 2 * X and (n - a2) % q2 == 0:
                            P2 = (n - a2) // q2
                            if P2 >= 2 and isprime(P) and isprime(P2):
                                total += 1
                    P += q2
    return total


# ---------------------------------------------------------------------------
# Linear form pairs
# ---------------------------------------------------------------------------

def naive_count_pairs(a1, b1, a2, b2, X, isprime=trial_isprime) -> int:
    count = 0
    for x in range(1, X + 1):
        if isprime(a1 * x + b1) and isprime(a2 * x + b2):
            count += 1
    return count


def direct_bh_product(a1, b1, a2, b2, prime_limit) -> float:
    """Raw ordered product of p(p - omega(p))/(p-1)^2 over p <= prime_limit."""
    value = 1.0
    for p in range(2, prime_limit + 1):
        if not trial_isprime(p):
            continue
        omega = 0
        for x in range(p):
            if (a1 * x + b1) * (a2 * x + b2) % p == 0:
                omega += 1
        value *= p * (p - omega) / (p - 1) ** 2
    return value


# ---------------------------------------------------------------------------
# Mean value of g
# ---------------------------------------------------------------------------

def direct_mean_g(Y: int) -> Fraction:
    """Straight Fraction accumulation of g over even n <= Y."""
    total = Fraction(0)
    for n in range(2, Y + 1, 2):
        m = n
        g = Fraction(1)
        for p in range(3, m + 1, 2):
            if p * p > m:
                break
            if m % p == 0:
                g *= Fraction(p - 1, p - 2)
                while m % p == 0:
                    m //= p
        while m % 2 == 0:
            m //= 2
        if m > 2:
            g *= Fraction(m - 1, m - 2)
        total += g
    return total

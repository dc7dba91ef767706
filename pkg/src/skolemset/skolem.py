"""Membership machinery for the prime-representation set.

A window is indexed by an exponent w >= 10 and covers [X, 2X] with X = 2^w.
An integer n in the window is represented by a triple (q, P, a) with q, P
prime, q in the window's small interval, a an integer in the window's large
interval and n = P*q + a.  Membership asks for strictly more representations
than the window threshold and no correlated pair among them.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Optional

import mpmath
import numpy as np

from . import arith
from .arith import PrimeTable, Primality
from .errors import DomainError, ResourceError

__all__ = [
    "MIN_WINDOW",
    "DEFAULT_SCAN_CAP",
    "Reason",
    "WindowParams",
    "window_params",
    "Representation",
    "representations",
    "correlated",
    "MembershipResult",
    "in_s",
    "enumerate_window",
    "members_upto",
    "format_stream_line",
]

MIN_WINDOW = 10
DEFAULT_SCAN_CAP = 2**26

_LN2 = math.log(2)

# Integer candidates within this distance of a real interval endpoint are
# re-decided at 50 significant digits; clamp points and endpoint
# coincidences are the only hazards at desk scale.
_ENDPOINT_GUARD = 1e-9


class Reason(str, enum.Enum):
    BELOW_RANGE = "BelowRange"
    NO_WINDOW_PRIMES = "NoWindowPrimes"
    TOO_FEW_REPS = "TooFewReps"
    CORRELATED_PAIR = "CorrelatedPair"
    MEMBER = "Member"


_REASON_RANK = {
    Reason.BELOW_RANGE: -1,
    Reason.NO_WINDOW_PRIMES: 0,
    Reason.TOO_FEW_REPS: 1,
    Reason.CORRELATED_PAIR: 2,
    Reason.MEMBER: 3,
}


def _iterated_log_of_logx(logx: float, j: int) -> float:
    # iterated log levels computed from log X, avoiding huge-int conversion
    if j == 1:
        return logx
    y = math.log(logx) if logx > 1 else None
    if y is None:
        return 1.0
    if j == 2:
        return max(1.0, y)
    inner = _iterated_log_of_logx(y, j - 1) if y > 1 else 1.0
    return max(1.0, inner)


def _mp_levels(w: int, j: int) -> mpmath.mpf:
    # high-precision log_j(2^w), only consulted near interval endpoints
    with mpmath.workdps(50):
        v = w * mpmath.log(2)
        for _ in range(j - 1):
            v = mpmath.log(v) if v > 1 else mpmath.mpf(0)
            if v < 1:
                v = mpmath.mpf(1)
        return v


@dataclass(frozen=True)
class WindowParams:
    """Derived quantities of window w: the prime interval a_interval, the
    integer interval b_interval, the representation-count threshold and the
    correlation gap (all natural-log based, with the >=1 clamp)."""

    w: int
    X: int
    a_interval: tuple[float, float]
    b_interval: tuple[float, float]
    threshold: float
    gap: float
    q_primes: tuple[int, ...]
    a_values: range

    @property
    def log_x(self) -> float:
        return self.w * _LN2


def _guarded_int_range(lo: float, hi: float, level_lo, level_hi) -> range:
    """Integers in the inclusive real interval [lo, hi]; candidates within
    the guard of an endpoint are re-decided in high precision."""
    first = math.ceil(lo)
    last = math.floor(hi)
    if abs(lo - round(lo)) < _ENDPOINT_GUARD:
        cand = round(lo)
        first = cand if level_lo() <= cand else cand + 1
    if abs(hi - round(hi)) < _ENDPOINT_GUARD:
        cand = round(hi)
        last = cand if level_hi() >= cand else cand - 1
    return range(first, last + 1)


def window_params(w: int) -> WindowParams:
    """Parameters of window w >= 10 (X = 2^w)."""
    if w < MIN_WINDOW:
        raise DomainError(f"window exponent must be >= {MIN_WINDOW}, got {w}")
    logx = w * _LN2
    a_lo = _iterated_log_of_logx(logx, 2)
    a_hi = math.sqrt(logx)
    log3 = _iterated_log_of_logx(logx, 3)
    b_lo = logx / math.sqrt(log3)
    b_hi = 2 * logx / math.sqrt(log3)
    threshold = _iterated_log_of_logx(logx, 4)

    def mp_b_lo():
        with mpmath.workdps(50):
            return w * mpmath.log(2) / mpmath.sqrt(_mp_levels(w, 3))

    def mp_b_hi():
        with mpmath.workdps(50):
            return 2 * w * mpmath.log(2) / mpmath.sqrt(_mp_levels(w, 3))

    a_values = _guarded_int_range(b_lo, b_hi, mp_b_lo, mp_b_hi)
    q_candidates = _guarded_int_range(a_lo, a_hi,
                                      lambda: _mp_levels(w, 2),
                                      lambda: mpmath.sqrt(_mp_levels(w, 1)))
    q_primes = tuple(q for q in q_candidates if arith.is_probable_prime(q))
    return WindowParams(
        w=w, X=1 << w,
        a_interval=(a_lo, a_hi), b_interval=(b_lo, b_hi),
        threshold=threshold, gap=math.sqrt(logx),
        q_primes=q_primes, a_values=a_values,
    )


@dataclass(frozen=True)
class Representation:
    """A decomposition n = P*q + a with q, P prime.  ``probable`` marks P
    established only by probabilistic primality (beyond 2^64)."""

    q: int
    P: int
    a: int
    probable: bool = False

    def as_triple(self) -> tuple[int, int, int]:
        return (self.q, self.P, self.a)


def representations(n: int, params: WindowParams,
                    table: PrimeTable | None = None,
                    extra_rounds: int = arith.DEFAULT_PP_ROUNDS) -> list[Representation]:
    """Complete representation list of n in this window, ordered by
    (q ascending, a ascending);  r(n) is its length."""
    if not (params.X <= n <= 2 * params.X):
        raise DomainError(
            f"n={n} outside window [{params.X}, {2 * params.X}]")
    out = []
    for q in params.q_primes:
        residue = n % q
        for a in params.a_values:
            if a % q != residue:
                continue
            P = (n - a) // q
            if P < 2:
                continue
            if table is not None and P <= table.limit:
                if table.is_prime(P):
                    out.append(Representation(q=q, P=P, a=a))
                continue
            check = arith.is_prime(P, extra_rounds)
            if check:
                out.append(Representation(
                    q=q, P=P, a=a,
                    probable=check.kind is Primality.PROBABLE_PRIME))
    return out


def correlated(r1: Representation, r2: Representation, params: WindowParams) -> bool:
    """Two representations correlate when q and a both differ and the two
    anchor points a + eta*q land strictly within the window gap for some
    sign eta."""
    if r1.q == r2.q or r1.a == r2.a:
        return False
    for eta in (1, -1):
        if abs((r1.a + eta * r1.q) - (r2.a + eta * r2.q)) < params.gap:
            return True
    return False


def _has_correlated_pair(reps: list[Representation], params: WindowParams) -> bool:
    for i in range(len(reps)):
        for j in range(i + 1, len(reps)):
            if correlated(reps[i], reps[j], params):
                return True
    return False


@dataclass(frozen=True)
class MembershipResult:
    member: bool
    window: Optional[int]
    reps: tuple[Representation, ...]
    reason: Reason
    certainty: str  # "exact" or "probable"

    def to_json_dict(self) -> dict:
        return {
            "member": self.member,
            "window": self.window,
            "reps": [r.as_triple() for r in self.reps],
            "reason": self.reason.value,
            "certainty": self.certainty,
        }


def _window_verdict(n: int, w: int, table, extra_rounds) -> MembershipResult:
    params = window_params(w)
    if not params.q_primes:
        return MembershipResult(False, w, (), Reason.NO_WINDOW_PRIMES, "exact")
    reps = representations(n, params, table, extra_rounds)
    certainty = "probable" if any(r.probable for r in reps) else "exact"
    if len(reps) <= params.threshold:
        return MembershipResult(False, w, tuple(reps), Reason.TOO_FEW_REPS, certainty)
    if _has_correlated_pair(reps, params):
        return MembershipResult(False, w, tuple(reps), Reason.CORRELATED_PAIR, certainty)
    return MembershipResult(True, w, tuple(reps), Reason.MEMBER, certainty)


def in_s(n: int, table: PrimeTable | None = None,
         extra_rounds: int = arith.DEFAULT_PP_ROUNDS) -> MembershipResult:
    """Membership of n in the union set: every window containing n is
    consulted (two windows when n is a power of two); membership in either
    suffices.  On a miss the verdict of the window that got furthest is
    reported."""
    if n < (1 << MIN_WINDOW):
        return MembershipResult(False, None, (), Reason.BELOW_RANGE, "exact")
    w_hi = n.bit_length() - 1
    windows = [w_hi]
    if n == (1 << w_hi) and w_hi - 1 >= MIN_WINDOW:
        windows.insert(0, w_hi - 1)
    best: MembershipResult | None = None
    for w in windows:
        verdict = _window_verdict(n, w, table, extra_rounds)
        if verdict.member:
            return verdict
        if best is None or _REASON_RANK[verdict.reason] > _REASON_RANK[best.reason]:
            best = verdict
    return best


# ---------------------------------------------------------------------------
# Window enumeration
# ---------------------------------------------------------------------------

def _clip_subrange(params: WindowParams, subrange) -> tuple[int, int]:
    lo, hi = params.X, 2 * params.X
    if subrange is not None:
        s_lo, s_hi = subrange
        if s_lo > s_hi:
            raise DomainError(f"empty subrange [{s_lo}, {s_hi}]")
        lo, hi = max(lo, s_lo), min(hi, s_hi)
    return lo, hi


def _count_block(params, table, lo, hi):
    # representation counts of every n in [lo, hi] via (q, a, P) enumeration
    counts = np.zeros(hi - lo + 1, dtype=np.int32)
    X = params.X
    for q in params.q_primes:
        for a in params.a_values:
            p_lo = max(math.ceil((lo - a) / q), math.ceil((X - a) / q), 2)
            p_hi = min((hi - a) // q, (2 * X - a) // q)
            if p_hi < p_lo:
                continue
            primes = table.primes_in(p_lo, p_hi)
            if primes.size:
                counts[primes * q + a - lo] += 1
    return counts


def _scan_candidates(params, table, lo, hi, threads=1, block=1 << 22):
    """Yield (block_lo, counts) over [lo, hi] in order."""
    spans = [(b, min(b + block - 1, hi)) for b in range(lo, hi + 1, block)]
    if threads <= 1 or len(spans) <= 1:
        for b_lo, b_hi in spans:
            yield b_lo, _count_block(params, table, b_lo, b_hi)
        return
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(_count_block, params, table, b_lo, b_hi)
                   for b_lo, b_hi in spans]
        for (b_lo, _), fut in zip(spans, futures):
            yield b_lo, fut.result()


def _needed_prime_limit(params: WindowParams, hi: int) -> int:
    q_min = min(params.q_primes)
    a_min = params.a_values.start
    return max(2, (hi - a_min) // q_min)


def enumerate_window(w: int, subrange: tuple[int, int] | None = None,
                     table: PrimeTable | None = None,
                     scan_cap: int = DEFAULT_SCAN_CAP,
                     threads: int = 1) -> Iterator[tuple[int, list[Representation]]]:
    """Stream members of window w in increasing n with their representation
    lists.  Full enumeration needs 2^w <= scan_cap; any subrange is allowed
    (streams are resumable by subrange splitting)."""
    params = window_params(w)
    if not params.q_primes:
        return  # no primes in the window's small interval: empty stream
    if subrange is None and params.X > scan_cap:
        raise ResourceError(
            f"full scan of window {w} exceeds cap {scan_cap}; pass a subrange")
    lo, hi = _clip_subrange(params, subrange)
    if hi < lo:
        return
    narrow = (hi - lo + 1) <= 4096
    p_limit = _needed_prime_limit(params, hi)
    if narrow or p_limit > arith.SIEVE_MEMORY_BOUND:
        for n in range(lo, hi + 1):
            reps = representations(n, params, table)
            if len(reps) > params.threshold and not _has_correlated_pair(reps, params):
                yield n, reps
        return
    table = arith._ensure_table(table, p_limit)
    tau = params.threshold
    for b_lo, counts in _scan_candidates(params, table, lo, hi, threads):
        for idx in np.flatnonzero(counts > tau):
            n = b_lo + int(idx)
            reps = representations(n, params, table)
            if len(reps) > tau and not _has_correlated_pair(reps, params):
                yield n, reps


def members_upto(N: int, table: PrimeTable | None = None,
                 scan_cap: int = DEFAULT_SCAN_CAP,
                 threads: int = 1) -> Iterator[tuple[int, list[Representation]]]:
    """Stream all members n <= N across windows in increasing n, deduping
    the shared endpoints where consecutive windows overlap."""
    if N < (1 << MIN_WINDOW):
        return
    last_yielded: int | None = None
    w = MIN_WINDOW
    while (1 << w) <= N:
        hi = min(2 << w, N)
        for n, reps in enumerate_window(w, subrange=((1 << w), hi),
                                        table=table, scan_cap=scan_cap,
                                        threads=threads):
            if n == last_yielded:
                continue
            yield n, reps
            last_yielded = n
        w += 1


def format_stream_line(n: int, reps: list[Representation]) -> str:
    """Line format: n TAB r TAB q:P:a,q:P:a,..."""
    triples = ",".join(f"{r.q}:{r.P}:{r.a}" for r in reps)
    return f"{n}\t{len(reps)}\t{triples}"

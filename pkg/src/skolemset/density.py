"""Empirical density statistics over windows: representation-count moments,
correlated-pair census and the mean value of the multiplicative weight g.

Moment conventions per window [X, 2X]:
  M0 = #{n : r(n) > threshold},  M1 = sum r(n),  M2 = sum r(n)^2
with M1, M2 over the whole window.  Predictions are reported, never
asserted; acceptance rests on exact combinatorial identities.
"""

from __future__ import annotations

import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import arith, skolem
from .arith import PrimeTable
from .errors import DomainError, ResourceError

__all__ = [
    "WindowStats",
    "moment_scan",
    "first_moment_oracle",
    "MomentPredictions",
    "predictions",
    "CorrelationCensus",
    "correlated_census",
    "MeanGCheck",
    "mean_g_check",
    "CSV_COLUMNS",
    "stats_csv_row",
]

CSV_COLUMNS = ("w", "X", "scanned", "M0", "M1", "M2", "excluded_correlated",
               "m1_pred", "m2_pred", "density_estimate", "mode", "seed")


@dataclass(frozen=True)
class WindowStats:
    """Scan statistics for one window.  In sampled mode the M's are raw sums
    over the sample; scale by (X+1)/scanned_count for unbiased estimates."""

    w: int
    X: int
    scanned_count: int
    M0: int
    M1: int
    M2: int
    excluded_correlated: int
    density_estimate: float
    mode: str  # "full" or "sampled"
    seed: int | None = None

    @property
    def members(self) -> int:
        return self.M0 - self.excluded_correlated

    def scale(self) -> float:
        return (self.X + 1) / self.scanned_count if self.scanned_count else 0.0


def _sample_range(rng: random.Random, lo: int, hi: int, count: int) -> list[int]:
    # uniform without replacement over [lo, hi], safe for arbitrarily large
    # ranges; deterministic given the generator state
    span = hi - lo + 1
    if count > span:
        raise DomainError(f"sample count {count} exceeds range size {span}")
    if span <= 1 << 24:
        return sorted(rng.sample(range(lo, hi + 1), count))
    chosen = set()
    while len(chosen) < count:
        chosen.add(lo + rng.randrange(span))
    return sorted(chosen)


def _full_scan(params, table, threads, want_correlation=True):
    X = params.X
    tau = params.threshold
    m0 = m1 = m2 = 0
    excluded = 0
    multi_q = len(params.q_primes) >= 2
    for b_lo, counts in skolem._scan_candidates(params, table, X, 2 * X, threads):
        c64 = counts.astype(np.int64)
        m1 += int(c64.sum())
        m2 += int((c64 * c64).sum())
        over = counts > tau
        m0 += int(np.count_nonzero(over))
        if want_correlation and multi_q:
            for idx in np.flatnonzero(over):
                n = b_lo + int(idx)
                reps = skolem.representations(n, params, table)
                if skolem._has_correlated_pair(reps, params):
                    excluded += 1
    return m0, m1, m2, excluded


def _sampled_scan(params, table, count, seed, threads):
    X = params.X
    rng = random.Random(seed)
    ns = _sample_range(rng, X, 2 * X, count)
    tau = params.threshold

    def chunk_stats(chunk):
        m0 = m1 = m2 = excluded = 0
        for n in chunk:
            reps = skolem.representations(n, params, table)
            r = len(reps)
            m1 += r
            m2 += r * r
            if r > tau:
                m0 += 1
                if skolem._has_correlated_pair(reps, params):
                    excluded += 1
        return m0, m1, m2, excluded

    if threads <= 1 or len(ns) < 256:
        parts = [chunk_stats(ns)]
    else:
        size = (len(ns) + threads - 1) // threads
        chunks = [ns[i:i + size] for i in range(0, len(ns), size)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(chunk_stats, chunks))
    m0 = sum(p[0] for p in parts)
    m1 = sum(p[1] for p in parts)
    m2 = sum(p[2] for p in parts)
    excluded = sum(p[3] for p in parts)
    return m0, m1, m2, excluded


def moment_scan(w: int, sample: tuple[int, int] | None = None,
                table: PrimeTable | None = None,
                scan_cap: int = skolem.DEFAULT_SCAN_CAP,
                threads: int = 1) -> WindowStats:
    """Exact (full) or seeded-sample moments over window w.

    ``sample`` is (count, seed); sampling is uniform without replacement and
    deterministic given the seed, independent of thread count.
    """
    params = skolem.window_params(w)
    X = params.X
    if sample is None:
        if X > scan_cap:
            raise ResourceError(
                f"full scan of window {w} exceeds cap {scan_cap}; sample instead")
        scanned = X + 1
        if params.q_primes:
            table = arith._ensure_table(
                table, skolem._needed_prime_limit(params, 2 * X))
            m0, m1, m2, excl = _full_scan(params, table, threads)
        else:
            m0 = m1 = m2 = excl = 0
        mode, seed = "full", None
    else:
        count, seed = sample
        if not (1 <= count <= X + 1):
            raise DomainError(f"sample count {count} outside [1, {X + 1}]")
        scanned = count
        if params.q_primes:
            m0, m1, m2, excl = _sampled_scan(params, table, count, seed, threads)
        else:
            m0 = m1 = m2 = excl = 0
        mode = "sampled"
    members = m0 - excl
    return WindowStats(
        w=w, X=X, scanned_count=scanned, M0=m0, M1=m1, M2=m2,
        excluded_correlated=excl,
        density_estimate=members / scanned, mode=mode, seed=seed)


def first_moment_oracle(w: int, table: PrimeTable | None = None,
                        scan_cap: int = skolem.DEFAULT_SCAN_CAP) -> int:
    """Sum of r(n) over the window computed in the opposite order: for each
    (q, a) pair, count primes P landing n = qP + a in the window."""
    params = skolem.window_params(w)
    X = params.X
    if X > scan_cap:
        raise ResourceError(f"window {w} exceeds scan cap {scan_cap}")
    if not params.q_primes:
        return 0
    table = arith._ensure_table(table, skolem._needed_prime_limit(params, 2 * X))
    total = 0
    for q in params.q_primes:
        for a in params.a_values:
            lo = max(math.ceil((X - a) / q), 2)
            hi = (2 * X - a) // q
            if hi >= lo:
                total += table.count_in(lo, hi)
    return total


@dataclass(frozen=True)
class MomentPredictions:
    """Asymptotic first/second-moment predictions X*sqrt(log3 X) and
    X*log3 X; the lower-order terms are huge at desk scale, so these are
    for trend reporting only."""

    m1_pred: float
    m2_pred: float


def predictions(w: int) -> MomentPredictions:
    if w < skolem.MIN_WINDOW:
        raise DomainError(f"window exponent must be >= {skolem.MIN_WINDOW}")
    logx = w * math.log(2)
    log3 = skolem._iterated_log_of_logx(logx, 3)
    x = math.ldexp(1.0, w)
    return MomentPredictions(m1_pred=x * math.sqrt(log3), m2_pred=x * log3)


@dataclass(frozen=True)
class CorrelationCensus:
    """Count of n in the window having at least one correlated pair of
    representations; bound_ref = X/(log X)^(1/3) is reported for trend
    comparison (the implied constant is unknown)."""

    w: int
    scanned_count: int
    count: int
    bound_ref: float
    mode: str
    seed: int | None
    certainty: str


def correlated_census(w: int, sample: tuple[int, int] | None = None,
                      table: PrimeTable | None = None,
                      scan_cap: int = skolem.DEFAULT_SCAN_CAP,
                      threads: int = 1) -> CorrelationCensus:
    """Census of correlated n (any n with r >= 2 and a correlated pair,
    irrespective of the membership threshold)."""
    params = skolem.window_params(w)
    X = params.X
    logx = params.log_x
    bound_ref = math.ldexp(1.0, w) / logx ** (1.0 / 3.0)
    probable = False
    if len(params.q_primes) < 2:
        # correlation needs two distinct q's
        scanned = X + 1 if sample is None else sample[0]
        if sample is None and X > scan_cap:
            raise ResourceError(f"window {w} exceeds scan cap {scan_cap}")
        return CorrelationCensus(w, scanned, 0, bound_ref,
                                 "full" if sample is None else "sampled",
                                 None if sample is None else sample[1], "exact")
    if sample is None:
        if X > scan_cap:
            raise ResourceError(f"window {w} exceeds scan cap {scan_cap}")
        table = arith._ensure_table(
            table, skolem._needed_prime_limit(params, 2 * X))
        count = 0
        for b_lo, counts in skolem._scan_candidates(params, table, X, 2 * X, threads):
            for idx in np.flatnonzero(counts >= 2):
                n = b_lo + int(idx)
                reps = skolem.representations(n, params, table)
                probable = probable or any(r.probable for r in reps)
                if skolem._has_correlated_pair(reps, params):
                    count += 1
        return CorrelationCensus(w, X + 1, count, bound_ref, "full", None,
                                 "probable" if probable else "exact")
    count_n, seed = sample
    rng = random.Random(seed)
    ns = _sample_range(rng, X, 2 * X, count_n)
    count = 0
    for n in ns:
        reps = skolem.representations(n, params, table)
        probable = probable or any(r.probable for r in reps)
        if len(reps) >= 2 and skolem._has_correlated_pair(reps, params):
            count += 1
    return CorrelationCensus(w, count_n, count, bound_ref, "sampled", seed,
                             "probable" if probable else "exact")


# ---------------------------------------------------------------------------
# Mean value of g
# ---------------------------------------------------------------------------

MEAN_G_MAX_Y = 10**8


@dataclass(frozen=True)
class MeanGCheck:
    """Exact sum of g over even n <= Y against the Euler-product prediction
    Y/C.

    The exact sum is kept as an unreduced integer pair: reducing the final
    fraction costs a gcd on multi-megabit integers for large Y.  ``lhs``
    reduces on demand.
    """

    Y: int
    lhs_numerator: int
    lhs_denominator: int
    rhs: float
    rel_err: float
    prime_limit: int

    @property
    def lhs(self) -> Fraction:
        return Fraction(self.lhs_numerator, self.lhs_denominator)

    @property
    def lhs_float(self) -> float:
        return _big_ratio(self.lhs_numerator, self.lhs_denominator)


def _big_ratio(num: int, den: int) -> float:
    # float(num/den) robust to operands far beyond float range
    if num == 0:
        return 0.0
    nb, db = num.bit_length(), den.bit_length()
    ns = max(0, nb - 64)
    ds = max(0, db - 64)
    return (num >> ns) / (den >> ds) * math.ldexp(1.0, ns - ds)


def _g_pairs(Y: int) -> list[tuple[int, int]]:
    # (numerator, denominator) of g(n) for even n <= Y, via a smallest-prime
    # -factor sieve so no per-n factorisation is needed
    spf = np.zeros(Y + 1, dtype=np.int32)
    for p in range(3, math.isqrt(Y) + 1, 2):
        if spf[p] == 0:
            sl = spf[p * p::2 * p]
            sl[sl == 0] = p
            spf[p * p::2 * p] = sl
    pairs = []
    for n in range(2, Y + 1, 2):
        m = n >> 1
        while m % 2 == 0:
            m >>= 1
        num = den = 1
        while m > 1:
            p = int(spf[m]) or m
            num *= p - 1
            den *= p - 2
            while m % p == 0:
                m //= p
        pairs.append((num, den))
    return pairs


def _tree_sum(pairs: list[tuple[int, int]]) -> tuple[int, int]:
    # pairwise balanced summation; no intermediate reduction
    if not pairs:
        return 0, 1
    items = pairs
    while len(items) > 1:
        nxt = []
        for i in range(0, len(items) - 1, 2):
            n1, d1 = items[i]
            n2, d2 = items[i + 1]
            nxt.append((n1 * d2 + n2 * d1, d1 * d2))
        if len(items) % 2:
            nxt.append(items[-1])
        items = nxt
    return items[0]


def mean_g_check(Y: int, prime_limit: int = 10**6,
                 table: PrimeTable | None = None) -> MeanGCheck:
    """Exact sum of g(n) over even n <= Y versus Y/C, where C is the
    truncated twin-type Euler product (the per-factor identity turns the
    mean-value product into 1/C exactly)."""
    if Y < 2:
        raise DomainError(f"mean_g_check requires Y >= 2, got {Y}")
    if Y > MEAN_G_MAX_Y:
        raise ResourceError(f"Y={Y} above supported bound {MEAN_G_MAX_Y}")
    num, den = _tree_sum(_g_pairs(Y))
    c = arith.euler_products(prime_limit, table).C
    rhs = Y / c
    lhs_f = _big_ratio(num, den)
    rel = abs(lhs_f - rhs) / rhs
    return MeanGCheck(Y=Y, lhs_numerator=num, lhs_denominator=den,
                      rhs=rhs, rel_err=rel, prime_limit=prime_limit)


def stats_csv_row(stats: WindowStats) -> list:
    preds = predictions(stats.w)
    return [stats.w, stats.X, stats.scanned_count, stats.M0, stats.M1,
            stats.M2, stats.excluded_correlated,
            f"{preds.m1_pred:.6g}", f"{preds.m2_pred:.6g}",
            f"{stats.density_estimate:.8g}", stats.mode,
            "" if stats.seed is None else stats.seed]

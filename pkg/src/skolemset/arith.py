"""Shared arithmetic: sieve, primality, iterated logarithms, Euler products,
multiplicative helpers and iterated-exponential ("tower") numbers.

Everything here is pure given an immutable PrimeTable; tables are safe to
share read-only across threads.
"""

from __future__ import annotations

import enum
import math
import random
import struct
import threading
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainError, ResourceError

__all__ = [
    "Primality",
    "PrimalityResult",
    "PrimeTable",
    "prime_sieve",
    "shared_table",
    "is_prime",
    "is_probable_prime",
    "iterated_log",
    "TowerExpr",
    "tower_cmp",
    "tower_max",
    "prime_harmonic_sum",
    "EulerProducts",
    "euler_products",
    "factorize",
    "mult_g",
    "phi_ratio",
]

# Hard memory guard for sieve construction: 2^31 needs ~128 MiB of bits.
SIEVE_MEMORY_BOUND = 2**31

CACHE_VERSION = 1

DEFAULT_PP_ROUNDS = 40

# Deterministic Miller-Rabin witness set, valid for all n < 3.3 * 10^24
# (covers the full 64-bit range with margin).
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_DETERMINISTIC_LIMIT = 1 << 64

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53)


# ---------------------------------------------------------------------------
# Primality
# ---------------------------------------------------------------------------

class Primality(enum.Enum):
    COMPOSITE = "composite"
    PRIME = "prime"
    PROBABLE_PRIME = "probable_prime"


@dataclass(frozen=True)
class PrimalityResult:
    """Outcome of a primality test with its certainty level.

    ``rounds`` is the number of extra random strong-pseudoprime rounds that
    backed a PROBABLE_PRIME verdict (0 for deterministic answers).
    """

    kind: Primality
    rounds: int = 0

    def __bool__(self) -> bool:
        return self.kind is not Primality.COMPOSITE

    @property
    def certain(self) -> bool:
        return self.kind is not Primality.PROBABLE_PRIME


def _mr_witness_passes(n: int, a: int, d: int, s: int) -> bool:
    # strong-pseudoprime check for witness a; n - 1 = d * 2^s with d odd
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def _jacobi(a: int, n: int) -> int:
    # n odd positive
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _strong_lucas_passes(n: int) -> bool:
    # Strong Lucas test with Selfridge's parameter choice (method A).
    if n % 2 == 0 or n < 3:
        return n == 2
    r = math.isqrt(n)
    if r * r == n:
        return False
    D = 5
    while True:
        j = _jacobi(D, n)
        if j == -1:
            break
        if j == 0 and abs(D) != n:
            return False
        D = -(D + 2) if D > 0 else -(D - 2)
    Q = (1 - D) // 4
    d = n + 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    # Lucas chain for U_d, V_d by binary expansion of d.
    U, V, Qk = 1, 1, Q % n
    for bit in bin(d)[3:]:
        U = U * V % n
        V = (V * V - 2 * Qk) % n
        Qk = Qk * Qk % n
        if bit == "1":
            U, V = (U + V) % n, (V + D * U) % n
            if U % 2:
                U += n
            if V % 2:
                V += n
            U, V = U // 2 % n, V // 2 % n
            Qk = Qk * Q % n
    if U == 0 or V == 0:
        return True
    for _ in range(s - 1):
        V = (V * V - 2 * Qk) % n
        if V == 0:
            return True
        Qk = Qk * Qk % n
    return False


def is_prime(n: int, extra_rounds: int = DEFAULT_PP_ROUNDS,
             rng: random.Random | None = None) -> PrimalityResult:
    """Primality with certainty: deterministic below 2^64, BPSW-style plus
    ``extra_rounds`` random strong-pseudoprime rounds above it."""
    if n < 2:
        return PrimalityResult(Primality.COMPOSITE)
    for p in _SMALL_PRIMES:
        if n == p:
            return PrimalityResult(Primality.PRIME)
        if n % p == 0:
            return PrimalityResult(Primality.COMPOSITE)
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    if n < _DETERMINISTIC_LIMIT:
        for a in _MR_WITNESSES:
            if not _mr_witness_passes(n, a, d, s):
                return PrimalityResult(Primality.COMPOSITE)
        return PrimalityResult(Primality.PRIME)
    if not _mr_witness_passes(n, 2, d, s):
        return PrimalityResult(Primality.COMPOSITE)
    if not _strong_lucas_passes(n):
        return PrimalityResult(Primality.COMPOSITE)
    rng = rng or random.Random(n & 0xFFFFFFFF)
    rounds = 0
    for _ in range(extra_rounds):
        a = rng.randrange(2, n - 1)
        if not _mr_witness_passes(n, a, d, s):
            return PrimalityResult(Primality.COMPOSITE)
        rounds += 1
    return PrimalityResult(Primality.PROBABLE_PRIME, rounds)


def is_probable_prime(n: int, extra_rounds: int = DEFAULT_PP_ROUNDS) -> bool:
    return bool(is_prime(n, extra_rounds))


# ---------------------------------------------------------------------------
# Sieve
# ---------------------------------------------------------------------------

class PrimeTable:
    """Immutable bit-packed odd-composite sieve up to ``limit``.

    Bit i of the packed array represents the odd number 2i+1; a set bit
    means composite (bit 0, the number 1, is set).
    """

    __slots__ = ("limit", "_bits")

    def __init__(self, limit: int, bits: np.ndarray):
        self.limit = int(limit)
        self._bits = bits
        bits.setflags(write=False)

    # -- construction -------------------------------------------------------

    @classmethod
    def build(cls, limit: int, memory_bound: int = SIEVE_MEMORY_BOUND) -> "PrimeTable":
        if limit < 2:
            raise DomainError(f"sieve limit must be >= 2, got {limit}")
        if limit > memory_bound:
            raise ResourceError(
                f"sieve limit {limit} exceeds memory bound {memory_bound}")
        nbits = (limit >> 1) + 1
        bits = np.zeros((nbits + 7) >> 3, dtype=np.uint8)
        root = math.isqrt(limit)
        base = np.ones(root + 1, dtype=bool)
        base[:2] = False
        for p in range(2, math.isqrt(root) + 1):
            if base[p]:
                base[p * p::p] = False
        base_primes = [int(p) for p in np.flatnonzero(base) if p % 2 == 1]
        seg = 1 << 21  # odd slots per segment
        for lo in range(0, nbits, seg):
            hi = min(lo + seg, nbits)
            mask = np.zeros(hi - lo, dtype=bool)
            lo_val = 2 * lo + 1
            hi_val = 2 * (hi - 1) + 1
            for p in base_primes:
                start = p * p
                if start > hi_val:
                    break
                if start < lo_val:
                    k = (lo_val + p - 1) // p
                    if k % 2 == 0:
                        k += 1
                    start = k * p
                if start > hi_val:
                    continue
                mask[(start - lo_val) >> 1::p] = True
            if lo == 0:
                mask[0] = True  # 1 is not prime
            packed = np.packbits(mask, bitorder="little")
            bits[lo >> 3: (lo >> 3) + len(packed)] |= packed
        return cls(limit, bits)

    # -- queries ------------------------------------------------------------

    def is_prime(self, n: int) -> bool:
        if n > self.limit:
            raise DomainError(f"{n} beyond sieve limit {self.limit}")
        if n < 2:
            return False
        if n % 2 == 0:
            return n == 2
        i = n >> 1
        return not (self._bits[i >> 3] >> (i & 7)) & 1

    def contains_array(self, values: np.ndarray) -> np.ndarray:
        """Vectorised membership for an int array; values must be <= limit."""
        values = np.asarray(values, dtype=np.int64)
        if values.size and int(values.max()) > self.limit:
            raise ResourceError(
                f"query value {int(values.max())} beyond sieve limit {self.limit}")
        out = np.zeros(values.shape, dtype=bool)
        odd = (values & 1).astype(bool) & (values > 1)
        idx = values[odd] >> 1
        out[odd] = ((self._bits[idx >> 3] >> (idx & 7).astype(np.uint8)) & 1) == 0
        out[values == 2] = True
        return out

    def _odd_window(self, lo: int, hi: int) -> tuple[np.ndarray, int]:
        # unpacked composite-flags for odd numbers in [lo, hi]; returns
        # (flags, first_odd_value)
        lo_i = (lo if lo % 2 else lo + 1) >> 1
        hi_i = (hi if hi % 2 else hi - 1) >> 1
        if hi_i < lo_i:
            return np.zeros(0, dtype=np.uint8), 2 * lo_i + 1
        b0, b1 = lo_i >> 3, (hi_i >> 3) + 1
        flags = np.unpackbits(self._bits[b0:b1], bitorder="little")
        flags = flags[lo_i - 8 * b0: hi_i - 8 * b0 + 1]
        return flags, 2 * lo_i + 1

    def primes_in(self, lo: float, hi: float) -> np.ndarray:
        """Primes in the inclusive range [lo, hi] as an int64 array."""
        lo_i, hi_i = math.ceil(lo), math.floor(hi)
        if hi_i > self.limit:
            raise ResourceError(f"range end {hi_i} beyond sieve limit {self.limit}")
        lo_i = max(lo_i, 2)
        if hi_i < lo_i:
            return np.zeros(0, dtype=np.int64)
        flags, first = self._odd_window(max(lo_i, 3), hi_i)
        primes = first + 2 * np.flatnonzero(flags == 0).astype(np.int64)
        if lo_i <= 2 <= hi_i:
            primes = np.concatenate(([2], primes))
        return primes

    def count_in(self, lo: float, hi: float) -> int:
        """Number of primes in the inclusive range [lo, hi]."""
        lo_i, hi_i = math.ceil(lo), math.floor(hi)
        if hi_i > self.limit:
            raise ResourceError(f"range end {hi_i} beyond sieve limit {self.limit}")
        lo_i = max(lo_i, 2)
        if hi_i < lo_i:
            return 0
        flags, _ = self._odd_window(max(lo_i, 3), hi_i)
        count = int(np.count_nonzero(flags == 0))
        if lo_i <= 2 <= hi_i:
            count += 1
        return count

    def prime_count(self) -> int:
        return self.count_in(2, self.limit)

    # -- cache file ---------------------------------------------------------
    # Format: one version byte, little-endian u64 limit, then the bit array.

    def save(self, path: str) -> None:
        with open(path, "wb") as fh:
            fh.write(struct.pack("<BQ", CACHE_VERSION, self.limit))
            fh.write(self._bits.tobytes())

    @classmethod
    def load(cls, path: str) -> "PrimeTable":
        with open(path, "rb") as fh:
            header = fh.read(9)
            if len(header) != 9:
                raise ValueError("truncated sieve cache header")
            version, limit = struct.unpack("<BQ", header)
            if version != CACHE_VERSION:
                raise ValueError(f"unsupported sieve cache version {version}")
            payload = fh.read()
        expected = (((limit >> 1) + 1) + 7) >> 3
        if len(payload) != expected:
            raise ValueError("sieve cache payload size mismatch")
        bits = np.frombuffer(payload, dtype=np.uint8).copy()
        return cls(limit, bits)


def prime_sieve(limit: int, memory_bound: int = SIEVE_MEMORY_BOUND) -> PrimeTable:
    """Build an immutable prime table answering is-prime for all n <= limit."""
    return PrimeTable.build(limit, memory_bound)


_shared_lock = threading.Lock()
_shared_table: PrimeTable | None = None


def shared_table(limit: int) -> PrimeTable:
    """Process-wide table cache; grows geometrically so repeated callers with
    increasing needs do not rebuild from scratch each time."""
    global _shared_table
    with _shared_lock:
        if _shared_table is None or _shared_table.limit < limit:
            target = max(limit, 1 << 16)
            if _shared_table is not None:
                target = max(target, min(2 * _shared_table.limit, SIEVE_MEMORY_BOUND))
            _shared_table = PrimeTable.build(target)
        return _shared_table


def _ensure_table(table: PrimeTable | None, limit: int) -> PrimeTable:
    if table is not None and table.limit >= limit:
        return table
    if limit > SIEVE_MEMORY_BOUND:
        raise ResourceError(f"needed sieve limit {limit} exceeds memory bound")
    return shared_table(limit)


# ---------------------------------------------------------------------------
# Iterated logarithm
# ---------------------------------------------------------------------------

def iterated_log(x, j: int) -> float:
    """j-fold iterated natural logarithm with the >=1 clamp at every level
    past the first: level 1 is log x, level j is max(1, level j-1 of log x).

    Accepts arbitrary-precision integers as well as floats; x must be > 1.
    """
    if j < 1:
        raise DomainError(f"iteration level must be >= 1, got {j}")
    if x <= 1:
        raise DomainError(f"iterated_log requires x > 1, got {x}")
    y = math.log(x)
    if j == 1:
        return y
    if y <= 1:
        # the next level would apply log to a value <= 1; the clamp wins
        return 1.0
    return max(1.0, iterated_log(y, j - 1))


# ---------------------------------------------------------------------------
# Tower expressions
# ---------------------------------------------------------------------------

# Mantissas at or below this can be exponentiated without float overflow,
# so canonical form pushes the level as low as doubles allow.  Two equal
# values then share (level, mantissa) up to the comparison tolerance.
_REDUCE_MAX = 709.0

TOWER_REL_TOL = 1e-9


@dataclass(frozen=True)
class TowerExpr:
    """Iterated exponential exp_level(mantissa), natural base.

    Level 0 denotes the plain real.  Instances canonicalise on construction
    by exponentiating the mantissa down while it stays finite in a double.
    Comparison tolerance is 1e-9 relative; ties report equal.  Used only for
    reporting bounds, never for correctness decisions.
    """

    level: int
    mantissa: float

    def __post_init__(self):
        lvl, r = self.level, float(self.mantissa)
        if lvl < 0:
            raise DomainError(f"tower level must be >= 0, got {lvl}")
        if not math.isfinite(r) or r <= 1.0:
            raise DomainError(f"tower mantissa must be a finite real > 1, got {r}")
        while lvl > 0 and r <= _REDUCE_MAX:
            r = math.exp(r)
            lvl -= 1
        object.__setattr__(self, "level", lvl)
        object.__setattr__(self, "mantissa", r)

    def __str__(self) -> str:
        return f"exp_{self.level}({self.mantissa:.6g})"

    def __lt__(self, other: "TowerExpr") -> bool:
        return tower_cmp(self, other) < 0

    def __le__(self, other: "TowerExpr") -> bool:
        return tower_cmp(self, other) <= 0

    def __gt__(self, other: "TowerExpr") -> bool:
        return tower_cmp(self, other) > 0

    def __ge__(self, other: "TowerExpr") -> bool:
        return tower_cmp(self, other) >= 0


def tower_cmp(u: TowerExpr, v: TowerExpr) -> int:
    """Total order on tower expressions: -1, 0 or +1.

    Levels are normalised by repeated log on the lower-level mantissa; if a
    mantissa drops to <= 1 on the way up, that side is strictly smaller.
    """
    lu, ru = u.level, u.mantissa
    lv, rv = v.level, v.mantissa
    while lu < lv:
        if ru <= 1.0:
            return -1
        ru = math.log(ru)
        lu += 1
    while lv < lu:
        if rv <= 1.0:
            return 1
        rv = math.log(rv)
        lv += 1
    if math.isclose(ru, rv, rel_tol=TOWER_REL_TOL):
        return 0
    return -1 if ru < rv else 1


def tower_max(u: TowerExpr, v: TowerExpr) -> TowerExpr:
    return v if tower_cmp(u, v) < 0 else u


# ---------------------------------------------------------------------------
# Prime sums and Euler products
# ---------------------------------------------------------------------------

def prime_harmonic_sum(lo: float, hi: float, table: PrimeTable | None = None) -> float:
    """Exact sum of 1/q over primes q in the inclusive range [lo, hi]."""
    if not (2 <= lo <= hi):
        raise DomainError(f"need 2 <= lo <= hi, got [{lo}, {hi}]")
    table = _ensure_table(table, math.floor(hi))
    primes = table.primes_in(lo, hi)
    if primes.size == 0:
        return 0.0
    return float(np.sum(1.0 / primes.astype(np.float64)))


@dataclass(frozen=True)
class EulerProducts:
    """Truncated twin-type Euler product with a rigorous relative tail bound.

    C approximates 2 * prod_{2<p} p(p-2)/(p-1)^2; the omitted tail is a
    factor in [1 - tail_bound, 1], using sum_{p>L} 1/(p-1)^2 <= 2/L.
    """

    C: float
    tail_bound: float
    prime_limit: int


def euler_products(prime_limit: int, table: PrimeTable | None = None) -> EulerProducts:
    if prime_limit < 3:
        raise DomainError(f"prime_limit must be >= 3, got {prime_limit}")
    table = _ensure_table(table, prime_limit)
    primes = table.primes_in(3, prime_limit).astype(np.float64)
    c = 2.0 * float(np.prod(primes * (primes - 2.0) / (primes - 1.0) ** 2))
    return EulerProducts(C=c, tail_bound=2.0 / prime_limit, prime_limit=prime_limit)


# ---------------------------------------------------------------------------
# Multiplicative helpers
# ---------------------------------------------------------------------------

def factorize(m: int, table: PrimeTable | None = None) -> list[tuple[int, int]]:
    """Prime factorisation of m >= 1 by trial division over sieve primes."""
    if m < 1:
        raise DomainError(f"cannot factor {m}")
    out: list[tuple[int, int]] = []
    if m == 1:
        return out
    root = math.isqrt(m)
    table = _ensure_table(table, max(root, 3))
    for p in table.primes_in(2, root):
        p = int(p)
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
    if m > 1:
        out.append((m, 1))
    return out


def mult_g(m: int, table: PrimeTable | None = None) -> Fraction:
    """Exact product of (p-1)/(p-2) over odd primes dividing m; g(1) = 1."""
    if m < 1:
        raise DomainError(f"mult_g requires m >= 1, got {m}")
    out = Fraction(1)
    for p, _ in factorize(m, table):
        if p > 2:
            out *= Fraction(p - 1, p - 2)
    return out


def phi_ratio(m: int, table: PrimeTable | None = None) -> Fraction:
    """Exact m/phi(m) as a fraction."""
    if m < 1:
        raise DomainError(f"phi_ratio requires m >= 1, got {m}")
    out = Fraction(1)
    for p, _ in factorize(m, table):
        out *= Fraction(p, p - 1)
    return out

"""Zero-finding pipeline: minimise, decompose, stream set members, filter
by representation-prime congruences and certify zeros.

The effective bound on how far a zero of a non-degenerate recurrence can sit
inside the set is the max of two iterated exponentials; it is reported as a
tower expression and never enumerated to (it is astronomically beyond any
scan), so reports always record the searched range N explicitly.
"""

from __future__ import annotations

import enum
import math
import random
from dataclasses import dataclass, field

from . import arith, lrs as lrsmod, skolem
from .arith import PrimeTable, TowerExpr, tower_max
from .errors import DomainError, ResourceError

__all__ = [
    "ZeroPolicy",
    "ZeroCheck",
    "RepFilterResult",
    "ZeroReport",
    "constant_A",
    "zero_bound",
    "is_zero",
    "rep_mod_filter",
    "find_zeros_in_s",
    "PROBABLE_ZERO_MODULI",
]

# A probable zero must vanish modulo this many independent ~62-bit primes.
# A non-zero term u_n has at most about n*log2(root bound) prime divisors,
# so the false-zero probability is bounded by (that / #62-bit primes)^64.
PROBABLE_ZERO_MODULI = 64

_WITNESS_BITS = 62


class ZeroPolicy(enum.Enum):
    EXACT_BELOW_CAP = "exact_below_cap"
    PROBABILISTIC_ONLY = "probabilistic_only"


@dataclass(frozen=True)
class ZeroCheck:
    """Verdict for u_n = 0: exact or probable zero, or a nonzero witness
    modulus."""

    is_zero: bool
    certainty: str | None = None  # "exact" | "probable" for zeros
    witness_modulus: int | None = None
    primes_used: int = 0


def constant_A(lrs: lrsmod.Lrs) -> int:
    """max(10, |initial terms|, |coefficients|)."""
    return max(10, *(abs(c) for c in lrs.coeffs), *(abs(u) for u in lrs.inits))


def zero_bound(lrs: lrsmod.Lrs) -> TowerExpr:
    """Effective bound max(exp_3(A^2), exp_5(10^10 k^6)) on zeros inside the
    set, for minimised recurrences of order k >= 2."""
    if lrs.order < 2:
        raise DomainError("the zero bound applies to recurrences of order >= 2")
    a = constant_A(lrs)
    k = lrs.order
    # A^2 can exceed float range; carry it through logs when it does
    if a < 10**150:
        first = TowerExpr(3, float(a) ** 2)
    else:
        first = TowerExpr(4, 2 * math.log(a))
    second = TowerExpr(5, 1e10 * k**6)
    return tower_max(first, second)


def _random_prime(rng: random.Random) -> int:
    while True:
        cand = rng.getrandbits(_WITNESS_BITS) | (1 << (_WITNESS_BITS - 1)) | 1
        if arith.is_prime(cand):
            return cand


def is_zero(lrs: lrsmod.Lrs, n: int,
            policy: ZeroPolicy = ZeroPolicy.EXACT_BELOW_CAP,
            exact_cap: int = lrsmod.DEFAULT_EXACT_CAP,
            seed: int = 0) -> ZeroCheck:
    """Test u_n = 0.  Below the cap (under EXACT_BELOW_CAP) the answer is
    exact; otherwise the term is reduced modulo independent random 62-bit
    primes, declaring a probable zero only after PROBABLE_ZERO_MODULI
    vanishing reductions.  Nonzero verdicts carry the first failing
    modulus."""
    if policy is ZeroPolicy.EXACT_BELOW_CAP and n <= exact_cap:
        value = lrsmod.term_exact(lrs, n, cap=exact_cap)
        if value == 0:
            return ZeroCheck(True, "exact")
        p = 2
        while value % p == 0:
            p = _next_prime(p)
        return ZeroCheck(False, witness_modulus=p)
    rng = random.Random((seed << 16) ^ (n & 0xFFFFFFFF) ^ 0x5EED)
    for used in range(1, PROBABLE_ZERO_MODULI + 1):
        p = _random_prime(rng)
        if lrsmod.term_mod(lrs, n, p) != 0:
            return ZeroCheck(False, witness_modulus=p, primes_used=used)
    return ZeroCheck(True, "probable", primes_used=PROBABLE_ZERO_MODULI)


def _next_prime(p: int) -> int:
    cand = p + 1 if p == 2 else p + 2
    while not arith.is_probable_prime(cand):
        cand += 2 if cand % 2 else 1
    return cand


@dataclass(frozen=True)
class RepFilterResult:
    consistent: bool
    witness_P: int | None = None


def rep_mod_filter(lrs: lrsmod.Lrs, n: int,
                   reps: list[skolem.Representation]) -> RepFilterResult:
    """Structural first filter: a zero term vanishes modulo every
    representation prime P, so any nonvanishing reduction certifies
    nonzero.  Cost is O(order^2 log n) per representation."""
    if not reps:
        raise DomainError("rep_mod_filter needs a non-empty representation list")
    for rep in reps:
        if lrsmod.term_mod(lrs, n, rep.P) != 0:
            return RepFilterResult(False, witness_P=rep.P)
    return RepFilterResult(True)


@dataclass(frozen=True)
class ZeroBoundNote:
    component_residue: int
    order: int
    bound: TowerExpr | None


@dataclass(frozen=True)
class ZeroReport:
    """Zeros of the sequence inside the membership set, up to searched_to.

    zero_progressions lists (residue, modulus) pairs for identically-zero
    components; their intersection with the set is the progression itself,
    reported symbolically rather than enumerated.
    """

    zeros: tuple[tuple[int, str], ...]  # (n, "exact" | "probable")
    searched_to: int
    theorem_bound: TowerExpr | None
    zero_progressions: tuple[tuple[int, int], ...]
    modulus: int
    component_orders: tuple[int, ...]
    component_bounds: tuple[ZeroBoundNote, ...] = field(default=())
    notes: tuple[str, ...] = field(default=())
    primes_per_probable_zero: int = PROBABLE_ZERO_MODULI

    def to_json_dict(self) -> dict:
        return {
            "zeros": [{"n": n, "certainty": c} for n, c in self.zeros],
            "searched_to": self.searched_to,
            "theorem_bound": (str(self.theorem_bound)
                              if self.theorem_bound else None),
            "zero_progressions": [list(p) for p in self.zero_progressions],
            "modulus": self.modulus,
            "component_orders": list(self.component_orders),
            "notes": list(self.notes),
            "primes_per_probable_zero": self.primes_per_probable_zero,
        }


def find_zeros_in_s(lrs_in: lrsmod.Lrs, N: int,
                    policy: ZeroPolicy = ZeroPolicy.EXACT_BELOW_CAP,
                    exact_cap: int = lrsmod.DEFAULT_EXACT_CAP,
                    scan_cap: int = skolem.DEFAULT_SCAN_CAP,
                    seed: int = 0,
                    table: PrimeTable | None = None,
                    threads: int = 1) -> ZeroReport:
    """Zeros of the recurrence at set members n <= N.

    Pipeline: minimise, decompose into non-degenerate or identically-zero
    components, report zero components as arithmetic progressions, then
    stream members and test the surviving candidates with the
    representation-prime filter before certifying."""
    if N > 2 * scan_cap:
        raise ResourceError(f"N={N} beyond enumeration capacity {2 * scan_cap}")
    m = lrsmod.minimize(lrs_in)
    notes = []
    if m.is_zero_sequence:
        return ZeroReport(
            zeros=(), searched_to=N, theorem_bound=None,
            zero_progressions=((0, 1),), modulus=1, component_orders=(1,),
            notes=("input is the zero sequence; every member of the set is "
                   "a zero (progression 0 mod 1)",))
    dec = lrsmod.decompose(m)
    progressions = tuple((c.residue, dec.modulus)
                         for c in dec.components if c.is_zero)
    bounds = []
    theorem = None
    for c in dec.components:
        if c.is_zero:
            continue
        if c.lrs.order >= 2:
            b = zero_bound(c.lrs)
            theorem = b if theorem is None else tower_max(theorem, b)
            bounds.append(ZeroBoundNote(c.residue, c.lrs.order, b))
        else:
            bounds.append(ZeroBoundNote(c.residue, 1, None))
            notes.append(
                f"component {c.residue} mod {dec.modulus} has order 1; the "
                "effective bound assumes order >= 2, zeros handled by "
                "direct evaluation")
    if theorem is not None:
        notes.append(
            f"searched n <= {N}; the effective bound {theorem} is "
            "astronomically larger, so the search range is the binding "
            "constraint")
    zero_residues = {c.residue for c in dec.components if c.is_zero}
    zeros = []
    for n, reps in skolem.members_upto(N, table=table, scan_cap=scan_cap,
                                       threads=threads):
        if (n % dec.modulus) in zero_residues:
            continue  # covered by the reported progression
        if not rep_mod_filter(m, n, reps).consistent:
            continue
        check = is_zero(m, n, policy=policy, exact_cap=exact_cap, seed=seed)
        if check.is_zero:
            zeros.append((n, check.certainty))
    return ZeroReport(
        zeros=tuple(zeros), searched_to=N, theorem_bound=theorem,
        zero_progressions=progressions, modulus=dec.modulus,
        component_orders=tuple(0 if c.is_zero else c.lrs.order
                               for c in dec.components),
        component_bounds=tuple(bounds), notes=tuple(notes))

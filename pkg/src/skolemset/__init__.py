"""Prime-representation membership set for linear recurrence zero search.

Library layout: ``arith`` (sieve, primality, iterated logs, towers),
``lrs`` (exact recurrences), ``skolem`` (windows, representations,
membership, enumeration), ``density`` (moments, census, mean values),
``bhcount`` (linear-form prime pair experiments), ``decide`` (the
zero-finding pipeline) and ``cli``.
"""

from .arith import (
    Primality,
    PrimalityResult,
    PrimeTable,
    TowerExpr,
    euler_products,
    is_prime,
    iterated_log,
    mult_g,
    phi_ratio,
    prime_harmonic_sum,
    prime_sieve,
    tower_cmp,
    tower_max,
)
from .bhcount import (
    LinearFormPair,
    admissible,
    bh_constant,
    bound_report,
    count_pairs,
    omega_f,
)
from .decide import (
    ZeroPolicy,
    ZeroReport,
    constant_A,
    find_zeros_in_s,
    is_zero,
    rep_mod_filter,
    zero_bound,
)
from .density import (
    WindowStats,
    correlated_census,
    first_moment_oracle,
    mean_g_check,
    moment_scan,
    predictions,
)
from .errors import ContractViolation, DomainError, ResourceError, SkolemSetError
from .lrs import (
    Lrs,
    decompose,
    is_degenerate,
    minimize,
    parse_lrs,
    term_exact,
    term_mod,
)
from .skolem import (
    MembershipResult,
    Reason,
    Representation,
    WindowParams,
    correlated,
    enumerate_window,
    in_s,
    representations,
    window_params,
)

__version__ = "0.1.0"

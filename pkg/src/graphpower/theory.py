"""Closed-form evaluators for the quantities driving the structural results:
iterated logs, the degree concentration point, the BFS layer-profile pmf,
the layer-entropy minimization (exact and continuous), the independence
counting quantities, and the sparse-neighborhood chromatic bound.

All logarithms are natural.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

from .errors import BudgetExceededError, DomainError, NoConvergenceError

DEFAULT_PMF_CAP = 60
DEFAULT_ENUM_WORK_CAP = 5_000_000


@dataclass(frozen=True)
class DegreeProfile:
    """BFS layer sizes (l_1, ..., l_r) from a vertex, with implicit l_0 = 1.

    D is the degree in G^r this profile represents; L the product of the
    nonzero layer sizes.  A zero layer followed by a nonzero one is
    infeasible (unreachable vertices cannot repopulate deeper layers).
    """

    ell: tuple

    def __post_init__(self):
        object.__setattr__(self, "ell", tuple(int(x) for x in self.ell))
        if any(x < 0 for x in self.ell):
            raise ValueError("layer sizes must be nonnegative")

    @property
    def r(self):
        return len(self.ell)

    @property
    def total(self):
        """D: the sum of the layer sizes."""
        return sum(self.ell)

    @property
    def product(self):
        """L: product over the nonzero layer sizes."""
        out = 1
        for x in self.ell:
            if x:
                out *= x
        return out

    @property
    def feasible(self):
        seen_zero = False
        for x in self.ell:
            if x == 0:
                seen_zero = True
            elif seen_zero:
                return False
        return True


@dataclass(frozen=True)
class TheoryParams:
    """Parameter bundle (n, d, r, epsilon) for the closed-form evaluators."""

    n: int
    d: float
    r: int
    epsilon: float = 0.1

    def __post_init__(self):
        if self.n < 1 or self.d <= 0 or self.r < 1:
            raise ValueError("require n >= 1, d > 0, r >= 1")
        if not 0 < self.epsilon < 1 / self.r:
            raise ValueError("require 0 < epsilon < 1/r")

    @property
    def p(self):
        return self.d / self.n

    @property
    def nu0(self):
        """Co-degree sparsity level d^(1-epsilon)."""
        return self.d ** (1 - self.epsilon)

    @property
    def alpha(self):
        """Independence-counting constant 10 * r!."""
        return 10 * math.factorial(self.r)


def iterated_log(x: float, k: int) -> float:
    """Natural log applied k times; k = 0 returns x."""
    if k < 0:
        raise ValueError("k must be >= 0")
    for _ in range(k):
        if x <= 0:
            raise DomainError(f"iterated log undefined: intermediate {x} <= 0")
        x = math.log(x)
    return x


def d_star(n, r) -> float:
    """Concentration point log n / log_{(r+1)} n of the max G^r degree."""
    denom = iterated_log(n, r + 1)
    if denom <= 0:
        raise DomainError(f"log_({r + 1})({n}) = {denom} <= 0")
    return math.log(n) / denom


# -- layer-profile pmf -----------------------------------------------------


def log_u(ell, d) -> float:
    """Exact log of the layer-profile weight (log-gamma, no Stirling).

    The weight is d^D * e^{-d(1 + D - l_r)} / prod(l_i!) * prod l_{i-1}^{l_i}
    with l_0 = 1.  Note the exponent uses d (as the Poisson derivation
    forces), and returns -inf for infeasible profiles.
    """
    if isinstance(ell, DegreeProfile):
        profile = ell
    else:
        profile = DegreeProfile(tuple(ell))
    if d < 0:
        raise DomainError("d must be >= 0")
    if not profile.feasible:
        return float("-inf")
    ells = profile.ell
    big_d = profile.total
    if big_d == 0:
        return -d  # all layers empty: Poisson mass at zero
    out = big_d * math.log(d) - d * (1 + big_d - ells[-1])
    prev = 1
    for x in ells:
        out -= math.lgamma(x + 1)
        if x:
            out += x * math.log(prev)
        prev = x
    return out


def u_value(ell, d) -> float:
    """Layer-profile weight on probability scale (0 for infeasible)."""
    lv = log_u(ell, d)
    return 0.0 if lv == float("-inf") else math.exp(lv)


def log_u_stirling(ell, d) -> float:
    """Stirling-form diagnostic for log_u; carries O(r) slack.

    D log d - d(1 + D - l_r) + D - sum l_i log(l_i / l_{i-1}) - (1/2) log L.
    Kept separate from log_u, which is exact.
    """
    profile = ell if isinstance(ell, DegreeProfile) else DegreeProfile(tuple(ell))
    if not profile.feasible:
        return float("-inf")
    big_d = profile.total
    if big_d == 0:
        return -d
    return (big_d * math.log(d) - d * (1 + big_d - profile.ell[-1]) + big_d
            - layer_entropy(profile.ell) - 0.5 * math.log(profile.product))


def _feasible_compositions(total, r, work_cap):
    """Yield feasible layer vectors summing to ``total``: k positive parts
    padded with trailing zeros, k = 0..r."""
    if total == 0:
        yield (0,) * r
        return
    work = 0
    for k in range(1, r + 1):
        for cuts in combinations(range(1, total), k - 1):
            work += 1
            if work > work_cap:
                raise BudgetExceededError("composition enumeration work cap exceeded")
            parts = []
            prev = 0
            for c in cuts:
                parts.append(c - prev)
                prev = c
            parts.append(total - prev)
            yield tuple(parts) + (0,) * (r - k)


def degree_sum_pmf(d, r, big_d, cap=DEFAULT_PMF_CAP,
                   work_cap=DEFAULT_ENUM_WORK_CAP) -> float:
    """Limit pmf of the G^r-degree: sum of u over layer profiles with sum D.

    The vanishing finite-n correction factor is dropped.  ``d`` may also be
    a TheoryParams bundle.
    """
    if isinstance(d, TheoryParams):
        r, d = d.r, d.d
    if big_d < 0:
        return 0.0
    if big_d > cap:
        raise BudgetExceededError(f"D={big_d} exceeds enumeration cap {cap}")
    return sum(u_value(ell, d) for ell in _feasible_compositions(big_d, r, work_cap))


# -- layer-entropy minimization -------------------------------------------


def layer_entropy(ell) -> float:
    """sum_i l_i log(l_i / l_{i-1}) with l_0 = 1, 0 log 0 = 0, and +inf
    when a zero layer precedes a nonzero one."""
    prev = 1
    out = 0.0
    for x in ell:
        if x:
            if prev == 0:
                return float("inf")
            out += x * math.log(x / prev)
        prev = x
    return out


def lemma2_min_exact(big_d, r, work_cap=DEFAULT_ENUM_WORK_CAP):
    """Exact integer minimum of the layer entropy over profiles summing to D.

    Returns (value, argmin profile); the lexicographically smallest argmin
    wins ties.  Enumeration is work-capped (raises BudgetExceededError);
    the cap comfortably covers r <= 3 at D <= ~3000.
    """
    if big_d < 0:
        raise ValueError("D must be >= 0")
    if r < 1:
        raise ValueError("r must be >= 1")
    best = float("inf")
    arg = None
    for ell in _feasible_compositions(big_d, r, work_cap):
        val = layer_entropy(ell)
        if val < best or (val == best and (arg is None or ell < arg)):
            best = val
            arg = ell
    return best, DegreeProfile(arg)


@dataclass
class LagrangeSolution:
    """Continuous relaxation of the layer-entropy minimum.

    ``ratios`` holds (p_1, ..., p_r) with p_i = l_i / l_{i-1}; the interior
    stationarity conditions p_i = p_r * e^{p_{i+1}} hold by construction,
    and ``residual`` is |sum l_i - D| after bisection on p_r.
    """

    value: float
    ratios: list
    ell: list
    residual: float
    iterations: int


def _lagrange_profile(p_r, r):
    """Layer ratios and sizes induced by the last ratio p_r (None on overflow)."""
    ratios = [0.0] * r
    ratios[r - 1] = p_r
    for i in range(r - 2, -1, -1):
        if ratios[i + 1] > 700:
            return None, None
        ratios[i] = p_r * math.exp(ratios[i + 1])
        if ratios[i] > 1e300:
            return None, None
    ell = []
    prod = 1.0
    for q in ratios:
        prod *= q
        if prod > 1e300:
            return None, None
        ell.append(prod)
    return ratios, ell


def lemma2_min_lagrange(big_d, r, tol=1e-10, max_iter=1000) -> LagrangeSolution:
    """Continuous layer-entropy minimum via bisection on the last ratio.

    The constraint sum(l_i) = D is monotone in p_r, so a bracket always
    exists for D > 0; raises NoConvergenceError (with the bracket) if the
    iteration cap is hit first.
    """
    if big_d <= 0:
        raise ValueError("D must be > 0")
    if r < 1:
        raise ValueError("r must be >= 1")

    def total(p_r):
        _, ell = _lagrange_profile(p_r, r)
        return float("inf") if ell is None else sum(ell)

    lo, hi = 1e-12, 1.0
    it = 0
    while total(hi) < big_d:
        lo, hi = hi, hi * 2
        it += 1
        if it > max_iter:
            raise NoConvergenceError("bracket expansion failed", bracket=(lo, hi))
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if total(mid) < big_d:
            lo = mid
        else:
            hi = mid
        it += 1
        if abs(total(mid) - big_d) <= tol:
            lo = hi = mid
            break
    p_r = 0.5 * (lo + hi)
    ratios, ell = _lagrange_profile(p_r, r)
    if ell is None:
        ratios, ell = _lagrange_profile(lo, r)
        p_r = lo
    residual = abs(sum(ell) - big_d)
    if residual > max(1e-8, 64 * math.ulp(float(big_d))):
        raise NoConvergenceError(
            f"constraint residual {residual} too large", bracket=(lo, hi))
    value = sum(l * math.log(q) for l, q in zip(ell, ratios))
    return LagrangeSolution(value, ratios, ell, residual, it)


# -- independence counting and chromatic bounds ----------------------------


def janson_k0(params: TheoryParams) -> float:
    """Independent-set size threshold 10 r! n log d / d^r (needs d > 1)."""
    if params.d <= 1:
        raise DomainError("k0 requires d > 1")
    return params.alpha * params.n * math.log(params.d) / params.d ** params.r


def janson_mu(params: TheoryParams, k) -> float:
    """Expected path count C(k,2) C(n-2, r-1) p^r, evaluated in log space."""
    if k < 2:
        return 0.0
    n, r = params.n, params.r
    if n - 2 < r - 1:
        return 0.0
    log_mu = (_log_binomial(k, 2) + _log_binomial(n - 2, r - 1)
              + r * math.log(params.p))
    return math.exp(log_mu)


def _log_binomial(n, k):
    if k < 0 or k > n:
        return float("-inf")
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def aks_chi_bound(delta, t, c=1.0) -> float:
    """Sparse-neighborhood chromatic bound c * Delta / log t, for 2 <= t <= Delta.

    The leading constant is taken as an explicit input (default 1): only the
    bound is evaluated here, never the coloring procedure behind it.
    """
    if not 2 <= t <= delta:
        raise DomainError("require 2 <= t <= delta")
    return c * delta / math.log(t)


# -- clique / independence / chromatic gap diagnostic ----------------------


def conjecture_gap(g, r, clique_budget=2_000_000, chi_budget=2_000_000,
                   edge_cap=10 ** 8) -> dict:
    """Diagnostic for chi(G^r) vs max(omega(G^r), n / alpha(G^r)).

    Computes each quantity exactly where budgets allow, otherwise falls back
    to bounds; budget overruns become exactness flags, never aborts.
    """
    from .coloring import dsatur_chromatic_exact, greedy_coloring_explicit
    from .errors import BudgetExceededError, MemoryBudgetError
    from .graph import graph_power
    from .metrics import (clique_lower_bound, greedy_independent_set,
                          independence_number, max_clique_exact)

    n = g.n
    report = {"n": n, "r": r}
    try:
        gp = graph_power(g, r, edge_cap=edge_cap)
    except MemoryBudgetError:
        report["power_materialized"] = False
        report["omega"] = clique_lower_bound(g, r)
        report["omega_exact"] = False
        report["alpha"] = None
        report["alpha_exact"] = False
        report["chi"] = None
        report["chi_exact"] = False
        report["ratio"] = None
        return report
    report["power_materialized"] = True

    try:
        omega = max_clique_exact(gp, node_budget=clique_budget)
        omega_exact = True
    except BudgetExceededError as exc:
        omega = max(exc.lower or 1, clique_lower_bound(g, r))
        omega_exact = False
    try:
        alpha = independence_number(gp, mode="exact", node_budget=clique_budget)
        alpha_exact = True
    except BudgetExceededError:
        alpha = len(greedy_independent_set(gp))
        alpha_exact = False
    try:
        chi, _ = dsatur_chromatic_exact(gp, node_budget=chi_budget)
        chi_exact = True
    except BudgetExceededError as exc:
        chi = exc.upper or greedy_coloring_explicit(gp).palette_size
        chi_exact = False

    denom = max(omega, n / alpha) if alpha else None
    report.update(omega=omega, omega_exact=omega_exact,
                  alpha=alpha, alpha_exact=alpha_exact,
                  chi=chi, chi_exact=chi_exact,
                  ratio=(chi / denom) if denom else None)
    return report

"""Desk-verifiable arithmetic criteria and zero statistics.

Everything here is elementary number theory at scale: the Redheffer
determinant (equal to the Mertens function), the Robin and Lagarias
divisor-sum inequalities, partial sums of the Li coefficients, the moment
constants from random-matrix theory, and the two-point correlation of
rescaled zero spacings against 1 - (sin pi u / pi u)^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from mpmath import mp, mpf, mpc

from .numeric import DomainError, integrate
from .precision import GUARD_DIGITS, Precision, as_precision, round_to
from .zeros_io import ZeroList

REDHEFFER_BOUND = 5000
ELIMINATION_BOUND = 64
LAGARIAS_BOUND = 10 ** 8


# ----------------------------------------------------------------------
# sieve tables
# ----------------------------------------------------------------------

class SieveTables:
    """Exact integer tables of sigma, mu and the Mertens function M."""

    def __init__(self, n_max: int):
        if n_max < 1:
            raise DomainError("need n_max >= 1")
        self.n_max = n_max
        self.sigma = _sigma_table(n_max)
        self.mu = _mu_table(n_max)
        self.mertens = np.concatenate(
            ([0], np.cumsum(self.mu[1:], dtype=np.int64)))

    def M(self, n: int) -> int:
        return int(self.mertens[n])


def _sigma_table(n: int) -> np.ndarray:
    """sigma(k) for k <= n by divisor pairs d <= sqrt(k)."""
    sigma = np.zeros(n + 1, dtype=np.int64)
    root = int(math.isqrt(n))
    for d in range(1, root + 1):
        start = d * d
        ks = np.arange(start, n + 1, d, dtype=np.int64)
        sigma[start::d] += d + ks // d
        sigma[d * d] -= d  # the square counted its root twice
    return sigma


def _mu_table(n: int) -> np.ndarray:
    mu = np.ones(n + 1, dtype=np.int8)
    mu[0] = 0
    is_comp = np.zeros(n + 1, dtype=bool)
    primes = []
    for i in range(2, n + 1):
        if not is_comp[i]:
            primes.append(i)
            mu[i] = -1
        for p in primes:
            if i * p > n:
                break
            is_comp[i * p] = True
            if i % p == 0:
                mu[i * p] = 0
                break
            mu[i * p] = -mu[i]
    return mu


# ----------------------------------------------------------------------
# Redheffer determinant
# ----------------------------------------------------------------------

def redheffer_matrix(n: int) -> np.ndarray:
    """R[i][j] = 1 if j = 1 or i | j (1-based)."""
    r = np.zeros((n, n), dtype=np.int64)
    r[:, 0] = 1
    for i in range(1, n + 1):
        r[i - 1, i - 1::i] = 1
    return r


def _bareiss_det(m: list) -> int:
    """Fraction-free Gaussian elimination, exact integer determinant."""
    n = len(m)
    m = [row[:] for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def redheffer_det_elimination(n: int) -> int:
    """Exact determinant by fraction-free elimination (cross-check path)."""
    if n > ELIMINATION_BOUND:
        raise DomainError("direct elimination capped at n = %d" % ELIMINATION_BOUND)
    return _bareiss_det(redheffer_matrix(n).tolist())


def redheffer_det(n: int, tables: SieveTables | None = None) -> int:
    """det(R_n), via the rank-one update of the divisibility matrix.

    R = U + c e_1^T with U the unitriangular divisor-closure matrix, so
    det R = 1 + (row 1 of U^{-1}) . c; the row is obtained by the exact
    triangular solve y_j = [j = 1] - sum_{d | j, d < j} y_d, and the result
    is asserted against the Mertens value from the independent sieve.
    """
    if not (1 <= n <= REDHEFFER_BOUND):
        raise DomainError("n out of range [1, %d]" % REDHEFFER_BOUND)
    y = np.zeros(n + 1, dtype=np.int64)
    y[1] = 1
    for d in range(1, n + 1):
        if y[d]:
            y[2 * d::d] -= y[d]
    det = 1 + int(y[2:].sum())
    tables = tables if tables is not None and tables.n_max >= n else SieveTables(n)
    if det != tables.M(n):
        raise ArithmeticError("determinant %d disagrees with Mertens %d at n=%d"
                              % (det, tables.M(n), n))
    return det


# ----------------------------------------------------------------------
# Robin and Lagarias criteria
# ----------------------------------------------------------------------

@dataclass
class CriterionResult:
    n: int
    holds: bool
    slack: float
    boundary: bool = False


def sigma_of(n: int) -> int:
    """sigma(n) for a single n by trial-division factorization."""
    if n < 1:
        raise DomainError("need n >= 1")
    total = 1
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            q = 1
            while m % p == 0:
                m //= p
                q = q * p
            total *= (q * p - 1) // (p - 1)
        p += 1 if p == 2 else 2
    if m > 1:
        total *= m + 1
    return total


def lagarias_check(n: int, sigma_n: int | None = None) -> CriterionResult:
    """sigma(n) < H_n + exp(H_n) log H_n; at n = 1 both sides are equal and
    the case is flagged as the boundary rather than a failure."""
    if n < 1:
        raise DomainError("need n >= 1")
    if n > LAGARIAS_BOUND:
        raise DomainError("streaming sieve capped at %d" % LAGARIAS_BOUND)
    if sigma_n is None:
        sigma_n = sigma_of(n)
    h = float(np.sum(1.0 / np.arange(1, n + 1))) if n < 10 ** 6 else _harmonic(n)
    rhs = h + math.exp(h) * math.log(h) if h > 0 else 1.0
    slack = rhs - sigma_n
    return CriterionResult(n=n, holds=slack > 0 or n == 1, slack=slack,
                           boundary=(n == 1))


def _harmonic(n: int) -> float:
    # Euler-Maclaurin, exact to double precision for large n
    return (math.log(n) + 0.5772156649015328606 + 1 / (2 * n) - 1 / (12 * n * n)
            + 1 / (120 * n ** 4))


def lagarias_scan(n_max: int, tables: SieveTables | None = None) -> dict:
    """Vectorized check for all n <= n_max; returns the worst margin."""
    tables = tables if tables is not None and tables.n_max >= n_max \
        else SieveTables(n_max)
    n = np.arange(1, n_max + 1, dtype=np.float64)
    h = np.cumsum(1.0 / n)
    rhs = h + np.exp(h) * np.log(np.maximum(h, 1e-300))
    rhs[0] = 1.0  # log H_1 = 0
    slack = rhs - tables.sigma[1:].astype(np.float64)
    holds = slack > 0
    holds[0] = True  # boundary case n = 1 (equality)
    worst = int(np.argmin(slack[1:]) + 2) if n_max > 1 else 1
    return {
        "max_n": n_max,
        "all_hold": bool(holds.all()),
        "boundary_n1": True,
        "worst_n": worst,
        "worst_slack": float(slack[worst - 1]),
        "failures": [int(i + 1) for i in np.nonzero(~holds)[0][:10]],
    }


def robin_check(n: int, sigma_n: int | None = None) -> CriterionResult:
    """sigma(n) < e^gamma n log log n for n > 5040."""
    if n <= 5040:
        raise DomainError("Robin's inequality is asserted for n > 5040")
    if sigma_n is None:
        sigma_n = sigma_of(n)
    egamma = 1.7810724179901979852  # e^gamma to double precision
    rhs = egamma * n * math.log(math.log(n))
    slack = rhs - sigma_n
    return CriterionResult(n=n, holds=slack > 0, slack=slack)


def robin_scan(n_max: int, tables: SieveTables | None = None) -> dict:
    if n_max <= 5041:
        raise DomainError("need n_max > 5041")
    tables = tables if tables is not None and tables.n_max >= n_max \
        else SieveTables(n_max)
    n = np.arange(5041, n_max + 1, dtype=np.float64)
    egamma = 1.7810724179901979852
    rhs = egamma * n * np.log(np.log(n))
    slack = rhs - tables.sigma[5041:].astype(np.float64)
    holds = slack > 0
    worst = int(np.argmin(slack)) + 5041
    return {
        "range": [5041, n_max],
        "all_hold": bool(holds.all()),
        "worst_n": worst,
        "worst_slack": float(slack[worst - 5041]),
        "failures": [int(i + 5041) for i in np.nonzero(~holds)[0][:10]],
    }


# ----------------------------------------------------------------------
# Li coefficients and moment constants
# ----------------------------------------------------------------------

def li_coefficient_partial(n: int, zeros: ZeroList, prec=Precision(30)) -> mpf:
    """Partial sum of lambda_n = sum_rho (1 - (1 - 1/rho)^n) over the
    conjugate-paired zeros of the list (each pair contributes the real part
    twice); the tail is unbounded here, so this is a trend quantity only."""
    prec = as_precision(prec)
    if n < 1:
        raise DomainError("need n >= 1")
    if len(zeros) == 0:
        raise DomainError("empty zero list")
    with prec.work():
        total = mpf(0)
        for g in zeros:
            rho = mpc(mpf("0.5"), mpf(g))
            total += 2 * (1 - (1 - 1 / rho) ** n).real
        return round_to(total, prec)


def keating_snaith_constants(k: int, prime_bound: int = 10 ** 5,
                             prec=Precision(30)) -> dict:
    """Moment constants: exact rational f_k = prod_j j!/(j+k)!, the integer
    g_k = (k^2)! f_k, and the arithmetic Euler product

        a_k = prod_p (1 - 1/p)^{k^2} sum_m (Gamma(m+k)/(m! Gamma(k)))^2 p^{-m}

    truncated at prime_bound; each factor is 1 + O(p^{-2}), giving the
    reported tail estimate.
    """
    prec = as_precision(prec)
    if not (1 <= k <= 8):
        raise DomainError("k in [1, 8]")
    f_k = Fraction(1)
    for j in range(k):
        f_k *= Fraction(math.factorial(j), math.factorial(j + k))
    g_k = f_k * math.factorial(k * k)
    if g_k.denominator != 1:
        raise ArithmeticError("g_k failed integrality")
    with prec.work():
        from .explicit import primes_up_to
        a_k = mpf(1)
        for p in primes_up_to(prime_bound):
            p = int(p)
            s = mpf(0)
            m = 0
            term = mpf(1)
            while True:
                # (Gamma(m+k)/(m! Gamma(k)))^2 = binom(m+k-1, m)^2
                s += term
                m += 1
                binom = math.comb(m + k - 1, m)
                term = mpf(binom * binom) / mpf(p) ** m
                if term < mpf(10) ** (-(prec.digits + 10)) and m > k:
                    break
            a_k *= (1 - mpf(1) / p) ** (k * k) * s
        # |log factor| <= c_k / p^2 with c_k from the p^-2 coefficient
        c_k = mpf(math.comb(k + 1, 2) ** 2 + k ** 4)
        tail = c_k / prime_bound
        return {
            "f_k": f_k,
            "g_k": int(g_k),
            "a_k": round_to(a_k, prec),
            "a_k_tail_bound": round_to(tail, prec),
            "prime_bound": prime_bound,
        }


# ----------------------------------------------------------------------
# pair correlation
# ----------------------------------------------------------------------

def gue_pair_density(u: float) -> float:
    if u == 0:
        return 0.0
    s = math.sin(math.pi * u) / (math.pi * u)
    return 1.0 - s * s


@dataclass
class PairCorrelation:
    edges: np.ndarray
    density: np.ndarray
    reference: np.ndarray
    mass: float
    reference_mass: float
    zeros_used: int

    def sup_deviation(self) -> float:
        return float(np.max(np.abs(self.density - self.reference)))


def pair_correlation(zeros: ZeroList, bins: int, umax: float) -> PairCorrelation:
    """Empirical two-point density of unfolded zero differences on (0, umax].

    All pairs within the window are used; each difference gamma_j - gamma_i is
    rescaled by the local density log(gamma_mid/2pi)/(2pi) (the '~gamma'
    unfolding with the height-dependent log factor taken at the pair itself,
    labeled accordingly in reports).  The reference curve is the GUE density
    1 - (sin pi u/pi u)^2 averaged over each bin.
    """
    if len(zeros) < 1000:
        raise DomainError("need at least 1000 zeros for stable statistics")
    g = np.array([float(x) for x in zeros.ordinates])
    n = len(g)
    edges = np.linspace(0.0, umax, bins + 1)
    counts = np.zeros(bins, dtype=np.int64)
    # widest spacing ever needed in raw units
    dens_lo = math.log(g[0] / (2 * math.pi)) / (2 * math.pi)
    max_window = umax / max(dens_lo, 1e-9)
    for i in range(n - 1):
        j_hi = np.searchsorted(g, g[i] + max_window, side="right")
        if j_hi <= i + 1:
            continue
        mids = (g[i + 1:j_hi] + g[i]) / 2
        dens = np.log(mids / (2 * math.pi)) / (2 * math.pi)
        u = (g[i + 1:j_hi] - g[i]) * dens
        u = u[u <= umax]
        counts += np.histogram(u, bins=edges)[0]
    width = umax / bins
    density = counts / (n * width)
    ref = np.empty(bins)
    for b in range(bins):
        # bin-averaged GUE density by Simpson on the bin
        a, c = edges[b], edges[b + 1]
        m = (a + c) / 2
        ref[b] = (gue_pair_density(a) + 4 * gue_pair_density(m)
                  + gue_pair_density(c)) / 6
    return PairCorrelation(edges=edges, density=density, reference=ref,
                           mass=float(counts.sum() / n),
                           reference_mass=float(np.sum(ref) * width),
                           zeros_used=n)


def gue_integral(umax: float, prec=Precision(30)) -> mpf:
    """int_0^umax (1 - (sin pi u / pi u)^2) du by quadrature."""
    prec = as_precision(prec)
    with prec.work():
        return integrate(lambda u: 1 - (mp.sin(mp.pi * u) / (mp.pi * u)) ** 2
                         if u != 0 else mpf(0), 0, umax, prec)
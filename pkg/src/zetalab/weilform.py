"""The prime-truncated Weil quadratic form in a trigonometric basis.

Test functions live on the multiplicative interval [1/lambda, lambda], i.e.
on [-L/2, L/2] in s = log u with L = 2 log lambda.  The even orthonormal
basis is e_0 = L^{-1/2}, e_k = sqrt(2/L) cos(2 pi k s / L); the odd (sine)
block is kept separate because the form's kernel is even and the parity
blocks decouple.

For basis functions the multiplicative cross-correlation
psi_{jk}(tau) = int e_j(s) e_k(s + tau) ds  (supported in |tau| <= L, even)
has piecewise trigonometric closed forms, so the matrix of the quadratic form

    M[j][k] = psihat_{jk}(i/2) + psihat_{jk}(-i/2) - sum_v W_v(psi_{jk})

needs quadrature only for the archimedean place, and there only for the
2(N+1) one-dimensional profiles

    S_n = A[sin(w_n tau)],   C_n = A[(L - tau) cos(w_n tau)],
    A[F] = int_0^L (F(tau) - e^{-tau/2} F(0)) e^{tau/2}/sinh(tau) dtau,

every entry being a short linear combination of these (the kernel of the
form depends on s - s' only).  Pole terms are rank one in closed form and the
prime terms evaluate the closed-form correlations at tau = m log p over the
grid of prime powers p^m <= lambda^2.
"""

from __future__ import annotations

import hashlib
import os
from dataclasses import dataclass, field

from mpmath import mp, mpf

from .numeric import DomainError, EigenPair, integrate, smallest_eigenpair
from .precision import (GUARD_DIGITS, Precision, as_precision, mpf_to_text,
                        round_to, text_to_mpf)
from .explicit import PrimePowerGrid
from ._parallel import pmap


@dataclass(frozen=True)
class LogInterval:
    """Support [1/lambda, lambda] in multiplicative coordinates."""

    lam: mpf
    digits: int

    @classmethod
    def from_lambda(cls, lam, prec) -> "LogInterval":
        prec = as_precision(prec)
        with prec.work():
            lam = mpf(lam)
            if not lam > 1:
                raise DomainError("lambda must exceed 1")
            return cls(lam=round_to(lam, prec), digits=prec.digits)

    @classmethod
    def from_pmax(cls, pmax, prec) -> "LogInterval":
        """Support [1, pmax] recentred multiplicatively: lambda = sqrt(pmax)."""
        prec = as_precision(prec)
        with prec.work():
            return cls.from_lambda(mp.sqrt(mpf(pmax)), prec)

    @property
    def length(self) -> mpf:
        with mp.workdps(self.digits + GUARD_DIGITS):
            return 2 * mp.log(self.lam)

    def omega(self, k: int) -> mpf:
        return 2 * mp.pi * k / self.length


@dataclass
class TrigTestFunction:
    """Even trigonometric test function sum_k c_k e_k on the log-interval."""

    interval: LogInterval
    coeffs: list
    digits: int
    normalized: bool = False

    def __post_init__(self):
        if not self.coeffs:
            raise DomainError("need at least the constant coefficient")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, s):
        """Value at s = log u in [-L/2, L/2]."""
        with mp.workdps(self.digits + GUARD_DIGITS):
            L = self.interval.length
            s = mpf(s)
            if abs(s) > L / 2:
                return mpf(0)
            val = self.coeffs[0] / mp.sqrt(L)
            root = mp.sqrt(2 / L)
            for k in range(1, len(self.coeffs)):
                if self.coeffs[k]:
                    val += self.coeffs[k] * root * mp.cos(self.interval.omega(k) * s)
            return val

    def eval_u(self, u):
        with mp.workdps(self.digits + GUARD_DIGITS):
            return self(mp.log(u))

    def norm(self) -> mpf:
        with mp.workdps(self.digits + GUARD_DIGITS):
            return mp.sqrt(mp.fsum(c * c for c in self.coeffs))


# ----------------------------------------------------------------------
# closed-form cross-correlations
# ----------------------------------------------------------------------

def _corr_even(j: int, k: int, tau, L):
    """psi_{jk}(tau) for the even cosine basis, |tau| <= L assumed folded."""
    if j == 0 and k == 0:
        return (L - tau) / L
    if j == 0 or k == 0:
        n = max(j, k)
        w = 2 * mp.pi * n / L
        return -(mp.sqrt(2) / L) * (-1) ** n * mp.sin(w * tau) / w
    wj = 2 * mp.pi * j / L
    wk = 2 * mp.pi * k / L
    if j == k:
        return (2 / L) * ((L - tau) * mp.cos(wj * tau) / 2 - mp.sin(wj * tau) / (2 * wj))
    sign = -1 if (j + k) % 2 else 1
    return (2 / L) * sign * ((mp.sin(wj * tau) - mp.sin(wk * tau)) / (2 * (wk - wj))
                             - (mp.sin(wj * tau) + mp.sin(wk * tau)) / (2 * (wj + wk)))


def _corr_odd(j: int, k: int, tau, L):
    """Cross-correlation of sine basis functions o_k = sqrt(2/L) sin(w_k s)."""
    wj = 2 * mp.pi * j / L
    wk = 2 * mp.pi * k / L
    if j == k:
        return (2 / L) * ((L - tau) * mp.cos(wj * tau) / 2 + mp.sin(wj * tau) / (2 * wj))
    sign = -1 if (j + k) % 2 else 1
    return (2 / L) * sign * ((mp.sin(wk * tau) - mp.sin(wj * tau)) / (2 * (wj - wk))
                             + (mp.sin(wj * tau) + mp.sin(wk * tau)) / (2 * (wj + wk)))


def basis_correlation(j: int, k: int, tau, interval: LogInterval,
                      block: str = "even"):
    with mp.workdps(interval.digits + GUARD_DIGITS):
        L = interval.length
        t = abs(mpf(tau))
        if t >= L:
            return mpf(0)
        fn = _corr_even if block == "even" else _corr_odd
        return fn(j, k, t, L)


def autocorrelation_eval(f: TrigTestFunction, g: TrigTestFunction, t) -> mpf:
    """Cross-correlation psi_{fg}(e^t) = int f(s) g(s+t) ds in closed form."""
    if f.interval != g.interval:
        raise DomainError("test functions live on different intervals")
    interval = f.interval
    prec = Precision(max(f.digits, g.digits))
    with prec.work():
        L = interval.length
        t = mpf(t)
        if abs(t) >= L:
            return mpf(0)
        total = mpf(0)
        # cross-correlation of even functions is even in t
        tau = abs(t)
        for j, cj in enumerate(f.coeffs):
            if not cj:
                continue
            for k, dk in enumerate(g.coeffs):
                if not dk:
                    continue
                total += cj * dk * _corr_even(j, k, tau, L)
        return round_to(total, prec)


# ----------------------------------------------------------------------
# matrix assembly
# ----------------------------------------------------------------------

@dataclass
class WeilMatrix:
    interval: LogInterval
    order: int                 # N: basis indices 0..N (or 1..N for odd block)
    entries: list              # list of rows of mpf
    prime_grid: PrimePowerGrid
    digits: int
    block: str = "even"
    include_pole: bool = True

    @property
    def size(self) -> int:
        return len(self.entries)

    def symmetry_defect(self) -> mpf:
        with mp.workdps(self.digits):
            return max(abs(self.entries[i][j] - self.entries[j][i])
                       for i in range(self.size) for j in range(i + 1))


def _pole_vector(interval: LogInterval, N: int, block: str):
    """P_j = int b_j(s) e^{s/2} ds in closed form (b = cosine or sine basis)."""
    L = interval.length
    sh = mp.sinh(L / 4)
    out = []
    if block == "even":
        for j in range(N + 1):
            if j == 0:
                out.append(4 * sh / mp.sqrt(L))
            else:
                w = interval.omega(j)
                out.append((-1) ** j * mp.sqrt(2 / L) * sh / (mpf(1) / 4 + w * w))
    else:
        for j in range(1, N + 1):
            w = interval.omega(j)
            out.append(-(-1) ** j * mp.sqrt(2 / L) * 2 * w * sh / (mpf(1) / 4 + w * w))
    return out


def _arch_profiles(interval: LogInterval, N: int, prec: Precision, workers: int = 1):
    """S_n and C_n, the archimedean functionals on the two profile families."""
    L = interval.length

    def sine_profile(n: int):
        with prec.work():
            w = interval.omega(n)
            if n == 0:
                return mpf(0)
            return integrate(lambda t: mp.sin(w * t) * mp.exp(t / 2) / mp.sinh(t),
                             0, L, prec, max_error_drop=5)

    def cos_profile(n: int):
        with prec.work():
            w = interval.omega(n)
            return integrate(
                lambda t: ((L - t) * mp.cos(w * t) - L * mp.exp(-t / 2))
                * mp.exp(t / 2) / mp.sinh(t),
                0, L, prec, max_error_drop=5)

    sines = pmap(sine_profile, range(N + 1), workers)
    coss = pmap(cos_profile, range(N + 1), workers)
    return sines, coss


def _arch_entry(j: int, k: int, S, C, interval: LogInterval, block: str):
    """W_R(psi_{jk}) assembled from the profile functionals.

    Terms proportional to psi_{jk}(0) carry the (log 4pi + gamma) atom and
    the closed-form tail f(0) log tanh(L/2) of the counterterm beyond the
    correlation's support.
    """
    L = interval.length
    atom = mp.log(4 * mp.pi) + mp.euler + mp.log(mp.tanh(L / 2))
    if block == "even":
        if j == 0 and k == 0:
            return atom + C[0] / L
        if j == 0 or k == 0:
            n = max(j, k)
            return -(mp.sqrt(2) / L) * (-1) ** n * S[n] / interval.omega(n)
        if j == k:
            return atom + (2 / L) * (C[j] / 2 - S[j] / (2 * interval.omega(j)))
        sign = -1 if (j + k) % 2 else 1
        wj, wk = interval.omega(j), interval.omega(k)
        return (2 / L) * sign * ((S[j] - S[k]) / (2 * (wk - wj))
                                 - (S[j] + S[k]) / (2 * (wj + wk)))
    if j == k:
        return atom + (2 / L) * (C[j] / 2 + S[j] / (2 * interval.omega(j)))
    sign = -1 if (j + k) % 2 else 1
    wj, wk = interval.omega(j), interval.omega(k)
    return (2 / L) * sign * ((S[k] - S[j]) / (2 * (wj - wk))
                             + (S[j] + S[k]) / (2 * (wj + wk)))


def assemble_matrix(interval: LogInterval, N: int, prec,
                    block: str = "even", include_pole: bool = True,
                    workers: int = 1) -> WeilMatrix:
    """Matrix of the truncated Weil form on the order-N parity block.

    entries[j][k] = (pole terms) - sum_p W_p(psi_jk) - W_R(psi_jk); under RH
    this equals the sum of |ehat_j ehat_k| over the zeta zeros and is
    positive semidefinite.
    """
    prec = as_precision(prec)
    if N < 0:
        raise DomainError("basis order must be non-negative")
    with prec.work():
        L = interval.length
        lam2 = mp.exp(L)
        grid = PrimePowerGrid.up_to(float(lam2) * (1 + 1e-12))
        S, C = _arch_profiles(interval, N, prec, workers=workers)
        indices = list(range(N + 1)) if block == "even" else list(range(1, N + 1))
        n = len(indices)
        P = _pole_vector(interval, N, block)
        pole_sign = 2 if block == "even" else -2

        # prime terms: psi_{jk}(m log p) via precomputed sin/cos at each tau
        corr = _corr_even if block == "even" else _corr_odd
        prime_taus = []
        for (p, m) in grid:
            with mp.workdps(prec.digits + GUARD_DIGITS):
                tau = m * mp.log(p)
                if tau < L:
                    prime_taus.append((mp.log(p) * mpf(p) ** (-mpf(m) / 2), tau))

        rows = [[mpf(0)] * n for _ in range(n)]
        for a in range(n):
            j = indices[a]
            for b in range(a, n):
                k = indices[b]
                val = pole_sign * P[a] * P[b] if include_pole else mpf(0)
                val -= _arch_entry(j, k, S, C, interval, block)
                for (wgt, tau) in prime_taus:
                    val -= wgt * 2 * corr(j, k, tau, L)
                rows[a][b] = rows[b][a] = round_to(val, prec)
    return WeilMatrix(interval=interval, order=N, entries=rows, prime_grid=grid,
                      digits=prec.digits, block=block, include_pole=include_pole)


# ----------------------------------------------------------------------
# minimal modes
# ----------------------------------------------------------------------

@dataclass
class MinimalMode:
    matrix: WeilMatrix
    pair: EigenPair
    even: bool
    verified: bool

    @property
    def epsilon(self):
        return self.pair.epsilon

    def test_function(self) -> TrigTestFunction:
        if self.matrix.block != "even":
            raise DomainError("only the even block yields a TrigTestFunction")
        return TrigTestFunction(interval=self.matrix.interval,
                                coeffs=list(self.pair.coeffs),
                                digits=self.matrix.digits, normalized=True)


def minimal_mode(matrix: WeilMatrix) -> MinimalMode:
    """Smallest eigenpair of the assembled block; the mode is even iff the
    block is the cosine block, and ``verified`` records the gap certificate
    required by the reality theorem's hypotheses."""
    prec = Precision(matrix.digits)
    pair = smallest_eigenpair(matrix.entries, prec)
    return MinimalMode(matrix=matrix, pair=pair,
                       even=(matrix.block == "even"),
                       verified=bool(pair.gap_certified))


def odd_block_mode(interval: LogInterval, N: int, prec,
                   workers: int = 1) -> MinimalMode:
    """Minimal mode of the sine-basis block (diagnostic: the global minimum
    is expected to live in the even block)."""
    matrix = assemble_matrix(interval, N, prec, block="odd", workers=workers)
    return minimal_mode(matrix)


def constrained_minimal_mode(interval: LogInterval, N: int, prec,
                             workers: int = 1) -> MinimalMode:
    """Variant without pole terms, minimized on the subspace fhat(+-i/2) = 0.

    The constraint is one linear condition (the two pole evaluations agree on
    even functions); the matrix is compressed onto the orthogonal complement
    of the pole vector with a Householder frame.
    """
    prec = as_precision(prec)
    matrix = assemble_matrix(interval, N, prec, block="even", include_pole=False,
                             workers=workers)
    with prec.work():
        P = _pole_vector(interval, N, "even")
        n = N + 1
        # Householder vector mapping P to ||P|| e_0
        alpha = mp.sqrt(mp.fsum(x * x for x in P))
        v = list(P)
        v[0] += alpha if v[0] >= 0 else -alpha
        vnorm2 = mp.fsum(x * x for x in v)

        def reflect(col):
            dot = mp.fsum(a * b for a, b in zip(v, col))
            return [a - 2 * dot * b / vnorm2 for a, b in zip(col, v)]

        # columns 1..N of the reflected identity span the complement of P
        basis = []
        for i in range(1, n):
            e = [mpf(0)] * n
            e[i] = mpf(1)
            basis.append(reflect(e))
        compressed = [[mpf(0)] * (n - 1) for _ in range(n - 1)]
        mats = matrix.entries
        for a in range(n - 1):
            ma = [mp.fsum(mats[r][c] * basis[a][c] for c in range(n)) for r in range(n)]
            for b in range(a, n - 1):
                val = mp.fsum(ma[r] * basis[b][r] for r in range(n))
                compressed[a][b] = compressed[b][a] = val
        pair = smallest_eigenpair(compressed, prec)
        # lift the eigenvector back to the full basis
        lifted = [mp.fsum(basis[a][r] * pair.coeffs[a] for a in range(n - 1))
                  for r in range(n)]
        pair = EigenPair(epsilon=pair.epsilon, coeffs=[round_to(x, prec) for x in lifted],
                         second=pair.second, gap=pair.gap, residual=pair.residual,
                         gap_certified=pair.gap_certified, digits=pair.digits)
    return MinimalMode(matrix=matrix, pair=pair, even=True,
                       verified=bool(pair.gap_certified))


# ----------------------------------------------------------------------
# portable text cache
# ----------------------------------------------------------------------

def matrix_cache_key(lam_text: str, N: int, digits: int) -> str:
    tag = "%s|%d|%d" % (lam_text, N, digits)
    return hashlib.sha256(tag.encode()).hexdigest()[:16]


def write_matrix_cache(matrix: WeilMatrix, path) -> None:
    prec = Precision(matrix.digits)
    lam_text = mpf_to_text(matrix.interval.lam, prec)
    lines = ["weilmatrix v1 lambda=%s N=%d digits=%d"
             % (lam_text, matrix.order, matrix.digits)]
    for row in matrix.entries:
        for x in row:
            lines.append(mpf_to_text(x, prec))
    tmp = "%s.tmp.%d" % (path, os.getpid())
    with open(tmp, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    os.replace(tmp, path)


def read_matrix_cache(path, prec=None) -> WeilMatrix:
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 5 or header[:2] != ["weilmatrix", "v1"]:
            raise DomainError("unrecognized matrix cache header in %s" % path)
        fields = dict(kv.split("=", 1) for kv in header[2:])
        digits = int(fields["digits"])
        N = int(fields["N"])
        prec = as_precision(prec if prec is not None else digits)
        if prec.digits != digits:
            raise DomainError("cache was written at %d digits, requested %d"
                              % (digits, prec.digits))
        interval = LogInterval(lam=text_to_mpf(fields["lambda"], prec), digits=digits)
        n = N + 1
        values = [text_to_mpf(line.strip(), prec) for line in fh if line.strip()]
    if len(values) != n * n:
        raise DomainError("cache %s holds %d entries, expected %d"
                          % (path, len(values), n * n))
    rows = [values[i * n:(i + 1) * n] for i in range(n)]
    with prec.work():
        lam2 = mp.exp(interval.length)
        grid = PrimePowerGrid.up_to(float(lam2) * (1 + 1e-12))
    return WeilMatrix(interval=interval, order=N, entries=rows, prime_grid=grid,
                      digits=digits, block="even", include_pole=True)

"""Special functions, quadrature and the smallest-eigenpair solver.

Conventions used throughout the package:

* Hermite functions ``h_n`` are the L2-normalized eigenfunctions of the
  oscillator ``H f = -f'' + 4 pi^2 x^2 f`` with eigenvalue ``2 pi (1 + 2 n)``,
  so ``h_0(x) = 2**(1/4) * exp(-pi x^2)`` and the Fourier transform
  ``F(f)(y) = int f(x) exp(2 pi i x y) dx`` acts on ``h_n`` as ``i**n``.
* ``ei_complex`` is the exponential integral with branch cut ``(-inf, 0]``,
  continuous from above with ``Im Ei(x + i0+) = +pi`` for ``x < 0`` and
  principal-value (real) on the cut itself.
* Quadrature uses a double-exponential (tanh-sinh) variable transformation
  with node clustering at the endpoints; callers must declare interior
  points where the integrand is not smooth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from mpmath import mp, mpf, mpc

from .precision import GUARD_DIGITS, Precision, as_precision, round_to

MAX_HERMITE_INDEX = 64
MAX_BERNOULLI_INDEX = 200
MAX_EULER_INDEX = 200


class DomainError(ValueError):
    pass


class IntegrationError(ArithmeticError):
    pass


class EigenError(ArithmeticError):
    pass


# ----------------------------------------------------------------------
# special functions
# ----------------------------------------------------------------------

def hermite_function(n: int, x, prec) -> mpf:
    """Value of the normalized oscillator eigenfunction h_n at real x.

    Uses the stable three-term recurrence for the normalized functions,
    h_{n+1} = sqrt(2/(n+1)) y h_n - sqrt(n/(n+1)) h_{n-1} with
    y = sqrt(2 pi) x.
    """
    prec = as_precision(prec)
    if not (isinstance(n, int) and 0 <= n <= MAX_HERMITE_INDEX):
        raise DomainError("hermite index must be an integer in [0, %d], got %r"
                          % (MAX_HERMITE_INDEX, n))
    with prec.work():
        x = mpf(x)
        y = mp.sqrt(2 * mp.pi) * x
        h_prev = mpf(0)
        h_cur = mpf(2) ** mpf("0.25") * mp.exp(-mp.pi * x * x)
        for k in range(n):
            h_next = (mp.sqrt(mpf(2) / (k + 1)) * y * h_cur
                      - mp.sqrt(mpf(k) / (k + 1)) * h_prev)
            h_prev, h_cur = h_cur, h_next
        return round_to(h_cur, prec)


def ei_complex(z, prec, side: int | None = None) -> mpc:
    """Exponential integral Ei(z) with branch cut on the negative real axis.

    For z on the cut (real, negative) a one-sided limit must be requested:
    ``side=+1`` gives the limit from the upper half plane (adds +i*pi to the
    principal value), ``side=-1`` from below.  ``side=0`` gives the real
    principal value.  Off the cut ``side`` is ignored.
    """
    prec = as_precision(prec)
    with prec.work():
        z = mpc(z)
        if z == 0:
            raise DomainError("Ei has a logarithmic singularity at 0")
        if z.imag == 0 and z.real < 0:
            if side is None:
                raise DomainError(
                    "z on the branch cut (-inf, 0); request a one-sided "
                    "limit with side=+1/-1 or the principal value with side=0")
            pv = mp.ei(z.real)
            if side == 0:
                return round_to(mpc(pv), prec)
            return round_to(mpc(pv, side * mp.pi), prec)
        val = mp.ei(z)
        if z.imag == 0:
            val = mpc(val)
        return round_to(mpc(val), prec)


@lru_cache(maxsize=None)
def bernoulli_number(index: int) -> Fraction:
    """Exact rational Bernoulli number B_index for even index <= 200."""
    if not (isinstance(index, int) and index > 0 and index % 2 == 0):
        raise DomainError("bernoulli index must be a positive even integer")
    if index > MAX_BERNOULLI_INDEX:
        raise DomainError("bernoulli index capped at %d" % MAX_BERNOULLI_INDEX)
    row = [Fraction(1)]
    for j in range(1, index + 1):
        acc = Fraction(0)
        for k in range(j):
            acc += Fraction(math.comb(j + 1, k)) * row[k]
        row.append(-acc / (j + 1))
    return row[index]


@lru_cache(maxsize=None)
def euler_number(index: int) -> int:
    """Euler number E(index) for even index, by the exact double sum

        E(2n) = sum_{k=1}^{2n} (-1/2)^k sum_{j=0}^{2k} (-1)^j C(2k,j) (k-j)^{2n}.

    The result of the rational double sum is always an integer.
    """
    if not (isinstance(index, int) and index > 0 and index % 2 == 0):
        raise DomainError("euler index must be a positive even integer")
    if index > MAX_EULER_INDEX:
        raise DomainError("euler index capped at %d" % MAX_EULER_INDEX)
    total = Fraction(0)
    for k in range(1, index + 1):
        inner = 0
        for j in range(2 * k + 1):
            inner += (-1) ** j * math.comb(2 * k, j) * (k - j) ** index
        total += Fraction(-1, 2) ** k * inner
    assert total.denominator == 1
    return int(total)


# ----------------------------------------------------------------------
# quadrature
# ----------------------------------------------------------------------

def integrate(f, a, b, prec, points=(), scheme: str = "tanh-sinh",
              max_error_drop: int = 10):
    """Integrate f over (a, b) to absolute accuracy ~10**-(digits-10).

    ``points`` lists interior break points where f is allowed to be
    non-smooth; the integral is split there and each piece is handled by a
    double-exponential rule (or Gauss-Legendre with ``scheme``).  Semi-infinite
    ranges are accepted with mpmath's built-in exp-substitution; pass
    ``mp.inf`` as an endpoint.
    """
    prec = as_precision(prec)
    with prec.work():
        a = mpf(a) if a not in (mp.inf, -mp.inf) else a
        b = mpf(b) if b not in (mp.inf, -mp.inf) else b
        pts = [a] + sorted(mpf(p) for p in points) + [b]
        for p in pts[1:-1]:
            if not (pts[0] < p < pts[-1]):
                raise DomainError("break point %s outside (%s, %s)" % (p, a, b))
        method = {"tanh-sinh": "tanh-sinh", "gauss-legendre": "gauss-legendre"}[scheme]
        tol = prec.tol(max_error_drop)
        val = err = None
        # escalate refinement depth and working precision together; endpoint
        # singularities eat working digits through cancellation at the
        # exponentially clustered nodes
        for maxdegree, extra in ((6, GUARD_DIGITS), (8, 30), (10, 50), (12, 80)):
            with prec.work(extra):
                val, err = mp.quad(f, pts, method=method, error=True,
                                   maxdegree=maxdegree)
            scale = max(mpf(1), abs(val))
            if err is None or err <= tol * scale:
                return round_to(val, prec)
        raise IntegrationError(
            "quadrature did not converge after max refinement levels: "
            "estimated error %s (target %s)" % (mp.nstr(err, 5), mp.nstr(tol, 5)))


# ----------------------------------------------------------------------
# smallest eigenpair of a symmetric matrix
# ----------------------------------------------------------------------

@dataclass
class EigenPair:
    """Smallest eigenvalue/eigenvector of a symmetric matrix with a gap
    certificate.

    ``epsilon`` is the algebraically smallest eigenvalue, ``coeffs`` the
    corresponding unit eigenvector, ``second`` an estimate of the next
    eigenvalue, ``gap = second - epsilon`` and ``residual`` the 2-norm of
    ``M c - epsilon c``.  ``gap_certified`` is False when the two lowest
    eigenvalues could not be separated at working precision.
    """
    epsilon: mpf
    coeffs: list
    second: mpf
    gap: mpf
    residual: mpf
    gap_certified: bool
    digits: int


def _cholesky(a, n):
    """In-place lower Cholesky of the dense symmetric list-of-lists ``a``."""
    for i in range(n):
        for j in range(i + 1):
            s = a[i][j]
            row_i, row_j = a[i], a[j]
            for k in range(j):
                s -= row_i[k] * row_j[k]
            if i == j:
                if s <= 0:
                    raise EigenError("matrix not positive definite after shift")
                a[i][i] = mp.sqrt(s)
            else:
                a[i][j] = s / row_j[j]
    return a


def _chol_solve(lower, b, n):
    y = [mpf(0)] * n
    for i in range(n):
        s = b[i]
        row = lower[i]
        for k in range(i):
            s -= row[k] * y[k]
        y[i] = s / row[i]
    x = [mpf(0)] * n
    for i in range(n - 1, -1, -1):
        s = y[i]
        for k in range(i + 1, n):
            s -= lower[k][i] * x[k]
        x[i] = s / lower[i][i]
    return x


def _norm(v):
    return mp.sqrt(mp.fsum(x * x for x in v))


def _matvec(rows, v, n):
    return [mp.fsum(rows[i][j] * v[j] for j in range(n)) for i in range(n)]


def _is_pd(rows, n, sigma):
    """Cholesky positive-definiteness test of rows - sigma*I."""
    work = [[rows[i][j] - (sigma if i == j else 0) for j in range(n)]
            for i in range(n)]
    try:
        _cholesky(work, n)
        return True
    except EigenError:
        return False


def _inverse_iteration(rows, n, seed, sigma0, scale, target, max_phases,
                       iters_per_phase, project_out=None):
    """Phase-scheduled shifted inverse iteration toward the eigenvalue
    nearest (and above) the initial shift.

    Each phase factors rows - sigma*I once and iterates with it; the shift is
    then moved up to theta - 2*residual, which provably stays below the
    targeted eigenvalue because the Rayleigh quotient theta is within the
    residual of it.  The iterate is carried across phases.
    """
    v = seed[:]
    if project_out is not None:
        dot = mp.fsum(a * b for a, b in zip(v, project_out))
        v = [a - dot * b for a, b in zip(v, project_out)]
    nv = _norm(v)
    if nv == 0:
        raise EigenError("degenerate start vector")
    v = [x / nv for x in v]
    sigma = sigma0
    theta = mpf(0)
    res = mpf("inf")
    floor = target / 1024
    for _ in range(max_phases):
        shifted = [[rows[i][j] - (sigma if i == j else 0) for j in range(n)]
                   for i in range(n)]
        try:
            lower = _cholesky(shifted, n)
        except EigenError:
            # overshot the eigenvalue; retreat halfway and refactor
            sigma = sigma - max(abs(theta - sigma), scale / 1024)
            continue
        for _ in range(iters_per_phase):
            w = _chol_solve(lower, v, n)
            if project_out is not None:
                dot = mp.fsum(a * b for a, b in zip(w, project_out))
                w = [a - dot * b for a, b in zip(w, project_out)]
            nw = _norm(w)
            if nw == 0:
                raise EigenError("inverse iteration broke down")
            v = [x / nw for x in w]
            mv = _matvec(rows, v, n)
            theta = mp.fsum(a * b for a, b in zip(mv, v))
            res = _norm([a - theta * b for a, b in zip(mv, v)])
            if res <= target:
                return theta, v, res
        new_sigma = theta - 2 * res - floor
        if not (new_sigma > sigma):
            break
        sigma = new_sigma
    return theta, v, res


def smallest_eigenpair(matrix, prec, max_phases: int = 12,
                       iters_per_phase: int = 60) -> EigenPair:
    """Algebraically smallest eigenpair of a symmetric matrix.

    Strategy: if the matrix is positive definite the shift starts at zero
    (the iteration then converges at rate eps1/eps2, ideal for the nearly
    singular matrices this package produces); otherwise it starts at a padded
    Gershgorin lower bound and is moved up phase by phase.  The deterministic
    all-ones start vector is used first; if the run is detected to have
    converged to a non-minimal pair (deflation finds something smaller, or
    the shifted matrix at eps1 - gap/2 fails a positive-definiteness
    certificate) the solver reseeds with fixed fallback vectors.
    """
    prec = as_precision(prec)
    with prec.work(2 * GUARD_DIGITS):
        rows = [[mpf(x) for x in row] for row in matrix.tolist()] \
            if hasattr(matrix, "tolist") else [[mpf(x) for x in row] for row in matrix]
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise EigenError("matrix must be square and non-empty")
        sym_tol = prec.tol(10)
        scale = max(max(abs(x) for x in row) for row in rows) or mpf(1)
        for i in range(n):
            for j in range(i):
                if abs(rows[i][j] - rows[j][i]) > sym_tol * scale:
                    raise EigenError("matrix not symmetric to tolerance")
                avg = (rows[i][j] + rows[j][i]) / 2
                rows[i][j] = rows[j][i] = avg

        target = mpf(10) ** (-(prec.digits // 2 + 5)) * max(mpf(1), scale)
        gersh = min(rows[i][i] - mp.fsum(abs(rows[i][j]) for j in range(n) if j != i)
                    for i in range(n))
        sigma0 = mpf(0) if _is_pd(rows, n, mpf(0)) else gersh - scale / 1024

        seeds = [
            [mpf(1)] * n,                                  # spec'd default
            [mpf(1) / (i + 1) for i in range(n)],          # fallback
            [mpf(1)] + [mpf(0)] * (n - 1),                 # last resort
        ]
        eps1 = vec1 = res1 = eps2 = res2 = None
        for seed in seeds:
            eps1, vec1, res1 = _inverse_iteration(
                rows, n, seed, sigma0, scale, target, max_phases, iters_per_phase)
            if n == 1:
                eps2, res2 = mpf("inf"), mpf(0)
                break
            # the gap certificate leans on |theta2 - lambda2| <= residual2,
            # so the deflated run must reach the same residual target
            eps2, _, res2 = _inverse_iteration(
                rows, n, seeds[1], sigma0, scale, target,
                max_phases, iters_per_phase, project_out=vec1)
            if eps2 < eps1 - max(res1, res2):
                continue  # converged to a non-minimal pair; reseed
            half_gap = (eps2 - eps1) / 2
            if half_gap > res1 and not _is_pd(rows, n, eps1 - half_gap):
                continue  # certificate found an eigenvalue below eps1
            break
        if res1 is None or res1 > target * 10:
            raise EigenError(
                "inverse iteration failed to meet the residual contract "
                "(residual %s)" % mp.nstr(res1, 5))

        gap = eps2 - eps1 if eps2 != mpf("inf") else mpf("inf")
        gap_ok = bool(gap == mpf("inf") or gap > 10 * max(res1, res2, target))

        # canonical sign: first non-negligible coefficient positive
        lead = next((x for x in vec1 if abs(x) > mpf(10) ** (-prec.digits // 4)), mpf(1))
        if lead < 0:
            vec1 = [-x for x in vec1]

    return EigenPair(
        epsilon=round_to(eps1, prec),
        coeffs=[round_to(x, prec) for x in vec1],
        second=round_to(eps2, prec) if eps2 != mpf("inf") else eps2,
        gap=round_to(gap, prec) if gap != mpf("inf") else gap,
        residual=round_to(res1, prec),
        gap_certified=gap_ok,
        digits=prec.digits,
    )


def symmetric_spectrum(matrix, prec):
    """All eigenvalues of a small symmetric matrix, ascending (mp.eigsy)."""
    prec = as_precision(prec)
    with prec.work():
        m = mp.matrix(matrix if not hasattr(matrix, "tolist") else matrix.tolist())
        evals, _ = mp.eigsy(m)
        return [round_to(evals[i], prec) for i in range(m.rows)]

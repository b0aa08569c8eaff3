"""Weil distributions, the explicit-formula identity, and prime counting.

Two normalizations of the per-place distributions are exposed.  The canonical
one lives on the multiplicative group with transform
``fhat(s) = int_0^inf f(x) x^{-is} dx/x``:

    W_p(f) = log p * sum_{m>=1} p^{-m/2} (f(p^m) + f(p^-m))
    W_R(f) = (log 4pi + gamma) f(1)
             + int_1^inf (f(x) + f(1/x) - 2 x^{-1/2} f(1)) x^{1/2}/(x - 1/x) dx/x

and satisfies  fhat(i/2) - sum_Z fhat(s) + fhat(-i/2) = sum_v W_v(f).
The Mellin-normalized variants (transform ``int f(x) x^{s-1} dx``, sharp
involution ``f#(x) = f(1/x)/x``) are exact changes of variables via
``F(x) = x^{-1/2} f(x)`` and are provided for completeness.

The prime-counting side implements Chebyshev's psi by sieve, the von Mangoldt
partial-sum formula psi(x) = x - sum_rho x^rho/rho - log 2pi - log(1-x^-2)/2
with symmetric truncation, and the Ei-corrected Riemann series for pi(x) with
Moebius inversion.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from mpmath import mp, mpf, mpc

from .numeric import DomainError, ei_complex, integrate
from .precision import GUARD_DIGITS, Precision, as_precision, round_to
from .zeros_io import ZeroList

PSI_SIEVE_BOUND = 10 ** 9


# ----------------------------------------------------------------------
# test functions on the multiplicative half-line
# ----------------------------------------------------------------------

@dataclass
class MultiplicativeTestFunction:
    """A test function on (0, inf) vanishing outside [support_lo, support_hi].

    ``breakpoints`` lists interior points where the function is not smooth
    (quadratures split there); ``smoothness`` is a free-form marker used by
    tail heuristics ('smooth' means Schwartz-like decay of the transform).
    """

    evaluator: object
    support_lo: mpf
    support_hi: mpf
    smoothness: str = "smooth"
    breakpoints: tuple = ()

    def __post_init__(self):
        if not (0 < self.support_lo <= self.support_hi):
            raise DomainError("support must satisfy 0 < lo <= hi < inf")

    def __call__(self, x):
        if x < self.support_lo or x > self.support_hi:
            return mpf(0)
        return self.evaluator(x)

    def hat(self, s, prec) -> mpc:
        """Multiplicative transform fhat(s) = int f(x) x^{-is} dx/x."""
        prec = as_precision(prec)
        with prec.work():
            lo, hi = mp.log(self.support_lo), mp.log(self.support_hi)
            brk = sorted(mp.log(b) for b in self.breakpoints if
                         self.support_lo < b < self.support_hi)
            s = mpc(s)
            val = integrate(lambda t: self.evaluator(mp.exp(t)) * mp.exp(-mpc(0, 1) * s * t),
                            lo, hi, prec, points=brk)
            return round_to(mpc(val), prec)


def gaussian_log_bump(a, radius, prec) -> MultiplicativeTestFunction:
    """g(x) = exp(-a (log x)^2) truncated to [e^-radius, e^radius]."""
    prec = as_precision(prec)
    with prec.work():
        a = mpf(a)
        r = mpf(radius)
        return MultiplicativeTestFunction(
            evaluator=lambda x: mp.exp(-a * mp.log(x) ** 2),
            support_lo=mp.exp(-r), support_hi=mp.exp(r))


# ----------------------------------------------------------------------
# sieves
# ----------------------------------------------------------------------

def primes_up_to(n: int) -> np.ndarray:
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, int(n ** 0.5) + 1):
        if sieve[p]:
            sieve[p * p::p] = False
    return np.nonzero(sieve)[0].astype(np.int64)


def moebius_up_to(n: int) -> np.ndarray:
    """mu(k) for k <= n by a linear sieve."""
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


@dataclass
class PrimePowerGrid:
    """All prime powers p^m <= bound, complete and duplicate-free."""

    bound: float
    pairs: list = field(default_factory=list)

    @classmethod
    def up_to(cls, bound) -> "PrimePowerGrid":
        bound_f = float(bound)
        pairs = []
        for p in primes_up_to(int(bound_f + 1e-9)):
            p = int(p)
            m, q = 1, p
            while q <= bound_f + 1e-9:
                pairs.append((p, m))
                m, q = m + 1, q * p
        pairs.sort(key=lambda pm: pm[0] ** pm[1])
        return cls(bound=bound_f, pairs=pairs)

    def values(self):
        return [p ** m for (p, m) in self.pairs]

    def __iter__(self):
        return iter(self.pairs)

    def __len__(self):
        return len(self.pairs)


# ----------------------------------------------------------------------
# Weil distributions
# ----------------------------------------------------------------------

def w_prime(f: MultiplicativeTestFunction, p: int, prec) -> mpf:
    """W_p(f) = log p * sum_m p^{-m/2} (f(p^m) + f(p^{-m})); finite sum since
    the support of f is bounded."""
    prec = as_precision(prec)
    with prec.work():
        total = mpf(0)
        m = 0
        hi = float(self_bound(f))
        while True:
            m += 1
            q = mpf(p) ** m
            if q > hi and 1 / q < float(f.support_lo):
                break
            total += p ** (-mpf(m) / 2) * (f(q) + f(1 / q))
        return round_to(mp.log(p) * total, prec)


def self_bound(f: MultiplicativeTestFunction) -> mpf:
    return max(f.support_hi, 1 / f.support_lo)


def w_arch(f: MultiplicativeTestFunction, prec, variant: str = "w_r") -> mpf:
    """Archimedean distribution W_R(f); ``variant='w_inf'`` returns -W_R(f).

    In logarithmic coordinates x = e^tau the integral part reads

        int_0^inf (f(e^tau) + f(e^-tau) - 2 e^{-tau/2} f(1)) e^{tau/2}/(2 sinh tau) dtau

    which is split at the declared breakpoints of f; outside the support only
    the f(1)-counterterm survives and integrates in closed form to
    f(1) * log tanh(tau_max / 2).
    """
    prec = as_precision(prec)
    with prec.work():
        f1 = f(mpf(1))
        tau_max = max(abs(mp.log(f.support_lo)), abs(mp.log(f.support_hi)))
        val = (mp.log(4 * mp.pi) + mp.euler) * f1
        if tau_max > 0:
            brk = sorted({abs(mp.log(b)) for b in f.breakpoints} - {mpf(0)})
            brk = [b for b in brk if b < tau_max]

            def integrand(tau):
                if tau == 0:
                    return mpf(0)  # integrand extends continuously; node never at 0
                return ((f(mp.exp(tau)) + f(mp.exp(-tau)) - 2 * mp.exp(-tau / 2) * f1)
                        * mp.exp(tau / 2) / (2 * mp.sinh(tau)))

            val += integrate(integrand, 0, tau_max, prec, points=brk)
        if f1 != 0:
            val += f1 * mp.log(mp.tanh(tau_max / 2)) if tau_max > 0 else mpf(0)
        sign = {"w_r": 1, "w_inf": -1}[variant]
        return round_to(sign * val, prec)


def mellin_w_prime(f, p: int, prec) -> mpf:
    """Mellin-normalized variant using the sharp involution f#(x)=f(1/x)/x."""
    prec = as_precision(prec)
    with prec.work():
        total = mpf(0)
        m = 0
        hi = float(self_bound(f))
        while True:
            m += 1
            q = mpf(p) ** m
            if q > hi:
                break
            total += f(q) + f(1 / q) / q
        return round_to(mp.log(p) * total, prec)


def to_multiplicative(f: MultiplicativeTestFunction) -> MultiplicativeTestFunction:
    """Exact change of variables F(x) = x^{1/2} f(x) from Mellin form."""
    return MultiplicativeTestFunction(
        evaluator=lambda x: mp.sqrt(x) * f.evaluator(x),
        support_lo=f.support_lo, support_hi=f.support_hi,
        smoothness=f.smoothness, breakpoints=f.breakpoints)


def to_mellin(f: MultiplicativeTestFunction) -> MultiplicativeTestFunction:
    """Exact change of variables F(x) = x^{-1/2} f(x) to Mellin form."""
    return MultiplicativeTestFunction(
        evaluator=lambda x: f.evaluator(x) / mp.sqrt(x),
        support_lo=f.support_lo, support_hi=f.support_hi,
        smoothness=f.smoothness, breakpoints=f.breakpoints)


# ----------------------------------------------------------------------
# autocorrelation and the explicit-formula residual
# ----------------------------------------------------------------------

def autocorrelate(g: MultiplicativeTestFunction, prec) -> MultiplicativeTestFunction:
    """f = g * g^* with (g * g^*)(v) = int g(u) g(uv) du/u for real g."""
    prec = as_precision(prec)
    lo = float(mp.log(g.support_lo))
    hi = float(mp.log(g.support_hi))

    def evaluator(v):
        with prec.work():
            t = mp.log(v)
            a = max(lo, lo - float(t))
            b = min(hi, hi - float(t))
            if a >= b:
                return mpf(0)
            return integrate(lambda s: g.evaluator(mp.exp(s)) * g.evaluator(mp.exp(s + t)),
                             a, b, prec)

    with prec.work():
        return MultiplicativeTestFunction(
            evaluator=evaluator,
            support_lo=g.support_lo / g.support_hi,
            support_hi=g.support_hi / g.support_lo,
            smoothness=g.smoothness,
            breakpoints=(mpf(1),))


@dataclass
class ExplicitCheck:
    residual: mpf
    zero_side: mpf
    place_side: mpf
    zeros_used: int
    zero_tail_estimate: mpf


def explicit_sum_check(g: MultiplicativeTestFunction, zeros: ZeroList,
                       prec) -> ExplicitCheck:
    """Residual |(fhat(i/2) + fhat(-i/2) - sum_Z fhat) - sum_v W_v(f)| for
    f = g * g^*, the zero sum truncated symmetrically at the supplied list."""
    prec = as_precision(prec)
    if len(zeros) == 0 and g(mpf(1)) != 0:
        raise DomainError("empty zero list")
    with prec.work():
        f = autocorrelate(g, prec)
        # transform of f at real s is |ghat(s)|^2; at +-i/2 a product of the
        # two real exponential moments of g
        gp = g.hat(mpc(0, '0.5'), prec)
        gm = g.hat(mpc(0, '-0.5'), prec)
        pole = 2 * (gp * gm).real
        zero_sum = mpf(0)
        for gamma in zeros:
            zero_sum += 2 * abs(g.hat(mpf(gamma), prec)) ** 2
        zero_side = pole - zero_sum
        grid = PrimePowerGrid.up_to(self_bound(f))
        place_side = w_arch(f, prec)
        for p in sorted({pp for (pp, _) in grid}):
            place_side += w_prime(f, p, prec)
        # tail of the zero sum beyond the list, from the transform's decay
        if len(zeros):
            gmax = zeros[-1]
            dens = mp.log(gmax / (2 * mp.pi)) / (2 * mp.pi)
            tail = 2 * abs(g.hat(mpf(gmax), prec)) ** 2 * dens * gmax
        else:
            tail = mpf("inf")
        return ExplicitCheck(
            residual=round_to(abs(zero_side - place_side), prec),
            zero_side=round_to(zero_side, prec),
            place_side=round_to(place_side, prec),
            zeros_used=len(zeros),
            zero_tail_estimate=round_to(tail, prec),
        )


# ----------------------------------------------------------------------
# prime counting
# ----------------------------------------------------------------------

def psi_direct(x, prec=Precision(30)) -> mpf:
    """Chebyshev psi(x) = sum_{p^k <= x} log p by sieve."""
    prec = as_precision(prec)
    xf = float(x)
    if xf < 1:
        raise DomainError("psi is defined for x >= 1")
    if xf > PSI_SIEVE_BOUND:
        raise DomainError("sieve bound is %d" % PSI_SIEVE_BOUND)
    with prec.work():
        total = mpf(0)
        for p in primes_up_to(int(xf)):
            p = int(p)
            logp = mp.log(p)
            q = p
            while q <= xf:
                total += logp
                q *= p
        return round_to(total, prec)


@dataclass
class PsiEstimate:
    value: mpf
    zeros_used: int
    truncation_height: mpf
    error_scale: mpf  # (log T)^2 / T, the expected decay scale


def psi_vonmangoldt(x, zeros: ZeroList, prec=Precision(30)) -> PsiEstimate:
    """Partial explicit-formula value of psi at non-integer x > 1.

    Pairs rho = 1/2 +- i gamma are summed symmetrically over the supplied
    list (conditional convergence demands the symmetric truncation).
    """
    prec = as_precision(prec)
    with prec.work():
        x = mpf(x)
        if x <= 1:
            raise DomainError("need x > 1")
        if x == mp.floor(x):
            raise DomainError("x must be non-integer (jump ambiguity)")
        val = x - mp.log(2 * mp.pi) - mp.log(1 - x ** -2) / 2
        rx = mp.sqrt(x)
        lx = mp.log(x)
        for gamma in zeros:
            gamma = mpf(gamma)
            d = mpf("0.25") + gamma * gamma
            val -= 2 * rx * (mp.cos(gamma * lx) / 2 + gamma * mp.sin(gamma * lx)) / d
        T = mpf(zeros[-1]) if len(zeros) else mpf(0)
        scale = mp.log(T) ** 2 / T if T > 0 else mpf("inf")
        return PsiEstimate(value=round_to(val, prec), zeros_used=len(zeros),
                           truncation_height=round_to(T, prec),
                           error_scale=round_to(scale, prec))


def _pi_exact(x: float) -> int:
    return int(np.searchsorted(primes_up_to(int(x)), x, side="right"))


@dataclass
class PiEstimate:
    x: float
    estimate: mpf
    direct: int
    abs_error: mpf
    zeros_used: int

    def report(self) -> dict:
        return {
            "x": self.x,
            "estimate": str(self.estimate),
            "direct": self.direct,
            "abs_error": str(self.abs_error),
            "zeros_used": self.zeros_used,
        }


def riemann_f(x, zeros: ZeroList, prec) -> mpf:
    """Riemann's counting series
    Li(x) - sum_{Im rho > 0} (Ei(rho log x) + Ei(conj(rho) log x))
    + int_x^inf dt/((t^2-1) t log t) - log 2, with the Ei branch cut on
    (-inf, 0] so each term is single-valued."""
    prec = as_precision(prec)
    with prec.work():
        x = mpf(x)
        if x < 2:
            raise DomainError("need x >= 2")
        lx = mp.log(x)
        val = ei_complex(lx, prec).real - mp.log(2)
        val += integrate(lambda v: 1 / ((mp.exp(2 * v) - 1) * v), lx, mp.inf, prec)
        for gamma in zeros:
            rho = mpc(mpf("0.5"), mpf(gamma))
            val -= 2 * ei_complex(rho * lx, prec).real
        return round_to(val, prec)


def pi_riemann(x, zeros: ZeroList, prec) -> PiEstimate:
    """Zero-corrected estimate of pi(x) via Moebius inversion of riemann_f,
    together with the exact sieve count."""
    prec = as_precision(prec)
    xf = float(x)
    if xf < 2:
        raise DomainError("need x >= 2")
    with prec.work():
        x = mpf(x)
        nmax = int(mp.floor(mp.log(x) / mp.log(2)))
        mu = moebius_up_to(nmax)
        est = mpf(0)
        for n in range(1, nmax + 1):
            if mu[n]:
                est += mpf(int(mu[n])) / n * riemann_f(x ** (mpf(1) / n), zeros, prec)
        direct = _pi_exact(xf)
        return PiEstimate(x=xf, estimate=round_to(est, prec), direct=direct,
                          abs_error=round_to(abs(est - direct), prec),
                          zeros_used=len(zeros))

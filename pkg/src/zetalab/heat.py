"""Heat-trace asymptotics for the spectrum of zero ordinates (RH-conditional).

For the operator whose spectrum consists of the imaginary parts of the
nontrivial zeros (both signs, so the direct trace is 2 sum_{gamma>0}
exp(-t gamma^2); the factor is validated against the expansion's leading
coefficient), the small-t expansion reads

    log(1/t)/(4 sqrt(pi t)) - (log 4pi + gamma/2)/(2 sqrt(pi t)) + 2 e^{t/4}
        + sum_n a_n t^{n/2}

with a_0 = -1/4 and, for k > 0,

    a_{2k-1} = Gamma(k) (2^{2k-1} - 1) B_{2k} / (2 sqrt(pi) (2k)!)
    a_{2k}   = -(1/4) Gamma(k + 1/2) E(2k) / (sqrt(pi) (2k)!).

The Euler numbers E(2k)/(2k)! grow like (2/pi)^{2k} times 4/pi in absolute
value, so the series is divergent and must be truncated at its smallest term;
everything beyond all orders (numerically the prime-power contributions of
the explicit formula, of size exp(-(log 2)^2/(4t))) is invisible to it.
"""

from __future__ import annotations

from dataclasses import dataclass

from mpmath import mp, mpf

from .numeric import DomainError, bernoulli_number, euler_number
from .precision import GUARD_DIGITS, Precision, as_precision, round_to
from .zeros_io import ZeroList

MAX_COEFFICIENT_INDEX = 40


@dataclass
class HeatCoefficients:
    kmax: int
    a: list
    digits: int

    def __getitem__(self, n: int):
        return self.a[n]


def heat_coefficient(n: int, prec) -> mpf:
    prec = as_precision(prec)
    if n < 0 or n > 2 * MAX_COEFFICIENT_INDEX:
        raise DomainError("coefficient index out of range")
    with prec.work():
        if n == 0:
            return round_to(-mpf(1) / 4, prec)
        if n % 2:
            k = (n + 1) // 2
            b = bernoulli_number(2 * k)
            val = (mp.gamma(k) * (2 ** (2 * k - 1) - 1)
                   * mpf(b.numerator) / b.denominator
                   / (2 * mp.sqrt(mp.pi) * mp.factorial(2 * k)))
        else:
            k = n // 2
            val = (-mpf(1) / 4 * mp.gamma(k + mpf(1) / 2) * euler_number(2 * k)
                   / (mp.sqrt(mp.pi) * mp.factorial(2 * k)))
        return round_to(val, prec)


def heat_coefficients(kmax: int, prec) -> HeatCoefficients:
    """Exact-formula coefficients a_0..a_kmax (kmax <= 40)."""
    prec = as_precision(prec)
    if kmax > MAX_COEFFICIENT_INDEX:
        raise DomainError("kmax capped at %d" % MAX_COEFFICIENT_INDEX)
    return HeatCoefficients(kmax=kmax,
                            a=[heat_coefficient(n, prec) for n in range(kmax + 1)],
                            digits=prec.digits)


@dataclass
class DirectTrace:
    value: mpf        # partial sum plus the smoothed-counting tail estimate
    partial: mpf
    tail_bound: mpf
    zeros_used: int


def heat_trace_direct(t, zeros: ZeroList, prec=Precision(30),
                      tolerance=None) -> DirectTrace:
    """2 sum_{gamma in list} exp(-t gamma^2) plus the smoothed-counting tail
    estimate 2 int_T^inf exp(-t g^2) log(g/2pi)/(2pi) dg; errors out if that
    tail exceeds the requested tolerance."""
    prec = as_precision(prec)
    if len(zeros) == 0:
        raise DomainError("empty zero list")
    with prec.work():
        t = mpf(t)
        if t <= 0:
            raise DomainError("need t > 0")
        partial = 2 * mp.fsum(mp.exp(-t * mpf(g) ** 2) for g in zeros)
        T = mpf(zeros[-1])
        if t * T * T > (prec.digits + 20) * mp.log(10):
            tail = mpf(0)  # below the working precision's resolution
        else:
            tail = 2 * mp.quad(lambda g: mp.exp(-t * g * g)
                               * mp.log(g / (2 * mp.pi)) / (2 * mp.pi),
                               [T, mp.inf])
        if tolerance is not None and tail > mpf(tolerance):
            raise DomainError("zero list too short: tail bound %s > tolerance %s"
                              % (mp.nstr(tail, 4), mp.nstr(mpf(tolerance), 4)))
        return DirectTrace(value=round_to(partial + tail, prec),
                           partial=round_to(partial, prec),
                           tail_bound=round_to(tail, prec),
                           zeros_used=len(zeros))


@dataclass
class AsymptoticTrace:
    value: mpf
    kmax: int
    optimal_k: int
    smallest_term: mpf
    terms: list


def heat_trace_asymptotic(t, kmax: int, prec=Precision(30)) -> AsymptoticTrace:
    """Truncated expansion at order kmax (series part), with the index of the
    smallest-magnitude term (the optimal truncation of the divergent tail)."""
    prec = as_precision(prec)
    if not (0 <= kmax <= 2 * MAX_COEFFICIENT_INDEX):
        raise DomainError("kmax out of range")
    with prec.work():
        t = mpf(t)
        if not (0 < t <= 1):
            raise DomainError("the expansion is for 0 < t <= 1")
        rt = mp.sqrt(t)
        val = (mp.log(1 / t) / (4 * mp.sqrt(mp.pi) * rt)
               - (mp.log(4 * mp.pi) + mp.euler / 2) / (2 * mp.sqrt(mp.pi) * rt)
               + 2 * mp.exp(t / 4))
        terms = []
        for n in range(kmax + 1):
            terms.append(heat_coefficient(n, prec) * t ** (mpf(n) / 2))
        val += mp.fsum(terms)
        nonzero = [(abs(x), n) for n, x in enumerate(terms) if n >= 1 and x != 0]
        smallest, opt = min(nonzero) if nonzero else (mpf(0), 0)
        return AsymptoticTrace(value=round_to(val, prec), kmax=kmax,
                               optimal_k=opt,
                               smallest_term=round_to(smallest, prec),
                               terms=[round_to(x, prec) for x in terms])


def optimal_truncation_order(t, prec=Precision(30), scan_to: int = 2 * MAX_COEFFICIENT_INDEX) -> int:
    """Index of the smallest |a_n t^{n/2}| over 1 <= n <= scan_to."""
    prec = as_precision(prec)
    with prec.work():
        t = mpf(t)
        best = (mpf("inf"), 0)
        for n in range(1, scan_to + 1):
            val = abs(heat_coefficient(n, prec)) * t ** (mpf(n) / 2)
            if val != 0 and val < best[0]:
                best = (val, n)
        return best[1]

"""Precision bookkeeping for the whole package.

Every public operation in this package is a deterministic function of its
inputs and a ``Precision``.  Internally we compute with mpmath under a guard
of extra decimal digits and round results back to the requested precision, so
that two calls with identical arguments produce bit-identical mpf values
regardless of what precision the caller's context happens to be in.
"""

from __future__ import annotations

from dataclasses import dataclass

from mpmath import mp, mpf, mpc

# extra working digits used inside operations before rounding back
GUARD_DIGITS = 15

MIN_DIGITS = 30


class PrecisionError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Precision:
    """Decimal working precision, at least :data:`MIN_DIGITS` digits."""

    digits: int

    def __post_init__(self):
        if not isinstance(self.digits, int) or self.digits < MIN_DIGITS:
            raise PrecisionError(
                "precision must be an integer >= %d digits, got %r"
                % (MIN_DIGITS, self.digits)
            )

    @property
    def eps(self) -> mpf:
        """10**(-digits) at the working precision."""
        with mp.workdps(self.digits + GUARD_DIGITS):
            return mpf(10) ** (-self.digits)

    def tol(self, drop: int) -> mpf:
        """Tolerance 10**-(digits - drop), the spec's usual error scale."""
        with mp.workdps(self.digits + GUARD_DIGITS):
            return mpf(10) ** (-(self.digits - drop))

    def work(self, extra: int = GUARD_DIGITS):
        """Context manager entering the guarded working precision."""
        return mp.workdps(self.digits + extra)


def as_precision(prec) -> Precision:
    if isinstance(prec, Precision):
        return prec
    return Precision(int(prec))


def round_to(x, prec: Precision):
    """Round an mpf/mpc (or list thereof) to ``prec`` digits exactly."""
    if isinstance(x, (list, tuple)):
        return type(x)(round_to(v, prec) for v in x)
    with mp.workdps(prec.digits):
        if isinstance(x, mpc) or (hasattr(x, "imag") and getattr(x, "imag", 0) != 0):
            return mpc(x.real, x.imag) + mpc(0)
        return mpf(x) + mpf(0)


def mpf_to_text(x, prec: Precision) -> str:
    """Decimal string that round-trips exactly through :func:`text_to_mpf`.

    mpf values at ``prec.digits`` working precision carry about
    3.33*digits bits; digits+GUARD decimal digits are enough for the decimal
    string to identify the binary value uniquely.
    """
    with mp.workdps(prec.digits + GUARD_DIGITS):
        return mp.nstr(mpf(x), prec.digits + 10, strip_zeros=True)


def text_to_mpf(s: str, prec: Precision):
    with mp.workdps(prec.digits):
        return mpf(s)

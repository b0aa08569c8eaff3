"""Ordered lists of zero ordinates and the repo-wide text format.

The shared on-disk format is one decimal ordinate per line, strictly
ascending, with optional '#'-prefixed comment lines and no locale separators.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from mpmath import mp, mpf

from .precision import Precision, as_precision, mpf_to_text

SOURCES = ("xi-reference", "weil-approx", "imported")


class ZeroListError(ValueError):
    pass


@dataclass
class ZeroList:
    """Ascending positive zero ordinates tagged with precision and origin."""

    ordinates: list = field(default_factory=list)
    digits: int = 30
    source: str = "imported"

    def __post_init__(self):
        if self.source not in SOURCES:
            raise ZeroListError("unknown source %r (expected one of %s)"
                                % (self.source, ", ".join(SOURCES)))
        prev = None
        for i, g in enumerate(self.ordinates):
            if g <= 0:
                raise ZeroListError("ordinate #%d is not positive" % (i + 1))
            if prev is not None and g <= prev:
                raise ZeroListError("ordinates not strictly ascending at #%d" % (i + 1))
            prev = g

    def __len__(self):
        return len(self.ordinates)

    def __getitem__(self, i):
        return self.ordinates[i]

    def __iter__(self):
        return iter(self.ordinates)

    def head(self, count: int) -> "ZeroList":
        if count > len(self.ordinates):
            raise ZeroListError("requested %d ordinates, have %d"
                                % (count, len(self.ordinates)))
        return ZeroList(self.ordinates[:count], self.digits, self.source)


def write_zero_list(zeros: ZeroList, path, comment: str | None = None) -> None:
    prec = as_precision(zeros.digits)
    lines = []
    if comment:
        for c in comment.splitlines():
            lines.append("# " + c)
    lines.append("# digits=%d source=%s" % (zeros.digits, zeros.source))
    for g in zeros.ordinates:
        lines.append(mpf_to_text(g, prec))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_zero_list(path, digits: int = 30, source: str = "imported") -> ZeroList:
    """Parse the text format; reject malformed, descending or duplicate data."""
    prec = as_precision(digits)
    ordinates = []
    prev = None
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                with mp.workdps(prec.digits + 5):
                    val = mpf(line)
            except Exception:
                raise ZeroListError("%s:%d: cannot parse %r as a decimal ordinate"
                                    % (path, lineno, line))
            if val <= 0:
                raise ZeroListError("%s:%d: ordinate must be positive" % (path, lineno))
            if prev is not None and val <= prev:
                raise ZeroListError("%s:%d: ordinate %s not greater than previous %s"
                                    % (path, lineno, line, mp.nstr(prev, 10)))
            ordinates.append(val)
            prev = val
    return ZeroList(ordinates, digits=digits, source=source)

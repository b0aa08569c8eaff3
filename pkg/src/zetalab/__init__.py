"""zetalab: a high-precision laboratory around the zeros of the Riemann zeta
function.

The package recovers zeta zeros two independent ways — as real zeros of the
Xi function evaluated through its theta-series kernel, and as zeros of the
Fourier transform of the minimal eigenvector of the prime-truncated Weil
quadratic form — and surrounds the comparison with the machinery it rests
on: explicit formulas and prime counting, prolate spheroidal spectra,
heat-trace asymptotics, and elementary arithmetic criteria.
"""

__version__ = "0.1.0"

from .precision import Precision
from .zeros_io import ZeroList, read_zero_list, write_zero_list

__all__ = ["Precision", "ZeroList", "read_zero_list", "write_zero_list",
           "__version__"]

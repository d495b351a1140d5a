"""Run-wide numeric precision.

Binary64 arithmetic uses Python ``complex``.  Extended precision uses gmpy2
``mpc`` values; every computation that touches them has to run inside
:meth:`Precision.scope` so that gmpy2 rounds at the configured bit count.
"""
from __future__ import annotations

import cmath
import contextlib
import math
import os
from dataclasses import dataclass
from typing import Any, Optional

import gmpy2

PRECISION_ENV = "CASCADE_PRECISION"


@dataclass(frozen=True)
class Precision:
    """Arithmetic used for all dynamical quantities.

    ``digits=None`` selects binary64; otherwise ``digits`` significant
    decimal digits (plus guard bits) in gmpy2.
    """

    digits: Optional[int] = None

    def __post_init__(self):
        if self.digits is not None and self.digits < 16:
            raise ValueError("extended precision needs at least 16 digits")

    @property
    def extended(self) -> bool:
        return self.digits is not None

    @property
    def bits(self) -> int:
        if self.digits is None:
            return 53
        return int(math.ceil(self.digits * math.log2(10))) + 8

    @property
    def eps(self) -> float:
        return 2.0 ** (1 - self.bits)

    @property
    def default_tol(self) -> float:
        return 1e-12 if self.digits is None else self.eps * 1e3

    def scope(self):
        if self.digits is None:
            return contextlib.nullcontext()
        return gmpy2.context(precision=self.bits)

    # Constructors and elementary functions.  Call inside ``scope()``.
    def cnum(self, x: Any):
        if self.digits is None:
            return complex(x)
        if isinstance(x, str):
            return gmpy2.mpc(x)
        if isinstance(x, gmpy2.mpc):
            return +x
        if isinstance(x, gmpy2.mpfr):
            return gmpy2.mpc(x, 0)
        return gmpy2.mpc(complex(x))

    def real(self, x: Any):
        if self.digits is None:
            return float(x)
        return gmpy2.mpfr(x)

    def from_parts(self, re: Any, im: Any):
        if self.digits is None:
            return complex(float(re), float(im))
        return gmpy2.mpc(gmpy2.mpfr(re), gmpy2.mpfr(im))

    def pi(self):
        return math.pi if self.digits is None else gmpy2.const_pi()

    def exp(self, z):
        return cmath.exp(z) if self.digits is None else gmpy2.exp(z)

    def log(self, z):
        return cmath.log(z) if self.digits is None else gmpy2.log(z)

    def sqrt(self, z):
        return cmath.sqrt(z) if self.digits is None else gmpy2.sqrt(z)

    def expi(self, p: int, q: int):
        """exp(2*pi*i*p/q) evaluated at this precision."""
        if self.digits is None:
            return cmath.exp(2j * math.pi * p / q)
        angle = 2 * gmpy2.const_pi() * gmpy2.mpfr(p) / gmpy2.mpfr(q)
        return gmpy2.mpc(gmpy2.cos(angle), gmpy2.sin(angle))

    def expi_real(self, t: float):
        if self.digits is None:
            return cmath.exp(2j * math.pi * t)
        angle = 2 * gmpy2.const_pi() * gmpy2.mpfr(t)
        return gmpy2.mpc(gmpy2.cos(angle), gmpy2.sin(angle))

    def label(self) -> str:
        return "binary64" if self.digits is None else f"{self.digits} digits"


BINARY64 = Precision()


def precision_from_env(default: Precision = BINARY64) -> Precision:
    raw = os.environ.get(PRECISION_ENV)
    if raw is None or raw.strip() == "":
        return default
    digits = int(raw)
    if digits <= 16:
        return BINARY64
    return Precision(digits)


def to_complex(x: Any) -> complex:
    """Lossy conversion to binary64 for reporting and plotting."""
    return complex(x)


def to_parts(x: Any) -> tuple[str, str]:
    """Exact decimal strings for the real and imaginary parts."""
    if isinstance(x, gmpy2.mpc):
        return str(x.real), str(x.imag)
    x = complex(x)
    return repr(x.real), repr(x.imag)

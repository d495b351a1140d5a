"""Rotation numbers p/q in (-1/2, 1/2], including denominators too large to store."""
from __future__ import annotations

import contextlib
import math
import re
import sys
from dataclasses import dataclass
from typing import Union

import mpmath

# Shared read-only context for log-space arithmetic on huge integers.
MP = mpmath.MPContext()
MP.dps = 50

_SMALL_BITS = 4096


@contextlib.contextmanager
def _unlimited_digits():
    # exponents like 2^65536 exceed the default int <-> str digit limit
    get = getattr(sys, "get_int_max_str_digits", None)
    if get is None:
        yield
        return
    old = get()
    sys.set_int_max_str_digits(0)
    try:
        yield
    finally:
        sys.set_int_max_str_digits(old)


def int_str(n: int) -> str:
    with _unlimited_digits():
        return str(n)


def str_int(s: str) -> int:
    with _unlimited_digits():
        return int(s)


@dataclass(frozen=True)
class IntPower:
    """The integer base**exponent, kept symbolic when it is too large to build."""

    base: int
    exponent: int

    def __post_init__(self):
        if self.base < 2 or self.exponent < 0:
            raise ValueError("IntPower needs base >= 2 and exponent >= 0")

    @property
    def log2(self):
        """log2 of the value as an mpf (the exponent itself may be astronomically large)."""
        if self.base == 2:
            return MP.mpf(self.exponent)
        return MP.mpf(self.exponent) * MP.log(self.base, 2)

    def mpf(self):
        if self.base == 2:
            return MP.ldexp(MP.mpf(1), self.exponent)
        x = MP.mpf(self.exponent) * MP.log(self.base, 2)
        k = int(MP.floor(x))
        return MP.ldexp(MP.power(2, x - k), k)

    def __int__(self):
        if self.log2 > _SMALL_BITS:
            raise OverflowError(f"{self} is too large for an int")
        return self.base ** self.exponent

    def __str__(self):
        return f"{self.base}^{int_str(self.exponent)}"

    def __repr__(self):
        return f"IntPower({self.base}, {int_str(self.exponent)})"


Denominator = Union[int, IntPower]


def make_int(value: Union[int, str, IntPower]) -> Denominator:
    """Parse an integer given as int, decimal string, or 'b^e' string.

    Powers small enough to hold as a Python int are expanded.
    """
    if isinstance(value, IntPower):
        return int(value) if value.log2 <= _SMALL_BITS else value
    if isinstance(value, bool):
        raise TypeError("bool is not an integer here")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        s = value.strip()
        m = re.fullmatch(r"(\d+)\s*\^\s*(\d+)", s)
        if m:
            return make_int(IntPower(str_int(m.group(1)), str_int(m.group(2))))
        if re.fullmatch(r"[+-]?\d+", s):
            return str_int(s)
    raise ValueError(f"not an integer: {value!r}")


def int_to_json(value: Denominator):
    """Large integers go to JSON as decimal strings."""
    if isinstance(value, IntPower):
        return str(value)
    if abs(value) < 2 ** 53:
        return value
    return int_str(value)


def as_mpf(value: Denominator):
    if isinstance(value, IntPower):
        return value.mpf()
    return MP.mpf(value)


def log_of(value: Denominator):
    """Natural log of a positive integer as an mpmath mpf."""
    if isinstance(value, IntPower):
        return MP.mpf(value.exponent) * MP.log(value.base)
    return MP.log(value)


@dataclass(frozen=True)
class RotationNumber:
    """A reduced fraction p/q with value in (-1/2, 1/2]."""

    p: int
    q: Denominator

    def __post_init__(self):
        q = make_int(self.q)
        object.__setattr__(self, "q", q)
        if not isinstance(self.p, int) or isinstance(self.p, bool):
            raise TypeError("p must be an int")
        if isinstance(q, IntPower):
            if math.gcd(abs(self.p), q.base) != 1:
                raise ValueError(f"{self.p}/{q} is not reduced")
            if self.p != 0 and abs(self.p).bit_length() + 2 >= q.log2:
                raise ValueError(f"{self.p}/{q} is outside (-1/2, 1/2]")
            return
        if q < 1:
            raise ValueError("q must be positive")
        if math.gcd(abs(self.p), q) != 1:
            raise ValueError(f"{self.p}/{q} is not reduced")
        if not (-q < 2 * self.p <= q):
            raise ValueError(f"{self.p}/{q} is outside (-1/2, 1/2]")

    @classmethod
    def parse(cls, data) -> "RotationNumber":
        if isinstance(data, RotationNumber):
            return data
        if isinstance(data, dict):
            return cls(int(make_int(data["p"])), make_int(data["q"]))
        if isinstance(data, str) and "/" in data:
            p, q = data.split("/", 1)
            return cls(int(p), make_int(q))
        raise ValueError(f"cannot read a rotation number from {data!r}")

    def to_json(self) -> dict:
        return {"p": int_to_json(self.p), "q": int_to_json(self.q)}

    @property
    def is_zero(self) -> bool:
        return self.p == 0

    @property
    def q_int(self) -> int:
        return int(self.q)

    @property
    def value(self) -> float:
        if isinstance(self.q, IntPower):
            return float(MP.mpf(self.p) / self.q.mpf())
        return self.p / self.q

    def log_abs(self):
        """log|p/q| as mpf; -inf for t = 0."""
        if self.p == 0:
            return MP.ninf
        return MP.log(abs(self.p)) - log_of(self.q)

    def __str__(self):
        return f"{self.p}/{self.q}"


def rotation(p: int, q) -> RotationNumber:
    return RotationNumber(p, q)

"""Arithmetic in GF(2^k) for 1 <= k <= 16.

Elements are plain ints in ``[0, 2^k)``.  Addition is xor, multiplication is
carry-less multiplication reduced modulo a fixed primitive polynomial, so every
code built on top of this module is bit-reproducible.

Reduction polynomials (bit ``i`` set means ``x^i`` is present):

====  ==========================================  =========
k     polynomial                                  int
====  ==========================================  =========
1     x + 1                                       0x3
2     x^2 + x + 1                                 0x7
3     x^3 + x + 1                                 0xB
4     x^4 + x + 1                                 0x13
5     x^5 + x^2 + 1                               0x25
6     x^6 + x^4 + x^3 + x + 1                     0x5B
7     x^7 + x + 1                                 0x83
8     x^8 + x^4 + x^3 + x^2 + 1                   0x11D
9     x^9 + x^4 + 1                               0x211
10    x^10 + x^6 + x^5 + x^3 + x^2 + x + 1        0x46F
11    x^11 + x^2 + 1                              0x805
12    x^12 + x^7 + x^6 + x^5 + x^3 + x + 1        0x10EB
13    x^13 + x^4 + x^3 + x + 1                    0x201B
14    x^14 + x^7 + x^5 + x^3 + 1                  0x40A9
15    x^15 + x^5 + x^4 + x^2 + 1                  0x8035
16    x^16 + x^5 + x^3 + x^2 + 1                  0x1002D
====  ==========================================  =========

All of them are primitive, so ``x`` generates the multiplicative group and
log/antilog tables can be used for fast multiplication.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

MAX_K = 16

POLYNOMIALS = {
    1: 0x3,
    2: 0x7,
    3: 0xB,
    4: 0x13,
    5: 0x25,
    6: 0x5B,
    7: 0x83,
    8: 0x11D,
    9: 0x211,
    10: 0x46F,
    11: 0x805,
    12: 0x10EB,
    13: 0x201B,
    14: 0x40A9,
    15: 0x8035,
    16: 0x1002D,
}


class FieldError(ValueError):
    pass


def clmul_mod(x: int, y: int, k: int, poly: int) -> int:
    """Shift-and-add product of ``x`` and ``y`` reduced modulo ``poly``."""
    result = 0
    top = 1 << k
    while y:
        if y & 1:
            result ^= x
        y >>= 1
        x <<= 1
        if x & top:
            x ^= poly
    return result


@lru_cache(maxsize=None)
def _tables(k: int, poly: int) -> tuple[np.ndarray, np.ndarray]:
    order = 1 << k
    exp = np.zeros(2 * order, dtype=np.int64)
    log = np.zeros(order, dtype=np.int64)
    x = 1
    for i in range(order - 1):
        exp[i] = x
        log[x] = i
        x = clmul_mod(x, 2, k, poly) if k > 1 else x
    if x != 1:
        raise FieldError(f"polynomial {poly:#x} is not primitive for k={k}")
    # Doubled so exp[log a + log b] needs no modulo.
    exp[order - 1 : 2 * (order - 1)] = exp[: order - 1]
    return exp, log


@dataclass(frozen=True)
class GF2k:
    """The field GF(2^k) with a fixed reduction polynomial."""

    k: int
    poly: int = field(default=0)

    def __post_init__(self):
        if not isinstance(self.k, int) or not 1 <= self.k <= MAX_K:
            raise FieldError(f"k must be an integer in [1, {MAX_K}], got {self.k!r}")
        if self.poly == 0:
            object.__setattr__(self, "poly", POLYNOMIALS[self.k])
        elif self.poly != POLYNOMIALS[self.k]:
            raise FieldError(
                f"unsupported polynomial {self.poly:#x} for k={self.k}; "
                f"expected {POLYNOMIALS[self.k]:#x}"
            )

    @property
    def order(self) -> int:
        return 1 << self.k

    @property
    def _exp(self) -> np.ndarray:
        return _tables(self.k, self.poly)[0]

    @property
    def _log(self) -> np.ndarray:
        return _tables(self.k, self.poly)[1]

    def _check(self, x: int) -> int:
        if not 0 <= x < self.order:
            raise FieldError(f"{x} is not an element of GF(2^{self.k})")
        return x

    def add(self, x: int, y: int) -> int:
        return self._check(x) ^ self._check(y)

    sub = add

    def mul(self, x: int, y: int) -> int:
        if self._check(x) == 0 or self._check(y) == 0:
            return 0
        return int(self._exp[self._log[x] + self._log[y]])

    def inv(self, x: int) -> int:
        if self._check(x) == 0:
            raise ZeroDivisionError("0 has no inverse")
        return int(self._exp[(self.order - 1 - self._log[x]) % (self.order - 1)])

    def div(self, x: int, y: int) -> int:
        return self.mul(x, self.inv(y))

    def scale_table(self, c: int) -> np.ndarray:
        """Array ``t`` with ``t[x] == c * x`` for every element ``x``."""
        self._check(c)
        if c == 0:
            return np.zeros(self.order, dtype=np.int64)
        xs = np.arange(self.order)
        out = self._exp[(self._log[xs] + self._log[c])]
        out[0] = 0
        return out

    def element(self, value: int) -> "FieldElement":
        return FieldElement(self._check(value), self)

    def to_json(self) -> dict:
        return {"k": self.k, "poly": self.poly}

    @classmethod
    def from_json(cls, data: dict) -> "GF2k":
        try:
            return cls(int(data["k"]), int(data["poly"]))
        except (KeyError, TypeError) as exc:
            raise FieldError(f"malformed field spec {data!r}") from exc


@dataclass(frozen=True)
class FieldElement:
    value: int
    field: GF2k

    def _same(self, other: "FieldElement") -> None:
        if not isinstance(other, FieldElement):
            raise TypeError(f"cannot combine FieldElement with {type(other).__name__}")
        if other.field != self.field:
            raise FieldError("elements belong to different fields")

    def __add__(self, other):
        self._same(other)
        return FieldElement(self.value ^ other.value, self.field)

    __sub__ = __add__

    def __mul__(self, other):
        self._same(other)
        return FieldElement(self.field.mul(self.value, other.value), self.field)

    def __truediv__(self, other):
        self._same(other)
        return FieldElement(self.field.div(self.value, other.value), self.field)

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field.inv(self.value), self.field)

    def __int__(self):
        return self.value


def add(x: FieldElement, y: FieldElement) -> FieldElement:
    return x + y


def mul(x: FieldElement, y: FieldElement) -> FieldElement:
    return x * y


def inv(x: FieldElement) -> FieldElement:
    return x.inverse()


def choose_field(num_colors: int) -> GF2k:
    """Smallest GF(2^k) with ``2^k > num_colors``."""
    if num_colors < 1:
        raise FieldError("need at least one color")
    k = max(1, num_colors.bit_length())
    if k > MAX_K:
        raise FieldError(f"{num_colors} colors need more than 2^{MAX_K} field elements")
    return GF2k(k)

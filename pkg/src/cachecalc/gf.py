"""Prime-field arithmetic F_p.

Scalars are :class:`FieldElement` values; bulk arithmetic in :mod:`cachecalc.linalg`
works on int64 numpy arrays reduced mod p, which is why the modulus is capped
below 2**31 (products of two residues must fit in a signed 64-bit integer).

The modulus is a per-run setting: read once from ``CACHECALC_PRIME`` if set,
otherwise :data:`DEFAULT_PRIME`.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

DEFAULT_PRIME = 2_147_483_647  # 2**31 - 1
MAX_PRIME = 2**31


class ConfigurationError(ValueError):
    """Invalid field modulus or mixed moduli."""


def _is_prime(n: int) -> bool:
    from sympy import isprime

    return bool(isprime(n))


def check_prime(p: int) -> int:
    p = int(p)
    if p < 2 or not _is_prime(p):
        raise ConfigurationError(f"field modulus {p} is not prime")
    if p >= MAX_PRIME:
        raise ConfigurationError(f"field modulus {p} must be below 2**31 for int64 arithmetic")
    return p


_prime: int | None = None


def get_prime() -> int:
    global _prime
    if _prime is None:
        env = os.environ.get("CACHECALC_PRIME")
        _prime = check_prime(int(env)) if env else DEFAULT_PRIME
    return _prime


def set_prime(p: int) -> int:
    """Fix the run-wide modulus. Returns the previous value."""
    global _prime
    old = get_prime()
    _prime = check_prime(p)
    return old


@dataclass(frozen=True, slots=True)
class FieldElement:
    value: int
    p: int

    def __post_init__(self):
        if not 0 <= self.value < self.p:
            object.__setattr__(self, "value", self.value % self.p)

    def _check(self, other: FieldElement) -> None:
        if self.p != other.p:
            raise ConfigurationError(f"modulus mismatch: {self.p} vs {other.p}")

    def __add__(self, other):
        return add(self, _lift(other, self.p))

    __radd__ = __add__

    def __sub__(self, other):
        return add(self, neg(_lift(other, self.p)))

    def __rsub__(self, other):
        return add(_lift(other, self.p), neg(self))

    def __mul__(self, other):
        return mul(self, _lift(other, self.p))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return mul(self, inv(_lift(other, self.p)))

    def __neg__(self):
        return neg(self)

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"F{self.p}({self.value})"


def _lift(x, p: int) -> FieldElement:
    if isinstance(x, FieldElement):
        return x
    return FieldElement(int(x) % p, p)


def element(value: int, p: int | None = None) -> FieldElement:
    p = get_prime() if p is None else p
    return FieldElement(int(value) % p, p)


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    a._check(b)
    return FieldElement((a.value + b.value) % a.p, a.p)


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    a._check(b)
    return FieldElement((a.value * b.value) % a.p, a.p)


def neg(a: FieldElement) -> FieldElement:
    return FieldElement((-a.value) % a.p, a.p)


def inv(a: FieldElement) -> FieldElement:
    if a.value == 0:
        raise ZeroDivisionError("inverse of 0 in F_p")
    return FieldElement(pow(a.value, -1, a.p), a.p)


def inv_int(x: int, p: int) -> int:
    """Inverse of a raw residue; used by the elimination kernels."""
    x %= p
    if x == 0:
        raise ZeroDivisionError("inverse of 0 in F_p")
    return pow(x, -1, p)

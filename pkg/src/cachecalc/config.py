from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


def as_fraction(x) -> Fraction:
    """Parse ints, Fractions and strings like ``"3/4"`` exactly.

    Floats are accepted but converted through ``limit_denominator`` so that
    0.25 maps to 1/4 rather than its binary expansion.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(x).limit_denominator(10**9)
    return Fraction(x)


@dataclass(frozen=True)
class SystemConfig:
    """K active users, N files, memory ratio gamma = M/N (exact)."""

    K: int
    N: int
    gamma: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "gamma", as_fraction(self.gamma))
        if self.K < 1 or self.N < 1:
            raise ValueError(f"need K >= 1 and N >= 1, got K={self.K}, N={self.N}")
        if not 0 <= self.gamma <= 1:
            raise ValueError(f"gamma must lie in [0, 1], got {self.gamma}")

    @property
    def r(self) -> int:
        return min(self.K, self.N)

    def with_gamma(self, gamma) -> SystemConfig:
        return SystemConfig(self.K, self.N, as_fraction(gamma))

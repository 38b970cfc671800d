"""Closed-form memory-load curves.

Everything here is exact rational arithmetic except :func:`mds_load`, whose
precoding rate is found by a real-valued search.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .config import SystemConfig, as_fraction

__all__ = [
    "SystemConfig",
    "RankProfile",
    "TradeoffCurve",
    "PreconditionViolation",
    "InfeasibleTheta",
    "MDSResult",
    "binom",
    "multicast_count",
    "converse_delta1",
    "converse_delta2",
    "converse",
    "table1_load",
    "uncoded_load",
    "yma_points",
    "yma_curve",
    "yma_envelope_value",
    "mds_load",
    "rank_profile",
    "lower_convex_envelope",
]


class PreconditionViolation(ValueError):
    pass


class InfeasibleTheta(ValueError):
    pass


def binom(a: int, b: int) -> int:
    """Binomial coefficient, zero unless a >= b >= 0."""
    if not a >= b >= 0:
        return 0
    return math.comb(a, b)


def multicast_count(cfg: SystemConfig, t: int) -> int:
    """c(t): number of (t+1)-user multicast groups that contain a leader."""
    return binom(cfg.K, t + 1) - binom(cfg.K - cfg.r, t + 1)


def _pos(x: Fraction) -> Fraction:
    return x if x > 0 else Fraction(0)


@dataclass(frozen=True)
class RankProfile:
    tau: tuple[Fraction, ...]
    rho: tuple[Fraction, ...]
    beta: tuple[Fraction, ...]


def rank_profile(cfg: SystemConfig) -> RankProfile:
    """Generic normalized ranks of intersections (tau) and unions (rho) of s
    random gamma*B-dimensional subspaces, and the uncoded subfile fractions
    beta_s = gamma^s (1 - gamma)^(K - s)."""
    g, K = cfg.gamma, cfg.K
    tau = tuple(_pos(1 - s * (1 - g)) for s in range(K + 1))
    rho = tuple(min(s * g, Fraction(1)) for s in range(K + 1))
    beta = tuple(g**s * (1 - g) ** (K - s) for s in range(K + 1))
    return RankProfile(tau, rho, beta)


def _tau(s: int, g: Fraction) -> Fraction:
    return _pos(1 - s * (1 - g))


def _rho(s: int, g: Fraction) -> Fraction:
    return min(s * g, Fraction(1))


def converse_delta1(cfg: SystemConfig) -> Fraction:
    g = cfg.gamma
    return sum((_pos(1 - t * g) for t in range(1, cfg.r + 1)), Fraction(0))


def converse_delta2(cfg: SystemConfig) -> Fraction:
    """Second converse bound; only stated for K >= 3 and N >= 2."""
    K, N, g, r = cfg.K, cfg.N, cfg.gamma, cfg.r
    if K < 3 or N < 2:
        raise PreconditionViolation(f"Delta_2 needs K >= 3 and N >= 2 (got K={K}, N={N})")
    val = r * (1 - g) - (_tau(K - 1, g) - _tau(K, g)) / (K - 1)
    val -= sum((_rho(j, g) - g for j in range(3, r + 1)), Fraction(0))
    val -= sum((min(g + _tau(j - 2, g), 1 - g) / (K - 1) for j in range(3, K + 1)), Fraction(0))
    return val


def converse(cfg: SystemConfig) -> Fraction:
    """max(Delta_1, Delta_2) with Delta_2 included only where it is defined."""
    d = converse_delta1(cfg)
    if cfg.K >= 3 and cfg.N >= 2:
        d = max(d, converse_delta2(cfg))
    return d


def table1_load(cfg: SystemConfig) -> Fraction | None:
    """Closed-form 1-LinP load where gamma falls in one of the analytically
    solved regimes, else None."""
    K, g, r = cfg.K, cfg.gamma, cfg.r
    if K < 2 or cfg.N < 2:
        raise PreconditionViolation("closed forms need K >= 2 and N >= 2")
    if g <= Fraction(1, K):
        return r - g * r * (r + 1) / 2
    if g <= Fraction(1, 2):
        return (1 - g) * r * (2 * K - r - 1) / (2 * K - 2)
    if g >= Fraction(K - 1, K):
        return 1 - g
    if g >= Fraction(K - 2, K - 1):
        return 2 - g * (2 * K - 1) / (K - 1)
    t = g / (1 - g)  # gamma = t/(t+1)
    if t.denominator == 1 and 1 <= t <= K - 3:
        t = int(t)
        return Fraction(multicast_count(cfg, t), (t + 1) * binom(K - 1, t))
    return None


def uncoded_load(cfg: SystemConfig) -> Fraction:
    """Exact worst-case load of decentralized uncoded placement."""
    g = cfg.gamma
    if g == 0:
        return Fraction(cfg.r)
    return (1 - g) / g * (1 - (1 - g) ** cfg.r)


@dataclass
class TradeoffCurve:
    scheme_name: str
    points: list[tuple[Fraction, Fraction | float]] = field(default_factory=list)

    def __post_init__(self):
        gs = [g for g, _ in self.points]
        if any(b <= a for a, b in zip(gs, gs[1:])):
            raise ValueError("curve gammas must be strictly increasing")

    def check_loads(self, cap: int) -> None:
        for g, v in self.points:
            if not 0 <= v <= cap:
                raise ValueError(f"load {v} at gamma={g} outside [0, {cap}]")

    def value_at(self, gamma) -> Fraction:
        """Piecewise-linear interpolation between points (exact if loads are)."""
        gamma = as_fraction(gamma)
        pts = self.points
        if not pts[0][0] <= gamma <= pts[-1][0]:
            raise ValueError(f"gamma={gamma} outside curve range")
        for (g0, v0), (g1, v1) in zip(pts, pts[1:]):
            if g0 <= gamma <= g1:
                return v0 + (v1 - v0) * (gamma - g0) / (g1 - g0)
        return pts[0][1]

    def to_tsv(self) -> str:
        lines = [f"gamma\t{self.scheme_name}"]
        lines += [f"{g}\t{v}" for g, v in self.points]
        return "\n".join(lines) + "\n"


def lower_convex_envelope(points):
    """Lower hull of (x, y) points, sorted by x (Andrew's monotone chain)."""
    pts = sorted(set(points))
    hull: list = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop the middle point if it lies on or above the chord
            if (x2 - x1) * (pt[1] - y1) - (y2 - y1) * (pt[0] - x1) <= 0:
                hull.pop()
            else:
                break
        hull.append(pt)
    return hull


def yma_points(cfg: SystemConfig) -> list[tuple[Fraction, Fraction]]:
    K, L = cfg.K, cfg.r
    return [
        (Fraction(t, K), Fraction(binom(K, t + 1) - binom(K - L, t + 1), binom(K, t)))
        for t in range(K + 1)
    ]


def yma_curve(cfg: SystemConfig) -> TradeoffCurve:
    return TradeoffCurve("yma", lower_convex_envelope(yma_points(cfg)))


def yma_envelope_value(cfg: SystemConfig) -> Fraction:
    return yma_curve(cfg).value_at(cfg.gamma)


@dataclass(frozen=True)
class MDSResult:
    theta: float
    load: float
    s_prime: int
    eta: float


def _mds_at(K: int, gamma: float, theta: float, c: list[int]):
    """(s', eta', load) for one precoding rate, or None when infeasible."""
    gp = gamma * theta
    if not (0 < theta <= 1 and gp <= 1):
        return None
    s = np.arange(K + 1)
    beta = gp**s * (1 - gp) ** (K - s) / theta
    need = 1 - gamma
    acc = 0.0
    for sp in range(K - 1, -1, -1):
        full = math.comb(K - 1, sp) * beta[sp]
        if full > 0 and acc + full >= need:
            eta = (need - acc) / full
            load = eta * c[sp] * beta[sp] + sum(c[j] * beta[j] for j in range(sp + 1, K))
            return sp, eta, float(load)
        acc += full
    return None


def _mds_grid(K: int, gamma: float, thetas: np.ndarray, c: list[int]) -> np.ndarray:
    """Vectorized :func:`_mds_at` load over many rates; inf where infeasible."""
    gp = gamma * thetas
    s = np.arange(K + 1)
    with np.errstate(divide="ignore", invalid="ignore"):
        beta = gp[:, None] ** s * (1 - gp[:, None]) ** (K - s) / thetas[:, None]
    need = 1 - gamma
    comb = np.array([math.comb(K - 1, j) for j in range(K)], dtype=float)
    cost = np.array(c[:K], dtype=float)
    full = comb * beta[:, :K]
    # suffix sums over s' .. K-1 of supply and load
    supply = np.cumsum(full[:, ::-1], axis=1)[:, ::-1]
    load_all = np.cumsum((cost * beta[:, :K])[:, ::-1], axis=1)[:, ::-1]
    valid = (supply >= need) & (full > 0)
    feasible = valid.any(axis=1) & (thetas > 0) & (thetas <= 1) & (gp <= 1)
    # largest s' whose suffix already covers the demand
    sp = K - 1 - np.argmax(valid[:, ::-1], axis=1)
    rows = np.arange(len(thetas))
    nxt = np.minimum(sp + 1, K - 1)
    tail = sp + 1 < K
    acc = np.where(tail, supply[rows, nxt], 0.0)
    rest = np.where(tail, load_all[rows, nxt], 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        eta = (need - acc) / full[rows, sp]
        out = eta * cost[sp] * beta[rows, sp] + rest
    return np.where(feasible, out, np.inf)


def mds_load(cfg: SystemConfig, grid: int = 10_000, refine_iters: int = 200) -> MDSResult:
    """Best MDS-precoded decentralized load over the code rate theta in (0, 1].

    The objective is not convex in theta, so a dense grid is scanned first and
    the winning cell is then refined by ternary search.
    """
    K, g = cfg.K, float(cfg.gamma)
    if not 0 < cfg.gamma <= 1:
        raise PreconditionViolation("mds_load needs 0 < gamma <= 1")
    c = [multicast_count(cfg, t) for t in range(K + 1)]
    if cfg.gamma == 1:
        return MDSResult(1.0, 0.0, K - 1, 0.0)

    thetas = np.arange(1, grid + 1) / grid
    loads = _mds_grid(K, g, thetas, c)
    if not np.isfinite(loads).any():
        raise InfeasibleTheta(f"no feasible MDS rate for {cfg}")
    best_i = int(np.argmin(loads))
    best = (thetas[best_i],) + _mds_at(K, g, thetas[best_i], c)

    lo = thetas[best_i - 1] if best_i > 0 else 0.0
    hi = thetas[min(best_i + 1, grid - 1)]

    def f(th):
        res = _mds_at(K, g, th, c)
        return math.inf if res is None else res[2]

    a, b = lo, hi
    for _ in range(refine_iters):
        m1 = a + (b - a) / 3
        m2 = b - (b - a) / 3
        if f(m1) <= f(m2):
            b = m2
        else:
            a = m1
    th = (a + b) / 2
    res = _mds_at(K, g, th, c)
    if res is not None and res[2] < best[3]:
        best = (th,) + res
    th, sp, eta, load = best
    return MDSResult(float(th), float(load), int(sp), float(eta))

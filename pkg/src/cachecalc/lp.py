"""Exact achievability linear program for 1-LinP placement.

Variables are lambda_0..lambda_K (normalized size of the coded subfile seen
by exactly one s-subset of users) and eta_0..eta_K (the part of it that is
actually multicast). The solver is a two-phase tableau simplex over
``fractions.Fraction`` with Bland's rule, so there are no tolerances anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .bounds import binom, multicast_count, rank_profile
from .config import SystemConfig


class Infeasible(RuntimeError):
    pass


class Unbounded(RuntimeError):
    pass


def simplex_min(c, A_ub, b_ub):
    """Minimize c.x subject to A_ub x <= b_ub, x >= 0, exactly.

    Returns (x, objective). Rows with a negative right-hand side get an
    artificial variable and are cleared in phase one.
    """
    F = Fraction
    m, n = len(A_ub), len(c)
    rows = []
    art = []
    for i in range(m):
        a = [F(v) for v in A_ub[i]]
        b = F(b_ub[i])
        slack = [F(0)] * m
        slack[i] = F(1)
        if b < 0:
            a = [-v for v in a]
            slack[i] = F(-1)
            b = -b
            art.append(i)
        rows.append(a + slack + [b])
    n_art = len(art)
    width = n + m + n_art
    basis = []
    for i in range(m):
        extra = [F(0)] * n_art
        if i in art:
            extra[art.index(i)] = F(1)
            basis.append(n + m + art.index(i))
        else:
            basis.append(n + i)
        rows[i] = rows[i][:-1] + extra + [rows[i][-1]]

    def objective_row(cost):
        # reduced costs c_j - c_B B^-1 A_j, kept as an extra tableau row
        z = list(cost) + [F(0)]
        for i, bv in enumerate(basis):
            cb = cost[bv]
            if cb:
                for j, v in enumerate(rows[i]):
                    if v:
                        z[j] -= cb * v
        return z

    def pivot(i, j, z):
        r = rows[i]
        pv = r[j]
        nz = [k for k, v in enumerate(r) if v]
        for k in nz:
            r[k] = r[k] / pv
        for other in rows if z is None else rows + [z]:
            if other is r:
                continue
            f = other[j]
            if f:
                for k in nz:
                    other[k] -= f * r[k]
        basis[i] = j

    def run(cost, allowed):
        z = objective_row(cost)
        while True:
            enter = next((j for j in range(width) if allowed(j) and z[j] < 0), None)
            if enter is None:
                return
            best = None
            for i, r in enumerate(rows):
                if r[enter] > 0:
                    key = (r[-1] / r[enter], basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                raise Unbounded("objective is unbounded below")
            pivot(best[1], enter, z)

    if n_art:
        phase1 = [F(0)] * (n + m) + [F(1)] * n_art
        run(phase1, lambda j: True)
        if sum(rows[i][-1] for i, bv in enumerate(basis) if bv >= n + m) != 0:
            raise Infeasible("constraints admit no non-negative solution")
        # drive zero-level artificials out of the basis
        for i in range(len(rows) - 1, -1, -1):
            if basis[i] >= n + m:
                j = next((j for j in range(n + m) if rows[i][j] != 0), None)
                if j is None:
                    del rows[i], basis[i]
                else:
                    pivot(i, j, None)

    cost = [F(v) for v in c] + [F(0)] * (m + n_art)
    run(cost, lambda j: j < n + m)
    x = [F(0)] * n
    for i, bv in enumerate(basis):
        if bv < n:
            x[bv] = rows[i][-1]
    return x, sum((ci * xi for ci, xi in zip(map(F, c), x)), F(0))


@dataclass(frozen=True)
class LPSolution:
    lambda_: tuple[Fraction, ...]
    eta: tuple[Fraction, ...]
    objective: Fraction

    def violations(self, cfg: SystemConfig) -> list[str]:
        """Human-readable list of broken constraints (empty when feasible)."""
        K = cfg.K
        lam, eta = self.lambda_, self.eta
        tau = rank_profile(cfg).tau
        out = []
        if len(lam) != K + 1 or len(eta) != K + 1:
            return [f"expected {K + 1} entries per vector"]
        for s in range(K + 1):
            if not 0 <= eta[s] <= lam[s]:
                out.append(f"0 <= eta_{s} <= lambda_{s} fails ({eta[s]}, {lam[s]})")
            cover = sum(binom(K - s, j - s) * lam[j] for j in range(s, K + 1))
            if cover > tau[s]:
                out.append(f"coverage at s={s}: {cover} > tau_{s} = {tau[s]}")
        decoded = sum(binom(K - 1, j) * eta[j] for j in range(K))
        if decoded != 1 - cfg.gamma:
            out.append(f"decoding sum {decoded} != 1 - gamma = {1 - cfg.gamma}")
        obj = sum(eta[j] * multicast_count(cfg, j) for j in range(K))
        if obj != self.objective:
            out.append(f"objective {self.objective} != sum eta_j c(j) = {obj}")
        return out

    def is_feasible(self, cfg: SystemConfig) -> bool:
        return not self.violations(cfg)


def build_lp(cfg: SystemConfig):
    """(c, A_ub, b_ub) with variables ordered lambda_0..lambda_K, eta_0..eta_K.

    The decoding equality is split into a <= and a >= row.
    """
    K = cfg.K
    n = 2 * (K + 1)
    tau = rank_profile(cfg).tau
    c = [0] * (K + 1) + [multicast_count(cfg, j) for j in range(K)] + [0]
    A, b = [], []
    for s in range(K + 1):
        row = [0] * n
        for j in range(s, K + 1):
            row[j] = binom(K - s, j - s)
        A.append(row)
        b.append(tau[s])
    for s in range(K + 1):
        row = [0] * n
        row[K + 1 + s] = 1
        row[s] = -1
        A.append(row)
        b.append(0)
    dec = [0] * (K + 1) + [binom(K - 1, j) for j in range(K)] + [0]
    A.append(dec)
    b.append(1 - cfg.gamma)
    A.append([-v for v in dec])
    b.append(-(1 - cfg.gamma))
    return c, A, b


def solve(cfg: SystemConfig) -> LPSolution:
    c, A, b = build_lp(cfg)
    x, obj = simplex_min(c, A, b)
    K = cfg.K
    return LPSolution(tuple(x[: K + 1]), tuple(x[K + 1:]), obj)


def _assemble(cfg: SystemConfig, lam: dict, eta: dict) -> LPSolution:
    K = cfg.K
    lam_t = tuple(Fraction(lam.get(s, 0)) for s in range(K + 1))
    eta_t = tuple(Fraction(eta.get(s, 0)) for s in range(K + 1))
    obj = sum(eta_t[j] * multicast_count(cfg, j) for j in range(K))
    return LPSolution(lam_t, eta_t, obj)


def feasible_solution_table1(cfg: SystemConfig) -> LPSolution | None:
    """Hand-built feasible point for each closed-form regime, or None."""
    K, g = cfg.K, cfg.gamma
    if K < 2 or cfg.N < 2:
        return None
    tau = rank_profile(cfg).tau
    if g <= Fraction(1, K):
        return _assemble(cfg, {0: 1 - K * g, 1: g}, {0: 1 - K * g, 1: g})
    if g <= Fraction(1, 2):
        return _assemble(cfg, {1: Fraction(1, K)}, {1: (1 - g) / (K - 1)})
    if g >= Fraction(K - 1, K):
        return _assemble(cfg, {K: tau[K], K - 1: 1 - g}, {K: tau[K], K - 1: 1 - g})
    if g >= Fraction(K - 2, K - 1):
        top = tau[K - 1]
        return _assemble(
            cfg,
            {K - 1: top, K - 2: (1 - K * top) / binom(K, 2)},
            {K - 1: top, K - 2: (1 - g - top) / (K - 1)},
        )
    t = g / (1 - g)
    if t.denominator == 1 and 1 <= t <= K - 3:
        t = int(t)
        return _assemble(
            cfg,
            {t: Fraction(1, binom(K, t))},
            {t: Fraction(1, (t + 1) * binom(K - 1, t))},
        )
    return None

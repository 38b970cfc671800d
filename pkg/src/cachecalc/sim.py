"""Constructive 1-LinP placement, delivery and decoding over F_p.

A run goes: :func:`place` draws one random B x gamma*B matrix per (user, file);
:func:`decompose` splits each file's space into blocks V_{S,n} that sit inside
the caches of exactly the users in S; :func:`deliver` builds the signed
multicast messages from truncated blocks and drops the ones no leader needs;
:func:`verify_decoding` checks by rank that every user can solve for its
demanded linear combination of files.

Users and files are 0-indexed here. Message rows live in F_p^(N*B): columns
n*B .. (n+1)*B - 1 belong to file n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from . import linalg
from .config import SystemConfig
from .gf import get_prime
from .linalg import InsufficientDimension, Subspace
from .lp import LPSolution, solve

MAX_RETRIES = 5


class NonGenericPlacement(RuntimeError):
    """The random placement is too degenerate for the requested block sizes."""


def _rng(*key: int) -> np.random.Generator:
    return np.random.default_rng([int(k) for k in key])


# stream tags keep placement, decomposition and demand draws independent
_PLACE, _DECOMPOSE, _DEMAND, _PROFILE = 1, 2, 3, 4


def scale_block_length(lp_sol: LPSolution, gamma, B_min: int = 24) -> int:
    """Smallest multiple of the common denominator of gamma, lambda, eta that is >= B_min."""
    dens = [Fraction(gamma).denominator]
    dens += [x.denominator for x in lp_sol.lambda_ + lp_sol.eta]
    unit = math.lcm(*dens)
    return unit * max(1, -(-B_min // unit))


@dataclass
class CachePlacement:
    cfg: SystemConfig
    B: int
    seed: int
    p: int
    E: dict[tuple[int, int], np.ndarray]
    aligned: bool = False
    _spaces: dict = field(default_factory=dict, repr=False)

    @property
    def cache_dim(self) -> int:
        return int(self.cfg.gamma * self.B)

    def space(self, k: int, n: int) -> Subspace:
        """Column span of E_{k,n}."""
        key = (k, n)
        if key not in self._spaces:
            self._spaces[key] = Subspace.from_columns(self.E[key], self.p)
        return self._spaces[key]


def place(cfg: SystemConfig, B: int, seed: int, p: int | None = None, aligned: bool = False) -> CachePlacement:
    """Draw E_{k,n} i.i.d. uniform for every user and file.

    With ``aligned=True`` each user draws one matrix and reuses it for all
    files, which is what decoding mixed (multi-file) demands requires.
    """
    p = get_prime() if p is None else p
    m = cfg.gamma * B
    if m.denominator != 1:
        raise ValueError(f"gamma*B = {m} is not an integer; rescale B")
    m = int(m)
    E = {}
    for k in range(cfg.K):
        for n in range(cfg.N):
            if aligned and n > 0:
                E[k, n] = E[k, 0]
                continue
            for attempt in range(100):
                mat = linalg.random_matrix(_rng(_PLACE, seed, k, n, attempt), B, m, p)
                if linalg.rank(mat, p) == m:
                    break
            else:  # pragma: no cover - needs an absurdly small prime
                raise NonGenericPlacement(f"could not draw a full-rank E_{k},{n}")
            E[k, n] = mat
    return CachePlacement(cfg, B, seed, p, E, aligned)


@dataclass
class SubspaceDecomposition:
    """Per file n, a map from user subset S (sorted tuple) to the V_{S,n} rows.

    The empty tuple holds V_{empty,n}, the part no user caches.
    """

    blocks: list[dict[tuple[int, ...], np.ndarray]]

    def block(self, S, n: int) -> np.ndarray:
        return self.blocks[n][tuple(sorted(S))]


def _block_rows(frac: Fraction, B: int) -> int:
    x = frac * B
    if x.denominator != 1:
        raise ValueError(f"block size {frac}*{B} is not an integer; rescale B")
    return int(x)


def decompose(pl: CachePlacement, lp_sol: LPSolution, seed: int | None = None) -> SubspaceDecomposition:
    """Carve lambda_|S| * B independent directions out of each intersection E_{S,n}.

    Subsets are visited from largest to smallest so that every block is picked
    independent of everything chosen for larger (and equal-size, earlier) sets.
    """
    cfg, B, p = pl.cfg, pl.B, pl.p
    K = cfg.K
    seed = pl.seed if seed is None else seed
    sizes = [_block_rows(lam, B) for lam in lp_sol.lambda_]
    blocks = []
    for n in range(cfg.N):
        if pl.aligned and n > 0:
            blocks.append(blocks[0])
            continue
        rng = _rng(_DECOMPOSE, seed, n)
        inter: dict[tuple[int, ...], Subspace] = {}

        def E_S(S):
            if S not in inter:
                if len(S) == 1:
                    inter[S] = pl.space(S[0], n)
                else:
                    inter[S] = linalg.intersect(E_S(S[:-1]), pl.space(S[-1], n))
            return inter[S]

        chosen: dict[tuple[int, ...], np.ndarray] = {}
        taken = Subspace.zero(B, p)
        for s in range(K, 0, -1):
            want = sizes[s]
            for S in combinations(range(K), s):
                if want == 0:
                    chosen[S] = np.zeros((0, B), dtype=np.int64)
                    continue
                try:
                    rows = linalg.complement_basis(E_S(S), taken, want, rng)
                except InsufficientDimension as exc:
                    raise NonGenericPlacement(f"file {n}, users {S}: {exc}") from exc
                chosen[S] = rows
                taken = linalg.sum_space(taken, Subspace.from_rows(rows, B, p))
        try:
            chosen[()] = linalg.complement_basis(Subspace.full(B, p), taken, sizes[0], rng)
        except InsufficientDimension as exc:
            raise NonGenericPlacement(f"file {n}, uncached part: {exc}") from exc
        blocks.append(chosen)
    return SubspaceDecomposition(blocks)


@dataclass
class DemandMatrix:
    D: np.ndarray  # K x N over F_p
    leaders: tuple[int, ...]
    rank: int


def _leaders(D: np.ndarray, p: int) -> tuple[int, ...]:
    picked: list[int] = []
    for k in range(D.shape[0]):
        if linalg.rank(D[picked + [k]], p) == len(picked) + 1:
            picked.append(k)
    return tuple(picked)


def worst_case_demand(cfg: SystemConfig, seed: int = 0, mode: str = "canonical", p: int | None = None) -> DemandMatrix:
    """Full-rank demands: user k asks for file min(k, N-1) ("canonical"), or a
    uniformly random K x N matrix of rank min(K, N) ("random")."""
    p = get_prime() if p is None else p
    K, N = cfg.K, cfg.N
    if mode == "canonical":
        D = np.zeros((K, N), dtype=np.int64)
        for k in range(K):
            D[k, min(k, N - 1)] = 1
    elif mode == "random":
        for attempt in range(100):
            D = linalg.random_matrix(_rng(_DEMAND, seed, attempt), K, N, p)
            if linalg.rank(D, p) == cfg.r:
                break
    else:
        raise ValueError(f"unknown demand mode {mode!r}")
    leaders = _leaders(D, p)
    return DemandMatrix(D, leaders, len(leaders))


@dataclass
class Message:
    users: tuple[int, ...]
    rows: np.ndarray


@dataclass
class DeliveryTranscript:
    messages: list[Message]
    omitted: list[Message]
    B: int
    fallback: bool = False

    @property
    def total_symbols(self) -> int:
        return sum(m.rows.shape[0] for m in self.messages)

    @property
    def load(self) -> Fraction:
        return Fraction(self.total_symbols, self.B)

    def without(self, users) -> DeliveryTranscript:
        """Copy with the message for `users` removed (ablation helper)."""
        users = tuple(sorted(users))
        kept = [m for m in self.messages if m.users != users]
        return DeliveryTranscript(kept, self.omitted, self.B, self.fallback)


def encoding_sign(S: tuple[int, ...], k: int) -> int:
    """Alternating sign (-1)^(position of k in sorted S)."""
    return -1 if sorted(S).index(k) % 2 else 1


def deliver(pl: CachePlacement, dec: SubspaceDecomposition, lp_sol: LPSolution, D: DemandMatrix, omit: bool = True) -> DeliveryTranscript:
    cfg, B, p = pl.cfg, pl.B, pl.p
    K, N = cfg.K, cfg.N
    leaders = set(D.leaders)
    sent, omitted = [], []
    for s in range(1, K + 1):
        size = _block_rows(lp_sol.eta[s - 1], B)
        for S in combinations(range(K), s):
            rows = np.zeros((size, N * B), dtype=np.int64)
            if size:
                for k in S:
                    T = tuple(u for u in S if u != k)
                    sign = encoding_sign(S, k)
                    for n in range(N):
                        d = int(D.D[k, n])
                        if d == 0:
                            continue
                        trunc = dec.block(T, n)[:size]
                        rows[:, n * B:(n + 1) * B] += (sign * d % p) * trunc % p
                rows %= p
            msg = Message(S, rows)
            if omit and not leaders.intersection(S):
                omitted.append(msg)
            else:
                sent.append(msg)
    return DeliveryTranscript(sent, omitted, B)


def _stack(messages, width: int) -> np.ndarray:
    parts = [m.rows for m in messages if m.rows.shape[0]]
    return np.vstack(parts) if parts else np.zeros((0, width), dtype=np.int64)


def cache_rows(pl: CachePlacement, k: int) -> np.ndarray:
    """User k's cache as rows of F_p^(N*B): E_{k,n}^T placed in file block n."""
    B, N = pl.B, pl.cfg.N
    out = np.zeros((N * pl.cache_dim, N * B), dtype=np.int64)
    m = pl.cache_dim
    for n in range(N):
        out[n * m:(n + 1) * m, n * B:(n + 1) * B] = pl.E[k, n].T
    return out


def demand_rows(D: DemandMatrix, k: int, B: int) -> np.ndarray:
    """The B rows of d_k (x) I_B."""
    N = D.D.shape[1]
    out = np.zeros((B, N * B), dtype=np.int64)
    for n in range(N):
        out[:, n * B:(n + 1) * B] = np.eye(B, dtype=np.int64) * int(D.D[k, n])
    return out


def verify_decoding(pl: CachePlacement, tr: DeliveryTranscript, D: DemandMatrix) -> list[bool]:
    """Per user: is the demanded function in the span of cache + transmissions?"""
    B, N, p = pl.B, pl.cfg.N, pl.p
    sent = _stack(tr.messages, N * B)
    sent_ech, sent_piv = linalg.rref(sent, p)
    ok = []
    for k in range(pl.cfg.K):
        gens = np.vstack([sent_ech, cache_rows(pl, k)])
        ok.append(linalg.in_rowspan(demand_rows(D, k, B), gens, p))
    return ok


def verify_leader_omission(tr: DeliveryTranscript, D: DemandMatrix, full_messages=None, p: int | None = None) -> bool:
    """Can every dropped message be rebuilt from the transmitted ones?"""
    p = get_prime() if p is None else p
    if full_messages is None:
        omitted = tr.omitted
    else:
        leaders = set(D.leaders)
        omitted = [m for m in full_messages if not leaders.intersection(m.users)]
    width = D.D.shape[1] * tr.B
    target = _stack(omitted, width)
    if target.shape[0] == 0:
        return True
    return linalg.in_rowspan(target, _stack(tr.messages, width), p)


@dataclass
class TrialResult:
    cfg: SystemConfig
    seed: int
    B: int
    lp_objective: Fraction
    load: Fraction
    decoded: tuple[bool, ...]
    fallback: bool
    attempts: int

    @property
    def ok(self) -> bool:
        return all(self.decoded)


def run_trial(
    cfg: SystemConfig,
    seed: int,
    B_min: int = 24,
    demand: str = "canonical",
    lp_sol: LPSolution | None = None,
    p: int | None = None,
    aligned: bool | None = None,
) -> TrialResult:
    """Placement, decomposition, delivery and decoding check for one seed.

    A non-generic draw is retried with a derived seed up to MAX_RETRIES times.
    If the alternating signs fail to make omitted messages recoverable, every
    message is sent instead and the result is flagged.

    Random (multi-file) demands default to an aligned placement; with
    independent per-file caches a user cannot form projections of a mixed
    demand and decoding fails.
    """
    p = get_prime() if p is None else p
    aligned = (demand == "random") if aligned is None else aligned
    lp_sol = solve(cfg) if lp_sol is None else lp_sol
    B = scale_block_length(lp_sol, cfg.gamma, B_min)
    D = worst_case_demand(cfg, seed, demand, p)
    last = None
    for attempt in range(MAX_RETRIES):
        trial_seed = seed if attempt == 0 else int(_rng(_PLACE, seed, attempt).integers(2**63))
        pl = place(cfg, B, trial_seed, p, aligned=aligned)
        try:
            dec = decompose(pl, lp_sol)
        except NonGenericPlacement as exc:
            last = exc
            continue
        tr = deliver(pl, dec, lp_sol, D)
        fallback = not verify_leader_omission(tr, D, p=p)
        if fallback:
            tr = deliver(pl, dec, lp_sol, D, omit=False)
            tr.fallback = True
        decoded = tuple(verify_decoding(pl, tr, D))
        return TrialResult(cfg, seed, B, lp_sol.objective, tr.load, decoded, fallback, attempt + 1)
    raise NonGenericPlacement(f"{MAX_RETRIES} placements in a row were degenerate: {last}")


@dataclass
class EmpiricalRankProfile:
    """Measured ranks of the intersection / sum of the first s random subspaces.

    `intersection[t, s]` and `union[t, s]` are raw ranks for trial t; divide
    by B for the normalized values.
    """

    B: int
    intersection: np.ndarray
    union: np.ndarray

    @property
    def tau(self) -> np.ndarray:
        return self.intersection.mean(axis=0) / self.B

    @property
    def rho(self) -> np.ndarray:
        return self.union.mean(axis=0) / self.B

    def match_rate(self, tau, rho) -> tuple[np.ndarray, np.ndarray]:
        """Fraction of trials hitting tau_s * B and rho_s * B exactly, per s."""
        t_exp = np.array([int(t * self.B) for t in tau])
        r_exp = np.array([int(r * self.B) for r in rho])
        return (self.intersection == t_exp).mean(axis=0), (self.union == r_exp).mean(axis=0)


def empirical_rank_profile(cfg: SystemConfig, B: int, trials: int, seed: int, p: int | None = None) -> EmpiricalRankProfile:
    p = get_prime() if p is None else p
    m = cfg.gamma * B
    if m.denominator != 1:
        raise ValueError(f"gamma*B = {m} is not an integer")
    m = int(m)
    K = cfg.K
    inter = np.zeros((trials, K + 1), dtype=np.int64)
    union = np.zeros((trials, K + 1), dtype=np.int64)
    for t in range(trials):
        rng = _rng(_PROFILE, seed, t)
        cap = Subspace.full(B, p)
        cup = Subspace.zero(B, p)
        inter[t, 0], union[t, 0] = B, 0
        for s in range(1, K + 1):
            sp = Subspace.from_columns(linalg.random_matrix(rng, B, m, p), p)
            cap = linalg.intersect(cap, sp)
            cup = linalg.sum_space(cup, sp)
            inter[t, s], union[t, s] = cap.dim, cup.dim
    return EmpiricalRankProfile(B, inter, union)

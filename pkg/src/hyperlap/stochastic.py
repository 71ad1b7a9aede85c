"""Monte-Carlo walks and exact evolution of occupation distributions.

Seeding: every independent work unit (one trajectory, or one fixed-size block
of walkers) draws from ``PCG64(SeedSequence(seed, spawn_key=(unit,)))``.  The
block size is fixed, so results depend only on ``(seed, walkers)`` and never
on how many threads run the blocks.  Counts are integers, so reduction order
does not matter either.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import ComputationError, ValidationError
from .rw import WalkFactorization, to_float

__all__ = [
    "AliasTable",
    "WalkTrajectory",
    "EmpiricalKernel",
    "OccupationDistribution",
    "AbsorptionResult",
    "unit_rng",
    "simulate_walk",
    "empirical_kernel",
    "evolve_distribution",
    "stationary_distribution",
    "absorbing_walk",
]

BLOCK_SIZE = 4096
CONSERVATION_TOL = 1e-12


def unit_rng(seed: int, unit: int) -> np.random.Generator:
    """Independent generator for work unit ``unit`` under master ``seed``."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed), spawn_key=(int(unit),))))


class AliasTable:
    """Per-row alias tables over the support of a row-stochastic matrix."""

    def __init__(self, P: np.ndarray):
        P = np.asarray(P, dtype=float)
        n = P.shape[0]
        supports = [np.flatnonzero(P[i] > 0) for i in range(n)]
        if any(len(s) == 0 for s in supports):
            raise ValidationError("every row needs at least one transition")
        k = max(len(s) for s in supports)
        self.size = np.array([len(s) for s in supports])
        self.target = np.zeros((n, k), dtype=np.int64)
        self.alias = np.zeros((n, k), dtype=np.int64)
        self.prob = np.ones((n, k))
        for i, s in enumerate(supports):
            p = P[i, s] / P[i, s].sum()
            m = len(s)
            q = p * m
            small = [j for j in range(m) if q[j] < 1.0]
            large = [j for j in range(m) if q[j] >= 1.0]
            prob = np.ones(m)
            alias = np.arange(m)
            while small and large:
                a, b = small.pop(), large.pop()
                prob[a] = q[a]
                alias[a] = b
                q[b] -= 1.0 - q[a]
                (small if q[b] < 1.0 else large).append(b)
            # leftovers are 1 up to rounding
            self.target[i, :m] = s
            self.alias[i, :m] = s[alias]
            self.prob[i, :m] = prob

    def step(self, current: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        u = rng.random((2, current.shape[0]))
        col = np.minimum((u[0] * self.size[current]).astype(np.int64), self.size[current] - 1)
        keep = u[1] < self.prob[current, col]
        return np.where(keep, self.target[current, col], self.alias[current, col])


@dataclass(frozen=True)
class WalkTrajectory:
    start: int
    path: np.ndarray
    seed: int
    kernel: str

    @property
    def steps(self) -> int:
        return len(self.path) - 1


def _start_index(F: WalkFactorization, start) -> int:
    if isinstance(start, str):
        try:
            return F.vertices.index(start)
        except ValueError:
            raise ValidationError(f"unknown start vertex {start!r}") from None
    if not 0 <= int(start) < F.n:
        raise ValidationError(f"start vertex {start} out of range")
    return int(start)


def simulate_walk(F: WalkFactorization, start, steps: int, seed: int = 0, index: int = 0) -> WalkTrajectory:
    """One trajectory of ``steps`` transitions drawn from ``D^{-1} A``.

    ``index`` selects the sub-stream, so trajectories ``0, 1, ...`` under the
    same master seed are independent.
    """
    if steps < 0:
        raise ValidationError("steps must be non-negative")
    s = _start_index(F, start)
    table = AliasTable(to_float(F.transition))
    rng = unit_rng(seed, index)
    size = table.size.tolist()
    target = table.target.tolist()
    alias = table.alias.tolist()
    prob = table.prob.tolist()
    path = np.empty(steps + 1, dtype=np.int64)
    path[0] = s
    cur = s
    chunk = 1 << 16
    done = 0
    while done < steps:
        m = min(chunk, steps - done)
        u = rng.random((m, 2)).tolist()
        for k in range(m):
            u0, u1 = u[k]
            sz = size[cur]
            c = int(u0 * sz)
            if c >= sz:
                c = sz - 1
            cur = target[cur][c] if u1 < prob[cur][c] else alias[cur][c]
            path[done + k + 1] = cur
        done += m
    return WalkTrajectory(s, path, int(seed), F.variant.value)


@dataclass(frozen=True)
class EmpiricalKernel:
    counts: np.ndarray
    row_totals: np.ndarray
    P_hat: np.ndarray
    stderr: np.ndarray

    def z_scores(self, P) -> np.ndarray:
        """``|P_hat - P| / stderr`` over observed rows; exact matches score 0."""
        P = to_float(P)
        diff = np.abs(self.P_hat - P)
        with np.errstate(divide="ignore", invalid="ignore"):
            z = np.where(diff == 0, 0.0, diff / self.stderr)
        z[self.row_totals == 0] = 0.0
        return z


def empirical_kernel(trajectories: Iterable[WalkTrajectory | Sequence[int]], n: int | None = None) -> EmpiricalKernel:
    """Row-normalized transition counts with binomial standard errors."""
    paths = [np.asarray(t.path if isinstance(t, WalkTrajectory) else t, dtype=np.int64) for t in trajectories]
    if not paths or all(len(p) < 2 for p in paths):
        raise ValidationError("no transitions observed")
    if n is None:
        n = int(max(p.max() for p in paths)) + 1
    counts = np.zeros((n, n), dtype=np.int64)
    for p in paths:
        if len(p) >= 2:
            np.add.at(counts, (p[:-1], p[1:]), 1)
    totals = counts.sum(axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        P_hat = np.where(totals[:, None] > 0, counts / totals[:, None], 0.0)
        stderr = np.where(totals[:, None] > 0, np.sqrt(P_hat * (1 - P_hat) / totals[:, None]), np.nan)
    return EmpiricalKernel(counts, totals, P_hat, stderr)


@dataclass(frozen=True)
class OccupationDistribution:
    p: np.ndarray
    time: int
    mode: str


def evolve_distribution(F: WalkFactorization, p0, n: int, mode: str = "forward") -> OccupationDistribution:
    """Iterate the forward or backward equation ``n`` times.

    forward: ``p <- P^T p`` (where the walker is; total mass is conserved).
    backward: ``h <- P h`` (as a function of the starting vertex; constants are
    preserved, and with symmetric ``A`` so is ``sum_v D_vv h(v)``).
    """
    if n < 0:
        raise ValidationError("n must be non-negative")
    P = to_float(F.transition)
    p = np.asarray(p0, dtype=float).copy()
    if p.shape != (F.n,):
        raise ValidationError(f"expected a vector of length {F.n}")
    if mode == "forward":
        if np.any(p < 0) or abs(p.sum() - 1.0) > CONSERVATION_TOL:
            raise ValidationError("p0 must be a probability vector")
        M = P.T
    elif mode == "backward":
        M = P
    else:
        raise ValidationError(f"unknown mode {mode!r}")
    for _ in range(n):
        p = M @ p
    return OccupationDistribution(p, n, mode)


def stationary_distribution(F: WalkFactorization) -> np.ndarray:
    """``pi_i = D_ii / sum D`` (valid when ``A`` is symmetric)."""
    if not F.symmetric:
        raise ValidationError("closed-form stationary vector needs a symmetric A")
    d = to_float(F.D)
    return d / d.sum()


@dataclass(frozen=True)
class AbsorptionResult:
    boundary: tuple[int, ...]
    counts: np.ndarray
    walkers: int

    @property
    def frequencies(self) -> np.ndarray:
        return self.counts / self.walkers

    @property
    def stderr(self) -> np.ndarray:
        p = self.frequencies
        return np.sqrt(p * (1 - p) / self.walkers)


def _absorb_block(table: AliasTable, absorbing: np.ndarray, start: int, m: int, rng, max_steps: int) -> np.ndarray:
    pos = np.full(m, start, dtype=np.int64)
    active = np.ones(m, dtype=bool)
    for _ in range(max_steps):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            return pos
        pos[idx] = table.step(pos[idx], rng)
        active[idx] = ~absorbing[pos[idx]]
    raise ComputationError("walkers not absorbed within the step limit")


def absorbing_walk(
    F: WalkFactorization,
    boundary: Iterable[int | str],
    start,
    walkers: int,
    seed: int = 0,
    threads: int = 1,
    max_steps: int = 1_000_000,
) -> AbsorptionResult:
    """Run walkers from ``start`` until they hit the boundary set."""
    b = tuple(sorted(_start_index(F, v) for v in boundary))
    s = _start_index(F, start)
    if not b or len(b) >= F.n:
        raise ValidationError("boundary must be a nonempty proper subset")
    if s in b:
        raise ValidationError("start vertex lies on the boundary")
    if walkers < 1:
        raise ValidationError("walkers must be positive")
    table = AliasTable(to_float(F.transition))
    absorbing = np.zeros(F.n, dtype=bool)
    absorbing[list(b)] = True
    blocks = [(k, min(BLOCK_SIZE, walkers - k * BLOCK_SIZE)) for k in range(-(-walkers // BLOCK_SIZE))]

    def run(block):
        k, m = block
        final = _absorb_block(table, absorbing, s, m, unit_rng(seed, k), max_steps)
        return np.bincount(final, minlength=F.n)

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        total = sum(pool.map(run, blocks))
    return AbsorptionResult(b, total[list(b)].astype(np.int64), walkers)

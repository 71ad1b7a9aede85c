"""Coupled hypergraph maps ``x_{t+1} = C f(x_t)`` with ``C = I - eps * O``.

``O`` is any hypergraph Laplacian.  For random-walk Laplacians ``C`` is an
averaging operator when ``eps`` is in ``[0, 1]`` and the unit hypercube stays
invariant; chemical Laplacians give no such guarantee and trajectories can
leave ``[0, 1]``.  Outside ``[0, 1]`` the maps are evaluated by their
algebraic formulas and the run is flagged ``domain_escaped``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .chemical import ChemicalLaplacian
from .errors import ComputationError, ValidationError
from .rw import RWLaplacian, WalkFactorization, assemble, to_float
from .stochastic import BLOCK_SIZE, unit_rng

__all__ = [
    "ScalarMap",
    "CouplingOperator",
    "EnsembleState",
    "InvarianceReport",
    "CommutativityReport",
    "EnsembleResult",
    "scalar_apply",
    "coupling",
    "chm_step",
    "invariance_report",
    "commutativity_check",
    "ensemble_run",
]

COMMUTE_TOL = 1e-12
BOUND_TOL = 1e-12


@dataclass(frozen=True)
class ScalarMap:
    kind: str
    mu: float

    def __post_init__(self):
        if self.kind not in ("tent", "logistic"):
            raise ValidationError(f"unknown map {self.kind!r}")
        if not 0 < self.mu <= 4:
            raise ValidationError("mu must lie in (0, 4]")

    domain = (0.0, 1.0)

    def __call__(self, x):
        """Evaluate on any real input (no domain check)."""
        x = np.asarray(x, dtype=float)
        if self.kind == "tent":
            return (self.mu / 2) * np.minimum(x, 1 - x)
        return self.mu * x * (1 - x)


def scalar_apply(m: ScalarMap, x: float) -> float:
    if not 0.0 <= x <= 1.0:
        raise ValidationError(f"{x} is outside the map's domain [0, 1]")
    return float(m(x))


@dataclass(frozen=True)
class CouplingOperator:
    C: np.ndarray
    eps: float
    family: str  # "random-walk" | "chemical" | "chemical-delta" | "matrix"
    O: np.ndarray = field(repr=False)


def _operator(O) -> tuple[np.ndarray, str]:
    if isinstance(O, WalkFactorization):
        O = assemble(O)
    if isinstance(O, RWLaplacian):
        return O.matrix, "random-walk"
    if isinstance(O, ChemicalLaplacian):
        return np.asarray(O.matrix, dtype=float), O.kind.value
    M = to_float(O)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValidationError("operator must be square")
    off = M - np.diag(np.diag(M))
    rw = np.allclose(np.diag(M), 1.0) and np.all(off <= 0) and np.allclose(M.sum(axis=1), 0.0, atol=1e-12)
    return M, "random-walk" if rw else "matrix"


def coupling(O, eps: float) -> CouplingOperator:
    """``C = I - eps * O``."""
    M, family = _operator(O)
    C = np.eye(M.shape[0]) - eps * M
    return CouplingOperator(C, float(eps), family, M)


@dataclass(frozen=True)
class EnsembleState:
    X: np.ndarray  # (M trajectories, N nodes)
    t: int = 0
    seed: int | None = None
    domain_escaped: bool = False


def chm_step(state: EnsembleState, C: CouplingOperator, m: ScalarMap) -> EnsembleState:
    """Apply ``x <- C f(x)`` to every trajectory."""
    with np.errstate(over="ignore", invalid="ignore"):
        X = m(state.X) @ C.C.T
    if not np.all(np.isfinite(X)):
        raise ComputationError(f"non-finite state at t={state.t + 1}")
    escaped = state.domain_escaped or bool(np.any((X < 0) | (X > 1)))
    return EnsembleState(X, state.t + 1, state.seed, escaped)


# --------------------------------------------------------------------------
# hypercube invariance


@dataclass
class InvarianceReport:
    family: str
    eps: float
    interval: tuple[float, float]
    expected: str  # "contained" | "escape-box" | "not-guaranteed"
    box: tuple[float, float]
    trials: int
    violations: int
    min_output: float
    max_output: float
    witness_f: np.ndarray | None
    witness_output: np.ndarray | None
    witness_vertex: int | None
    witness_exits: bool
    bound: float | None
    ok: bool

    def as_dict(self) -> dict:
        return {
            "family": self.family,
            "eps": self.eps,
            "interval": list(self.interval),
            "expected": self.expected,
            "box": list(self.box),
            "trials": self.trials,
            "violations": self.violations,
            "min_output": self.min_output,
            "max_output": self.max_output,
            "witness_f": None if self.witness_f is None else self.witness_f.tolist(),
            "witness_output": None if self.witness_output is None else self.witness_output.tolist(),
            "witness_vertex": self.witness_vertex,
            "witness_exits": self.witness_exits,
            "bound": self.bound,
            "ok": self.ok,
        }


def escape_box(eps: float, a: float, b: float) -> tuple[float, float]:
    """Interval containing every ``(C f(x))_i`` for a random-walk ``C``."""
    if eps > 1:
        return b * (1 - eps) + a * eps, a * (1 - eps) + b * eps
    if eps < 0:
        return a * (1 - eps) + b * eps, b * (1 - eps) + a * eps
    return a, b


def _sample_fvalues(m: ScalarMap | None, n: int, trials: int, a: float, b: float, rng) -> np.ndarray:
    """Arbitrary admissible f-values: map images, uniform draws and corners."""
    parts = [rng.uniform(a, b, (trials, n)), np.where(rng.random((trials, n)) < 0.5, a, b)]
    if m is not None and (a, b) == (0.0, 1.0):
        parts.append(m(rng.uniform(0.0, 1.0, (trials, n))))
    return np.vstack(parts)


def invariance_report(
    O,
    m: ScalarMap | None,
    eps: float,
    trials: int = 1000,
    seed: int = 0,
    interval: tuple[float, float] = (0.0, 1.0),
) -> InvarianceReport:
    """Check whether ``C f(x)`` stays in ``[a, b]^N``.

    Random-walk operators: for ``eps`` in ``[0, 1]`` every sampled output must
    stay in ``[a, b]`` (and between the min and max of its f-values); outside
    that range outputs must stay in the escape box and the witness ``f = a``
    at one vertex, ``b`` elsewhere, must leave ``[a, b]``.

    Other operators (chemical Laplacians): a witness is built that leaves
    ``[a, b]``.  When every off-diagonal ``A°_ij`` is non-positive (all
    vertices inputs), the witness is ``f = a`` at one vertex and ``b`` on the
    rest, and its output is at most ``a(1 - eps) - b eps``.  Otherwise each
    row is pushed to its extreme over the corners of ``[a, b]^N``.
    """
    a, b = map(float, interval)
    if not a < b:
        raise ValidationError("interval must satisfy a < b")
    if trials < 1:
        raise ValidationError("trials must be positive")
    op = coupling(O, eps)
    C, n = op.C, op.C.shape[0]
    rng = unit_rng(seed, 0)
    F = _sample_fvalues(m, n, trials, a, b, rng)
    out = F @ C.T
    tol = BOUND_TOL * max(1.0, abs(a), abs(b), abs(eps))
    witness_f = witness_out = witness_vertex = bound = None
    witness_exits = False

    if op.family == "random-walk":
        box = escape_box(eps, a, b)
        expected = "contained" if 0 <= eps <= 1 else "escape-box"
        bad = (out < box[0] - tol) | (out > box[1] + tol)
        if expected == "contained":
            lo = F.min(axis=1, keepdims=True)
            hi = F.max(axis=1, keepdims=True)
            bad |= (out < lo - tol) | (out > hi + tol)
        violations = int(np.count_nonzero(np.any(bad, axis=1)))
        if expected == "escape-box":
            witness_vertex = 0
            witness_f = np.full(n, b)
            witness_f[0] = a
            witness_out = C @ witness_f
            witness_exits = bool(witness_out[0] < a - tol or witness_out[0] > b + tol)
        ok = violations == 0 and (expected == "contained" or witness_exits)
    else:
        box = (a, b)
        expected = "not-guaranteed"
        violations = int(np.count_nonzero(np.any((out < a - tol) | (out > b + tol), axis=1)))
        off = op.O - np.diag(np.diag(op.O))
        if np.all(off >= 0):
            # all A°_ij <= 0
            cand = []
            for i in range(n):
                f = np.full(n, b)
                f[i] = a
                cand.append((float((C @ f)[i]), i, f))
            val, witness_vertex, witness_f = min(cand, key=lambda c: c[0])
            bound = a * (1 - eps) - b * eps
        else:
            lows = np.where(C >= 0, a, b)
            highs = np.where(C >= 0, b, a)
            low_val = np.einsum("ij,ij->i", C, lows)
            high_val = np.einsum("ij,ij->i", C, highs)
            i_lo, i_hi = int(np.argmin(low_val)), int(np.argmax(high_val))
            if a - low_val[i_lo] >= high_val[i_hi] - b:
                witness_vertex, witness_f = i_lo, lows[i_lo].astype(float)
            else:
                witness_vertex, witness_f = i_hi, highs[i_hi].astype(float)
        witness_out = C @ witness_f
        v = witness_out[witness_vertex]
        witness_exits = bool(v < a - tol or v > b + tol)
        ok = witness_exits
    return InvarianceReport(
        op.family, float(eps), (a, b), expected, box, int(F.shape[0]), violations,
        float(out.min()), float(out.max()), witness_f, witness_out, witness_vertex,
        witness_exits, bound, bool(ok),
    )


# --------------------------------------------------------------------------
# commutativity on [0, 1/4]


@dataclass
class CommutativityReport:
    mu: float
    eps: float
    box: tuple[float, float]
    samples: int
    max_discrepancy: float
    max_path_disagreement: float
    lhs: np.ndarray = field(repr=False)
    rhs: np.ndarray = field(repr=False)
    ok: bool = False

    def as_dict(self) -> dict:
        return {
            "mu": self.mu,
            "eps": self.eps,
            "box": list(self.box),
            "samples": self.samples,
            "max_discrepancy": self.max_discrepancy,
            "max_path_disagreement": self.max_path_disagreement,
            "ok": self.ok,
        }


def _expanded_sides(O: np.ndarray, eps: float, f, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Both sides written out entry by entry, without matrix products."""
    n = O.shape[0]

    def couple(v):
        out = np.empty_like(v)
        for k in range(n):
            acc = v[:, k] * (1 - eps * O[k, k])
            for l in range(n):
                if l != k:
                    acc = acc - v[:, l] * eps * O[k, l]
            out[:, k] = acc
        return out

    z = couple(f(X))
    lhs = couple(f(z))
    y = couple(f(f(X)))
    rhs = couple(y)
    return lhs, rhs


def commutativity_check(
    F,
    mu: float,
    eps: float,
    samples: int = 10_000,
    seed: int = 0,
    box: tuple[float, float] = (0.0, 0.25),
    states=None,
) -> CommutativityReport:
    """Compare ``(C o f)^2`` with ``C^2 o f^2`` for the tent map.

    States are drawn uniformly from ``box^N`` unless ``states`` is given.  On
    ``[0, 1/4]^N`` the two agree for random-walk Laplacians; ``ok`` is only
    asserted there.  Both sides are also evaluated through an entrywise
    expansion and compared with the matrix evaluation.
    """
    if not 0 <= eps <= 1:
        raise ValidationError("eps must lie in [0, 1]")
    m = ScalarMap("tent", mu)
    op = coupling(F, eps)
    C = op.C
    n = C.shape[0]
    if states is None:
        X = unit_rng(seed, 0).uniform(box[0], box[1], (samples, n))
    else:
        X = np.atleast_2d(np.asarray(states, dtype=float))
    lhs = m(m(X) @ C.T) @ C.T
    rhs = m(m(X)) @ C.T @ C.T
    lhs2, rhs2 = _expanded_sides(op.O, eps, m, X)
    disc = float(np.abs(lhs - rhs).max())
    paths = float(max(np.abs(lhs - lhs2).max(), np.abs(rhs - rhs2).max()))
    in_claim = op.family == "random-walk" and box[0] >= 0 and box[1] <= 0.25
    ok = bool(in_claim and disc < COMMUTE_TOL and paths < COMMUTE_TOL)
    return CommutativityReport(float(mu), float(eps), tuple(box), X.shape[0], disc, paths, lhs, rhs, ok)


# --------------------------------------------------------------------------
# ensembles


@dataclass
class EnsembleResult:
    family: str
    eps: float
    map: ScalarMap
    ensemble: int
    steps: int
    bins: int
    seed: int
    ranges: np.ndarray  # (T+1, 2) histogram range per t
    realized: np.ndarray  # (T+1, N, 2) per-node min/max
    counts: np.ndarray  # (T+1, N, bins)
    domain_escaped: bool

    @property
    def realized_range(self) -> tuple[float, float]:
        return float(self.realized[..., 0].min()), float(self.realized[..., 1].max())

    @property
    def contained(self) -> bool:
        lo, hi = self.realized_range
        return lo >= 0.0 and hi <= 1.0

    def first_escape(self) -> int | None:
        bad = np.flatnonzero((self.realized[..., 0].min(axis=1) < 0) | (self.realized[..., 1].max(axis=1) > 1))
        return int(bad[0]) if bad.size else None


def initial_ensemble(n: int, M: int, seed: int) -> np.ndarray:
    """Uniform states on ``[0, 1]^n``, generated in fixed-size seeded blocks."""
    blocks = []
    for k in range(-(-M // BLOCK_SIZE)):
        size = min(BLOCK_SIZE, M - k * BLOCK_SIZE)
        blocks.append(unit_rng(seed, k).random((size, n)))
    return np.vstack(blocks)


def ensemble_run(O, m: ScalarMap, eps: float, M: int = 10_000, T: int = 30, bins: int = 50, seed: int = 0) -> EnsembleResult:
    """Iterate ``M`` uniform initial conditions for ``T`` steps.

    Per time step the histogram range is the realized range widened to cover
    ``[0, 1]``, so escapes stay visible.
    """
    if M < 1 or T < 0 or bins < 1:
        raise ValidationError("need M >= 1, T >= 0 and bins >= 1")
    op = coupling(O, eps)
    n = op.C.shape[0]
    state = EnsembleState(initial_ensemble(n, M, seed), 0, seed)
    ranges = np.empty((T + 1, 2))
    realized = np.empty((T + 1, n, 2))
    counts = np.empty((T + 1, n, bins), dtype=np.int64)
    for t in range(T + 1):
        if t:
            state = chm_step(state, op, m)
        X = state.X
        realized[t, :, 0] = X.min(axis=0)
        realized[t, :, 1] = X.max(axis=0)
        lo = min(0.0, float(realized[t, :, 0].min()))
        hi = max(1.0, float(realized[t, :, 1].max()))
        ranges[t] = lo, hi
        for i in range(n):
            counts[t, i], _ = np.histogram(X[:, i], bins=bins, range=(lo, hi))
    return EnsembleResult(
        op.family, float(eps), m, M, T, bins, int(seed), ranges, realized, counts, state.domain_escaped
    )

"""Maximum principle and Dirichlet problems for Laplacians ``Λ = G - A``.

The class covered by the maximum principle has a positive diagonal ``G``, a
non-negative ``A`` and ``G_ii = sum_j A_ij``.  Random-walk Laplacians are in
it (``G = I``, ``A = D^{-1} A``) and so are their unnormalized versions
(``G = D``).  Chemical Laplacians are not, which is why they can have
non-constant harmonic functions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .errors import ComputationError, ValidationError
from .hypergraph import _components
from .rw import RWLaplacian, WalkFactorization, to_float

__all__ = [
    "GeneralLaplacian",
    "DirichletProblem",
    "MaximumPrincipleVerdict",
    "check_maximum_principle",
    "solve_dirichlet",
]

HARMONIC_TOL = 1e-10
CONSTANT_TOL = 1e-9
ROW_TOL = 1e-12


@dataclass(frozen=True)
class GeneralLaplacian:
    """``Λ = diag(G) - A``.

    Construction does not insist on class membership so that operators outside
    it can still be examined; see :attr:`in_class`.
    """

    G: np.ndarray
    A: np.ndarray

    def __post_init__(self):
        G = np.asarray(self.G, dtype=float)
        A = np.asarray(self.A, dtype=float)
        if G.ndim != 1 or A.shape != (G.shape[0], G.shape[0]):
            raise ValidationError("G must be a vector and A a matching square matrix")
        object.__setattr__(self, "G", G)
        object.__setattr__(self, "A", A)

    @classmethod
    def from_matrix(cls, M) -> "GeneralLaplacian":
        """Split a square matrix into its diagonal and minus its off-diagonal part."""
        M = to_float(M.matrix if hasattr(M, "matrix") else M)
        G = np.diag(M).copy()
        A = np.diag(G) - M
        np.fill_diagonal(A, 0.0)
        return cls(G, A)

    @classmethod
    def from_rw(cls, L: RWLaplacian | WalkFactorization, normalized: bool = True) -> "GeneralLaplacian":
        F = L.factorization if isinstance(L, RWLaplacian) else L
        A = to_float(F.A)
        D = to_float(F.D)
        if normalized:
            return cls(np.ones(F.n), A / D[:, None])
        return cls(D, A)

    @property
    def n(self) -> int:
        return self.G.shape[0]

    @property
    def matrix(self) -> np.ndarray:
        return np.diag(self.G) - self.A

    @property
    def in_class(self) -> bool:
        rows = self.A.sum(axis=1)
        return bool(
            np.all(self.G > 0)
            and np.all(self.A >= 0)
            and np.all(np.abs(rows - self.G) <= ROW_TOL * np.maximum(np.abs(self.G), 1.0))
        )

    def neighbours(self) -> list[list[int]]:
        """Support graph of ``A`` (both directions, nonzero entries)."""
        S = (self.A != 0) | (self.A.T != 0)
        np.fill_diagonal(S, False)
        return [list(np.flatnonzero(S[i])) for i in range(self.n)]

    def apply(self, f) -> np.ndarray:
        return self.G * f - self.A @ f


@dataclass
class MaximumPrincipleVerdict:
    status: str  # "not-harmonic" | "consistent" | "violation"
    harmonic: bool
    constant: bool
    in_class: bool
    connected: bool
    residual: float
    witness: np.ndarray | None
    message: str


def check_maximum_principle(L, f) -> MaximumPrincipleVerdict:
    """Test whether a harmonic ``f`` is forced to be constant.

    ``L`` may be a :class:`GeneralLaplacian`, a Laplacian object or a bare
    matrix.  A non-constant ``f`` with ``Λf = 0`` on a connected support is
    returned as a violation witness; for operators in the class that cannot
    happen.
    """
    lap = L if isinstance(L, GeneralLaplacian) else GeneralLaplacian.from_matrix(L)
    f = np.asarray(f, dtype=float)
    if f.shape != (lap.n,):
        raise ValidationError(f"expected a function on {lap.n} vertices")
    scale = max(np.abs(f).max(), 1.0)
    residual = float(np.abs(lap.apply(f)).max())
    harmonic = residual <= HARMONIC_TOL * scale
    constant = bool(np.ptp(f) < CONSTANT_TOL * scale)
    connected = max(_components(lap.n, lap.neighbours())) == 0
    in_class = lap.in_class
    if not harmonic:
        return MaximumPrincipleVerdict(
            "not-harmonic", False, constant, in_class, connected, residual, None, "Λf ≠ 0"
        )
    if constant or not connected:
        msg = "harmonic and constant" if constant else "harmonic on a disconnected support"
        return MaximumPrincipleVerdict("consistent", True, constant, in_class, connected, residual, None, msg)
    msg = (
        "non-constant harmonic function: operator is outside the maximum-principle class"
        if not in_class
        else "non-constant harmonic function for an operator inside the class"
    )
    return MaximumPrincipleVerdict("violation", True, False, in_class, connected, residual, f.copy(), msg)


@dataclass(frozen=True)
class DirichletProblem:
    """Boundary vertex positions with prescribed values."""

    laplacian: GeneralLaplacian
    boundary: Mapping[int, float]

    def __post_init__(self):
        lap = self.laplacian
        if not isinstance(lap, GeneralLaplacian):
            if isinstance(lap, (RWLaplacian, WalkFactorization)):
                lap = GeneralLaplacian.from_rw(lap)
            else:
                lap = GeneralLaplacian.from_matrix(lap)
            object.__setattr__(self, "laplacian", lap)
        b = {int(k): float(v) for k, v in dict(self.boundary).items()}
        if not b:
            raise ValidationError("boundary must be nonempty")
        if len(b) >= lap.n:
            raise ValidationError("boundary must be a proper subset of the vertices")
        if any(not 0 <= k < lap.n for k in b):
            raise ValidationError("boundary vertex out of range")
        object.__setattr__(self, "boundary", b)

    @property
    def interior(self) -> list[int]:
        return [i for i in range(self.laplacian.n) if i not in self.boundary]


def solve_dirichlet(P: DirichletProblem) -> np.ndarray:
    """Harmonic extension of the boundary data by a dense direct solve."""
    lap = P.laplacian
    if not lap.in_class:
        raise ValidationError(
            "operator is outside the maximum-principle class (needs G > 0, A >= 0, G_ii = sum_j A_ij)"
        )
    interior = P.interior
    nb = lap.neighbours()
    pos = {v: k for k, v in enumerate(interior)}
    sub = [[pos[w] for w in nb[v] if w in pos] for v in interior]
    if max(_components(len(interior), sub)) != 0:
        raise ValidationError("interior vertex set is not connected")
    bnd = sorted(P.boundary)
    g = np.array([P.boundary[k] for k in bnd])
    M = lap.matrix
    M_ii = M[np.ix_(interior, interior)]
    rhs = -M[np.ix_(interior, bnd)] @ g
    try:
        cond = np.linalg.cond(M_ii)
        if not np.isfinite(cond) or cond > 1e14:
            raise np.linalg.LinAlgError("ill conditioned")
        u = np.linalg.solve(M_ii, rhs)
    except np.linalg.LinAlgError as exc:
        raise ComputationError(f"singular interior block: {exc}") from None
    f = np.empty(lap.n)
    f[bnd] = g
    f[interior] = u
    return f

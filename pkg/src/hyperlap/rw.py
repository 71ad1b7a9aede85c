"""Random-walk Laplacians on hypergraphs.

Every walk is described by a factorization ``(D, A)``: a positive diagonal
``D`` and a non-negative zero-diagonal ``A`` with ``P(v_i -> v_j) = A_ij / D_ii``.
The Laplacian is ``L = I - D^{-1} A``.  Factorizations built from a hypergraph
are exact (object arrays of :class:`fractions.Fraction`); everything also
works on float arrays.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ValidationError
from .hypergraph import AnyHypergraph, WeightedGraph, is_connected

__all__ = [
    "Variant",
    "WalkFactorization",
    "RWLaplacian",
    "factorize",
    "identity_factorization",
    "graph_factorization",
    "assemble",
    "transpose_laplacian",
    "effective_graph",
    "graph_rw_laplacian",
    "to_float",
    "is_exact",
]

ROW_SUM_TOL = 1e-12


class Variant(str, enum.Enum):
    SIMPLE = "simple"
    TWO_STEP = "two-step"
    EDGE_SIZE_BIASED = "edge-size-biased"
    ORIENTED_RW = "oriented-rw"
    GRAPH_FORWARD = "graph-forward"
    GRAPH_BACKWARD = "graph-backward"
    IDENTITY = "identity"


HYPERGRAPH_VARIANTS = (Variant.SIMPLE, Variant.TWO_STEP, Variant.EDGE_SIZE_BIASED, Variant.ORIENTED_RW)


def is_exact(M: np.ndarray) -> bool:
    return np.asarray(M).dtype == object


def to_float(M) -> np.ndarray:
    return np.asarray(M, dtype=float)


def _fraction_zeros(shape) -> np.ndarray:
    out = np.empty(shape, dtype=object)
    out.fill(Fraction(0))
    return out


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class WalkFactorization:
    """Degree diagonal ``D`` and affinity matrix ``A`` of a walk."""

    D: np.ndarray
    A: np.ndarray
    variant: Variant
    vertices: tuple[str, ...] = ()

    def __post_init__(self):
        D = np.asarray(self.D)
        A = np.asarray(self.A)
        n = D.shape[0]
        if D.ndim != 1 or A.shape != (n, n):
            raise ValidationError("D must be a vector and A a matching square matrix")
        if not all(d > 0 for d in D):
            raise ValidationError("D must be positive")
        if any(a < 0 for a in A.flat):
            raise ValidationError("A must be non-negative")
        if any(A[i, i] != 0 for i in range(n)):
            raise ValidationError("A must have a zero diagonal")
        rows = A.sum(axis=1)
        if is_exact(A) and is_exact(D):
            bad = [i for i in range(n) if rows[i] != D[i]]
        else:
            bad = [i for i in range(n) if abs(float(rows[i]) / float(D[i]) - 1.0) > ROW_SUM_TOL]
        if bad:
            raise ValidationError(f"row sums of A differ from D at rows {bad}")
        object.__setattr__(self, "D", _readonly(D))
        object.__setattr__(self, "A", _readonly(A))
        object.__setattr__(self, "variant", Variant(self.variant))
        if not self.vertices:
            object.__setattr__(self, "vertices", tuple(f"v{i + 1}" for i in range(n)))

    @property
    def n(self) -> int:
        return self.D.shape[0]

    @property
    def symmetric(self) -> bool:
        return bool(np.all(self.A == self.A.T))

    @property
    def exact(self) -> bool:
        return is_exact(self.A) and is_exact(self.D)

    @property
    def transition(self) -> np.ndarray:
        """Row-stochastic matrix ``D^{-1} A``."""
        return self.A / self.D[:, None]


@dataclass(frozen=True)
class RWLaplacian:
    L: np.ndarray
    factorization: WalkFactorization

    @property
    def n(self) -> int:
        return self.L.shape[0]

    @property
    def matrix(self) -> np.ndarray:
        return to_float(self.L)


def _require_connected(H: AnyHypergraph) -> None:
    if not is_connected(H):
        raise ValidationError("hypergraph is not connected")


def factorize(H: AnyHypergraph, variant: Variant | str) -> WalkFactorization:
    """Exact ``(D, A)`` for one of the hypergraph walk rules.

    ``simple``: pick a co-member weighted by the number of shared hyperedges.
    ``two-step``: pick a hyperedge uniformly, then another of its vertices.
    ``edge-size-biased``: co-members weighted by ``|e| - 1`` of shared hyperedges.
    ``oriented-rw``: like two-step, but only to anti-oriented vertices.
    """
    variant = Variant(variant)
    _require_connected(H)
    n = H.n
    A = _fraction_zeros((n, n))
    D = _fraction_zeros(n)
    if variant is Variant.SIMPLE:
        for e in H.edges:
            for i in e:
                D[i] += len(e) - 1
                for j in e:
                    if i != j:
                        A[i, j] += 1
    elif variant is Variant.TWO_STEP:
        for e in H.edges:
            w = Fraction(1, len(e) - 1)
            for i in e:
                D[i] += 1
                for j in e:
                    if i != j:
                        A[i, j] += w
    elif variant is Variant.EDGE_SIZE_BIASED:
        for e in H.edges:
            for i in e:
                for j in e:
                    if i != j:
                        A[i, j] += len(e) - 1
        D = A.sum(axis=1)
    elif variant is Variant.ORIENTED_RW:
        if not H.oriented:
            raise ValidationError("oriented-rw needs an oriented hypergraph")
        for name, ins, outs in zip(H.edge_names, H.inputs, H.outputs):
            for own, other in ((ins, outs), (outs, ins)):
                for i in own:
                    if not other:
                        raise ValidationError(
                            f"vertex {H.vertices[i]!r} has no anti-oriented partner in hyperedge {name!r}"
                        )
                    D[i] += 1
                    w = Fraction(1, len(other))
                    for j in other:
                        A[i, j] += w
    else:
        raise ValidationError(f"{variant.value} is not a hypergraph walk rule")
    zero = [H.vertices[i] for i in range(n) if D[i] == 0 or A[i].sum() == 0]
    if zero:
        raise ValidationError(f"vertices with zero transition weight: {zero}")
    return WalkFactorization(D, A, variant, H.vertices)


def identity_factorization(P, vertices=()) -> WalkFactorization:
    """Wrap any row-stochastic kernel as ``D = I, A = P``."""
    P = np.asarray(P)
    if P.ndim != 2 or P.shape[0] != P.shape[1]:
        raise ValidationError("kernel must be square")
    one = Fraction(1) if is_exact(P) else 1.0
    D = np.array([one] * P.shape[0], dtype=P.dtype)
    return WalkFactorization(D, P, Variant.IDENTITY, tuple(vertices))


def graph_factorization(G: WeightedGraph, direction: str = "forward") -> WalkFactorization:
    """Factorization of the classical walk on a weighted graph.

    ``backward`` walks the reversed graph.
    """
    if direction == "forward":
        W, variant = G.weights, Variant.GRAPH_FORWARD
    elif direction == "backward":
        W, variant = G.weights.T, Variant.GRAPH_BACKWARD
    else:
        raise ValidationError(f"unknown direction {direction!r}")
    return WalkFactorization(W.sum(axis=1), W, variant, G.vertices)


def assemble(F: WalkFactorization) -> RWLaplacian:
    """``L = I - D^{-1} A``."""
    n = F.n
    L = -F.transition
    for i in range(n):
        L[i, i] = Fraction(1) if F.exact else 1.0
    return RWLaplacian(_readonly(L), F)


def transpose_laplacian(L: RWLaplacian) -> np.ndarray:
    """Backward operator ``I - A D^{-1}``; its columns sum to zero."""
    return _readonly(L.L.T)


def effective_graph(F: WalkFactorization) -> WeightedGraph:
    """Weighted graph with ``w_ij = A_ij``; directed unless ``A`` is symmetric."""
    return WeightedGraph(F.vertices, F.A)


def graph_rw_laplacian(G: WeightedGraph, direction: str = "forward") -> np.ndarray:
    """Normalized Laplacian of a weighted graph.

    forward:  ``(Lf)(v) = f(v) - sum_u w_vu f(u) / d_out(v)``
    backward: ``(L*g)(w) = g(w) - sum_z w_zw g(z) / d_in(z)``

    For symmetric weights the backward operator is the transpose of the
    forward one.  Exact when the weights are :class:`Fraction` objects.
    """
    W = G.weights
    n = G.n
    exact = is_exact(W)
    one = Fraction(1) if exact else 1.0
    if direction == "forward":
        d = G.out_degrees
        if any(x == 0 for x in d):
            raise ValidationError("forward Laplacian needs positive out-degrees")
        L = -W / d[:, None]
    elif direction == "backward":
        d = G.in_degrees
        if any(x == 0 for x in d):
            raise ValidationError("backward Laplacian needs positive in-degrees")
        L = -(W / d[:, None]).T
    else:
        raise ValidationError(f"unknown direction {direction!r}")
    if not exact:
        L = L.astype(float)
    for i in range(n):
        L[i, i] = one
    return L


def variant_for_hypergraph(H: AnyHypergraph) -> Variant:
    """Default walk rule: oriented-rw on oriented input, two-step otherwise."""
    return Variant.ORIENTED_RW if H.oriented else Variant.TWO_STEP


def laplacian_for(H: AnyHypergraph, variant: Variant | str) -> RWLaplacian:
    return assemble(factorize(H, variant))


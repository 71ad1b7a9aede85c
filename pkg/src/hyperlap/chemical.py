"""Boundary operator and chemical Laplacians of oriented hypergraphs.

With the signed incidence ``B`` (``+1`` input, ``-1`` output) the boundary of a
vertex function is ``B f`` and its adjoint, for the scalar products
``(f, g)_V = sum t(v) f g`` and ``(w, y)_E = sum w y``, is ``T^{-1} B^T``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .hypergraph import OrientedHypergraph, degrees_t

__all__ = [
    "Kind",
    "ChemicalLaplacian",
    "OrientedAdjacency",
    "signed_incidence",
    "oriented_adjacency",
    "size_degrees",
    "boundary_apply",
    "adjoint_apply",
    "chemical",
    "operator_form",
]


class Kind(str, enum.Enum):
    L_CIRC = "chemical"
    DELTA_CIRC = "chemical-delta"


def _require_oriented(H) -> OrientedHypergraph:
    if not isinstance(H, OrientedHypergraph):
        raise ValidationError("chemical Laplacians need an oriented hypergraph")
    return H


def signed_incidence(H: OrientedHypergraph) -> np.ndarray:
    """``|E| x N`` matrix with ``+1`` for inputs and ``-1`` for outputs."""
    H = _require_oriented(H)
    B = np.zeros((len(H.inputs), H.n), dtype=np.int64)
    for k, (ins, outs) in enumerate(zip(H.inputs, H.outputs)):
        B[k, list(ins)] = 1
        B[k, list(outs)] = -1
    return B


def size_degrees(H) -> np.ndarray:
    """``d(v) = sum over hyperedges containing v of (|e| - 1)``."""
    d = np.zeros(H.n, dtype=np.int64)
    for e in H.edges:
        d[list(e)] += len(e) - 1
    return d


@dataclass(frozen=True)
class OrientedAdjacency:
    A: np.ndarray
    t: np.ndarray
    d: np.ndarray


def oriented_adjacency(H: OrientedHypergraph) -> OrientedAdjacency:
    """Anti-oriented minus co-oriented hyperedge counts for every vertex pair."""
    B = signed_incidence(H)
    # (B^T B)_ij = co-oriented - anti-oriented for i != j
    A = -(B.T @ B)
    np.fill_diagonal(A, 0)
    return OrientedAdjacency(A, degrees_t(H), size_degrees(H))


def boundary_apply(H: OrientedHypergraph, f) -> np.ndarray:
    """``(delta f)(e) = sum_inputs f - sum_outputs f``."""
    H = _require_oriented(H)
    f = np.asarray(f, dtype=float)
    if f.shape != (H.n,):
        raise ValidationError(f"expected a function on {H.n} vertices")
    return np.array([f[list(i)].sum() - f[list(o)].sum() for i, o in zip(H.inputs, H.outputs)])


def adjoint_apply(H: OrientedHypergraph, gamma) -> np.ndarray:
    """``(delta* gamma)(v) = (sum_{v input} gamma - sum_{v output} gamma) / t(v)``."""
    H = _require_oriented(H)
    gamma = np.asarray(gamma, dtype=float)
    if gamma.shape != (len(H.inputs),):
        raise ValidationError(f"expected a function on {len(H.inputs)} hyperedges")
    out = np.zeros(H.n)
    t = np.zeros(H.n)
    for g, ins, outs in zip(gamma, H.inputs, H.outputs):
        for v in ins:
            out[v] += g
            t[v] += 1
        for v in outs:
            out[v] -= g
            t[v] += 1
    if np.any(t == 0):
        raise ValidationError("isolated vertex")
    return out / t


def operator_form(H: OrientedHypergraph, f) -> np.ndarray:
    """``L° f`` evaluated as ``delta*(delta f)``."""
    return adjoint_apply(H, boundary_apply(H, f))


@dataclass(frozen=True)
class ChemicalLaplacian:
    matrix: np.ndarray
    kind: Kind
    source: OrientedHypergraph

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def weights(self) -> np.ndarray:
        """Diagonal of the scalar product making the operator self-adjoint."""
        return (degrees_t(self.source) if self.kind is Kind.L_CIRC else size_degrees(self.source)).astype(float)


def chemical(H: OrientedHypergraph, kind: Kind | str = Kind.L_CIRC) -> ChemicalLaplacian:
    """Matrix form ``L° = I - T^{-1} A°`` or ``Δ° = D^{-1} T - D^{-1} A°``."""
    kind = Kind(kind)
    adj = oriented_adjacency(_require_oriented(H))
    t = adj.t.astype(float)
    if np.any(t == 0):
        raise ValidationError("isolated vertex")
    if kind is Kind.L_CIRC:
        M = np.eye(H.n) - adj.A / t[:, None]
    else:
        d = adj.d.astype(float)
        if np.any(d == 0):
            raise ValidationError("vertex with d(v) = 0")
        M = np.diag(t / d) - adj.A / d[:, None]
    M.flags.writeable = False
    return ChemicalLaplacian(M, kind, H)

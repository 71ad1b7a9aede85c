"""Eigenvalues, Rayleigh quotients and spectral certificates.

Operators handled here are self-adjoint for a diagonal scalar product
``(f, g)_W = sum w_i f_i g_i`` whenever ``W^{1/2} M W^{-1/2}`` is symmetric:
random-walk Laplacians with symmetric ``A`` and ``W = D``, ``L°`` with
``W = T`` and ``Δ°`` with ``W = diag(d)``.  Those are solved with a symmetric
eigensolver; anything else falls back to a general one and may report
complex eigenvalues.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .chemical import ChemicalLaplacian, boundary_apply
from .errors import ValidationError
from .hypergraph import AnyHypergraph, OrientedHypergraph, degrees_t, is_bipartite_graph, is_connected, max_cardinality
from .rw import RWLaplacian, WalkFactorization, effective_graph, to_float

__all__ = [
    "Spectrum",
    "SpectralCertificate",
    "MinMaxReport",
    "eigen_decompose",
    "rayleigh_quotient",
    "weighted_rq",
    "verify_minmax",
    "certify",
    "operator_and_weights",
]

EIG_TOL = 1e-9
SYM_TOL = 1e-12


@dataclass(frozen=True)
class Spectrum:
    """Ascending eigenvalues, eigenvectors as columns, and the weights used.

    For symmetric-equivalent operators the eigenvectors are orthonormal in the
    weighted scalar product.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    weights: np.ndarray
    self_adjoint: bool

    @property
    def real(self) -> bool:
        return bool(np.all(np.abs(np.imag(self.eigenvalues)) < 1e-10))

    @property
    def lambda_min(self) -> float:
        return float(np.real(self.eigenvalues[0]))

    @property
    def lambda_max(self) -> float:
        return float(np.real(self.eigenvalues[-1]))


def operator_and_weights(M) -> tuple[np.ndarray, np.ndarray]:
    """Dense float matrix plus the natural scalar-product weights."""
    if isinstance(M, RWLaplacian):
        return M.matrix, to_float(M.factorization.D)
    if isinstance(M, ChemicalLaplacian):
        return np.asarray(M.matrix, dtype=float), M.weights
    M = to_float(M)
    return M, np.ones(M.shape[0])


def eigen_decompose(M, weights=None) -> Spectrum:
    """Eigen-decompose ``M`` using the weighted symmetrization when possible.

    ``weights`` defaults to the natural weights of a Laplacian object and to
    ones for a bare matrix.
    """
    mat, natural = operator_and_weights(M)
    w = natural if weights is None else np.asarray(weights, dtype=float)
    n = mat.shape[0]
    if mat.ndim != 2 or mat.shape != (n, n) or w.shape != (n,):
        raise ValidationError("dimension mismatch between operator and weights")
    if not (np.all(np.isfinite(mat)) and np.all(np.isfinite(w))):
        raise ValidationError("non-finite entries")
    if np.any(w <= 0):
        raise ValidationError("weights must be positive")
    s = np.sqrt(w)
    S = s[:, None] * mat / s[None, :]
    scale = max(np.abs(S).max(), 1.0)
    if np.abs(S - S.T).max() <= SYM_TOL * scale:
        vals, vecs = np.linalg.eigh((S + S.T) / 2)
        vecs = vecs / s[:, None]
        return Spectrum(vals, vecs, w, True)
    vals, vecs = np.linalg.eig(mat)
    if np.all(np.abs(vals.imag) < 1e-10):
        vals, vecs = vals.real, vecs.real
    order = np.lexsort((np.imag(vals), np.real(vals)))
    return Spectrum(vals[order], vecs[:, order], w, False)


def weighted_rq(M: np.ndarray, weights: np.ndarray, g: np.ndarray) -> float:
    """``(Mg, g)_W / (g, g)_W``."""
    g = np.asarray(g, dtype=float)
    denom = float(np.sum(weights * g * g))
    if denom == 0:
        raise ValidationError("Rayleigh quotient of the zero function")
    return float(np.sum(weights * (M @ g) * g)) / denom


def rayleigh_quotient(f, form: WalkFactorization | OrientedHypergraph) -> float:
    """Combinatorial Rayleigh quotient.

    For a walk factorization: ``sum_{i<j} A_ij (f_i - f_j)^2 / sum_i D_ii f_i^2``
    (needs symmetric ``A``).  For an oriented hypergraph, the ``L°`` quotient
    ``sum_e (delta f)(e)^2 / sum_i t(v_i) f_i^2``.
    """
    f = np.asarray(f, dtype=float)
    if not np.any(f):
        raise ValidationError("Rayleigh quotient of the zero function")
    if isinstance(form, WalkFactorization):
        if not form.symmetric:
            raise ValidationError("Rayleigh quotient needs a symmetric A")
        A = to_float(form.A)
        diff = f[:, None] - f[None, :]
        num = np.triu(A * diff**2, 1).sum()
        return float(num / np.sum(to_float(form.D) * f**2))
    if isinstance(form, OrientedHypergraph):
        delta = boundary_apply(form, f)
        return float(np.sum(delta**2) / np.sum(degrees_t(form) * f**2))
    raise ValidationError(f"unsupported form {type(form).__name__}")


@dataclass
class MinMaxReport:
    eigenvalues: np.ndarray
    min_rq: float
    max_rq: float
    eigvec_rq_error: float
    complement_gap: float
    samples: int
    ok: bool
    notes: list[str] = field(default_factory=list)


def verify_minmax(M, weights=None, samples: int = 1000, seed: int = 0, margin: float = np.inf) -> MinMaxReport:
    """Sample Rayleigh quotients against the min-max characterization.

    Checks that sampled quotients stay inside ``[lambda_1, lambda_n]``, that
    every eigenvector reproduces its eigenvalue, and that on the weighted
    orthogonal complement of the first ``k - 1`` eigenvectors the quotient
    never drops below ``lambda_k``.  ``complement_gap`` is the most negative
    ``RQ - lambda_k`` seen there.
    """
    spec = eigen_decompose(M, weights)
    if not spec.self_adjoint:
        raise ValidationError("min-max principle needs a self-adjoint operator")
    mat, _ = operator_and_weights(M)
    w = spec.weights
    lam = spec.eigenvalues
    vecs = spec.eigenvectors
    n = len(lam)
    rng = np.random.default_rng(seed)
    G = rng.standard_normal((samples, n))
    rqs = np.einsum("si,si->s", (G @ mat.T) * w, G) / np.einsum("si,si->s", G * w, G)
    min_rq, max_rq = float(rqs.min()), float(rqs.max())
    eig_err = max(abs(weighted_rq(mat, w, vecs[:, k]) - lam[k]) for k in range(n))
    gap = np.inf
    for k in range(n):
        basis = vecs[:, :k]
        proj = G - (G * w) @ basis @ basis.T if k else G.copy()
        norms = np.einsum("si,si->s", proj * w, proj)
        keep = norms > 1e-20
        if not np.any(keep):
            continue
        P = proj[keep]
        r = np.einsum("si,si->s", (P @ mat.T) * w, P) / norms[keep]
        gap = min(gap, float((r - lam[k]).min()))
    ok = (
        min_rq >= lam[0] - EIG_TOL
        and min_rq <= lam[0] + margin
        and max_rq <= lam[-1] + EIG_TOL
        and eig_err < EIG_TOL
        and gap >= -EIG_TOL
    )
    return MinMaxReport(lam, min_rq, max_rq, float(eig_err), float(gap), samples, bool(ok))


@dataclass
class SpectralCertificate:
    """Spectral facts of one operator, each with the combinatorial check behind it."""

    family: str
    interval: tuple[float, float]
    range_ok: bool
    lambda_min: float
    lambda_max: float
    lambda_min_zero: bool
    constant_kernel: bool
    kernel_dimension: int
    lambda_max_extremal: bool
    witness: dict
    consistent: bool
    eigenvalues: np.ndarray

    def as_dict(self) -> dict:
        return {
            "family": self.family,
            "interval": list(self.interval),
            "range_ok": self.range_ok,
            "lambda_min": self.lambda_min,
            "lambda_max": self.lambda_max,
            "lambda_min_zero": self.lambda_min_zero,
            "constant_kernel": self.constant_kernel,
            "kernel_dimension": self.kernel_dimension,
            "lambda_max_extremal": self.lambda_max_extremal,
            "witness": self.witness,
            "consistent": self.consistent,
        }


def _kernel(spec: Spectrum) -> np.ndarray:
    idx = np.flatnonzero(np.abs(spec.eigenvalues) < EIG_TOL)
    return spec.eigenvectors[:, idx]


def _only_constants(K: np.ndarray) -> bool:
    if K.shape[1] != 1:
        return False
    v = K[:, 0]
    return bool(np.ptp(v) < EIG_TOL * max(np.abs(v).max(), 1e-300))


def certify(M: RWLaplacian | ChemicalLaplacian, H: AnyHypergraph | None = None) -> SpectralCertificate:
    """Check the spectral range, kernel and extremal eigenvalue of ``M``.

    Random-walk family (symmetric ``A``): spectrum in ``[0, 2]``, kernel equal
    to the constants, and ``lambda_max = 2`` exactly when the effective graph
    has a BFS 2-colouring, in which case the top eigenvector must be ``+c`` on
    one colour class and ``-c`` on the other.

    Chemical family: spectrum in ``[0, Psi]``; reports whether 0 is an
    eigenvalue and whether its eigenspace holds non-constant functions.  When
    ``lambda_max = Psi`` the hypergraph must be Psi-uniform (only that
    direction is checked).
    """
    if isinstance(M, RWLaplacian):
        F = M.factorization
        if not F.symmetric:
            raise ValidationError("certificates need a symmetric A")
        if H is not None and not is_connected(H):
            raise ValidationError("hypergraph is not connected")
        spec = eigen_decompose(M)
        lam = spec.eigenvalues
        lo, hi = 0.0, 2.0
        range_ok = bool(spec.real and lam[0] >= lo - EIG_TOL and lam[-1] <= hi + EIG_TOL)
        K = _kernel(spec)
        lmin_zero = abs(lam[0]) < EIG_TOL
        constant = _only_constants(K)
        extremal = abs(lam[-1] - 2.0) < EIG_TOL
        bip, colouring = is_bipartite_graph(effective_graph(F))
        witness: dict = {"bipartite": bip}
        sign_ok = True
        if bip:
            V1, V2 = colouring
            witness["coloring"] = [list(V1), list(V2)]
        if extremal and bip:
            x = spec.eigenvectors[:, -1]
            c = x[V1[0]]
            sign_ok = bool(
                abs(c) > 0
                and np.allclose(x[list(V1)], c, atol=EIG_TOL * abs(c) * 10)
                and np.allclose(x[list(V2)], -c, atol=EIG_TOL * abs(c) * 10)
            )
            witness["sign_pattern"] = sign_ok
        consistent = bool(range_ok and lmin_zero and constant and extremal == bip and sign_ok)
        return SpectralCertificate(
            "random-walk", (lo, hi), range_ok, float(lam[0]), float(lam[-1]), bool(lmin_zero),
            constant, K.shape[1], bool(extremal), witness, consistent, lam,
        )
    if isinstance(M, ChemicalLaplacian):
        src = M.source
        if H is not None and H is not src and H != src:
            raise ValidationError("hypergraph does not match the operator")
        if not is_connected(src):
            raise ValidationError("hypergraph is not connected")
        spec = eigen_decompose(M)
        lam = spec.eigenvalues
        psi, uniform = max_cardinality(src)
        lo, hi = 0.0, float(psi)
        range_ok = bool(spec.real and lam[0] >= lo - EIG_TOL and lam[-1] <= hi + EIG_TOL)
        K = _kernel(spec)
        extremal = abs(lam[-1] - psi) < EIG_TOL
        witness = {"psi": psi, "uniform": uniform}
        if K.shape[1]:
            witness["kernel_has_nonconstant"] = not _only_constants(K)
        consistent = bool(range_ok and (uniform or not extremal))
        return SpectralCertificate(
            M.kind.value, (lo, hi), range_ok, float(lam[0]), float(lam[-1]), bool(K.shape[1] > 0),
            _only_constants(K), K.shape[1], bool(extremal), witness, consistent, lam,
        )
    raise ValidationError("certify needs a random-walk or chemical Laplacian")

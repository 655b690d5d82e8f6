"""Dense complex matrix helpers: Hermitian eigendecomposition with
eigenvalue clustering, spectral functional calculus, tolerant comparisons
and the matrix JSON format.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DimensionError, EvaluationError, NumericalError, SymmetryError

__all__ = [
    "TOL_HERM",
    "TOL_PROJ",
    "TOL_RECON",
    "CLUSTER_GAP",
    "ZERO_THRESHOLD",
    "SpectralDecomposition",
    "as_matrix",
    "hermitize",
    "eig_hermitian",
    "apply_function",
    "mat_approx_eq",
    "is_unitary",
    "commutes",
    "fro",
    "matrix_to_json",
    "matrix_from_json",
    "load_matrix",
    "dump_matrix",
]

TOL_HERM = 1e-10
TOL_PROJ = 1e-10
TOL_RECON = 1e-11
CLUSTER_GAP = 1e-8
ZERO_THRESHOLD = 1e-12


def fro(M) -> float:
    return float(np.linalg.norm(M, "fro"))


def as_matrix(M) -> np.ndarray:
    """Coerce ``M`` to a square, finite complex128 array."""
    M = np.asarray(M, dtype=np.complex128)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] == 0:
        raise DimensionError(f"expected a non-empty square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise NumericalError("matrix has non-finite entries")
    return M


def _same_shape(X, Y):
    X, Y = as_matrix(X), as_matrix(Y)
    if X.shape != Y.shape:
        raise DimensionError(f"dimension mismatch: {X.shape} vs {Y.shape}")
    return X, Y


def hermitize(M) -> np.ndarray:
    """Return the Hermitian part ``(M + M*) / 2``."""
    M = as_matrix(M)
    return (M + M.conj().T) / 2


@dataclass(frozen=True)
class SpectralDecomposition:
    """Clustered spectral resolution ``A = sum_k lambda_k E_k`` with kernel ``E_0``.

    ``bounds[k]`` holds the smallest and largest raw eigenvalue merged into
    cluster ``k``; ``ranks[k]`` the multiplicity.
    """

    eigenvalues: tuple
    projections: tuple
    kernel: np.ndarray
    source_dim: int
    bounds: tuple = ()
    ranks: tuple = ()

    @property
    def clusters(self):
        return list(zip(self.eigenvalues, self.projections))

    @property
    def kernel_rank(self) -> int:
        return self.source_dim - sum(self.ranks)

    def reconstruct(self) -> np.ndarray:
        out = np.zeros((self.source_dim, self.source_dim), dtype=np.complex128)
        for lam, E in self.clusters:
            out += lam * E
        return out

    def residuals(self, A=None) -> dict:
        """Invariant residuals (idempotence, orthogonality, completeness, reconstruction)."""
        I = np.eye(self.source_dim)
        projs = list(self.projections) + [self.kernel]
        idem = max((fro(E @ E - E) for E in projs), default=0.0)
        herm = max((fro(E - E.conj().T) for E in projs), default=0.0)
        orth = 0.0
        for j in range(len(projs)):
            for k in range(j + 1, len(projs)):
                orth = max(orth, fro(projs[j] @ projs[k]))
        out = {
            "idempotence": idem,
            "hermiticity": herm,
            "orthogonality": orth,
            "completeness": fro(sum(projs) - I),
        }
        if A is not None:
            out["reconstruction"] = fro(self.reconstruct() - as_matrix(A))
        return out


def eig_hermitian(A, cluster_gap: float = CLUSTER_GAP,
                  zero_threshold: float = ZERO_THRESHOLD,
                  tol_herm: float = TOL_HERM) -> SpectralDecomposition:
    """Clustered eigendecomposition of a Hermitian matrix.

    Sorted eigenvalues whose consecutive gap is below ``cluster_gap`` are
    merged into one cluster (representative = mean of the merged values,
    projection = sum of the eigenvector outer products). Eigenvalues with
    ``|lambda| <= zero_threshold`` form the kernel projection instead.
    """
    A = as_matrix(A)
    asym = fro(A - A.conj().T)
    if asym > tol_herm:
        raise SymmetryError(f"matrix is not Hermitian: ||A - A*||_F = {asym:.3e}")
    n = A.shape[0]
    try:
        w, V = np.linalg.eigh(hermitize(A))
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"Hermitian eigensolver did not converge: {exc}") from exc

    zero = np.abs(w) <= zero_threshold
    kernel = V[:, zero] @ V[:, zero].conj().T

    groups: list[list[int]] = []
    for i in np.flatnonzero(~zero):
        if groups and w[i] - w[groups[-1][-1]] < cluster_gap:
            groups[-1].append(i)
        else:
            groups.append([i])

    eigenvalues, projections, bounds, ranks = [], [], [], []
    for g in groups:
        Vg = V[:, g]
        eigenvalues.append(float(np.mean(w[g])))
        projections.append(hermitize(Vg @ Vg.conj().T))
        bounds.append((float(w[g[0]]), float(w[g[-1]])))
        ranks.append(len(g))
    return SpectralDecomposition(
        eigenvalues=tuple(eigenvalues),
        projections=tuple(projections),
        kernel=hermitize(kernel) if zero.any() else np.zeros((n, n), dtype=np.complex128),
        source_dim=n,
        bounds=tuple(bounds),
        ranks=tuple(ranks),
    )


def apply_function(sd: SpectralDecomposition, g: Callable[[float], complex],
                   g0: complex = 0.0) -> np.ndarray:
    """Evaluate ``sum_k g(lambda_k) E_k + g0 * E_0``."""
    n = sd.source_dim
    out = np.zeros((n, n), dtype=np.complex128)
    for lam, E in sd.clusters:
        val = complex(g(lam))
        if not np.isfinite(val):
            raise EvaluationError(f"function is not finite at eigenvalue {lam!r}")
        out += val * E
    if g0 != 0:
        out += complex(g0) * sd.kernel
    return out


def mat_approx_eq(X, Y, tol_abs: float = 1e-10, tol_rel: float = 1e-10):
    """Return ``(equal, residual)`` with residual ``||X - Y||_F``."""
    X, Y = _same_shape(X, Y)
    res = fro(X - Y)
    return res <= tol_abs + tol_rel * max(fro(X), fro(Y)), res


def is_unitary(U, tol: float = 1e-10) -> bool:
    U = as_matrix(U)
    I = np.eye(U.shape[0])
    return fro(U.conj().T @ U - I) <= tol and fro(U @ U.conj().T - I) <= tol


def commutes(X, Y, tol: float = 1e-10):
    """Return ``(commute, ||XY - YX||_F)``; the tolerance scales with ``||X|| ||Y||``."""
    X, Y = _same_shape(X, Y)
    res = fro(X @ Y - Y @ X)
    return res <= tol * max(1.0, fro(X) * fro(Y)), res


# -- matrix JSON: {"dim": n, "re": [[...]], "im": [[...]]} ---------------------

def matrix_to_json(M) -> dict:
    M = as_matrix(M)
    return {"dim": M.shape[0], "re": M.real.tolist(), "im": M.imag.tolist()}


def matrix_from_json(obj: dict) -> np.ndarray:
    try:
        dim = int(obj["dim"])
        re = np.asarray(obj["re"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise DimensionError(f"malformed matrix JSON: {exc}") from exc
    im = np.asarray(obj["im"], dtype=float) if obj.get("im") is not None else np.zeros_like(re)
    if re.shape != (dim, dim) or im.shape != (dim, dim):
        raise DimensionError(
            f"matrix JSON declares dim={dim} but has re{re.shape}, im{im.shape}")
    return as_matrix(re + 1j * im)


def load_matrix(path) -> np.ndarray:
    with open(path) as fh:
        return matrix_from_json(json.load(fh))


def dump_matrix(M, path) -> None:
    with open(path, "w") as fh:
        json.dump(matrix_to_json(M), fh)

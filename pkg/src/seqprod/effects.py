"""Quantum effects, projections and density operators, the partial
effect-algebra sum, and seeded generators of structured random inputs.

Every generator is a deterministic function of ``(dim, seed)``; ``seed`` is
anything :func:`numpy.random.default_rng` accepts, so suites can pass
``[master_seed, dim, trial]`` tuples.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import DefinednessError, DimensionError, ParameterError, RangeError, SymmetryError
from .matrix_core import TOL_HERM, TOL_PROJ, as_matrix, fro, hermitize, matrix_from_json

TOL_EIG = 1e-10


@dataclass(frozen=True, eq=False)
class Effect:
    """Self-adjoint operator with ``0 <= A <= I``."""

    matrix: np.ndarray

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)


@dataclass(frozen=True, eq=False)
class Projection(Effect):
    rank: int = 0


@dataclass(frozen=True, eq=False)
class Density:
    matrix: np.ndarray

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)


def _hermitian(M, tol_herm):
    M = as_matrix(M)
    asym = fro(M - M.conj().T)
    if asym > tol_herm:
        raise SymmetryError(f"operator is not Hermitian: ||M - M*||_F = {asym:.3e}")
    return hermitize(M)


def validate_effect(M, tol_eig: float = TOL_EIG, tol_herm: float = TOL_HERM) -> Effect:
    """Check ``0 <= M <= I``; eigenvalues within ``tol_eig`` outside are clamped spectrally."""
    if isinstance(M, Effect):
        return M
    H = _hermitian(M, tol_herm)
    w, V = np.linalg.eigh(H)
    if w[0] < -tol_eig:
        raise RangeError(f"eigenvalue {w[0]!r} < 0: not an effect", w[0])
    if w[-1] > 1 + tol_eig:
        raise RangeError(f"eigenvalue {w[-1]!r} > 1: not an effect", w[-1])
    if w[0] < 0 or w[-1] > 1:
        H = hermitize((V * np.clip(w, 0.0, 1.0)) @ V.conj().T)
    return Effect(H)


def validate_projection(M, tol_proj: float = TOL_PROJ, tol_herm: float = TOL_HERM) -> Projection:
    H = _hermitian(M, tol_herm)
    idem = fro(H @ H - H)
    if idem > tol_proj:
        raise RangeError(f"operator is not idempotent: ||P^2 - P||_F = {idem:.3e}")
    rank = int(round(np.trace(H).real))
    if abs(np.trace(H).real - rank) > 1e-8:
        raise RangeError("projection trace is not an integer")
    return Projection(H, rank)


def validate_density(M, tol_eig: float = TOL_EIG, tol_herm: float = TOL_HERM) -> Density:
    if isinstance(M, Density):
        return M
    H = _hermitian(M, tol_herm)
    lam_min = np.linalg.eigvalsh(H)[0]
    if lam_min < -tol_eig:
        raise RangeError(f"eigenvalue {lam_min!r} < 0: not a density operator", lam_min)
    tr = np.trace(H).real
    if abs(tr - 1) > 1e-10:
        raise RangeError(f"trace {tr!r} != 1: not a density operator")
    return Density(H)


def as_effect(A) -> Effect:
    return A if isinstance(A, Effect) else validate_effect(A)


def _check_dims(A, B):
    if A.dim != B.dim:
        raise DimensionError(f"dimension mismatch: {A.dim} vs {B.dim}")


def identity(dim: int) -> Effect:
    return Effect(np.eye(dim, dtype=np.complex128))


def zero(dim: int) -> Effect:
    return Effect(np.zeros((dim, dim), dtype=np.complex128))


def partial_add(A, B, tol_eig: float = TOL_EIG) -> Effect:
    """Effect-algebra sum ``A (+) B``, defined only when ``A + B <= I``."""
    A, B = as_effect(A), as_effect(B)
    _check_dims(A, B)
    S = A.matrix + B.matrix
    top = np.linalg.eigvalsh(S)[-1]
    if top > 1 + tol_eig:
        raise DefinednessError(f"A + B is not below I (largest eigenvalue {top!r})")
    return validate_effect(S, tol_eig=tol_eig)


def complement(A) -> Effect:
    A = as_effect(A)
    return Effect(np.eye(A.dim) - A.matrix)


def scale(A, c: float) -> Effect:
    if not 0 <= c <= 1:
        raise ParameterError(f"scale factor {c} outside [0, 1]")
    return Effect(c * as_effect(A).matrix)


# -- loading -------------------------------------------------------------------

def load_operator(path, kind: str | None = None):
    """Read matrix JSON and validate by ``kind`` (file field or argument; default effect)."""
    with open(path) as fh:
        obj = json.load(fh)
    M = matrix_from_json(obj)
    kind = kind or obj.get("kind", "effect")
    validators = {"effect": validate_effect, "projection": validate_projection,
                  "density": validate_density}
    if kind not in validators:
        raise ParameterError(f"unknown operator kind {kind!r}")
    return validators[kind](M)


# -- random generators -----------------------------------------------------------

def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary from QR of a complex Ginibre matrix."""
    Z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    d = np.diagonal(R)
    return Q * (d / np.abs(d))


def _spectrum(rng, dim, spectral_floor, kernel_rank=0, degenerate=False):
    if not 0 <= spectral_floor < 1:
        raise ParameterError(f"spectral_floor must lie in [0, 1), got {spectral_floor}")
    lam = rng.uniform(spectral_floor, 1.0, size=dim)
    if kernel_rank:
        lam[:kernel_rank] = 0.0
    if degenerate and dim - kernel_rank >= 2:
        lam[-1] = lam[-2]
    return lam


def _assemble(Q, lam):
    return hermitize((Q * lam) @ Q.conj().T)


def random_effect(dim: int, seed=None, spectral_floor: float = 0.0,
                  kernel_rank: int = 0, degenerate: bool = False) -> Effect:
    """``Q diag(lam) Q*`` with Haar ``Q`` and ``lam ~ U[spectral_floor, 1]``.

    ``kernel_rank`` eigenvalues are set exactly to zero; ``degenerate`` repeats
    one nonzero eigenvalue.
    """
    if dim < 1:
        raise ParameterError("dim must be >= 1")
    if not 0 <= kernel_rank <= dim:
        raise ParameterError(f"kernel_rank must lie in [0, {dim}]")
    rng = np.random.default_rng(seed)
    lam = _spectrum(rng, dim, spectral_floor, kernel_rank, degenerate)
    return validate_effect(_assemble(haar_unitary(dim, rng), lam))


def random_commuting_pair(dim: int, seed=None, spectral_floor: float = 0.0,
                          kernel_rank: int = 0):
    """Two effects diagonal in one shared Haar basis."""
    rng = np.random.default_rng(seed)
    Q = haar_unitary(dim, rng)
    a = _spectrum(rng, dim, spectral_floor, kernel_rank)
    b = _spectrum(rng, dim, spectral_floor)
    return validate_effect(_assemble(Q, a)), validate_effect(_assemble(Q, b))


def random_commuting_triple(dim: int, seed=None, spectral_floor: float = 0.0):
    """Three effects in a shared basis; ``A`` and ``B`` halved when ``A + B`` exceeds ``I``."""
    rng = np.random.default_rng(seed)
    Q = haar_unitary(dim, rng)
    a, b, c = (_spectrum(rng, dim, spectral_floor) for _ in range(3))
    if np.max(a + b) > 1:
        a, b = a / 2, b / 2
    return tuple(validate_effect(_assemble(Q, x)) for x in (a, b, c))


def random_orthogonal_pair(dim: int, seed=None, spectral_floor: float = 0.0):
    """Effects supported on complementary column blocks of a Haar basis (``BA = 0``)."""
    if dim < 2:
        raise ParameterError("random_orthogonal_pair needs dim >= 2")
    rng = np.random.default_rng(seed)
    Q = haar_unitary(dim, rng)
    k = int(rng.integers(1, dim))
    a = _spectrum(rng, k, spectral_floor)
    b = _spectrum(rng, dim - k, spectral_floor)
    S, Sp = Q[:, :k], Q[:, k:]
    return validate_effect(_assemble(S, a)), validate_effect(_assemble(Sp, b))


def random_summable_pair(dim: int, seed=None, spectral_floor: float = 0.0):
    """``(B, C)`` with ``C = (I-B)^1/2 C0 (I-B)^1/2`` so that ``B + C <= I``."""
    rng = np.random.default_rng(seed)
    Q = haar_unitary(dim, rng)
    b = _spectrum(rng, dim, spectral_floor)
    c0 = _spectrum(rng, dim, spectral_floor)
    R = haar_unitary(dim, rng)
    B = validate_effect(_assemble(Q, b))
    return B, fit_below_complement(B, _assemble(R, c0))


def fit_below_complement(B, C0) -> Effect:
    """Compress effect ``C0`` into the room left by ``B``: ``(I-B)^1/2 C0 (I-B)^1/2``."""
    B, C0 = as_effect(B), as_effect(C0)
    _check_dims(B, C0)
    w, V = np.linalg.eigh(B.matrix)
    root = hermitize((V * np.sqrt(np.clip(1 - w, 0.0, 1.0))) @ V.conj().T)
    return validate_effect(hermitize(root @ C0.matrix @ root))


def random_projection(dim: int, seed=None, rank: int | None = None) -> Projection:
    rng = np.random.default_rng(seed)
    Q = haar_unitary(dim, rng)
    if rank is None:
        rank = int(rng.integers(0, dim + 1))
    S = Q[:, :rank]
    return validate_projection(hermitize(S @ S.conj().T))


def random_density(dim: int, seed=None) -> Density:
    """Haar basis with a flat-Dirichlet spectrum."""
    rng = np.random.default_rng(seed)
    Q = haar_unitary(dim, rng)
    p = rng.dirichlet(np.ones(dim))
    M = _assemble(Q, p)
    M = M / np.trace(M).real
    return validate_density(M)

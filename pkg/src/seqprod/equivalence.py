"""Closed-form unitary witness relating a phase-family product to the
standard one.

For an effect ``A = sum_k lambda_k E_k`` with kernel projection ``E_0`` the
witness is ``U = sum_k exp(i theta(lambda_k)) E_k + E_0``. It commutes with
``A``, satisfies ``f(A) = A^1/2 U``, and therefore

    f(A) B f(A)* = U (A^1/2 B A^1/2) U*    for every effect B.

The witness is built per effect ``A``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import effects as fx
from .effects import Effect, as_effect
from .errors import ConditioningError
from .matrix_core import apply_function, eig_hermitian, fro, is_unitary, matrix_to_json
from .sequential import PhaseFamily, seq_family, seq_standard

WITNESS_TOL = 1e-9
# Largest phase spread tolerated inside one merged eigenvalue cluster.
PHASE_SPREAD_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class EquivalenceWitness:
    U: np.ndarray
    effect: Effect
    family: PhaseFamily
    residuals: dict

    def to_dict(self) -> dict:
        return {"family": str(self.family), "effect": matrix_to_json(self.effect.matrix),
                "U": matrix_to_json(self.U), "residuals": dict(self.residuals)}


def build_witness(fam: PhaseFamily, A) -> EquivalenceWitness:
    """Assemble ``U`` from the clustered spectral data of ``A``.

    Raises :class:`ConditioningError` when a merged cluster spans eigenvalues
    whose phases differ by more than ``PHASE_SPREAD_TOL``.
    """
    A = as_effect(A)
    sd = eig_hermitian(A.matrix)
    for lo, hi in sd.bounds:
        spread = abs(float(fam.theta(hi) - fam.theta(lo)))
        if spread > PHASE_SPREAD_TOL:
            raise ConditioningError(
                f"eigenvalues {lo!r} and {hi!r} were merged but carry phases "
                f"{spread:.3e} apart; spectrum too close to resolve")
    phase = apply_function(sd, lambda t: np.exp(1j * fam.theta(t)), 0.0)
    U = phase + sd.kernel
    root = apply_function(sd, np.sqrt)
    F = apply_function(sd, fam.f, 0.0)
    I = np.eye(A.dim)
    residuals = {
        "unitarity": max(fro(U.conj().T @ U - I), fro(U @ U.conj().T - I)),
        "commutation": fro(A.matrix @ U - U @ A.matrix),
        "factorization": fro(F - root @ U),
    }
    return EquivalenceWitness(U, A, fam, residuals)


def witness_valid(w: EquivalenceWitness) -> bool:
    return (is_unitary(w.U, 1e-10) and w.residuals["commutation"] <= 1e-10
            and w.residuals["factorization"] <= WITNESS_TOL)


def conjugation_residual(w: EquivalenceWitness, B) -> float:
    """``||A <> B - U (A o B) U*||_F``."""
    B = as_effect(B)
    lhs = seq_family(w.family, w.effect, B).matrix
    rhs = w.U @ seq_standard(w.effect, B).matrix @ w.U.conj().T
    return fro(lhs - rhs)


def verify_witness(w: EquivalenceWitness, trials: int, seed=0,
                   spectral_floor: float = 0.0, tolerance: float = WITNESS_TOL) -> dict:
    """Check the conjugation identity on ``trials`` random effects ``B``."""
    worst = 0.0
    for t in range(trials):
        B = fx.random_effect(w.effect.dim, [seed, t], spectral_floor)
        worst = max(worst, conjugation_residual(w, B))
    return {"max_residual": worst, "pass": worst <= tolerance and witness_valid(w)}

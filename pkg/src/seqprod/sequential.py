"""Sequential products on effects, phase families, Lüders channels and
measurement statistics.

A phase family fixes ``theta`` on ``(0, 1]`` and induces the spectral function
``f(t) = sqrt(t) * exp(i theta(t))`` with ``f(0) = 0``. The product it defines
is ``A <> B = f(A) B f(A)*``.
"""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass

import numpy as np

from .effects import Density, Effect, _check_dims, as_effect, validate_density, validate_effect
from .errors import ConditioningWarning, DimensionError, ParseError, ZeroProbabilityError
from .matrix_core import CLUSTER_GAP, ZERO_THRESHOLD, apply_function, eig_hermitian, hermitize

STATE_EPS = 1e-12
# Log-phase clusters below this eigenvalue have phase derivative alpha / t large
# enough that eigensolver noise visibly perturbs the phase.
LOG_CONDITIONING_FLOOR = 1e-9

FAMILY_KINDS = ("zero", "const", "log", "linear")
_REAL = r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"


def _fmt(x: float) -> str:
    r = repr(float(x))
    return r[:-2] if r.endswith(".0") else r


@dataclass(frozen=True)
class PhaseFamily:
    """``theta(t)``: zero -> 0, const -> p, log -> p ln t, linear -> p t."""

    kind: str = "zero"
    param: float = 0.0

    def __post_init__(self):
        if self.kind not in FAMILY_KINDS:
            raise ParseError(f"unknown phase family kind {self.kind!r}")
        object.__setattr__(self, "param", float(self.param))

    def theta(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "zero":
            return np.zeros_like(t)
        if self.kind == "const":
            return np.full_like(t, self.param)
        if self.kind == "log":
            return self.param * np.log(t)
        return self.param * t

    def f(self, t):
        """Spectral function ``sqrt(t) e^{i theta(t)}``, with ``f(0) = 0``."""
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape, dtype=np.complex128)
        pos = t > 0
        out[pos] = np.sqrt(t[pos]) * np.exp(1j * self.theta(t[pos]))
        return out if out.ndim else complex(out)

    def conj_f(self, t):
        return np.conj(self.f(t))

    @property
    def satisfies_multiplicativity(self) -> bool:
        """Whether ``f(ab) = xi f(a) f(b)`` holds for a unimodular constant ``xi``."""
        return self.kind != "linear" or self.param == 0

    def __str__(self):
        return self.kind if self.kind == "zero" else f"{self.kind}:{_fmt(self.param)}"


def parse_family(text: str) -> PhaseFamily:
    """Parse ``zero``, ``const:<t>``, ``log:<a>`` or ``linear:<a>``."""
    text = text.strip()
    if text == "zero":
        return PhaseFamily("zero")
    m = re.fullmatch(rf"(const|log|linear):({_REAL})", text)
    if not m:
        raise ParseError(
            f"bad phase family {text!r}; expected zero | const:<real> | log:<real> | linear:<real>")
    return PhaseFamily(m.group(1), float(m.group(2)))


# -- spectral helpers ------------------------------------------------------------

def sqrt_effect(A) -> Effect:
    A = as_effect(A)
    R = apply_function(eig_hermitian(A.matrix), np.sqrt)
    # sqrt maps [0, 1] into itself exactly; re-clamping would only add noise
    return Effect(hermitize(R))


def phase_eval(fam: PhaseFamily, A, cluster_gap: float = CLUSTER_GAP,
               zero_threshold: float = ZERO_THRESHOLD) -> np.ndarray:
    """``f_A(A) = sum_k f(lambda_k) E_k``; the kernel contributes nothing."""
    A = as_effect(A)
    sd = eig_hermitian(A.matrix, cluster_gap, zero_threshold)
    if fam.kind == "log" and fam.param != 0 and sd.eigenvalues \
            and min(sd.eigenvalues) < LOG_CONDITIONING_FLOOR:
        warnings.warn(
            f"log phase evaluated at eigenvalue {min(sd.eigenvalues):.3e}, "
            "close to the zero threshold", ConditioningWarning, stacklevel=2)
    return apply_function(sd, fam.f, 0.0)


def _conjugate(F, B) -> Effect:
    return validate_effect(hermitize(F @ B.matrix @ F.conj().T))


# -- products ----------------------------------------------------------------------

def seq_standard(A, B) -> Effect:
    """``A o B = A^1/2 B A^1/2``."""
    A, B = as_effect(A), as_effect(B)
    _check_dims(A, B)
    return _conjugate(sqrt_effect(A).matrix, B)


def seq_family(fam: PhaseFamily, A, B) -> Effect:
    """``f_A(A) B f_A(A)*``."""
    A, B = as_effect(A), as_effect(B)
    _check_dims(A, B)
    return _conjugate(phase_eval(fam, A), B)


def seq_twisted(A, B) -> Effect:
    """``A^1/2 A^i B A^-i A^1/2`` with ``A^i = exp(i ln A)`` on the support of ``A``.

    ``A^-i`` is taken as the adjoint of ``A^i``, never an inverse.
    """
    A, B = as_effect(A), as_effect(B)
    _check_dims(A, B)
    sd = eig_hermitian(A.matrix)
    R = apply_function(sd, np.sqrt)
    Ai = apply_function(sd, lambda t: np.exp(1j * np.log(t)), 0.0)
    return validate_effect(hermitize(R @ Ai @ B.matrix @ Ai.conj().T @ R))


@dataclass(frozen=True)
class SeqProduct:
    """A sequential-product variant: ``standard``, ``twisted`` or ``family:<spec>``."""

    variant: str = "standard"
    family: PhaseFamily | None = None

    def __call__(self, A, B) -> Effect:
        if self.variant == "standard":
            return seq_standard(A, B)
        if self.variant == "twisted":
            return seq_twisted(A, B)
        return seq_family(self.family, A, B)

    @property
    def uses_log(self) -> bool:
        return self.variant == "twisted" or (
            self.variant == "family" and self.family.kind == "log")

    def __str__(self):
        return f"family:{self.family}" if self.variant == "family" else self.variant


def parse_product(text: str) -> SeqProduct:
    text = text.strip()
    if text in ("standard", "twisted"):
        return SeqProduct(text)
    if text.startswith("family:"):
        return SeqProduct("family", parse_family(text[len("family:"):]))
    raise ParseError(
        f"bad product {text!r}; expected standard | twisted | family:<family> "
        "with <family> = zero | const:<real> | log:<real> | linear:<real>")


# -- Lüders operations and measurement statistics ---------------------------------

def luders_apply(B, T):
    """Unnormalised post-measurement operator ``B^1/2 T B^1/2`` and its trace."""
    B = as_effect(B)
    T = np.asarray(T, dtype=np.complex128)
    if T.shape != (B.dim, B.dim):
        raise DimensionError(f"dimension mismatch: {B.dim} vs {T.shape}")
    R = sqrt_effect(B).matrix
    post = hermitize(R @ T @ R)
    return post, float(np.trace(post).real)


def post_state(P, W, state_eps: float = STATE_EPS) -> Density:
    post, weight = luders_apply(P, W)
    if weight <= state_eps:
        raise ZeroProbabilityError(
            f"outcome probability {weight:.3e} <= {state_eps:.0e}; post-state undefined")
    return validate_density(post / weight)


def luders_sequence(A, B, T) -> np.ndarray:
    """Apply the A-channel then the B-channel: ``B^1/2 A^1/2 T A^1/2 B^1/2``."""
    post, _ = luders_apply(A, T)
    return luders_apply(B, post)[0]


def sequential_prob_identity(A, B, W):
    """Compare ``tr(B A^1/2 W A^1/2)`` with ``tr((A o B) W)``; returns ``(lhs, rhs, residual)``."""
    A, B = as_effect(A), as_effect(B)
    W = np.asarray(W, dtype=np.complex128)
    post, _ = luders_apply(A, W)
    lhs = float(np.trace(B.matrix @ post).real)
    rhs = float(np.trace(seq_standard(A, B).matrix @ W).real)
    return lhs, rhs, abs(lhs - rhs)

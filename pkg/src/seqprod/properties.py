"""Checkers for the sequential-product axioms S1-S5, the two characterisation
conditions on phase families, the phase-function lemma, and seeded suite
runners that aggregate them into JSON-ready reports.

Conditional axioms are exercised on inputs built to satisfy their premise
(commuting, orthogonal, summable); a checker handed inputs that miss the
premise by more than ``hypothesis_tol`` raises :class:`HypothesisError`
rather than reporting a spurious counterexample.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import effects as fx
from .effects import Effect, as_effect, complement, identity
from .errors import HypothesisError
from .matrix_core import apply_function, eig_hermitian, fro, hermitize, matrix_from_json, matrix_to_json
from .sequential import PhaseFamily, SeqProduct, parse_product, phase_eval

DEFAULT_TOL = 1e-9
HYPOTHESIS_TOL = 1e-10
LOG_FLOOR = 1e-3

AXIOMS = ("S1", "S2", "S3", "S4a", "S4b", "S5a", "S5b")
THEOREM1 = ("COND_I", "COND_II", "LEMMA11")


@dataclass
class PropertyResult:
    property_id: str
    passed: bool
    residual: float
    counterexample: dict | None = None
    details: dict = field(default_factory=dict)


def _m(X):
    return matrix_to_json(X.matrix if isinstance(X, Effect) else X)


def _result(pid, residual, tolerance, product, inputs, lhs=None, rhs=None, **details):
    residual = float(residual)
    passed = residual <= tolerance
    cex = None
    if not passed:
        cex = {
            "property": pid,
            "product": str(product),
            "tolerance": tolerance,
            "residual": residual,
            "inputs": {k: _m(v) for k, v in inputs.items()},
            "lhs": None if lhs is None else _m(lhs),
            "rhs": None if rhs is None else _m(rhs),
        }
        cex.update({k: v for k, v in details.items() if k != "kernel_value"})
    return PropertyResult(pid, passed, residual, cex, details)


def _require(ok, message):
    if not ok:
        raise HypothesisError(message)


# -- axioms ----------------------------------------------------------------------

def check_S1(prod: SeqProduct, A, B, C, tolerance=DEFAULT_TOL) -> PropertyResult:
    """Additivity of ``B -> A.B`` on a summable pair, plus ``A.B + A.C <= I``."""
    A, B, C = map(as_effect, (A, B, C))
    lhs = prod(A, B).matrix + prod(A, C).matrix
    rhs = prod(A, fx.partial_add(B, C)).matrix
    excess = max(0.0, float(np.linalg.eigvalsh(hermitize(lhs))[-1]) - 1.0)
    return _result("S1", max(fro(lhs - rhs), excess), tolerance, prod,
                   {"A": A, "B": B, "C": C}, lhs, rhs)


def check_S2(prod: SeqProduct, A, tolerance=DEFAULT_TOL) -> PropertyResult:
    A = as_effect(A)
    lhs = prod(identity(A.dim), A)
    return _result("S2", fro(lhs.matrix - A.matrix), tolerance, prod, {"A": A}, lhs, A)


def check_S3(prod: SeqProduct, A, B, tolerance=DEFAULT_TOL,
             hypothesis_tol=HYPOTHESIS_TOL) -> PropertyResult:
    A, B = as_effect(A), as_effect(B)
    ab = prod(A, B)
    _require(fro(ab.matrix) <= hypothesis_tol, f"S3 premise fails: ||A.B|| = {fro(ab.matrix):.3e}")
    ba = prod(B, A)
    return _result("S3", fro(ba.matrix), tolerance, prod, {"A": A, "B": B}, ab, ba)


def _commute_under(prod, X, Y):
    return fro(prod(X, Y).matrix - prod(Y, X).matrix)


def check_S4(prod: SeqProduct, A, B, C, tolerance=DEFAULT_TOL,
             hypothesis_tol=HYPOTHESIS_TOL):
    """Both clauses of S4 for a pair commuting under ``prod``; returns ``(S4a, S4b)``."""
    A, B, C = map(as_effect, (A, B, C))
    gap = _commute_under(prod, A, B)
    _require(gap <= hypothesis_tol, f"S4 premise fails: ||A.B - B.A|| = {gap:.3e}")
    inputs = {"A": A, "B": B, "C": C}
    nB = complement(B)
    lhs_a, rhs_a = prod(A, nB), prod(nB, A)
    lhs_b, rhs_b = prod(A, prod(B, C)), prod(prod(A, B), C)
    return (
        _result("S4a", fro(lhs_a.matrix - rhs_a.matrix), tolerance, prod, inputs, lhs_a, rhs_a),
        _result("S4b", fro(lhs_b.matrix - rhs_b.matrix), tolerance, prod, inputs, lhs_b, rhs_b),
    )


def check_S5(prod: SeqProduct, A, B, C, tolerance=DEFAULT_TOL,
             hypothesis_tol=HYPOTHESIS_TOL):
    """Both clauses of S5 for ``C`` commuting with ``A`` and ``B``; returns ``(S5a, S5b)``.

    S5b is vacuous (residual 0) when ``A + B`` is not below ``I``.
    """
    A, B, C = map(as_effect, (A, B, C))
    gap = max(_commute_under(prod, C, A), _commute_under(prod, C, B))
    _require(gap <= hypothesis_tol, f"S5 premise fails: commutator residual {gap:.3e}")
    inputs = {"A": A, "B": B, "C": C}
    AB = prod(A, B)
    lhs_a, rhs_a = prod(C, AB), prod(AB, C)
    res_a = _result("S5a", fro(lhs_a.matrix - rhs_a.matrix), tolerance, prod, inputs, lhs_a, rhs_a)
    S = A.matrix + B.matrix
    if np.linalg.eigvalsh(S)[-1] > 1 + fx.TOL_EIG:
        return res_a, _result("S5b", 0.0, tolerance, prod, inputs, vacuous=True)
    S = fx.validate_effect(S)
    lhs_b, rhs_b = prod(C, S), prod(S, C)
    return res_a, _result("S5b", fro(lhs_b.matrix - rhs_b.matrix), tolerance, prod,
                          inputs, lhs_b, rhs_b)


# -- characterisation conditions ----------------------------------------------------

def _family_product(fam):
    return SeqProduct("family", fam)


def check_cond_i(fam: PhaseFamily, A, tolerance=DEFAULT_TOL) -> PropertyResult:
    """``max | |f(t)|^2 - t |`` over the spectrum of ``A`` (0 included when ``A`` has a kernel)."""
    A = as_effect(A)
    sd = eig_hermitian(A.matrix)
    t = np.array(sd.eigenvalues + ((0.0,) if sd.kernel_rank else ()))
    res = float(np.max(np.abs(np.abs(fam.f(t)) ** 2 - t))) if t.size else 0.0
    return _result("COND_I", res, tolerance, _family_product(fam), {"A": A})


def check_cond_ii(fam: PhaseFamily, A, B, tolerance=DEFAULT_TOL,
                  hypothesis_tol=HYPOTHESIS_TOL) -> PropertyResult:
    """Test ``f(A) f(B) = xi f(AB)`` for a unimodular ``xi`` on a commuting pair.

    ``xi`` is read off the largest-modulus entry of ``f(AB)`` and reported in
    ``details["xi"]``.
    """
    A, B = as_effect(A), as_effect(B)
    comm = fro(A.matrix @ B.matrix - B.matrix @ A.matrix)
    _require(comm <= hypothesis_tol, f"condition (ii) premise fails: ||AB - BA|| = {comm:.3e}")
    AB = fx.validate_effect(hermitize(A.matrix @ B.matrix))
    M = phase_eval(fam, A) @ phase_eval(fam, B)
    N = phase_eval(fam, AB)
    if fro(N) <= tolerance:
        xi = 1 + 0j
        res = 0.0 if fro(M) <= tolerance else fro(M)
    else:
        i, j = np.unravel_index(np.argmax(np.abs(N)), N.shape)
        xi = complex(M[i, j] / N[i, j])
        res = max(fro(M - xi * N), abs(abs(xi) - 1))
    return _result("COND_II", res, tolerance, _family_product(fam), {"A": A, "B": B},
                   M, xi * N, xi=[xi.real, xi.imag])


def check_lemma11(fam: PhaseFamily, A, tolerance=DEFAULT_TOL) -> PropertyResult:
    """Residuals of ``F F* = F* F = A``, ``F* = conj(f)(A)`` and ``E0 F = 0`` for ``F = f(A)``."""
    A = as_effect(A)
    sd = eig_hermitian(A.matrix)
    F = phase_eval(fam, A)
    Fh = F.conj().T
    parts = {
        "f_fstar": fro(F @ Fh - A.matrix),
        "fstar_f": fro(Fh @ F - A.matrix),
        "adjoint": fro(Fh - apply_function(sd, fam.conj_f, 0.0)),
        "kernel": fro(sd.kernel @ F),
    }
    return _result("LEMMA11", max(parts.values()), tolerance, _family_product(fam), {"A": A},
                   parts=parts, kernel_value=abs(fam.f(0.0)))


# -- counterexample replay -------------------------------------------------------------

def reverify(cex: dict) -> PropertyResult:
    """Re-run the check recorded in a counterexample payload (e.g. loaded from JSON)."""
    pid = cex["property"]
    prod = parse_product(cex["product"])
    tol = cex["tolerance"]
    inp = {k: fx.validate_effect(matrix_from_json(v)) for k, v in cex["inputs"].items()}
    if pid == "S1":
        return check_S1(prod, inp["A"], inp["B"], inp["C"], tol)
    if pid == "S2":
        return check_S2(prod, inp["A"], tol)
    if pid == "S3":
        return check_S3(prod, inp["A"], inp["B"], tol)
    if pid in ("S4a", "S4b"):
        return check_S4(prod, inp["A"], inp["B"], inp["C"], tol)[pid == "S4b"]
    if pid in ("S5a", "S5b"):
        return check_S5(prod, inp["A"], inp["B"], inp["C"], tol)[pid == "S5b"]
    fam = prod.family
    if pid == "COND_I":
        return check_cond_i(fam, inp["A"], tol)
    if pid == "COND_II":
        return check_cond_ii(fam, inp["A"], inp["B"], tol)
    if pid == "LEMMA11":
        return check_lemma11(fam, inp["A"], tol)
    raise KeyError(pid)


# -- suites ---------------------------------------------------------------------

@dataclass
class PropertyTally:
    property: str
    passed: int = 0
    failed: int = 0
    max_residual: float = 0.0
    counterexample: dict | None = None

    def add(self, r: PropertyResult):
        if r.passed:
            self.passed += 1
        else:
            self.failed += 1
            if self.counterexample is None:
                self.counterexample = r.counterexample
        self.max_residual = max(self.max_residual, r.residual)

    def to_dict(self):
        return {"property": self.property, "pass": self.passed, "fail": self.failed,
                "max_residual": self.max_residual, "counterexample": self.counterexample}


@dataclass
class PropertyReport:
    product: str
    dim: int
    trials: int
    seed: int
    tolerance: float
    results: list
    spectral_floor: float = 0.0

    @property
    def all_passed(self) -> bool:
        return all(t.failed == 0 for t in self.results)

    def tally(self, pid) -> PropertyTally:
        return next(t for t in self.results if t.property == pid)

    def to_dict(self):
        return {"product": self.product, "dim": self.dim, "trials": self.trials,
                "seed": self.seed, "tolerance": self.tolerance,
                "spectral_floor": self.spectral_floor,
                "results": [t.to_dict() for t in self.results]}


def default_floor(prod: SeqProduct) -> float:
    return LOG_FLOOR if prod.uses_log else 0.0


def _variant(trial, dim):
    """Every fourth trial puts a kernel in A, the next one a repeated eigenvalue."""
    if dim < 2:
        return {}
    return {1: {"kernel_rank": 1}, 2: {"degenerate": True}}.get(trial % 4, {})


def _axiom_trial(prod, dim, seed, trial, floor, tolerance, hypothesis_tol):
    s = lambda k: [seed, dim, trial, k]  # noqa: E731
    v = _variant(trial, dim)
    A = fx.random_effect(dim, s(0), floor, **v)
    B, C = fx.random_summable_pair(dim, s(1), floor)
    out = [check_S1(prod, A, B, C, tolerance), check_S2(prod, A, tolerance)]
    if dim >= 2:
        P, Q = fx.random_orthogonal_pair(dim, s(2), floor)
    else:
        P, Q = A, fx.zero(dim)
    out.append(check_S3(prod, P, Q, tolerance, hypothesis_tol))
    A4, B4 = fx.random_commuting_pair(dim, s(3), floor, kernel_rank=v.get("kernel_rank", 0))
    C4 = fx.random_effect(dim, s(4), floor)
    out.extend(check_S4(prod, A4, B4, C4, tolerance, hypothesis_tol))
    out.extend(check_S5(prod, *fx.random_commuting_triple(dim, s(5), floor),
                        tolerance, hypothesis_tol))
    return out


def _theorem1_trial(fam, dim, seed, trial, floor, tolerance, hypothesis_tol):
    s = lambda k: [seed, dim, trial, k]  # noqa: E731
    v = _variant(trial, dim)
    A = fx.random_effect(dim, s(0), floor, **v)
    P, Q = fx.random_commuting_pair(dim, s(1), floor, kernel_rank=v.get("kernel_rank", 0))
    return [check_cond_i(fam, A, tolerance),
            check_cond_ii(fam, P, Q, tolerance, hypothesis_tol),
            check_lemma11(fam, A, tolerance)]


def _run(ids, trial_fn, label, dims, trials, seed, tolerance, floor):
    if trials < 1:
        raise ValueError("trials must be >= 1")
    reports = []
    for dim in dims:
        tallies = {pid: PropertyTally(pid) for pid in ids}
        for t in range(trials):
            for r in trial_fn(dim, t):
                tallies[r.property_id].add(r)
        reports.append(PropertyReport(label, dim, trials, seed, tolerance,
                                      list(tallies.values()), floor))
    return reports


def run_suite(prod: SeqProduct, dims, trials: int, seed: int = 0,
              tolerance: float = DEFAULT_TOL, spectral_floor: float | None = None,
              hypothesis_tol: float = HYPOTHESIS_TOL) -> list[PropertyReport]:
    """Run S1-S5 ``trials`` times per dimension; one :class:`PropertyReport` per dim.

    Trial ``t`` in dimension ``d`` draws its inputs from seeds ``[seed, d, t, k]``,
    so reports are reproducible and independent of evaluation order.
    """
    floor = default_floor(prod) if spectral_floor is None else spectral_floor
    return _run(AXIOMS,
                lambda d, t: _axiom_trial(prod, d, seed, t, floor, tolerance, hypothesis_tol),
                str(prod), dims, trials, seed, tolerance, floor)


def run_theorem1_suite(fam: PhaseFamily, dims, trials: int, seed: int = 0,
                       tolerance: float = DEFAULT_TOL, spectral_floor: float | None = None,
                       hypothesis_tol: float = HYPOTHESIS_TOL) -> list[PropertyReport]:
    """Condition (i), condition (ii) and the phase-function lemma over seeded inputs."""
    prod = _family_product(fam)
    floor = default_floor(prod) if spectral_floor is None else spectral_floor
    return _run(THEOREM1,
                lambda d, t: _theorem1_trial(fam, d, seed, t, floor, tolerance, hypothesis_tol),
                str(prod), dims, trials, seed, tolerance, floor)

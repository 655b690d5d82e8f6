"""Independent reference computations used to freeze and cross-check values.

None of these route through the package's spectral machinery.
"""

import cmath
import math

import numpy as np


def newton_poly_matrix(A, nodes, values):
    """Evaluate at matrix ``A`` the interpolating polynomial through ``(nodes, values)``.

    Divided differences give Newton coefficients; the nested (Horner) form
    ``c0 + (A - x0)(c1 + (A - x1)(c2 + ...))`` is evaluated with plain matrix
    products.
    """
    x = np.asarray(nodes, dtype=float)
    c = np.array(values, dtype=complex)
    n = len(x)
    for j in range(1, n):
        c[j:] = (c[j:] - c[j - 1:-1]) / (x[j:] - x[:n - j])
    I = np.eye(A.shape[0])
    P = c[-1] * I
    for k in range(n - 2, -1, -1):
        P = c[k] * I + (A - x[k] * I) @ P
    return P


def leja_order(nodes):
    """Reorder nodes so each maximises the product of distances to its predecessors."""
    rest = list(nodes)
    out = [max(rest, key=abs)]
    rest.remove(out[0])
    while rest:
        nxt = max(rest, key=lambda t: np.prod([abs(t - s) for s in out]))
        out.append(nxt)
        rest.remove(nxt)
    return out


def eig2_hermitian(M):
    """Eigenvalues of a 2x2 Hermitian matrix from its characteristic polynomial."""
    a, d = M[0][0].real, M[1][1].real
    b = abs(M[0][1])
    tr, det = a + d, a * d - b * b
    disc = math.sqrt(max(tr * tr / 4 - det, 0.0))
    return tr / 2 - disc, tr / 2 + disc


def mat2(a, b, c, d):
    return np.array([[a, b], [c, d]], dtype=complex)


def mul2(X, Y):
    """Explicit 2x2 product, written out entry by entry."""
    return mat2(X[0, 0] * Y[0, 0] + X[0, 1] * Y[1, 0], X[0, 0] * Y[0, 1] + X[0, 1] * Y[1, 1],
                X[1, 0] * Y[0, 0] + X[1, 1] * Y[1, 0], X[1, 0] * Y[0, 1] + X[1, 1] * Y[1, 1])


def adj2(X):
    return mat2(X[0, 0].conjugate(), X[1, 0].conjugate(), X[0, 1].conjugate(), X[1, 1].conjugate())


def diag_phase_product(d, B):
    """``D B D*`` for diagonal ``D = diag(d)``, entrywise."""
    return mat2(d[0] * B[0, 0] * d[0].conjugate(), d[0] * B[0, 1] * d[1].conjugate(),
                d[1] * B[1, 0] * d[0].conjugate(), d[1] * B[1, 1] * d[1].conjugate())


def scalar_f(kind, p, t):
    """Scalar phase function ``sqrt(t) exp(i theta(t))`` computed with cmath."""
    if t == 0:
        return 0j
    theta = {"zero": 0.0, "const": p, "log": p * math.log(t) if t > 0 else 0.0,
             "linear": p * t}[kind]
    return math.sqrt(t) * cmath.exp(1j * theta)

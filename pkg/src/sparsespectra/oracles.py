"""Independent cross-check routines for the verification suite.

These deliberately avoid the solver paths in `linalg`: the determinant
comes from cofactor expansion, eigenvalues from explicit characteristic
polynomial coefficients (trace recursion) plus a simultaneous-iteration
root finder.  Exponential-cost routines are only meant for tiny sizes.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError, ShapeError


def cofactor_det(A) -> complex:
    """det(A) by cofactor expansion along the first row (n <= 10)."""
    M = np.asarray(A, dtype=np.complex128)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ShapeError("cofactor_det needs a square matrix")
    n = M.shape[0]
    if n > 10:
        raise DomainError("cofactor expansion is factorial-cost; n must be <= 10")

    def rec(sub: np.ndarray) -> complex:
        k = sub.shape[0]
        if k == 1:
            return complex(sub[0, 0])
        if k == 2:
            return complex(sub[0, 0] * sub[1, 1] - sub[0, 1] * sub[1, 0])
        total = 0.0 + 0.0j
        sign = 1.0
        for j in range(k):
            minor = np.delete(sub[1:], j, axis=1)
            total += sign * complex(sub[0, j]) * rec(minor)
            sign = -sign
        return total

    return rec(M)


def char_poly_coeffs(A) -> np.ndarray:
    """Coefficients of det(lambda*I - A), highest power first (monic).

    Faddeev-LeVerrier trace recursion; no eigenvalue machinery involved.
    """
    M = np.asarray(A, dtype=np.complex128)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ShapeError("char_poly_coeffs needs a square matrix")
    n = M.shape[0]
    coeffs = np.zeros(n + 1, dtype=np.complex128)
    coeffs[0] = 1.0
    W = np.zeros_like(M)
    eye = np.eye(n, dtype=np.complex128)
    for k in range(1, n + 1):
        W = M @ W + coeffs[k - 1] * eye
        coeffs[k] = -np.trace(M @ W) / k
    return coeffs


def poly_roots(coeffs, max_iter: int = 500, tol: float = 1e-13) -> np.ndarray:
    """All roots of a polynomial by Durand-Kerner simultaneous iteration.

    `coeffs` are highest power first; the polynomial is normalized to be
    monic.  Companion-matrix free.
    """
    c = np.asarray(coeffs, dtype=np.complex128)
    if c.size < 2:
        return np.empty(0, dtype=np.complex128)
    c = c / c[0]
    deg = c.size - 1
    # Standard staggered initial guesses on a non-real ray.
    roots = (0.4 + 0.9j) ** np.arange(1, deg + 1)
    # Scale guesses to the root magnitude bound (Cauchy bound).
    bound = 1.0 + float(np.max(np.abs(c[1:])))
    roots = roots / np.max(np.abs(roots)) * bound

    def horner(z: np.ndarray) -> np.ndarray:
        out = np.full_like(z, c[0])
        for a in c[1:]:
            out = out * z + a
        return out

    for _ in range(max_iter):
        p = horner(roots)
        denom = np.ones_like(roots)
        for i in range(deg):
            others = np.delete(roots, i)
            denom[i] = np.prod(roots[i] - others)
        step = p / denom
        roots = roots - step
        if np.max(np.abs(step)) < tol:
            break
    return roots


def eigenvalue_oracle(A) -> np.ndarray:
    """Eigenvalues as the roots of the explicit characteristic polynomial."""
    return poly_roots(char_poly_coeffs(A))

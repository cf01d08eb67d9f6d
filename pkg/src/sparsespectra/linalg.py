"""Dense complex linear algebra, implemented in-package.

Eigenvalues come from balancing + Householder Hessenberg reduction +
implicit single-shift QR with Wilkinson shifts; Hermitian eigenvalues
from Householder tridiagonalization + implicit-shift QL; singular values
as clamped square roots of the Gram-matrix spectrum.  Everything runs on
plain numpy arrays (complex128) and uses no external solver.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import ContractError, ConvergenceError, DomainError, ShapeError

#: Deflation threshold scale for the QR iteration.
EPS = 2.0**-52

#: A determinant factor f counts as zero iff f <= ZERO_FACTOR_RTOL * ||A||_2.
ZERO_FACTOR_RTOL = 1e-14

#: Singular values computed through the Gram matrix cannot resolve
#: anything below ~sqrt(eps) * ||A||; zeros are declared at this scale.
GRAM_SIGMA_RTOL = 1e-7

#: Total QR iteration budget is ITER_CAP_FACTOR * n.
ITER_CAP_FACTOR = 40

#: Take an ad-hoc exceptional shift after this many stalled iterations.
EXCEPTIONAL_EVERY = 10


@dataclass
class SpectrumResult:
    """Eigenvalue multiset plus iteration bookkeeping."""

    eigenvalues: np.ndarray
    iterations_used: int
    converged: bool


@dataclass
class SingularSpectrum:
    """Singular values sorted descending; values[-1] is sigma_n."""

    values: np.ndarray

    @property
    def least(self) -> float:
        return float(self.values[-1])


class DetMethod(enum.Enum):
    EIGEN = "eigen"
    SINGULAR = "singular"
    ROW_DIST = "row-dist"


def _as_matrix(A) -> np.ndarray:
    M = np.asarray(A, dtype=np.complex128)
    if M.ndim != 2:
        raise ShapeError(f"expected a 2-d matrix, got ndim={M.ndim}")
    return M


def _as_square(A) -> np.ndarray:
    M = _as_matrix(A)
    if M.shape[0] != M.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {M.shape}")
    return M


def hs_norm(A) -> float:
    """Hilbert-Schmidt (Frobenius) norm: sqrt(sum |a_ij|^2)."""
    M = _as_matrix(A)
    return float(np.sqrt(np.sum(np.abs(M) ** 2)))


def _balance_inplace(H: np.ndarray, max_passes: int = 100) -> None:
    """Parlett-Reinsch diagonal balancing with radix-2 scaling.

    Scaling factors are powers of two, so the similarity is exact in
    binary floating point; eigenvalues are unchanged.
    """
    n = H.shape[0]
    radix = 2.0
    sqrdx = radix * radix
    for _ in range(max_passes):
        done = True
        absH = np.abs(H)
        for i in range(n):
            r = float(np.sum(absH[i, :]) - absH[i, i])
            c = float(np.sum(absH[:, i]) - absH[i, i])
            if c == 0.0 or r == 0.0:
                continue
            f = 1.0
            s = c + r
            g = r / radix
            while c < g:
                f *= radix
                c *= sqrdx
            g = r * radix
            while c >= g:
                f /= radix
                c /= sqrdx
            if (c + r) / f < 0.95 * s:
                done = False
                H[i, :] *= 1.0 / f
                H[:, i] *= f
                absH[i, :] *= 1.0 / f
                absH[:, i] *= f
        if done:
            return


def hessenberg(A) -> np.ndarray:
    """Householder reduction to upper Hessenberg form.

    Unitarily similar to A; entries below the first subdiagonal are
    exactly zero.  A matrix that is already Hessenberg is returned
    unchanged.
    """
    H = _as_square(A).copy()
    n = H.shape[0]
    for k in range(n - 2):
        x = H[k + 1 :, k]
        tail = float(np.sqrt(np.sum(np.abs(x[1:]) ** 2)))
        if tail == 0.0:
            continue
        x0 = complex(x[0])
        nrm = math.hypot(abs(x0), tail)
        phase = x0 / abs(x0) if x0 != 0.0 else 1.0 + 0.0j
        alpha = -phase * nrm
        v = x.copy()
        v[0] -= alpha
        v /= np.sqrt(np.sum(np.abs(v) ** 2))
        H[k + 1 :, k:] -= 2.0 * np.outer(v, v.conj() @ H[k + 1 :, k:])
        H[:, k + 1 :] -= 2.0 * np.outer(H[:, k + 1 :] @ v, v.conj())
        H[k + 1, k] = alpha
        H[k + 2 :, k] = 0.0
    return H


def _eig2x2(a: complex, b: complex, c: complex, d: complex):
    """Eigenvalues of [[a, b], [c, d]]."""
    t = 0.5 * (a + d)
    disc = cmath.sqrt(t * t - (a * d - b * c))
    return t + disc, t - disc


def _wilkinson_shift(a: complex, b: complex, c: complex, d: complex) -> complex:
    e1, e2 = _eig2x2(a, b, c, d)
    return e1 if abs(e1 - d) <= abs(e2 - d) else e2


def _qr_step(
    H: np.ndarray,
    lo: int,
    hi: int,
    shift: complex,
    row_buf: np.ndarray,
    col_buf: np.ndarray,
) -> None:
    """One implicit single-shift QR sweep on the active window [lo, hi]."""
    a = complex(H[lo, lo]) - shift
    b = complex(H[lo + 1, lo])
    G = np.empty((2, 2), dtype=np.complex128)
    for k in range(lo, hi):
        r = math.hypot(abs(a), abs(b))
        if r == 0.0:
            c, s = 1.0 + 0.0j, 0.0 + 0.0j
        else:
            c, s = a / r, b / r
        cc = c.conjugate()
        sc = s.conjugate()
        G[0, 0] = cc
        G[0, 1] = sc
        G[1, 0] = -s
        G[1, 1] = c
        kc = max(lo, k - 1)
        width = hi + 1 - kc
        rows = H[k : k + 2, kc : hi + 1]
        buf = row_buf[:, :width]
        np.matmul(G, rows, out=buf)
        if k > lo:
            buf[1, 0] = 0.0  # annihilated bulge, keep structure exact
        rows[...] = buf
        rbot = min(k + 2, hi)
        height = rbot + 1 - lo
        G[0, 0] = c
        G[0, 1] = -sc
        G[1, 0] = s
        G[1, 1] = cc
        cols = H[lo : rbot + 1, k : k + 2]
        cbuf = col_buf[:height]
        np.matmul(cols, G, out=cbuf)
        cols[...] = cbuf
        if k < hi - 1:
            a = complex(H[k + 1, k])
            b = complex(H[k + 2, k])


def eigenvalues(A, balance: bool = True) -> SpectrumResult:
    """All eigenvalues with multiplicity of a square complex matrix.

    Implicit single-shift QR with Wilkinson shift and deflation on the
    Hessenberg form; exceptional shift every EXCEPTIONAL_EVERY stalled
    iterations; total budget ITER_CAP_FACTOR * n sweeps.  On budget
    exhaustion returns converged=False with the current diagonal as the
    partial result.
    """
    M = _as_square(A)
    n = M.shape[0]
    if not np.all(np.isfinite(M.view(np.float64))):
        raise DomainError("matrix entries must be finite")
    eig = np.empty(n, dtype=np.complex128)
    if n == 0:
        return SpectrumResult(eig, 0, True)
    H = M.copy()
    if balance and n > 1:
        _balance_inplace(H)
    H = hessenberg(H)
    norm_fallback = hs_norm(H)
    cap = ITER_CAP_FACTOR * n
    total = 0
    stall = 0
    hi = n - 1
    converged = True
    row_buf = np.empty((2, n), dtype=np.complex128)
    col_buf = np.empty((n, 2), dtype=np.complex128)
    while hi >= 0:
        if hi == 0:
            eig[0] = H[0, 0]
            break
        # Scan for a negligible subdiagonal entry from the bottom up.
        lo = hi
        while lo > 0:
            h = abs(H[lo, lo - 1])
            tol = EPS * (abs(H[lo - 1, lo - 1]) + abs(H[lo, lo]))
            if tol == 0.0:
                tol = EPS * norm_fallback
            if h <= tol:
                H[lo, lo - 1] = 0.0
                break
            lo -= 1
        if lo == hi:
            eig[hi] = H[hi, hi]
            hi -= 1
            stall = 0
            continue
        if lo == hi - 1:
            e1, e2 = _eig2x2(
                complex(H[lo, lo]),
                complex(H[lo, hi]),
                complex(H[hi, lo]),
                complex(H[hi, hi]),
            )
            eig[lo], eig[hi] = e1, e2
            hi -= 2
            stall = 0
            continue
        if total >= cap:
            eig[: hi + 1] = np.diag(H)[: hi + 1]
            converged = False
            break
        total += 1
        stall += 1
        if stall % EXCEPTIONAL_EVERY == 0:
            shift = complex(H[hi, hi]) + 0.75 * abs(H[hi, hi - 1])
        else:
            shift = _wilkinson_shift(
                complex(H[hi - 1, hi - 1]),
                complex(H[hi - 1, hi]),
                complex(H[hi, hi - 1]),
                complex(H[hi, hi]),
            )
        _qr_step(H, lo, hi, shift, row_buf, col_buf)
    return SpectrumResult(eig, total, converged)


def _tridiagonalize_hermitian(B: np.ndarray):
    """Householder reduction of a Hermitian matrix to real tridiagonal.

    Returns (d, e): the real diagonal and the non-negative subdiagonal
    magnitudes (a diagonal unitary similarity makes the subdiagonal
    real, leaving eigenvalues unchanged).
    """
    A = B.copy()
    n = A.shape[0]
    for k in range(n - 2):
        x = A[k + 1 :, k]
        tail = float(np.sqrt(np.sum(np.abs(x[1:]) ** 2)))
        if tail == 0.0:
            continue
        x0 = complex(x[0])
        nrm = math.hypot(abs(x0), tail)
        phase = x0 / abs(x0) if x0 != 0.0 else 1.0 + 0.0j
        alpha = -phase * nrm
        v = x.copy()
        v[0] -= alpha
        v /= np.sqrt(np.sum(np.abs(v) ** 2))
        sub = A[k + 1 :, k + 1 :]
        sub -= 2.0 * np.outer(v, v.conj() @ sub)
        sub -= 2.0 * np.outer(sub @ v, v.conj())
        A[k + 1, k] = alpha
        A[k + 2 :, k] = 0.0
        A[k, k + 1] = np.conj(alpha)
        A[k, k + 2 :] = 0.0
    d = np.real(np.diag(A)).astype(np.float64)
    if n > 1:
        e = np.abs(np.diag(A, -1)).astype(np.float64)
    else:
        e = np.empty(0)
    return d, e


def _tql_eigenvalues(d: np.ndarray, e: np.ndarray, max_sweeps: int = 50) -> np.ndarray:
    """Implicit-shift QL on a real symmetric tridiagonal; eigenvalues only."""
    n = d.size
    d = d.copy()
    ee = np.empty(n)
    ee[: n - 1] = e
    ee[n - 1] = 0.0
    for l in range(n):
        sweeps = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(ee[m]) <= EPS * dd:
                    break
                m += 1
            if m == l:
                break
            sweeps += 1
            if sweeps > max_sweeps:
                raise ConvergenceError("tridiagonal QL failed to converge")
            g = (d[l + 1] - d[l]) / (2.0 * ee[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + ee[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            for i in range(m - 1, l - 1, -1):
                f = s * ee[i]
                b = c * ee[i]
                r = math.hypot(f, g)
                ee[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    ee[m] = 0.0
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
            else:
                d[l] -= p
                ee[l] = g
                ee[m] = 0.0
    d.sort()
    return d


def hermitian_eigen(B) -> np.ndarray:
    """Real eigenvalues (ascending) of a Hermitian matrix.

    Raises ContractError if B deviates from Hermitian by more than
    1e-10 * ||B||_2.
    """
    M = _as_square(B)
    n = M.shape[0]
    if n == 0:
        return np.empty(0)
    drift = hs_norm(M - M.conj().T)
    if drift > 1e-10 * max(hs_norm(M), 1e-300):
        raise ContractError(
            f"matrix is not Hermitian within tolerance (drift {drift:.3e})"
        )
    M = 0.5 * (M + M.conj().T)
    if n == 1:
        return np.array([float(M[0, 0].real)])
    d, e = _tridiagonalize_hermitian(M)
    return _tql_eigenvalues(d, e)


def singular_values(A) -> SingularSpectrum:
    """Singular values (descending) via the Gram-matrix spectrum.

    sigma_i are the clamped square roots of hermitian_eigen(A^H A)
    (or A A^H for wide matrices); accuracy near zero is ~sqrt(eps)*||A||.
    """
    M = _as_matrix(A)
    rows, cols = M.shape
    if rows >= cols:
        G = M.conj().T @ M
    else:
        G = M @ M.conj().T
    G = 0.5 * (G + G.conj().T)
    vals = hermitian_eigen(G)
    sigma = np.sqrt(np.clip(vals, 0.0, None))[::-1]
    return SingularSpectrum(np.ascontiguousarray(sigma))


def least_singular_value(A) -> float:
    """sigma_n: the smallest singular value."""
    return singular_values(_as_square(A)).least


def row_distance_sequence(A) -> np.ndarray:
    """d_i = dist(row i, span of rows 1..i-1); d_1 = ||row 1||.

    Modified Gram-Schmidt with one reorthogonalization pass; exactly
    dependent rows give d_i = 0 and are not added to the basis.
    """
    M = _as_square(A)
    n = M.shape[0]
    d = np.empty(n)
    basis = np.empty((n, n), dtype=np.complex128)
    nb = 0
    dep_tol = ZERO_FACTOR_RTOL * hs_norm(M)
    for i in range(n):
        r = M[i].copy()
        for _ in range(2):
            for j in range(nb):
                r -= (basis[j].conj() @ r) * basis[j]
        nrm = float(np.sqrt(np.sum(np.abs(r) ** 2)))
        d[i] = nrm
        if nrm > dep_tol:
            basis[nb] = r / nrm
            nb += 1
    return d


def log_abs_det(A, method: DetMethod) -> float:
    """log |det(A)| via eigenvalues, singular values or row distances.

    Returns -inf iff any factor is zero within the method's zero
    tolerance: ZERO_FACTOR_RTOL * ||A||_2 for the eigenvalue and
    row-distance routes, GRAM_SIGMA_RTOL * ||A||_2 for the singular
    route (an exact zero emerges from the Gram matrix only as
    ~sqrt(eps) * ||A||, so a tighter cutoff would never fire).
    """
    M = _as_square(A)
    rtol = ZERO_FACTOR_RTOL
    if method is DetMethod.EIGEN:
        res = eigenvalues(M)
        if not res.converged:
            raise ConvergenceError("eigensolver did not converge for log-det")
        factors = np.abs(res.eigenvalues)
    elif method is DetMethod.SINGULAR:
        factors = singular_values(M).values
        rtol = GRAM_SIGMA_RTOL
    elif method is DetMethod.ROW_DIST:
        factors = row_distance_sequence(M)
    else:
        raise DomainError(f"unknown determinant method: {method!r}")
    if np.any(factors <= rtol * hs_norm(M)):
        return float("-inf")
    return float(np.sum(np.log(factors)))


def dirac_block(A) -> np.ndarray:
    """Hermitian 2n x 2n block matrix [[0, A^H/sqrt(n)], [A/sqrt(n), 0]].

    Its spectrum is the positive and negative singular values of
    A/sqrt(n).
    """
    M = _as_square(A)
    n = M.shape[0]
    H = np.zeros((2 * n, 2 * n), dtype=np.complex128)
    if n == 0:
        return H
    scale = 1.0 / math.sqrt(n)
    H[:n, n:] = scale * M.conj().T
    H[n:, :n] = scale * M
    return H


def multiset_match_distance(a, b) -> float:
    """Greedy nearest-neighbour multiset matching distance.

    Sorts both value lists by (Re, Im) and greedily pairs each element
    of `a` with the nearest unused element of `b`; returns the largest
    pair distance.  Adequate at test tolerances.
    """
    xs = sorted(np.asarray(a, dtype=np.complex128), key=lambda z: (z.real, z.imag))
    ys = sorted(np.asarray(b, dtype=np.complex128), key=lambda z: (z.real, z.imag))
    if len(xs) != len(ys):
        raise ShapeError("multisets must have equal size")
    used = [False] * len(ys)
    worst = 0.0
    for x in xs:
        best_j = -1
        best = math.inf
        for j, y in enumerate(ys):
            if used[j]:
                continue
            dist = abs(x - y)
            if dist < best:
                best = dist
                best_j = j
        used[best_j] = True
        worst = max(worst, best)
    return worst

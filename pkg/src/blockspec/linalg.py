"""Dense Hermitian linear algebra: Kronecker/commutation algebra, normalized
Schatten norms and a symmetric eigensolver.

All traces here are *normalized*: ``tr_n(A) = (1/n) sum_i A_ii``.  The Schatten
norms inherit that convention, so ``schatten_norm(eye(n), p) == 1`` for every
``p``.  Most textbooks use the unnormalized trace; the two differ by a factor of
``n ** (1/p)``.

The eigensolver is a Householder reduction to tridiagonal form followed by the
implicit-shift QL iteration.  Complex Hermitian input ``X + iY`` goes through
the real embedding ``[[X, -Y], [Y, X]]`` whose spectrum is that of ``X + iY``
with every eigenvalue doubled.
"""
from __future__ import annotations

import math

import numba
import numpy as np

__all__ = [
    "InvalidInputError",
    "InvalidParameterError",
    "is_hermitian",
    "check_hermitian",
    "hermitize",
    "kronecker",
    "commutation_matrix",
    "commute_kron",
    "schatten_norm",
    "operator_norm",
    "eigenvalues",
    "eigh_real",
    "matrix_power_trace",
    "normalized_trace",
]

HERMITIAN_RTOL = 1e-12


class InvalidInputError(ValueError):
    """Matrix does not satisfy the structural precondition (e.g. Hermitian)."""


class InvalidParameterError(ValueError):
    """A scalar parameter is outside its admissible range."""


def is_hermitian(a: np.ndarray, rtol: float = HERMITIAN_RTOL) -> bool:
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return False
    scale = 1.0 + (np.abs(a).max() if a.size else 0.0)
    return bool(np.abs(a - a.conj().T).max(initial=0.0) <= rtol * scale)


def check_hermitian(a, rtol: float = HERMITIAN_RTOL) -> np.ndarray:
    """Return ``a`` as an array, raising if it is not (numerically) Hermitian."""
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidInputError(f"expected a square matrix, got shape {a.shape}")
    if not is_hermitian(a, rtol):
        dev = np.abs(a - a.conj().T).max()
        raise InvalidInputError(f"matrix is not Hermitian (max |A - A*| = {dev:.3e})")
    return a


def hermitize(a) -> np.ndarray:
    """Exact Hermitian part ``(A + A*) / 2`` with a real diagonal."""
    a = np.asarray(a)
    h = (a + a.conj().T) / 2
    if np.iscomplexobj(h):
        np.fill_diagonal(h, h.diagonal().real)
    return h


def normalized_trace(a) -> float | complex:
    a = np.asarray(a)
    return np.trace(a) / a.shape[0]


def kronecker(a, b) -> np.ndarray:
    """Kronecker product ``(a_ij * b)``, block (i, j) equal to ``a[i, j] * b``."""
    a = np.atleast_2d(np.asarray(a))
    b = np.atleast_2d(np.asarray(b))
    ra, ca = a.shape
    rb, cb = b.shape
    out = a[:, None, :, None] * b[None, :, None, :]
    return out.reshape(ra * rb, ca * cb)


def commutation_matrix(p: int, q: int) -> np.ndarray:
    """The ``pq x pq`` permutation ``sum_ij E_ij (x) E_ij^T`` with ``E_ij`` of shape p x q.

    ``commutation_matrix(p, q).T == commutation_matrix(q, p)`` and the two are
    mutually inverse.
    """
    if p < 1 or q < 1:
        raise InvalidParameterError(f"p and q must be >= 1, got ({p}, {q})")
    i, j = np.meshgrid(np.arange(p), np.arange(q), indexing="ij")
    out = np.zeros((p * q, p * q))
    # E_ij (x) E_ji has its single 1 at row i*q + j, column j*p + i.
    out[(i * q + j).ravel(), (j * p + i).ravel()] = 1.0
    return out


def commute_kron(a, b) -> float:
    """Max entry difference between the commuted product and ``b (x) a``.

    For ``a`` of shape n x m and ``b`` of shape k x l this compares
    ``P(k, n) (a (x) b) P(m, l)`` with ``b (x) a``; the result is exactly zero
    for integer-valued input.
    """
    a = np.atleast_2d(np.asarray(a))
    b = np.atleast_2d(np.asarray(b))
    n, m = a.shape
    k, l = b.shape
    lhs = commutation_matrix(k, n) @ kronecker(a, b) @ commutation_matrix(m, l)
    return float(np.abs(lhs - kronecker(b, a)).max())


def schatten_norm(a, p: float) -> float:
    """Normalized Schatten norm ``(tr_n |A|^p) ** (1/p)``."""
    if not p >= 1:
        raise InvalidParameterError(f"Schatten exponent must be >= 1, got {p}")
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidInputError(f"expected a square matrix, got shape {a.shape}")
    sv = np.linalg.svd(a, compute_uv=False)
    if math.isinf(p):
        return float(sv.max())
    return float(np.mean(sv**p) ** (1.0 / p))


def operator_norm(a) -> float:
    """Largest absolute eigenvalue of a Hermitian matrix."""
    ev = eigenvalues(a)
    return float(max(abs(ev[0]), abs(ev[-1])))


# -- eigensolver kernels -----------------------------------------------------


@numba.njit(cache=True, nogil=True)
def _tridiagonalize(a, want_q):
    """Householder reduction of a real symmetric matrix (overwritten).

    Returns (d, e, q) with ``q.T @ a_orig @ q`` tridiagonal, diagonal ``d`` and
    subdiagonal ``e[:n-1]`` (``e[n-1] = 0``).
    """
    n = a.shape[0]
    d = np.zeros(n)
    e = np.zeros(n)
    q = np.eye(n) if want_q else np.zeros((1, 1))
    v = np.zeros(n)
    w = np.zeros(n)
    # Works on the upper triangle so the inner loops walk contiguous rows.
    for k in range(n - 2):
        norm2 = 0.0
        for i in range(k + 1, n):
            norm2 += a[k, i] * a[k, i]
        norm = math.sqrt(norm2)
        x0 = a[k, k + 1]
        if norm == 0.0:
            d[k] = a[k, k]
            e[k] = 0.0
            continue
        alpha = -norm if x0 >= 0.0 else norm
        # v = x - alpha e1, normalized
        for i in range(k + 1, n):
            v[i] = a[k, i]
        v[k + 1] -= alpha
        vn2 = norm2 - 2.0 * alpha * x0 + alpha * alpha
        if vn2 == 0.0:
            d[k] = a[k, k]
            e[k] = x0
            continue
        inv = 1.0 / math.sqrt(vn2)
        for i in range(k + 1, n):
            v[i] *= inv
        # w = A22 v
        for i in range(k + 1, n):
            w[i] = 0.0
        for j in range(k + 1, n):
            vj = v[j]
            acc = a[j, j] * vj
            for i in range(j + 1, n):
                aji = a[j, i]
                w[i] += aji * vj
                acc += aji * v[i]
            w[j] += acc
        kk = 0.0
        for i in range(k + 1, n):
            kk += v[i] * w[i]
        for i in range(k + 1, n):
            w[i] -= kk * v[i]
        # A22 -= 2 (v w^T + w v^T)
        for j in range(k + 1, n):
            vj = 2.0 * v[j]
            wj = 2.0 * w[j]
            for i in range(j, n):
                a[j, i] -= v[i] * wj + w[i] * vj
        d[k] = a[k, k]
        e[k] = alpha
        if want_q:
            # Q[:, k+1:] -= 2 (Q[:, k+1:] v) v^T
            for r in range(n):
                s = 0.0
                for i in range(k + 1, n):
                    s += q[r, i] * v[i]
                s *= 2.0
                for i in range(k + 1, n):
                    q[r, i] -= s * v[i]
    if n >= 2:
        d[n - 2] = a[n - 2, n - 2]
        e[n - 2] = a[n - 2, n - 1]
    d[n - 1] = a[n - 1, n - 1]
    e[n - 1] = 0.0
    return d, e, q


@numba.njit(cache=True, nogil=True)
def _tql_implicit(d, e, z, want_z):
    """Implicit-shift QL on a symmetric tridiagonal matrix, in place.

    ``d`` holds the diagonal, ``e[i]`` couples rows i and i+1.  Returns 0 on
    success, or the index of the eigenvalue that failed to converge plus one.
    """
    n = d.shape[0]
    eps = np.finfo(np.float64).eps
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= eps * dd:
                    break
                m += 1
            if m == l:
                break
            it += 1
            if it > 60:
                return l + 1
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + (r if g >= 0.0 else -r))
            s = 1.0
            c = 1.0
            p = 0.0
            underflow = False
            i = m - 1
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                if want_z:
                    for k in range(z.shape[0]):
                        f = z[k, i + 1]
                        z[k, i + 1] = s * z[k, i] + c * f
                        z[k, i] = c * z[k, i] - s * f
                i -= 1
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return 0


def _real_symmetric_eig(a: np.ndarray, want_vectors: bool):
    work = np.array(a, dtype=np.float64, order="C", copy=True)
    n = work.shape[0]
    if n == 1:
        return work[0].copy(), np.ones((1, 1))
    d, e, q = _tridiagonalize(work, want_vectors)
    status = _tql_implicit(d, e, q, want_vectors)
    if status:
        raise np.linalg.LinAlgError(f"QL iteration failed to converge at index {status - 1}")
    order = np.argsort(d, kind="stable")
    return d[order], (q[:, order] if want_vectors else None)


def eigh_real(a) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvectors of a real symmetric matrix."""
    a = check_hermitian(a)
    if np.iscomplexobj(a):
        raise InvalidInputError("eigh_real expects a real symmetric matrix")
    return _real_symmetric_eig(a, True)


def eigenvalues(a) -> np.ndarray:
    """Full spectrum of a Hermitian matrix, sorted ascending, with multiplicity."""
    a = check_hermitian(a)
    if np.iscomplexobj(a):
        x, y = a.real, a.imag
        if not y.any():
            return _real_symmetric_eig(x, False)[0]
        emb = np.block([[x, -y], [y, x]])
        emb = (emb + emb.T) / 2
        return _real_symmetric_eig(emb, False)[0][::2].copy()
    return _real_symmetric_eig(a, False)[0]


def matrix_power_trace(a, s: int) -> float:
    """Normalized trace ``tr_n(A^s)`` computed by repeated multiplication."""
    a = check_hermitian(a)
    if s < 0:
        raise InvalidParameterError(f"power must be nonnegative, got {s}")
    p = np.linalg.matrix_power(a, s)
    return float(np.real(np.trace(p))) / a.shape[0]

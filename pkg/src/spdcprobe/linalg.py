"""Small dense complex linear algebra for polarization density matrices.

Eigendecompositions use cyclic complex Jacobi rotations. The matrices handled
here are at most 16x16, so clarity and robustness matter more than speed.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch, NonFinite, NotDensityMatrix, NotHermitian

TOL_HERM = 1e-10
TOL_TRACE = 1e-10
TOL_PSD = 1e-9
JACOBI_TOL = 1e-13
MAX_SWEEPS = 64

_PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])
_YY = np.kron(_PAULI_Y, _PAULI_Y)


def _as_square(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise DimensionMismatch(f"expected a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NonFinite("matrix has NaN or infinite entries")
    return a


def _check_hermitian(a: np.ndarray, tol: float = TOL_HERM) -> None:
    dev = np.max(np.abs(a - a.conj().T))
    if dev > tol:
        raise NotHermitian(f"max |m - m^H| = {dev:.3e} exceeds {tol:.0e}")


def _off_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.sqrt(np.sum(np.abs(off) ** 2)))


def jacobi_eigh(m, tol: float = JACOBI_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decompose a Hermitian matrix with cyclic Jacobi rotations.

    Parameters
    ----------
    m : array_like
        Hermitian matrix (checked to within ``TOL_HERM``).
    tol : float
        Sweeps stop once the Frobenius norm of the off-diagonal part falls
        below ``tol`` times ``max(1, ||m||_F)``.

    Returns
    -------
    w : ndarray
        Real eigenvalues in ascending order.
    v : ndarray
        Unitary matrix whose columns are the matching eigenvectors.
    """
    a = _as_square(m)
    _check_hermitian(a)
    a = 0.5 * (a + a.conj().T)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    threshold = tol * max(1.0, float(np.linalg.norm(a)))

    for _ in range(MAX_SWEEPS):
        if _off_norm(a) < threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                b = abs(apq)
                if b == 0.0:
                    continue
                phase = apq / b
                tau = (a[q, q].real - a[p, p].real) / (2.0 * b)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # column-space unitary restricted to (p, q): phase fix, then real rotation
                r = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ r
                a[idx, :] = r.conj().T @ a[idx, :]
                v[:, idx] = v[:, idx] @ r
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
    else:
        if _off_norm(a) >= threshold:
            raise ArithmeticError("Jacobi iteration did not converge")

    w = np.diag(a).real.copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def hermitian_eigenvalues(m) -> np.ndarray:
    """Ascending real eigenvalues of a Hermitian matrix."""
    return jacobi_eigh(m)[0]


class DensityMatrix:
    """Validated, immutable density matrix.

    Eigenvalues in ``[-TOL_PSD, 0)`` are clamped to zero and the trace is
    renormalized; anything more negative is rejected.
    """

    __slots__ = ("_m",)

    def __init__(self, m):
        a = _as_square(m)
        _check_hermitian(a)
        a = 0.5 * (a + a.conj().T)
        tr = np.trace(a).real
        if abs(tr - 1.0) > TOL_TRACE:
            raise NotDensityMatrix(f"trace {tr!r} differs from 1 by more than {TOL_TRACE:.0e}")
        w, v = jacobi_eigh(a)
        if w[0] < -TOL_PSD:
            raise NotDensityMatrix(f"smallest eigenvalue {w[0]:.3e} below -{TOL_PSD:.0e}")
        if w[0] < 0.0:
            w = np.clip(w, 0.0, None)
            w /= w.sum()
            a = (v * w) @ v.conj().T
            a = 0.5 * (a + a.conj().T)
        a.setflags(write=False)
        self._m = a

    @property
    def matrix(self) -> np.ndarray:
        return self._m

    @property
    def dim(self) -> int:
        return self._m.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self._m if dtype is None else self._m.astype(dtype)

    def __repr__(self):
        return f"DensityMatrix(dim={self.dim})"

    def __eq__(self, other):
        if not isinstance(other, DensityMatrix):
            return NotImplemented
        return self._m.shape == other._m.shape and bool(np.all(self._m == other._m))

    __hash__ = None


def _matrix(x) -> np.ndarray:
    return x.matrix if isinstance(x, DensityMatrix) else _as_square(x)


def trace_distance(a, b) -> float:
    """Half the trace norm of ``a - b``."""
    ma, mb = _matrix(a), _matrix(b)
    if ma.shape != mb.shape:
        raise DimensionMismatch(f"shapes {ma.shape} and {mb.shape} differ")
    x = hermitian_eigenvalues(ma - mb)
    return min(1.0, 0.5 * float(np.sum(np.abs(x))))


def purity(a) -> float:
    m = _matrix(a)
    # Tr(m^2) for Hermitian m is the squared Frobenius norm
    return float(np.sum(np.abs(m) ** 2))


def concurrence_two_qubit(a) -> float:
    """Wootters concurrence of a two-qubit density matrix.

    The square roots of the eigenvalues of ``rho (Y x Y) rho* (Y x Y)`` are the
    singular values of ``B = sqrt(rho) (Y x Y) sqrt(rho)*``. They are read off
    the Hermitian dilation ``[[0, B], [B^H, 0]]``, whose eigenvalues are the
    signed singular values, so no square root is taken of a roundoff-level
    eigenvalue.
    """
    rho = _matrix(a)
    if rho.shape != (4, 4):
        raise DimensionMismatch(f"concurrence needs a 4x4 matrix, got {rho.shape}")
    w, v = jacobi_eigh(rho)
    sqrt_rho = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
    b = sqrt_rho @ _YY @ sqrt_rho.conj()
    dil = np.zeros((8, 8), dtype=complex)
    dil[:4, 4:] = b
    dil[4:, :4] = b.conj().T
    lam = np.clip(hermitian_eigenvalues(dil)[4:], 0.0, None)[::-1]
    return max(0.0, float(lam[0] - lam[1] - lam[2] - lam[3]))

"""Dense complex linear algebra for small multi-qubit Hilbert spaces.

Everything here operates on plain ``numpy`` arrays of complex128. Density
matrices carry their subsystem structure in a thin immutable wrapper so
partial traces and measurements know how to reshape.

Subsystem 0 is the leftmost tensor factor throughout (row-major ordering).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod

import numpy as np

HERMITIAN_TOL = 1e-10
PSD_TOL = 1e-8


class LinalgError(Exception):
    """Base class for numerical-layer failures."""


class NonHermitianError(LinalgError):
    pass


class NegativeEigenvalueError(LinalgError):
    pass


class BadIndexError(LinalgError):
    pass


class DimMismatchError(LinalgError):
    pass


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product; dimensions multiply."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def kron_all(*mats: np.ndarray) -> np.ndarray:
    out = np.asarray(mats[0], dtype=complex)
    for m in mats[1:]:
        out = np.kron(out, m)
    return out


def hermiticity_defect(m: np.ndarray) -> float:
    return float(np.max(np.abs(m - m.conj().T)))


def eig_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL):
    """Eigendecomposition of a Hermitian matrix.

    Returns ``(eigenvalues, eigenvectors)`` with eigenvalues real and sorted
    descending; column ``k`` of the eigenvector matrix pairs with eigenvalue
    ``k``.
    """
    m = np.asarray(m, dtype=complex)
    if hermiticity_defect(m) > tol:
        raise NonHermitianError(
            f"matrix is not Hermitian (defect {hermiticity_defect(m):.3e})"
        )
    vals, vecs = np.linalg.eigh(m)
    return vals[::-1].copy(), vecs[:, ::-1].copy()


def sqrt_psd(m: np.ndarray, tol: float = PSD_TOL) -> np.ndarray:
    """Principal square root of a positive-semidefinite Hermitian matrix."""
    vals, vecs = eig_hermitian(m)
    if vals[-1] < -tol:
        raise NegativeEigenvalueError(
            f"matrix has negative eigenvalue {vals[-1]:.3e}"
        )
    vals = np.clip(vals, 0.0, None)
    return (vecs * np.sqrt(vals)) @ vecs.conj().T


@dataclass(frozen=True)
class DensityMatrix:
    """Density matrix together with its ordered subsystem dimensions."""

    dims: tuple[int, ...]
    mat: np.ndarray

    HERM_TOL = 1e-12
    TRACE_TOL = 1e-12
    EIG_TOL = 1e-10

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        mat = np.asarray(self.mat, dtype=complex)
        object.__setattr__(self, "mat", mat)
        d = prod(self.dims) if self.dims else 1
        if mat.shape != (d, d):
            raise DimMismatchError(
                f"matrix shape {mat.shape} does not match dims {self.dims}"
            )
        if hermiticity_defect(mat) > self.HERM_TOL:
            raise NonHermitianError("density matrix is not Hermitian")
        if abs(np.trace(mat).real - 1.0) > self.TRACE_TOL:
            raise LinalgError(f"trace {np.trace(mat).real!r} != 1")
        if np.min(np.linalg.eigvalsh(mat)) < -self.EIG_TOL:
            raise NegativeEigenvalueError("density matrix is not PSD")

    @property
    def dim(self) -> int:
        return prod(self.dims) if self.dims else 1

    @classmethod
    def pure(cls, dims, vector: np.ndarray) -> "DensityMatrix":
        """Density matrix of a (normalized) pure state vector."""
        v = np.asarray(vector, dtype=complex)
        v = v / np.linalg.norm(v)
        return cls(tuple(dims), np.outer(v, v.conj()))


def partial_trace(rho: DensityMatrix, keep) -> DensityMatrix:
    """Trace out every subsystem not listed in ``keep``.

    The kept subsystems stay in their original order. Tracing out all
    subsystems yields a 1x1 matrix equal to the trace.
    """
    dims = list(rho.dims)
    n = len(dims)
    keep = sorted(set(int(k) for k in keep))
    if any(k < 0 or k >= n for k in keep):
        raise BadIndexError(f"keep={keep} outside subsystems 0..{n - 1}")
    drop = [q for q in range(n) if q not in keep]

    t = rho.mat.reshape(dims + dims)
    remaining = n
    for q in sorted(drop, reverse=True):
        # q is still at axis position q because higher axes were removed first
        t = np.trace(t, axis1=q, axis2=q + remaining)
        remaining -= 1
    kept_dims = tuple(dims[k] for k in keep)
    d = prod(kept_dims) if kept_dims else 1
    return DensityMatrix(kept_dims, t.reshape(d, d))

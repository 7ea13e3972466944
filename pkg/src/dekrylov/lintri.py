"""Real symmetric tridiagonal linear algebra.

Everything downstream works with effective Hamiltonians in a Krylov basis,
where they are real symmetric tridiagonal:

    T = tridiag(b, a, b),   a = (a_0, ..., a_{d-1}),   b = (b_1, ..., b_{d-1}).

This module provides the eigendecomposition (implicit-shift QL with
accumulated eigenvectors), the normalized imaginary-time action
exp(-tau T) e_0, and a two-pass classical Gram-Schmidt used to build dense
Krylov bases.  All arithmetic is 64-bit float; operations are pure functions
over immutable inputs and are safe to call concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ArgumentError, ConvergenceError, LinearDependenceError

# Sweep budget per eigenvalue for the QL iteration.  Symmetric tridiagonal
# QL converges cubically; 50 sweeps is far beyond anything seen in practice.
DEFAULT_MAX_SWEEPS = 50

_EPS = np.finfo(float).eps


def _readonly(arr):
    out = np.array(arr, dtype=float)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class TridiagonalOperator:
    """Symmetric tridiagonal matrix given by its diagonal and off-diagonal.

    The off-diagonal entries must be strictly positive: a vanishing b_n
    means the Krylov space closed at dimension n, which is represented by
    constructing a smaller operator instead.
    """

    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        diag = _readonly(self.diag)
        offdiag = _readonly(self.offdiag)
        if diag.ndim != 1 or diag.size < 1:
            raise ArgumentError("diag must be a nonempty 1-d sequence")
        if offdiag.ndim != 1 or offdiag.size != diag.size - 1:
            raise ArgumentError(
                f"offdiag must have length dim-1 = {diag.size - 1}, "
                f"got {offdiag.size}"
            )
        if not np.all(np.isfinite(diag)) or not np.all(np.isfinite(offdiag)):
            raise ArgumentError("tridiagonal entries must be finite")
        if offdiag.size and not np.all(offdiag > 0):
            raise ArgumentError(
                "offdiag entries must be strictly positive; represent a "
                "terminated Krylov space by a smaller dim"
            )
        object.__setattr__(self, "diag", diag)
        object.__setattr__(self, "offdiag", offdiag)

    @property
    def dim(self):
        return self.diag.size

    def to_dense(self):
        """Dense (dim, dim) array with the same entries."""
        mat = np.diag(self.diag)
        idx = np.arange(self.dim - 1)
        mat[idx, idx + 1] = self.offdiag
        mat[idx + 1, idx] = self.offdiag
        return mat

    def matvec(self, vec):
        """Apply T to a vector without forming the dense matrix."""
        vec = np.asarray(vec, dtype=float)
        if vec.shape != (self.dim,):
            raise ArgumentError(f"vector length {vec.size} != dim {self.dim}")
        out = self.diag * vec
        if self.dim > 1:
            out[:-1] += self.offdiag * vec[1:]
            out[1:] += self.offdiag * vec[:-1]
        return out


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues (ascending) and orthonormal eigenvector columns."""

    values: np.ndarray
    vectors: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _readonly(self.values))
        object.__setattr__(self, "vectors", _readonly(self.vectors))

    @property
    def dim(self):
        return self.values.size


@dataclass(frozen=True)
class KrylovState:
    """Normalized wavepacket psi_n(tau) over the Krylov index n."""

    tau: float
    psi: np.ndarray = field(repr=False)

    def __post_init__(self):
        psi = _readonly(self.psi)
        if self.tau < 0:
            raise ArgumentError("tau must be nonnegative")
        if psi.ndim != 1 or psi.size < 1 or not np.all(np.isfinite(psi)):
            raise ArgumentError("psi must be a finite 1-d vector")
        if abs(psi @ psi - 1.0) > 1e-12:
            raise ArgumentError("psi must be unit-normalized (1e-12)")
        object.__setattr__(self, "psi", psi)

    @property
    def dim(self):
        return self.psi.size


def eig_tridiag(op, max_sweeps=DEFAULT_MAX_SWEEPS):
    """Eigendecompose a symmetric tridiagonal operator.

    Implicit-shift QL with accumulated plane rotations (the classic tql2
    scheme).  Eigenvalues are returned in ascending order with matching
    eigenvector columns.

    Args:
        op: TridiagonalOperator to diagonalize.
        max_sweeps: QL sweep budget per eigenvalue.

    Returns:
        EigenDecomposition with orthonormal vectors.

    Raises:
        ConvergenceError: if some eigenvalue fails to settle within the
            sweep budget; the error names its index.
    """
    n = op.dim
    d = np.array(op.diag, dtype=float)
    if n == 1:
        return EigenDecomposition(values=d, vectors=np.eye(1))
    e = np.zeros(n)
    e[: n - 1] = op.offdiag
    z = np.eye(n)

    for l in range(n):
        for sweep in range(max_sweeps + 1):
            # Locate the end of the unreduced block starting at l.
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= _EPS * dd:
                    break
                m += 1
            if m == l:
                break
            if sweep == max_sweeps:
                raise ConvergenceError(
                    f"eigenvalue {l} did not converge in {max_sweeps} QL sweeps",
                    index=l,
                )
            # Wilkinson-style implicit shift from the 2x2 corner at l.
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = 1.0
            c = 1.0
            p = 0.0
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    # Underflow guard: deflate and restart the sweep.
                    d[i + 1] -= p
                    e[m] = 0.0
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                # Accumulate the rotation into the eigenvector columns.
                zi = z[:, i].copy()
                z[:, i] = c * zi - s * z[:, i + 1]
                z[:, i + 1] = s * zi + c * z[:, i + 1]
            else:
                d[l] -= p
                e[l] = g
                e[m] = 0.0

    order = np.argsort(d, kind="stable")
    return EigenDecomposition(values=d[order], vectors=z[:, order])


def expm_from_eig(dec, tau):
    """Normalized exp(-tau T) e_0 from a precomputed eigendecomposition.

    The spectrum is shifted by its minimum eigenvalue before
    exponentiation, so no intermediate overflows occur for
    tau * spectral-range up to ~1e4; the shift cancels in the
    normalization.
    """
    if tau < 0:
        raise ArgumentError("tau must be nonnegative")
    shifted = dec.values - dec.values[0]
    amp = dec.vectors @ (np.exp(-tau * shifted) * dec.vectors[0])
    norm = np.linalg.norm(amp)
    if not norm > 0:
        raise ConvergenceError(
            "propagated amplitude underflowed to zero", index=-1
        )
    return KrylovState(tau=float(tau), psi=amp / norm)


def expm_action(op, tau):
    """Normalized action of exp(-tau T) on e_0 = (1, 0, ..., 0).

    Args:
        op: TridiagonalOperator.
        tau: nonnegative imaginary time.

    Returns:
        KrylovState with Sum psi_n^2 = 1 within 1e-12.
    """
    return expm_from_eig(eig_tridiag(op), tau)


def expm_e0_scaled(op, tau):
    """Unnormalized propagation, split into a vector and a log scale.

    Returns (vec, log_scale) such that exp(-tau T) e_0 = e^{log_scale} vec
    with vec = exp(-tau (T - lambda_min)) e_0.  The split form avoids
    overflow and is what the finite-difference consistency test uses.
    """
    if tau < 0:
        raise ArgumentError("tau must be nonnegative")
    dec = eig_tridiag(op)
    shifted = dec.values - dec.values[0]
    vec = dec.vectors @ (np.exp(-tau * shifted) * dec.vectors[0])
    return vec, -tau * dec.values[0]


def orthonormalize(vectors, dependence_tol=1e-12):
    """Two-pass classical Gram-Schmidt orthonormalization.

    Each vector is projected against the already-accepted basis twice
    (re-orthogonalization), which keeps pairwise inner products at the
    1e-12 level even for badly scaled inputs.

    Args:
        vectors: sequence of equal-length real vectors.
        dependence_tol: a vector whose post-projection norm falls below
            dependence_tol times its original norm is declared dependent.

    Returns:
        List of orthonormal vectors spanning the same space.

    Raises:
        LinearDependenceError: carrying the index of the offending vector.
    """
    basis = []
    length = None
    for idx, vec in enumerate(vectors):
        w = np.array(vec, dtype=float)
        if w.ndim != 1:
            raise ArgumentError(f"vector {idx} is not 1-d")
        if length is None:
            length = w.size
        elif w.size != length:
            raise ArgumentError(
                f"vector {idx} has length {w.size}, expected {length}"
            )
        original_norm = np.linalg.norm(w)
        for _ in range(2):
            for q in basis:
                w -= (q @ w) * q
        norm = np.linalg.norm(w)
        if norm <= dependence_tol * original_norm or norm == 0.0:
            raise LinearDependenceError(
                f"vector {idx} is linearly dependent on its predecessors "
                f"(residual {norm:.3e} vs original {original_norm:.3e})",
                index=idx,
            )
        basis.append(w / norm)
    return basis

"""Dense complex linear algebra used by every other module.

Conventions fixed here and relied on everywhere else:

* Matrices are numpy ``complex128`` arrays; nothing is wrapped.
* The Hilbert-Schmidt inner product is ``<A, B> = Tr[A^dag B]`` with no
  dimension-dependent normalization.
* ``vectorize`` stacks rows (C order), so ``vec(A X B) = (A kron B^T) vec(X)``
  and the conjugation superoperator of ``u`` is ``u kron conj(u)``.
* Matrix exponentials of Hermitian generators go through the
  eigendecomposition, never scaling-and-squaring.
* Tensor-factor ordering is big-endian: qubit 1 is the leftmost factor.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, NotHermitianError

__all__ = [
    "I2", "X", "Y", "Z",
    "Tolerance", "DEFAULT_TOL",
    "dagger", "comm", "frob", "kron", "kron_all",
    "is_hermitian", "is_unitary", "is_psd", "is_trace_one",
    "herm_eig", "exp_unitary", "null_space", "partial_trace", "hs_inner",
    "vectorize", "devectorize", "conjugation_superoperator",
    "commutator_superoperator", "random_hermitian", "haar_unitary",
    "hvec", "hunvec", "orthonormalize_hermitian",
]

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)

for _p in (I2, X, Y, Z):
    _p.setflags(write=False)


@dataclass(frozen=True)
class Tolerance:
    """Absolute/relative tolerance pair used by rank and residual decisions."""

    absolute: float = 1e-10
    relative: float = 1e-9

    def __post_init__(self):
        if not (np.isfinite(self.absolute) and np.isfinite(self.relative)):
            raise ValueError("tolerances must be finite")
        if self.absolute < 0 or self.relative < 0:
            raise ValueError("tolerances must be non-negative")

    def threshold(self, scale: float) -> float:
        """Cutoff for treating a quantity as zero at the given scale."""
        return max(self.absolute, self.relative * scale)


DEFAULT_TOL = Tolerance()


def dagger(a: np.ndarray) -> np.ndarray:
    return a.conj().T


def comm(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def frob(a: np.ndarray) -> float:
    return float(np.linalg.norm(a))


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product; dimensions multiply."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def kron_all(*ops: np.ndarray) -> np.ndarray:
    """Kronecker product of a sequence, left factor first."""
    out = np.asarray(ops[0], dtype=complex)
    for op in ops[1:]:
        out = np.kron(out, op)
    return out


def is_hermitian(a: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> bool:
    return frob(a - dagger(a)) <= tol.threshold(max(frob(a), 1.0))


def is_unitary(a: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> bool:
    n = a.shape[0]
    return frob(dagger(a) @ a - np.eye(n)) <= tol.threshold(np.sqrt(n))


def is_psd(a: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> bool:
    if not is_hermitian(a, tol):
        return False
    w = np.linalg.eigvalsh(a)
    return bool(w.min() >= -tol.threshold(max(abs(w).max(), 1.0)))


def is_trace_one(a: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> bool:
    return abs(np.trace(a) - 1.0) <= tol.threshold(1.0)


def herm_eig(h: np.ndarray, tol: Tolerance = DEFAULT_TOL):
    """Eigendecomposition of a Hermitian matrix.

    Returns ``(w, v)`` with eigenvalues ``w`` ascending and unitary
    eigenvector matrix ``v`` so that ``h = v diag(w) v^dag``.  Ties are broken
    by the LAPACK column ordering, which is deterministic but not canonical.

    Raises:
        NotHermitianError: if ``||h - h^dag||_F > tol * ||h||_F``.
    """
    h = np.asarray(h, dtype=complex)
    if frob(h - dagger(h)) > tol.threshold(max(frob(h), 1.0)):
        raise NotHermitianError("matrix is not Hermitian within tolerance")
    w, v = np.linalg.eigh(h)
    return w, v


def exp_unitary(h: np.ndarray, theta: float, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Unitary ``exp(-i theta h)`` for Hermitian ``h`` via eigendecomposition."""
    w, v = herm_eig(h, tol)
    phases = np.exp(-1j * theta * w)
    return (v * phases) @ dagger(v)


def null_space(m: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis of the kernel of ``m`` as matrix columns.

    Singular values below ``max(tol.absolute, tol.relative * sigma_max)`` are
    classified as zero.  The returned array has shape ``(cols, k)`` and may
    have ``k = 0``.
    """
    m = np.atleast_2d(np.asarray(m, dtype=complex))
    _, s, vh = np.linalg.svd(m)
    smax = s[0] if s.size else 0.0
    cutoff = tol.threshold(smax)
    rank = int(np.sum(s >= cutoff))
    return dagger(vh[rank:])


def partial_trace(rho: np.ndarray, dims, keep) -> np.ndarray:
    """Trace out all tensor factors not listed in ``keep``.

    ``dims`` lists the factor dimensions left to right; ``keep`` is an
    iterable of factor indices whose order in the output follows their order
    in ``dims``.  Preserves trace and Hermiticity.
    """
    rho = np.asarray(rho, dtype=complex)
    dims = list(dims)
    n = len(dims)
    total = int(np.prod(dims))
    if rho.shape != (total, total):
        raise DimensionMismatchError(
            f"product of dims {dims} is {total}, matrix is {rho.shape}")
    keep = sorted(set(int(k) for k in keep))
    if any(k < 0 or k >= n for k in keep):
        raise DimensionMismatchError(f"keep indices {keep} out of range for {n} factors")
    if len(keep) == n:
        return rho.copy()
    t = rho.reshape(dims + dims)
    # Trace highest traced index first so remaining axis numbers stay valid.
    for idx in sorted(set(range(n)) - set(keep), reverse=True):
        m = t.ndim // 2
        t = np.trace(t, axis1=idx, axis2=idx + m)
    d_keep = int(np.prod([dims[k] for k in keep])) if keep else 1
    return t.reshape(d_keep, d_keep)


def hs_inner(a: np.ndarray, b: np.ndarray) -> complex:
    """Hilbert-Schmidt inner product ``Tr[a^dag b]`` (no 1/2 factor)."""
    if a.shape != b.shape:
        raise DimensionMismatchError(f"shape mismatch {a.shape} vs {b.shape}")
    return complex(np.vdot(a, b))


def vectorize(op: np.ndarray) -> np.ndarray:
    """Row-major stacking of a matrix into a vector."""
    return np.asarray(op, dtype=complex).reshape(-1)


def devectorize(v: np.ndarray, dim: int | None = None) -> np.ndarray:
    """Inverse of :func:`vectorize`; square by default."""
    v = np.asarray(v, dtype=complex).reshape(-1)
    if dim is None:
        dim = int(round(np.sqrt(v.size)))
    if dim * dim != v.size:
        raise DimensionMismatchError(f"length {v.size} is not a square")
    return v.reshape(dim, dim)


def conjugation_superoperator(u: np.ndarray) -> np.ndarray:
    """Matrix acting on vectorized operators as ``vec(A) -> vec(u A u^dag)``."""
    u = np.asarray(u, dtype=complex)
    if u.shape[0] != u.shape[1]:
        raise DimensionMismatchError("conjugation requires a square matrix")
    return np.kron(u, u.conj())


def commutator_superoperator(h: np.ndarray) -> np.ndarray:
    """Matrix acting on vectorized operators as ``vec(B) -> vec([h, B])``."""
    h = np.asarray(h, dtype=complex)
    n = h.shape[0]
    eye = np.eye(n)
    return np.kron(h, eye) - np.kron(eye, h.T)


def random_hermitian(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Hermitian matrix with iid Gaussian entries, for tests and probes."""
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return (a + dagger(a)) / 2


def haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary: QR of a complex Gaussian with phase fixing.

    The diagonal-phase correction makes the QR output distribution exactly
    left- and right-invariant rather than merely column-orthonormal.
    """
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r)
    return q * (diag / np.abs(diag))


def hvec(m: np.ndarray) -> np.ndarray:
    """Real vectorization; the real dot product equals Re Tr[A^dag B].

    On Hermitian matrices that is exactly the Hilbert-Schmidt inner product,
    so Hermitian spans can be orthonormalized with real linear algebra.
    """
    v = m.reshape(-1)
    return np.concatenate([v.real, v.imag])


def hunvec(v: np.ndarray, dim: int) -> np.ndarray:
    half = v.size // 2
    return (v[:half] + 1j * v[half:]).reshape(dim, dim)


def orthonormalize_hermitian(mats, tol: Tolerance = DEFAULT_TOL) -> list[np.ndarray]:
    """Orthonormal basis (under Tr[A^dag B]) of the real span of Hermitian mats."""
    mats = [np.asarray(m, dtype=complex) for m in mats]
    if not mats:
        return []
    dim = mats[0].shape[0]
    rows = np.array([hvec(m) for m in mats])
    _, s, vh = np.linalg.svd(rows, full_matrices=False)
    smax = s[0] if s.size else 0.0
    keep = s >= tol.threshold(smax)
    out = []
    for row in vh[keep]:
        m = hunvec(row, dim)
        out.append((m + dagger(m)) / 2)  # strip rounding noise
    return out

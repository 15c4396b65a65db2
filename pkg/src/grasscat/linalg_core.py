"""Dense linear algebra over the real or complex field.

Matrices are plain ``numpy.ndarray`` objects of dtype ``float64`` (real
field) or ``complex128`` (complex field).  Subspaces are always compared
through their orthogonal projection matrices, never through frames, since a
frame is only determined up to a right unitary factor.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotOrthonormal, RankDeficient

FIELDS = ("real", "complex")


@dataclass(frozen=True)
class Tolerance:
    """Numerical thresholds used across the library.

    ``eps_orth`` bounds orthonormality residuals, ``eps_rank`` is the
    singular-value cutoff for rank and invertibility decisions and
    ``eps_eq`` bounds matrix equality.
    """

    eps_orth: float = 1e-10
    eps_rank: float = 1e-8
    eps_eq: float = 1e-8

    def __post_init__(self):
        for name in ("eps_orth", "eps_rank", "eps_eq"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")
        if self.eps_rank < self.eps_orth:
            raise ValueError("eps_rank must be >= eps_orth")

    def replace(self, **changes) -> Tolerance:
        values = {"eps_orth": self.eps_orth, "eps_rank": self.eps_rank, "eps_eq": self.eps_eq}
        values.update({k: v for k, v in changes.items() if v is not None})
        return Tolerance(**values)


DEFAULT_TOL = Tolerance()


def dtype_for(field: str):
    if field == "real":
        return np.float64
    if field == "complex":
        return np.complex128
    raise ValueError(f"unknown field {field!r}; expected one of {FIELDS}")


def field_of(*mats) -> str:
    """Smallest field containing all entries of ``mats``."""
    return "complex" if any(np.iscomplexobj(m) for m in mats) else "real"


def as_mat(a, field: str | None = None) -> np.ndarray:
    """Coerce ``a`` to a 2-d array over the requested (or inferred) field."""
    arr = np.asarray(a)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise ValueError(f"expected a matrix, got array of shape {arr.shape}")
    if field is None:
        field = field_of(arr)
    return arr.astype(dtype_for(field), copy=False)


def ct(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose.  For real input this is the plain transpose."""
    return a.conj().T


def max_abs(a) -> float:
    """Entrywise max norm; 0 for empty arrays."""
    a = np.asarray(a)
    return float(np.max(np.abs(a))) if a.size else 0.0


def residual(a, b) -> float:
    """Max-norm distance between two arrays, ``inf`` on shape mismatch."""
    a, b = np.asarray(a), np.asarray(b)
    if a.shape != b.shape:
        return float("inf")
    return max_abs(a - b)


def smallest_singular_value(a: np.ndarray) -> float:
    """Smallest singular value of a square or tall matrix (0 if rank-deficient in shape)."""
    r, c = a.shape
    if c == 0:
        return float("inf")
    if r < c:
        return 0.0
    return float(np.linalg.svd(a, compute_uv=False)[-1])


def random_matrix(rng: np.random.Generator, shape, field: str = "real") -> np.ndarray:
    """Standard Gaussian matrix; complex entries have unit variance."""
    if field == "real":
        return rng.standard_normal(shape)
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def orthonormality_residual(frame: np.ndarray) -> float:
    k = frame.shape[1]
    return max_abs(ct(frame) @ frame - np.eye(k))


def is_orthonormal(frame: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> bool:
    return orthonormality_residual(frame) <= tol.eps_orth


def orthonormalize(frame, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis of the column span of ``frame``.

    Uses a Householder QR with the diagonal of R made real positive, so the
    result coincides with classical Gram-Schmidt in exact arithmetic and the
    output is deterministic.

    Raises :class:`RankDeficient` when the smallest singular value of
    ``frame`` does not exceed ``tol.eps_rank``.
    """
    a = as_mat(frame)
    _m, k = a.shape
    if k == 0:
        return a.copy()
    if smallest_singular_value(a) <= tol.eps_rank:
        raise RankDeficient(f"frame of shape {a.shape} is not of full column rank")
    q, r = np.linalg.qr(a, mode="reduced")
    d = np.diag(r)
    phase = d / np.abs(d)
    return q * phase.conj()[None, :]


def orth_complement(frame, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis (m x (m-k)) of the orthogonal complement of an orthonormal m x k frame."""
    q = as_mat(frame)
    if orthonormality_residual(q) > tol.eps_orth:
        raise NotOrthonormal("orth_complement expects an orthonormal frame")
    m, k = q.shape
    if k == 0:
        return np.eye(m, dtype=q.dtype)
    full, _ = np.linalg.qr(q, mode="complete")
    return full[:, k:]


def proj_matrix(frame) -> np.ndarray:
    """Orthogonal projection onto the span of an orthonormal frame."""
    q = as_mat(frame)
    return q @ ct(q)


def random_frame(rng: np.random.Generator, m: int, k: int, field: str = "real") -> np.ndarray:
    """Haar-ish random orthonormal m x k frame."""
    if k == 0:
        return np.zeros((m, 0), dtype=dtype_for(field))
    return orthonormalize(random_matrix(rng, (m, k), field))


def pad(a: np.ndarray, rows: int, cols: int) -> np.ndarray:
    """Embed ``a`` as the top-left block of a zero matrix of shape (rows, cols)."""
    r, c = a.shape
    if rows < r or cols < c:
        raise ValueError(f"cannot pad {a.shape} into ({rows}, {cols})")
    out = np.zeros((rows, cols), dtype=a.dtype)
    out[:r, :c] = a
    return out


def block_diag(*mats: np.ndarray) -> np.ndarray:
    """Block-diagonal matrix; unlike ``scipy.linalg.block_diag`` it keeps 0-width blocks."""
    rows = sum(m.shape[0] for m in mats)
    cols = sum(m.shape[1] for m in mats)
    dtype = np.result_type(*mats) if mats else np.float64
    out = np.zeros((rows, cols), dtype=dtype)
    r = c = 0
    for m in mats:
        out[r:r + m.shape[0], c:c + m.shape[1]] = m
        r += m.shape[0]
        c += m.shape[1]
    return out

"""Points of Gr_k(F^m), the standard chart atlas and the stabilization maps.

A chart is centred at a subspace V and uses an orthonormal basis ``v`` of V
together with an orthonormal basis ``v_perp`` of its complement.  The
coordinate of a nearby k-plane W is the (m-k) x k matrix A with
``span(v + v_perp @ A) == W``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import NotOrthonormal, OutsideChartDomain, ShapeMismatch
from .linalg_core import (
    DEFAULT_TOL,
    Tolerance,
    as_mat,
    ct,
    field_of,
    orth_complement,
    orthonormality_residual,
    orthonormalize,
    proj_matrix,
    residual,
    smallest_singular_value,
)


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class GrPoint:
    """A k-dimensional subspace of F^m stored as an orthonormal m x k frame.

    The frame given at construction is kept as is (it must already be
    orthonormal); use :meth:`span` to build a point from arbitrary columns.
    Two points are equal when (m, k) agree and their projections agree.
    """

    frame: np.ndarray

    def __post_init__(self):
        f = as_mat(self.frame)
        if orthonormality_residual(f) > DEFAULT_TOL.eps_orth * max(1, f.shape[1]):
            raise NotOrthonormal(f"frame of shape {f.shape} is not orthonormal")
        object.__setattr__(self, "frame", _frozen(f))

    @classmethod
    def span(cls, columns, tol: Tolerance = DEFAULT_TOL) -> GrPoint:
        return cls(orthonormalize(columns, tol))

    @classmethod
    def zero(cls, m: int, field: str = "real") -> GrPoint:
        dtype = np.complex128 if field == "complex" else np.float64
        return cls(np.zeros((m, 0), dtype=dtype))

    @classmethod
    def coordinate(cls, m: int, k: int, field: str = "real") -> GrPoint:
        """span(e_1, ..., e_k) inside F^m."""
        dtype = np.complex128 if field == "complex" else np.float64
        return cls(np.eye(m, k, dtype=dtype))

    @property
    def ambient_dim(self) -> int:
        return self.frame.shape[0]

    @property
    def sub_dim(self) -> int:
        return self.frame.shape[1]

    @property
    def field(self) -> str:
        return field_of(self.frame)

    @cached_property
    def proj(self) -> np.ndarray:
        return _frozen(proj_matrix(self.frame))

    def distance(self, other: GrPoint) -> float:
        """Max-norm distance of projection matrices; ``inf`` when (m, k) differ."""
        if (self.ambient_dim, self.sub_dim) != (other.ambient_dim, other.sub_dim):
            return float("inf")
        return residual(self.proj, other.proj)

    def same_as(self, other: GrPoint, tol: Tolerance = DEFAULT_TOL) -> bool:
        return self.distance(other) <= tol.eps_eq

    def __eq__(self, other):
        if not isinstance(other, GrPoint):
            return NotImplemented
        return self.same_as(other)

    __hash__ = None

    def __repr__(self):
        return f"GrPoint(m={self.ambient_dim}, k={self.sub_dim}, field={self.field})"


@dataclass(frozen=True, eq=False)
class GrChart:
    """Chart of Gr_k(F^m) centred at ``base``.

    ``basis_v`` and ``basis_vperp`` are orthonormal bases of the base and its
    complement; together they form a unitary matrix.
    """

    base: GrPoint
    basis_v: np.ndarray
    basis_vperp: np.ndarray

    def __post_init__(self):
        v, vp = as_mat(self.basis_v), as_mat(self.basis_vperp)
        m, k = self.base.ambient_dim, self.base.sub_dim
        if v.shape != (m, k) or vp.shape != (m, m - k):
            raise ShapeMismatch(f"chart bases of shapes {v.shape}, {vp.shape} do not fit Gr_{k}(F^{m})")
        if orthonormality_residual(np.hstack([v, vp])) > DEFAULT_TOL.eps_orth * max(1, m):
            raise NotOrthonormal("chart bases do not form a unitary matrix")
        if residual(proj_matrix(v), self.base.proj) > DEFAULT_TOL.eps_eq:
            raise ShapeMismatch("basis_v does not span the chart base")
        object.__setattr__(self, "basis_v", _frozen(v))
        object.__setattr__(self, "basis_vperp", _frozen(vp))

    @classmethod
    def at(cls, base: GrPoint, tol: Tolerance = DEFAULT_TOL) -> GrChart:
        """Canonical chart: the base frame and a QR completion of it."""
        return cls(base, base.frame, orth_complement(base.frame, tol))

    @classmethod
    def from_unitary(cls, u, k: int) -> GrChart:
        """Chart whose base is spanned by the first k columns of a unitary matrix."""
        u = as_mat(u)
        return cls(GrPoint(u[:, :k]), u[:, :k], u[:, k:])

    @property
    def ambient_dim(self) -> int:
        return self.base.ambient_dim

    @property
    def sub_dim(self) -> int:
        return self.base.sub_dim

    @property
    def unitary(self) -> np.ndarray:
        return np.hstack([self.basis_v, self.basis_vperp])

    def coord_shape(self) -> tuple[int, int]:
        return (self.ambient_dim - self.sub_dim, self.sub_dim)


def chart_basis(chart: GrChart, A) -> np.ndarray:
    """The (generally non-orthonormal) basis ``v + v_perp @ A`` of the point with coordinate A."""
    A = as_mat(A)
    if A.shape != chart.coord_shape():
        raise ShapeMismatch(f"coordinate of shape {A.shape}, chart expects {chart.coord_shape()}")
    return chart.basis_v + chart.basis_vperp @ A


def chart_embed(chart: GrChart, A, tol: Tolerance = DEFAULT_TOL) -> GrPoint:
    return GrPoint(orthonormalize(chart_basis(chart, A), tol))


def _check_same_grassmannian(chart: GrChart, W: GrPoint) -> None:
    if (W.ambient_dim, W.sub_dim) != (chart.ambient_dim, chart.sub_dim):
        raise ShapeMismatch(
            f"point of Gr_{W.sub_dim}(F^{W.ambient_dim}) vs chart on Gr_{chart.sub_dim}(F^{chart.ambient_dim})")


def in_chart_domain(chart: GrChart, W: GrPoint, tol: Tolerance = DEFAULT_TOL) -> bool:
    _check_same_grassmannian(chart, W)
    return smallest_singular_value(ct(chart.basis_v) @ W.frame) > tol.eps_rank


def chart_coords(chart: GrChart, W: GrPoint, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Coordinate A of W; raises :class:`OutsideChartDomain` if W does not project onto the base."""
    _check_same_grassmannian(chart, W)
    block = ct(chart.basis_v) @ W.frame
    if smallest_singular_value(block) <= tol.eps_rank:
        raise OutsideChartDomain("point does not project isomorphically onto the chart base")
    # A = v_perp^H W (v^H W)^{-1}; solve from the right via the transposed system
    rhs = ct(chart.basis_vperp) @ W.frame
    if rhs.size == 0:
        return rhs
    return np.linalg.solve(block.T, rhs.T).T


def chart_transition(source: GrChart, target: GrChart, A, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Transition map: target coordinates of the point with source coordinate A."""
    return chart_coords(target, chart_embed(source, A, tol), tol)


def stabilize_gr(p: GrPoint, times: int = 1) -> GrPoint:
    """Zero-pad the ambient space: Gr_k(F^m) -> Gr_k(F^{m+times})."""
    m, k = p.frame.shape
    f = np.zeros((m + times, k), dtype=p.frame.dtype)
    f[:m] = p.frame
    return GrPoint(f)


def iota_prime(p: GrPoint) -> GrPoint:
    """Shift every coordinate up by one slot, then adjoin e_1."""
    m, k = p.frame.shape
    f = np.zeros((m + 1, k + 1), dtype=p.frame.dtype)
    f[0, 0] = 1
    f[1:, 1:] = p.frame
    return GrPoint(f)


def tensor_index(i: int, j: int, trunc: int) -> int:
    """Row-major flattening of e_i (x) e_j into F^{k * trunc}; 1-based like the math."""
    return (i - 1) * trunc + j


def iota_g(p: GrPoint, k: int, trunc: int) -> GrPoint:
    """V -> V + <e_{k+1} (x) e_1>, from Gr_k(F^k (x) F^trunc) to Gr_{k+1}(F^{k+1} (x) F^trunc)."""
    if p.sub_dim != k or p.ambient_dim != k * trunc:
        raise ShapeMismatch(
            f"iota_g expects a {k}-plane in F^{k * trunc}, got Gr_{p.sub_dim}(F^{p.ambient_dim})")
    # row-major flattening keeps e_i (x) e_j in place when the first factor grows
    f = np.zeros(((k + 1) * trunc, k + 1), dtype=p.frame.dtype)
    f[:k * trunc, :k] = p.frame
    f[tensor_index(k + 1, 1, trunc) - 1, k] = 1
    return GrPoint(f)

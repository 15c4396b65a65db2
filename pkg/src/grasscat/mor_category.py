"""The morphism bundle Mor_{k,l}^{m,n}, its charts, and the two matrix categories.

A :class:`MorPoint` is a linear map T: X -> Y between a k-plane X of F^m and
an l-plane Y of F^n.  It is stored as the n x m ambient matrix that agrees
with T on X and vanishes on the orthogonal complement of X, which makes
equality and composition independent of any chart.

Composition takes its arguments in diagrammatic order: ``mor_compose(f, g)``
is "f then g", i.e. the map g o f.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotComposable, ShapeMismatch
from .grassmann import GrChart, GrPoint, chart_basis, chart_coords, stabilize_gr
from .linalg_core import (
    DEFAULT_TOL,
    Tolerance,
    as_mat,
    ct,
    max_abs,
    pad,
    random_matrix,
    residual,
    smallest_singular_value,
)


@dataclass(frozen=True, eq=False)
class MorPoint:
    """A point (X, Y, T) of Mor_{k,l}^{m,n}; ``map_mat`` has shape (n, m)."""

    src: GrPoint
    dst: GrPoint
    map_mat: np.ndarray

    def __post_init__(self):
        a = as_mat(self.map_mat)
        n, m = self.dst.ambient_dim, self.src.ambient_dim
        if a.shape != (n, m):
            raise ShapeMismatch(f"map of shape {a.shape} cannot go from F^{m} to F^{n}")
        scale = max(1.0, max_abs(a))
        if residual(a @ self.src.proj, a) > DEFAULT_TOL.eps_eq * scale:
            raise ShapeMismatch("map does not vanish on the complement of its source")
        if residual(self.dst.proj @ a, a) > DEFAULT_TOL.eps_eq * scale:
            raise ShapeMismatch("map does not land in its target")
        a = np.array(a, copy=True)
        a.setflags(write=False)
        object.__setattr__(self, "map_mat", a)

    @classmethod
    def from_box(cls, src: GrPoint, dst: GrPoint, box) -> MorPoint:
        """Map whose matrix in the stored orthonormal frames of src and dst is ``box``."""
        box = as_mat(box)
        if box.shape != (dst.sub_dim, src.sub_dim):
            raise ShapeMismatch(f"box of shape {box.shape} does not fit {dst.sub_dim}x{src.sub_dim}")
        return cls(src, dst, dst.frame @ box @ ct(src.frame))

    def box(self) -> np.ndarray:
        """Matrix of the map in the stored orthonormal frames of src and dst."""
        return ct(self.dst.frame) @ self.map_mat @ self.src.frame

    def distance(self, other: MorPoint) -> float:
        return max(self.src.distance(other.src), self.dst.distance(other.dst),
                   residual(self.map_mat, other.map_mat))

    def same_as(self, other: MorPoint, tol: Tolerance = DEFAULT_TOL) -> bool:
        return self.distance(other) <= tol.eps_eq

    __hash__ = None

    def __repr__(self):
        return (f"MorPoint(Gr_{self.src.sub_dim}(F^{self.src.ambient_dim}) -> "
                f"Gr_{self.dst.sub_dim}(F^{self.dst.ambient_dim}))")


@dataclass(frozen=True)
class ChartTriple:
    """Chart coordinates (A_X, B_Y, [T]) of a morphism."""

    A_X: np.ndarray
    B_Y: np.ndarray
    T_box: np.ndarray

    def distance(self, other: ChartTriple) -> float:
        return max(residual(self.A_X, other.A_X), residual(self.B_Y, other.B_Y),
                   residual(self.T_box, other.T_box))


def mor_source(f: MorPoint) -> GrPoint:
    return f.src


def mor_target(f: MorPoint) -> GrPoint:
    return f.dst


def mor_identity(V: GrPoint) -> MorPoint:
    return MorPoint(V, V, V.proj)


def mor_compose(f: MorPoint, g: MorPoint, tol: Tolerance = DEFAULT_TOL) -> MorPoint:
    """g o f; requires the target of f to equal the source of g."""
    gap = f.dst.distance(g.src)
    if not gap <= tol.eps_eq:
        raise NotComposable(f"target of first map differs from source of second (gap {gap:.3g})")
    return MorPoint(f.src, g.dst, g.map_mat @ f.map_mat)


def mor_chart(f: MorPoint, base_src: GrChart, base_dst: GrChart,
              tol: Tolerance = DEFAULT_TOL) -> ChartTriple:
    """Coordinates of f in the chart centred at (base_src, base_dst).

    The map block is taken against the bases ``x = x0 + x0_perp A_X`` and
    ``y = y0 + y0_perp B_Y`` exactly, without orthonormalizing them, so that
    composition reads ``(A_X, C_Z, [S][T])``.
    """
    A = chart_coords(base_src, f.src, tol)
    B = chart_coords(base_dst, f.dst, tol)
    x = chart_basis(base_src, A)
    # y0^H y = id and T x lies in span(y), so y0^H T x solves T x = y [T]
    T = ct(base_dst.basis_v) @ f.map_mat @ x
    return ChartTriple(A, B, T)


def mor_unchart(t: ChartTriple, base_src: GrChart, base_dst: GrChart) -> MorPoint:
    x = chart_basis(base_src, t.A_X)
    y = chart_basis(base_dst, t.B_Y)
    T = as_mat(t.T_box)
    if T.shape != (y.shape[1], x.shape[1]):
        raise ShapeMismatch(f"map block of shape {T.shape}, charts need {(y.shape[1], x.shape[1])}")
    src, dst = GrPoint.span(x), GrPoint.span(y)
    if x.shape[1] == 0 or y.shape[1] == 0:
        return MorPoint(src, dst, np.zeros((y.shape[0], x.shape[0]), dtype=np.result_type(x, y, T)))
    # x^+ = (x^H x)^{-1} x^H kills the complement of span(x)
    x_pinv = np.linalg.solve(ct(x) @ x, ct(x))
    return MorPoint(src, dst, y @ T @ x_pinv)


def recharting_factors(f: MorPoint, old: tuple[GrChart, GrChart], new: tuple[GrChart, GrChart],
                       tol: Tolerance = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Invertible (C, D) with ``[T]_new = C [T]_old D``.

    D expresses the new source basis in the old one, C the old target basis
    in the new one.
    """
    # x_new = x_old D and x0_old^H x_old = id, so D = x0_old^H x_new; likewise for C
    x_new = chart_basis(new[0], chart_coords(new[0], f.src, tol))
    y_old = chart_basis(old[1], chart_coords(old[1], f.dst, tol))
    D = ct(old[0].basis_v) @ x_new
    C = ct(new[1].basis_v) @ y_old
    return C, D


def mor_stabilize(f: MorPoint, pad_src: int = 1, pad_dst: int = 1) -> MorPoint:
    src = stabilize_gr(f.src, pad_src) if pad_src else f.src
    dst = stabilize_gr(f.dst, pad_dst) if pad_dst else f.dst
    n, m = f.map_mat.shape
    return MorPoint(src, dst, pad(f.map_mat, n + pad_dst, m + pad_src))


def is_iso(f: MorPoint, tol: Tolerance = DEFAULT_TOL,
           charts: tuple[GrChart, GrChart] | None = None) -> bool:
    """True iff source and target have equal dimension and the map block is invertible.

    Without ``charts`` the block is read in the stored frames (the chart
    centred at the morphism itself).
    """
    if f.src.sub_dim != f.dst.sub_dim:
        return False
    if f.src.sub_dim == 0:
        return True
    box = f.box() if charts is None else mor_chart(f, charts[0], charts[1], tol).T_box
    return smallest_singular_value(box) > tol.eps_rank


def random_morpoint(rng: np.random.Generator, src: GrPoint, dst: GrPoint, field: str = "real",
                    rank: int | None = None) -> MorPoint:
    """Gaussian map between two subspaces; ``rank`` caps the rank of the block."""
    l, k = dst.sub_dim, src.sub_dim
    if rank is None or rank >= min(k, l):
        box = random_matrix(rng, (l, k), field)
    else:
        box = random_matrix(rng, (l, rank), field) @ random_matrix(rng, (rank, k), field)
    return MorPoint.from_box(src, dst, box)


# -- the matrix category V_F --------------------------------------------------

@dataclass(frozen=True, eq=False)
class VfMor:
    """A matrix viewed as a morphism F^cols -> F^rows."""

    mat: np.ndarray

    def __post_init__(self):
        a = np.array(as_mat(self.mat), copy=True)
        a.setflags(write=False)
        object.__setattr__(self, "mat", a)

    @property
    def rows(self) -> int:
        return self.mat.shape[0]

    @property
    def cols(self) -> int:
        return self.mat.shape[1]

    @property
    def source(self) -> int:
        return self.cols

    @property
    def target(self) -> int:
        return self.rows

    def distance(self, other: VfMor) -> float:
        return residual(self.mat, other.mat)

    __hash__ = None

    def __repr__(self):
        return f"VfMor(F^{self.cols} -> F^{self.rows})"


def vf_identity(n: int, field: str = "real") -> VfMor:
    return VfMor(np.eye(n, dtype=np.complex128 if field == "complex" else np.float64))


def vf_compose(f: VfMor, g: VfMor) -> VfMor:
    """g o f."""
    if f.rows != g.cols:
        raise NotComposable(f"F^{f.cols} -> F^{f.rows} cannot be followed by F^{g.cols} -> F^{g.rows}")
    return VfMor(g.mat @ f.mat)


def embed_vf(f: VfMor, ambient_src: int, ambient_dst: int) -> MorPoint:
    """Realize a matrix as a map between coordinate subspaces span(e_1..e_n) of larger ambients."""
    if ambient_src < f.cols or ambient_dst < f.rows:
        raise ShapeMismatch(f"{f!r} does not fit into ambients ({ambient_src}, {ambient_dst})")
    field = "complex" if np.iscomplexobj(f.mat) else "real"
    src = GrPoint.coordinate(ambient_src, f.cols, field)
    dst = GrPoint.coordinate(ambient_dst, f.rows, field)
    return MorPoint(src, dst, pad(f.mat, ambient_dst, ambient_src))


def embed_g(V: GrPoint) -> MorPoint:
    """The groupoid G has only identities; its inclusion sends V to id_V."""
    return mor_identity(V)

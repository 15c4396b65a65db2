"""Direct sum and tensor product on the matrix and subspace categories, with coherence witnesses.

On subspaces of F^n both operations land in a fixed larger ambient space
through two basis orderings:

* theta: F^n + F^n -> F^{2n} interleaves, (e_i, 0) -> e_{2i-1}, (0, e_i) -> e_{2i};
* kappa: F^n (x) F^n -> F^{n^2} walks the index square in L-shaped layers,
  so that e_i (x) e_j with max(i, j) = L lands in positions (L-1)^2+1 .. L^2.

Both orderings restrict to themselves when n grows, which is what makes the
operations commute with stabilization on the nose.

Indices in docstrings are 1-based; arrays are 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cache

import numpy as np

from .categories import g_category, vf_category, vff_category
from .errors import AmbientMismatch, GrasscatError, ShapeMismatch
from .grassmann import GrChart, GrPoint, stabilize_gr
from .internal_cat import (
    NatTransReport,
    NatTransWitness,
    SampledCategory,
    SampledFunctor,
    check_nat_trans,
    product_category,
)
from .linalg_core import (
    DEFAULT_TOL,
    Tolerance,
    as_mat,
    block_diag,
    dtype_for,
    pad,
    smallest_singular_value,
)
from .mor_category import (
    MorPoint,
    VfMor,
    embed_vf,
    is_iso,
    mor_identity,
    mor_stabilize,
    vf_identity,
)
from .report import Report

# -- basis orderings ------------------------------------------------------------

def _perm_matrix(perm: np.ndarray) -> np.ndarray:
    """Matrix sending e_j to e_perm[j]."""
    n = len(perm)
    P = np.zeros((n, n))
    P[perm, np.arange(n)] = 1.0
    return P


@dataclass(frozen=True)
class ThetaIso:
    """Interleaving F^n + F^n -> F^{2n}; ``perm[j]`` is the 0-based image of basis vector j."""

    n: int
    perm: np.ndarray

    @property
    def matrix(self) -> np.ndarray:
        return _perm_matrix(self.perm)

    def apply(self, v) -> np.ndarray:
        return theta_apply(self.n, v)


@dataclass(frozen=True)
class KappaIso:
    """Layered ordering F^n (x) F^n -> F^{n^2} on row-major Kronecker coordinates."""

    n: int
    perm: np.ndarray

    @property
    def matrix(self) -> np.ndarray:
        return _perm_matrix(self.perm)

    def apply(self, v) -> np.ndarray:
        return kappa_apply(self.n, v)


@cache
def _theta_perm(n: int) -> np.ndarray:
    perm = np.empty(2 * n, dtype=np.intp)
    perm[:n] = 2 * np.arange(n)
    perm[n:] = 2 * np.arange(n) + 1
    perm.setflags(write=False)
    return perm


def kappa_index(i: int, j: int) -> int:
    """Position of e_i (x) e_j (1-based in and out)."""
    if i < 1 or j < 1:
        raise ValueError("basis indices are 1-based")
    layer = max(i, j)
    offset = (layer - 1) ** 2
    if j == layer:
        return i + offset
    return 2 * layer - j + offset


@cache
def _kappa_perm(n: int) -> np.ndarray:
    perm = np.empty(n * n, dtype=np.intp)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            perm[(i - 1) * n + (j - 1)] = kappa_index(i, j) - 1
    perm.setflags(write=False)
    return perm


def theta(n: int) -> ThetaIso:
    return ThetaIso(n, _theta_perm(n))


def kappa(n: int) -> KappaIso:
    return KappaIso(n, _kappa_perm(n))


def theta_apply(n: int, v) -> np.ndarray:
    """Reorder the rows of ``v`` (a vector or matrix on F^n + F^n) into F^{2n}."""
    v = np.asarray(v)
    if v.shape[0] != 2 * n:
        raise ShapeMismatch(f"theta_{n} acts on length {2 * n}, got {v.shape[0]}")
    out = np.empty_like(v)
    out[_theta_perm(n)] = v
    return out


def kappa_apply(n: int, v) -> np.ndarray:
    """Reorder the rows of ``v`` (Kronecker coordinates on F^n (x) F^n) into F^{n^2}."""
    v = np.asarray(v)
    if v.shape[0] != n * n:
        raise ShapeMismatch(f"kappa_{n} acts on length {n * n}, got {v.shape[0]}")
    out = np.empty_like(v)
    out[_kappa_perm(n)] = v
    return out


def _theta_inv_cols(n: int, a: np.ndarray) -> np.ndarray:
    """a @ theta^T: reorder columns the same way rows are reordered by theta_apply."""
    return theta_apply(n, a.T).T


def _kappa_inv_cols(n: int, a: np.ndarray) -> np.ndarray:
    return kappa_apply(n, a.T).T


# -- the operations on V_F^f ------------------------------------------------------

def _same_ambient(*dims: int) -> int:
    if len(set(dims)) != 1:
        raise AmbientMismatch(f"operands live in different ambient spaces {sorted(set(dims))}; stabilize first")
    return dims[0]


def equalize_ambient(*points: GrPoint) -> tuple[GrPoint, ...]:
    """Zero-pad every point to the largest ambient dimension among them."""
    m = max(p.ambient_dim for p in points)
    return tuple(p if p.ambient_dim == m else stabilize_gr(p, m - p.ambient_dim) for p in points)


def oplus_points(X: GrPoint, Y: GrPoint) -> GrPoint:
    """theta(X + Y) in F^{2n}; the frame lists the columns of X first."""
    n = _same_ambient(X.ambient_dim, Y.ambient_dim)
    return GrPoint(theta_apply(n, block_diag(X.frame, Y.frame)))


def otimes_points(X: GrPoint, Y: GrPoint) -> GrPoint:
    """kappa(X (x) Y) in F^{n^2} with the Kronecker frame."""
    n = _same_ambient(X.ambient_dim, Y.ambient_dim)
    return GrPoint(kappa_apply(n, np.kron(X.frame, Y.frame)))


def oplus_mor(f: MorPoint, g: MorPoint) -> MorPoint:
    m = _same_ambient(f.src.ambient_dim, g.src.ambient_dim)
    n = _same_ambient(f.dst.ambient_dim, g.dst.ambient_dim)
    mat = _theta_inv_cols(m, theta_apply(n, block_diag(f.map_mat, g.map_mat)))
    return MorPoint(oplus_points(f.src, g.src), oplus_points(f.dst, g.dst), mat)


def otimes_mor(f: MorPoint, g: MorPoint) -> MorPoint:
    m = _same_ambient(f.src.ambient_dim, g.src.ambient_dim)
    n = _same_ambient(f.dst.ambient_dim, g.dst.ambient_dim)
    mat = _kappa_inv_cols(m, kappa_apply(n, np.kron(f.map_mat, g.map_mat)))
    return MorPoint(otimes_points(f.src, g.src), otimes_points(f.dst, g.dst), mat)


def oplus_chart(c1: GrChart, c2: GrChart) -> GrChart:
    """Chart at theta(V1 + V2) whose coordinates of theta(X + Y) are block-diag(A_X, A_Y)."""
    n = _same_ambient(c1.ambient_dim, c2.ambient_dim)
    v = theta_apply(n, block_diag(c1.basis_v, c2.basis_v))
    vp = theta_apply(n, block_diag(c1.basis_vperp, c2.basis_vperp))
    return GrChart(oplus_points(c1.base, c2.base), v, vp)


def otimes_chart(c1: GrChart, c2: GrChart) -> GrChart:
    """Chart at kappa(V1 (x) V2).

    The complement basis is ordered as v1 (x) v2_perp, v1_perp (x) v2,
    v1_perp (x) v2_perp, so the coordinate of kappa(X (x) Y) stacks
    ``kron(I, A_Y)``, ``kron(A_X, I)`` and ``kron(A_X, A_Y)``.
    """
    n = _same_ambient(c1.ambient_dim, c2.ambient_dim)
    v1, p1, v2, p2 = c1.basis_v, c1.basis_vperp, c2.basis_v, c2.basis_vperp
    v = kappa_apply(n, np.kron(v1, v2))
    vp = kappa_apply(n, np.hstack([np.kron(v1, p2), np.kron(p1, v2), np.kron(p1, p2)]))
    return GrChart(otimes_points(c1.base, c2.base), v, vp)


def otimes_chart_coords(A, B) -> np.ndarray:
    """Coordinates of kappa(X (x) Y) in :func:`otimes_chart`, from those of X and Y."""
    A, B = as_mat(A), as_mat(B)
    k1, k2 = A.shape[1], B.shape[1]
    return np.vstack([np.kron(np.eye(k1), B), np.kron(A, np.eye(k2)), np.kron(A, B)])


# -- the operations on V_F ---------------------------------------------------------

def vf_oplus_obj(n: int, m: int) -> int:
    return n + m


def vf_otimes_obj(n: int, m: int) -> int:
    return n * m


def vf_oplus(a: VfMor, b: VfMor) -> VfMor:
    return VfMor(block_diag(a.mat, b.mat))


def vf_otimes(a: VfMor, b: VfMor) -> VfMor:
    """Kronecker product: e_i (x) e'_j is basis vector m(i-1)+j of F^{nm}."""
    return VfMor(np.kron(a.mat, b.mat))


# -- witnesses -----------------------------------------------------------------------

def _dtype(field: str):
    return dtype_for(field)


def vf_swap(n: int, m: int, field: str = "real") -> VfMor:
    """F^m + F^n -> F^n + F^m, (y, x) -> (x, y): the block matrix [[0, I_n], [I_m, 0]]."""
    S = np.zeros((n + m, m + n), dtype=_dtype(field))
    S[:n, m:] = np.eye(n)
    S[n:, :m] = np.eye(m)
    return VfMor(S)


def distrib_permutation(m: int, n: int, k: int) -> np.ndarray:
    """0-based images of the basis of F^m (x) (F^n + F^k) in (F^m (x) F^n) + (F^m (x) F^k)."""
    perm = np.empty(m * (n + k), dtype=np.intp)
    for i in range(m):
        for b in range(n + k):
            perm[i * (n + k) + b] = i * n + b if b < n else m * n + i * k + (b - n)
    return perm


def witness_distrib(m: int, n: int, k: int, side: str = "left", field: str = "real") -> VfMor:
    """Permutation matrix realizing the distributivity isomorphism in V_F.

    ``left``:  F^m (x) (F^n + F^k) -> (F^m (x) F^n) + (F^m (x) F^k).
    ``right``: (F^m + F^n) (x) F^k -> (F^m (x) F^k) + (F^n (x) F^k); with
    row-major Kronecker coordinates this one is the identity.
    """
    if side == "right":
        return vf_identity((m + n) * k, field)
    if side != "left":
        raise ValueError("side must be 'left' or 'right'")
    P = _perm_matrix(distrib_permutation(m, n, k)).astype(_dtype(field))
    return VfMor(P)


def _partial_perm(size_out: int, size_in: int, pairs, dtype) -> np.ndarray:
    L = np.zeros((size_out, size_in), dtype=dtype)
    for src, dst in pairs:
        L[dst, src] = 1
    return L


def witness_distrib_f(X: GrPoint, Y: GrPoint, Z: GrPoint, side: str = "right",
                      ambient: int | None = None) -> MorPoint:
    """Distributivity witness on subspaces of a common F^n.

    ``right``: (X + Y) (x) Z  ->  (X (x) Z) + (Y (x) Z)
    ``left``:  X (x) (Y + Z)  ->  (X (x) Y) + (X (x) Z)

    The first side lives in F^{4n^2} after padding the single factor by n;
    the second lives in F^{2n^2} and is padded to F^{4n^2}.  ``ambient``
    pads both further.
    """
    n = _same_ambient(X.ambient_dim, Y.ambient_dim, Z.ambient_dim)
    N = 4 * n * n if ambient is None else ambient
    if N < 4 * n * n:
        raise ShapeMismatch(f"ambient {N} is smaller than the natural {4 * n * n}")
    src, dst = _distrib_objects(X, Y, Z, side)
    src, dst = stabilize_gr(src, N - 4 * n * n), stabilize_gr(dst, N - 4 * n * n)
    L = _partial_perm(N, N, _distrib_pairs(n, side), np.result_type(X.frame, Y.frame, Z.frame))
    return MorPoint(src, dst, L @ src.proj)


def _distrib_objects(X, Y, Z, side):
    n = X.ambient_dim
    if side == "right":
        src = otimes_points(oplus_points(X, Y), stabilize_gr(Z, n))
        dst = oplus_points(otimes_points(X, Z), otimes_points(Y, Z))
    elif side == "left":
        src = otimes_points(stabilize_gr(X, n), oplus_points(Y, Z))
        dst = oplus_points(otimes_points(X, Y), otimes_points(X, Z))
    else:
        raise ValueError("side must be 'left' or 'right'")
    return src, stabilize_gr(dst, 2 * n * n)


@cache
def _distrib_pairs(n: int, side: str) -> tuple:
    pairs = []
    for a in range(1, n + 1):
        for c in range(1, n + 1):
            pos = kappa_index(a, c)
            if side == "right":
                # e_a of the first summand is theta-position 2a-1, of the second 2a
                pairs.append((kappa_index(2 * a - 1, c) - 1, 2 * pos - 2))
                pairs.append((kappa_index(2 * a, c) - 1, 2 * pos - 1))
            else:
                pairs.append((kappa_index(a, 2 * c - 1) - 1, 2 * pos - 2))
                pairs.append((kappa_index(a, 2 * c) - 1, 2 * pos - 1))
    return tuple(pairs)


def witness_add_unit(X: GrPoint, side: str = "left") -> MorPoint:
    """Iso from X padded into F^{2n} to theta(0 + X) (``left``) or theta(X + 0) (``right``), induced by id_X."""
    n = X.ambient_dim
    dtype = X.frame.dtype
    zero_block = np.zeros((n, n), dtype=dtype)
    eye = np.eye(n, dtype=dtype)
    if side == "left":
        J = theta_apply(n, np.vstack([zero_block, eye]))
    elif side == "right":
        J = theta_apply(n, np.vstack([eye, zero_block]))
    else:
        raise ValueError("side must be 'left' or 'right'")
    src = stabilize_gr(X, n)
    dst = GrPoint(J @ X.frame)
    return MorPoint(src, dst, J @ X.proj @ pad(eye, 2 * n, n).T)


@cache
def _pair_swap(n: int) -> np.ndarray:
    perm = np.arange(2 * n) ^ 1
    return _perm_matrix(perm)


def witness_comm(X: GrPoint, Y: GrPoint) -> MorPoint:
    """Iso theta(X + Y) -> theta(Y + X) exchanging positions 2i-1 and 2i."""
    n = _same_ambient(X.ambient_dim, Y.ambient_dim)
    src, dst = oplus_points(X, Y), oplus_points(Y, X)
    return MorPoint(src, dst, _pair_swap(n) @ src.proj)


def comparison_oplus_map(k: int, l: int, trunc: int, field: str = "real") -> np.ndarray:
    """theta(e_i, 0) -> e_i and theta(0, e_j) -> e_{k+j}, inside F^{2 trunc}."""
    pairs = [(2 * i, i) for i in range(k)] + [(2 * j + 1, k + j) for j in range(l)]
    return _partial_perm(2 * trunc, 2 * trunc, pairs, _dtype(field))


def comparison_otimes_map(k: int, l: int, trunc: int, field: str = "real") -> np.ndarray:
    """kappa(e_i (x) e_j) -> e_{(i-1)l+j}, inside F^{trunc^2}."""
    pairs = [(kappa_index(i, j) - 1, (i - 1) * l + (j - 1))
             for i in range(1, k + 1) for j in range(1, l + 1)]
    return _partial_perm(trunc * trunc, trunc * trunc, pairs, _dtype(field))


def witness_is_iso(w, tol: Tolerance = DEFAULT_TOL) -> bool:
    if isinstance(w, VfMor):
        return w.rows == w.cols and smallest_singular_value(w.mat) > tol.eps_rank
    return is_iso(w, tol)


# -- functors and natural-transformation cases ----------------------------------------

def _vf_pair_functor(name, max_dim, field, on_obj, on_mor, target_dim) -> SampledFunctor:
    src = product_category(vf_category(max_dim, field), vf_category(max_dim, field))
    dst = vf_category(target_dim, field)
    return SampledFunctor(src, dst, lambda x: on_obj(*x), lambda f: on_mor(*f), name=name)


def oplus_vf_functor(max_dim: int = 5, field: str = "real") -> SampledFunctor:
    return _vf_pair_functor("oplus[V_F]", max_dim, field, vf_oplus_obj, vf_oplus, 2 * max_dim)


def otimes_vf_functor(max_dim: int = 5, field: str = "real") -> SampledFunctor:
    return _vf_pair_functor("otimes[V_F]", max_dim, field, vf_otimes_obj, vf_otimes, max_dim * max_dim)


def _vff_pair(n: int, k_max: int, field: str) -> SampledCategory:
    c = vff_category((n,), min(k_max, n), field)
    return product_category(c, c)


def oplus_vff_functor(n: int = 3, k_max: int = 3, field: str = "real") -> SampledFunctor:
    return SampledFunctor(_vff_pair(n, k_max, field), vff_category((2 * n,), 2 * n, field),
                          lambda x: oplus_points(*x), lambda f: oplus_mor(*f), name=f"oplus[F^{n}]")


def otimes_vff_functor(n: int = 3, k_max: int = 3, field: str = "real") -> SampledFunctor:
    return SampledFunctor(_vff_pair(n, k_max, field), vff_category((n * n,), n * n, field),
                          lambda x: otimes_points(*x), lambda f: otimes_mor(*f), name=f"otimes[F^{n}]")


def _swapped(F: SampledFunctor) -> SampledFunctor:
    return SampledFunctor(F.source, F.target, lambda x: F.on_objects((x[1], x[0])),
                          lambda f: F.on_morphisms((f[1], f[0])), name=f"{F.name}.swap")


@dataclass(frozen=True)
class NatTransCase:
    """A witness phi: F => G together with the two functors it relates."""

    name: str
    F: SampledFunctor
    G: SampledFunctor
    phi: NatTransWitness


def swap_case(max_dim: int = 4, field: str = "real") -> NatTransCase:
    plus = oplus_vf_functor(max_dim, field)
    phi = NatTransWitness(lambda x: vf_swap(x[0], x[1], field), "swap")
    return NatTransCase("swap in V_F", _swapped(plus), plus, phi)


def distrib_vf_case(max_dim: int = 3, side: str = "left", field: str = "real") -> NatTransCase:
    c = vf_category(max_dim, field)
    src = product_category(c, c, c)
    dst = vf_category(2 * max_dim * max_dim, field)
    if side == "left":
        F = SampledFunctor(src, dst, lambda x: x[0] * (x[1] + x[2]),
                           lambda f: vf_otimes(f[0], vf_oplus(f[1], f[2])), "x(y+z)")
        G = SampledFunctor(src, dst, lambda x: x[0] * x[1] + x[0] * x[2],
                           lambda f: vf_oplus(vf_otimes(f[0], f[1]), vf_otimes(f[0], f[2])), "xy+xz")
    else:
        F = SampledFunctor(src, dst, lambda x: (x[0] + x[1]) * x[2],
                           lambda f: vf_otimes(vf_oplus(f[0], f[1]), f[2]), "(x+y)z")
        G = SampledFunctor(src, dst, lambda x: x[0] * x[2] + x[1] * x[2],
                           lambda f: vf_oplus(vf_otimes(f[0], f[2]), vf_otimes(f[1], f[2])), "xz+yz")
    phi = NatTransWitness(lambda x: witness_distrib(*x, side=side, field=field), f"distrib[{side}]")
    return NatTransCase(f"{side} distributivity in V_F", F, G, phi)


def distrib_vff_case(n: int = 2, k_max: int = 2, side: str = "right", field: str = "real") -> NatTransCase:
    c = vff_category((n,), min(k_max, n), field)
    src = product_category(c, c, c)
    N = 4 * n * n
    dst = vff_category((N,), N, field)
    if side == "right":
        F = SampledFunctor(src, dst, lambda x: otimes_points(oplus_points(x[0], x[1]), stabilize_gr(x[2], n)),
                           lambda f: otimes_mor(oplus_mor(f[0], f[1]), mor_stabilize(f[2], n, n)), "(X+Y)Z")
        G = SampledFunctor(src, dst,
                           lambda x: stabilize_gr(oplus_points(otimes_points(x[0], x[2]), otimes_points(x[1], x[2])),
                                                  2 * n * n),
                           lambda f: mor_stabilize(oplus_mor(otimes_mor(f[0], f[2]), otimes_mor(f[1], f[2])),
                                                   2 * n * n, 2 * n * n), "XZ+YZ")
    else:
        F = SampledFunctor(src, dst, lambda x: otimes_points(stabilize_gr(x[0], n), oplus_points(x[1], x[2])),
                           lambda f: otimes_mor(mor_stabilize(f[0], n, n), oplus_mor(f[1], f[2])), "X(Y+Z)")
        G = SampledFunctor(src, dst,
                           lambda x: stabilize_gr(oplus_points(otimes_points(x[0], x[1]), otimes_points(x[0], x[2])),
                                                  2 * n * n),
                           lambda f: mor_stabilize(oplus_mor(otimes_mor(f[0], f[1]), otimes_mor(f[0], f[2])),
                                                   2 * n * n, 2 * n * n), "XY+XZ")
    phi = NatTransWitness(lambda x: witness_distrib_f(*x, side=side), f"distrib_f[{side}]")
    return NatTransCase(f"{side} distributivity in V_F^f", F, G, phi)


def add_unit_case(n: int = 3, k_max: int = 3, side: str = "left", field: str = "real") -> NatTransCase:
    src = vff_category((n,), min(k_max, n), field)
    dst = vff_category((2 * n,), 2 * n, field)
    zero = GrPoint.zero(n, field)
    id0 = mor_identity(zero)
    F = SampledFunctor(src, dst, lambda x: stabilize_gr(x, n), lambda f: mor_stabilize(f, n, n), "stabilize")
    if side == "left":
        G = SampledFunctor(src, dst, lambda x: oplus_points(zero, x), lambda f: oplus_mor(id0, f), "0+X")
    else:
        G = SampledFunctor(src, dst, lambda x: oplus_points(x, zero), lambda f: oplus_mor(f, id0), "X+0")
    phi = NatTransWitness(lambda x: witness_add_unit(x, side), f"unit[{side}]")
    return NatTransCase(f"{side} additive unit in V_F^f", F, G, phi)


def comm_case(n: int = 3, k_max: int = 3, field: str = "real") -> NatTransCase:
    plus = oplus_vff_functor(n, k_max, field)
    phi = NatTransWitness(lambda x: witness_comm(*x), "comm")
    return NatTransCase("commutativity in V_F^f", plus, _swapped(plus), phi)


def comparison_cases(trunc: int = 3, field: str = "real") -> list[NatTransCase]:
    """Witnesses comparing the operations of V_F, V_F^f and G along the inclusion functors.

    For V_F the subspace side is built from coordinate subspaces of F^trunc,
    so ``trunc`` bounds the matrix sizes.  The G squares commute strictly and
    their witness is the identity.
    """
    N = trunc
    pair = product_category(vf_category(N, field), vf_category(N, field))
    emb = lambda f, M: embed_vf(f, M, M)
    coord = lambda M, k: GrPoint.coordinate(M, k, field)

    plus_dst = vff_category((2 * N,), 2 * N, field)
    F1 = SampledFunctor(pair, plus_dst, lambda x: oplus_points(coord(N, x[0]), coord(N, x[1])),
                        lambda f: oplus_mor(emb(f[0], N), emb(f[1], N)), "oplus.(embed x embed)")
    G1 = SampledFunctor(pair, plus_dst, lambda x: coord(2 * N, x[0] + x[1]),
                        lambda f: emb(vf_oplus(f[0], f[1]), 2 * N), "embed.oplus")

    def phi1(x):
        src, dst = F1.on_objects(x), G1.on_objects(x)
        return MorPoint(src, dst, comparison_oplus_map(x[0], x[1], N, field))

    times_dst = vff_category((N * N,), N * N, field)
    F2 = SampledFunctor(pair, times_dst, lambda x: otimes_points(coord(N, x[0]), coord(N, x[1])),
                        lambda f: otimes_mor(emb(f[0], N), emb(f[1], N)), "otimes.(embed x embed)")
    G2 = SampledFunctor(pair, times_dst, lambda x: coord(N * N, x[0] * x[1]),
                        lambda f: emb(vf_otimes(f[0], f[1]), N * N), "embed.otimes")

    def phi2(x):
        src, dst = F2.on_objects(x), G2.on_objects(x)
        return MorPoint(src, dst, comparison_otimes_map(x[0], x[1], N, field))

    g = g_category((N,), N, field)
    gpair = product_category(g, g)
    cases = [
        NatTransCase("oplus comparison V_F -> V_F^f", F1, G1, NatTransWitness(phi1, "compare_oplus")),
        NatTransCase("otimes comparison V_F -> V_F^f", F2, G2, NatTransWitness(phi2, "compare_otimes")),
    ]
    for label, op_points, op_mor, M in (("oplus", oplus_points, oplus_mor, 2 * N),
                                        ("otimes", otimes_points, otimes_mor, N * N)):
        dst = vff_category((M,), M, field, iso=True)
        Fg = SampledFunctor(gpair, dst, lambda x, op=op_points: op(*x),
                            lambda f, op=op_mor: op(mor_identity(f[0]), mor_identity(f[1])),
                            f"{label}.(embed_g x embed_g)")
        Gg = SampledFunctor(gpair, dst, lambda x, op=op_points: op(*x),
                            lambda f, op=op_points: mor_identity(op(*f)), f"embed_g.{label}")
        phig = NatTransWitness(lambda x, op=op_points: mor_identity(op(*x)), f"compare_{label}_g")
        cases.append(NatTransCase(f"{label} comparison G -> iso V_F^f", Fg, Gg, phig))
    return cases


def shipped_cases(field: str = "real", n: int = 2) -> list[NatTransCase]:
    """Every coherence witness shipped by the library, at small truncation."""
    return [
        swap_case(4, field),
        distrib_vf_case(3, "left", field),
        distrib_vf_case(3, "right", field),
        distrib_vff_case(n, n, "right", field),
        distrib_vff_case(n, n, "left", field),
        add_unit_case(n + 1, n + 1, "left", field),
        add_unit_case(n + 1, n + 1, "right", field),
        comm_case(n + 1, n + 1, field),
        *comparison_cases(n + 1, field),
    ]


def check_witness_case(case: NatTransCase, samples: int = 500, seed: int = 0,
                       tol: Tolerance = DEFAULT_TOL) -> NatTransReport:
    """Naturality of the witness in both formulations, plus invertibility of its components."""
    rep = check_nat_trans(case.F, case.G, case.phi, samples, seed, tol)
    rep.title = f"{case.name}: {rep.title}"
    ax = rep.axiom("phi(x) is an isomorphism", 0.0)
    rng = np.random.default_rng(seed + 3)
    for _ in range(samples):
        x = case.F.source.random_object(rng)
        try:
            ax.record(0.0 if witness_is_iso(case.phi.component(x), tol) else float("inf"), x)
        except (GrasscatError, ValueError, np.linalg.LinAlgError) as exc:
            ax.record(float("inf"), x, f"{type(exc).__name__}: {exc}")
    return rep


# -- stabilization compatibility ----------------------------------------------------------

def check_stabilization_squares(samples: int = 500, seed: int = 0, n_max: int = 5, k_max: int = 3,
                                field: str = "real") -> Report:
    """Padding before or after an operation gives the same result, exactly.

    theta_{n+1} and kappa_{n+1} restrict to theta_n and kappa_n, so
    stabilize(X) + stabilize(Y) is theta(X + Y) padded by two slots and
    stabilize(X) (x) stabilize(Y) is kappa(X (x) Y) padded by 2n + 1 slots.
    """
    rng = np.random.default_rng(seed)
    rep = Report("stabilization squares", seed=seed, info={"samples": samples})
    names = ["oplus on points", "oplus on morphisms", "otimes on points", "otimes on morphisms"]
    ax = {k: rep.axiom(k, 0.0) for k in names}
    for _ in range(samples):
        n = int(rng.integers(1, n_max + 1))
        c = vff_category((n,), min(k_max, n), field)
        f, g = c.random_morphism(rng, c.random_object(rng), c.random_object(rng)), \
            c.random_morphism(rng, c.random_object(rng), c.random_object(rng))
        X, Y = f.src, g.src
        sX, sY = stabilize_gr(X), stabilize_gr(Y)
        sf, sg = mor_stabilize(f), mor_stabilize(g)
        ax["oplus on points"].record(_exact(oplus_points(sX, sY).frame, stabilize_gr(oplus_points(X, Y), 2).frame), (X, Y))
        ax["oplus on morphisms"].record(_exact(oplus_mor(sf, sg).map_mat, mor_stabilize(oplus_mor(f, g), 2, 2).map_mat), (f, g))
        ax["otimes on points"].record(
            _exact(otimes_points(sX, sY).frame, stabilize_gr(otimes_points(X, Y), 2 * n + 1).frame), (X, Y))
        ax["otimes on morphisms"].record(
            _exact(otimes_mor(sf, sg).map_mat, mor_stabilize(otimes_mor(f, g), 2 * n + 1, 2 * n + 1).map_mat), (f, g))
    return rep


def _exact(a: np.ndarray, b: np.ndarray) -> float:
    if a.shape != b.shape:
        return float("inf")
    return 0.0 if np.array_equal(a, b) else float(np.max(np.abs(a - b)))

"""Finite sampled truncations of the three shipped categories and their inclusion functors.

* ``vf``:  the matrix category, objects the integers n (standing for F^n),
  morphisms :class:`VfMor`.
* ``vff``: the category of subspaces, objects :class:`GrPoint` of bounded
  ambient and sub dimension, morphisms :class:`MorPoint`.
* ``g``:   the Grassmannian groupoid with identities only; a morphism is
  represented by the subspace it is the identity of.
"""

from __future__ import annotations

import itertools

from .errors import NotComposable
from .grassmann import GrPoint, iota_prime
from .internal_cat import SampledCategory, SampledFunctor
from .linalg_core import random_frame, random_matrix
from .mor_category import (
    MorPoint,
    VfMor,
    embed_g,
    embed_vf,
    mor_compose,
    mor_identity,
    random_morpoint,
    vf_compose,
    vf_identity,
)


def _vf_corrupt(f: VfMor) -> VfMor:
    return VfMor(2 * f.mat.T)


def _mor_corrupt(f: MorPoint) -> MorPoint:
    return MorPoint(f.src, f.dst, 2 * f.map_mat)


def vf_category(max_dim: int = 5, field: str = "real", min_dim: int = 0) -> SampledCategory:
    """Matrices of size at most ``max_dim``; objects drawn uniformly from min_dim..max_dim."""
    if max_dim < max(min_dim, 1):
        raise ValueError("max_dim must be >= 1 and >= min_dim")

    def obj_distance(a, b):
        return 0.0 if a == b else float("inf")

    return SampledCategory(
        name=f"V_F[n<={max_dim},{field}]",
        source=lambda f: f.source,
        target=lambda f: f.target,
        identity=lambda n: vf_identity(n, field),
        compose=vf_compose,
        obj_distance=obj_distance,
        mor_distance=lambda f, g: f.distance(g),
        random_object=lambda rng: int(rng.integers(min_dim, max_dim + 1)),
        random_morphism=lambda rng, a, b: VfMor(random_matrix(rng, (b, a), field)),
        corrupt=_vf_corrupt,
    )


def _random_grpoint(rng, ambients, k_max, field) -> GrPoint:
    m = int(ambients[rng.integers(0, len(ambients))])
    k = int(rng.integers(0, min(k_max, m) + 1))
    return GrPoint(random_frame(rng, m, k, field))


def vff_category(ambients=(1, 2, 3, 4, 5, 6), k_max: int = 3, field: str = "real",
                 iso: bool = False) -> SampledCategory:
    """Subspaces of F^m for m in ``ambients`` with dimension at most ``k_max``.

    With ``iso`` the morphisms are restricted to isomorphisms, so every chain
    stays inside one sub dimension.
    """
    ambients = tuple(int(m) for m in ambients)
    if not ambients or min(ambients) < 0 or k_max < 0:
        raise ValueError("ambients must be non-empty and non-negative, k_max >= 0")
    tag = "iso " if iso else ""

    def random_morphism(rng, a, b):
        if iso and a.sub_dim != b.sub_dim:
            return None
        return random_morpoint(rng, a, b, field)

    random_chain = None
    if iso:
        def random_chain(rng, length):
            k = int(rng.integers(0, min(k_max, min(ambients)) + 1))
            objs = []
            for _ in range(length + 1):
                m = int(ambients[rng.integers(0, len(ambients))])
                objs.append(GrPoint(random_frame(rng, m, k, field)))
            return [random_morpoint(rng, a, b, field) for a, b in itertools.pairwise(objs)]

    return SampledCategory(
        name=f"{tag}V_F^f[m in {list(ambients)},k<={k_max},{field}]",
        source=lambda f: f.src,
        target=lambda f: f.dst,
        identity=mor_identity,
        compose=mor_compose,
        obj_distance=lambda x, y: x.distance(y),
        mor_distance=lambda f, g: f.distance(g),
        random_object=lambda rng: _random_grpoint(rng, ambients, k_max, field),
        random_morphism=random_morphism,
        random_chain=random_chain,
        corrupt=_mor_corrupt,
    )


def g_category(ambients=(1, 2, 3, 4, 5, 6), k_max: int = 3, field: str = "real") -> SampledCategory:
    """The groupoid G: every morphism is an identity, recorded as its object."""
    ambients = tuple(int(m) for m in ambients)

    def compose(f: GrPoint, g: GrPoint) -> GrPoint:
        if f.distance(g) != 0.0:
            raise NotComposable("G only composes an identity with itself")
        return f

    def random_chain(rng, length):
        x = _random_grpoint(rng, ambients, k_max, field)
        return [x] * length

    return SampledCategory(
        name=f"G[m in {list(ambients)},k<={k_max},{field}]",
        source=lambda f: f,
        target=lambda f: f,
        identity=lambda x: x,
        compose=compose,
        obj_distance=lambda x, y: x.distance(y),
        mor_distance=lambda f, g: f.distance(g),
        random_object=lambda rng: _random_grpoint(rng, ambients, k_max, field),
        random_chain=random_chain,
        corrupt=iota_prime,
    )


def identity_functor(cat: SampledCategory) -> SampledFunctor:
    return SampledFunctor(cat, cat, lambda x: x, lambda f: f, name=f"id[{cat.name}]")


def embed_vf_functor(max_dim: int = 5, ambient: int | None = None, field: str = "real") -> SampledFunctor:
    """V_F -> V_F^f, F^n |-> span(e_1..e_n) inside F^ambient."""
    N = max_dim if ambient is None else ambient
    if N < max_dim:
        raise ValueError("ambient must be at least max_dim")
    src = vf_category(max_dim, field)
    dst = vff_category((N,), k_max=N, field=field)
    return SampledFunctor(src, dst, lambda n: GrPoint.coordinate(N, n, field),
                          lambda f: embed_vf(f, N, N), name=f"embed_vf[F^{N}]")


def embed_g_functor(ambients=(1, 2, 3, 4, 5, 6), k_max: int = 3, field: str = "real") -> SampledFunctor:
    """G -> iso V_F^f, sending every identity to the identity morphism."""
    src = g_category(ambients, k_max, field)
    dst = vff_category(ambients, k_max, field, iso=True)
    return SampledFunctor(src, dst, lambda x: x, embed_g, name="embed_g")


def conjugate_transpose_mutant(F: SampledFunctor) -> SampledFunctor:
    """Mutant functor whose morphism part is replaced by the conjugate transpose (a contravariant map)."""
    def on_morphisms(f):
        g = F.on_morphisms(f)
        if isinstance(g, VfMor):
            return VfMor(g.mat.conj().T)
        if isinstance(g, MorPoint):
            return MorPoint(g.dst, g.src, g.map_mat.conj().T)
        raise TypeError(f"cannot transpose {type(g).__name__}")

    return SampledFunctor(F.source, F.target, F.on_objects, on_morphisms,
                          name=f"{F.name}[conjugate transpose]")

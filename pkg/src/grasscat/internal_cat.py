"""Executable axioms for internal categories, functors, natural transformations and nerves.

Object and morphism spaces here are manifolds, so every checker is a seeded
randomized test: it draws composable chains from the category's sampler and
records, per axiom, the largest residual seen together with the first
failing instance.

Composition is diagrammatic throughout: ``compose(f, g)`` is "f then g" and
requires ``target(f) == source(g)``, mirroring the pullback M x_O M.
"""
# closures passed to _measure run before the loop advances
# ruff: noqa: B023

from __future__ import annotations

import itertools
from collections.abc import Callable
from dataclasses import dataclass, field, replace
from typing import Any

import numpy as np

from .errors import GrasscatError, NotComposable, SamplerExhausted, TypingMismatch
from .linalg_core import DEFAULT_TOL, Tolerance
from .report import Report

_FAILURES = (GrasscatError, ValueError, ArithmeticError, np.linalg.LinAlgError)


@dataclass(frozen=True)
class SampledCategory:
    """A category given by its structure maps plus a seeded sampler.

    ``random_morphism(rng, a, b)`` draws a morphism a -> b, or returns
    ``None`` when the hom-space is empty.  Categories whose hom-spaces are
    mostly empty (such as a groupoid with only identities) should supply
    ``random_chain`` instead.  ``corrupt`` perturbs a morphism and is only
    used to build mutants for sensitivity tests.
    """

    name: str
    source: Callable[[Any], Any]
    target: Callable[[Any], Any]
    identity: Callable[[Any], Any]
    compose: Callable[[Any, Any], Any]
    obj_distance: Callable[[Any, Any], float]
    mor_distance: Callable[[Any, Any], float]
    random_object: Callable[[np.random.Generator], Any]
    random_morphism: Callable[[np.random.Generator, Any, Any], Any] | None = None
    random_chain: Callable[[np.random.Generator, int], list] | None = None
    corrupt: Callable[[Any], Any] | None = None
    max_tries: int = 50

    def sample_chain(self, rng: np.random.Generator, length: int) -> list:
        """``length`` consecutively composable morphisms."""
        if self.random_chain is not None:
            return self.random_chain(rng, length)
        for _ in range(self.max_tries):
            objs = [self.random_object(rng) for _ in range(length + 1)]
            chain = [self.random_morphism(rng, a, b) for a, b in itertools.pairwise(objs)]
            if all(f is not None for f in chain):
                return chain
        raise SamplerExhausted(f"{self.name}: no composable chain of length {length} found")

    def with_mutation(self, site: str) -> SampledCategory:
        """A copy with one structure map corrupted ('compose' or 'identity')."""
        if self.corrupt is None:
            raise ValueError(f"{self.name} has no corruption hook")
        bad = self.corrupt
        if site == "compose":
            compose = self.compose
            return replace(self, name=self.name + "[mutated compose]",
                           compose=lambda f, g: bad(compose(f, g)))
        if site == "identity":
            identity = self.identity
            return replace(self, name=self.name + "[mutated identity]",
                           identity=lambda x: bad(identity(x)))
        raise ValueError(f"unknown mutation site {site!r}")


@dataclass(frozen=True)
class SampledFunctor:
    source: SampledCategory
    target: SampledCategory
    on_objects: Callable[[Any], Any]
    on_morphisms: Callable[[Any], Any]
    name: str = "F"


@dataclass(frozen=True)
class NatTransWitness:
    """Component map phi: O(C) -> M(D)."""

    component: Callable[[Any], Any]
    name: str = "phi"


def _measure(result, fn: Callable[[], float], witness) -> None:
    try:
        res = float(fn())
        result.record(res, witness)
    except _FAILURES as exc:
        result.record(float("inf"), witness, f"{type(exc).__name__}: {exc}")


def check_category_axioms(cat: SampledCategory, samples: int = 1000, seed: int = 0,
                          tol: Tolerance = DEFAULT_TOL) -> Report:
    """Unit, typing and associativity diagrams of an internal category, sampled."""
    rng = np.random.default_rng(seed)
    rep = Report(f"category axioms: {cat.name}", seed=seed, info={"samples": samples})
    eps = tol.eps_eq
    names = ["s(e(x)) = x", "t(e(x)) = x", "s(g.f) = s(f)", "t(g.f) = t(g)",
             "associativity", "left unit", "right unit"]
    ax = {n: rep.axiom(n, eps) for n in names}
    S, T, E, C = cat.source, cat.target, cat.identity, cat.compose
    od, md = cat.obj_distance, cat.mor_distance
    for _ in range(samples):
        x = cat.random_object(rng)
        f, g, h = cat.sample_chain(rng, 3)
        _measure(ax["s(e(x)) = x"], lambda: od(S(E(x)), x), x)
        _measure(ax["t(e(x)) = x"], lambda: od(T(E(x)), x), x)
        _measure(ax["s(g.f) = s(f)"], lambda: od(S(C(f, g)), S(f)), (f, g))
        _measure(ax["t(g.f) = t(g)"], lambda: od(T(C(f, g)), T(g)), (f, g))
        _measure(ax["associativity"], lambda: md(C(C(f, g), h), C(f, C(g, h))), (f, g, h))
        _measure(ax["left unit"], lambda: md(C(f, E(T(f))), f), f)
        _measure(ax["right unit"], lambda: md(C(E(S(f)), f), f), f)
    return rep


def _functor_checks(F: SampledFunctor, rep: Report, rng, samples: int, eps: float,
                    prefix: str = "") -> None:
    C, D = F.source, F.target
    FO, FM = F.on_objects, F.on_morphisms
    names = ["source square", "target square", "identity square", "composition square"]
    ax = {n: rep.axiom(prefix + n, eps) for n in names}
    for _ in range(samples):
        x = C.random_object(rng)
        f, g = C.sample_chain(rng, 2)
        _measure(ax["source square"], lambda: D.obj_distance(D.source(FM(f)), FO(C.source(f))), f)
        _measure(ax["target square"], lambda: D.obj_distance(D.target(FM(f)), FO(C.target(f))), f)
        _measure(ax["identity square"], lambda: D.mor_distance(FM(C.identity(x)), D.identity(FO(x))), x)
        _measure(ax["composition square"],
                 lambda: D.mor_distance(FM(C.compose(f, g)), D.compose(FM(f), FM(g))), (f, g))


def check_functor(F: SampledFunctor, samples: int = 1000, seed: int = 0,
                  tol: Tolerance = DEFAULT_TOL) -> Report:
    """The four compatibility squares of an internal functor, sampled."""
    rng = np.random.default_rng(seed)
    rep = Report(f"functor: {F.name}", seed=seed, info={"samples": samples})
    _functor_checks(F, rep, rng, samples, tol.eps_eq)
    return rep


def product_category(*factors: SampledCategory) -> SampledCategory:
    """Finite product; objects and morphisms are tuples, structure maps act componentwise."""
    if not factors:
        raise ValueError("product of no categories")

    def compose(f, g):
        return tuple(c.compose(a, b) for c, a, b in zip(factors, f, g))

    def random_chain(rng, length):
        chains = [c.sample_chain(rng, length) for c in factors]
        return [tuple(ch[i] for ch in chains) for i in range(length)]

    corrupt = None
    if factors[0].corrupt is not None:
        first = factors[0].corrupt
        corrupt = lambda f: (first(f[0]),) + tuple(f[1:])

    return SampledCategory(
        name=" x ".join(c.name for c in factors),
        source=lambda f: tuple(c.source(a) for c, a in zip(factors, f)),
        target=lambda f: tuple(c.target(a) for c, a in zip(factors, f)),
        identity=lambda x: tuple(c.identity(a) for c, a in zip(factors, x)),
        compose=compose,
        obj_distance=lambda x, y: max(c.obj_distance(a, b) for c, a, b in zip(factors, x, y)),
        mor_distance=lambda f, g: max(c.mor_distance(a, b) for c, a, b in zip(factors, f, g)),
        random_object=lambda rng: tuple(c.random_object(rng) for c in factors),
        random_chain=random_chain,
        corrupt=corrupt,
    )


# -- C x [1] and the second formulation of natural transformations ----------

_LABELS = ("00", "01", "11")


def interval_category(C: SampledCategory) -> SampledCategory:
    """The product C x [1]; morphisms are pairs (h, label) with label in 00, 01, 11."""

    def compose(p, q):
        (h1, a1), (h2, a2) = p, q
        if a1[1] != a2[0]:
            raise NotComposable(f"[1]-labels {a1} and {a2} do not compose")
        return (C.compose(h1, h2), a1[0] + a2[1])

    def obj_distance(x, y):
        return C.obj_distance(x[0], y[0]) if x[1] == y[1] else float("inf")

    def mor_distance(p, q):
        return C.mor_distance(p[0], q[0]) if p[1] == q[1] else float("inf")

    def random_chain(rng, length):
        chain = C.sample_chain(rng, length)
        if length > 1 and rng.random() < 0.5:
            # (id, 0->1) then (h, 1->1) factors (h, 0->1); this is where naturality is tested
            start = C.source(chain[-1])
            chain = [C.identity(start) for _ in range(length - 1)] + [chain[-1]]
            levels = [0] * (length - 1) + [1, 1]
        else:
            cut = int(rng.integers(0, length + 2))
            levels = [0 if j < cut else 1 for j in range(length + 1)]
        return [(h, f"{a}{b}") for h, a, b in zip(chain, levels, levels[1:])]

    return SampledCategory(
        name=f"{C.name} x [1]",
        source=lambda p: (C.source(p[0]), p[1][0]),
        target=lambda p: (C.target(p[0]), p[1][1]),
        identity=lambda x: (C.identity(x[0]), x[1] * 2),
        compose=compose,
        obj_distance=obj_distance,
        mor_distance=mor_distance,
        random_object=lambda rng: (C.random_object(rng), "01"[int(rng.integers(0, 2))]),
        random_chain=random_chain,
    )


def interval_functor(F: SampledFunctor, G: SampledFunctor, phi: NatTransWitness) -> SampledFunctor:
    """Phi: C x [1] -> D with Phi(h, 0->1) := phi(t(h)) o F(h)."""
    C, D = F.source, F.target

    def on_objects(x):
        return F.on_objects(x[0]) if x[1] == "0" else G.on_objects(x[0])

    def on_morphisms(p):
        h, label = p
        if label == "00":
            return F.on_morphisms(h)
        if label == "11":
            return G.on_morphisms(h)
        return D.compose(F.on_morphisms(h), phi.component(C.target(h)))

    return SampledFunctor(interval_category(C), D, on_objects, on_morphisms,
                          name=f"Phi[{phi.name}]")


@dataclass
class NatTransReport(Report):
    """Report carrying one verdict per formulation of naturality."""

    definition_axioms: list[str] = field(default_factory=list)
    interval_axioms: list[str] = field(default_factory=list)

    @property
    def definition_passed(self) -> bool:
        return all(self[n].passed for n in self.definition_axioms)

    @property
    def interval_passed(self) -> bool:
        return all(self[n].passed for n in self.interval_axioms)

    @property
    def formulations_agree(self) -> bool:
        return self.definition_passed == self.interval_passed


def check_nat_trans(F: SampledFunctor, G: SampledFunctor, phi: NatTransWitness,
                    samples: int = 1000, seed: int = 0, tol: Tolerance = DEFAULT_TOL) -> NatTransReport:
    """Check phi: F => G twice.

    First directly: s(phi(x)) = F(x), t(phi(x)) = G(x) and
    phi(t h) o F(h) = G(h) o phi(s h).  Then through the functor
    Phi: C x [1] -> D built from phi, whose functoriality is equivalent.
    """
    if F.source.name != G.source.name or F.target.name != G.target.name:
        raise TypingMismatch(f"{F.name} and {G.name} do not share source and target categories")
    C, D = F.source, F.target
    eps = tol.eps_eq
    rep = NatTransReport(f"natural transformation: {phi.name}: {F.name} => {G.name}", seed=seed,
                         info={"samples": samples})
    rng = np.random.default_rng(seed)
    ax_s = rep.axiom("s(phi(x)) = F(x)", eps)
    ax_t = rep.axiom("t(phi(x)) = G(x)", eps)
    ax_n = rep.axiom("naturality", eps)
    for _ in range(samples):
        x = C.random_object(rng)
        (h,) = C.sample_chain(rng, 1)
        _measure(ax_s, lambda: D.obj_distance(D.source(phi.component(x)), F.on_objects(x)), x)
        _measure(ax_t, lambda: D.obj_distance(D.target(phi.component(x)), G.on_objects(x)), x)
        _measure(ax_n, lambda: D.mor_distance(
            D.compose(F.on_morphisms(h), phi.component(C.target(h))),
            D.compose(phi.component(C.source(h)), G.on_morphisms(h))), h)
    rep.definition_axioms = [ax_s.name, ax_t.name, ax_n.name]

    Phi = interval_functor(F, G, phi)
    before = len(rep.results)
    _functor_checks(Phi, rep, np.random.default_rng(seed + 1), samples, eps, prefix="Phi: ")
    ax_r = rep.axiom("Phi: phi(x) = Phi(id_x, 0->1)", eps)
    rng2 = np.random.default_rng(seed + 2)
    for _ in range(samples):
        x = C.random_object(rng2)
        _measure(ax_r, lambda: D.mor_distance(Phi.on_morphisms((C.identity(x), "01")),
                                              phi.component(x)), x)
    rep.interval_axioms = [r.name for r in rep.results[before:]]
    return rep


# -- nerve --------------------------------------------------------------------

@dataclass(frozen=True)
class NerveSimplex:
    """A k-simplex: k consecutively composable morphisms (an object when k = 0)."""

    chain: tuple
    vertex: Any = None

    @property
    def level(self) -> int:
        return len(self.chain)


def _vertices(cat: SampledCategory, x: NerveSimplex) -> list:
    if x.level == 0:
        return [x.vertex]
    return [cat.source(f) for f in x.chain] + [cat.target(x.chain[-1])]


def face(cat: SampledCategory, x: NerveSimplex, i: int) -> NerveSimplex:
    """d_i: drop the first/last morphism (i = 0 / i = k) or compose slots i-1 and i."""
    k = x.level
    if not 0 <= i <= k or k == 0:
        raise IndexError(f"face d_{i} undefined on a {k}-simplex")
    c = x.chain
    if k == 1:
        return NerveSimplex((), cat.target(c[0]) if i == 0 else cat.source(c[0]))
    if i == 0:
        return NerveSimplex(c[1:])
    if i == k:
        return NerveSimplex(c[:-1])
    return NerveSimplex(c[:i - 1] + (cat.compose(c[i - 1], c[i]),) + c[i + 1:])


def degeneracy(cat: SampledCategory, x: NerveSimplex, i: int) -> NerveSimplex:
    """s_i: insert the identity of the i-th vertex."""
    k = x.level
    if not 0 <= i <= k:
        raise IndexError(f"degeneracy s_{i} undefined on a {k}-simplex")
    v = _vertices(cat, x)[i]
    return NerveSimplex(x.chain[:i] + (cat.identity(v),) + x.chain[i:])


def simplex_distance(cat: SampledCategory, a: NerveSimplex, b: NerveSimplex) -> float:
    if a.level != b.level:
        return float("inf")
    if a.level == 0:
        return cat.obj_distance(a.vertex, b.vertex)
    return max(cat.mor_distance(f, g) for f, g in zip(a.chain, b.chain))


def nerve(cat: SampledCategory, level: int, samples: int = 1, seed: int = 0) -> list[NerveSimplex]:
    """Sampled simplices of Ner_level; use :func:`face` and :func:`degeneracy` on them."""
    if level < 0:
        raise ValueError("nerve level must be >= 0")
    rng = np.random.default_rng(seed)
    return [_sample_simplex(cat, rng, level) for _ in range(samples)]


def _sample_simplex(cat: SampledCategory, rng, level: int) -> NerveSimplex:
    if level == 0:
        return NerveSimplex((), cat.random_object(rng))
    return NerveSimplex(tuple(cat.sample_chain(rng, level)))


def check_simplicial_identities(cat: SampledCategory, max_level: int = 4, samples: int = 100,
                                seed: int = 0, tol: Tolerance = DEFAULT_TOL) -> Report:
    """All five families of simplicial identities on sampled simplices of levels 0..max_level."""
    rng = np.random.default_rng(seed)
    rep = Report(f"nerve simplicial identities: {cat.name}", seed=seed,
                 info={"samples per level": samples, "max level": max_level})
    eps = tol.eps_eq
    ax = {n: rep.axiom(n, eps) for n in
          ["d_i d_j = d_(j-1) d_i (i<j)", "d_i s_j = s_(j-1) d_i (i<j)", "d_j s_j = id = d_(j+1) s_j",
           "d_i s_j = s_j d_(i-1) (i>j+1)", "s_i s_j = s_(j+1) s_i (i<=j)"]}
    d = lambda x, i: face(cat, x, i)
    s = lambda x, i: degeneracy(cat, x, i)
    dist = lambda a, b: simplex_distance(cat, a, b)
    for n in range(max_level + 1):
        for _ in range(samples):
            x = _sample_simplex(cat, rng, n)
            for j in range(n + 1):
                for i in range(j):
                    if n >= 2:
                        _measure(ax["d_i d_j = d_(j-1) d_i (i<j)"], lambda: dist(d(d(x, j), i), d(d(x, i), j - 1)), x)
                    if n >= 1:
                        _measure(ax["d_i s_j = s_(j-1) d_i (i<j)"], lambda: dist(d(s(x, j), i), s(d(x, i), j - 1)), x)
                _measure(ax["d_j s_j = id = d_(j+1) s_j"],
                         lambda: max(dist(d(s(x, j), j), x), dist(d(s(x, j), j + 1), x)), x)
                for i in range(j + 2, n + 2):
                    _measure(ax["d_i s_j = s_j d_(i-1) (i>j+1)"], lambda: dist(d(s(x, j), i), s(d(x, i - 1), j)), x)
                for i in range(j + 1):
                    _measure(ax["s_i s_j = s_(j+1) s_i (i<=j)"], lambda: dist(s(s(x, j), i), s(s(x, i), j + 1)), x)
    return rep

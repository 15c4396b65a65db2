"""Cech cocycles with values in the iso bundle, gluing, and invariants over S^1 and S^2.

A cocycle lives on a :class:`BaseComplex`: a finite cover whose patches and
overlaps are sampled at parameter points.  Over each patch a family of
subspaces (the *locals*) describes a bundle; on each ordered overlap (a, b)
the transition at a sample point is an invertible k x k matrix written in
the stored frames of the two locals, i.e. the box of a :class:`MorPoint`
from local_a(p) to local_b(p).

Parameter conventions of the shipped covers:

* ``interval_cover_circle``: one parameter, the angle in [0, 2 pi);
* ``two_disk_sphere``: two parameters (polar angle, azimuth); the equator
  is the overlap and the first patch is the northern disk.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, permutations

import numpy as np
from scipy.linalg import expm

from .errors import (
    CocycleViolation,
    InconsistentSamples,
    NotCircle,
    NotRankOne,
    SectionMismatch,
    TypingMismatch,
    UndersampledLoop,
)
from .grassmann import GrChart, GrPoint, in_chart_domain
from .linalg_core import (
    DEFAULT_TOL,
    Tolerance,
    ct,
    dtype_for,
    max_abs,
    random_frame,
    random_matrix,
)
from .mor_category import MorPoint, is_iso, mor_chart, mor_compose, mor_identity
from .report import Report
from .semiring_ops import (
    equalize_ambient,
    oplus_mor,
    oplus_points,
    otimes_mor,
    otimes_points,
)

TAGS = ("interval_cover_circle", "two_disk_sphere", "abstract")
_DIGITS = 9


def _key(p) -> tuple:
    return tuple(float(x) for x in np.round(np.atleast_1d(np.asarray(p, dtype=float)), _DIGITS) + 0.0)


def _params(a) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.ndim == 1:
        a = a.reshape(-1, 1)
    if a.ndim != 2 or a.shape[0] == 0:
        raise InconsistentSamples(f"sample grid must be a non-empty (N, d) array, got shape {a.shape}")
    a = a.copy()
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Patch:
    name: str
    params: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "params", _params(self.params))


@dataclass(frozen=True, eq=False)
class Overlap:
    """Ordered overlap: transitions carry local data of ``src`` to that of ``dst``."""

    src: str
    dst: str
    params: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "params", _params(self.params))


@dataclass(frozen=True, eq=False)
class Triple:
    a: str
    b: str
    c: str
    params: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "params", _params(self.params))


@dataclass(frozen=True, eq=False)
class BaseComplex:
    """A sampled finite cover; ``triples`` is derived from the overlap grids when omitted."""

    tag: str
    patches: tuple[Patch, ...]
    overlaps: tuple[Overlap, ...]
    triples: tuple[Triple, ...] | None = None

    def __post_init__(self):
        if self.tag not in TAGS:
            raise InconsistentSamples(f"unknown base tag {self.tag!r}")
        object.__setattr__(self, "patches", tuple(self.patches))
        object.__setattr__(self, "overlaps", tuple(self.overlaps))
        names = [p.name for p in self.patches]
        if len(set(names)) != len(names):
            raise InconsistentSamples("patch names must be unique")
        lookup = {p.name: {_key(x): i for i, x in enumerate(p.params)} for p in self.patches}
        ov_keys = {}
        for ov in self.overlaps:
            if ov.src not in lookup or ov.dst not in lookup or ov.src == ov.dst:
                raise InconsistentSamples(f"overlap ({ov.src}, {ov.dst}) does not join two known patches")
            if (ov.src, ov.dst) in ov_keys:
                raise InconsistentSamples(f"overlap ({ov.src}, {ov.dst}) listed twice")
            keys = [_key(x) for x in ov.params]
            for name in (ov.src, ov.dst):
                missing = [k for k in keys if k not in lookup[name]]
                if missing:
                    raise InconsistentSamples(
                        f"overlap ({ov.src}, {ov.dst}) sample {missing[0]} is not in the grid of patch {name}")
            ov_keys[(ov.src, ov.dst)] = keys
        for (a, b), keys in ov_keys.items():
            if (b, a) not in ov_keys:
                raise InconsistentSamples(f"overlap ({a}, {b}) has no reverse")
            if set(keys) != set(ov_keys[(b, a)]):
                raise InconsistentSamples(f"overlaps ({a}, {b}) and ({b}, {a}) are sampled differently")
        if self.triples is None:
            object.__setattr__(self, "triples", self._derive_triples(ov_keys))
        else:
            object.__setattr__(self, "triples", tuple(self.triples))
            for t in self.triples:
                for pair in ((t.a, t.b), (t.b, t.c), (t.a, t.c)):
                    if pair not in ov_keys:
                        raise InconsistentSamples(f"triple ({t.a}, {t.b}, {t.c}) needs overlap {pair}")
                    known = set(ov_keys[pair])
                    if any(_key(x) not in known for x in t.params):
                        raise InconsistentSamples(f"triple ({t.a}, {t.b}, {t.c}) samples outside overlap {pair}")
        object.__setattr__(self, "_lookup", lookup)

    def _derive_triples(self, ov_keys) -> tuple[Triple, ...]:
        out = []
        names = [p.name for p in self.patches]
        for trio in combinations(names, 3):
            for a, b, c in permutations(trio):
                pairs = ((a, b), (b, c), (a, c))
                if not all(p in ov_keys for p in pairs):
                    continue
                common = set(ov_keys[pairs[0]]) & set(ov_keys[pairs[1]]) & set(ov_keys[pairs[2]])
                if common:
                    out.append(Triple(a, b, c, np.array(sorted(common))))
        return tuple(out)

    @property
    def patch_names(self) -> list[str]:
        return [p.name for p in self.patches]

    def patch(self, name: str) -> Patch:
        for p in self.patches:
            if p.name == name:
                return p
        raise KeyError(name)

    def sample_index(self, patch: str, point) -> int | None:
        return self._lookup[patch].get(_key(point))

    def overlap(self, src: str, dst: str) -> tuple[int, Overlap]:
        for i, ov in enumerate(self.overlaps):
            if (ov.src, ov.dst) == (src, dst):
                return i, ov
        raise KeyError((src, dst))


@dataclass(frozen=True, eq=False)
class CechCocycle:
    """Local subspace families plus transition boxes on every ordered overlap.

    ``locals[name][i]`` is the subspace over sample i of that patch;
    ``transitions[j][s]`` is the k x k box of the transition on overlap j at
    its sample s, read in the stored frames of the two locals.
    """

    base: BaseComplex
    rank: int
    field: str
    locals: dict
    transitions: tuple

    def __post_init__(self):
        dtype_for(self.field)
        locs = {}
        for p in self.base.patches:
            if p.name not in self.locals:
                raise InconsistentSamples(f"no local data for patch {p.name}")
            pts = tuple(self.locals[p.name])
            if len(pts) != len(p.params):
                raise InconsistentSamples(f"patch {p.name}: {len(pts)} locals for {len(p.params)} samples")
            for x in pts:
                if x.sub_dim != self.rank:
                    raise TypingMismatch(f"patch {p.name}: local of dimension {x.sub_dim}, rank is {self.rank}")
            locs[p.name] = pts
        object.__setattr__(self, "locals", locs)
        if len(self.transitions) != len(self.base.overlaps):
            raise InconsistentSamples("one transition table per overlap is required")
        tables, index = [], []
        for ov, tab in zip(self.base.overlaps, self.transitions):
            tab = np.asarray(tab)
            if self.field == "real" and np.iscomplexobj(tab):
                if np.any(tab.imag != 0):
                    raise TypingMismatch(f"overlap ({ov.src}, {ov.dst}): complex transitions in a real cocycle")
                tab = tab.real
            if tab.ndim != 3 or tab.shape != (len(ov.params), self.rank, self.rank):
                raise InconsistentSamples(
                    f"overlap ({ov.src}, {ov.dst}): transition table of shape {tab.shape}, "
                    f"expected {(len(ov.params), self.rank, self.rank)}")
            tab = tab.astype(dtype_for(self.field)).copy()
            tab.setflags(write=False)
            tables.append(tab)
            index.append((np.array([self.base.sample_index(ov.src, x) for x in ov.params]),
                          np.array([self.base.sample_index(ov.dst, x) for x in ov.params])))
        object.__setattr__(self, "transitions", tuple(tables))
        object.__setattr__(self, "_index", tuple(index))

    def local_at(self, patch: str, point) -> GrPoint:
        i = self.base.sample_index(patch, point)
        if i is None:
            raise InconsistentSamples(f"point {point} is not sampled on patch {patch}")
        return self.locals[patch][i]

    def transition(self, j: int, s: int) -> MorPoint:
        ov = self.base.overlaps[j]
        si, di = self._index[j]
        return MorPoint.from_box(self.locals[ov.src][si[s]], self.locals[ov.dst][di[s]], self.transitions[j][s])

    def transition_at(self, src: str, dst: str, point) -> MorPoint:
        j, ov = self.base.overlap(src, dst)
        k = _key(point)
        for s, x in enumerate(ov.params):
            if _key(x) == k:
                return self.transition(j, s)
        raise InconsistentSamples(f"point {point} is not sampled on overlap ({src}, {dst})")

    def with_transitions(self, tables) -> CechCocycle:
        return CechCocycle(self.base, self.rank, self.field, self.locals, tuple(tables))


# -- checks and gluing -------------------------------------------------------------------

def check_cocycle(c: CechCocycle, tol: Tolerance = DEFAULT_TOL) -> Report:
    """Invertibility, the inverse law on double overlaps and the cocycle identity on triple overlaps.

    Residuals are relative to the size of the matrices involved.
    """
    rep = Report("cocycle check", info={"base": c.base.tag, "rank": c.rank, "field": c.field})
    for j, ov in enumerate(c.base.overlaps):
        ax_iso = rep.axiom("transitions invertible", 0.0)
        ax_inv = rep.axiom("g_ba . g_ab = id", tol.eps_eq)
        jr, rev = c.base.overlap(ov.dst, ov.src)
        rev_pos = {_key(x): s for s, x in enumerate(rev.params)}
        for s, x in enumerate(ov.params):
            g = c.transition(j, s)
            where = {"overlap": [ov.src, ov.dst], "sample": s, "point": x}
            ax_iso.record(0.0 if is_iso(g, tol) else math.inf, where)
            h = c.transition(jr, rev_pos[_key(x)])
            scale = max(1.0, max_abs(g.map_mat), max_abs(h.map_mat))
            ax_inv.record(mor_compose(g, h, tol).distance(mor_identity(g.src)) / scale, where)
    for t in c.base.triples:
        ax_tri = rep.axiom("g_cb . g_ba = g_ca", tol.eps_eq)
        for x in t.params:
            g_ab = c.transition_at(t.a, t.b, x)
            g_bc = c.transition_at(t.b, t.c, x)
            g_ac = c.transition_at(t.a, t.c, x)
            scale = max(1.0, max_abs(g_ab.map_mat), max_abs(g_bc.map_mat), max_abs(g_ac.map_mat))
            ax_tri.record(mor_compose(g_ab, g_bc, tol).distance(g_ac) / scale,
                          {"triple": [t.a, t.b, t.c], "point": x})
    return rep


@dataclass(frozen=True, eq=False)
class GluedBundle:
    """The quotient of the trivialized pieces by the transition identifications.

    A point of the total space is named by (patch, base point, fiber
    coordinates in the stored local frame); two names denote the same point
    when a transition carries one to the other.
    """

    cocycle: CechCocycle

    @property
    def fiber_dim(self) -> int:
        return self.cocycle.rank

    def identify(self, patch: str, point, v) -> dict:
        """All names of the point (patch, point, v): patch -> fiber coordinates."""
        c = self.cocycle
        v = np.asarray(v, dtype=dtype_for(c.field)).reshape(-1)
        if v.shape != (c.rank,):
            raise TypingMismatch(f"fiber coordinates must have length {c.rank}")
        c.local_at(patch, point)
        out = {patch: v}
        for ov in c.base.overlaps:
            if (ov.src == patch and c.base.sample_index(ov.dst, point) is not None
                    and any(_key(x) == _key(point) for x in ov.params)):
                out[ov.dst] = c.transition_at(patch, ov.dst, point).box() @ v
        return out

    def canonical_representative(self, patch: str, point, v) -> tuple[str, np.ndarray]:
        """The name living on the first patch (in cover order) that contains the point."""
        names = self.identify(patch, point, v)
        for p in self.cocycle.base.patch_names:
            if p in names:
                return p, names[p]
        raise AssertionError("unreachable")

    def restrict(self, patch: str) -> tuple[GrPoint, ...]:
        return self.cocycle.locals[patch]

    def extract_cocycle(self) -> CechCocycle:
        """Read transitions back off the identifications of basis vectors."""
        c = self.cocycle
        eye = np.eye(c.rank, dtype=dtype_for(c.field))
        tables = []
        for ov in c.base.overlaps:
            tab = np.empty((len(ov.params), c.rank, c.rank), dtype=eye.dtype)
            for s, x in enumerate(ov.params):
                for col in range(c.rank):
                    tab[s, :, col] = self.identify(ov.src, x, eye[:, col])[ov.dst]
            tables.append(tab)
        return c.with_transitions(tables)

    def summary(self) -> dict:
        c = self.cocycle
        return {"base": c.base.tag, "field": c.field, "rank": c.rank, "fiber_dim": self.fiber_dim,
                "patches": {p.name: len(p.params) for p in c.base.patches},
                "overlaps": [[ov.src, ov.dst, len(ov.params)] for ov in c.base.overlaps],
                "triple_overlaps": len(c.base.triples), "invariants": classify(c)}


def glue(c: CechCocycle, tol: Tolerance = DEFAULT_TOL) -> GluedBundle:
    rep = check_cocycle(c, tol)
    if not rep.passed:
        raise CocycleViolation(rep.render_text())
    return GluedBundle(c)


# -- coboundaries ------------------------------------------------------------------------

def apply_coboundary(c: CechCocycle, gauges: dict) -> CechCocycle:
    """g'_ab(p) = h_b(p) g_ab(p) h_a(p)^{-1} for per-patch invertible k x k tables h."""
    tables = []
    for j, ov in enumerate(c.base.overlaps):
        si, di = c._index[j]
        ha = np.asarray(gauges[ov.src])[si]
        hb = np.asarray(gauges[ov.dst])[di]
        g = c.transitions[j]
        tables.append(hb @ np.linalg.solve(ha.transpose(0, 2, 1), g.transpose(0, 2, 1)).transpose(0, 2, 1))
    return c.with_transitions(tables)


def _features(params: np.ndarray, tag: str) -> np.ndarray:
    """Smooth functions on the base evaluated at the samples (continuous at the poles)."""
    if tag == "interval_cover_circle":
        t = params[:, 0]
        cols = [np.ones_like(t)] + [f(n * t) for n in (1, 2, 3) for f in (np.cos, np.sin)]
    elif tag == "two_disk_sphere":
        th, ph = params[:, 0], params[:, 1]
        cols = [np.ones_like(th), np.cos(th)] + [np.sin(th) * f(n * ph) for n in (1, 2) for f in (np.cos, np.sin)]
    else:
        cols = [np.ones(len(params))] + [params[:, i] for i in range(params.shape[1])]
    return np.stack(cols, axis=1)


def random_gauge(rng: np.random.Generator, c: CechCocycle, patch: str, amplitude: float = 0.5) -> np.ndarray:
    """A smooth invertible k x k function on one patch, deformable to a constant.

    Rank 1 complex: exp of a smooth complex function, so the winding along
    any loop in the patch is zero.  Otherwise expm of a smooth matrix
    function times a constant invertible matrix.
    """
    P = c.base.patch(patch).params
    feats = _features(P, c.base.tag)
    k = c.rank
    coeff = random_matrix(rng, (feats.shape[1], k * k), c.field) * amplitude / math.sqrt(feats.shape[1])
    smooth = (feats @ coeff).reshape(len(P), k, k)
    const = random_matrix(rng, (k, k), c.field)
    while abs(np.linalg.det(const)) < 0.2:
        const = random_matrix(rng, (k, k), c.field)
    return np.stack([expm(m) @ const for m in smooth])


def random_coboundary(rng: np.random.Generator, c: CechCocycle, amplitude: float = 0.5) -> CechCocycle:
    return apply_coboundary(c, {name: random_gauge(rng, c, name, amplitude) for name in c.base.patch_names})


# -- operations on cocycles ----------------------------------------------------------------

def _combine(c1: CechCocycle, c2: CechCocycle, op_points, op_mor, rank: int) -> CechCocycle:
    if c1.base is not c2.base and _base_signature(c1.base) != _base_signature(c2.base):
        raise InconsistentSamples("cocycles live on different covers")
    field_ = "complex" if "complex" in (c1.field, c2.field) else "real"
    locs = {}
    for name in c1.base.patch_names:
        locs[name] = [op_points(*equalize_ambient(x, y)) for x, y in zip(c1.locals[name], c2.locals[name])]
    tmp = CechCocycle(c1.base, rank, field_, locs,
                      tuple(np.zeros((len(ov.params), rank, rank)) for ov in c1.base.overlaps))
    tables = []
    for j, ov in enumerate(c1.base.overlaps):
        tab = []
        for s in range(len(ov.params)):
            f, g = c1.transition(j, s), c2.transition(j, s)
            fs, gs = equalize_ambient(f.src, g.src)
            fd, gd = equalize_ambient(f.dst, g.dst)
            f = MorPoint(fs, fd, _pad_to(f.map_mat, fd.ambient_dim, fs.ambient_dim))
            g = MorPoint(gs, gd, _pad_to(g.map_mat, gd.ambient_dim, gs.ambient_dim))
            h = op_mor(f, g)
            tab.append(MorPoint(tmp.transition(j, s).src, tmp.transition(j, s).dst, h.map_mat).box())
        tables.append(np.array(tab))
    return tmp.with_transitions(tables)


def _pad_to(a, rows, cols):
    out = np.zeros((rows, cols), dtype=a.dtype)
    out[:a.shape[0], :a.shape[1]] = a
    return out


def _base_signature(b: BaseComplex):
    return (b.tag, tuple((p.name, p.params.tobytes()) for p in b.patches),
            tuple((o.src, o.dst, o.params.tobytes()) for o in b.overlaps))


def cocycle_oplus(c1: CechCocycle, c2: CechCocycle) -> CechCocycle:
    """Pointwise direct sum of locals and transitions over a shared cover."""
    return _combine(c1, c2, oplus_points, oplus_mor, c1.rank + c2.rank)


def cocycle_otimes(c1: CechCocycle, c2: CechCocycle) -> CechCocycle:
    """Pointwise tensor product of locals and transitions over a shared cover."""
    return _combine(c1, c2, otimes_points, otimes_mor, c1.rank * c2.rank)


def _plucker(frame: np.ndarray) -> np.ndarray:
    """All k x k minors of an m x k frame, rows in lexicographic order."""
    m, k = frame.shape
    if k == 0:
        return np.ones(1, dtype=frame.dtype)
    return np.array([np.linalg.det(frame[list(rows)]) for rows in combinations(range(m), k)])


def determinant_line(c: CechCocycle) -> CechCocycle:
    """The top exterior power: locals become Plucker lines, transitions their determinants."""
    locs = {name: [GrPoint(_plucker(x.frame).reshape(-1, 1)) for x in pts] for name, pts in c.locals.items()}
    tables = [np.linalg.det(t).reshape(-1, 1, 1) if c.rank else np.ones((len(t), 1, 1)) for t in c.transitions]
    return CechCocycle(c.base, 1, c.field, locs, tuple(tables))


# -- invariants -----------------------------------------------------------------------------

def _circle_angle(p) -> float:
    return float(np.mod(p[0], 2 * math.pi))


def s1_orientation_sign(c: CechCocycle) -> int:
    """+1 if the rank-1 real bundle over the circle is trivial, -1 if it is the Moebius bundle.

    Walks once around the circle in increasing angle, carrying a fiber
    coordinate: inside a patch the stored frame is followed by the sign of
    the overlap of consecutive frame vectors, and the walk changes patch
    (multiplying by the transition) only when the next sample leaves the
    current one.
    """
    if c.base.tag != "interval_cover_circle":
        raise NotCircle(f"orientation class needs an interval cover of the circle, got {c.base.tag}")
    if c.rank != 1:
        raise NotRankOne(f"orientation class is defined here for line bundles, got rank {c.rank}")
    if c.field != "real":
        raise TypingMismatch("orientation class needs real scalars")
    members = {}
    for p in c.base.patches:
        for i, x in enumerate(p.params):
            members.setdefault(_key([_circle_angle(x)]), {})[p.name] = i
    # samples stored as angles outside [0, 2 pi) are found through their reduced key
    loop = sorted(members)
    start = loop[0]
    patch = c.base.patch_names[0] if c.base.patch_names[0] in members[start] else next(iter(members[start]))
    first_patch = patch
    coord = 1.0

    def frame(name, key):
        return c.locals[name][members[key][name]].frame[:, 0]

    def switch(name, key, to):
        point = c.base.patch(name).params[members[key][name]]
        return float(c.transition_at(name, to, point).box()[0, 0].real)

    steps = loop[1:] + [start]
    here = start
    for nxt in steps:
        if patch not in members[nxt]:
            options = [q for q in members[nxt] if q in members[here] and q != patch]
            if not options:
                raise InconsistentSamples(f"walk around the circle is stuck at angle {here[0]}")
            coord *= switch(patch, here, options[0])
            patch = options[0]
        coord *= math.copysign(1.0, float(np.dot(frame(patch, here), frame(patch, nxt))))
        here = nxt
    if patch != first_patch:
        coord *= switch(patch, here, first_patch)
    return 1 if coord > 0 else -1


def s1_orientation_class(c: CechCocycle) -> str:
    return "trivial" if s1_orientation_sign(c) > 0 else "moebius"


def equator_winding(values: np.ndarray, min_samples: int = 64) -> int:
    """Winding number of a closed loop of non-zero complex numbers by summed phase increments."""
    z = np.asarray(values, dtype=complex).reshape(-1)
    if len(z) < min_samples:
        raise UndersampledLoop(f"{len(z)} samples on the loop, at least {min_samples} required")
    if np.any(np.abs(z) == 0):
        raise UndersampledLoop("loop passes through zero")
    steps = np.angle(np.roll(z, -1) / z)
    worst = float(np.max(np.abs(steps)))
    if worst >= math.pi / 2:
        raise UndersampledLoop(f"phase step of {worst:.3f} rad is not below pi/2; sample the equator more densely")
    return round(float(np.sum(steps)) / (2 * math.pi))


def s2_clutching_degree(c: CechCocycle, min_samples: int = 64) -> int:
    """Winding number of the determinant of the transition from the first disk to the second.

    The transition is read along the equator in increasing azimuth.  This is
    the degree of the bundle when the stored local frames are restrictions
    of frames defined over the whole disks, which holds for all builders and
    generators here.
    """
    if c.base.tag != "two_disk_sphere":
        raise TypingMismatch(f"clutching degree needs a two-disk cover of the sphere, got {c.base.tag}")
    if c.rank != 1:
        raise NotRankOne(f"clutching degree is defined here for line bundles, got rank {c.rank}")
    if c.field != "complex":
        raise TypingMismatch("clutching degree needs complex scalars")
    north, south = c.base.patch_names[:2]
    j, ov = c.base.overlap(north, south)
    order = np.argsort(np.mod(ov.params[:, 1], 2 * math.pi), kind="stable")
    return equator_winding(c.transitions[j][order, 0, 0], min_samples)


def classify(c: CechCocycle) -> dict:
    """Invariants computable for the cocycle's base and field (via the determinant line)."""
    out = {"rank": c.rank}
    if c.base.tag == "interval_cover_circle" and c.field == "real":
        out["orientation"] = s1_orientation_class(determinant_line(c) if c.rank != 1 else c)
    elif c.base.tag == "two_disk_sphere" and c.field == "complex":
        out["degree"] = s2_clutching_degree(determinant_line(c) if c.rank != 1 else c)
    return out


# -- sections of the pulled-back iso bundle ---------------------------------------------------

def pullback_iso_bundle(f, g, T, tol: Tolerance = DEFAULT_TOL, closed: bool = False,
                        jump_factor: float = 10.0) -> Report:
    """Check that samples T(x_i) form a section of Isom(f* E, g* E) along a sampled path.

    Typing (source f(x_i), target g(x_i), invertibility) must hold exactly
    and raises :class:`SectionMismatch` otherwise.  Continuity is judged in
    the chart centred at (f(x_i), g(x_i)): the step to the next sample may
    not exceed ``jump_factor`` times the median step (plus eps_eq), and the
    next sample must lie in the chart domain.  ``closed`` also compares the
    last sample with the first.
    """
    f, g, T = list(f), list(g), list(T)
    if not (len(f) == len(g) == len(T)) or not T:
        raise SectionMismatch("f, g and T must be sampled at the same non-empty set of points")
    for i, (x, y, t) in enumerate(zip(f, g, T)):
        if not t.src.same_as(x, tol):
            raise SectionMismatch(f"sample {i}: source of T differs from f")
        if not t.dst.same_as(y, tol):
            raise SectionMismatch(f"sample {i}: target of T differs from g")
        if not is_iso(t, tol):
            raise SectionMismatch(f"sample {i}: T is not invertible")
    rep = Report("pulled-back iso bundle section", info={"samples": len(T)})
    n = len(T)
    pairs = [(i, i + 1) for i in range(n - 1)] + ([(n - 1, 0)] if closed and n > 1 else [])
    steps = []
    for i, j in pairs:
        cs, cd = GrChart.at(f[i]), GrChart.at(g[i])
        if not (in_chart_domain(cs, f[j], tol) and in_chart_domain(cd, g[j], tol)):
            steps.append(math.inf)
            continue
        here = mor_chart(T[i], cs, cd, tol)
        there = mor_chart(T[j], cs, cd, tol)
        steps.append(here.distance(there))
    finite = [s for s in steps if math.isfinite(s)]
    threshold = jump_factor * float(np.median(finite)) + tol.eps_eq if finite else tol.eps_eq
    if pairs:
        ax = rep.axiom("continuity", threshold)
        for (i, j), s in zip(pairs, steps):
            ax.record(s, {"from": i, "to": j})
    rep.info["step threshold"] = threshold
    return rep


# -- builders ----------------------------------------------------------------------------------

def circle_cover(n: int = 64, overlap: int | None = None) -> BaseComplex:
    """Two arcs U (around [0, pi]) and V (around [pi, 2 pi]) on an n-point grid of the circle.

    The overlap has two components, around angle 0 and around angle pi.
    """
    if n < 8 or n % 2:
        raise ValueError("circle grid needs an even number of at least 8 samples")
    s = max(1, n // 16) if overlap is None else overlap
    half = n // 2
    ang = 2 * math.pi * np.arange(n) / n
    U = sorted(set(range(half + s + 1)) | set(range(n - s, n)))
    V = sorted(set(range(half - s, n)) | set(range(s + 1)))
    both = sorted(set(U) & set(V))
    return BaseComplex("interval_cover_circle",
                       (Patch("U", ang[U]), Patch("V", ang[V])),
                       (Overlap("U", "V", ang[both]), Overlap("V", "U", ang[both])))


def _near_zero_component(angle) -> bool:
    a = np.mod(np.asarray(angle), 2 * math.pi)
    return np.minimum(a, 2 * math.pi - a) < math.pi / 2


def line_bundle_s1(signs=(1, 1), n: int = 64) -> CechCocycle:
    """Real line bundle over the circle with constant transitions U -> V.

    ``signs`` gives the transition on the overlap component around pi and
    around 0; (1, -1) is the Moebius bundle.
    """
    base = circle_cover(n)
    one = GrPoint(np.ones((1, 1)))
    locs = {p.name: [one] * len(p.params) for p in base.patches}
    tables = []
    for ov in base.overlaps:
        near0 = _near_zero_component(ov.params[:, 0])
        val = np.where(near0, float(signs[1]), float(signs[0]))
        tables.append(val.reshape(-1, 1, 1) if ov.src == "U" else (1.0 / val).reshape(-1, 1, 1))
    return CechCocycle(base, 1, "real", locs, tuple(tables))


def moebius_s1(n: int = 64) -> CechCocycle:
    """The tautological line of RP^1: the line through (cos t/2, sin t/2) over angle t.

    Each arc carries the frame from a continuous branch of t/2; the branches
    agree around pi and differ by a sign around 0.
    """
    base = circle_cover(n)

    def branch(name, t):
        t = np.mod(t, 2 * math.pi)
        if name == "U" and t > 3 * math.pi / 2:
            t -= 2 * math.pi
        if name == "V" and t < math.pi / 2:
            t += 2 * math.pi
        return np.array([[math.cos(t / 2)], [math.sin(t / 2)]])

    locs = {p.name: [GrPoint(branch(p.name, x[0])) for x in p.params] for p in base.patches}
    tables = []
    for ov in base.overlaps:
        tab = [float(branch(ov.dst, x[0])[:, 0] @ branch(ov.src, x[0])[:, 0]) for x in ov.params]
        tables.append(np.array(tab).reshape(-1, 1, 1))
    return CechCocycle(base, 1, "real", locs, tuple(tables))


def sphere_cover(n: int = 128, rings: int = 2) -> BaseComplex:
    """Northern and southern disks meeting along the equator, sampled at n azimuths.

    Each disk also carries ``rings`` latitude circles and its pole.
    """
    if n < 4:
        raise ValueError("equator needs at least 4 samples")
    phi = 2 * math.pi * np.arange(n) / n
    equator = np.stack([np.full(n, math.pi / 2), phi], axis=1)

    def disk(sign):
        pts = [equator]
        for r in range(1, rings + 1):
            th = math.pi / 2 - sign * (math.pi / 2) * r / (rings + 1)
            pts.append(np.stack([np.full(n, th), phi], axis=1))
        pts.append(np.array([[0.0 if sign > 0 else math.pi, 0.0]]))
        return np.vstack(pts)

    return BaseComplex("two_disk_sphere", (Patch("N", disk(1)), Patch("S", disk(-1))),
                       (Overlap("N", "S", equator), Overlap("S", "N", equator)))


def clutching_line_bundle(degree: int = 1, n: int = 128, rings: int = 2) -> CechCocycle:
    """Complex line bundle over the sphere with transition z^degree from N to S on the equator."""
    base = sphere_cover(n, rings)
    one = GrPoint(np.ones((1, 1), dtype=complex))
    locs = {p.name: [one] * len(p.params) for p in base.patches}
    tables = []
    for ov in base.overlaps:
        z = np.exp(1j * degree * ov.params[:, 1])
        tables.append((z if ov.src == "N" else 1 / z).reshape(-1, 1, 1))
    return CechCocycle(base, 1, "complex", locs, tuple(tables))


def tautological_s2(n: int = 128, rings: int = 2) -> CechCocycle:
    """The tautological line of CP^1 over the sphere: the line through (cos t/2, e^{i phi} sin t/2).

    The northern frame (cos t/2, e^{i phi} sin t/2) and the southern frame
    (e^{-i phi} cos t/2, sin t/2) are continuous on their disks and differ
    by the factor z = e^{i phi}, which is the transition on the equator.
    """
    base = sphere_cover(n, rings)

    def frame(name, t, ph):
        if name == "N":
            v = [math.cos(t / 2), np.exp(1j * ph) * math.sin(t / 2)]
        else:
            v = [np.exp(-1j * ph) * math.cos(t / 2), math.sin(t / 2)]
        return np.array(v, dtype=complex).reshape(2, 1)

    locs = {p.name: [GrPoint(frame(p.name, *x)) for x in p.params] for p in base.patches}
    tables = []
    for ov in base.overlaps:
        tab = [complex((ct(frame(ov.dst, *x)) @ frame(ov.src, *x))[0, 0]) for x in ov.params]
        tables.append(np.array(tab).reshape(-1, 1, 1))
    return CechCocycle(base, 1, "complex", locs, tuple(tables))


def trivial_cocycle(base: BaseComplex, rank: int = 1, field: str = "real") -> CechCocycle:
    """Identity transitions between coordinate k-planes of F^k."""
    pt = GrPoint.coordinate(rank, rank, field)
    locs = {p.name: [pt] * len(p.params) for p in base.patches}
    eye = np.eye(rank, dtype=dtype_for(field))
    return CechCocycle(base, rank, field, locs,
                       tuple(np.broadcast_to(eye, (len(ov.params), rank, rank)).copy() for ov in base.overlaps))


def _smooth_unitary_frames(rng, c: CechCocycle, ambient: int, amplitude: float = 0.6) -> dict:
    """Locals U(p) V0 with U = expm(smooth skew-Hermitian function); null-homotopic on every patch."""
    V0 = random_frame(rng, ambient, c.rank, c.field)
    out = {}
    for p in c.base.patches:
        feats = _features(p.params, c.base.tag)
        coeff = random_matrix(rng, (feats.shape[1], ambient * ambient), c.field)
        coeff *= amplitude / math.sqrt(feats.shape[1])
        mats = (feats @ coeff).reshape(len(p.params), ambient, ambient)
        out[p.name] = [GrPoint(_orthonormal(expm((m - ct(m)) / 2) @ V0)) for m in mats]
    return out


def _orthonormal(q: np.ndarray) -> np.ndarray:
    # expm of a skew matrix is unitary up to rounding; one polar step removes the rounding
    u, _, vh = np.linalg.svd(q, full_matrices=False)
    return u @ vh


def random_cocycle(rng: np.random.Generator, base: str = "s1", rank: int = 1, field: str | None = None,
                   n: int | None = None, ambient: int | None = None) -> CechCocycle:
    """A random valid cocycle: a class representative, moving local frames and a random coboundary."""
    if rank < 1:
        raise ValueError("rank must be >= 1")
    ambient = rank + 1 if ambient is None else ambient
    if ambient < rank:
        raise ValueError("ambient dimension must be at least the rank")
    if base == "s1":
        field = field or "real"
        if field == "real":
            rep = line_bundle_s1((1, int(rng.choice([1, -1]))), n or 64)
        else:
            rep = trivial_cocycle(circle_cover(n or 64), 1, "complex")
    elif base == "s2":
        field = field or "complex"
        if field == "complex":
            rep = clutching_line_bundle(int(rng.integers(-2, 3)), n or 128)
        else:
            rep = trivial_cocycle(sphere_cover(n or 128), 1, "real")
    else:
        raise ValueError("base must be 's1' or 's2'")
    if rank > 1:
        rep = cocycle_oplus(rep, trivial_cocycle(rep.base, rank - 1, field))
    shape = CechCocycle(rep.base, rank, field, _smooth_unitary_frames(rng, rep, ambient), rep.transitions)
    return random_coboundary(rng, shape)

"""Command-line front end.

Exit status: 0 when every check passes, 1 when a suite or cocycle check
fails, 2 on configuration, parse or schema errors.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import categories as cats
from . import semiring_ops as so
from .cocycle_bundles import check_cocycle, classify, glue, random_cocycle
from .cocycle_io import dumps_cocycle, load_cocycle
from .errors import CocycleViolation, GrasscatError, SchemaError
from .grassmann import GrPoint
from .internal_cat import (
    NatTransWitness,
    SampledFunctor,
    check_category_axioms,
    check_functor,
    check_simplicial_identities,
)
from .linalg_core import DEFAULT_TOL, Tolerance, random_frame
from .mor_category import MorPoint, VfMor, random_morpoint
from .report import Report, encode

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2

SUITES = ("category", "functor", "nat-trans", "nerve", "semiring", "stabilization")
TARGETS = ("vf", "vff", "g")
MUTATION_SITES = {
    "category": ("compose", "identity"),
    "nerve": ("compose", "identity"),
    "functor": ("compose", "identity", "functor"),
    "nat-trans": ("compose", "identity", "component"),
    "semiring": ("compose", "identity", "functor", "component"),
    "stabilization": (),
}


class ConfigError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    seed: int
    samples: int
    tol: Tolerance
    m_max: int | None
    k_max: int
    field: str
    fmt: str
    output: str | None
    mutate: str | None = None
    level: int = 4
    target: str | None = None

    def __post_init__(self):
        if self.samples < 1:
            raise ConfigError("--samples must be >= 1")
        if (self.m_max is not None and self.m_max < 1) or self.k_max < 1:
            raise ConfigError("--m-max and --k-max must be >= 1")
        if self.level < 0:
            raise ConfigError("--level must be >= 0")


def _resolve_seed(value) -> int:
    if value is not None:
        return value
    env = os.environ.get("GRASSCAT_SEED")
    if env is None or env == "":
        return 0
    try:
        return int(env)
    except ValueError:
        raise ConfigError(f"GRASSCAT_SEED must be an integer, got {env!r}") from None


def _config(args) -> RunConfig:
    try:
        tol = DEFAULT_TOL.replace(eps_eq=args.eps_eq, eps_rank=args.eps_rank)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return RunConfig(command=args.command, seed=_resolve_seed(args.seed), samples=args.samples, tol=tol,
                     m_max=args.m_max, k_max=args.k_max, field=args.field or "real", fmt=args.format,
                     output=args.output, mutate=getattr(args, "mutate", None),
                     level=getattr(args, "level", 4), target=getattr(args, "target", None))


# -- suite construction -----------------------------------------------------------------------

def _category(cfg: RunConfig, target: str):
    m = cfg.m_max
    if target == "vf":
        return cats.vf_category(m or 5, cfg.field)
    if target == "vff":
        return cats.vff_category(range(1, (m or 6) + 1), cfg.k_max, cfg.field)
    return cats.g_category(range(1, (m or 6) + 1), cfg.k_max, cfg.field)


def _mutate_functor(F: SampledFunctor, site: str | None) -> SampledFunctor:
    if site in ("compose", "identity"):
        return dataclasses.replace(F, target=F.target.with_mutation(site))
    if site == "functor":
        return cats.conjugate_transpose_mutant(F)
    return F


def _perturb(w):
    """A fixed non-natural perturbation of a witness component."""
    if isinstance(w, VfMor):
        return VfMor(w.mat + np.ones_like(w.mat))
    return MorPoint(w.src, w.dst, w.map_mat + w.dst.proj @ np.ones_like(w.map_mat) @ w.src.proj)


def _mutate_case(case: so.NatTransCase, site: str | None) -> so.NatTransCase:
    if site == "component":
        comp = case.phi.component
        phi = NatTransWitness(lambda x: _perturb(comp(x)), case.phi.name + "[perturbed]")
        return dataclasses.replace(case, phi=phi)
    if site in ("compose", "identity", "functor"):
        return dataclasses.replace(case, F=_mutate_functor(case.F, site), G=_mutate_functor(case.G, site))
    return case


def _functors(cfg: RunConfig, target: str) -> list[SampledFunctor]:
    m = cfg.m_max
    if target == "vf":
        return [cats.identity_functor(cats.vf_category(m or 5, cfg.field)),
                cats.embed_vf_functor(m or 5, None, cfg.field),
                so.oplus_vf_functor(m or 5, cfg.field), so.otimes_vf_functor(m or 4, cfg.field)]
    if target == "vff":
        n = m or 3
        return [cats.identity_functor(cats.vff_category(range(1, n + 1), cfg.k_max, cfg.field)),
                so.oplus_vff_functor(n, cfg.k_max, cfg.field), so.otimes_vff_functor(n, cfg.k_max, cfg.field)]
    return [cats.identity_functor(cats.g_category(range(1, (m or 6) + 1), cfg.k_max, cfg.field)),
            cats.embed_g_functor(range(1, (m or 6) + 1), cfg.k_max, cfg.field)]


def _cases(cfg: RunConfig, target: str) -> list[so.NatTransCase]:
    m, f = cfg.m_max, cfg.field
    if target == "vf":
        N = m or 3
        return [so.swap_case(m or 4, f), so.distrib_vf_case(N, "left", f), so.distrib_vf_case(N, "right", f),
                *so.comparison_cases(N, f)[:2]]
    if target == "vff":
        n = m or 2
        k = min(cfg.k_max, n)
        return [so.add_unit_case(n, k, "left", f), so.add_unit_case(n, k, "right", f), so.comm_case(n, k, f),
                so.distrib_vff_case(n, k, "right", f), so.distrib_vff_case(n, k, "left", f)]
    return so.comparison_cases(m or 3, f)[2:]


def _strict_object_laws(cfg: RunConfig) -> Report:
    rep = Report("strict object laws of oplus and otimes on V_F", seed=cfg.seed)
    rng = np.random.default_rng(cfg.seed)
    top = cfg.m_max or 32
    ax = {n: rep.axiom(n, 0.0) for n in ("oplus associative", "otimes associative", "0 is a unit for oplus",
                                         "1 is a unit for otimes")}
    for _ in range(cfg.samples):
        a, b, c = (int(x) for x in rng.integers(0, top + 1, size=3))
        P, T = so.vf_oplus_obj, so.vf_otimes_obj
        ax["oplus associative"].record(abs(P(P(a, b), c) - P(a, P(b, c))), (a, b, c))
        ax["otimes associative"].record(abs(T(T(a, b), c) - T(a, T(b, c))), (a, b, c))
        ax["0 is a unit for oplus"].record(abs(P(0, a) - a) + abs(P(a, 0) - a), a)
        ax["1 is a unit for otimes"].record(abs(T(1, a) - a) + abs(T(a, 1) - a), a)
    return rep


def _run_suite(cfg: RunConfig) -> list[Report]:
    suite, site = cfg.command, cfg.mutate
    if site is not None and site not in MUTATION_SITES[suite]:
        raise ConfigError(f"--mutate {site} is not available for '{suite}' "
                          f"(choose from {', '.join(MUTATION_SITES[suite]) or 'nothing'})")
    target = cfg.target or ("vff" if suite == "stabilization" else "vf")
    if suite == "stabilization":
        if target != "vff":
            raise ConfigError("the stabilization suite runs on --target vff")
        return [so.check_stabilization_squares(cfg.samples, cfg.seed, cfg.m_max or 5, cfg.k_max, cfg.field)]
    if suite in ("category", "nerve"):
        cat = _category(cfg, target)
        if site:
            cat = cat.with_mutation(site)
        if suite == "category":
            return [check_category_axioms(cat, cfg.samples, cfg.seed, cfg.tol)]
        return [check_simplicial_identities(cat, cfg.level, cfg.samples, cfg.seed, cfg.tol)]
    if suite == "functor":
        return [check_functor(_mutate_functor(F, site), cfg.samples, cfg.seed, cfg.tol)
                for F in _functors(cfg, target)]
    reports = []
    if suite == "semiring":
        ops = [F for F in _functors(cfg, target) if F.name.startswith(("oplus", "otimes"))]
        reports += [check_functor(_mutate_functor(F, None if site == "component" else site),
                                  cfg.samples, cfg.seed, cfg.tol) for F in ops]
        if target == "vf":
            reports.append(_strict_object_laws(cfg))
    for case in _cases(cfg, target):
        case = _mutate_case(case, site)
        reports.append(so.check_witness_case(case, cfg.samples, cfg.seed, cfg.tol))
    return reports


# -- output -------------------------------------------------------------------------------------

def _emit(cfg: RunConfig, payload: dict, text: str) -> None:
    out = json.dumps(encode(payload), indent=1) + "\n" if cfg.fmt == "json" else text.rstrip("\n") + "\n"
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)


def cmd_check(cfg: RunConfig) -> int:
    reports = _run_suite(cfg)
    passed = all(r.passed for r in reports)
    payload = {"command": f"check {cfg.command}", "seed": cfg.seed, "passed": passed,
               "reports": [r.to_dict() for r in reports]}
    text = "\n".join(r.render_text() for r in reports)
    text += f"\n{'PASS' if passed else 'FAIL'}: check {cfg.command} (seed {cfg.seed})"
    _emit(cfg, payload, text)
    return EXIT_OK if passed else EXIT_FAIL


def cmd_bundle(cfg: RunConfig, action: str, path: str) -> int:
    c = load_cocycle(path)
    if action == "validate":
        rep = check_cocycle(c, cfg.tol)
        _emit(cfg, {"command": "bundle validate", "passed": rep.passed, "report": rep.to_dict()}, rep.render_text())
        return EXIT_OK if rep.passed else EXIT_FAIL
    if action == "glue":
        summary = glue(c, cfg.tol).summary()
        text = "glued bundle\n" + "\n".join(f"  {k}: {v}" for k, v in summary.items())
        _emit(cfg, {"command": "bundle glue", "passed": True, "summary": summary}, text)
        return EXIT_OK
    rep = check_cocycle(c, cfg.tol)
    if not rep.passed:
        raise CocycleViolation(rep.render_text())
    inv = classify(c)
    _emit(cfg, {"command": "bundle classify", "passed": True, "invariants": inv},
          "\n".join(f"{k}: {v}" for k, v in inv.items()))
    return EXIT_OK


def cmd_generate(cfg: RunConfig, args) -> int:
    rng = np.random.default_rng(cfg.seed)
    kind = args.kind
    if kind == "cocycle":
        if args.rank < 1:
            raise ConfigError("--rank must be >= 1")
        c = random_cocycle(rng, args.base, args.rank, args.field)
        text = dumps_cocycle(c)
        if cfg.output:
            with open(cfg.output, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return EXIT_OK
    m = args.m if args.m is not None else (cfg.m_max or 4)
    k = args.k if args.k is not None else min(cfg.k_max, m)
    if m < 0 or not 0 <= k <= m:
        raise ConfigError("need 0 <= k <= m")
    src = GrPoint(random_frame(rng, m, k, cfg.field))
    if kind == "grpoint":
        payload = {"kind": "grpoint", "m": m, "k": k, "field": cfg.field, "frame": src.frame}
    else:
        n = args.n if args.n is not None else m
        l = args.l if args.l is not None else k
        if n < 0 or not 0 <= l <= n:
            raise ConfigError("need 0 <= l <= n")
        dst = GrPoint(random_frame(rng, n, l, cfg.field))
        f = random_morpoint(rng, src, dst, cfg.field)
        payload = {"kind": "morpoint", "field": cfg.field, "src": src.frame, "dst": dst.frame,
                   "map": f.map_mat, "box": f.box()}
    out = json.dumps(encode(payload), indent=1) + "\n"
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return EXIT_OK


# -- argument parsing ---------------------------------------------------------------------------

def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=None, help="random seed (default: $GRASSCAT_SEED or 0)")
    p.add_argument("--samples", type=int, default=200, help="samples per axiom")
    p.add_argument("--eps-eq", type=float, default=None, help="matrix equality tolerance")
    p.add_argument("--eps-rank", type=float, default=None, help="singular value cutoff")
    p.add_argument("--m-max", type=int, default=None, help="largest ambient or matrix dimension")
    p.add_argument("--k-max", type=int, default=3, help="largest subspace dimension")
    p.add_argument("--field", choices=("real", "complex"), default=None,
                   help="scalar field (default: real; a generated cocycle picks one from its base)")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--output", default=None, help="write the report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="grasscat", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="group", required=True)

    check = sub.add_parser("check", help="run a property suite")
    check.add_argument("command", choices=SUITES)
    check.add_argument("--target", choices=TARGETS, default=None)
    check.add_argument("--mutate", default=None, metavar="SITE",
                       help="corrupt one structure map (compose, identity, functor, component)")
    check.add_argument("--level", type=int, default=4, help="highest nerve level")
    _common(check)

    bundle = sub.add_parser("bundle", help="validate, glue or classify a cocycle file")
    bundle.add_argument("command", choices=("validate", "glue", "classify"))
    bundle.add_argument("input")
    _common(bundle)

    gen = sub.add_parser("generate", help="write a random instance")
    gen.add_argument("kind", choices=("grpoint", "morpoint", "cocycle"))
    gen.add_argument("--base", choices=("s1", "s2"), default="s1")
    gen.add_argument("--rank", type=int, default=1)
    gen.add_argument("--m", type=int, default=None)
    gen.add_argument("--k", type=int, default=None)
    gen.add_argument("--n", type=int, default=None, help="target ambient dimension of a morpoint")
    gen.add_argument("--l", type=int, default=None, help="target subspace dimension of a morpoint")
    _common(gen)
    gen.set_defaults(command="generate")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config(args)
        if args.group == "check":
            return cmd_check(cfg)
        if args.group == "bundle":
            return cmd_bundle(cfg, args.command, args.input)
        return cmd_generate(cfg, args)
    except (ConfigError, SchemaError) as exc:
        print(f"grasscat: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"grasscat: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (CocycleViolation, GrasscatError) as exc:
        print(f"grasscat: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())

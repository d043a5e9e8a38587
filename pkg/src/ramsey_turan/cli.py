"""``rt`` command line: construct, verify, caps, aux, bounds, sweep.

Values from ``--config`` override command-line flags.  When no seed is
given anywhere, ``RT_SEED`` from the environment is used, then 0.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import configs, harness, hypercube, sphere, verification
from .errors import DomainError, ResourceLimitError, StageError
from .harness import EXIT_ERROR, RunConfig

CONSTRUCT_FLAGS = ("r", "s", "n", "alpha", "beta", "t", "seed", "z", "k", "epsilon")


def _add_construction_flags(p):
    p.add_argument("--r", type=int)
    p.add_argument("--s", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--t", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--z", type=int, help="sphere cells (default 2n)")
    p.add_argument("--k", type=int, help="sphere dimension; with --epsilon skips the parameter search")
    p.add_argument("--epsilon", type=float)
    p.add_argument("--out", help="output directory")
    p.add_argument("--config", help="key = value file; its values override flags")


def _run_config(args, extra=()):
    values = {k: getattr(args, k) for k in CONSTRUCT_FLAGS + tuple(extra) if getattr(args, k, None) is not None}
    if getattr(args, "out", None):
        values["out"] = args.out
    cfg = RunConfig.from_mapping(values)
    file_values = {}
    if getattr(args, "config", None):
        file_values = harness.read_keyvalue(Path(args.config).read_text(encoding="utf-8"))
        cfg = RunConfig.from_mapping(file_values, cfg)
    if "seed" not in values and "seed" not in file_values:
        cfg = cfg.replace(seed=harness.seed_from_env())
    return cfg


def cmd_construct(args):
    cfg = _run_config(args)
    if args.no_timings:
        cfg = cfg.replace(record_timings=False)
    res = harness.run_pipeline(cfg)
    for line in res.verify_lines:
        print(line)
    print(f"wrote {', '.join(harness.FILES)} to {res.out_dir}")
    return res.status


def cmd_verify(args):
    g = verification.Graph.from_dimacs(Path(args.graph).read_text(encoding="utf-8"))
    meta = harness.read_meta(args.meta)
    r, s = int(meta["r"]), int(meta["s"])
    g.side = ["U"] * (g.n // 2) + ["V"] * (g.n // 2)
    rep, alpha = harness.verify_graph(g, r, s, budget=args.budget, exact_alpha=args.exact_alpha,
                                      seed=int(meta.get("seed", 0)))
    for line in rep.lines():
        print(line)
    print(f"alpha_{r}(G): lower={alpha.lower} upper={alpha.upper}")
    status = harness.exit_status(rep.status)
    print()
    print("[machine]")
    print(f"status = {rep.status}")
    for c in rep.checks:
        print(f"{c.name} = {c.value}")
    print(f"alpha_r_lower = {alpha.lower}")
    print(f"alpha_r_upper = {alpha.upper}")
    return status


def cmd_caps(args):
    if args.select or args.alpha is not None:
        if args.alpha is None:
            raise DomainError("caps --select needs --alpha")
        try:
            sp = sphere.select_sphere_params(args.alpha, args.beta, args.r, args.k_max)
        except ResourceLimitError as exc:
            print(f"no (epsilon, k) found: {exc}")
            if exc.best:
                print(f"closest: {exc.best}")
            return 1
        print(f"epsilon = {sp.epsilon}\nk = {sp.k}\ntheta = {sp.theta}")
        print(f"p1_measure = {sp.p1_measure()} (need >= {0.5 - args.alpha})")
        print(f"p2_measure = {sp.p2_measure()} (need <= {args.beta})")
        return 0
    if args.k is None or args.radius is None:
        raise DomainError("caps needs --k and --radius, or --alpha/--beta/--r")
    mu = sphere.cap_measure(args.k, args.radius)
    print(f"cap_measure(k={args.k}, radius={args.radius}) = {mu!r}")
    if args.mc_samples:
        p, se = sphere.cap_measure_monte_carlo(args.k, args.radius, args.mc_samples, args.seed or 0)
        print(f"monte_carlo = {p!r} +/- {se:.3g}")
    return 0


def cmd_aux(args):
    ell, bound = hypercube.compute_ell(args.r, args.s)
    cube = hypercube.build_blown_hypercube(args.r, args.s, ell)
    bs = hypercube.build_bipartite_family(cube)
    print(f"ell = {ell}\ndensity_bound = {bound}")
    for lab, verts in cube.classes.items():
        print(f"class {lab}: {verts}")
    for step, lab in cube.discard_trace:
        print(f"discard {step}: {lab}")
    for b in bs:
        print(f"B_{b.index}: {sorted(b.part0)} | {sorted(b.part1)}")
    a = hypercube.alpha_union(bs)
    print(f"alpha(union B_i) = {a} (s-1 = {args.s - 1})")
    return 0 if a <= args.s - 1 else 1


def cmd_bounds(args):
    lo = configs.theta_lower(args.r, args.s)
    d = configs.upper_bound_derivation(args.r, args.s)
    up = None if d is None else d.final_bound
    print(f"lower = {lo}")
    print(f"upper = {up if up is not None else 'unknown'}")
    print(f"equal = {up is not None and lo == up}")
    if args.trace and d is not None:
        for line in d.lines():
            print(line)
    return 0


def cmd_sweep(args):
    cfg = _run_config(args)
    if args.k_list:
        cfg = cfg.replace(sweep_k=[int(x) for x in args.k_list.split(",")])
    if args.z_list:
        cfg = cfg.replace(sweep_z=[int(x) for x in args.z_list.split(",")])
    rows = harness.sweep(cfg, workers=args.workers)
    path = harness.write_sweep(rows, Path(cfg.out) / "sweep.csv")
    for row in rows:
        print(row)
    print(f"wrote {path}")
    return 0 if all(not row.get("error") for row in rows) else 1


def build_parser():
    p = argparse.ArgumentParser(prog="rt", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="build G, verify it and write the run bundle")
    _add_construction_flags(c)
    c.add_argument("--no-timings", action="store_true", help="leave stage timings out of meta.txt")
    c.set_defaults(func=cmd_construct)

    v = sub.add_parser("verify", help="check a DIMACS graph against its meta sidecar")
    v.add_argument("--graph", required=True)
    v.add_argument("--meta", required=True)
    v.add_argument("--exact-alpha", action="store_true")
    v.add_argument("--budget", type=int, default=10**7)
    v.set_defaults(func=cmd_verify)

    k = sub.add_parser("caps", help="cap measures, or the (epsilon, k) search")
    k.add_argument("--k", type=int)
    k.add_argument("--radius", type=float)
    k.add_argument("--mc-samples", type=int, default=0)
    k.add_argument("--seed", type=int)
    k.add_argument("--select", action="store_true", help="search (epsilon, k) for --alpha/--beta/--r")
    k.add_argument("--alpha", type=float)
    k.add_argument("--beta", type=float, default=0.25)
    k.add_argument("--r", type=int, default=2)
    k.add_argument("--k-max", type=int, default=200)
    k.set_defaults(func=cmd_caps)

    a = sub.add_parser("aux", help="blown-up hypercube and bipartite family")
    a.add_argument("--r", type=int, required=True)
    a.add_argument("--s", type=int, required=True)
    a.set_defaults(func=cmd_aux)

    b = sub.add_parser("bounds", help="lower and upper density bounds")
    b.add_argument("--r", type=int, required=True)
    b.add_argument("--s", type=int, required=True)
    b.add_argument("--trace", action="store_true")
    b.set_defaults(func=cmd_bounds)

    w = sub.add_parser("sweep", help="density and independence over k and z")
    _add_construction_flags(w)
    w.add_argument("--k-list", help="comma-separated k values")
    w.add_argument("--z-list", help="comma-separated z values")
    w.add_argument("--workers", type=int, default=1)
    w.set_defaults(func=cmd_sweep)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (DomainError, StageError, ResourceLimitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())

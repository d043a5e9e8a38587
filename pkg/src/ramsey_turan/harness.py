"""Run configuration, the construct -> verify -> report pipeline, and sweeps.

Every run writes the same five files under its output directory:

    graph.dimacs   the graph G
    meta.txt       parameter record, edge ledger, stage timings
    verify.txt     freeness and independence checks
    density.txt    edge density against the target and the cap prediction
    summary.csv    one row of headline numbers

``graph.dimacs`` and ``summary.csv`` are byte-identical across reruns of
the same config.  ``meta.txt`` is too unless timings are switched off with
``record_timings = false``.
"""
from __future__ import annotations

import csv
import dataclasses
import io
import logging
import os
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import configs, graph as gmod, hypergraph, verification
from .errors import DomainError, StageError

log = logging.getLogger(__name__)

EXIT_PASS, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_ERROR = 0, 1, 2, 3

FILES = ("graph.dimacs", "meta.txt", "verify.txt", "density.txt", "summary.csv")

SUMMARY_FIELDS = [
    "r", "s", "ell", "k", "z", "t", "seed", "N", "edges", "density", "lower_bound", "upper_bound",
    "omega_U", "omega_V", "omega_G", "freeness", "alpha_r_lower", "alpha_r_upper",
]


def _parse_bool(text):
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise DomainError(f"not a boolean: {text!r}")


def _parse_list(text, kind):
    items = [x for x in text.replace(",", " ").split() if x]
    return [kind(x) for x in items]


@dataclass
class RunConfig:
    r: int = 2
    s: int = 2
    n: int = 4
    alpha: float = 0.25
    beta: float = 0.25
    t: int = 2
    seed: int = 0
    z: int | None = None
    k: int | None = None
    epsilon: float | None = None
    k_max: int = 200
    scan_order: int = 4
    keep_probability: float | None = None
    max_base_vertices: int = 400
    max_candidates: int = 10**8
    clique_budget: int = 10**7
    alpha_restarts: int = 8
    exact_alpha: bool = False
    record_timings: bool = True
    out: str = "out"
    sweep_k: list = field(default_factory=list)
    sweep_z: list = field(default_factory=list)

    _LISTS = {"sweep_k": int, "sweep_z": int}

    def validate(self):
        if not (2 <= self.s <= self.r):
            raise DomainError(f"need 2 <= s <= r, got r={self.r}, s={self.s}")
        for name in ("clique_budget", "alpha_restarts", "max_candidates", "max_base_vertices", "t"):
            if getattr(self, name) <= 0:
                raise DomainError(f"{name} must be positive")
        self.construction_params().validate()
        return self

    def construction_params(self):
        names = {f.name for f in dataclasses.fields(gmod.ConstructionParams)}
        return gmod.ConstructionParams(**{k: getattr(self, k) for k in names})

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)

    @classmethod
    def field_types(cls):
        hints = {}
        for f in dataclasses.fields(cls):
            tp = str(f.type)
            if f.name in cls._LISTS:
                hints[f.name] = ("list", cls._LISTS[f.name])
            elif tp.startswith("bool"):
                hints[f.name] = ("bool", None)
            elif tp.startswith("int"):
                hints[f.name] = ("int", None)
            elif tp.startswith("float"):
                hints[f.name] = ("float", None)
            else:
                hints[f.name] = ("str", None)
        return hints

    @classmethod
    def coerce(cls, key, text):
        hints = cls.field_types()
        if key not in hints:
            raise DomainError(f"unknown config key {key!r}")
        kind, item = hints[key]
        text = text.strip()
        if text.lower() in ("none", "") and kind != "list":
            return None
        try:
            if kind == "list":
                return _parse_list(text, item)
            if kind == "bool":
                return _parse_bool(text)
            if kind == "int":
                return int(float(text)) if "e" in text.lower() else int(text)
            if kind == "float":
                return float(text)
        except ValueError as exc:
            raise DomainError(f"bad value for {key}: {text!r}") from exc
        return text

    @classmethod
    def from_mapping(cls, values, base=None):
        cfg = base if base is not None else cls()
        changes = {k: cls.coerce(k, v) if isinstance(v, str) else v for k, v in values.items()}
        return dataclasses.replace(cfg, **changes)

    @classmethod
    def from_file(cls, path, base=None):
        return cls.from_mapping(read_keyvalue(Path(path).read_text(encoding="utf-8")), base)


def read_keyvalue(text):
    """Flat ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DomainError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def write_keyvalue(pairs):
    return "".join(f"{k} = {v}\n" for k, v in pairs)


# ------------------------------------------------------------------ pipeline

@dataclass
class RunResult:
    status: int
    out_dir: Path
    summary: dict
    verify_lines: list
    construction: gmod.ConstructionOutput | None = None

    @property
    def files(self):
        return {name: self.out_dir / name for name in FILES}


def meta_pairs(out, record_timings=True):
    pairs = [("format", "rt-meta 1")]
    pairs += sorted(out.params.items())
    pairs += [(f"edges_{k}", v) for k, v in sorted(out.edge_counts.items())]
    pairs.append(("edges_total", sum(out.edge_counts.values())))
    if record_timings:
        pairs += [(f"time_{k}", f"{v:.6f}") for k, v in sorted(out.timings.items())]
    return pairs


def read_meta(path):
    return read_keyvalue(Path(path).read_text(encoding="utf-8"))


def exit_status(freeness_status):
    """Exit status as a function of the report alone."""
    return {verification.PASS: EXIT_PASS, verification.FAIL: EXIT_FAIL}.get(
        freeness_status, EXIT_INCONCLUSIVE)


def verify_graph(g, r, s, budget=10**7, exact_alpha=False, seed=0, restarts=8):
    """Freeness plus K_r-independence on a graph with U/V labels."""
    rep = verification.verify_freeness(g, r, s, budget=budget)
    mode = "exact" if exact_alpha else "heuristic"
    alpha = verification.alpha_r_bounds(g, r, mode=mode, seed=seed, restarts=restarts)
    return rep, alpha


def _fmt(x):
    if isinstance(x, float):
        return repr(round(x, 12))
    return str(x)


def run_pipeline(cfg):
    """Construct, verify and report; returns a :class:`RunResult` with the exit status."""
    cfg.validate()
    out_dir = Path(cfg.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    out = gmod.assemble_construction(cfg.construction_params())
    g = out.graph
    (out_dir / "graph.dimacs").write_text(g.to_dimacs(), encoding="utf-8")
    (out_dir / "meta.txt").write_text(write_keyvalue(meta_pairs(out, cfg.record_timings)), encoding="utf-8")

    t0 = time.perf_counter()
    rep, alpha = verify_graph(g, cfg.r, cfg.s, cfg.clique_budget, cfg.exact_alpha, cfg.seed, cfg.alpha_restarts)
    ok_hyper, counter = verification.cliques_in_hyperedges(gmod.shadow_graph(out.blown), out.blown)
    scan = hypergraph.forbidden_scan(out.blown, cfg.scan_order, cfg.beta, cfg.r)
    sat = hypergraph.supersaturation_check(out.base, out.blown, out.xi, 1.0)
    ell, z, t = out.params["ell"], out.params["z"], cfg.t
    bhat = verification.beta_hat(out.points, out.sphere_params.p2_diameter)
    alpha_bound = verification.independence_bound(cfg.r, ell, bhat, z, t)
    hind = verification.base_independence_check(out.base, bhat, cfg.r, ell, z)
    verify_time = time.perf_counter() - t0

    lines = rep.lines()
    lines.append(f"alpha_{cfg.r}(G): lower={alpha.lower} upper={alpha.upper}"
                 f" witness_ok={alpha.revalidate(g)}")
    lines.append(f"alpha_{cfg.r} bound r^l 2^(l+r+2) beta_hat z^l t = {alpha_bound:.6g}"
                 f" (beta_hat={bhat:.6g}; informational)")
    lines.append(f"alpha(H) = {hind['alpha']} ({'exact' if hind['exact'] else 'greedy'})"
                 f" vs bound {hind['bound']:.6g} (ratio {hind['ratio']:.4g}; informational)")
    lines.append(f"cliques inside hyperedges: {'pass' if ok_hyper else 'fail ' + str(list(counter))}")
    lines.append(f"forbidden scan: {len(scan)} violation(s)")
    lines.append(f"supersaturation at full fibres: {sat['fraction']:.6g}")
    status = exit_status(rep.status)
    if not ok_hyper or scan or sat["fraction"] < 1:
        status = EXIT_FAIL if status == EXIT_PASS else status
    machine = [
        ("status", {EXIT_PASS: "pass", EXIT_FAIL: "fail", EXIT_INCONCLUSIVE: "inconclusive"}[status]),
        ("freeness", rep.status),
    ]
    machine += [(c.name, c.value) for c in rep.checks]
    machine += [
        ("alpha_r_lower", alpha.lower), ("alpha_r_upper", alpha.upper), ("beta_hat", _fmt(bhat)),
        ("cliques_in_hyperedges", ok_hyper), ("forbidden_violations", len(scan)),
        ("supersaturation_fraction", _fmt(sat["fraction"])),
    ]
    text = "\n".join(lines) + "\n\n[machine]\n" + write_keyvalue(machine)
    (out_dir / "verify.txt").write_text(text, encoding="utf-8")

    dens = gmod.density_report(out)
    (out_dir / "density.txt").write_text(
        write_keyvalue((k, _fmt(v)) for k, v in dens.items()), encoding="utf-8")

    upper = configs.theta_upper(cfg.r, cfg.s)
    summary = {
        "r": cfg.r, "s": cfg.s, "ell": ell, "k": out.params["k"], "z": z, "t": t, "seed": cfg.seed,
        "N": g.n, "edges": dens["edges"], "density": _fmt(dens["density"]),
        "lower_bound": dens["target_exact"], "upper_bound": "" if upper is None else str(upper),
        "omega_U": rep.checks[0].value, "omega_V": rep.checks[1].value, "omega_G": rep.checks[2].value,
        "freeness": rep.status, "alpha_r_lower": alpha.lower,
        "alpha_r_upper": "" if alpha.upper is None else alpha.upper,
    }
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=SUMMARY_FIELDS, lineterminator="\n")
    w.writeheader()
    w.writerow(summary)
    (out_dir / "summary.csv").write_text(buf.getvalue(), encoding="utf-8")
    out.timings["verify"] = verify_time
    log.info("run finished with status %d in %s", status, out_dir)
    return RunResult(status, out_dir, summary, lines, out)


def reload_bundle(out_dir):
    """Re-read a bundle and re-check it against the modules that wrote it."""
    out_dir = Path(out_dir)
    meta = read_meta(out_dir / "meta.txt")
    g = gmod.Graph.from_dimacs((out_dir / "graph.dimacs").read_text(encoding="utf-8"))
    n = int(meta["N"])
    if g.n != n:
        raise DomainError(f"graph has {g.n} vertices, meta says {n}")
    if g.num_edges != int(meta["edges_total"]):
        raise DomainError("edge count disagrees with meta")
    g.side = ["U"] * (n // 2) + ["V"] * (n // 2)
    return g, meta


# -------------------------------------------------------------------- sweep

SWEEP_FIELDS = [
    "k", "z", "N", "density", "cross_density", "predicted_cross_density", "relative_error",
    "cap_fraction", "alpha_r_lower", "alpha_r_fraction", "runtime", "error",
]


def _sweep_point(cfg, k, z):
    row = {"k": k, "z": z}
    t0 = time.perf_counter()
    try:
        out = gmod.assemble_construction(cfg.replace(k=k, z=z).construction_params())
        dens = gmod.density_report(out)
        alpha = verification.alpha_r_bounds(out.graph, cfg.r, seed=cfg.seed, restarts=cfg.alpha_restarts)
        row.update(
            N=out.graph.n, density=dens["density"], cross_density=dens["cross_density"],
            predicted_cross_density=dens["predicted_cross_density"],
            relative_error=dens["relative_error"], cap_fraction=dens["cap_fraction"],
            alpha_r_lower=alpha.lower, alpha_r_fraction=alpha.lower / out.graph.n, error="",
        )
    except (StageError, DomainError) as exc:
        row["error"] = str(exc)
    row["runtime"] = round(time.perf_counter() - t0, 3)
    return row


def sweep(cfg, workers=1):
    """One row per (k, z) point; failures are recorded in the row and the sweep goes on."""
    if not cfg.sweep_k and not cfg.sweep_z:
        raise DomainError("sweep needs sweep_k and/or sweep_z")
    if cfg.epsilon is None:
        raise DomainError("sweep needs a fixed epsilon")
    ks = cfg.sweep_k or [cfg.k]
    zs = cfg.sweep_z or [cfg.construction_params().resolved_z()]
    if any(k is None for k in ks):
        raise DomainError("sweep over z needs k")
    cfg.replace(k=ks[0], z=zs[0]).validate()
    points = [(k, z) for k in ks for z in zs]
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(workers) as pool:
            rows = list(pool.map(_sweep_point, [cfg] * len(points), *zip(*points)))
    else:
        rows = [_sweep_point(cfg, k, z) for k, z in points]
    return rows


def write_sweep(rows, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=SWEEP_FIELDS, lineterminator="\n")
        w.writeheader()
        for row in rows:
            w.writerow({k: row.get(k, "") for k in SWEEP_FIELDS})
    return path


def seed_from_env(default=0):
    value = os.environ.get("RT_SEED")
    return int(value) if value not in (None, "") else default


__all__ = [
    "RunConfig", "RunResult", "run_pipeline", "sweep", "write_sweep", "read_keyvalue", "read_meta",
    "reload_bundle", "verify_graph", "exit_status", "seed_from_env", "EXIT_PASS", "EXIT_FAIL",
    "EXIT_INCONCLUSIVE", "EXIT_ERROR", "FILES",
]

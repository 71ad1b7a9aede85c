"""Command-line entry point: ``hyperlap <subcommand> --input FILE ...``.

Exit status 0 on success, 1 on invalid input, 2 when a computation fails.
Errors are written to stderr as a JSON object.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from .chemical import Kind, chemical, oriented_adjacency
from . import rw
from .chm import ScalarMap, ensemble_run
from .errors import ComputationError, HyperlapError, ValidationError
from .harmonic import DirichletProblem, GeneralLaplacian, solve_dirichlet
from .hypergraph import read_hypergraph
from .io import csv_text, dumps
from .spectral import certify, eigen_decompose
from .stochastic import absorbing_walk, empirical_kernel, evolve_distribution, simulate_walk

VARIANTS = [v.value for v in rw.HYPERGRAPH_VARIANTS] + [k.value for k in Kind]
SEED_MAX = 2**64 - 1


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ValidationError(message)


@dataclass
class RunConfig:
    """Validated view of the parsed arguments."""

    command: str
    input: str | None
    variant: str | None
    output: str | None
    fmt: str
    exact: bool
    seed: int
    threads: int
    params: dict = field(default_factory=dict)


def _seed(text: str) -> int:
    try:
        value = int(text, 0)
    except ValueError:
        raise ValidationError(f"seed must be an integer, got {text!r}") from None
    if not 0 <= value <= SEED_MAX:
        raise ValidationError("seed must be an unsigned 64-bit integer")
    return value


def _finite(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ValidationError(f"expected a number, got {text!r}") from None
    if not math.isfinite(value):
        raise ValidationError(f"expected a finite number, got {text!r}")
    return value


def _count(minimum: int):
    def parse(text: str) -> int:
        try:
            value = int(text)
        except ValueError:
            raise ValidationError(f"expected an integer, got {text!r}") from None
        if value < minimum:
            raise ValidationError(f"expected an integer >= {minimum}, got {value}")
        return value

    return parse


def _assignments(text: str) -> dict[str, float]:
    out = {}
    for item in filter(None, (s.strip() for s in text.split(","))):
        name, sep, value = item.partition("=")
        if not sep:
            raise ValidationError(f"expected vertex=value, got {item!r}")
        out[name] = _finite(value)
    if not out:
        raise ValidationError("empty vertex=value list")
    return out


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--input", "-i", required=True, help="hypergraph file")
    common.add_argument("--variant", choices=VARIANTS, help="walk rule or chemical Laplacian")
    common.add_argument("--output", "-o", help="write to this path instead of stdout")
    common.add_argument("--seed", type=_seed, default=0)
    common.add_argument("--threads", type=_count(1), default=1, help="advisory worker count")
    common.add_argument("--exact", action="store_true", help="rational output where available")

    p = _Parser(prog="hyperlap", description="Random-walk and chemical Laplacians on hypergraphs.")
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("laplacian", parents=[common], help="factorization and Laplacian matrix")
    sub.add_parser("effective-graph", parents=[common], help="weighted graph of a walk")

    s = sub.add_parser("spectrum", parents=[common], help="eigenvalues in the natural scalar product")
    s.add_argument("--vectors", action="store_true", help="include eigenvectors")

    sub.add_parser("certify", parents=[common], help="spectral certificate")

    s = sub.add_parser("walk", parents=[common], help="Monte-Carlo trajectories")
    s.add_argument("--start", required=True)
    s.add_argument("--steps", type=_count(0), default=1000)
    s.add_argument("--trajectories", type=_count(1), default=1)
    s.add_argument("--format", dest="fmt", choices=["json", "csv"], default="json")

    s = sub.add_parser("evolve", parents=[common], help="exact evolution of a distribution")
    s.add_argument("--start", help="point mass at this vertex")
    s.add_argument("--p0", type=_assignments, help="initial vector as v=value,...")
    s.add_argument("--steps", type=_count(0), default=10)
    s.add_argument("--mode", choices=["forward", "backward"], default="forward")
    s.add_argument("--history", action="store_true", help="emit every intermediate vector")

    s = sub.add_parser("dirichlet", parents=[common], help="harmonic extension of boundary data")
    s.add_argument("--boundary", type=_assignments, required=True, help="e.g. v3=0,v4=1")
    s.add_argument("--walkers", type=_count(1), help="also estimate by absorbing walks")

    s = sub.add_parser("chm", parents=[common], help="coupled hypergraph map ensemble")
    s.add_argument("--laplacian", choices=VARIANTS, help="coupling operator (default: --variant)")
    s.add_argument("--map", dest="map_kind", choices=["tent", "logistic"], default="tent")
    s.add_argument("--mu", type=_finite, default=3.8)
    s.add_argument("--eps", type=_finite, default=0.3)
    s.add_argument("--ensemble", type=_count(1), default=10_000)
    s.add_argument("--steps", type=_count(0), default=30)
    s.add_argument("--bins", type=_count(1), default=50)
    s.add_argument("--out", dest="fmt", choices=["json", "csv"], default="json")
    return p


def parse_config(argv) -> RunConfig:
    ns = build_parser().parse_args(argv)
    params = {
        k: v
        for k, v in vars(ns).items()
        if k not in {"command", "input", "variant", "output", "fmt", "exact", "seed", "threads"}
    }
    variant = ns.variant
    if ns.command == "chm":
        variant = params.pop("laplacian") or variant
        if not 0 < params["mu"] <= 4:
            raise ValidationError("--mu must lie in (0, 4]")
    if ns.command == "evolve" and (ns.start is None) == (ns.p0 is None):
        raise ValidationError("evolve needs exactly one of --start and --p0")
    return RunConfig(ns.command, ns.input, variant, ns.output, getattr(ns, "fmt", "json"), ns.exact, ns.seed, ns.threads, params)


# --------------------------------------------------------------------------


def _operator(H, variant: str | None):
    variant = variant or rw.variant_for_hypergraph(H).value
    if variant in (k.value for k in Kind):
        return variant, chemical(H, variant)
    return variant, rw.assemble(rw.factorize(H, variant))


def _require_rw(op, what: str) -> rw.RWLaplacian:
    if not isinstance(op, rw.RWLaplacian):
        raise ValidationError(f"{what} needs a random-walk variant")
    return op


def _laplacian(cfg, H):
    variant, op = _operator(H, cfg.variant)
    out = {"variant": variant, "order": list(H.vertices), "exact": cfg.exact}
    if isinstance(op, rw.RWLaplacian):
        F = op.factorization
        out.update(D=F.D, A=F.A, L=op.L, symmetric=F.symmetric)
    else:
        adj = oriented_adjacency(H)
        out.update(t=adj.t, d=adj.d, A_oriented=adj.A, L=op.matrix)
    return dumps(out, exact=cfg.exact)


def _effective_graph(cfg, H):
    variant, op = _operator(H, cfg.variant)
    G = rw.effective_graph(_require_rw(op, "effective-graph").factorization)
    edges = [{"source": H.vertices[i], "target": H.vertices[j], "weight": w} for i, j, w in G.edge_list()]
    if G.symmetric:
        edges = [e for e in edges if H.vertices.index(e["source"]) < H.vertices.index(e["target"])]
    out = {"variant": variant, "order": list(H.vertices), "directed": not G.symmetric, "edges": edges, "weights": G.weights}
    return dumps(out, exact=cfg.exact)


def _spectrum(cfg, H):
    variant, op = _operator(H, cfg.variant)
    spec = eigen_decompose(op)
    vals = spec.eigenvalues
    out = {
        "variant": variant,
        "order": list(H.vertices),
        "weights": spec.weights,
        "self_adjoint": spec.self_adjoint,
        "eigenvalues": vals if spec.real else [complex(v) for v in vals],
    }
    if cfg.params.get("vectors"):
        out["eigenvectors"] = spec.eigenvectors.T
    return dumps(out)


def _certify(cfg, H):
    variant, op = _operator(H, cfg.variant)
    cert = certify(op, H)
    out = {"variant": variant, "order": list(H.vertices), **cert.as_dict(), "eigenvalues": cert.eigenvalues}
    return dumps(out)


def _walk(cfg, H):
    variant, op = _operator(H, cfg.variant)
    F = _require_rw(op, "walk").factorization
    trajs = [
        simulate_walk(F, cfg.params["start"], cfg.params["steps"], cfg.seed, index=k)
        for k in range(cfg.params["trajectories"])
    ]
    names = H.vertices
    if cfg.fmt == "csv":
        rows = ((k, step, names[v]) for k, t in enumerate(trajs) for step, v in enumerate(t.path))
        return csv_text(["trajectory", "step", "vertex"], rows)
    out = {
        "variant": variant,
        "order": list(names),
        "seed": cfg.seed,
        "trajectories": [{"index": k, "start": names[t.start], "path": [names[v] for v in t.path]} for k, t in enumerate(trajs)],
        "transition": F.transition,
    }
    if cfg.params["steps"] > 0:
        emp = empirical_kernel(trajs, n=F.n)
        out["empirical_kernel"] = {"P_hat": emp.P_hat, "stderr": emp.stderr, "counts": emp.counts}
    return dumps(out, exact=cfg.exact)


def _evolve(cfg, H):
    variant, op = _operator(H, cfg.variant)
    F = _require_rw(op, "evolve").factorization
    p0 = np.zeros(H.n)
    if cfg.params["start"] is not None:
        p0[H.index(cfg.params["start"])] = 1.0
    else:
        for name, value in cfg.params["p0"].items():
            p0[H.index(name)] = value
    steps, mode = cfg.params["steps"], cfg.params["mode"]
    out = {"variant": variant, "order": list(H.vertices), "mode": mode, "steps": steps}
    if cfg.params["history"]:
        hist = [evolve_distribution(F, p0, 0, mode).p]
        for _ in range(steps):
            hist.append(evolve_distribution(F, hist[-1], 1, mode).p)
        out["history"] = hist
        out["p"] = hist[-1]
    else:
        out["p"] = evolve_distribution(F, p0, steps, mode).p
    return dumps(out)


def _dirichlet(cfg, H):
    variant, op = _operator(H, cfg.variant)
    boundary = {H.index(k): v for k, v in cfg.params["boundary"].items()}
    lap = GeneralLaplacian.from_rw(op) if isinstance(op, rw.RWLaplacian) else GeneralLaplacian.from_matrix(op)
    f = solve_dirichlet(DirichletProblem(lap, boundary))
    out = {
        "variant": variant,
        "order": list(H.vertices),
        "boundary": {H.vertices[k]: v for k, v in sorted(boundary.items())},
        "f": {H.vertices[i]: f[i] for i in range(H.n)},
    }
    walkers = cfg.params.get("walkers")
    if walkers:
        F = _require_rw(op, "absorbing walks").factorization
        mc = {}
        for i in range(H.n):
            if i in boundary:
                continue
            res = absorbing_walk(F, boundary, i, walkers, cfg.seed, cfg.threads)
            g = np.array([boundary[b] for b in res.boundary])
            mc[H.vertices[i]] = {
                "absorbed": {H.vertices[b]: c for b, c in zip(res.boundary, res.counts)},
                "estimate": float(res.frequencies @ g),
                "stderr": float(np.sqrt(np.sum(g**2 * res.frequencies) - (res.frequencies @ g) ** 2) / np.sqrt(walkers)),
            }
        out["monte_carlo"] = {"walkers": walkers, "seed": cfg.seed, "vertices": mc}
    return dumps(out)


def _chm(cfg, H):
    variant, op = _operator(H, cfg.variant)
    P = cfg.params
    m = ScalarMap(P["map_kind"], P["mu"])
    res = ensemble_run(op, m, P["eps"], P["ensemble"], P["steps"], P["bins"], cfg.seed)
    if cfg.fmt == "csv":
        rows = []
        for t in range(res.steps + 1):
            lo, hi = res.ranges[t]
            edges = np.linspace(lo, hi, res.bins + 1)
            for i in range(H.n):
                for b in range(res.bins):
                    rows.append((t, H.vertices[i], edges[b], edges[b + 1], int(res.counts[t, i, b])))
        return csv_text(["t", "node", "bin_lo", "bin_hi", "count"], rows)
    out = {
        "laplacian": variant,
        "family": res.family,
        "order": list(H.vertices),
        "map": m.kind,
        "mu": m.mu,
        "eps": res.eps,
        "ensemble": res.ensemble,
        "steps": res.steps,
        "bins": res.bins,
        "seed": res.seed,
        "gridlines": [0.0, 1.0],
        "realized_range": list(res.realized_range),
        "contained": res.contained,
        "domain_escaped": res.domain_escaped,
        "first_escape": res.first_escape(),
        "frames": [
            {"t": t, "range": res.ranges[t], "realized": res.realized[t], "counts": res.counts[t]}
            for t in range(res.steps + 1)
        ],
    }
    return dumps(out)


COMMANDS = {
    "laplacian": _laplacian,
    "effective-graph": _effective_graph,
    "spectrum": _spectrum,
    "certify": _certify,
    "walk": _walk,
    "evolve": _evolve,
    "dirichlet": _dirichlet,
    "chm": _chm,
}


def run(cfg: RunConfig) -> str:
    H = read_hypergraph(cfg.input)
    return COMMANDS[cfg.command](cfg, H)


def _fail(kind: str, exc: Exception, code: int) -> int:
    sys.stderr.write(json.dumps({"error": kind, "message": str(exc)}) + "\n")
    return code


def main(argv=None) -> int:
    try:
        cfg = parse_config(sys.argv[1:] if argv is None else argv)
        text = run(cfg)
    except (ValidationError, OSError) as exc:
        return _fail("validation", exc, 1)
    except (ComputationError, np.linalg.LinAlgError, FloatingPointError) as exc:
        return _fail("computation", exc, 2)
    except HyperlapError as exc:
        return _fail("computation", exc, 2)
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())

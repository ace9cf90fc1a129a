"""Command-line interface.

Exit codes: 0 ok, 1 usage, 2 parse error, 3 infeasible or degenerate input,
4 certificate invalid.
"""
from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .config import RunConfig
from .cutmatching import RatioCutResult, approx_rc
from .errors import (DegenerateCutError, DegenerateEmbeddingError, DomainError, InvalidSeedError,
                     NoShiftError, ParseError, UndefinedObjectiveError, UnsupportedRankError)
from .flow import verify_flow_embedding
from .graphs import WeightedGraph
from .hypergraph import graph_lovasz, min_shift_l1, relaxed_ratio
from .improve import seed_from_cut, solve_ci, validate_primal_dual
from .io import dumps, parse_cut_fn, parse_id_list, read_hypergraph, read_json, read_vector
from .metric import MetricSolution, check_metric_feasibility, round_line_embedding

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_INFEASIBLE, EXIT_CERT = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _config(args) -> RunConfig:
    data = {}
    if args.config:
        data.update(read_json(args.config))
    for name in ("eps", "rng_seed", "max_rounds", "c_const", "r_const", "jl_delta", "jl_c", "cut_fn", "verify_level"):
        val = getattr(args, name, None)
        if val is not None:
            data[name] = val
    return RunConfig.from_dict(data).with_env()


def _load(path, cfg: RunConfig | None = None):
    override = parse_cut_fn(cfg.cut_fn) if cfg is not None and cfg.cut_fn else None
    return read_hypergraph(path, override)


def certificate_json(res: RatioCutResult) -> dict:
    c = res.certificate
    return {
        "H": c.H.to_list(),
        "rho": c.rho,
        "rho_tight": c.rho_tight,
        "lambda2": c.lambda2,
        "spectral_bound": c.spectral_bound,
        "lower_bound": c.lower_bound,
        "eta": c.eta,
        "rounds": [
            {
                "S": list(r.S),
                "T": list(r.T),
                "sigma": r.sigma,
                "branch": r.branch,
                "alpha": r.alpha,
                "cut": list(r.cut),
                "psi_s": r.psi_s,
                "gain": r.gain,
                "matching_ok": r.matching.passed,
                "matching_l1_gap": r.matching.l1_gap,
            }
            for r in c.rounds
        ],
    }


def _embedding_json(rep) -> dict:
    return {
        "valid": rep.valid,
        "mode": rep.mode,
        "checked": rep.checked,
        "violations": rep.violations,
        "worst_ratio": rep.worst_ratio,
        "worst_cut": list(rep.worst_cut),
        "rho": rep.rho,
        "psi_h_star": rep.psi_h_star,
        "spectral_bound": rep.spectral_bound,
        "lower_bound": rep.lower_bound,
    }


def _partition_one(path: str, cfg: RunConfig) -> dict:
    G = _load(path, cfg)
    res = approx_rc(G, cfg)
    doc = {
        "command": "partition",
        "n": G.n,
        "m": G.m,
        "cut": sorted(res.cut),
        "psi": res.psi,
        "psi_s": res.psi_s,
        "certified_ratio": res.certified_ratio,
        "certificate": certificate_json(res),
        "config": cfg.to_dict(),
    }
    if cfg.verify_level != "none":
        rep = verify_flow_embedding(G, res.certificate.H, res.certificate.rho, mode=cfg.verify_level,
                                    rng=np.random.default_rng(cfg.rng_seed))
        doc["verification"] = _embedding_json(rep)
    return doc


def cmd_partition(args, out):
    cfg = _config(args)
    if len(args.files) == 1:
        out.write(dumps(_partition_one(args.files[0], cfg)))
        return EXIT_OK
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            docs = list(pool.map(_partition_one, args.files, [cfg] * len(args.files)))
    else:
        docs = [_partition_one(f, cfg) for f in args.files]
    out.write(dumps({"results": [dict(d, file=f) for f, d in zip(args.files, docs)]}))
    return EXIT_OK


def cmd_improve(args, out):
    cfg = _config(args)
    G = _load(args.file, cfg)
    A = parse_id_list(args.seed_cut, G.n)
    s = seed_from_cut(G, A)
    sol = solve_ci(G, s, cfg.eps)
    rep = validate_primal_dual(G, s, sol, cfg.eps)
    from .hypergraph import ratio_cut

    out.write(dumps({
        "command": "improve",
        "seed_cut": A,
        "cut": sorted(sol.cut),
        "alpha": sol.alpha,
        "alpha_upper": sol.alpha_upper,
        "psi_s": sol.psi_s,
        "psi": ratio_cut(G, list(sol.cut)),
        "method": sol.method,
        "iterations": sol.iterations,
        "validation": {k: {"passed": ok, "residual": r} for k, (ok, r) in rep.items.items()},
        "valid": rep.passed,
    }))
    return EXIT_OK if rep.passed else EXIT_CERT


def cmd_verify(args, out):
    G = _load(args.file)
    doc = read_json(args.certificate)
    cert = doc.get("certificate", doc)
    try:
        H = WeightedGraph.from_list(G.n, cert["H"])
        rho = float(cert["rho"])
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise ParseError(f"malformed certificate: {exc}") from exc
    if any(not (0 <= i < G.n and 0 <= j < G.n) for i, j in H.edges):
        raise ParseError("certificate edge endpoint out of range")
    rep = verify_flow_embedding(G, H, rho, mode=args.mode, samples=args.samples,
                                rng=np.random.default_rng(args.rng_seed or 0))
    out.write(dumps(dict(command="verify", **_embedding_json(rep))))
    return EXIT_OK if rep.valid else EXIT_CERT


def cmd_eval(args, out):
    G = _load(args.file)
    x = read_vector(args.vector, G.n)
    doc = {"command": "eval", "lovasz": graph_lovasz(G, x), "min_shift_l1": min_shift_l1(x, G.mu)[0]}
    try:
        doc["relaxed_ratio"] = relaxed_ratio(G, x)
        lr = round_line_embedding(G, x)
    except DegenerateCutError:
        out.write(dumps(dict(doc, relaxed_ratio=None, sweep=None)))
        return EXIT_INFEASIBLE
    doc["sweep"] = {"cut": list(lr.sweep.cut), "psi": lr.sweep.psi, "threshold": lr.sweep.threshold}
    doc["surrogate"] = lr.surrogate
    out.write(dumps(doc))
    return EXIT_OK


def cmd_check_metric(args, out):
    G = _load(args.file)
    try:
        sol = MetricSolution.from_json(G, read_json(args.solution))
    except DomainError as exc:
        raise ParseError(str(exc)) from exc
    rep = check_metric_feasibility(G, sol, tol=args.tol)
    out.write(dumps({
        "command": "check-metric",
        "feasible": rep.feasible,
        "spread": rep.spread,
        "spread_violation": rep.spread_violation,
        "pair_violation": rep.pair_violation,
        "triangle_violation": rep.triangle_violation,
        "objective": rep.objective,
    }))
    return EXIT_OK if rep.feasible else EXIT_INFEASIBLE


def _run_options(p):
    p.add_argument("--config", help="JSON file with RunConfig fields")
    p.add_argument("--eps", type=float)
    p.add_argument("--seed", dest="rng_seed", type=int, help="64-bit RNG seed (HPRC_RNG_SEED overrides)")
    p.add_argument("--max-rounds", dest="max_rounds", type=int)
    p.add_argument("--c-const", dest="c_const", type=float)
    p.add_argument("--r-const", dest="r_const", type=float)
    p.add_argument("--jl-delta", dest="jl_delta", type=float)
    p.add_argument("--jl-c", dest="jl_c", type=float)
    p.add_argument("--fn", dest="cut_fn", help="override every hyperedge's cut function")
    p.add_argument("--verify-level", dest="verify_level", choices=["none", "sampled", "exhaustive"])


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hprc", description="Ratio cuts on submodular hypergraphs")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("partition", help="approximate minimum ratio cut with a certificate")
    p.add_argument("files", nargs="+")
    p.add_argument("--jobs", type=int, default=1, help="parallel workers across independent files")
    _run_options(p)
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("improve", help="seeded cut improvement")
    p.add_argument("file")
    p.add_argument("--seed-cut", required=True, help="comma-separated vertex ids or a file of ids")
    _run_options(p)
    p.set_defaults(func=cmd_improve)

    p = sub.add_parser("verify", help="check a certificate's flow embedding")
    p.add_argument("file")
    p.add_argument("--certificate", required=True)
    p.add_argument("--mode", choices=["auto", "exhaustive", "sampled"], default="auto")
    p.add_argument("--samples", type=int, default=4096)
    p.add_argument("--seed", dest="rng_seed", type=int)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("eval", help="Lovasz extension, relaxed ratio and sweep cut of a vector")
    p.add_argument("file")
    p.add_argument("--vector", required=True)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("check-metric", help="check a metric-relaxation solution")
    p.add_argument("file")
    p.add_argument("--solution", required=True)
    p.add_argument("--tol", type=float, default=1e-7)
    p.set_defaults(func=cmd_check_metric)
    return parser


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"hprc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args, out)
    except ParseError as exc:
        print(f"hprc: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (DegenerateCutError, DegenerateEmbeddingError, InvalidSeedError, NoShiftError,
            UndefinedObjectiveError) as exc:
        print(f"hprc: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (DomainError, UnsupportedRankError) as exc:
        print(f"hprc: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

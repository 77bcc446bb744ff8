"""Command-line driver.

Subcommands: gen, solve, moments, calibrate, map, audit, sandwich,
irreducibility.  Exit code is nonzero iff an asserted property fails
(statistical bands, audit tolerance, certificate soundness); witness-not-
found and class mismatches are reported outcomes, not failures.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from .experiments import (
    ExperimentConfig,
    K_EXPLICIT,
    K_ROUND_LN_N,
    SANDWICH_CSV_HEADER,
    IRRED_CSV_HEADER,
    _csv_text,
    run_formula_audit,
    run_irreducibility_experiment,
    run_sandwich_experiment,
)
from .graph import from_text, generate_gnp, to_text, to_vertices
from .mapping import Direction, apply_mapping, find_forward_witness, find_reverse_witness, local_soundness, verify_certificate
from .moments import (
    ModelParams,
    calibrate_p,
    expected_X,
    moment_report,
    report_dict,
    report_text,
    round_ln_n,
)
from .rng import RngStream
from .solver import InstanceTag, classify_sweep, sweep_k_sets


def _read_graph(path: str):
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    return from_text(text)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _cmd_gen(args) -> int:
    g = generate_gnp(args.n, args.p, RngStream(args.seed, args.stream))
    _emit(to_text(g), args.out)
    return 0


def _cmd_solve(args) -> int:
    g = _read_graph(args.file)
    k = args.k if args.k is not None else round_ln_n(g.n)
    sweep = sweep_k_sets(g, k)
    cls = classify_sweep(sweep)
    doc = {
        "n": g.n,
        "k": k,
        "dominating": sweep.counts.dominating,
        "near": sweep.counts.near,
        "total_examined": sweep.counts.total_examined,
        "class": cls.tag.value,
        "witness_set": to_vertices(cls.witness_set) if cls.witness_set is not None else None,
        "witness_vertex": cls.witness_vertex,
    }
    if args.format == "structured":
        _emit(json.dumps(doc, sort_keys=True, indent=2) + "\n", args.out)
    else:
        lines = [f"{key},{doc[key]}" for key in doc]
        _emit("\n".join(lines) + "\n", args.out)
    return 0


def _params_from(args, p: float | None = None) -> ModelParams:
    k = args.k if args.k is not None else round_ln_n(args.n)
    return ModelParams(n=args.n, k=k, p=p if p is not None else args.p, delta=args.delta, c=args.c)


def _cmd_moments(args) -> int:
    params = _params_from(args)
    rep = moment_report(params)
    if args.format == "structured":
        _emit(json.dumps(report_dict(rep), sort_keys=True, indent=2) + "\n", args.out)
    else:
        _emit(report_text(rep), args.out)
    return 0


def _cmd_calibrate(args) -> int:
    k = args.k if args.k is not None else round_ln_n(args.n)
    p_star = calibrate_p(args.n, k, args.delta)
    ex = expected_X(ModelParams(n=args.n, k=k, p=p_star)).to_float()
    doc = {"n": args.n, "k": k, "delta": args.delta, "p_star": p_star, "e_x": ex,
           "residual": abs(ex - args.delta)}
    _emit(json.dumps(doc, sort_keys=True, indent=2) + "\n", args.out)
    return 0


def _cmd_map(args) -> int:
    g = _read_graph(args.file)
    k = args.k if args.k is not None else round_ln_n(g.n)
    h_size = args.h_size if args.h_size is not None else math.ceil(g.n**args.c)
    h_bits = (1 << h_size) - 1
    sweep = sweep_k_sets(g, k)
    cls = classify_sweep(sweep)
    doc: dict = {"class": cls.tag.value, "k": k, "h_size": h_size, "found": False}
    cert = None
    if cls.tag is InstanceTag.UNIQUE_DOM and (cls.witness_set & h_bits) == 0:
        quad = find_forward_witness(g, cls.witness_set, h_bits)
        if quad is not None:
            g2, cert = apply_mapping(g, quad, Direction.FORWARD, s_bits=cls.witness_set, h_bits=h_bits)
            cert = verify_certificate(g, g2, cert, k)
    elif cls.tag is InstanceTag.NO_DOM_WITH_NEAR and ((cls.witness_set | 1 << cls.witness_vertex) & h_bits) == 0:
        wit = find_reverse_witness(g, cls.witness_set, cls.witness_vertex, h_bits)
        if wit is not None:
            u, z, w = wit
            g2, cert = apply_mapping(
                g, (u, cls.witness_vertex, z, w), Direction.REVERSE,
                s_bits=cls.witness_set, h_bits=h_bits,
            )
            cert = verify_certificate(g, g2, cert, k)
    if cert is not None:
        doc["found"] = True
        doc["certificate"] = cert.to_record()
        doc["local_sound"] = local_soundness(g2, cert)
    _emit(json.dumps(doc, sort_keys=True, indent=2) + "\n", args.out)
    if cert is not None and not (cert.degree_preserved and cert.h_unchanged and doc["local_sound"]):
        return 1
    return 0


def _cmd_audit(args) -> int:
    ps = tuple(args.ps) if args.ps else None
    report = run_formula_audit(args.n_max, ps=ps) if ps else run_formula_audit(args.n_max)
    if args.format == "structured":
        _emit(json.dumps(report.summary_dict(), sort_keys=True, indent=2) + "\n", args.out)
    else:
        rows = [[r.n, r.k, r.p, r.err_x, r.err_x2, r.err_n, r.err_n2] for r in report.rows]
        _emit(_csv_text(["n", "k", "p", "err_x", "err_x2", "err_n", "err_n2"], rows), args.out)
    sys.stderr.write(f"max relative error: {report.max_err:.3e} (tolerance {args.tol:.1e})\n")
    return 0 if report.max_err <= args.tol else 1


def _config_from(args) -> ExperimentConfig:
    k_rule = K_EXPLICIT if args.k is not None else K_ROUND_LN_N
    k = args.k if args.k is not None else round_ln_n(args.n)
    params = ModelParams(n=args.n, k=k, p=0.5, delta=args.delta, c=args.c)
    return ExperimentConfig(
        params=params,
        trials=args.trials,
        master_seed=args.seed,
        k_rule=k_rule,
        out_csv=Path(args.out) if args.out else None,
        out_summary=Path(args.summary) if args.summary else None,
        out_certs=Path(args.certs) if getattr(args, "certs", None) else None,
    )


def _cmd_sandwich(args) -> int:
    report = run_sandwich_experiment(_config_from(args))
    if args.format == "csv":
        sys.stdout.write(_csv_text(SANDWICH_CSV_HEADER, report.trial_rows))
    else:
        sys.stdout.write(json.dumps(report.summary_dict(), sort_keys=True, indent=2) + "\n")
    return 0 if report.passed() else 1


def _cmd_irreducibility(args) -> int:
    report = run_irreducibility_experiment(_config_from(args))
    if args.format == "csv":
        sys.stdout.write(_csv_text(IRRED_CSV_HEADER, [r.csv_row() for r in report.records]))
    else:
        sys.stdout.write(json.dumps(report.summary_dict(), sort_keys=True, indent=2) + "\n")
    return 0 if report.all_certificates_sound() else 1


def _add_model_flags(sp, with_p: bool = False):
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=int, default=None, help="set size; default round(ln n)")
    if with_p:
        sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--delta", type=float, default=0.5)
    sp.add_argument("--c", type=float, default=0.5)


def _add_run_flags(sp):
    sp.add_argument("--trials", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", default=None, help="per-trial CSV path")
    sp.add_argument("--summary", default=None, help="summary JSON path")
    sp.add_argument("--format", choices=("csv", "structured"), default="structured")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="domlab")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("gen", help="sample one G(n,p) graph and print it")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--stream", type=int, default=0)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=_cmd_gen)

    sp = sub.add_parser("solve", help="counts and classification for a graph file")
    sp.add_argument("--file", required=True, help="graph file path, or - for stdin")
    sp.add_argument("--k", type=int, default=None)
    sp.add_argument("--out", default=None)
    sp.add_argument("--format", choices=("csv", "structured"), default="structured")
    sp.set_defaults(func=_cmd_solve)

    sp = sub.add_parser("moments", help="closed-form moment report for parameters")
    _add_model_flags(sp, with_p=True)
    sp.add_argument("--out", default=None)
    sp.add_argument("--format", choices=("csv", "structured"), default="csv")
    sp.set_defaults(func=_cmd_moments)

    sp = sub.add_parser("calibrate", help="edge probability with E[X] = delta")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=int, default=None)
    sp.add_argument("--delta", type=float, default=0.5)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=_cmd_calibrate)

    sp = sub.add_parser("map", help="classify a graph file and apply one swap")
    sp.add_argument("--file", required=True)
    sp.add_argument("--k", type=int, default=None)
    sp.add_argument("--h-size", type=int, default=None, dest="h_size")
    sp.add_argument("--c", type=float, default=0.5)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=_cmd_map)

    sp = sub.add_parser("audit", help="formula vs exhaustive-oracle relative errors")
    sp.add_argument("--n-max", type=int, default=7, dest="n_max")
    sp.add_argument("--ps", type=float, nargs="*", default=None)
    sp.add_argument("--tol", type=float, default=1e-10)
    sp.add_argument("--out", default=None)
    sp.add_argument("--format", choices=("csv", "structured"), default="csv")
    sp.set_defaults(func=_cmd_audit)

    sp = sub.add_parser("sandwich", help="Monte Carlo Pr(X>0) vs moment bounds")
    _add_model_flags(sp)
    _add_run_flags(sp)
    sp.set_defaults(func=_cmd_sandwich)

    sp = sub.add_parser("irreducibility", help="classify, swap, verify certificates")
    _add_model_flags(sp)
    _add_run_flags(sp)
    sp.add_argument("--certs", default=None, help="certificate JSONL path")
    sp.set_defaults(func=_cmd_irreducibility)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())

"""Command-line surface.

    flatlab <command> [--p P | --primes LIST] [--alpha A] [--delta D]
            [--epsilon E] [--kappa K] [--grid N] [--levels K]
            [--preset NAME] [--format json|csv|text] [--seed S]
            [--threads N] [--out PATH]

Commands: singer, sidon, flatness, mahler, mz, riesz, verify-all.

Reports are deterministic byte-for-byte for identical (argv, seed): key
order is fixed, floats carry 17 significant digits, exact rationals are
emitted verbatim, and lines end with LF.  Exit codes: 0 success, 2 usage
or validation error, 1 internal error.
"""

from __future__ import annotations

import argparse
import math
import sys
from fractions import Fraction
from typing import Optional, TextIO

import numpy as np

from flatlab import __version__, _backend, nodes, riesz, singer, trigpoly
from flatlab.errors import FlatlabError

SCHEMA_VERSION = 1


# ---------------------------------------------------------------------------
# deterministic serialization

def _fmt_float(x: float) -> str:
    if x != x or x in (float("inf"), float("-inf")):
        return '"%s"' % repr(x)
    return format(x, ".17g")


def _json_value(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if bool(v) else "false"
    if isinstance(v, Fraction):
        return '"%s"' % str(v)
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return _fmt_float(float(v))
    if isinstance(v, str):
        return '"%s"' % v.replace("\\", "\\\\").replace('"', '\\"')
    if v is None:
        return "null"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_json_value(x) for x in v) + "]"
    if isinstance(v, dict):
        return ("{" + ", ".join(f'"{k}": {_json_value(x)}'
                                for k, x in v.items()) + "}")
    raise TypeError(f"cannot serialize {type(v)!r}")


def _emit_json(report: dict, stream: TextIO) -> None:
    stream.write(_json_value(report))
    stream.write("\n")


def _cell(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if bool(v) else "false"
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def _emit_csv(command: str, columns: list[str], rows: list[list],
              stream: TextIO) -> None:
    stream.write(f"# flatlab schema_version={SCHEMA_VERSION} command={command} "
                 f"columns={','.join(columns)}\n")
    stream.write(",".join(columns) + "\n")
    for row in rows:
        stream.write(",".join(_cell(v) for v in row) + "\n")


def _emit_text(report: dict, stream: TextIO, indent: int = 0) -> None:
    pad = "  " * indent
    for k, v in report.items():
        if isinstance(v, dict):
            stream.write(f"{pad}{k}:\n")
            _emit_text(v, stream, indent + 1)
        elif isinstance(v, (list, tuple)) and v and isinstance(v[0], dict):
            stream.write(f"{pad}{k}:\n")
            for i, item in enumerate(v):
                stream.write(f"{pad}  [{i}]\n")
                _emit_text(item, stream, indent + 2)
        elif isinstance(v, (list, tuple)):
            stream.write(f"{pad}{k}: {' '.join(_cell(x) for x in v)}\n")
        else:
            stream.write(f"{pad}{k}: {_cell(v)}\n")


# ---------------------------------------------------------------------------
# command implementations: each returns (report_dict, csv_columns, csv_rows)

def _parse_primes(args) -> list[int]:
    if args.primes:
        return [int(tok) for tok in args.primes.split(",") if tok]
    return [args.p if args.p is not None else 7]


def _cmd_singer(args):
    rows = []
    entries = []
    for p in _parse_primes(args):
        s = singer.singer_set(p)
        perfect = singer.verify_perfect_difference_set(s.residues, s.q)
        entry = {
            "p": s.p, "q": s.q, "residues": list(s.residues),
            "perfect_difference": perfect,
            "sidon": singer.is_sidon(s.residues),
            "lindstrom_ok": singer.lindstrom_bound_check(s.residues, s.q - 1),
            "cubic": list(s.field.modulus),
        }
        entries.append(entry)
        rows.append([s.p, s.q, " ".join(str(r) for r in s.residues), perfect])
    report = {"schema_version": SCHEMA_VERSION, "command": "singer",
              "seed": args.seed, "sets": entries}
    return report, ["p", "q", "residues", "perfect_difference"], rows


def _cmd_sidon(args):
    rows = []
    entries = []
    for p in _parse_primes(args):
        s = singer.singer_set(p)
        stats = singer.difference_stats(s.residues)
        value, lower = trigpoly.l4_obstruction(s.residues)
        entry = {
            "p": s.p, "q": s.q, "size": len(s.residues),
            "is_sidon": singer.is_sidon(s.residues),
            "is_b2_1": singer.is_bhg(s.residues, 2, 1),
            "distinct_differences": stats.distinct,
            "max_multiplicity": stats.max_multiplicity,
            "pair_count": sum(stats.multiplicities.values()),
            "fourth_moment_obstruction": value,
            "obstruction_lower_bound": lower,
        }
        entries.append(entry)
        rows.append([s.p, s.q, len(s.residues), entry["is_sidon"],
                     stats.distinct, stats.max_multiplicity, value, lower])
    report = {"schema_version": SCHEMA_VERSION, "command": "sidon",
              "seed": args.seed, "supports": entries}
    cols = ["p", "q", "size", "is_sidon", "distinct_differences",
            "max_multiplicity", "fourth_moment_obstruction",
            "obstruction_lower_bound"]
    return report, cols, rows


def _cmd_flatness(args):
    cfg = trigpoly.QuadratureConfig(max_grid=args.grid or (1 << 20))
    alpha = args.alpha if args.alpha is not None else 1.0
    rows = []
    entries = []
    for p in _parse_primes(args):
        s = singer.singer_set(p)
        poly = trigpoly.from_support(s.residues)
        est = trigpoly.lp_norm(poly, 1.0, cfg)
        fam = nodes.build_nodes("roots", s.q)
        dmean = nodes.discrete_mean(poly, fam, alpha)
        closed = float(nodes.singer_node_mean(p, alpha))
        entry = {
            "p": s.p, "q": s.q, "l1_norm": est.value,
            "defect": 1.0 - est.value, "est_error": est.est_error,
            "grid": est.grid_size, "converged": est.converged,
            "alpha": alpha, "discrete_mean": dmean, "closed_form": closed,
        }
        entries.append(entry)
        rows.append([s.p, s.q, est.value, 1.0 - est.value, dmean, closed])
    report = {"schema_version": SCHEMA_VERSION, "command": "flatness",
              "seed": args.seed, "alpha": alpha, "polynomials": entries}
    cols = ["p", "q", "l1_norm", "defect", "discrete_mean", "closed_form"]
    return report, cols, rows


def _cmd_mahler(args):
    alpha = args.alpha if args.alpha is not None else 0.6
    if not 0.0 < alpha < 1.0:
        raise FlatlabError(f"--alpha must be in (0, 1) for the cosine family, got {alpha}")
    a = alpha / (1.0 + math.sqrt(1.0 - alpha * alpha))
    cosine_entries = []
    for n in (3, 10):
        poly = trigpoly.TrigPoly.cosine(alpha, n)
        cont = trigpoly.mahler_measure(poly)
        disc = trigpoly.mahler_discrete(poly, 2 * n)
        cosine_entries.append({
            "n": n, "alpha": alpha,
            "continuous": cont.value, "continuous_target": 1.0 / (1.0 + a * a),
            "est_error": cont.est_error, "converged": cont.converged,
            "discrete": disc,
            "discrete_target": math.sqrt(1.0 - alpha * alpha),
        })
    singer_entries = []
    rows = []
    for p in _parse_primes(args):
        s = singer.singer_set(p)
        poly = trigpoly.from_support(s.residues)
        est = trigpoly.mahler_measure(poly)
        jensen = (trigpoly.mahler_jensen(poly)
                  if poly.degree_span <= 64 else None)
        singer_entries.append({
            "p": s.p, "q": s.q, "mahler_quadrature": est.value,
            "est_error": est.est_error, "converged": est.converged,
            "mahler_jensen": jensen,
        })
        rows.append([s.p, s.q, est.value,
                     jensen if jensen is not None else "", est.converged])
    report = {"schema_version": SCHEMA_VERSION, "command": "mahler",
              "seed": args.seed, "cosine_family": cosine_entries,
              "singer_polynomials": singer_entries}
    cols = ["p", "q", "mahler_quadrature", "mahler_jensen", "converged"]
    return report, cols, rows


def _cmd_mz(args):
    kappa = args.kappa if args.kappa is not None else 2.0
    alpha = args.alpha if args.alpha is not None else 2.0
    if alpha < 1:
        raise FlatlabError(f"--alpha must be >= 1 for a convex power, got {alpha}")
    p = args.p if args.p is not None else 7
    s = singer.singer_set(p)
    poly = trigpoly.from_support(s.residues)
    n = poly.max_abs_frequency
    m = args.grid or int(math.ceil((1 + kappa) * 2 * n))
    check = nodes.mz_upper_check(poly, nodes.phi_power(alpha), kappa, m)
    bern = {str(e): nodes.bernstein_ratio(poly, e) for e in (1, 2, 4)}
    rng = np.random.default_rng(args.seed)
    cfg = trigpoly.QuadratureConfig(stop_rel_tol=1e-8, max_grid=1 << 18)
    violations = 0
    count = 20
    from flatlab.acceptance import _seeded_poly
    for trial in range(count):
        rpoly = _seeded_poly(rng, max_degree=32)
        rk = (1, 2, 4)[trial % 3]
        rm = int(math.ceil((1 + rk) * 2 * rpoly.max_abs_frequency))
        rcheck = nodes.mz_upper_check(rpoly, nodes.phi_power((1, 2)[trial % 2]),
                                      rk, rm, cfg=cfg)
        if not rcheck.holds:
            violations += 1
    report = {"schema_version": SCHEMA_VERSION, "command": "mz",
              "seed": args.seed, "p": p, "q": s.q, "degree": n,
              "kappa": kappa, "alpha": alpha, "m": m,
              "lhs": check.lhs, "rhs": check.rhs, "holds": check.holds,
              "bernstein_ratio": bern,
              "random_suite": {"count": count, "violations": violations}}
    cols = ["p", "q", "kappa", "alpha", "m", "lhs", "rhs", "holds"]
    rows = [[p, s.q, kappa, alpha, m, check.lhs, check.rhs, check.holds]]
    return report, cols, rows


def _riesz_spec(preset: str, levels: int) -> riesz.RieszProductSpec:
    base = trigpoly.from_support((0, 1))
    if preset == "dyadic":
        return riesz.dynamical_origin_dilations([base] * levels)
    if preset == "ternary":
        return riesz.spec_from_factors([base] * levels,
                                       [3 ** j for j in range(levels)])
    if preset == "singer":
        primes = [p for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31)][:levels]
        polys = [trigpoly.from_support(singer.singer_set(p).residues)
                 for p in primes]
        return riesz.dynamical_origin_dilations(polys)
    raise FlatlabError(f"unknown preset {preset!r} (try dyadic, ternary, singer)")


def _cmd_riesz(args):
    levels = args.levels or 8
    grid = args.grid or 4096
    preset = args.preset or "dyadic"
    spec = _riesz_spec(preset, levels)
    prod = riesz.partial_product(spec, levels)
    table = [{"frequency": d, "coefficient": prod.coeffs[d]}
             for d in sorted(prod.coeffs) if abs(d) <= 10]
    vals = trigpoly.evaluate_grid(prod, grid).real
    mp = riesz.mahler_product(spec, levels)
    report = {"schema_version": SCHEMA_VERSION, "command": "riesz",
              "seed": args.seed, "preset": preset, "levels": levels,
              "dilations": [f.dilation for f in spec.factors],
              "heights": list(spec.heights),
              "dynamical": spec.dynamical,
              "zero_coefficient": prod.coeffs[0],
              "term_count": len(prod),
              "mahler_product": mp,
              "pointwise_min": float(vals.min()),
              "pointwise_max": float(vals.max()),
              "grid": grid,
              "coefficient_table": table}
    cols = ["frequency", "coefficient"]
    rows = [[t["frequency"], t["coefficient"]] for t in table]
    return report, cols, rows


def _cmd_verify_all(args):
    from flatlab import acceptance

    results = acceptance.run_all(seed=args.seed)
    entries = [{"id": r.cid, "name": r.name, "passed": r.passed,
                "detail": r.detail} for r in results]
    report = {"schema_version": SCHEMA_VERSION, "command": "verify-all",
              "seed": args.seed, "backend": _backend.backend_name(),
              "criteria": entries,
              "all_passed": all(r.passed for r in results)}
    cols = ["id", "name", "passed"]
    rows = [[r.cid, r.name, r.passed] for r in results]
    return report, cols, rows


_COMMANDS = {
    "singer": _cmd_singer,
    "sidon": _cmd_sidon,
    "flatness": _cmd_flatness,
    "mahler": _cmd_mahler,
    "mz": _cmd_mz,
    "riesz": _cmd_riesz,
    "verify-all": _cmd_verify_all,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="flatlab",
        description="Singer sets, flat polynomials, and circle-sampling checks")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        c = sub.add_parser(name)
        c.add_argument("--p", type=int, default=None, help="prime parameter")
        c.add_argument("--primes", type=str, default=None,
                       help="comma-separated prime list")
        c.add_argument("--alpha", type=float, default=None)
        c.add_argument("--delta", type=float, default=None)
        c.add_argument("--epsilon", type=float, default=None)
        c.add_argument("--kappa", type=float, default=None)
        c.add_argument("--grid", type=int, default=None)
        c.add_argument("--levels", type=int, default=None)
        c.add_argument("--preset", type=str, default=None)
        c.add_argument("--format", dest="fmt", default="text",
                       choices=("json", "csv", "text"))
        c.add_argument("--seed", type=int, default=0)
        c.add_argument("--threads", type=int, default=1,
                       help="reserved; results are independent of the value")
        c.add_argument("--out", type=str, default=None)
    return parser


def run(argv: list[str], stream: Optional[TextIO] = None) -> int:
    """Execute a command line; returns the exit code.  Reports go to
    ``stream`` (stdout by default) or to --out."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.threads is not None and args.threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return 2
    try:
        report, cols, rows = _COMMANDS[args.command](args)
    except FlatlabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {exc}", file=sys.stderr)
        return 1

    def emit(out: TextIO) -> None:
        if args.fmt == "json":
            _emit_json(report, out)
        elif args.fmt == "csv":
            _emit_csv(args.command, cols, rows, out)
        elif args.command == "verify-all":
            for entry in report["criteria"]:
                status = "PASS" if entry["passed"] else "FAIL"
                detail = "; ".join(f"{k}={_cell(v)}"
                                   for k, v in entry["detail"].items())
                out.write(f"{status} {entry['id']:02d} {entry['name']}: {detail}\n")
            out.write("all passed\n" if report["all_passed"]
                      else "FAILURES present\n")
        else:
            _emit_text(report, out)

    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            emit(fh)
    else:
        emit(stream if stream is not None else sys.stdout)

    if args.command == "verify-all" and not report["all_passed"]:
        return 1
    return 0


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()

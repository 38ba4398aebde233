"""Command-line front end: compute, certify, check bounds, reproduce, scan.

Machine-readable first: results go to stdout as JSON (or CSV for tables),
diagnostics to stderr.  Exit codes are a stable contract: 0 success,
2 input error, 3 dimension/format error, 4 certification gap above tol.
Every command is deterministic given its flags and seed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from dataclasses import dataclass

import numpy as np

from .errors import (BarycentreMismatch, DimensionMismatch, NotCertified,
                     NotInConvexOrder, ParseError, ZolotoError)
from .inequalities import (FamilySpec, check_bounds, gaussian_pair,
                           scan_ratio, scan_rows_to_csv,
                           symmetric_dilation_pair, two_atom_pair,
                           two_atom_plan)
from .measures import load_measure, stats
from .transport_plans import (certify_z2, three_plan_cost,
                              validate_three_plan, z2_convex_order_closed_form)
from .wasserstein import solve_w2, solve_w2_1d_monotone, w2_gaussian_1d

log = logging.getLogger("zoloto")

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_DIMENSION = 3
EXIT_NOT_CERTIFIED = 4

PAPER_COLUMNS = ["quantity", "computed", "target", "diff", "tol", "pass",
                 "formula"]


@dataclass
class RunConfig:
    """Validated invocation: command, inputs, accuracy, and output routing."""

    command: str
    mu_path: str | None = None
    nu_path: str | None = None
    tol: float = 1e-8
    seed: int = 0
    out: str | None = None
    fmt: str = "json"
    plan: str | None = None
    threads: int = 1

    def __post_init__(self):
        if not 0.0 < self.tol <= 1e-2:
            raise ParseError(f"tol {self.tol} outside (0, 1e-2]")
        if self.threads < 1:
            raise ParseError("threads must be >= 1")
        for path in (self.mu_path, self.nu_path):
            if path is not None and not os.path.exists(path):
                raise ParseError(f"input file not found: {path}")


def _setup_logging():
    levels = {"error": logging.ERROR, "warn": logging.WARNING,
              "info": logging.INFO, "debug": logging.DEBUG}
    name = os.environ.get("ZOLOTO_LOG", "warn").lower()
    if name not in levels:
        raise ParseError(f"ZOLOTO_LOG must be one of {sorted(levels)}")
    logging.basicConfig(stream=sys.stderr, level=levels[name],
                        format="%(levelname)s %(name)s: %(message)s")


def _emit(text: str, out_path):
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(payload, out_path):
    _emit(json.dumps(payload, sort_keys=True) + "\n", out_path)


def _write_json(payload, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True)
        fh.write("\n")


def _load_pair(cfg: RunConfig):
    if cfg.mu_path is None or cfg.nu_path is None:
        raise ParseError("--mu and --nu are both required")
    return load_measure(cfg.mu_path), load_measure(cfg.nu_path)


def cmd_w2(cfg: RunConfig) -> int:
    mu, nu = _load_pair(cfg)
    w2, coupling = solve_w2(mu, nu)
    if cfg.plan:
        _write_json(coupling.to_json_dict(), cfg.plan)
    _emit_json({"w2": w2}, cfg.out)
    return EXIT_OK


def cmd_z2(cfg: RunConfig) -> int:
    mu, nu = _load_pair(cfg)
    try:
        cert = certify_z2(mu, nu, cfg.tol)
    except BarycentreMismatch:
        _emit_json({"z2": "inf", "reason": "barycentre mismatch"}, cfg.out)
        return EXIT_OK
    except NotCertified as exc:
        log.warning("%s", exc)
        _emit_json(exc.result.to_json_dict(), cfg.out)
        return EXIT_NOT_CERTIFIED
    _emit_json(cert.to_json_dict(), cfg.out)
    return EXIT_OK


def cmd_certify(cfg: RunConfig) -> int:
    """Like z2 but also reports dual diagnostics and can dump the 3-plan."""
    mu, nu = _load_pair(cfg)
    try:
        cert = certify_z2(mu, nu, cfg.tol)
        code = EXIT_OK
    except BarycentreMismatch:
        _emit_json({"z2": "inf", "reason": "barycentre mismatch"}, cfg.out)
        return EXIT_OK
    except NotCertified as exc:
        log.warning("%s", exc)
        cert = exc.result
        code = EXIT_NOT_CERTIFIED
    payload = cert.to_json_dict()
    payload.update({"max_violation": cert.dual.max_violation,
                    "iterations": cert.dual.iterations,
                    "converged": cert.dual.converged,
                    "n_triples": cert.primal.n_triples})
    if cfg.plan:
        _write_json(cert.primal.to_json_dict(), cfg.plan)
    _emit_json(payload, cfg.out)
    return code


def cmd_bounds(cfg: RunConfig) -> int:
    mu, nu = _load_pair(cfg)
    try:
        report = check_bounds(mu, nu)
    except BarycentreMismatch:
        _emit_json({"z2": "inf", "reason": "barycentre mismatch",
                    "lower_bound": "trivially true"}, cfg.out)
        return EXIT_OK
    _emit_json(report.to_json_dict(), cfg.out)
    return EXIT_OK


def _row(quantity, computed, target, tol, formula, one_sided=False):
    diff = max(0.0, computed - target) if one_sided else abs(computed - target)
    return {"quantity": quantity, "computed": float(computed),
            "target": float(target), "diff": float(diff), "tol": float(tol),
            "pass": bool(diff <= tol), "formula": formula}


def _paper_opt14(a: float, b: float, tol: float) -> list:
    mu, nu = two_atom_pair(a, b)
    w2, _ = solve_w2(mu, nu)
    plan = two_atom_plan(a, b)
    report = validate_three_plan(plan, mu, nu)
    residual = max(report.mu_marginal_residual, report.nu_marginal_residual,
                   report.martingale_x_residual, report.martingale_y_residual,
                   report.mass_sum_residual)
    cost = three_plan_cost(plan)
    try:
        cert = certify_z2(mu, nu, tol)
    except NotCertified as exc:
        cert = exc.result
    v = a * b * (b - a) / (a + b)
    return [
        _row("w2_sq", w2 ** 2, 2 * a * (b - a), 1e-10, "2a(b-a)"),
        _row("plan_residual", residual, 0.0, 1e-12, "0 (feasible 3-plan)"),
        _row("plan_cost", cost, v, 1e-12, "ab(b-a)/(a+b)"),
        _row("z2_upper", cert.upper, v, 1e-8, "<= ab(b-a)/(a+b)",
             one_sided=True),
        _row("neg_z2_lower", -cert.lower, -0.25 * w2 ** 2, 1e-8,
             ">= w2^2/4", one_sided=True),
    ]


def _paper_gauss(sigma1: float, sigma2: float, n: int) -> list:
    mu, nu = gaussian_pair(sigma1, sigma2, n)
    w2, _ = solve_w2_1d_monotone(mu, nu)
    z2 = z2_convex_order_closed_form(mu, nu)
    dw = sigma2 - sigma1
    dv = 0.5 * (sigma2 ** 2 - sigma1 ** 2)
    # discretization error of n-point quantile sets: var deficit ~ 1.3/n
    return [
        _row("w2", w2, w2_gaussian_1d(sigma1, sigma2),
             0.9 * dw / n + 1e-9, "|sigma2 - sigma1|"),
        _row("z2", z2, dv, 1.6 * dv / n + 1e-9, "(sigma2^2 - sigma1^2)/2"),
    ]


def _paper_noreverse(n: int, tol: float) -> list:
    mu, nu = symmetric_dilation_pair(1.0 + 1.0 / n)
    w2, _ = solve_w2_1d_monotone(mu, nu)
    try:
        cert = certify_z2(mu, nu, tol)
    except NotCertified as exc:
        cert = exc.result
    mid = 0.5 * (cert.lower + cert.upper)
    return [
        _row("w2_sq", w2 ** 2, 1.0 / n ** 2, 1e-9, "1/n^2"),
        _row("z2", mid, 0.5 * ((1 + 1.0 / n) ** 2 - 1), 1e-7,
             "((1 + 1/n)^2 - 1)/2"),
        _row("ratio_sq", mid / w2 ** 2, (2 * n + 1) / 2.0, 1e-6,
             "(2n + 1)/2"),
    ]


def _paper_dilation(lam: float, tol: float) -> list:
    mu, nu = symmetric_dilation_pair(lam)
    w2, _ = solve_w2(mu, nu)
    try:
        cert = certify_z2(mu, nu, tol)
    except NotCertified as exc:
        cert = exc.result
    mid = 0.5 * (cert.lower + cert.upper)
    rhs = 0.5 * (stats(mu).std_dev + stats(nu).std_dev) * w2
    return [
        _row("w2", w2, lam - 1.0, 1e-8, "lambda - 1"),
        _row("z2", mid, 0.5 * (lam ** 2 - 1.0), 1e-8, "(lambda^2 - 1)/2"),
        _row("upper_saturation", mid, rhs, 1e-6,
             "(sigma_mu + sigma_nu) w2 / 2"),
    ]


def _paper_rows_to_csv(rows: list) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(PAPER_COLUMNS)
    for row in rows:
        writer.writerow([
            row["quantity"], repr(row["computed"]), repr(row["target"]),
            repr(row["diff"]), repr(row["tol"]),
            "true" if row["pass"] else "false", row["formula"]])
    return buf.getvalue()


def cmd_paper(cfg: RunConfig, example: str, params: dict) -> int:
    if example == "opt14":
        a, b = params["a"], params["b"]
        if not 0 < a < b:
            raise ParseError("opt14 requires 0 < a < b")
        rows = _paper_opt14(a, b, cfg.tol)
    elif example == "gauss":
        s1, s2, n = params["sigma1"], params["sigma2"], params["n"]
        if not (0 < s1 <= s2) or n < 2:
            raise ParseError("gauss requires 0 < sigma1 <= sigma2 and n >= 2")
        rows = _paper_gauss(s1, s2, n)
    elif example == "noreverse":
        n = params["n"]
        if n < 1:
            raise ParseError("noreverse requires n >= 1")
        rows = _paper_noreverse(n, cfg.tol)
    else:
        lam = params["lam"]
        if lam < 1:
            raise ParseError("dilation requires lambda >= 1")
        rows = _paper_dilation(lam, cfg.tol)
    if cfg.fmt == "csv":
        _emit(_paper_rows_to_csv(rows), cfg.out)
    else:
        _emit_json(rows, cfg.out)
    return EXIT_OK if all(r["pass"] for r in rows) else 1


def cmd_scan(cfg: RunConfig, family: FamilySpec, n: int) -> int:
    rows = scan_ratio(family, n, cfg.seed)
    _emit(scan_rows_to_csv(rows), cfg.out)
    return EXIT_OK


def _add_common(sub, io_pair=True):
    if io_pair:
        sub.add_argument("--mu", required=True, help="measure JSON file")
        sub.add_argument("--nu", required=True, help="measure JSON file")
    sub.add_argument("--tol", type=float, default=1e-8)
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--out", default=None, help="write output here")
    sub.add_argument("--format", dest="fmt", choices=["json", "csv"],
                     default="json")
    sub.add_argument("--threads", type=int, default=1,
                     help="only 1 is bit-stable; compute is sequential")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zoloto",
        description="Certified Zolotarev-2 and Wasserstein-2 distances "
                    "between discrete measures")
    subs = parser.add_subparsers(dest="command", required=True)

    for name in ("w2", "z2", "certify", "bounds"):
        sub = subs.add_parser(name)
        _add_common(sub)
        if name in ("w2", "certify"):
            sub.add_argument("--plan", default=None,
                             help="write the optimal plan JSON here")

    paper = subs.add_parser("paper")
    paper_subs = paper.add_subparsers(dest="example", required=True)
    opt14 = paper_subs.add_parser("opt14")
    opt14.add_argument("--a", type=float, default=1.0)
    opt14.add_argument("--b", type=float, default=2.0)
    _add_common(opt14, io_pair=False)
    gauss = paper_subs.add_parser("gauss")
    gauss.add_argument("--sigma1", type=float, default=1.0)
    gauss.add_argument("--sigma2", type=float, default=2.0)
    gauss.add_argument("--n", type=int, default=200)
    _add_common(gauss, io_pair=False)
    noreverse = paper_subs.add_parser("noreverse")
    noreverse.add_argument("--n", type=int, default=10)
    _add_common(noreverse, io_pair=False)
    dilation = paper_subs.add_parser("dilation")
    dilation.add_argument("--lam", "--lambda", dest="lam", type=float,
                          default=2.0)
    _add_common(dilation, io_pair=False)

    scan = subs.add_parser("scan")
    scan.add_argument("--family", required=True,
                      choices=["two_atom", "gaussian_1d", "dilation",
                               "random"])
    scan.add_argument("--n", type=int, default=20, help="number of rows")
    scan.add_argument("--a", type=float, default=1.0)
    scan.add_argument("--b-from", type=float, default=1.001)
    scan.add_argument("--b-to", type=float, default=2.0)
    scan.add_argument("--sigma1", type=float, default=1.0)
    scan.add_argument("--sigma-from", type=float, default=1.1)
    scan.add_argument("--sigma-to", type=float, default=3.0)
    scan.add_argument("--lambda-from", dest="lam_from", type=float,
                      default=1.1)
    scan.add_argument("--lambda-to", dest="lam_to", type=float, default=3.0)
    scan.add_argument("--dim", type=int, default=2)
    scan.add_argument("--atoms", type=int, default=5)
    _add_common(scan, io_pair=False)
    return parser


def _family_from_args(args) -> FamilySpec:
    if args.family == "two_atom":
        params = {"a": args.a, "b_from": args.b_from, "b_to": args.b_to}
    elif args.family == "gaussian_1d":
        params = {"sigma1": args.sigma1, "sigma_from": args.sigma_from,
                  "sigma_to": args.sigma_to, "n_atoms": args.atoms}
    elif args.family == "dilation":
        params = {"lam_from": args.lam_from, "lam_to": args.lam_to}
    else:
        params = {"dim": args.dim, "atoms": args.atoms}
    return FamilySpec(args.family, params)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        _setup_logging()
        cfg = RunConfig(command=args.command,
                        mu_path=getattr(args, "mu", None),
                        nu_path=getattr(args, "nu", None),
                        tol=args.tol, seed=args.seed, out=args.out,
                        fmt=args.fmt, plan=getattr(args, "plan", None),
                        threads=args.threads)
        if args.command == "w2":
            return cmd_w2(cfg)
        if args.command == "z2":
            return cmd_z2(cfg)
        if args.command == "certify":
            return cmd_certify(cfg)
        if args.command == "bounds":
            return cmd_bounds(cfg)
        if args.command == "paper":
            params = {k: getattr(args, k) for k in
                      ("a", "b", "sigma1", "sigma2", "n", "lam")
                      if hasattr(args, k)}
            return cmd_paper(cfg, args.example, params)
        return cmd_scan(cfg, _family_from_args(args), args.n)
    except (ParseError, NotInConvexOrder, ValueError,
            json.JSONDecodeError, OSError) as exc:
        log.error("%s", exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DimensionMismatch as exc:
        log.error("%s", exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIMENSION
    except ZolotoError as exc:
        log.error("%s", exc)
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()

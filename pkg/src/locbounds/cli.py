"""Command-line driver: exponent tables, bound curves, correlation and FSE bounds, verification.

Every subcommand reads optional JSON from --config, writes CSV or JSON into
--out, and produces byte-identical output for identical inputs.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .correlation import correlation_bound
from .errors import DomainError, LocBoundsError
from .fse import alpha3, alpha3_detail, fse_bound_1d, fse_bound_sphere, mu3_exponential
from .holo import (GapModel, alpha1_conformal, alpha1_large_alpha, alpha1_nonconformal,
                   curve_point, mu1_exponential, prior_exponents,
                   qac_comparison_exponent)
from .kernels import CLOSED_FORM, NUMERIC, AlgebraicLightcone, HastingsKoma, OmegaBarEnvelope, kernel_from_dict
from .verify import DEFAULT_LAMBDA_GRID, run_campaign

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _threads() -> int:
    raw = os.environ.get("LOCBOUNDS_THREADS")
    if raw is None:
        return 1
    try:
        n = int(raw)
    except ValueError as exc:
        raise UsageError(f"LOCBOUNDS_THREADS must be an integer, got {raw!r}") from exc
    return max(n, 1)


def _pmap(fn, items):
    """Ordered map over grid points, parallel up to LOCBOUNDS_THREADS."""
    items = list(items)
    n = min(_threads(), len(items)) or 1
    if n == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as ex:
        return list(ex.map(fn, items))


def _fmt(x):
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def _write_csv(path: Path, header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(row.get(h)) for h in header])
    path.write_text(buf.getvalue(), encoding="utf-8")


def _write_json(path: Path, obj):
    path.write_text(json.dumps(obj, indent=2, sort_keys=True, default=_json_default) + "\n",
                    encoding="utf-8")


def _json_default(o):
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, np.generic):
        return o.item()
    raise TypeError(f"not serializable: {type(o)}")


def _grid(cfg, key, default):
    val = cfg.get(key, default)
    vals = [val] if np.isscalar(val) else list(val)
    if not vals:
        raise UsageError(f"grid {key!r} is empty")
    return vals


# exponents -------------------------------------------------------------------

POWER_COLUMNS = ["alpha", "D", "Delta", "v", "alpha1_conf", "alpha1_nonconf", "prior", "qac",
                 "alpha2", "alpha3", "alpha3_branch", "alpha3_other_branch", "two_body",
                 "two_body_alpha1", "two_body_alpha2_prior", "two_body_alpha3"]
EXP_COLUMNS = ["mu", "Delta", "v", "mu1", "mu2", "mu3", "prior_mu1", "prior_mu2"]


def exponent_row(alpha, D, Delta, v) -> dict:
    if not alpha > D:
        raise UsageError(f"alpha must exceed D (got alpha={alpha}, D={D})")
    gap = GapModel(Delta, v)
    conf = alpha1_conformal(alpha, gap).exponent
    det = alpha3_detail(alpha, conf, D)
    other = [val for key, val in det.both_branches.items() if key != det.branch]
    qac = qac_comparison_exponent(alpha, D)
    two = alpha > 2 * D
    row = {
        "alpha": alpha, "D": D, "Delta": Delta, "v": v,
        "alpha1_conf": conf,
        "alpha1_nonconf": alpha1_nonconformal(alpha, gap).exponent,
        "prior": prior_exponents("power", gap, alpha=alpha).exponent,
        "qac": qac.exponent if qac else None,
        "alpha2": conf,
        "alpha3": det.value, "alpha3_branch": det.branch,
        "alpha3_other_branch": other[0] if other else None,
        "two_body": two,
    }
    if two:
        row["two_body_alpha1"] = alpha1_large_alpha(alpha, D, gap).exponent
        row["two_body_alpha2_prior"] = float(alpha)
        row["two_body_alpha3"] = alpha3(alpha, row["two_body_alpha1"], D, two_body=True)
    return row


def exponential_row(mu, Delta, v) -> dict:
    gap = GapModel(Delta, v)
    m1 = mu1_exponential(mu, gap).exponent
    prior = prior_exponents("exponential", gap, mu=mu).exponent
    return {"mu": mu, "Delta": Delta, "v": v, "mu1": m1, "mu2": m1, "mu3": mu3_exponential(m1),
            "prior_mu1": prior, "prior_mu2": prior}


def cmd_exponents(cfg: dict, out: Path) -> int:
    alphas = _grid(cfg, "alpha", [1.5, 2.0, 2.5, 3.0, 4.0, 5.0])
    Ds = _grid(cfg, "D", [1])
    ratios = _grid(cfg, "Delta_over_v", [0.1, 1.0, 10.0])
    mus = _grid(cfg, "mu", [0.5, 1.0, 2.0])
    v = float(cfg.get("v", 1.0))
    for a in alphas:
        for D in Ds:
            if not a > D:
                raise UsageError(f"alpha must exceed D (got alpha={a}, D={D})")
    pts = [(float(a), int(D), float(q) * v, v) for a in alphas for D in Ds for q in ratios]
    rows = _pmap(lambda p: exponent_row(*p), pts)
    _write_csv(out / "exponents.csv", POWER_COLUMNS, rows)
    erows = _pmap(lambda p: exponential_row(*p),
                  [(float(m), float(q) * v, v) for m in mus for q in ratios])
    _write_csv(out / "exponents_exponential.csv", EXP_COLUMNS, erows)
    return EXIT_OK


# curves ----------------------------------------------------------------------

def _kernel(cfg):
    if "kernel" in cfg:
        return kernel_from_dict(cfg["kernel"])
    return HastingsKoma(C=1.0, v=float(cfg.get("v", 1.0)), alpha=float(cfg.get("alpha", 3.0)),
                        D=int(cfg.get("D", 1)))


def _r_grid(cfg):
    if "r" in cfg:
        r = _grid(cfg, "r", None)
    else:
        n = int(cfg.get("n_r", 13))
        if n < 1:
            raise UsageError("n_r must be positive")
        r = np.geomspace(float(cfg.get("r_min", 1.0)), float(cfg.get("r_max", 1e6)), n).tolist()
    return [float(x) for x in r]


def _mode(cfg):
    mode = cfg.get("mode", NUMERIC)
    if mode not in (NUMERIC, CLOSED_FORM):
        raise UsageError(f"unknown envelope mode {mode!r}")
    return mode


CURVE_COLUMNS = ["r", "method", "log_bound", "bound", "map", "strip_log_bound", "rho_star",
                 "rho_init", "log_bound_init"]


def cmd_curve(cfg: dict, out: Path, tolerance: float) -> int:
    kern = _kernel(cfg)
    gap = GapModel(float(cfg.get("Delta", 1.0)), float(cfg.get("v", getattr(kern, "v", 1.0))))
    methods = _grid(cfg, "methods", ["nonconformal", "conformal"] +
                    (["large-alpha"] if isinstance(kern, AlgebraicLightcone) else []))
    mode = _mode(cfg)
    pts = [(r, m) for r in _r_grid(cfg) for m in methods]

    def one(p):
        r, m = p
        row = curve_point(OmegaBarEnvelope(kern, r, mode, rtol=tolerance), gap, m)
        row["method"] = m
        row["bound"] = math.exp(row["log_bound"])
        return row

    _write_csv(out / "curve.csv", CURVE_COLUMNS, _pmap(one, pts))
    return EXIT_OK


CORR_COLUMNS = ["r", "y0", "bound", "bound_at_zero", "y0_fallback", "alpha2",
                "measured_correlation"]


def cmd_correlation(cfg: dict, out: Path, tolerance: float) -> int:
    cfg = dict(cfg)
    if "kernel" not in cfg:
        cfg["kernel"] = {"variant": "HastingsKoma", "C": 1.0, "v": float(cfg.get("v", 1.0)),
                         "alpha": float(cfg.get("alpha", 3.0)), "D": int(cfg.get("D", 1)),
                         "smooth": True}
    kern = _kernel(cfg)
    gap = GapModel(float(cfg.get("Delta", 1.0)), float(cfg.get("v", getattr(kern, "v", 1.0))))
    mode = _mode(cfg)
    alpha = getattr(kern, "alpha", None)
    exp = alpha1_conformal(alpha, gap) if alpha is not None else None
    measured = cfg.get("measured", {})

    def one(r):
        env = OmegaBarEnvelope(kern, r, mode, rtol=tolerance)
        B = math.exp(curve_point(env, gap, "conformal")["log_bound"])
        cb = correlation_bound(env, gap, B, exponent=exp)
        return {"r": r, "y0": cb.y0, "bound": cb.value, "bound_at_zero": B,
                "y0_fallback": cb.y0_fallback, "alpha2": exp.exponent if exp else None,
                "measured_correlation": measured.get(_fmt(r))}

    _write_csv(out / "correlation.csv", CORR_COLUMNS, _pmap(one, _r_grid(cfg)))
    return EXIT_OK


# FSE -------------------------------------------------------------------------

FSE_COLUMNS = ["L_or_R", "geometry", "exact", "asymptotic_class_value", "ratio", "class",
               "degree_bump", "alpha3"]


def cmd_fse(cfg: dict, out: Path) -> int:
    alpha = float(cfg.get("alpha", 3.0))
    D = int(cfg.get("D", 1))
    if not alpha > D:
        raise UsageError(f"alpha must exceed D (got alpha={alpha}, D={D})")
    if "alpha1" in cfg:
        a1 = float(cfg["alpha1"])
    else:
        a1 = alpha1_conformal(alpha, GapModel(float(cfg.get("Delta", 1.0)),
                                              float(cfg.get("v", 1.0)))).exponent
    poly = tuple(float(c) for c in cfg.get("poly", [1.0]))
    geometry = cfg.get("geometry", "chain" if D == 1 else "sphere")
    a3 = alpha3(alpha, a1, D, two_body=bool(cfg.get("two_body", False)))
    if geometry == "chain":
        if D != 1:
            raise UsageError("the chain geometry needs D = 1")
        sizes = [int(x) for x in _grid(cfg, "L", [2 ** k for k in range(2, 17)])]
        fn = lambda L: fse_bound_1d(L, alpha, a1, poly)  # noqa: E731
    elif geometry == "sphere":
        sizes = [int(x) for x in _grid(cfg, "R", [2 ** k for k in range(1, 17)])]
        fn = lambda R: fse_bound_sphere(R, alpha, a1, D, poly)  # noqa: E731
    else:
        raise UsageError(f"unknown geometry {geometry!r}")

    def one(n):
        val = fn(n)
        return {"L_or_R": n, "geometry": geometry, "exact": val.exact,
                "asymptotic_class_value": val.asymptotic, "ratio": val.ratio,
                "class": val.klass.label, "degree_bump": val.klass.degree_bump, "alpha3": a3}

    _write_csv(out / "fse.csv", FSE_COLUMNS, _pmap(one, sizes))
    return EXIT_OK


# verify ----------------------------------------------------------------------

def cmd_verify(cfg: dict, out: Path, seed: int, max_sites: int) -> int:
    grid = cfg.get("lambda_grid", list(DEFAULT_LAMBDA_GRID))
    if not grid:
        raise UsageError("lambda_grid is empty")
    sites = cfg.get("sites", 8)
    if not np.isscalar(sites) and not list(sites):
        raise UsageError("sites grid is empty")
    rep = run_campaign(seed=seed, count=int(cfg.get("count", 20)), n_sites=sites,
                       lambda_grid=grid, tolerances=cfg.get("tolerances"),
                       custom=cfg.get("instances", ()), max_sites=max_sites,
                       include_static=bool(cfg.get("include_static", True)))
    _write_json(out / "verify.json", rep)
    s = rep["summary"]
    print(f"checks: {s['total']}  passed: {s['passed']}  failed: {s['failed']}  "
          f"assumption violated: {s['assumption_violated']}")
    return EXIT_FAIL if s["failed"] else EXIT_OK


# entry point -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="locbounds", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name, helptext in [("exponents", "closed-form exponent tables"),
                           ("curve", "bound on |Omega(0)| against distance"),
                           ("correlation", "correlation-decay bound against distance"),
                           ("fse", "finite-size-error sums and their classes"),
                           ("verify", "exact-diagonalization identity and inequality suite")]:
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("--config", type=Path, help="JSON file with parameter grids")
        sp.add_argument("--out", type=Path, default=Path("."), help="output directory")
        sp.add_argument("--seed", type=int, default=0, help="seed for randomized instances")
        sp.add_argument("--tolerance", type=float, default=1e-10,
                        help="relative tolerance of the envelope quadrature")
        sp.add_argument("--max-sites", type=int, default=14, help="cap on lattice sites")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not args.tolerance > 0:
        parser.error("--tolerance must be positive")
    if args.seed < 0 or args.seed >= 2 ** 64:
        parser.error("--seed must be an unsigned 64-bit integer")
    cfg = {}
    if args.config is not None:
        try:
            cfg = json.loads(args.config.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            parser.error(f"cannot read config: {exc}")
    seed = int(cfg.get("seed", args.seed)) if args.seed == 0 else args.seed
    args.out.mkdir(parents=True, exist_ok=True)
    try:
        if args.command == "exponents":
            return cmd_exponents(cfg, args.out)
        if args.command == "curve":
            return cmd_curve(cfg, args.out, args.tolerance)
        if args.command == "correlation":
            return cmd_correlation(cfg, args.out, args.tolerance)
        if args.command == "fse":
            return cmd_fse(cfg, args.out)
        return cmd_verify(cfg, args.out, seed, args.max_sites)
    except UsageError as exc:
        parser.error(str(exc))
    except DomainError as exc:
        parser.error(str(exc))
    except LocBoundsError as exc:
        print(f"locbounds: {exc}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

"""Command-line runner: ``unitrace <command> [--config FILE] [overrides]``.

Every command writes ``<output>/<command>.json`` (summary) and
``<output>/<command>.csv`` (table).  Both carry the tool version and the
config hash; rationals are written as "p/q", floats with ``repr`` so equal
configs give byte-identical files.

CSV columns per command (plus ``version`` and ``config_hash``):

    wg          N, m, lambda, M_character, M_recursive, agree
    moments     N, order, mu, gaussian, route
    cumulants   N, order, kappa, closed_form
    charfun     N, xi, psi_N, psi, ratio, error_bound, route
    bebound     N, xi, ratio
    upperbound  N, S_N, T_N, C_hat, term1, term2, term3, term4, total, degraded
    rate        N, M, estimate, stderr, usable
    tv          N, tv, error, method
    smooth      eps_xi, numeric, asymptotic, rel_error, cos_phase
    selftest    check, passed, detail
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import sys
import tempfile
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .characters import CacheChecksumError, character_table, default_cache_dir
from .charfun import (
    CharFunDomainError,
    be_ratio,
    evaluate_grid,
    kolmogorov_upper_bound,
    psi_bessel,
    psi_series,
)
from .config import COMMANDS, TV_METHODS, ConfigError, ExperimentConfig
from .cumulants import (
    check_substitution,
    cumulant_table,
    k_coefficients,
    kappa_2m_partition_form,
    kappa_closed_form,
)
from .moments import make_spectrum, moment, normal_moment
from .montecarlo import kolmogorov_distance, rate_fit, sample_trace_stat, tv_estimate
from .partitions import enumerate_partitions
from .smoothing import asymptotic_phase, asymptotic_table, bump_norm_constant, smoothing_floor, smoothing_floor_minimizer
from .symfun import f_lambda_product, f_lambda_sum
from .weingarten import weingarten_recursive_table, weingarten_table

log = logging.getLogger("unitrace")


def _fmt(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (float, np.floating)):
        return float(v)
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, dict):
        return {str(k): _fmt(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_fmt(x) for x in v]
    return v


def _csv_cell(v):
    v = _fmt(v)
    if isinstance(v, float):
        return repr(v)
    if v is None:
        return ""
    return v


def write_report(cfg: ExperimentConfig, summary: dict, rows: list[dict]) -> tuple[Path, Path]:
    out = Path(cfg.output)
    out.mkdir(parents=True, exist_ok=True)
    digest = cfg.digest()
    doc = {
        "tool": "unitrace",
        "version": __version__,
        "schema": 1,
        "command": cfg.command,
        "config_hash": digest,
        "config": cfg.to_dict(),
        "summary": _fmt(summary),
    }
    jpath = out / f"{cfg.command}.json"
    jpath.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    cpath = out / f"{cfg.command}.csv"
    with open(cpath, "w", newline="") as fh:
        if rows:
            w = csv.DictWriter(fh, fieldnames=[*rows[0], "version", "config_hash"], lineterminator="\n")
            w.writeheader()
            for row in rows:
                w.writerow({**{k: _csv_cell(v) for k, v in row.items()}, "version": __version__, "config_hash": digest})
    return jpath, cpath


def _specs(cfg):
    return [make_spectrum(cfg.family, n) for n in cfg.n]


def cmd_wg(cfg):
    rows = []
    agree_all = True
    for n in cfg.n:
        for m in range(1, cfg.m_max + 1):
            character_table(m, cfg.cache_dir or default_cache_dir())
            char = weingarten_table(m, n)
            rec = weingarten_recursive_table(m, n)
            for lam in enumerate_partitions(m):
                ok = char[lam] == rec[lam]
                agree_all &= ok
                rows.append({"N": n, "m": m, "lambda": str(lam), "M_character": char[lam], "M_recursive": rec[lam], "agree": ok})
    return {"routes_agree": agree_all}, rows


def cmd_moments(cfg):
    rows = []
    for spec in _specs(cfg):
        for m in range(1, cfg.m_max + 1):
            route = "samuel" if m <= spec.n else "schur"
            rows.append({"N": spec.n, "order": 2 * m, "mu": moment(spec, 2 * m, route), "gaussian": normal_moment(2 * m), "route": route})
    return {"family": cfg.family}, rows


def cmd_cumulants(cfg):
    rows = []
    for spec in _specs(cfg):
        route = "samuel" if cfg.m_max <= spec.n else "schur"
        table = cumulant_table(spec, cfg.m_max, route)
        for m in range(1, cfg.m_max + 1):
            closed = None
            if 2 * m in (2, 4, 6):
                try:
                    closed = kappa_closed_form(spec, 2 * m)
                except ValueError:
                    closed = None
            rows.append({"N": spec.n, "order": 2 * m, "kappa": table.even[m], "closed_form": closed})
    return {"family": cfg.family}, rows


def cmd_charfun(cfg):
    rows = []
    for spec in _specs(cfg):
        ev = evaluate_grid(spec, cfg.xi, delta=cfg.delta)
        rows += [{"N": spec.n, **r} for r in ev.rows()]
    return {"family": cfg.family}, rows


def cmd_bebound(cfg):
    rows, sups = [], {}
    for spec in _specs(cfg):
        best = 0.0
        for xi in cfg.xi:
            try:
                r = be_ratio(spec, xi, cfg.delta)
            except CharFunDomainError:
                continue
            best = max(best, r)
            rows.append({"N": spec.n, "xi": xi, "ratio": r})
        sups[spec.n] = best
    base = sups[cfg.n[0]]
    return {"sup_ratio": sups, "relative_to_first": {n: (v / base if base else math.nan) for n, v in sups.items()}}, rows


def cmd_upperbound(cfg):
    rows = []
    for spec in _specs(cfg):
        ub = kolmogorov_upper_bound(spec, cfg.delta, cfg.gamma)
        rows.append(
            {"N": spec.n, "S_N": ub.s_n, "T_N": ub.t_n, "C_hat": ub.c_hat, "term1": ub.terms[0], "term2": ub.terms[1],
             "term3": ub.terms[2], "term4": ub.terms[3], "total": ub.total, "degraded": ub.degraded}
        )
    return {"totals": {r["N"]: r["total"] for r in rows}}, rows


def cmd_rate(cfg):
    rows, points = [], []
    for spec in _specs(cfg):
        batch = sample_trace_stat(spec, cfg.samples, cfg.seed, workers=cfg.workers)
        d = kolmogorov_distance(batch)
        points.append((spec.n, d.estimate, d.stderr))
        rows.append({"N": spec.n, "M": cfg.samples, "estimate": d.estimate, "stderr": d.stderr})
    b = float(_specs(cfg)[0].b)
    try:
        report = rate_fit(points, b)
        summary = report.as_dict()
        for row, u in zip(rows, report.usable):
            row["usable"] = u
    except ValueError as exc:
        summary = {"slope": None, "error": str(exc)}
        for row in rows:
            row["usable"] = row["estimate"] > row["stderr"]
    return summary, rows


def cmd_tv(cfg):
    rows = []
    for spec in _specs(cfg):
        est = tv_estimate(spec, cfg.tv_method, m=cfg.samples, seed=cfg.seed)
        rows.append({"N": spec.n, "tv": est.value, "error": est.error, "method": est.method})
    vals = [r["tv"] for r in rows]
    return {"monotone_decreasing": all(a > b for a, b in zip(vals, vals[1:]))}, rows


def cmd_smooth(cfg):
    rows = []
    for row in asymptotic_table(cfg.eps_xi, cfg.eps):
        rows.append({**row, "cos_phase": math.cos(asymptotic_phase(row["eps_xi"]))})
    r_star, h_star = smoothing_floor_minimizer()
    return {"g": bump_norm_constant(), "h_2_3": smoothing_floor(2 / 3), "h_min_r": r_star, "h_min": h_star}, rows


def _check(name, fn):
    try:
        ok, detail = fn()
    except Exception as exc:  # failures are data here
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return {"check": name, "passed": bool(ok), "detail": detail}


def _tamper_check():
    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "chartable-m4.txt"
        good = character_table(4, path)
        lines = path.read_text().splitlines()
        lines[1] = lines[1][:-1] + ("7" if lines[1][-1] != "7" else "5")
        path.write_text("\n".join(lines) + "\n")
        try:
            character_table(4, path, recompute_on_corrupt=False)
            return False, "tampered cache was accepted"
        except CacheChecksumError:
            pass
        logging.getLogger("unitrace.characters").disabled = True
        try:
            again = character_table(4, path)
        finally:
            logging.getLogger("unitrace.characters").disabled = False
        reloaded = character_table(4, path, recompute_on_corrupt=False)
        ok = again.values == good.values == reloaded.values
        return ok, "checksum failure raised; recomputed table rewritten"


def _orthogonality():
    from .partitions import class_size

    for m in range(1, 8):
        t = character_table(m)
        parts = t.partitions
        fact = math.factorial(m)
        for i in range(len(parts)):
            for j in range(len(parts)):
                s = sum(class_size(lam) * t.values[i][k] * t.values[j][k] for k, lam in enumerate(parts))
                if s != (fact if i == j else 0):
                    return False, f"m={m}"
    return True, "row orthogonality for m <= 7"


def _wg_routes():
    for m in range(1, 5):
        for n in range(m, m + 3):
            if weingarten_table(m, n) != weingarten_recursive_table(m, n):
                return False, f"m={m} N={n}"
    return True, "character = recursion for m <= 4"


def _f_forms():
    for m in range(1, 6):
        for lam in enumerate_partitions(m):
            for n in range(-3, 8):
                if f_lambda_sum(lam, n) != f_lambda_product(lam, n):
                    return False, f"{lam} N={n}"
    return True, "sum form = product form, m <= 5"


def _identity_moments():
    spec = make_spectrum("identity", 6)
    ok = all(moment(spec, 2 * m) == normal_moment(2 * m) for m in range(1, 7))
    return ok, "mu_2m(I_6) = (2m-1)!!"


def _cumulant_routes():
    for fam in ("identity", "spike", "random"):
        spec = make_spectrum(fam, 4)
        t = cumulant_table(spec, 3)
        for m in (2, 3):
            if not t.even[m] == kappa_2m_partition_form(spec, m) == kappa_closed_form(spec, 2 * m):
                return False, f"{fam} order {2 * m}"
    return check_substitution(k_coefficients(4, 4)), "three cumulant routes agree at N=4"


def _psi_routes():
    spec = make_spectrum("ramp", 4)
    d = max(abs(psi_bessel(spec, x).value - psi_series(spec, x, 20).value) for x in (0.5, 1.0, 2.0))
    return d <= 1e-8, f"max |bessel - series| = {d!r}"


def _smoothing_constants():
    g, h = bump_norm_constant(), smoothing_floor(2 / 3)
    return abs(g - 0.44399) <= 5e-6 and abs(h - 0.77646) <= 5e-5, f"g={g!r} h(2/3)={h!r}"


def _mc_determinism(cfg):
    spec = make_spectrum("ramp", 4)
    a = sample_trace_stat(spec, 4000, cfg.seed, chunk=1000, workers=1)
    b = sample_trace_stat(spec, 4000, cfg.seed, chunk=1000, workers=max(2, cfg.workers))
    var = float(np.mean(a.x**2))
    return np.array_equal(a.x, b.x) and abs(var - 1) < 0.1, f"identical across pools; E X^2 = {var!r}"


def cmd_selftest(cfg):
    checks = [
        ("character_orthogonality", _orthogonality),
        ("weingarten_routes", _wg_routes),
        ("f_lambda_forms", _f_forms),
        ("identity_gaussian_moments", _identity_moments),
        ("cumulant_routes", _cumulant_routes),
        ("psi_routes", _psi_routes),
        ("smoothing_constants", _smoothing_constants),
        ("character_cache_tamper", _tamper_check),
        ("mc_determinism", lambda: _mc_determinism(cfg)),
    ]
    rows = [_check(name, fn) for name, fn in checks]
    return {"passed": sum(r["passed"] for r in rows), "failed": sum(not r["passed"] for r in rows)}, rows


HANDLERS = {
    "wg": cmd_wg,
    "moments": cmd_moments,
    "cumulants": cmd_cumulants,
    "charfun": cmd_charfun,
    "bebound": cmd_bebound,
    "upperbound": cmd_upperbound,
    "rate": cmd_rate,
    "tv": cmd_tv,
    "smooth": cmd_smooth,
    "selftest": cmd_selftest,
}


def run(cfg: ExperimentConfig) -> tuple[dict, list[dict]]:
    """Execute one configured command and write its reports."""
    summary, rows = HANDLERS[cfg.command](cfg)
    write_report(cfg, summary, rows)
    return summary, rows


def _family_arg(text: str):
    if text.lstrip().startswith("{"):
        return json.loads(text)
    if ":" in text:
        kind, vals = text.split(":", 1)
        return {"kind": kind, "values": [v.strip() for v in vals.split(",")]}
    return text


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="unitrace", description="Exact and numerical study of Re tr(A U) under Haar measure.")
    p.add_argument("--version", action="version", version=f"unitrace {__version__}")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", help="JSON config file; flags override its keys")
    p.add_argument("--family", type=_family_arg, help='family name, "explicit:1,2,3" or a JSON descriptor')
    p.add_argument("--n", type=int, nargs="+")
    p.add_argument("--m-max", type=int, dest="m_max")
    p.add_argument("--xi", type=float, nargs="+")
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--delta", type=float)
    p.add_argument("--gamma", type=float)
    p.add_argument("--eps", type=float)
    p.add_argument("--eps-xi", type=float, nargs="+", dest="eps_xi")
    p.add_argument("--tv-method", choices=TV_METHODS, dest="tv_method")
    p.add_argument("--rel-tol", type=float, dest="rel_tol")
    p.add_argument("--workers", type=int)
    p.add_argument("--output")
    p.add_argument("--cache-dir", dest="cache_dir")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def config_from_args(args) -> ExperimentConfig:
    data = {}
    if args.config:
        try:
            data = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError({"--config": str(exc)}) from None
        if not isinstance(data, dict):
            raise ConfigError({"--config": "top level must be an object"})
    data["command"] = args.command
    for key in ("family", "n", "m_max", "xi", "samples", "seed", "delta", "gamma", "eps", "eps_xi",
                "tv_method", "rel_tol", "workers", "output", "cache_dir"):
        val = getattr(args, key)
        if val is not None:
            data[key] = val
    return ExperimentConfig.from_dict(data)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = config_from_args(args)
    except ConfigError as exc:
        for k, v in exc.errors.items():
            print(f"config error: {k}: {v}", file=sys.stderr)
        return 2
    summary, rows = run(cfg)
    print(json.dumps(_fmt(summary), sort_keys=True))
    if cfg.command == "selftest":
        for r in rows:
            print(f"{'PASS' if r['passed'] else 'FAIL'} {r['check']}: {r['detail']}")
        return 0 if summary["failed"] == 0 else 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Each subcommand reads one JSON config (``--config``), applies flag overrides
and prints a JSON report. Exit codes: 0 ok, 2 bad config, 3 domain error,
4 failed soundness check.
"""
from __future__ import annotations

import argparse
import copy
import csv
import io
import json
import math
import sys
from typing import Any, Dict, List, Optional

from . import __version__
from . import baxendale as bx
from .bounds import DEFAULT_A, MseInputs, mse_bound, schedule_ma, schedule_one_walk
from .drift import (
    Deterministic,
    DriftParams,
    FunctionNorms,
    GeneralInit,
    NuConcentratedOnC,
    NuUnknown,
    NuVIntegralBound,
    Stationary,
    combine_norms,
    lemma_norms,
    transform_r,
    validate,
)
from .errors import ConvergenceError, DomainError
from .models import CN_CERTIFIED_CLASS, cn_drift_params, cn_norms, contracting_normals
from .optimizer import Objective, optimize_a, optimize_gammas, optimize_small_set
from .simulate import coverage_experiment, empirical_mse

EXIT_OK, EXIT_CONFIG, EXIT_DOMAIN, EXIT_INVARIANT = 0, 2, 3, 4

CSV_COLUMNS = ["alpha", "algorithm", "m", "t", "n", "total_cost"]

TABLE1_DEFAULTS = {
    "model": {"name": "contracting_normals", "theta": 0.5, "d": 1.6226},
    "eps": 0.1,
    "alphas": [0.1, 1e-3, 1e-5],
    "a": DEFAULT_A,
    "gamma": "optimize",
    "gamma_r": "optimize",
}


class ConfigError(Exception):
    pass


# -- config ------------------------------------------------------------------

def _require(cfg: Dict[str, Any], key: str, where: str = "") -> Any:
    if key not in cfg or cfg[key] is None:
        raise ConfigError(f"missing required field: {where}{key}")
    return cfg[key]


def _num(value: Any, name: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"field {name} must be a number, got {value!r}")
    return float(value)


def _is_cn(cfg) -> bool:
    return isinstance(cfg.get("model"), dict) and cfg["model"].get("name") == "contracting_normals"


def drift_from_config(cfg: Dict[str, Any]) -> DriftParams:
    if _is_cn(cfg):
        m = cfg["model"]
        return cn_drift_params(_num(_require(m, "theta", "model."), "model.theta"),
                               _num(_require(m, "d", "model."), "model.d"))
    if "model" in cfg:
        raise ConfigError(f"unknown model {cfg['model']!r}; only contracting_normals is built in")
    dr = _require(cfg, "drift")
    nu_raw = dr.get("nu_on_c", "unknown")
    if nu_raw == "concentrated":
        nu = NuConcentratedOnC()
    elif nu_raw == "unknown":
        nu = NuUnknown()
    elif isinstance(nu_raw, dict) and "k_tilde" in nu_raw:
        nu = NuVIntegralBound(_num(nu_raw["k_tilde"], "drift.nu_on_c.k_tilde"))
    else:
        raise ConfigError(f"drift.nu_on_c must be 'concentrated', 'unknown' or {{'k_tilde': x}}, got {nu_raw!r}")
    params = DriftParams(
        beta_tilde=_num(_require(dr, "beta_tilde", "drift."), "drift.beta_tilde"),
        lam=_num(_require(dr, "lambda", "drift."), "drift.lambda"),
        k_const=_num(_require(dr, "K", "drift."), "drift.K"),
        beta=_num(_require(dr, "beta", "drift."), "drift.beta"),
        nu_on_c=nu,
    )
    validate(params)
    return params


def class_from_config(cfg) -> bx.ChainClass:
    raw = cfg.get("chain_class")
    if raw is None:
        if _is_cn(cfg):
            return CN_CERTIFIED_CLASS
        raise ConfigError("missing required field: chain_class")
    try:
        return bx.ChainClass(raw)
    except ValueError:
        choices = ", ".join(c.value for c in bx.ChainClass)
        raise ConfigError(f"chain_class must be one of {choices}, got {raw!r}") from None


def norms_from_config(cfg, params: DriftParams) -> FunctionNorms:
    if _is_cn(cfg) and "norms" not in cfg:
        m = cfg["model"]
        return cn_norms(m["theta"], m["d"], int(cfg.get("setting", 2)))
    nm = _require(cfg, "norms")
    p = _num(nm.get("p", 2.0), "norms.p")
    b_v = _num(nm.get("b_v", 1.0), "norms.b_v")
    pi_c = _num(nm.get("pi_c", 1.0), "norms.pi_c")
    f_p = _num(_require(nm, "f_p_norm", "norms."), "norms.f_p_norm")
    lem = lemma_norms(f_p, params, p, b_v, pi_c)
    user = FunctionNorms(
        f_p_norm=f_p,
        fc_norm_2p=_num(nm.get("fc_norm", lem.fc_norm_2p), "norms.fc_norm"),
        pi_v=_num(nm.get("pi_v", lem.pi_v), "norms.pi_v"),
        p=p, b_v=b_v, pi_c=pi_c,
    )
    return combine_norms(user, params)


def start_from_config(cfg):
    st = cfg.get("start")
    if st is None:
        if _is_cn(cfg):
            x0 = float(cfg["model"].get("x0", 0.0))
            return Deterministic(1 + x0 * x0)
        raise ConfigError("missing required field: start")
    kind = _require(st, "kind", "start.")
    if kind == "stationary":
        return Stationary()
    if kind == "deterministic":
        return Deterministic(_num(_require(st, "v_at_x", "start."), "start.v_at_x"))
    if kind == "general":
        return GeneralInit(_num(_require(st, "min_bound", "start."), "start.min_bound"))
    raise ConfigError(f"start.kind must be stationary, deterministic or general, got {kind!r}")


class Problem:
    """Everything derived from a config that the bound pipelines need."""

    def __init__(self, cfg):
        self.cfg = cfg
        self.params = drift_from_config(cfg)
        self.chain_class = class_from_config(cfg)
        self.r = _num(cfg.get("r", 2.0), "r")
        self.params_r = transform_r(self.params, self.r)
        self._norms = None
        self._start = None

    @property
    def norms(self):
        if self._norms is None:
            self._norms = norms_from_config(self.cfg, self.params)
        return self._norms

    @property
    def start(self):
        if self._start is None:
            self._start = start_from_config(self.cfg)
        return self._start

    def gammas(self):
        g, gr = self.cfg.get("gamma"), self.cfg.get("gamma_r")
        if g is None:
            raise ConfigError("missing required field: gamma")
        if gr is None:
            raise ConfigError("missing required field: gamma_r")
        if g == "optimize" or gr == "optimize":
            eps = _num(_require(self.cfg, "eps"), "eps")
            alpha = _num(self.cfg.get("optimize_alpha", _alphas(self.cfg)[0]), "optimize_alpha")
            fit = optimize_gammas(self.params, self.params_r, self.chain_class, self.norms,
                                  self.r, eps, alpha, self.start)
            g = fit.gamma if g == "optimize" else g
            gr = fit.gamma_r if gr == "optimize" else gr
        return _num(g, "gamma"), _num(gr, "gamma_r")

    def certificates(self):
        g, gr = self.gammas()
        return (bx.certificate(self.params, g, self.chain_class),
                bx.certificate(self.params_r, gr, self.chain_class))


def _alphas(cfg) -> List[float]:
    raw = cfg.get("alphas")
    if raw is None:
        raw = [_require(cfg, "alpha")]
    if not isinstance(raw, list) or not raw:
        raise ConfigError("alphas must be a nonempty list")
    return [_num(a, "alphas") for a in raw]


def params_echo(p: DriftParams) -> Dict[str, Any]:
    nu = p.nu_on_c
    if isinstance(nu, NuConcentratedOnC):
        nu_out: Any = "concentrated"
    elif isinstance(nu, NuVIntegralBound):
        nu_out = {"k_tilde": nu.k_tilde}
    else:
        nu_out = "unknown"
    return {"beta_tilde": p.beta_tilde, "lambda": p.lam, "K": p.k_const, "beta": p.beta,
            "nu_on_c": nu_out}


# -- reports -----------------------------------------------------------------

def _clean(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def dump_report(report: Dict[str, Any]) -> str:
    return json.dumps(_clean(report), sort_keys=True, indent=2) + "\n"


def rows_to_csv(rows: List[Dict[str, Any]], columns: Optional[List[str]] = None) -> str:
    columns = columns or CSV_COLUMNS
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([repr(row[c]) if isinstance(row[c], float) else row[c] for c in columns])
    return buf.getvalue()


def rows_from_csv(text: str) -> List[Dict[str, Any]]:
    out = []
    for rec in csv.DictReader(io.StringIO(text)):
        row: Dict[str, Any] = {}
        for k, v in rec.items():
            if k == "algorithm":
                row[k] = v
            elif k in ("m", "t", "n", "total_cost", "setting"):
                row[k] = int(v)
            else:
                row[k] = float(v)
        out.append(row)
    return out


def _schedule_row(alpha, algorithm, sched, **extra):
    row = {"alpha": alpha, "algorithm": algorithm, "m": sched.m, "t": sched.t,
           "n": sched.n, "total_cost": sched.total_cost}
    row.update(extra)
    return row


def _base_report(cfg, command):
    return {"command": command, "version": __version__, "input": cfg}


# -- commands ----------------------------------------------------------------

def cmd_certify(cfg) -> Dict[str, Any]:
    prob = Problem(cfg)
    cv, cr = prob.certificates()
    rep = _base_report(cfg, "certify")
    rep.update({
        "chain_class": prob.chain_class.value,
        "rho": cv.rho, "gamma": cv.gamma, "M": cv.m_const,
        "rho_r": cr.rho, "gamma_r": cr.gamma, "M_r": cr.m_const,
        "r": prob.r,
        "params_echo": params_echo(prob.params),
        "params_r_echo": params_echo(prob.params_r),
    })
    return rep


def _schedule_rows(prob: Problem, cv, cr, **extra) -> List[Dict[str, Any]]:
    cfg = prob.cfg
    eps = _num(_require(cfg, "eps"), "eps")
    a = _num(cfg.get("a", DEFAULT_A), "a")
    est = cfg.get("estimator", "both")
    if est not in ("one_walk", "ma", "both"):
        raise ConfigError(f"estimator must be one_walk, ma or both, got {est!r}")
    rows = []
    for alpha in _alphas(cfg):
        if est in ("one_walk", "both"):
            s = schedule_one_walk(prob.norms, cv, cr, prob.r, eps, alpha, prob.start)
            rows.append(_schedule_row(alpha, "one_walk", s, **extra))
        if est in ("ma", "both"):
            s = schedule_ma(prob.norms, cv, cr, prob.r, eps, alpha, prob.start, a)
            rows.append(_schedule_row(alpha, "ma", s, **extra))
    return rows


def _norms_echo(n: FunctionNorms):
    return {"pi_v": n.pi_v, "fc_norm": n.fc_norm_2p, "f_p_norm": n.f_p_norm,
            "p": n.p, "b_v": n.b_v, "pi_c": n.pi_c}


def cmd_schedule(cfg) -> Dict[str, Any]:
    prob = Problem(cfg)
    cv, cr = prob.certificates()
    rep = _base_report(cfg, "schedule")
    rep.update({
        "gamma": cv.gamma, "M": cv.m_const, "gamma_r": cr.gamma, "M_r": cr.m_const,
        "norms": _norms_echo(prob.norms),
        "rows": _schedule_rows(prob, cv, cr),
    })
    return rep


def cmd_optimize(cfg) -> Dict[str, Any]:
    target = cfg.get("target", "gammas")
    rep = _base_report(cfg, "optimize")
    if target == "small_set":
        if not _is_cn(cfg):
            raise ConfigError("small_set optimisation needs model contracting_normals")
        obj = Objective(cfg.get("objective", "min_rho2"))
        fit = optimize_small_set(
            _num(cfg["model"]["theta"], "model.theta"),
            eps=_num(cfg.get("eps", 0.1), "eps"),
            alpha=_num(cfg.get("optimize_alpha", _alphas(cfg)[0] if "alphas" in cfg or "alpha" in cfg else 0.1), "alpha"),
            setting=int(cfg.get("setting", 2)),
            objective=obj,
            r=_num(cfg.get("r", 2.0), "r"),
        )
        rep.update({"d": fit.d, "objective": obj.value, "objective_value": fit.objective_value})
        if fit.schedule is not None:
            rep["schedule"] = _schedule_row(None, "one_walk", fit.schedule)
        return rep
    prob = Problem(cfg)
    eps = _num(_require(cfg, "eps"), "eps")
    alpha = _num(cfg.get("optimize_alpha", _alphas(cfg)[0]), "alpha")
    if target == "gammas":
        fit = optimize_gammas(prob.params, prob.params_r, prob.chain_class, prob.norms,
                              prob.r, eps, alpha, prob.start)
        rep.update({
            "gamma": fit.gamma, "gamma_r": fit.gamma_r,
            "M": bx.big_m(prob.params, fit.gamma, prob.chain_class),
            "M_r": bx.big_m(prob.params_r, fit.gamma_r, prob.chain_class),
            "probes": len(fit.probes),
            "schedule": _schedule_row(alpha, "one_walk", fit.schedule),
        })
        return rep
    if target == "a":
        g, gr = prob.gammas()
        fit = optimize_a(prob.params, prob.params_r, prob.chain_class, prob.norms, prob.r,
                         eps, alpha, prob.start, g, gr)
        rep.update({"a": fit.a, "gamma": g, "gamma_r": gr,
                    "schedule": _schedule_row(alpha, "ma", fit.schedule)})
        return rep
    raise ConfigError(f"target must be gammas, small_set or a, got {target!r}")


class InvariantViolation(Exception):
    def __init__(self, report):
        super().__init__("soundness check failed")
        self.report = report


def cmd_verify(cfg) -> Dict[str, Any]:
    if not _is_cn(cfg):
        raise ConfigError("verify needs model contracting_normals")
    seed = _require(cfg, "seed")
    if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
        raise ConfigError(f"seed must be a nonnegative integer, got {seed!r}")
    mcfg = cfg["model"]
    theta = _num(mcfg["theta"], "model.theta")
    model = contracting_normals(theta, _num(mcfg["d"], "model.d"),
                                x0=float(mcfg.get("x0", 0.0)),
                                exact_i=float(cfg.get("exact_i", 0.0)))
    t = int(_num(cfg.get("t", 0), "t"))
    n = int(_num(_require(cfg, "n"), "n"))
    m = int(_num(cfg.get("m", 1), "m"))
    eps = _num(_require(cfg, "eps"), "eps")
    reps = int(_num(_require(cfg, "reps"), "reps"))
    threads = int(cfg.get("threads", 1))

    cov = coverage_experiment(model, t, n, m, eps, reps, seed, threads)
    rep = _base_report(cfg, "verify")
    rep.update({
        "coverage": cov.coverage, "hits": cov.hits, "reps": cov.reps,
        "wilson_ci": list(cov.wilson_ci), "seed": seed, "checks": {},
    })
    ok = True
    if "alpha" in cfg:
        alpha = _num(cfg["alpha"], "alpha")
        floor = 1 - alpha - 3 * cov.half_width
        passed = cov.coverage >= floor
        rep["checks"]["coverage"] = {"required": floor, "passed": passed}
        ok &= passed
    if m == 1 and cfg.get("gamma") not in (None, "optimize") and cfg.get("gamma_r") not in (None, "optimize"):
        prob = Problem(cfg)
        cv, cr = prob.certificates()
        bound = mse_bound(MseInputs(prob.norms, cv, cr, prob.r, prob.start, n, t))
        emp = empirical_mse(model, t, n, reps, seed, threads)
        passed = emp.mse <= bound
        rep["checks"]["mse"] = {"empirical": emp.mse, "std_err": emp.std_err,
                                "bound": bound, "passed": passed}
        ok &= passed
    rep["ok"] = bool(ok)
    if not ok:
        raise InvariantViolation(rep)
    return rep


def cmd_table1(cfg) -> Dict[str, Any]:
    merged = copy.deepcopy(TABLE1_DEFAULTS)
    merged.update(cfg)
    cfg2 = dict(merged, setting=2)
    prob2 = Problem(cfg2)
    cv, cr = prob2.certificates()
    rows = []
    norms = {}
    for setting in (1, 2):
        prob = Problem(dict(merged, setting=setting))
        norms[str(setting)] = _norms_echo(prob.norms)
        rows.extend(_schedule_rows(prob, cv, cr, setting=setting))
    rep = _base_report(merged, "table1")
    rep.update({
        "rho": cv.rho, "rho_r": cr.rho, "gamma": cv.gamma, "gamma_r": cr.gamma,
        "M": cv.m_const, "M_r": cr.m_const, "norms": norms, "rows": rows,
    })
    return rep


COMMANDS = {
    "certify": cmd_certify,
    "schedule": cmd_schedule,
    "optimize": cmd_optimize,
    "verify": cmd_verify,
    "table1": cmd_table1,
}


# -- argument parsing ---------------------------------------------------------

def _gamma_arg(s: str):
    return s if s == "optimize" else float(s)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="driftbounds", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", help="JSON config file")
        sp.add_argument("--out", help="also write schedule rows as CSV to this path")
        sp.add_argument("--threads", type=int)
        sp.add_argument("--theta", type=float)
        sp.add_argument("--d", type=float)
        sp.add_argument("--setting", type=int, choices=(1, 2))
        sp.add_argument("--chain-class", dest="chain_class")
        sp.add_argument("--gamma", type=_gamma_arg)
        sp.add_argument("--gamma-r", dest="gamma_r", type=_gamma_arg)
        sp.add_argument("--r", type=float)
        sp.add_argument("--eps", type=float)
        sp.add_argument("--alpha", type=float)
        sp.add_argument("--a", type=float)
        sp.add_argument("--estimator", choices=("one_walk", "ma", "both"))
        sp.add_argument("--target", choices=("gammas", "small_set", "a"))
        sp.add_argument("--objective", choices=[o.value for o in Objective])
        sp.add_argument("--seed", type=int)
        sp.add_argument("--reps", type=int)
        sp.add_argument("--t", type=int)
        sp.add_argument("--n", type=int)
        sp.add_argument("--m", type=int)
        sp.add_argument("--exact-i", dest="exact_i", type=float)
    return ap


_PLAIN_FLAGS = ("threads", "setting", "chain_class", "gamma", "gamma_r", "r", "eps", "a",
                "estimator", "target", "objective", "seed", "reps", "t", "n", "m", "exact_i")


def config_from_args(args) -> Dict[str, Any]:
    cfg: Dict[str, Any] = {}
    if args.config:
        try:
            with open(args.config) as fh:
                cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(cfg, dict):
            raise ConfigError("config must be a JSON object")
    if args.theta is not None or args.d is not None:
        model = dict(cfg.get("model") or {"name": "contracting_normals"})
        if args.theta is not None:
            model["theta"] = args.theta
        if args.d is not None:
            model["d"] = args.d
        cfg["model"] = model
    for key in _PLAIN_FLAGS:
        val = getattr(args, key)
        if val is not None:
            cfg[key] = val
    if args.alpha is not None:
        cfg["alpha"] = args.alpha
        if args.command != "verify":
            cfg["alphas"] = [args.alpha]
    return cfg


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    code = EXIT_OK
    try:
        cfg = config_from_args(args)
        report = COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DomainError, ConvergenceError) as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except InvariantViolation as exc:
        print("invariant violation: soundness check failed", file=sys.stderr)
        report, code = exc.report, EXIT_INVARIANT
    sys.stdout.write(dump_report(report))
    if args.out and "rows" in report:
        cols = CSV_COLUMNS + (["setting"] if args.command == "table1" else [])
        with open(args.out, "w", newline="") as fh:
            fh.write(rows_to_csv(report["rows"], cols))
    return code


if __name__ == "__main__":
    sys.exit(main())

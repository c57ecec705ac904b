"""
Command-line entry point ``ia-ofdm``.

Exit codes: 0 success, 1 bad parameters (including usage errors), 2
numerical failure.  Tables go to stdout; ``--out PATH`` writes the
CSV/JSON to a file with a ``PATH.manifest.json`` sidecar.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .channel import Rayleigh, Uniform, draw_channel_set
from .dof_planner import enumerate_feasible, format_table, practical_dof, table_one
from .errors import InfeasiblePlanError, NumericalError
from .ia_core import (
    build_decoders,
    build_precoders,
    generic_channel_ia_demo,
    power_ratio_check,
    verify_alignment,
)
from .outage import OutageQuery, outage_curve, outage_mc, outage_quadrature, outage_uniform
from .simulator import FIGURE_PRESETS, SimConfig, run_sweep

EXIT_OK, EXIT_PARAM, EXIT_NUMERIC = 0, 1, 2

# all 12 published rows fit under this budget (K=4, n=4 is the largest)
TABLE_ONE_NMAX = 179_195


@dataclass
class RunManifest:
    subcommand: str
    parameters: dict
    seed: int | None
    version: str = __version__
    timestamp: str = field(default_factory=lambda: time.strftime("%Y-%m-%dT%H:%M:%S%z"))
    outputs: list = field(default_factory=list)

    def write(self, path: Path):
        with open(path, "w") as f:
            json.dump(asdict(self), f, indent=2, sort_keys=True, default=_json_default)
            f.write("\n")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; 2 is reserved for numerical failure here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARAM, f"{self.prog}: error: {message}\n")


def _json_default(o):
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, (np.floating,)):
        return float(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, (Uniform, Rayleigh)):
        return o.to_dict()
    raise TypeError(f"not JSON serialisable: {type(o)}")


def _fmt(v):
    if isinstance(v, float):
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return f"{v:.6g}"
    return str(v)


def _csv(rows, columns) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(r[c]) for c in columns])
    return buf.getvalue()


def _default_seed():
    env = os.environ.get("IA_OFDM_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"IA_OFDM_SEED must be an integer, got {env!r}")


def _dist(name, lo=None, hi=None, sigma=1.0):
    if name == "uniform":
        return Uniform(0.0 if lo is None else lo, 1.0 if hi is None else hi)
    return Rayleigh(sigma)


def _emit(text, args, manifest: RunManifest):
    out = getattr(args, "out", None)
    if out:
        path = Path(out)
        path.write_text(text)
        manifest.outputs.append(str(path))
        manifest.write(Path(str(path) + ".manifest.json"))
    else:
        sys.stdout.write(text)


# ------------------------------------------------------------------------
# Subcommands
# ------------------------------------------------------------------------
def cmd_plan_dof(args):
    plan = enumerate_feasible(args.nmax)
    practical = practical_dof(args.nmax, a=args.a, threshold=args.threshold)
    rows = plan.rows
    if not args.all:
        # the largest feasible n is the best row of each K
        top = {}
        for r in rows:
            top[r.K] = r
        rows = list(top.values())
    m = RunManifest("plan-dof", {"nmax": args.nmax, "a": args.a, "threshold": args.threshold}, None)
    if args.json:
        doc = {
            "n_max_budget": args.nmax,
            "rows": [r.to_dict() for r in plan.rows],
            "unconstrained_best": plan.best.to_dict() if plan.best else None,
            "practical_best": practical.to_dict(),
        }
        _emit(json.dumps(doc, indent=2) + "\n", args, m)
        return EXIT_OK
    if args.csv:
        text = _csv([r.to_dict() for r in rows], ["K", "q", "n", "subcarriers", "packets", "dof"])
    else:
        text = format_table([(r, 4) for r in rows])
        if plan.best:
            b = plan.best
            text += f"unconstrained best: K={b.K} n={b.n} dof={b.dof:.4f}\n"
        text += f"practical best (a={args.a:g}): K=3 n={practical.n} dof={practical.dof:.4f}\n"
    _emit(text, args, m)
    return EXIT_OK


def _outage_query(args):
    dist = _dist(args.dist, sigma=args.sigma)
    return OutageQuery(args.n, args.m, args.a, dist)


def cmd_outage(args):
    q = _outage_query(args)
    seed = args.seed if args.seed is not None else _default_seed()
    if args.mc:
        if args.mc < 1:
            raise UsageError("--mc needs a positive trial count")
        res = outage_mc(q, trials=args.mc, seed=seed, empirical=args.empirical)
    elif isinstance(q.dist, Uniform):
        res = outage_uniform(q.n, q.M, q.a)
    else:
        res = outage_quadrature(q, quad_tol=args.quad_tol)
    m = RunManifest("outage", {"dist": q.dist.to_dict(), "n": q.n, "M": q.M, "a": q.a, "mc": args.mc}, seed)
    _emit(json.dumps(res.to_dict()) + "\n", args, m)
    return EXIT_OK


def _curve_rows(dist, sweep, values, n, M, a):
    return outage_curve(dist, sweep=sweep, values=values, n=n, M=M, a=a)


CURVE_COLUMNS = ["dist", "n", "M", "a", "p"]


def cmd_outage_curve(args):
    dist = _dist(args.dist, sigma=args.sigma)
    values = range(args.start, args.stop + 1)
    rows = _curve_rows(dist, args.sweep, values, args.n, args.m, args.a)
    m = RunManifest("outage-curve", {"dist": dist.to_dict(), "sweep": args.sweep, "values": list(values),
                                     "n": args.n, "M": args.m, "a": args.a}, None)
    _emit(_csv(rows, CURVE_COLUMNS), args, m)
    return EXIT_OK


def cmd_align_check(args):
    seed = args.seed if args.seed is not None else _default_seed()
    dist = _dist(args.dist, args.lo, args.hi)
    cs = draw_channel_set(3, 2 * args.n + 1, args.m, dist, seed)
    ps = build_precoders(cs, args.n)
    rep = verify_alignment(cs, ps)
    ds = build_decoders(cs, ps)
    pc = power_ratio_check(ps, args.a)
    names = ("H21V2-H31V3", "H32V3-H12B", "H23V2-H13C")
    lines = [json.dumps({"residual": nm, "relative": r, "span": sr})
             for nm, r, sr in zip(names, rep.residuals, rep.span_residuals)]
    lines.append(json.dumps({"conditioning": [float(c) for c in ds.cond],
                             "power_ratio": float(pc.ratio), "power_ok": pc.ok}))
    m = RunManifest("align-check", {"n": args.n, "M": args.m, "dist": dist.to_dict()}, seed)
    _emit("\n".join(lines) + "\n", args, m)
    return EXIT_OK


def cmd_demo_generic_ia(args):
    seed = args.seed if args.seed is not None else _default_seed()
    demo = generic_channel_ia_demo(seed=seed, diagonal=args.diagonal)
    doc = {
        "diagonal": args.diagonal,
        "v1": [_complex_list(x) for x in demo.v[0]],
        "v1_nonzero_entries": demo.v1_nonzero_entries,
        "interference_collinearity": list(demo.residuals),
        "projections": [float(abs(p)) for p in demo.projections],
        "recovered": list(demo.recovered),
        "packets_recovered": demo.packets_recovered,
        "attempts": demo.attempts,
    }
    m = RunManifest("demo-generic-ia", {"diagonal": args.diagonal}, seed)
    _emit(json.dumps(doc, indent=2) + "\n", args, m)
    return EXIT_OK


def _complex_list(x):
    x = complex(x)
    return x.real if x.imag == 0 else [x.real, x.imag]


SIM_COLUMNS = ["snr_db", "scheme", "n", "M", "mean_dof", "std", "outage_frac"]


def _sim_csv(results) -> str:
    rows = [r for res in results for r in res.rows()]
    return _csv(rows, SIM_COLUMNS)


def _config_from_args(args) -> SimConfig:
    base = {}
    if args.config:
        with open(args.config) as f:
            base = json.load(f)
        if not isinstance(base, dict):
            raise UsageError("config file must hold a JSON object")
    overrides = {
        "n": args.n, "M": args.m, "N": args.N, "trials": args.trials, "a": args.a,
        "scheme": args.scheme, "normalization": args.normalization, "power_check": args.power_check,
    }
    base.update({k: v for k, v in overrides.items() if v is not None})
    if args.dist is not None:
        base["dist"] = _dist(args.dist, args.lo, args.hi, args.sigma or 1.0).to_dict()
    if args.snr is not None:
        base["snr_db_grid"] = [float(x) for x in args.snr.split(",")]
    if args.fallback:
        base["fallback"] = True
    if args.seed is not None:
        base["seed"] = args.seed
    elif "seed" not in base:
        base["seed"] = _default_seed()
    return SimConfig.from_dict(base)


def cmd_simulate(args):
    workers = max(1, args.threads or 1)
    if args.emit_plotdata:
        return _emit_plotdata(Path(args.emit_plotdata), args, workers)
    cfg = _config_from_args(args)
    if args.dump_channels:
        cs = draw_channel_set(cfg.K, cfg.N, cfg.M, cfg.dist, cfg.seed)
        Path(args.dump_channels).write_text(cs.to_json())
    res = run_sweep(cfg, workers=workers)
    m = RunManifest("simulate", res.metadata(), cfg.seed)
    if args.dump_channels:
        m.outputs.append(args.dump_channels)
    _emit(_sim_csv([res]), args, m)
    return EXIT_OK


def _emit_plotdata(outdir: Path, args, workers, figures=("fig5", "fig6", "fig7")):
    outdir.mkdir(parents=True, exist_ok=True)
    seed = args.seed if getattr(args, "seed", None) is not None else _default_seed()
    trials = getattr(args, "trials", None)
    for fig in figures:
        _write_figure(fig, outdir / f"{fig}.csv", seed, trials, workers)
    return EXIT_OK


def _figure_configs(fig, seed, trials):
    cfgs = []
    for c in FIGURE_PRESETS[fig]:
        d = c.to_dict()
        d["seed"] = seed
        if trials is not None:
            d["trials"] = trials
        cfgs.append(SimConfig.from_dict(d))
    return cfgs


def _write_figure(fig, path, seed, trials, workers):
    cfgs = _figure_configs(fig, seed, trials)
    results = [run_sweep(c, workers=workers) for c in cfgs]
    text = _sim_csv(results)
    m = RunManifest(f"reproduce {fig}", {"configs": [r.metadata() for r in results]}, seed)
    if path is None:
        sys.stdout.write(text)
        return
    path.write_text(text)
    m.outputs.append(str(path))
    m.write(Path(str(path) + ".manifest.json"))


def _outage_figure(fig):
    if fig == "fig2":
        values, sweep = range(1, 11), "n"
        rows = []
        for dist in (Uniform(), Rayleigh()):
            rows += _curve_rows(dist, sweep, values, 1, 1, 3.0)
        return rows
    dist = Uniform() if fig == "fig3" else Rayleigh()
    rows = []
    for n in (1, 2, 3):
        rows += _curve_rows(dist, "M", range(1, 4), n, 1, 3.0)
    return rows


def cmd_reproduce(args):
    target = args.target
    seed = args.seed if args.seed is not None else _default_seed()
    if target == "table1":
        nmax = args.nmax if args.nmax is not None else TABLE_ONE_NMAX
        entries = table_one(nmax)
        text = format_table(entries, fmt="text" if args.text else "csv")
        m = RunManifest("reproduce table1", {"nmax": nmax}, None)
        _emit(text, args, m)
        return EXIT_OK
    if target in ("fig2", "fig3", "fig4"):
        rows = _outage_figure(target)
        m = RunManifest(f"reproduce {target}", {"a": 3.0}, None)
        _emit(_csv(rows, CURVE_COLUMNS), args, m)
        return EXIT_OK
    workers = max(1, args.threads or 1)
    path = Path(args.out) if args.out else None
    _write_figure(target, path, seed, args.trials, workers)
    return EXIT_OK


# ------------------------------------------------------------------------
# Parser
# ------------------------------------------------------------------------
def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ia-ofdm", description="Interference alignment for three-user (MIMO-)OFDM.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("plan-dof", help="enumerate feasible (K, n) under a subcarrier budget")
    s.add_argument("--nmax", type=int, required=True)
    s.add_argument("--a", type=float, default=3.0)
    s.add_argument("--threshold", type=float, default=0.1, help="outage threshold for the practical answer")
    s.add_argument("--json", action="store_true")
    s.add_argument("--csv", action="store_true")
    s.add_argument("--all", action="store_true", help="list every feasible n, not only the largest per K")
    s.add_argument("--out")
    s.set_defaults(func=cmd_plan_dof)

    s = sub.add_parser("outage", help="power-ratio outage probability")
    s.add_argument("--dist", choices=("uniform", "rayleigh"), default="uniform")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--m", type=int, default=1)
    s.add_argument("--a", type=float, default=3.0)
    s.add_argument("--sigma", type=float, default=1.0)
    s.add_argument("--mc", type=int, help="use Monte Carlo with this many trials")
    s.add_argument("--empirical", action="store_true", help="MC over actual six-gain ratios")
    s.add_argument("--quad-tol", type=float, default=1e-6)
    s.add_argument("--seed", type=int)
    s.add_argument("--out")
    s.set_defaults(func=cmd_outage)

    s = sub.add_parser("outage-curve", help="outage probability as n or M varies (CSV)")
    s.add_argument("--dist", choices=("uniform", "rayleigh"), default="uniform")
    s.add_argument("--sweep", choices=("n", "m", "M"), default="n")
    s.add_argument("--start", type=int, default=1)
    s.add_argument("--stop", type=int, default=10)
    s.add_argument("--n", type=int, default=1)
    s.add_argument("--m", type=int, default=1)
    s.add_argument("--a", type=float, default=3.0)
    s.add_argument("--sigma", type=float, default=1.0)
    s.add_argument("--out")
    s.set_defaults(func=cmd_outage_curve)

    s = sub.add_parser("align-check", help="alignment residuals and conditioning for one group (JSON lines)")
    s.add_argument("--seed", type=int)
    s.add_argument("--n", type=int, default=1)
    s.add_argument("--m", type=int, default=1)
    s.add_argument("--a", type=float, default=3.0)
    s.add_argument("--dist", choices=("uniform", "rayleigh"), default="uniform")
    s.add_argument("--lo", type=float)
    s.add_argument("--hi", type=float)
    s.add_argument("--out")
    s.set_defaults(func=cmd_align_check)

    s = sub.add_parser("demo-generic-ia", help="2x2 eigenvector construction on generic or diagonal channels")
    s.add_argument("--seed", type=int)
    s.add_argument("--diagonal", action="store_true")
    s.add_argument("--out")
    s.set_defaults(func=cmd_demo_generic_ia)

    s = sub.add_parser("simulate", help="Monte Carlo SNR sweep (CSV)")
    s.add_argument("--config", help="JSON file with SimConfig fields; flags override it")
    s.add_argument("--n", type=int)
    s.add_argument("--m", type=int)
    s.add_argument("--N", type=int)
    s.add_argument("--trials", type=int)
    s.add_argument("--a", type=float)
    s.add_argument("--seed", type=int)
    s.add_argument("--scheme", choices=("ia", "single_user"))
    s.add_argument("--dist", choices=("uniform", "rayleigh"))
    s.add_argument("--lo", type=float)
    s.add_argument("--hi", type=float)
    s.add_argument("--sigma", type=float)
    s.add_argument("--snr", help="comma-separated SNR grid in dB ('inf' allowed)")
    s.add_argument("--normalization", choices=("unit-column", "unit-total-power", "none"))
    s.add_argument("--power-check", choices=("transmitted", "raw"))
    s.add_argument("--fallback", action="store_true", help="outage groups carry single-user traffic")
    s.add_argument("--threads", type=int, help="worker processes")
    s.add_argument("--dump-channels", help="write the first trial's channels as JSON")
    s.add_argument("--emit-plotdata", metavar="DIR", help="write fig5/fig6/fig7 preset CSVs into DIR")
    s.add_argument("--out")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("reproduce", help="regenerate a published table or figure")
    s.add_argument("target", choices=("table1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7"))
    s.add_argument("--nmax", type=int, help="table1 subcarrier budget (default: all rows)")
    s.add_argument("--text", action="store_true", help="table1 as aligned text instead of CSV")
    s.add_argument("--trials", type=int, help="override preset trial count")
    s.add_argument("--seed", type=int)
    s.add_argument("--threads", type=int)
    s.add_argument("--out")
    s.set_defaults(func=cmd_reproduce)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (NumericalError, np.linalg.LinAlgError) as e:
        print(f"ia-ofdm: numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    except (UsageError, ValueError, InfeasiblePlanError, IndexError, OSError) as e:
        print(f"ia-ofdm: error: {e}", file=sys.stderr)
        return EXIT_PARAM


dispatch = main

if __name__ == "__main__":
    sys.exit(main())

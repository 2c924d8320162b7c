"""``penal-dg`` command line: run, sweep, mea, preset."""
import argparse
import math
import os
import sys

from . import experiments, mea
from .config import load_config, parse_value
from .errors import ConfigError, DivergenceError, PenalDGError

EXIT_OK, EXIT_CONFIG, EXIT_DIVERGED, EXIT_CHECK = 0, 2, 3, 4


def _overrides(cfg, items):
    if not items:
        return cfg
    changes = {}
    for item in items:
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        k, v = item.split("=", 1)
        changes[k.strip()] = parse_value(k.strip(), v)
    return cfg.replace(**changes)


def _emit(text, out_dir, name):
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
        with open(os.path.join(out_dir, name), "w") as fh:
            fh.write(text)
    sys.stdout.write(text)


def cmd_run(args):
    cfg = _overrides(load_config(args.config), args.set)
    snap_dir = os.path.join(args.out, "snapshots") if args.out else None
    res = experiments.run(cfg, snapshot_every=args.snapshot_every, out_dir=snap_dir)
    row = dict(res.report.row(), status="ok", flag="")
    _emit(experiments.rows_csv([row]), args.out, "report.csv")
    return EXIT_OK


def _values(text):
    try:
        # "none" and "inf" both mean the term is absent
        return [math.inf if v.strip().lower() == "none" else parse_value("eta1", v)
                for v in text.split(",") if v.strip()]
    except ConfigError as exc:
        raise ConfigError(f"bad --values list {text!r}") from exc


def cmd_sweep(args):
    cfg = _overrides(load_config(args.config), args.set)
    values = _values(args.values)
    if not values:
        raise ConfigError("--values is empty")
    rows = experiments.sweep(cfg, args.param, values, jobs=args.jobs)
    _emit(experiments.rows_csv(rows), args.out, "sweep.csv")
    return EXIT_OK if all(r["status"] == "ok" for r in rows) else EXIT_DIVERGED


def format_mea(rep, inp):
    lines = [f"c_hat={inp.c_hat.tolist()} nu_hat={inp.nu_hat.tolist()} dx={inp.dx:g}",
             "order per node: " + ", ".join(str(o) for o in rep.te_order), ""]
    M = rep.zhe.shape[1]
    lines.append("   m" + "".join(f"{'j=' + str(j):>24}" for j in range(3)))
    for m in range(1, M + 1):
        lines.append(f"{m:4d}" + "".join(f"{rep.zhe[j, m - 1]:24.15e}" for j in range(3)))
    lines.append("")
    for name, arr in (("r_tilde", rep.r_tilde), ("c_tilde", rep.c_tilde), ("nu_tilde", rep.nu_tilde)):
        lines.append(f"{name:>8}" + "".join(f"{v:24.15e}" for v in arr))
    return "\n".join(lines) + "\n"


def mea_csv(rep):
    out = ["j,m,zhe_value"]
    J, M = rep.zhe.shape
    for j in range(J):
        for m in range(1, M + 1):
            out.append(f"{j},{m},{rep.zhe[j, m - 1]:.17g}")
    for name, arr in (("r_tilde", rep.r_tilde), ("c_tilde", rep.c_tilde), ("nu_tilde", rep.nu_tilde)):
        for j, v in enumerate(arr):
            out.append(f"{j},{name},{v:.17g}")
    for j, o in enumerate(rep.te_order):
        out.append(f"{j},order,{o}")
    return "\n".join(out) + "\n"


def cmd_mea(args):
    inp, continuous = mea.family_input(args.family, c=args.c, nu=args.nu, dx=args.dx,
                                       max_order=args.order, seed=args.seed)
    rep = mea.analyze(inp, continuous=continuous)
    sys.stdout.write(format_mea(rep, inp))
    csv_text = mea_csv(rep)
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        with open(os.path.join(args.out, f"mea_{args.family}.csv"), "w") as fh:
            fh.write(csv_text)
    else:
        sys.stdout.write("\n" + csv_text)
    return EXIT_OK


def cmd_preset(args):
    res = experiments.run_preset(args.name, jobs=args.jobs, out_dir=args.out)
    _emit(experiments.rows_csv(res.rows), args.out, f"{args.name}.csv")
    for ok, msg in res.checks:
        sys.stderr.write(f"[{'PASS' if ok else 'FAIL'}] {msg}\n")
    if any(not r.get("status", "ok").startswith("ok") for r in res.rows):
        return EXIT_DIVERGED
    if args.check and not res.passed:
        return EXIT_CHECK
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="penal-dg", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="integrate one configuration")
    r.add_argument("--config", required=True)
    r.add_argument("--out", help="output directory for report.csv and snapshots")
    r.add_argument("--snapshot-every", type=int, default=None, metavar="STEPS")
    r.add_argument("--set", action="append", metavar="KEY=VALUE", help="override a config key")
    r.set_defaults(func=cmd_run)

    s = sub.add_parser("sweep", help="one run per parameter value")
    s.add_argument("--config", required=True)
    s.add_argument("--param", required=True, choices=experiments.SWEEP_PARAMS)
    s.add_argument("--values", required=True, metavar="CSVLIST")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--out")
    s.add_argument("--set", action="append", metavar="KEY=VALUE")
    s.set_defaults(func=cmd_sweep)

    m = sub.add_parser("mea", help="modified-equation analysis for N=2")
    m.add_argument("--family", required=True)
    m.add_argument("--c", type=float, default=1.0)
    m.add_argument("--nu", type=float, default=0.001)
    m.add_argument("--dx", type=float, default=0.05)
    m.add_argument("--order", type=int, default=8)
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--out")
    m.set_defaults(func=cmd_mea)

    q = sub.add_parser("preset", help="reference experiment presets")
    q.add_argument("name", choices=experiments.PRESETS)
    q.add_argument("--check", action="store_true", help="exit 4 if an acceptance check fails")
    q.add_argument("--jobs", type=int, default=1)
    q.add_argument("--out")
    q.set_defaults(func=cmd_preset)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        return args.func(args)
    except DivergenceError as exc:
        sys.stderr.write(f"penal-dg: {exc}\n")
        return EXIT_DIVERGED
    except (ConfigError, PenalDGError, OSError) as exc:
        sys.stderr.write(f"penal-dg: {exc}\n")
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())

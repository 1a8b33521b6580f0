"""Command-line interface: ``ordscale {estimate,simulate,tables,schemes}``.

Exit codes: 0 success, 2 usage or input error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import sys
import warnings
from pathlib import Path

import numpy as np

from . import model, tables
from .data import jute
from .estimators import BASELINE, ConfigError, EstimatorId, EstimatorOptions, Target, check_applicable, evaluate
from .loss import LOSSES
from .numeric import BracketError, NumericalError
from .risk import SimConfig, rri_curve, write_csv
from .sigma1 import NoImprovementWarning

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 2, 3

# figure presets: (target, loss, [(n1, n2, mu1, mu2), ...]); --panel picks one tuple
PRESETS = {
    "fig1": ("sigma1", "quadratic", [(8, 10, 0.0, 0.0), (12, 12, 0.2, 0.3), (14, 15, 0.4, 0.7)]),
    "fig2": ("sigma1", "quadratic", [(13, 18, -0.1, -0.2), (7, 8, -0.4, -0.5)]),
    "fig3": ("sigma1", "entropy", [(8, 10, 0.0, 0.0)]),
    "fig4": ("sigma1", "entropy", [(12, 12, 0.2, 0.3), (14, 15, 0.4, 0.7), (13, 18, -0.1, -0.2)]),
    "fig5": ("sigma1", "entropy", [(7, 8, -0.4, -0.5)]),
    "fig6": ("sigma1", "symmetric", [(8, 10, 0.0, 0.0), (12, 12, 0.2, 0.3)]),
    "fig7": ("sigma1", "symmetric", [(14, 15, 0.4, 0.7), (13, 18, -0.1, -0.2), (7, 8, -0.4, -0.5)]),
    "fig8": ("sigma2", "quadratic", [(8, 10, 0.0, 0.0), (12, 12, 0.05, 0.03), (10, 9, 0.1, 0.1),
                                     (10, 9, 0.1, 0.15)]),
    "fig9": ("sigma2", "quadratic", [(14, 15, 0.4, 0.7), (7, 8, -0.1, -0.2)]),
    "fig10": ("sigma2", "entropy", [(8, 10, 0.0, 0.0)]),
    "fig11": ("sigma2", "entropy", [(12, 12, 0.05, 0.03), (10, 9, 0.1, 0.1), (10, 9, 0.1, 0.15),
                                    (14, 15, 0.4, 0.7)]),
    "fig12": ("sigma2", "entropy", [(7, 8, -0.1, -0.2)]),
    "fig13": ("sigma2", "symmetric", [(8, 10, 0.0, 0.0), (12, 12, 0.05, 0.03)]),
    "fig14": ("sigma2", "symmetric", [(10, 9, 0.1, 0.1), (10, 9, 0.1, 0.15), (14, 15, 0.4, 0.7),
                                      (7, 8, -0.1, -0.2)]),
}


class UsageError(ValueError):
    pass


# --- shared helpers -----------------------------------------------------------

def read_data_file(path: str) -> np.ndarray:
    """One ASCII decimal per line; blank lines and ``#`` comments are skipped."""
    values = []
    try:
        text = Path(path).read_text(encoding="ascii")
    except (OSError, UnicodeDecodeError) as exc:
        raise UsageError(f"cannot read data file {path}: {exc}") from exc
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            values.append(float(line))
        except ValueError:
            raise UsageError(f"{path}:{lineno}: not a number: {line!r}") from None
    if not values:
        raise UsageError(f"{path}: no observations")
    return np.asarray(values)


def _parse_estimators(spec: str | None, targets) -> list:
    if spec is None or spec.strip().lower() == "all":
        return [e for t in targets for e in EstimatorId.for_target(t)]
    ests = []
    for name in (s.strip().lower() for s in spec.split(",") if s.strip()):
        if name == "baee":  # the baseline of every requested target
            ests.extend(BASELINE[t] for t in targets)
        else:
            ests.append(EstimatorId.parse(name))
    return [e for e in ests if e.target in targets]


def _targets(name: str) -> list:
    return [Target.SIGMA1, Target.SIGMA2] if name == "both" else [Target(name)]


def _emit_rows(rows, fmt: str, out=None) -> None:
    """``rows``: (target, estimator key, symbol, value)."""
    out = out or sys.stdout
    if fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(("target", "estimator", "symbol", "value"))
        for t, k, s, v in rows:
            w.writerow((t, k, s, f"{v:.10g}"))
        return
    out.write(f"{'target':<8} {'estimator':<10} {'symbol':<12} {'value':>12}\n")
    for t, k, s, v in rows:
        out.write(f"{t:<8} {k:<10} {s:<12} {v:12.2f}\n")


def _estimate_rows(st1, st2, loss, estimators, options, skip_inapplicable=True):
    rows = []
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", NoImprovementWarning)
        for est in estimators:
            try:
                check_applicable(est, est.target, loss)
            except ConfigError:
                if skip_inapplicable:
                    continue
                raise
            rows.append((est.target.value, est.key, est.symbol, float(evaluate(est, st1, st2, loss, options))))
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    return rows


def _order_warning(rows) -> None:
    vals = {k: v for _, k, _, v in rows}
    if "baee1" in vals and "baee2" in vals and vals["baee1"] > vals["baee2"]:
        print("warning: estimated sigma1 exceeds estimated sigma2 (order restriction not enforced on estimates)",
              file=sys.stderr)


def _load_samples(args):
    if args.builtin:
        ds = jute(args.reconstruct_missing)
        return ds.sample(1), ds.sample(2)
    if not (args.data1 and args.data2):
        raise UsageError("give --data1 and --data2, or --builtin jute")
    return np.sort(read_data_file(args.data1)), np.sort(read_data_file(args.data2))


# --- estimate -----------------------------------------------------------------

def cmd_estimate(args) -> int:
    x1, x2 = _load_samples(args)
    n1, n2 = len(x1), len(x2)
    a1, a2 = args.a1 or 1, args.a2 or 1
    b1, b2 = args.b1 or n1, args.b2 or n2
    for label, b, n in (("b1", b1, n1), ("b2", b2, n2)):
        if b > n:
            hint = " (the built-in 5 mm sample has 29 values; see --reconstruct-missing)" if args.builtin else ""
            raise model.SchemeError(f"{label}={b} exceeds the sample size {n}{hint}")
    st1 = model.sufficient_stats(x1, a1, b1)
    st2 = model.sufficient_stats(x2, a2, b2)
    return _report(args, st1, st2, mins=(x1[0], x2[0]))


def _report(args, st1, st2, mins=None) -> int:
    options = EstimatorOptions(alpha=args.alpha, epsilon=args.epsilon)
    ests = _parse_estimators(args.estimators, _targets(args.target))
    rows = _estimate_rows(st1, st2, args.loss, ests, options)
    if args.format == "table":
        for i, st in ((1, st1), (2, st2)):
            extra = f"  mu_hat={mins[i - 1]:.4g}" if mins is not None else ""
            print(f"population {i}: m={st.m} kappa={st.kappa:g} x_a={st.x_a:.6g} v={st.v:.6g}{extra}")
    _emit_rows(rows, args.format)
    _order_warning(rows)
    return EXIT_OK


# --- schemes ------------------------------------------------------------------

def _int_list(text: str) -> tuple:
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _descriptor(args, i: int, x: np.ndarray):
    kind = args.scheme
    if kind == "iid":
        return model.IID(len(x))
    if kind == "type2":
        big_n = getattr(args, f"N{i}") or len(x)
        r = getattr(args, f"r{i}") or len(x)
        return model.TypeII(big_n, r)
    if kind == "progressive":
        raw = getattr(args, f"removals{i}")
        if raw is None:
            raise UsageError(f"--removals{i} is required for the progressive scheme")
        removals = _int_list(raw)
        return model.ProgressiveTypeII(len(removals) + sum(removals), len(removals), removals)
    return model.Records(len(x))


def cmd_schemes(args) -> int:
    if not (args.data1 and args.data2):
        raise UsageError("--data1 and --data2 are required")
    raw1, raw2 = read_data_file(args.data1), read_data_file(args.data2)
    st1 = model.scheme_to_stats(_descriptor(args, 1, raw1), raw1)
    st2 = model.scheme_to_stats(_descriptor(args, 2, raw2), raw2)
    return _report(args, st1, st2)


# --- simulate -----------------------------------------------------------------

def _read_config(path: str) -> dict:
    out = {}
    try:
        lines = Path(path).read_text(encoding="ascii").splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    for lineno, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        k, v = (s.strip() for s in line.split("=", 1))
        out[k.replace("-", "_")] = v
    return out


_SIM_KEYS = {"n1": int, "n2": int, "a1": int, "a2": int, "b1": int, "b2": int, "mu1": float, "mu2": float,
             "eta": str, "replicates": int, "seed": int, "loss": str, "target": str, "estimators": str,
             "alpha": float, "epsilon": float, "sigma2": float}


def _parse_eta(text: str) -> tuple:
    text = text.strip()
    if ":" in text:
        lo, hi, step = (float(t) for t in text.split(":"))
        k = int(round((hi - lo) / step))
        return tuple(round(lo + i * step, 10) for i in range(k + 1))
    try:
        return tuple(float(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise ConfigError(f"invalid eta grid {text!r}") from None


def _sim_settings(args) -> dict:
    s = {"mu1": 0.0, "mu2": 0.0, "eta": "0.1:1.0:0.1", "replicates": 50_000, "seed": 0,
         "loss": "quadratic", "target": "sigma1", "estimators": None, "alpha": 1.5, "epsilon": 1.0,
         "sigma2": 1.0}
    if args.preset:
        if args.preset not in PRESETS:
            raise UsageError(f"unknown preset {args.preset!r}; choose from {', '.join(PRESETS)}")
        target, loss, panels = PRESETS[args.preset]
        if not 1 <= args.panel <= len(panels):
            raise UsageError(f"{args.preset} has {len(panels)} configurations; --panel {args.panel} is out of range")
        n1, n2, mu1, mu2 = panels[args.panel - 1]
        s.update(target=target, loss=loss, n1=n1, n2=n2, mu1=mu1, mu2=mu2)
    if args.config:
        for k, v in _read_config(args.config).items():
            if k not in _SIM_KEYS:
                raise UsageError(f"unknown config key {k!r}")
            try:
                s[k] = _SIM_KEYS[k](v)
            except ValueError:
                raise UsageError(f"config key {k}: invalid value {v!r}") from None
    for k in _SIM_KEYS:
        v = getattr(args, k, None)
        if v is not None:
            s[k] = v
    if "n1" not in s or "n2" not in s:
        raise UsageError("sample sizes are required: give --n1/--n2, --preset or --config")
    s.setdefault("a1", 1)
    s.setdefault("a2", 1)
    s.setdefault("b1", s["n1"])
    s.setdefault("b2", s["n2"])
    return s


def cmd_simulate(args) -> int:
    s = _sim_settings(args)
    target = Target(s["target"])
    ests = () if s["estimators"] is None else tuple(_parse_estimators(s["estimators"], [target]))
    config = SimConfig(
        scheme1=model.CensoringScheme(s["n1"], s["a1"], s["b1"]),
        scheme2=model.CensoringScheme(s["n2"], s["a2"], s["b2"]),
        mu1=s["mu1"], mu2=s["mu2"], eta_grid=_parse_eta(str(s["eta"])), sigma2=s["sigma2"],
        replicates=s["replicates"], seed=s["seed"], loss=s["loss"], target=target,
        estimators=ests, options=EstimatorOptions(s["alpha"], s["epsilon"]),
    )
    table = rri_curve(config)
    write_csv(table, args.out)
    print(f"wrote {len(table.rows)} rows to {args.out}")
    print(f"{'estimator':<10} {'min improvement':>16} {'max improvement':>16}")
    for est in config.estimators:
        imp = [r.improvement for r in table.select(est)]
        print(f"{est.key:<10} {min(imp):16.4f} {max(imp):16.4f}")
    return EXIT_OK


# --- tables -------------------------------------------------------------------

def cmd_tables(args) -> int:
    which = list(range(3, 9)) if args.which == "all" else [int(args.which)]
    n_dev = 0
    for t in which:
        cols = tables.columns(t)
        target = "sigma1" if t <= 5 else "sigma2"
        print(f"Table {t}: {target}, {tables.TABLE_LOSS[t]} loss")
        header = f"{'(a1,a2)':<9} {'(b1,b2)':<9}" + "".join(f"{c.key:>10}" for c in cols)
        print(header)
        rows = tables.reproduce(t, args.reconstruct_missing)
        devs = tables.compare(t, args.reconstruct_missing) if args.compare else []
        for i, row in enumerate(rows):
            mark = " ~" if row.approximate else ""
            print(f"{str(row.a):<9} {str(row.b):<9}" + "".join(f"{v:10.2f}" for v in row.values) + mark)
            if args.compare:
                pub = tables.PUBLISHED[t][i]
                print(f"{'published':<19}" + "".join(f"{v:10.2f}" for v in pub))
        if any(r.approximate for r in rows):
            print("~ approximate: the 5 mm sample has 29 values; the last rank is clamped "
                  "(use --reconstruct-missing)")
        for d in devs:
            print(f"  deviation: row {d.row + 1} {d.estimator.key}: computed {d.computed:.4f}, "
                  f"published {d.published:.2f} (diff {d.diff:+.4f})")
        n_dev += len(devs)
        print()
    if args.compare:
        print(f"{n_dev} cell(s) deviate by more than {tables.TOLERANCE}")
    return EXIT_OK


# --- parser -------------------------------------------------------------------

def _add_estimate_flags(p, data_source=True):
    if data_source:
        p.add_argument("--builtin", choices=["jute"], help="use the embedded jute-fibre data")
        p.add_argument("--reconstruct-missing", action="store_true",
                       help="append the reconstructed 30th observation to the 5 mm sample")
    p.add_argument("--data1", help="data file for population 1 (one value per line)")
    p.add_argument("--data2", help="data file for population 2")
    p.add_argument("--loss", choices=sorted(LOSSES), default="quadratic")
    p.add_argument("--target", choices=["sigma1", "sigma2", "both"], default="both")
    p.add_argument("--estimators", help="comma-separated estimator keys, or 'all' (default)")
    p.add_argument("--alpha", type=float, default=1.5, help="Maruyama family index (>= 1)")
    p.add_argument("--epsilon", type=float, default=1.0, help="Strawderman shrinkage exponent (> 0)")
    p.add_argument("--format", choices=["table", "csv"], default="table")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ordscale", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("estimate", help="estimate sigma1 and sigma2 from two samples")
    _add_estimate_flags(p)
    for k in ("a1", "b1", "a2", "b2"):
        p.add_argument(f"--{k}", type=int)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("schemes", help="estimate under a special sampling scheme")
    _add_estimate_flags(p, data_source=False)
    p.add_argument("--scheme", choices=["iid", "type2", "progressive", "records"], required=True)
    for i in (1, 2):
        p.add_argument(f"--N{i}", type=int, help=f"type-II: units on test in population {i}")
        p.add_argument(f"--r{i}", type=int, help=f"type-II: observed failures in population {i}")
        p.add_argument(f"--removals{i}", help=f"progressive: comma-separated removal counts for population {i}")
    p.set_defaults(func=cmd_schemes)

    p = sub.add_parser("simulate", help="Monte Carlo risk curves written as CSV")
    p.add_argument("--out", required=True)
    p.add_argument("--preset", help=f"figure configuration: {', '.join(PRESETS)}")
    p.add_argument("--panel", type=int, default=1, help="which (n, mu) configuration of the preset")
    p.add_argument("--config", help="key=value file with simulation settings")
    for k in ("n1", "n2", "a1", "a2", "b1", "b2", "replicates", "seed"):
        p.add_argument(f"--{k}", type=int)
    for k in ("mu1", "mu2", "alpha", "epsilon", "sigma2"):
        p.add_argument(f"--{k}", type=float)
    p.add_argument("--eta", help="grid as 'lo:hi:step' or comma list (default 0.1:1.0:0.1)")
    p.add_argument("--loss", choices=sorted(LOSSES))
    p.add_argument("--target", choices=["sigma1", "sigma2"])
    p.add_argument("--estimators", help="comma-separated estimator keys, or 'all'")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("tables", help="reproduce the jute-fibre estimate tables")
    p.add_argument("--which", default="all", choices=[str(i) for i in range(3, 9)] + ["all"])
    p.add_argument("--compare", action="store_true", help="show published values and flag deviations")
    p.add_argument("--reconstruct-missing", action="store_true",
                   help="append the reconstructed 30th observation to the 5 mm sample")
    p.set_defaults(func=cmd_tables)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (NumericalError, BracketError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

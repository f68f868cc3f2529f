"""Command-line front end: config ingestion and deterministic result files.

Commands
--------
curve       CycleReport rows over a log grid of cycle times, per bath pair.
transient   (t, nbar) samples of the approach to the steady cycle.
optimize    stroke-split optimization per pair, with cross-sections and an
            optimized-vs-default power comparison.
verify      run the property-check suite; nonzero exit on any failure.
pi-sweep    max power and per-cycle work along the coherence interpolation.

Configuration is a flat INI file (sections [baths], [engine], [sweep],
[optimize], [transient], [verify]); anything omitted falls back to the
built-in preset.  Every knob a command consumes is echoed into its output,
so a result file plus this package version reproduces itself byte for byte.
Curve files are CSV with a '#'-prefixed metadata block; reports are JSON.
"""

from __future__ import annotations

import argparse
import configparser
import hashlib
import json
import os
import sys
from dataclasses import asdict

import numpy as np

from . import __version__
from .baths import beta_from_nbar, derive_pair, incoherent_pair, pair_record, AtomBath, PAIR_KINDS
from .cycle import OttoConfig, power_curve, run_cycle, steady_cycle_nbar, transient_trajectory
from .errors import EngineError, NoProfitableCycleError
from .optimize import SweepSpec, max_power_pqr, pi_sweep, scan_max_power
from .verify import format_results, run_checks

DEFAULTS = {
    "baths": {
        "mode": "nbar",  # nbar | beta | raw
        "nbar_hot": "2.0",
        "nbar_cold": "0.55",
        "beta_h": "",
        "beta_c": "",
        "e_h": "",
        "g_h": "",
        "e_c": "",
        "g_c": "",
        "omega": "1.0",
        "ell": "2",
    },
    "engine": {
        "omega_h": "1.0",
        "omega_c": "0.5",
        "kappa": "1.0",
        "p": "0.5",
        "q": "0.5",
        "r": "0.5",
        "t_cycle": "20.0",
    },
    "sweep": {"t_min": "1e-2", "t_max": "1e3", "grid": "200"},
    "optimize": {
        "coord_lo": "0.02",
        "coord_hi": "0.98",
        "coord_grid": "49",
        "max_rounds": "20",
        "improve_tol": "1e-8",
    },
    "transient": {"nbar0": "6.0", "cycles": "40", "samples_per_stroke": "25"},
    "verify": {"draws": "100", "quad_agreement_tol": "1e-9", "fast": "false"},
}

CURVE_COLUMNS = (
    "pair", "t_cycle", "nbar_c", "nbar_h", "work", "heat_hot", "heat_cold",
    "cost_expansion", "cost_compression", "efficiency", "power", "profitable",
)


class ConfigError(Exception):
    pass


def load_config(path: str | None) -> configparser.ConfigParser:
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    parser.read_dict(DEFAULTS)
    if path is not None:
        if not os.path.exists(path):
            raise ConfigError(f"config file not found: {path}")
        parser.read(path)
    return parser


def _flat(parser: configparser.ConfigParser) -> dict[str, str]:
    flat = {}
    for section in parser.sections():
        for key, value in parser.items(section):
            flat[f"{section}.{key}"] = value
    return dict(sorted(flat.items()))


def config_hash(flat: dict[str, str]) -> str:
    payload = "\n".join(f"{k}={v}" for k, v in flat.items())
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


def resolve_baths(parser) -> tuple[AtomBath, AtomBath, dict]:
    """Base (incoherent-role) pair from the [baths] section.

    Returns (hot, cold, provenance-record); raises ConfigError on anything
    the bath algebra rejects, so the caller can exit with a diagnostic.
    """
    sec = parser["baths"]
    omega = sec.getfloat("omega")
    ell = sec.getint("ell")
    mode = sec.get("mode").strip()
    try:
        if mode == "raw":
            hot = AtomBath(E=sec.getfloat("e_h"), G=sec.getfloat("g_h"), ell=ell, label="raw-hot")
            cold = AtomBath(E=sec.getfloat("e_c"), G=sec.getfloat("g_c"), ell=ell, label="raw-cold")
            beta_h = hot.effective_beta(omega)
            beta_c = cold.effective_beta(omega)
            if beta_c <= beta_h:
                raise ConfigError(
                    f"cold bath must be colder than hot; effective betas are {beta_c} <= {beta_h}"
                )
        else:
            if mode == "beta":
                beta_h = sec.getfloat("beta_h")
                beta_c = sec.getfloat("beta_c")
            elif mode == "nbar":
                beta_h = beta_from_nbar(sec.getfloat("nbar_hot"), omega)
                beta_c = beta_from_nbar(sec.getfloat("nbar_cold"), omega)
            else:
                raise ConfigError(f"unknown baths mode {mode!r}")
            hot, cold = incoherent_pair(beta_h, beta_c, omega, ell)
    except (EngineError, ValueError, TypeError) as exc:
        raise ConfigError(f"invalid bath configuration: {exc}") from exc
    record = pair_record("I", hot, cold, beta_h, beta_c, omega)
    return hot, cold, record


def pairs_for(parser, kinds: list[str]) -> dict[str, tuple[AtomBath, AtomBath]]:
    hot, cold, _ = resolve_baths(parser)
    omega = parser["baths"].getfloat("omega")
    out = {}
    for kind in kinds:
        try:
            out[kind] = derive_pair(kind, hot, cold, omega=omega)
        except EngineError as exc:
            raise ConfigError(f"cannot build the {kind} pair: {exc}") from exc
    return out


def parse_pairs(text: str) -> list[str]:
    kinds = [k.strip().upper() for k in text.split(",") if k.strip()]
    for kind in kinds:
        if kind not in PAIR_KINDS:
            raise ConfigError(f"unknown pair kind {kind!r}; choose from {PAIR_KINDS}")
    return kinds


def engine_cfg(parser, pair, t_cycle: float) -> OttoConfig:
    eng = parser["engine"]
    return OttoConfig.from_fractions(
        hot=pair[0], cold=pair[1],
        omega_h=eng.getfloat("omega_h"), omega_c=eng.getfloat("omega_c"),
        t_cycle=t_cycle,
        p=eng.getfloat("p"), q=eng.getfloat("q"), r=eng.getfloat("r"),
        kappa=eng.getfloat("kappa"),
    )


def sweep_spec(parser, pair) -> SweepSpec:
    eng, swp, opt = parser["engine"], parser["sweep"], parser["optimize"]
    return SweepSpec(
        hot=pair[0], cold=pair[1],
        omega_h=eng.getfloat("omega_h"), omega_c=eng.getfloat("omega_c"),
        kappa=eng.getfloat("kappa"),
        p=eng.getfloat("p"), q=eng.getfloat("q"), r=eng.getfloat("r"),
        t_range=(swp.getfloat("t_min"), swp.getfloat("t_max")),
        t_grid=swp.getint("grid"),
        coord_bounds=(opt.getfloat("coord_lo"), opt.getfloat("coord_hi")),
        coord_grid=opt.getint("coord_grid"),
        improve_tol=opt.getfloat("improve_tol"),
        max_rounds=opt.getint("max_rounds"),
        t_ref=eng.getfloat("t_cycle"),
    )


# ---------------------------------------------------------------------------
# output plumbing

def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def write_csv(path: str, columns, rows, meta: dict) -> None:
    lines = [f"# {k} = {_fmt(v)}" for k, v in sorted(meta.items())]
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def write_json(path: str, record: dict) -> None:
    with open(path, "w") as fh:
        json.dump(record, fh, indent=2, sort_keys=True, default=_json_default)
        fh.write("\n")


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj)}")


def run_record(command: str, seed: int, flat_cfg: dict, payload) -> dict:
    return {
        "command": command,
        "version": __version__,
        "seed": seed,
        "config": flat_cfg,
        "config_hash": config_hash(flat_cfg),
        "payload": payload,
    }


def _meta(command: str, seed: int, flat_cfg: dict) -> dict:
    return {
        "command": command,
        "version": __version__,
        "seed": seed,
        "config_hash": config_hash(flat_cfg),
        **{f"config.{k}": v for k, v in flat_cfg.items()},
    }


def _out_dir(args) -> str:
    out = args.out or os.environ.get("OTTO_OUT_DIR") or "."
    os.makedirs(out, exist_ok=True)
    return out


# ---------------------------------------------------------------------------
# commands

def cmd_curve(args, parser) -> int:
    kinds = parse_pairs(args.pairs)
    pairs = pairs_for(parser, kinds)
    swp = parser["sweep"]
    grid = args.grid or swp.getint("grid")
    ts = np.exp(np.linspace(np.log(swp.getfloat("t_min")), np.log(swp.getfloat("t_max")), grid))
    rows = []
    for kind in kinds:
        for t in ts:
            rep = run_cycle(engine_cfg(parser, pairs[kind], float(t)))
            rows.append(
                (kind, float(t), rep.nbar_c, rep.nbar_h, rep.work, rep.heat_hot,
                 rep.heat_cold, rep.cost_expansion, rep.cost_compression,
                 rep.efficiency, rep.power, rep.profitable)
            )
    flat = _flat(parser)
    path = os.path.join(_out_dir(args), f"curve_{args.metric}.csv")
    meta = _meta(f"curve --metric {args.metric}", args.seed, flat)
    meta["pairs"] = ",".join(kinds)
    meta["metric"] = args.metric
    write_csv(path, CURVE_COLUMNS, rows, meta)
    print(path)
    return 0


def cmd_transient(args, parser) -> int:
    kinds = parse_pairs(args.pairs)
    pair = pairs_for(parser, kinds[:1])[kinds[0]]
    tr = parser["transient"]
    nbar0 = args.nbar0 if args.nbar0 is not None else tr.getfloat("nbar0")
    cycles = args.cycles or tr.getint("cycles")
    cfg = engine_cfg(parser, pair, parser["engine"].getfloat("t_cycle"))
    table = transient_trajectory(nbar0, cycles, cfg, tr.getint("samples_per_stroke"))
    flat = _flat(parser)
    meta = _meta("transient", args.seed, flat)
    meta["pair"] = kinds[0]
    meta["nbar0"] = nbar0
    meta["cycles"] = cycles
    meta["nbar_sc"] = steady_cycle_nbar(cfg)
    path = os.path.join(_out_dir(args), "transient.csv")
    write_csv(path, ("t", "nbar"), [tuple(row) for row in table], meta)
    print(path)
    return 0


def cmd_optimize(args, parser) -> int:
    kinds = parse_pairs(args.pairs)
    pairs = pairs_for(parser, kinds)
    out = _out_dir(args)
    flat = _flat(parser)
    for kind in kinds:
        spec = sweep_spec(parser, pairs[kind])
        try:
            optimum, sections = max_power_pqr(spec)
            payload = {
                "pair": kind,
                "optimum": asdict(optimum),
                "default": dict(zip(("t_cycle", "power"), scan_max_power(spec))),
            }
            # default split vs optimized split over the same cycle times
            ts = np.exp(np.linspace(np.log(spec.t_range[0]), np.log(spec.t_range[1]), spec.t_grid))
            p_def = power_curve(spec.hot, spec.cold, spec.omega_h, spec.omega_c,
                                ts, spec.p, spec.q, spec.r, spec.kappa)
            p_opt = power_curve(spec.hot, spec.cold, spec.omega_h, spec.omega_c,
                                ts, optimum.p, optimum.q, optimum.r, spec.kappa)
            meta = _meta("optimize", args.seed, flat)
            meta["pair"] = kind
            write_csv(
                os.path.join(out, f"power_comparison_{kind}.csv"),
                ("t_cycle", "power_default", "power_optimized"),
                list(zip(ts, p_def, p_opt)),
                meta,
            )
            section_rows = []
            for coord in ("p", "q", "r"):
                for x, val in sections[coord]:
                    section_rows.append((coord, float(x), float(val)))
            write_csv(
                os.path.join(out, f"cross_sections_{kind}.csv"),
                ("coordinate", "value", "max_power"),
                section_rows,
                meta,
            )
        except NoProfitableCycleError as exc:
            payload = {"pair": kind, "no_profitable_cycle": True, "detail": str(exc)}
        write_json(os.path.join(out, f"optimize_{kind}.json"),
                   run_record("optimize", args.seed, flat, payload))
        print(os.path.join(out, f"optimize_{kind}.json"))
    return 0


def cmd_verify(args, parser) -> int:
    ver = parser["verify"]
    results = run_checks(
        seed=args.seed,
        draws=ver.getint("draws"),
        quad_agreement_tol=ver.getfloat("quad_agreement_tol"),
        fast=ver.getboolean("fast"),
    )
    print(format_results(results))
    flat = _flat(parser)
    payload = [
        {"name": r.name, "passed": r.passed, "measured": r.measured, "threshold": r.threshold}
        for r in results
    ]
    write_json(os.path.join(_out_dir(args), "verify.json"),
               run_record("verify", args.seed, flat, payload))
    failed = [r for r in results if not r.passed]
    if failed:
        print(f"{len(failed)} check(s) failed", file=sys.stderr)
        return 1
    return 0


def cmd_pi_sweep(args, parser) -> int:
    hot, cold, _ = resolve_baths(parser)
    spec = sweep_spec(parser, (hot, cold))
    grid = args.grid or 21
    rows = pi_sweep(spec, (hot, cold), np.linspace(0.0, 1.0, grid))
    flat = _flat(parser)
    meta = _meta("pi-sweep", args.seed, flat)
    meta["argmax_pi_work_ref"] = max(rows, key=lambda r: r["work_ref"])["pi"]
    meta["argmax_pi_max_power"] = max(rows, key=lambda r: r["max_power"])["pi"]
    columns = ("pi", "E", "delta_h", "delta_c", "max_power", "t_at_max",
               "work_at_max", "work_ref")
    path = os.path.join(_out_dir(args), "pi_sweep.csv")
    write_csv(path, columns, [tuple(r[c] for c in columns) for r in rows], meta)
    print(path)
    return 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=None, help="INI config file")
    common.add_argument("--out", default=None, help="output directory (or $OTTO_OUT_DIR)")
    common.add_argument("--pairs", default="I,CH,CC", help="comma list from {I,CH,CC}")
    common.add_argument("--grid", type=int, default=None, help="grid-size override")
    common.add_argument("--seed", type=int, default=20240709, help="seed echoed into records")

    parser = argparse.ArgumentParser(prog="ottosim", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("curve", parents=[common], help="cycle-report rows over cycle times")
    p.add_argument("--metric", choices=("power", "efficiency", "cost"), default="power")
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("transient", parents=[common], help="approach to the steady cycle")
    p.add_argument("--nbar0", type=float, default=None)
    p.add_argument("--cycles", type=int, default=None)
    p.set_defaults(func=cmd_transient)

    p = sub.add_parser("optimize", parents=[common], help="stroke-split optimization")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("verify", parents=[common], help="run the property-check suite")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("pi-sweep", parents=[common], help="coherence interpolation sweep")
    p.set_defaults(func=cmd_pi_sweep)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        parser = load_config(args.config)
        return args.func(args, parser)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except EngineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

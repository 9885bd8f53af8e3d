"""Command-line front end.

Subcommands::

    channel-table  absorption/noise table over a frequency range (CSV)
    cutset         cut-set upper bounds for one network size
    mh             simulate the multihop TDMA scheme vs the closed form
    sweep          bound tables over network sizes (CSV)
    verify         run every order-law check; exit 3 if any fails

Common flags (before or after the subcommand): ``--seed``, ``--config``
(INI file with ``[channel]``, ``[mh]`` and ``[sweep]`` sections), ``--json``
and ``--threads`` (falls back to the ``AQUASCALE_THREADS`` environment
variable).  Exit codes: 0 success, 2 invalid arguments or config, 3
verification failure.
"""

from __future__ import annotations

import argparse
import configparser
import dataclasses
import json
import os
import sys

import numpy as np

from .channel import (PhysicalParams, absorption_coeff, absorption_db_per_km,
                      frequency_for_regime, noise_psd, params_for_absorption,
                      regime_params)
from .harness import _SWEEP_FAMILIES, SweepSpec, run_sweep, verify_all
from .routing import MhConfig, MhMode, mh_throughput, mh_throughput_random
from .topology import (Density, build_grid, build_random, cut, dense_split,
                       random_matching)
from .cutset import cutset_upper_dense, cutset_upper_extended

_CHANNEL_FIELDS = {f.name for f in dataclasses.fields(PhysicalParams)}
#: overrides regime_params / params_for_absorption accept without clashing
#: with the fields those constructors derive themselves
_REGIME_OK = ("alpha", "tx_power", "a1", "a5", "unit_length_km")
_PINNED_OK = ("alpha", "tx_power", "a4", "a5", "unit_length_km")


def _add_common(parser: argparse.ArgumentParser, suppress: bool) -> None:
    d = argparse.SUPPRESS if suppress else None
    parser.add_argument("--config", default=d, metavar="INI",
                        help="INI file with [channel]/[mh]/[sweep] defaults")
    parser.add_argument("--seed", type=int, default=d if suppress else 0)
    parser.add_argument("--threads", type=int, default=d,
                        help="sweep worker threads (default $AQUASCALE_THREADS or 1)")
    parser.add_argument("--json", action="store_true",
                        default=argparse.SUPPRESS if suppress else False,
                        help="emit JSON instead of text/CSV")


def _parser() -> argparse.ArgumentParser:
    root = argparse.ArgumentParser(
        prog="aquascale",
        description="Throughput scaling bounds for underwater acoustic networks.")
    _add_common(root, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _add_common(common, suppress=True)
    sub = root.add_subparsers(dest="command", required=True)

    t = sub.add_parser("channel-table", parents=[common],
                       help="absorption and noise over a frequency range")
    t.add_argument("--f-min", type=float, default=1.0)
    t.add_argument("--f-max", type=float, default=64.0)
    t.add_argument("--points", type=int, default=64)

    for name, help_ in (("cutset", "cut-set upper bounds for one size"),
                        ("mh", "simulate the multihop TDMA scheme")):
        q = sub.add_parser(name, parents=[common], help=help_)
        q.add_argument("--n", type=int, required=True)
        densities = ("extended", "dense") if name == "cutset" else \
                    ("extended", "dense", "random")
        q.add_argument("--density", choices=densities, default="extended")
        q.add_argument("--f", type=float, default=None,
                       help="carrier in kHz (defaults to the regime frequency)")
        q.add_argument("--beta", type=float, default=0.0,
                       help="bandwidth-scaling exponent (dense only)")
        q.add_argument("--a", type=float, default=None,
                       help="pin the absorption coefficient exactly (extended)")
        q.add_argument("--alpha", type=float, default=None)
        q.add_argument("--eps0", type=float, default=None)

    s = sub.add_parser("sweep", parents=[common],
                       help="bound tables over network sizes (CSV)")
    s.add_argument("--family", choices=_SWEEP_FAMILIES, required=True)
    s.add_argument("--n", required=True, metavar="N1,N2,...")
    s.add_argument("--betas", default="0", metavar="B1,B2,...")
    s.add_argument("--seeds", default=None, metavar="S1,S2,...")
    s.add_argument("--f", type=float, default=10.0)
    s.add_argument("--a", type=float, default=None)
    s.add_argument("--alpha", type=float, default=None)
    s.add_argument("--out", default=None, help="CSV path (default stdout)")

    sub.add_parser("verify", parents=[common],
                   help="run every order-law check (exit 3 on failure)")
    return root


def _load_config(path: str | None) -> configparser.ConfigParser:
    cfg = configparser.ConfigParser()
    if path:
        if not cfg.read(path):
            raise ValueError(f"config file not found: {path}")
    return cfg


def _section(cfg: configparser.ConfigParser, name: str) -> dict:
    return dict(cfg[name]) if cfg.has_section(name) else {}


def _channel_overrides(cfg) -> dict:
    out = {}
    for key, raw in _section(cfg, "channel").items():
        if key not in _CHANNEL_FIELDS:
            raise ValueError(f"unknown [channel] parameter: {key}")
        out[key] = float(raw)
    return out


def _restrict(overrides: dict, allowed: tuple, context: str) -> dict:
    bad = sorted(set(overrides) - set(allowed))
    if bad:
        raise ValueError(f"[channel] keys {bad} conflict with {context}; "
                         f"only {list(allowed)} apply there")
    return overrides


def _resolve_params(args, cfg, dense: bool, eps0: float) -> PhysicalParams:
    ch = _channel_overrides(cfg)
    if getattr(args, "alpha", None) is not None:
        ch["alpha"] = args.alpha
    if dense:
        ch = _restrict(ch, _REGIME_OK, "the dense regime construction")
        return regime_params(eps0, **ch)
    if getattr(args, "a", None) is not None:
        ch = _restrict(ch, _PINNED_OK, "a pinned absorption coefficient")
        pin_f = getattr(args, "f", None) or 1.0
        return params_for_absorption(args.a, f_khz=pin_f, **ch)
    return PhysicalParams(**ch)


def _mh_config(cfg, mode: MhMode) -> MhConfig:
    mh = _section(cfg, "mh")
    kwargs = {}
    if "tdma_reuse" in mh:
        kwargs["tdma_reuse"] = int(mh["tdma_reuse"])
    if "delta" in mh:
        kwargs["delta"] = float(mh["delta"])
    return MhConfig(mode, **kwargs)


def _sweep_defaults(cfg) -> dict:
    sw = _section(cfg, "sweep")
    out = {}
    if "eps0" in sw:
        out["eps0"] = float(sw["eps0"])
    if "eps" in sw:
        out["eps"] = float(sw["eps"])
    if "seeds" in sw:
        out["seeds"] = tuple(int(v) for v in sw["seeds"].split(","))
    return out


def _check_regular_n(n: int) -> None:
    side = 0 if n < 4 else int(np.sqrt(n) + 0.5)
    if n < 4 or side * side != n or side % 2:
        raise ValueError(f"n must be a perfect square with an even side "
                         f"(a regular half-by-half grid), got {n}")


def _emit(payload, as_json: bool, lines) -> None:
    if as_json:
        print(json.dumps(payload, sort_keys=True, indent=2, default=float))
    else:
        for line in lines:
            print(line)


def _cmd_channel_table(args, cfg) -> int:
    p = _resolve_params(args, cfg, dense=False, eps0=0.5)
    if args.points < 2 or args.f_max <= args.f_min or args.f_min <= 0:
        raise ValueError("need points >= 2 and 0 < f-min < f-max")
    fs = np.linspace(args.f_min, args.f_max, args.points)
    rows = [{"f_khz": float(f),
             "absorption_db_per_km": absorption_db_per_km(float(f), p),
             "absorption_coeff": absorption_coeff(float(f), p),
             "noise_psd": noise_psd(float(f), p)} for f in fs]
    if args.json:
        print(json.dumps(rows, sort_keys=True, indent=2, default=float))
    else:
        cols = ("f_khz", "absorption_db_per_km", "absorption_coeff", "noise_psd")
        print(",".join(cols))
        for r in rows:
            print(",".join(repr(r[c]) for c in cols))
    return 0


def _cmd_cutset(args, cfg) -> int:
    _check_regular_n(args.n)
    eps0 = args.eps0 if args.eps0 is not None else \
        _sweep_defaults(cfg).get("eps0", 0.5)
    dense = args.density == "dense"
    p = _resolve_params(args, cfg, dense, eps0)
    if dense:
        grid = build_grid(args.n, Density.DENSE)
        f = args.f if args.f is not None else \
            frequency_for_regime(args.n, args.beta, eps0, p)
        primary, closed = cutset_upper_dense(grid, dense_split(grid, args.beta),
                                             f, args.beta, p, eps0)
    else:
        grid = build_grid(args.n, Density.EXTENDED)
        f = args.f if args.f is not None else p.f_ref
        primary, closed = cutset_upper_extended(grid, cut(grid), f, p)
    payload = {"n": args.n, "density": args.density, "f_khz": f,
               "beta": args.beta if dense else None,
               primary.kind.value: primary.value,
               "closed_form": closed.value, "regime": primary.regime.value}
    _emit(payload, args.json, [
        f"n = {args.n}  density = {args.density}  f = {f:.4g} kHz  "
        f"regime = {primary.regime.value}",
        f"{primary.kind.value}: T <= {primary.value:.6g}",
        f"{closed.kind.value}:  T <= {closed.value:.6g}",
    ])
    return 0


def _cmd_mh(args, cfg) -> int:
    eps0 = args.eps0 if args.eps0 is not None else \
        _sweep_defaults(cfg).get("eps0", 0.5)
    dense = args.density == "dense"
    p = _resolve_params(args, cfg, dense, eps0)
    if args.density == "random":
        if args.n < 4:
            raise ValueError(f"n must be >= 4, got {args.n}")
        grid = build_random(args.n, args.seed)
        f = args.f if args.f is not None else p.f_ref
        rep = mh_throughput_random(grid, random_matching(args.n, args.seed + 1),
                                   f, _mh_config(cfg, MhMode.RANDOM_LOG_CELLS), p)
    else:
        _check_regular_n(args.n)
        matching = random_matching(args.n, args.seed)
        if dense:
            grid = build_grid(args.n, Density.DENSE)
            f = args.f if args.f is not None else \
                frequency_for_regime(args.n, args.beta, eps0, p)
            rep = mh_throughput(grid, matching, f,
                                _mh_config(cfg, MhMode.DENSE_SCALED_POWER), p,
                                beta=args.beta, eps0=eps0)
        else:
            grid = build_grid(args.n, Density.EXTENDED)
            f = args.f if args.f is not None else p.f_ref
            rep = mh_throughput(grid, matching, f,
                                _mh_config(cfg, MhMode.EXTENDED_FULL_POWER), p)
    d = rep.to_dict()
    _emit(d, args.json, [
        f"n = {d['n']}  mode = {d['mode']}  f = {d['f_khz']:.4g} kHz",
        f"simulated T = {d['simulated_T']:.6g}   closed form = "
        f"{d['closed_form_T']:.6g}   ratio = {d['ratio']:.4g}",
        f"min hop rate = {d['min_hop_rate']:.6g}   max cell load = "
        f"{d['max_cell_load']}   failures = {d['failures']}",
    ])
    return 0


def _cmd_sweep(args, cfg, threads: int) -> int:
    defaults = _sweep_defaults(cfg)
    try:
        n_list = tuple(int(v) for v in args.n.split(","))
        betas = tuple(float(v) for v in args.betas.split(","))
        seeds = tuple(int(v) for v in args.seeds.split(",")) if args.seeds \
            else defaults.get("seeds", (args.seed,))
    except ValueError:
        raise ValueError("--n/--betas/--seeds must be comma-separated numbers")
    alphas = (args.alpha,) if args.alpha is not None else (1.5,)
    spec = SweepSpec(family=args.family, n_list=n_list, alpha_list=alphas,
                     f_khz=args.f, a_value=args.a, beta_list=betas,
                     seeds=seeds, eps0=defaults.get("eps0", 0.5),
                     eps=defaults.get("eps", 0.01))
    table = run_sweep(spec, threads=threads)
    if args.json:
        print(json.dumps({"rows": table.rows, "failures": table.failures},
                         sort_keys=True, indent=2, default=float))
    elif args.out:
        with open(args.out, "w", newline="") as fh:
            table.to_csv(fh)
    else:
        table.to_csv(sys.stdout)
    for failure in table.failures:
        print(f"sweep point failed: {failure}", file=sys.stderr)
    return 0


def _cmd_verify(args, cfg) -> int:
    if args.json:
        report = verify_all(seed=args.seed)
        print(json.dumps(report.to_dict(), sort_keys=True, indent=2, default=float))
    else:
        report = verify_all(seed=args.seed,
                            progress=lambda c: print(c.line(), flush=True))
        status = "all checks passed" if report.all_passed else "CHECKS FAILED"
        print(f"{status} in {report.elapsed_s:.1f} s")
    return 0 if report.all_passed else 3


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        cfg = _load_config(args.config)
        threads = args.threads if args.threads is not None else \
            int(os.environ.get("AQUASCALE_THREADS", "1"))
        if threads < 1:
            raise ValueError(f"threads must be >= 1, got {threads}")
        if args.command == "channel-table":
            return _cmd_channel_table(args, cfg)
        if args.command == "cutset":
            return _cmd_cutset(args, cfg)
        if args.command == "mh":
            return _cmd_mh(args, cfg)
        if args.command == "sweep":
            return _cmd_sweep(args, cfg, threads)
        return _cmd_verify(args, cfg)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()

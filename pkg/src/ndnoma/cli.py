"""Command-line interface.

Subcommands: sweep (config file -> CSV), point (single operating point to
stdout), validate (quick invariant suite), selftest-determinism (byte-exact
reproducibility across reruns and worker counts). Exit codes: 0 success,
1 runtime failure, 2 configuration/usage error.
"""

from __future__ import annotations

import argparse
import hashlib
import sys

from . import harness
from .harness import ConfigError, SweepConfig


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--seed", type=int, default=None, help="master seed override")
    p.add_argument("--workers", type=int, default=None,
                   help="worker processes (NDNOMA_WORKERS is the fallback)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ndnoma",
        description="Noise-domain NOMA link simulator and BEP analysis engine.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sweep = sub.add_parser("sweep", help="run a sweep from a config file")
    p_sweep.add_argument("config", help="flat key=value config file")
    p_sweep.add_argument("--out", required=True, help="output CSV path")
    _add_common(p_sweep)

    p_point = sub.add_parser("point", help="run one operating point")
    p_point.add_argument("--scheme", required=True, choices=harness.SCHEMES)
    p_point.add_argument("--k-db", type=float, default=0.0)
    p_point.add_argument("--n", type=int, default=100)
    p_point.add_argument("--delta-db", type=float, default=0.0)
    p_point.add_argument("--gamma-bar-db", type=float, default=10.0)
    p_point.add_argument("--bits", type=int, default=100_000)
    p_point.add_argument("--j-points", type=int, default=100_000)
    p_point.add_argument("--alpha", type=float, default=10.0)
    p_point.add_argument("--p-dbm", type=float, default=30.0)
    p_point.add_argument("--beta", type=float, default=0.01)
    p_point.add_argument("--psi", type=float, default=0.5)
    p_point.add_argument("--rho-far", type=float, default=0.8)
    p_point.add_argument("--threshold", choices=("clt", "static"), default="clt")
    _add_common(p_point)

    p_val = sub.add_parser("validate", help="run the quick invariant suite")
    _add_common(p_val)

    p_det = sub.add_parser("selftest-determinism",
                           help="check byte-identical output across runs and "
                                "worker counts {1, 8}")
    _add_common(p_det)

    return parser


def _cmd_sweep(args) -> int:
    cfg = harness.load_config(args.config)
    if args.seed is not None:
        cfg = SweepConfig(**{**_cfg_dict(cfg), "master_seed": args.seed})
    workers = harness.resolve_workers(args.workers, cfg.workers)
    results = harness.run_sweep(cfg, workers=workers)
    harness.write_csv(results, args.out)
    print(f"wrote {len(results)} rows to {args.out}")
    return 0


def _cfg_dict(cfg: SweepConfig) -> dict:
    return {f: getattr(cfg, f) for f in cfg.__dataclass_fields__}


def _cmd_point(args) -> int:
    x_grid = ((args.gamma_bar_db,) if args.scheme == "pdnoma-comparison"
              else (args.delta_db,))
    cfg = SweepConfig(
        scheme=args.scheme,
        k_db_list=(args.k_db,),
        n_list=(args.n,),
        delta_db_grid=x_grid if args.scheme != "pdnoma-comparison" else (0.0,),
        gamma_bar_db_grid=x_grid,
        alpha=args.alpha, p_dbm=args.p_dbm, beta=args.beta, psi=args.psi,
        rho_far=args.rho_far, bits_per_point=args.bits, j_points=args.j_points,
        master_seed=args.seed if args.seed is not None else 1234,
        threshold_mode=args.threshold)
    workers = harness.resolve_workers(args.workers, cfg.workers)
    results = harness.run_sweep(cfg, workers=workers)
    print(harness.results_to_csv_text(results), end="")
    return 0


def _cmd_selftest(args) -> int:
    seed = args.seed if args.seed is not None else 20240901
    cfg = SweepConfig(
        scheme="uplink-ndnoma", k_db_list=(0.0, 10.0), n_list=(50,),
        delta_db_grid=(-10.0, 0.0), bits_per_point=20_000, j_points=5_000,
        master_seed=seed, block_size=7_000)
    digests = []
    for workers in (1, 8, 1):
        text = harness.results_to_csv_text(
            harness.run_sweep(cfg, workers=workers, zero_wall=True))
        digest = hashlib.sha256(text.encode()).hexdigest()
        digests.append(digest)
        print(f"workers={workers}: sha256 {digest}")
    if len(set(digests)) != 1:
        print("determinism selftest FAILED: digests differ", file=sys.stderr)
        return 1
    print("determinism selftest passed")
    return 0


def _cmd_validate(args) -> int:
    from . import validate

    seed = args.seed if args.seed is not None else 987
    return validate.run_all(seed)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "sweep":
            return _cmd_sweep(args)
        if args.command == "point":
            return _cmd_point(args)
        if args.command == "validate":
            return _cmd_validate(args)
        return _cmd_selftest(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Command line entry point: ``burgers-bt {exact,ivp,xval,oracle}``.

Exit status is 0 when every check passes, 1 when a check fails and 2 when the
configuration is invalid.  The output directory comes from ``--out``, then
the ``BURGERS_BT_OUT_DIR`` environment variable, then the config.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace

from .errors import ConfigInvalid
from .scenarios import config_error_report, default_config, emit_fields, load_config, run_scenario

SUBCOMMANDS = {
    "exact": "exact-recurrence",
    "ivp": "ivp-pipeline",
    "xval": "cross-validate",
    "oracle": "oracle-compare",
}
OUT_ENV = "BURGERS_BT_OUT_DIR"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="burgers-bt", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, kind in SUBCOMMANDS.items():
        p = sub.add_parser(name, help=f"run a {kind} scenario")
        p.add_argument("--config", help="JSON scenario file (defaults are used when absent)")
        p.add_argument("--out", help="output directory")
        p.add_argument("--format", choices=("csv", "bin"), help="field file format")
        p.add_argument("--seed", type=int, help="RNG seed for sample points")
        p.add_argument("--depth", type=int, help="recurrence depth")
        p.add_argument("--dump-config", action="store_true",
                       help="print the effective config and exit")
    return parser


def _effective_config(args):
    kind = SUBCOMMANDS[args.command]
    cfg = load_config(args.config) if args.config else default_config(kind)
    cfg = replace(cfg, kind=kind)
    if args.seed is not None:
        cfg = replace(cfg, samples=replace(cfg.samples, rng_seed=args.seed))
    if args.depth is not None:
        cfg = replace(cfg, depth=args.depth)
    out = args.out or os.environ.get(OUT_ENV)
    if out:
        cfg = replace(cfg, output=replace(cfg.output, dir=out))
    if args.format:
        cfg = replace(cfg, output=replace(cfg.output, format=args.format))
    problems = cfg.problems()
    if problems:
        raise ConfigInvalid(problems)
    return cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _effective_config(args)
    except ConfigInvalid as exc:
        rep = config_error_report(SUBCOMMANDS[args.command], exc.problems,
                                  args.seed if args.seed is not None else 0)
        out = args.out or os.environ.get(OUT_ENV)
        if out:
            emit_fields(rep, out)
        print(rep.summary(), file=sys.stderr)
        return 2
    if args.dump_config:
        sys.stdout.write(cfg.to_json())
        return 0
    rep = run_scenario(cfg)
    print(rep.summary())
    print(f"outputs in {cfg.output.dir}")
    return 0 if rep.passed else 1


if __name__ == "__main__":
    raise SystemExit(main())

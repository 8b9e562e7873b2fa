"""Command-line entry point: ``supersplit {cohomology,split-check,examples,bundle}``.

Exit codes: 0 ok, 1 reference mismatch, 2 bad input, 3 not stabilized,
4 inconclusive certificate.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from .cohomology import NotStabilized, rao_table
from .reproduce import FAULTS, tangent_example
from .sheaf import BUILTIN_NAMES, TransitionBundle, builtin_bundle, dumps, find_cocycle_failure, loads
from .splitting import INCONCLUSIVE, split_certify
from .superring import SuperSpaceSig
from .supermodule import ShapeError

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT, EXIT_NOT_STABILIZED, EXIT_INCONCLUSIVE = 0, 1, 2, 3, 4


class InputError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    space: SuperSpaceSig | None
    builtin: str | None
    input: str | None
    twist: int | None
    degree: int | None
    window: tuple | None
    format: str
    seed: int
    verbose: bool
    fault: str | None = None


def _pair(text: str, what: str) -> tuple[int, int]:
    try:
        a, b = (int(s) for s in text.split(","))
    except ValueError:
        raise InputError(f"{what} must look like A,B, got {text!r}") from None
    return a, b


def _config(args) -> RunConfig:
    space = None
    if args.space is not None:
        n, m = _pair(args.space, "--space")
        if n < 0 or m < 0:
            raise InputError("--space needs n, m >= 0")
        space = SuperSpaceSig(n, m)
    window = None
    if args.window is not None:
        window = _pair(args.window, "--window")
        if window[0] > window[1]:
            raise InputError(f"--window needs t_min <= t_max, got {args.window}")
    return RunConfig(args.command, space, args.builtin, args.input, args.twist, getattr(args, "i", None),
                     window, args.format, args.seed, args.verbose, getattr(args, "inject_fault", None))


def load_bundle(cfg: RunConfig):
    if (cfg.builtin is None) == (cfg.input is None):
        raise InputError("give exactly one of --builtin or --input")
    if cfg.builtin is not None:
        if cfg.space is None:
            raise InputError("--builtin needs --space n,m")
        return builtin_bundle(cfg.builtin, cfg.space)
    text = cfg.input
    if not text.lstrip().startswith("{"):
        with (sys.stdin if text == "-" else open(text)) as fh:
            text = fh.read()
    E = loads(text)
    if cfg.space is not None and E.space != cfg.space:
        raise InputError(f"bundle lives on {E.space}, not on {cfg.space}")
    if isinstance(E, TransitionBundle):
        failure = find_cocycle_failure(E)
        if failure is not None:
            raise InputError(f"invalid transition data: {failure}")
    return E


def _emit(cfg: RunConfig, payload: dict, text: str) -> None:
    if cfg.format == "json":
        sys.stdout.write(json.dumps(payload, indent=1) + "\n")
    else:
        sys.stdout.write(text + "\n")


def cmd_cohomology(cfg: RunConfig) -> int:
    E = load_bundle(cfg)
    if cfg.twist is not None and cfg.window is not None:
        raise InputError("give --twist or --window, not both")
    lo, hi = cfg.window or ((cfg.twist, cfg.twist) if cfg.twist is not None else (0, 0))
    degrees = [cfg.degree] if cfg.degree is not None else list(range(E.space.n + 1))
    if any(i < 0 or i > E.space.n for i in degrees):
        raise InputError(f"--i must lie in 0..{E.space.n}")
    tables = [rao_table(E, i, lo, hi) for i in degrees]
    if lo == hi and len(tables) == 1:
        text = str(tables[0].entries[lo])
    else:
        text = "\n\n".join(tab.to_text() for tab in tables)
    payload = {"space": {"n": E.space.n, "m": E.space.m}, "tables": [tab.to_json() for tab in tables]}
    _emit(cfg, payload, text)
    return EXIT_OK


def cmd_split_check(cfg: RunConfig) -> int:
    E = load_bundle(cfg)
    cert = split_certify(E, seed=cfg.seed, window=cfg.window)
    lines = [f"verdict: {cert.verdict}"]
    if cert.even or cert.odd:
        lines.append(f"splitting type: even {cert.even}, odd {cert.odd}")
    if cert.witness is not None:
        lines.append(f"witness: {json.dumps(cert.witness)}")
    if cert.iso is not None and cfg.verbose:
        lines += [f"phi_{i} = {m}" for i, m in sorted(cert.iso.items())]
    _emit(cfg, cert.to_json(), "\n".join(lines))
    return EXIT_INCONCLUSIVE if cert.verdict == INCONCLUSIVE else EXIT_OK


def cmd_examples(cfg: RunConfig) -> int:
    checks = tangent_example(seed=cfg.seed, fault=cfg.fault)
    failed = sum(not c.ok for c in checks)
    text = "\n".join([c.line() for c in checks] + [f"{len(checks) - failed}/{len(checks)} reference values matched"])
    _emit(cfg, {"checks": [c.to_json() for c in checks], "matched": len(checks) - failed,
                "total": len(checks)}, text)
    return EXIT_MISMATCH if failed else EXIT_OK


def cmd_bundle(cfg: RunConfig) -> int:
    sys.stdout.write(dumps(load_bundle(cfg)))
    return EXIT_OK


COMMANDS = {"cohomology": cmd_cohomology, "split-check": cmd_split_check,
            "examples": cmd_examples, "bundle": cmd_bundle}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--space", help="n,m for P^{n|m}")
    common.add_argument("--builtin", help="one of: " + ", ".join(BUILTIN_NAMES))
    common.add_argument("--input", help="bundle JSON file, '-' for stdin, or inline JSON")
    common.add_argument("--window", help="twist range A,B")
    common.add_argument("--format", choices=("table", "json"), default="table")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, help="worker processes (sets SUPERSPLIT_THREADS)")
    common.add_argument("-v", "--verbose", action="store_true")
    common.add_argument("--twist", type=int)

    parser = argparse.ArgumentParser(prog="supersplit", description="Cohomology and splitting of bundles on P^{n|m}.")
    sub = parser.add_subparsers(dest="command", required=True)
    coh = sub.add_parser("cohomology", parents=[common], help="cohomology tables H^i(E(t))")
    coh.add_argument("--i", type=int, help="cohomological degree (default: all)")
    sub.add_parser("split-check", parents=[common], help="certify whether a bundle splits")
    ex = sub.add_parser("examples", parents=[common], help="tangent bundle of P^{1|1} against reference values")
    ex.add_argument("--inject-fault", choices=FAULTS, help=argparse.SUPPRESS)
    sub.add_parser("bundle", parents=[common], help="print a bundle as JSON")
    return parser


def _glue_pairs(argv: list) -> list:
    """Let ``--window -4,0`` through argparse, which would read -4,0 as a flag."""
    out, it = [], iter(argv)
    for tok in it:
        if tok in ("--window", "--space"):
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(_glue_pairs(list(sys.argv[1:] if argv is None else argv)))
    if args.threads is not None:
        os.environ["SUPERSPLIT_THREADS"] = str(args.threads)
    try:
        cfg = _config(args)
        return COMMANDS[cfg.command](cfg)
    except NotStabilized as exc:
        if args.format == "json":
            sys.stdout.write(json.dumps(exc.to_json(), indent=1) + "\n")
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_STABILIZED
    except (InputError, ValueError, ShapeError, KeyError, TypeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

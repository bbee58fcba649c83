"""Command-line front end: ``run``, ``verify``, ``roundtrip`` and ``demo``."""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .errors import OrdpermError
from .harness import DEMO_MODELS, SUITES, U64, Scenario, parse_scenario, roundtrip, run, verify


def _u64(text: str) -> int:
    n = int(text)
    if not 0 <= n < U64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return n


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("trials must be at least 1")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_u64, help="override the scenario seed")
    common.add_argument("--trials", type=_positive, help="override the trial count")
    common.add_argument("--out", type=Path, help="output directory for report and certificates")

    p = argparse.ArgumentParser(prog="ordperm", description="Exact witness constructions for ordered permutation groups.")
    sub = p.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", parents=[common], help="run a scenario file")
    r.add_argument("scenario", type=Path)
    v = sub.add_parser("verify", help="re-check every certificate in a file")
    v.add_argument("cert_file", type=Path)
    t = sub.add_parser("roundtrip", help="parse, print and re-parse a file of elements or certificates")
    t.add_argument("file", type=Path)
    d = sub.add_parser("demo", parents=[common], help="run one suite on its default model")
    d.add_argument("suite", choices=SUITES)
    return p


def _apply_flags(sc: Scenario, args) -> Scenario:
    if args.seed is not None:
        sc = replace(sc, seed=args.seed)
    if args.trials is not None:
        sc = replace(sc, trials=args.trials)
    if args.out is not None:
        sc = replace(sc, output=str(args.out))
    return sc


def _run(sc: Scenario) -> int:
    report = run(sc)
    sys.stdout.write(report.text())
    print(f"wrote {Path(sc.output) / 'report.txt'}")
    return 0 if report.ok else 1


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _run(_apply_flags(parse_scenario(args.scenario.read_text()), args))
        if args.command == "demo":
            sc = Scenario(DEMO_MODELS[args.suite], (args.suite,), trials=5, output="demo-out")
            return _run(_apply_flags(sc, args))
        if args.command == "verify":
            results = verify(args.cert_file)
            for i, (claim, ok) in enumerate(results, 1):
                print(f"CERT {i} {claim} {'pass' if ok else 'fail'}")
            return 0 if all(ok for _, ok in results) else 1
        ok = roundtrip(args.file)
        print("roundtrip ok" if ok else "roundtrip mismatch")
        return 0 if ok else 1
    except (OrdpermError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

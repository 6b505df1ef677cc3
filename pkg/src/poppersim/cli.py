"""Command-line front end.

    poppersim discrete   [--config PATH] [--out PATH] [--format json|csv] [--seed N] [--shots N]
    poppersim continuous [--config PATH] [--out PATH] [--format json|csv]
    poppersim sweep      [--config PATH] [--out PATH] [--format json|csv] [--jobs N]

Exit status: 0 success, 1 invalid configuration, 2 numerical or resolution
failure, 3 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from .continuous import run_popper_continuous
from .discrete import run_coincidence
from .errors import ConfigError, NumericalError
from .reports import EXPERIMENTS, FORMATS, RunManifest, render
from .sweep import run_sweep

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL, EXIT_IO = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="poppersim", description="Simulate discrete and continuous Popper experiments.")
    sub = parser.add_subparsers(dest="experiment", required=True, parser_class=_Parser)
    for name in EXPERIMENTS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="JSON run manifest")
        p.add_argument("--out", help="output file (default: manifest output, else stdout)")
        p.add_argument("--format", choices=FORMATS, help="report format (default json)")
        p.add_argument("--seed", type=int, help="PRNG seed, overrides the manifest")
        p.add_argument("--shots", type=int, help="Monte-Carlo shots for the discrete run")
        p.add_argument("--jobs", type=int, default=1, help="worker processes for sweep")
    return parser


def load_manifest(args) -> RunManifest:
    data = {"experiment": args.experiment}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            text = fh.read()
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("manifest must be a JSON object")
        data.setdefault("experiment", args.experiment)
    manifest = RunManifest.from_dict(data)
    if manifest.experiment != args.experiment:
        raise ConfigError(
            f"manifest experiment {manifest.experiment!r} does not match subcommand {args.experiment!r}"
        )
    if args.seed is not None:
        manifest.seed = args.seed
    if args.format is not None:
        manifest.format = args.format
    if args.out is not None:
        manifest.output = args.out
    if args.shots is not None:
        if manifest.experiment != "discrete":
            raise ConfigError("--shots only applies to the discrete experiment")
        manifest.config = {**manifest.config, "shots": args.shots}
    manifest.__post_init__()
    return manifest


def run(manifest: RunManifest, jobs: int = 1) -> str:
    """Execute a manifest and return the rendered report text."""
    payload = manifest.build()
    if manifest.experiment == "discrete":
        report = run_coincidence(payload)
    elif manifest.experiment == "continuous":
        report = run_popper_continuous(payload)
    else:
        report = run_sweep(payload, workers=jobs)
    return render(report, manifest.format)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        manifest = load_manifest(args)
        text = run(manifest, jobs=args.jobs)
        if manifest.output:
            with open(manifest.output, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

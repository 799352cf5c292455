"""Run every report for one config and write them under an output directory.

    python scripts/run_all.py configs/seed_1_2.yaml out/seed_1_2
"""
import argparse
import sys
from pathlib import Path

from extremal.cli import COMMANDS, run


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("config")
    parser.add_argument("outdir")
    parser.add_argument("--format", default="csv", choices=["csv", "json"])
    parser.add_argument("--only", nargs="*", default=sorted(COMMANDS))
    args = parser.parse_args()
    out = Path(args.outdir)
    status = 0
    for name in args.only:
        target = out / f"{name}.{args.format}"
        code = run([name, "--config", args.config, "--format", args.format, "-o", str(target)])
        print(f"{name:10s} -> {target} (exit {code})")
        status = status or code
    sys.exit(status)


if __name__ == "__main__":
    main()

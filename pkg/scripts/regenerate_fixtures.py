"""Re-measure the empirical constants and rewrite tests/fixtures/constants.json."""
import argparse
import json
from pathlib import Path

from extremal.fixtures import measure_constants

DEFAULT = Path(__file__).resolve().parents[1] / "tests" / "fixtures" / "constants.json"


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--output", default=str(DEFAULT))
    parser.add_argument("--k-max", type=int, default=25)
    parser.add_argument("--x-max", type=int, default=10 ** 5)
    parser.add_argument("--h-max", type=int, default=60)
    args = parser.parse_args()
    data = measure_constants(k_max=args.k_max, x_max=args.x_max, h_max=args.h_max)
    Path(args.output).write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")
    print(json.dumps(data, indent=2, sort_keys=True))


if __name__ == "__main__":
    main()

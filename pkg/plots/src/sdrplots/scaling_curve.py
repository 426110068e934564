"""Mean accuracy against sample size from a benchmark CSV."""

import sys

from ._cli import run_script
from .figures import plot_scaling_curve


def main(argv=None) -> int:
    return run_script("scaling_curve", plot_scaling_curve, "model", argv)


if __name__ == "__main__":
    sys.exit(main())

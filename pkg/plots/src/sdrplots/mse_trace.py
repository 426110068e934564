"""Validation-MSE trajectory of one dimension search."""

import sys

from ._cli import run_script
from .figures import plot_mse_trace


def main(argv=None) -> int:
    return run_script("mse_trace", plot_mse_trace, "n", argv)


if __name__ == "__main__":
    sys.exit(main())

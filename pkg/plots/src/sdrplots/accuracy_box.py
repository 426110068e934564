"""Boxplot of estimation accuracy per experiment cell."""

import sys

from ._cli import run_script
from .figures import plot_accuracy_box


def main(argv=None) -> int:
    return run_script("accuracy_box", plot_accuracy_box, "n", argv)


if __name__ == "__main__":
    sys.exit(main())

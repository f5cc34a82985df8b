"""Entry point for running the harness as a module."""

import sys

from hypercenter_harness.cli import run_cli

if __name__ == "__main__":
    sys.exit(run_cli(sys.argv[1:]))

#!/usr/bin/env python3
"""Run the acceptance gate and show one verdict line per criterion."""

import subprocess
import sys


def main() -> int:
    return subprocess.call(
        [
            sys.executable,
            "-m",
            "pytest",
            "tests/test_acceptance.py",
            "-s",
            "-q",
            "-p",
            "no:cacheprovider",
        ]
    )


if __name__ == "__main__":
    sys.exit(main())

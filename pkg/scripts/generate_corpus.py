#!/usr/bin/env python3
"""Generate the golden oracle corpora for the acceptance families."""

import sys

from cschur.cli import main as cli_main


def main() -> int:
    rc = 0
    for r, d, band in ((1, 2, 1), (1, 2, 2)):
        rc |= cli_main(
            ["corpus", "generate", "--r", str(r), "--d", str(d), "--band", str(band)]
        )
    return rc


if __name__ == "__main__":
    sys.exit(main())

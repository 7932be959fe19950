# File: Main.py
# Path: /root/pkg/Src/TorsiLimit/__main__.py
# Standard: AIDEV-PascalCase-2.1
# Created: 2026-10-19
# Last Modified: 2026-10-19 09:20AM

"""Module execution entry point for TorsiLimit.

Allows running the package as a module: python -m TorsiLimit
"""

import sys
from typing import NoReturn

from TorsiLimit.Cli.Main import main as cli_main


def main() -> NoReturn:
    """Entry point that propagates the command exit code."""
    sys.exit(cli_main())


if __name__ == "__main__":
    main()

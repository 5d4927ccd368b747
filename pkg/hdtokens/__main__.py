"""Entry point for running as module: python -m hdtokens"""

import sys

from .cli import run_cli


def main():
    sys.exit(run_cli())


if __name__ == '__main__':
    main()

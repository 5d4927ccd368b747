#!/usr/bin/env python3
"""
hdtokens
Decide history-determinism of quantitative automata with token games.

Usage:
    python main.py decide <file.hdq> [--json] [--resolver]
    python main.py value <file.hdq> <word>
    python main.py game <file.hdq> (--g1|--g2|--gk N) [--dot|--json] [-o OUT]
    python main.py gen [options] [-o OUT]
    python main.py check [--suite NAME] [--report-output PATH]

For CLI help: python main.py --help
"""

import sys
import os

# Add package to path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from hdtokens.cli import run_cli


def main():
    """Main entry point"""
    sys.exit(run_cli())


if __name__ == '__main__':
    main()

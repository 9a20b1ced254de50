"""
swarm-sling - CLI entry point

Examples:
    python main.py plan --thrust-n 10 --quad-radius-m 0.1
    python main.py hover --scenario data/scenarios/three_quad_hover.json --out output/hover.csv
    python main.py track --trajectory hover --offset-m 1 0 0 --out output/track.csv
    python main.py check output/hover.csv
"""

import sys

from src.cli import main


if __name__ == "__main__":
    sys.exit(main())

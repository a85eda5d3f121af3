#!/usr/bin/env python3
"""Write the ordinates of the first N nontrivial zeta zeros, one per line.

Usage: gen_zeta_zeros.py N OUT
"""
import sys

import mpmath


def main() -> int:
    if len(sys.argv) != 3:
        print(__doc__, file=sys.stderr)
        return 2
    count = int(sys.argv[1])
    mpmath.mp.dps = 25
    with open(sys.argv[2], "w") as out:
        for n in range(1, count + 1):
            gamma = mpmath.zetazero(n).imag
            out.write(mpmath.nstr(gamma, 15, strip_zeros=False) + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Tabulate F(y) on the W-invariant line and the defect F(y) - y^2 F(1/y) - 7/24 zeta(3)(1 - y^2).

    python scripts/line_profile.py --y 0.25 0.5 1 2 4
"""
import argparse
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from dombzeta import analytic as an
from dombzeta.context import PrecisionContext, TruncationError


@dataclass(frozen=True)
class Config:
    ys: tuple[Fraction, ...] = (Fraction(1, 4), Fraction(1, 2), Fraction(1), Fraction(2), Fraction(4))
    precision_bits: int = 256
    trunc: int = 800


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--y", type=Fraction, nargs="+", default=list(Config.ys))
    ap.add_argument("--precision-bits", type=int, default=Config.precision_bits)
    ap.add_argument("--trunc", type=int, default=Config.trunc)
    args = ap.parse_args()
    ctx = PrecisionContext(args.precision_bits, 25, args.trunc)
    for y in args.y:
        try:
            f = an.line_function(y, ctx)
            d = an.line_defect(y, ctx)
            print(f"y={str(y):<6} F={mpmath.nstr(f, 20):<26} defect={mpmath.nstr(d, 3)}")
        except TruncationError as exc:
            print(f"y={str(y):<6} {exc}")


if __name__ == "__main__":
    main()

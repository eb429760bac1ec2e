"""Value of E(tau_*) + E'(tau_*)/(2 i sqrt 3) against 7/24 zeta(3) over precision and truncation.

    python scripts/fixed_point_sweep.py --bits 128 256 512 --trunc 100 200 400 800
"""
import argparse
from dataclasses import dataclass

import mpmath

from dombzeta import analytic as an
from dombzeta.context import PrecisionContext, TruncationError


@dataclass(frozen=True)
class Config:
    bits: tuple[int, ...] = (128, 256, 512)
    truncs: tuple[int, ...] = (100, 200, 400, 800)
    tol_digits: int = 25


def run(cfg: Config) -> list[tuple[int, int, str]]:
    rows = []
    for bits in cfg.bits:
        for t in cfg.truncs:
            ctx = PrecisionContext(bits, cfg.tol_digits, t)
            try:
                v = an.apery_constant_at_fixed_point(ctx)
                with ctx.workprec():
                    err = abs(v - mpmath.mpf(7) / 24 * an.zeta3(ctx))
                rows.append((bits, t, mpmath.nstr(err, 3)))
            except TruncationError as exc:
                rows.append((bits, t, f"refused ({exc})"))
    return rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--bits", type=int, nargs="+", default=list(Config.bits))
    ap.add_argument("--trunc", type=int, nargs="+", default=list(Config.truncs))
    ap.add_argument("--tol-digits", type=int, default=Config.tol_digits)
    args = ap.parse_args()
    for bits, t, err in run(Config(tuple(args.bits), tuple(args.trunc), args.tol_digits)):
        print(f"bits={bits:<5} trunc={t:<5} |error|={err}")


if __name__ == "__main__":
    main()

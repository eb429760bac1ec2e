"""Digits of agreement of the three exact-arithmetic estimates as n grows.

    python scripts/convergence_table.py --n 25 50 100 200 400 --precision-bits 1024
"""
import argparse
from dataclasses import dataclass

from dombzeta import exact_sequences as seq
from dombzeta.context import PrecisionContext
from dombzeta.suite import digits_of_agreement, constant_estimates


@dataclass(frozen=True)
class Config:
    ns: tuple[int, ...] = (25, 50, 100, 200, 400)
    precision_bits: int = 1024


def run(cfg: Config) -> list[dict]:
    ctx = PrecisionContext(cfg.precision_bits)
    table = seq.build_table(max(cfg.ns))
    rows = []
    for n in cfg.ns:
        sub = seq.SequenceTable(n, table.d[: n + 1], table.b[: n + 1])
        with ctx.workprec():
            est = constant_estimates(sub, ctx)
            rows.append({"n": n, **{k: digits_of_agreement(e, c, ctx.dps) for k, (e, c) in est.items()}})
    return rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=list(Config.ns))
    ap.add_argument("--precision-bits", type=int, default=Config.precision_bits)
    args = ap.parse_args()
    rows = run(Config(tuple(args.n), args.precision_bits))
    keys = list(rows[0])
    print("  ".join(f"{k:>12}" for k in keys))
    for r in rows:
        print("  ".join(f"{r[k]:>12}" for k in keys))
    # each step of n adds about log10(4) digits to the ratio and the sum
    if len(rows) > 1:
        a, b = rows[-2], rows[-1]
        print(f"digits per unit n (apery_limit): {(b['apery_limit'] - a['apery_limit']) / (b['n'] - a['n']):.4f}")


if __name__ == "__main__":
    main()

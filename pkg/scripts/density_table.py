"""Tabulate the radial densities for integer a, d and check their moments
against the weight-sequence moments; also the Hausdorff certificate."""
from __future__ import annotations

import argparse
from dataclasses import dataclass

from dartree.exact import fmt_rational
from dartree.model import density, hausdorff_check, moment_sequence, regime_sequence, verify_density_moments


@dataclass
class TableConfig:
    max_a: int = 6
    max_d: int = 6
    max_l: int = 2
    max_n: int = 20
    order: int = 20


def poly_str(coeffs) -> str:
    terms = [f"{fmt_rational(q)}*s^{i}" for i, q in enumerate(coeffs) if q]
    return " + ".join(terms) or "0"


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-a", type=int, default=6)
    ap.add_argument("--max-d", type=int, default=6)
    ap.add_argument("--max-l", type=int, default=2)
    args = ap.parse_args()
    cfg = TableConfig(max_a=args.max_a, max_d=args.max_d, max_l=args.max_l)
    for a in range(1, cfg.max_a + 1):
        for d in range(1, cfg.max_d + 1):
            h = hausdorff_check(moment_sequence(regime_sequence(a, d), 2 * cfg.order), cfg.order)
            for l in range(cfg.max_l + 1):
                dens = density(a, d, l)
                ok = all(x.ok for x in verify_density_moments(a, d, l, cfg.max_n))
                body = "point mass at 1" if dens.kind == "delta_1" else poly_str(dens.coefficients)
                print(f"a={a} d={d} l={l} {dens.kind:<7} moments {'ok' if ok else 'FAIL'} "
                      f"hausdorff {'pass' if h.passed else 'fail'}  {body}")


if __name__ == "__main__":
    main()

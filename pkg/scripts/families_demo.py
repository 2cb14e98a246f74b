"""The two standard families: T_{n0,0} x R (pairwise non-isomorphic modules)
and T_{1j} x R for fixed k (isomorphic modules on non-isomorphic graphs),
with an intertwiner certificate for the k = 2 pair."""
from __future__ import annotations

import argparse
import itertools
from dataclasses import dataclass

from dartree.classify import build_intertwiner, classify
from dartree.trees import make_standard


@dataclass
class DemoConfig:
    k: int = 3
    n_max: int = 4
    a: int = 2
    D: int = 6
    intertwiner_depth: int = 5


def show_family(title: str, fam: dict, a: int) -> None:
    print(title)
    for (n1, A), (n2, B) in itertools.combinations(fam.items(), 2):
        rep = classify(A, B, a)
        print(f"  {n1:>8} vs {n2:<8} module: {rep.decision:<15} graph isomorphic: {rep.graph_isomorphic}")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--k", type=int, default=3)
    ap.add_argument("--n-max", type=int, default=4)
    ap.add_argument("--a", type=int, default=2)
    args = ap.parse_args()
    cfg = DemoConfig(k=args.k, n_max=args.n_max, a=args.a)
    ray = make_standard("ray", D=cfg.D)
    show_family("T_n0_0 x R", {f"n0={n}": [make_standard("T_n0_0", D=cfg.D, n0=n), ray]
                               for n in range(1, cfg.n_max + 1)}, cfg.a)
    show_family(f"T_1j x R, k={cfg.k}", {f"j={j}": [make_standard("T_1j", D=cfg.D, k=cfg.k, j=j), ray]
                                         for j in range(1, cfg.k + 1)}, cfg.a)
    T11 = [make_standard("T_1j", D=cfg.D, k=2, j=1), ray]
    T12 = [make_standard("T_1j", D=cfg.D, k=2, j=2), ray]
    cert = build_intertwiner(T11, T12, cfg.a, cfg.intertwiner_depth)
    print(f"intertwiner T_11 x R -> T_12 x R at depth {cert.Dtot}: "
          f"unitarity {cert.unitarity_residual:.2e}, intertwining {cert.intertwining_residual:.2e}, "
          f"spanned {cert.spanned_dim} of {cert.full_dim}")


if __name__ == "__main__":
    main()

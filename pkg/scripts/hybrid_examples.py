"""Worked hybrid continued fraction examples: surds, Heron tables, dual convergence."""
import argparse
from dataclasses import dataclass

from nadic.hybrid_cf import (
    dual_convergence_report,
    format_cf,
    parse_cf,
    periodic_to_surd,
    verify_heron_correspondence,
)


@dataclass
class ExampleConfig:
    depth: int = 8
    precision: int = 8
    heron_depth: int = 3


FAMILY = [(3, 6, 5), (4, 8, 5), (8, 16, 15), (4, 4, 3)]
PERIODIC = ["[(6)*]_5", "[(8)*]_5", "[(11)*]_10", "[(16)*]_15", "[(8,4)*]_3"]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--depth", type=int, default=8)
    ap.add_argument("--precision", type=int, default=8)
    cfg = ExampleConfig(**vars(ap.parse_args()))

    print("periodic expansions")
    for text in PERIODIC:
        cf = parse_cf(text)
        sol = periodic_to_surd(cf)
        rep = dual_convergence_report(cf, cfg.depth, cfg.precision)
        print(f"  {text:12} -> {sol.real_root}   p-adic limit {rep.nadic_limit}, ok={rep.ok}")

    print("\nHeron iterates against 2^i-digit convergents")
    for a, b, n in FAMILY:
        check = verify_heron_correspondence(a, b, n, cfg.heron_depth)
        print(f"  sqrt({check.x}) = {format_cf(check.cf)}: holds={check.holds}")
        for i, heron, conv in check.table:
            print(f"    i={i}  {heron}  {conv}")


if __name__ == "__main__":
    main()

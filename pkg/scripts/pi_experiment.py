"""Monte-Carlo estimate of pi from square-root iteration digits, over several seeds."""
import argparse
from dataclasses import dataclass, field
from statistics import fmean

from nadic.prng import monte_carlo_pi, default_setup


@dataclass
class PiConfig:
    seeds: list[int] = field(default_factory=lambda: list(range(1, 11)))
    groups: int = 100
    per_group: int = 40
    precision: int = 32
    N: int = 5**6


def run(cfg: PiConfig) -> list[tuple[int, float, float]]:
    rows = []
    for s in cfg.seeds:
        est = monte_carlo_pi(default_setup(s, cfg.precision), cfg.groups, cfg.per_group, cfg.N)
        rows.append((s, est.mean, est.variance))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seeds", type=int, nargs="+", default=PiConfig().seeds)
    ap.add_argument("--groups", type=int, default=100)
    ap.add_argument("--per-group", type=int, default=40)
    a = ap.parse_args()
    rows = run(PiConfig(seeds=a.seeds, groups=a.groups, per_group=a.per_group))
    print(f"{'seed':>4}  {'mean':>7}  {'variance':>8}")
    for s, mean, var in rows:
        print(f"{s:>4}  {mean:7.4f}  {var:8.4f}")
    print(f"overall mean {fmean(r[1] for r in rows):.4f}, mean variance {fmean(r[2] for r in rows):.4f}")


if __name__ == "__main__":
    main()

"""Last decimal digits of Graham's number, cross-checked against explicit towers."""
import argparse
import time
from dataclasses import dataclass

from nadic.unimaginable import graham_last_digits, stabilization_height, tower_mod


@dataclass
class GrahamConfig:
    digits: int = 100
    check: bool = True


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--digits", type=int, default=100)
    ap.add_argument("--no-check", dest="check", action="store_false")
    cfg = GrahamConfig(**vars(ap.parse_args()))

    t0 = time.perf_counter()
    d = graham_last_digits(cfg.digits).render()
    elapsed = time.perf_counter() - t0
    print(f"last {cfg.digits} digits ({elapsed:.3f}s):")
    for i in range(0, len(d), 50):
        print("  " + d[i:i + 50])
    if cfg.check:
        m = 10**cfg.digits
        h = stabilization_height(3, m)
        agree = tower_mod(3, h, m).residue == int(d) == tower_mod(3, h + 7, m).residue
        print(f"3^^{h} and 3^^{h + 7} agree with the fixed point: {agree}")


if __name__ == "__main__":
    main()

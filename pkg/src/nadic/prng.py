"""Pseudo-random digits from iterated n-adic square roots.

Not suitable for cryptography. The state x lives in 1 + pZ_p for every
prime p of n; each step replaces x by the square root congruent to 1 and
emits six base-n digits from a window starting at k // 4.
"""
from __future__ import annotations

import copy
from dataclasses import dataclass
from statistics import fmean, pvariance

from .analytic import nadic_sqrt
from .core import DigitString, NadicContext, NadicInt, make_context
from .errors import InvalidArgument, UnsupportedPrime2

WARMUP = 16
BLOCK_DIGITS = 6


@dataclass
class PrngState:
    context: NadicContext
    current: NadicInt
    iteration_count: int = 0

    def copy(self) -> PrngState:
        return copy.copy(self)


def _step(state: PrngState) -> None:
    branch = {p: 1 for p in state.context.primes}
    root, _ = nadic_sqrt(state.current, branch)
    state.current = root
    state.iteration_count += 1


def seed_state(c: NadicContext, s: int) -> PrngState:
    if c.base % 2 == 0:
        raise UnsupportedPrime2(f"base {c.base} is even")
    if s < 1:
        raise InvalidArgument("seed must be a positive integer")
    if c.precision < BLOCK_DIGITS + c.precision // 4:
        raise InvalidArgument(f"precision {c.precision} too small for the output window")
    state = PrngState(c, NadicInt(c, 1 + c.base * s))
    for _ in range(WARMUP):
        _step(state)
    state.iteration_count = 0
    return state


def next_block(state: PrngState) -> DigitString:
    _step(state)
    c = state.context
    start = c.precision // 4
    window = state.current.residue // c.base**start
    out = []
    for _ in range(BLOCK_DIGITS):
        window, d = divmod(window, c.base)
        out.append(d)
    return DigitString(c.base, tuple(out))


def next_uniform(state: PrngState, bound: int) -> int:
    """Uniform integer in [0, bound) by rejection over whole blocks."""
    span = state.context.base**BLOCK_DIGITS
    if not 2 <= bound <= span:
        raise InvalidArgument(f"bound must lie in [2, {span}]")
    limit = span // bound * bound
    while True:
        v = next_block(state).value()
        if v < limit:
            return v % bound


@dataclass
class PiEstimate:
    mean: float
    variance: float
    group_values: list[float]


def monte_carlo_pi(
    state: PrngState,
    groups: int = 100,
    per_group: int = 40,
    N: int = 15625,
    radius: int | None = None,
) -> PiEstimate:
    """Quarter-disc hit rate times 4 for points on [0, N-1]^2.

    A point counts when x^2 + y^2 <= radius^2, with radius defaulting to N.
    """
    if groups < 1 or per_group < 1:
        raise InvalidArgument("groups and per_group must be >= 1")
    r2 = (N if radius is None else radius) ** 2
    values = []
    for _ in range(groups):
        hits = 0
        for _ in range(per_group):
            x = next_uniform(state, N)
            y = next_uniform(state, N)
            hits += x * x + y * y <= r2
        values.append(4 * hits / per_group)
    return PiEstimate(fmean(values), pvariance(values), values)


def default_setup(seed: int, precision: int = 32) -> PrngState:
    """Base 5 at 32 digits: one block is a coordinate in [0, 5^6)."""
    return seed_state(make_context(5, precision), seed)

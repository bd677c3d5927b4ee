"""Hensel-lifted square roots and power-series exp/log on truncated n-adic integers.

All three work prime-power component by component and recombine with the
CRT. Only odd primes are supported.
"""
from __future__ import annotations

from math import ceil
from typing import Mapping

from .core import NadicContext, NadicInt, crt_combine, inverse_mod
from .errors import (
    InvalidArgument,
    NonUnit,
    NoSquareRoot,
    OutsideConvergenceRadius,
    UnsupportedPrime2,
)


def _reject_two(c: NadicContext) -> None:
    if c.base % 2 == 0:
        raise UnsupportedPrime2(f"base {c.base} is even; p = 2 is not supported")


def sqrt_mod_prime(a: int, p: int) -> int | None:
    """Smallest r in [0, p) with r*r = a mod p, or None (odd prime p)."""
    a %= p
    if a == 0:
        return 0
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    # Tonelli-Shanks
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return min(r, p - r)


def _lift_sqrt(a: int, r: int, p: int, exponent: int) -> tuple[int, int]:
    """Lift r (r^2 = a mod p) to a root mod p**exponent.

    Newton step x <- x - (x^2 - a) * y with y = (2x)^-1 carried along at the
    same precision; returns (root, number of Newton updates).
    """
    target = p**exponent
    x = r % p
    y = inverse_mod(2 * x % p, p)
    e = 1
    steps = 0
    while (x * x - a) % target:
        e = min(2 * e, exponent)
        m = p**e
        x = (x - (x * x - a) * y) % m
        y = y * (2 - 2 * x * y) % m
        steps += 1
    return x % target, steps


def nadic_sqrt(
    a: NadicInt, branch: Mapping[int, int] | None = None
) -> tuple[NadicInt, int]:
    """Square root of a unit with prescribed residues mod each prime.

    Returns ``(root, iterations)`` where ``iterations`` is the largest number
    of Newton updates spent on any single prime-power component.
    """
    c = a.context
    _reject_two(c)
    if not a.is_unit():
        p = next(p for p in c.primes if a.residue % p == 0)
        raise NonUnit(f"{a.residue} is divisible by {p}")
    branch = dict(branch or {})
    unknown = set(branch) - set(c.primes)
    if unknown:
        raise InvalidArgument(f"branch names primes {sorted(unknown)} not dividing {c.base}")
    pairs = []
    iterations = 0
    for p, alpha in c.factorization:
        if pow(a.residue % p, (p - 1) // 2, p) != 1:
            raise NoSquareRoot(f"{a.residue} is not a square mod {p}", prime=p)
        if p in branch:
            r = branch[p] % p
            if (r * r - a.residue) % p:
                raise InvalidArgument(f"branch {branch[p]} is not a square root of {a.residue} mod {p}")
        else:
            r = sqrt_mod_prime(a.residue, p)
        e = alpha * c.precision
        root, steps = _lift_sqrt(a.residue, r, p, e)
        pairs.append((root, p**e))
        iterations = max(iterations, steps)
    return NadicInt(c, crt_combine(pairs)), iterations


def series_term_bound(p: int, digits: int) -> int:
    """Worst-case index past which every exp/log term vanishes mod p**digits."""
    return ceil(digits * (p - 1) / (p - 2)) + 4


def _factorial_valuation(t: int, p: int) -> int:
    v, q = 0, p
    while q <= t:
        v += t // q
        q *= p
    return v


def _split_p(t: int, p: int) -> tuple[int, int]:
    v = 0
    while t % p == 0:
        t //= p
        v += 1
    return v, t


def _check_domain(c: NadicContext, x: int, what: str) -> None:
    for p in c.primes:
        if x % p:
            raise OutsideConvergenceRadius(f"{what} is not divisible by {p}", prime=p)


def _exp_component(x: int, p: int, e: int) -> int:
    t_max = series_term_bound(p, e)
    guard = _factorial_valuation(t_max, p)
    work = p ** (e + guard)
    target = p**e
    total = 0
    power = 1
    unit_fact = 1  # prime-to-p part of t!
    t = 0
    while True:
        if t:
            power = power * x % work
            v, u = _split_p(t, p)
            unit_fact = unit_fact * u % target
        vt = _factorial_valuation(t, p)
        term = (power // p**vt) * inverse_mod(unit_fact, target) % target
        total += term
        if t >= t_max and term == 0:
            break
        t += 1
    return total % target


def _log_component(z: int, p: int, e: int) -> int:
    t_max = series_term_bound(p, e)
    guard = 0
    while p ** (guard + 1) <= t_max:
        guard += 1
    work = p ** (e + guard)
    target = p**e
    total = 0
    power = 1
    t = 0
    while True:
        t += 1
        power = power * z % work
        v, u = _split_p(t, p)
        term = (power // p**v) * inverse_mod(u, target) % target
        total += term if t % 2 else -term
        if t >= t_max and term == 0:
            break
    return total % target


def nadic_exp(x: NadicInt) -> NadicInt:
    c = x.context
    _reject_two(c)
    _check_domain(c, x.residue, f"exp argument {x.residue}")
    pairs = []
    for p, alpha in c.factorization:
        e = alpha * c.precision
        pairs.append((_exp_component(x.residue, p, e), p**e))
    return NadicInt(c, crt_combine(pairs))


def nadic_log(u: NadicInt) -> NadicInt:
    c = u.context
    _reject_two(c)
    _check_domain(c, u.residue - 1, f"log argument minus one ({u.residue - 1})")
    pairs = []
    for p, alpha in c.factorization:
        e = alpha * c.precision
        pairs.append((_log_component(u.residue - 1, p, e), p**e))
    return NadicInt(c, crt_combine(pairs))

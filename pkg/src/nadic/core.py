"""Truncated n-adic integers.

An element of Z_n known to k base-n digits is stored as its canonical
residue modulo n**k. Every operation stays at the precision of its context.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from math import gcd, prod
from typing import Iterable, Sequence

from .errors import (
    DenominatorNotUnit,
    InvalidArgument,
    InvalidDigit,
    NotInvertible,
)

MAX_BASE = 2**31

# Digit symbols; base 37 uses the full string, smaller bases a prefix of it.
ALPHABET = "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZ_"
_SEPARATORS = "_'·, \t"


@lru_cache(maxsize=4096)
def factorize(m: int) -> tuple[tuple[int, int], ...]:
    """Trial-division factorization of ``m >= 1`` as ``((p, e), ...)``."""
    if m < 1:
        raise InvalidArgument(f"cannot factor {m}")
    out = []
    for p in (2, 3):
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        if e:
            out.append((p, e))
    p = 5
    step = 2
    while p * p <= m:
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        if e:
            out.append((p, e))
        p += step
        step = 6 - step
    if m > 1:
        out.append((m, 1))
    return tuple(out)


def valuation(x: int, p: int) -> int | None:
    """p-adic valuation of a nonzero integer; None for zero."""
    if x == 0:
        return None
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def inverse_mod(a: int, m: int) -> int:
    return pow(a, -1, m)


@dataclass(frozen=True)
class NadicContext:
    base: int
    precision: int
    factorization: tuple[tuple[int, int], ...] = field(compare=False)

    @cached_property
    def modulus(self) -> int:
        return self.base**self.precision

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factorization)

    def component_moduli(self) -> list[int]:
        """Prime-power moduli p**(alpha*k) whose product is n**k."""
        return [p ** (a * self.precision) for p, a in self.factorization]

    def __call__(self, value: int) -> NadicInt:
        return from_integer(self, value)

    def __repr__(self) -> str:
        return f"NadicContext(base={self.base}, precision={self.precision})"


def make_context(n: int, k: int) -> NadicContext:
    if not isinstance(n, int) or not isinstance(k, int):
        raise InvalidArgument("base and precision must be integers")
    if n < 2:
        raise InvalidArgument(f"base must be >= 2, got {n}")
    if k < 1:
        raise InvalidArgument(f"precision must be >= 1, got {k}")
    if n > MAX_BASE:
        raise InvalidArgument(f"base {n} exceeds the trial-division guard 2**31")
    return NadicContext(n, k, factorize(n))


@dataclass(frozen=True)
class NadicInt:
    context: NadicContext
    residue: int

    def __post_init__(self):
        object.__setattr__(self, "residue", self.residue % self.context.modulus)

    def _coerce(self, other) -> NadicInt:
        if isinstance(other, NadicInt):
            if other.context != self.context:
                raise InvalidArgument(
                    f"context mismatch: {self.context!r} vs {other.context!r}"
                )
            return other
        if isinstance(other, int):
            return NadicInt(self.context, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return NadicInt(self.context, self.residue + other.residue)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return NadicInt(self.context, self.residue - other.residue)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return NadicInt(self.context, other.residue - self.residue)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return NadicInt(self.context, self.residue * other.residue)

    __rmul__ = __mul__

    def __neg__(self):
        return NadicInt(self.context, -self.residue)

    def __pow__(self, e: int):
        if e < 0:
            return invert(self) ** (-e)
        return NadicInt(self.context, pow(self.residue, e, self.context.modulus))

    def __int__(self) -> int:
        return self.residue

    def is_unit(self) -> bool:
        return gcd(self.residue, self.context.base) == 1

    def digits(self) -> DigitString:
        return digits(self)

    def __str__(self) -> str:
        return serialize(self)

    def __repr__(self) -> str:
        return f"NadicInt({serialize(self)})"


def from_integer(c: NadicContext, z: int) -> NadicInt:
    return NadicInt(c, z)


def _check_same(x: NadicInt, y: NadicInt) -> None:
    if x.context != y.context:
        raise InvalidArgument(f"context mismatch: {x.context!r} vs {y.context!r}")


def add(x: NadicInt, y: NadicInt) -> NadicInt:
    _check_same(x, y)
    return x + y


def neg(x: NadicInt) -> NadicInt:
    return -x


def mul(x: NadicInt, y: NadicInt) -> NadicInt:
    _check_same(x, y)
    return x * y


def _offending_prime(residue: int, c: NadicContext) -> int:
    for p in c.primes:
        if residue % p == 0:
            return p
    raise AssertionError("unit check and prime scan disagree")


def invert(x: NadicInt) -> NadicInt:
    """Inverse of a unit by Newton iteration t <- t(2 - xt).

    The seed is the inverse modulo n; each step doubles the number of
    correct base-n digits.
    """
    c = x.context
    if not x.is_unit():
        p = _offending_prime(x.residue, c)
        raise NotInvertible(f"{x.residue} is divisible by {p}", prime=p)
    t = inverse_mod(x.residue % c.base, c.base)
    digits_ok = 1
    while digits_ok < c.precision:
        digits_ok = min(2 * digits_ok, c.precision)
        m = c.base**digits_ok
        t = t * (2 - x.residue * t) % m
    return NadicInt(c, t)


def from_rational(c: NadicContext, a: int, b: int) -> NadicInt:
    if b == 0:
        raise InvalidArgument("zero denominator")
    if gcd(b, c.base) != 1:
        raise DenominatorNotUnit(f"denominator {b} shares a factor with base {c.base}")
    return from_integer(c, a) * invert(from_integer(c, b))


@dataclass(frozen=True)
class DigitString:
    """Digits least-significant first."""

    base: int
    digits: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "digits", tuple(self.digits))
        for i, d in enumerate(self.digits):
            if not 0 <= d < self.base:
                raise InvalidDigit(f"digit {d} at position {i} out of range for base {self.base}")

    def __len__(self) -> int:
        return len(self.digits)

    def value(self) -> int:
        v = 0
        for d in reversed(self.digits):
            v = v * self.base + d
        return v

    def render(self, prefix: bool = False) -> str:
        ds = reversed(self.digits)
        if self.base <= len(ALPHABET):
            body = "".join(ALPHABET[d] for d in ds)
        else:
            body = ",".join(str(d) for d in ds)
        return ("…" if prefix else "") + body

    def __str__(self) -> str:
        return self.render()


def digits(x: NadicInt) -> DigitString:
    c = x.context
    r = x.residue
    out = []
    for _ in range(c.precision):
        r, d = divmod(r, c.base)
        out.append(d)
    return DigitString(c.base, tuple(out))


def from_digits(c: NadicContext, d: DigitString | Sequence[int]) -> NadicInt:
    if isinstance(d, DigitString):
        if d.base != c.base:
            raise InvalidArgument(f"digit base {d.base} does not match context base {c.base}")
        d = d.digits
    else:
        d = DigitString(c.base, tuple(d)).digits
    if len(d) > c.precision:
        raise InvalidDigit(f"{len(d)} digits exceed precision {c.precision}")
    v = 0
    for digit in reversed(d):
        v = v * c.base + digit
    return NadicInt(c, v)


def parse_digit_string(text: str, base: int) -> DigitString:
    """Parse most-significant-first text into a DigitString.

    A leading "…" or "..." is ignored. For bases up to 36, "_", "'" and "·"
    group separators are ignored; base 37 keeps "_" as the digit 36. Larger
    bases take comma-separated decimal digit values.
    """
    s = text.strip()
    for pre in ("…", "..."):
        if s.startswith(pre):
            s = s[len(pre):]
    if base > len(ALPHABET):
        parts = [p.strip() for p in s.split(",") if p.strip()]
        try:
            vals = [int(p) for p in parts]
        except ValueError as exc:
            raise InvalidDigit(str(exc)) from None
        return DigitString(base, tuple(reversed(vals)))
    seps = _SEPARATORS if base < 37 else _SEPARATORS.replace("_", "")
    vals = []
    for ch in s:
        if ch in seps:
            continue
        idx = ALPHABET.find(ch.upper())
        if idx < 0 or idx >= base:
            raise InvalidDigit(f"character {ch!r} is not a base-{base} digit")
        vals.append(idx)
    return DigitString(base, tuple(reversed(vals)))


def serialize(x: NadicInt) -> str:
    c = x.context
    return f"{x.residue} mod {c.base}^{c.precision}"


def deserialize(text: str) -> NadicInt:
    try:
        r, rest = text.split(" mod ")
        n, k = rest.split("^")
        return NadicInt(make_context(int(n), int(k)), int(r))
    except ValueError as exc:
        if isinstance(exc, InvalidArgument):
            raise
        raise InvalidArgument(f"not a serialized n-adic integer: {text!r}") from None


def crt_split(x: NadicInt) -> list[NadicInt]:
    """Project onto the prime-power components Z/p^(alpha k)."""
    c = x.context
    return [
        NadicInt(make_context(p**a, c.precision), x.residue)
        for p, a in c.factorization
    ]


def crt_join(components: Iterable[NadicInt]) -> NadicInt:
    comps = list(components)
    if not comps:
        raise InvalidArgument("nothing to join")
    k = comps[0].context.precision
    if any(t.context.precision != k for t in comps):
        raise InvalidArgument("components carry different precisions")
    bases = [t.context.base for t in comps]
    for i in range(len(bases)):
        for j in range(i + 1, len(bases)):
            if gcd(bases[i], bases[j]) != 1:
                raise InvalidArgument(f"component bases {bases[i]} and {bases[j]} are not coprime")
    ctx = make_context(prod(bases), k)
    return NadicInt(ctx, crt_combine([(t.residue, t.context.modulus) for t in comps]))


def crt_combine(pairs: Iterable[tuple[int, int]]) -> int:
    """Solve x = r_i mod m_i for pairwise coprime moduli; result in [0, prod m_i)."""
    pairs = list(pairs)
    total = prod(m for _, m in pairs)
    x = 0
    for r, m in pairs:
        rest = total // m
        x += r * rest * inverse_mod(rest % m, m) if m > 1 else 0
    return x % total

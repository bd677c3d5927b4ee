"""Last digits of enormous numbers: idempotents, power towers, Graham's number.

Power towers are reduced with the generalized Euler theorem

    b^e = b^(e mod lambda(m) + lambda(m))  (mod m)   whenever e >= log2(m),

which needs no coprimality between b and m. lambda is the Carmichael
function, computed from factorizations that are carried along the chain
m, lambda(m), lambda(lambda(m)), ... so no large number is ever factored.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import gcd, prod
from typing import NamedTuple, Union

from .core import (
    DigitString,
    NadicContext,
    NadicInt,
    crt_combine,
    digits,
    factorize,
    make_context,
)
from .errors import InvalidArgument, NotCoprime, UnsupportedShape

CUTOFF = 2**64
MAX_ARROWS = 200

Factors = dict[int, int]


# -- Carmichael function -----------------------------------------------------


def carmichael_factors(fac: Factors) -> Factors:
    out: Factors = {}

    def merge(p: int, e: int) -> None:
        if e > out.get(p, 0):
            out[p] = e

    for p, e in fac.items():
        if e <= 0:
            continue
        if p == 2:
            merge(2, 0 if e == 1 else 1 if e == 2 else e - 2)
            continue
        if e > 1:
            merge(p, e - 1)
        for q, f in factorize(p - 1):
            merge(q, f)
    return {p: e for p, e in out.items() if e > 0}


def _value(fac: Factors) -> int:
    return prod(p**e for p, e in fac.items())


def carmichael(m: int) -> int:
    return _value(carmichael_factors(dict(factorize(m))))


def _chain(fac: Factors, limit: int | None = None) -> list[int]:
    """m, lambda(m), lambda(lambda(m)), ... down to 1 (or ``limit`` entries)."""
    moduli = [_value(fac)]
    while moduli[-1] > 1 and (limit is None or len(moduli) < limit):
        fac = carmichael_factors(fac)
        moduli.append(_value(fac))
    return moduli


def _exact_tower(b: int, h: int | None = None) -> list[int]:
    """Exact values b, b^b, ... while they stay below CUTOFF (b itself always kept)."""
    table = [b]
    while h is None or len(table) < h:
        t = table[-1]
        if t >= CUTOFF or t > CUTOFF.bit_length():
            break
        nxt = b**t
        if nxt >= CUTOFF:
            break
        table.append(nxt)
    return table


def _factors_of(m: int, fac: Factors | None) -> Factors:
    if fac is None:
        return dict(factorize(m))
    assert _value(fac) == m
    return dict(fac)


# -- towers ------------------------------------------------------------------


class TowerResidue(NamedTuple):
    residue: int
    exact: bool


def tower_mod(b: int, h: int, m: int, fac: Factors | None = None) -> TowerResidue:
    """b^^h mod m, with a flag telling whether b^^h itself is below CUTOFF."""
    if b < 1 or h < 1 or m < 1:
        raise InvalidArgument("tower_mod needs b >= 1, h >= 1, m >= 1")
    table = _exact_tower(b, h)
    exact = h <= len(table) and table[h - 1] < CUTOFF
    moduli = _chain(_factors_of(m, fac), limit=h)
    d = len(moduli) - 1
    t = h - d
    r = table[t - 1] % moduli[d] if t <= len(table) else 0
    for i in range(d - 1, -1, -1):
        t = h - i
        if t <= len(table):
            r = table[t - 1] % moduli[i]
        elif t - 1 <= len(table):
            r = pow(b, table[t - 2], moduli[i])
        else:
            # true exponent b^^(t-1) >= CUTOFF > log2(m)
            r = pow(b, r + moduli[i + 1], moduli[i])
    return TowerResidue(r, exact)


def stabilization_height(b: int, m: int, fac: Factors | None = None) -> int:
    """A height from which b^^h mod m no longer depends on h.

    Above it every level of the reduction chain takes the generalized Euler
    branch and the chain bottoms out at modulus 1, so the computation is
    identical for all larger heights.
    """
    chain = _chain(_factors_of(m, fac))
    return len(chain) - 1 + len(_exact_tower(b)) + 1


def tetration_residue(b: int, m: int, fac: Factors | None = None) -> int:
    """Residue mod m of the infinite tower b^^oo."""
    fac = _factors_of(m, fac)
    h = stabilization_height(b, m, fac)
    r = tower_mod(b, h, m, fac).residue
    assert tower_mod(b, h + 1, m, fac).residue == r, "tower did not stabilize"
    return r


def _context_factors(c: NadicContext) -> Factors:
    return {p: a * c.precision for p, a in c.factorization}


def tetration_limit(c: NadicContext, b: int) -> NadicInt:
    if b < 2:
        raise InvalidArgument("tower base must be >= 2")
    return NadicInt(c, tetration_residue(b, c.modulus, _context_factors(c)))


def exp_fixed_point(c: NadicContext, b: int) -> NadicInt:
    """Solution of x = b^x in Z/n^k, obtained as the infinite tower b^^oo."""
    if b < 2:
        raise InvalidArgument("base must be >= 2")
    if gcd(b, c.base) != 1:
        raise NotCoprime(f"{b} and {c.base} share a factor")
    fac = _context_factors(c)
    N = c.modulus
    x = tetration_residue(b, N, fac)
    lam_fac = carmichael_factors(fac)
    lam = _value(lam_fac)
    # b^x with the exponent known mod lambda(N) from one level down
    assert pow(b, tetration_residue(b, lam, lam_fac) + lam, N) == x
    if N % lam == 0:
        e = x if x >= N.bit_length() else x + lam
        assert pow(b, e, N) == x
    return NadicInt(c, x)


def _digitwise_step_ok(fac1: Factors, n_fac: Factors, i: int) -> bool:
    """Whether lambda(n^(i+1)) divides n^i."""
    lam = carmichael_factors(fac1)
    return all(n_fac.get(p, 0) * i >= e for p, e in lam.items())


def digitwise_fixed_point(b: int, n: int, k: int) -> int:
    """x = b^x mod n^k grown one digit at a time: x_(i+1) = b^(x_i) mod n^(i+1).

    The step is valid whenever lambda(n^(i+1)) divides n^i; other
    precisions are seeded from the tower limit.
    """
    n_fac = dict(factorize(n))
    coprime = gcd(b, n) == 1
    x = None
    for i in range(1, k + 1):
        fac = {p: a * i for p, a in n_fac.items()}
        if coprime and x is not None and _digitwise_step_ok(fac, n_fac, i - 1):
            x = pow(b, x, n**i)
        else:
            x = tetration_residue(b, n**i, fac)
    return x


def graham_last_digits(k: int, verify: bool = False) -> DigitString:
    """Last k decimal digits of Graham's number (those of 3^^oo)."""
    if k < 1:
        raise InvalidArgument("need at least one digit")
    x = digitwise_fixed_point(3, 10, k)
    if verify:
        m = 10**k
        assert tower_mod(3, k + 2, m).residue == x
        assert tower_mod(3, k + 5, m).residue == x
    return digits(NadicInt(make_context(10, k), x))


# -- idempotents -------------------------------------------------------------


def idempotents(c: NadicContext) -> list[NadicInt]:
    """All nontrivial e with e*e = e: a 0/1 choice per prime-power component."""
    moduli = c.component_moduli()
    if len(moduli) < 2:
        return []
    out = []
    for pattern in product((0, 1), repeat=len(moduli)):
        if len(set(pattern)) == 1:
            continue
        out.append(NadicInt(c, crt_combine(zip(pattern, moduli))))
    return sorted(out, key=lambda e: e.residue)


# -- Knuth up-arrow expressions ----------------------------------------------


@dataclass(frozen=True)
class TowerSpec:
    """base ↑^arrows height; the height may itself be an expression."""

    base: int
    arrows: int
    height: Union[int, "TowerSpec"]

    def __post_init__(self):
        if self.base < 2:
            raise InvalidArgument("base must be >= 2")
        if self.arrows < 1:
            raise InvalidArgument("arrows must be >= 1")
        if isinstance(self.height, int) and self.height < 1:
            raise InvalidArgument("height must be >= 1")
        if self.arrows > MAX_ARROWS:
            raise UnsupportedShape(f"more than {MAX_ARROWS} arrows")

    def __str__(self) -> str:
        return f"{self.base}{'↑' * self.arrows}{self.height}"


Expr = Union[int, TowerSpec]


def _sat_hyper(a: int, m: int, b: int, cap: int) -> int:
    """min(a ↑^m b, cap) for a >= 2, b >= 1."""
    if m == 1:
        if b > cap.bit_length():
            return cap
        return min(a**b, cap)
    x = min(a, cap)
    for _ in range(b - 1):
        if x >= cap:
            return cap
        x = _sat_hyper(a, m - 1, x, cap)
    return min(x, cap)


def saturated_value(e: Expr, cap: int) -> int:
    """min(value of e, cap), decided without building anything larger."""
    if isinstance(e, int):
        return min(e, cap)
    h = saturated_value(e.height, cap)
    if h >= cap:
        return cap  # a ↑^m h >= h
    return _sat_hyper(e.base, e.arrows, h, cap)


def _height_at_least(a: int, m: int, b: Expr, need: int) -> int:
    """min(H, need) where a ↑^m b = a ↑↑ H, for m >= 2."""
    bs = saturated_value(b, need)
    if m == 2 or bs >= need:
        # H >= b in every case
        return bs
    if bs == 1:
        return 1
    x = _sat_hyper(a, m, bs - 1, need)
    if x >= need:
        return need
    return _height_at_least(a, m - 1, x, need)


def knuth_mod(e: Expr, m: int) -> int:
    """Residue of a Knuth up-arrow expression modulo m."""
    if m == 1:
        return 0
    if isinstance(e, int):
        return e % m
    v = saturated_value(e, CUTOFF)
    if v < CUTOFF:
        return v % m
    a = e.base
    if e.arrows == 1:
        h = saturated_value(e.height, CUTOFF)
        if h < CUTOFF:
            return pow(a, h, m)
        lam = carmichael(m)
        return pow(a, knuth_mod(e.height, lam) + lam, m)
    need = stabilization_height(a, m)
    H = _height_at_least(a, e.arrows, e.height, need)
    if H >= need:
        return tetration_residue(a, m)
    return tower_mod(a, H, m).residue


def knuth_last_digits(spec: Expr, k: int, base: int = 10) -> DigitString:
    c = make_context(base, k)
    return digits(NadicInt(c, knuth_mod(spec, c.modulus)))


def parse_arrows(text: str) -> Expr:
    """Parse "3^^^^3" or "2↑↑2↑↑2↑↑9" (right associative)."""
    s = text.replace("↑", "^").replace(" ", "")
    nums, ops = [], []
    i = 0
    while i < len(s):
        j = i
        while j < len(s) and s[j].isdigit():
            j += 1
        if j == i:
            raise InvalidArgument(f"expected a number at position {i} of {text!r}")
        nums.append(int(s[i:j]))
        i = j
        if i < len(s):
            j = i
            while j < len(s) and s[j] == "^":
                j += 1
            if j == i:
                raise InvalidArgument(f"unexpected {s[i]!r} in {text!r}")
            ops.append(j - i)
            i = j
    if len(nums) != len(ops) + 1:
        raise InvalidArgument(f"dangling arrow in {text!r}")
    expr: Expr = nums[-1]
    for a, m in zip(reversed(nums[:-1]), reversed(ops)):
        expr = TowerSpec(a, m, expr)
    return expr

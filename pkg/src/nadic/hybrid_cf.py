"""Continued fractions with constant partial numerator n.

    [a0; a1, a2, ...]_n = a0 + n/(a1 + n/(a2 + ...))

with a_i >= |n| and gcd(a_i, n) = 1 for i >= 1. Such expansions converge
both in the reals and in Q_p for every prime p dividing n. Exact rational
arithmetic throughout; n = 1 gives classical continued fractions.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt
from typing import Union

from .analytic import nadic_sqrt
from .core import (
    NadicInt,
    crt_combine,
    from_rational,
    inverse_mod,
    make_context,
    valuation,
)
from .errors import (
    DegenerateSquare,
    InvalidArgument,
    InvalidDigit,
    InvalidFamily,
    NotPeriodic,
)


@dataclass(frozen=True)
class HybridCF:
    n: int
    preperiod: tuple[int, ...]
    period: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "preperiod", tuple(self.preperiod))
        object.__setattr__(self, "period", tuple(self.period))
        if self.n == 0:
            raise InvalidArgument("numerator n must be nonzero")
        if not self.preperiod and not self.period:
            raise InvalidArgument("continued fraction has no digits")
        # the leading digit is exempt, but a period digit recurs at later positions
        constrained = list(self.preperiod[1:]) + list(self.period)
        for d in constrained:
            if d < abs(self.n) or gcd(d, self.n) != 1:
                raise InvalidDigit(
                    f"digit {d} must be >= |n| = {abs(self.n)} and coprime to {self.n}"
                )

    @property
    def is_periodic(self) -> bool:
        return bool(self.period)

    def digit(self, i: int) -> int:
        if i < len(self.preperiod):
            return self.preperiod[i]
        if not self.period:
            raise IndexError(f"finite continued fraction has {len(self.preperiod)} digits")
        return self.period[(i - len(self.preperiod)) % len(self.period)]

    def terms(self, count: int) -> list[int]:
        return [self.digit(i) for i in range(count)]

    def __len__(self) -> int:
        if self.period:
            raise TypeError("periodic continued fraction is infinite")
        return len(self.preperiod)

    def __str__(self) -> str:
        return format_cf(self)


def convergent_pairs(cf: HybridCF, count: int) -> list[tuple[int, int]]:
    """Unreduced numerator/denominator pairs (p_j, q_j), j < count."""
    if count < 1:
        raise InvalidArgument("count must be >= 1")
    n = cf.n
    p_prev, q_prev = 1, 0
    p, q = cf.digit(0), 1
    out = [(p, q)]
    for j in range(1, count):
        a = cf.digit(j)
        p, p_prev = a * p + n * p_prev, p
        q, q_prev = a * q + n * q_prev, q
        out.append((p, q))
    return out


def convergents(cf: HybridCF, count: int) -> list[Fraction]:
    out = []
    for p, q in convergent_pairs(cf, count):
        if q == 0:
            raise InvalidDigit(f"convergent {len(out)} has a zero denominator")
        out.append(Fraction(p, q))
    return out


def evaluate(cf: HybridCF) -> Fraction:
    """Value of a finite continued fraction."""
    return convergents(cf, len(cf))[-1]


# -- quadratic surds ---------------------------------------------------------


def _square_split(d: int, limit: int = 10**5) -> tuple[int, int]:
    """Write d = s*s*r removing square factors found below ``limit``."""
    s = 1
    p = 2
    while p < limit and p * p <= d:
        while d % (p * p) == 0:
            d //= p * p
            s *= p
        p += 1 if p == 2 else 2
    r = isqrt(d)
    if r * r == d:
        return s * r, 1
    return s, d


@dataclass(frozen=True, eq=False)
class QuadraticSurd:
    """The real number (u + w*sqrt(D)) / v with D > 0 not a square."""

    u: int
    w: int
    D: int
    v: int = 1

    def __post_init__(self):
        if self.v == 0:
            raise InvalidArgument("zero denominator")
        if self.w == 0:
            raise InvalidArgument("w = 0 is a rational, not a surd")
        if self.D <= 0 or isqrt(self.D) ** 2 == self.D:
            raise InvalidArgument(f"D = {self.D} must be a positive non-square")
        u, w, D, v = self.u, self.w, self.D, self.v
        s, D = _square_split(D)
        w *= s
        if v < 0:
            u, w, v = -u, -w, -v
        g = gcd(gcd(u, w), v)
        for name, val in zip("uwDv", (u // g, w // g, D, v // g)):
            object.__setattr__(self, name, val)

    def key(self) -> tuple[Fraction, Fraction, int]:
        """Rational part, squared irrational part and its sign."""
        return (
            Fraction(self.u, self.v),
            Fraction(self.w * self.w * self.D, self.v * self.v),
            1 if self.w > 0 else -1,
        )

    def __eq__(self, other):
        if isinstance(other, QuadraticSurd):
            return self.key() == other.key()
        if isinstance(other, (int, Fraction)):
            return False
        return NotImplemented

    def __hash__(self):
        return hash(self.key())

    def conjugate(self) -> QuadraticSurd:
        return QuadraticSurd(self.u, -self.w, self.D, self.v)

    def __add__(self, other):
        if isinstance(other, int):
            other = Fraction(other)
        if isinstance(other, Fraction):
            a, b = other.numerator, other.denominator
            return QuadraticSurd(self.u * b + a * self.v, self.w * b, self.D, self.v * b)
        return NotImplemented

    __radd__ = __add__

    def __mul__(self, other):
        if isinstance(other, int):
            other = Fraction(other)
        if isinstance(other, Fraction):
            a, b = other.numerator, other.denominator
            return QuadraticSurd(self.u * a, self.w * a, self.D, self.v * b)
        return NotImplemented

    __rmul__ = __mul__

    def reciprocal(self) -> QuadraticSurd:
        norm = self.u * self.u - self.w * self.w * self.D
        return QuadraticSurd(self.v * self.u, -self.v * self.w, self.D, norm)

    def minimal_polynomial(self) -> tuple[int, int, int]:
        """Primitive (A, B, C) with A > 0 and A*x^2 + B*x + C = 0."""
        A = self.v * self.v
        B = -2 * self.u * self.v
        C = self.u * self.u - self.w * self.w * self.D
        g = gcd(gcd(A, B), C)
        return A // g, B // g, C // g

    def __float__(self) -> float:
        lo, hi = real_enclosure(self, 17)
        return float((lo + hi) / 2)

    def __str__(self) -> str:
        u, w, D, v = self.u, self.w, self.D, self.v
        rad = f"sqrt({D})" if abs(w) == 1 else f"{abs(w)}*sqrt({D})"
        if u:
            body = f"{u}{'+' if w > 0 else '-'}{rad}"
        else:
            body = rad if w > 0 else f"-{rad}"
        if v == 1:
            return body
        return f"({body})/{v}"

    def __repr__(self) -> str:
        return f"QuadraticSurd({self})"


Real = Union[QuadraticSurd, Fraction]


def _reciprocal(y: Real) -> Real:
    return y.reciprocal() if isinstance(y, QuadraticSurd) else 1 / y


def real_enclosure(s: Real, decimal_digits: int) -> tuple[Fraction, Fraction]:
    """Rational bounds lower <= s <= upper with upper - lower <= 10**-digits."""
    if isinstance(s, Fraction):
        return s, s
    target = Fraction(1, 10**decimal_digits)
    scale = Fraction(abs(s.w), s.v)
    m = decimal_digits
    while True:
        r = isqrt(s.D * 10 ** (2 * m))
        lo_root, hi_root = Fraction(r, 10**m), Fraction(r + 1, 10**m)
        if scale * (hi_root - lo_root) <= target:
            break
        m += 1
    base = Fraction(s.u, s.v)
    a, b = base + Fraction(s.w, s.v) * lo_root, base + Fraction(s.w, s.v) * hi_root
    return (a, b) if a <= b else (b, a)


def _quadratic_roots(A: int, B: int, C: int) -> tuple[Real, Real]:
    """Roots of A x^2 + B x + C, larger first (A > 0 assumed)."""
    disc = B * B - 4 * A * C
    if disc < 0:
        raise InvalidArgument("complex roots")
    r = isqrt(disc)
    if r * r == disc:
        return Fraction(-B + r, 2 * A), Fraction(-B - r, 2 * A)
    return QuadraticSurd(-B, 1, disc, 2 * A), QuadraticSurd(-B, -1, disc, 2 * A)


def _primitive(A: int, B: int, C: int) -> tuple[int, int, int]:
    g = gcd(gcd(A, B), C)
    if A < 0 or (A == 0 and B < 0):
        g = -g
    return A // g, B // g, C // g


@dataclass
class SurdSolution:
    quadratic: tuple[int, int, int]
    roots: tuple[Real, ...]
    real_root: Real | None
    nadic_root_residues: dict[int, int]
    period_quadratic: tuple[int, int, int] = field(repr=False)
    period_matrix: tuple[int, int, int, int] = field(repr=False)


def _period_matrix(cf: HybridCF) -> tuple[int, int, int, int]:
    P, P1, Q, Q1 = 1, 0, 0, 1
    for c in cf.period:
        P, P1 = P * c + P1, P * cf.n
        Q, Q1 = Q * c + Q1, Q * cf.n
    return P, P1, Q, Q1


def periodic_to_surd(cf: HybridCF) -> SurdSolution:
    """Solve for the quadratic limit of an eventually periodic expansion.

    The purely periodic tail y is fixed by the period's Moebius map, giving
    Q y^2 + (Q' - P) y - P' = 0; the preperiod digits are then applied as
    y -> a + n/y.
    """
    if not cf.period:
        raise NotPeriodic("continued fraction has an empty period")
    n = cf.n
    P, P1, Q, Q1 = _period_matrix(cf)
    assert Q != 0, "period denominator continuant vanished"
    per_quad = _primitive(Q, Q1 - P, -P1)
    y_roots = _quadratic_roots(*per_quad)

    positive = n >= 1 and all(c > 0 for c in cf.period)
    y_real = y_roots[0] if positive else None

    def pull_back(y: Real | None) -> Real | None:
        for a in reversed(cf.preperiod):
            if y is None or y == 0:
                return None
            y = a + n * _reciprocal(y)
        return y

    roots = tuple(pull_back(y) for y in y_roots)
    real_root = pull_back(y_real) if y_real is not None else None
    finite = [r for r in roots if r is not None]
    if isinstance(finite[0], QuadraticSurd):
        quad = finite[0].minimal_polynomial()
    elif len(finite) == 2:
        a, b = finite
        quad = _primitive(
            a.denominator * b.denominator,
            -(a.numerator * b.denominator + b.numerator * a.denominator),
            a.numerator * b.numerator,
        )
    else:
        quad = _primitive(0, finite[0].denominator, -finite[0].numerator)
    residues = {p: cf.digit(0) % p for p, _ in make_context(abs(n), 1).factorization} if abs(n) > 1 else {}
    return SurdSolution(
        quadratic=quad,
        roots=tuple(finite),
        real_root=real_root,
        nadic_root_residues=residues,
        period_quadratic=per_quad,
        period_matrix=(P, P1, Q, Q1),
    )


def _lift_simple_root(coeffs: tuple[int, int, int], seed: int, p: int, exponent: int) -> int:
    """Hensel lift of a root of A y^2 + B y + C with unit derivative."""
    A, B, C = coeffs
    target = p**exponent
    y = seed % p
    e = 1
    while e < exponent:
        e = min(2 * e, exponent)
        m = p**e
        f = (A * y * y + B * y + C) % m
        df = (2 * A * y + B) % m
        y = (y - f * inverse_mod(df, m)) % m
    return y % target


def nadic_limit(cf: HybridCF, k: int) -> NadicInt:
    """The limit of a periodic expansion in Z/|n|^k, computed by lifting.

    Odd primes go through the Hensel square root of the period
    discriminant; p = 2 lifts the period quadratic directly (its derivative
    at the limit is a unit).
    """
    if not cf.period:
        raise NotPeriodic("continued fraction has an empty period")
    if abs(cf.n) < 2:
        raise InvalidArgument("no p-adic limit for |n| = 1")
    ctx = make_context(abs(cf.n), k)
    n = cf.n
    P, P1, Q, Q1 = _period_matrix(cf)
    c1 = cf.period[0]
    pairs = []
    for p, alpha in ctx.factorization:
        e = alpha * k
        m = p**e
        if p == 2:
            y = _lift_simple_root((Q, Q1 - P, -P1), c1, p, e)
        else:
            comp = make_context(p**alpha, k)
            disc = (Q1 - P) ** 2 + 4 * Q * P1
            s, _ = nadic_sqrt(NadicInt(comp, disc), {p: P % p})
            y = (P - Q1 + s.residue) * inverse_mod(2 * Q % m, m) % m
        for a in reversed(cf.preperiod):
            y = (a + n * inverse_mod(y, m)) % m
        pairs.append((y, m))
    return NadicInt(ctx, crt_combine(pairs))


# -- Heron's algorithm and the family [a; (b, 2a)*]_n -----------------------


def surd_family(a: int, b: int, n: int) -> int:
    """x with sqrt(x) = [a; (b, 2a)*]_n, namely a^2 + 2an/b."""
    if a < 1:
        raise InvalidFamily(f"a = {a} must be >= 1")
    for d in (b, 2 * a):
        if d < abs(n) or gcd(d, n) != 1:
            raise InvalidFamily(f"digit {d} must be >= |n| = {abs(n)} and coprime to {n}")
    if (2 * a * n) % b:
        raise InvalidFamily(f"{b} does not divide 2*{a}*{n}")
    x = a * a + 2 * a * n // b
    if x <= 0:
        raise InvalidFamily(f"x = {x} is not positive")
    if isqrt(x) ** 2 == x:
        raise DegenerateSquare(f"x = {x} is a perfect square")
    return x


def family_cf(a: int, b: int, n: int) -> HybridCF:
    return HybridCF(n, (a,), (b, 2 * a))


def heron_sequence(x: int, a0: int, steps: int) -> list[Fraction]:
    """Iterates a <- (a + x/a)/2 starting from a0, ``steps + 1`` values."""
    if a0 < 1:
        raise InvalidArgument("seed must be >= 1")
    seq = [Fraction(a0)]
    for _ in range(steps):
        a = seq[-1]
        seq.append((a + x / a) / 2)
    return seq


@dataclass
class HeronCheck:
    holds: bool
    x: int
    cf: HybridCF
    table: list[tuple[int, Fraction, Fraction]]  # (i, heron a_i, convergent with 2^i digits)

    def __bool__(self) -> bool:
        return self.holds


def heron_matches_cf(x: int, cf: HybridCF, depth: int) -> HeronCheck:
    """Compare Heron iterate i with the convergent built from 2**i digits."""
    if depth < 1:
        raise InvalidArgument("depth must be >= 1")
    heron = heron_sequence(x, cf.digit(0), depth)
    conv = convergents(cf, 2**depth)
    table = [(i, heron[i], conv[2**i - 1]) for i in range(depth + 1)]
    return HeronCheck(all(h == c for _, h, c in table), x, cf, table)


def verify_heron_correspondence(a: int, b: int, n: int, depth: int) -> HeronCheck:
    x = surd_family(a, b, n)
    return heron_matches_cf(x, family_cf(a, b, n), depth)


# -- dual convergence --------------------------------------------------------


@dataclass
class ConvergenceReport:
    cf: HybridCF
    depth: int
    precision: int
    convergents: list[Fraction]
    real_limit: Real | None
    # per convergent: lower and upper bound on |limit - convergent|
    real_bounds: list[tuple[Fraction, Fraction]] | None
    real_verdict: bool | None
    nadic_limit: NadicInt | None
    # v_p(convergent_j - limit), truncated at the component precision
    limit_valuations: dict[int, list[int]]
    # exact v_p(convergent_{j+1} - convergent_j)
    difference_valuations: dict[int, list[int]]
    nadic_verdict: bool | None
    valuation_law: bool

    @property
    def ok(self) -> bool:
        return all(v is not False for v in (self.real_verdict, self.nadic_verdict, self.valuation_law))


def _real_distances(limit: Real, conv: list[Fraction]) -> tuple[list[tuple[Fraction, Fraction]], bool]:
    digits = 20
    cap = 4 * max(len(str(c.denominator)) for c in conv) + 60
    while True:
        lo, hi = real_enclosure(limit, digits)
        bounds = []
        for c in conv:
            if lo <= c <= hi:
                near = Fraction(0)
            else:
                near = min(abs(lo - c), abs(hi - c))
            bounds.append((near, max(abs(hi - c), abs(lo - c))))
        ok = all(bounds[j + 1][1] < bounds[j][0] for j in range(len(bounds) - 1))
        if ok or digits >= cap:
            return bounds, ok
        digits *= 2


def dual_convergence_report(cf: HybridCF, depth: int, k: int) -> ConvergenceReport:
    if depth < 1 or k < 1:
        raise InvalidArgument("depth and precision must be >= 1")
    sol = periodic_to_surd(cf)
    pairs = convergent_pairs(cf, depth + 1)
    conv = [Fraction(p, q) for p, q in pairs[:depth]]

    if sol.real_root is not None:
        bounds, real_ok = _real_distances(sol.real_root, conv)
    else:
        bounds, real_ok = None, None

    n = cf.n
    limit = None
    limit_vals: dict[int, list[int]] = {}
    diff_vals: dict[int, list[int]] = {}
    nadic_ok = None
    law_ok = True
    if abs(n) > 1:
        ctx = make_context(abs(n), k)
        limit = nadic_limit(cf, k)
        nadic_ok = True
        for p, alpha in ctx.factorization:
            e = alpha * k
            m = p**e
            vals, dvals = [], []
            for j, (pj, qj) in enumerate(pairs[:depth]):
                assert qj % p, f"convergent denominator {qj} is not a unit at {p}"
                emb = from_rational(ctx, pj, qj)
                v = valuation((emb.residue - limit.residue) % m, p)
                vals.append(e if v is None else min(v, e))
                if vals[-1] != min((j + 1) * alpha, e):
                    nadic_ok = False
                if j + 1 < len(pairs):
                    p2, q2 = pairs[j + 1]
                    delta = Fraction(p2, q2) - Fraction(pj, qj)
                    dv = valuation(delta.numerator, p) - (valuation(delta.denominator, p) or 0)
                    dvals.append(dv)
                    if dv != (j + 1) * alpha:
                        law_ok = False
            if any(b < a for a, b in zip(vals, vals[1:])):
                nadic_ok = False
            limit_vals[p] = vals
            diff_vals[p] = dvals

    return ConvergenceReport(
        cf=cf,
        depth=depth,
        precision=k,
        convergents=conv,
        real_limit=sol.real_root,
        real_bounds=bounds,
        real_verdict=real_ok,
        nadic_limit=limit,
        limit_valuations=limit_vals,
        difference_valuations=diff_vals,
        nadic_verdict=nadic_ok,
        valuation_law=law_ok,
    )


# -- text syntax -------------------------------------------------------------

_CF_RE = re.compile(r"^\s*\[(?P<body>[^\]]*)\]\s*_\s*\{?(?P<n>[+-]?\d+)\}?\s*$")
_PERIOD_RE = re.compile(r"\(\s*(?P<digits>[^()]*)\)\s*\*\s*$")


def _ints(text: str) -> list[int]:
    parts = [t for t in re.split(r"[,;\s]+", text.strip()) if t]
    try:
        return [int(t) for t in parts]
    except ValueError:
        raise InvalidArgument(f"bad digit list {text!r}") from None


def parse_cf(text: str) -> HybridCF:
    """Parse "[a0; a1, a2]_n" or "[a0; a1, (b1, b2)*]_n"."""
    m = _CF_RE.match(text)
    if not m:
        raise InvalidArgument(f"not a continued fraction: {text!r}")
    body, n = m.group("body"), int(m.group("n"))
    period: list[int] = []
    pm = _PERIOD_RE.search(body)
    if pm:
        period = _ints(pm.group("digits"))
        if not period:
            raise InvalidArgument("empty period group")
        body = body[: pm.start()]
    if "(" in body or ")" in body:
        raise InvalidArgument("period group must close the digit list")
    return HybridCF(n, tuple(_ints(body)), tuple(period))


def format_cf(cf: HybridCF) -> str:
    digits = [str(d) for d in cf.preperiod]
    if cf.period:
        digits.append("(" + ", ".join(str(d) for d in cf.period) + ")*")
    if len(digits) > 1:
        body = digits[0] + "; " + ", ".join(digits[1:])
    else:
        body = digits[0]
    return f"[{body}]_{cf.n}"

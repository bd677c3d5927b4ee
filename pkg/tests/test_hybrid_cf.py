from fractions import Fraction
from math import gcd, isqrt

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from nadic.core import crt_split, from_rational, make_context
from nadic.errors import (
    DegenerateSquare,
    InvalidArgument,
    InvalidDigit,
    InvalidFamily,
    NotPeriodic,
)
from nadic.hybrid_cf import (
    HybridCF,
    QuadraticSurd,
    convergent_pairs,
    convergents,
    dual_convergence_report,
    evaluate,
    format_cf,
    heron_matches_cf,
    heron_sequence,
    nadic_limit,
    parse_cf,
    periodic_to_surd,
    real_enclosure,
    surd_family,
    verify_heron_correspondence,
)


def nested_eval(digits, n):
    """Evaluate a0 + n/(a1 + n/(...)) from the tail, no recurrences."""
    value = Fraction(digits[-1])
    for a in reversed(digits[:-1]):
        value = a + n / value
    return value


GOLDEN = [
    ("[3;6]_5", Fraction(23, 6)),
    ("[3;6,6,6]_5", Fraction(1033, 276)),
    ("[4;8]_5", Fraction(37, 8)),
    ("[4;8,8,8]_5", Fraction(2713, 592)),
    ("[11;11]_10", Fraction(131, 11)),
    ("[11;11,11]_10", Fraction(1551, 131)),
    ("[8;16]_15", Fraction(143, 16)),
    ("[8;16,16,16]_15", Fraction(40673, 4576)),
    ("[4;4]_3", Fraction(19, 4)),
    ("[4;4,8,4]_3", Fraction(713, 152)),
]


@pytest.mark.parametrize("text, value", GOLDEN)
def test_golden_convergents(text, value):
    cf = parse_cf(text)
    assert evaluate(cf) == value
    assert nested_eval(list(cf.preperiod), cf.n) == value


def test_single_digit():
    for n in (1, 5, -3, 12):
        assert convergents(HybridCF(n, (7,)), 1) == [Fraction(7)]


def test_digit_invariants():
    with pytest.raises(InvalidDigit):
        HybridCF(5, (3, 4))
    with pytest.raises(InvalidDigit):
        HybridCF(5, (3, 10))
    with pytest.raises(InvalidDigit):
        HybridCF(10, (1,), (12,))
    HybridCF(5, (-3, 6))  # leading digit is exempt
    with pytest.raises(InvalidArgument):
        HybridCF(0, (1,))


def test_parse_and_format():
    cf = parse_cf("[4; (8, 4)*]_3")
    assert cf == HybridCF(3, (4,), (8, 4))
    assert parse_cf(format_cf(cf)) == cf
    assert parse_cf("[(6)*]_5") == HybridCF(5, (), (6,))
    assert parse_cf("[3,6,6,6]_5") == HybridCF(5, (3, 6, 6, 6))
    assert parse_cf("[2; 3, (7)*]_{-2}").n == -2
    for bad in ("3;6]_5", "[3; (6)* , 7]_5", "[3; ()*]_5", "[a]_5"):
        with pytest.raises(InvalidArgument):
            parse_cf(bad)


@pytest.mark.parametrize(
    "text, surd",
    [
        ("[(6)*]_5", QuadraticSurd(3, 1, 14)),
        ("[(8)*]_5", QuadraticSurd(4, 1, 21)),
        ("[(11)*]_10", QuadraticSurd(11, 1, 161, 2)),
        ("[(16)*]_15", QuadraticSurd(8, 1, 79)),
        ("[(8,4)*]_3", QuadraticSurd(4, 1, 22)),
    ],
)
def test_periodic_to_surd(text, surd):
    sol = periodic_to_surd(parse_cf(text))
    assert sol.real_root == surd
    assert sol.real_root in sol.roots


def test_surd_quadratic_example1():
    sol = periodic_to_surd(parse_cf("[(6)*]_5"))
    assert sol.quadratic == (1, -6, -5)
    assert sol.nadic_root_residues == {5: 1}


def test_preperiod_surd_matches_family():
    # sqrt(14) = [3; (6)*]_5 : the preperiod shifts 3 + sqrt(14) down by 3
    sol = periodic_to_surd(parse_cf("[3; (6)*]_5"))
    assert sol.real_root == QuadraticSurd(0, 1, 14)
    assert sol.quadratic == (1, 0, -14)


def test_not_periodic():
    with pytest.raises(NotPeriodic):
        periodic_to_surd(parse_cf("[3;6]_5"))


def test_rational_limit_is_handled():
    # 3 - 2/(3 - 2/...) solves y^2 - 3y + 2 = (y - 1)(y - 2)
    cf = HybridCF(-2, (), (3,))
    sol = periodic_to_surd(cf)
    assert set(sol.roots) == {Fraction(1), Fraction(2)}
    assert sol.real_root is None  # negative n: real side left unverified
    # convergents (2^(j+1) - 1)/(2^j - 1) head to 2 in R but to 1 in Z_2
    conv = convergents(cf, 8)
    assert conv[-1] == Fraction(2**9 - 1, 2**8 - 1)
    assert nadic_limit(cf, 10).residue == 1


def test_surd_normalization():
    assert QuadraticSurd(6, 2, 14, 2) == QuadraticSurd(3, 1, 14)
    assert QuadraticSurd(0, 1, 56) == QuadraticSurd(0, 2, 14)
    assert QuadraticSurd(1, 1, 2, -1) == QuadraticSurd(-1, -1, 2)
    assert str(QuadraticSurd(11, 1, 161, 2)) == "(11+sqrt(161))/2"
    assert str(QuadraticSurd(3, 1, 14)) == "3+sqrt(14)"
    with pytest.raises(InvalidArgument):
        QuadraticSurd(0, 1, 4)
    s = QuadraticSurd(3, 1, 14)
    assert s.reciprocal().reciprocal() == s
    assert (s + 2) * Fraction(1, 5) == QuadraticSurd(5, 1, 14, 5)


@pytest.mark.parametrize(
    "a, b, n, x", [(3, 6, 5, 14), (4, 4, 3, 22), (8, 16, 15, 79), (4, 8, 5, 21)]
)
def test_surd_family(a, b, n, x):
    assert surd_family(a, b, n) == x
    sol = periodic_to_surd(HybridCF(n, (a,), (b, 2 * a)))
    assert sol.real_root == QuadraticSurd(0, 1, x)


def test_surd_family_errors():
    with pytest.raises(InvalidFamily):
        surd_family(3, 7, 5)  # 7 does not divide 30
    with pytest.raises(InvalidFamily):
        surd_family(3, 5, 5)  # not coprime
    with pytest.raises(InvalidFamily):
        surd_family(1, 2, 5)  # digits below |n|
    with pytest.raises(DegenerateSquare):
        surd_family(2, 4, -3)  # 4 - 3 = 1
    # with n > 0 the family value sits strictly between a^2 and (a + 1)^2
    for a in range(1, 30):
        for n in range(1, 12):
            for b in range(n, 2 * a + 1):
                try:
                    x = surd_family(a, b, n)
                except InvalidFamily:
                    continue
                assert a * a < x < (a + 1) ** 2


def test_heron_sequences():
    assert heron_sequence(14, 3, 2) == [3, Fraction(23, 6), Fraction(1033, 276)]
    assert heron_sequence(21, 4, 2) == [4, Fraction(37, 8), Fraction(2713, 592)]
    assert heron_sequence(22, 4, 2) == [4, Fraction(19, 4), Fraction(713, 152)]
    assert heron_sequence(4, 2, 5) == [2] * 6


def test_heron_correspondence_examples():
    check = verify_heron_correspondence(3, 6, 5, 2)
    assert check.holds
    assert check.table[-1][1] == check.table[-1][2] == Fraction(1033, 276)
    check = verify_heron_correspondence(4, 4, 3, 2)
    assert check.holds and check.table[-1][2] == Fraction(713, 152)


def test_heron_negative_control_sqrt7():
    cf = HybridCF(1, (2,), (1, 1, 1, 4))
    conv = convergents(cf, 20)
    # classical check: convergents of sqrt(7) approach it
    assert abs(conv[-1] ** 2 - 7) < Fraction(1, 10**8)
    check = heron_matches_cf(7, cf, 2)
    assert not check.holds
    assert check.table[1][1] == Fraction(11, 4) and check.table[1][2] == 3


@given(st.integers(1, 30), st.sampled_from([1, 2, 3, 5, 7, 10, 15]))
def test_period_one_family_always_matches(a, n):
    # b = 2a gives x = a^2 + n
    assume(2 * a >= n and gcd(2 * a, n) == 1)
    x = a * a + n
    assume(isqrt(x) ** 2 != x)
    assert verify_heron_correspondence(a, 2 * a, n, 3).holds


def test_real_enclosure():
    lo, hi = real_enclosure(QuadraticSurd(0, 1, 14), 6)
    r = isqrt(14 * 10**12)
    assert (lo, hi) == (Fraction(r, 10**6), Fraction(r + 1, 10**6))
    assert (lo, hi) == (Fraction(3741657, 10**6), Fraction(3741658, 10**6))
    lo3, hi3 = real_enclosure(QuadraticSurd(3, 1, 14), 6)
    assert (lo3 - lo, hi3 - hi) == (3, 3)
    lo, hi = real_enclosure(QuadraticSurd(11, -7, 161, 3), 30)
    assert hi - lo <= Fraction(1, 10**30)
    assert lo <= Fraction(11 * 10**20 - 7 * isqrt(161 * 10**40), 3 * 10**20) <= hi + Fraction(7, 3 * 10**20)


def test_dual_report_example1():
    cf = parse_cf("[(6)*]_5")
    rep = dual_convergence_report(cf, 8, 8)
    assert rep.ok and rep.real_verdict and rep.nadic_verdict and rep.valuation_law
    # independent: embed the 12th convergent and compare with the limit mod 5^8
    p, q = convergent_pairs(cf, 12)[-1]
    assert from_rational(make_context(5, 8), p, q) == rep.nadic_limit
    assert rep.nadic_limit.residue % 5 == 1
    widths = [hi for _, hi in rep.real_bounds]
    assert all(b < a for a, b in zip(widths, widths[1:]))


def test_dual_report_example3_both_components():
    cf = parse_cf("[(11)*]_10")
    rep = dual_convergence_report(cf, 6, 6)
    assert rep.ok
    assert rep.limit_valuations == {2: [1, 2, 3, 4, 5, 6], 5: [1, 2, 3, 4, 5, 6]}
    p, q = convergent_pairs(cf, 10)[-1]
    emb = from_rational(make_context(10, 6), p, q)
    assert crt_split(emb) == crt_split(rep.nadic_limit)


def test_dual_report_depth_one():
    rep = dual_convergence_report(parse_cf("[(16)*]_15"), 1, 4)
    assert rep.ok and len(rep.convergents) == 1


def test_negative_n_real_side_unverified():
    cf = HybridCF(-5, (), (7,))
    rep = dual_convergence_report(cf, 6, 6)
    assert rep.real_verdict is None
    assert rep.nadic_verdict and rep.valuation_law


def test_nadic_limit_sqrt_route_matches_newton():
    # for odd primes, the square-root route must agree with a brute-force root search
    cf = parse_cf("[(8,4)*]_3")
    lim = nadic_limit(cf, 5).residue
    roots = [y for y in range(3**5) if (y * y - 8 * y - 6) % 3**5 == 0 and y % 3 == 8 % 3]
    assert roots == [lim]


@st.composite
def valid_cfs(draw, periodic=False):
    n = draw(st.sampled_from([1, 2, 3, 5, 6, 10, 12, 15, -3, -7]))
    length = draw(st.integers(1, 4))
    digit = st.integers(abs(n), abs(n) + 40).filter(lambda d: gcd(d, n) == 1)
    a0 = draw(st.integers(-20, 40))
    if periodic:
        period = tuple(draw(st.lists(digit, min_size=1, max_size=length)))
        pre = tuple([a0] + draw(st.lists(digit, max_size=2)))
        return HybridCF(n, pre, period)
    return HybridCF(n, (a0,), tuple(draw(st.lists(digit, min_size=1, max_size=length))))


@given(valid_cfs(periodic=True))
def test_determinant_and_difference_identities(cf):
    n = cf.n
    pairs = convergent_pairs(cf, 21)
    prev = (1, 0)
    for j, (p, q) in enumerate(pairs):
        assert p * prev[1] - prev[0] * q == (-1) ** (j + 1) * n**j
        prev = (p, q)
    for j in range(20):
        (p0, q0), (p1, q1) = pairs[j], pairs[j + 1]
        assert Fraction(p1, q1) - Fraction(p0, q0) == Fraction((-1) ** j * n ** (j + 1), q1 * q0)


@given(valid_cfs(periodic=True))
def test_denominators_coprime_and_growing(cf):
    pairs = convergent_pairs(cf, 20)
    for _, q in pairs:
        assert gcd(q, cf.n) == 1
    if cf.n > 0:
        qs = [q for _, q in pairs]
        assert all(b >= a for a, b in zip(qs[1:], qs[2:]))


@settings(max_examples=40, deadline=None)
@given(valid_cfs(periodic=True), st.integers(1, 10))
def test_limit_is_root_of_same_quadratic(cf, k):
    sol = periodic_to_surd(cf)
    A, B, C = sol.quadratic
    if abs(cf.n) > 1:
        lim = nadic_limit(cf, k)
        m = lim.context.modulus
        assert (A * lim.residue**2 + B * lim.residue + C) % m == 0
        for p, r in sol.nadic_root_residues.items():
            assert lim.residue % p == r
    for root in sol.roots:
        if isinstance(root, QuadraticSurd):
            assert root.minimal_polynomial() == (A, B, C)
        else:
            assert A * root * root + B * root + C == 0


@settings(max_examples=30, deadline=None)
@given(valid_cfs(periodic=True))
def test_report_passes_for_random_cfs(cf):
    rep = dual_convergence_report(cf, 10, 6)
    if cf.n >= 1:
        assert rep.real_verdict
    if abs(cf.n) > 1:
        assert rep.nadic_verdict and rep.valuation_law
        for vals in rep.limit_valuations.values():
            assert all(v >= 0 for v in vals)
            assert vals == sorted(vals)


@given(st.integers(2, 500), st.integers(1, 30))
def test_heron_chinese_boxes(x, seed_shift):
    assume(isqrt(x) ** 2 != x)
    a0 = max(1, isqrt(x) - seed_shift % (isqrt(x) or 1))
    seq = heron_sequence(x, a0, 5)
    prev = None
    for a in seq:
        lo, hi = sorted((a, x / a))
        # lo <= sqrt(x) <= hi, checked as squares
        assert lo * lo <= x <= hi * hi
        if prev is not None:
            assert prev[0] <= lo and hi <= prev[1]
        prev = (lo, hi)

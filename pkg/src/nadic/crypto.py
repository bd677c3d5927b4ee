"""Toy multiplicative cipher on Z/n^k and digit codecs.

NOT SECURE: x -> x*y is linear and trivially malleable; a single known
plaintext/ciphertext pair reveals the key. For demonstration only.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .core import (
    ALPHABET,
    DigitString,
    NadicContext,
    NadicInt,
    digits,
    from_digits,
    invert,
    make_context,
)
from .errors import InvalidArgument, InvalidCharacter, NotInvertible

BASE37_ALPHABET = ALPHABET  # 0-9, A-Z, then "_" as separator


@dataclass(frozen=True)
class CipherKey:
    context: NadicContext
    y: NadicInt
    y_inv: NadicInt


def make_key(c: NadicContext, y: int | NadicInt) -> CipherKey:
    y = y if isinstance(y, NadicInt) else NadicInt(c, y)
    if y.context != c:
        raise InvalidArgument("key lives in a different context")
    return CipherKey(c, y, invert(y))


def encrypt(key: CipherKey, x: NadicInt) -> NadicInt:
    if x.context != key.context:
        raise InvalidArgument("message and key contexts differ")
    return x * key.y


def decrypt(key: CipherKey, c: NadicInt) -> NadicInt:
    if c.context != key.context:
        raise InvalidArgument("ciphertext and key contexts differ")
    return c * key.y_inv


def keygen(c: NadicContext, seed: bytes) -> CipherKey:
    """Derive a unit key from seed bytes: reduce, then step up to a unit."""
    y = int.from_bytes(seed, "big") % c.modulus
    while gcd(y % c.base, c.base) != 1:
        y = (y + 1) % c.modulus
    return make_key(c, y)


def encode_base37(s: str, k: int | None = None) -> NadicInt:
    """Read text as a 37-adic integer, last character least significant.

    Messages shorter than ``k`` are padded with leading zero digits.
    """
    k = len(s) if k is None else k
    if len(s) > k:
        raise InvalidArgument(f"message of {len(s)} characters exceeds precision {k}")
    vals = []
    for pos, ch in enumerate(s):
        idx = BASE37_ALPHABET.find(ch)
        if idx < 0:
            raise InvalidCharacter(f"character {ch!r} at position {pos} is outside the alphabet", pos)
        vals.append(idx)
    return from_digits(make_context(37, max(k, 1)), tuple(reversed(vals)))


def decode_base37(x: NadicInt) -> str:
    if x.context.base != 37:
        raise InvalidArgument("not a base-37 value")
    return digits(x).render()


def pow2_encode(m: int, data: bytes) -> DigitString:
    """Pack big-endian bytes into base-2^m digits, least significant first."""
    if m < 1:
        raise InvalidArgument("bits per digit must be >= 1")
    value = int.from_bytes(data, "big")
    count = -(-8 * len(data) // m)
    mask = (1 << m) - 1
    return DigitString(1 << m, tuple((value >> (m * i)) & mask for i in range(count)))


def pow2_decode(d: DigitString, length: int | None = None) -> bytes:
    m = d.base.bit_length() - 1
    if d.base != 1 << m:
        raise InvalidArgument(f"base {d.base} is not a power of two")
    if length is None:
        length = m * len(d) // 8
    return d.value().to_bytes(length, "big")


def last_digit_inverse(d: int, m: int) -> int:
    """Inverse of an odd digit modulo 2^m by 2-adic Newton iteration.

    Starts from t = d, which is already correct mod 8 since d*d = 1 mod 8.
    """
    if d % 2 == 0:
        raise NotInvertible(f"digit {d} is even", prime=2)
    t, bits = d, 3
    while bits < m:
        bits = min(2 * bits, m)
        t = t * (2 - d * t) % (1 << bits)
    return t % (1 << m)

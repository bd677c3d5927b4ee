"""Truncated n-adic arithmetic, hybrid n-continued fractions and applications."""
from .core import (
    DigitString,
    NadicContext,
    NadicInt,
    crt_join,
    crt_split,
    digits,
    from_digits,
    from_integer,
    from_rational,
    invert,
    make_context,
)
from .errors import NadicError

__all__ = [
    "DigitString",
    "NadicContext",
    "NadicError",
    "NadicInt",
    "crt_join",
    "crt_split",
    "digits",
    "from_digits",
    "from_integer",
    "from_rational",
    "invert",
    "make_context",
]

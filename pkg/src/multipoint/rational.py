"""Exact rational scalars.

Every coordinate in this package is a rational number in lowest terms with
positive denominator.  We use gmpy2's mpq when available (much faster on
the fuzzing workloads) and fall back to fractions.Fraction, which has the
same canonical-form guarantees.  Plain ``int`` values mix freely with
either type under arithmetic; division of two ints must always go through
:func:`rat` so it never produces a float.
"""

from __future__ import annotations

import re

try:
    from gmpy2 import mpq as Rat  # type: ignore[import-not-found]

    GMPY2 = True
except ImportError:  # pragma: no cover - exercised only without gmpy2
    from fractions import Fraction as Rat  # type: ignore[assignment]

    GMPY2 = False


def rat(num, den=1):
    """Exact quotient ``num/den`` as a canonical rational."""
    return Rat(num, den)


ZERO = rat(0)
ONE = rat(1)

_RATIONAL_RE = re.compile(r"^[+-]?\d+(/\d+)?$")


def parse_rational(text: str):
    """Parse ``p`` or ``p/q`` into a rational; reject anything else.

    Raises ValueError for malformed text and for zero denominators, with a
    message beginning ``invalid rational`` so parsers can cite the input.
    """
    s = text.strip()
    if not _RATIONAL_RE.match(s):
        raise ValueError(f"invalid rational {text!r}")
    if "/" in s:
        p, q = s.split("/")
        if int(q) == 0:
            raise ValueError(f"invalid rational {text!r}: zero denominator")
        return rat(int(p), int(q))
    return rat(int(s))


def format_rational(q) -> str:
    """Render a rational as ``p`` or ``p/q`` (lowest terms, q > 0)."""
    num, den = q.numerator, q.denominator
    if den == 1:
        return str(num)
    return f"{num}/{den}"


def rfloor(q) -> int:
    """Floor of a rational as a plain int."""
    return int(q.numerator // q.denominator)


def rceil(q) -> int:
    """Ceiling of a rational as a plain int."""
    return -rfloor(-q)


__all__ = [
    "Rat",
    "GMPY2",
    "rat",
    "ZERO",
    "ONE",
    "parse_rational",
    "format_rational",
    "rfloor",
    "rceil",
]

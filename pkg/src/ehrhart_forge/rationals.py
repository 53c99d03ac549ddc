"""Exact rational scalars.

Every scalar in the geometry is a ``fractions.Fraction``: canonical form
(positive denominator, reduced) is guaranteed by the stdlib type, so the
helpers here only handle construction, parsing and the canonical "p/q"
string form used by all JSON interfaces.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import InvalidInputError


def make_rational(num: int, den: int) -> Fraction:
    """Canonical rational num/den; the sign is carried by the numerator."""
    if den == 0:
        raise InvalidInputError("rational denominator must be nonzero")
    return Fraction(num, den)


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and strings ("p/q", "7", "0.25") exactly."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    if isinstance(value, float):
        raise InvalidInputError(
            f"refusing float {value!r}: pass an int, Fraction or 'p/q' string"
        )
    raise InvalidInputError(f"cannot interpret {value!r} as a rational")


def parse_rational(text: str) -> Fraction:
    """Parse "p/q", integer or decimal strings; ASCII or U+2212 minus."""
    cleaned = text.strip().replace("−", "-")
    try:
        return Fraction(cleaned)
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidInputError(f"malformed rational {text!r}") from exc


def rat_str(value: Fraction) -> str:
    """Canonical "num/den" form, denominator always explicit ("0/1", "3/1")."""
    f = as_rational(value)
    return f"{f.numerator}/{f.denominator}"

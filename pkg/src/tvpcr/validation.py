"""Input validation helpers: exact rational parsing and common argument checks."""

from __future__ import annotations

import math
from fractions import Fraction

from .exceptions import ValidationError

RationalLike = "int | str | float | Fraction"


def as_rational(value) -> Fraction:
    """Convert an int, Fraction, exact decimal/fraction string or float to Fraction.

    Floats convert exactly (no rounding); inf/nan are rejected.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValidationError(f"not a rational value: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValidationError(f"non-finite value: {value!r}")
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"cannot parse rational {value!r}") from exc
    raise ValidationError(f"not a rational value: {value!r}")


def as_rational_seq(values) -> tuple[Fraction, ...]:
    return tuple(as_rational(v) for v in values)


def require_strictly_increasing(values, what: str = "coordinates") -> None:
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ValidationError(f"{what} must be strictly increasing: {values!r}")


def require_positive(value: Fraction, what: str = "value") -> None:
    if value <= 0:
        raise ValidationError(f"{what} must be positive, got {value}")

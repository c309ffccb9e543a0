"""Exact scalar types: rationals, one-variable affine forms, closed/open intervals.

Every quantity in this package is an exact rational; affine forms ``a*x + b``
over one rational variable are the symbolic counterpart.  There is no floating
point anywhere in the computational path; approximate output, where offered, is formatting only.

The text encoding of a rational is ``p/q`` with an optional leading minus and
the ``/q`` part omitted when the denominator is 1.  Input may be unreduced;
output is always in lowest terms.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

Rational = Fraction

_RATIONAL_RE = re.compile(r"-?[0-9]+(/[1-9][0-9]*)?\Z")


def parse_rational(text: str) -> Fraction:
    """Parse ``p`` or ``p/q`` into a Fraction, rejecting anything else.

    Deliberately narrower than ``Fraction(str)``: decimals, exponents and
    whitespace are not part of the format.
    """
    if not isinstance(text, str) or not _RATIONAL_RE.match(text):
        raise ValueError(f"not a rational literal: {text!r}")
    if "/" in text:
        num, den = text.split("/")
        return Fraction(int(num), int(den))
    return Fraction(int(text))


def format_rational(q: Fraction) -> str:
    """Render in lowest terms, ``/1`` omitted."""
    return str(Fraction(q))


@dataclass(frozen=True)
class AffineForm:
    """The function ``a*x + b`` with exact rational coefficients."""

    a: Fraction
    b: Fraction

    def __call__(self, x: Fraction) -> Fraction:
        return self.a * x + self.b

    def __str__(self) -> str:
        return f"{format_rational(self.a)}*x + {format_rational(self.b)}"

    def to_json(self) -> dict:
        return {"a": format_rational(self.a), "b": format_rational(self.b)}

    @classmethod
    def from_json(cls, obj: dict) -> "AffineForm":
        return cls(parse_rational(obj["a"]), parse_rational(obj["b"]))


def affine_eval(f: AffineForm, x: Fraction) -> Fraction:
    """Exact value of ``f`` at ``x``."""
    return f.a * x + f.b


def affine_intersection(f: AffineForm, g: AffineForm) -> Fraction | None:
    """The unique x with f(x) == g(x), or None for parallel (or equal) forms."""
    if f.a == g.a:
        return None
    return (g.b - f.b) / (f.a - g.a)


@dataclass(frozen=True)
class RInterval:
    """Rational interval with per-endpoint closure flags.

    ``lo == hi`` forces both flags (a singleton); anything narrower would be
    empty and is rejected at construction.
    """

    lo: Fraction
    hi: Fraction
    lo_closed: bool
    hi_closed: bool

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval: {self.lo} > {self.hi}")
        if self.lo == self.hi and not (self.lo_closed and self.hi_closed):
            raise ValueError("a singleton interval must be closed at both ends")

    def __contains__(self, x: Fraction) -> bool:
        if x < self.lo or x > self.hi:
            return False
        if x == self.lo and not self.lo_closed:
            return False
        if x == self.hi and not self.hi_closed:
            return False
        return True

    @property
    def is_singleton(self) -> bool:
        return self.lo == self.hi

    def __str__(self) -> str:
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        return f"{left}{format_rational(self.lo)}, {format_rational(self.hi)}{right}"

    def to_json(self) -> dict:
        return {
            "lo": format_rational(self.lo),
            "hi": format_rational(self.hi),
            "lo_closed": self.lo_closed,
            "hi_closed": self.hi_closed,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "RInterval":
        return cls(
            parse_rational(obj["lo"]),
            parse_rational(obj["hi"]),
            bool(obj["lo_closed"]),
            bool(obj["hi_closed"]),
        )

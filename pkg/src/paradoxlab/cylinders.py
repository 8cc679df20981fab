"""Cylinder sets of the Bernoulli space {0,1}^G with exact dyadic measure.

Coordinates are reduced words; the optional ``R``/``S`` tag models the
doubled space of the copied-space rule and contributes an independent
factor 1/2 to the measure.  Every measure in this module is an exact
``fractions.Fraction``; no floating point is used anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping

from .errors import NonInvertible, SizeLimit
from .words import FREE_MONOID, Presentation, Word, format_word, multiply, parse_word

Rational = Fraction

DEFAULT_PATTERN_CAP = 24

TAGS = ("R", "S")


def _canonical(assignment: Mapping[Word, int] | Iterable[tuple[Word, int]]):
    items = dict(assignment).items() if isinstance(assignment, Mapping) else assignment
    out = {}
    for w, b in items:
        if b not in (0, 1):
            raise ValueError(f"bit must be 0 or 1, got {b!r}")
        if w in out and out[w] != b:
            raise ValueError(f"conflicting bits for coordinate {format_word(w)}")
        out[w] = b
    key = lambda item: (len(item[0].syllables), item[0].syllables)
    return tuple(sorted(out.items(), key=key))


@dataclass(frozen=True)
class Cylinder:
    """Finite partial bit assignment; measure 2^-(support size)."""

    assignment: tuple[tuple[Word, int], ...] = ()
    tag: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "assignment", _canonical(self.assignment))
        if self.tag is not None and self.tag not in TAGS:
            raise ValueError(f"tag must be one of {TAGS}, got {self.tag!r}")

    @property
    def support(self) -> tuple[Word, ...]:
        return tuple(w for w, _ in self.assignment)

    def bit(self, coord: Word) -> int | None:
        for w, b in self.assignment:
            if w == coord:
                return b
        return None

    def to_json(self) -> dict:
        return {
            "coords": [[format_word(w), b] for w, b in self.assignment],
            "tag": self.tag,
        }

    @staticmethod
    def from_json(obj: dict, p: Presentation) -> "Cylinder":
        coords = [(parse_word(ws, p), int(b)) for ws, b in obj.get("coords", [])]
        return Cylinder(tuple(coords), obj.get("tag"))


def cylinder(assignment: Mapping[Word, int], tag: str | None = None) -> Cylinder:
    return Cylinder(tuple(assignment.items()), tag)


def cylinder_measure(c: Cylinder) -> Rational:
    """2^-(support size), times 1/2 if a tag constraint is present."""
    m = Fraction(1, 2 ** len(c.assignment))
    if c.tag is not None:
        m /= 2
    return m


def shift(g: Word, c: Cylinder, p: Presentation) -> Cylinder:
    """Pull a cylinder back along the canonical right shift.

    The value of ``(g x)`` at coordinate ``h`` is the value of ``x`` at
    ``h g``, so each coordinate ``h`` is replaced by ``h g``.  Rejected for
    semigroup elements (the relabelling is only guaranteed bijective for
    invertible ``g``).
    """
    if any(p.kind(gen) == FREE_MONOID for gen, _ in g.syllables):
        raise NonInvertible(f"cannot shift by semigroup element {format_word(g)}")
    moved = tuple((multiply(h, g, p), b) for h, b in c.assignment)
    return Cylinder(moved, c.tag)


def flip(coord: Word, c: Cylinder) -> Cylinder:
    """Toggle the bit at one coordinate (an involution; measure preserving).

    Cylinders not constraining ``coord`` are fixed.
    """
    out = tuple((w, 1 - b if w == coord else b) for w, b in c.assignment)
    return Cylinder(out, c.tag)


def enumerate_patterns(
    coords: list[Word], cap: int = DEFAULT_PATTERN_CAP
) -> list[tuple[tuple[int, ...], Rational]]:
    """All bit assignments on ``coords``, each with measure 2^-n.

    The measures sum to one; raises SizeLimit above the cap.
    """
    n = len(coords)
    if len(set(coords)) != n:
        raise ValueError("coordinates must be distinct")
    if n > cap:
        raise SizeLimit(f"{n} coordinates exceed the pattern cap {cap}")
    m = Fraction(1, 2**n)
    return [(bits, m) for bits in product((0, 1), repeat=n)]

"""Normal-form arithmetic for free products of cyclic groups, free monoid
generators and free (invertible) generators, plus finite Cayley-ball
generation.

Elements are stored as alternating syllable lists ``(generator, exponent)``:
adjacent syllables use distinct generators, cyclic exponents lie in
``1..order-1``, monoid exponents are strictly positive and free-generator
exponents are any nonzero integer.  The empty syllable list is the identity.

Group elements act on configurations by left multiplication of vertex
labels, so the descendant ``g(x)`` of the point sitting at vertex ``w`` sits
at vertex ``g*w``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .errors import NegativeMonoidExponent, NonInvertible, SizeLimit

CYCLIC = "cyclic"
FREE_MONOID = "free-monoid"
FREE = "free"

DEFAULT_BALL_CAP = 10**6


@dataclass(frozen=True)
class FactorSpec:
    """One factor of a free product: a finite cyclic group or a free monoid."""

    name: str
    kind: str
    order: int | None = None

    def __post_init__(self):
        if self.kind not in (CYCLIC, FREE_MONOID):
            raise ValueError(f"unknown factor kind {self.kind!r}")
        if self.kind == CYCLIC and (self.order is None or self.order < 2):
            raise ValueError("cyclic factors need order >= 2")
        if self.kind == FREE_MONOID and self.order is not None:
            raise ValueError("free-monoid factors carry no order")
        if not self.name or self.name == "e" or not self.name.isalnum():
            raise ValueError(f"bad generator name {self.name!r}")


@dataclass(frozen=True)
class Presentation:
    """A free product of cyclic/monoid factors and free invertible generators.

    ``free_gens`` are the names of invertible generators without relations;
    a free group of rank 2 is ``Presentation((), ("a", "b"))``.
    """

    factors: tuple[FactorSpec, ...] = ()
    free_gens: tuple[str, ...] = ()
    name: str = field(default="", compare=False)

    def __post_init__(self):
        names = [f.name for f in self.factors] + list(self.free_gens)
        if not names:
            raise ValueError("a presentation needs at least one generator")
        if len(set(names)) != len(names):
            raise ValueError("generator names must be unique")
        for g in self.free_gens:
            if not g or g == "e" or not g.isalnum():
                raise ValueError(f"bad generator name {g!r}")

    @property
    def free_rank(self) -> int:
        return len(self.free_gens)

    def kind(self, gen: str) -> str:
        for f in self.factors:
            if f.name == gen:
                return f.kind
        if gen in self.free_gens:
            return FREE
        raise ValueError(f"generator {gen!r} not in presentation {self.name or self.factors}")

    def order(self, gen: str) -> int | None:
        for f in self.factors:
            if f.name == gen:
                return f.order
        if gen in self.free_gens:
            return None
        raise ValueError(f"generator {gen!r} not in presentation {self.name or self.factors}")

    def generators(self) -> tuple[str, ...]:
        return tuple(f.name for f in self.factors) + self.free_gens

    def generator_moves(self) -> tuple["Word", ...]:
        """Single-step moves of the symmetric generating set.

        Cyclic factors contribute the generator and (for order > 2) its
        inverse; monoid factors only the forward generator; free generators
        both directions.
        """
        moves = []
        for f in self.factors:
            moves.append(Word(((f.name, 1),)))
            if f.kind == CYCLIC and f.order > 2:
                moves.append(Word(((f.name, f.order - 1),)))
        for g in self.free_gens:
            moves.append(Word(((g, 1),)))
            moves.append(Word(((g, -1),)))
        return tuple(moves)


@dataclass(frozen=True)
class Word:
    """Reduced alternating normal form; the vertex identity in every graph."""

    syllables: tuple[tuple[str, int], ...] = ()

    def __str__(self) -> str:
        return format_word(self)

    def __repr__(self) -> str:
        return f"Word({format_word(self)!r})"

    @property
    def is_identity(self) -> bool:
        return not self.syllables


E = Word(())


def _normalise_exponent(gen: str, exp: int, p: Presentation) -> int:
    kind = p.kind(gen)
    if kind == CYCLIC:
        return exp % p.order(gen)
    if kind == FREE_MONOID:
        if exp < 0:
            raise NegativeMonoidExponent(
                f"negative power {exp} of monoid generator {gen!r}"
            )
        return exp
    return exp


def reduce_word(raw: Iterable[tuple[str, int]], p: Presentation) -> Word:
    """Reduce a syllable list to the unique alternating normal form.

    Idempotent; raises NegativeMonoidExponent if the input asks for a
    negative power of a free-monoid generator.
    """
    stack: list[tuple[str, int]] = []
    for gen, exp in raw:
        p.kind(gen)  # validates membership
        exp = _normalise_exponent(gen, exp, p)
        if exp == 0:
            continue
        while stack and stack[-1][0] == gen:
            _, prev = stack.pop()
            exp = _normalise_exponent(gen, prev + exp, p)
            if exp == 0:
                break
        else:
            stack.append((gen, exp))
            continue
        # merged to identity: the next input syllable may now cancel further,
        # which the loop handles naturally since we pushed nothing.
    return Word(tuple(stack))


def multiply(w1: Word, w2: Word, p: Presentation) -> Word:
    """Product in the free product; ``e`` is a two-sided identity."""
    if w1.is_identity:
        return w2
    if w2.is_identity:
        return w1
    return reduce_word(w1.syllables + w2.syllables, p)


def invert(w: Word, p: Presentation) -> Word:
    """Group-theoretic inverse; monoid generators are not invertible."""
    out = []
    for gen, exp in reversed(w.syllables):
        kind = p.kind(gen)
        if kind == FREE_MONOID:
            raise NonInvertible(f"monoid generator {gen!r} has no inverse")
        if kind == CYCLIC:
            out.append((gen, p.order(gen) - exp))
        else:
            out.append((gen, -exp))
    return Word(tuple(out))


def _syllable_steps(gen: str, exp: int, p: Presentation) -> int:
    kind = p.kind(gen)
    if kind == CYCLIC:
        n = p.order(gen)
        return min(exp, n - exp)
    return abs(exp)


def word_length(w: Word, p: Presentation) -> int:
    """Generator steps in the symmetric generating set (tau and tau^-1 both
    count as single steps)."""
    return sum(_syllable_steps(g, e, p) for g, e in w.syllables)


def word_key(w: Word, p: Presentation) -> tuple:
    """Deterministic (length, lexicographic) sort key."""
    syl = tuple((g, 0 if e > 0 else 1, abs(e)) for g, e in w.syllables)
    return (word_length(w, p), len(w.syllables), syl)


def ball(p: Presentation, radius: int, cap: int = DEFAULT_BALL_CAP) -> frozenset[Word]:
    """All words of word_length <= radius, by breadth-first search from e.

    Closed under taking prefixes.  Raises SizeLimit beyond ``cap`` vertices.
    """
    if radius < 0:
        raise ValueError("radius must be >= 0")
    moves = p.generator_moves()
    seen = {E}
    frontier = deque([E])
    while frontier:
        w = frontier.popleft()
        if word_length(w, p) >= radius:
            continue
        for m in moves:
            nxt = multiply(m, w, p)
            if nxt in seen or word_length(nxt, p) > radius:
                continue
            seen.add(nxt)
            if len(seen) > cap:
                raise SizeLimit(f"ball exceeds vertex cap {cap}")
            frontier.append(nxt)
    return frozenset(seen)


def sorted_ball(vertices: Iterable[Word], p: Presentation) -> list[Word]:
    return sorted(vertices, key=lambda w: word_key(w, p))


def prefixes(w: Word) -> Iterator[Word]:
    """Whole-syllable initial segments of ``w`` (identity included)."""
    for i in range(len(w.syllables) + 1):
        yield Word(w.syllables[:i])


def format_word(w: Word) -> str:
    """Caret/dot word string, e.g. ``t^2.s.t``; the identity prints as ``e``."""
    if w.is_identity:
        return "e"
    parts = []
    for gen, exp in w.syllables:
        parts.append(gen if exp == 1 else f"{gen}^{exp}")
    return ".".join(parts)


def parse_word(s: str, p: Presentation) -> Word:
    """Inverse of :func:`format_word` (accepts any reducible syllable list)."""
    s = s.strip()
    if s in ("", "e"):
        return E
    raw = []
    for token in s.split("."):
        if "^" in token:
            gen, _, exp = token.partition("^")
            raw.append((gen, int(exp)))
        else:
            raw.append((token, 1))
    return reduce_word(raw, p)


# ---------------------------------------------------------------------------
# Named presentations (spellings reserved by the CLI config format).

Z2Z3 = Presentation(
    (FactorSpec("s", CYCLIC, 2), FactorSpec("t", CYCLIC, 3)), name="Z2*Z3"
)
Z2Z5 = Presentation(
    (FactorSpec("s", CYCLIC, 2), FactorSpec("t", CYCLIC, 5)), name="Z2*Z5"
)
F2 = Presentation((), ("a", "b"), name="F2")
N0Z2 = Presentation(
    (FactorSpec("T", FREE_MONOID), FactorSpec("s", CYCLIC, 2)), name="N0*Z2"
)

PRESENTATIONS = {p.name: p for p in (Z2Z3, Z2Z5, F2, N0Z2)}

SIGMA = Word((("s", 1),))
TAU = Word((("t", 1),))

# The two free generators of the rank-2 free subgroup of Z2*Z3:
# t.s.t^2.s and t^2.s.t.s.
F2_EMBED_A = Word((("t", 1), ("s", 1), ("t", 2), ("s", 1)))
F2_EMBED_B = Word((("t", 2), ("s", 1), ("t", 1), ("s", 1)))

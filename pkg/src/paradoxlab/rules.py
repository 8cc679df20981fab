"""Finitary colouring rules and satisfaction checking on finite balls.

A rule of rank n is a tuple of n rank-one decision functions, each mapping
(local bits, descendant colours) to a nonempty subset of the palette.  A
colouring satisfies the rule at a vertex when its colour lies in every
part's output.  Rules are only checked at *interior* vertices -- those whose
descendants all lie in the ball -- because boundary vertices have undefined
descendants in a truncation.

Descendants are realized by left multiplication of vertex labels: the point
``g(x)`` of the point at vertex ``w`` sits at vertex ``g*w``, and the
``h``-coordinate of the point at ``w`` is the base configuration's bit at
``h*w`` (so its ``e``-coordinate is ``bits[w]``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence, Union

from .errors import MissingBit
from .words import (
    E,
    F2,
    N0Z2,
    SIGMA,
    TAU,
    Presentation,
    Word,
    Z2Z3,
    Z2Z5,
    format_word,
    multiply,
    parse_word,
    word_key,
)


@dataclass(frozen=True)
class Palette:
    colours: tuple[str, ...]

    def __post_init__(self):
        if len(self.colours) < 2:
            raise ValueError("a palette needs at least two colours")
        if len(set(self.colours)) != len(self.colours):
            raise ValueError("palette colours must be distinct")

    def __iter__(self):
        return iter(self.colours)

    def __contains__(self, c):
        return c in self.colours

    def __len__(self):
        return len(self.colours)


@dataclass(frozen=True)
class DescendantSpec:
    """Group/semigroup moves whose application yields the descendants, plus
    the coordinates of local bits the rule reads."""

    positions: tuple[Word, ...]
    read_bits: tuple[Word, ...] = ()

    def __post_init__(self):
        if not self.positions:
            raise ValueError("a rule needs at least one descendant position")


@dataclass(frozen=True)
class Tagged:
    """A vertex of the doubled space {R,S} x {0,1}^G."""

    tag: str
    word: Word

    def __post_init__(self):
        if self.tag not in ("R", "S"):
            raise ValueError(f"tag must be 'R' or 'S', got {self.tag!r}")

    def __str__(self):
        return f"{self.tag}:{format_word(self.word)}"


Vertex = Union[Word, Tagged]
Colouring = dict  # Vertex -> colour name
PartFn = Callable[[Mapping[Word, int], Sequence[str]], frozenset]


def vertex_key(v: Vertex, p: Presentation) -> tuple:
    if isinstance(v, Tagged):
        return word_key(v.word, p) + (v.tag,)
    return word_key(v, p) + ("",)


def vertex_str(v: Vertex) -> str:
    return str(v) if isinstance(v, Tagged) else format_word(v)


def parse_vertex(s: str, p: Presentation) -> Vertex:
    if ":" in s:
        tag, _, ws = s.partition(":")
        return Tagged(tag, parse_word(ws, p))
    return parse_word(s, p)


@dataclass(frozen=True)
class Violation:
    vertex: Vertex
    part_index: int
    observed: str
    allowed: frozenset

    def __post_init__(self):
        if self.observed in self.allowed:
            raise ValueError("a violation's observed colour cannot be allowed")

    def __str__(self):
        allowed = ",".join(sorted(self.allowed))
        return (
            f"{vertex_str(self.vertex)}: part {self.part_index} observed "
            f"{self.observed}, allowed {{{allowed}}}"
        )


@dataclass(frozen=True)
class Rule:
    """A rank-``len(parts)`` colouring rule over one presentation."""

    name: str
    palette: Palette
    presentation: Presentation
    descendants_spec: DescendantSpec
    parts: tuple[PartFn, ...]
    stationary: bool
    tagged: bool = False
    crowdedness_checked: bool = False

    @property
    def rank(self) -> int:
        return len(self.parts)

    def descendants(self, v: Vertex) -> tuple[Vertex, ...]:
        """Descendant vertices of ``v`` (vertex-dependent for the doubled
        space: an S-point only reads its R-partner)."""
        p = self.presentation
        if self.tagged:
            assert isinstance(v, Tagged)
            if v.tag == "S":
                return (Tagged("R", v.word),)
            partners = tuple(
                Tagged("R", multiply(g, v.word, p))
                for g in self.descendants_spec.positions
            )
            return (Tagged("S", v.word),) + partners
        return tuple(
            multiply(g, v, p) for g in self.descendants_spec.positions
        )

    def bit_coord(self, v: Vertex, h: Word) -> Word:
        """Global coordinate holding the ``h``-bit of the point at ``v``."""
        w = v.word if isinstance(v, Tagged) else v
        return multiply(h, w, self.presentation)


def evaluate(
    rule: Rule,
    part: int,
    bits: Mapping[Word, int],
    desc_colours: Sequence[str],
) -> frozenset:
    """Run one rank-one part; always returns a nonempty colour set."""
    for h in rule.descendants_spec.read_bits:
        if h not in bits:
            raise MissingBit(f"no bit assigned for coordinate {format_word(h)}")
    out = rule.parts[part](bits, tuple(desc_colours))
    assert out and all(c in rule.palette for c in out)
    return out


def interior_vertices(rule: Rule, ball) -> list:
    """Vertices whose descendants all lie in the ball, in canonical order."""
    p = rule.presentation
    inner = [v for v in ball if all(d in ball for d in rule.descendants(v))]
    inner.sort(key=lambda v: vertex_key(v, p))
    return inner


def check_satisfaction(rule: Rule, ball, col: Colouring, bits) -> list[Violation]:
    """All rule violations at interior vertices, ordered by vertex.

    For the arrow rule the colours' crowded/uncrowded components are also
    checked against the crowdedness realized by the arrow configuration
    (reported as an extra part index ``rule.rank``).
    """
    violations = []
    inner = interior_vertices(rule, ball)
    for v in inner:
        local = {}
        for h in rule.descendants_spec.read_bits:
            coord = rule.bit_coord(v, h)
            if coord not in bits:
                raise MissingBit(
                    f"vertex {vertex_str(v)} reads unassigned coordinate "
                    f"{format_word(coord)}"
                )
            local[h] = bits[coord]
        desc = tuple(col[d] for d in rule.descendants(v))
        for i in range(rule.rank):
            allowed = evaluate(rule, i, local, desc)
            if col[v] not in allowed:
                violations.append(Violation(v, i, col[v], allowed))
    if rule.crowdedness_checked:
        crowd = crowdedness(arrows(col, ball, bits, rule.presentation), ball)
        for v in inner:
            want = crowd[v]
            if cu_component(col[v]) != want:
                allowed = frozenset(
                    c for c in rule.palette if cu_component(c) == want
                )
                violations.append(Violation(v, rule.rank, col[v], allowed))
    violations.sort(key=lambda viol: (vertex_key(viol.vertex, rule.presentation), viol.part_index))
    return violations


def colouring_to_json(col: Colouring, p: Presentation) -> dict:
    items = sorted(col.items(), key=lambda kv: vertex_key(kv[0], p))
    return {"vertices": [[vertex_str(v), c] for v, c in items]}


def colouring_from_json(obj: dict, p: Presentation) -> Colouring:
    return {parse_vertex(vs, p): c for vs, c in obj.get("vertices", [])}


# ---------------------------------------------------------------------------
# The three-colour rules on Z2*Z3.

HAUS_PALETTE = Palette(("A", "B", "C"))
_HAUS_NEXT = {"A": "B", "B": "C", "C": "A"}
TAU_INV_Z2Z3 = Word((("t", 2),))


def _haus_sigma_allowed(c_sigma: str) -> frozenset:
    return frozenset(("B", "C")) if c_sigma == "A" else frozenset(("A",))


def _haus_tau_allowed(c_tau_inv: str) -> frozenset:
    return frozenset((_HAUS_NEXT[c_tau_inv],))


def _haus_part_sigma(bits, desc):
    return _haus_sigma_allowed(desc[0])


def _haus_part_tau(bits, desc):
    return _haus_tau_allowed(desc[1])


def hausdorff_rule() -> Rule:
    """The rank-two three-colour rule: along a sigma edge exactly one side is
    A, and colours cycle A -> B -> C in the direction of tau."""
    return Rule(
        name="hausdorff",
        palette=HAUS_PALETTE,
        presentation=Z2Z3,
        descendants_spec=DescendantSpec((SIGMA, TAU_INV_Z2Z3)),
        parts=(_haus_part_sigma, _haus_part_tau),
        stationary=True,
    )


# ---------------------------------------------------------------------------
# The five-colour deterministic rule on Z2*Z5.

EX1_PALETTE = Palette(("A1", "A2", "A3", "A4", "A5"))
TAU_INV_Z2Z5 = Word((("t", 4),))


def _ex1_part(bits, desc):
    c_tau_inv, c_sigma = desc
    i = int(c_tau_inv[1])
    if bits[E] == 1 or c_tau_inv == "A5" or c_sigma == "A1":
        i = i % 5 + 1
    return frozenset((f"A{i}",))


def example1_rule() -> Rule:
    """Five colours; the index copied from the previous cycle member is
    incremented when the own bit is 1, the previous member is A5, or the
    opposite point is A1 (arithmetic wraps modulo 5)."""
    return Rule(
        name="ex1",
        palette=EX1_PALETTE,
        presentation=Z2Z5,
        descendants_spec=DescendantSpec((TAU_INV_Z2Z5, SIGMA), (E,)),
        parts=(_ex1_part,),
        stationary=False,
    )


# ---------------------------------------------------------------------------
# The copied-space rule on {R,S} x {0,1}^(Z2*Z3).

def _ex2_part(bits, desc):
    if len(desc) == 1:
        # S-point: copy the colour of the R-partner.
        return frozenset((desc[0],))
    c_partner, c_sigma, c_tau_inv = desc
    consistent = _haus_sigma_allowed(c_sigma) & _haus_tau_allowed(c_tau_inv)
    if c_partner in consistent:
        return frozenset((c_partner,))
    return frozenset(HAUS_PALETTE) - {c_partner}


def example2_rule() -> Rule:
    """Rank-one rule on the doubled space: S-points copy their R-partner;
    an R-point copies its S-partner exactly when that colour is consistent
    with both three-colour parts, and otherwise takes either other colour."""
    return Rule(
        name="ex2",
        palette=HAUS_PALETTE,
        presentation=Z2Z3,
        descendants_spec=DescendantSpec((SIGMA, TAU_INV_Z2Z3)),
        parts=(_ex2_part,),
        stationary=True,
        tagged=True,
    )


# ---------------------------------------------------------------------------
# The nine-colour pair rule on Z2*Z3.

EX3_PALETTE = Palette(tuple(f + s for f in "ABC" for s in "ABC"))


def _ex3_part(bits, desc):
    sigma_pair, tau_pair = desc
    second = sigma_pair[0]  # copy of the first colour across the sigma edge
    consistent = _haus_sigma_allowed(sigma_pair[0]) & _haus_tau_allowed(tau_pair[0])
    if sigma_pair[1] in consistent:
        firsts = (sigma_pair[1],)
    else:
        firsts = tuple(c for c in "ABC" if c != sigma_pair[1])
    return frozenset(f + second for f in firsts)


def example3_rule() -> Rule:
    """Nine pair colours: the second colour copies the first colour across
    the sigma edge, and the first colour agrees with the neighbour's second
    colour exactly when that colour is three-colour consistent here."""
    return Rule(
        name="ex3",
        palette=EX3_PALETTE,
        presentation=Z2Z3,
        descendants_spec=DescendantSpec((SIGMA, TAU_INV_Z2Z3)),
        parts=(_ex3_part,),
        stationary=True,
    )


# ---------------------------------------------------------------------------
# The two-colour semigroup rule on N0*Z2.

EX4_PALETTE = Palette(("A", "B"))
T_GEN = Word((("T", 1),))
_OPP = {"A": "B", "B": "A"}


def _ex4_part(bits, desc):
    c_T, c_sigma = desc
    if c_T == "A" or bits[E] == 1:
        return frozenset((_OPP[c_sigma],))
    return frozenset((c_sigma,))


def example4_rule() -> Rule:
    """Two colours; opposite to the sigma partner unless the forward image is
    B and the own bit is 0, in which case the colours agree."""
    return Rule(
        name="ex4",
        palette=EX4_PALETTE,
        presentation=N0Z2,
        descendants_spec=DescendantSpec((T_GEN, SIGMA), (E,)),
        parts=(_ex4_part,),
        stationary=False,
    )


# ---------------------------------------------------------------------------
# The arrow rule on F2.

EX5_PALETTE = Palette(("Pu", "Pc", "Nu", "Nc"))
A_FWD = Word((("a", 1),))
A_BWD = Word((("a", -1),))
B_FWD = Word((("b", 1),))
B_BWD = Word((("b", -1),))
EX5_MOVES = (A_FWD, A_BWD, B_FWD, B_BWD)


def cu_component(colour: str) -> str:
    return "C" if colour.endswith("c") else "U"


def _ex5_part(bits, desc):
    fwd, bwd = (desc[0], desc[1]) if bits[E] == 0 else (desc[2], desc[3])
    fwd_crowded = cu_component(fwd) == "C"
    bwd_crowded = cu_component(bwd) == "C"
    if not fwd_crowded and bwd_crowded:
        return frozenset(("Pu", "Pc"))
    if fwd_crowded and not bwd_crowded:
        return frozenset(("Nu", "Nc"))
    return frozenset(EX5_PALETTE)


def example5_rule() -> Rule:
    """Four colours P/N x crowded/uncrowded.  The P/N choice is forced when
    the forward and backward neighbours in the own bit's direction disagree
    in crowdedness; the C/U component is validated globally against the
    realized arrow configuration, not by the local decision."""
    return Rule(
        name="ex5",
        palette=EX5_PALETTE,
        presentation=F2,
        descendants_spec=DescendantSpec(EX5_MOVES, (E,)),
        parts=(_ex5_part,),
        stationary=False,
        crowdedness_checked=True,
    )


def arrows(col: Colouring, ball, bits, p: Presentation = F2) -> dict:
    """One arrow per vertex: forward in the own bit's direction when coloured
    P, backward when coloured N.  Targets may exit the ball."""
    out = {}
    for v in ball:
        if v not in bits:
            raise MissingBit(f"no bit for vertex {format_word(v)}")
        d = "a" if bits[v] == 0 else "b"
        step = 1 if col[v].startswith("P") else -1
        out[v] = multiply(Word(((d, step),)), v, p)
    return out


def crowdedness(arr: dict, ball) -> dict:
    """C at in-degree >= 2, U at in-degree <= 1 (exiting arrows ignored)."""
    indeg = {v: 0 for v in ball}
    for target in arr.values():
        if target in indeg:
            indeg[target] += 1
    return {v: "C" if n >= 2 else "U" for v, n in indeg.items()}


def potential_pointers(v: Word, bits, p: Presentation = F2) -> list[Word]:
    """Neighbours whose bit lets an arrow point at ``v`` (the vertex degree
    of the arrow rule is the count of these)."""
    out = []
    for m in EX5_MOVES:
        u = multiply(m, v, p)
        if u not in bits:
            raise MissingBit(f"no bit for neighbour {format_word(u)}")
        d = "a" if bits[u] == 0 else "b"
        fwd = multiply(Word(((d, 1),)), u, p)
        bwd = multiply(Word(((d, -1),)), u, p)
        if v == fwd or v == bwd:
            out.append(u)
    return out


RULES = {
    "hausdorff": hausdorff_rule,
    "ex1": example1_rule,
    "ex2": example2_rule,
    "ex3": example3_rule,
    "ex4": example4_rule,
    "ex5": example5_rule,
}

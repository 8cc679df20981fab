"""Exact-rational reproductions of the counting arguments behind each rule.

Every result here is a ``fractions.Fraction``; floating point is confined to
the branching simulation's output frequency.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import comb, isqrt
from typing import Mapping, Sequence

from .cylinders import Rational, cylinder, cylinder_measure, enumerate_patterns
from .rules import A_BWD, A_FWD, B_BWD, B_FWD, evaluate, example4_rule
from .streams import derive_rng
from .words import E, Word


@dataclass(frozen=True)
class BoundReport:
    """A lower/upper bound pair; a contradiction when the lower bound is the
    larger one."""

    lower: Rational
    upper: Rational
    contradiction: bool
    method: str

    def __post_init__(self):
        if self.contradiction != (self.lower > self.upper):
            raise ValueError("contradiction flag must equal lower > upper")


@dataclass(frozen=True)
class Polynomial:
    """Dense polynomial with exact rational coefficients, ascending degree."""

    coefficients: tuple[Rational, ...]

    def __post_init__(self):
        coeffs = tuple(Fraction(c) for c in self.coefficients)
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs = coeffs[:-1]
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, x) -> Rational:
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def shift_down(self) -> "Polynomial":
        """Divide by the variable (requires a zero constant term)."""
        if self.coefficients[0] != 0:
            raise ValueError("constant term is nonzero; cannot factor out p")
        return Polynomial(self.coefficients[1:])

    def scaled_to_integer(self) -> "Polynomial":
        """The integer-coefficient scalar multiple with positive leading
        coefficient and content one."""
        denom = 1
        for c in self.coefficients:
            denom = denom * c.denominator // _gcd(denom, c.denominator)
        ints = [int(c * denom) for c in self.coefficients]
        g = 0
        for v in ints:
            g = _gcd(g, abs(v))
        ints = [v // g for v in ints]
        if ints[-1] < 0:
            ints = [-v for v in ints]
        return Polynomial(tuple(Fraction(v) for v in ints))

    def discriminant(self) -> Rational:
        if self.degree != 2:
            raise ValueError("discriminant implemented for quadratics only")
        c0, b, a = self.coefficients
        return b * b - 4 * a * c0


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


# ---------------------------------------------------------------------------
# The five-colour cycle bounds.

CYCLE_COORDS = tuple(Word((("t", j),)) if j else E for j in range(5))


def _cycle_step(prev: int, bit: int, opposite: int) -> int:
    # colours 0..4 stand for A1..A5; the index increments exactly when the
    # own bit is 1, the previous member is A5, or the opposite point is A1
    if bit == 1 or prev == 4 or opposite == 0:
        return (prev + 1) % 5
    return prev


def theorem1_pattern_minima() -> dict[tuple[int, ...], int]:
    """For every 5-bit cycle pattern, the least number of opposite points
    coloured A1 over all rule-consistent cycle completions."""
    minima = {}
    for bits, _ in enumerate_patterns(list(CYCLE_COORDS)):
        best = 6
        for seed in range(5):
            for opp in product(range(5), repeat=5):
                n_a1 = opp.count(0)
                if n_a1 >= best:
                    continue
                c = seed
                for j in (1, 2, 3, 4):
                    c = _cycle_step(c, bits[j], opp[j])
                if _cycle_step(c, bits[0], opp[0]) == seed:
                    best = n_a1
        minima[bits] = best
    return minima


def theorem1_lower_bound(mode: str = "formula") -> Rational:
    """Frequency forced into the first colour, from outside the cycles.

    ``formula`` evaluates (1/5)(C(5,2) + 2 C(5,3) + 3 C(5,4))/32 exactly;
    ``brute-force`` minimizes forced opposite-A1 counts per bit pattern and
    averages with measure 1/160 per (pattern, position).  Both modes agree.
    """
    if mode == "formula":
        return Fraction(comb(5, 2) + 2 * comb(5, 3) + 3 * comb(5, 4), 5 * 32)
    if mode == "brute-force":
        minima = theorem1_pattern_minima()
        return Fraction(sum(minima.values()), 160)
    raise ValueError(f"unknown mode {mode!r}")


def theorem1_upper_bound() -> Rational:
    """Frequency cap from inside a cycle: monochrome cycles need an all-zero
    bit pattern, and otherwise at most one member in five is first-coloured."""
    mono = cylinder_measure(cylinder({w: 0 for w in CYCLE_COORDS}))
    assert mono == Fraction(1, 32)
    return mono + Fraction(1, 5) * (1 - mono)


def theorem1_report(mode: str = "formula") -> BoundReport:
    lower = theorem1_lower_bound(mode)
    upper = theorem1_upper_bound()
    return BoundReport(lower, upper, lower > upper, mode)


# ---------------------------------------------------------------------------
# The three-colour measure constraints.

def hausdorff_measure_constraints() -> tuple[Rational, Rational, bool]:
    """The sigma part swaps the A-set with its complement (equal halves);
    the tau part cycles three sets of equal measure (equal thirds)."""
    total = Fraction(1)
    sigma_value = total / 2
    tau_value = total / 3
    return sigma_value, tau_value, sigma_value != tau_value


# ---------------------------------------------------------------------------
# The two-colour semigroup rule.

def example4_conflict_table() -> dict[tuple[str, str, int, int], bool]:
    """Colourability of a twin pair given the pinned forward colours and own
    bits, by exhausting all four candidate colourings against the rule."""
    rule = example4_rule()
    table = {}
    for c_fwd_z, c_fwd_sz, bit_z, bit_sz in product("AB", "AB", (0, 1), (0, 1)):
        ok = False
        for c_z, c_sz in product("AB", "AB"):
            allowed_z = evaluate(rule, 0, {E: bit_z}, (c_fwd_z, c_sz))
            allowed_sz = evaluate(rule, 0, {E: bit_sz}, (c_fwd_sz, c_z))
            if c_z in allowed_z and c_sz in allowed_sz:
                ok = True
                break
        table[(c_fwd_z, c_fwd_sz, bit_z, bit_sz)] = ok
    return table


@dataclass(frozen=True)
class Example4Bound:
    a_cap: Rational
    b_floor: Rational
    uncolourable_coefficient: Rational
    bound: Rational


def example4_bound_report() -> Example4Bound:
    """The A-set is capped at 5/6 of the space, so at least 1/6 is coloured
    B, a quarter of which cannot be coloured at all: 1/24."""
    a_cap = Fraction(5, 6)
    b_floor = 1 - a_cap
    coefficient = Fraction(1, 4)
    return Example4Bound(a_cap, b_floor, coefficient, b_floor * coefficient)


def example4_lower_bound() -> Rational:
    return example4_bound_report().bound


# ---------------------------------------------------------------------------
# Arrow-rule degree statistics.

# Per neighbour, the own-bit value under which its arrow can point back at
# the centre: the a-direction neighbours need bit a (0), the b-direction
# neighbours need bit b (1).
_NEIGHBOUR_MOVES = (A_FWD, A_BWD, B_FWD, B_BWD)
_BACK_BITS = (0, 0, 1, 1)


@dataclass(frozen=True)
class DegreeStats:
    distribution: tuple[Rational, ...]
    zero_fraction: Rational
    cond_deg3: Rational
    cond_deg4: Rational


def example5_degree_stats() -> DegreeStats:
    """Distribution of the number of potential arrows pointed at a vertex,
    plus the conditional degree probabilities given one fixed incoming
    potential arrow."""
    dist = [Fraction(0)] * 5
    for bits, m in enumerate_patterns(list(_NEIGHBOUR_MOVES)):
        deg = sum(1 for b, req in zip(bits, _BACK_BITS) if b == req)
        dist[deg] += m
    cond = [Fraction(0)] * 4  # indexed by degree - 1; degree = 1 fixed + others
    for bits, m in enumerate_patterns(list(_NEIGHBOUR_MOVES[1:])):
        others = sum(1 for b, req in zip(bits, _BACK_BITS[1:]) if b == req)
        cond[others] += m
    return DegreeStats(
        distribution=tuple(dist),
        zero_fraction=dist[0],
        cond_deg3=cond[2],
        cond_deg4=cond[3],
    )


# ---------------------------------------------------------------------------
# The backward-chain branching recursion.

def recursion_map(p: Rational) -> Rational:
    """One step of the chain-survival recursion (3p^2 - p^3)/4."""
    p = Fraction(p)
    return (3 * p * p - p**3) / 4


@dataclass(frozen=True)
class RecursionReport:
    fixed_point_poly: Polynomial
    nontrivial_factor: Polynomial
    discriminant: Rational
    real_roots_in_unit_interval: tuple[Rational, ...]


def branching_recursion() -> RecursionReport:
    """Fixed points of the recursion map: p - (3p^2 - p^3)/4 factors as p
    times a quadratic with negative discriminant, leaving 0 as the only
    fixed point in [0, 1]."""
    fixed = Polynomial((Fraction(0), Fraction(1), Fraction(-3, 4), Fraction(1, 4)))
    quotient = fixed.shift_down()
    nontrivial = quotient.scaled_to_integer()
    disc = nontrivial.discriminant()
    roots = [Fraction(0)]  # the factored-out root
    if disc >= 0:
        s = isqrt(int(disc))
        if s * s == disc:
            c0, b, a = nontrivial.coefficients
            for r in ((-b + s) / (2 * a), (-b - s) / (2 * a)):
                if 0 <= r <= 1:
                    roots.append(r)
    roots = tuple(sorted(set(roots)))
    return RecursionReport(fixed, nontrivial, disc, roots)


def exact_iterates(depth: int) -> list[Rational]:
    """[1, phi(1), phi^2(1), ...] up to phi^depth(1), exactly."""
    out = [Fraction(1)]
    for _ in range(depth):
        out.append(recursion_map(out[-1]))
    return out


def _survives(rng, depth: int) -> bool:
    if depth == 0:
        return True
    r = rng.random()
    if r < 0.375:  # degree three: both continuations must survive
        return _survives(rng, depth - 1) and _survives(rng, depth - 1)
    if r < 0.5:  # degree four: at least two of three must survive
        alive = 0
        for i in range(3):
            if alive + (3 - i) < 2:
                break
            if _survives(rng, depth - 1):
                alive += 1
                if alive == 2:
                    return True
        return False
    return False


def branching_simulation(seed: int, trials: int, depth: int) -> float:
    """Fraction of seeded trials in which a backward chain survives to the
    given depth; deterministic given the seed (one stream per trial)."""
    if trials < 1 or depth < 1:
        raise ValueError("trials and depth must be >= 1")
    alive = 0
    for i in range(trials):
        if _survives(derive_rng(seed, "branch", i), depth):
            alive += 1
    return alive / trials


# ---------------------------------------------------------------------------
# The inclusion-exclusion identity.

def inclusion_exclusion_check(
    weights: Mapping, sets: Sequence
) -> tuple[Rational, Rational, bool]:
    """Both sides of the identity  mu(X) - mu(U A_i) = sum of alternating
    intersection terms of order >= 2,  exact, for point-weighted measures
    with mu(X) = 1 and sum mu(A_i) = 1."""
    weights = {x: Fraction(w) for x, w in weights.items()}
    universe = frozenset(weights)
    if any(w < 0 for w in weights.values()):
        raise ValueError("weights must be nonnegative")

    def mu(s):
        return sum((weights[x] for x in s), Fraction(0))

    if mu(universe) != 1:
        raise ValueError("weights must total exactly 1")
    sets = [frozenset(s) for s in sets]
    for s in sets:
        if not s <= universe:
            raise ValueError("sets must be subsets of the universe")
    if sum((mu(s) for s in sets), Fraction(0)) != 1:
        raise ValueError("set measures must total exactly 1")

    union = frozenset().union(*sets) if sets else frozenset()
    lhs = 1 - mu(union)
    rhs = Fraction(0)
    for j in range(2, len(sets) + 1):
        sign = 1 if j % 2 == 0 else -1
        for idx in combinations(range(len(sets)), j):
            inter = sets[idx[0]]
            for i in idx[1:]:
                inter = inter & sets[i]
            rhs += sign * mu(inter)
    return lhs, rhs, lhs == rhs


def random_weighted_system(rng, max_sets: int = 6, max_universe: int = 20):
    """A random point-weighted measure plus overlapping sets whose measures
    total exactly 1 (input generator for the identity check)."""
    n = rng.randint(3, max_universe)
    k = rng.randint(1, max_sets)
    raw = [rng.randint(1, 5) for _ in range(n)]
    total = sum(raw)
    weights = {x: Fraction(raw[x], total) for x in range(n)}

    points = list(range(n))
    rng.shuffle(points)
    cuts = sorted(rng.randint(0, n) for _ in range(k - 1))
    blocks = []
    prev = 0
    for c in cuts + [n]:
        blocks.append(set(points[prev:c]))
        prev = c

    for _ in range(rng.randint(0, 3 * n)):
        i, j = rng.randrange(k), rng.randrange(k)
        if i == j:
            continue
        if rng.random() < 0.5:
            # move one point between sets (sum preserved)
            movable = sorted(blocks[i] - blocks[j])
            if movable:
                x = movable[rng.randrange(len(movable))]
                blocks[i].discard(x)
                blocks[j].add(x)
        else:
            # create an overlap by trading equal-weight points in one set
            xs = sorted(blocks[i] - blocks[j])
            if not xs:
                continue
            x = xs[rng.randrange(len(xs))]
            ys = sorted(y for y in blocks[j] if raw[y] == raw[x] and y != x)
            if ys:
                y = ys[rng.randrange(len(ys))]
                blocks[j].discard(y)
                blocks[j].add(x)
    return weights, [frozenset(b) for b in blocks]

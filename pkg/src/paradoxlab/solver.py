"""Finite-domain search for rule-satisfying colourings on a ball.

Only interior vertices are constrained; boundary colours are free variables.
The search assigns vertices in deterministic (length, lexicographic) order
with first-colour-in-palette value order, so identical instances always
yield identical witnesses and enumeration order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional

from .errors import MissingBit, SizeLimit, Unsatisfiable
from .rules import (
    Colouring,
    Rule,
    Tagged,
    check_satisfaction,
    cu_component,
    evaluate,
    interior_vertices,
    potential_pointers,
    vertex_key,
)
from .words import Word, multiply

DEFAULT_NODE_LIMIT = 10**7

SAT = "SAT"
UNSAT = "UNSAT"
LIMIT = "LIMIT"


@dataclass
class Instance:
    rule: Rule
    ball: frozenset
    bits: dict = field(default_factory=dict)
    pinned: dict = field(default_factory=dict)
    objective: Optional[tuple[str, str]] = None

    def __post_init__(self):
        self.ball = frozenset(self.ball)
        for v in self.pinned:
            if v not in self.ball:
                raise ValueError("pinned vertices must lie in the ball")
        for v, c in self.pinned.items():
            if c not in self.rule.palette:
                raise ValueError(f"pinned colour {c!r} not in the palette")
        if self.objective is not None:
            colour, sense = self.objective
            if colour not in self.rule.palette or sense not in ("min", "max"):
                raise ValueError(f"bad objective {self.objective!r}")


@dataclass
class SolveResult:
    status: str
    witness: Optional[Colouring] = None
    count: Optional[int] = None
    extremal: Optional[Fraction] = None


class _Budget:
    def __init__(self, limit: int):
        self.limit = limit
        self.nodes = 0

    def spend(self):
        self.nodes += 1
        if self.nodes > self.limit:
            raise _OutOfNodes


class _OutOfNodes(Exception):
    pass


class _Search:
    """Shared backtracking core for solve / enumerate / extremal."""

    def __init__(self, inst: Instance, budget: _Budget):
        rule = inst.rule
        p = rule.presentation
        self.rule = rule
        self.inst = inst
        self.budget = budget
        self.vertices = sorted(inst.ball, key=lambda v: vertex_key(v, p))
        self.interior = interior_vertices(rule, inst.ball)
        self.interior_set = set(self.interior)
        self._validate_bits()

        # One constraint record per interior vertex: its input vertices and
        # prefetched local bits.
        self.constraints = []
        self.watchers = {v: [] for v in self.vertices}
        for u in self.interior:
            local = {
                h: inst.bits[rule.bit_coord(u, h)]
                for h in rule.descendants_spec.read_bits
            }
            inputs = (u,) + rule.descendants(u)
            idx = len(self.constraints)
            self.constraints.append((u, inputs, local))
            for w in set(inputs):
                self.watchers[w].append(idx)

        # Arrow bookkeeping for crowdedness pruning.
        self.pointer_sets = {}
        self.pointer_watch = {v: [] for v in self.vertices}
        if rule.crowdedness_checked:
            for u in self.interior:
                ptrs = tuple(potential_pointers(u, inst.bits, p))
                self.pointer_sets[u] = ptrs
                for w in ptrs:
                    self.pointer_watch[w].append(u)

        self.order = [v for v in self.vertices if v not in inst.pinned]

    def _validate_bits(self):
        rule, inst = self.rule, self.inst
        if rule.crowdedness_checked:
            for v in inst.ball:
                w = v.word if isinstance(v, Tagged) else v
                if w not in inst.bits:
                    raise MissingBit("crowdedness needs a bit for every vertex")
        for u in self.interior:
            for h in rule.descendants_spec.read_bits:
                if rule.bit_coord(u, h) not in inst.bits:
                    raise MissingBit(
                        f"interior vertex {u} reads an unassigned coordinate"
                    )

    def _points_at(self, w, target, col) -> bool:
        p = self.rule.presentation
        d = "a" if self.inst.bits[w] == 0 else "b"
        step = 1 if col[w].startswith("P") else -1
        return multiply(Word(((d, step),)), w, p) == target

    def _consistent_after(self, v, col) -> bool:
        for idx in self.watchers[v]:
            u, inputs, local = self.constraints[idx]
            if any(x not in col for x in inputs):
                continue
            desc = tuple(col[x] for x in inputs[1:])
            for i in range(self.rule.rank):
                if col[u] not in evaluate(self.rule, i, local, desc):
                    return False
        if self.rule.crowdedness_checked:
            affected = list(self.pointer_watch[v])
            if v in self.pointer_sets:
                affected.append(v)
            for u in affected:
                if u not in col:
                    continue
                known = denied = 0
                for w in self.pointer_sets[u]:
                    if w in col:
                        if self._points_at(w, u, col):
                            known += 1
                        else:
                            denied += 1
                unknown = len(self.pointer_sets[u]) - known - denied
                if cu_component(col[u]) == "U" and known >= 2:
                    return False
                if cu_component(col[u]) == "C" and known + unknown < 2:
                    return False
        return True

    def solutions(self) -> Iterator[Colouring]:
        col = dict(self.inst.pinned)
        for v in self.inst.pinned:
            if not self._consistent_after(v, col):
                return
        yield from self._dfs(0, col)

    def _dfs(self, i: int, col) -> Iterator[Colouring]:
        if i == len(self.order):
            if not check_satisfaction(self.rule, self.inst.ball, col, self.inst.bits):
                yield dict(col)
            return
        v = self.order[i]
        for colour in self.rule.palette:
            self.budget.spend()
            col[v] = colour
            if self._consistent_after(v, col):
                yield from self._dfs(i + 1, col)
        del col[v]


def solve(inst: Instance, node_limit: int = DEFAULT_NODE_LIMIT) -> SolveResult:
    """First satisfying colouring in deterministic order, exhaustive UNSAT
    refutation, or LIMIT when the node budget runs out."""
    budget = _Budget(node_limit)
    try:
        for witness in _Search(inst, budget).solutions():
            return SolveResult(SAT, witness=witness)
    except _OutOfNodes:
        return SolveResult(LIMIT)
    return SolveResult(UNSAT)


def enumerate_colourings(
    inst: Instance, limit: int, node_limit: int = DEFAULT_NODE_LIMIT
) -> list[Colouring]:
    """Violation-free colourings in deterministic order, at most ``limit``."""
    if limit <= 0:
        return []
    out = []
    budget = _Budget(node_limit)
    try:
        for witness in _Search(inst, budget).solutions():
            out.append(witness)
            if len(out) >= limit:
                break
    except _OutOfNodes:
        pass
    return out


def extremal_fraction(inst: Instance, node_limit: int = DEFAULT_NODE_LIMIT) -> Fraction:
    """Exact extremal frequency of the objective colour over interior
    vertices, across all violation-free colourings (branch and bound)."""
    if inst.objective is None:
        raise ValueError("instance has no objective")
    colour, sense = inst.objective
    budget = _Budget(node_limit)
    search = _Search(inst, budget)
    n_interior = len(search.interior)
    if n_interior == 0:
        if solve(inst, node_limit).status != SAT:
            raise Unsatisfiable("no violation-free colouring exists")
        return Fraction(0)

    best: Optional[int] = None

    def count_interior(col):
        return sum(1 for u in search.interior if col.get(u) == colour)

    def interior_assigned(col):
        return sum(1 for u in search.interior if u in col)

    def dfs(i: int, col):
        nonlocal best
        if best is not None:
            have = count_interior(col)
            remaining = n_interior - interior_assigned(col)
            if sense == "min" and have >= best:
                return
            if sense == "max" and have + remaining <= best:
                return
        if i == len(search.order):
            if not check_satisfaction(inst.rule, inst.ball, col, inst.bits):
                value = count_interior(col)
                if best is None:
                    best = value
                elif sense == "min":
                    best = min(best, value)
                else:
                    best = max(best, value)
            return
        v = search.order[i]
        for c in inst.rule.palette:
            budget.spend()
            col[v] = c
            if search._consistent_after(v, col):
                dfs(i + 1, col)
        del col[v]

    col = dict(inst.pinned)
    ok = all(search._consistent_after(v, col) for v in inst.pinned)
    try:
        if ok:
            dfs(0, col)
    except _OutOfNodes:
        raise SizeLimit("node budget exhausted during optimisation")
    if best is None:
        raise Unsatisfiable("no violation-free colouring exists")
    return Fraction(best, n_interior)

"""Bounded unknot and classicality recognition.

Verdicts are three-valued.  ``Trivial`` carries a move trace that replays to
the empty diagram, ``Nontrivial`` names an invariant whose value differs
from the unknot's, and ``Unknown`` means the search budget ran out.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from . import _kernels
from .diagram import Classical, Pre, PseudoDiagram, carrier_genus
from .invariants import BudgetExceeded, f_polynomial, index_polynomial, odd_writhe, v2
from .moves import (EMPTY, Code, Step, canonical, code_moves, from_code, replay, simplify,
                    to_code)


@dataclass(frozen=True)
class Budget:
    max_crossings: int | None = None  # None means crossings of the input + 2
    max_states: int = 200_000
    bracket_limit: int = 20

    def crossing_cap(self, n: int) -> int:
        return n + 2 if self.max_crossings is None else self.max_crossings


DEFAULT_BUDGET = Budget()


@dataclass(frozen=True)
class Trivial:
    trace: tuple[Step, ...]

    def to_json(self) -> dict:
        return {"verdict": "trivial", "trace": [s.to_json() for s in self.trace]}


@dataclass(frozen=True)
class Nontrivial:
    certificate: str
    value: str
    trace: tuple[Step, ...] = ()  # moves leading to the diagram the value was computed on

    def to_json(self) -> dict:
        return {"verdict": "nontrivial", "certificate": self.certificate, "value": self.value,
                "trace": [s.to_json() for s in self.trace]}


@dataclass(frozen=True)
class Unknown:
    reason: str
    states: int = 0

    def to_json(self) -> dict:
        return {"verdict": "unknown", "reason": self.reason, "states": self.states}


@dataclass(frozen=True)
class ClassicalVerdict:
    trace: tuple[Step, ...]

    def to_json(self) -> dict:
        return {"verdict": "classical", "trace": [s.to_json() for s in self.trace]}


@dataclass(frozen=True)
class NonClassical:
    certificate: str
    value: str

    def to_json(self) -> dict:
        return {"verdict": "nonclassical", "certificate": self.certificate, "value": self.value}


Verdict = Union[Trivial, Nontrivial, Unknown]


def _genus_zero(code: Code) -> bool:
    if not code:
        return True
    m = len(code)
    partner = np.array([(i + (x >> 2)) % m for i, x in enumerate(code)], dtype=np.int64)
    flat = []
    for i, x in enumerate(code):
        j = (i + (x >> 2)) % m
        if i < j:
            w = 1 if x & 1 else -1
            flat.append(w if x & 2 else -w)
    return _kernels.face_count(partner, np.array(flat, dtype=np.int64)) == m // 2 + 2


def search(code: Code, goal: Callable[[Code], bool], cap: int, max_states: int):
    """Best-first search by crossing count.  A first pass uses only moves
    that do not add crossings; a second pass allows additions up to ``cap``.

    Returns (steps, states) with ``steps`` None when no goal was reached.
    """
    start, sym0 = canonical(code)
    if goal(start):
        return [Step(None, sym0)], 1
    spent = 0
    for additions in (False, True):
        parent: dict[Code, tuple] = {start: None}
        tick = itertools.count()
        heap = [(len(start), next(tick), start)]
        hit = None
        while heap and hit is None:
            _, _, key = heapq.heappop(heap)
            for mv, raw in code_moves(key, additions):
                if len(raw) > 2 * cap:
                    continue
                child, sym = canonical(raw)
                if child in parent:
                    continue
                parent[child] = (key, mv, sym)
                if goal(child):
                    hit = child
                    break
                heapq.heappush(heap, (len(child), next(tick), child))
            if len(parent) + spent >= max_states:
                break
        spent += len(parent)
        if hit is not None:
            path = []
            node = hit
            while parent[node] is not None:
                prev, mv, sym = parent[node]
                path.append(Step(mv, sym))
                node = prev
            return [Step(None, sym0)] + path[::-1], spent
        if spent >= max_states:
            break
    return None, spent


class Oracle:
    """Unknot and classicality recognition with a verdict cache."""

    def __init__(self, budget: Budget = DEFAULT_BUDGET):
        self.budget = budget
        self._trivial: dict[tuple[Code, int], object] = {}
        self._classical: dict[tuple[Code, int], object] = {}
        self.calls = 0

    def is_unknot(self, d: PseudoDiagram) -> Verdict:
        self.calls += 1
        code = to_code(d)
        j = odd_writhe(d)
        if j:
            return Nontrivial("J", str(j))
        pt = index_polynomial(d)
        if not pt.is_zero():
            return Nontrivial("p_t", str(pt))
        small, steps = simplify(code)
        if not small:
            return Trivial(tuple(steps))
        cap = self.budget.crossing_cap(d.n)
        key, sym0 = canonical(small)
        cached = self._trivial.get((key, cap))
        if cached is None:
            cached = self._decide(key, cap)
            self._trivial[(key, cap)] = cached
        kind, payload = cached
        if kind == "trivial":
            return Trivial(tuple(steps) + (Step(None, sym0),) + payload)
        if kind == "nontrivial":
            name, value = payload
            return Nontrivial(name, value, tuple(steps) + (Step(None, sym0),))
        return Unknown(*payload)

    def _decide(self, key: Code, cap: int):
        d = from_code(key)
        if _genus_zero(key):
            value = v2(d)
            if value:
                return "nontrivial", ("v2", str(value))
        if d.n <= self.budget.bracket_limit:
            f = f_polynomial(d, self.budget.bracket_limit)
            if not f.is_one():
                return "nontrivial", ("f", str(f))
        steps, spent = search(key, lambda c: not c, cap, self.budget.max_states)
        if steps is None:
            return "unknown", (f"no unknotting sequence within {cap} crossings and {spent} states", spent)
        return "trivial", tuple(steps)

    def classicality(self, d: PseudoDiagram):
        self.calls += 1
        j = odd_writhe(d)
        if j:
            return NonClassical("J", str(j))
        pt = index_polynomial(d)
        if not pt.is_zero():
            return NonClassical("p_t", str(pt))
        code = to_code(d)
        if _genus_zero(code):
            return ClassicalVerdict(())
        small, steps = simplify(code)
        if _genus_zero(small):
            return ClassicalVerdict(tuple(steps))
        cap = self.budget.crossing_cap(d.n)
        key, sym0 = canonical(small)
        cached = self._classical.get((key, cap))
        if cached is None:
            found, spent = search(key, _genus_zero, cap, self.budget.max_states)
            cached = ("classical", tuple(found)) if found is not None else ("unknown", spent)
            self._classical[(key, cap)] = cached
        if cached[0] == "classical":
            return ClassicalVerdict(tuple(steps) + (Step(None, sym0),) + cached[1])
        return Unknown(f"no genus-zero diagram within {cap} crossings", cached[1])


_default = Oracle()


def is_unknot(d: PseudoDiagram, budget: Budget | None = None) -> Verdict:
    oracle = _default if budget is None or budget == DEFAULT_BUDGET else Oracle(budget)
    return oracle.is_unknot(d)


def classicality_verdict(d: PseudoDiagram, budget: Budget | None = None):
    oracle = _default if budget is None or budget == DEFAULT_BUDGET else Oracle(budget)
    return oracle.classicality(d)


def check_trivial(d: PseudoDiagram, verdict: Trivial) -> bool:
    """Replay a trace and confirm it ends at the empty diagram."""
    try:
        return replay(to_code(d), verdict.trace) == EMPTY
    except ValueError:
        return False


def check_classical(d: PseudoDiagram, verdict: ClassicalVerdict) -> bool:
    try:
        return _genus_zero(replay(to_code(d), verdict.trace))
    except ValueError:
        return False


def check_nontrivial(d: PseudoDiagram, verdict: Nontrivial, bracket_limit: int = 20) -> bool:
    """Recompute the certificate on the diagram its trace leads to."""
    target = from_code(replay(to_code(d), verdict.trace)) if verdict.trace else d
    name = verdict.certificate
    if name == "J":
        return str(odd_writhe(target)) == verdict.value and odd_writhe(target) != 0
    if name == "p_t":
        pt = index_polynomial(target)
        return not pt.is_zero() and str(pt) == verdict.value
    if name == "v2":
        return carrier_genus(target) == 0 and v2(target) != 0 and str(v2(target)) == verdict.value
    if name == "f":
        try:
            f = f_polynomial(target, bracket_limit)
        except BudgetExceeded:
            return False
        return not f.is_one() and str(f) == verdict.value
    return False


def visit_order(size: int, basepoint: int, backwards: bool) -> list[int]:
    """Rank of each slot along a traversal starting at ``basepoint``."""
    if backwards:
        return [(basepoint - s) % size for s in range(size)]
    return [(s - basepoint) % size for s in range(size)]


def descending_resolution(p: PseudoDiagram, basepoint: int = 0, backwards: bool = False) -> PseudoDiagram:
    """Resolve every precrossing so the strand met first passes over."""
    if p.n == 0:
        return p
    rank = visit_order(p.size, basepoint, backwards)
    states = list(p.states)
    for c, ((a, b), st) in enumerate(zip(p.chords, p.states)):
        if isinstance(st, Pre):
            over = a if rank[a] < rank[b] else b
            states[c] = Classical(over, st.flat_sign if over == a else -st.flat_sign)
    return PseudoDiagram(p.chords, tuple(states), p.labels)


def descending_starts(p: PseudoDiagram):
    """Every (basepoint, backwards) from which each classical chord of ``p``
    is met first at its over endpoint."""
    out = []
    for backwards in (False, True):
        for base in range(max(p.size, 1)):
            rank = visit_order(p.size, base, backwards) if p.size else []
            good = True
            for (a, b), st in zip(p.chords, p.states):
                if isinstance(st, Classical):
                    under = b if st.over == a else a
                    if rank[st.over] > rank[under]:
                        good = False
                        break
            if good:
                out.append((base, backwards))
    return out


def descending_completion(p: PseudoDiagram) -> PseudoDiagram | None:
    """A descending resolution compatible with the crossings already fixed,
    or None when no basepoint and direction makes them all descending."""
    starts = descending_starts(p)
    if not starts:
        return None
    base, backwards = starts[0]
    return descending_resolution(p, base, backwards)

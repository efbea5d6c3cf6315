"""Trivializing, knotting, classicalizing and virtualizing numbers.

Small pseudodiagrams are handled exactly: every completion of the
precrossings gets an oracle verdict, and the numbers are read off by
reducing that table over subsets in order of size.  A number is ``Exact``
only when every smaller subset and resolution was proved to fail.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from . import _kernels
from .diagram import (Classical, Pre, PseudoDiagram, carrier_genus, crossing_masks, delete_chords,
                      resolve_some)
from .invariants import intersection_indices, odd_set
from .oracle import (ClassicalVerdict, Nontrivial, NonClassical, Oracle, Trivial,
                     descending_resolution, descending_starts)


@dataclass(frozen=True)
class Exact:
    value: int
    witness: tuple[int, ...] = ()
    resolution: tuple[int, ...] = ()
    notes: tuple[str, ...] = ()

    def to_json(self, labels=None) -> dict:
        return {"exact": self.value, "witness": _labelled(self.witness, labels),
                "resolution": list(self.resolution), "notes": list(self.notes)}


@dataclass(frozen=True)
class Bounds:
    lower: int
    upper: int | None = None
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        if self.upper is not None and self.lower > self.upper:
            raise ValueError(f"empty bounds [{self.lower}, {self.upper}]")

    def to_json(self, labels=None) -> dict:
        return {"lower": self.lower, "upper": self.upper, "notes": list(self.notes)}


@dataclass(frozen=True)
class Infinite:
    notes: tuple[str, ...] = ()

    def to_json(self, labels=None) -> dict:
        return {"infinite": True, "notes": list(self.notes)}


Number = Union[Exact, Bounds, Infinite]


def _labelled(chords, labels):
    if labels:
        return [labels[c] for c in chords]
    return [c + 1 for c in chords]


def lower_of(x: Number) -> float:
    if isinstance(x, Exact):
        return x.value
    if isinstance(x, Bounds):
        return x.lower
    return float("inf")


def upper_of(x: Number) -> float:
    if isinstance(x, Exact):
        return x.value
    if isinstance(x, Bounds):
        return float("inf") if x.upper is None else x.upper
    return float("inf")


def describe(x: Number) -> str:
    if isinstance(x, Exact):
        return str(x.value)
    if isinstance(x, Infinite):
        return "inf"
    return f"[{x.lower}, {'inf' if x.upper is None else x.upper}]"


# parallel chord sets

def max_parallel_subset(d: PseudoDiagram, method: str = "dp") -> frozenset[int]:
    """A largest set of pairwise non-crossing chords."""
    if d.n == 0:
        return frozenset()
    partner = d.partner_array()
    if method == "dp":
        chosen = _kernels.parallel_dp(partner)
        return frozenset(int(c) for c in np.flatnonzero(chosen))
    if method == "brute":
        mask = int(_kernels.parallel_brute(partner))
        return frozenset(c for c in range(d.n) if mask >> c & 1)
    raise ValueError(f"unknown method {method!r}")


def parallel_agreement(n: int) -> tuple[int, int]:
    """Run the interval DP against brute force on n-chord matchings.

    Every matching can be rotated so that one of its longest chords starts
    at slot 0, and the largest parallel set does not depend on rotation,
    so it is enough to pin a longest chord there.  Returns (matchings
    checked, disagreements).
    """
    checked = bad = 0
    for length in range(1, n + 1):
        c, b = _kernels.parallel_sweep(n, length, length)
        checked += int(c)
        bad += int(b)
    return checked, bad


def deletion_number(s: PseudoDiagram) -> Exact:
    """Fewest chords whose removal leaves a parallel diagram.

    For a shadow this is also the number of precrossings that must be fixed,
    as classical or virtual crossings, before every completion is trivial:
    any two crossing undetermined chords can be completed to a diagram with
    nonzero odd writhe, and parallel chords always unknot by first moves.
    """
    keep = max_parallel_subset(s)
    drop = tuple(c for c in range(s.n) if c not in keep)
    return Exact(len(drop), drop)


def lemma_resolution(s: PseudoDiagram, fixed: Sequence[int]) -> dict[int, int]:
    """Writhes for the chords in ``fixed`` that unknot every completion of a
    classical shadow whose other chords are pairwise parallel.

    Repeatedly take a free chord with one side free of other free chords;
    make the strand along that side pass over everything it meets, which lets
    the loop it closes shrink away.  Whatever is left is resolved descending.
    """
    fixed = set(fixed)
    free = set(range(s.n)) - fixed
    alive = set(range(s.n))
    over: dict[int, int] = {}
    m = s.size
    chord_at = s.slot_chord
    while free:
        pick = None
        for c in sorted(free):
            a, b = s.chords[c]
            for arc in (range(a + 1, b), [x % m for x in range(b + 1, a + m)]):
                slots = [x for x in arc if chord_at[x] in alive]
                if all(chord_at[x] not in free for x in slots):
                    pick = (c, slots)
                    break
            if pick:
                break
        if pick is None:
            raise ValueError("free chords are not pairwise parallel")
        c, slots = pick
        for x in slots:
            t = chord_at[x]
            if t not in over:
                over[t] = x
        alive -= {chord_at[x] for x in slots} | {c}
        free.discard(c)
    for t in sorted(fixed):
        if t not in over:
            a, b = s.chords[t]
            over[t] = a
    return {t: (s.flat_sign(t) if over[t] == s.chords[t][0] else -s.flat_sign(t)) for t in fixed}


# resolution tables

class ResolutionTable:
    """Verdicts for every completion of the precrossings of ``p``.

    Index bit ``i`` set means precrossing ``pre[i]`` gets writhe -1.
    Status is +1 when proved trivial (or classical), -1 when proved
    nontrivial (non-classical) and 0 when unknown.
    """

    def __init__(self, p: PseudoDiagram, oracle: Oracle, kind: str = "unknot"):
        if kind not in ("unknot", "classical"):
            raise ValueError(kind)
        self.p = p
        self.oracle = oracle
        self.kind = kind
        self.pre = p.precrossings
        k = len(self.pre)
        self.k = k
        size = 1 << k
        writhes = np.ones((size, p.n), dtype=np.int64)
        idx = np.arange(size)
        for c in p.classical_chords:
            writhes[:, c] = p.writhe(c)
        for i, c in enumerate(self.pre):
            writhes[:, c] = np.where((idx >> i) & 1, -1, 1)
        self.writhes = writhes
        ind = np.abs(np.array(intersection_indices(p), dtype=np.int64))
        odd = np.zeros(p.n, dtype=bool)
        odd[list(odd_set(p))] = True
        status = np.zeros(size, dtype=np.int8)
        bad = (writhes[:, odd].sum(axis=1) != 0) if p.n else np.zeros(size, bool)
        for mval in set(ind.tolist()) - {0}:
            bad |= writhes[:, ind == mval].sum(axis=1) != 0
        status[bad] = -1
        self.realizable = carrier_genus(p) == 0
        mirror_ok = p.is_shadow
        full = size - 1
        for r in range(size):
            if status[r]:
                continue
            if mirror_ok and (r ^ full) < r:
                status[r] = status[r ^ full]
                continue
            if kind == "classical" and self.realizable:
                status[r] = 1
                continue
            v = self.verdict(r)
            status[r] = 1 if isinstance(v, (Trivial, ClassicalVerdict)) else (
                -1 if isinstance(v, (Nontrivial, NonClassical)) else 0)
        self.status = status

    def diagram(self, r: int) -> PseudoDiagram:
        return resolve_some(self.p, {c: int(self.writhes[r, c]) for c in self.pre})

    def verdict(self, r: int):
        d = self.diagram(r)
        return self.oracle.is_unknot(d) if self.kind == "unknot" else self.oracle.classicality(d)

    def index_of(self, writhes: dict[int, int]) -> int:
        return sum(1 << i for i, c in enumerate(self.pre) if writhes[c] < 0)

    def unknown_count(self) -> int:
        return int((self.status == 0).sum())

    def cube(self) -> np.ndarray:
        """Status as an array with one axis per precrossing, in chord order."""
        k = self.k
        if k == 0:
            return self.status.reshape(())
        return self.status.reshape((2,) * k).transpose(tuple(range(k - 1, -1, -1)))


def _minimum_forcing(table: ResolutionTable, target: int, name: str) -> Number:
    """Least number of precrossings whose resolution forces status ``target``
    on every completion."""
    k = table.k
    cube = table.cube()
    hit = cube == target
    miss = cube == -target
    lower = None
    for size in range(k + 1):
        for subset in itertools.combinations(range(k), size):
            free = tuple(i for i in range(k) if i not in subset)
            ok = hit.all(axis=free) if free else hit
            refuted = miss.any(axis=free) if free else miss
            if lower is None and not np.all(ok | refuted):
                lower = size
            if np.any(ok):
                first = tuple(int(x) for x in np.argwhere(ok)[0]) if subset else ()
                chords = tuple(table.pre[i] for i in subset)
                writhes = tuple(-1 if bit else 1 for bit in first)
                if lower is None or lower == size:
                    return Exact(size, chords, writhes)
                return Bounds(lower, size, (f"{name}: an unknown verdict at size {lower}",))
    # no subset works, including resolving everything
    if lower is None:
        return Infinite((f"{name}: every full resolution was proved to fail",))
    return Bounds(lower, None, (f"{name}: {table.unknown_count()} completions undecided",))


def trivializing_sets(table: ResolutionTable) -> tuple[list[tuple[int, ...]], int]:
    """Chord sets with some resolution proved to trivialize every completion,
    and how many sets were left undecided by unknown verdicts."""
    k = table.k
    cube = table.cube()
    hit, miss = cube == 1, cube == -1
    found, undecided = [], 0
    for size in range(k + 1):
        for subset in itertools.combinations(range(k), size):
            free = tuple(i for i in range(k) if i not in subset)
            ok = hit.all(axis=free) if free else hit
            if np.any(ok):
                found.append(tuple(table.pre[i] for i in subset))
            elif not np.all(miss.any(axis=free) if free else miss):
                undecided += 1
    return found, undecided


def basic_trivializing_sets(table: ResolutionTable) -> tuple[list[tuple[int, ...]], int]:
    """Trivializing sets none of whose proper subsets trivialize.  Supersets
    of trivializing sets trivialize, so dropping one chord at a time is enough."""
    found, undecided = trivializing_sets(table)
    known = set(found)
    basic = [t for t in found if not any(t[:i] + t[i + 1:] in known for i in range(len(t)))]
    return basic, undecided


def forces(p: PseudoDiagram, writhes: dict[int, int], oracle: Oracle, kind: str, target: int) -> bool:
    """Whether every completion of the partial resolution is proved to have
    status ``target`` (+1 trivial or classical, -1 the opposite)."""
    q = resolve_some(p, writhes)
    free = q.precrossings
    for bits in itertools.product((1, -1), repeat=len(free)):
        d = resolve_some(q, dict(zip(free, bits)))
        v = oracle.is_unknot(d) if kind == "unknot" else oracle.classicality(d)
        good = (Trivial, ClassicalVerdict) if target == 1 else (Nontrivial, NonClassical)
        if not isinstance(v, good):
            return False
    return True


def trivializing_number_shadow(s: PseudoDiagram, oracle: Oracle | None = None, verify: bool = True) -> Number:
    """Trivializing number of a classical shadow from its parallel chord sets."""
    if not s.is_shadow:
        raise ValueError("not a shadow; use trivializing_number_general")
    deleted = deletion_number(s)
    if carrier_genus(s) != 0:
        return Bounds(deleted.value, None, ("virtual shadow: the deletion count is only a lower bound",))
    if not verify:
        writhes = lemma_resolution(s, deleted.witness)
        return Exact(deleted.value, deleted.witness, tuple(writhes[c] for c in deleted.witness),
                     ("witness not re-verified",))
    oracle = oracle or Oracle()
    candidates = [lemma_resolution(s, deleted.witness)]
    for base, back in descending_starts(s):
        d = descending_resolution(s, base, back)
        candidates.append({c: d.writhe(c) for c in deleted.witness})
    tried = set()
    for writhes in candidates:
        key = tuple(writhes[c] for c in deleted.witness)
        if key in tried:
            continue
        tried.add(key)
        outcome = verify_forcing(s, writhes, oracle, "unknot")
        if outcome == 1:
            return Exact(deleted.value, deleted.witness, key)
    return Exact(deleted.value, deleted.witness, tuple(candidates[0][c] for c in deleted.witness),
                 ("value holds by the parallel-chord argument; no witness resolution was verified",))


def verify_forcing(p: PseudoDiagram, writhes: dict[int, int], oracle: Oracle, kind: str) -> int:
    """+1 if every completion of the partial resolution is trivial (classical),
    -1 if some completion is proved otherwise, 0 if undecided."""
    q = resolve_some(p, writhes)
    free = q.precrossings
    unknown = False
    for bits in itertools.product((1, -1), repeat=len(free)):
        d = resolve_some(q, dict(zip(free, bits)))
        v = oracle.is_unknot(d) if kind == "unknot" else oracle.classicality(d)
        if isinstance(v, (Nontrivial, NonClassical)):
            return -1
        if not isinstance(v, (Trivial, ClassicalVerdict)):
            unknown = True
    return 0 if unknown else 1


@dataclass
class NumberContext:
    """Shared oracle and lazily built tables for one pseudodiagram."""

    p: PseudoDiagram
    oracle: Oracle = field(default_factory=Oracle)
    exact_limit: int = 14
    virtual_limit: int = 6
    _tables: dict = field(default_factory=dict)

    def table(self, kind: str) -> ResolutionTable:
        if kind not in self._tables:
            self._tables[kind] = ResolutionTable(self.p, self.oracle, kind)
        return self._tables[kind]

    @property
    def small(self) -> bool:
        return len(self.p.precrossings) <= self.exact_limit


def trivializing_number_general(p: PseudoDiagram, ctx: NumberContext | None = None) -> Number:
    ctx = ctx or NumberContext(p)
    if ctx.small:
        return _minimum_forcing(ctx.table("unknot"), 1, "tr")
    if p.is_shadow:
        deleted = deletion_number(p)
        if carrier_genus(p) == 0:
            return Exact(deleted.value, deleted.witness, (), ("parallel-chord argument; beyond the exact limit",))
        return Bounds(deleted.value, None, ("beyond the exact limit",))
    return Bounds(0, None, ("beyond the exact limit",))


def knotting_number(p: PseudoDiagram, ctx: NumberContext | None = None) -> Number:
    ctx = ctx or NumberContext(p)
    if ctx.small:
        return _minimum_forcing(ctx.table("unknot"), -1, "kn")
    low = 3 if p.is_shadow and carrier_genus(p) == 0 else 0
    return Bounds(low, None, ("beyond the exact limit",))


def _forcing_count(fixed_sum: int, free: int) -> int | None:
    """Fewest free +-1 terms to fix so the total is nonzero whatever the rest do."""
    need = max(0, (free - abs(fixed_sum)) // 2 + 1)
    return need if need <= free else None


def cl_vir_bounds(p: PseudoDiagram) -> tuple[Bounds, Bounds]:
    """Bounds on the classicalizing and virtualizing numbers from the
    intersection indices and the odd chords."""
    pre = set(p.precrossings)
    ind = intersection_indices(p)
    odd = odd_set(p)
    notes_cl, notes_vir = [], []
    index_forced = sum(1 for c in pre if ind[c] != 0)
    odd_forced = len(odd & pre)
    cl_lower = max(index_forced, odd_forced)
    notes_cl.append(f"precrossings with nonzero index: {index_forced}")
    notes_cl.append(f"odd precrossings: {odd_forced}")
    uppers = []
    groups: dict[int, list[int]] = {}
    for c in range(p.n):
        if ind[c]:
            groups.setdefault(abs(ind[c]), []).append(c)
    for mval, members in sorted(groups.items()):
        fixed = sum(p.writhe(c) for c in members if c not in pre)
        k = _forcing_count(fixed, sum(1 for c in members if c in pre))
        if k is not None and any(c in pre for c in members):
            uppers.append(k)
            notes_vir.append(f"index {mval} class forces a nonzero p_t after {k}")
    if odd:
        fixed = sum(p.writhe(c) for c in odd if c not in pre)
        k = _forcing_count(fixed, len(odd & pre))
        if k is not None and odd & pre:
            uppers.append(k)
            notes_vir.append(f"odd chords force a nonzero odd writhe after {k}")
    vir_lower = 3 if p.is_shadow and carrier_genus(p) == 0 and p.n else 0
    cl = Bounds(cl_lower, len(pre), tuple(notes_cl))
    vir = Bounds(min(vir_lower, min(uppers)) if uppers else vir_lower, min(uppers) if uppers else None,
                 tuple(notes_vir))
    return cl, vir


def cl_vir_exact_small(p: PseudoDiagram, ctx: NumberContext | None = None) -> tuple[Number, Number]:
    ctx = ctx or NumberContext(p)
    cl_b, vir_b = cl_vir_bounds(p)
    if not ctx.small:
        return cl_b, vir_b
    table = ctx.table("classical")
    cl = _minimum_forcing(table, 1, "cl")
    vir = _minimum_forcing(table, -1, "vir")
    if lower_of(cl) < cl_b.lower and isinstance(cl, Exact):
        raise AssertionError("exact classicalizing number below its proven lower bound")
    if vir_b.upper is not None and isinstance(vir, Exact) and vir.value > vir_b.upper:
        raise AssertionError("exact virtualizing number above its proven upper bound")
    return cl, vir


def virtual_trivializing_small(p: PseudoDiagram, oracle: Oracle, uber: bool = False) -> Number:
    """Fewest precrossings to fix so that every completion is trivial, where
    a fixed precrossing becomes virtual (deleted) or, with ``uber``, may also
    become a classical crossing of either sign."""
    pre = p.precrossings
    choices = (0, 1, -1) if uber else (0,)
    lower = None
    for size in range(len(pre) + 1):
        for subset in itertools.combinations(pre, size):
            for picks in itertools.product(choices, repeat=size):
                writhes = {c: w for c, w in zip(subset, picks) if w}
                dropped = [c for c, w in zip(subset, picks) if not w]
                q = delete_chords(resolve_some(p, writhes), dropped)
                outcome = verify_forcing(q, {}, oracle, "unknot")
                if outcome == 1:
                    if lower is None or lower == size:
                        return Exact(size, subset, tuple(picks))
                    return Bounds(lower, size, (f"an unknown verdict at size {lower}",))
                if outcome == 0 and lower is None:
                    lower = size
    return Bounds(lower if lower is not None else len(pre), None, ("no choice was proved to trivialize",))


@dataclass(frozen=True)
class CharacteristicReport:
    tr: Number
    kn: Number
    cl: Number
    vir: Number
    virtr: Number
    ubtr: Number

    def to_json(self, labels=None) -> dict:
        return {name: getattr(self, name).to_json(labels) for name in ("tr", "kn", "cl", "vir", "virtr", "ubtr")}

    def summary(self) -> dict[str, str]:
        return {name: describe(getattr(self, name)) for name in ("tr", "kn", "cl", "vir", "virtr", "ubtr")}


def characteristic_report(p: PseudoDiagram, ctx: NumberContext | None = None) -> CharacteristicReport:
    ctx = ctx or NumberContext(p)
    tr = trivializing_number_general(p, ctx)
    kn = knotting_number(p, ctx)
    cl, vir = cl_vir_exact_small(p, ctx)
    if len(p.precrossings) <= ctx.virtual_limit:
        virtr = virtual_trivializing_small(p, ctx.oracle)
        ubtr = virtual_trivializing_small(p, ctx.oracle, uber=True)
    elif p.is_shadow:
        # deleting the chords outside a parallel set always leaves an unknot
        upper = deletion_number(p).value
        virtr = Bounds(0, upper, ("beyond the virtual limit; upper bound from parallel chords",))
        ubtr = virtr
    else:
        virtr = ubtr = Bounds(0, None, ("beyond the virtual limit",))
    return CharacteristicReport(tr, kn, cl, vir, virtr, ubtr)

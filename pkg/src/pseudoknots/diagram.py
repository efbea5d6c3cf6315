"""Gauss-diagram model of pseudodiagrams.

A pseudodiagram with ``n`` crossings is a cyclic word of ``2n`` slots.  Each
slot is one visit of the traversal to a crossing, and each crossing is a
chord joining its two slots.  A chord is either a precrossing, carrying only
its flat (planar) sign, or a classical crossing carrying an over endpoint and
a writhe.

The flat sign of a chord is the sign of the cross product of the traversal
direction at its first visit with the direction at its second visit.  For a
classical crossing it is tied to the writhe: the writhe equals the flat sign
exactly when the over strand is visited first.

Text form is a sequence of tokens ``O3+``, ``U3+`` or ``P3-``: a kind letter
(over, under, precrossing), a positive label, and a sign (writhe for
classical crossings, flat sign for precrossings).  The empty diagram is
written ``()``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Sequence, Union

import networkx as nx
import numpy as np

from . import _kernels


class ParseError(ValueError):
    """Raised for malformed Gauss-code text."""


@dataclass(frozen=True)
class Pre:
    """An unresolved crossing."""

    flat_sign: int

    def __post_init__(self):
        if self.flat_sign not in (1, -1):
            raise ValueError(f"flat sign must be +1 or -1, got {self.flat_sign}")


@dataclass(frozen=True)
class Classical:
    """A resolved crossing; ``over`` is the slot where the strand passes over."""

    over: int
    writhe: int

    def __post_init__(self):
        if self.writhe not in (1, -1):
            raise ValueError(f"writhe must be +1 or -1, got {self.writhe}")


ChordState = Union[Pre, Classical]


@dataclass(frozen=True)
class PseudoDiagram:
    """Chords are ``(a, b)`` with ``a < b``, sorted by ``a``; a chord's id is
    its index.  ``labels`` remembers the labels a diagram was parsed with and
    plays no part in equality."""

    chords: tuple[tuple[int, int], ...]
    states: tuple[ChordState, ...]
    labels: tuple[int, ...] | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if len(self.chords) != len(self.states):
            raise ValueError("one state per chord is required")
        seen = sorted(x for ab in self.chords for x in ab)
        if seen != list(range(2 * len(self.chords))):
            raise ValueError("chords must form a perfect matching of the slots")
        for (a, b), st in zip(self.chords, self.states):
            if not a < b:
                raise ValueError(f"chord {(a, b)} is not ordered")
            if isinstance(st, Classical) and st.over not in (a, b):
                raise ValueError(f"over endpoint {st.over} is not on chord {(a, b)}")
        if list(self.chords) != sorted(self.chords):
            raise ValueError("chords must be sorted by first endpoint")

    @property
    def n(self) -> int:
        return len(self.chords)

    @property
    def size(self) -> int:
        return 2 * len(self.chords)

    @cached_property
    def slot_chord(self) -> tuple[int, ...]:
        out = [0] * self.size
        for c, (a, b) in enumerate(self.chords):
            out[a] = out[b] = c
        return tuple(out)

    @cached_property
    def partner(self) -> tuple[int, ...]:
        out = [0] * self.size
        for a, b in self.chords:
            out[a], out[b] = b, a
        return tuple(out)

    def partner_array(self) -> np.ndarray:
        return np.array(self.partner, dtype=np.int64)

    def flat_sign(self, c: int) -> int:
        st = self.states[c]
        if isinstance(st, Pre):
            return st.flat_sign
        return st.writhe if st.over == self.chords[c][0] else -st.writhe

    @cached_property
    def flat_signs(self) -> tuple[int, ...]:
        return tuple(self.flat_sign(c) for c in range(self.n))

    @property
    def precrossings(self) -> tuple[int, ...]:
        return tuple(c for c, st in enumerate(self.states) if isinstance(st, Pre))

    @property
    def classical_chords(self) -> tuple[int, ...]:
        return tuple(c for c, st in enumerate(self.states) if isinstance(st, Classical))

    @property
    def is_shadow(self) -> bool:
        return all(isinstance(st, Pre) for st in self.states)

    @property
    def is_resolved(self) -> bool:
        return all(isinstance(st, Classical) for st in self.states)

    def writhe(self, c: int) -> int:
        st = self.states[c]
        if not isinstance(st, Classical):
            raise ValueError(f"chord {c} is a precrossing")
        return st.writhe

    def shadow(self) -> PseudoDiagram:
        """Forget every over/under choice."""
        return PseudoDiagram(self.chords, tuple(Pre(f) for f in self.flat_signs), self.labels)

    def __str__(self) -> str:
        return serialize(self)


def build(pairs: Sequence[tuple[int, int]], states: Sequence[ChordState],
          labels: Sequence[int] | None = None) -> PseudoDiagram:
    """Normalise chords given in any order and orientation."""
    rows = sorted(zip((tuple(sorted(p)) for p in pairs), states,
                      labels if labels is not None else itertools.repeat(None)))
    chords = tuple(r[0] for r in rows)
    sts = tuple(r[1] for r in rows)
    labs = tuple(r[2] for r in rows) if labels is not None else None
    return PseudoDiagram(chords, sts, labs)


def shadow_from_partner(partner: Sequence[int], flat: Sequence[int] | None = None) -> PseudoDiagram:
    """Shadow on a matching; ``flat`` lists flat signs by chord id."""
    chords = tuple((i, int(p)) for i, p in enumerate(partner) if i < p)
    if flat is None:
        flat = [1] * len(chords)
    return PseudoDiagram(chords, tuple(Pre(int(f)) for f in flat))


def resolved(d: PseudoDiagram, writhes: Sequence[int]) -> PseudoDiagram:
    """Resolve every chord with the given writhes (indexed by chord id)."""
    states = []
    for (a, b), f, w in zip(d.chords, d.flat_signs, writhes):
        states.append(Classical(a if w == f else b, w))
    return PseudoDiagram(d.chords, tuple(states), d.labels)


# text form

_TOKEN = re.compile(r"\s*([OUP])(\d+)([+-])")


def serialize(d: PseudoDiagram, keep_labels: bool = False) -> str:
    """Text form; labels are renumbered in order of first visit unless
    ``keep_labels`` is set and the diagram remembers its labels."""
    if d.n == 0:
        return "()"
    labels = d.labels if keep_labels and d.labels else tuple(range(1, d.n + 1))
    out = []
    for slot, c in enumerate(d.slot_chord):
        st = d.states[c]
        if isinstance(st, Pre):
            kind, sign = "P", st.flat_sign
        else:
            kind, sign = ("O" if st.over == slot else "U"), st.writhe
        out.append(f"{kind}{labels[c]}{'+' if sign > 0 else '-'}")
    return "".join(out)


def parse_gauss(text: str) -> PseudoDiagram:
    """Parse a Gauss code.

    >>> serialize(parse_gauss("O1+U2+O3+U1+O2+U3+"))
    'O1+U2+O3+U1+O2+U3+'
    """
    body = text.strip()
    if body == "()":
        return PseudoDiagram((), ())
    if not body:
        raise ParseError("empty input; the empty diagram is written ()")
    tokens = []
    pos = 0
    while pos < len(body):
        m = _TOKEN.match(body, pos)
        if m is None:
            bad = body[pos:].split()[0] if body[pos:].strip() else body[pos:]
            raise ParseError(f"unrecognised token {bad[:12]!r} at offset {pos}")
        tokens.append((m.group(0).strip(), m.group(1), int(m.group(2)), 1 if m.group(3) == "+" else -1))
        pos = m.end()
        while pos < len(body) and body[pos].isspace():
            pos += 1
    visits: dict[int, list[tuple[int, str, str, int]]] = {}
    for slot, (tok, kind, label, sign) in enumerate(tokens):
        if label == 0:
            raise ParseError(f"label must be positive in token {tok!r}")
        visits.setdefault(label, []).append((slot, tok, kind, sign))
    pairs, states, labels = [], [], []
    for label, vs in visits.items():
        if len(vs) != 2:
            raise ParseError(f"label {label} appears {len(vs)} time(s), in token {vs[-1][1]!r}")
        (s1, t1, k1, g1), (s2, t2, k2, g2) = vs
        if g1 != g2:
            raise ParseError(f"sign of token {t2!r} disagrees with {t1!r}")
        kinds = {k1, k2}
        if kinds == {"P"}:
            states.append(Pre(g1))
        elif kinds == {"O", "U"}:
            states.append(Classical(s1 if k1 == "O" else s2, g1))
        else:
            raise ParseError(f"token {t2!r} does not pair with {t1!r}")
        pairs.append((s1, s2))
        labels.append(label)
    return build(pairs, states, labels)


# crossing structure

def chords_cross(d: PseudoDiagram, x: int, y: int) -> bool:
    """True when exactly one endpoint of ``y`` lies strictly inside ``x``."""
    for c in (x, y):
        if not 0 <= c < d.n:
            raise ValueError(f"no chord {c}")
    a, b = d.chords[x]
    c, e = d.chords[y]
    return (a < c < b) != (a < e < b)


def crossing_masks(d: PseudoDiagram) -> list[int]:
    """Bitmask of the chords crossing each chord."""
    if d.n == 0:
        return []
    return [int(v) for v in _kernels.crossing_masks(d.partner_array())]


def interlacement_graph(d: PseudoDiagram) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(range(d.n))
    for x, mask in enumerate(crossing_masks(d)):
        for y in range(x + 1, d.n):
            if mask >> y & 1:
                g.add_edge(x, y)
    return g


def carrier_genus(d: PseudoDiagram) -> int:
    """Genus of the closed surface on which the flat diagram embeds
    cellularly.  Over/under information plays no part; the flat signs do."""
    if d.n == 0:
        return 0
    faces = _kernels.face_count(d.partner_array(), np.array(d.flat_signs, dtype=np.int64))
    return (2 + d.n - faces) // 2


def is_realizable(d: PseudoDiagram) -> bool:
    return carrier_genus(d) == 0


def planar_flat_signs(partner: Sequence[int]) -> list[tuple[int, ...]]:
    """Every flat-sign assignment making the matching a planar curve."""
    n = len(partner) // 2
    if n == 0:
        return [()]
    masks = _kernels.planar_masks(np.array(partner, dtype=np.int64))
    return [tuple(-1 if (mask >> c) & 1 else 1 for c in range(n)) for mask in masks]


# symmetries

def _relabel(size: int, items) -> PseudoDiagram:
    """items: (slot_a, slot_b, state) with states already in new slots."""
    rows = sorted(((min(a, b), max(a, b)), st, lab) for a, b, st, lab in items)
    labels = tuple(r[2] for r in rows)
    return PseudoDiagram(tuple(r[0] for r in rows), tuple(r[1] for r in rows),
                         labels if None not in labels else None)


def rotate_basepoint(d: PseudoDiagram, k: int) -> PseudoDiagram:
    """Move the basepoint forward by ``k`` slots; slot ``i`` becomes ``i - k``."""
    m = d.size
    if m == 0:
        return d
    labels = d.labels or (None,) * d.n
    items = []
    for c, ((a, b), st) in enumerate(zip(d.chords, d.states)):
        na, nb = (a - k) % m, (b - k) % m
        if isinstance(st, Pre):
            st = Pre(st.flat_sign if na < nb else -st.flat_sign)
        else:
            st = Classical((st.over - k) % m, st.writhe)
        items.append((na, nb, st, labels[c]))
    return _relabel(m, items)


def reverse(d: PseudoDiagram) -> PseudoDiagram:
    """Traverse the curve backwards from the same basepoint gap."""
    m = d.size
    labels = d.labels or (None,) * d.n
    items = []
    for c, ((a, b), st) in enumerate(zip(d.chords, d.states)):
        if isinstance(st, Pre):
            st = Pre(-st.flat_sign)
        else:
            st = Classical(m - 1 - st.over, st.writhe)
        items.append((m - 1 - a, m - 1 - b, st, labels[c]))
    return _relabel(m, items)


def mirror(d: PseudoDiagram) -> PseudoDiagram:
    """Reflect the plane: flat signs and writhes change sign, the over
    strand stays over."""
    states = tuple(Pre(-st.flat_sign) if isinstance(st, Pre) else Classical(st.over, -st.writhe)
                   for st in d.states)
    return PseudoDiagram(d.chords, states, d.labels)


def switch_all(d: PseudoDiagram) -> PseudoDiagram:
    """Change every classical crossing; precrossings are untouched."""
    states = []
    for (a, b), st in zip(d.chords, d.states):
        if isinstance(st, Classical):
            st = Classical(b if st.over == a else a, -st.writhe)
        states.append(st)
    return PseudoDiagram(d.chords, tuple(states), d.labels)


def transform(d: PseudoDiagram, op: str, k: int = 0) -> PseudoDiagram:
    if op == "rotate":
        return rotate_basepoint(d, k)
    if op == "reverse":
        return reverse(d)
    if op == "mirror":
        return mirror(d)
    if op == "switch":
        return switch_all(d)
    raise ValueError(f"unknown transform {op!r}")


def symmetry_images(d: PseudoDiagram) -> Iterator[PseudoDiagram]:
    """The 4n images under basepoint rotation and reversal."""
    for base in (d, reverse(d)):
        for k in range(max(d.size, 1)):
            yield rotate_basepoint(base, k)


def canonical_form(d: PseudoDiagram) -> PseudoDiagram:
    return min(symmetry_images(d), key=serialize)


def canonical_text(d: PseudoDiagram) -> str:
    """Lexicographically least serialization over rotations and reversal."""
    return min(serialize(x) for x in symmetry_images(d))


# resolutions

@dataclass(frozen=True)
class Over:
    """Resolve with the strand at slot ``endpoint`` passing over."""

    endpoint: int


@dataclass(frozen=True)
class Writhe:
    """Resolve to the crossing of the given sign."""

    sign: int


@dataclass(frozen=True)
class Virtual:
    """Delete the chord (only meaningful for virtual resolutions)."""


Resolution = Union[Over, Writhe, Virtual]


def apply_resolution(d: PseudoDiagram, chord: int, choice: Resolution, *, allow_virtual: bool = False) -> PseudoDiagram:
    """Resolve a single precrossing."""
    if not 0 <= chord < d.n:
        raise ValueError(f"no chord {chord}")
    st = d.states[chord]
    if not isinstance(st, Pre):
        raise ValueError(f"chord {chord} is already classical")
    a, b = d.chords[chord]
    if isinstance(choice, Virtual):
        if not allow_virtual:
            raise ValueError("virtual resolution needs allow_virtual=True")
        return delete_chords(d, [chord])
    if isinstance(choice, Writhe):
        if choice.sign not in (1, -1):
            raise ValueError("writhe must be +1 or -1")
        over = a if choice.sign == st.flat_sign else b
    else:
        over = choice.endpoint
        if over not in (a, b):
            raise ValueError(f"slot {over} is not an endpoint of chord {chord}")
    w = st.flat_sign if over == a else -st.flat_sign
    states = list(d.states)
    states[chord] = Classical(over, w)
    return PseudoDiagram(d.chords, tuple(states), d.labels)


def resolve_some(d: PseudoDiagram, writhes: dict[int, int]) -> PseudoDiagram:
    """Resolve several precrossings at once, given writhes by chord id."""
    states = list(d.states)
    for c, w in writhes.items():
        st = states[c]
        if not isinstance(st, Pre):
            raise ValueError(f"chord {c} is already classical")
        a, b = d.chords[c]
        states[c] = Classical(a if w == st.flat_sign else b, w)
    return PseudoDiagram(d.chords, tuple(states), d.labels)


def delete_chords(d: PseudoDiagram, chords: Sequence[int]) -> PseudoDiagram:
    """Remove chords and close up the slots; flat signs of the survivors are
    unchanged because relative order is preserved."""
    drop = set(chords)
    dead = {s for c in drop for s in d.chords[c]}
    new_index = {}
    for s in range(d.size):
        if s not in dead:
            new_index[s] = len(new_index)
    labels = d.labels or (None,) * d.n
    items = []
    for c, ((a, b), st) in enumerate(zip(d.chords, d.states)):
        if c in drop:
            continue
        if isinstance(st, Classical):
            st = Classical(new_index[st.over], st.writhe)
        items.append((new_index[a], new_index[b], st, labels[c]))
    return _relabel(len(new_index), items)


# enumeration

def _matchings(n: int, canonical: bool, even_only: bool) -> np.ndarray:
    if n == 0:
        return np.zeros((1, 0), dtype=np.int64)
    flat = _kernels.collect_matchings(n, canonical, even_only)
    return flat.reshape(-1, 2 * n)


def enumerate_chord_diagrams(n: int, *, realizable_only: bool = False, connected_only: bool = False,
                             canonical_only: bool = False, max_n: int = 8) -> Iterator[PseudoDiagram]:
    """Shadows with ``n`` chords, one per matching.

    A realizable matching gets its first planar flat-sign assignment (in
    order of sign masks, ``+`` before ``-``); any other gets all ``+``.
    """
    if n > max_n:
        raise ValueError(f"n={n} exceeds the enumeration limit {max_n}")
    for row in _matchings(n, canonical_only, realizable_only):
        partner = [int(x) for x in row]
        planar = planar_flat_signs(partner) if n else [()]
        if realizable_only and not planar:
            continue
        d = shadow_from_partner(partner, planar[0] if planar else None)
        if connected_only and n and not nx.is_connected(interlacement_graph(d)):
            continue
        yield d


def count_matchings(n: int, canonical: bool = True) -> int:
    return len(_matchings(n, canonical, False))

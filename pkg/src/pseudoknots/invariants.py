"""Diagram invariants used as knottedness and classicality certificates.

All arithmetic is on Python integers.  Polynomials are sparse maps from
exponent to coefficient.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from . import _kernels
from .diagram import Classical, PseudoDiagram, carrier_genus, crossing_masks


class BudgetExceeded(RuntimeError):
    """Raised instead of returning a value that would take too long to compute."""


@dataclass(frozen=True)
class Polynomial:
    """Sparse Laurent polynomial with integer coefficients."""

    terms: tuple[tuple[int, int], ...] = ()
    var: str = field(default="t", compare=True)

    @classmethod
    def from_dict(cls, coeffs: dict[int, int], var: str = "t") -> Polynomial:
        return cls(tuple(sorted((e, c) for e, c in coeffs.items() if c)), var)

    @classmethod
    def monomial(cls, exp: int, coeff: int = 1, var: str = "t") -> Polynomial:
        return cls.from_dict({exp: coeff}, var)

    def as_dict(self) -> dict[int, int]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        return self.terms == ((0, 1),)

    def __add__(self, other: Polynomial) -> Polynomial:
        out = self.as_dict()
        for e, c in other.terms:
            out[e] = out.get(e, 0) + c
        return Polynomial.from_dict(out, self.var)

    def __neg__(self) -> Polynomial:
        return Polynomial(tuple((e, -c) for e, c in self.terms), self.var)

    def __sub__(self, other: Polynomial) -> Polynomial:
        return self + (-other)

    def __mul__(self, other: Polynomial | int) -> Polynomial:
        if isinstance(other, int):
            return Polynomial.from_dict({e: c * other for e, c in self.terms}, self.var)
        out: dict[int, int] = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return Polynomial.from_dict(out, self.var)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> Polynomial:
        out = Polynomial.monomial(0, 1, self.var)
        for _ in range(k):
            out = out * self
        return out

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*{self.var}^{e}" for e, c in reversed(self.terms))

    @classmethod
    def parse(cls, text: str, var: str = "t") -> Polynomial:
        text = text.strip()
        if text == "0":
            return cls((), var)
        out = {}
        for term in text.split(" + "):
            coeff, power = term.split("*")
            name, exp = power.split("^")
            var = name
            out[int(exp)] = out.get(int(exp), 0) + int(coeff)
        return cls.from_dict(out, var)


def _require_resolved(d: PseudoDiagram, what: str) -> None:
    if not d.is_resolved:
        raise ValueError(f"{what} needs every crossing resolved; precrossings {list(d.precrossings)} remain")


def v2(d: PseudoDiagram) -> int:
    """Degree-two Gauss diagram formula counted from the basepoint.

    Sums ``w_x * w_y`` over ordered pairs of crossings met in the order
    under-of-x, over-of-y, over-of-x, under-of-y.
    """
    _require_resolved(d, "v2")
    under, over, w = [], [], []
    for (a, b), st in zip(d.chords, d.states):
        over.append(st.over)
        under.append(b if st.over == a else a)
        w.append(st.writhe)
    total = 0
    for x in range(d.n):
        hx, tx = under[x], over[x]
        if hx > tx:
            continue
        for y in range(d.n):
            if y != x and hx < over[y] < tx < under[y]:
                total += w[x] * w[y]
    return total


def odd_set(d: PseudoDiagram) -> frozenset[int]:
    """Chords crossing an odd number of other chords."""
    return frozenset(c for c, mask in enumerate(crossing_masks(d)) if bin(mask).count("1") % 2)


def odd_writhe(d: PseudoDiagram) -> int:
    """Sum of the writhes of the odd chords."""
    _require_resolved(d, "odd writhe")
    return sum(d.writhe(c) for c in odd_set(d))


def ind(d: PseudoDiagram, c: int) -> int:
    """Intersection index of chord ``c``.

    Smoothing at ``c`` splits the curve into the arc strictly inside ``c``
    and the arc through the basepoint; each crossing chord contributes its
    flat sign, oriented by which arc it leaves first.
    """
    if not 0 <= c < d.n:
        raise ValueError(f"no chord {c}")
    a, b = d.chords[c]
    total = 0
    for e, (x, y) in enumerate(d.chords):
        if e == c or (a < x < b) == (a < y < b):
            continue
        total += d.flat_sign(e) if x < a else -d.flat_sign(e)
    return total


def intersection_indices(d: PseudoDiagram) -> tuple[int, ...]:
    return tuple(ind(d, c) for c in range(d.n))


def c_m_partition(d: PseudoDiagram) -> dict[int, frozenset[int]]:
    """Chords grouped by the absolute value of their intersection index."""
    groups: dict[int, set[int]] = {}
    for c, value in enumerate(intersection_indices(d)):
        groups.setdefault(abs(value), set()).add(c)
    return {m: frozenset(s) for m, s in sorted(groups.items())}


def index_polynomial(d: PseudoDiagram) -> Polynomial:
    """Writhe-weighted sum of ``t^|ind(c)| - 1``."""
    _require_resolved(d, "index polynomial")
    out: dict[int, int] = {}
    for c, value in enumerate(intersection_indices(d)):
        w = d.writhe(c)
        out[abs(value)] = out.get(abs(value), 0) + w
        out[0] = out.get(0, 0) - w
    return Polynomial.from_dict(out, "t")


def _smoothing_loops(d: PseudoDiagram, oriented: Iterable[bool]) -> int:
    """Loops left after smoothing each chord, orientation-respecting where
    ``oriented`` says so."""
    m = d.size
    if m == 0:
        return 1
    pair = [0] * (2 * m)
    for (a, b), ori in zip(d.chords, oriented):
        out_a, in_a = 2 * a, 2 * ((a - 1) % m) + 1
        out_b, in_b = 2 * b, 2 * ((b - 1) % m) + 1
        if ori:
            links = ((in_a, out_b), (in_b, out_a))
        else:
            links = ((in_a, in_b), (out_a, out_b))
        for x, y in links:
            pair[x], pair[y] = y, x
    seen = [False] * (2 * m)
    loops = 0
    for x in range(2 * m):
        if seen[x]:
            continue
        loops += 1
        y = x
        while True:
            seen[y] = seen[y ^ 1] = True
            y = pair[y ^ 1]
            if y == x:
                break
    return loops


def seifert_count(d: PseudoDiagram) -> int:
    _require_resolved(d, "Seifert count")
    return _smoothing_loops(d, [True] * d.n)


def diagram_genus2(d: PseudoDiagram) -> int:
    """Twice the canonical Seifert genus of the diagram, ``n - s + 1``."""
    return d.n - seifert_count(d) + 1


def diagram_genus(d: PseudoDiagram) -> str:
    """The diagram genus as text, e.g. ``1`` or ``3/2``."""
    g2 = diagram_genus2(d)
    return str(g2 // 2) if g2 % 2 == 0 else f"{g2}/2"


_LOOP = Polynomial.from_dict({2: -1, -2: -1}, "A")


def bracket(d: PseudoDiagram, max_n: int = 20) -> Polynomial:
    """Unnormalised Kauffman bracket by the full state sum."""
    _require_resolved(d, "bracket")
    if d.n > max_n:
        raise BudgetExceeded(f"bracket state sum over 2^{d.n} states exceeds budget 2^{max_n}")
    if d.n == 0:
        return Polynomial.monomial(0, 1, "A")
    writhes = np.array([st.writhe for st in d.states], dtype=np.int64)
    counts = _kernels.bracket_counts(d.partner_array(), writhes)
    loop_powers = [Polynomial.monomial(0, 1, "A")]
    for _ in range(d.n + 1):
        loop_powers.append(loop_powers[-1] * _LOOP)
    out: dict[int, int] = {}
    for n_a in range(d.n + 1):
        for loops in range(1, d.n + 2):
            k = int(counts[n_a, loops])
            if not k:
                continue
            shift = n_a - (d.n - n_a)
            for e, c in loop_powers[loops - 1].terms:
                out[e + shift] = out.get(e + shift, 0) + k * c
    return Polynomial.from_dict(out, "A")


def total_writhe(d: PseudoDiagram) -> int:
    _require_resolved(d, "writhe")
    return sum(st.writhe for st in d.states)


def f_polynomial(d: PseudoDiagram, max_n: int = 20) -> Polynomial:
    """Writhe-normalised bracket; equal to 1 on every unknot diagram."""
    w = total_writhe(d)
    factor = Polynomial.monomial(-3 * w, -1 if w % 2 else 1, "A")
    return factor * bracket(d, max_n)


def is_trivial_polynomial(p: Polynomial) -> bool:
    return p.is_zero()


def summary(d: PseudoDiagram) -> dict:
    """Every invariant of a resolved diagram, as plain values."""
    genus0 = carrier_genus(d) == 0
    return {
        "v2": v2(d),
        "v2_basepoint_free": genus0,
        "odd": sorted(odd_set(d)),
        "J": odd_writhe(d),
        "p_t": str(index_polynomial(d)),
        "seifert_circles": seifert_count(d),
        "genus": diagram_genus(d),
        "f": str(f_polynomial(d)),
    }


__all__ = [
    "BudgetExceeded", "Classical", "Polynomial", "bracket", "c_m_partition", "diagram_genus",
    "diagram_genus2", "f_polynomial", "ind", "index_polynomial", "intersection_indices",
    "odd_set", "odd_writhe", "seifert_count", "summary", "total_writhe", "v2",
]

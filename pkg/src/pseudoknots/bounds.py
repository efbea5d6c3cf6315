"""Upper bounds on unknotting numbers and genus read off a diagram's shadow.

Every report is about one diagram.  For the knot it is only an upper bound,
since the knot-level numbers minimise over all diagrams.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .diagram import Classical, PseudoDiagram, carrier_genus, delete_chords
from .invariants import diagram_genus2, seifert_count
from .moves import encode, from_code, to_code
from .numbers import (Bounds, Exact, NumberContext, Number, ResolutionTable,
                      deletion_number, max_parallel_subset, trivializing_number_general,
                      trivializing_number_shadow)
from .oracle import Nontrivial, Oracle, Trivial

TAG_U = "thm:u<=tr/2"
TAG_VU_TR = "thm:vu<=tr"
TAG_VU_2U = "thm:vu<=2u"
TAG_G = "thm:g<=tr/2"
TAG_SEIFERT = "lemma:seifert>=components"


@dataclass(frozen=True)
class BoundReport:
    quantity: str  # "u", "vu" or "g"
    upper: int | str | None
    tag: str
    construction: dict = field(default_factory=dict)
    verified: bool | None = None
    checks: tuple[tuple[str, bool], ...] = ()

    def to_json(self) -> dict:
        return {"quantity": self.quantity, "upper": self.upper, "tag": self.tag,
                "construction": self.construction, "verified": self.verified,
                "checks": [{"check": name, "ok": ok} for name, ok in self.checks]}


def _require_classical(d: PseudoDiagram) -> None:
    if not d.is_resolved:
        raise ValueError("bounds need a diagram with every crossing resolved")


def switch_crossings(d: PseudoDiagram, chords) -> PseudoDiagram:
    """Crossing changes: the other strand goes over and the writhe flips."""
    states = list(d.states)
    for c in chords:
        a, b = d.chords[c]
        st = d.states[c]
        states[c] = Classical(b if st.over == a else a, -st.writhe)
    return PseudoDiagram(d.chords, tuple(states), d.labels)


def shadow_trivializer(d: PseudoDiagram, oracle: Oracle, exact_limit: int = 14) -> Exact | None:
    """A trivializing set of the shadow of ``d`` with its writhes, or None."""
    s = d.shadow()
    if s.n == 0:
        return Exact(0)
    if carrier_genus(s) == 0:
        tr = trivializing_number_shadow(s, oracle)
    else:
        tr = trivializing_number_general(s, NumberContext(s, oracle, exact_limit))
    if isinstance(tr, Exact) and len(tr.resolution) == len(tr.witness):
        return tr
    return None


def _change_set(d: PseudoDiagram, tr: Exact) -> tuple[tuple[int, ...], dict[int, int]]:
    """The smaller of the change sets toward the witness writhes or their negation.

    Negating every writhe of a trivializing resolution trivializes too, since
    switching every crossing of an unknot diagram gives an unknot diagram.
    """
    target = dict(zip(tr.witness, tr.resolution))
    toward = tuple(c for c in tr.witness if d.writhe(c) != target[c])
    away = tuple(c for c in tr.witness if d.writhe(c) == target[c])
    return (toward, target) if len(toward) <= len(away) else (away, {c: -w for c, w in target.items()})


def unknotting_upper(d: PseudoDiagram, oracle: Oracle | None = None, trivializer: Exact | None = None) -> BoundReport:
    """Change the crossings of a trivializing set that disagree with its
    trivializing writhes, or with their negation, whichever is fewer."""
    _require_classical(d)
    oracle = oracle or Oracle()
    tr = trivializer or shadow_trivializer(d, oracle)
    if tr is None:
        return BoundReport("u", None, TAG_U, {"reason": "no trivializing set of the shadow was proved"}, False)
    changes, target = _change_set(d, tr)
    switched = switch_crossings(d, changes)
    verdict = oracle.is_unknot(switched)
    construction = {"tr": tr.value, "trivializing_set": [c + 1 for c in tr.witness],
                    "target_writhes": [target[c] for c in tr.witness],
                    "changes": [c + 1 for c in changes], "verdict": verdict.to_json()["verdict"]}
    return BoundReport("u", len(changes), TAG_U, construction, isinstance(verdict, Trivial))


def _min_distance(table: ResolutionTable, start: int) -> Number:
    """Fewest bit flips from ``start`` to a proved-trivial entry, exact only
    when every nearer entry is proved nontrivial."""
    k = table.k
    lower = None
    for size in range(k + 1):
        hit = None
        for subset in itertools.combinations(range(k), size):
            r = start
            for i in subset:
                r ^= 1 << i
            st = table.status[r]
            if st == 1 and hit is None:
                hit = subset
            elif st == 0 and lower is None:
                lower = size
        if hit is not None:
            chords = tuple(table.pre[i] for i in hit)
            if lower is None or lower == size:
                return Exact(size, chords)
            return Bounds(lower, size, (f"an unknown verdict at distance {lower}",))
    return Bounds(lower if lower is not None else k, None, ("no crossing-change set was proved to unknot",))


def unknotting_exact_small(d: PseudoDiagram, oracle: Oracle | None = None, limit: int = 10) -> Number:
    """Fewest crossing changes that give a diagram proved trivial."""
    _require_classical(d)
    oracle = oracle or Oracle()
    if d.n > limit:
        return Bounds(0, unknotting_upper(d, oracle).upper, (f"{d.n} crossings exceed the exact limit {limit}",))
    table = ResolutionTable(d.shadow(), oracle, "unknot")
    return unknotting_from_table(table, d)


def unknotting_from_table(table: ResolutionTable, d: PseudoDiagram) -> Number:
    """Crossing-change distance read off a verdict table of ``d``'s shadow."""
    return _min_distance(table, table.index_of({c: d.writhe(c) for c in range(d.n)}))


def virtual_unknotting_exact_small(d: PseudoDiagram, oracle: Oracle | None = None, limit: int = 10) -> Number:
    """Fewest crossings of this diagram to make virtual for a trivial result."""
    _require_classical(d)
    oracle = oracle or Oracle()
    if d.n > limit:
        return Bounds(0, d.n, (f"{d.n} crossings exceed the exact limit {limit}",))
    lower = None
    for size in range(d.n + 1):
        hit = None
        for subset in itertools.combinations(range(d.n), size):
            v = oracle.is_unknot(delete_chords(d, subset))
            if isinstance(v, Trivial):
                hit = hit or subset
            elif not isinstance(v, Nontrivial) and lower is None:
                lower = size
        if hit is not None:
            if lower is None or lower == size:
                return Exact(size, hit)
            return Bounds(lower, size, (f"an unknown verdict at size {lower}",))
    return Bounds(lower or 0, d.n)


def _tokens(d: PseudoDiagram):
    tok = [(c, d.states[c].over == s) for s, c in enumerate(d.slot_chord)]
    return tok, {c: d.writhe(c) for c in range(d.n)}


def doubling_transform(d: PseudoDiagram, chords) -> tuple[PseudoDiagram, dict[int, tuple[int, int]]]:
    """Second-move pairs next to each crossing in ``chords``.

    Right after both endpoints of crossing ``c`` a cancelling pair ``x, y``
    is added, passing over on the strand that ``c``'s under endpoint lies
    on, with ``w_x = w_c`` and ``w_y = -w_c``.  Making ``c`` and ``x``
    virtual leaves ``y`` in the place of ``c`` with the opposite crossing.

    Returns the new diagram and, for each ``c``, the chord ids of ``c`` and
    ``x`` in it.
    """
    tok, ws = _tokens(d)
    fresh = d.n
    out = []
    extra: dict[int, list] = {}
    pairs = {}
    for c in chords:
        x, y = fresh, fresh + 1
        fresh += 2
        ws[x], ws[y] = ws[c], -ws[c]
        pairs[c] = (c, x)
        extra[c] = (x, y)
    for c, is_over in tok:
        out.append((c, is_over))
        if c in extra:
            x, y = extra[c]
            # under the strand of c's over endpoint the new pair passes under
            out += [(x, not is_over), (y, not is_over)]
    doubled = _from_tokens(out, ws)
    ids = {c: tuple(_chord_of_label(doubled, t + 1) for t in pair) for c, pair in pairs.items()}
    return doubled, ids


def _from_tokens(tok, ws) -> PseudoDiagram:
    """Diagram whose labels are the token chord ids plus one."""
    first = {}
    for i, (c, _) in enumerate(tok):
        first.setdefault(c, i)
    d = from_code(encode(tok, ws))
    by_slot = {first[c]: c for c in first}
    labels = tuple(by_slot[a] + 1 for a, _ in d.chords)
    return PseudoDiagram(d.chords, d.states, labels)


def _chord_of_label(d: PseudoDiagram, label: int) -> int:
    return d.labels.index(label)


def virtual_unknotting_upper(d: PseudoDiagram, oracle: Oracle | None = None,
                             trivializer: Exact | None = None, changes=None) -> BoundReport:
    """min(tr, 2u) over two virtualization routes, each checked by the oracle.

    ``changes`` is an unknotting set of crossing changes to double; by
    default the one built from the trivializing set is used.
    """
    _require_classical(d)
    oracle = oracle or Oracle()
    tr = trivializer or shadow_trivializer(d, oracle)
    routes = {}
    if tr is not None:
        left = delete_chords(d, tr.witness)
        v = oracle.is_unknot(left)
        routes["delete_trivializing_set"] = {"size": tr.value, "chords": [c + 1 for c in tr.witness],
                                             "verified": isinstance(v, Trivial)}
    if changes is None and tr is not None:
        changes, _ = _change_set(d, tr)
    if changes is not None:
        changes = tuple(changes)
        doubled, pairs = doubling_transform(d, changes)
        drop = [x for c in changes for x in pairs[c]]
        left = delete_chords(doubled, drop)
        same = to_code(left) == to_code(switch_crossings(d, changes))
        v = oracle.is_unknot(left)
        routes["double_crossing_changes"] = {"size": 2 * len(changes), "changes": [c + 1 for c in changes],
                                             "diagram": str(doubled), "matches_switched": same,
                                             "verified": isinstance(v, Trivial) and same}
    if not routes:
        return BoundReport("vu", None, TAG_VU_TR, {"reason": "no trivializing set of the shadow was proved"}, False)
    pool = [k for k in routes if routes[k]["verified"]] or list(routes)
    best = min(pool, key=lambda k: (routes[k]["size"], k))
    tag = TAG_VU_TR if best == "delete_trivializing_set" else TAG_VU_2U
    return BoundReport("vu", routes[best]["size"], tag, routes, routes[best]["verified"])


def _half(g2: int) -> str:
    return str(g2 // 2) if g2 % 2 == 0 else f"{g2}/2"


def seifert_lemma(d: PseudoDiagram) -> tuple[int, int]:
    """Seifert circles of ``d`` and components left after smoothing only a
    largest parallel chord set."""
    keep = max_parallel_subset(d)
    part = delete_chords(d, [c for c in range(d.n) if c not in keep])
    return seifert_count(d), seifert_count(part)


def genus_bound_check(d: PseudoDiagram, oracle: Oracle | None = None, tr: int | None = None) -> BoundReport:
    _require_classical(d)
    oracle = oracle or Oracle()
    s = seifert_count(d)
    g2 = diagram_genus2(d)
    shadow = d.shadow()
    if tr is None and carrier_genus(shadow) == 0:
        tr = deletion_number(shadow).value
    elif tr is None:
        found = shadow_trivializer(d, oracle)
        tr = found.value if found is not None else None
    circles, components = seifert_lemma(d)
    checks = [(TAG_SEIFERT, circles >= components)]
    if tr is not None:
        checks += [(TAG_G, tr >= g2), ("seifert>=c-tr+1", s >= d.n - tr + 1)]
    construction = {"crossings": d.n, "seifert_circles": s, "tr": tr, "genus": _half(g2),
                    "half_tr": None if tr is None else _half(tr), "smoothed_components": components}
    return BoundReport("g", _half(g2), TAG_G, construction, all(ok for _, ok in checks), tuple(checks))


def all_bounds(d: PseudoDiagram, oracle: Oracle | None = None, limit: int = 10) -> list[BoundReport]:
    """The three reports; the doubling route uses a fewest-change unknotting
    set when the diagram is small enough to find one exactly."""
    oracle = oracle or Oracle()
    tr = shadow_trivializer(d, oracle)
    u = unknotting_exact_small(d, oracle) if d.n <= limit else None
    changes = u.witness if isinstance(u, Exact) else None
    return [unknotting_upper(d, oracle, tr), virtual_unknotting_upper(d, oracle, tr, changes),
            genus_bound_check(d, oracle, tr.value if tr else None)]

"""Reidemeister moves on Gauss codes of fully resolved diagrams.

The engine works on a compact code: one integer per slot,
``offset * 4 + over * 2 + positive``, where ``offset`` is the forward
distance to the other endpoint of the chord.  The code does not depend on
chord labels, so the least code over basepoint rotations, reversal and
switching every crossing is a canonical key for the diagram up to those
symmetries, none of which changes whether the diagram is trivial.

Moves are the Gauss-diagram moves, which are valid for virtual knots and so
also for classical ones.  The diagram is unbased: slot ``2n - 1`` is adjacent
to slot 0.
"""

from __future__ import annotations

from dataclasses import dataclass

from .diagram import Classical, PseudoDiagram, build

Code = tuple[int, ...]
Symmetry = tuple[int, int, int]  # reversed, switched, rotation

EMPTY: Code = ()


@dataclass(frozen=True)
class Move:
    """``kind`` is one of R1-, R1+, R2-, R2+, R3; ``slots`` locate it.

    R1-: the two slots of an isolated chord.  R2-: the over pair then the
    under pair.  R3: the top, middle and bottom pairs.  R1+: gap,
    over-first flag, writhe, wrap.  R2+: over gap, under gap, reversed
    flag, writhe of the first new chord, for a shared gap whether the under
    pair comes first, and wrap.  ``wrap`` counts the new tokens at gap 0
    that go at the end of the code, so the block straddles the basepoint.
    """

    kind: str
    slots: tuple[int, ...]

    def to_json(self) -> dict:
        return {"move": self.kind, "slots": list(self.slots)}


@dataclass(frozen=True)
class Step:
    move: Move | None
    symmetry: Symmetry | None = None

    def to_json(self) -> dict:
        out = self.move.to_json() if self.move else {"move": "relabel"}
        if self.symmetry is not None:
            out["symmetry"] = list(self.symmetry)
        return out


# code conversion

def encode(tok: list[tuple[int, bool]], ws: dict[int, int]) -> Code:
    m = len(tok)
    where: dict[int, int] = {}
    partner = [0] * m
    for i, (c, _) in enumerate(tok):
        if c in where:
            j = where[c]
            partner[i], partner[j] = j, i
        else:
            where[c] = i
    return tuple(((partner[i] - i) % m) * 4 + (2 if o else 0) + (1 if ws[c] > 0 else 0)
                 for i, (c, o) in enumerate(tok))


def decode(code: Code) -> tuple[list[tuple[int, bool]], dict[int, int]]:
    m = len(code)
    ids: dict[int, int] = {}
    tok = []
    ws: dict[int, int] = {}
    for i, x in enumerate(code):
        j = (i + (x >> 2)) % m
        key = min(i, j)
        if key not in ids:
            ids[key] = len(ids)
        c = ids[key]
        tok.append((c, bool(x & 2)))
        ws[c] = 1 if x & 1 else -1
    return tok, ws


def to_code(d: PseudoDiagram) -> Code:
    if not d.is_resolved:
        raise ValueError("the move engine needs every crossing resolved")
    tok = [(c, d.states[c].over == s) for s, c in enumerate(d.slot_chord)]
    return encode(tok, {c: st.writhe for c, st in enumerate(d.states)})


def from_code(code: Code) -> PseudoDiagram:
    m = len(code)
    pairs, states = [], []
    for i, x in enumerate(code):
        j = (i + (x >> 2)) % m
        if i < j:
            over = i if x & 2 else j
            pairs.append((i, j))
            states.append(Classical(over, 1 if x & 1 else -1))
    return build(pairs, states)


def apply_symmetry(code: Code, sym: Symmetry) -> Code:
    r, s, k = sym
    m = len(code)
    seq = list(code)
    if r:
        seq = [((m - (c >> 2)) % m) << 2 | (c & 3) for c in reversed(seq)]
    if s:
        seq = [c ^ 3 for c in seq]
    return tuple(seq[k:] + seq[:k])


def canonical(code: Code, switch: bool = True) -> tuple[Code, Symmetry]:
    """Least image of the code and the symmetry that produces it."""
    m = len(code)
    if m == 0:
        return EMPTY, (0, 0, 0)
    base = list(code)
    rev = [((m - (c >> 2)) % m) << 2 | (c & 3) for c in reversed(base)]
    best = None
    best_sym = (0, 0, 0)
    for r, seq in ((0, base), (1, rev)):
        for s in ((0, 1) if switch else (0,)):
            cur = [c ^ 3 for c in seq] if s else seq
            lo = min(cur)
            doubled = cur + cur
            for k in range(m):
                if cur[k] == lo:
                    cand = tuple(doubled[k:k + m])
                    if best is None or cand < best:
                        best, best_sym = cand, (r, s, k)
    return best, best_sym


def crossing_count(code: Code) -> int:
    return len(code) // 2


# move generation

def _remove(tok, ws, slots):
    dead = set(slots)
    kept = [t for i, t in enumerate(tok) if i not in dead]
    gone = {tok[i][0] for i in dead}
    return kept, {c: w for c, w in ws.items() if c not in gone}


def _swap_pairs(tok, pairs):
    out = list(tok)
    for x, y in pairs:
        out[x], out[y] = out[y], out[x]
    return out


def _r3_moves(tok, ws):
    m = len(tok)
    pos: dict[int, list[int]] = {}
    for i, (c, _) in enumerate(tok):
        pos.setdefault(c, []).append(i)

    def other(c, i):
        a, b = pos[c]
        return b if i == a else a

    for i in range(m):
        j = (i + 1) % m
        (a, oa), (b, ob) = tok[i], tok[j]
        if not (oa and ob) or a == b:
            continue
        for tm_slot, tb_slot in ((i, j), (j, i)):
            tm, tb = tok[tm_slot][0], tok[tb_slot][0]
            s_top = 1 if tm_slot == i else -1
            u_tm = other(tm, tm_slot)
            u_tb = other(tb, tb_slot)
            for step in (1, -1):
                k = (u_tm + step) % m
                mb, ok = tok[k]
                if not ok or mb in (tm, tb):
                    continue
                s_mid = 1 if step == 1 else -1
                u_mb = other(mb, k)
                if (u_tb + 1) % m == u_mb:
                    s_bot = 1
                elif (u_mb + 1) % m == u_tb:
                    s_bot = -1
                else:
                    continue
                if s_top * s_mid != ws[tb] * ws[mb] or s_top * s_bot != ws[tm] * ws[mb]:
                    continue
                top = (i, j)
                mid = (u_tm, k) if s_mid == 1 else (k, u_tm)
                bot = (u_tb, u_mb) if s_bot == 1 else (u_mb, u_tb)
                yield Move("R3", top + mid + bot)


def removal_moves(tok, ws):
    """R1 and R2 removals, each located by its slots."""
    m = len(tok)
    seen = set()
    for i in range(m):
        j = (i + 1) % m
        if m >= 2 and tok[i][0] == tok[j][0]:
            key = frozenset((i, j))
            if key not in seen:
                seen.add(key)
                yield Move("R1-", (i, j))
    for i in range(m):
        j = (i + 1) % m
        (x, ox), (y, oy) = tok[i], tok[j]
        if x == y or ox != oy or not ox or ws[x] != -ws[y]:
            continue
        p = next(k for k in range(m) if tok[k][0] == x and k != i)
        q = next(k for k in range(m) if tok[k][0] == y and k != j)
        if (p + 1) % m == q or (q + 1) % m == p:
            yield Move("R2-", (i, j, p, q))


def addition_moves(tok, ws):
    m = len(tok)
    gaps = range(m + 1)  # gap m appends, so a block can end the code

    def wraps(g, size):
        # on an empty code a wrapped kink is just the under-first kink
        return range(size) if g == 0 and (m or size > 2) else range(1)

    for g in gaps:
        for over_first in (1, 0):
            for w in (1, -1):
                for wrap in wraps(g, 2):
                    yield Move("R1+", (g, over_first, w, wrap))
    for g1 in gaps:
        for g2 in gaps:
            for rev in (0, 1):
                for w in (1, -1):
                    if g1 == g2:
                        for under_first in (0, 1):
                            for wrap in wraps(g1, 4):
                                yield Move("R2+", (g1, g2, rev, w, under_first, wrap))
                    else:
                        for wrap in wraps(min(g1, g2), 2):
                            yield Move("R2+", (g1, g2, rev, w, 0, wrap))


def _insert(tok, g, block, wrap):
    if wrap:
        if g != 0 or not 0 < wrap < len(block):
            raise ValueError(f"wrap {wrap} needs gap 0 and a split of the new block")
        return block[wrap:] + tok + block[:wrap]
    return tok[:g] + block + tok[g:]


def apply_move(tok, ws, move: Move):
    """Apply a move, checking that it is legal.  Returns new (tok, ws)."""
    m = len(tok)
    kind, sl = move.kind, move.slots
    if kind == "R1-":
        i, j = sl
        if tok[i][0] != tok[j][0] or (i + 1) % m != j and (j + 1) % m != i:
            raise ValueError(f"{move} is not an isolated chord")
        return _remove(tok, ws, sl)
    if kind == "R2-":
        i, j, p, q = sl
        (x, ox), (y, oy) = tok[i], tok[j]
        ok = (x != y and (i + 1) % m == j and ox and oy and ws[x] == -ws[y]
              and {tok[p][0], tok[q][0]} == {x, y} and not tok[p][1] and not tok[q][1]
              and ((p + 1) % m == q or (q + 1) % m == p) and tok[p][0] == x)
        if not ok:
            raise ValueError(f"{move} is not a cancelling pair")
        return _remove(tok, ws, sl)
    if kind == "R3":
        if move not in set(_r3_moves(tok, ws)):
            raise ValueError(f"{move} is not a triangle")
        return _swap_pairs(tok, [sl[0:2], sl[2:4], sl[4:6]]), ws
    fresh = max(ws, default=-1) + 1
    if kind == "R1+":
        g, over_first, w, wrap = sl
        new = [(fresh, bool(over_first)), (fresh, not over_first)]
        return _insert(list(tok), g, new, wrap), {**ws, fresh: w}
    if kind == "R2+":
        g1, g2, rev, w, under_first, wrap = sl
        x, y = fresh, fresh + 1
        over_pair = [(x, True), (y, True)]
        under_pair = [(y, False), (x, False)] if rev else [(x, False), (y, False)]
        if g1 == g2:
            block = under_pair + over_pair if under_first else over_pair + under_pair
            out = _insert(list(tok), g1, block, wrap)
        else:
            # the later gap first, so the earlier one keeps its position
            (ga, ba), (gb, bb) = sorted([(g1, over_pair), (g2, under_pair)], key=lambda t: t[0])
            out = _insert(_insert(list(tok), gb, bb, 0), ga, ba, wrap)
        return out, {**ws, x: w, y: -w}
    raise ValueError(f"unknown move {kind}")


def code_moves(code: Code, additions: bool):
    """Yield (move, raw child code) for every move from a code."""
    tok, ws = decode(code)
    for mv in removal_moves(tok, ws):
        t2, w2 = apply_move(tok, ws, mv)
        yield mv, encode(t2, w2)
    for mv in _r3_moves(tok, ws):
        yield mv, encode(_swap_pairs(tok, [mv.slots[0:2], mv.slots[2:4], mv.slots[4:6]]), ws)
    if additions:
        for mv in addition_moves(tok, ws):
            t2, w2 = apply_move(tok, ws, mv)
            yield mv, encode(t2, w2)


def neighbors(d: PseudoDiagram, max_crossings: int | None = None) -> list[tuple[Move, PseudoDiagram]]:
    """Every diagram one move away, with additions only while the crossing
    count stays within ``max_crossings``."""
    limit = d.n if max_crossings is None else max_crossings
    tok, ws = decode(to_code(d))
    out = []
    for mv in removal_moves(tok, ws):
        out.append((mv, from_code(encode(*apply_move(tok, ws, mv)))))
    for mv in _r3_moves(tok, ws):
        out.append((mv, from_code(encode(*apply_move(tok, ws, mv)))))
    for mv in addition_moves(tok, ws):
        grow = 1 if mv.kind == "R1+" else 2
        if d.n + grow <= limit:
            out.append((mv, from_code(encode(*apply_move(tok, ws, mv)))))
    return out


def simplify(code: Code) -> tuple[Code, list[Step]]:
    """Apply R1 and R2 removals greedily until none is left."""
    steps = []
    while code:
        tok, ws = decode(code)
        mv = next(removal_moves(tok, ws), None)
        if mv is None:
            break
        code = encode(*apply_move(tok, ws, mv))
        steps.append(Step(mv))
    return code, steps


def replay(code: Code, steps) -> Code:
    """Re-apply a trace, re-checking the legality of every move."""
    for st in steps:
        if st.move is not None:
            tok, ws = decode(code)
            code = encode(*apply_move(tok, ws, st.move))
        if st.symmetry is not None:
            code = apply_symmetry(code, st.symmetry)
    return code


def random_move(code: Code, rng, max_crossings: int) -> tuple[Move, Code]:
    """One move chosen at random, additions kept within ``max_crossings``.

    Removals and third moves are listed in full; additions are drawn
    directly since there are quadratically many of them.
    """
    tok, ws = decode(code)
    m = len(tok)
    n = m // 2
    options = list(removal_moves(tok, ws)) + list(_r3_moves(tok, ws))
    kinds = ["listed"] if options else []
    if n + 1 <= max_crossings:
        kinds.append("R1+")
    if n + 2 <= max_crossings:
        kinds.append("R2+")
    kind = rng.choice(kinds)
    if kind == "listed":
        mv = rng.choice(options)
    elif kind == "R1+":
        g = rng.randrange(m + 1)
        mv = Move("R1+", (g, rng.randrange(2), rng.choice((1, -1)), rng.randrange(2) if g == 0 and m else 0))
    else:
        g1, g2 = rng.randrange(m + 1), rng.randrange(m + 1)
        size = 4 if g1 == g2 else 2
        wrap = rng.randrange(size) if min(g1, g2) == 0 and (m or size > 2) else 0
        mv = Move("R2+", (g1, g2, rng.randrange(2), rng.choice((1, -1)), rng.randrange(2) if g1 == g2 else 0,
                          wrap))
    return mv, encode(*apply_move(tok, ws, mv))


def random_walk(rng, steps: int, max_crossings: int, start: Code = EMPTY) -> list[tuple[Move, Code]]:
    """A random sequence of moves from ``start`` with every intermediate code."""
    out = []
    code = start
    for _ in range(steps):
        mv, code = random_move(code, rng, max_crossings)
        out.append((mv, code))
    return out

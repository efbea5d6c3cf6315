import itertools

import pytest

from pseudoknots import golden
from pseudoknots.bounds import (TAG_G, TAG_SEIFERT, all_bounds, delete_chords, doubling_transform,
                                genus_bound_check, seifert_lemma, shadow_trivializer, switch_crossings,
                                unknotting_exact_small, unknotting_upper, virtual_unknotting_exact_small,
                                virtual_unknotting_upper)
from pseudoknots.diagram import enumerate_chord_diagrams, parse_gauss, resolved
from pseudoknots.numbers import Exact
from pseudoknots.oracle import Oracle, descending_resolution

TREFOIL = parse_gauss("O1+U2+O3+U1+O2+U3+")
EMPTY = parse_gauss("()")


def test_unknotting_upper_trefoil(oracle):
    r = unknotting_upper(TREFOIL, oracle)
    assert r.upper == 1 and r.verified
    assert len(r.construction["changes"]) == 1
    assert r.to_json()["upper"] == 1


def test_unknotting_upper_trivial_cases(oracle):
    assert unknotting_upper(EMPTY, oracle).upper == 0
    # a descending diagram already matches a trivializing assignment
    d = descending_resolution(parse_gauss("P1+P2-P3+P1+P2-P3+"))
    assert unknotting_upper(d, oracle).upper == 0


def test_unknotting_exact(oracle):
    assert unknotting_exact_small(TREFOIL, oracle) == Exact(1, unknotting_exact_small(TREFOIL, oracle).witness)
    assert unknotting_exact_small(EMPTY, oracle).value == 0
    assert unknotting_exact_small(golden.load("trefoil_sum"), oracle).value == 2


def test_virtual_unknotting_trefoil(oracle):
    r = virtual_unknotting_upper(TREFOIL, oracle)
    assert r.upper == 2 and r.verified
    sizes = {name: route["size"] for name, route in r.construction.items()}
    assert sizes == {"delete_trivializing_set": 2, "double_crossing_changes": 2}
    assert virtual_unknotting_upper(EMPTY, oracle).upper == 0


def test_minimal_diagram_misses_virtual_unknotting(oracle):
    minimal = golden.load("min_vs_doubled", "minimal")
    doubled = golden.load("min_vs_doubled", "doubled")
    # both diagrams realize unknotting number one
    assert unknotting_exact_small(minimal, oracle).value == 1
    assert unknotting_exact_small(doubled, oracle).value == 1
    # only the larger one realizes virtual unknotting by two
    assert virtual_unknotting_exact_small(minimal, oracle).value == 3
    assert virtual_unknotting_exact_small(doubled, oracle).value == 2


def test_doubling_then_deleting_is_switching():
    for s in enumerate_chord_diagrams(4, realizable_only=True, canonical_only=True):
        for ws in itertools.product((1, -1), repeat=4):
            d = resolved(s, ws)
            for c in range(d.n):
                big, pairs = doubling_transform(d, [c])
                assert big.n == d.n + 2
                assert delete_chords(big, list(pairs[c])) == switch_crossings(d, [c])


def test_genus_bound(oracle):
    r = genus_bound_check(TREFOIL, oracle)
    assert r.upper == "1" and r.construction["half_tr"] == "1"
    assert r.construction["seifert_circles"] == 2
    assert all(ok for _, ok in r.checks)
    assert {name for name, _ in r.checks} == {TAG_SEIFERT, TAG_G, "seifert>=c-tr+1"}
    r = genus_bound_check(EMPTY, oracle)
    assert r.upper == "0" and r.construction["half_tr"] == "0"


def test_seifert_lemma():
    assert seifert_lemma(TREFOIL) == (2, 2)
    assert seifert_lemma(EMPTY) == (1, 1)


def test_bounds_need_classical_diagram():
    with pytest.raises(ValueError):
        unknotting_upper(parse_gauss("P1+P1+"))


def test_shadow_trivializer(oracle):
    tr = shadow_trivializer(TREFOIL, oracle)
    assert tr.value == 2


def test_all_bounds_ordering(oracle):
    names = [r.quantity for r in all_bounds(TREFOIL, oracle)]
    assert names == ["u", "vu", "g"]


def test_exact_below_upper_on_small_diagrams():
    oracle = Oracle()
    for s in enumerate_chord_diagrams(5, realizable_only=True, canonical_only=True):
        for ws in itertools.product((1, -1), repeat=5):
            d = resolved(s, ws)
            u = unknotting_exact_small(d, oracle)
            up = unknotting_upper(d, oracle)
            assert isinstance(u, Exact) and u.value <= up.upper
            vu = virtual_unknotting_upper(d, oracle, changes=u.witness)
            assert vu.upper <= 2 * u.value

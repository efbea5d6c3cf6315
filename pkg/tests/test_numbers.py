import itertools

import pytest

from pseudoknots import golden
from pseudoknots.diagram import parse_gauss, resolve_some
from pseudoknots.numbers import (Bounds, Exact, Infinite, NumberContext, ResolutionTable,
                                 basic_trivializing_sets, characteristic_report, cl_vir_bounds,
                                 cl_vir_exact_small, deletion_number, describe, forces, knotting_number,
                                 lemma_resolution, lower_of, max_parallel_subset, parallel_agreement,
                                 trivializing_number_general, trivializing_number_shadow, upper_of,
                                 verify_forcing, virtual_trivializing_small)
from pseudoknots.oracle import Oracle

TREFOIL_SHADOW = parse_gauss("P1+P2-P3+P1+P2-P3+")
VIRTUAL_TREFOIL = parse_gauss("P1+P2+P1+P2+")
PARALLEL = parse_gauss("P1+P1+P2+P2+")


def test_max_parallel_subset():
    assert max_parallel_subset(parse_gauss("P1+P1+P2+P2+")) == {0, 1}
    assert len(max_parallel_subset(TREFOIL_SHADOW)) == 1
    assert len(max_parallel_subset(TREFOIL_SHADOW, "brute")) == 1
    assert max_parallel_subset(parse_gauss("()")) == frozenset()
    with pytest.raises(ValueError):
        max_parallel_subset(TREFOIL_SHADOW, "greedy")


def test_parallel_routes_agree_small():
    for n in range(1, 7):
        checked, bad = parallel_agreement(n)
        assert checked > 0 and bad == 0


def test_shadow_trivializing_number(oracle):
    tr = trivializing_number_shadow(TREFOIL_SHADOW, oracle)
    assert tr.value == 2 and len(tr.witness) == 2
    assert not tr.notes
    assert forces(TREFOIL_SHADOW, dict(zip(tr.witness, tr.resolution)), oracle, "unknot", 1)
    assert trivializing_number_shadow(PARALLEL, oracle).value == 0
    with pytest.raises(ValueError):
        trivializing_number_shadow(parse_gauss("O1+U1+"))


def test_virtual_shadow_deletion_is_lower_bound():
    tr = trivializing_number_shadow(VIRTUAL_TREFOIL)
    assert isinstance(tr, Bounds) and tr.lower == 1


def test_lemma_resolution_trivializes(oracle):
    fixed = deletion_number(TREFOIL_SHADOW).witness
    writhes = lemma_resolution(TREFOIL_SHADOW, fixed)
    assert verify_forcing(TREFOIL_SHADOW, writhes, oracle, "unknot") == 1


def test_general_trivializing(oracle):
    ctx = NumberContext(TREFOIL_SHADOW, oracle)
    assert trivializing_number_general(TREFOIL_SHADOW, ctx).value == 2
    unknot = parse_gauss("O1+U1+")
    assert trivializing_number_general(unknot, NumberContext(unknot, oracle)) == Exact(0)
    knot = parse_gauss("O1+U2+O3+U1+O2+U3+")
    assert isinstance(trivializing_number_general(knot, NumberContext(knot, oracle)), Infinite)


def test_knotting(oracle):
    kn = knotting_number(TREFOIL_SHADOW, NumberContext(TREFOIL_SHADOW, oracle))
    assert kn.value == 3
    assert forces(TREFOIL_SHADOW, dict(zip(kn.witness, kn.resolution)), oracle, "unknot", -1)
    assert isinstance(knotting_number(PARALLEL, NumberContext(PARALLEL, oracle)), Infinite)


def test_knotting_beyond_exact_limit(oracle):
    kn = knotting_number(TREFOIL_SHADOW, NumberContext(TREFOIL_SHADOW, oracle, exact_limit=1))
    assert kn == Bounds(3, None, kn.notes)


def test_trefoil_basic_sets_are_the_pairs(oracle):
    basic, undecided = basic_trivializing_sets(ResolutionTable(TREFOIL_SHADOW, oracle))
    assert undecided == 0
    assert sorted(basic) == [(0, 1), (0, 2), (1, 2)]


def test_virtual_trefoil_report(oracle):
    report = characteristic_report(VIRTUAL_TREFOIL, NumberContext(VIRTUAL_TREFOIL, oracle))
    assert [getattr(report, k).value for k in ("tr", "kn", "cl", "vir")] == [2, 2, 2, 2]
    # deleting one chord leaves a single kink, trivial whichever way it is resolved
    assert report.virtr.value == 1 and report.ubtr.value == 1


def test_all_plus_three_chord_shadow(oracle):
    s = parse_gauss("P1+P2+P3+P1+P2+P3+")
    report = characteristic_report(s, NumberContext(s, oracle))
    assert report.tr.value == 2
    assert report.summary()["tr"] == "2"


def test_cl_vir_bounds():
    cl, vir = cl_vir_bounds(VIRTUAL_TREFOIL)
    assert vir.upper == 2 and cl.lower == 2
    cl, vir = cl_vir_bounds(TREFOIL_SHADOW)
    assert cl.lower == 0 and vir.upper is None and vir.lower == 3


def test_cl_vir_exact_consistent(oracle):
    cl, vir = cl_vir_exact_small(VIRTUAL_TREFOIL, NumberContext(VIRTUAL_TREFOIL, oracle))
    cl_b, vir_b = cl_vir_bounds(VIRTUAL_TREFOIL)
    assert cl.value >= cl_b.lower and vir.value <= vir_b.upper


def test_realizable_shadow_is_classical_at_once(oracle):
    cl, vir = cl_vir_exact_small(TREFOIL_SHADOW, NumberContext(TREFOIL_SHADOW, oracle))
    assert cl == Exact(0)
    assert isinstance(vir, Infinite)


def test_facts_on_exact_reports(oracle):
    for text in ("P1+P2+P1+P2+", "P1+P2-P3+P1+P2-P3+", "P1+P2+P3+P1+P2+P3+", "P1+P2+P1+P3+P2+P3+"):
        s = parse_gauss(text)
        r = characteristic_report(s, NumberContext(s, oracle))
        if isinstance(r.cl, Exact) and isinstance(r.tr, Exact):
            assert r.cl.value <= r.tr.value
        if isinstance(r.kn, Exact) and isinstance(r.vir, Exact):
            assert r.kn.value <= r.vir.value
        assert lower_of(r.virtr) <= upper_of(r.tr)


def test_virtual_trivializing_pseudodiagram(oracle):
    # resolving one chord of the virtual trefoil shadow leaves a J = 2 completion,
    # so one chord must still be deleted
    p = resolve_some(VIRTUAL_TREFOIL, {0: 1})
    assert virtual_trivializing_small(p, oracle).value == 1


def test_kishino_never_exact_classicalizing():
    s = golden.load("kishino", "shadow")
    ctx = NumberContext(s, Oracle())
    cl, vir = cl_vir_exact_small(s, ctx)
    assert not isinstance(cl, Exact)
    assert lower_of(cl) == 4


def test_number_helpers():
    assert describe(Exact(3)) == "3"
    assert describe(Bounds(1, None)) == "[1, inf]"
    assert describe(Infinite()) == "inf"
    assert upper_of(Bounds(2, 5)) == 5
    assert lower_of(Infinite()) == float("inf")
    with pytest.raises(ValueError):
        Bounds(3, 2)


def test_witness_labels_in_json():
    s = golden.load("virtual_trefoil", "shadow")
    report = characteristic_report(s)
    assert set(report.tr.to_json(s.labels)["witness"]) <= {1, 2}
    assert all(isinstance(v, dict) for v in report.to_json(s.labels).values())


def test_exact_numbers_are_minimal(oracle):
    # no smaller subset of the trefoil shadow forces the unknot
    for c, w in itertools.product(range(3), (1, -1)):
        assert verify_forcing(TREFOIL_SHADOW, {c: w}, oracle, "unknot") == -1

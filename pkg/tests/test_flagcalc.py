import itertools
from collections import Counter

import numpy as np
import pytest

from flagforge.catalog import entry_names, get_entry
from flagforge.designs import Flag, complement_flags
from flagforge.flagcalc import (ContractError, build_graph, check_feasible,
                                compatible_second_flags, cross_block_components,
                                feasible_orbits, flag_orbits, flag_transporter,
                                materialize, naive_graph, orbit_counts, orbit_flags,
                                pair_classes, prefilter, verify_symmetric)
from flagforge.perm import ActionKind, orbit_partition

FLAGS = ActionKind.ON_FLAGS
PAIRS = ActionKind.ON_FLAG_PAIRS


def small_entries(max_order=2000, max_omega=600):
    out = []
    for name in entry_names():
        e = get_entry(name)
        if e.group.order() > max_order:
            continue
        for orb in feasible_orbits(e):
            if orb.size <= max_omega:
                out.append(name)
                break
    return out


SMALL = small_entries()


def test_small_corpus_is_broad():
    for name in ["AGL1_4", "AGL1_5", "AGL2_2", "F4_C3", "ASL2_3", "AGL2_3", "A5", "S5",
                 "A6", "S6", "PGammaL2_8", "PSL3_2"]:
        assert name in SMALL


# -- flag orbits -----------------------------------------------------------------


def test_flag_orbit_examples():
    orbs = flag_orbits(get_entry("M24"))
    assert [(o.size, o.per_point_count) for o in orbs] == [(6072, 253)]
    orbs = flag_orbits(get_entry("PGammaL3_4"))
    assert [(o.size, o.per_point_count) for o in orbs] == [(336, 16)]
    e = get_entry("AGL3_3")
    feas = feasible_orbits(e)
    assert len(feas) == 1
    # improper space: the co-line is a 2-set
    sigma, L = feas[0].representative
    assert sigma == 0 and len(L) == 2


@pytest.mark.parametrize("name", SMALL + ["A7_15", "PSL3_3", "M11", "A7_PG32"])
def test_flag_orbits_partition_all_flags(name):
    e = get_entry(name)
    orbs = flag_orbits(e)
    allf = complement_flags(e.design)
    seen = []
    for o in orbs:
        flags = orbit_flags(e, o)
        assert o.size == e.design.point_count * o.per_point_count == len(flags)
        seen += flags
    assert sorted(seen) == allf
    if e.group.order() <= 2000:
        label = orbit_partition(e.group, allf, FLAGS)
        assert len(set(label.values())) == len(orbs)
        for o in orbs:
            assert len({label[f] for f in orbit_flags(e, o)}) == 1


def test_feasibility_examples():
    ok, why = check_feasible(get_entry("M22"), flag_orbits(get_entry("M22"))[0])
    assert not ok and why.startswith("(b) fails")
    ok, why = check_feasible(get_entry("A7_15"), flag_orbits(get_entry("A7_15"))[0])
    assert ok and why.startswith("feasible")
    e = get_entry("A7_PG32")
    assert all(not check_feasible(e, o)[0] for o in flag_orbits(e))
    assert feasible_orbits(e) == []


def test_feasibility_matches_brute_force():
    for name in SMALL + ["M22", "PGammaL2_5", "PGammaL2_7", "PSL2_11"]:
        e = get_entry(name)
        if e.group.order() > 2000:
            continue
        els = e.group.elements()
        u = e.design.point_count
        for o in flag_orbits(e):
            s, L = o.representative
            fixers = [g for g in els if FLAGS.apply(o.representative, g) == o.representative]
            rest = {x for x in range(u) if x != s and x not in L}
            reach = {g(min(rest)) for g in fixers} if rest else set()
            want = o.per_point_count >= 2 and bool(rest) and reach == rest
            assert check_feasible(e, o)[0] == want, name


def test_prefilter_examples():
    p = prefilter(get_entry("A7_PG32"))
    assert not p["line_pair_divides"] and not p["complement_pairs_divide"]
    p = prefilter(get_entry("PGammaL2_8"))
    assert p["line_pair_divides"] or p["complement_pairs_divide"]
    p = prefilter(get_entry("S7"))
    assert p["complement_pairs_divide"]


# -- pair classes ------------------------------------------------------------------


def test_class_counts():
    assert len(pair_classes(get_entry("M24"), feasible_orbits(get_entry("M24"))[0])) == 4
    m12 = pair_classes(get_entry("M12"), feasible_orbits(get_entry("M12"))[0])
    assert len(m12) == 5 and all(c.self_paired for c in m12)
    s5 = pair_classes(get_entry("S5"), feasible_orbits(get_entry("S5"))[0])
    overlaps = {len(set(c.rep[0].coblock) & set(c.rep[1].coblock)) for c in s5}
    assert overlaps == {1, 2}


def test_self_paired_counts():
    for name, want in [("M23", 5), ("M11", 6)]:
        e = get_entry(name)
        cls = pair_classes(e, feasible_orbits(e)[0])
        assert sum(c.self_paired for c in cls) == want
        assert len(cls) > want
    for name in ["A5", "A6", "A7", "S7", "A9"]:
        e = get_entry(name)
        assert all(c.self_paired for c in pair_classes(e, feasible_orbits(e)[0]))


def test_non_feasible_orbit_is_rejected():
    e = get_entry("M22")
    with pytest.raises(ContractError):
        pair_classes(e, flag_orbits(e)[0])


def brute_compatible_pairs(e, flags):
    out = []
    for (s, L), (t, N) in itertools.permutations(flags, 2):
        if s != t and s not in L and s not in N and t not in L and t not in N:
            out.append((Flag(s, L), Flag(t, N)))
    return out


@pytest.mark.parametrize("name", [n for n in SMALL if get_entry(n).design.point_count <= 15])
def test_psi_completeness_by_brute_force(name):
    e = get_entry(name)
    for orb in feasible_orbits(e):
        flags = orbit_flags(e, orb)
        C = brute_compatible_pairs(e, flags)
        classes = pair_classes(e, orb)
        assert sum(c.orbit_size for c in classes) == len(C)
        label = orbit_partition(e.group, C, PAIRS)
        sizes = Counter(label.values())
        assert sorted(sizes.values()) == sorted(c.orbit_size for c in classes)
        for c in classes:
            assert sizes[label[c.rep]] == c.orbit_size
            rev = (c.rep[1], c.rep[0])
            assert c.self_paired == (label[rev] == label[c.rep])
            assert c.class_size == (e.design.point_count - len(c.rep[0].coblock) - 1) * c.ell
        assert len({label[c.rep] for c in classes}) == len(classes)


@pytest.mark.parametrize("name", SMALL + ["A7_15", "M11", "M12", "PSL3_4"])
def test_swap_witness(name):
    e = get_entry(name)
    for orb in feasible_orbits(e):
        for c in pair_classes(e, orb):
            if c.self_paired:
                F1, F2 = c.rep
                assert FLAGS.apply(F1, c.witness) == F2
                assert FLAGS.apply(F2, c.witness) == F1
                assert e.group.contains(c.witness)
            else:
                assert c.witness is None


def test_flag_transporter():
    e = get_entry("M12")
    orb = feasible_orbits(e)[0]
    flags = orbit_flags(e, orb)
    for dst in flags[::37]:
        g = flag_transporter(e, orb.representative, dst)
        assert FLAGS.apply(orb.representative, g) == dst


def test_classes_are_sorted_and_deterministic():
    e = get_entry("M11")
    orb = feasible_orbits(e)[0]
    a = pair_classes(e, orb)
    assert [(c.ell, c.rep) for c in a] == sorted((c.ell, c.rep) for c in a)
    b = pair_classes(e, orb, orb.representative)
    assert [(c.ell, c.rep, c.self_paired) for c in a] == [(c.ell, c.rep, c.self_paired) for c in b]


# -- graphs ------------------------------------------------------------------------


def self_paired(e):
    for oi, orb in enumerate(feasible_orbits(e)):
        for i, c in enumerate(pair_classes(e, orb)):
            if c.self_paired:
                yield orb, c, i


@pytest.mark.parametrize("name", SMALL)
def test_naive_equals_optimized(name):
    e = get_entry(name)
    for orb, c, i in self_paired(e):
        graph = materialize(e, orb, c)
        fast = {tuple(x) for x in graph.edges().tolist()}
        assert fast == naive_graph(e, orb, c)
        assert 2 * len(fast) == c.orbit_size


@pytest.mark.parametrize("name", SMALL + ["A7_15", "M11", "M12", "PSL3_4", "PGammaL3_4",
                                          "ASL3_3", "A8", "S8"])
def test_full_build_counts_and_checks(name):
    e = get_entry(name)
    u = e.design.point_count
    for orb, c, i in self_paired(e):
        rep, graph = build_graph(e, orb, c, i, "full")
        lem = orbit_counts(e, orb, c)
        degrees = (graph.adj >= 0).sum(axis=1)
        assert graph.order == rep.order == lem["order"]
        assert set(degrees.tolist()) == {rep.valency} and rep.valency == lem["valency"]
        assert rep.valency == (u - len(c.rep[0].coblock) - 1) * c.ell
        assert rep.edges * 2 == c.orbit_size
        assert rep.checks["passed"], rep.checks
        assert rep.quotient_complete and rep.blocks_independent
        assert not rep.dual_design_repeated_blocks
        assert rep.r * rep.v == rep.k * rep.b


def test_stats_mode_has_no_graph():
    e = get_entry("M12")
    orb = feasible_orbits(e)[0]
    rep, graph = build_graph(e, orb, pair_classes(e, orb)[0], 0, "stats")
    assert graph is None and rep.order == 660 and rep.cross_block_vertex_count == 45
    bad = [c for c in pair_classes(get_entry("M11"), feasible_orbits(get_entry("M11"))[0])
           if not c.self_paired][0]
    with pytest.raises(ContractError):
        build_graph(get_entry("M11"), feasible_orbits(get_entry("M11"))[0], bad)


def test_deleted_edge_breaks_arc_transitivity():
    e = get_entry("AGL1_4")
    orb = feasible_orbits(e)[0]
    c = [c for c in pair_classes(e, orb) if c.self_paired][0]
    graph = materialize(e, orb, c)
    assert verify_symmetric(e, orb, graph, c)["passed"]
    a, b = graph.edges()[0]
    graph.remove_edge(int(a), int(b))
    cert = verify_symmetric(e, orb, graph, c)
    assert not cert["arc_transitive"] and not cert["passed"]


def test_agl14_graph():
    e = get_entry("AGL1_4")
    orb = feasible_orbits(e)[0]
    reps = [build_graph(e, orb, c, i, "full")[0] for orb, c, i in self_paired(e)]
    assert [(r.order, r.valency, r.edges) for r in reps] == [(12, 1, 6)]


def test_a7_on_15_valencies():
    e = get_entry("A7_15")
    reps = [build_graph(e, orb, c, i, "full")[0] for orb, c, i in self_paired(e)]
    assert sorted(r.valency for r in reps) == [12, 12, 24, 24]
    assert all(r.checks["passed"] for r in reps)


def cross_structure(name):
    e = get_entry(name)
    out = []
    for orb, c, i in self_paired(e):
        _, graph = build_graph(e, orb, c, i, "full")
        s = c.rep[0].sigma
        t = c.rep[1].sigma
        out.append(cross_block_components(graph, s, t))
    return out


def test_pgammal28_cross_blocks_are_matchings():
    shapes = cross_structure("PGammaL2_8")
    assert shapes and all(s == [((2, 1), 21)] for s in shapes)


def test_asl23_cross_blocks_are_matchings():
    shapes = cross_structure("ASL2_3")
    assert shapes and all(s == [((2, 1), 3)] for s in shapes)


def test_m12_degree_sequence_by_class():
    e = get_entry("M12")
    orb = feasible_orbits(e)[0]
    vals = sorted(build_graph(e, orb, c, i)[0].valency
                  for i, c in enumerate(pair_classes(e, orb)))
    assert vals == [9, 36, 72, 144, 144]


def test_vertex_order_matches_sorted_flags():
    e = get_entry("PGammaL2_8")
    orb, c, i = next(self_paired(e))
    graph = materialize(e, orb, c)
    assert graph.vertices == sorted(graph.vertices)
    assert np.array_equal(graph.sigma, [f.sigma for f in graph.vertices])

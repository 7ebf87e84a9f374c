import itertools

import pytest
from hypothesis import given, strategies as st

from flagforge.catalog import get_entry
from flagforge.designs import (Flag, IncidenceStructure, LinearSpace, complement_flags,
                               complete_space, extended_domain, extended_group,
                               is_linear_space, line_permutation, preserves_lines,
                               projective_space)
from flagforge.perm import DomainError, GeneratedGroup, Permutation, orbit

FANO_LINES = ((0, 1, 2), (0, 3, 4), (0, 5, 6), (1, 3, 5), (1, 4, 6), (2, 3, 6), (2, 4, 5))


def test_complete_space_counts():
    assert len(complete_space(4).lines) == 6
    assert len(complete_space(24).lines) == 276
    K5 = complete_space(5)
    assert is_linear_space(K5) and not K5.proper
    assert K5.name == "K5"
    with pytest.raises(DomainError):
        complete_space(3)


def test_fano_and_deletion():
    fano = IncidenceStructure(7, FANO_LINES)
    assert is_linear_space(fano)
    assert not is_linear_space(IncidenceStructure(7, FANO_LINES[1:]))
    with pytest.raises(DomainError):
        LinearSpace(7, FANO_LINES[1:])


def test_projective_space_counts():
    pg22 = projective_space(3, 2)
    assert (pg22.point_count, len(pg22.lines), len(pg22.lines[0])) == (7, 7, 3)
    pg24 = projective_space(3, 4)
    assert (pg24.point_count, len(pg24.lines)) == (21, 21)
    assert {len(l) for l in pg24.lines} == {5}
    assert pg24.proper and pg24.name == "PG(2,4)"
    pg32 = projective_space(4, 2)
    assert (pg32.point_count, len(pg32.lines)) == (15, 35)
    with pytest.raises(DomainError):
        projective_space(5, 2)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9])
def test_plane_lines_meet_once(q):
    D = projective_space(3, q)
    assert D.point_count == len(D.lines) == q * q + q + 1
    sets = [set(l) for l in D.lines]
    for a, b in itertools.combinations(sets, 2):
        assert len(a & b) == 1


@pytest.mark.parametrize("u", [4, 5, 9, 13])
def test_complete_space_pairs_covered_once(u):
    D = complete_space(u)
    assert len(D.lines) == u * (u - 1) // 2
    for a, b in itertools.combinations(range(u), 2):
        assert D.line_through(a, b) == (a, b)


def test_complement_flag_counts():
    assert len(complement_flags(complete_space(24))) == 6072
    assert len(complement_flags(complete_space(9))) == 252
    assert len(complement_flags(projective_space(3, 4))) == 336
    flags = complement_flags(complete_space(6))
    assert all(f.sigma not in f.coblock for f in flags)
    assert flags == sorted(flags)


def test_flag_round_trip():
    D = projective_space(3, 3)
    for f in complement_flags(D)[:50]:
        block = tuple(x for x in range(D.point_count) if x not in f.coblock)
        back = tuple(x for x in range(D.point_count) if x not in block)
        assert Flag(f.sigma, back) == f and f.sigma in block


def test_export_parse_round_trip():
    D = projective_space(3, 3)
    text = D.export()
    assert text.startswith("points 13\n")
    back = IncidenceStructure.parse(text)
    assert back.lines == D.lines and back.point_count == 13
    with pytest.raises(DomainError):
        IncidenceStructure.parse("7\n1 2 3\n")


def test_structure_validation():
    with pytest.raises(DomainError):
        IncidenceStructure(4, ((0, 1), (1, 0)))
    with pytest.raises(DomainError):
        IncidenceStructure(4, ((0,),))
    with pytest.raises(DomainError):
        IncidenceStructure(4, ((0, 4),))


def test_line_action_on_k_u_is_the_2_set_action():
    e = get_entry("S6")
    D = e.design
    for g in e.group.generators:
        lp = line_permutation(D, g)
        for i, l in enumerate(D.lines):
            assert D.lines[lp(i)] == tuple(sorted(g(x) for x in l))


def test_extended_domain_and_fano_line_transitivity():
    e = get_entry("PSL3_2")
    D = e.design
    assert D.name == "PG(2,2)"
    dom = extended_domain(D)
    assert len(dom) == 14 and dom[7] == D.lines[0]
    X = extended_group(D, e.group)
    assert X.degree == 14 and X.order() == 168
    assert sorted(orbit(X, 7)) == list(range(7, 14))
    pg = get_entry("PSL3_4")
    assert len(pg.design.lines) == 21


def test_preserves_lines():
    e = get_entry("PSL3_3")
    assert preserves_lines(e.design, e.group)
    fano = projective_space(3, 2)
    swap = Permutation.from_cycles([(0, 1)], 7)
    assert (1, 3, 4) not in fano.line_index
    assert not preserves_lines(fano, GeneratedGroup([swap]))
    with pytest.raises(DomainError):
        line_permutation(fano, swap)


@given(st.integers(4, 12), st.data())
def test_complement_flag_count_formula(u, data):
    D = complete_space(u)
    flags = complement_flags(D)
    assert len(flags) == sum(u - len(l) for l in D.lines)
    f = data.draw(st.sampled_from(flags))
    assert f in flags and f.sigma not in f.coblock

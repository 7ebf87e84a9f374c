import math
import shutil

import pytest

from flagforge.catalog import (CatalogError, all_entries, data_dir, entry_names,
                               get_entry, gl42_group, read_data, read_manifest,
                               read_matrices, search_a7_generators)
from flagforge.designs import complement_flags
from flagforge.field import StandardParameters
from flagforge.perm import (ActionKind, is_k_transitive, orbits_on, pointwise_stabilizer,
                            setwise_stabilizer_2)


def test_every_entry_validates():
    entries = all_entries()
    assert len(entries) >= 20
    for e in entries:
        assert e.group.degree == e.design.point_count
        assert e.group.order() == e.order_oracle
        assert is_k_transitive(e.group, 2)


def test_unknown_entry():
    with pytest.raises(CatalogError):
        get_entry("M13")


def test_mathieu_orders_and_transitivity():
    want = {"M11": (7920, 4), "M12": (95040, 5), "M23": (10200960, 4), "M24": (244823040, 5)}
    for name, (order, k) in want.items():
        e = get_entry(name)
        assert e.group.order() == order
        assert is_k_transitive(e.group, k)
        assert not is_k_transitive(e.group, k + 1)
    assert len(complement_flags(get_entry("M11").design)) == 495


def test_dodecad_groups():
    assert get_entry("M11_12").group.order() == 7920
    assert get_entry("M11_12").degree == 12
    assert get_entry("PSL2_11").group.order() == 660
    assert get_entry("PSL2_11").degree == 11


def test_alternating_and_symmetric():
    assert len(complement_flags(get_entry("A5").design)) == 30
    assert get_entry("S6").group.order() == 720
    assert is_k_transitive(get_entry("A7").group, 5)
    for u in range(5, 13):
        assert get_entry(f"A{u}").group.order() == math.factorial(u) // 2
        assert get_entry(f"S{u}").group.order() == math.factorial(u)


def test_pgammal_2_8():
    e = get_entry("PGammaL2_8")
    G = e.group
    assert G.order() == 1512 == 3 * 504
    assert is_k_transitive(G, 2)
    S = setwise_stabilizer_2(G, (0, 1))
    rest = list(range(2, 9))
    assert orbits_on(S, rest) == [(2, 7)]
    H = pointwise_stabilizer(S, [2])
    assert orbits_on(H, rest[1:]) == [(3, 6)]


def test_projective_planes():
    assert get_entry("PSL3_2").group.order() == 168
    assert get_entry("PSL3_2").degree == 7
    assert get_entry("PGL3_4").group.order() // get_entry("PSL3_4").group.order() == 3
    lam = {n: get_entry(n).info["lambda"] for n in ("PSL3_4", "PGL3_4", "PGammaL3_4")}
    assert lam["PSL3_4"] == StandardParameters(3, 0, 2)
    assert lam["PGL3_4"] == StandardParameters(1, 0, 2)
    assert lam["PGammaL3_4"] == StandardParameters(1, 0, 1)
    for t, e in [(3, 0), (3, 1), (3, 2)]:
        assert get_entry(f"PSL3_4_t3e{e}s1").info["lambda"] == StandardParameters(t, e, 1)


def test_affine_entries():
    want = {"AGL1_5": 20, "F4_C3": 12, "AGL2_2": 24, "AGL1_4": 12, "AGammaL1_4": 24,
            "ASL2_3": 216, "AGL2_3": 432, "ASL3_3": 27 * 5616, "AGL3_3": 27 * 11232,
            "ASp4_3": 81 * 51840, "ASL2_4": 16 * 60}
    for name, order in want.items():
        assert get_entry(name).group.order() == order, name
    assert get_entry("ASL3_3").degree == 27
    G = get_entry("AGL1_5").group
    assert pointwise_stabilizer(G, [0, 1]).order() == 1


def test_a7_on_15():
    e = get_entry("A7_15")
    assert e.group.order() == 2520 and e.degree == 15
    assert is_k_transitive(e.group, 2)
    H = pointwise_stabilizer(e.group, [0, 1])
    lengths = sorted(n for _, n in orbits_on(H, range(2, 15)))
    assert lengths == [1, 12]


def test_a7_on_pg32():
    e = get_entry("A7_PG32")
    assert len(e.design.lines) == 35
    assert e.group.order() == 2520


def test_a7_search_reproduces_frozen_generators():
    frozen = read_matrices(read_data("a7_gl42.txt"), 4)
    assert search_a7_generators(2024) == frozen
    assert gl42_group(frozen).order() == 2520


def test_manifest_rows():
    rows = read_manifest()
    assert list(rows) == entry_names()
    assert rows["M23"].provenance
    assert rows["A5"].transitivity == 3


def test_data_override(tmp_path, monkeypatch):
    for f in data_dir().iterdir():
        shutil.copy(f, tmp_path / f.name)
    (tmp_path / "manifest.txt").write_text(
        'ONLY design=complete:5 source=alternating u=5 order=60 provenance="test"\n')
    monkeypatch.setenv("FLAGFORGE_DATA", str(tmp_path))
    assert data_dir() == tmp_path
    assert entry_names() == ["ONLY"]


def test_bad_manifest(tmp_path, monkeypatch):
    (tmp_path / "manifest.txt").write_text("X design=complete:5 order=60\n")
    monkeypatch.setenv("FLAGFORGE_DATA", str(tmp_path))
    with pytest.raises(CatalogError):
        read_manifest()

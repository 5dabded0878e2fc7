from __future__ import annotations

import math

import numpy as np
import pytest

from hitchmono.gf2 import BitVec2
from hitchmono.monodromy import model
from hitchmono.orbits import (EnumerationRangeError, P2Point, SectionClass, WeightClass,
                              classify, classify_report, component_count, enumerate_orbits,
                              euler_class, label_codes, orbit_report, vertex_lift,
                              weight_class_representative, weight_class_size)


@pytest.fixture(scope="module")
def g3():
    return enumerate_orbits(3)


@pytest.fixture(scope="module")
def g4():
    return enumerate_orbits(4)


def brute_orbits(genus: int) -> list[frozenset[int]]:
    """Orbits by plain Python closure under the P[2] generator matrices."""
    mats = model(genus).p2_generators
    dim = mats[0].nrows
    seen: dict[int, int] = {}
    orbits = []
    for start in range(1 << dim):
        if start in seen:
            continue
        orbit = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for m in mats:
                w = m.apply(v).bits
                if w not in orbit:
                    orbit.add(w)
                    stack.append(w)
        for v in orbit:
            seen[v] = len(orbits)
        orbits.append(frozenset(orbit))
    return orbits


# -- points ----------------------------------------------------------------------------


def test_point_packing():
    p = P2Point(BitVec2.from_str("100001"), BitVec2.from_str("010000"))
    assert p.index() == 0b10_100001
    assert P2Point.from_index(3, p.index()) == p
    assert p.genus == 3
    assert str(p) == "(100001|010000)"


# -- enumeration -----------------------------------------------------------------------


def test_genus_three_count(g3):
    assert g3.orbit_count == len(g3.orbits) == 66
    assert g3.total_points == 4096


def test_genus_three_census(g3):
    sizes = sorted(o.size for o in g3.orbits)
    assert sizes == [1] * 64 + [1792, 2240]
    assert sum(sizes) == 4096
    assert 2 ** 6 * math.comb(8, 2) == 1792
    assert 2 ** 6 * math.comb(8, 4) // 2 == 2240


def test_genus_three_matches_brute_force(g3):
    brute = brute_orbits(3)
    assert sorted(len(o) for o in brute) == sorted(o.size for o in g3.orbits)
    reps = {o.representative.index() for o in g3.orbits}
    assert all(len(reps & o) == 1 for o in brute)


def test_genus_four(g4):
    assert g4.orbit_count == 259
    assert sum(o.size for o in g4.orbits) == 2 ** 18
    for o in g4.orbits:
        if isinstance(o.label, WeightClass):
            assert o.size == weight_class_size(4, o.label.m)


def test_representatives_are_lexicographically_least(g3):
    brute = brute_orbits(3)
    lex = lambda i: tuple(P2Point.from_index(3, i).s_part) + tuple(P2Point.from_index(3, i).x_part)
    least = {min(o, key=lex) for o in brute}
    assert {o.representative.index() for o in g3.orbits} == least


def test_report_is_sorted(g3):
    keys = [tuple(o.representative.s_part) + tuple(o.representative.x_part) for o in g3.orbits]
    assert keys == sorted(keys)


def test_enumeration_range():
    with pytest.raises(EnumerationRangeError, match="classify"):
        enumerate_orbits(6)
    with pytest.raises(EnumerationRangeError):
        enumerate_orbits(2)


# -- classification --------------------------------------------------------------------


def test_section_points_are_fixed(g3):
    for o in g3.orbits:
        if o.representative.x_part.is_zero():
            assert o.size == 1
            assert o.label == SectionClass(o.representative.s_part)


def test_label_is_complete_invariant(g3, g4):
    # enumerate_orbits already checks this; redo it from the packed labels
    for genus, rep in ((3, g3), (4, g4)):
        labels = [o.label for o in rep.orbits]
        assert len(set(labels)) == len(labels)
        pts = np.arange(1 << (6 * genus - 6), dtype=np.uint32)
        codes = label_codes(genus, pts)
        assert len(np.unique(codes)) == rep.orbit_count


def test_scalar_and_vector_labels_agree():
    rng = np.random.default_rng(0)
    pts = rng.integers(0, 1 << 18, size=300, dtype=np.uint32)
    codes = label_codes(4, pts)
    for p, c in zip(pts, codes):
        lab = classify(P2Point.from_index(4, int(p)), 4)
        want = lab.s.bits if isinstance(lab, SectionClass) else 2 ** 8 + lab.m
        assert want == c


@pytest.mark.parametrize("genus", [3, 4, 5, 6, 7])
def test_weight_class_representatives(genus):
    for m in range(1, genus):
        p = weight_class_representative(genus, m)
        assert classify(p, genus) == WeightClass(m)
        assert vertex_lift(p, genus).weight() in (2 * m, 4 * genus - 4 - 2 * m)


def test_self_complementary_class():
    g = 5
    p = weight_class_representative(g, g - 1)
    assert vertex_lift(p, g).weight() == 2 * g - 2
    assert classify(p, g) == WeightClass(g - 1)


# -- Euler classes ---------------------------------------------------------------------


@pytest.mark.parametrize("genus", range(3, 9))
def test_euler_classes(genus):
    assert euler_class(WeightClass(genus - 1), genus) == 0
    assert euler_class(WeightClass(1), genus) == genus - 2
    assert euler_class(SectionClass(BitVec2.zero(2 * genus)), genus) == genus - 1
    for m in range(1, genus):
        assert 0 <= euler_class(WeightClass(m), genus) <= genus - 1


def test_euler_class_out_of_range():
    with pytest.raises(ValueError):
        euler_class(WeightClass(5), 3)


def test_orbit_euler_labels(g4):
    ks = sorted({o.euler_class for o in g4.orbits})
    assert ks == [0, 1, 2, 3]


# -- classify mode ---------------------------------------------------------------------


@pytest.mark.parametrize("genus", [6, 8, 12])
def test_classify_report(genus):
    rep = classify_report(genus)
    assert rep.orbit_count == 2 ** (2 * genus) + genus - 1
    assert sum(c.orbit_count * c.orbit_size for c in rep.classes) == 2 ** (6 * genus - 6)
    assert rep.enumeration == "skipped: state space too large"


def test_classify_agrees_with_enumeration(g4):
    a = classify_report(4)
    assert [(c.kind, c.m, c.orbit_count, c.orbit_size) for c in a.classes] == \
        [(c.kind, c.m, c.orbit_count, c.orbit_size) for c in g4.classes]


def test_orbit_report_modes():
    assert orbit_report(3).mode == "enumerate"
    assert orbit_report(7).mode == "classify"
    with pytest.raises(ValueError):
        orbit_report(3, "guess")


# -- components ------------------------------------------------------------------------


def test_components_genus_three(g3):
    c = component_count(3, g3)
    assert (c.as_complex, c.full_real) == (66, 131)
    assert c.enumerated_orbits == 66
    assert c.decomposition_sum == 131
    assert c.consistent


def test_components_genus_four(g4):
    c = component_count(4, g4)
    assert (c.as_complex, c.full_real) == (259, 517)
    assert c.consistent


def test_components_genus_two():
    c = component_count(2)
    assert (c.as_complex, c.full_real) == (17, 33)
    assert c.enumerated_orbits is None
    assert c.notes


@pytest.mark.parametrize("genus", range(2, 15))
def test_component_formulas_agree(genus):
    c = component_count(genus)
    assert c.decomposition_sum == c.full_real
    # every class except k = 0 appears once for k and once for -k
    assert c.full_real == 2 * c.as_complex - 1
    assert c.as_complex == 2 ** (2 * genus) + genus - 1


def test_component_genus_mismatch(g3):
    with pytest.raises(ValueError):
        component_count(4, g3)

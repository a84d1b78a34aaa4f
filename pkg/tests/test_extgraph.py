import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracle
from raagqie.errors import InvalidInput
from raagqie.extgraph import (abstract_double, adjacent, build_fragment, canonical_vertex, conjugate,
                              copy_edges, copy_vertices, cycle_class, doubling_sequence, edge_count,
                              find_cycles, fragment_from_json, fragment_to_dot, fragment_to_json,
                              support_is_cycle, translate, vertex)
from raagqie.words import GroupElement, Presentation, enumerate_ball, parse_element

C7 = Presentation.cycle(7, letter="t")
E7 = oracle.cycle_edges(7)


def V(text, v, pres=C7):
    return vertex(pres, text, v)


def labels(max_size=5):
    syl = st.tuples(st.integers(0, 6), st.integers(-2, 2).filter(bool))
    return st.lists(syl, max_size=max_size)


def test_canonical_vertex_examples():
    S7 = Presentation.cycle(7)
    assert canonical_vertex(parse_element("s0 s1", S7), 0).label.is_identity()
    assert canonical_vertex(parse_element("s2", S7), 0).label == parse_element("s2", S7)
    C6 = Presentation.cycle(6, letter="t")
    u = V("t5 t1 t4 t5", 3, C6)
    assert u.label == parse_element("t5 t1 t5", C6)


@settings(max_examples=200, deadline=None)
@given(labels(), labels(), st.integers(0, 6))
def test_vertex_identity_matches_conjugates(a, b, v):
    u = canonical_vertex(GroupElement(C7, tuple(a)), v)
    w = canonical_vertex(GroupElement(C7, tuple(b)), v)
    same = oracle.words_equal(oracle.conjugate(a, v), oracle.conjugate(b, v), E7)
    assert (u == w) == same


def test_adjacency_examples():
    assert adjacent(V("", 0), V("", 1))
    assert not adjacent(V("", 0), V("", 2))
    assert adjacent(V("", 1), V("t2", 0))
    with pytest.raises(InvalidInput):
        adjacent(V("", 0), canonical_vertex(GroupElement.identity(Presentation.cycle(5)), 0))


def test_adjacency_against_copy_witnesses():
    frag = build_fragment(C7, 1)
    witnessed = set()
    for g in enumerate_ball(C7, 3):
        witnessed |= copy_edges(g)
    verts = frag.vertices
    for i, u in enumerate(verts):
        for w in verts[i + 1:]:
            assert adjacent(u, w) == (frozenset((u, w)) in witnessed)
            if u.vtx == w.vtx:
                assert not adjacent(u, w)


def test_translation_acts():
    g = parse_element("t3 t5^-1", C7)
    h = parse_element("t0^2 t1", C7)
    u = V("t4", 2)
    assert translate(g, translate(h, u)) == translate(g * h, u)
    assert conjugate(translate(g, u)) == g * conjugate(u) * g.inverse()


def test_fragment_examples():
    base = build_fragment(C7, 0)
    assert len(base.vertices) == 7 and len(base.edges) == 7
    frag = build_fragment(C7, 1, exponent_bound=1)
    assert len(frag.vertices) == 35


def test_fragment_sizes_frozen():
    # frozen from a separate dedup of conjugates over the same copies
    frag = build_fragment(C7, 2)
    assert (len(frag.vertices), len(frag.edges)) == (651, 819)
    conj = set()
    for g in enumerate_ball(C7, 2):
        for j in range(7):
            conj.add(oracle.normal_form(oracle.conjugate(list(g.syllables), j), E7))
    assert len(conj) == 651


def test_fragment_rotation_symmetry():
    frag = build_fragment(C7, 1)
    rot = lambda u: canonical_vertex(GroupElement(C7, tuple(((x + 1) % 7, e) for x, e in u.label.syllables)),
                                     u.vtx + 1)
    assert {rot(u) for u in frag.vertices} == set(frag.vertices)
    assert {frozenset(rot(x) for x in e) for e in frag.edges} == frag.edges


def test_doubling():
    assert len(doubling_sequence(C7, []).vertices) == 7
    d = doubling_sequence(C7, [V("", 2)])
    assert len(d.vertices) == 11
    G = nx.cycle_graph(7)
    assert nx.is_isomorphic(d.to_networkx(), abstract_double(G, 2))
    d2 = doubling_sequence(C7, [V("", 2), V("t2", 5)])
    assert len(d2.vertices) == 2 * 11 - 3
    with pytest.raises(InvalidInput):
        doubling_sequence(C7, [V("t4", 0)])


def test_cycle_class_examples():
    one = GroupElement.identity(C7)
    t2 = parse_element("t2", C7)
    assert edge_count(cycle_class([one])) == 7
    assert edge_count(cycle_class([one, t2])) == 10
    assert edge_count(cycle_class([t2, t2])) == 0
    assert support_is_cycle(cycle_class([one, t2]).support)
    assert not support_is_cycle(cycle_class([one, parse_element("t0 t3", C7)]).support)


def test_find_cycles_examples():
    frag = build_fragment(C7, 1)
    base = copy_vertices(GroupElement.identity(C7))
    res = find_cycles(frag, 7, (base[0], base[1]))
    assert list(base) in res.cycles and not res.truncated
    frag2 = build_fragment(C7, 2)
    assert find_cycles(frag2, 8, (base[0], base[1])).cycles == []
    tens = find_cycles(frag2, 10, (base[0], base[1]), limit=1)
    assert tens.cycles and len(tens.cycles[0]) == 10
    assert find_cycles(frag2, 12, (base[0], base[1]), budget=5).truncated


def test_fragment_json_and_dot():
    frag = build_fragment(C7, 1)
    back = fragment_from_json(fragment_to_json(frag), letter="t")
    assert set(back.vertices) == set(frag.vertices) and back.edges == frag.edges
    dot = fragment_to_dot(frag)
    assert dot.startswith("graph") and dot.count("--") == len(frag.edges)
    with pytest.raises(InvalidInput):
        fragment_from_json({"n": 7})

import json
import random

import pytest

from raagqie import verify as V
from raagqie.blocks import Decomposition
from raagqie.embed import Embedding
from raagqie.errors import UnsupportedVariant
from raagqie.extgraph import build_fragment, canonical_vertex
from raagqie.words import GroupElement, Presentation, distance, iter_geodesic_words

E710 = Embedding.standard(7, 1, 0)
E711 = Embedding.standard(7, 1, 1)
E1022 = Embedding.standard(10, 2, 2)


def brute_lipschitz(emb, radius):
    """Largest step d(F(g), F(gs)) with |gs| = |g| + 1 and |g| < radius, by direct evaluation."""
    S = emb.S
    best = 0
    for w in iter_geodesic_words(S, radius - 1):
        g = GroupElement(S, tuple(w))
        Fg = emb.F(g)
        for x, e in S.letters():
            gs = g * GroupElement.gen(S, x, e)
            if gs.length() > g.length():
                best = max(best, distance(Fg, emb.F(gs)))
    return best


# ---------------------------------------------------------------- samplers

def test_sampler_is_deterministic():
    a = [V.random_element(random.Random(3), E711.S, 20) for _ in range(5)]
    b = [V.random_element(random.Random(3), E711.S, 20) for _ in range(5)]
    assert a == b


def test_sampler_shape():
    rnd = random.Random(0)
    for _ in range(300):
        syls = V._random_list(rnd, E711.S, 30)
        assert sum(abs(e) for _, e in syls) <= 30
        assert all(syls[i][0] != syls[i + 1][0] for i in range(len(syls) - 1))
        assert GroupElement(E711.S, tuple(syls)).length() <= 30
    assert V._random_list(random.Random(0), E711.S, 0) == []


def test_fast_paths_agree_with_the_library():
    rnd = random.Random(9)
    for emb in (E710, E711, E1022):
        for _ in range(100):
            a = V._random_list(rnd, emb.S, 25)
            b = V._random_list(rnd, emb.S, 25)
            ga, gb = GroupElement(emb.S, tuple(a)), GroupElement(emb.S, tuple(b))
            assert GroupElement(emb.T, tuple(V._F_list(emb, a))) == emb.F(ga)
            assert V._list_distance(a, b, emb.S) == distance(ga, gb)
            v = rnd.randrange(emb.d.m)
            assert V._vertex(a, v, emb.S) == canonical_vertex(ga, v)


# --------------------------------------------------------------- Lipschitz

@pytest.mark.parametrize("emb,radius", [(E710, 3), (E711, 3), (E1022, 2)], ids=["7-1-0", "7-1-1", "10-2-2"])
def test_exhaustive_scan_matches_direct_evaluation(emb, radius):
    rep = V.lipschitz_scan(emb, "exhaustive", radius=radius)
    assert rep.max_step == brute_lipschitz(emb, radius)
    assert rep.passed


def test_first_step_has_length_one():
    one = GroupElement.identity(E711.S)
    assert distance(E711.F(one), E711.F(GroupElement.gen(E711.S, 0))) == 1


def test_lipschitz_reports():
    rep = V.lipschitz_scan(E711, samples=2000, seed=1)
    assert rep.bound == 5 and rep.max_step <= 5 and rep.status == V.PASS
    again = V.lipschitz_scan(E711, samples=2000, seed=1)
    assert again.max_step == rep.max_step
    data = rep.to_json()
    assert data["status"] == "pass" and data["seed"] == 1 and data["config"]["m"] == 15
    json.dumps(data)
    with pytest.raises(ValueError):
        V.lipschitz_scan(E711, mode="sideways")


def test_colipschitz_reports():
    rep = V.colipschitz_scan(E710, samples=1000, seed=2)
    assert rep.bound == -2 and rep.min_slack >= -2 and rep.passed
    rep = V.colipschitz_scan(E1022, samples=300, seed=2)
    assert rep.bound == -12 and rep.min_slack >= -12


def test_equal_points_have_zero_slack():
    rnd = random.Random(4)
    for emb in (E710, E711):
        for _ in range(50):
            g = V._random_list(rnd, emb.S, 20)
            assert V._list_distance(V._F_list(emb, g), V._F_list(emb, g), emb.T) == 0


# ---------------------------------------------------------- map properties

def test_well_defined_suite():
    res = V.well_defined_suite(E711, samples=200, seed=0)
    assert res.status == V.PASS and res.details["representatives"] >= 200
    assert json.loads(json.dumps(res.to_json()))["name"] == "well_defined"


def test_homo_suite():
    res = V.homo_suite(E710, pairs=200)
    assert res.passed and res.details["max_distance"] <= 1
    with pytest.raises(UnsupportedVariant):
        V.homo_suite(E711)


def test_lazy_and_prefix_suites():
    assert V.lazy_geodesic_suite(E711, samples=150).passed
    assert V.lazy_geodesic_suite(E710, samples=150).passed
    res = V.prefix_suite(E711, pairs=150)
    assert res.passed and res.details["max_excess"] <= 2


def test_nonhomo_witness():
    res = V.nonhomo_witness(E711)
    assert res.passed and res.details["sign"] == 1
    assert res.details["f(v_2p-2)"] != res.details["f(s_2p+1 . v_2p-2)"]
    assert V.nonhomo_witness(E1022).passed
    with pytest.raises(UnsupportedVariant):
        V.nonhomo_witness(E710)


def test_exotic_suite():
    res = V.exotic_suite(E710, samples=100)
    assert res.passed
    assert res.details["step_types"][0] != res.details["step_types"][1]
    with pytest.raises(UnsupportedVariant):
        V.exotic_suite(E711)


def test_conjugate_type():
    T = E710.T
    g = GroupElement(T, ((2, 1), (0, 3), (2, -1)))
    assert V._conjugate_type(g) == 0
    assert V._conjugate_type(GroupElement(T, ((0, 1), (2, 1)))) is None


# ------------------------------------------------------ finite orders, doubles

def test_graph_product_audit_histogram():
    res = V.graph_product_audit(samples=100)
    hist = res.details["exponent_histogram"]
    assert set(hist) <= {1, 2, 3, 4}
    relaxed = V.graph_product_audit(samples=100, allowed_top=3)
    assert relaxed.passed
    # the strict set misses exactly the exponent 3 coming from glides
    assert all(c["letter"].endswith("^3") for c in res.counterexamples if "letter" in c)


def test_mk_and_power_formula():
    assert V.mk_homo_suite(pairs=100).passed
    res = V.power_formula_suite()
    assert res.passed and res.details["convention"] == "as stated"


def test_double_suite_small():
    res = V.double_suite(radius=3)
    assert res.passed and res.details["source_vertices"] == 11


# ------------------------------------------------------------ homology

def test_single_copies_have_n_edges():
    res = V.h1_bounds_suite(7, max_copies=1, label_radius=1)
    assert res.passed and res.details["sums"] == 15 and res.details["tight"] == 15


def test_two_adjacent_copies_meet_the_bound():
    res = V.h1_bounds_suite(7, max_copies=2, label_radius=1)
    assert res.passed and res.details["tight"] > 15


def test_connected_subsets_are_distinct_and_connected():
    touch = [[1, 2], [0, 3], [0], [1]]
    subs = list(V._connected_subsets(4, touch, 3))
    assert len(subs) == len(set(subs))
    assert set(subs) == {(0, 1, 2), (0, 1, 3)}


# ----------------------------------------------------------- arithmetic

def test_admissible():
    assert V.admissible(7, 7)
    assert V.admissible(7, 10) and V.admissible(7, 13) and V.admissible(7, 15)
    assert not V.admissible(7, 8) and not V.admissible(7, 9) and not V.admissible(7, 11)
    assert not V.admissible(7, 12) and V.admissible(7, 12, require_p=False)
    assert not V.admissible(7, 14) and not V.admissible(7, 14, require_p=False)


def test_cycle_search_examples():
    frag = build_fragment(Presentation.cycle(7, letter="t"), 2)
    cyc, trunc, _ = V.cycle_exists(frag, 7)
    assert len(cyc) == 7 and not trunc
    assert V.cycle_exists(frag, 8)[0] is None
    assert len(V.cycle_exists(frag, 10)[0]) == 10
    cyc, trunc, _ = V.cycle_exists(frag, 11, budget=10)
    assert cyc is None and trunc


def test_arithmetic_statuses():
    res = V.arithmetic_spot_checks(lengths=(7, 8, 10))
    assert res.status == V.PASS
    assert [r["outcome"] for r in res.details["rows"]] == ["found", "absent", "found"]
    res = V.arithmetic_spot_checks(lengths=(9,), budget=10)
    assert res.status == V.INCONCLUSIVE and V.EXIT_CODES[res.status] == 2
    res = V.arithmetic_spot_checks(lengths=(12,), rule="cycle")
    assert res.passed
    with pytest.raises(ValueError):
        V.arithmetic_spot_checks(rule="other")


# ------------------------------------------------------ graph consistency

def test_adjacency_suite_radius_one():
    res = V.adjacency_suite(7, 1)
    assert res.passed and res.details["vertices"] == len(build_fragment(Presentation.cycle(7), 1).vertices)


def test_injectivity_fast_path_matches_f_vertex():
    elements = sorted(V._syllable_elements(E711.S, 2, 1), key=lambda g: (g.length(), g.syllables))
    assert len(elements) > 300
    res = V.injectivity_suite(E711, max_syllables=2, max_exp=1)
    assert res.passed
    rnd = random.Random(1)
    seen = {}
    for g in rnd.sample(elements, 80):
        for i in range(E711.d.m):
            img = E711.f_vertex(g, i)
            src = canonical_vertex(g, i)
            assert seen.setdefault(img, src) == src
    assert res.details["vertices"] >= len({canonical_vertex(g, 0) for g in elements})


def test_decomposition_bound():
    assert V.lipschitz_bound(Decomposition(10, 2, 2)) == 8

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from raagqie.blocks import Decomposition, MarkedBlock
from raagqie.embed import (BASE_STATE, Embedding, EmbeddingConfig, double_homomorphism, is_syllable_reduced,
                           prefix_aligned, roots_reduce)
from raagqie.errors import ContractError, InvalidInput, UnsupportedVariant
from raagqie.extgraph import canonical_vertex, vertex
from raagqie.verify import random_element
from raagqie.words import (GroupElement, Presentation, Word, distance, is_prefix, iter_geodesic_words,
                           lift_hat, parse_element, quotient_image, shuffle_representatives)

E710 = Embedding.standard(7, 1, 0)
E711 = Embedding.standard(7, 1, 1)
E1022 = Embedding.standard(10, 2, 2)
ALL = [E710, E711, E1022]


def s(emb, text):
    return parse_element(text, emb.S)


def t(emb, text):
    return parse_element(text, emb.T)


def elements(emb, max_syllables=4, max_exp=3):
    m = emb.d.m
    syl = st.tuples(st.integers(0, m - 1), st.integers(-max_exp, max_exp).filter(bool))
    return st.lists(syl, max_size=max_syllables).map(lambda w: GroupElement(emb.S, tuple(w)))


# ------------------------------------------------------------ f and F

def test_identity_and_base_marking():
    for emb in ALL:
        one = GroupElement.identity(emb.S)
        assert emb.F(one).is_identity()
        B = emb.f_block(one)
        assert B.key()[:3] == (0, 1, 0) and B.h.is_identity()
        assert emb.f_vertex(one, 0) == vertex(emb.T, "", 0)


def test_powers_of_the_first_generator():
    for a in (1, 2, 3, -1, -4):
        assert E710.F(s(E710, f"s0^{a}")) == t(E710, f"t0^{a}")


@settings(max_examples=60, deadline=None)
@given(elements(E710, 6))
def test_q0_blocks_are_unshifted(g):
    B = E710.f_block(g)
    assert (B.alpha, B.eps, B.kappa) == (0, 1, 0)


@pytest.mark.parametrize("emb", ALL, ids=["7-1-0", "7-1-1", "10-2-2"])
def test_shuffle_invariance(emb):
    rnd = random.Random(5)
    for _ in range(150):
        g = random_element(rnd, emb.S, 12)
        reps, _ = shuffle_representatives(g, 50)
        assert len({emb.F(w) for w in reps}) == 1
        assert len({emb.f_block(w) for w in reps}) == 1


def test_lift_rejects_unreduced_words():
    with pytest.raises(InvalidInput):
        E711.F_lift(Word(E711.S, [(0, 1), (0, 1)]))
    with pytest.raises(InvalidInput):
        E711.F(GroupElement.identity(Presentation.cycle(9)))


def test_type_divergence_q1():
    one = GroupElement.identity(E711.S)
    assert E711.f_vertex(one, 0) == vertex(E711.T, "", 0)
    assert E711.f_vertex(one, 3) == vertex(E711.T, "t2", 6)
    glided = E711.f_vertex(s(E711, "s3"), 0)
    assert glided == vertex(E711.T, "t2 t6^2", 2)
    assert glided.vtx != 0


def test_type_divergence_p2():
    one = GroupElement.identity(E1022.S)
    # frozen evaluation; matches l t_{-2} t_1^2 . w_{-2} with l = t2
    assert E1022.f_vertex(one, 2) == vertex(E1022.T, "t2", 0)
    assert E1022.f_vertex(one, 5) == vertex(E1022.T, "t2 t8", 1)
    assert E1022.f_vertex(s(E1022, "s5"), 2) == vertex(E1022.T, "t2 t8 t1^2", 8)


def test_power_formula_over_order_two():
    emb = Embedding.standard(10, 1, 1)
    assert emb.d.m == 24
    for k in range(1, 6):
        g = GroupElement(emb.S, ((3, 1), (21, 1)) * k)
        want = t(emb, "t2 t9^2 t5" + " t9 t5" * (k - 1))
        assert emb.F(g) == want


def test_f_is_injective_on_small_ball():
    for emb in (E710, E711):
        seen = {}
        for w in iter_geodesic_words(emb.S, 2):
            g = GroupElement(emb.S, tuple(w))
            B = emb.f_block(g)
            for i in range(emb.d.m):
                src = B(i)
                key = canonical_vertex(g, i)
                assert seen.setdefault(src, key) == key


def test_lipschitz_on_a_small_ball():
    for emb in ALL:
        bound = emb.d.p + 2 * emb.d.q + 2
        for w in iter_geodesic_words(emb.S, 2):
            g = GroupElement(emb.S, tuple(w))
            Fg = emb.F(g)
            for x, e in emb.S.letters():
                gs = g * GroupElement.gen(emb.S, x, e)
                assert distance(Fg, emb.F(gs)) <= bound


def test_engine_memo_and_states():
    eng = E711.engine
    syls = s(E711, "s3 s0^2 s7").syllables
    states = eng.states(syls)
    assert states[0] == BASE_STATE and len(states) == len(syls) + 1
    st1 = eng.step(BASE_STATE, 3, 1)
    assert eng.step(BASE_STATE, 3, 1) is st1
    assert st1.move == "glide" and st1.kind == "early"
    with pytest.raises(InvalidInput):
        eng.step(BASE_STATE, 3, 0)


def test_lifted_word_structure():
    g = s(E711, "s3 s0 s5^-2")
    lw = E711.F_lift(g)
    assert lw.element() == E711.F(g)
    blocks = lw.blocks()
    assert len(blocks) == len(g.syllables) + 1
    assert blocks[-1] == E711.f_block(g)
    for c in range(len(lw.steps) + 1):
        assert lw.prefix_element(c) == E711.F(GroupElement(E711.S, g.syllables[:c]))
    data = lw.to_json()
    assert set(data) == {"input", "lifted", "reduced"}
    assert parse_element(data["reduced"], E711.T) == E711.F(g)


# ----------------------------------------------------------- lazy words

def test_lazy_examples():
    emb = E711
    g = s(emb, "s4^2")
    assert emb.lazy_representative(g).syllables == g.syllables
    one = GroupElement.identity(emb.S)
    assert emb.lazy_representative(one).syllables == ()
    assert roots_reduce(emb.F_lazy(one)).syllables == ()


@pytest.mark.parametrize("emb", ALL, ids=["7-1-0", "7-1-1", "10-2-2"])
def test_lazy_words_and_reduction(emb):
    rnd = random.Random(11)
    for _ in range(150):
        g = random_element(rnd, emb.S, 25)
        w = emb.lazy_representative(g)
        assert GroupElement(emb.S, w.syllables) == g
        assert is_syllable_reduced(w.syllables, emb.S)
        assert emb.is_lazy(w)
        red = roots_reduce(emb.F_lazy(g))
        assert red.letter_length() == emb.F(g).length()
        assert GroupElement(emb.T, red.syllables) == emb.F(g)
        if emb.d.q == 0:
            assert emb.F_lazy(g).word().letter_length() == emb.F(g).length()


def test_roots_reduce_needs_a_lazy_lift():
    with pytest.raises(ContractError):
        roots_reduce(E711.F_lift(s(E711, "s1")))


# --------------------------------------------------------------- prefixes

def test_prefix_examples():
    g = s(E711, "s3 s0 s7^2 s1")
    one = GroupElement.identity(E711.S)
    mu, nu = prefix_aligned(E711, g, one)
    assert nu.syllables == () and mu.letter_length() <= E711.F(g).length() + 2
    mu, nu = prefix_aligned(E711, g, g)
    assert nu.letter_length() == E711.F(g).length()
    with pytest.raises(InvalidInput):
        prefix_aligned(E711, g, s(E711, "s5"))


@settings(max_examples=80, deadline=None)
@given(elements(E711, 6), st.data())
def test_prefix_bound(g, data):
    reps, _ = shuffle_representatives(g, 30)
    w = data.draw(st.sampled_from(reps))
    h = GroupElement(E711.S, w.syllables[:data.draw(st.integers(0, len(w)))])
    assert is_prefix(h, g)
    mu, nu = prefix_aligned(E711, g, h)
    assert GroupElement(E711.T, mu.syllables) == E711.F(g)
    assert mu.syllables[:len(nu)] == nu.syllables
    assert nu.letter_length() == E711.F(h).length()
    assert mu.letter_length() <= E711.F(g).length() + 2


# ------------------------------------------------------------ homomorphisms

def test_phi_identity_and_unsupported():
    assert E710.phi(GroupElement.identity(E710.S)).is_identity()
    with pytest.raises(UnsupportedVariant):
        E711.phi(s(E711, "s0"))
    with pytest.raises(UnsupportedVariant):
        E711.phi_hat(s(E711, "s0"))


@settings(max_examples=100, deadline=None)
@given(elements(E710, 5), elements(E710, 5))
def test_phi_is_a_homomorphism_near_F(g, h):
    assert E710.homo_phi(g * h) == E710.phi(g) * E710.phi(h)
    assert distance(E710.F(g), E710.phi(g)) <= 1


def test_exotic_formulas():
    emb = E710
    for k in range(1, 6):
        assert emb.exotic_phi_hat(s(emb, f"s0^{k}")) == t(emb, f"t0^{k}")
        assert emb.phi_hat(s(emb, f"s2^{k}")) == t(emb, f"t2 t0^{k} t2^-1")
        assert emb.phi_hat(s(emb, f"s0 s2^{k}")) == t(emb, f"t0 t2^{k}")


def test_exotic_map_is_not_a_homomorphism():
    emb = E710
    a, b = s(emb, "s0"), s(emb, "s2")
    assert emb.phi_hat(a * b) != emb.phi_hat(a) * emb.phi_hat(b)


# -------------------------------------------------------- double map

def test_double_homomorphism_generators():
    D = double_homomorphism(7, glue=0, n_pow=1)
    assert D.source.k == 11
    T = D.images[0].pres
    assert D.images[0] == GroupElement.gen(T, 0, 2)
    for j in range(1, 7):
        assert D.images[j] == GroupElement.gen(T, j)
    for v in range(7, 11):
        copy, j = D.origin[v]
        assert copy == 2
        assert D.images[v] == GroupElement.gen(T, 0) * GroupElement.gen(T, j) * GroupElement.gen(T, 0, -1)
    assert double_homomorphism(7, 0, 3).images[0] == GroupElement.gen(T, 0, 4)
    with pytest.raises(InvalidInput):
        double_homomorphism(7, 0, 0)


def test_double_homomorphism_is_a_homomorphism_and_undistorted():
    D = double_homomorphism(7)
    S = D.source
    for w in iter_geodesic_words(S, 3):
        g = GroupElement(S, tuple(w))
        assert D(g).length() >= g.length()
    g, h = parse_element("s1 s8 s0^2", S), parse_element("s9^-1 s3", S)
    assert D(g * h) == D(g) * D(h)


# ---------------------------------------------------------- graph products

def test_variant_validation():
    with pytest.raises(UnsupportedVariant):
        EmbeddingConfig(7, 1, 0, variant="nope")
    with pytest.raises(UnsupportedVariant):
        EmbeddingConfig(7, 1, 1, source_orders=3, target_orders=3, variant="graph_product")
    EmbeddingConfig(7, 1, 0, source_orders=3, target_orders=3, variant="graph_product")
    EmbeddingConfig(7, 1, 1, source_orders=3, target_orders=4, variant="graph_product")
    EmbeddingConfig(7, 1, 1, source_orders=None, target_orders=None, variant="graph_product")
    with pytest.raises(UnsupportedVariant):
        EmbeddingConfig(7, 1, 1, source_orders=None, target_orders=5, variant="graph_product")
    with pytest.raises(UnsupportedVariant):
        EmbeddingConfig(7, 1, 0, source_orders=2, target_orders=5, variant="Mk", k=2)
    with pytest.raises(UnsupportedVariant):
        EmbeddingConfig(7, 1, 1, source_orders=2, target_orders=4, variant="Mk", k=2)
    with pytest.raises(UnsupportedVariant):
        EmbeddingConfig(7, 1, 0, source_orders=2, variant="standard")


def test_graph_product_with_infinite_target_is_the_lift():
    emb = Embedding(EmbeddingConfig(7, 1, 1, source_orders=3, target_orders=None, variant="graph_product"))
    std = Embedding.standard(7, 1, 1)
    rnd = random.Random(2)
    for _ in range(100):
        g = random_element(rnd, emb.S_quot, 12)
        assert emb.F(g).syllables == std.F(lift_hat(g)).syllables


def test_graph_product_is_the_quotient_image():
    emb = Embedding(EmbeddingConfig(10, 2, 1, source_orders=3, target_orders=5, variant="graph_product"))
    rnd = random.Random(3)
    for _ in range(100):
        g = random_element(rnd, emb.S_quot, 12)
        assert emb.F_graph_product(g) == quotient_image(emb.F_lift(lift_hat(g)).element(), emb.T_quot)
        lw = emb.F_lazy(g, substitute=True)
        assert all(e > 0 for _, e in lw.syllables())


def test_exponents_of_the_substituted_lift():
    # observed exponents stay in {1, ..., M, N - 1}; M itself does occur (after a glide with a = M - 1)
    emb = Embedding(EmbeddingConfig(10, 2, 1, source_orders=3, target_orders=5, variant="graph_product"))
    rnd = random.Random(4)
    seen = set()
    for _ in range(300):
        g = random_element(rnd, emb.S_quot, 15)
        for _, e in emb.F_lazy(g, substitute=True).syllables():
            seen.add(e)
    assert seen <= {1, 2, 3, 4}
    assert 3 in seen
    audit = [emb.exponent_audit(random_element(rnd, emb.S_quot, 15)) for _ in range(200)]
    assert all(e == 3 for bad in audit for _, e in bad)


def test_mk_homomorphism():
    emb = Embedding(EmbeddingConfig(7, 1, 0, source_orders=2, target_orders=4, variant="Mk", k=2))
    rnd = random.Random(6)
    for _ in range(100):
        g = random_element(rnd, emb.S_quot, 10)
        h = random_element(rnd, emb.S_quot, 10)
        assert emb.F_Mk(g * h) == emb.F_Mk(g) * emb.F_Mk(h)
    assert emb.F_Mk(s(emb, "s0")) == GroupElement.gen(emb.T_quot, 0, 2)
    with pytest.raises(UnsupportedVariant):
        E710.F_Mk(s(E710, "s0"))


def test_marked_block_rejects_bad_input():
    d = Decomposition(7, 1, 0)
    with pytest.raises(InvalidInput):
        MarkedBlock(d, 0, 2, 0)
    with pytest.raises(InvalidInput):
        MarkedBlock(d, 0, 1, 0, parse_element("s0", Presentation.cycle(10)))

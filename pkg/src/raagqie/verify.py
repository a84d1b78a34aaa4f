"""Verification suites with measured constants.

Every suite is deterministic for a fixed seed and returns a report that can be
serialised to JSON.  Failures carry the words needed to replay them from the
command line.
"""

from __future__ import annotations

import random
import time
from dataclasses import asdict, dataclass, field
from typing import Optional

from .blocks import Decomposition, block_shape
from .embed import Embedding, EmbeddingConfig, double_homomorphism, prefix_aligned, roots_reduce
from .errors import UnsupportedVariant
from .extgraph import ExtVertex, adjacent, build_fragment, canonical_vertex, copy_edges, strip_star, support_is_cycle
from .words import (GroupElement, Presentation, canonical_order, distance, enumerate_ball, format_syllables,
                    iter_geodesic_words, list_length, push_syllable, shuffle_representatives)

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"
EXIT_CODES = {PASS: 0, FAIL: 1, INCONCLUSIVE: 2}
DEFAULT_CONFIGS = ((7, 1, 0), (7, 1, 1), (10, 2, 2))


@dataclass
class QiReport:
    config: dict
    mode: str
    samples: int
    bound: int
    max_step: Optional[int] = None
    min_slack: Optional[int] = None
    violations: list = field(default_factory=list)
    seed: Optional[int] = None
    wall: float = 0.0

    @property
    def status(self) -> str:
        return FAIL if self.violations else PASS

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        out = asdict(self)
        out["status"] = self.status
        return out


@dataclass
class SuiteResult:
    name: str
    params: dict
    status: str
    counterexamples: list = field(default_factory=list)
    details: dict = field(default_factory=dict)
    wall: float = 0.0

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_json(self) -> dict:
        return asdict(self)


def _cfg_dict(emb: Embedding) -> dict:
    d = emb.d
    return {"n": d.n, "p": d.p, "q": d.q, "m": d.m, "variant": emb.cfg.variant}


def _s(syls) -> str:
    return format_syllables(syls, "s")


def _t(syls) -> str:
    return format_syllables(syls, "t")


# ----------------------------------------------------------------- sampling

def random_element(rnd: random.Random, pres: Presentation, max_len: int, min_len: int = 0,
                   exponents: Optional[tuple] = None) -> GroupElement:
    """A random element from a word of about ``max_len`` letters.

    The word length is uniform in ``[min_len, max_len]``; each syllable picks a
    generator uniformly among those different from the previous syllable's and
    an exponent of geometric size (ratio 1/2, capped at 4) with a random sign.
    For finite orders the exponent is taken from ``exponents`` or ``1..N-1``.
    """
    syls = _random_list(rnd, pres, max_len, min_len, exponents)
    return GroupElement(pres, canonical_order(syls, pres), _trusted=True)


def random_syllables(rnd: random.Random, pres: Presentation, count: int, max_exp: int = 2) -> GroupElement:
    """An element given by ``count`` syllables with exponents in ``[-max_exp, max_exp]``."""
    syls: list = []
    prev = None
    for _ in range(count):
        g = rnd.randrange(pres.k)
        while g == prev:
            g = rnd.randrange(pres.k)
        e = 0
        while e == 0:
            e = rnd.randint(-max_exp, max_exp)
        syls.append((g, e))
        prev = g
    return GroupElement(pres, tuple(syls))


def _runs(letters) -> list:
    out: list = []
    for g, e in letters:
        if out and out[-1][0] == g:
            out[-1] = (g, out[-1][1] + e)
        else:
            out.append((g, e))
    return out


def _last_gens(syls, pres) -> list:
    out = []
    seen: set = set()
    adj = pres._adj
    for idx in range(len(syls) - 1, -1, -1):
        g = syls[idx][0]
        if g not in seen and seen <= adj[g]:
            out.append(idx)
        seen.add(g)
    return out


def _random_list(rnd: random.Random, pres: Presentation, max_len: int, min_len: int = 0,
                 exponents: Optional[tuple] = None) -> list:
    target = rnd.randint(min_len, max_len)
    syls: list = []
    used = 0
    prev = None
    while used < target:
        g = rnd.randrange(pres.k - 1) if prev is not None else rnd.randrange(pres.k)
        if prev is not None and g >= prev:
            g += 1
        N = pres.orders[g]
        if exponents is not None:
            e = rnd.choice(exponents)
        elif N is not None:
            e = rnd.randint(1, N - 1)
        else:
            size = 1
            while size < 4 and rnd.random() < 0.5:
                size += 1
            size = min(size, target - used)
            e = size if rnd.random() < 0.5 else -size
        push_syllable(syls, g, e, pres)
        used += pres.letter_cost(g, e)
        prev = g
    return syls


def _F_list(emb: Embedding, syls) -> list:
    """F of a syllable-reduced list, as a reduced (not canonically ordered) list."""
    T, eng = emb.T, emb.engine
    out: list = []
    state = (0, 1, 0, 0)
    for g, e in syls:
        st = eng.step(state, g, e)
        for x, y in st.label.syllables:
            push_syllable(out, x, y, T)
        push_syllable(out, st.gen, st.exp, T)
        state = st.state
    return out


def _list_distance(a, b, pres: Presentation) -> int:
    # drop the longest common prefix first: it cancels in a^-1 b
    k = 0
    while k < len(a) and k < len(b) and a[k] == b[k]:
        k += 1
    out: list = []
    for g, e in reversed(a[k:]):
        push_syllable(out, g, -e, pres)
    for g, e in b[k:]:
        push_syllable(out, g, e, pres)
    return list_length(out, pres)


# --------------------------------------------------------------- Lipschitz

def lipschitz_bound(d: Decomposition) -> int:
    return d.p + 2 * d.q + 2


def lipschitz_scan(emb: Embedding, mode: str = "random", radius: int = 4, samples: int = 1000,
                   max_len: int = 40, seed: int = 0) -> QiReport:
    """Maximal ``d(F(g), F(gs))`` over steps with ``|gs| > |g|``."""
    t0 = time.perf_counter()
    bound = lipschitz_bound(emb.d)
    if mode == "exhaustive":
        rep = _lipschitz_exhaustive(emb, radius, bound)
    elif mode == "random":
        rep = _lipschitz_random(emb, samples, max_len, seed, bound)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    rep.wall = time.perf_counter() - t0
    return rep


def _piece_length(st, T) -> int:
    out = list(st.label.syllables)
    push_syllable(out, st.gen, st.exp, T)
    return list_length(out, T)


def _lipschitz_exhaustive(emb: Embedding, radius: int, bound: int) -> QiReport:
    """All steps from elements of length < radius.

    F(gs) is read off the representative of gs that extends a representative of
    g by one letter: either a new final syllable or a longer final syllable.
    The step distance is then the length of the appended piece, respectively
    the change of the final exponent.
    """
    S, T, eng, m = emb.S, emb.T, emb.engine, emb.d.m
    table: dict = {}

    def new_syllable_values(state):
        hit = table.get(state)
        if hit is None:
            vals = []
            for x in range(m):
                v = max(_piece_length(eng.step(state, x, e), T) for e in (1, -1))
                vals.append((v, x))
            vals.sort(reverse=True)
            hit = table[state] = vals[:3]
        return hit

    best = 0
    count = 0
    violations: list = []
    for word in iter_geodesic_words(S, radius - 1):
        syls = _runs(word)
        states = eng.states(syls)
        finals = _last_gens(syls, S)
        final_gens = {syls[i][0] for i in finals}
        # a new syllable on a generator that is not final
        for v, x in new_syllable_values(states[-1]):
            if x not in final_gens:
                if v > best:
                    best = v
                if v > bound:
                    violations.append({"g": _s(syls), "s": f"s{x}^±1", "d": v})
                break
        count += 2 * (m - len(final_gens)) + len(final_gens)
        # lengthen a final syllable
        for idx in finals:
            x, a = syls[idx]
            rest = syls[:idx] + syls[idx + 1:]
            st = eng.states(rest)[-1] if idx != len(syls) - 1 else states[-2]
            e = 1 if a > 0 else -1
            v = abs(eng.step(st, x, a + e).exp - eng.step(st, x, a).exp)
            best = max(best, v)
            if v > bound:
                violations.append({"g": _s(syls), "s": f"s{x}^{e}", "d": v})
    return QiReport(_cfg_dict(emb), f"exhaustive(radius={radius})", count, bound,
                    max_step=best, violations=violations)


def _lipschitz_random(emb: Embedding, samples: int, max_len: int, seed: int, bound: int) -> QiReport:
    S, T = emb.S, emb.T
    rnd = random.Random(seed)
    letters = S.letters()
    best = 0
    violations: list = []
    for _ in range(samples):
        g = _random_list(rnd, S, max_len)
        length = list_length(g, S)
        while True:
            x, e = rnd.choice(letters)
            gs = list(g)
            push_syllable(gs, x, e, S)
            if list_length(gs, S) > length:
                break
        v = _list_distance(_F_list(emb, g), _F_list(emb, gs), T)
        best = max(best, v)
        if v > bound:
            violations.append({"g": _s(g), "s": f"s{x}^{e}", "d": v, "seed": seed})
    return QiReport(_cfg_dict(emb), f"random(samples={samples},max_len={max_len})", samples, bound,
                    max_step=best, violations=violations, seed=seed)


def colipschitz_scan(emb: Embedding, samples: int = 1000, max_len: int = 20, seed: int = 0) -> QiReport:
    """Minimal ``d(F(g1), F(g2)) - d(g1, g2)`` over random pairs."""
    t0 = time.perf_counter()
    d = emb.d
    allowed = -(2 * d.p + 4 * d.q)
    S = emb.S
    rnd = random.Random(seed)
    worst = None
    violations: list = []
    for _ in range(samples):
        g1 = _random_list(rnd, S, max_len)
        # pairs sharing a random prefix exercise the prefix structure
        if rnd.random() < 0.5:
            g2 = list(g1)
            for x, e in _random_list(rnd, S, max_len // 2):
                push_syllable(g2, x, e, S)
        else:
            g2 = _random_list(rnd, S, max_len)
        slack = _list_distance(_F_list(emb, g1), _F_list(emb, g2), emb.T) - _list_distance(g1, g2, S)
        if worst is None or slack < worst:
            worst = slack
        if slack < allowed:
            violations.append({"g1": _s(g1), "g2": _s(g2), "slack": slack, "seed": seed})
    rep = QiReport(_cfg_dict(emb), f"random(samples={samples},max_len={max_len})", samples, allowed,
                   min_slack=worst, violations=violations, seed=seed)
    rep.wall = time.perf_counter() - t0
    return rep


# ----------------------------------------------------------- map properties

def _result(name, params, bad, t0, details=None, status=None) -> SuiteResult:
    if status is None:
        status = FAIL if bad else PASS
    return SuiteResult(name, params, status, bad[:50], details or {}, time.perf_counter() - t0)


def well_defined_suite(emb: Embedding, samples: int = 1000, max_syllables: int = 5, seed: int = 0) -> SuiteResult:
    """All shuffles of a syllable-reduced word give the same F and the same block."""
    t0 = time.perf_counter()
    rnd = random.Random(seed)
    S = emb.S
    bad = []
    reps = 0
    for _ in range(samples):
        g = random_syllables(rnd, S, rnd.randint(1, max_syllables), max_exp=3)
        words, _ = shuffle_representatives(g)
        values = {emb.F(w) for w in words}
        blocks = {emb.f_block(w) for w in words}
        reps += len(words)
        if len(values) > 1 or len(blocks) > 1:
            bad.append({"g": str(g), "images": sorted(str(v) for v in values)})
    return _result("well_defined", {**_cfg_dict(emb), "samples": samples, "seed": seed}, bad, t0,
                   {"representatives": reps})


def homo_suite(emb: Embedding, pairs: int = 1000, max_len: int = 15, seed: int = 0) -> SuiteResult:
    """phi(gh) = phi(g) phi(h) and d(F, phi) <= p, for q = 0."""
    if emb.d.q:
        raise UnsupportedVariant("the homomorphism suite needs q = 0")
    t0 = time.perf_counter()
    rnd = random.Random(seed)
    S = emb.S
    bad = []
    worst = 0
    for _ in range(pairs):
        g = random_element(rnd, S, max_len)
        h = random_element(rnd, S, max_len)
        if emb.phi(g * h) != emb.phi(g) * emb.phi(h):
            bad.append({"g": str(g), "h": str(h), "law": "homomorphism"})
        dist = distance(emb.F(g), emb.phi(g))
        worst = max(worst, dist)
        if dist > emb.d.p:
            bad.append({"g": str(g), "distance": dist})
    return _result("homo", {**_cfg_dict(emb), "pairs": pairs, "seed": seed}, bad, t0,
                   {"max_distance": worst, "bound": emb.d.p})


def lazy_geodesic_suite(emb: Embedding, samples: int = 1000, max_len: int = 30, seed: int = 0) -> SuiteResult:
    """Lazy words are lazy and the reduced lift of a lazy word is geodesic."""
    t0 = time.perf_counter()
    rnd = random.Random(seed)
    S = emb.S
    bad = []
    cancelled = 0
    for _ in range(samples):
        g = random_element(rnd, S, max_len)
        w = emb.lazy_representative(g)
        if GroupElement(S, w.syllables) != g:
            bad.append({"g": str(g), "problem": "lazy word represents another element"})
            continue
        if not emb.is_lazy(w):
            bad.append({"g": str(g), "lazy": str(w), "problem": "not lazy"})
        lw = emb.F_lazy(g)
        Fg = emb.F(g)
        red = roots_reduce(lw)
        if GroupElement(emb.T, red.syllables) != Fg or red.letter_length() != Fg.length():
            bad.append({"g": str(g), "reduced": str(red), "F": str(Fg), "problem": "not geodesic"})
        raw = lw.word().letter_length()
        if raw != Fg.length():
            cancelled += 1
            if emb.d.q == 0:
                bad.append({"g": str(g), "problem": "q = 0 lift is not syllable-reduced"})
    return _result("lazy_geodesic", {**_cfg_dict(emb), "samples": samples, "seed": seed}, bad, t0,
                   {"lifts_needing_cancellation": cancelled})


def prefix_suite(emb: Embedding, pairs: int = 1000, max_len: int = 20, seed: int = 0) -> SuiteResult:
    """Aligned representatives of F(g) with a minimal prefix for F(h)."""
    t0 = time.perf_counter()
    rnd = random.Random(seed)
    S, T = emb.S, emb.T
    bad = []
    excess = 0
    for _ in range(pairs):
        g = random_element(rnd, S, max_len)
        words, _ = shuffle_representatives(g, 200)
        w = rnd.choice(words)
        c = rnd.randint(0, len(w))
        h = GroupElement(S, w.syllables[:c])
        mu, nu = prefix_aligned(emb, g, h)
        Fg, Fh = emb.F(g), emb.F(h)
        ok = (GroupElement(T, mu.syllables) == Fg and GroupElement(T, nu.syllables) == Fh
              and mu.syllables[:len(nu)] == nu.syllables
              and nu.letter_length() == Fh.length()
              and mu.letter_length() <= Fg.length() + 2)
        if ok and mu.letter_length() > Fg.length():
            x = nu.syllables[-1]
            y = mu.syllables[len(nu)]
            ok = x[0] == y[0] and x[1] == -y[1]
        excess = max(excess, mu.letter_length() - Fg.length())
        if not ok:
            bad.append({"g": str(g), "h": str(h), "mu": _t(mu.syllables), "nu": _t(nu.syllables)})
    return _result("prefix", {**_cfg_dict(emb), "pairs": pairs, "seed": seed}, bad, t0,
                   {"max_excess": excess})


def nonhomo_witness(emb: Embedding) -> SuiteResult:
    """The glide at the first early shortcut changes the type of f(v_{2p-2})."""
    d = emb.d
    if d.q == 0:
        raise UnsupportedVariant("the witness needs a shortcut (q > 0)")
    t0 = time.perf_counter()
    S, T = emb.S, emb.T
    p, n = d.p, d.n
    one = GroupElement.identity(S)
    a = emb.f_vertex(one, 2 * p - 2)
    b = emb.f_vertex(one, 2 * p + 1)
    c = emb.f_vertex(GroupElement.gen(S, 2 * p + 1), 2 * p - 2)
    ell = a.label
    bad = []
    pm = None
    for sgn in (1, -1):
        guess = ell * GroupElement.gen(T, 2 * sgn)
        if b.vtx == (-sgn) % n and b.label == _vertex_label(guess, b.vtx):
            pm = sgn
    if a.vtx != 0:
        bad.append({"problem": "f(v_{2p-2}) is not of type w0", "vertex": str(a)})
    if pm is None:
        bad.append({"problem": "f(v_{2p+1}) is not l t_{+-2} . w_{-+1}", "vertex": str(b)})
    else:
        want = ell * GroupElement.gen(T, 2 * pm) * GroupElement.gen(T, -pm, 2)
        if c.vtx != (2 * pm) % n or c.label != _vertex_label(want, c.vtx):
            bad.append({"problem": "glide image differs from l t_{+-2} t_{-+1}^2 . w_{+-2}",
                        "vertex": str(c)})
    if emb.f_block(one).shortcut_kind(b) is None:
        bad.append({"problem": "f(v_{2p+1}) is not a shortcut"})
    if c.vtx == a.vtx:
        bad.append({"problem": "types agree"})
    return _result("nonhomo_witness", _cfg_dict(emb), bad, t0,
                   {"f(v_2p-2)": a.name("t"), "f(v_2p+1)": b.name("t"),
                    "f(s_2p+1 . v_2p-2)": c.name("t"), "sign": pm})


def _vertex_label(g, v):
    return canonical_vertex(g, v).label


def exotic_suite(emb: Embedding, max_power: int = 5, samples: int = 300, max_len: int = 12,
                 seed: int = 0) -> SuiteResult:
    """The two image formulas of the exotic map, type divergence, and QI bounds."""
    if emb.d.q:
        raise UnsupportedVariant("the exotic map needs q = 0")
    t0 = time.perf_counter()
    S, T = emb.S, emb.T
    bad = []
    t = lambda j, e=1: GroupElement.gen(T, j, e)
    s = lambda i, e=1: GroupElement.gen(S, i, e)
    for k in range(1, max_power + 1):
        checks = [
            (s(0, k), t(0, k), "phi_hat(s0^k) = t0^k"),
            (s(2, k), t(2) * t(0, k) * t(2, -1), "phi_hat(s2^k) = t2 t0^k t2^-1"),
            (s(0) * s(2, k), t(0) * t(2, k), "phi_hat(s0 s2^k) = t0 t2^k"),
        ]
        for g, want, label in checks:
            got = emb.phi_hat(g)
            if got != want:
                bad.append({"formula": label, "k": k, "got": str(got)})
    # along the standard geodesic g<s2>, the image steps have type 0 for g = 1 and type 2 for g = s0
    step1 = emb.phi_hat(s(2, 1))
    step2 = emb.phi_hat(s(0)).inverse() * emb.phi_hat(s(0) * s(2))
    types = (_conjugate_type(step1), _conjugate_type(step2))
    if types[0] == types[1]:
        bad.append({"problem": "no type divergence", "types": types})
    # QI bounds: (K, A) measured on phi_1 and phi_2, checked for phi_hat with (K, 2A)
    rnd = random.Random(seed)
    pairs = [(random_element(rnd, S, max_len), random_element(rnd, S, max_len)) for _ in range(samples)]
    K = max(max(emb.phi1(s(i)).length(), emb.phi2(s(i)).length()) for i in range(S.k))
    A = 0.0
    for g, h in pairs:
        dg = distance(g, h)
        for phi in (emb.phi1, emb.phi2):
            A = max(A, dg / K - distance(phi(g), phi(h)))
    for g, h in pairs:
        dg = distance(g, h)
        dh = distance(emb.phi_hat(g), emb.phi_hat(h))
        if not (dg / K - 2 * A <= dh <= K * dg + 2 * A):
            bad.append({"g": str(g), "h": str(h), "d": dg, "d_hat": dh})
    return _result("exotic", {**_cfg_dict(emb), "max_power": max_power, "seed": seed}, bad, t0,
                   {"K": K, "A": A, "step_types": types})


def _conjugate_type(g: GroupElement) -> Optional[int]:
    """j when g is a conjugate x t_j^e x^-1, else None."""
    syls = g.syllables
    n = len(syls)
    if n % 2 == 0:
        return None
    mid = n // 2
    left = GroupElement(g.pres, syls[:mid])
    right = GroupElement(g.pres, syls[mid + 1:])
    if (left * right).is_identity():
        return syls[mid][0]
    return None


# ------------------------------------------------------------- graph products

def graph_product_audit(n: int = 10, p: int = 2, q: int = 1, M: int = 3, N: int = 5,
                        samples: int = 1000, max_len: int = 15, seed: int = 0,
                        allowed_top: Optional[int] = None) -> SuiteResult:
    """Exponents of F'(lazy(g-hat)) lie in {1..M+ - 1, N_w - 1}.

    ``allowed_top`` replaces M+ - 1 by another upper end, to measure what the
    lifted words actually use.
    """
    t0 = time.perf_counter()
    emb = Embedding(EmbeddingConfig(n, p, q, source_orders=M, target_orders=N, variant="graph_product"))
    top = M - 1 if allowed_top is None else allowed_top
    rnd = random.Random(seed)
    bad = []
    seen: dict = {}
    for _ in range(samples):
        g = random_element(rnd, emb.S_quot, max_len)
        lw = emb.F_lazy(g, substitute=True)
        for x, e in lw.syllables():
            seen[e] = seen.get(e, 0) + 1
            if not (1 <= e <= top or e == N - 1):
                bad.append({"g": str(g), "letter": f"t{x}^{e}"})
                break
        # the element is the quotient image of the plain lift
        if GroupElement(emb.T_quot, tuple(lw.syllables())) != GroupElement(emb.T_quot, emb.F(g).syllables):
            bad.append({"g": str(g), "problem": "substitution changed the quotient image"})
    params = {"n": n, "p": p, "q": q, "M": M, "N": N, "samples": samples, "seed": seed,
              "allowed": f"1..{top}, {N - 1}"}
    return _result("graph_product_audit", params, bad, t0,
                   {"exponent_histogram": dict(sorted(seen.items()))})


def mk_homo_suite(n: int = 7, p: int = 1, M: int = 2, k: int = 2, pairs: int = 1000,
                  max_len: int = 12, seed: int = 0) -> SuiteResult:
    t0 = time.perf_counter()
    emb = Embedding(EmbeddingConfig(n, p, 0, source_orders=M, target_orders=k * M, variant="Mk", k=k))
    rnd = random.Random(seed)
    bad = []
    for _ in range(pairs):
        g = random_element(rnd, emb.S_quot, max_len)
        h = random_element(rnd, emb.S_quot, max_len)
        if emb.phi(g * h) != emb.phi(g) * emb.phi(h):
            bad.append({"g": str(g), "h": str(h)})
    return _result("mk_homo", {"n": n, "p": p, "M": M, "k": k, "pairs": pairs, "seed": seed}, bad, t0)


def power_formula_suite(n: int = 10, p: int = 1, q: int = 1, kmax: int = 5) -> SuiteResult:
    """F(g-hat^k) for g = s3 s_-3 over order-2 generators."""
    t0 = time.perf_counter()
    emb = Embedding(EmbeddingConfig(n, p, q))
    m = emb.d.m
    T = emb.T
    bad = []
    matched = None
    for refl in (1, -1):
        ok = True
        for k in range(1, kmax + 1):
            g = GroupElement(emb.S, ((3, 1), ((-3) % m, 1)) * k)
            want = [(2, 1), (-1, 2), (5, 1)] + [(-1, 1), (5, 1)] * (k - 1)
            want = GroupElement(T, tuple(((refl * x) % n, e) for x, e in want))
            if emb.F(g) != want:
                ok = False
        if ok:
            matched = "as stated" if refl == 1 else "reflected"
            break
    if matched is None:
        for k in range(1, kmax + 1):
            g = GroupElement(emb.S, ((3, 1), ((-3) % m, 1)) * k)
            bad.append({"k": k, "F": str(emb.F(g))})
    return _result("power_formula", {"n": n, "m": m, "p": p, "q": q, "kmax": kmax}, bad, t0,
                   {"convention": matched})


# ----------------------------------------------------------------- doubles

def double_suite(n: int = 7, radius: int = 5, n_pow: int = 1) -> SuiteResult:
    """|F(g)| >= |g| on a ball of the double of C_n along a vertex."""
    t0 = time.perf_counter()
    D = double_homomorphism(n, 0, n_pow)
    S = D.source
    T = D.images[0].pres
    imgs = {}
    for v in range(S.k):
        for e in (1, -1):
            imgs[(v, e)] = (D.images[v] ** e).syllables
    bad = []
    count = 0
    # walk the lex-least geodesic tree, carrying the reduced image
    images = [[]]
    for word in iter_geodesic_words(S, radius):
        depth = len(word)
        del images[max(depth, 1):]
        if depth:
            out = list(images[depth - 1])
            for x, y in imgs[word[-1]]:
                push_syllable(out, x, y, T)
            images.append(out)
        count += 1
        L = list_length(images[depth], T)
        if L < depth:
            bad.append({"g": _s(_runs(word)), "image_length": L})
    return _result("double", {"n": n, "radius": radius, "n_pow": n_pow}, bad, t0,
                   {"elements": count, "source_vertices": S.k})


# -------------------------------------------------------------- homology

def h1_bounds_suite(n: int = 7, max_copies: int = 3, label_radius: int = 2) -> SuiteResult:
    """Edge counts of Z/2 sums of k + 1 copies g.C_n with labels in a ball.

    Checks M >= n + k(n-4), M = (k+1)n mod 2, and M <= n + k(n-2) whenever the
    support is a single embedded cycle.
    """
    t0 = time.perf_counter()
    T = Presentation.cycle(n, letter="t")
    labels = sorted(enumerate_ball(T, label_radius), key=lambda g: (g.length(), g.syllables))
    edges = [frozenset(copy_edges(g)) for g in labels]
    verts = [frozenset(v for e in es for v in e) for es in edges]
    N = len(labels)
    touch = [[j for j in range(N) if j != i and verts[i] & verts[j]] for i in range(N)]
    bad = []
    counted = 0
    cycles = 0
    tight = 0
    for size in range(1, max_copies + 1):
        k = size - 1
        lower = n + k * (n - 4)
        upper = n + k * (n - 2)
        for combo in _connected_subsets(N, touch, size):
            counted += 1
            supp = set()
            for i in combo:
                supp ^= edges[i]
            M = len(supp)
            if M < lower or (M - size * n) % 2:
                bad.append({"copies": [_t(labels[i].syllables) for i in combo], "M": M, "bound": lower})
            if M == lower:
                tight += 1
            if supp and support_is_cycle(supp):
                cycles += 1
                if M > upper:
                    bad.append({"copies": [_t(labels[i].syllables) for i in combo], "M": M,
                                "upper": upper, "problem": "cycle support above the upper bound"})
    return _result("h1_bounds", {"n": n, "max_copies": max_copies, "label_radius": label_radius}, bad, t0,
                   {"sums": counted, "cycle_supports": cycles, "tight": tight, "copies": N})


def _connected_subsets(N, touch, size):
    """Subsets of the given size that are connected in the 'shares a vertex' graph, each once."""
    if size == 1:
        for i in range(N):
            yield (i,)
        return
    # grow from the smallest index, only adding larger indices adjacent to the set
    def grow(current, frontier):
        if len(current) == size:
            yield tuple(sorted(current))
            return
        frontier = sorted(frontier)
        for idx, j in enumerate(frontier):
            rest = set(frontier[idx + 1:])
            new = {x for x in touch[j] if x > current[0] and x not in current and x not in frontier}
            yield from grow(current + [j], rest | new)
    for i in range(N):
        yield from grow([i], {j for j in touch[i] if j > i})


# ------------------------------------------------------- cycle arithmetic

def admissible(n: int, m: int, require_p: bool = True) -> bool:
    """m = n, or m = n + p(n-4) + q(n-2) with q >= 0 and p >= 1 (p >= 0 if not require_p)."""
    if m == n:
        return True
    for p in range(0 if not require_p else 1, m // max(n - 4, 1) + 1):
        rest = m - n - p * (n - 4)
        if rest >= 0 and rest % (n - 2) == 0:
            if p == 0 and rest == 0:
                continue
            return True
    return False


def cycle_exists(frag, length: int, budget: int = 5_000_000) -> tuple:
    """Search every anchor edge, deleting each after it is exhausted.

    Returns ``(cycle or None, truncated, nodes)``.
    """
    nb = {u: set(frag.neighbors(u)) for u in frag.vertices}
    nodes = 0
    for i, j in frag.edge_list():
        u, v = frag.vertices[i], frag.vertices[j]
        dist = {u: 0}
        queue = [u]
        for x in queue:
            if dist[x] >= length:
                break
            for y in nb[x]:
                if y not in dist:
                    dist[y] = dist[x] + 1
                    queue.append(y)
        path = [u, v]
        on = {u, v}
        stack = [iter(sorted(nb[v]))]
        while stack:
            nodes += 1
            if nodes > budget:
                return None, True, nodes
            x = path[-1]
            rem = length - len(path)
            if rem == 0:
                if u in nb[x]:
                    return list(path), False, nodes
                stack.pop()
                on.discard(path.pop())
                continue
            advanced = False
            for y in stack[-1]:
                if y in on or dist.get(y, length + 1) > rem:
                    continue
                path.append(y)
                on.add(y)
                stack.append(iter(sorted(nb[y])))
                advanced = True
                break
            if not advanced:
                stack.pop()
                on.discard(path.pop())
        nb[u].discard(v)
        nb[v].discard(u)
    return None, False, nodes


def arithmetic_spot_checks(n: int = 7, fragment_radius: int = 2, lengths=(7, 8, 9, 10, 11, 12, 13, 14, 15),
                           rule: str = "qie", budget: int = 5_000_000) -> SuiteResult:
    """Embedded cycles of each length in a fragment against the length arithmetic.

    ``rule='qie'`` expects cycles exactly for m = n or m = n + p(n-4) + q(n-2)
    with p >= 1; ``rule='cycle'`` allows p = 0 as well.
    """
    if rule not in ("qie", "cycle"):
        raise ValueError("rule must be 'qie' or 'cycle'")
    t0 = time.perf_counter()
    T = Presentation.cycle(n, letter="t")
    frag = build_fragment(T, fragment_radius)
    rows = []
    bad = []
    inconclusive = False
    for L in lengths:
        expected = admissible(n, L, require_p=(rule == "qie"))
        cyc, truncated, nodes = cycle_exists(frag, L, budget)
        found = cyc is not None
        if found:
            outcome = "found"
        elif truncated:
            outcome = "inconclusive"
        else:
            outcome = "absent"
        row = {"m": L, "expected": "present" if expected else "absent", "outcome": outcome, "nodes": nodes}
        if found:
            row["witness"] = [u.name("t") for u in cyc]
        rows.append(row)
        if outcome == "inconclusive":
            inconclusive = True
        elif found != expected:
            bad.append(row)
    status = FAIL if bad else (INCONCLUSIVE if inconclusive else PASS)
    return _result("arithmetic", {"n": n, "fragment_radius": fragment_radius, "rule": rule,
                                  "lengths": list(lengths)}, bad, t0,
                   {"rows": rows, "fragment_vertices": len(frag.vertices)}, status=status)


# ------------------------------------------------------ graph consistency

def adjacency_suite(n: int = 7, radius: int = 2, witness_radius: Optional[int] = None) -> SuiteResult:
    """Commutator adjacency against copy witnesses on a fragment.

    Every pair of fragment vertices is tested: ``adjacent`` must hold exactly
    when some copy g.C_n with |g| <= witness_radius (default radius + 2)
    contains the pair as an edge.  Vertices of equal type are never adjacent.
    """
    t0 = time.perf_counter()
    T = Presentation.cycle(n, letter="t")
    frag = build_fragment(T, radius)
    wr = radius + 2 if witness_radius is None else witness_radius
    inside = set(frag.vertices)
    witnessed: set = set()
    for g in enumerate_ball(T, wr):
        for e in copy_edges(g):
            if e <= inside:
                witnessed.add(e)
    bad = []
    verts = frag.vertices
    adjacent_pairs = 0
    for i, u in enumerate(verts):
        for w in verts[i + 1:]:
            adj = adjacent(u, w)
            adjacent_pairs += adj
            if adj != (frozenset((u, w)) in witnessed):
                bad.append({"u": u.name("t"), "w": w.name("t"), "commutator": adj})
            if adj and u.vtx == w.vtx:
                bad.append({"u": u.name("t"), "w": w.name("t"), "problem": "equal types adjacent"})
    return _result("adjacency", {"n": n, "radius": radius, "witness_radius": wr}, bad, t0,
                   {"vertices": len(verts), "adjacent_pairs": adjacent_pairs, "witnessed": len(witnessed)})


def _syllable_elements(pres: Presentation, max_syllables: int, max_exp: int):
    exps = [e for e in range(-max_exp, max_exp + 1) if e]
    seen = set()
    frontier = [GroupElement.identity(pres)]
    seen.add(frontier[0])
    for _ in range(max_syllables):
        nxt = []
        for g in frontier:
            for v in range(pres.k):
                for e in exps:
                    h = g * GroupElement.gen(pres, v, e)
                    if h not in seen:
                        seen.add(h)
                        nxt.append(h)
        frontier = nxt
    return seen


def _vertex(syls, v: int, pres: Presentation) -> ExtVertex:
    rest = strip_star(syls, v, pres)
    return ExtVertex(GroupElement(pres, canonical_order(rest, pres), _trusted=True), v)


def injectivity_suite(emb: Embedding, max_syllables: int = 3, max_exp: int = 2) -> SuiteResult:
    """f is well defined and injective on the vertices g.v_i, g of few syllables."""
    t0 = time.perf_counter()
    S = emb.S
    m = emb.d.m
    images: dict = {}
    bad = []
    elements = _syllable_elements(S, max_syllables, max_exp)
    T, eng, d = emb.T, emb.engine, emb.d
    for g in sorted(elements, key=lambda x: (x.length(), x.syllables)):
        # f(g.v_i) = h . B(state)(v_i); h is the product of the base changes
        h: list = []
        state = (0, 1, 0, 0)
        for x, e in g.syllables:
            st = eng.step(state, x, e)
            for y, f in st.dh.syllables:
                push_syllable(h, y, f, T)
            state = st.state
        shape = block_shape(d, state[1], state[2])
        for i in range(m):
            src = _vertex(g.syllables, i, S)
            u = shape.boundary[(i + state[0]) % m]
            lab = list(h)
            for y, f in u.label.syllables:
                push_syllable(lab, y, f, T)
            img = _vertex(lab, u.vtx, T)
            prev = images.get(img)
            if prev is None:
                images[img] = src
            elif prev != src:
                bad.append({"u": src.name("s"), "w": prev.name("s"), "image": img.name("t")})
    # the same source vertex reached from different labels must agree
    first: dict = {}
    for img, src in images.items():
        if src in first and first[src] != img:
            bad.append({"u": src.name("s"), "images": [img.name("t"), first[src].name("t")]})
        first.setdefault(src, img)
    return _result("injectivity", {**_cfg_dict(emb), "max_syllables": max_syllables, "max_exp": max_exp},
                   bad, t0, {"elements": len(elements), "vertices": len(first)})

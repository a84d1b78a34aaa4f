"""The block map f, the route map F and its variants.

Blocks are tracked relative to their base: a state ``(alpha, eps, kappa, k0)``
records the marking of the current block ``B(alpha, eps, kappa; h)`` and the
index ``k0`` of the copy ``F(gamma) . Lambda`` inside it.  Translating by
``h`` does not change any of the choices made by doubling, gliding or the
route map, so one transition table (keyed on the state, the generator and the
exponent) serves every element.  Transitions are computed from the block
definitions on first use and memoised.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .blocks import Decomposition, MarkedBlock, hat
from .errors import ContractError, InvalidInput, UnsupportedVariant
from .extgraph import ExtVertex
from .words import (GroupElement, Presentation, Word, canonical_order, format_syllables, is_prefix,
                    lift_hat, push_syllable, quotient_image)

BASE_STATE = (0, 1, 0, 0)
VARIANTS = ("standard", "graph_product", "Mk", "exotic_q0")


@dataclass(frozen=True)
class Step:
    """One application of doubling or gliding, relative to the old block's base."""
    state: tuple          # state after the step
    move: str             # "doub" or "glide"
    target: ExtVertex     # f(gamma'.v_i), relative to the old base h
    label: GroupElement   # minimal relative label l
    gen: int              # type j of the target
    exp: int              # exponent b of t_j in F
    dh: GroupElement      # h^-1 h' for the new block
    kind: Optional[str]   # "early", "late" or None


class Engine:
    """Memoised transition table for one decomposition.

    ``multiplier`` is the doubling power k of the undistorted variant (k = 1
    for the standard map); it is only allowed when there are no shortcuts.
    """

    def __init__(self, d: Decomposition, multiplier: int = 1):
        if multiplier < 1:
            raise InvalidInput("doubling multiplier must be positive")
        if multiplier != 1 and d.q:
            raise UnsupportedVariant("the multiplied doubling needs q = 0")
        self.d = d
        self.T = d.target()
        self.k = multiplier
        self.table: dict = {}

    def step(self, state: tuple, i: int, a: int) -> Step:
        key = (state, i, a)
        hit = self.table.get(key)
        if hit is None:
            hit = self.table[key] = self._compute(state, i, a)
        return hit

    def _compute(self, state, i, a) -> Step:
        if a == 0:
            raise InvalidInput("syllable exponent must be nonzero")
        alpha, eps, kappa, k0 = state
        B = MarkedBlock(self.d, alpha, eps, kappa)
        shape = B.shape
        u = B(i)
        ell = shape.min_label(k0, u)
        kind = shape.shortcut_of.get(u)
        if kind is None:
            b = self.k * a
            new = B.doub(u, b)
            move = "doub"
        else:
            new = B.glide(u, a)
            b = hat(a) if k0 <= shape.depth[u] else hat(a) - 1
            move = "glide"
            kind = kind[0]
        target = shape.labels[k0] * ell * GroupElement.gen(self.T, u.vtx, b)
        k1 = new.copy_index(target)
        if k1 is None:
            raise ContractError(f"F-image is not a copy of the new block at {state}, v{i}^{a}")
        return Step((new.alpha, new.eps, new.kappa, k1), move, u, ell, u.vtx, b, new.h, kind)

    def run(self, syllables: Sequence, state: tuple = BASE_STATE) -> list:
        out = []
        for g, e in syllables:
            st = self.step(state, g % self.d.m, e)
            out.append(st)
            state = st.state
        return out

    def states(self, syllables: Sequence) -> list:
        """States before each syllable, followed by the final state."""
        state = BASE_STATE
        out = [state]
        for g, e in syllables:
            state = self.step(state, g % self.d.m, e).state
            out.append(state)
        return out


def _substitute(ell: GroupElement, orders) -> list:
    """Replace each ``t^-1`` letter of a label by ``t^(N-1)`` where N is finite."""
    out = []
    for g, e in ell.syllables:
        N = orders[g]
        if N is not None and e < 0:
            out.append((g, -e * (N - 1)))
        else:
            out.append((g, e))
    return out


@dataclass
class LiftedWord:
    """The word ``l_1 t_1^b_1 ... l_d t_d^b_d`` with its provenance."""
    embedding: "Embedding"
    source: tuple                 # syllables of the representative gamma
    steps: list                   # one Step per source syllable
    lazy: bool = False
    substitute: bool = False      # labels rewritten with t^(N-1) for finite orders

    @property
    def pieces(self) -> list:
        return [(s.label, s.gen, s.exp) for s in self.steps]

    def label_syllables(self, c: int) -> list:
        ell = self.steps[c].label
        if self.substitute:
            return _substitute(ell, self.embedding.T_orders)
        return list(ell.syllables)

    def syllables(self) -> list:
        out = []
        for c, s in enumerate(self.steps):
            out.extend(self.label_syllables(c))
            out.append((s.gen, s.exp))
        return out

    def word(self) -> Word:
        return Word(self.embedding.T, self.syllables())

    def element(self) -> GroupElement:
        return GroupElement(self.embedding.T, tuple(self.syllables()))

    def prefix_element(self, c: int) -> GroupElement:
        """F of the first c syllables."""
        T = self.embedding.T
        out = []
        for s in self.steps[:c]:
            for g, e in s.label.syllables:
                push_syllable(out, g, e, T)
            push_syllable(out, s.gen, s.exp, T)
        return GroupElement(T, canonical_order(out, T), _trusted=True)

    def blocks(self) -> list:
        """The blocks beta_1, ..., beta_{d+1} = f(gamma_c . Gamma) for c = 0..d."""
        d = self.embedding.d
        h = GroupElement.identity(self.embedding.T)
        state = BASE_STATE
        out = [MarkedBlock(d, 0, 1, 0, h)]
        for s in self.steps:
            h = h * s.dh
            state = s.state
            out.append(MarkedBlock(d, state[0], state[1], state[2], h))
        return out

    def to_json(self) -> dict:
        letter = "t"
        src = format_syllables(self.source, "s")
        lifted = []
        for c, s in enumerate(self.steps):
            lifted.append({"label": format_syllables(self.label_syllables(c), letter),
                           "t": {"i": s.gen, "e": s.exp}})
        return {"input": src, "lifted": lifted,
                "reduced": format_syllables(self.element().syllables, letter)}


@dataclass(frozen=True)
class EmbeddingConfig:
    n: int
    p: int
    q: int
    source_orders: Optional[tuple] = None    # None: all infinite
    target_orders: Optional[tuple] = None
    variant: str = "standard"
    k: int = 1

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise UnsupportedVariant(f"unknown variant {self.variant!r}")
        d = Decomposition(self.n, self.p, self.q)
        M = _orders(self.source_orders, d.m)
        N = _orders(self.target_orders, d.n)
        object.__setattr__(self, "source_orders", M)
        object.__setattr__(self, "target_orders", N)
        finite_src = any(x is not None for x in M)
        finite_tgt = any(x is not None for x in N)
        if self.variant in ("standard", "exotic_q0"):
            if finite_src or finite_tgt:
                raise UnsupportedVariant(f"variant {self.variant} needs infinite orders")
            if self.variant == "exotic_q0" and self.q:
                raise UnsupportedVariant("the exotic map needs q = 0")
        elif self.variant == "graph_product":
            Mp = _max_order(M)
            Nm = _min_order(N)
            ok = (Nm is None or (Mp is not None and Mp < Nm)
                  or (Mp is not None and Mp == Nm and self.q == 0))
            if not ok:
                raise UnsupportedVariant(
                    f"graph-product map needs N- = inf, M+ < N-, or M+ = N- with q = 0 "
                    f"(M+={_fmt(Mp)}, N-={_fmt(Nm)}, q={self.q})")
        else:
            if self.q:
                raise UnsupportedVariant("the multiplied doubling needs q = 0")
            if len(set(M)) != 1 or len(set(N)) != 1 or M[0] is None or N[0] is None:
                raise UnsupportedVariant("the undistorted variant needs constant finite orders")
            if N[0] != self.k * M[0]:
                raise UnsupportedVariant(f"need N = kM, got N={N[0]}, k={self.k}, M={M[0]}")

    @property
    def decomposition(self) -> Decomposition:
        return Decomposition(self.n, self.p, self.q)


def _orders(o, k):
    if o is None or o == "inf":
        return (None,) * k
    if isinstance(o, int):
        return (o,) * k
    o = tuple(None if x in (None, "inf") else int(x) for x in o)
    if len(o) != k:
        raise InvalidInput(f"expected {k} orders, got {len(o)}")
    return o


def _max_order(o):
    return None if any(x is None for x in o) else max(o)


def _min_order(o):
    fin = [x for x in o if x is not None]
    return min(fin) if fin else None


def _fmt(x):
    return "inf" if x is None else str(x)


class Embedding:
    """The maps f, F and their relatives for one configuration."""

    def __init__(self, cfg: EmbeddingConfig):
        self.cfg = cfg
        self.d = cfg.decomposition
        self.S = self.d.source()                   # A_Gamma, infinite orders
        self.T = self.d.target()                   # A_Lambda, infinite orders
        self.S_orders = cfg.source_orders
        self.T_orders = cfg.target_orders
        self.S_quot = self.S.with_orders(self.S_orders)
        self.T_quot = self.T.with_orders(self.T_orders)
        self.engine = Engine(self.d, cfg.k if cfg.variant == "Mk" else 1)

    @classmethod
    def standard(cls, n: int, p: int, q: int) -> "Embedding":
        return cls(EmbeddingConfig(n, p, q))

    # -- helpers
    def _syllables(self, g) -> tuple:
        """Syllables over the infinite-order source (lifting quotient elements)."""
        if isinstance(g, Word):
            if g.pres.k != self.d.m:
                raise InvalidInput("word is over the wrong source graph")
            syls = tuple(g.syllables)
            if not is_syllable_reduced(syls, g.pres.infinite()):
                raise InvalidInput(f"word {g} is not syllable-reduced")
            if not g.pres.is_raag:
                syls = tuple((x, g.pres.normalize_exp(x, e)) for x, e in syls)
            return syls
        if not isinstance(g, GroupElement):
            raise InvalidInput("expected a Word or GroupElement")
        if g.pres.k != self.d.m or g.pres.edges != self.S.edges:
            raise InvalidInput("element is over the wrong source graph")
        return lift_hat(g).syllables if not g.pres.is_raag else g.syllables

    # -- f
    def f_block(self, g) -> MarkedBlock:
        syls = self._syllables(g)
        h = GroupElement.identity(self.T)
        state = BASE_STATE
        for st in self.engine.run(syls):
            h = h * st.dh
            state = st.state
        return MarkedBlock(self.d, state[0], state[1], state[2], h)

    def f_vertex(self, g, v: int) -> ExtVertex:
        return self.f_block(g)(v)

    # -- F
    def F_lift(self, g, substitute: bool = False) -> LiftedWord:
        syls = self._syllables(g)
        return LiftedWord(self, syls, self.engine.run(syls), substitute=substitute)

    def F(self, g) -> GroupElement:
        if self.cfg.variant == "graph_product":
            return self.F_graph_product(g)
        return self.F_lift(g).element()

    def F_syllables(self, syls: Sequence) -> GroupElement:
        """F of a syllable-reduced tuple over the infinite source (no checks)."""
        T = self.T
        out: list = []
        state = BASE_STATE
        for g, e in syls:
            st = self.engine.step(state, g, e)
            for x, y in st.label.syllables:
                push_syllable(out, x, y, T)
            push_syllable(out, st.gen, st.exp, T)
            state = st.state
        return GroupElement(T, canonical_order(out, T), _trusted=True)

    # -- laziness
    def lazy_violation(self, syls: Sequence, states: Optional[list] = None) -> Optional[int]:
        """First position c at which the lazy conditions fail, or None."""
        if states is None:
            states = self.engine.states(syls)
        for c in range(len(syls) - 1):
            if not self._lazy_at(syls, c, states[c]):
                return c
        return None

    def is_lazy(self, g) -> bool:
        syls = self._syllables(g)
        return self.lazy_violation(syls) is None

    def _lazy_at(self, syls, c, state) -> bool:
        S, T = self.S, self.T
        i1, i2 = syls[c][0], syls[c + 1][0]
        if not S.adjacent(i1, i2):
            return True
        alpha, eps, kappa, k0 = state
        B = MarkedBlock(self.d, alpha, eps, kappa)
        u1, u2 = B(i1), B(i2)
        l1 = B.shape.min_label(k0, u1)
        l2 = B.shape.min_label(k0, u2)
        t2 = u2.vtx
        if l1 != l2:
            return l1.length() < l2.length()
        if not l1.is_identity():
            return not any(T.commutes(x, t2) for x in l1.last_gens())
        if c == 0:
            return True
        prev = B(syls[c - 1][0])
        return not T.commutes(prev.vtx, t2)

    def lazy_representative(self, g) -> Word:
        syls = self._syllables(g)
        out: list = []
        for s in syls:
            out = self._insert(out, tuple(s))
        pres = self.S
        return Word(pres, out)

    def _insert(self, prefix: list, s: tuple) -> list:
        cand = prefix + [s]
        d = len(cand)
        if d < 2 or not self.S.adjacent(cand[-2][0], s[0]):
            return cand
        state = self.engine.states(cand[:d - 2])[-1]
        if self._lazy_at(cand, d - 2, state):
            return cand
        return self._insert(prefix[:-1], s) + [prefix[-1]]

    def F_lazy(self, g, substitute: bool = False) -> LiftedWord:
        w = self.lazy_representative(g)
        lw = LiftedWord(self, tuple(w.syllables), self.engine.run(w.syllables), lazy=True,
                        substitute=substitute)
        return lw

    # -- q = 0 homomorphism and the exotic map
    def phi(self, g) -> GroupElement:
        if self.d.q:
            raise UnsupportedVariant("the block map is a homomorphism only when q = 0")
        syls = self._syllables(g)
        T = self.T
        out: list = []
        for st in self.engine.run(syls):
            if st.state[:3] != (0, 1, 0):
                raise ContractError("q = 0 block is not of the form B(0,+,0;h)")
            for x, y in st.dh.syllables:
                push_syllable(out, x, y, T)
        h = GroupElement(T, canonical_order(out, T), _trusted=True)
        if self.cfg.variant == "Mk":
            return quotient_image(h, self.T_quot)
        return h

    def phi1(self, g) -> GroupElement:
        return self.phi(g)

    def phi2(self, g) -> GroupElement:
        m, n = self.d.m, self.d.n
        syls = self._syllables(g)
        flipped = GroupElement(self.S, tuple(((-x) % m, e) for x, e in syls))
        img = self.phi(flipped)
        return GroupElement(self.T, tuple(((-x) % n, e) for x, e in img.syllables))

    def phi_hat(self, g) -> GroupElement:
        if self.d.q:
            raise UnsupportedVariant("the exotic map needs q = 0")
        if isinstance(g, Word):
            g = GroupElement(self.S, g.syllables)
        if 0 in g.first_gens():
            return self.phi2(g)
        return self.phi1(g)

    homo_phi = phi
    exotic_phi_hat = phi_hat

    # -- graph products
    def F_graph_product(self, g) -> GroupElement:
        lw = self.F_lazy(g, substitute=True)
        return GroupElement(self.T_quot, tuple(lw.syllables()))

    def F_Mk(self, g) -> GroupElement:
        if self.cfg.variant != "Mk":
            raise UnsupportedVariant("F_Mk needs the Mk variant")
        return self.phi(g)

    def exponent_audit(self, g) -> list:
        """Exponents of F'(lazy(g-hat)) outside {1,...,M+ - 1, N_w - 1}."""
        Mp = _max_order(self.S_orders)
        lw = self.F_lazy(g, substitute=True)
        bad = []
        for x, e in lw.syllables():
            N = self.T_orders[x]
            allowed = (Mp is None or 1 <= e <= Mp - 1) or (N is not None and e == N - 1)
            if not allowed:
                bad.append((x, e))
        return bad


def is_syllable_reduced(syls: Sequence, pres: Presentation) -> bool:
    out: list = []
    for g, e in syls:
        push_syllable(out, g, e, pres)
    return len(out) == len(syls)


# ----------------------------------------------------------- reductions

def roots_reduce(lw: LiftedWord) -> Word:
    """Cancel the shortcut letters that a lazy lift can carry across commuting syllables."""
    if not lw.lazy:
        raise ContractError("roots_reduce needs the lift of a lazy representative")
    T = lw.embedding.T
    labels = [s.label for s in lw.steps]
    ts = [(s.gen, s.exp) for s in lw.steps]
    d = len(labels)
    for c in range(d):
        if labels[c].is_identity():
            continue
        for tau in sorted(labels[c].last_gens()):
            e_c = _end_exp(labels[c], tau, last=True)
            if abs(e_c) != 1:
                continue
            k = c
            ok = False
            while k < d:
                if not T.adjacent(ts[k][0], tau):
                    break
                if k + 1 >= d:
                    break
                nxt = labels[k + 1]
                if nxt.is_identity():
                    k += 1
                    continue
                if tau in nxt.first_gens() and _end_exp(nxt, tau, last=False) == -e_c:
                    ok = True
                break
            if ok:
                x = GroupElement.gen(T, tau, e_c)
                labels[c] = labels[c] * x.inverse()
                labels[k + 1] = x * labels[k + 1]
                break
    out = []
    for ell, t in zip(labels, ts):
        out.extend(ell.syllables)
        out.append(t)
    return Word(T, out)


def _end_exp(g: GroupElement, gen: int, last: bool) -> int:
    seq = reversed(g.syllables) if last else iter(g.syllables)
    for x, e in seq:
        if x == gen:
            return e
    raise ContractError("generator not found")


def shuffle_to_end(g: GroupElement, gen: int) -> list:
    """A reduced syllable list for g ending with its gen-syllable (gen must be final)."""
    syls = list(g.syllables)
    for idx in range(len(syls) - 1, -1, -1):
        if syls[idx][0] == gen:
            s = syls.pop(idx)
            return syls + [s]
    raise InvalidInput("generator does not occur")


def shuffle_to_front(g: GroupElement, gen: int) -> list:
    syls = list(g.syllables)
    for idx, s in enumerate(syls):
        if s[0] == gen:
            syls.pop(idx)
            return [s] + syls
    raise InvalidInput("generator does not occur")


def _expand(syls) -> list:
    out = []
    for g, e in syls:
        out.extend([(g, 1 if e > 0 else -1)] * abs(e))
    return out


def prefix_aligned(emb: Embedding, g: GroupElement, h: GroupElement) -> tuple:
    """Words (mu, nu): mu represents F(g) and starts with a minimal word nu for F(h)."""
    if not is_prefix(h, g):
        raise InvalidInput("h is not a prefix of g")
    Fg, Fh = emb.F(g), emb.F(h)
    rest = Fh.inverse() * Fg
    nu = list(Fh.syllables)
    tail = list(rest.syllables)
    for x in sorted(Fh.last_gens() & rest.first_gens()):
        a = _end_exp(Fh, x, last=True)
        b = _end_exp(rest, x, last=False)
        if (a > 0) != (b > 0):
            nu = shuffle_to_end(Fh, x)
            tail = shuffle_to_front(rest, x)
            break
    nu_letters = _expand(nu)
    mu_letters = nu_letters + _expand(tail)
    return Word(emb.T, mu_letters), Word(emb.T, nu_letters)


# ----------------------------------------------------- double homomorphism

@dataclass
class DoubleMap:
    """The homomorphism from the double of C_n along a vertex into A_{C_n}."""
    n: int
    glue: int
    n_pow: int
    source: Presentation
    images: list                 # image of each source generator
    origin: list = field(default_factory=list)   # (copy, vertex of C_n) per source vertex

    def __call__(self, g: GroupElement) -> GroupElement:
        T = self.images[0].pres
        out: list = []
        for v, e in g.syllables:
            for x, y in (self.images[v] ** e).syllables:
                push_syllable(out, x, y, T)
        return GroupElement(T, canonical_order(out, T), _trusted=True)


def double_homomorphism(n: int, glue: int = 0, n_pow: int = 1) -> DoubleMap:
    if n_pow < 1:
        raise InvalidInput("the conjugating power must be at least 1")
    if n < 4:
        raise InvalidInput("need n >= 4")
    glue %= n
    T = Presentation.cycle(n, letter="t")
    star = {glue, (glue + 1) % n, (glue - 1) % n}
    others = [(glue + j) % n for j in range(2, n - 1)]
    index = {j: j for j in range(n)}
    second = {j: j for j in star}
    for r, j in enumerate(others):
        second[j] = n + r
    k = n + len(others)
    edges = [(i, (i + 1) % n) for i in range(n)]
    edges += [(second[i], second[(i + 1) % n]) for i in range(n)]
    S = Presentation(k, edges, letter="s")
    tg = GroupElement.gen(T, glue, n_pow)
    images: list = [None] * k
    origin: list = [None] * k
    for j in range(n):
        images[index[j]] = GroupElement.gen(T, j)
        origin[index[j]] = (1, j)
    images[glue] = GroupElement.gen(T, glue, n_pow + 1)
    for j in others:
        images[second[j]] = tg * GroupElement.gen(T, j) * tg.inverse()
        origin[second[j]] = (2, j)
    return DoubleMap(n, glue, n_pow, S, images, origin)

"""Word algebra for graph products of cyclic groups.

A :class:`Presentation` fixes a finite simplicial graph and an order for every
vertex (``None`` meaning infinite order).  Elements are stored as tuples of
``(generator, exponent)`` syllables in a canonical normal form: the word is
syllable-reduced and, among all shuffles of commuting syllables, it is the
lexicographically least one when syllables are compared by generator index.
"""

from __future__ import annotations

import re
from typing import Iterable, NamedTuple, Optional, Sequence

from .errors import BudgetExceeded, InvalidInput, WordParseError

INF = None


class Syllable(NamedTuple):
    gen: int
    exp: int


class Presentation:
    """A graph together with per-vertex orders (``None`` for infinity)."""

    __slots__ = ("k", "edges", "orders", "letter", "_adj", "_hash")

    def __init__(self, k: int, edges: Iterable[tuple[int, int]], orders=None, letter: str = "s"):
        if k < 1:
            raise InvalidInput("vertex count must be positive")
        adj = [set() for _ in range(k)]
        norm = set()
        for i, j in edges:
            i, j = i % k, j % k
            if i == j:
                raise InvalidInput(f"self-loop at vertex {i}")
            adj[i].add(j)
            adj[j].add(i)
            norm.add((min(i, j), max(i, j)))
        if orders is None:
            orders = (INF,) * k
        elif isinstance(orders, int):
            orders = (orders,) * k
        orders = tuple(None if o in (None, "inf", float("inf")) else int(o) for o in orders)
        if len(orders) != k:
            raise InvalidInput(f"expected {k} orders, got {len(orders)}")
        for o in orders:
            if o is not None and o < 2:
                raise InvalidInput(f"vertex orders must be at least 2, got {o}")
        self.k = k
        self.edges = frozenset(norm)
        self.orders = orders
        self.letter = letter
        self._adj = tuple(frozenset(a) for a in adj)
        self._hash = hash((k, self.edges, orders, letter))

    @classmethod
    def cycle(cls, k: int, orders=None, letter: str = "s") -> "Presentation":
        if k < 3:
            raise InvalidInput("a cycle needs at least 3 vertices")
        return cls(k, [(i, (i + 1) % k) for i in range(k)], orders, letter)

    def __eq__(self, other):
        if not isinstance(other, Presentation):
            return NotImplemented
        return (self.k, self.edges, self.orders, self.letter) == (
            other.k, other.edges, other.orders, other.letter)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        orders = ",".join("inf" if o is None else str(o) for o in self.orders)
        return f"Presentation(k={self.k}, edges={len(self.edges)}, orders=[{orders}], letter={self.letter!r})"

    def neighbors(self, v: int) -> frozenset:
        return self._adj[v % self.k]

    def adjacent(self, i: int, j: int) -> bool:
        return (j % self.k) in self._adj[i % self.k]

    def commutes(self, i: int, j: int) -> bool:
        i, j = i % self.k, j % self.k
        return i == j or j in self._adj[i]

    def star(self, v: int) -> frozenset:
        v %= self.k
        return self._adj[v] | {v}

    def order(self, v: int) -> Optional[int]:
        return self.orders[v % self.k]

    @property
    def is_raag(self) -> bool:
        return all(o is None for o in self.orders)

    def infinite(self) -> "Presentation":
        return Presentation(self.k, self.edges, None, self.letter)

    def with_orders(self, orders) -> "Presentation":
        return Presentation(self.k, self.edges, orders, self.letter)

    def with_letter(self, letter: str) -> "Presentation":
        return Presentation(self.k, self.edges, self.orders, letter)

    def normalize_exp(self, v: int, e: int) -> int:
        n = self.orders[v]
        return e if n is None else e % n

    def letter_cost(self, v: int, e: int) -> int:
        n = self.orders[v]
        if n is None:
            return abs(e)
        e %= n
        return min(e, n - e)

    def letters(self) -> list[Syllable]:
        """Signed generators in index order (one letter when the order is 2)."""
        out = []
        for v in range(self.k):
            out.append(Syllable(v, 1))
            n = self.orders[v]
            if n is None:
                out.append(Syllable(v, -1))
            elif n > 2:
                out.append(Syllable(v, n - 1))
        return out


# ---------------------------------------------------------------- reduction

def push_syllable(syls: list, gen: int, exp: int, pres: Presentation) -> None:
    """Right-multiply a reduced syllable list in place by ``gen^exp``."""
    n = pres.orders[gen]
    if n is not None:
        exp %= n
    if exp == 0:
        return
    adj = pres._adj[gen]
    for idx in range(len(syls) - 1, -1, -1):
        h, f = syls[idx]
        if h == gen:
            e = f + exp
            if n is not None:
                e %= n
            if e == 0:
                del syls[idx]
            else:
                syls[idx] = (gen, e)
            return
        if h not in adj:
            break
    syls.append((gen, exp))


def reduced_list(pairs: Iterable[tuple[int, int]], pres: Presentation) -> list:
    out: list = []
    for g, e in pairs:
        push_syllable(out, g, e, pres)
    return out


def canonical_order(syls: Sequence[tuple[int, int]], pres: Presentation) -> tuple:
    """Lexicographically least shuffle of a syllable-reduced list."""
    remaining = list(syls)
    adj = pres._adj
    out = []
    while remaining:
        best = -1
        best_gen = None
        seen: set = set()
        for idx, (g, _) in enumerate(remaining):
            if g not in seen and seen <= adj[g]:
                if best_gen is None or g < best_gen:
                    best, best_gen = idx, g
            seen.add(g)
        out.append(remaining.pop(best))
    return tuple(out)


def list_length(syls: Iterable[tuple[int, int]], pres: Presentation) -> int:
    return sum(pres.letter_cost(g, e) for g, e in syls)


class Word:
    """An ordered sequence of syllables, possibly unreduced."""

    __slots__ = ("pres", "syllables")

    def __init__(self, pres: Presentation, syllables: Iterable = ()):
        self.pres = pres
        syl = []
        for s in syllables:
            g, e = s
            if e == 0:
                raise InvalidInput("syllable exponent must be nonzero")
            syl.append(Syllable(g % pres.k, e))
        self.syllables = tuple(syl)

    def __iter__(self):
        return iter(self.syllables)

    def __len__(self):
        return len(self.syllables)

    def __eq__(self, other):
        return isinstance(other, Word) and self.pres == other.pres and self.syllables == other.syllables

    def __hash__(self):
        return hash((self.pres, self.syllables))

    def __repr__(self):
        return f"Word({format_syllables(self.syllables, self.pres.letter)!r})"

    def __str__(self):
        return format_syllables(self.syllables, self.pres.letter)

    def token_count(self) -> int:
        return sum(abs(e) for _, e in self.syllables)

    def letter_length(self) -> int:
        return list_length(self.syllables, self.pres)

    def element(self) -> "GroupElement":
        return reduce(self)


class GroupElement:
    """An element of a graph product, held in canonical normal form."""

    __slots__ = ("pres", "syllables", "_hash")

    def __init__(self, pres: Presentation, syllables: tuple = (), _trusted: bool = False):
        if not _trusted:
            syllables = canonical_order(reduced_list(syllables, pres), pres)
        self.pres = pres
        self.syllables = tuple(Syllable(g, e) for g, e in syllables)
        self._hash = hash((pres, self.syllables))

    @classmethod
    def identity(cls, pres: Presentation) -> "GroupElement":
        return cls(pres, (), _trusted=True)

    @classmethod
    def gen(cls, pres: Presentation, v: int, e: int = 1) -> "GroupElement":
        return cls(pres, ((v % pres.k, e),))

    def __eq__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self.pres == other.pres and self.syllables == other.syllables

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"GroupElement({str(self)!r})"

    def __str__(self):
        return format_syllables(self.syllables, self.pres.letter)

    def __len__(self):
        return self.length()

    def _check(self, other: "GroupElement"):
        if other.pres != self.pres:
            raise InvalidInput("presentation mismatch")

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        self._check(other)
        out = list(self.syllables)
        for g, e in other.syllables:
            push_syllable(out, g, e, self.pres)
        return GroupElement(self.pres, canonical_order(out, self.pres), _trusted=True)

    def inverse(self) -> "GroupElement":
        pres = self.pres
        inv = [(g, pres.normalize_exp(g, -e)) for g, e in reversed(self.syllables)]
        return GroupElement(pres, canonical_order(inv, pres), _trusted=True)

    def __invert__(self):
        return self.inverse()

    def __pow__(self, k: int) -> "GroupElement":
        base = self if k >= 0 else self.inverse()
        out = GroupElement.identity(self.pres)
        for _ in range(abs(k)):
            out = out * base
        return out

    def is_identity(self) -> bool:
        return not self.syllables

    def length(self) -> int:
        return list_length(self.syllables, self.pres)

    def semigroup_length(self) -> int:
        pres = self.pres
        return sum(abs(e) if pres.orders[g] is None else e for g, e in self.syllables)

    def syllable_length(self) -> int:
        return len(self.syllables)

    def word(self) -> Word:
        return Word(self.pres, self.syllables)

    def first_gens(self) -> set:
        """Generators of syllables that some reduced representative starts with."""
        out = set()
        seen: set = set()
        for g, _ in self.syllables:
            if g not in seen and seen <= self.pres._adj[g]:
                out.add(g)
            seen.add(g)
        return out

    def last_gens(self) -> set:
        out = set()
        seen: set = set()
        for g, _ in reversed(self.syllables):
            if g not in seen and seen <= self.pres._adj[g]:
                out.add(g)
            seen.add(g)
        return out

    def to_json(self) -> dict:
        return word_to_json(self.syllables)


# ------------------------------------------------------------- operations

def reduce(w) -> GroupElement:
    """Canonical form of a word (a :class:`Word` or a syllable iterable with presentation)."""
    if isinstance(w, GroupElement):
        return w
    if not isinstance(w, Word):
        raise InvalidInput("reduce expects a Word")
    return GroupElement(w.pres, w.syllables)


def element(pres: Presentation, syllables: Iterable) -> GroupElement:
    return GroupElement(pres, tuple(syllables))


def distance(g: GroupElement, h: GroupElement) -> int:
    g._check(h)
    return (g.inverse() * h).length()


def is_prefix(h: GroupElement, g: GroupElement) -> bool:
    h._check(g)
    return g.length() == h.length() + (h.inverse() * g).length()


def lift_hat(g: GroupElement) -> GroupElement:
    """The lift to the right-angled Artin group with exponents in 1..N_v-1."""
    return GroupElement(g.pres.infinite(), g.syllables, _trusted=True)


def quotient_image(g: GroupElement, pres: Presentation) -> GroupElement:
    if pres.k != g.pres.k or pres.edges != g.pres.edges:
        raise InvalidInput("quotient must share the underlying graph")
    return GroupElement(pres, g.syllables)


def enumerate_ball(pres: Presentation, radius: int, budget: int = 2_000_000) -> set:
    """All elements of word length at most ``radius``."""
    if radius < 0:
        raise InvalidInput("radius must be nonnegative")
    one = GroupElement.identity(pres)
    ball = {one}
    frontier = [one]
    letters = pres.letters()
    for r in range(radius):
        nxt = []
        for g in frontier:
            for v, e in letters:
                out = list(g.syllables)
                push_syllable(out, v, e, pres)
                if list_length(out, pres) != r + 1:
                    continue
                h = GroupElement(pres, canonical_order(out, pres), _trusted=True)
                if h not in ball:
                    ball.add(h)
                    nxt.append(h)
                    if len(ball) > budget:
                        raise BudgetExceeded(f"ball enumeration exceeded {budget} elements", len(ball))
        frontier = nxt
    return ball


def iter_geodesic_words(pres: Presentation, radius: int):
    """Yield each element of the ball once, as a list of letters, depth first.

    Only for right-angled Artin presentations.  The emitted letter sequences
    are the lexicographically least geodesics, so the walk is a spanning tree
    of the ball.  Each yield is the current letter list, which is shared and
    must not be mutated by the caller.
    """
    if not pres.is_raag:
        raise InvalidInput("geodesic walk requires infinite orders")
    letters = sorted(pres.letters())
    adj = pres._adj
    word: list = []

    def ok(v, e):
        for idx in range(len(word) - 1, -1, -1):
            g, f = word[idx]
            if g == v:
                if f != e:
                    return False
                continue
            if g not in adj[v]:
                return True
            if g > v:
                return False
        return True

    def rec():
        yield word
        if len(word) == radius:
            return
        for v, e in letters:
            if ok(v, e):
                word.append((v, e))
                yield from rec()
                word.pop()

    yield from rec()


def shuffle_representatives(g: GroupElement, max_count: int = 10_000):
    """Syllable-reduced words for ``g`` obtained by commuting shuffles.

    Returns ``(words, truncated)``.
    """
    syls = list(g.syllables)
    pres = g.pres
    n = len(syls)
    # syllable j must precede i when j < i and they do not commute
    preds = [frozenset(j for j in range(i) if not pres.commutes(syls[j][0], syls[i][0])) for i in range(n)]
    out = []
    used = [False] * n
    cur: list = []
    truncated = False

    def rec():
        nonlocal truncated
        if truncated:
            return
        if len(cur) == n:
            if len(out) >= max_count:
                truncated = True
                return
            out.append(Word(pres, [syls[i] for i in cur]))
            return
        placed = set(cur)
        for i in range(n):
            if not used[i] and preds[i] <= placed:
                used[i] = True
                cur.append(i)
                rec()
                cur.pop()
                used[i] = False
                if truncated:
                    return

    rec()
    return out, truncated


# --------------------------------------------------------------------- text

_TOKEN = re.compile(r"^([st])(-?\d+)(?:\^(-?\d+))?$")


def parse_syllables(text: str) -> tuple[Optional[str], list]:
    letter = None
    out = []
    for tok in text.split():
        m = _TOKEN.match(tok)
        if not m:
            raise WordParseError(f"bad token {tok!r}")
        if letter is None:
            letter = m.group(1)
        elif letter != m.group(1):
            raise InvalidInput(f"mixed generator letters in {text!r}")
        e = int(m.group(3)) if m.group(3) is not None else 1
        if e == 0:
            raise WordParseError(f"zero exponent in {tok!r}")
        out.append((int(m.group(2)), e))
    return letter, out


def parse_word(text: str, pres: Presentation) -> Word:
    letter, syls = parse_syllables(text)
    if letter is not None and letter != pres.letter:
        raise InvalidInput(f"word uses {letter!r} but presentation uses {pres.letter!r}")
    return Word(pres, [(i % pres.k, e) for i, e in syls])


def parse_element(text: str, pres: Presentation) -> GroupElement:
    return reduce(parse_word(text, pres))


def format_syllables(syls: Iterable, letter: str = "s") -> str:
    parts = []
    for g, e in syls:
        parts.append(f"{letter}{g}" if e == 1 else f"{letter}{g}^{e}")
    return " ".join(parts)


def word_to_json(syls: Iterable) -> dict:
    return {"gens": [{"i": int(g), "e": int(e)} for g, e in syls]}


def word_from_json(data: dict, pres: Presentation) -> Word:
    try:
        gens = data["gens"]
        return Word(pres, [(int(x["i"]) % pres.k, int(x["e"])) for x in gens])
    except (KeyError, TypeError) as exc:
        raise InvalidInput(f"bad word json: {exc}") from exc

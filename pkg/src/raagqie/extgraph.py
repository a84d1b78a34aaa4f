"""Finite pieces of extension graphs.

A vertex ``g.v`` of the extension graph is stored by the minimal label of the
coset ``g A_star(v)`` together with ``v``.  Adjacency is decided by checking
whether the conjugates ``g s_v g^-1`` and ``h s_w h^-1`` are distinct and
commute.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .errors import BudgetExceeded, InvalidInput
from .words import (GroupElement, Presentation, canonical_order, enumerate_ball,
                    format_syllables, parse_element)


@dataclass(frozen=True, order=False)
class ExtVertex:
    label: GroupElement
    vtx: int

    def sort_key(self):
        return (self.label.length(), self.label.syllables, self.vtx)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __str__(self):
        return f"{self.label}|v{self.vtx}"

    def name(self, letter: Optional[str] = None) -> str:
        letter = letter or self.label.pres.letter
        return f"{format_syllables(self.label.syllables, letter)}|{'w' if letter == 't' else 'v'}{self.vtx}"


def strip_star(syls, v: int, pres: Presentation) -> list:
    """Remove trailing syllables lying in star(v) until none can be shuffled to the end."""
    syls = list(syls)
    star = pres.star(v)
    adj = pres._adj
    changed = True
    while changed and syls:
        changed = False
        seen: set = set()
        for idx in range(len(syls) - 1, -1, -1):
            g = syls[idx][0]
            if g not in seen and seen <= adj[g]:
                if g in star:
                    del syls[idx]
                    changed = True
                    break
            seen.add(g)
    return syls


def canonical_vertex(g: GroupElement, v: int) -> ExtVertex:
    pres = g.pres
    v %= pres.k
    syls = strip_star(g.syllables, v, pres)
    return ExtVertex(GroupElement(pres, canonical_order(syls, pres), _trusted=True), v)


def vertex(pres: Presentation, text: str, v: int) -> ExtVertex:
    return canonical_vertex(parse_element(text, pres), v)


def translate(h: GroupElement, u: ExtVertex) -> ExtVertex:
    """Left action ``h . (g.v) = hg.v``."""
    return canonical_vertex(h * u.label, u.vtx)


def conjugate(u: ExtVertex) -> GroupElement:
    g = u.label
    return g * GroupElement.gen(g.pres, u.vtx) * g.inverse()


def adjacent(u: ExtVertex, w: ExtVertex) -> bool:
    if u.label.pres != w.label.pres:
        raise InvalidInput("presentation mismatch")
    x, y = conjugate(u), conjugate(w)
    if x == y:
        return False
    return x * y == y * x


def copy_vertices(g: GroupElement) -> tuple:
    return tuple(canonical_vertex(g, j) for j in range(g.pres.k))


def copy_edges(g: GroupElement) -> set:
    verts = copy_vertices(g)
    out = set()
    for i, j in g.pres.edges:
        out.add(edge_key(verts[i], verts[j]))
    return out


def edge_key(u: ExtVertex, w: ExtVertex) -> frozenset:
    return frozenset((u, w))


@dataclass
class Fragment:
    pres: Presentation
    vertices: list
    edges: set  # frozenset pairs of ExtVertex
    copies: dict = field(default_factory=dict)

    def __post_init__(self):
        self.vertices = sorted(set(self.vertices))
        self.index = {u: i for i, u in enumerate(self.vertices)}
        self._nbrs = None

    def __contains__(self, u):
        return u in self.index

    def neighbors(self, u: ExtVertex) -> set:
        if self._nbrs is None:
            nb = {x: set() for x in self.vertices}
            for e in self.edges:
                a, b = tuple(e)
                nb[a].add(b)
                nb[b].add(a)
            self._nbrs = nb
        return self._nbrs[u]

    def edge_list(self) -> list:
        out = []
        for e in self.edges:
            a, b = tuple(e)
            i, j = self.index[a], self.index[b]
            out.append((min(i, j), max(i, j)))
        return sorted(out)

    def to_networkx(self):
        import networkx as nx
        G = nx.Graph()
        G.add_nodes_from(range(len(self.vertices)))
        G.add_edges_from(self.edge_list())
        return G


def induced_edges(vertices: Iterable[ExtVertex], pres: Presentation, prefilter: bool = True) -> set:
    verts = sorted(set(vertices))
    conj = {u: conjugate(u) for u in verts}
    out = set()
    for a in range(len(verts)):
        u = verts[a]
        x = conj[u]
        for b in range(a + 1, len(verts)):
            w = verts[b]
            if prefilter and not pres.adjacent(u.vtx, w.vtx):
                continue
            y = conj[w]
            if x != y and x * y == y * x:
                out.add(edge_key(u, w))
    return out


def fragment_from_copies(copies: Iterable[GroupElement], induced: bool = True, prefilter: bool = True) -> Fragment:
    copies = list(copies)
    if not copies:
        raise InvalidInput("fragment needs at least one copy")
    pres = copies[0].pres
    table = {}
    verts = set()
    edges = set()
    for g in copies:
        vs = copy_vertices(g)
        table[g] = vs
        verts.update(vs)
        for i, j in pres.edges:
            edges.add(edge_key(vs[i], vs[j]))
    if induced:
        edges |= induced_edges(verts, pres, prefilter)
    return Fragment(pres, list(verts), edges, table)


def build_fragment(pres: Presentation, radius: int, exponent_bound: Optional[int] = None,
                   budget: int = 200_000, prefilter: bool = True) -> Fragment:
    """Union of copies g.Gamma with |g| <= radius, with all induced edges.

    For finite orders the copies are the lifts (exponents in 1..N-1) and the
    fragment lives in the extension graph of the underlying Artin group.
    ``exponent_bound`` keeps only labels whose exponents lie in 1..bound.
    """
    ball = enumerate_ball(pres, radius, budget=budget)
    base = pres.infinite()
    labels = []
    for g in ball:
        if exponent_bound is not None and any(not (1 <= e <= exponent_bound) for _, e in g.syllables):
            continue
        labels.append(GroupElement(base, g.syllables, _trusted=True))
    frag = fragment_from_copies(sorted(labels, key=lambda x: (x.length(), x.syllables)), True, prefilter)
    if len(frag.vertices) > budget:
        raise BudgetExceeded("fragment too large", len(frag.vertices))
    return frag


def doubling_sequence(pres: Presentation, steps: Iterable[ExtVertex]) -> Fragment:
    """Iterated doubles: each step replaces the fragment by its union with c.fragment.

    ``c`` is the conjugate generator of the step vertex, so the two halves are
    glued along the star of that vertex.
    """
    base = pres.infinite()
    copies = {GroupElement.identity(base)}
    for u in steps:
        present = set()
        for g in copies:
            present.update(copy_vertices(g))
        if u not in present:
            raise InvalidInput(f"step vertex {u} is not in the current fragment")
        c = conjugate(u)
        copies = copies | {c * g for g in copies}
    return fragment_from_copies(sorted(copies, key=lambda x: (x.length(), x.syllables)))


def abstract_double(G, v):
    """Two copies of a networkx graph glued along the closed star of ``v``."""
    import networkx as nx
    star = set(G.neighbors(v)) | {v}
    D = nx.Graph()
    for a, b in G.edges():
        D.add_edge(("A", a), ("A", b))
        pa = ("A", a) if a in star else ("B", a)
        pb = ("A", b) if b in star else ("B", b)
        D.add_edge(pa, pb)
    for a in G.nodes():
        D.add_node(("A", a))
        D.add_node(("A", a) if a in star else ("B", a))
    return D


# ------------------------------------------------------------- Z/2 cycles

@dataclass(frozen=True)
class CycleClass:
    support: frozenset
    copies: tuple

    def edge_count(self) -> int:
        return len(self.support)


def cycle_class(copies: Iterable[GroupElement], frag: Optional[Fragment] = None) -> CycleClass:
    support: set = set()
    copies = tuple(copies)
    for g in copies:
        es = copy_edges(g)
        if frag is not None and not es <= frag.edges:
            raise InvalidInput(f"copy {g} is not contained in the fragment")
        support ^= es
    return CycleClass(frozenset(support), copies)


def edge_count(c: CycleClass) -> int:
    return c.edge_count()


def support_is_cycle(support: Iterable) -> bool:
    """True when the edge set forms one embedded cycle."""
    support = list(support)
    if not support:
        return False
    deg: dict = {}
    nbr: dict = {}
    for e in support:
        a, b = tuple(e)
        for x, y in ((a, b), (b, a)):
            deg[x] = deg.get(x, 0) + 1
            nbr.setdefault(x, []).append(y)
    if any(d != 2 for d in deg.values()):
        return False
    start = next(iter(deg))
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in nbr[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == len(deg)


# ------------------------------------------------------------ cycle search

@dataclass
class CycleSearch:
    cycles: list
    truncated: bool
    nodes: int


def find_cycles(frag: Fragment, length: int, anchor: tuple, budget: int = 5_000_000,
                limit: Optional[int] = None) -> CycleSearch:
    """Embedded cycles of the given length through the directed anchor edge.

    Each cycle is reported once, as a vertex list starting ``anchor[0], anchor[1]``.
    The search stops early once ``limit`` cycles are found (not a truncation).
    """
    u0, u1 = anchor
    if u0 not in frag or u1 not in frag or u1 not in frag.neighbors(u0):
        raise InvalidInput("anchor edge is not in the fragment")
    if length < 3:
        return CycleSearch([], False, 0)
    nb = {x: [y for y in frag.neighbors(x) if len(frag.neighbors(y)) >= 2] for x in frag.vertices}
    # breadth-first distances back to the start vertex
    dist = {u0: 0}
    queue = [u0]
    for x in queue:
        for y in nb[x]:
            if y not in dist:
                dist[y] = dist[x] + 1
                queue.append(y)
    path = [u0, u1]
    on_path = {u0, u1}
    found: list = []
    nodes = 0
    truncated = False
    inf = length + 1

    def rec() -> bool:
        nonlocal nodes, truncated
        nodes += 1
        if nodes > budget:
            truncated = True
            return True
        x = path[-1]
        remaining = length - len(path)
        if remaining == 0:
            if u0 in nb[x]:
                found.append(list(path))
                if limit is not None and len(found) >= limit:
                    return True
            return False
        for y in nb[x]:
            if y in on_path:
                continue
            if dist.get(y, inf) > remaining:
                continue
            path.append(y)
            on_path.add(y)
            stop = rec()
            path.pop()
            on_path.discard(y)
            if stop:
                return True
        return False

    rec()
    return CycleSearch(found, truncated, nodes)


# ------------------------------------------------------------------ export

def fragment_to_json(frag: Fragment) -> dict:
    return {
        "n": frag.pres.k,
        "letter": frag.pres.letter,
        "orders": ["inf" if o is None else o for o in frag.pres.orders],
        "vertices": [{"label": str(u.label), "v": u.vtx} for u in frag.vertices],
        "edges": [list(e) for e in frag.edge_list()],
    }


def fragment_from_json(data: dict, letter: Optional[str] = None) -> Fragment:
    try:
        n = int(data["n"])
        letter = letter or data.get("letter", "s")
        orders = [None if o == "inf" else int(o) for o in data["orders"]]
        pres = Presentation.cycle(n, orders, letter)
        base = pres.infinite()
        verts = [canonical_vertex(parse_element(x["label"], base), int(x["v"])) for x in data["vertices"]]
        edges = {edge_key(verts[i], verts[j]) for i, j in data["edges"]}
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise InvalidInput(f"bad fragment json: {exc}") from exc
    return Fragment(base, verts, edges, {})


def fragment_to_dot(frag: Fragment, name: str = "fragment") -> str:
    k = frag.pres.k
    scheme = f"set3{min(max(k, 3), 12)}" if k <= 12 else "set312"
    lines = [f"graph {name} {{", f"  node [style=filled, colorscheme={scheme}];"]
    for u in frag.vertices:
        lines.append(f'  "{u.label}|v{u.vtx}" [fillcolor={u.vtx % 12 + 1}, class="{u.vtx}"];')
    for i, j in frag.edge_list():
        a, b = frag.vertices[i], frag.vertices[j]
        lines.append(f'  "{a.label}|v{a.vtx}" -- "{b.label}|v{b.vtx}";')
    lines.append("}")
    return "\n".join(lines) + "\n"

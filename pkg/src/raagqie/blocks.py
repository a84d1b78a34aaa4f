"""Blocks: unions of copies of C_n whose boundary is an m-cycle.

A marked block ``B(alpha, eps, kappa; h)`` sends ``v_i`` to
``h . rho^kappa(iota_eps(v_{i+alpha}))``.  All geometry is computed once for
``h = 1`` (a :class:`BlockShape`, cached per ``(n, p, q, eps, kappa)``) and
translated by ``h`` on demand.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from .errors import ContractError, InvalidInput
from .extgraph import (ExtVertex, Fragment, canonical_vertex, conjugate, copy_edges,
                       copy_vertices, find_cycles, translate)
from .words import GroupElement, Presentation, format_syllables


@dataclass(frozen=True)
class Decomposition:
    n: int
    p: int
    q: int

    def __post_init__(self):
        if self.n <= 6:
            raise InvalidInput(f"blocks need n > 6, got n={self.n}")
        if self.p < 1 or self.q < 0:
            raise InvalidInput(f"need p >= 1 and q >= 0, got p={self.p}, q={self.q}")

    @property
    def m(self) -> int:
        return self.n + self.p * (self.n - 4) + self.q * (self.n - 2)

    @classmethod
    def from_m(cls, n: int, m: int, p: Optional[int] = None) -> "Decomposition":
        """Solve ``m = n + p(n-4) + q(n-2)``, preferring the given p, else the smallest one."""
        ps = [p] if p is not None else range(1, m // max(n - 4, 1) + 1)
        for pp in ps:
            rest = m - n - pp * (n - 4)
            if rest >= 0 and rest % (n - 2) == 0:
                return cls(n, pp, rest // (n - 2))
        raise InvalidInput(f"m={m} has no decomposition n+p(n-4)+q(n-2) with n={n}, p>=1")

    def target(self) -> Presentation:
        return Presentation.cycle(self.n, letter="t")

    def source(self, orders=None) -> Presentation:
        return Presentation.cycle(self.m, orders, letter="s")


def rotate(g: GroupElement, kappa: int) -> GroupElement:
    """The rotation ``rho^kappa`` on a cycle-graph element: add kappa to every index."""
    k = g.pres.k
    return GroupElement(g.pres, tuple(((x + kappa) % k, e) for x, e in g.syllables))


def rotate_vertex(u: ExtVertex, kappa: int) -> ExtVertex:
    return canonical_vertex(rotate(u.label, kappa), u.vtx + kappa)


def basic_labels(n: int, p: int, q: int, eps: int, kappa: int = 0) -> tuple:
    """Copy labels of the basic block, built by appending the stage suffixes."""
    if eps not in (1, -1):
        raise InvalidInput("eps must be +1 or -1")
    T = Presentation.cycle(n, letter="t")
    syls: list = []
    out = [GroupElement.identity(T)]
    for k in range(p + q):
        sgn = eps if k % 2 == 0 else -eps
        if k < p:
            syls.append((2 * sgn, 1))
        else:
            syls.extend([(sgn, 1), (2 * sgn, 1)])
        out.append(GroupElement(T, tuple(syls)))
    return tuple(rotate(g, kappa) for g in out)


@dataclass(frozen=True)
class Shortcut:
    early: ExtVertex
    late: ExtVertex
    early_pos: int
    late_pos: int
    depth: int


class BlockShape:
    """The block ``B(0, eps, kappa; 1)`` with all derived lookup tables."""

    def __init__(self, d: Decomposition, eps: int, kappa: int):
        self.d = d
        self.eps = eps
        self.kappa = kappa % d.n
        self.labels = basic_labels(d.n, d.p, d.q, eps, self.kappa)
        self.copies = [copy_vertices(g) for g in self.labels]
        self.members: dict = {}
        for k, verts in enumerate(self.copies):
            for u in verts:
                self.members.setdefault(u, []).append(k)
        self.members = {u: tuple(ks) for u, ks in self.members.items()}
        self.depth = {u: ks[0] for u, ks in self.members.items()}
        edges = set()
        for g in self.labels:
            edges |= copy_edges(g)
        self.edges = frozenset(edges)
        self.boundary = self._find_boundary()
        self.position = {u: i for i, u in enumerate(self.boundary)}
        self.shortcuts = self._find_shortcuts()
        self.shortcut_of = {}
        for s in self.shortcuts:
            self.shortcut_of[s.early] = ("early", s)
            self.shortcut_of[s.late] = ("late", s)
        rel = {}
        for a in self.labels:
            ainv = a.inverse()
            for b in self.labels:
                x = ainv * b
                rel[x] = None
        self.relative_labels = tuple(sorted(rel, key=lambda x: (x.length(), x.syllables)))
        self._minlab: dict = {}

    def _find_boundary(self) -> tuple:
        d = self.d
        T = d.target()
        verts = sorted(self.members)
        frag = Fragment(T, verts, set(self.edges))
        one = GroupElement.identity(T)
        u0 = canonical_vertex(one, self.kappa)
        u1 = canonical_vertex(one, self.kappa + self.eps)
        res = find_cycles(frag, d.m, (u0, u1))
        if res.truncated:
            raise ContractError("boundary search exceeded its budget")
        if len(res.cycles) != 1:
            raise ContractError(f"expected one boundary cycle of length {d.m}, found {len(res.cycles)}")
        return tuple(res.cycles[0])

    def _find_shortcuts(self) -> tuple:
        m, n = self.d.m, self.d.n
        out = []
        for e in self.edges:
            u, w = tuple(e)
            i, j = self.position.get(u), self.position.get(w)
            if i is None or j is None or (i - j) % m in (1, m - 1):
                continue
            ru, rw = (u.vtx - self.kappa) % n, (w.vtx - self.kappa) % n
            if ru in (1, n - 1) and rw in (2, n - 2):
                early, late = u, w
            elif rw in (1, n - 1) and ru in (2, n - 2):
                early, late = w, u
            else:
                raise ContractError(f"chord {u}, {w} is not a shortcut pair")
            if self.depth[early] != self.depth[late]:
                raise ContractError("shortcut pair with unequal depths")
            out.append(Shortcut(early, late, self.position[early], self.position[late], self.depth[early]))
        out.sort(key=lambda s: s.depth)
        if len(out) != self.d.q:
            raise ContractError(f"expected {self.d.q} shortcut pairs, found {len(out)}")
        return tuple(out)

    def min_label(self, base: int, u: ExtVertex) -> GroupElement:
        """Minimal relative label ``x = labels[base]^-1 labels[k]`` over copies k containing u.

        Only labels that move between copies of the block are candidates, so
        ``labels[base] x`` is again a copy label.
        """
        key = (base, u)
        hit = self._minlab.get(key)
        if hit is not None:
            return hit
        if u not in self.members:
            raise InvalidInput(f"vertex {u} is not in the block")
        inv = self.labels[base].inverse()
        cands = [inv * self.labels[k] for k in self.members[u]]
        x = min(cands, key=lambda g: (g.length(), g.syllables))
        self._minlab[key] = x
        return x


def block_shape(d: Decomposition, eps: int, kappa: int) -> BlockShape:
    return _block_shape(d, eps, kappa % d.n)


@lru_cache(maxsize=None)
def _block_shape(d: Decomposition, eps: int, kappa: int) -> BlockShape:
    return BlockShape(d, eps, kappa)


def hat(a: int) -> int:
    if a == 0:
        raise InvalidInput("exponent must be nonzero")
    return a + 1 if a > 0 else a


class MarkedBlock:
    """The marked block ``B(alpha, eps, kappa; h)``."""

    __slots__ = ("d", "alpha", "eps", "kappa", "h", "shape", "_hinv")

    def __init__(self, d: Decomposition, alpha: int, eps: int, kappa: int, h: Optional[GroupElement] = None):
        if eps not in (1, -1):
            raise InvalidInput("eps must be +1 or -1")
        T = d.target()
        if h is None:
            h = GroupElement.identity(T)
        elif h.pres != T:
            raise InvalidInput("block base must lie in the target group")
        self.d = d
        self.alpha = alpha % d.m
        self.eps = eps
        self.kappa = kappa % d.n
        self.h = h
        self.shape = block_shape(d, eps, self.kappa)
        self._hinv = None

    def key(self) -> tuple:
        return (self.alpha, self.eps, self.kappa, self.h)

    def __eq__(self, other):
        return isinstance(other, MarkedBlock) and self.d == other.d and self.key() == other.key()

    def __hash__(self):
        return hash((self.d, self.key()))

    def __repr__(self):
        sign = "+" if self.eps > 0 else "-"
        return f"B({self.alpha},{sign},{self.kappa};{self.h or '1'})"

    # -- coordinates
    def relative(self, w: ExtVertex) -> ExtVertex:
        if self.h.is_identity():
            return w
        if self._hinv is None:
            self._hinv = self.h.inverse()
        return translate(self._hinv, w)

    def absolute(self, u: ExtVertex) -> ExtVertex:
        return u if self.h.is_identity() else translate(self.h, u)

    def relative_boundary(self, i: int) -> ExtVertex:
        return self.shape.boundary[(i + self.alpha) % self.d.m]

    def __call__(self, i: int) -> ExtVertex:
        """Image of ``v_i``."""
        return self.absolute(self.relative_boundary(i))

    @property
    def labels(self) -> tuple:
        return tuple(self.h * x for x in self.shape.labels)

    @property
    def relative_labels(self) -> tuple:
        return self.shape.labels

    @property
    def boundary(self) -> tuple:
        return tuple(self(i) for i in range(self.d.m))

    def vertices(self) -> list:
        return [self.absolute(u) for u in sorted(self.shape.members)]

    def __contains__(self, w: ExtVertex) -> bool:
        return self.relative(w) in self.shape.members

    def position(self, w: ExtVertex) -> Optional[int]:
        i = self.shape.position.get(self.relative(w))
        return None if i is None else (i - self.alpha) % self.d.m

    def depth(self, w: ExtVertex) -> int:
        u = self.relative(w)
        if u not in self.shape.members:
            raise InvalidInput(f"vertex {w} is not in the block")
        return self.shape.depth[u]

    def shortcuts(self) -> list:
        m = self.d.m
        return [Shortcut(self.absolute(s.early), self.absolute(s.late),
                         (s.early_pos - self.alpha) % m, (s.late_pos - self.alpha) % m, s.depth)
                for s in self.shape.shortcuts]

    def shortcut_kind(self, w: ExtVertex) -> Optional[str]:
        hit = self.shape.shortcut_of.get(self.relative(w))
        return None if hit is None else hit[0]

    def min_relative_label(self, base: int, w: ExtVertex) -> tuple:
        """(l, j) with ``w = labels[base] l . w_j`` and l minimal."""
        if not 0 <= base < len(self.shape.labels):
            raise InvalidInput(f"copy index {base} out of range")
        u = self.relative(w)
        return self.shape.min_label(base, u), u.vtx

    def copy_index(self, label: GroupElement) -> Optional[int]:
        try:
            return self.labels.index(label)
        except ValueError:
            return None

    # -- transport
    def doub(self, w: ExtVertex, a: int) -> "MarkedBlock":
        if a == 0:
            raise InvalidInput("doubling exponent must be nonzero")
        u = self.relative(w)
        if u not in self.shape.members:
            raise InvalidInput(f"vertex {w} is not in the block")
        c = conjugate(u) ** a
        return MarkedBlock(self.d, self.alpha, self.eps, self.kappa, self.h * c)

    def glide(self, w: ExtVertex, a: int) -> "MarkedBlock":
        if a == 0:
            raise InvalidInput("gliding exponent must be nonzero")
        u = self.relative(w)
        kind = self.shape.shortcut_of.get(u)
        if kind is None:
            raise InvalidInput(f"vertex {w} is not a shortcut")
        i = (self.shape.position[u] - self.alpha) % self.d.m
        delta = self.shape.depth[u]
        ell = self.shape.min_label(0, u)
        T = self.d.target()
        eps2 = self.eps * (-1) ** delta
        h2 = self.h * ell * GroupElement.gen(T, u.vtx, hat(a))
        if kind[0] == "early":
            return MarkedBlock(self.d, 1 - i, eps2, self.kappa, h2)
        n = self.d.n
        return MarkedBlock(self.d, 3 - n - i, eps2, self.kappa - eps2, h2)

    # -- export
    def to_json(self) -> dict:
        letter = "t"
        return {
            "alpha": self.alpha,
            "eps": "+" if self.eps > 0 else "-",
            "kappa": self.kappa,
            "h": format_syllables(self.h.syllables, letter),
            "labels": [format_syllables(g.syllables, letter) for g in self.labels],
            "boundary": [{"label": format_syllables(u.label.syllables, letter), "v": u.vtx}
                         for u in self.boundary],
            "shortcuts": [{"early": s.early_pos, "late": s.late_pos} for s in self.shortcuts()],
        }

    def to_dot(self, name: str = "block") -> str:
        letter = "t"
        names = {}
        lines = [f"graph {name} {{", "  node [shape=circle, fontsize=9];"]
        verts = self.vertices()
        for idx, u in enumerate(verts):
            names[u] = f"n{idx}"
        bpos = {u: i for i, u in enumerate(self.boundary)}
        for k, g in enumerate(self.labels):
            lab = format_syllables(g.syllables, letter) or "1"
            lines.append(f"  subgraph cluster_{k} {{")
            lines.append(f'    label="{lab}";')
            for u in copy_vertices(g):
                extra = f" v{bpos[u]}" if u in bpos else ""
                lines.append(f'    {names[u]} [label="{u.name(letter)}{extra}"];')
            lines.append("  }")
        done = set()
        for g in self.labels:
            for e in sorted(copy_edges(g), key=lambda e: sorted(names[x] for x in e)):
                a, b = sorted(names[x] for x in e)
                if (a, b) not in done:
                    done.add((a, b))
                    lines.append(f"  {a} -- {b};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_block(d: Decomposition, alpha: int = 0, eps: int = 1, kappa: int = 0,
                h: Optional[GroupElement] = None) -> MarkedBlock:
    return MarkedBlock(d, alpha, eps, kappa, h)

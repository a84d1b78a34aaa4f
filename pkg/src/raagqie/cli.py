"""Command-line front end: ``raagqie <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from . import verify as V
from .blocks import Decomposition, build_block
from .embed import VARIANTS, Embedding, EmbeddingConfig
from .errors import ArtifactError, InvalidInput, WordParseError
from .extgraph import build_fragment, fragment_to_dot, fragment_to_json
from .words import Presentation, distance, format_syllables, parse_element, parse_syllables

EXIT_USAGE = 64
EXIT_DOMAIN = 65


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def parse_orders(text: Optional[str], k: int):
    """``inf``, an integer, or a comma list of those (one per vertex)."""
    if text is None:
        return None
    parts = [x.strip() for x in text.split(",") if x.strip()]
    vals = []
    for x in parts:
        if x in ("inf", "oo", "infinity"):
            vals.append(None)
        else:
            try:
                v = int(x)
            except ValueError:
                raise UsageError(f"bad order {x!r}") from None
            vals.append(v)
    if len(vals) == 1:
        return tuple(vals * k)
    if len(vals) != k:
        raise InvalidInput(f"expected 1 or {k} orders, got {len(vals)}")
    return tuple(vals)


def _decomposition(args) -> Decomposition:
    if args.p is not None and args.q is not None:
        d = Decomposition(args.n, args.p, args.q)
        if args.m is not None and args.m != d.m:
            raise InvalidInput(f"m={args.m} disagrees with n + p(n-4) + q(n-2) = {d.m}")
        return d
    if args.m is not None:
        return Decomposition.from_m(args.n, args.m, args.p)
    raise InvalidInput("give --p and --q, or --m")


def _embedding(args) -> Embedding:
    d = _decomposition(args)
    cfg = EmbeddingConfig(d.n, d.p, d.q,
                          source_orders=parse_orders(args.source_orders, d.m),
                          target_orders=parse_orders(args.target_orders, d.n),
                          variant=args.variant, k=args.k)
    return Embedding(cfg)


def _emit(obj, fmt: str, text: str, out) -> None:
    if fmt == "json":
        print(json.dumps(obj, sort_keys=True), file=out)
    else:
        print(text, file=out)


def _letter_of(word: str, default: str = "s") -> str:
    letter, _ = parse_syllables(word)
    return letter or default


# ------------------------------------------------------------ subcommands

def cmd_reduce(args, out) -> int:
    pres = Presentation.cycle(args.n, parse_orders(args.orders, args.n), letter=_letter_of(args.word))
    g = parse_element(args.word, pres)
    _emit(g.to_json(), args.format, str(g) if g.syllables else "1", out)
    return 0


def cmd_dist(args, out) -> int:
    letter = _letter_of(args.word1)
    pres = Presentation.cycle(args.n, parse_orders(args.orders, args.n), letter=letter)
    g, h = parse_element(args.word1, pres), parse_element(args.word2, pres)
    dist = distance(g, h)
    _emit({"distance": dist}, args.format, str(dist), out)
    return 0


def cmd_embed(args, out) -> int:
    emb = _embedding(args)
    if emb.cfg.variant == "graph_product":
        g = parse_element(args.word, emb.S_quot)
        lw = emb.F_lazy(g, substitute=True)
        reduced = emb.F(g)
    else:
        g = parse_element(args.word, emb.S)
        if args.lazy:
            lw = emb.F_lazy(g)
        else:
            lw = emb.F_lift(g)
        reduced = emb.F(g) if emb.cfg.variant != "exotic_q0" else emb.phi_hat(g)
    data = lw.to_json()
    data["reduced"] = format_syllables(reduced.syllables, "t")
    data["variant"] = emb.cfg.variant
    data["m"] = emb.d.m
    lifted = " ".join(f"[{x['label'] or '1'}] {format_syllables([(x['t']['i'], x['t']['e'])], 't')}"
                      for x in data["lifted"])
    text = f"m: {emb.d.m}\nlifted: {lifted or '1'}\nreduced: {data['reduced'] or '1'}"
    _emit(data, args.format, text, out)
    return 0


def cmd_block(args, out) -> int:
    d = _decomposition(args)
    h = parse_element(args.h, d.target()) if args.h else None
    eps = {"+": 1, "-": -1}.get(args.eps)
    if eps is None:
        eps = int(args.eps)
    B = build_block(d, args.alpha, eps, args.kappa, h)
    if args.format == "dot":
        print(B.to_dot(), file=out)
        return 0
    data = B.to_json()
    lines = [f"m: {d.m}", "labels: " + ", ".join(format_syllables(x.syllables, "t") or "1" for x in B.labels),
             "boundary: " + " ".join(u.name("t") for u in B.boundary),
             "shortcuts: " + ", ".join(f"{s.early.name('t')} ~ {s.late.name('t')}" for s in B.shortcuts())]
    _emit(data, args.format, "\n".join(lines), out)
    return 0


def cmd_fragment(args, out) -> int:
    pres = Presentation.cycle(args.n, letter=args.letter)
    frag = build_fragment(pres, args.radius, exponent_bound=args.exponent_bound, budget=args.budget)
    if args.format == "dot":
        print(fragment_to_dot(frag), file=out)
    else:
        text = f"vertices: {len(frag.vertices)}\nedges: {len(frag.edges)}"
        _emit(fragment_to_json(frag), args.format, text, out)
    return 0


SUITES = ("lipschitz", "colipschitz", "well-defined", "homo", "lazy", "prefix", "nonhomo", "exotic",
          "h1-bounds", "arithmetic", "graph-product-audit", "mk-homo", "power-formula", "double",
          "adjacency", "injectivity")


EMBEDDING_SUITES = ("lipschitz", "colipschitz", "well-defined", "homo", "lazy", "prefix", "nonhomo",
                    "exotic", "injectivity")


def _default_pq(args) -> None:
    """p = 1 when neither p nor m is given; q = 0 when p is given alone."""
    if args.p is None and args.m is None:
        args.p = 1
    if args.q is None and args.m is None:
        args.q = 0


def _run_suite(args):
    name = args.suite
    seed = args.seed
    if name in EMBEDDING_SUITES:
        emb = _embedding(args)
        samples = args.samples
        if name == "lipschitz":
            return V.lipschitz_scan(emb, args.mode, radius=args.radius or 4, samples=samples or 1000,
                                    max_len=args.max_len or 40, seed=seed)
        if name == "colipschitz":
            return V.colipschitz_scan(emb, samples=samples or 1000, max_len=args.max_len or 20, seed=seed)
        if name == "well-defined":
            return V.well_defined_suite(emb, samples=samples or 1000, seed=seed)
        if name == "homo":
            return V.homo_suite(emb, pairs=samples or 1000, seed=seed)
        if name == "lazy":
            return V.lazy_geodesic_suite(emb, samples=samples or 1000, seed=seed)
        if name == "prefix":
            return V.prefix_suite(emb, pairs=samples or 1000, seed=seed)
        if name == "nonhomo":
            return V.nonhomo_witness(emb)
        if name == "exotic":
            return V.exotic_suite(emb, samples=samples or 300, seed=seed)
        return V.injectivity_suite(emb, max_syllables=args.max_syllables, max_exp=args.max_exp)
    if name == "h1-bounds":
        return V.h1_bounds_suite(args.n, args.max_copies, args.radius or 2)
    if name == "arithmetic":
        lengths = tuple(int(x) for x in args.lengths.split(",")) if args.lengths else (7, 8, 9, 10, 11, 12, 13, 14, 15)
        return V.arithmetic_spot_checks(args.n, args.radius or 2, lengths, args.rule, args.budget)
    if name == "graph-product-audit":
        return V.graph_product_audit(args.n, args.p or 2, args.q if args.q is not None else 1,
                                     args.M, args.N, samples=args.samples or 1000, seed=seed,
                                     allowed_top=args.allowed_top)
    if name == "mk-homo":
        return V.mk_homo_suite(args.n, args.p or 1, args.M, args.k, pairs=args.samples or 1000, seed=seed)
    if name == "power-formula":
        return V.power_formula_suite(args.n, args.p or 1, args.q if args.q is not None else 1)
    if name == "double":
        return V.double_suite(args.n, args.radius or 5)
    return V.adjacency_suite(args.n, args.radius or 2)


def cmd_verify(args, out) -> int:
    rep = _run_suite(args)
    data = rep.to_json()
    if args.format == "text":
        print(f"{args.suite}: {rep.status}", file=out)
    else:
        print(json.dumps(data, sort_keys=True, default=str), file=out)
    return V.EXIT_CODES[rep.status]


# ----------------------------------------------------------------- parser

def _add_decomposition(p, n_default=7):
    p.add_argument("--n", type=int, default=n_default, help="length of the target cycle")
    p.add_argument("--p", type=int, default=None)
    p.add_argument("--q", type=int, default=None)
    p.add_argument("--m", type=int, default=None, help="length of the source cycle (derived from p, q)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="raagqie", description=__doc__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("reduce", help="normal form of a word over C_n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--orders", default=None)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("word")

    p = sub.add_parser("dist", help="word distance between two elements")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--orders", default=None)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("word1")
    p.add_argument("word2")

    p = sub.add_parser("embed", help="lifted and reduced image F(g)")
    _add_decomposition(p)
    p.add_argument("--source-orders", default=None)
    p.add_argument("--target-orders", default=None)
    p.add_argument("--variant", choices=VARIANTS, default="standard")
    p.add_argument("--k", type=int, default=1, help="doubling multiplier of the Mk variant")
    p.add_argument("--lazy", action="store_true", help="lift the lazy representative")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("word")

    p = sub.add_parser("block", help="a marked block")
    _add_decomposition(p)
    p.add_argument("--alpha", type=int, default=0)
    p.add_argument("--eps", default="+")
    p.add_argument("--kappa", type=int, default=0)
    p.add_argument("--h", default=None, help="base element as a t-word")
    p.add_argument("--format", choices=("text", "json", "dot"), default="text")

    p = sub.add_parser("fragment", help="union of copies g.C_n with |g| <= radius")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--radius", type=int, default=1)
    p.add_argument("--exponent-bound", type=int, default=None)
    p.add_argument("--budget", type=int, default=200_000)
    p.add_argument("--letter", default="t")
    p.add_argument("--format", choices=("text", "json", "dot"), default="text")

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", choices=SUITES)
    _add_decomposition(p)
    p.add_argument("--source-orders", default=None)
    p.add_argument("--target-orders", default=None)
    p.add_argument("--variant", choices=VARIANTS, default="standard")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--M", type=int, default=3, help="source order for the finite-order suites")
    p.add_argument("--N", type=int, default=5, help="target order for the graph-product audit")
    p.add_argument("--allowed-top", type=int, default=None)
    p.add_argument("--mode", choices=("random", "exhaustive"), default="random")
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--max-len", type=int, default=None)
    p.add_argument("--radius", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=5_000_000)
    p.add_argument("--rule", choices=("qie", "cycle"), default="qie")
    p.add_argument("--lengths", default=None, help="comma list of cycle lengths")
    p.add_argument("--max-copies", type=int, default=3)
    p.add_argument("--max-syllables", type=int, default=3)
    p.add_argument("--max-exp", type=int, default=2)
    p.add_argument("--format", choices=("text", "json"), default="json")
    return parser


COMMANDS = {"reduce": cmd_reduce, "dist": cmd_dist, "embed": cmd_embed, "block": cmd_block,
            "fragment": cmd_fragment, "verify": cmd_verify}


def run(argv, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.command in ("embed", "block") or (args.command == "verify" and args.suite in EMBEDDING_SUITES):
            _default_pq(args)
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(str(exc), file=err)
        return EXIT_USAGE
    except WordParseError as exc:
        print(f"raagqie: parse error: {exc}", file=err)
        return EXIT_USAGE
    except (ArtifactError, ValueError) as exc:
        print(f"raagqie: {exc}", file=err)
        return EXIT_DOMAIN


def main(argv=None) -> None:
    sys.exit(run(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()

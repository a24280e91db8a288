"""Command-line front end.  Every command prints one canonical JSON report.

Exit codes: 0 on pass or a value, 1 on a checked failure or an empty
search, 2 on malformed input.  ``--expect`` turns the exit code into a
comparison against the anticipated outcome.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import re
import sys
import time
from typing import Optional

from . import __version__
from .entangle import (
    LinearTupleSequence,
    TreeTupleSequence,
    check_separated,
    complement,
    delta_bound,
    format_type,
    nested_triples,
    parse_type,
    project_and_group,
    realize_linear,
    realize_tree,
    satisfies_linear,
    satisfies_tree,
    section4_counterexample,
    sigma_reduce,
)
from .forcing import (
    AmalgamationError,
    InsertionRequest,
    amalgamate,
    amalgamate_with_type,
    compatible,
    cross_relations,
    multi_insert,
    spec_from_json,
)
from .leveled_tree import (
    LeveledTree,
    PerfectBinaryTree,
    build_pseudo_generic,
    check_normal,
    delta,
    dense_below,
    derived_at,
    derived_power,
    full_tree,
    max_antichain,
    max_chain,
    path_tree,
    projection,
    split_embedding,
    tag_to_json,
    tree_from_json,
    tree_to_json,
)
from .lex import (
    LinearOrder,
    check_sibling_witness,
    classify_pair_relation,
    double,
    doubling_witness,
    lex_compare,
    lex_sorted,
    meet_height_violations,
    order_axiom_violations,
)
from .order_core import dumps, node_from_json
from .order_core import (
    Condition,
    Node,
    PreconditionError,
    condition_from_json,
    condition_to_json,
    condition_violations,
    end_extends,
    fresh_rational,
    above,
    rational_from_json,
    rational_to_json,
    restrict,
)
from .pstar import (
    PStarCondition,
    extract_specializer,
    pstar_amalgamate,
    pstar_extends,
    pstar_from_json,
    pstar_to_json,
    pstar_violations,
    specializer_conflicts,
)

EXIT_OK, EXIT_FAIL, EXIT_MALFORMED = 0, 1, 2
OUTCOMES = ("pass", "fail", "some", "none", "value")


class Malformed(Exception):
    """Input that cannot be read as the expected structure."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise Malformed(message)


# -- value rendering -----------------------------------------------------------

def node_out(x) -> list:
    return [x.level, tag_to_json(x.tag)]


def tuple_out(t) -> list:
    return [node_out(x) for x in t]


def _plain(v):
    """Make linear-order elements JSON friendly (doubled elements are pairs)."""
    if isinstance(v, tuple):
        return [_plain(u) for u in v]
    return v


# -- inputs ----------------------------------------------------------------------

class Inputs:
    """Loads inputs once and records a digest of each for the report."""

    def __init__(self, args):
        self.args = args
        self.digests: dict = {}
        self._doc = None

    @property
    def doc(self):
        if self._doc is None:
            path = self.args.input
            if path is None:
                raise Malformed("this command needs --in FILE")
            try:
                raw = sys.stdin.buffer.read() if path == "-" else open(path, "rb").read()
            except OSError as exc:
                raise Malformed(f"cannot read {path}: {exc.strerror}") from exc
            self.digests["in"] = "sha256:" + hashlib.sha256(raw).hexdigest()
            try:
                self._doc = json.loads(raw.decode("utf-8"))
            except (UnicodeDecodeError, json.JSONDecodeError) as exc:
                raise Malformed(f"{path} is not UTF-8 JSON: {exc}") from exc
        return self._doc

    def field(self, name, default=...):
        doc = self.doc
        if not isinstance(doc, dict):
            raise Malformed("input document is not a JSON object")
        if name not in doc:
            if default is ...:
                raise Malformed(f"input lacks the field {name!r}")
            return default
        return doc[name]

    def tree(self, key="tree") -> LeveledTree:
        """The tree from ``--tree SPEC``, else the ``tree`` field, else the whole document."""
        if getattr(self.args, "tree", None):
            self.digests["tree"] = self.args.tree
            t = parse_tree_spec(self.args.tree)
            if not isinstance(t, LeveledTree):
                raise Malformed(f"{self.args.tree} is an implicit tree; this command needs a finite one")
            return t
        doc = self.doc
        obj = doc.get(key, doc) if isinstance(doc, dict) else doc
        return read_tree(obj)

    def type_vector(self, default=None):
        raw = self.args.type if getattr(self.args, "type", None) is not None else None
        if raw is None and self.args.input is not None:
            raw = self.field("type", None)
        if raw is None:
            raw = default
        if raw is None:
            raise Malformed("a type is required (--type BITS or a 'type' field)")
        return parse_type(raw)


def read_tree(obj) -> LeveledTree:
    try:
        return tree_from_json(obj)
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        if isinstance(exc, PreconditionError):
            raise
        raise Malformed(f"not a leveled tree: {exc}") from exc


def read_condition(obj) -> Condition:
    try:
        return condition_from_json(obj)
    except PreconditionError:
        raise
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise Malformed(f"not a condition: {exc}") from exc


def read_pstar(obj) -> PStarCondition:
    try:
        return pstar_from_json(obj)
    except PreconditionError:
        raise
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise Malformed(f"not a colored condition: {exc}") from exc


def _index(seq, i, what):
    if not isinstance(i, int) or isinstance(i, bool) or not 0 <= i < len(seq):
        raise Malformed(f"{what} index {i!r} is out of range")
    return seq[i]


def cond_nodes(p: Condition, idxs, what="node"):
    nodes = sorted(p.nodes)
    return [_index(nodes, i, what) for i in idxs]


def tree_nodes(t: LeveledTree, idxs, what="node"):
    return [_index(t.nodes, i, what) for i in idxs]


_SPEC_RE = re.compile(r"^\s*(\w+)\s*\((.*)\)\s*$")


def parse_tree_spec(text: str):
    """``gen(seed=7,h=4)``, ``gen(h=3,widths=1:2:4)``, ``full(h=3,b=2,r=1)``,
    ``path(h=3,r=2)`` or ``perfect(h=30,seed=1)`` (implicit)."""
    m = _SPEC_RE.match(text)
    if not m:
        raise Malformed(f"tree spec {text!r} is not of the form kind(key=value,...)")
    kind, body = m.group(1), m.group(2).strip()
    kw = {}
    for part in filter(None, (s.strip() for s in body.split(","))):
        if "=" not in part:
            raise Malformed(f"tree spec argument {part!r} lacks '='")
        k, v = (s.strip() for s in part.split("=", 1))
        kw[k] = v

    def num(key, default=None):
        if key not in kw:
            if default is None:
                raise Malformed(f"tree spec {kind} needs {key}=")
            return default
        try:
            return int(kw[key])
        except ValueError as exc:
            raise Malformed(f"{key}={kw[key]!r} is not an integer") from exc

    known = {"gen": {"seed", "h", "widths"}, "full": {"h", "b", "r"}, "path": {"h", "r"},
             "perfect": {"h", "seed"}}
    if kind not in known:
        raise Malformed(f"unknown tree kind {kind!r}")
    extra = set(kw) - known[kind]
    if extra:
        raise Malformed(f"tree spec {kind} does not take {sorted(extra)}")
    if kind == "gen":
        widths = None
        if "widths" in kw:
            widths = parse_widths(kw["widths"].replace(":", ","))
        return build_pseudo_generic(num("h"), widths, seed=num("seed", 0))
    if kind == "full":
        return full_tree(num("h"), num("b", 2), num("r", 1))
    if kind == "path":
        return path_tree(num("h"), num("r", 1))
    return PerfectBinaryTree(num("h"), num("seed", 0))


def parse_widths(text: Optional[str]):
    if text is None:
        return None
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise Malformed(f"widths {text!r} are not comma-separated integers") from exc


def read_linear_sequence(obj) -> LinearTupleSequence:
    if not isinstance(obj, dict) or "tuples" not in obj:
        raise Malformed("a linear sequence needs 'tuples'")
    if "order" in obj:
        order = LinearOrder(_hashable(v) for v in obj["order"])
    elif "size" in obj:
        order = LinearOrder.range(int(obj["size"]))
    else:
        raise Malformed("a linear sequence needs 'size' or 'order'")
    tuples = [tuple(_hashable(v) for v in t) for t in obj["tuples"]]
    seq = LinearTupleSequence(order, tuples, increasing=bool(obj.get("increasing", True)))
    if "n" in obj and tuples and seq.n != obj["n"]:
        raise Malformed(f"declared n={obj['n']} but tuples have arity {seq.n}")
    return seq


def _hashable(v):
    return tuple(_hashable(u) for u in v) if isinstance(v, list) else v


def read_tree_sequence(obj, tree: Optional[LeveledTree] = None, increasing=False) -> TreeTupleSequence:
    if not isinstance(obj, dict) or "tuples" not in obj:
        raise Malformed("a tree sequence needs 'tuples'")
    t = tree if tree is not None else read_tree(obj["tree"])
    tuples = [tuple(tree_nodes(t, tup, "tuple")) for tup in obj["tuples"]]
    base = obj.get("base")
    base = tuple(tree_nodes(t, base, "base")) if base is not None else None
    return TreeTupleSequence(t, tuples, base=base, increasing=increasing)


def linear_sequence_out(seq: LinearTupleSequence) -> dict:
    return {"n": seq.n, "increasing": seq.increasing, "order": [_plain(v) for v in seq.order],
            "tuples": [[_plain(v) for v in t] for t in seq.tuples]}


def tree_sequence_out(seq: TreeTupleSequence) -> dict:
    out = {"n": seq.n, "tuples": [tuple_out(t) for t in seq.tuples]}
    if seq.base is not None:
        out["base"] = tuple_out(seq.base)
    return out


# -- command handlers --------------------------------------------------------------
#
# Each handler returns (outcome, result, violations).

def cmd_validate_condition(inp, args):
    p = read_condition(inp.doc)
    bad = condition_violations(p)
    return ("fail" if bad else "pass"), {"valid": not bad, "nodes": len(p)}, bad


def _spec(inp, p, q):
    try:
        return spec_from_json(inp.field("spec"), p, q)
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise Malformed(f"bad amalgamation spec: {exc}") from exc


def cmd_amalgamate(inp, args):
    p, q = read_condition(inp.field("p")), read_condition(inp.field("q"))
    if args.typed:
        tuples = inp.field("tuples")
        if not (isinstance(tuples, list) and len(tuples) == 2):
            raise Malformed("'tuples' must be [[xi-side indices], [beta-side indices]]")
        a_xi, a_beta = cond_nodes(p, tuples[0]), cond_nodes(q, tuples[1])
        starred = inp.field("starred", None)
        starred = cond_nodes(q, starred) if starred is not None else None
        g = inp.type_vector()
        r = amalgamate_with_type(p, q, (a_xi, a_beta), g, int(inp.field("alpha")),
                                 int(inp.field("beta")), starred)
        return "value", {"condition": condition_to_json(r), "type": format_type(g)}, []
    spec = _spec(inp, p, q)
    r = amalgamate(p, q, spec)
    cross = sorted([node_out(b), node_out(c)] for b, c in cross_relations(r, p, q, spec))
    return "value", {"condition": condition_to_json(r), "cross_relations": cross}, []


def cmd_compatible(inp, args):
    p, q = read_condition(inp.field("p")), read_condition(inp.field("q"))
    r = compatible(p, q)
    if r is None:
        return "none", None, []
    return "some", {"condition": condition_to_json(r)}, []


def cmd_end_extends(inp, args):
    q, p = read_condition(inp.field("q")), read_condition(inp.field("p"))
    ok = end_extends(q, p)
    return ("pass" if ok else "fail"), {"end_extends": ok}, []


def cmd_restrict(inp, args):
    p = read_condition(inp.field("condition"))
    alpha = int(inp.field("alpha"))
    part = above(p, alpha) if inp.field("above", False) else restrict(p, alpha)
    return "value", {"condition": condition_to_json(part)}, []


def cmd_fresh_rational(inp, args):
    avoid = [rational_from_json(v) for v in inp.field("avoid", [])] if args.input else []
    between = inp.field("between", None) if args.input else None
    if between is not None:
        lo, hi = (None if v is None else rational_from_json(v) for v in between)
        between = (lo, hi)
    return "value", {"rational": rational_to_json(fresh_rational(avoid, between))}, []


def cmd_insert(inp, args):
    p = read_condition(inp.field("condition"))
    reqs = []
    used = set(p.tags())
    for r in inp.field("requests"):
        a, b = cond_nodes(p, [r["predecessor"], r["successor"]])
        if "node" in r:
            x = node_from_json(r["node"])
        else:
            level = int(r["level"])
            x_tag = fresh_rational(used)
            x = Node.of(level, x_tag)
        used.add(x.tag)
        reqs.append(InsertionRequest(a, b, x))
    q = multi_insert(p, reqs)
    return "value", {"condition": condition_to_json(q),
                     "inserted": [node_out(r.new_node) for r in reqs]}, []


def cmd_gen_tree(inp, args):
    if args.tree:
        t = inp.tree()
    else:
        if args.height is None:
            raise Malformed("gen-tree needs --height or --tree")
        t = build_pseudo_generic(args.height, parse_widths(args.widths), seed=args.seed)
    rep = check_normal(t)
    return "value", {"tree": tree_to_json(t), "normal": rep.normal, "size": len(t)}, []


def cmd_tree_info(inp, args):
    t = inp.tree()
    rep = check_normal(t)
    return "value", {
        "height": t.height,
        "size": len(t),
        "normal": rep.normal,
        "splitting_failures": [node_out(x) for x in rep.splitting_failures],
        "extension_failures": [node_out(x) for x in rep.extension_failures],
        "max_chain": [node_out(x) for x in max_chain(t)],
        "max_antichain": [node_out(x) for x in max_antichain(t)],
    }, []


def cmd_tree_query(inp, args):
    t = inp.tree()
    x, y = tree_nodes(t, [inp.field("x"), inp.field("y")])
    out = {"delta": delta(t, x, y)}
    beta = inp.field("beta", None)
    if beta is not None:
        out["projection"] = node_out(projection(t, x, int(beta)))
    return "value", out, []


def cmd_lex_compare(inp, args):
    t = inp.tree()
    pairs = inp.field("pairs", None) if args.input else None
    if pairs is None:
        order = lex_sorted(t)
        return "value", {"lex_order": [node_out(x) for x in order]}, []
    out = []
    for i, j in pairs:
        a, b = tree_nodes(t, [i, j])
        out.append({"a": i, "b": j, "order": int(lex_compare(t, a, b))})
    return "value", {"comparisons": out}, []


def cmd_check_lemma(inp, args):
    if args.which in ("2.4", "meet-height"):
        t = inp.tree()
        bad = [[node_out(v) for v in quad] for quad in meet_height_violations(t, limit=args.limit)]
        axioms = order_axiom_violations(t, limit=args.limit)
        bad += [[kind] + [node_out(v) for v in rest] for kind, *rest in axioms]
        return ("fail" if bad else "pass"), {"nodes": len(t)}, bad
    p = read_condition(inp.field("condition"))
    config = cond_nodes(p, inp.field("config"), "config")
    if len(config) != 5:
        raise Malformed("config lists five node indices (x, y, z, a, b)")
    ok = check_sibling_witness(p, config, completions=args.completions, seed=args.seed)
    return ("pass" if ok else "fail"), {"completions": args.completions, "holds": ok}, \
        [] if ok else ["a completion orders a after b"]


def cmd_realize(inp, args):
    g = inp.type_vector()
    if args.kind == "linear":
        seq = read_linear_sequence(inp.doc)
        hit = realize_linear(seq, g)
        detail = None if hit is None else {
            "pair": list(hit), "first": [_plain(v) for v in seq.tuples[hit[0]]],
            "second": [_plain(v) for v in seq.tuples[hit[1]]]}
    else:
        seq = read_tree_sequence(inp.doc, inp.tree() if args.tree else None, increasing=True)
        hit = realize_tree(seq, g)
        detail = None if hit is None else {
            "pair": list(hit), "first": tuple_out(seq.tuples[hit[0]]),
            "second": tuple_out(seq.tuples[hit[1]])}
    if hit is None:
        return "none", {"type": format_type(g), "witness": "none"}, []
    return "some", {"type": format_type(g), "witness": detail}, []


def cmd_satisfies(inp, args):
    g = inp.type_vector()
    if args.kind == "linear":
        order = LinearOrder(_hashable(v) for v in inp.field("order")) if "order" in inp.doc \
            else LinearOrder.range(int(inp.field("size")))
        first = [_hashable(v) for v in inp.field("first")]
        second = [_hashable(v) for v in inp.field("second")]
        ok = satisfies_linear(order, first, second, g)
    else:
        t = inp.tree()
        first = tree_nodes(t, inp.field("first"))
        second = tree_nodes(t, inp.field("second"))
        ok = satisfies_tree(t, first, second, g)
    return ("pass" if ok else "fail"), {"type": format_type(g), "satisfies": ok}, []


def cmd_separated(inp, args):
    seq = read_linear_sequence(inp.doc)
    witness = inp.field("witness", None)
    if witness is not None:
        witness = [_hashable(v) for v in witness]
    sep = check_separated(seq, witness)
    if sep is None:
        return "none", {"separator": "none"}, []
    return "some", {"separator": [_plain(v) for v in sep]}, []


def cmd_counterexample(inp, args):
    if args.which in ("sec4", "pair-sequence"):
        if args.k is None:
            raise Malformed("sec4 needs --k")
        if args.tree:
            inp.digests["tree"] = args.tree
            t = parse_tree_spec(args.tree)
        else:
            t = PerfectBinaryTree(3 * args.k, seed=args.seed)
        seq = section4_counterexample(t, args.k, seed=args.seed)
        g = inp.type_vector(default="11")
        hit = realize_tree(seq, g)
        result = {"sequence": tree_sequence_out(seq), "tree_height": t.height}
    elif args.which in ("prop33", "nested-triples"):
        size = int(inp.field("size"))
        order = LinearOrder.range(size)
        pairs = [tuple(p) for p in inp.field("pairs")]
        index_pairs = [tuple(p) for p in inp.field("index_pairs")]
        seq = nested_triples(order, pairs, index_pairs)
        g = inp.type_vector(default="101")
        hit = realize_linear(seq, g)
        result = {"sequence": linear_sequence_out(seq)}
    else:
        if args.size is None:
            raise Malformed("prop39 needs --size")
        base = LinearOrder.range(args.size)
        m = double(base)
        seq = LinearTupleSequence(m, doubling_witness(base))
        g = inp.type_vector(default="10")
        hit = realize_linear(seq, g)
        result = {"sequence": linear_sequence_out(seq)}
    result["type"] = format_type(g)
    result["witness"] = "none" if hit is None else list(hit)
    return ("none" if hit is None else "some"), result, []


def cmd_classify(inp, args):
    order = LinearOrder(_hashable(v) for v in inp.field("order"))
    case = classify_pair_relation(order, [_hashable(v) for v in inp.field("pair1")],
                                  [_hashable(v) for v in inp.field("pair2")])
    return "value", {case: True}, []


def cmd_derived(inp, args):
    t = inp.tree()
    base = inp.field("base", None) if args.input and not args.tree else None
    if args.base is not None:
        base = [int(v) for v in args.base.split(",")]
    if base is not None:
        d = derived_at(t, tree_nodes(t, base, "base"))
    else:
        if args.n is None:
            raise Malformed("derived needs --n or a base tuple")
        d = derived_power(t, args.n)
    return "value", {"tree": tree_to_json(d), "size": len(d)}, []


def cmd_embedding(inp, args):
    t = inp.tree()
    base = inp.field("base") if args.base is None else [int(v) for v in args.base.split(",")]
    m = args.m if args.m is not None else int(inp.field("m"))
    rep = split_embedding(t, tree_nodes(t, base, "base"), m)
    bad = [["order"] + [tuple_out(u), tuple_out(v)] for u, v in rep["order_violations"]]
    bad += [["density"] + [tuple_out(c), tuple_out(d)] for c, d in rep["density_violations"]]
    return ("fail" if bad else "pass"), {"source_size": rep["source_size"]}, bad


def cmd_project(inp, args):
    seq = read_tree_sequence(inp.doc, inp.tree() if args.tree else None)
    level = args.level if args.level is not None else int(inp.field("level"))
    groups = project_and_group(seq, level)
    return "value", {
        "delta_bound": delta_bound(seq),
        "groups": [{"base": tuple_out(b), "sequence": tree_sequence_out(s)} for b, s in groups],
    }, []


def cmd_dense_below(inp, args):
    t = inp.tree()
    targets = tree_nodes(t, inp.field("targets"), "target")
    hit = dense_below(t, targets)
    if hit is None:
        return "none", {"node": "none"}, []
    return "some", {"node": node_out(hit), "index": t.index[hit]}, []


def cmd_pstar(inp, args):
    if args.action == "validate":
        c = read_pstar(inp.doc)
        bad = pstar_violations(c)
        return ("fail" if bad else "pass"), {"valid": not bad, "entries": len(c)}, bad
    if args.action == "extends":
        q, p = read_pstar(inp.field("q")), read_pstar(inp.field("p"))
        ok = pstar_extends(q, p)
        return ("pass" if ok else "fail"), {"extends": ok}, []
    if args.action == "extract":
        c = read_pstar(inp.field("condition"))
        base = cond_nodes(c.p, inp.field("base"), "base")
        spec_map = extract_specializer(c, base)
        conflicts = specializer_conflicts(c.p, spec_map)
        entries = [{"a": tuple_out(a), "color": col} for a, col in sorted(spec_map.items())]
        bad = [[tuple_out(a), tuple_out(b)] for a, b in conflicts]
        return ("fail" if bad else "pass"), {"specializer": entries}, bad
    cx, cb = read_pstar(inp.field("xi")), read_pstar(inp.field("beta"))
    tuples = inp.field("tuples")
    if not (isinstance(tuples, list) and len(tuples) == 2):
        raise Malformed("'tuples' must be [[xi-side indices], [beta-side indices]]")
    a_xi, a_beta = cond_nodes(cx.p, tuples[0]), cond_nodes(cb.p, tuples[1])
    starred = inp.field("starred", None)
    starred = cond_nodes(cb.p, starred) if starred is not None else None
    spec = spec_from_json(inp.field("spec"), cx.p, cb.p)
    out = pstar_amalgamate(cx, cb, (a_xi, a_beta), starred, inp.type_vector(), spec)
    return "value", {"condition": pstar_to_json(out)}, []


def cmd_sigma_reduce(inp, args):
    obj = inp.field("sequence")
    sigma = inp.field("sigma")
    g = inp.type_vector()
    if "tree" in obj:
        seq = read_tree_sequence(obj)
        out, g_star = sigma_reduce(seq, sigma, g)
        body = tree_sequence_out(out)
    else:
        seq = read_linear_sequence(obj)
        out, g_star = sigma_reduce(seq, sigma, g)
        body = linear_sequence_out(out)
    return "value", {"sequence": body, "type": format_type(g_star)}, []


def cmd_complement(inp, args):
    g = inp.type_vector()
    return "value", {"type": format_type(complement(g))}, []


HANDLERS = {
    "validate-condition": cmd_validate_condition,
    "amalgamate": cmd_amalgamate,
    "compatible": cmd_compatible,
    "end-extends": cmd_end_extends,
    "restrict": cmd_restrict,
    "fresh-rational": cmd_fresh_rational,
    "insert": cmd_insert,
    "gen-tree": cmd_gen_tree,
    "tree-info": cmd_tree_info,
    "tree-query": cmd_tree_query,
    "lex-compare": cmd_lex_compare,
    "check-lemma": cmd_check_lemma,
    "realize": cmd_realize,
    "satisfies": cmd_satisfies,
    "separated": cmd_separated,
    "counterexample": cmd_counterexample,
    "classify": cmd_classify,
    "derived": cmd_derived,
    "embedding": cmd_embedding,
    "project": cmd_project,
    "dense-below": cmd_dense_below,
    "pstar": cmd_pstar,
    "sigma-reduce": cmd_sigma_reduce,
    "complement": cmd_complement,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--in", dest="input", metavar="FILE", help="JSON input ('-' for stdin)")
    common.add_argument("--out", metavar="FILE", help="also write the report here")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--expect", choices=("some", "none", "pass"),
                        help="exit 0 iff the outcome matches")
    common.add_argument("--type", metavar="BITS")
    common.add_argument("--tree", metavar="SPEC", help="e.g. gen(seed=7,h=4)")

    parser = _Parser(prog="suslinbench", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, help_text):
        return sub.add_parser(name, parents=[common], help=help_text)

    add("validate-condition", "check every condition clause")
    a = add("amalgamate", "merge two conditions along a cut")
    a.add_argument("--typed", action="store_true", help="realize a type between two tuples")
    add("compatible", "search for a common extension")
    add("end-extends", "does q end-extend p")
    add("restrict", "part below (or at/above) a level")
    add("fresh-rational", "pick an unused rational")
    add("insert", "thread fresh nodes between immediate-predecessor pairs")
    g = add("gen-tree", "seeded pseudo-generic leveled tree")
    g.add_argument("--height", type=int)
    g.add_argument("--widths", metavar="CSV")
    add("tree-info", "normality, longest chain, largest antichain")
    add("tree-query", "meet size and projection")
    add("lex-compare", "lexicographic comparisons or the full lex order")
    c = add("check-lemma", "meet-height scan or sibling-witness sampling")
    c.add_argument("which", choices=("2.4", "2.11", "meet-height", "sibling-witness"))
    c.add_argument("--completions", type=int, default=32)
    c.add_argument("--limit", type=int, default=1000)
    r = add("realize", "least pair of tuples satisfying a type")
    r.add_argument("kind", choices=("linear", "tree"))
    s = add("satisfies", "does one pair of tuples satisfy a type")
    s.add_argument("kind", choices=("linear", "tree"))
    add("separated", "find or check a separator vector")
    ce = add("counterexample", "build a known-negative sequence and search it")
    ce.add_argument("which", choices=("sec4", "prop33", "prop39", "pair-sequence", "nested-triples", "doubling"))
    ce.add_argument("--k", type=int)
    ce.add_argument("--size", type=int)
    add("classify", "relative position of two intervals")
    d = add("derived", "derived tree of n-tuples or above a base tuple")
    d.add_argument("--n", type=int)
    d.add_argument("--base", metavar="CSV", help="node indices")
    e = add("embedding", "check the tuple-splitting embedding")
    e.add_argument("--base", metavar="CSV")
    e.add_argument("--m", type=int)
    pr = add("project", "group tuples by projection to a level")
    pr.add_argument("--level", type=int)
    add("dense-below", "lowest node whose cone reaches the targets")
    ps = add("pstar", "colored conditions")
    ps.add_argument("action", choices=("validate", "amalgamate", "extract", "extends"))
    add("sigma-reduce", "permute tuple coordinates and the type")
    add("complement", "flip every bit of a type")
    return parser


def run(argv=None, stdout=None) -> int:
    stdout = stdout if stdout is not None else sys.stdout
    argv = list(sys.argv[1:] if argv is None else argv)
    start = time.perf_counter()
    report = {"command": None, "inputs": {}, "result": None, "violations": [], "seed": None}
    args = None
    code = EXIT_MALFORMED
    try:
        parser = build_parser()
        args = parser.parse_args(argv)
        if not args.command:
            raise Malformed("missing subcommand")
        name = args.command
        for attr in ("which", "kind", "action"):
            if getattr(args, attr, None):
                name += " " + getattr(args, attr)
        report["command"] = name
        report["seed"] = args.seed
        inp = Inputs(args)
        try:
            outcome, result, violations = HANDLERS[args.command](inp, args)
        except PreconditionError as exc:
            outcome, result, violations = "fail", None, list(exc.violations)
        except AmalgamationError as exc:
            outcome, result = "fail", None
            violations = ["contradiction: " + str(v) for v in (exc.args[0] if exc.args and isinstance(exc.args[0], list) else [exc])]
        report["inputs"] = dict(sorted(inp.digests.items()))
        for key in ("type", "height", "widths", "completions", "k", "size", "n", "m", "base", "level", "typed"):
            val = getattr(args, key, None)
            if val not in (None, False):
                report["inputs"][key] = val
        report["outcome"] = outcome
        report["result"] = result
        report["violations"] = [_jsonable(v) for v in violations]
        if args.expect:
            code = EXIT_OK if _matches(outcome, args.expect) else EXIT_FAIL
        else:
            code = EXIT_OK if outcome in ("pass", "some", "value") else EXIT_FAIL
    except Malformed as exc:
        report["outcome"] = "malformed"
        report["violations"] = [str(exc)]
        code = EXIT_MALFORMED
    except SystemExit as exc:
        # --help / --version
        return int(exc.code or 0)
    report["exit"] = code
    report["duration_ms"] = round((time.perf_counter() - start) * 1000, 3)
    text = dumps(report)
    stdout.write(text + "\n")
    if args is not None and getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    return code


def _matches(outcome: str, expect: str) -> bool:
    if expect == "pass":
        return outcome in ("pass", "value", "some")
    return outcome == expect


def _jsonable(v):
    if isinstance(v, (str, int, float, bool)) or v is None:
        return v
    if isinstance(v, (list, tuple)):
        return [_jsonable(u) for u in v]
    return str(v)


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()

"""Command-line front end; every result is printed as JSON."""
from __future__ import annotations

import argparse
import json
import random
import sys

from . import decomp, minors, nicepair, params, refine, slide
from .errors import InvalidInput, SizeLimitError
from .graph import Graph, cartesian_product, grid, parse_graph, path_graph, unlabelled_trees
from .sigma import INF, parse_regex, parse_word, value_to_json

EXIT_OK = 0
EXIT_REJECTED = 1
EXIT_INPUT = 2
EXIT_SIZE = 3


def _read(path):
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load_json(path, key=None):
    try:
        data = json.loads(_read(path))
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{path}: invalid JSON ({exc})") from None
    if key and isinstance(data, dict) and key in data:
        return data[key]
    return data


def _graph(args, attr="graph"):
    path = getattr(args, attr)
    if path is None:
        raise InvalidInput(f"--{attr} is required")
    text = _read(path)
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidInput(f"{path}: invalid JSON ({exc})") from None
        for key in ("graph", "host"):
            if "n" not in data and key in data:
                data = data[key]
        return Graph.from_dict(data)
    return parse_graph(text)


def _k(text):
    if text in ("inf", "sinf", "infinity"):
        return INF
    try:
        k = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"k must be a positive integer or 'inf', got {text!r}") from None
    if k < 1:
        raise argparse.ArgumentTypeError("k must be positive")
    return k


def _vertex_set(text):
    if text is None:
        return None
    text = text.strip()
    if not text:
        return frozenset()
    try:
        return frozenset(int(x) for x in text.split(","))
    except ValueError:
        raise InvalidInput(f"expected a comma separated vertex list, got {text!r}") from None


def _decomp(args):
    if args.decomp is None:
        raise InvalidInput("--decomp is required")
    return decomp.TreeDecomposition.from_dict(_load_json(args.decomp, "witness"))


# param

def cmd_param(args):
    g = _graph(args)
    kind = args.kind
    out = {"parameter": kind}
    if kind in ("td_k", "pd_k"):
        if args.k is None:
            raise InvalidInput("--k is required")
        fn = params.k_treedepth if kind == "td_k" else params.k_pathdepth
        value, wit = fn(g, args.k)
        out.update(k=value_to_json(args.k), value=value, witness=wit.to_dict())
        ok, moves = decomp.is_k_dismantable(wit, params._clip_k(args.k, g.n))
        out["dismantling"] = [list(m) if m[0] != "stuck" else ["stuck", sorted(m[1])] for m in moves]
        out["certificate_ok"] = bool(ok and decomp.validate_tree_decomposition(g, wit) and wit.width() + 1 == value)
        if args.dot:
            out["dot"] = wit.to_dot()
    elif kind == "td":
        out["value"] = params.treedepth_oracle(g)
    elif kind == "tw":
        out["value"] = params.treewidth_oracle(g)
    elif kind == "pw":
        out["value"] = params.pathwidth_oracle(g)
    elif kind == "pL":
        if args.word is not None:
            out["word"] = args.word
            out["value"] = value_to_json(params.p_word(g, parse_word(args.word)))
        elif args.regex is not None:
            out["regex"] = args.regex
            out["value"] = value_to_json(params.p_regex(g, parse_regex(args.regex)))
        else:
            raise InvalidInput("pL needs --regex or --word")
    return out


# generate

def _rng(args):
    return random.Random(args.seed if args.seed is not None else 0)


def cmd_generate(args):
    kind = args.kind
    if kind == "trees":
        if args.k is None:
            raise InvalidInput("--k is required")
        return {"trees": [t.to_dict() for t in unlabelled_trees(args.k)]}
    if args.k is None or args.l is None:
        raise InvalidInput("--k and --l are required")
    if kind == "grid":
        g = grid(args.k, args.l)
        out = {"graph": g.to_dict()}
    elif kind == "ladder":
        if args.seed is None:
            cols = [path_graph(args.k)] * args.l
        else:
            rng = _rng(args)
            pool = unlabelled_trees(args.k)
            cols = [_shuffle_labels(rng.choice(pool), rng) for _ in range(args.l)]
        lad = minors.make_k_ladder(args.k, args.l, cols)
        g = lad.graph
        out = {"graph": g.to_dict(), "k": args.k, "columns": args.l}
    else:
        if args.tree is not None:
            trees = [_graph(args, "tree")]
        else:
            trees = unlabelled_trees(args.k)
        out = {"products": [
            {"tree": t.to_dict(), "graph": cartesian_product(t, path_graph(args.l)).to_dict()} for t in trees
        ]}
        g = None
    if args.dot and g is not None:
        out["dot"] = g.to_dot()
    return out


def _shuffle_labels(t, rng):
    perm = list(range(t.n))
    rng.shuffle(perm)
    return t.relabel(dict(zip(t.sorted_vertices(), perm)))


# minor

def cmd_minor(args):
    kind = args.kind
    if kind == "test":
        g = _graph(args)
        if args.pattern is not None:
            h = _graph(args, "pattern")
            m = minors.find_minor_model(h, g)
            return {"minor": m is not None, "model": m.to_dict() if m else None}
        if args.k is None or args.l is None:
            raise InvalidInput("minor test needs --pattern or --k and --l")
        hit = minors.has_minor_tree_times_path(g, args.k, args.l)
        if hit is None:
            return {"minor": False, "tree": None, "model": None}
        t, m = hit
        return {"minor": True, "tree": t.to_dict(), "model": m.to_dict()}
    if kind == "validate":
        m = minors.MinorModel.from_dict(_load_json(args.model, "model"))
        rep = minors.validate_model(m)
        return {"ok": rep.ok, "report": rep.to_dict()}
    if kind == "extract-ladder":
        g = _graph(args)
        data = _load_json(args.input)
        try:
            rows, conns = data["rows"], data["connectors"]
        except (KeyError, TypeError):
            raise InvalidInput("--input needs 'rows' and 'connectors'") from None
        lad, m = minors.extract_ladder(g, rows, conns)
        out = {"k": lad.k, "columns": lad.columns, "ladder": lad.graph.to_dict(), "model": m.to_dict()}
        if args.dot:
            out["dot"] = lad.graph.to_dot()
        return out
    if kind == "grid-in-ladder":
        if args.k is None or args.l is None:
            raise InvalidInput("--k and --l are required")
        if args.tree is not None:
            t = _graph(args, "tree")
        else:
            t = unlabelled_trees(2 * args.k - 1)[0]
        m, seq = slide.grid_in_ladder(args.k, args.l, t)
        return {"model": m.to_dict(), "sequence": seq.to_dict(), "L": args.l * (2 * len(seq) - 1)}
    raise InvalidInput(f"unknown minor command {kind}")


# decomp

def cmd_decomp(args):
    kind = args.kind
    g = _graph(args)
    if kind == "validate":
        d = _decomp(args)
        s = _vertex_set(args.s)
        rep = decomp.validate_tree_decomposition(g, d) if s is None else decomp.validate_gs_decomposition(g, s, d)
        out = {"ok": rep.ok, "report": rep.to_dict()}
        if args.k is not None:
            ok, _ = decomp.is_k_dismantable(d, params._clip_k(args.k, g.n))
            out["k_dismantable"] = ok
            out["ok"] = out["ok"] and ok
        return out
    if kind == "dismantle":
        if args.k is None or args.t is None:
            raise InvalidInput("--k and --t are required")
        d = decomp.dismantle_search(g, params._clip_k(args.k, g.n), args.t)
        out = {"found": d is not None, "witness": d.to_dict() if d else None}
        if d is not None and args.dot:
            out["dot"] = d.to_dot()
        return out
    if kind == "helly":
        d = _decomp(args)
        fam = _load_json(args.family, "family")
        if args.d is None:
            raise InvalidInput("--d is required")
        res = decomp.helly_cover(g, d, [frozenset(x) for x in fam], args.d)
        ok = decomp.verify_helly(g, d, [frozenset(x) for x in fam], args.d, res)
        return {"result": res.to_dict(), "verified": bool(ok)}
    raise InvalidInput(f"unknown decomp command {kind}")


# refine

def cmd_refine(args):
    g = _graph(args)
    if args.k is None or args.k is INF:
        raise InvalidInput("--k must be a positive integer")
    if args.kind == "unbreakable":
        res = refine.unbreakable_decomposition(g, args.k)
        rep = refine.verify_unbreakable(g, args.k, res.decomposition)
    else:
        s = _vertex_set(args.s)
        s = g.vertices if s is None else s
        if args.a is None or args.t is None:
            raise InvalidInput("--a and --t are required")
        init = _decomp(args) if args.decomp else None
        res = refine.good_gs_decomposition(g, s, args.k, args.a, args.t, initial=init)
        rep = refine.verify_good(g, s, args.k, args.a, args.t, res.s, res.decomposition)
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as fh:
            fh.write(res.trace_jsonl())
    out = {
        "s": sorted(res.s),
        "witness": res.decomposition.to_dict(),
        "iterations": len(res.trace),
        "verified": rep.ok,
    }
    if args.dot:
        out["dot"] = res.decomposition.to_dot()
    return out


# slide

def cmd_slide(args):
    if args.kind == "build":
        t = _graph(args, "tree") if args.tree else _graph(args)
        if args.k is None:
            raise InvalidInput("--k is required")
        seq = slide.path_sliding_in_tree(t, args.k)
        return {"sequence": seq.to_dict(), "m": len(seq)}
    if args.kind == "validate":
        seq = slide.SlidingSequence.from_dict(_load_json(args.sequence, "sequence"))
        rep = slide.validate_sliding(seq)
        return {"ok": rep.ok, "report": rep.to_dict()}
    seq = slide.SlidingSequence.from_dict(_load_json(args.sequence, "sequence"))
    if args.l is None:
        raise InvalidInput("--l is required")
    m = slide.sliding_to_model(seq, args.l)
    return {"model": m.to_dict(), "L": args.l * (2 * len(seq) - 1)}


# nice pairs

def cmd_nice(args):
    gp = nicepair.GoodPair.from_dict(_load_json(args.input))
    if args.kind == "check":
        rep, _ = nicepair.is_nice_pair(gp)
        return {"ok": rep.ok, "report": rep.to_dict()}
    return {"torso": nicepair.torso(gp).to_dict()}


def build_parser():
    p = argparse.ArgumentParser(prog="kladder", description=__doc__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--graph", help="graph file (JSON or edge list), '-' for stdin")
    common.add_argument("--k", type=_k)
    common.add_argument("--l", type=int)
    common.add_argument("--regex")
    common.add_argument("--word")
    common.add_argument("--out", help="write the JSON result here instead of stdout")
    common.add_argument("--dot", action="store_true", help="add DOT renderings")
    common.add_argument("--seed", type=int)
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("param", parents=[common], help="compute a parameter")
    sp.add_argument("kind", choices=["td_k", "pd_k", "td", "tw", "pw", "pL"])
    sp.set_defaults(fn=cmd_param)

    sp = sub.add_parser("generate", parents=[common], help="generate obstructions")
    sp.add_argument("kind", choices=["grid", "ladder", "tree-times-path", "trees"])
    sp.add_argument("--tree")
    sp.set_defaults(fn=cmd_generate)

    sp = sub.add_parser("minor", parents=[common], help="minor models")
    sp.add_argument("kind", choices=["test", "validate", "extract-ladder", "grid-in-ladder"])
    sp.add_argument("--pattern")
    sp.add_argument("--model")
    sp.add_argument("--input")
    sp.add_argument("--tree")
    sp.set_defaults(fn=cmd_minor)

    sp = sub.add_parser("decomp", parents=[common], help="tree decompositions")
    sp.add_argument("kind", choices=["validate", "dismantle", "helly"])
    sp.add_argument("--decomp")
    sp.add_argument("--s")
    sp.add_argument("--t", type=int)
    sp.add_argument("--family")
    sp.add_argument("--d", type=int)
    sp.set_defaults(fn=cmd_decomp)

    sp = sub.add_parser("refine", parents=[common], help="refined decompositions")
    sp.add_argument("kind", choices=["unbreakable", "good"])
    sp.add_argument("--s")
    sp.add_argument("--a", type=int)
    sp.add_argument("--t", type=int)
    sp.add_argument("--decomp")
    sp.add_argument("--trace", help="write the JSON-lines refinement trace here")
    sp.set_defaults(fn=cmd_refine)

    sp = sub.add_parser("slide", parents=[common], help="token sliding")
    sp.add_argument("kind", choices=["build", "validate", "compile"])
    sp.add_argument("--tree")
    sp.add_argument("--sequence")
    sp.set_defaults(fn=cmd_slide)

    sp = sub.add_parser("nice", parents=[common], help="good and nice pairs")
    sp.add_argument("kind", choices=["check", "torso"])
    sp.add_argument("--input", required=True)
    sp.set_defaults(fn=cmd_nice)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result = args.fn(args)
    except SizeLimitError as exc:
        print(f"kladder: size limit: {exc}", file=sys.stderr)
        return EXIT_SIZE
    except (InvalidInput, OSError) as exc:
        print(f"kladder: {exc}", file=sys.stderr)
        return EXIT_INPUT
    text = json.dumps(result, sort_keys=True, indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if result.get("ok") is False or result.get("verified") is False or result.get("certificate_ok") is False:
        return EXIT_REJECTED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

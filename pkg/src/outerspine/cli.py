"""Command line interface: ``outerspine <command> ...`` or ``python -m outerspine``.

Exit codes: 0 success, 1 a check or search found violations, 2 bad input,
3 lexicographic comparison hit the cutoff, 4 retraction pipeline defect,
5 any other internal defect.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
from pathlib import Path

from .errors import Defect, OuterSpineError, PipelineDefect, UndeterminedComparison
from .free_words import canonical_class, classes_up_to, parse_word
from .marked_graphs import Rose, default_lmax
from .serialization import (dumps, kn_path_to_dot, kn_path_to_json, rose_from_json,
                            rose_to_json, star_graph_to_dot)

EXIT_OK, EXIT_FAILED, EXIT_INPUT, EXIT_UNDETERMINED, EXIT_PIPELINE, EXIT_DEFECT = range(6)


class UsageError(OuterSpineError, ValueError):
    pass


# -- argument helpers -------------------------------------------------------------

def load_rose(args) -> Rose:
    n = args.n
    if getattr(args, "rose", None):
        text = args.rose.strip()
        if text in ("identity", "standard", "rho0"):
            return Rose.standard(n or 2)
        path = Path(text)
        if not text.startswith("{") and path.is_file():
            text = path.read_text()
        if text.lstrip().startswith("{"):
            try:
                rose = rose_from_json(json.loads(text))
            except json.JSONDecodeError as exc:
                raise UsageError(f"--rose is not valid JSON: {exc}") from exc
        else:
            rose = Rose.from_text(text, n)
    elif getattr(args, "phi", None):
        rose = Rose.from_text(args.phi, n)
    else:
        rose = Rose.standard(n or 2)
    if n is not None and rose.n != n:
        raise UsageError(f"--n {n} does not match a rose of rank {rose.n}")
    return rose


def check_config(args) -> None:
    if args.n is not None and args.n < 2:
        raise UsageError("--n must be at least 2")
    if args.lmax is not None:
        if args.lmax < 2:
            raise UsageError("--lmax must be at least 2")
        os.environ["OUTERSPINE_LMAX"] = str(args.lmax)


def emit_trace(args, obj) -> None:
    if not args.trace:
        return
    if args.trace in ("json", "-"):
        sys.stdout.write(dumps(obj))
    else:
        Path(args.trace).write_text(dumps(obj))


def out(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


# -- commands ---------------------------------------------------------------------

def cmd_norm(args) -> int:
    rose = load_rose(args)
    if args.classes:
        classes = [canonical_class(parse_word(c, rose.n)) for c in args.classes]
    else:
        classes = classes_up_to(rose.n, args.upto)
    rows = [(str(c), rose.length(c)) for c in classes]
    if args.emit == "json":
        out(dumps({"rose": rose_to_json(rose),
                   "coordinates": [{"class": c, "length": v} for c, v in rows]}))
    else:
        for c, v in rows:
            out(f"{c}\t{v}")
    return EXIT_OK


def cmd_fold_path(args) -> int:
    from .folds import fold_to_rose, verify_kn_path

    rose = load_rose(args)
    rng = random.Random(args.seed) if args.seed is not None else None
    path = fold_to_rose(rose, rng=rng)
    if args.emit == "json":
        out(dumps({"rose": rose_to_json(rose), "path": kn_path_to_json(path),
                   "verified": verify_kn_path(path)}))
    elif args.emit == "dot":
        out(kn_path_to_dot(path))
    else:
        out(f"rose {rose}: {len(path.moves)} fold moves, {len(path)} spine steps")
        for mv in path.moves:
            out(f"  {mv.kind} {list(mv.data)}")
        out(f"edge counts {path.edge_counts}; verified {verify_kn_path(path)}")
    return EXIT_OK


def cmd_star_graph(args) -> int:
    from .whitehead import half_edge_name, star_graph

    rose = load_rose(args)
    sg = star_graph(rose, parse_word(args.cls, rose.n))
    if args.emit == "dot":
        out(star_graph_to_dot(sg))
    elif args.emit == "json":
        out(dumps({"rose": rose_to_json(rose), "class": str(sg.cls),
                   "edges": [list(e) for e in sg.edges], "valences": sg.valences()}))
    else:
        out(f"class {sg.cls}: {len(sg.edges)} edges")
        for a, b in sg.edges:
            out(f"  {half_edge_name(a)} -- {half_edge_name(b)}")
    return EXIT_OK


def cmd_reduce(args) -> int:
    from .whitehead import whitehead_reduce

    rose = load_rose(args)
    fixed, trace = whitehead_reduce(rose, max_steps=args.max_steps)
    doc = {"rose": rose_to_json(rose), "result": rose_to_json(fixed),
           "steps": [s.as_dict() for s in trace]}
    if args.trace in ("json", "-"):
        emit_trace(args, doc)
        return EXIT_OK
    if args.emit == "json":
        out(dumps(doc))
    else:
        for s in trace:
            out(f"{s.before} -> {s.after} via {s.pair}")
        out(f"result {fixed} after {len(trace)} steps")
    emit_trace(args, doc)
    return EXIT_OK


def cmd_star_poset(args) -> int:
    from .complexes import encode_tree, homology_f2, star_poset

    n = args.n or 2
    p = star_poset(n)
    doc = {"n": n, "elements": len(p), "relations": len(p.relations()),
           "covers": len(p.covers()), "simplices": p.count_chains()}
    if args.verify == "homology":
        doc["betti"] = homology_f2(p.order_complex())
    if args.emit == "json":
        doc["trees"] = [encode_tree(t) for t in p]
        out(dumps(doc))
    else:
        for k, v in doc.items():
            out(f"{k}\t{v}")
    return EXIT_OK


def cmd_reductive_complex(args) -> int:
    from .complexes import Verdict, contractibility_pipeline, homology_f2, is_acyclic_point

    rose = load_rose(args)
    res = contractibility_pipeline(rose, max_iterations=args.max_iterations)
    doc = {"rose": rose_to_json(rose), **res.as_dict()}
    status = EXIT_OK
    if args.verify == "homology" and res.verdict is Verdict.CONTRACTIBLE:
        betti = homology_f2(res.trace.start.order_complex())
        doc["betti"] = betti
        if not is_acyclic_point(betti):
            status = EXIT_FAILED
    if args.emit == "json":
        out(dumps(doc))
    else:
        if res.verdict is Verdict.EMPTY:
            out("empty complex")
        else:
            out(f"contractible: {len(res.trace.start)} reductive trees, mu={res.mu}, "
                f"{len(res.eliminated)} crossing edges eliminated")
            for step in res.trace.steps:
                out(f"  {step.tag} ({step.direction.value}): {len(step.before)} -> {len(step.after)}")
            if "betti" in doc:
                out(f"betti numbers over GF(2): {doc['betti']}")
    emit_trace(args, doc)
    return status


def cmd_key_lemma_search(args) -> int:
    from .verify import exhaustive_rank2_roses, sample_roses
    from .whitehead import KeyLemmaReport, key_lemma_check

    n = args.n or 2
    if args.exhaustive:
        if n != 2:
            raise UsageError("--exhaustive is available for --n 2 only")
        roses = exhaustive_rank2_roses(args.depth)
    else:
        roses = sample_roses(args.samples, args.seed or 0, (n,))
    rep = KeyLemmaReport()
    for rho in roses:
        rep.merge(key_lemma_check(rho))
    if args.emit == "json":
        out(dumps(rep.as_dict()))
    else:
        out(f"{rep.roses} roses, {rep.instances} instances, {len(rep.violations)} violations; "
            f"four-sector case: {rep.census_instances} instances, "
            f"{len(rep.census_violations)} violations")
    return EXIT_OK if rep.ok else EXIT_FAILED


def cmd_verify(args) -> int:
    from .verify import SUITES, run_suite

    if args.suite != "all" and args.suite not in SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from all, {', '.join(SUITES)}")
    kwargs = {"seed": args.seed or 0}
    if args.n is not None:
        kwargs["ranks"] = (args.n,)
    if args.samples is not None:
        kwargs["samples"] = args.samples
    results = run_suite(args.suite, **kwargs)
    if args.emit == "json":
        out(dumps([r.as_dict() for r in results]))
    else:
        for r in results:
            out(r.line())
    return EXIT_OK if all(r.passed and r.within_limit for r in results) else EXIT_FAILED


# -- parser -----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, help="rank of the free group")
    common.add_argument("--phi", help="comma separated generator images, e.g. ab,b")
    common.add_argument("--rose", help="rose as JSON, a JSON file, 'identity', or words")
    common.add_argument("--seed", type=int, help="seed for randomized choices")
    common.add_argument("--lmax", type=int, help=f"comparison cutoff (default {default_lmax()})")
    common.add_argument("--emit", choices=["text", "json", "dot"], default="text")
    common.add_argument("--trace", help="write a JSON trace to this file ('json' for stdout)")

    parser = argparse.ArgumentParser(prog="outerspine",
                                     description="Marked roses, folds and the star of a rose.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("norm", parents=[common], help="translation lengths in W-order")
    p.add_argument("--upto", type=int, default=2, help="largest class length")
    p.add_argument("classes", nargs="*", help="explicit classes instead of --upto")
    p.set_defaults(func=cmd_norm)

    p = sub.add_parser("fold-path", parents=[common], help="fold a rose to the standard rose")
    p.set_defaults(func=cmd_fold_path)

    p = sub.add_parser("star-graph", parents=[common], help="star graph of a class")
    p.add_argument("--class", dest="cls", required=True, help="word, e.g. abB")
    p.set_defaults(func=cmd_star_graph)

    p = sub.add_parser("reduce", parents=[common], help="norm descent to a minimal rose")
    p.add_argument("--max-steps", type=int, default=1000)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("star-poset", parents=[common], help="poset of ideal trees")
    p.add_argument("--verify", choices=["homology"])
    p.set_defaults(func=cmd_star_poset)

    p = sub.add_parser("reductive-complex", parents=[common],
                       help="retract the reductive ideal trees to a point")
    p.add_argument("--verify", choices=["homology"])
    p.add_argument("--max-iterations", type=int)
    p.set_defaults(func=cmd_reductive_complex)

    p = sub.add_parser("key-lemma-search", parents=[common], help="search for Key Lemma failures")
    p.add_argument("--exhaustive", action="store_true",
                   help="all rank 2 roses up to --depth Nielsen moves")
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--samples", type=int, default=200)
    p.set_defaults(func=cmd_key_lemma_search)

    p = sub.add_parser("verify", parents=[common], help="run acceptance suites")
    p.add_argument("suite", help="suite name or 'all'")
    p.add_argument("--samples", type=int)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        check_config(args)
        return args.func(args)
    except UndeterminedComparison as exc:
        print(f"undetermined comparison: {exc}", file=sys.stderr)
        return EXIT_UNDETERMINED
    except PipelineDefect as exc:
        print(f"pipeline defect: {exc}", file=sys.stderr)
        return EXIT_PIPELINE
    except Defect as exc:
        print(f"internal defect ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_DEFECT
    except (OuterSpineError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

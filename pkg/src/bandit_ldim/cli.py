"""Command-line entry point: ``bandit-ldim {gen,dims,witness,verify,simulate}``.

Exit codes: 0 success, 1 a check or bound failed, 2 usage or input error,
3 a capacity cap was exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .caps import get_caps
from .classes import gen_constants, gen_full, gen_random, max_projection
from .dimensions import (
    DimensionSolver,
    bldim_oracle,
    dim_report,
    inequality_checks,
    ldim_oracle,
    sgdim,
    sgdim_oracle,
    tree_to_dict,
    verify_shattering,
    witness_bltree,
    witness_ltree,
)
from .errors import CapacityError, ConfigurationError, InputError
from .fileformat import load_class, save_class
from .harness import bound_check, mix64, monte_carlo, regret, run_game
from .learners import remap_build
from .registry import ADVERSARIES, LEARNERS, AdversarySpec, LearnerSpec

EXIT_OK, EXIT_FAILED, EXIT_INPUT, EXIT_CAPACITY = 0, 1, 2, 3


def _emit(doc, out=None):
    text = json.dumps(doc, indent=2)
    if out:
        with open(out, "w", encoding="utf-8") as f:
            f.write(text + "\n")
    print(text)


def _seed(text):
    v = int(text, 0)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def cmd_gen(args):
    if args.family == "constants":
        cls = gen_constants(args.n, args.m, args.extra_labels)
    elif args.family == "full":
        cls = gen_full(args.m, args.k, args.extra_labels)
    else:
        cls = gen_random(args.m, args.k, args.n, args.seed, args.extra_labels)
    save_class(cls, args.out)
    print(f"wrote {cls.n_hypotheses} hypotheses over {cls.n_instances} instances and {cls.n_labels} labels to {args.out}")
    return EXIT_OK


def _witness_trees(v, solver):
    ltree, bltree = witness_ltree(v, solver), witness_bltree(v, solver)
    return ltree, bltree, verify_shattering(ltree, v) and verify_shattering(bltree, v)


def _write_trees(outdir, ltree, bltree, cls):
    os.makedirs(outdir, exist_ok=True)
    for fname, tree in (("ltree.json", ltree), ("bltree.json", bltree)):
        with open(os.path.join(outdir, fname), "w", encoding="utf-8") as f:
            json.dump(tree_to_dict(tree, cls), f, indent=2)
            f.write("\n")


def _oracle_block(v, rep):
    # one level past the solver's answer is enough to confirm it exactly
    got = {
        "L": ldim_oracle(v, depth_cap=min(len(v), rep.L + 1)),
        "BL": bldim_oracle(v, depth_cap=min(len(v), rep.BL + 1)),
        "SG": sgdim_oracle(v, depth_cap=min(len(v), rep.SG + 1)),
    }
    got["agree"] = got["L"] == rep.L and got["BL"] == rep.BL and got["SG"] == rep.SG
    return got


def cmd_dims(args):
    cls = load_class(args.cls)
    v = cls.full()
    rep = dim_report(v)
    doc = rep.to_dict()
    ok = rep.ok
    if args.oracle:
        doc["oracle"] = _oracle_block(v, rep)
        ok = ok and doc["oracle"]["agree"]
    if args.witness:
        ltree, bltree, shattered = _witness_trees(v, DimensionSolver(cls))
        _write_trees(args.witness, ltree, bltree, cls)
        doc["witness"] = {"dir": args.witness, "ltree_depth": ltree.depth, "bltree_depth": bltree.depth, "verified": shattered}
        ok = ok and shattered
    _emit(doc)
    return EXIT_OK if ok else EXIT_FAILED


def cmd_witness(args):
    cls = load_class(args.cls)
    v = cls.full()
    ltree, bltree, shattered = _witness_trees(v, DimensionSolver(cls))
    _write_trees(args.outdir, ltree, bltree, cls)
    _emit({"ltree_depth": ltree.depth, "bltree_depth": bltree.depth, "verified": shattered, "dir": args.outdir})
    return EXIT_OK if shattered else EXIT_FAILED


def _check(name, holds, **detail):
    return {"name": name, "holds": bool(holds), **detail}


def _report_checks(path, rep):
    """Compare a stored ``dims`` report with freshly computed values."""
    try:
        with open(path, encoding="utf-8") as f:
            stored = json.load(f)
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: not valid JSON ({e.msg} at line {e.lineno})") from None
    if not isinstance(stored, dict):
        raise InputError(f"{path}: a report must be a JSON object")
    out = []
    for key in ("L", "BL", "SG", "C", "size"):
        out.append(_check(f"report {key} matches", stored.get(key) == getattr(rep, key), stored=stored.get(key), computed=getattr(rep, key)))
    try:
        recomputed = inequality_checks(stored["L"], stored["BL"], stored["SG"], stored["C"], stored["size"])
    except (KeyError, TypeError):
        return out + [_check("report inequalities", False, detail="report lacks dimension fields")]
    claimed = {c.get("name"): c.get("holds") for c in stored.get("checks", []) if isinstance(c, dict)}
    for c in recomputed:
        out.append(_check(f"report: {c.name}", c.holds and claimed.get(c.name) is True, claimed=claimed.get(c.name)))
    return out


def cmd_verify(args):
    cls = load_class(args.cls)
    v = cls.full()
    rep = dim_report(v)
    checks = [_check(c.name, c.holds, lhs=c.lhs, rhs=c.rhs) for c in rep.checks]

    remapped, table = remap_build(cls)
    rsolver = DimensionSolver(remapped)
    L_bar, SG_bar = rsolver.ldim(remapped.full_mask), sgdim(remapped.full())
    checks.append(_check("remap preserves L", L_bar == rep.L, original=rep.L, remapped=L_bar))
    checks.append(_check("remap preserves SG", SG_bar == rep.SG, original=rep.SG, remapped=SG_bar))
    round_trip = all(
        table.backward(x, table.forward(x, y)) == y for row in cls.table for x, y in enumerate(row)
    )
    checks.append(_check("remap round trip on realized labels", round_trip))
    checks.append(_check("remapped labels within C", remapped.n_labels == rep.C, labels=remapped.n_labels, C=rep.C))

    ltree, bltree, shattered = _witness_trees(v, DimensionSolver(cls))
    checks.append(_check("witness trees shattered", shattered, ltree_depth=ltree.depth, bltree_depth=bltree.depth))
    if args.report:
        checks.extend(_report_checks(args.report, rep))

    ok = all(c["holds"] for c in checks)
    _emit({"L": rep.L, "BL": rep.BL, "SG": rep.SG, "C": rep.C, "checks": checks, "ok": ok})
    return EXIT_OK if ok else EXIT_FAILED


def cmd_simulate(args):
    cls = load_class(args.cls)
    if args.T < 0:
        raise InputError("-T must be non-negative")
    if args.trials < 1:
        raise InputError("--trials must be >= 1")
    learner = LearnerSpec(args.learner, cls, args.T, eta=args.eta, gamma=args.gamma, cap=args.cap)
    adversary = AdversarySpec(args.adversary, cls)
    if adversary.kind == "adaptive":
        if not learner.deterministic:
            raise ConfigurationError(
                f"the adaptive adversary needs a deterministic learner; {args.learner!r} is randomized"
            )
        if args.protocol != "bandit":
            raise ConfigurationError("the adaptive adversary plays the bandit protocol only")
    learner.prepare()

    solver = DimensionSolver(cls)
    L, BL = solver.ldim(cls.full_mask), solver.bldim(cls.full_mask)
    C = max_projection(cls.full())

    if args.trials == 1:
        seed = mix64(args.seed, 0)  # same seed as trial 0 of a Monte Carlo run
        trace = run_game(learner(seed), adversary(), args.protocol, args.T, seed)
        report = regret(trace, cls)
        trace.write_csv(f"{args.out}.trace.csv", cls)
    else:
        report = monte_carlo(learner, adversary, args.protocol, args.T, args.trials, args.seed, workers=args.workers)
    report.learner, report.adversary = args.learner, args.adversary
    bound_check(report, L, BL, C, args.T, adversary=adversary.kind, learner=args.learner)
    doc = report.to_dict()
    doc["dimensions"] = {"L": L, "BL": BL, "C": C}
    _emit(doc, f"{args.out}.report.json")
    return EXIT_OK if report.ok else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bandit-ldim", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a hypothesis class file")
    g.add_argument("--family", choices=("constants", "full", "random"), required=True)
    g.add_argument("--n", type=int, default=2, help="number of hypotheses (constants, random)")
    g.add_argument("--m", type=int, default=1, help="number of instances")
    g.add_argument("--k", type=int, default=2, help="labels per instance (full, random)")
    g.add_argument("--extra-labels", type=int, default=0, help="labels no hypothesis outputs")
    g.add_argument("--seed", type=_seed, default=0)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_gen)

    d = sub.add_parser("dims", help="print L, BL, SG, C and the inequality checks as JSON")
    d.add_argument("cls", metavar="CLASS")
    d.add_argument("--witness", metavar="OUTDIR", help="write ltree.json and bltree.json here")
    d.add_argument("--oracle", action="store_true", help="cross-check against brute-force oracles")
    d.set_defaults(func=cmd_dims)

    w = sub.add_parser("witness", help="write verified shattered trees")
    w.add_argument("cls", metavar="CLASS")
    w.add_argument("outdir", metavar="OUTDIR")
    w.set_defaults(func=cmd_witness)

    v = sub.add_parser("verify", help="run inequality, remap and witness checks")
    v.add_argument("cls", metavar="CLASS")
    v.add_argument("--report", metavar="FILE", help="also check a stored dims report against recomputed values")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("simulate", help="play learner against adversary and check bounds")
    s.add_argument("cls", metavar="CLASS")
    s.add_argument("--learner", required=True, help=", ".join(LEARNERS))
    s.add_argument("--adversary", required=True, help=", ".join(ADVERSARIES))
    s.add_argument("--protocol", choices=("bandit", "full"), default="bandit")
    s.add_argument("-T", type=int, required=True)
    s.add_argument("--trials", type=int, default=10000)
    s.add_argument("--seed", type=_seed, default=0)
    s.add_argument("--eta", type=float)
    s.add_argument("--gamma", type=float)
    s.add_argument("--cap", type=int, help="expert pool size cap")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--out", required=True, metavar="PREFIX")
    s.set_defaults(func=cmd_simulate)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        get_caps()
        return args.func(args)
    except CapacityError as e:
        print(f"error: capacity exceeded: {e}", file=sys.stderr)
        return EXIT_CAPACITY
    except (InputError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT

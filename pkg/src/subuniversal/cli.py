"""Command-line entry point: ``subuniversal <subcommand> ...``.

Every distribution written by a subcommand carries, in its metadata, the
hash of the configuration that produced it, the tool version and the
conventions in force, so artifacts can be traced back to their run.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import warnings
from pathlib import Path

from . import __version__, analysis, automata, grammars, machines, transducers
from .distributions import EmpiricalDistribution, complexity_table, consolidate, load, to_csv, to_json
from .parallel import CheckpointError, config_hash
from .strings import DegenerateInputWarning, all_strings, from_text, lzw_compressed_length, shannon_entropy, to_text

log = logging.getLogger("subuniversal")

TM_CUTOFFS = {2: (2, 4, 6), 3: (6, 13, 21), 4: (27, 54, 81, 107)}
GRAMMAR_COLUMNS = ("grammar_id", "c", "lhs", "rhs")


class UsageError(Exception):
    pass


# -- output helpers ------------------------------------------------------------

def _emit(text: str, out) -> None:
    if out is None or str(out) == "-":
        sys.stdout.write(text)
        return
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text)
    tmp.replace(path)
    log.info("wrote %s", path)


def _table(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _provenance(d: EmpiricalDistribution, config: dict) -> EmpiricalDistribution:
    conv = dict(d.meta.get("conventions", {}) or {})
    conv.setdefault("empty_string", "eps")
    return d.with_meta(config_hash=config_hash(config), tool_version=__version__,
                       conventions=conv)


def _write_dist(d: EmpiricalDistribution, args, config: dict) -> None:
    d = _provenance(d, config)
    _emit(to_json(d) + "\n" if args.format == "json" else to_csv(d), args.out)


def _config(args, *keys) -> dict:
    return {"command": args.command, **{k: getattr(args, k) for k in keys}}


def _blanks(text: str) -> tuple[int, ...]:
    if not text or set(text) - {"0", "1"}:
        raise argparse.ArgumentTypeError("blanks must be a non-empty string over 0/1, e.g. 01")
    return tuple(sorted({int(c) for c in text}))


def _read_strings(path) -> list[str]:
    """Strings from a distribution file (its ``string`` column, all rows) or
    a plain file with one string per line."""
    text = Path(path).read_text()
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if lines and lines[0].split(",")[0].strip() == "string" or text.lstrip().startswith("{"):
        d = load(path)
        return sorted(d.counts, key=lambda s: (len(s), s))
    return [from_text(ln.split(",")[0].strip()) for ln in lines]


# -- fsa -------------------------------------------------------------------------

def cmd_fsa_dist(args) -> None:
    if args.ap:
        d = transducers.DescriptionTable(args.n, args.scheme).ap_distribution()
    else:
        d = transducers.fsa_distribution(args.n, args.scheme)
    _write_dist(d, args, _config(args, "n", "scheme", "ap"))
    if args.pairs_out:
        table = transducers.DescriptionTable(args.n, args.scheme)
        rows = []
        for sigma, p, states, out in transducers.description_pairs(args.n, args.scheme):
            k = table.complexity(out)
            rows.append([sigma + p, "true", sigma, p, states, to_text(out), k])
        _emit(_table(("string", "valid-encoding", "sigma", "string-p", "num-states",
                      "output", "output-complexity"), rows), args.pairs_out)


def cmd_fsa_complexity(args) -> None:
    k = args.max_string_len
    table = transducers.DescriptionTable(k + transducers.identity_size(args.scheme), args.scheme)
    rows = []
    for n in range(k + 1):
        for s in all_strings(n):
            sigma, p = table.witness(s)
            rows.append([to_text(s), table.complexity(s), sigma, p])
    _emit(_table(("s", "complexity", "sigma", "string-p"), rows), args.out)


# -- grammars --------------------------------------------------------------------

def _rhs_text(rhs) -> str:
    return rhs if isinstance(rhs, str) else f"{rhs[0]} {rhs[1]}"


def write_grammars(pairs) -> str:
    rows = []
    for gid, (c, g) in enumerate(pairs):
        for lhs, rhs in g.rules:
            rows.append([gid, c, lhs, _rhs_text(rhs)])
    return _table(GRAMMAR_COLUMNS, rows)


def read_grammars(path) -> list[tuple[int, grammars.CnfGrammar]]:
    """Inverse of :func:`write_grammars`; rules are kept in file order."""
    by_id: dict[int, list] = {}
    cls: dict[int, int] = {}
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != GRAMMAR_COLUMNS:
            raise UsageError(f"{path}: expected columns {','.join(GRAMMAR_COLUMNS)}")
        for row in reader:
            gid = int(row["grammar_id"])
            cls[gid] = int(row["c"])
            parts = row["rhs"].split()
            rhs = parts[0] if len(parts) == 1 else (int(parts[0]), int(parts[1]))
            by_id.setdefault(gid, []).append((int(row["lhs"]), rhs))
    out = []
    for gid in sorted(by_id):
        rules = by_id[gid]
        n = max(max((lhs, *(r if isinstance(r, tuple) else ()))) for lhs, r in rules)
        n = max(n, grammars.pairing_inverse(cls[gid])[0])
        out.append((cls[gid], grammars.CnfGrammar(n, tuple(rules))))
    return out


def cmd_cfg_gen(args) -> None:
    _emit(write_grammars(grammars.enumerate_grammars(args.limit)), args.out)


def _tm_reference_strings(args) -> list[str]:
    log.info("no --strings given: using the TM(4,2) outputs at cutoff 107 as the test set")
    census = machines.ctm_census(4, 107, (0,), jobs=args.jobs, checkpoint=args.checkpoint)
    d = census.distribution()
    return sorted(d.support, key=lambda s: (len(s), s))


def cmd_cfg_dist(args) -> None:
    if args.grammars:
        gs = read_grammars(args.grammars)
    else:
        gs = grammars.enumerate_grammars(args.limit)
    strings = _read_strings(args.strings) if args.strings else _tm_reference_strings(args)
    if not strings:
        raise UsageError("the string test set is empty")
    d = grammars.cfg_distribution(gs, strings)
    _write_dist(d, args, {"command": args.command, "grammars": len(gs),
                          "strings": config_hash({"s": strings})})


# -- machines --------------------------------------------------------------------

def cmd_tm_dist(args) -> None:
    cutoff = args.cutoff or machines.BB_STEPS.get(args.states)
    if cutoff is None:
        raise UsageError(f"no default cutoff for {args.states} states; pass --cutoff")
    census = machines.ctm_census(args.states, cutoff, args.blanks, sample=args.sample,
                                 seed=args.seed, method=args.method, jobs=args.jobs,
                                 checkpoint=args.checkpoint)
    d = census.distribution()
    if args.consolidate:
        d = consolidate(d)
    _write_dist(d, args, _config(args, "states", "blanks", "sample", "seed", "method",
                                 "consolidate") | {"cutoff": cutoff})


def cmd_tm_nonhalting(args) -> None:
    d = machines.nonhalting_census(args.states, args.steps, args.blanks, sample=args.sample,
                                   seed=args.seed, jobs=args.jobs,
                                   checkpoint=args.checkpoint).distribution()
    _write_dist(d, args, _config(args, "states", "steps", "blanks", "sample", "seed"))


def cmd_ca_dist(args) -> None:
    d = automata.ca_distribution(args.family, args.steps, args.backgrounds, jobs=args.jobs,
                                 checkpoint=args.checkpoint)
    _write_dist(d, args, _config(args, "family", "steps", "backgrounds"))


# -- analysis --------------------------------------------------------------------

def cmd_consolidate(args) -> None:
    d = consolidate(load(args.input))
    _write_dist(d, args, {"command": args.command, "input": str(args.input)})


def _name(path) -> str:
    return Path(path).stem


def cmd_compare(args) -> None:
    named = {}
    for p in [args.ref, *args.dists]:
        key = _name(p)
        if key in named:
            key = str(p)
        named[key] = load(p)
    ref = _name(args.ref) if _name(args.ref) in named else str(args.ref)
    matrix = analysis.compare_matrix(named, ref)
    names = list(matrix)
    if args.format == "json":
        obj = {a: {b: {m: matrix[a][b].get(m) for m in analysis.METHODS}
                   | {"shared": len(matrix[a][b].shared_support)} for b in names} for a in names}
        _emit(json.dumps(obj, indent=1, sort_keys=False) + "\n", args.out)
        return

    def cell(v):
        return "" if v is None else f"{v:.6f}"

    rows = [[a, *(cell(matrix[a][b].get(args.method)) for b in names)] for a in names]
    _emit(_table((args.method, *names), rows), args.out)


def cmd_missed(args) -> None:
    weak, strong = load(args.weak), load(args.strong)
    cx = complexity_table(strong)
    rows = [[to_text(s), f"{cx[s]:.6f}"] for s in analysis.missed_strings(weak, strong, args.k)]
    _emit(_table(("string", "ctm_complexity"), rows), args.out)


def cmd_baselines(args) -> None:
    strings = _read_strings(args.strings)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateInputWarning)
        rows = [[to_text(s), f"{shannon_entropy(s):.6f}", lzw_compressed_length(s)] for s in strings]
    _emit(_table(("string", "entropy", "lzw_bits"), rows), args.out)
    if args.ref:
        ref = load(args.ref)
        ent, lzw = analysis.baseline_rankings(strings)
        for d in (ent, lzw):
            c = analysis.compare(d, ref)
            sys.stderr.write(f"{c.model_a} vs {_name(args.ref)}: kendall={c.kendall} "
                             f"spearman={c.spearman} shared={len(c.shared_support)}\n")


def _distinct(d: EmpiricalDistribution, max_len: int | None) -> int:
    return sum(1 for s in d.support if max_len is None or len(s) <= max_len)


def cmd_table1(args) -> None:
    """Distinct strings per model. ``--convention table`` counts outputs of
    runs on blank 0 without consolidation; ``strict`` consolidates the
    union over both blanks and keeps strings of at most 12 bits."""
    strict = args.convention == "strict"
    limit = 12 if strict else None
    n = args.states
    cutoffs = TM_CUTOFFS.get(n)
    if cutoffs is None:
        raise UsageError(f"table1 supports --states in {sorted(TM_CUTOFFS)}")
    blanks = (0, 1) if strict else (0,)
    census = machines.ctm_census(n, cutoffs[-1], blanks, jobs=args.jobs, checkpoint=args.checkpoint)
    tm = {c: census.distribution(c) for c in cutoffs}
    if strict:
        tm = {c: consolidate(d) for c, d in tm.items()}

    rows = []
    if not args.skip_fsa:
        hists = transducers.fsa_distributions(8, args.fsa_max, args.scheme)
        fsa = set().union(*(d.support for d in hists.values()))
        ap = transducers.DescriptionTable(args.fsa_max, args.scheme).ap_distribution()
        rows.append((3, f"FSA(8-{args.fsa_max})", sum(1 for s in fsa if limit is None or len(s) <= limit)))
        rows.append((3, f"FSA/AP(8-{args.fsa_max})", _distinct(ap, limit)))
    if args.grammars:
        ref = sorted(tm[cutoffs[-1]].support, key=lambda s: (len(s), s))
        cfg = grammars.cfg_distribution(grammars.enumerate_grammars(args.grammars), ref)
        rows.append((2, f"CFG({args.grammars})", _distinct(cfg, limit)))
    for c in cutoffs[:-1]:
        rows.append(("(2,0)", f"LBA({c})", _distinct(tm[c], limit)))
    rows.append((0, f"LBA {cutoffs[-1]} = TM({n},2)", _distinct(tm[cutoffs[-1]], limit)))
    _emit(_table(("chomsky_type", "model", "strings"), rows), args.out)


def cmd_convergence(args) -> None:
    n = args.states
    cutoffs = args.cutoffs or TM_CUTOFFS.get(n)
    if not cutoffs:
        raise UsageError("pass --cutoffs")
    cutoffs = sorted(cutoffs)
    census = machines.ctm_census(n, cutoffs[-1], args.blanks, jobs=args.jobs,
                                 checkpoint=args.checkpoint)
    ref = census.distribution(cutoffs[-1])
    rows = []
    for c in cutoffs:
        r = analysis.compare(census.distribution(c), ref)
        rows.append([c, *(("" if r.get(m) is None else f"{r.get(m):.6f}") for m in analysis.METHODS),
                     len(r.shared_support)])
    _emit(_table(("cutoff", *analysis.METHODS, "shared"), rows), args.out)


# -- parser ----------------------------------------------------------------------

def _common() -> argparse.ArgumentParser:
    # SUPPRESS lets the same flags appear before or after the subcommand
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("global options")
    g.add_argument("--jobs", type=int, default=argparse.SUPPRESS, help="worker processes")
    g.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    g.add_argument("--checkpoint", default=argparse.SUPPRESS, help="checkpoint directory")
    g.add_argument("--out", default=argparse.SUPPRESS, help="output file (default stdout)")
    g.add_argument("--format", choices=("csv", "json"), default=argparse.SUPPRESS)
    g.add_argument("-v", "--verbose", action="count", default=argparse.SUPPRESS)
    return p


GLOBAL_DEFAULTS = {"jobs": 1, "seed": None, "checkpoint": None, "out": None,
                   "format": "csv", "verbose": 0}


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="subuniversal", parents=[common],
                                     description="Output distributions and complexity "
                                                 "estimates of sub-universal models.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=func)
        return p

    p = add("fsa-dist", cmd_fsa_dist, "transducer output distribution at description size n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--scheme", default=transducers.DEFAULT_SCHEME)
    p.add_argument("--ap", action="store_true",
                   help="algorithmic-probability sums over all sizes <= n instead")
    p.add_argument("--pairs-out", help="also write every description pair of size n")

    p = add("fsa-complexity", cmd_fsa_complexity, "finite-state complexity of short strings")
    p.add_argument("--max-string-len", type=int, required=True)
    p.add_argument("--scheme", default=transducers.DEFAULT_SCHEME)

    p = add("cfg-gen", cmd_cfg_gen, "list the first grammars in enumeration order")
    p.add_argument("--limit", type=int, default=40000)

    p = add("cfg-dist", cmd_cfg_dist, "grammar frequencies of a string set")
    p.add_argument("--grammars", help="grammar CSV from cfg-gen (default: enumerate --limit)")
    p.add_argument("--limit", type=int, default=40000)
    p.add_argument("--strings", help="string set; overrides the TM(4,2) default")

    p = add("tm-dist", cmd_tm_dist, "halting Turing machine output distribution")
    p.add_argument("--states", type=int, required=True)
    p.add_argument("--cutoff", type=int)
    p.add_argument("--blanks", type=_blanks, default=(0, 1))
    p.add_argument("--sample", type=int)
    p.add_argument("--method", choices=("auto", "tree", "index"), default="auto")
    p.add_argument("--consolidate", action="store_true")

    p = add("tm-nonhalting", cmd_tm_nonhalting, "snapshots of machines without halt entries")
    p.add_argument("--states", type=int, required=True)
    p.add_argument("--steps", type=int, default=11)
    p.add_argument("--blanks", type=_blanks, default=(0, 1))
    p.add_argument("--sample", type=int)

    p = add("ca-dist", cmd_ca_dist, "cellular automaton row distribution")
    p.add_argument("--family", choices=sorted(automata.FAMILIES), default="elementary")
    p.add_argument("--steps", type=int, default=12)
    p.add_argument("--backgrounds", type=_blanks, default=(0, 1))

    p = add("consolidate", cmd_consolidate, "average a distribution over symmetry orbits")
    p.add_argument("input")

    p = add("compare", cmd_compare, "rank-correlation matrix")
    p.add_argument("--ref", required=True)
    p.add_argument("--dists", nargs="+", required=True)
    p.add_argument("--method", choices=analysis.METHODS, default="kendall")

    p = add("missed", cmd_missed, "most complex strings a weaker model never produces")
    p.add_argument("--weak", required=True)
    p.add_argument("--strong", required=True)
    p.add_argument("-k", type=int, default=50)

    p = add("baselines", cmd_baselines, "entropy and LZW values of a string set")
    p.add_argument("--strings", required=True)
    p.add_argument("--ref", help="report rank correlations against this distribution")

    p = add("table1", cmd_table1, "distinct strings per model")
    p.add_argument("--states", type=int, default=4)
    p.add_argument("--convention", choices=("table", "strict"), default="table")
    p.add_argument("--grammars", type=int, default=40000, help="0 skips the grammar row")
    p.add_argument("--fsa-max", type=int, default=22)
    p.add_argument("--skip-fsa", action="store_true")
    p.add_argument("--scheme", default=transducers.DEFAULT_SCHEME)

    p = add("convergence", cmd_convergence, "correlation of each cutoff with the largest")
    p.add_argument("--states", type=int, default=4)
    p.add_argument("--cutoffs", type=int, nargs="+")
    p.add_argument("--blanks", type=_blanks, default=(0, 1))
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for k, v in GLOBAL_DEFAULTS.items():
        if not hasattr(args, k):
            setattr(args, k, v)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except (UsageError, CheckpointError, ValueError, OSError) as exc:
        print(f"subuniversal {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except KeyboardInterrupt:
        print(f"subuniversal {args.command}: interrupted; rerun with the same "
              "--checkpoint to resume", file=sys.stderr)
        return 130
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

"""Command-line front end: ``qutrit-mub <command> ...``.

Exit codes: 0 success, 1 verification failure, 2 usage error.  JSON goes
to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

import numpy as np

from . import mub, states, tomography
from .cyclotomic import cyc_to_json
from .mcs import McsError, TheoremViolation, enumerate_all_mcs, from_strings
from .partition import (SCHEMA, SearchBudgetExceeded, enumerate_partitions,
                        find_partition_with_structure, mcs_to_json, verify_coexistence)
from .pauli import PauliError
from .reference import two_qutrit_partition

log = logging.getLogger("qutrit_mub")


class UsageError(Exception):
    pass


def _emit(obj) -> None:
    json.dump(obj, sys.stdout, indent=2)
    sys.stdout.write("\n")


def cmd_mcs_list(args) -> int:
    catalog = enumerate_all_mcs(args.n)
    shown = [m for m in catalog if args.cls is None or m.kind == args.cls]
    census = {}
    for m in catalog:
        census[m.kind] = census.get(m.kind, 0) + 1
    if args.json:
        _emit({"schema": SCHEMA, "n": args.n, "total": len(catalog), "census": census,
               "mcs": [mcs_to_json(m) for m in shown]})
        return 0
    for m in shown:
        print(f"{m.kind:<2} {m.label():<20} profile={list(m.profile)}")
    print(f"{len(catalog)} MCS's in total: " + ", ".join(f"{v} {k}" for k, v in census.items()))
    if args.cls is not None:
        print(f"{len(shown)} of class {args.cls}")
    return 0


def cmd_partition_enumerate(args) -> int:
    parts = enumerate_partitions(args.n, threads=args.threads)
    structures = sorted({str(p.structure) for p in parts})
    if args.json:
        _emit({"schema": SCHEMA, "n": args.n, "count": len(parts),
               "partitions": [p.to_json() for p in parts]})
        return 0
    print(f"{len(parts)} partitions, all with structure {structures[0]}" if len(structures) == 1
          else f"{len(parts)} partitions with structures {', '.join(structures)}")
    return 0


def cmd_partition_find(args) -> int:
    if args.n != 3:
        raise UsageError("partition find supports --n 3 only")
    try:
        p = find_partition_with_structure(args.separable, args.n, node_limit=args.node_limit)
    except SearchBudgetExceeded as exc:
        print(f"search stopped: {exc}", file=sys.stderr)
        return 1
    if p is None:
        if args.json:
            _emit({"schema": SCHEMA, "n": args.n, "separable": args.separable, "found": False})
        else:
            print(f"no partition with {args.separable} separable MCS's: search exhausted")
        return 0
    report = verify_coexistence(p.structure, args.n)
    if args.json:
        out = p.to_json()
        out.update(found=True, separable=args.separable, budget_ok=report.ok)
        _emit(out)
    else:
        print(f"found partition with structure {p.structure}")
        for m in p.mcs_list:
            print(f"  {m.kind:<2} {m.label()}")
        print(report)
    return 0 if report.ok else 1


def cmd_verify_all(args) -> int:
    from .verify import verify_all
    ledger = verify_all(args.n, threads=args.threads)
    if args.json:
        _emit({"schema": SCHEMA, "n": args.n, "ok": ledger.ok,
               "entries": [{"name": e.name, "ok": e.ok, "detail": e.detail} for e in ledger]})
    else:
        for e in ledger:
            print(e)
        failed = sum(not e.ok for e in ledger)
        print(f"{len(ledger) - failed}/{len(ledger)} checks pass")
    return 0 if ledger.ok else 1


def cmd_basis_build(args) -> int:
    gens = [t for t in args.generators.replace(",", " ").split() if t]
    m = from_strings(gens)
    b = mub.basis_from_mcs(m)
    rep = mub.verify_orthonormal(b)
    if not rep.ok:
        raise TheoremViolation(rep.failures[0])
    if args.json:
        out = b.to_json()
        out["class"] = mub.classify_basis(b).kind
        _emit(out)
        return 0
    print(f"basis {b.name()} of class {mub.classify_basis(b).kind}")
    for lab, s in zip(b.labels, b.states):
        amps = ", ".join(str(c) for c in s.column_entries())
        print(f"  {''.join(map(str, lab))}: norm^2 {mub.state_norm2(s)}  [{amps}]")
    return 0


_DEFAULT_PRODUCT = {"bell": "ZX", "ghz": "ZZZ", "ghz-prime": "ZZZ", "aharonov": "ZZZ"}


def _default_product(name: str, indices) -> str:
    if name == "sb":
        # Z on the pure qutrit, then Z and X on the entangled pair
        out = ["Z", "X"]
        out.insert(indices[0] - 1, "Z")
        return "".join(out)
    return _DEFAULT_PRODUCT[name]


def cmd_state(args) -> int:
    try:
        vec, basis = states.named_state(args.name, *args.indices)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    product = args.basis or _default_product(args.name, args.indices)
    exp = states.expand(vec, states.product_basis(product))
    terms = exp.relative()
    scale = exp.terms[0][1]
    if args.json:
        _emit({
            "schema": SCHEMA,
            "state": " ".join([args.name, *map(str, args.indices)]),
            "basis": basis.name() if basis else None,
            "norm2": str(mub.state_norm2(vec)),
            "amplitudes": [cyc_to_json(c) for c in vec.column_entries()],
            "expansion": {
                "product_basis": f"S({','.join(product)})",
                "scale": cyc_to_json(scale),
                "terms": [{"label": "".join(map(str, lab)), "coefficient": cyc_to_json(c)}
                          for lab, c in terms],
            },
        })
        return 0
    title = " ".join([args.name, *map(str, args.indices)])
    print(f"{title}" + (f" in basis {basis.name()}" if basis else ""))
    print(f"  norm^2 = {mub.state_norm2(vec)}")
    print(f"  expansion in S({','.join(product)}), {len(terms)} terms, overall factor {scale}:")
    for lab, c in terms:
        print(f"    ({c}) |{','.join(map(str, lab))}>")
    return 0


def cmd_tomography_roundtrip(args) -> int:
    if args.n == 1:
        p = enumerate_partitions(1)[0]
    elif args.n == 2:
        p = two_qutrit_partition()
    else:
        p = find_partition_with_structure(4, 3)
    bases = mub.partition_bases(p)
    rng = np.random.default_rng(args.seed)
    rho = tomography.random_mixture(rng, args.n, args.terms)
    table, back, ok = tomography.roundtrip(rho, bases)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            fh.write(table.to_csv())
        print(f"wrote probability table to {args.csv}", file=sys.stderr)
    if args.json:
        _emit({"schema": SCHEMA, "n": args.n, "seed": args.seed, "exact": ok,
               "bases": list(table.names),
               "probabilities": [[str(x) for x in row] for row in table.rows]})
    else:
        print(f"random mixture of {args.terms} pure states (seed {args.seed}), N={args.n}")
        print(f"{len(table.rows)} bases x {len(table.labels)} outcomes measured")
        print("exact round trip" if ok else "ROUND TRIP MISMATCH")
    return 0 if ok else 1


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qutrit-mub", description="Exact qutrit Pauli groups and mutually unbiased bases.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    parser.add_argument("--threads", type=int, default=1, help="worker threads for searches")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    mcs_p = sub.add_parser("mcs", help="maximally commuting subsets")
    mcs_sub = mcs_p.add_subparsers(dest="action", required=True, parser_class=_Parser)
    lst = mcs_sub.add_parser("list", help="enumerate every MCS")
    lst.add_argument("--n", type=int, choices=(1, 2, 3), required=True)
    lst.add_argument("--class", dest="cls", choices=("S", "B", "SB", "G"))
    lst.add_argument("--json", action="store_true")
    lst.set_defaults(func=cmd_mcs_list)

    part = sub.add_parser("partition", help="partitions into disjoint MCS's")
    part_sub = part.add_subparsers(dest="action", required=True, parser_class=_Parser)
    en = part_sub.add_parser("enumerate", help="all partitions (N <= 2)")
    en.add_argument("--n", type=int, choices=(1, 2), required=True)
    en.add_argument("--json", action="store_true")
    en.set_defaults(func=cmd_partition_enumerate)
    fd = part_sub.add_parser("find", help="witness partition with a given separable count")
    fd.add_argument("--n", type=int, default=3)
    fd.add_argument("--separable", type=int, required=True)
    fd.add_argument("--node-limit", type=int)
    fd.add_argument("--json", action="store_true")
    fd.set_defaults(func=cmd_partition_find)

    ver = sub.add_parser("verify", help="theorem suite")
    ver_sub = ver.add_subparsers(dest="action", required=True, parser_class=_Parser)
    va = ver_sub.add_parser("all", help="run every check for N qutrits")
    va.add_argument("--n", type=int, choices=(1, 2, 3), required=True)
    va.add_argument("--json", action="store_true")
    va.set_defaults(func=cmd_verify_all)

    bas = sub.add_parser("basis", help="eigenbases of an MCS")
    bas_sub = bas.add_subparsers(dest="action", required=True, parser_class=_Parser)
    bb = bas_sub.add_parser("build", help="build the basis for the given generators")
    bb.add_argument("--generators", required=True, help='e.g. "ZX,VZ"')
    bb.add_argument("--json", action="store_true")
    bb.set_defaults(func=cmd_basis_build)

    st = sub.add_parser("state", help="named states: bell n m | ghz n l m | ghz-prime n l m | "
                                      "sb slot n l m | aharonov")
    st.add_argument("name", choices=("bell", "ghz", "ghz-prime", "sb", "aharonov"))
    st.add_argument("indices", type=int, nargs="*")
    st.add_argument("--basis", help="product basis letters for the expansion, e.g. ZX")
    st.add_argument("--json", action="store_true")
    st.set_defaults(func=cmd_state)

    tom = sub.add_parser("tomography", help="exact MUB tomography")
    tom_sub = tom.add_subparsers(dest="action", required=True, parser_class=_Parser)
    rt = tom_sub.add_parser("roundtrip", help="probabilities and reconstruction of a random mixture")
    rt.add_argument("--n", type=int, choices=(1, 2, 3), default=2)
    rt.add_argument("--seed", type=int, default=0)
    rt.add_argument("--terms", type=int, default=5)
    rt.add_argument("--csv", help="also write the probability table here")
    rt.add_argument("--json", action="store_true")
    rt.set_defaults(func=cmd_tomography_roundtrip)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.threads < 1:
            raise UsageError("--threads must be at least 1")
    except UsageError as exc:
        print(f"qutrit-mub: error: {exc}", file=sys.stderr)
        return 2
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"qutrit-mub: error: {exc}", file=sys.stderr)
        return 2
    except (PauliError, McsError) as exc:
        print(f"qutrit-mub: invalid input: {exc}", file=sys.stderr)
        return 2
    except TheoremViolation as exc:
        print(f"qutrit-mub: verification failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Exit codes: 0 when every checked property holds, 1 when one fails (the
witness is printed), 2 for usage or input errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import acceptance
from .algebra import FAMILIES, VARIETIES, check_axiom_family, classify, ordered_labels
from .catalog import catalog
from .congruence import all_congruences, closed_of_theta, congruence_duality, doubly_closed_sets
from .enumerator import algebra_key, enumerate_algebra_batch, enumerate_bdls
from .errors import NotWHB, SizeBound
from .frames import KINDS, FrameConditionViolated, check_frame, complex_algebra
from .io import FormatError, algebra_to_doc, content_hash, dumps, frame_to_doc, read_algebra, read_frame, write_json
from .lattice import LatticeError
from .spectrum import canonical_frame, filter_name, points, stone_map, stone_report
from .tense import (
    check_tense_axioms,
    congruence_transfer,
    d_cyclicity,
    recovered_operators,
    s4_check,
    tense_extension,
    unit_report,
)
from .terms import ParseError, SignatureMismatch, UninterpretedSymbol, check_equation, parse_equation

# the table search in ``enumerate`` stays on lattices this small; larger runs use --catalog
ENUMERATE_TABLE_MAX = 6


class UsageError(Exception):
    pass


def _emit(args, doc: dict, lines: list[str]) -> None:
    if args.json:
        sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    else:
        sys.stdout.write("\n".join(lines) + "\n")


def _point_names(alg) -> list[list[str]]:
    return [[alg.names[i] for i in range(alg.n) if (P >> i) & 1] for P in points(alg)]


# -- subcommands ------------------------------------------------------------------


def cmd_check(args) -> int:
    alg = read_algebra(args.file)
    names = alg.names
    labels = ordered_labels(classify(alg))
    reports = {fam: check_axiom_family(alg, fam) for fam in FAMILIES}
    failed = False
    lines = [f"algebra {args.file} ({alg.n} elements)", "varieties: " + (", ".join(labels) or "none")]
    doc: dict = {"file": str(args.file), "elements": list(names), "varieties": labels, "axioms": {}}
    for fam, reps in reports.items():
        for rep in reps:
            lines.append("  " + rep.describe(names))
            doc["axioms"][rep.id] = _report_doc(rep, names)
    doc["equations"] = []
    for k, text in enumerate(args.equation or []):
        lhs, rhs = parse_equation(text)
        rep = check_equation(lhs, rhs, alg, f"eq{k + 1}")
        lines.append(f"  {text}  ->  " + rep.describe(names))
        doc["equations"].append({"equation": text, **_report_doc(rep, names)})
        failed |= not rep.holds
    if args.variety:
        if args.variety not in VARIETIES:
            raise UsageError(f"unknown variety {args.variety!r}")
        member = args.variety in labels
        lines.append(f"member of {args.variety}: {'yes' if member else 'no'}")
        doc["member"] = {args.variety: member}
        failed |= not member
    _emit(args, doc, lines)
    return 1 if failed else 0


def _report_doc(rep, names) -> dict:
    out: dict = {"holds": rep.holds}
    if not rep.holds:
        out["witness"] = {v: names[x] for v, x in rep.witness.items()}
        out["lhs"] = names[rep.lhs_value]
        out["rhs"] = names[rep.rhs_value]
    return out


def _frame_checks(alg) -> list[tuple[str, bool, tuple | None]]:
    f = canonical_frame(alg).frame
    rep = check_frame(f, "DWH")
    return [(r.name, r.holds, r.witness) for r in rep.results]


def cmd_spectrum(args) -> int:
    alg = read_algebra(args.file)
    cf = canonical_frame(alg)
    sigma = stone_map(alg)
    pnames = _point_names(alg)
    doc = frame_to_doc(cf.frame, pnames)
    doc["stone"] = {alg.names[a]: [j for j in range(len(pnames)) if (sigma[a] >> j) & 1] for a in range(alg.n)}
    checks = _frame_checks(alg) if {"WH", "WD"} <= classify(alg) else []
    doc["checks"] = {name: ok for name, ok, _ in checks}
    lines = [f"prime filters: {len(pnames)}"]
    for j, P in enumerate(points(alg)):
        lines.append(f"  P{j + 1} = {filter_name(alg, P)}")
    for which in ("R", "S"):
        rel = cf.frame.rel(which)
        pairs = [f"(P{i + 1},P{k + 1})" for i in range(rel.shape[0]) for k in range(rel.shape[1]) if rel[i, k]]
        lines.append(f"{which}_A = {{{', '.join(pairs)}}}")
    for a in range(alg.n):
        lines.append(f"  sigma({alg.names[a]}) = {{{', '.join(f'P{j + 1}' for j in doc['stone'][alg.names[a]])}}}")
    ok = True
    for name, holds, w in checks:
        lines.append(f"frame condition {name}: {'holds' if holds else f'fails at {w}'}")
        ok &= holds
    _emit(args, doc, lines)
    return 0 if ok else 1


def cmd_frame(args) -> int:
    f = read_frame(args.file)
    rep = check_frame(f, args.kind)
    doc = {
        "file": str(args.file),
        "kind": args.kind,
        "conditions": [{"name": r.name, "holds": r.holds, "witness": list(r.witness) if r.witness else None} for r in rep.results],
    }
    lines = [f"frame {args.file} ({f.m} points) as {args.kind}-frame"]
    for r in rep.results:
        lines.append(f"  {r.name}: {'holds' if r.holds else f'fails at {r.witness}'}")
    _emit(args, doc, lines)
    return 0 if rep.ok else 1


def cmd_complex(args) -> int:
    f = read_frame(args.file)
    try:
        alg = complex_algebra(f, args.kind)
    except FrameConditionViolated as e:
        sys.stderr.write(f"FrameConditionViolated: {e}\n")
        return 1
    doc = algebra_to_doc(alg)
    if args.out:
        write_json(args.out, doc)
        _emit(args, {"out": str(args.out), "elements": len(doc["elements"])}, [f"wrote {args.out} ({alg.n} elements)"])
    else:
        sys.stdout.write(dumps(doc))
    return 0


def cmd_represent(args) -> int:
    alg = read_algebra(args.file)
    rep = stone_report(alg)
    names = alg.names
    viol = [[v[0]] + [names[x] for x in v[1:]] for v in rep.violations]
    doc = {"file": str(args.file), "injective": rep.injective, "violations": viol, "ok": rep.ok}
    lines = [f"sigma injective: {'yes' if rep.injective else 'no'}"]
    if viol:
        lines.append(f"sigma fails to preserve {len(viol)} operation instances, first {viol[0]}")
    else:
        lines.append("sigma preserves and, or, 0, 1, ->, <-")
    _emit(args, doc, lines)
    return 0 if rep.ok else 1


def cmd_congruences(args) -> int:
    alg = read_algebra(args.file)
    names = alg.names
    cs = all_congruences(alg)
    pnames = ["{" + ",".join(p) + "}" for p in _point_names(alg)]
    rows = []
    lines = [f"{len(cs)} congruences"]
    for c in cs:
        Y = closed_of_theta(alg, c)
        ys = [pnames[j] for j in range(len(pnames)) if (Y >> j) & 1]
        rows.append({"blocks": [[names[i] for i in b] for b in c.blocks()], "closed_set": ys})
        lines.append(f"  [{c.describe(names)}]  <->  {{{', '.join(ys)}}}")
    ys_all = doubly_closed_sets(canonical_frame(alg))
    rep = congruence_duality(alg)
    doc = {
        "file": str(args.file),
        "congruences": rows,
        "doubly_closed_sets": len(ys_all),
        "duality": {
            "round_trip_theta": rep.round_trip_theta,
            "round_trip_closed": rep.round_trip_closed,
            "order_reversing": rep.order_reversing,
            "theta_compatible": rep.theta_compatible,
        },
        "ok": rep.ok,
    }
    lines.append(f"{len(ys_all)} doubly closed sets; duality {'holds' if rep.ok else 'FAILS'}")
    _emit(args, doc, lines)
    return 0 if rep.ok else 1


def cmd_tense(args) -> int:
    alg = read_algebra(args.file)
    t = tense_extension(alg)
    checks = check_tense_axioms(t)
    s4 = s4_check(t)
    tr = congruence_transfer(alg)
    un = unit_report(alg)
    g_ok, h_ok = recovered_operators(t)
    cyc = d_cyclicity(t, args.n_max)
    subsets = [t.set_name(U) for U in range(t.n)]
    doc = {
        "file": str(args.file),
        "atoms": [t.label(i) for i in range(t.m)],
        "G": {subsets[U]: subsets[t.G[U]] for U in range(t.n)},
        "H": {subsets[U]: subsets[t.H[U]] for U in range(t.n)},
        "P": {subsets[U]: subsets[t.op("P", U)] for U in range(t.n)},
        "F": {subsets[U]: subsets[t.op("F", U)] for U in range(t.n)},
        "tense_axioms": {c.name: c.holds for c in checks},
        "s4": {c.name: c.holds for c in s4},
        "congruences": {"A": tr.con_A, "T(A)": tr.con_T, "tense_filters": tr.tense_filters,
                        "phi_bijective": tr.phi_bijective, "principal_failures": len(tr.principal_failures)},
        "unit_ok": un.ok,
        "operators_recovered": g_ok and h_ok,
        "d_cycle": cyc,
    }
    lines = [f"T(A) over {t.m} prime filters ({t.n} elements)"]
    for U in range(t.n):
        lines.append(f"  U={subsets[U]}: G={subsets[t.G[U]]} H={subsets[t.H[U]]} P={subsets[t.op('P', U)]} F={subsets[t.op('F', U)]}")
    for c in checks:
        lines.append(f"tense axiom {c.name}: {'holds' if c.holds else f'fails at {c.witness}'}")
    for c in s4:
        lines.append(f"S4 {c.name}: {'holds' if c.holds else 'fails'}")
    lines.append(f"|Con(A)|={tr.con_A} |Con(T(A))|={tr.con_T} tense filters={tr.tense_filters} principal transfer failures={len(tr.principal_failures)}")
    lines.append(f"unit sigma: {'embedding' if un.ok else 'FAILS'}; G and H recovered from M(T(A)): {g_ok and h_ok}")
    lines.append(f"d cycle index: {cyc if cyc is not None else f'none up to {args.n_max}'}")
    ok = all(c.holds for c in checks) and tr.ok and un.ok and g_ok and h_ok
    _emit(args, doc, lines)
    return 0 if ok else 1


def cmd_enumerate(args) -> int:
    if args.variety not in VARIETIES:
        raise UsageError(f"unknown variety {args.variety!r}")
    if args.catalog:
        if args.variety not in ("WHB", "DWH"):
            raise UsageError("catalogs exist for WHB and DWH")
        algs = catalog(args.variety).algebras(args.max_size)
    else:
        if args.max_size > ENUMERATE_TABLE_MAX:
            raise SizeBound(f"table search is limited to {ENUMERATE_TABLE_MAX} elements; use --catalog for larger WHB/DWH sets")
        algs = []
        for L in enumerate_bdls(args.max_size):
            algs.extend(enumerate_algebra_batch(L, args.variety).algebras())
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for A in algs:
        name = content_hash(algebra_key(A)) + ".alg"
        write_json(out / name, algebra_to_doc(A))
        written.append(name)
    _emit(args, {"variety": args.variety, "max_size": args.max_size, "count": len(written), "files": written},
          [f"wrote {len(written)} {args.variety}-algebras to {out}"])
    return 0


def cmd_verify(args) -> int:
    results = acceptance.run_suite(args.suite, args.max_size)
    doc = {"suite": args.suite, "results": [
        {"criterion": r.number, "title": r.title, "passed": r.passed, "detail": r.detail} for r in results
    ]}
    _emit(args, doc, [r.line() for r in results])
    return 0 if all(r.passed for r in results) else 1


# -- parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    def options(default):
        # subcommands suppress their defaults so options given before the subcommand survive
        common = argparse.ArgumentParser(add_help=False)
        common.add_argument("--json", action="store_true", default=default(False), help="emit one JSON document")
        common.add_argument("--jobs", type=int, default=default(1), help="worker cap (computation runs in one process)")
        return common

    p = argparse.ArgumentParser(
        prog="whb", description="Finite weak Heyting-Brouwer algebra toolkit", parents=[options(lambda v: v)]
    )
    common = options(lambda v: argparse.SUPPRESS)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check", parents=[common], help="axiom reports and classification")
    s.add_argument("file")
    s.add_argument("--equation", action="append", help="extra equation 'lhs = rhs' or 'lhs <= rhs'")
    s.add_argument("--variety", help="exit 1 unless the algebra is in this variety")
    s.set_defaults(fn=cmd_check)

    s = sub.add_parser("spectrum", parents=[common], help="prime filters, R_A, S_A and the Stone map")
    s.add_argument("file")
    s.set_defaults(fn=cmd_spectrum)

    s = sub.add_parser("frame", parents=[common], help="check frame conditions")
    s.add_argument("file")
    s.add_argument("--kind", choices=KINDS, default="WHB")
    s.set_defaults(fn=cmd_frame)

    s = sub.add_parser("complex", parents=[common], help="complex algebra of a frame")
    s.add_argument("file")
    s.add_argument("--kind", choices=KINDS, default="WHB")
    s.add_argument("--out")
    s.set_defaults(fn=cmd_complex)

    s = sub.add_parser("represent", parents=[common], help="check the Stone embedding")
    s.add_argument("file")
    s.set_defaults(fn=cmd_represent)

    s = sub.add_parser("congruences", parents=[common], help="congruences and doubly closed sets")
    s.add_argument("file")
    s.set_defaults(fn=cmd_congruences)

    s = sub.add_parser("tense", parents=[common], help="free tense extension and its checks")
    s.add_argument("file")
    s.add_argument("--n-max", type=int, default=8, help="bound for the d-cycle search")
    s.set_defaults(fn=cmd_tense)

    s = sub.add_parser("enumerate", parents=[common], help="write one file per algebra up to isomorphism")
    s.add_argument("--max-size", type=int, required=True)
    s.add_argument("--variety", default="WHB")
    s.add_argument("--out", required=True)
    s.add_argument("--catalog", action="store_true", help="use the merged WHB/DWH catalog (sizes up to 8)")
    s.set_defaults(fn=cmd_enumerate)

    s = sub.add_parser("verify", parents=[common], help="run an acceptance suite")
    s.add_argument("--suite", choices=sorted(acceptance.SUITES), required=True)
    s.add_argument("--max-size", type=int)
    s.set_defaults(fn=cmd_verify)
    return p


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 2
    if args.jobs < 1:
        sys.stderr.write("error: --jobs must be at least 1\n")
        return 2
    try:
        return args.fn(args)
    except (
        OSError,
        FormatError,
        LatticeError,
        SizeBound,
        NotWHB,
        ParseError,
        SignatureMismatch,
        UninterpretedSymbol,
        UsageError,
        ValueError,
        KeyError,
    ) as e:
        msg = e.args[0] if isinstance(e, KeyError) and e.args else e
        sys.stderr.write(f"error: {type(e).__name__}: {msg}\n")
        return 2


def main() -> None:
    sys.exit(run())

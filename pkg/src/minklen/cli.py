"""Command line interface.

Commands: `invariants` (exact invariant report for one polytope), `table`
(dilation series with optional quasi-linear fit), `verify` (built-in corpus
of exactly known values), and `search` (seeded randomized harnesses).

Reports go to stdout as JSON (or aligned text with --format table); logs go
to stderr. Exit codes: 0 success, 1 verification mismatch or bug signal,
2 malformed input, 3 resource cap.
"""

import argparse
import json
import os
import sys
import time

from .corpus import run_corpus
from .dilation import dilate_table, fit_quasilinear
from .lengths import CapExceeded, length_profile
from .polytope import lattice_width, normalized_volume
from .rational import CertificationError, period, rational_length_profile
from .report import (
    MalformedInput,
    Report,
    polytope_digest,
    polytope_from_json,
    zonotope_to_json,
)
from .search import PROBLEMS
from .vectors import format_fraction

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_MALFORMED = 2
EXIT_CAP = 3


def _read_polytope(path):
    if path == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as e:
            raise MalformedInput(str(e)) from e
    return polytope_from_json(text)


def _default_threads():
    env = os.environ.get("MINKLEN_THREADS", "")
    try:
        return max(1, int(env))
    except ValueError:
        return 1


def _emit_table(doc, out):
    for key, value in sorted(doc.items()):
        if isinstance(value, dict):
            for k2, v2 in sorted(value.items()):
                print(f"{key}.{k2}\t{v2}", file=out)
        else:
            print(f"{key}\t{value}", file=out)


def _emit(doc, fmt, out=sys.stdout):
    if fmt == "json":
        print(json.dumps(doc, sort_keys=True), file=out)
    else:
        _emit_table(doc, out)


def cmd_invariants(args) -> int:
    P = _read_polytope(args.file)
    t0 = time.monotonic()
    report = Report(input_digest=polytope_digest(P),
                    requested=("invariants",))
    w, wdir = lattice_width(P)
    prof = length_profile(P)
    values = {
        "ambient_dimension": P.ambient_dim,
        "span_dimension": P.dim,
        "vertex_count": len(P.vertices),
        "lattice_point_count": len(P.lattice_points),
        "volume": format_fraction(normalized_volume(P)),
        "width": w,
        "width_direction": list(wdir),
        "lattice_diameter": prof.values[0],
        "lengths": list(prof.values),
        "length_methods": list(prof.methods),
    }
    witnesses = {"length": zonotope_to_json(prof.witnesses[-1])}
    certified = {"lengths": True}
    try:
        res = rational_length_profile(P)
        values["lambdas"] = [format_fraction(x) for x in res.lambdas]
        values["rational_diameter"] = format_fraction(res.lambdas[0])
        values["threshold_index"] = res.threshold_index
        witnesses["rational"] = zonotope_to_json(res.witness)
        certified["rational"] = res.certification == "certified"
        if args.period:
            values["period"] = period(P, res)
    except NotImplementedError:
        certified["rational"] = False
        values["lambdas"] = None
    report.values = values
    report.witnesses = witnesses
    report.certified = certified
    report.timing_ms = int((time.monotonic() - t0) * 1000)
    _emit(report.to_dict(), args.format)
    return EXIT_OK


def cmd_table(args) -> int:
    P = _read_polytope(args.file)
    t0 = time.monotonic()
    n = args.n or P.ambient_dim
    res = None
    fit_doc = None
    try:
        res = rational_length_profile(P)
    except (NotImplementedError, CapExceeded):
        res = None
    table = dilate_table(P, args.t_max, n, rational=res,
                         cap_lattice_points=args.cap_lattice_points)
    doc = {
        "schema": 1,
        "input_digest": polytope_digest(P),
        "n": n,
        "table": [{"t": e.t, "value": e.value, "source": e.source}
                  for e in table.entries],
        "truncated": table.truncated,
    }
    if res is not None and res.certification == "certified" and not \
            table.truncated:
        try:
            k = period(P, res, n=n)
            horizon = args.horizon or max(4 * k, 12, args.t_max)
            fit = fit_quasilinear(P, horizon, n, rational=res,
                                  period_value=k)
            fit_doc = {
                "period": fit.period,
                "slope": format_fraction(fit.slope),
                "constants": list(fit.constants),
                "stabilization_point": fit.stabilization_point,
                "status": fit.status,
            }
        except (CapExceeded, CertificationError):
            fit_doc = None
    doc["fit"] = fit_doc
    doc["timing_ms"] = int((time.monotonic() - t0) * 1000)
    _emit(doc, args.format)
    return EXIT_OK if not table.truncated else EXIT_CAP


def cmd_verify(args) -> int:
    checks = run_corpus()
    failed = 0
    if args.format == "json":
        doc = [{"name": c.name, "expected": c.expected, "got": c.got,
                "ok": c.ok} for c in checks]
        print(json.dumps(doc, sort_keys=True))
        failed = sum(not c.ok for c in checks)
    else:
        for c in checks:
            mark = "PASS" if c.ok else "FAIL"
            if not c.ok:
                failed += 1
            print(f"{mark} {c.name}: expected {c.expected} got {c.got}")
        print(f"{len(checks) - failed}/{len(checks)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_MISMATCH


def cmd_search(args) -> int:
    runner = PROBLEMS[args.problem]
    kwargs = {"threads": args.threads}
    if args.box is not None:
        kwargs["box"] = args.box
    if args.problem == "simplex-diameter":
        kwargs["dim"] = args.dim
    records = runner(args.seed, args.budget, **kwargs)
    bug_signal = False
    findings = 0
    skipped = 0
    for r in records:
        print(r.to_json())
        findings += bool(r.finding)
        skipped += bool(r.skipped)
        if args.problem == "gap" and r.finding:
            bug_signal = True
    summary = {"summary": True, "instances": len(records),
               "findings": findings, "skipped": skipped}
    print(json.dumps(summary, sort_keys=True))
    return EXIT_MISMATCH if bug_signal else EXIT_OK


def build_parser():
    ap = argparse.ArgumentParser(
        prog="minklen",
        description="Exact Minkowski-length invariants of lattice polytopes")
    sub = ap.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--format", choices=("json", "table"), default="json")
        p.add_argument("--threads", type=int, default=_default_threads())

    p = sub.add_parser("invariants", help="exact invariants of one polytope")
    p.add_argument("file", help="polytope JSON file, or - for stdin")
    p.add_argument("--n", type=int, default=None,
                   help="restrict to the n-th length (default: full profile)")
    p.add_argument("--period", action="store_true",
                   help="also compute the dilation period")
    p.add_argument("--cap-lattice-points", type=int, default=20000)
    add_common(p)
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("table", help="dilation series and quasi-linear fit")
    p.add_argument("file")
    p.add_argument("--t-max", type=int, required=True)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--horizon", type=int, default=None)
    p.add_argument("--cap-lattice-points", type=int, default=20000)
    add_common(p)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("verify", help="run the built-in exact-value corpus")
    add_common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("search", help="seeded randomized searches")
    p.add_argument("problem", choices=sorted(PROBLEMS))
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--budget", type=int, required=True)
    p.add_argument("--box", type=int, default=None)
    p.add_argument("--dim", type=int, choices=(2, 3), default=3)
    add_common(p)
    p.set_defaults(func=cmd_search)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except MalformedInput as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_MALFORMED
    except (CapExceeded,) as e:
        print(f"resource cap: {e}", file=sys.stderr)
        return EXIT_CAP
    except CertificationError as e:
        print(f"internal verification failure: {e}", file=sys.stderr)
        return EXIT_MISMATCH


if __name__ == "__main__":
    sys.exit(main())

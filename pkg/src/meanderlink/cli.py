"""Command-line front end: ``meanderlink {gen,expect,verify,sample}``.

Exit codes: 0 success, 1 failed verification, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

import numpy as np

from . import combinatorics as cb
from . import experiments as ex
from . import meander as mg
from . import pstring as ps

DEFAULT_SEED = 20240229
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _seed(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _decimal(q: Fraction) -> str:
    return f"{float(q):.6f}"


def _write(args: argparse.Namespace, text: str) -> None:
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# gen


def _format_diagram(d: mg.LinkDiagram, fmt: str, seed: int, index: int) -> str:
    if fmt == "json":
        rec = mg.to_record(d)
        rec["seed"] = seed
        rec["index"] = index
        return json.dumps(rec) + "\n"
    if fmt == "pd":
        return mg.export_pd(d) + "\n"
    if fmt == "gauss":
        return mg.export_gauss(d) + "\n"
    st = mg.diagram_stats(d)
    lines = [
        f"diagram {index}: s={d.s} r={d.r}",
        f"  top            {d.graph.top}",
        f"  bottom         {d.graph.bottom}",
        f"  crossing info  {' '.join(d.assignment.words)}",
        f"  crossings      {d.num_crossings}",
        f"  components     {d.num_components} (axis: {d.axis_components})",
        f"  pierced        {st.pierced_circle_positions}",
        f"  bigons         {st.bigons} faces, {st.nesting_bigons} nestings",
        f"  twists         {st.twists}",
        f"  nugatory       {st.nugatory}",
    ]
    return "\n".join(lines) + "\n"


def cmd_gen(args: argparse.Namespace) -> int:
    fixed = args.top is not None or args.bottom is not None
    if fixed and (args.top is None or args.bottom is None):
        raise UsageError("--top and --bottom must be given together")
    if args.format == "csv":
        raise UsageError("gen writes pd, gauss, json or table")
    rng = np.random.default_rng(args.seed)
    chunks = ["# seed=%d\n" % args.seed] if args.format in ("pd", "gauss", "table") else []
    for index in range(args.count):
        if fixed:
            g = mg.graph_from_text(args.top, args.bottom)
        else:
            g = mg.build_graph(ps.sample_uniform(args.s, rng), ps.sample_uniform(args.s, rng))
        if args.alternating:
            pair = mg.alternating_assignments(g, args.r)
            v = pair[int(rng.integers(0, 2))]
        else:
            v = mg.sample_assignment(g.s, args.r, rng)
        d = mg.assemble(g, args.r, v)
        if args.format == "gauss" and d.num_components != 1:
            raise UsageError(f"gauss format needs a knot; diagram {index} has {d.num_components} components")
        chunks.append(_format_diagram(d, args.format, args.seed, index))
    _write(args, "".join(chunks))
    return EXIT_OK


# ---------------------------------------------------------------------------
# expect


def expectation_table(s: int, r: int, alternating: bool) -> dict:
    pierced = cb.expected_pierced_circles(s)
    twists = cb.expected_twists(s, r)
    vol = ex.expected_volume_report(s, r, alternating)
    return {
        "s": s,
        "r": r,
        "pierced_circles": pierced,
        "nestings": cb.expected_nestings(s),
        "bigons": cb.expected_bigons(s),
        "twists": twists,
        "twists_vacuous": twists <= 0,
        "volume_upper": vol["upper"],
        "volume_lower": vol["lower"],
        "volume_vacuous": vol["vacuous"],
    }


def cmd_expect(args: argparse.Namespace) -> int:
    tab = expectation_table(args.s, args.r, args.alternating)
    if args.format == "json":
        out = {k: str(v) if isinstance(v, Fraction) else v for k, v in tab.items()}
        _write(args, json.dumps(out) + "\n")
        return EXIT_OK
    rows = [f"s={tab['s']} r={tab['r']}"]
    for key in ("pierced_circles", "nestings", "bigons", "twists"):
        q = tab[key]
        note = "  (vacuous)" if key == "twists" and tab["twists_vacuous"] else ""
        rows.append(f"{key:<16}{str(q):>14}  ~ {_decimal(q)}{note}")
    rows.append(f"{'volume_upper':<16}{tab['volume_upper']:>14.6f}")
    if tab["volume_lower"] is not None:
        rows.append(f"{'volume_lower':<16}{tab['volume_lower']:>14.6f}")
    if tab["volume_vacuous"]:
        rows.append("volume bounds are vacuous for these parameters")
    _write(args, "\n".join(rows) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify


def _verify_recurrence(args) -> list[tuple[str, bool]]:
    max_s = args.max_s or 100
    return [(f"residual(s={s}) == 0", cb.zeilberger_residual(s) == 0) for s in range(1, max_s + 1)]


def _verify_enumeration(args) -> list[tuple[str, bool]]:
    max_s = args.max_s or ex.MAX_ENUMERATION_S
    if max_s > ex.MAX_ENUMERATION_S:
        raise UsageError(f"exhaustive enumeration supports --max-s <= {ex.MAX_ENUMERATION_S}")
    checks = []
    for s in range(1, max_s + 1):
        rep = ex.run_enumeration(s)
        checks.append((f"s={s} histogram {rep.histogram} == E(s,k)", rep.matches))
    return checks


def _verify_unlinked(args) -> list[tuple[str, bool]]:
    max_r = args.max_r or 8
    if max_r > ex.MAX_UNLINKED_R:
        raise UsageError(f"--max-r must be <= {ex.MAX_UNLINKED_R}")
    checks = []
    for r in range(1, max_r + 1):
        q = ex.run_unlinked_exact(r)
        checks.append((f"r={r} unlinked fraction {q} == 1/2^{r}", q == Fraction(1, 2**r)))
    return checks


def _verify_ratio(args) -> list[tuple[str, bool]]:
    max_s = args.max_s or 200
    if max_s < 2:
        raise UsageError("--max-s must be >= 2")
    pts = cb.ratio_sequence(max_s)
    checks = []
    for prev, cur in zip(pts[1:], pts[2:]):
        checks.append((f"a_{cur.s} < a_{prev.s}", cur.a_s < prev.a_s))
    for p in pts[1:]:
        checks.append((f"E({p.s + 1},0)/E({p.s},0) < 16", p.e_ratio is not None and p.e_ratio < 16))
    return checks


def _verify_narayana(args) -> list[tuple[str, bool]]:
    max_n = args.max_s or 30
    checks = []
    for n in range(1, max_n + 1):
        checks.append((f"sum_k N({n},k) == C_{n}", sum(cb.narayana(n, k) for k in range(1, n + 1)) == cb.catalan(n)))
        checks.append((f"N({n},k) symmetric", all(cb.narayana(n, k) == cb.narayana(n, n - k + 1) for k in range(1, n + 1))))
    return checks


VERIFIERS = {
    "recurrence": _verify_recurrence,
    "enumeration": _verify_enumeration,
    "unlinked": _verify_unlinked,
    "ratio": _verify_ratio,
    "narayana": _verify_narayana,
}


def cmd_verify(args: argparse.Namespace) -> int:
    checks = VERIFIERS[args.target](args)
    lines = [f"{'PASS' if ok else 'FAIL'}  {label}" for label, ok in checks]
    failed = [label for label, ok in checks if not ok]
    if failed:
        lines.append(f"verify {args.target}: FAILED, first counterexample: {failed[0]}")
    else:
        lines.append(f"verify {args.target}: all {len(checks)} checks passed")
    _write(args, "\n".join(lines) + "\n")
    return EXIT_FAIL if failed else EXIT_OK


# ---------------------------------------------------------------------------
# sample


def cmd_sample(args: argparse.Namespace) -> int:
    try:
        rep = ex.run_monte_carlo(args.stat, args.s, args.r, args.trials, args.seed, workers=args.workers)
    except ValueError as err:
        raise UsageError(str(err)) from err
    if args.format == "json":
        text = rep.to_json() + "\n"
    elif args.format == "csv":
        text = ex.reports_to_csv([rep])
    else:
        row = rep.as_row()
        text = "".join(f"{k:<12}{'' if row[k] is None else row[k]}\n" for k in ex.REPORT_FIELDS)
    _write(args, text)
    return EXIT_OK if rep.passes(args.tol) else EXIT_FAIL


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="meanderlink", description="Random meander link toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, formats, default_format):
        p.add_argument("--s", type=_positive, default=5, help="parenthesis pairs per p-string")
        p.add_argument("--r", type=_positive, default=1, help="number of parallel copies")
        p.add_argument("--format", choices=formats, default=default_format)
        p.add_argument("--out", help="write to this file instead of stdout")

    gen = sub.add_parser("gen", help="sample meander link diagrams")
    common(gen, ("table", "pd", "gauss", "json"), "table")
    gen.add_argument("--count", type=_positive, default=1)
    gen.add_argument("--seed", type=_seed, default=DEFAULT_SEED)
    gen.add_argument("--alternating", action="store_true")
    gen.add_argument("--top", help="fix the top p-string instead of sampling")
    gen.add_argument("--bottom", help="fix the bottom p-string instead of sampling")
    gen.set_defaults(func=cmd_gen)

    expect = sub.add_parser("expect", help="exact expectations and volume bounds")
    common(expect, ("table", "json"), "table")
    expect.add_argument("--alternating", action="store_true")
    expect.set_defaults(func=cmd_expect)

    verify = sub.add_parser("verify", help="exact verification runs")
    verify.add_argument("target", choices=sorted(VERIFIERS))
    verify.add_argument("--max-s", type=_positive, dest="max_s")
    verify.add_argument("--max-r", type=_positive, dest="max_r")
    verify.add_argument("--out")
    verify.set_defaults(func=cmd_verify)

    sample = sub.add_parser("sample", help="Monte Carlo estimate of one statistic")
    common(sample, ("table", "json", "csv"), "table")
    sample.add_argument("--stat", choices=ex.STATISTICS, required=True)
    sample.add_argument("--trials", type=_positive, default=10000)
    sample.add_argument("--seed", type=_seed, default=DEFAULT_SEED)
    sample.add_argument("--workers", type=_positive, default=1)
    sample.add_argument("--tol", type=float, default=ex.Z_GATE, help="|z| gate for a passing report")
    sample.set_defaults(func=cmd_sample)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ps.PStringError, mg.DiagramError) as err:
        print(f"meanderlink {args.command}: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

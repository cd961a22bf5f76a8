"""
Command line front end.

Exit codes: 0 ok, 1 usage error, 2 result differs from the expectation,
3 the boundary maps do not form a chain complex.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from .chain import CACHE_ENV, BoundaryCache, boundary, write_boundary
from .homology import (
    ChainBroken,
    compare,
    compute_homology,
    expectation,
    h2_formula,
    h3_conjecture,
    table_value,
)
from .ring import ring_from_tag
from .ybop import (
    DEFAULT_POINTS,
    ZeroColumnSum,
    build_homflypt,
    build_homflypt_inverse,
    build_identity,
    build_jones,
    choose_normalization_point,
    column_normalize_at,
    column_sums,
    kauffman_fixture,
    verify_inverse,
    verify_ybe,
)

EXIT_OK, EXIT_USAGE, EXIT_MISMATCH, EXIT_BROKEN = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_range(text: str) -> list[int]:
    """``3`` or ``3..7`` (inclusive)."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            lo, hi = int(lo), int(hi)
        else:
            lo = hi = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad range {text!r}; use N or A..B") from None
    if lo < 1 or hi < lo:
        raise argparse.ArgumentTypeError(f"bad range {text!r}; need 1 <= A <= B")
    return list(range(lo, hi + 1))


def parse_points(text: str) -> list[Fraction]:
    body = text.split("=", 1)[1] if "=" in text else text
    try:
        pts = [Fraction(p.strip()) for p in body.split(",") if p.strip()]
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"bad point list {text!r}") from None
    if not pts or any(p == 0 for p in pts):
        raise argparse.ArgumentTypeError("specialization points must be nonzero rationals")
    return pts


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _cache(args) -> BoundaryCache | None:
    root = args.cache or os.environ.get(CACHE_ENV)
    return BoundaryCache(root) if root else None


# -- verify -----------------------------------------------------------------------------

def _verify_operator(kind: str, m: int) -> list[tuple[str, bool, bool]]:
    """(check name, observed, required) triples for one operator."""
    checks = []
    if kind == "homflypt":
        R = build_homflypt(m)
        checks.append(("ybe", verify_ybe(R).holds, True))
        checks.append(("inverse", verify_inverse(R, build_homflypt_inverse(m)), True))
        checks.append(("column-unital", all(s == 1 for s in column_sums(R).values()), True))
    elif kind == "identity":
        R = build_identity(m)
        checks.append(("ybe", verify_ybe(R).holds, True))
        checks.append(("inverse", verify_inverse(R, R), True))
        checks.append(("column-unital", all(s == 1 for s in column_sums(R).values()), True))
    elif kind == "jones":
        R = build_jones(m)
        checks.append(("ybe", verify_ybe(R).holds, True))
    else:
        raise UsageError(f"unknown operator {kind!r}")
    return checks


def _counterexample(points, as_json: bool) -> tuple[int, str]:
    K = kauffman_fixture()
    rep = verify_ybe(K)
    try:
        q = choose_normalization_point(K, points)
    except ZeroColumnSum:
        msg = f"no usable normalization point among {[str(p) for p in points]}"
        return EXIT_MISMATCH, (json.dumps({"error": msg}) + "\n") if as_json else msg + "\n"
    norm = verify_ybe(column_normalize_at(K, q))
    ok = rep.holds and not norm.holds
    first = norm.failing_triples[0][0] if norm.failing_triples else None
    if as_json:
        body = {
            "fixture_ybe": "holds" if rep.holds else "fails",
            "normalized_ybe": "holds" if norm.holds else "fails",
            "point": {"q": str(q)},
            "failing_triples": len(norm.failing_triples),
            "first_failing_triple": list(first) if first else None,
            "match": ok,
        }
        text = json.dumps(body) + "\n"
    else:
        text = (
            f"fixture-YBE={'holds' if rep.holds else 'fails'} ({rep.checked} triples)\n"
            f"normalized-YBE={'holds' if norm.holds else 'fails'} at q={q}"
            f" ({len(norm.failing_triples)} failing triples, first {first})\n"
        )
    return (EXIT_OK if ok else EXIT_MISMATCH), text


def cmd_verify(args) -> int:
    if args.counterexample:
        code, text = _counterexample(args.points, args.json)
        _emit(text, args.out)
        return code
    records = []
    ok = True
    for m in args.m:
        for name, got, want in _verify_operator(args.operator, m):
            records.append({"operator": args.operator, "m": m, "check": name, "result": got, "expected": want})
            ok &= got == want
    if args.json:
        text = json.dumps({"checks": records, "match": ok}) + "\n"
    else:
        text = "".join(
            f"{r['operator']} m={r['m']} {r['check']}: {'ok' if r['result'] == r['expected'] else 'FAIL'}\n"
            for r in records
        )
    _emit(text, args.out)
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_counterexample(args) -> int:
    code, text = _counterexample(args.points, args.json)
    _emit(text, args.out)
    return code


# -- homology ---------------------------------------------------------------------------

def _job(m: int, n: int, ring_tag: str, cache_root: str | None):
    cache = BoundaryCache(cache_root) if cache_root else None
    try:
        return compute_homology(build_homflypt(m), n, ring=ring_from_tag(ring_tag), cache=cache)
    except ChainBroken as exc:
        return exc


def _run_jobs(pairs, args):
    root = args.cache or os.environ.get(CACHE_ENV)
    jobs = args.jobs or os.cpu_count() or 1
    if jobs <= 1 or len(pairs) <= 1:
        results = [_job(m, n, args.ring, root) for m, n in pairs]
    else:
        with ProcessPoolExecutor(max_workers=min(jobs, len(pairs))) as ex:
            futs = [ex.submit(_job, m, n, args.ring, root) for m, n in pairs]
            results = [f.result() for f in futs]
    return dict(zip(pairs, results))


def cmd_homology(args) -> int:
    pairs = sorted((m, n) for m in args.m for n in args.n)
    results = _run_jobs(pairs, args)
    records, lines = [], []
    code = EXIT_OK
    for m, n in pairs:
        res = results[(m, n)]
        if isinstance(res, ChainBroken):
            records.append({"m": m, "n": n, "error": str(res)})
            lines.append(f"m={m} n={n}: chain broken: {res}")
            code = EXIT_BROKEN
            continue
        exp = expectation(args.expect, m, n)
        match = None
        if exp is not None:
            cmp = compare(res, exp)
            match = cmp.match
            if not match and code == EXIT_OK:
                code = EXIT_MISMATCH
        elif args.expect not in (None, "none"):
            lines.append(f"m={m} n={n}: no '{args.expect}' expectation applies")
        rec = res.to_json(exp, match)
        records.append(rec)
        tag = "" if match is None else (" [match]" if match else f" [MISMATCH vs {exp.provenance} {exp.summary}]")
        extra = res.unexpected_torsion
        note = f" new torsion: {', '.join(p.pretty() for p in extra)}" if extra else ""
        lines.append(f"{res.describe()}{tag}{note}  ({res.wall_time_ms} ms)")
    if args.json:
        text = "".join(json.dumps(r) + "\n" for r in records)
    else:
        text = "".join(line + "\n" for line in lines)
    _emit(text, args.out)
    return code


def cmd_table(args) -> int:
    ns = args.n
    pairs = sorted((m, n) for m in args.m for n in ns)
    results = _run_jobs(pairs, args)
    code = EXIT_OK
    rows = []
    for n in ns:
        cells = []
        for m in args.m:
            res = results[(m, n)]
            if isinstance(res, ChainBroken):
                cells.append({"m": m, "n": n, "error": str(res)})
                code = EXIT_BROKEN
                continue
            exp = table_value(m, n) or (h2_formula(m) if n == 2 else h3_conjecture(m) if n == 3 else None)
            match = compare(res, exp).match if exp is not None else None
            if match is False and code == EXIT_OK:
                code = EXIT_MISMATCH
            cells.append(res.to_json(exp, match))
        rows.append((n, cells))
    if args.json:
        text = json.dumps({"rows": [{"n": n, "cells": cells} for n, cells in rows]}) + "\n"
    else:
        head = ["H_n"] + [f"m={m}" for m in args.m]
        body = []
        for n, cells in rows:
            body.append([f"H_{n}"] + [
                "broken" if "error" in c else
                (f"({','.join(map(str, c['summary']))})" if c["summary"] else "other")
                + ("" if c["match"] is not False else "!")
                for c in cells
            ])
            body.append(["  ms"] + [str(c.get("wall_time_ms", "")) for c in cells])
        widths = [max(len(r[k]) for r in [head] + body) for k in range(len(head))]
        fmt = lambda r: "  ".join(s.ljust(w) for s, w in zip(r, widths)).rstrip()  # noqa: E731
        text = "\n".join([fmt(head)] + [fmt(r) for r in body]) + "\n"
    _emit(text, args.out)
    return code


def cmd_boundary(args) -> int:
    cache = _cache(args)
    chunks = []
    for m in args.m:
        R = build_homflypt(m)
        for n in args.n:
            M = boundary(R, n, cache)
            chunks.append(write_boundary(M, R.name, m, n))
    _emit("".join(chunks), args.out)
    return EXIT_OK


# -- parser -------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ybhom", description="Yang-Baxter operators and their homology over Q[y].")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, m_default="2", n_default=None):
        sp.add_argument("--m", type=parse_range, default=parse_range(m_default), help="letters, N or A..B")
        if n_default is not None:
            sp.add_argument("--n", type=parse_range, default=parse_range(n_default), help="degrees, N or A..B")
        sp.add_argument("--ring", choices=["qy", "laurent"], default="qy")
        sp.add_argument("--points", type=parse_points, default=[Fraction(x) for x in DEFAULT_POINTS],
                        help="specialization points, e.g. q=2,3,5")
        sp.add_argument("--cache", default=None, help=f"boundary cache directory (or ${CACHE_ENV})")
        sp.add_argument("--json", action="store_true")
        sp.add_argument("--out", default=None, help="write output to FILE")
        sp.add_argument("--jobs", type=int, default=None, help="parallel (m, n) jobs")

    v = sub.add_parser("verify", help="check YBE, inverse and column sums")
    common(v, "1..5")
    v.add_argument("--operator", choices=["homflypt", "identity", "jones"], default="homflypt")
    v.add_argument("--counterexample", action="store_true", help="run the Kauffman normalization check")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("counterexample", help="alias for verify --counterexample")
    common(c)
    c.set_defaults(func=cmd_counterexample)

    h = sub.add_parser("homology", help="compute H_n(R_(m))")
    common(h, "2", "2")
    h.add_argument("--expect", choices=["thm", "table", "conj-pw", "conj-h3", "none"], default="none")
    h.set_defaults(func=cmd_homology)

    t = sub.add_parser("table", help="H_2 / H_3 table in (x, y, z) notation")
    common(t, "3..7", "2..3")
    t.set_defaults(func=cmd_table)

    b = sub.add_parser("boundary", help="dump boundary matrices in the cache format")
    common(b, "2", "3")
    b.set_defaults(func=cmd_boundary)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "jobs", None) is not None and args.jobs < 1:
        parser.error("--jobs must be >= 1")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"ybhom: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

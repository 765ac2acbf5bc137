"""Command-line front end: tables, verification suites and exports.

Exit codes: 0 every check passed, 1 some check failed, 2 usage error,
3 a resource cap was hit.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from . import __version__
from .f2core import brute_force_345, decompose_345, has_property_P
from .grassmann import (
    char_subring_oriented3,
    charrank_oriented_tautological,
    first_failure,
    gysin_report,
    predicted_first_failure,
    two_power_bracket,
    ucharrank_oriented3,
    verify_theorem_k5,
)
from .limits import LIMITS, ResourceCapExceeded
from .oriented3 import (
    admissible,
    cup_bounds,
    cup_bounds_interval,
    subring_cup_support,
    verify_annihilation,
    verify_lemma_not_so,
    verify_relations_a,
)
from .presentations import (
    PreconditionError,
    PresentationError,
    feasible_params,
    fixture_dir,
    format_params,
    restriction_oriented2,
    restriction_w21,
    verify_hom,
    w21_duality_pairs,
)
from .quotient import kernel_of_mul
from .swclasses import g_classes, g_vanishing_degrees

OUTPUT_ENV = "GRASSMOD2_OUTPUT_DIR"

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


# -- serialization ------------------------------------------------------------


def _jsonable(x):
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, (set, frozenset)):
        return sorted(x)
    if isinstance(x, tuple):
        return list(x)
    return str(x)


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), default=_jsonable)


def render_fraction(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def fixture_hashes(names) -> dict:
    out = {}
    for name in names:
        data = (fixture_dir() / f"{name}.pres").read_bytes()
        out[name] = hashlib.sha256(data).hexdigest()[:16]
    return out


def record(suite, check, params, ok, details=None, fixtures=None) -> dict:
    rec = {
        "suite": suite,
        "check": check,
        "params": params,
        "pass": bool(ok),
        "version": __version__,
    }
    if details:
        rec["details"] = details
    if fixtures:
        rec["fixtures"] = fixture_hashes(fixtures)
    return rec


def verdict_records(suite, v) -> list[dict]:
    return [
        record(suite, name, v.params, ok, v.details.get(name))
        for name, ok in v.checks.items()
    ]


# -- suite tasks (top-level so they can run in worker processes) --------------


def task_g_vanishing_k3(max_i: int) -> list[dict]:
    got = g_vanishing_degrees(3, max_i, "table")
    want = {2**r - 3 for r in range(3, max_i.bit_length() + 3) if 2**r - 3 <= max_i}
    return [record("lemma21", "k3_vanishing", {"k": 3, "max": max_i}, got == want,
                   {"vanishing": sorted(got)})]


def task_g_never_zero(k: int, max_i: int) -> list[dict]:
    got = g_vanishing_degrees(k, max_i, "witness")
    return [record("lemma21", "never_zero", {"k": k, "max": max_i}, not got,
                   {"vanishing": sorted(got)})]


def task_w2_congruence(n: int, t: int) -> list[dict]:
    return verdict_records("lemma31", verify_lemma_not_so(n, t))


def task_first_failure(n: int) -> list[dict]:
    got = first_failure(n, 3)
    want = predicted_first_failure(n)
    return [record("thmA", "first_failure", {"n": n, "k": 3}, got == want,
                   {"computed": got, "predicted": want})]


def task_surjective_below_n(n: int) -> list[dict]:
    r = gysin_report(n, 3)
    bad = [j for j in range(min(n, r.top + 1)) if r.ker[j]]
    return [record("thmA", "surjective_upto_n-1", {"n": n, "k": 3}, not bad,
                   {"nonzero_kernel_degrees": bad})]


def task_w3_injective(n: int) -> list[dict]:
    S = char_subring_oriented3(n)
    w3 = S.ring.gen("w3")
    bad = [j for j in range(0, n - 5) if kernel_of_mul(S, w3, j)]
    return [record("thmA", "w3_injective_upto_n-6", {"n": n}, not bad,
                   {"nonzero_kernel_degrees": bad})]


def task_feasible_params(n: int) -> list[dict]:
    t = two_power_bracket(n)
    name = "oriented3_power" if n == 2**t else "oriented3_near_power"
    params = {"n": n, "t": t}
    found = feasible_params(n)
    recs = [record("thmB", "feasible_nonempty", params, bool(found),
                   {"count": len(found), "assignments": [format_params(a) for a in found]},
                   fixtures=[name])]
    if 2**t - 3 <= n <= 2**t - 2:
        p2_zero = all(not a["P2"] for a in found)
        recs.append(record("thmB", "P2_vanishes", params, p2_zero, fixtures=[name]))
    return recs


def task_relations_a(n: int, samples: int, seed: int) -> list[dict]:
    return (
        verdict_records("relations-a", verify_annihilation(n))
        + verdict_records("relations-a", verify_relations_a(n, samples, seed))
    )


def task_cup_bounds(t: int) -> list[dict]:
    recs = []
    lo_n, hi_n = cup_bounds_interval(t)
    for n in range(int(-(-lo_n // 1)), hi_n + 1):
        lower, upper = cup_bounds(n, t)
        recs.append(record("cup-bounds", "lower<=upper", {"n": n, "t": t}, lower <= upper,
                           {"lower": lower, "upper": upper}))
    for n in range(2 ** (t - 1), 2**t):
        v = subring_cup_support(n, t)
        recs.extend(verdict_records("cup-bounds", v))
    return recs


def task_decompose_345(max_i: int, brute_max: int) -> list[dict]:
    bad = []
    for i in range(max_i + 1):
        d = decompose_345(i)
        if i in (1, 2, 7):
            if d is not None:
                bad.append(i)
        elif d is None or 3 * d[0] + 4 * d[1] + 5 * d[2] != i or not has_property_P(*d):
            bad.append(i)
    recs = [record("prop34", "constructive", {"max": max_i}, not bad, {"failures": bad[:10]})]
    mism = [i for i in range(brute_max + 1)
            if (decompose_345(i) is None) != (brute_force_345(i) is None)]
    recs.append(record("prop34", "matches_search", {"max": brute_max}, not mism,
                       {"failures": mism[:10]}))
    return recs


def task_kernel_bound_k5(n: int, k: int) -> list[dict]:
    return verdict_records("thm-k5", verify_theorem_k5(n, k))


def task_ucharrank(n: int) -> list[dict]:
    cr = charrank_oriented_tautological(n, 3)
    try:
        uc = ucharrank_oriented3(n)
        ok = uc == cr
    except AssertionError:
        uc, ok = None, False
    return [record("ucharrank", "equals_charrank", {"n": n}, ok,
                   {"charrank": cr, "ucharrank": uc})]


def task_restriction_oriented2(n: int) -> list[dict]:
    spec = restriction_oriented2(n)
    fx = ["oriented2_odd", "oriented2_even"]
    return [record("homs", "oriented2_restriction", {"n": n}, verify_hom(spec),
                   {"map": spec.label}, fixtures=fx)]


def task_restriction_w21(N: int) -> list[dict]:
    spec = restriction_w21(N)
    fx = ["w21_even", "w21_odd"]
    if N % 2:
        pairs = w21_duality_pairs((N - 1) // 2)
        oks = [verify_hom(spec, None, {"lam": a, "mu": b}) for a, b in pairs]
    else:
        pairs = w21_duality_pairs(N // 2)
        oks = [verify_hom(spec, {"lam": a, "mu": b}, None) for a, b in pairs]
    return [record("homs", "w21_restriction", {"N": N}, bool(pairs) and all(oks),
                   {"map": spec.label, "lambda_mu": [list(p) for p in pairs]}, fixtures=fx)]


def _int_list(text: str | None) -> list[int] | None:
    if text is None:
        return None
    out = []
    for part in text.split(","):
        if "-" in part.strip()[1:]:
            a, b = part.split("-", 1)
            out.extend(range(int(a), int(b) + 1))
        else:
            out.append(int(part))
    return out


def suite_tasks(suite: str, args) -> list[tuple]:
    ns = _int_list(args.n)
    if suite == "lemma21":
        m = args.max or 2048
        return [(task_g_vanishing_k3, (m,))] + [
            (task_g_never_zero, (k, min(m, 512))) for k in range(5, 9)
        ]
    if suite == "lemma31":
        ts = _int_list(args.t) or [4, 5]
        return [
            (task_w2_congruence, (n, t))
            for t in ts
            for n in range(2 ** (t - 1) + 1, 2**t + 1)
            if ns is None or n in ns
        ]
    if suite == "thmA":
        rng = ns or list(range(8, 17))
        tasks = [(task_first_failure, (n,)) for n in rng]
        tasks += [
            (task_surjective_below_n, (n,))
            for n in (ns or range(8, 21))
            if (n + 3) & (n + 2) and (n + 2) & (n + 1) and (n + 1) & n and n & (n - 1)
        ]
        tasks += [(task_w3_injective, (n,)) for n in (ns or range(8, 17))]
        return tasks
    if suite == "thmB":
        return [(task_feasible_params, (n,)) for n in (ns or [8, 13, 14, 15, 16])]
    if suite == "relations-a":
        rng = ns or [n for n in list(range(10, 13)) + list(range(17, 29)) if admissible(n)]
        return [(task_relations_a, (n, args.samples, args.seed)) for n in rng]
    if suite == "cup-bounds":
        return [(task_cup_bounds, (t,)) for t in (_int_list(args.t) or [4, 5])]
    if suite == "prop34":
        return [(task_decompose_345, (args.max or 100_000, 2000))]
    if suite == "thm-k5":
        pairs = [(10, 5), (11, 5), (12, 5), (12, 6), (13, 6), (14, 7)]
        if args.k is not None and ns:
            pairs = [(n, args.k) for n in ns]
        return [(task_kernel_bound_k5, p) for p in pairs]
    if suite == "ucharrank":
        return [(task_ucharrank, (n,)) for n in (ns or range(8, 33))]
    if suite == "homs":
        top = args.max or 20
        return [(task_restriction_oriented2, (n,)) for n in range(4, top)] + [
            (task_restriction_w21, (N,)) for N in range(4, top) if N >= 5 or N % 2 == 0
        ]
    raise UsageError(f"unknown suite {suite!r}")


SUITES = ["lemma21", "lemma31", "thmA", "thmB", "relations-a", "cup-bounds",
          "prop34", "thm-k5", "ucharrank", "homs"]


def _run_task(task) -> tuple[list[dict], float]:
    fn, fargs = task
    start = time.perf_counter()
    recs = fn(*fargs)
    return recs, time.perf_counter() - start


def run_suite(suites: list[str], args, out) -> int:
    tasks = []
    for s in suites:
        tasks.extend(suite_tasks(s, args))
    failed = False
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs, initializer=_init_worker,
                                 initargs=(LIMITS.cap_terms, LIMITS.cap_dim, LIMITS.cap_search)) as ex:
            results = ex.map(_run_task, tasks)
            failed = _emit(results, args, out)
    else:
        failed = _emit(map(_run_task, tasks), args, out)
    return EXIT_FAIL if failed else EXIT_OK


def _init_worker(cap_terms, cap_dim, cap_search):
    LIMITS.cap_terms, LIMITS.cap_dim, LIMITS.cap_search = cap_terms, cap_dim, cap_search


def _emit(results, args, out) -> bool:
    failed = False
    for recs, seconds in results:
        for rec in recs:
            if args.timings:
                rec["seconds"] = round(seconds, 3)
            failed |= not rec["pass"]
            if args.format == "json":
                out.write(dumps(rec) + "\n")
            else:
                mark = "PASS" if rec["pass"] else "FAIL"
                out.write(f"{mark} {rec['suite']} {rec['check']} {dumps(rec['params'])}\n")
            out.flush()
    return failed


# -- tables ----------------------------------------------------------------------


def gi_rows(k: int, max_i: int) -> list[dict]:
    g = g_classes(k, max_i)
    return [{"i": i, "terms": len(g[i]), "g": str(g[i])} for i in range(max_i + 1)]


def betti_payload(n: int, k: int) -> dict:
    r = gysin_report(n, k)
    return {
        "n": n,
        "k": k,
        "betti": list(r.betti),
        "failure_degrees": list(r.failure_degrees),
        "first_failure": min(r.failure_degrees),
        "charrank": r.charrank,
    }


EXPORT_COLUMNS = {
    "gi": ["k", "i", "vanishes", "terms", "g"],
    "betti": ["n", "k", "j", "betti", "ker", "coker"],
    "charrank": ["n", "charrank", "ucharrank", "first_failure"],
    "cup-bounds": ["n", "t", "lower", "upper"],
}


def export_rows(target: str, args) -> list[dict]:
    if target == "gi":
        k, m = args.k or 3, args.max if args.max is not None else 64
        return [{"k": k, "i": r["i"], "vanishes": int(r["terms"] == 0 and r["i"] >= 2),
                 "terms": r["terms"], "g": r["g"]} for r in gi_rows(k, m)]
    lo, hi = args.n_min, args.n_max
    if target == "betti":
        k = args.k or 3
        rows = []
        for n in range(lo if lo is not None else 8, (hi if hi is not None else 16) + 1):
            r = gysin_report(n, k)
            for j in range(r.top + 1):
                rows.append({"n": n, "k": k, "j": j, "betti": r.betti[j],
                             "ker": r.ker[j], "coker": r.coker[j]})
        return rows
    if target == "charrank":
        rows = []
        for n in range(lo if lo is not None else 8, (hi if hi is not None else 32) + 1):
            ff = first_failure(n, 3)
            rows.append({"n": n, "charrank": ff - 1, "ucharrank": ucharrank_oriented3(n),
                         "first_failure": ff})
        return rows
    if target == "cup-bounds":
        t = int(args.t or 4)
        a, b = cup_bounds_interval(t)
        start = int(-(-a // 1)) if lo is None else lo
        stop = b if hi is None else hi
        rows = []
        for n in range(start, stop + 1):
            lower, upper = cup_bounds(n, t)
            rows.append({"n": n, "t": t, "lower": render_fraction(lower),
                         "upper": render_fraction(upper)})
        return rows
    raise UsageError(f"unknown export target {target!r}")


def write_table(rows: list[dict], columns: list[str], fmt: str, out) -> None:
    if fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([r[c] for c in columns])
    else:
        out.write(dumps([{c: r[c] for c in columns} for r in rows]) + "\n")


# -- argument parsing ----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="grassmod2", description=__doc__.splitlines()[0])
    p.add_argument("--cap-terms", type=int, default=LIMITS.cap_terms,
                   help="maximum terms in one dual class")
    p.add_argument("--cap-dim", type=int, default=LIMITS.cap_dim,
                   help="maximum monomials in one degree of a quotient")
    p.add_argument("--cap-search", type=int, default=LIMITS.cap_search,
                   help="maximum parameter assignments searched")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for verify")
    p.add_argument("--seed", type=int, default=0, help="seed for sampled checks")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gi", help="table of reduced dual classes g_i")
    g.add_argument("--k", type=int, required=True)
    g.add_argument("--max", type=int, required=True)
    g.add_argument("--format", choices=["text", "json", "csv"], default="text")

    b = sub.add_parser("betti", help="oriented Betti numbers via the Gysin sequence")
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--k", type=int, required=True)
    b.add_argument("--format", choices=["text", "json"], default="text")

    v = sub.add_parser("verify", help="run verification suites")
    v.add_argument("suite", choices=SUITES + ["all"])
    v.add_argument("--n", help="n values: 12 or 10,12 or 9-12")
    v.add_argument("--k", type=int)
    v.add_argument("--t", help="t values")
    v.add_argument("--max", type=int)
    v.add_argument("--samples", type=int, default=10_000)
    v.add_argument("--format", choices=["json", "text"], default="json")
    v.add_argument("--timings", action="store_true",
                   help="add wall-clock seconds (output is then not reproducible)")

    e = sub.add_parser("export", help="write a table as CSV or JSON")
    e.add_argument("target", choices=sorted(EXPORT_COLUMNS))
    e.add_argument("--format", choices=["csv", "json"], default="csv")
    e.add_argument("--out", help=f"output file; default under ${OUTPUT_ENV} or stdout")
    e.add_argument("--k", type=int)
    e.add_argument("--t", type=int)
    e.add_argument("--max", type=int)
    e.add_argument("--n-min", type=int)
    e.add_argument("--n-max", type=int)
    return p


def _export_path(args) -> Path | None:
    if args.out:
        return Path(args.out)
    base = os.environ.get(OUTPUT_ENV)
    if base:
        return Path(base) / f"{args.target}.{args.format}"
    return None


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    LIMITS.cap_terms, LIMITS.cap_dim, LIMITS.cap_search = (
        args.cap_terms, args.cap_dim, args.cap_search)
    try:
        if args.command == "gi":
            if args.k < 2 or args.max < 0:
                raise UsageError("gi needs --k >= 2 and --max >= 0")
            van = sorted(g_vanishing_degrees(args.k, args.max))
            rows = gi_rows(args.k, args.max) if args.k <= 3 or args.format != "text" else []
            if args.format == "json":
                out.write(dumps({"k": args.k, "max": args.max, "vanishing": van,
                                 "g": {str(r["i"]): r["g"] for r in rows}}) + "\n")
            elif args.format == "csv":
                write_table([{"i": r["i"], "terms": r["terms"], "g": r["g"]} for r in rows],
                            ["i", "terms", "g"], "csv", out)
            else:
                for r in rows:
                    out.write(f"g_{r['i']} = {r['g']}\n")
                out.write("vanishing: " + ",".join(map(str, van)) + "\n")
            return EXIT_OK
        if args.command == "betti":
            payload = betti_payload(args.n, args.k)
            if args.format == "json":
                out.write(dumps(payload) + "\n")
            else:
                out.write(",".join(map(str, payload["betti"])) + "\n")
                out.write(f"first_failure: {payload['first_failure']}\n")
                out.write(f"charrank: {payload['charrank']}\n")
            return EXIT_OK
        if args.command == "verify":
            suites = SUITES if args.suite == "all" else [args.suite]
            return run_suite(suites, args, out)
        if args.command == "export":
            rows = export_rows(args.target, args)
            path = _export_path(args)
            if path is None:
                write_table(rows, EXPORT_COLUMNS[args.target], args.format, out)
            else:
                path.parent.mkdir(parents=True, exist_ok=True)
                buf = io.StringIO()
                write_table(rows, EXPORT_COLUMNS[args.target], args.format, buf)
                path.write_text(buf.getvalue())
            return EXIT_OK
    except ResourceCapExceeded as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (UsageError, PreconditionError, PresentationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Subcommands: ``indicators``, ``galois``, ``bounds``, ``lemma``.  Exit codes
are 0 on success, 1 on usage errors, 2 when a resource cap is hit and 3 when
a verification check fails.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from . import __version__
from .ablinalg import parse_abelian, solve_ab_system
from .bounds import BoundsReport, centralizer_report
from .double import (galois_violations, identity_check, indicators_via_f,
                     integrality_report)
from .groups import DEFAULT_ORDER_CAP, ResourceError, SpecError, make_group
from .partition_lemma import (brute_force_solutions, lemma_solvable, random_system, random_template,
                              s_independence_check)

EXIT_OK, EXIT_USAGE, EXIT_RESOURCE, EXIT_VERIFY = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    group: str | None = None
    nmax: int = 8
    p: int | None = None
    format: str = "json"
    jobs: int = 1
    seed: int | None = None
    cap_order: int = DEFAULT_ORDER_CAP
    fuzz: int | None = None
    sindep: bool = False
    r: int = 4
    B: str = "cyclic:2"
    n: int = 12
    s_range: str = "units mod lcm(|B|, n)"

    def __post_init__(self):
        if self.cap_order < 1 or self.jobs < 1:
            raise UsageError("caps and --jobs must be positive")
        if self.nmax < 1:
            raise UsageError("--nmax must be at least 1")


@dataclass
class ReportDocument:
    config: RunConfig
    payload: dict
    ok: bool = True
    timing: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        cfg = {k: v for k, v in vars(self.config).items()}
        return {"tool": "qdouble", "version": __version__, "config": cfg,
                "payload": self.payload, "ok": self.ok, "timing": self.timing}

    def payload_json(self) -> str:
        return json.dumps(self.payload, sort_keys=True)


def _map(cfg: RunConfig, fn, items):
    items = list(items)
    if cfg.jobs > 1:
        with ThreadPoolExecutor(cfg.jobs) as ex:
            return list(ex.map(fn, items))
    return [fn(x) for x in items]


# commands
# --------

def cmd_indicators(cfg: RunConfig) -> ReportDocument:
    if not cfg.group:
        raise UsageError("indicators needs --group")
    G = make_group(cfg.group, cfg.cap_order)
    table = integrality_report(G, cfg.nmax)
    reps = [cl.representative for cl in G.classes]
    ns = table.n_range

    def checks(y):
        id_fail = [n for n in ns if not identity_check(G, y, n)]
        idx = [i for i, V in enumerate(table.irreps) if V.y == y]
        via_fail = []
        for j, n in enumerate(ns):
            via = indicators_via_f(G, y, n)
            if via != [table.values[i][j] for i in idx]:
                via_fail.append(n)
        return id_fail, via_fail

    results = _map(cfg, checks, reps)
    id_fail = [{"y": y, "n": n} for y, (f, _) in zip(reps, results) for n in f]
    via_fail = [{"y": y, "n": n} for y, (_, f) in zip(reps, results) for n in f]
    payload = table.to_dict()
    payload["group_order"] = G.order
    payload["identity_check"] = {"passed": not id_fail, "failures": id_fail}
    payload["two_path_check"] = {"passed": not via_fail, "failures": via_fail}
    return ReportDocument(cfg, payload, ok=not id_fail and not via_fail)


def cmd_galois(cfg: RunConfig) -> ReportDocument:
    if not cfg.group:
        raise UsageError("galois needs --group")
    G = make_group(cfg.group, cfg.cap_order)
    reps = [cl.representative for cl in G.classes]
    ns = list(range(1, cfg.nmax + 1))
    results = _map(cfg, lambda y: [galois_violations(G, y, n) for n in ns], reps)
    checks = [{"y": y, "n": n, "pass": not bad, "bad_s": bad}
              for y, per in zip(reps, results) for n, bad in zip(ns, per)]
    all_pass = all(c["pass"] for c in checks)
    # integrality is claimed for S_N x| A^N (sym:N is the case A = 1)
    claimed = G.family in ("wreath", "sym")
    payload = {"group_spec": G.spec, "group_order": G.order, "n_range": ns, "checks": checks,
               "verdict": "pass" if all_pass else "fail", "claim_applies": claimed}
    return ReportDocument(cfg, payload, ok=all_pass or not claimed)


def cmd_bounds(cfg: RunConfig) -> ReportDocument:
    if cfg.p is None:
        raise UsageError("bounds needs --p")
    if cfg.p < 3 or cfg.p % 2 == 0:
        raise UsageError("--p must be an odd prime")
    try:
        rep = centralizer_report(cfg.p, cap=cfg.cap_order)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return ReportDocument(cfg, {"report": rep.to_dict()}, ok=not rep.violations)


def cmd_lemma(cfg: RunConfig) -> ReportDocument:
    if cfg.r < 1:
        raise UsageError("--r must be positive")
    if cfg.seed is None:
        raise UsageError("lemma suites need an explicit --seed")
    try:
        B = parse_abelian(cfg.B)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rng = random.Random(cfg.seed)
    if cfg.sindep:
        count = cfg.fuzz or 200
        rows = []
        failures = []
        for t in range(count):
            W = random_template(rng, cfg.r, B, cfg.n)
            res = s_independence_check(W)
            verdicts = sorted({(ok, cnt) for per in res.per_cbar.values() for _, ok, cnt in per})
            rows.append({"r": W.r, "n": W.n, "tau": list(W.tau), "theta": list(W.theta),
                         "cbar_choices": len(res.per_cbar), "constant": res.constant,
                         "verdicts": [[ok, cnt] for ok, cnt in verdicts]})
            if not res.constant:
                failures.append({"template": t, "B": str(B), "c": list(W.c), "k": [list(x) for x in W.k],
                                 "tau": list(W.tau), "theta": list(W.theta), "n": W.n,
                                 "per_cbar": {str(k): v for k, v in res.per_cbar.items()}})
        payload = {"mode": "sindep", "B": str(B), "templates": count,
                   "constant": count - len(failures), "rows": rows, "failures": failures}
        return ReportDocument(cfg, payload, ok=not failures)
    count = cfg.fuzz or 1000
    agree = count_agree = 0
    failures = []
    for t in range(count):
        S = random_system(rng.randint(1, cfg.r), B, rng)
        bf = brute_force_solutions(S)
        sol = solve_ab_system(S.as_linear_system())
        ok1 = lemma_solvable(S) == (bf > 0)
        ok2 = sol.count == bf
        agree += ok1
        count_agree += ok2
        if not (ok1 and ok2):
            failures.append({"case": t, "B": str(B), "P": [list(b) for b in S.P.blocks],
                             "Q": [list(b) for b in S.Q.blocks], "p": [list(x) for x in S.p],
                             "q": [list(x) for x in S.q], "brute_force": bf, "solver": sol.count})
    payload = {"mode": "fuzz", "B": str(B), "cases": count, "agreements": agree,
               "count_agreements": count_agree, "failures": failures}
    return ReportDocument(cfg, payload, ok=not failures)


COMMANDS = {"indicators": cmd_indicators, "galois": cmd_galois, "bounds": cmd_bounds, "lemma": cmd_lemma}


# rendering
# ---------

def _value_str(coeffs) -> str:
    return "[" + ",".join(str(c) for c in coeffs) + "]"


def render(doc: ReportDocument, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc.to_dict(), sort_keys=True)
    p = doc.payload
    cmd = doc.config.command
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if cmd == "indicators":
            w.writerow(["irrep", "class", "centralizer_irrep", "dim", "n", "value", "is_integer"])
            for i, (V, row) in enumerate(zip(p["irreps"], p["indicators"])):
                for n, (coeffs, ok) in zip(p["n_range"], row):
                    w.writerow([i, V["class"], V["irrep"], V["dim"], n, _value_str(coeffs), ok])
        elif cmd == "galois":
            w.writerow(["y", "n", "pass"])
            for c in p["checks"]:
                w.writerow([c["y"], c["n"], c["pass"]])
        elif cmd == "bounds":
            w.writerow(BoundsReport.HEADER)
            r = p["report"]
            w.writerow([r["p"], r["order"], r["k_G"], r["p_cubed"], r["z_order"], r["z_expected"],
                        r["k_double"], f"{r['witness']:.6f}"])
        else:
            w.writerow(sorted(k for k in p if not isinstance(p[k], list)))
            w.writerow([p[k] for k in sorted(k for k in p if not isinstance(p[k], list))])
        return buf.getvalue().rstrip("\n")
    # text
    lines = []
    if cmd == "indicators":
        lines.append(f"{p['group_spec']}  |G|={p['group_order']}  irreps of D(G): {len(p['irreps'])}")
        lines.append("irrep  class  dim  " + "  ".join(f"n={n}" for n in p["n_range"]))
        for i, (V, row) in enumerate(zip(p["irreps"], p["indicators"])):
            vals = "  ".join(str(c[0]) if ok else _value_str(c) for c, ok in row)
            lines.append(f"{i:5d}  {V['class']:5d}  {V['dim']:3d}  {vals}")
        lines.append(f"verdict: {p['verdict']}; identity check "
                     f"{'passed' if p['identity_check']['passed'] else 'FAILED'}; two-path check "
                     f"{'passed' if p['two_path_check']['passed'] else 'FAILED'}")
    elif cmd == "galois":
        lines.append(f"{p['group_spec']}  |G|={p['group_order']}  verdict: {p['verdict']}")
        for c in p["checks"]:
            if not c["pass"]:
                lines.append(f"  f_y(z) != f_y(z^s) for y={c['y']} n={c['n']} s in {c['bad_s']}")
    elif cmd == "bounds":
        r = p["report"]
        row = (r["p"], r["order"], r["k_G"], r["p_cubed"], r["z_order"], r["z_expected"],
               "-" if r["k_double"] is None else r["k_double"], f"{r['witness']:.6f}")
        widths = [max(len(str(a)), len(str(b))) for a, b in zip(BoundsReport.HEADER, row)]
        lines.append("  ".join(str(h).rjust(w) for h, w in zip(BoundsReport.HEADER, widths)))
        lines.append("  ".join(str(v).rjust(w) for v, w in zip(row, widths)))
        if r["violations"]:
            lines.append("violations: " + "; ".join(r["violations"]))
    else:
        if p["mode"] == "fuzz":
            lines.append(f"lemma fuzz over {p['B']}: {p['agreements']}/{p['cases']} oracle agreements, "
                         f"{p['count_agreements']}/{p['cases']} count agreements")
        else:
            lines.append(f"s-independence over {p['B']}: {p['constant']}/{p['templates']} templates constant in s")
    return "\n".join(lines)


# entry point
# -----------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "csv", "text"], default="json")
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--cap-order", type=int, default=DEFAULT_ORDER_CAP)

    parser = _Parser(prog="qdouble", description="Indicators and counts for quantum doubles of finite groups.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("indicators", parents=[common], help="higher FS indicators of D(G) with cross-checks")
    p.add_argument("--group", required=True)
    p.add_argument("--nmax", type=int, default=8)

    p = sub.add_parser("galois", parents=[common], help="check f_y(z) = f_y(z^s)")
    p.add_argument("--group", required=True)
    p.add_argument("--nmax", type=int, default=12)

    p = sub.add_parser("bounds", parents=[common], help="substitution-group witness for k(D(G))")
    p.add_argument("--p", type=int, required=True)

    p = sub.add_parser("lemma", parents=[common], help="two-partition lemma fuzzing and s-independence")
    p.add_argument("--fuzz", type=int, default=None)
    p.add_argument("--sindep", action="store_true")
    p.add_argument("--r", type=int, default=4)
    p.add_argument("--B", default="cyclic:2")
    p.add_argument("--n", type=int, default=12)
    return parser


def run(argv: list[str] | None = None) -> tuple[int, str]:
    parser = build_parser()
    args = parser.parse_args(argv)
    opts = {k.replace("-", "_"): v for k, v in vars(args).items()}
    try:
        cfg = RunConfig(**opts)
        t0 = time.perf_counter()
        doc = COMMANDS[cfg.command](cfg)
        doc.timing = {"seconds": round(time.perf_counter() - t0, 3)}
    except (UsageError, SpecError) as exc:
        return EXIT_USAGE, f"error: {exc}"
    except ResourceError as exc:
        return EXIT_RESOURCE, f"resource cap: {exc}"
    return (EXIT_OK if doc.ok else EXIT_VERIFY), render(doc, cfg.format)


def main(argv: list[str] | None = None) -> int:
    code, out = run(argv)
    stream = sys.stdout if code in (EXIT_OK, EXIT_VERIFY) else sys.stderr
    print(out, file=stream)
    return code


if __name__ == "__main__":
    sys.exit(main())

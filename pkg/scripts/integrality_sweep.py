"""Sweep higher indicators of D(G) over a list of groups and tabulate integrality.

    python scripts/integrality_sweep.py --groups sym:3 sym:4 wreath:3,cyclic:2 --out sweep.json

Wreath products are covered by the integrality theorem; any other group is
reported as data only.  Each group also runs the orthogonality identity and
the two-path cross-check.
"""

from __future__ import annotations

import argparse
import json
import time
from dataclasses import asdict, dataclass, field

from qdouble.double import identity_check, indicators_via_f, integrality_report
from qdouble.groups import make_group

DEFAULT_GROUPS = [
    "sym:3", "sym:4", "sym:5",
    "wreath:2,cyclic:2", "wreath:3,cyclic:2", "wreath:2,cyclic:3", "wreath:2,cyclic:2x2", "wreath:2,cyclic:4",
    "permgen:8;(1,2,3,4)(5,6,7,8);(1,5,3,7)(2,8,4,6)",
    "permgen:4;(1,2,3,4);(1,3)",
    "permgen:5;(1,2,3,4,5);(2,5)(3,4)",
]


@dataclass
class SweepConfig:
    groups: list[str] = field(default_factory=lambda: list(DEFAULT_GROUPS))
    nmax: int | None = None  # default: exponent of each group
    out: str | None = None


@dataclass
class SweepRow:
    group: str
    order: int
    classes: int
    irreps: int
    nmax: int
    verdict: str
    violations: int
    identity_ok: bool
    two_path_ok: bool
    seconds: float


def sweep_one(spec: str, nmax: int | None) -> SweepRow:
    t0 = time.perf_counter()
    G = make_group(spec)
    n_top = nmax or G.exponent
    table = integrality_report(G, n_top)
    identity_ok = two_path_ok = True
    for cl in G.classes:
        y = cl.representative
        idx = [i for i, V in enumerate(table.irreps) if V.y == y]
        for j, n in enumerate(table.n_range):
            identity_ok &= identity_check(G, y, n)
            two_path_ok &= indicators_via_f(G, y, n) == [table.values[i][j] for i in idx]
    return SweepRow(spec, G.order, G.num_classes, len(table.irreps), n_top, table.verdict,
                    len(table.violations), identity_ok, two_path_ok, round(time.perf_counter() - t0, 2))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--groups", nargs="+", default=DEFAULT_GROUPS)
    ap.add_argument("--nmax", type=int, default=None)
    ap.add_argument("--out", default=None)
    args = ap.parse_args()
    cfg = SweepConfig(args.groups, args.nmax, args.out)

    rows = []
    print(f"{'group':48s} {'|G|':>6s} {'k(G)':>5s} {'irr':>5s} {'n<=':>4s}  verdict       id  2p")
    for spec in cfg.groups:
        row = sweep_one(spec, cfg.nmax)
        rows.append(row)
        print(f"{row.group:48s} {row.order:6d} {row.classes:5d} {row.irreps:5d} {row.nmax:4d}  "
              f"{row.verdict:12s}  {'ok' if row.identity_ok else 'NO':3s} {'ok' if row.two_path_ok else 'NO'}")
    if cfg.out:
        with open(cfg.out, "w") as fh:
            json.dump({"config": asdict(cfg), "rows": [asdict(r) for r in rows]}, fh, indent=2)


if __name__ == "__main__":
    main()

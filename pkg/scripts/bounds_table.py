"""Tabulate the substitution-group witness for p = 3, 5 (and 7 with ``--with-7``).

Columns: p, |G|, k(G), p^3, |Z_g|, p^((p+1)/2), k(D(G)), ((p+1)/2) ln p.
``k(D(G))`` is skipped for p = 7, where no Cayley table is built.
"""

from __future__ import annotations

import argparse
import json
import time
from dataclasses import dataclass

from qdouble.bounds import BoundsReport, adjoint_orbits, centralizer_report


@dataclass
class BoundsConfig:
    primes: tuple[int, ...] = (3, 5)
    orbits: bool = True
    out: str | None = None


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--with-7", action="store_true", help="include p = 7 (a few minutes)")
    ap.add_argument("--no-orbits", action="store_true", help="skip the adjoint-orbit count")
    ap.add_argument("--out", default=None)
    args = ap.parse_args()
    cfg = BoundsConfig((3, 5, 7) if args.with_7 else (3, 5), not args.no_orbits, args.out)

    print("  ".join(f"{h:>12s}" for h in BoundsReport.HEADER + ("orbits", "seconds")))
    reports = []
    for p in cfg.primes:
        t0 = time.perf_counter()
        rep = centralizer_report(p)
        n_orbits = len(adjoint_orbits(p)) if cfg.orbits and p <= 5 else "-"
        secs = time.perf_counter() - t0
        print("  ".join(f"{str(v):>12s}" for v in rep.row() + (n_orbits, f"{secs:.1f}")))
        if rep.violations:
            print("    violations:", "; ".join(rep.violations))
        reports.append(rep.to_dict() | {"adjoint_orbits": n_orbits})
    if cfg.out:
        with open(cfg.out, "w") as fh:
            json.dump(reports, fh, indent=2)


if __name__ == "__main__":
    main()

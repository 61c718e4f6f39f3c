"""Acceptance criteria AC1-AC10, each at its stated (exact) tolerance.

Every criterion prints one ``PASS``/``FAIL`` line, visible even without ``-s``.
"""

import json
import math
import random
import subprocess
import sys

import pytest

from qdouble.ablinalg import FinAbGroup, solve_ab_system
from qdouble.bounds import centralizer_report
from qdouble.chartab import character_table, dual_table_rows
from qdouble.double import (DoubleIrrep, centralizer_data, double_irreps, galois_violations, identity_check,
                            indicator, indicators_via_f)
from qdouble.partition_lemma import brute_force_solutions, lemma_solvable, random_system, random_template, \
    s_independence_check

from conftest import D8, Q8

AC1_GROUPS = ["wreath:2,cyclic:2", "wreath:3,cyclic:2", "wreath:2,cyclic:3", "sym:3", "sym:4",
              "wreath:2,cyclic:2x2"]
AC2_GROUPS = ["sym:3", "sym:4", Q8, D8]
WREATHS = [s for s in AC1_GROUPS if s.startswith("wreath")]


@pytest.fixture
def report(capsys):
    def emit(name, ok, detail):
        with capsys.disabled():
            print(f"\n{name}: {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, detail
    return emit


def test_ac1_integrality(group, report):
    bad, total = [], 0
    for spec in AC1_GROUPS:
        G = group(spec)
        for V in double_irreps(G):
            for n in range(1, G.exponent + 1):
                total += 1
                if not indicator(G, V, n).is_rational_integer():
                    bad.append((spec, V, n))
    report("AC1", not bad, f"{total} indicator values over {len(AC1_GROUPS)} groups, {len(bad)} non-integral")


def test_ac2_orthogonality_identity(group, report):
    bad, total = [], 0
    for spec in AC2_GROUPS:
        G = group(spec)
        for cl in G.classes:
            for n in range(1, 13):
                total += 1
                if not identity_check(G, cl.representative, n):
                    bad.append((spec, cl.representative, n))
    report("AC2", not bad, f"{total} (group, y, n) identity checks, {len(bad)} failures")


def test_ac3_two_paths(group, report):
    bad, total = [], 0
    for spec in dict.fromkeys(AC1_GROUPS + AC2_GROUPS):
        G = group(spec)
        for cl in G.classes:
            y = cl.representative
            k = int(G.class_of[y])
            _, T = centralizer_data(G, y)
            for n in range(1, max(12, G.exponent) + 1):
                direct = [indicator(G, DoubleIrrep(k, y, w, 0), n) for w in range(T.num_irreps)]
                total += len(direct)
                if indicators_via_f(G, y, n) != direct:
                    bad.append((spec, y, n))
    report("AC3", not bad, f"{total} entries compared, {len(bad)} disagreeing (group, y, n)")


def test_ac4_galois(group, report):
    bad, total = [], 0
    for spec in WREATHS:
        G = group(spec)
        for cl in G.classes:
            for n in range(1, 13):
                total += 1
                if galois_violations(G, cl.representative, n):
                    bad.append((spec, cl.representative, n))
    report("AC4", not bad, f"{total} (group, y, n) checks on {len(WREATHS)} wreath groups, {len(bad)} violations")


def test_ac5_lemma_oracle(report):
    rng = random.Random(20240501)
    groups = [FinAbGroup(m) for m in [(2,), (3,), (4,), (2, 2), (6,)]]
    cases = solv_bad = count_bad = 0
    for B in groups:
        for _ in range(220):
            S = random_system(rng.randint(1, 4), B, rng)
            n = brute_force_solutions(S)
            cases += 1
            solv_bad += lemma_solvable(S) != (n > 0)
            count_bad += solve_ab_system(S.as_linear_system()).count != n
    report("AC5", cases >= 1000 and not solv_bad and not count_bad,
           f"{cases} systems, {solv_bad} verdict mismatches, {count_bad} count mismatches")


def test_ac6_witness_p3(report):
    rep = centralizer_report(3)
    ok = (rep.order == 27 and rep.k_G == 11 and rep.k_G <= 27 and rep.z_order == 9 and rep.z_abelian
          and rep.k_double == rep.k_double_pairs == 105 and rep.g == (0, 1, 0) and not rep.violations)
    report("AC6", ok, f"|G|={rep.order} k(G)={rep.k_G} |Z_g|={rep.z_order} abelian={rep.z_abelian} "
                      f"k(D(G))={rep.k_double}/{rep.k_double_pairs}")


def test_ac7_witness_p5(report):
    rep = centralizer_report(5, with_double=False)
    ok = (rep.order == 3125 and rep.k_G <= 125 and rep.z_order == 125 and rep.z_abelian
          and rep.witness == 3 * math.log(5) == (5 + 1) // 2 * math.log(5) and not rep.violations)
    report("AC7", ok, f"|G|={rep.order} k(G)={rep.k_G} |Z_g|={rep.z_order} abelian={rep.z_abelian} "
                      f"witness={rep.witness:.6f}")


def test_ac8_s_independence(report):
    rng = random.Random(8)
    groups = [FinAbGroup(m) for m in [(2,), (3,), (4,), (2, 2), (5,), (6,), (7,), (8,), (2, 4), (9,),
                                      (10,), (11,), (12,), (2, 6)]]
    templates = with_cbar = bad = 0
    for _ in range(240):
        B = rng.choice(groups)
        W = random_template(rng, 5, B, 12)
        res = s_independence_check(W)
        templates += 1
        with_cbar += not res.no_cbar
        bad += not res.constant
    report("AC8", templates >= 200 and not bad,
           f"{templates} templates ({with_cbar} with a valid cbar), {bad} varying in s")


def test_ac9_character_tables(group, report):
    tables = bad = 0
    for spec in dict.fromkeys(AC1_GROUPS + AC2_GROUPS + ["cyclic:2x6", "truncseries:3"]):
        G = group(spec)
        for T in [character_table(G)] + [centralizer_data(G, cl.representative)[1] for cl in G.classes]:
            tables += 1
            ok = T.check_orthogonality() and sum(d * d for d in T.degrees) == T.group.order
            if ok and T.group.is_abelian:
                ok = {tuple(v.coeffs for v in row) for row in T.values} == dual_table_rows(T.group)
            bad += not ok
    report("AC9", not bad, f"{tables} tables checked, {bad} unsound")


AC10_COMMANDS = [
    ["indicators", "--group", "wreath:2,cyclic:2", "--nmax", "8"],
    ["galois", "--group", "wreath:3,cyclic:2", "--nmax", "12", "--jobs", "2"],
    ["bounds", "--p", "3"],
    ["lemma", "--fuzz", "300", "--r", "4", "--B", "cyclic:2x4", "--seed", "7"],
    ["lemma", "--sindep", "--fuzz", "40", "--r", "5", "--B", "cyclic:6", "--n", "12", "--seed", "7"],
]


def test_ac10_determinism(report):
    def payload_bytes(argv):
        out = subprocess.run([sys.executable, "-m", "qdouble", *argv, "--format", "json"],
                             capture_output=True, check=True).stdout
        return json.dumps(json.loads(out)["payload"], sort_keys=True).encode()

    differing = [argv[0] for argv in AC10_COMMANDS if payload_bytes(argv) != payload_bytes(argv)]
    report("AC10", not differing, f"{len(AC10_COMMANDS)} commands run twice, {len(differing)} with differing payloads")

import numpy as np
import pytest

from qdouble.chartab import classical_indicator
from qdouble.cyclotomic import Cyclotomic
from qdouble.double import (DoubleIrrep, centralizer_data, classical_indicators, count_f, double_irreps,
                            galois_check, galois_violations, identity_check, indicator, indicators_via_f,
                            integrality_report)

from conftest import D8, Q8


def brute_indicator(G, V, n):
    """Element-by-element evaluation of the class-function formula."""
    Z, T = centralizer_data(G, V.y)
    pos = {int(a): i for i, a in enumerate(Z.embedding)}
    yi = G.inv(V.y)
    total = Cyclotomic.rational(T.e, 0)
    for g in range(G.order):
        gn = G.pow(g, n)
        if gn == G.pow(G.mul(yi, g), n):
            total = total + T.values[V.w][int(T.group.class_of[pos[gn]])]
    return total * G.classes[V.cls].size / G.order


def brute_count(G, y, n):
    """Count pairs ``(g, h)`` with ``g^n = h^n = z`` and ``g h^-1 = y``."""
    out = {}
    for g in range(G.order):
        for h in range(G.order):
            if G.mul(g, G.inv(h)) == y and G.pow(g, n) == G.pow(h, n):
                z = G.pow(g, n)
                out[z] = out.get(z, 0) + 1
    return out


@pytest.mark.parametrize("spec, count, sumsq", [("cyclic:1", 1, 1), ("cyclic:2", 4, 4), ("sym:3", 8, 36),
                                                 ("wreath:2,cyclic:2", 22, 64), ("sym:4", 21, 576)])
def test_double_irreps(group, spec, count, sumsq):
    irreps = double_irreps(group(spec))
    assert len(irreps) == count
    assert sum(V.dim ** 2 for V in irreps) == sumsq
    if spec == "cyclic:2":
        assert all(V.dim == 1 for V in irreps)


@pytest.mark.parametrize("spec", ["sym:3", Q8, "wreath:2,cyclic:2"])
def test_indicator_matches_brute_force(group, spec):
    G = group(spec)
    for V in double_irreps(G):
        for n in range(0, 9):
            assert indicator(G, V, n) == brute_indicator(G, V, n)


@pytest.mark.parametrize("spec", ["sym:3", Q8, "cyclic:4"])
def test_count_f_matches_pair_count(group, spec):
    G = group(spec)
    for cl in G.classes:
        Z, _ = centralizer_data(G, cl.representative)
        for n in range(1, 7):
            f = count_f(G, cl.representative, n)
            brute = brute_count(G, cl.representative, n)
            ours = {int(Z.embedding[i]): int(v) for i, v in enumerate(f.pointwise) if v}
            assert ours == brute


def test_unit_object_and_n1(group):
    for spec in ["sym:3", "sym:4", Q8, "cyclic:6"]:
        G = group(spec)
        for V in double_irreps(G):
            unit = V.cls == 0 and V.w == 0
            assert indicator(G, V, 1) == (1 if unit else 0)
            if unit:
                assert all(indicator(G, V, n) == 1 for n in range(13))


def test_n0_gives_dimension(group):
    G = group("sym:4")
    for V in double_irreps(G):
        assert indicator(G, V, 0) == V.dim


def test_classical_block(group):
    G = group("sym:3")
    _, T = centralizer_data(G, 0)
    assert classical_indicators(G, 2)[2] == 1
    for n in range(7):
        for w in range(T.num_irreps):
            assert indicator(G, DoubleIrrep(0, 0, w, T.degrees[w]), n) == classical_indicator(T, w, n)
    assert indicators_via_f(G, 0, 2) == classical_indicators(G, 2)


def test_count_f_examples(group):
    G = group("sym:3")
    f = count_f(G, 0, 2)
    assert f.pointwise[0] == 4
    f1 = count_f(G, 0, 1)
    assert (f1.pointwise == 1).all()
    for cl in G.classes:
        y = cl.representative
        hits = int(np.count_nonzero(G.power_array(3) == G.power_array(3)[G.mul_arrays(G.inverse[y], G.all)]))
        assert count_f(G, y, 3).pointwise.sum() == hits


@pytest.mark.parametrize("spec", ["sym:3", "sym:4", Q8, D8, "wreath:2,cyclic:3"])
def test_master_identity_and_two_paths(group, spec):
    G = group(spec)
    for cl in G.classes:
        y = cl.representative
        Z, T = centralizer_data(G, y)
        for n in range(1, 13):
            assert identity_check(G, y, n)
            via_f = indicators_via_f(G, y, n)
            k = int(G.class_of[y])
            direct = [indicator(G, DoubleIrrep(k, y, w, 0), n) for w in range(T.num_irreps)]
            assert via_f == direct
            f = count_f(G, y, n)
            assert f.is_class_function(Z.group)


@pytest.mark.parametrize("spec", ["sym:3", "wreath:2,cyclic:2", Q8])
def test_base_point_independence(group, spec):
    G = group(spec)
    for V in double_irreps(G):
        for x in range(1, G.order):
            for n in (2, 3, 4):
                assert indicator(G, V, n, conjugator=x) == indicator(G, V, n)


@pytest.mark.parametrize("spec", ["sym:4", "wreath:2,cyclic:2x2"])
def test_period(group, spec):
    G = group(spec)
    e = G.exponent
    for V in double_irreps(G):
        for n in range(0, e + 1):
            assert indicator(G, V, n) == indicator(G, V, n + e)


@pytest.mark.parametrize("spec", ["cyclic:4", "cyclic:6", "sym:3", "wreath:3,cyclic:2"])
def test_galois(group, spec):
    G = group(spec)
    for cl in G.classes:
        for n in range(1, 13):
            assert galois_check(G, cl.representative, n)
            assert galois_violations(G, cl.representative, n) == []


@pytest.mark.parametrize("spec, nmax", [("wreath:2,cyclic:2", 8), ("sym:3", 6)])
def test_integrality_report(group, spec, nmax):
    rep = integrality_report(group(spec), nmax)
    assert rep.all_integral and rep.verdict == "all-integral"
    d = rep.to_dict()
    assert set(d) >= {"group_spec", "n_range", "irreps", "indicators", "verdict"}
    assert d["n_range"] == list(range(1, nmax + 1))


def test_integrality_report_empty_range(group):
    with pytest.raises(ValueError):
        integrality_report(group("sym:3"), 0)


def test_noninteger_value_is_flagged(group):
    from qdouble.double import IndicatorTable
    G = group("cyclic:2")
    V = double_irreps(G)[0]
    t = IndicatorTable(G, [1], [V], [[Cyclotomic.rational(1, 1) / 2]])
    assert t.verdict == "non-integral" and t.violations == [(0, 1)]

import json
import subprocess
import sys

import pytest

from qdouble.cli import EXIT_OK, EXIT_RESOURCE, EXIT_USAGE, EXIT_VERIFY, ReportDocument, RunConfig, run

from conftest import Q8


def payload(argv):
    code, out = run(argv)
    assert code == EXIT_OK, out
    doc = json.loads(out)
    assert set(doc) == {"tool", "version", "config", "payload", "ok", "timing"}
    return doc["payload"]


def test_indicators_trivial_group():
    p = payload(["indicators", "--group", "cyclic:1", "--nmax", "3"])
    assert len(p["irreps"]) == 1
    assert p["indicators"] == [[[[1], True]] * 3]


@pytest.mark.parametrize("spec", ["wreath:2,cyclic:2", Q8])
def test_indicators_checks(spec):
    p = payload(["indicators", "--group", spec, "--nmax", "8", "--format", "json"])
    assert p["verdict"] == "all-integral"
    assert p["identity_check"]["passed"] and p["two_path_check"]["passed"]


@pytest.mark.parametrize("spec", ["wreath:3,cyclic:2", "sym:4", "cyclic:6"])
def test_galois(spec):
    p = payload(["galois", "--group", spec, "--nmax", "12"])
    assert p["verdict"] == "pass"
    assert len(p["checks"]) == 12 * len({c["y"] for c in p["checks"]})


def test_bounds_p3():
    r = payload(["bounds", "--p", "3"])["report"]
    assert (r["order"], r["k_G"], r["z_order"], r["k_double"]) == (27, 11, 9, 105)


def test_lemma_fuzz_and_sindep():
    p = payload(["lemma", "--fuzz", "200", "--r", "4", "--B", "cyclic:2x4", "--seed", "7"])
    assert p["agreements"] == p["count_agreements"] == 200
    p = payload(["lemma", "--sindep", "--fuzz", "30", "--r", "5", "--B", "cyclic:6", "--n", "12", "--seed", "7"])
    assert p["constant"] == 30 and not p["failures"]
    p = payload(["lemma", "--fuzz", "20", "--r", "1", "--seed", "1"])
    assert p["agreements"] == 20


@pytest.mark.parametrize("argv", [
    ["bounds", "--p", "2"],
    ["bounds", "--p", "9"],
    ["indicators", "--group", "bogus:1"],
    ["indicators", "--group", "sym:3", "--nmax", "0"],
    ["lemma", "--fuzz", "5"],
    ["lemma", "--fuzz", "5", "--seed", "1", "--B", "sym:3"],
    ["galois", "--group", "sym:3", "--jobs", "0"],
])
def test_usage_errors(argv):
    assert run(argv)[0] == EXIT_USAGE


def test_argparse_errors_exit_1():
    with pytest.raises(SystemExit) as exc:
        run(["indicators"])
    assert exc.value.code == EXIT_USAGE
    with pytest.raises(SystemExit) as exc:
        run(["frobnicate"])
    assert exc.value.code == EXIT_USAGE


def test_resource_cap():
    assert run(["indicators", "--group", "sym:6", "--cap-order", "100"])[0] == EXIT_RESOURCE
    assert run(["bounds", "--p", "11"])[0] == EXIT_RESOURCE


def test_verification_failure_exit_code():
    doc = ReportDocument(RunConfig("galois", group="sym:3"), {}, ok=False)
    assert not doc.ok
    assert EXIT_VERIFY == 3


@pytest.mark.parametrize("fmt", ["csv", "text"])
@pytest.mark.parametrize("argv", [["indicators", "--group", "sym:3", "--nmax", "3"],
                                  ["galois", "--group", "cyclic:4", "--nmax", "2"],
                                  ["bounds", "--p", "3"],
                                  ["lemma", "--fuzz", "10", "--seed", "3"]])
def test_formats(argv, fmt):
    code, out = run(argv + ["--format", fmt])
    assert code == EXIT_OK and out.strip()
    if fmt == "csv" and argv[0] == "indicators":
        lines = out.splitlines()
        assert lines[0].split(",")[-1] == "is_integer"
        assert len(lines) == 1 + 8 * 3


def test_jobs_do_not_change_payload():
    a = payload(["indicators", "--group", "sym:4", "--nmax", "6", "--jobs", "1"])
    b = payload(["indicators", "--group", "sym:4", "--nmax", "6", "--jobs", "4"])
    assert a == b


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "qdouble", "bounds", "--p", "2"], capture_output=True, text=True)
    assert res.returncode == EXIT_USAGE and "odd prime" in res.stderr
    res = subprocess.run([sys.executable, "-m", "qdouble", "indicators", "--group", "cyclic:2", "--nmax", "2",
                          "--format", "text"], capture_output=True, text=True)
    assert res.returncode == EXIT_OK and "all-integral" in res.stdout

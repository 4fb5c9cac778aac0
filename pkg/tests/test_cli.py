import io
import json
import subprocess
import sys

import pytest

from compaths.cli import run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_normalize():
    assert call("normalize", "sigma(sigma(rho))") == (0, "rho\n", "")


def test_normalize_trace_golden():
    code, out, _ = call("normalize", "--trace", "tau(tau(loop,loop),sigma(loop))")
    assert code == 0
    assert out == (
        "step 1: tt @ root : tau(tau(loop,loop),sigma(loop)) => tau(loop,tau(loop,sigma(loop)))\n"
        "step 2: tr @ 1 : tau(loop,tau(loop,sigma(loop))) => tau(loop,rho)\n"
        "step 3: trr @ root : tau(loop,rho) => loop\n"
        "loop\n")


def test_trace_subcommand_structured():
    code, out, _ = call("trace", "--format", "structured", "--strategy", "innermost",
                        "tau(tau(loop,sigma(loop)),loop)")
    recs = [json.loads(line) for line in out.splitlines()]
    assert code == 0
    assert [r["rule"] for r in recs if r["kind"] == "step"] == ["tr", "tlr"]
    assert recs[-1] == {"kind": "result", "input": "tau(tau(loop,sigma(loop)),loop)",
                        "normal_form": "loop", "steps": 2}


def test_equal():
    assert call("equal", "tau(r,sigma(r))", "rho") == (0, "true\n", "")
    assert call("equal", "a", "b") == (1, "false\n", "")


def test_pi1():
    assert call("pi1", "circle", "tau(loop,tau(loop,sigma(loop)))") == (0, "1\nword: loop\n", "")
    code, out, _ = call("pi1", "torus", "--trace", "tau(tau(tau(beta,alpha),sigma(beta)),sigma(alpha))")
    assert code == 0 and "co @ root" in out and out.endswith("(0,0)\nword: beta alpha beta^-1 alpha^-1\n")


def test_rpo_check_reports_failure():
    code, out, _ = call("rpo-check")
    assert code == 1
    assert "35 tsblr  not-oriented" in out and out.endswith("oriented 20/22\n")
    code, out, _ = call("rpo-check", "--extra-precedence", "tau>subR")
    assert code == 0 and out.endswith("oriented 22/22\n")
    code, out, _ = call("rpo-check", "--status", "multiset", "--format", "structured")
    recs = [json.loads(line) for line in out.splitlines()]
    assert code == 1
    assert {r["rule"]: r["verdict"] for r in recs if r["kind"] == "rule"}["tt"] == "not-oriented"


def test_critical_pairs():
    code, out, _ = call("critical-pairs", "--format", "structured")
    recs = [json.loads(line) for line in out.splitlines()]
    assert code == 1
    assert recs[-1] == {"kind": "summary", "pairs": 159, "not_joinable": 37}
    code, out, _ = call("critical-pairs", "--exclude", "9,10,11,12,26,27,33,34,35,36")
    assert code == 0 and out.endswith("not joinable 0\n")
    code, out, _ = call("critical-pairs", "--fragment", "mixed")
    assert code == 1 and out.endswith("pairs 19, not joinable 17\n")


def test_file_batch(tmp_path):
    f = tmp_path / "terms.txt"
    f.write_text("sigma(rho)\n\ntau(a,rho)\n")
    assert call("normalize", "--file", str(f)) == (0, "rho\na\n", "")


@pytest.mark.parametrize("argv,code", [
    (("normalize", "tau(a"), 2),
    (("normalize", "sigma(a,b)"), 2),
    (("equal", "rho()", "rho"), 2),
    (("pi1", "torus", "loop"), 2),
    (("normalize",), 2),
    (("normalize", "--file", "/nonexistent/x"), 2),
    (("normalize", "--step-limit", "1", "sigma(sigma(sigma(sigma(a))))"), 3),
    (("normalize", "--step-limit", "0", "a"), 2),
    (("frobnicate",), 2),
    (("normalize", "--bogus", "a"), 2),
])
def test_exit_codes(argv, code):
    assert call(*argv)[0] == code


def test_parse_error_names_position():
    code, out, err = call("normalize", "tau(a,)")
    assert code == 2 and out == ""
    assert "line 1, column 7" in err


def test_deterministic_subprocess():
    argv = [sys.executable, "-m", "compaths.cli", "critical-pairs", "--format", "structured"]
    a = subprocess.run(argv, capture_output=True)
    b = subprocess.run(argv, capture_output=True)
    assert a.returncode == b.returncode == 1
    assert a.stdout == b.stdout and a.stdout

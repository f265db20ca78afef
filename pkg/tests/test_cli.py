from __future__ import annotations

import json

import pytest

from lienil.cli import run


def _run(capsys, *argv):
    rc = run(list(argv))
    out = capsys.readouterr()
    return rc, out.out, out.err


def test_expand(capsys):
    rc, out, _ = _run(capsys, "expand", "[x1,x2]")
    assert rc == 0
    assert out.strip() == "x1*x2 - x2*x1"


def test_expand_json(capsys):
    rc, out, _ = _run(capsys, "expand", "[x1,x2,x3]", "--format", "json")
    assert rc == 0
    data = json.loads(out)
    assert data["terms"] == 4


def test_components(capsys):
    rc, out, _ = _run(capsys, "components", "x1*x1*x1 + 2*x1*x2*x1 - x1*x1*x2")
    assert rc == 0
    assert "(3): x1*x1*x1" in out
    assert "(2,1): -x1*x1*x2 + 2*x1*x2*x1" in out


def test_parse_error_is_usage_error(capsys):
    rc, _, err = _run(capsys, "expand", "[x1,")
    assert rc == 2
    assert "parse error" in err


def test_unknown_suite_and_bad_prime(capsys):
    assert _run(capsys, "verify", "bogus")[0] == 2
    assert _run(capsys, "member", "t4", "x1", "--prime", "4")[0] == 2
    assert _run(capsys, "verify", "cor16", "--prime", "3")[0] == 2
    assert _run(capsys, "verify", "thm13-equiv", "--mutate", "NOPE")[0] == 2


def test_caps_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("LIENIL_MAX_DEGREE", "3")
    rc, _, err = _run(capsys, "span", "t4", "--multidegree", "1,1,1,1")
    assert rc == 2 and "cap" in err
    monkeypatch.setenv("LIENIL_MAX_DEGREE", "x")
    assert _run(capsys, "expand", "x1")[0] == 2


def test_span_snf(capsys):
    rc, out, _ = _run(capsys, "span", "t4", "--multidegree", "1,1,1,1,1", "--format", "json")
    assert rc == 0
    data = json.loads(out)
    assert data["dimension"] == 120
    assert data["snf"]["torsion"] == {"3": 1}


def test_member_and_order(capsys):
    rc, out, _ = _run(capsys, "member", "t4", "[x1,x2]*[x3,x4,x5]")
    assert rc == 0 and out.startswith("not a member")
    rc, out, _ = _run(capsys, "member", "t4", "3*[x1,x2]*[x3,x4,x5]")
    assert out.startswith("member")
    rc, out, _ = _run(capsys, "order", "t4", "[x1,x2]*[x3,x4,x5]", "--format", "json")
    assert rc == 0 and json.loads(out)["order"] == "3"


def test_specht_and_espace(capsys):
    rc, out, _ = _run(capsys, "specht", "--n", "4")
    assert rc == 0 and "# 9 elements" in out
    rc, out, _ = _run(capsys, "espace", "--multidegree", "2,1,1,1,1")
    assert rc == 0 and "x1*[x1,x2][x3,x4,x5]" in out


def test_torsion_verb(capsys):
    rc, out, _ = _run(capsys, "torsion", "--multidegree", "1,1,1,1,1", "--format", "json")
    assert rc == 0
    assert json.loads(out)["status"] == "pass"


def test_verify_json_is_deterministic_without_timing(capsys):
    argv = ["verify", "identities", "--instances", "5", "--seed", "3", "--format", "json", "--no-timing"]
    rc1, out1, _ = _run(capsys, *argv)
    rc2, out2, _ = _run(capsys, *argv)
    assert rc1 == rc2 == 0
    assert out1 == out2
    data = json.loads(out1)
    assert data[0]["elapsedMs"] is None
    assert set(data[0]) == {"check", "parameters", "status", "witness", "elapsedMs", "seed"}


def test_verify_reports_timing(capsys):
    rc, out, _ = _run(capsys, "verify", "kerpsi", "--format", "json")
    assert rc == 0
    assert isinstance(json.loads(out)[0]["elapsedMs"], int)


@pytest.mark.parametrize("suite, tag", [("thm13-equiv", "C32_1"), ("lemma32", "TnDEF")])
def test_mutation_makes_checks_fail(capsys, suite, tag):
    base = ["verify", suite, "--max-total-degree", "5", "--no-timing"]
    assert _run(capsys, *base)[0] == 0
    rc, out, _ = _run(capsys, *base, "--mutate", tag)
    assert rc == 1
    assert out.startswith("FAIL")

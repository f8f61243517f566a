import json

import pytest

import valkey

EXAMPLE = {
    "ground": {"type": "tadic", "coefficients": "rationals"},
    "chain": [
        {"type": "monomial", "gamma": "1"},
        {"type": "augmented", "key": "x - t - t^2", "gamma": "4"},
    ],
}

PREFIX = {
    "base": {"ground": {"type": "tadic", "coefficients": "rationals"}, "chain": [{"type": "monomial", "gamma": "1"}]},
    "members": [{"key": "x" + "".join(f" - t^{k}" for k in range(1, n + 1)), "gamma": str(n + 1)} for n in range(1, 7)],
}


def test_eval_matches_worked_example():
    d = valkey.Descriptor(EXAMPLE)
    assert len(d) == 2
    assert d.eval("x - t") == "2"
    assert d.eval("x - t - t^2") == "4"
    assert d.eval("0") == "inf"


def test_descriptor_round_trip():
    d = valkey.Descriptor(EXAMPLE)
    again = valkey.Descriptor(d.to_json())
    assert again.to_json() == d.to_json()
    assert valkey.Descriptor(json.dumps(EXAMPLE)).eval("x") == "1"


def test_expand_and_parse():
    field = {"type": "padic", "p": 3}
    assert valkey.expand(field, "x^2 + 1", "x") == ["1", "0", "1"]
    assert valkey.parse_poly(field, "x*x - 1/3") == valkey.parse_poly(field, "-1/3 + x^2")


def test_errors_carry_kind():
    with pytest.raises(valkey.ValkeyError) as e:
        valkey.Descriptor(EXAMPLE).eval("x +* 1")
    assert e.value.kind == "Parse"
    with pytest.raises(valkey.ValkeyError):
        valkey.Descriptor({"ground": {"type": "padic", "p": 4}, "chain": [{"type": "monomial", "gamma": "0"}]})


def test_suites_pass_and_are_deterministic():
    d = valkey.Descriptor(EXAMPLE)
    r = d.check("axioms", trials=100, seed=5)
    assert r["pass"] and r["failureCount"] == 0 and r["checks"] > 0
    assert d.check("keys", trials=50, seed=2) == d.check("keys", trials=50, seed=2)
    assert d.check_key(1)["kind"] == "OrdinaryKey"


def test_family_prefix():
    p = valkey.Prefix(PREFIX)
    assert len(p) == 6
    assert p.stabilize("x + 1")["outcome"] == "Stabilized"
    assert p.classify("x - t/(1 - t)")["kind"] == "PresumedUnbounded"
    assert p.limit_check("x - t/(1 - t)")["pass"]
    assert p.check_stabilization(4, trials=50)["pass"]


def test_cli_in_process():
    code, out, _ = valkey.run_cli("eval", "-d", json.dumps(EXAMPLE), "-f", "x - t")
    assert code == 0
    assert json.loads(out) == {"schemaVersion": "1", "value": "2"}
    code, out, _ = valkey.run_cli("eval", "-d", json.dumps(EXAMPLE))
    assert code == 2

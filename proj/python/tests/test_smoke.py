import json

import pytest

import oligo


def test_commands_listed():
    names = oligo.command_names()
    assert names == sorted(names)
    assert {"ap-check", "encode", "split", "poly", "gadget-check"} <= set(names)
    assert oligo.battery_checks("groups") == ["groups.chains", "groups.split"]


def test_partition_orbits_match_brute_force():
    r = oligo.run("orbits", grade=2, k=2)
    assert r["verdict"] == "pass"
    assert r["count"] == r["brute"] == 5


def test_encode_decode_round_trip():
    s = {
        "signature": [{"name": "le", "arity": 2}],
        "size": 2,
        "relations": {"le": [[0, 0], [0, 1], [1, 1]]},
    }
    enc = oligo.run("encode", structure=s)
    assert enc["verdict"] == "pass"
    dec = oligo.run("decode", structure=enc["encoded"], signature=enc["signature"])
    assert dec["verdict"] == "pass"
    # decoded relations are named R_n; the signature records the source name
    assert enc["signature"] == [{"arity": 2, "n": 2, "source": "le"}]
    assert dec["decoded"]["relations"]["R_2"] == s["relations"]["le"]


def test_split_fixtures():
    assert oligo.run("split", group="Q8", center="full")["instances"][0]["report"]["split"] is False
    assert oligo.run("split", group="C4", center=[0, 2])["instances"][0]["report"]["split"] is False


def test_gadget_polymorphisms_essentially_unary():
    r = oligo.run("gadget-check", d=2, arity=2)
    assert r["verdict"] == "pass"
    assert [p["not_essentially_unary"] for p in r["per_arity"]] == [0, 0]


def test_certificate_replay_and_tamper():
    params = {"sigma": {"1": [1], "2": [2, 1]}, "depth": 2}
    result = oligo.run("realize-sigma", **params)
    cert = oligo.certificate("realize-sigma", params, result)
    assert cert["inputs"]["sigma"]["digest"] == oligo.digest(params["sigma"])
    assert oligo.replay(cert)["ok"]
    cert["result"]["certificate"]["steps"][0]["target"] += 100
    assert not oligo.replay(cert)["ok"]


def test_errors_raise():
    with pytest.raises(oligo.OligoError):
        oligo.run("poly")
    with pytest.raises(oligo.OligoError):
        oligo.check("clones.iso", {"unknown": 1})


def test_suite_writes_certificates(tmp_path):
    summary = oligo.suite("clones", tmp_path, {"gadget_arity2": 2, "gadget_arity3": 1, "iso_arity": 2}, jobs=2)
    assert summary["verdict"] == "pass"
    files = sorted(p.name for p in tmp_path.iterdir())
    assert files == ["clones.gadget.json", "clones.iso.json", "summary.json"]
    for name in files[:-1]:
        assert oligo.replay(json.loads((tmp_path / name).read_text()))["ok"]

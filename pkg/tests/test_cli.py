import json

import numpy as np
import pytest

from invsem import cli, core


def write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


def inst(tmp_path, name, S):
    return write(tmp_path, name, core.as_dict(S))


MIN3 = [[0, 0, 0], [0, 1, 1], [0, 1, 2]]


def test_validate_good(tmp_path, capsys):
    path = write(tmp_path, "chain3.json", {"order": 3, "table": MIN3})
    code, report = cli.run(["validate", path])
    assert code == 0 and report.passed
    assert report.extra["idempotents"] == [0, 1, 2]
    out = capsys.readouterr().out
    assert "PASS" in out and "ok (4/4 checks" in out


def test_validate_failures(tmp_path, capsys):
    cases = [
        ([[0, 1], [0, 0]], "associative"),
        ([[0, 0], [0, 0]], "every-element-has-inverse"),
        ([[0, 0], [1, 1]], "idempotents-commute"),
        ([[0, 9], [1, 0]], "well-formed"),
    ]
    for table, expected in cases:
        path = write(tmp_path, "bad.json", {"order": 2, "table": table})
        code, report = cli.run(["validate", path])
        assert code == 1
        assert [c.name for c in report.checks] == [expected]
        assert not report.checks[0].passed
        assert "FAIL" in capsys.readouterr().out


def test_missing_file(tmp_path, capsys):
    code, report = cli.run(["validate", str(tmp_path / "nope.json")])
    assert code == 2 and report is None


def test_bad_arguments(tmp_path, capsys):
    assert cli.run([])[0] == 2
    assert cli.run(["verify", "bogus-token"])[0] == 2
    k = write(tmp_path, "k.json", {"order": 2, "table": [[0, 0], [0, 1]]})
    code, _ = cli.run(["product", "lsd", "--k", k, "--t", k])
    assert code == 2  # --action is required for lsd


def test_json_output(tmp_path, capsys):
    path = write(tmp_path, "chain3.json", {"order": 3, "table": MIN3})
    code, _ = cli.run(["validate", path, "--json"])
    assert code == 0
    data = json.loads(capsys.readouterr().out)
    assert data["passed"] is True
    assert {c["name"] for c in data["checks"]} >= {"associative", "well-formed"}
    assert path in data["digests"]


def test_congruences_cmd(tmp_path, capsys):
    path = write(tmp_path, "chain3.json", {"order": 3, "table": MIN3})
    code, report = cli.run(["congruences", path])
    assert code == 0 and report.extra["count"] == 4
    code, report = cli.run(["congruences", path, "--method", "partitions"])
    assert report.extra["count"] == 4
    listing = report.extra["congruences"]
    assert listing[0]["class_of"] == [0, 1, 2]
    assert listing[-1]["classes"] == 1


def test_product_round_trip(tmp_path, capsys):
    chain2 = {"order": 2, "table": [[0, 0], [0, 1]]}
    k = write(tmp_path, "k.json", chain2)
    t = write(tmp_path, "t.json", chain2)
    act = write(tmp_path, "act.json", {"act": [[0, 0], [0, 1]]})
    out = str(tmp_path / "prod.json")
    code, report = cli.run(["product", "lsd", "--k", k, "--t", t,
                            "--action", act, "--out", out])
    assert code == 0 and report.extra["order"] == 3
    data = json.loads((tmp_path / "prod.json").read_text())
    assert data["provenance"]["construction"] == "lsd"
    assert data["elements"] == [[0, 0], [0, 1], [1, 1]]
    # the emitted instance is itself valid
    code, _ = cli.run(["validate", out])
    assert code == 0


def test_product_kinds(tmp_path, capsys, catalog):
    z2 = inst(tmp_path, "z2.json", catalog["z2"])
    chain2 = inst(tmp_path, "chain2.json", catalog["chain2"])
    cf = inst(tmp_path, "cf.json", catalog["clifford4"])
    z3 = inst(tmp_path, "z3.json", catalog["z3"])
    out = str(tmp_path / "o.json")

    code, report = cli.run(["product", "hwr", "--k", z2, "--t", chain2, "--out", out])
    assert code == 0 and report.extra["order"] == 6

    act = write(tmp_path, "act.json", {"act": [[0, 1, 2], [0, 2, 1]]})
    eps = write(tmp_path, "eps.json", {"map": [0, 0, 0]})
    code, report = cli.run(["product", "rsd", "--k", z3, "--t", z2,
                            "--action", act, "--eps", eps, "--out", out])
    assert code == 0 and report.extra["order"] == 6

    eta = write(tmp_path, "eta.json", {"map": [0, 1, 0, 1]})
    code, report = cli.run(["product", "hwr-eta", "--k", cf, "--t", chain2,
                            "--eta", eta, "--out", out])
    assert code == 0 and report.extra["order"] == 6

    code, report = cli.run(["product", "lwr", "--k", z2, "--t", chain2, "--out", out])
    assert code == 0 and report.extra["order"] == 6


def test_trhull_cmd(tmp_path, capsys, catalog):
    b2 = inst(tmp_path, "b2.json", catalog["b2"])
    code, report = cli.run(["trhull", b2])
    assert code == 0
    assert report.extra["hull_order"] == 7 and report.extra["inner_order"] == 5
    assert len(report.extra["non_inner"]) == 2

    cong = write(tmp_path, "diag.json", {"class_of": [0, 1, 2, 3, 4]})
    code, report = cli.run(["trhull", b2, "--congruence", cong])
    assert code == 0
    assert report.extra["respecting_order"] == 7
    assert report.extra["extension_hull_order"] == 5
    names = {c.name for c in report.checks}
    assert "all-pairs-respect" in names and "quotient-map:down_surjective" in names

    code, report = cli.run(["trhull", b2, "--bound", "3"])
    assert code == 3
    assert report.checks[0].name == "within-bounds" and not report.checks[0].passed


def test_check_afr(tmp_path, capsys, catalog):
    z3 = inst(tmp_path, "z3.json", catalog["z3"])
    z2 = inst(tmp_path, "z2.json", catalog["z2"])
    act = write(tmp_path, "act.json", {"act": [[0, 1, 2], [0, 2, 1]]})
    eps = write(tmp_path, "eps.json", {"map": [0, 0, 0]})
    code, report = cli.run(["check-afr", act, eps, "--k", z3, "--t", z2])
    assert code == 0
    assert {c.name for c in report.checks} == {
        "fixed-range-axiom", "classwise-equivalent", "structure-maps-rebuild-product"}

    bad = write(tmp_path, "bad.json", {"act": [[0, 0, 0], [0, 0, 0]]})
    code, report = cli.run(["check-afr", bad, eps, "--k", z3, "--t", z2])
    assert code == 1
    by_name = {c.name: c for c in report.checks}
    assert not by_name["fixed-range-axiom"].passed
    assert by_name["classwise-equivalent"].passed  # both forms reject it


def test_check_solution(tmp_path, capsys):
    chain2 = {"order": 2, "table": [[0, 0], [0, 1]]}
    triple = write(tmp_path, "triple.json", {"k": chain2, "t": chain2, "eta": [0, 1]})
    good = write(tmp_path, "good.json",
                 {"s": chain2, "theta": {"class_of": [0, 1]}})
    code, report = cli.run(["check-solution", triple, good, "--json"])
    assert code == 0
    data = json.loads(capsys.readouterr().out)
    assert data["checks"][0]["witness"]["beta"] == [0, 1]

    bad = write(tmp_path, "bad.json",
                {"s": chain2, "theta": {"class_of": [0, 0]}})
    code, report = cli.run(["check-solution", triple, bad])
    assert code == 1
    assert report.checks[0].witness == "quotient-order-mismatch"


def test_billhardt_find(tmp_path, capsys, catalog):
    b2 = inst(tmp_path, "b2.json", catalog["b2"])
    univ = write(tmp_path, "univ.json", {"class_of": [0, 0, 0, 0, 0]})
    code, report = cli.run(["billhardt", "find", b2, univ])
    assert code == 0
    assert report.extra["certificate"]["classification"] == "neither"

    code, report = cli.run(["billhardt", "find", b2, univ, "--split"])
    assert code == 0
    names = {c.name for c in report.checks}
    assert "axiom:multiplicative" in names and "closure:no_new_elements" in names

    i2 = inst(tmp_path, "i2.json", catalog["i2"])
    rees = write(tmp_path, "rees.json", {"class_of": [0, 0, 0, 0, 1, 0, 2]})
    code, report = cli.run(["billhardt", "find", i2, rees])
    assert code == 1
    assert report.checks == [cli.Check("transversal-exists", False)]


def test_billhardt_embed(tmp_path, capsys, catalog):
    b2 = inst(tmp_path, "b2.json", catalog["b2"])
    diag = write(tmp_path, "diag.json", {"class_of": [0, 1, 2, 3, 4]})
    code, report = cli.run(["billhardt", "embed", b2, diag, "--split"])
    assert code == 0
    names = {c.name for c in report.checks}
    assert "embedding-injective" in names and "total-map-route-agrees" in names
    assert report.extra["wreath_instance"]["order"] == 5
    assert report.extra["psi_map"] == [0, 1, 2, 3, 4]


def test_verify_tokens(capsys):
    code, report = cli.run(["verify", "lemma-2.1"])
    assert code == 0 and len(report.checks) >= 10
    assert all(c.name.startswith("lemma-2.1:") for c in report.checks)
    out = capsys.readouterr().out
    assert out.count("PASS") == len(report.checks)

    code, report = cli.run(["verify", "prop-3.1", "--max-order", "2", "--jobs", "2"])
    assert code == 0
    code, report = cli.run(["verify", "prop-3.5", "--max-order", "3", "--seed", "7"])
    assert code == 0 and report.extra["seed"] == 7


def test_verify_sweep_dir(tmp_path, capsys):
    d = tmp_path / "extra"
    d.mkdir()
    (d / "chain2.json").write_text(json.dumps({"order": 2, "table": [[0, 0], [0, 1]]}))
    code, report = cli.run(["verify", "remark-4.3", "--max-order", "16",
                            "--sweep", str(d)])
    assert code == 0
    names = {c.name for c in report.checks}
    assert any(n.startswith("sweep:hull-engines-agree") for n in names)

    (d / "broken.json").write_text(json.dumps({"order": 2, "table": [[0, 1], [0, 0]]}))
    code, report = cli.run(["verify", "remark-4.3", "--max-order", "16",
                            "--sweep", str(d)])
    assert code == 1
    bad = [c for c in report.checks if not c.passed]
    assert len(bad) == 1 and "broken" in bad[0].name

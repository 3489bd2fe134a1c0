import json

import pytest

from filterlab import cli
from filterlab.filters import FilterFamily, principal
from filterlab.spaces import discrete, sierpinski


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def lines(out):
    return [json.loads(x) for x in out.splitlines() if x.strip()]


def test_enumerate(capsys):
    code, out, _ = run(capsys, "enumerate", "--points", "3")
    assert code == 0
    rec = lines(out)[0]
    assert rec["summary"] == "29 labeled topologies" and len(rec["spaces"]) == 29
    code, out, _ = run(capsys, "enumerate", "--points", "4", "--dedup", "homeo", "--format", "text")
    assert code == 0 and out.startswith("33 up-to-homeomorphism topologies")


def test_enumerate_resource_limit(capsys):
    code, _, err = run(capsys, "enumerate", "--points", "6")
    assert code == 3 and "resource limit" in err


def test_check_lemma51(capsys):
    code, out, _ = run(capsys, "check", "lemma51", "--points", "3")
    recs = lines(out)
    assert code == 0
    assert sum("claim" in r for r in recs) == 29
    assert recs[-1]["summary"] == {"check": "lemma51", "certificates": 29, "failed": 0}


def test_search_summaries(capsys):
    code, out, _ = run(capsys, "search", "projection-law", "--max-points", "2", "--max-index", "2")
    assert code == 0 and lines(out)[-1]["summary"]["violations"] == 0
    code, out, _ = run(capsys, "search", "f-compact-not-core-ultraconnected", "--max-points", "3",
                       "--max-index", "3")
    s = lines(out)[-1]["summary"]
    assert code == 0 and s["violations"] == 0 and s["checked"] > 0


def test_search_reports_violations_with_exit_one(capsys):
    # the literal comfort-collapse rule is violated by core sizes 2 and 3
    code, out, _ = run(capsys, "search", "comfort-collapse", "--max-points", "3", "--max-index", "3")
    recs = lines(out)
    assert code == 1
    assert recs[-1]["summary"]["violations"] > 0
    bad = recs[0]
    assert bad["value"] is False and sorted(bad["witness"]["core_sizes"]) == [2, 3]


def test_unknown_predicate_and_bad_flags(capsys):
    assert run(capsys, "search", "nonsense")[0] == 2
    assert run(capsys, "check", "lemma51", "--points", "0")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "enumerate", "--points", "3", "--format", "xml")[0] == 2


def test_certify_roundtrip(tmp_path, capsys):
    path = tmp_path / "c.jsonl"
    assert run(capsys, "check", "fcompact-structure", "--max-points", "2", "--output", str(path))[0] == 0
    code, out, _ = run(capsys, "certify", str(path))
    recs = lines(out)
    assert code == 0
    assert recs[-1]["summary"]["failed_reverification"] == 0
    assert recs[-1]["summary"]["certificates"] > 0


def test_certify_detects_tampering(tmp_path, capsys):
    path = tmp_path / "c.jsonl"
    run(capsys, "check", "lemma51", "--points", "2", "--output", str(path))
    rows = path.read_text().splitlines()
    c = json.loads(rows[0])
    c["checked"] += 1
    rows[0] = json.dumps(c)
    path.write_text("\n".join(rows) + "\n")
    code, out, _ = run(capsys, "certify", str(path))
    assert code == 1 and lines(out)[0]["reverified"] is False


def test_malformed_json_reports_position(tmp_path, capsys):
    path = tmp_path / "bad.jsonl"
    path.write_text('{"claim": "lemma51",\n')
    code, _, err = run(capsys, "certify", str(path))
    assert code == 2 and "line 1 column" in err
    code, _, err = run(capsys, "thm21", "--catalogue", "[{\"n\": 2,", "--family", "{}")
    assert code == 2 and "line 1 column" in err


def test_certify_missing_file(capsys):
    assert run(capsys, "certify", "/nonexistent/file.jsonl")[0] == 2


def test_thm21_command(tmp_path, capsys):
    cat = tmp_path / "k.json"
    cat.write_text(json.dumps([discrete(2).to_json()]))
    fam = tmp_path / "p.json"
    P = FilterFamily((principal("abc", "ab"), principal("abc", "bc"), principal("abc", "ac")))
    fam.write_text(json.dumps(P.to_json()))
    code, out, _ = run(capsys, "thm21", "--catalogue", str(cat), "--family", str(fam))
    rep = lines(out)[0]
    assert code == 0 and rep["cond3"] is None and rep["consistent"]
    assert rep["counterexample"]["diagonal"] == [[0, 0, 0], [1, 0, 0], [0, 1, 1]]


def test_thm21_rejects_improper_family(capsys):
    code, _, err = run(capsys, "thm21", "--catalogue", json.dumps([sierpinski().to_json()]),
                       "--family", json.dumps({"index": ["a"], "filters": [{"index": ["a"], "core": []}]}))
    assert code == 2


def test_cor54_command(capsys):
    code, out, _ = run(capsys, "cor54", "--catalogue", json.dumps([discrete(2).to_json()]))
    rep = lines(out)[0]
    assert code == 0 and rep["cond3"] is False and rep["finite_surrogate"] is True


def test_comfort_command(capsys):
    code, out, _ = run(capsys, "comfort", "--max-points", "3", "--max-index", "3")
    rep = lines(out)[0]
    assert code == 0
    assert len(rep["classes"]) == 2
    assert rep["matches_core_size_order"] is False
    assert rep["matches_ultra_vs_nonultra_order"] is True


@pytest.mark.parametrize("name,flags", [
    ("limit-oracle", ["--max-points", "3", "--max-index", "2"]),
    ("pseudocompact", ["--max-points", "2", "--max-index", "2"]),
])
def test_output_identical_across_worker_counts(capsys, name, flags):
    _, one, _ = run(capsys, "check", name, *flags, "--workers", "1")
    _, two, _ = run(capsys, "check", name, *flags, "--workers", "2")
    assert one == two and one

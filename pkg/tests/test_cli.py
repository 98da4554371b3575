import json
import subprocess
import sys

import pytest

from pmlink import fixtures
from pmlink.cli import main
from pmlink.config import SearchBudget
from pmlink.errors import Inconclusive
from pmlink.report import ClassifyOptions, classify, emit_report, report_dict


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_classify_d4_json(capsys):
    code, out, _ = run(capsys, "classify", "fixture:d4", "--json")
    assert code == 0
    d = json.loads(out)
    assert d["schema"] == 1
    assert d["sandwiched"] is False
    assert d["pm"]["value"] is True
    assert d["pm"]["certificate"]["target"] == "zero-vertex"
    assert d["rational"]["value"] is True
    assert "timing" not in d["metadata"]


def test_classify_is_deterministic(capsys):
    _, a, _ = run(capsys, "classify", "fixture:e6", "--json", "--seed", "1")
    _, b, _ = run(capsys, "classify", "fixture:e6", "--json", "--seed", "2")
    da, db = json.loads(a), json.loads(b)
    da["metadata"].pop("seed"), db["metadata"].pop("seed")
    assert da == db


def test_classify_text_has_transcript(capsys):
    code, out, _ = run(capsys, "classify", "fixture:fig1_right")
    assert code == 0
    assert "sandwiched: true" in out
    assert "bd " in out and "(empty)" in out


def test_inconclusive_report():
    r = classify(fixtures.graph("e8"), ClassifyOptions(budget=SearchBudget(max_nodes=2), embeddings=False))
    assert isinstance(r.pm, Inconclusive)
    d = report_dict(r)
    assert d["pm"] == "inconclusive"
    assert d["metadata"]["inconclusive"]["pm"]["budget"] == 2
    assert d["metadata"]["budget"]["max_nodes"] == 2


def test_timing_only_on_request():
    r = classify(fixtures.graph("a2"))
    assert "timing" in report_dict(r, include_timing=True)["metadata"]
    assert "timing" not in json.loads(emit_report(r))["metadata"]


def test_embed_and_fiber(capsys):
    code, out, _ = run(capsys, "embed", "fixture:d4", "--mode", "s")
    assert (code, out.strip()) == (0, "none")
    code, out, _ = run(capsys, "embed", "fixture:d4", "--mode", "p", "--json")
    assert json.loads(out)["embedding"]
    g = fixtures.text("d4_multilink", "graph")
    code, out, _ = run(capsys, "fiber", "fixture:d4_multilink", "fixture:d4_multilink", "--json")
    d = json.loads(out)
    assert (d["euler"], d["total_boundary"], d["genus"]) == (0, 2, 0)


def test_nlf_command(capsys):
    code, out, _ = run(capsys, "nlf", "fixture:x3", "--json")
    d = json.loads(out)
    assert code == 0 and d["admissible"]
    assert len(d["kernel"]) == 4


def test_errors_exit_2(capsys, tmp_path):
    p = tmp_path / "bad.graph"
    p.write_text("vertex a -2\nedge a b\n")
    code, _, err = run(capsys, "classify", str(p))
    assert code == 2 and "line 2" in err


def test_certificate_replays_in_fresh_process(tmp_path, capsys):
    _, out, _ = run(capsys, "classify", "fixture:d4", "--json")
    cert = json.loads(out)["pm"]["certificate"]
    aug = cert["augmented"]
    lines = [f"vertex {v} {f}" for v, f in aug["vertices"]] + [f"edge {a} {b}" for a, b in aug["edges"]]
    (tmp_path / "aug.graph").write_text("\n".join(lines) + "\n")
    (tmp_path / "cert.moves").write_text("\n".join(cert["blowdown"]) + "\n")
    res = subprocess.run([sys.executable, "-m", "pmlink", "replay", str(tmp_path / "aug.graph"),
                          str(tmp_path / "cert.moves")], capture_output=True, text=True, check=True)
    assert res.stdout.strip().splitlines()[-1] == "reached: single 0-framed vertex"

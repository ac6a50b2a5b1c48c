import json
import subprocess
import sys

import pytest

from foxkit.cli import main, run_command
from foxkit.errors import InputError
from foxkit.presfile import CORPUS, corpus_text, format_presentation, parse_presentation
from foxkit.fox import normalize_presentation

BS12 = """name: bs12
class: bs 1 2
gens: a t
rels:
  t a t^-1 a^-2
aspherical: true
"""


def test_parse_bs12():
    p = parse_presentation(BS12)
    assert len(p.relators) == 1 and p.deficiency == 1
    assert format_presentation(p) == BS12


@pytest.mark.parametrize("name", CORPUS)
def test_round_trip(name):
    p = parse_presentation(corpus_text(name))
    text = format_presentation(p)
    assert parse_presentation(text) == p
    assert format_presentation(parse_presentation(text)) == text
    q = normalize_presentation(p)
    assert parse_presentation(format_presentation(q)) == q


@pytest.mark.parametrize(
    "text,needle",
    [
        ("class: bs 1 2\ngens: a t\nrels:\n  t b\n", "'b'"),
        ("class: weird 2\ngens: a t\n", "unknown class tag"),
        ("class: formal 2\ngens: a t\nrels:\n  t\nw: t -1\n", "homomorphism"),
        ("class: bs 1 2\ngens: a t\nrels:\n  t a\n", "not trivial"),
        ("gens: a t\n", "missing 'class'"),
        ("class: bs 1 2\ngens: a t\nw: a -1\n", "homomorphism"),
    ],
)
def test_parse_errors(text, needle):
    with pytest.raises(InputError, match=needle):
        parse_presentation(text)


def test_w_accepts_even_relator():
    p = parse_presentation("class: formal 2\ngens: a t\nrels:\n  t t\nw: t -1\n")
    assert p.w.signs == (1, -1)


def test_verify_cup_z2():
    report, code = run_command(["verify-cup", "corpus/z2.pres"])
    assert code == 0 and report["ok"]
    res = report["results"]
    assert res["degree1_residual"] == [] and res["degree2_residual"] == []
    assert list(report) == ["schema", "command", "input_digest", "results", "ok", "timing"]
    assert report["schema"] == 1


def test_bs_torsion_command():
    report, code = run_command(["bs-torsion", "--m", "2", "--depth", "1"])
    assert code == 0 and report["results"]["divisors"] == [1, 1, 1]
    assert report["results"]["free_rank"] == 1


def test_selftest():
    report, code = run_command(["selftest"])
    assert code == 0 and report["ok"]
    assert [i["name"] for i in report["results"]["corpus"]] == list(CORPUS)


def test_exit_codes(tmp_path):
    assert run_command([])[1] == 2
    assert run_command(["frobnicate"])[1] == 2
    assert run_command(["bs-torsion"])[1] == 2
    assert run_command(["fox", str(tmp_path / "missing.pres")])[1] == 2
    formal = tmp_path / "f.pres"
    formal.write_text("class: formal 2\ngens: a t\nrels:\n  t a t^-1 a^-2\naspherical: true\n")
    report, code = run_command(["verify-cup", str(formal)])
    assert code == 3 and report["error"]["code"] == "undecidable-in-formal-mode"
    report, code = run_command(["complex", str(formal)])
    assert code == 0 and report["results"]["verified"] is False
    assert run_command(["bs-torsion", "--m", "3", "--depth", "1"])[1] == 1


def test_reports_are_deterministic(tmp_path):
    outs = []
    for k in range(2):
        path = tmp_path / f"r{k}.json"
        assert main(["--out", str(path), "verify-cup", "corpus/klein.pres"]) == 0
        data = json.loads(path.read_text())
        data.pop("timing")
        outs.append(json.dumps(data, ensure_ascii=False))
    assert outs[0] == outs[1]


def test_gamma_commands():
    report, code = run_command(["bm-preimage", "corpus/bs12.pres", '{"entries": [["0", "t"], ["t^-1", "0"]]}'])
    assert code == 0 and report["results"]["roundtrip"]
    report, code = run_command(["gamma-nf", "corpus/bs12.pres", '{"rank": 1, "odot": [[["t - t^-1"], ["1"]]]}'])
    assert code == 0 and report["results"]["zero"]
    report, code = run_command(["bm-eval", "corpus/klein.pres", '{"rank": 1, "gamma": [["1 + b"]]}'])
    assert report["results"]["form"]["entries"] == [["-b^-1 + b"]]
    report, code = run_command(["bm-preimage", "corpus/bs12.pres", '{"entries": [["t"]]}'])
    assert code == 3 and report["error"]["code"] == "not-hermitean"


def test_other_commands():
    report, code = run_command(["fox", "corpus/bs12.pres", "--generator", "t"])
    assert report["results"]["derivatives"] == [{"t": "1 - t.a.t^-1"}]
    report, code = run_command(["normalize", "corpus/bs12.pres"])
    assert code == 0 and report["results"]["normalized"]["deficiency"] == 1
    report, code = run_command(["complex", "corpus/fbc2.pres"])
    assert code == 0 and report["ok"]
    report, code = run_command(["dualize", "corpus/bs12.pres"])
    assert report["results"]["matrix"] == [["-1 - a^-1 + t^-1", "1 - a^-2"]]


def test_module_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "foxkit", "bs-torsion", "--m", "2", "--depth", "2"],
        capture_output=True,
        text=True,
    )
    assert out.returncode == 0
    assert json.loads(out.stdout)["results"]["torsion_free"] is True

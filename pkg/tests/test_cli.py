import json
from pathlib import Path

import pytest

from predual.cli import main

DATA = Path(__file__).resolve().parent.parent / "data"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


class TestCheck:
    def test_c3_passes(self, capsys):
        code, out, _ = run(capsys, "check", DATA / "c3.json")
        assert code == 0
        assert out.splitlines()[-1] == "result: pass"

    def test_m3_fails_with_witness(self, capsys):
        code, out, _ = run(capsys, "check", DATA / "m3.json")
        assert code == 1
        assert "distributive: FAIL witness ('x', 'y', 'z', 'x')" in out

    def test_json(self, capsys):
        code, out, _ = run(capsys, "check", DATA / "m3.json", "--json")
        doc = json.loads(out)
        assert code == 1 and doc["passed"] is False
        assert doc["witnesses"]["distributive"] == ["x", "y", "z", "x"]

    def test_bundle(self, capsys):
        code, out, _ = run(capsys, "check", DATA / "m3.json", "--bundle", "predomain")
        assert code == 0
        assert "distributive" not in out

    def test_unknown_bundle(self, capsys):
        code, _, err = run(capsys, "check", DATA / "c3.json", "--bundle", "nonsense")
        assert code == 2 and "nonsense" in err

    def test_malformed_json(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"elements": [\n  "0",\n}')
        code, _, err = run(capsys, "check", bad)
        assert code == 2
        assert f"{bad}:3:1" in err

    def test_invalid_structure(self, capsys, tmp_path):
        f = tmp_path / "v.json"
        f.write_text(json.dumps({"elements": ["0", "x", "y"], "leq": [["0", "x"], ["0", "y"]],
                                 "closure": "reflexive-transitive"}))
        code, _, err = run(capsys, "check", f)
        assert code == 2 and "no least upper bound" in err

    def test_missing_file(self, capsys, tmp_path):
        code, _, _ = run(capsys, "check", tmp_path / "nope.json")
        assert code == 2

    def test_dot(self, capsys, tmp_path):
        dot = tmp_path / "c3.dot"
        run(capsys, "check", DATA / "c3.json", "--dot", dot)
        text = dot.read_text()
        assert text.startswith('digraph "structure" {')
        assert "n0 -> n1 [style=solid];" in text
        assert "n0 -> n2 [style=solid];" not in text
        assert "style=dashed" in text


class TestSpectrum:
    def test_text(self, capsys):
        code, out, _ = run(capsys, "spectrum", DATA / "c3.json")
        assert code == 0
        assert out.splitlines()[:3] == ["points: 2", "  P0 = {1}", "  P1 = {a,1}"]

    def test_json(self, capsys):
        _, out, _ = run(capsys, "spectrum", DATA / "c3.json", "--json")
        assert json.loads(out) == {"points": [["1"], ["a", "1"]], "basic_opens": {"0": [], "a": [1], "1": [0, 1]}}

    def test_empty(self, capsys):
        code, out, _ = run(capsys, "spectrum", DATA / "m3.json")
        assert code == 0 and out.startswith("points: 0")


class TestSpaces:
    def test_dualize(self, capsys):
        code, out, _ = run(capsys, "dualize", DATA / "sierpinski.json")
        doc = json.loads(out)
        assert code == 0 and doc["elements"] == ["{}", "{y}", "{x,y}"]

    @pytest.mark.parametrize("name", ["sierpinski.json", "chain3_space.json"])
    def test_roundtrip_passes(self, capsys, name):
        code, out, _ = run(capsys, "roundtrip", DATA / name)
        assert code == 0 and out.splitlines()[-1] == "result: pass"

    def test_roundtrip_not_t0(self, capsys):
        code, out, _ = run(capsys, "roundtrip", DATA / "indiscrete2.json")
        assert code == 1
        assert "NotT0" in out.splitlines()[-1]

    def test_roundtrip_json(self, capsys):
        code, out, _ = run(capsys, "roundtrip", DATA / "indiscrete2.json", "--json")
        doc = json.loads(out)
        assert code == 1 and doc["first_failure"] == "point map (NotT0)"

    def test_invalid_space(self, capsys, tmp_path):
        f = tmp_path / "s.json"
        f.write_text(json.dumps({"points": ["x", "y"], "opens": [[], ["x"]]}))
        code, _, _ = run(capsys, "roundtrip", f)
        assert code == 2

    def test_specialization_dot(self, capsys, tmp_path):
        dot = tmp_path / "s.dot"
        run(capsys, "roundtrip", DATA / "chain3_space.json", "--dot", dot)
        assert dot.read_text().count("->") == 2


class TestMorphism:
    def test_check_identity(self, capsys):
        code, out, _ = run(capsys, "morphism", "check", DATA / "c3_identity.json")
        assert code == 0

    def test_check_full(self, capsys):
        code, out, _ = run(capsys, "morphism", "check", DATA / "c3_full.json")
        assert code == 1 and "faithful: FAIL witness ('a',)" in out

    def test_compose_identities(self, capsys):
        code, out, _ = run(capsys, "morphism", "compose", DATA / "c3_identity.json", DATA / "c3_identity.json")
        doc = json.loads(out)
        assert code == 0
        assert doc["pairs"] == doc["source"]["leq"]

    def test_compose_mismatch(self, capsys):
        code, _, err = run(capsys, "morphism", "compose", DATA / "c3_to_s2.json", DATA / "c3_identity.json")
        assert code == 2 and "target" in err

    def test_argument_count_checked_first(self, capsys, tmp_path):
        code, _, err = run(capsys, "morphism", "compose", tmp_path / "missing.json")
        assert code == 2 and "takes 2" in err

    def test_spectrum_map_identity(self, capsys):
        code, out, _ = run(capsys, "morphism", "spectrum-map", DATA / "c3_identity.json")
        doc = json.loads(out)
        assert code == 0
        assert [m["from"] == m["to"] for m in doc["mapping"]] == [True, True]

    def test_spectrum_map_not_a_morphism(self, capsys):
        code, out, _ = run(capsys, "morphism", "spectrum-map", DATA / "c3_full.json")
        assert code == 1 and "faithful" in out

    def test_vee(self, capsys):
        code, out, _ = run(capsys, "morphism", "vee", DATA / "c3_identity.json")
        assert code == 0 and json.loads(out)["pairs"] == json.loads(out)["source"]["prec"]


class TestSearchAndExemplars:
    def test_search_witness(self, capsys):
        code, out, _ = run(capsys, "search", "a", "--max-size", "5")
        assert code == 1 and "status: witness" in out

    def test_search_sampled(self, capsys):
        code, out, _ = run(capsys, "search", "c", "--max-size", "3", "--sampled", "--budget", "300", "--json")
        doc = json.loads(out)
        assert code == 0 and doc["status"] == "exhausted" and doc["checked"] == 300

    def test_unknown_property(self, capsys):
        code, _, err = run(capsys, "search", "zz")
        assert code == 2 and "unknown property 'zz'" in err

    def test_bad_size(self, capsys):
        code, _, _ = run(capsys, "search", "a", "--max-size", "0")
        assert code == 2

    def test_exemplar_omega(self, capsys):
        code, out, _ = run(capsys, "exemplar", "omega-B", "--window", "3")
        assert code == 0
        assert "elements: 0 1 2 w w+1" in out
        assert "approximating: UNKNOWN ('w', '2')" in out

    def test_exemplar_intervals_sampled(self, capsys):
        code, out, _ = run(capsys, "exemplar", "intervals", "--denominator", "2", "--width", "2",
                           "--samples", "300", "--json")
        doc = json.loads(out)
        assert code == 0 and doc["sampled"]["auxiliary"]["fail"] == 0

    def test_unknown_exemplar(self, capsys):
        code, _, _ = run(capsys, "exemplar", "zeta")
        assert code == 2

    def test_no_verb(self, capsys):
        assert run(capsys)[0] == 2


COMMANDS = [
    ("check", DATA / "m3.json", "--json"),
    ("spectrum", DATA / "c3.json"),
    ("dualize", DATA / "chain3_space.json"),
    ("roundtrip", DATA / "sierpinski.json"),
    ("morphism", "spectrum-map", DATA / "c3_to_s2.json"),
    ("search", "c", "--max-size", "3", "--sampled", "--budget", "200", "--seed", "5"),
    ("exemplar", "intervals", "--samples", "200", "--seed", "2"),
]


@pytest.mark.parametrize("argv", COMMANDS, ids=[c[0] for c in COMMANDS])
def test_output_is_byte_deterministic(capsys, tmp_path, argv):
    outs = []
    for k in range(2):
        dot = tmp_path / f"{k}.dot"
        extra = ["--dot", dot] if argv[0] in ("check", "spectrum", "dualize", "roundtrip", "exemplar") else []
        code, out, _ = run(capsys, *argv, *extra)
        outs.append((code, out, dot.read_bytes() if dot.exists() else b""))
    assert outs[0] == outs[1]

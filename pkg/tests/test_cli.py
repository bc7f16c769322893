"""Command-line surface: exit codes, file round-trips, CSV and DOT output."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import pytest

from depthlogic.cli import main
from depthlogic.model import load_model, save_model


@pytest.fixture
def model_file(tmp_path, one_state_model) -> str:
    path = tmp_path / "one.json"
    save_model(one_state_model, str(path))
    return str(path)


@pytest.fixture
def three_world_file(tmp_path, three_world_model) -> str:
    path = tmp_path / "three.json"
    save_model(three_world_model, str(path))
    return str(path)


class TestCheck:
    def test_true_prints_true(self, model_file, capsys):
        rc = main(["check", "--model", model_file, "--state", "s",
                   "--formula", "K[0] p", "--semantics", "DPAL"])
        assert rc == 0
        assert capsys.readouterr().out.strip() == "true"

    def test_false_prints_false_exit_zero(self, model_file, capsys):
        rc = main(["check", "--model", model_file, "--state", "s",
                   "--formula", "q"])
        assert rc == 0
        assert capsys.readouterr().out.strip() == "false"

    def test_three_world_announcement(self, three_world_file, capsys):
        rc = main(["check", "--model", three_world_file, "--state", "1",
                   "--formula", "[K[2] K[2] p0] K[0] K[1] p0",
                   "--semantics", "ADPAL"])
        assert rc == 0
        assert capsys.readouterr().out.strip() == "true"

    def test_parse_error_exits_2(self, model_file, capsys):
        rc = main(["check", "--model", model_file, "--state", "s",
                   "--formula", "K[0] &"])
        assert rc == 2

    def test_mode_error_exits_3(self, three_world_file):
        rc = main(["check", "--model", three_world_file, "--state", "1",
                   "--formula", "p0", "--semantics", "DPAL"])
        assert rc == 3

    def test_fragment_error_exits_3(self, model_file):
        rc = main(["check", "--model", model_file, "--state", "s",
                   "--formula", "[p]p", "--semantics", "DBEL"])
        assert rc == 3

    def test_unknown_state_exits_3(self, model_file):
        rc = main(["check", "--model", model_file, "--state", "zzz",
                   "--formula", "p"])
        assert rc == 3


class TestUpdate:
    def test_edpal_top_is_byte_identical(self, model_file, tmp_path):
        out = tmp_path / "out.json"
        rc = main(["update", "--model", model_file, "--formula", "true",
                   "--semantics", "EDPAL", "--out", str(out)])
        assert rc == 0
        assert out.read_bytes() == Path(model_file).read_bytes()

    def test_dpal_doubles_states(self, model_file, tmp_path):
        out = tmp_path / "out.json"
        rc = main(["update", "--model", model_file, "--formula", "p",
                   "--semantics", "DPAL", "--out", str(out)])
        assert rc == 0
        m = load_model(str(out))
        assert set(m.states) == {"0.s", "1.s"}


class TestSat:
    def test_satisfiable_prints_model(self, capsys):
        rc = main(["sat", "--formula", "E[0,2] & K[0] K[0] p",
                   "--max-states", "2"])
        assert rc == 0
        out = capsys.readouterr().out
        data = json.loads(out[out.index("{"):])
        assert data["agents"] == 1

    def test_unsatisfiable_within_bounds(self, capsys):
        rc = main(["sat", "--formula", "p & !p", "--max-states", "2"])
        assert rc == 0
        assert "none-within-bounds" in capsys.readouterr().out


class TestMuddy:
    def test_phi_k_true(self, capsys):
        rc = main(["muddy", "--k", "2", "--formula", "phi_k",
                   "--semantics", "DPAL"])
        assert rc == 0
        assert "true" in capsys.readouterr().out

    def test_depth_expression(self, capsys):
        rc = main(["muddy", "--k", "3", "--depths", "k-1-i",
                   "--formula", "upper", "--semantics", "EDPAL"])
        assert rc == 0
        assert "true" in capsys.readouterr().out

    def test_amnesia_only_under_edpal(self, capsys):
        rc = main(["muddy", "--k", "3", "--formula", "amnesia",
                   "--semantics", "EDPAL"])
        assert rc == 0
        assert "true" in capsys.readouterr().out
        rc = main(["muddy", "--k", "3", "--formula", "amnesia",
                   "--semantics", "DPAL"])
        assert rc == 0
        assert "false" in capsys.readouterr().out


class TestAxioms:
    def test_clean_suite_exits_zero(self, capsys):
        rc = main(["axioms", "--table", "T1", "--semantics", "DBEL",
                   "--cases", "30", "--models", "6"])
        assert rc == 0
        assert "0 violations" in capsys.readouterr().out

    def test_violating_property_exits_one(self, capsys):
        rc = main(["axioms", "--property", "KP", "--semantics", "EDPAL",
                   "--direction", "reverse", "--cases", "400"])
        assert rc == 1
        out = capsys.readouterr().out
        assert "violations" in out and "0 violations" not in out

    def test_unambiguous_flag_accepted(self):
        rc = main(["axioms", "--table", "T1", "--semantics", "DBEL",
                   "--cases", "10", "--models", "4", "--unambiguous"])
        assert rc == 0


class TestBench:
    def test_blowup_csv(self, tmp_path):
        out = tmp_path / "bench.csv"
        rc = main(["bench", "--family", "blowup", "--cases", "20",
                   "--out", str(out)])
        assert rc == 0
        rows = list(csv.DictReader(out.open()))
        assert len(rows) == 20
        for row in rows:
            assert int(row["updated_size"]) <= 4 * int(row["model_size"])

    def test_3sat_family(self, tmp_path):
        out = tmp_path / "bench.csv"
        rc = main(["bench", "--family", "3sat", "--max-vars", "3",
                   "--out", str(out)])
        assert rc == 0
        rows = list(csv.DictReader(out.open()))
        assert [row["family"] for row in rows] == ["3sat"] * 3


class TestExportDot:
    def test_single_model(self, three_world_file, capsys):
        rc = main(["export-dot", "--model", three_world_file,
                   "--state", "1"])
        assert rc == 0
        out = capsys.readouterr().out
        assert out.startswith("digraph") or out.startswith("graph")
        assert "lightyellow" in out  # designated state highlighted

    def test_announcement_sequence_clusters(self, three_world_file, tmp_path):
        out = tmp_path / "seq.dot"
        rc = main(["export-dot", "--model", three_world_file, "--state", "1",
                   "--announce", "K[2] K[2] p0", "--semantics", "ADPAL",
                   "--out", str(out)])
        assert rc == 0
        text = out.read_text()
        assert text.count("subgraph cluster_") == 2


def test_determinism_under_seed(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        assert main(["bench", "--family", "3sat", "--max-vars", "2",
                     "--seed", "7", "--out", str(path)]) == 0
    rows = lambda p: [r[:4] + r[5:] for r in csv.reader(p.open())]  # noqa: E731
    assert rows(a) == rows(b)  # identical apart from the timing column

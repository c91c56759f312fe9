import csv
import io
import json

import pytest

from distortrec.cli import main
from distortrec.model import load_model, save_model


@pytest.fixture
def dataset(tmp_path):
    rows = [
        ("i am a total loser and nothing helps", "Labeling", ""),
        ("this is a complete disaster for everyone", "Magnification", ""),
        ("i am a loser again today", "Labeling", ""),
        ("what a disaster this turned out to be", "Magnification", ""),
        ("we had a quiet normal afternoon", "No Distortion", ""),
        ("the meeting went fine and we left", "", ""),
        ("i am a loser it is a disaster", "Labeling", "Magnification"),
        ("tomorrow will be calm", "", ""),
        ("i am such a loser lately", "Labeling", ""),
        ("utter disaster at work", "Magnification", ""),
    ]
    path = tmp_path / "data.csv"
    with path.open("w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["text", "dominant", "secondary"])
        w.writerows(rows)
    cmap = tmp_path / "cols.map"
    cmap.write_text("text=text\ndominant=dominant\nsecondary=secondary\n")
    return path, cmap


@pytest.fixture
def fixture_model_dir(tmp_path, priority_model):
    d = tmp_path / "model"
    save_model(priority_model, d)
    return d


class TestTrain:
    def test_trains_and_saves(self, dataset, tmp_path, capsys):
        data, cmap = dataset
        out = tmp_path / "out"
        rc = main(["train", "--dataset", str(data), "--column-map", str(cmap),
                   "--nm", "2", "--sm", "FCR", "--it", "0", "--out", str(out)])
        assert rc == 0
        model = load_model(out)
        assert len(model.labels) == 10
        assert "trained on 10 texts" in capsys.readouterr().out

    def test_invalid_sm_usage_error(self, dataset, tmp_path):
        data, cmap = dataset
        with pytest.raises(SystemExit) as exc:
            main(["train", "--dataset", str(data), "--column-map", str(cmap),
                  "--sm", "BOGUS", "--out", str(tmp_path / "o")])
        assert exc.value.code == 2

    def test_missing_dataset_runtime_error(self, tmp_path, capsys):
        cmap = tmp_path / "c.map"
        cmap.write_text("text=a\ndominant=b\n")
        rc = main(["train", "--dataset", str(tmp_path / "nope.csv"),
                   "--column-map", str(cmap), "--out", str(tmp_path / "o")])
        assert rc == 1
        assert "error:" in capsys.readouterr().err


class TestRecognize:
    def test_json_output(self, fixture_model_dir, tmp_path, capsys):
        inp = tmp_path / "texts.txt"
        inp.write_text("not a bad thing\n")
        rc = main(["recognize", "--model", str(fixture_model_dir),
                   "--input", str(inp), "--dt", "10", "--json"])
        assert rc == 0
        doc = json.loads(capsys.readouterr().out.strip())
        assert doc["decisions"]["d1"] is True
        assert len(doc["matches"]) == 1

    def test_stdin_empty(self, fixture_model_dir, capsys, monkeypatch):
        monkeypatch.setattr("sys.stdin", io.StringIO(""))
        rc = main(["recognize", "--model", str(fixture_model_dir)])
        assert rc == 0
        assert capsys.readouterr().out == ""

    def test_backend_parity(self, fixture_model_dir, tmp_path, capsys):
        inp = tmp_path / "texts.txt"
        inp.write_text("not a bad thing\nbad thing here\n\n")
        outputs = []
        for backend in ("naive", "kernel"):
            main(["recognize", "--model", str(fixture_model_dir), "--input", str(inp),
                  "--backend", backend, "--json"])
            outputs.append(capsys.readouterr().out)
        assert outputs[0] == outputs[1]

    def test_missing_model_dir(self, tmp_path, capsys):
        rc = main(["recognize", "--model", str(tmp_path / "nomodel"), "--input", "-"])
        assert rc == 1

    def test_env_model_dir(self, fixture_model_dir, capsys, monkeypatch):
        monkeypatch.setenv("DISTORTREC_MODEL", str(fixture_model_dir))
        monkeypatch.setattr("sys.stdin", io.StringIO("not a bad thing\n"))
        rc = main(["recognize", "--dt", "10"])
        assert rc == 0
        assert "d1" in capsys.readouterr().out


class TestHighlight:
    def test_ansi_span(self, fixture_model_dir, tmp_path, capsys):
        inp = tmp_path / "t.txt"
        inp.write_text("not a bad thing\n")
        rc = main(["highlight", "--model", str(fixture_model_dir),
                   "--input", str(inp), "--dt", "10"])
        assert rc == 0
        out = capsys.readouterr().out
        assert "\x1b[" in out and "not a bad thing" in out.replace("\x1b[31m", "").replace("\x1b[0m", "")

    def test_html_mark(self, fixture_model_dir, tmp_path, capsys):
        inp = tmp_path / "t.txt"
        inp.write_text("not a bad thing\n")
        main(["highlight", "--model", str(fixture_model_dir),
              "--input", str(inp), "--dt", "10", "--html"])
        out = capsys.readouterr().out
        assert '<mark data-distortion="d1">not a bad thing</mark>' in out

    def test_no_detection_echoes_text(self, fixture_model_dir, tmp_path, capsys):
        inp = tmp_path / "t.txt"
        inp.write_text("all is well today\n")
        main(["highlight", "--model", str(fixture_model_dir), "--input", str(inp)])
        assert capsys.readouterr().out == "all is well today\n"


class TestEvaluateAndGrid:
    def test_evaluate_prints_report(self, dataset, capsys):
        data, cmap = dataset
        rc = main(["evaluate", "--dataset", str(data), "--column-map", str(cmap),
                   "--nm", "2", "--sm", "FCR", "--it", "0", "--dt", "50"])
        assert rc == 0
        out = capsys.readouterr().out
        assert "mean macro-F1" in out and "MPE" in out

    def test_restricted_grid_row_count(self, dataset, tmp_path, capsys):
        data, cmap = dataset
        out_csv = tmp_path / "grid.csv"
        rc = main(["grid", "--dataset", str(data), "--column-map", str(cmap),
                   "--nm", "2", "--sm", "FCR", "--out-csv", str(out_csv)])
        assert rc == 0
        with out_csv.open() as f:
            rows = list(csv.DictReader(f))
        # 1 NM x 1 SM x 10 IT x 9 DT x 2 modes
        assert len(rows) == 1 * 1 * 10 * 9 * 2


class TestDiffAndStats:
    def test_diff_output(self, fixture_model_dir, tmp_path, capsys, priority_model):
        from distortrec.model import edit_entry
        other, _ = edit_entry(priority_model, "d2", ("hopeless",), 0.9)
        other_dir = tmp_path / "other"
        save_model(other, other_dir)
        rc = main(["diff", str(fixture_model_dir), str(other_dir)])
        assert rc == 0
        assert "+ d2\thopeless\t0.900000" in capsys.readouterr().out

    def test_stats(self, dataset, capsys):
        data, cmap = dataset
        rc = main(["stats", "--dataset", str(data), "--column-map", str(cmap), "--nm", "2"])
        assert rc == 0
        out = capsys.readouterr().out
        assert "texts: 10" in out and "Labeling" in out

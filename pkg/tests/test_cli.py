import json
from pathlib import Path

import pytest

from ratpoints.cli import main
from ratpoints.enumeration import CountCurve

DATA = Path(__file__).resolve().parent.parent / "data" / "varieties"


@pytest.mark.parametrize("name", ["cubic_xyz_u3", "p1", "p2", "p113", "hirzebruch2"])
def test_describe_data_files(name, capsys):
    assert main(["describe", "--variety", str(DATA / f"{name}.json")]) == 0
    assert "Picard rank" in capsys.readouterr().out


def test_predict_writes_schema(tmp_path):
    out = tmp_path / "pred.json"
    assert main(["predict", "--variety", "projective:1", "--euler-truncation", "2000",
                 "--output", str(out)]) == 0
    d = json.loads(out.read_text())
    assert d["schema"] == "ratpoints.prediction/1" and d["alpha"] == "2"


def test_enumerate_then_fit_then_compare(tmp_path, capsys):
    counts = tmp_path / "p1.csv"
    assert main(["enumerate", "--variety", "projective:1", "--bounds", "geom:100:3000:8",
                 "--output", str(counts)]) == 0
    text = counts.read_text()
    assert text.startswith("# schema: ratpoints.counts/1")
    assert len(CountCurve.from_csv(text).samples) == 8
    fit = tmp_path / "fit.json"
    assert main(["fit", "--counts", str(counts), "--fix-b", "1", "--output", str(fit)]) == 0
    assert abs(json.loads(fit.read_text())["a"] - 2) < 0.05
    pred = tmp_path / "pred.json"
    main(["predict", "--variety", "projective:1", "--output", str(pred)])
    capsys.readouterr()
    assert main(["compare", "--prediction", str(pred), "--counts", str(counts)]) == 0
    assert "exponent" in capsys.readouterr().out


def test_enumerate_engines(tmp_path):
    for var, engine in [("cubic", "auto"), ("weighted:1,1,3", "auto"), ("projective:2", "projective")]:
        out = tmp_path / "c.csv"
        assert main(["enumerate", "--variety", var, "--engine", engine, "--bounds", "5,10",
                     "--output", str(out)]) == 0
        assert CountCurve.from_csv(out.read_text()).counts[0] > 0
    out = tmp_path / "grid.csv"
    assert main(["enumerate", "--variety", "cubic", "--engine", "torus-grid", "--bounds", "5,10",
                 "--box", "10", "--output", str(out)]) == 0
    assert CountCurve.from_csv(out.read_text()).counts == [28, 124]


def test_euler_product_csv(capsys):
    assert main(["euler-product", "--variety", "cubic", "--max-prime", "7"]) == 0
    out = capsys.readouterr().out
    assert "p,numerator,denominator" in out and "\n2,19,512\n" in out


def test_stage_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"schema": "ratpoints.variety/1", "kind": "toric", "name": "half",
                               "fan": {"dim": 2, "rays": [[1, 0], [0, 1], [-1, -1]],
                                       "max_cones": [[0, 1], [1, 2]]}}))
    assert main(["predict", "--variety", str(bad)]) == 2
    assert "stage" in capsys.readouterr().err

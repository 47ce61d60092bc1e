import math
import os
import pathlib

import pytest

import pressure_forge as pf

DEMO = pathlib.Path(os.environ.get("PFORGE_DEMO_CONFIG", pathlib.Path(__file__).parents[2] / "configs" / "demo.json"))


def test_counts():
    assert pf.beta_count("golden", 3) == 5
    assert pf.beta_count("2", 5) == 2**6 - 1
    assert pf.beta_words("1.5", 2) == [[0, 0], [0, 1], [1, 0]]
    assert not pf.beta_admissible("golden", [1, 1])


def test_sturmian():
    assert pf.sturmian_word("1/2", n=4) == [0, 1, 0, 1]
    assert pf.is_sturmian_word([0, 1], "1/2")
    assert not pf.is_sturmian_word([1, 1], "1/2")
    assert sorted(pf.enumerate_by_weight(2, 1)) == [[0, 1], [1, 0]]


def test_model():
    m = pf.Model.load(str(DEMO))
    assert len(m.grid) == 34
    assert m.alphabet_size == 4
    assert m.target([2.0]) == pytest.approx(2.125)
    assert m.slope(0.25) == pytest.approx(0.9375, abs=1e-9)
    assert m.lower_pressure([2.0]) == pytest.approx(2.125, abs=1e-12)
    up = m.upper_pressure([2.0], 6)
    assert up >= m.lower_pressure([2.0])
    rows = m.sandwich([[1.5], [2.0]], [4, 6])
    assert len(rows) == 4
    assert all(r["lower"] <= r["upper"] for r in rows)
    assert m.pins("(0,0),(0,1),(0,0)") == [0]
    assert m.phi("(0,0),(0,1),(0,0)", 1) <= 1.0


def test_errors():
    with pytest.raises(pf.ConfigError):
        pf.Model.parse('{"target": {"kind": "closed_form", "name": "demo"}, "bogus": 1}')
    with pytest.raises(pf.Error):
        pf.beta_count("0.5", 3)


def test_cli_csv_roundtrip(tmp_path):
    out = tmp_path / "r.csv"
    code, _, err = pf.run_cli(["pressure", "estimate", "--config", str(DEMO), "--t", "1.5,2,3", "--n", "4,6", "--out", str(out)])
    assert code == 0, err
    table = pf.read_pressure_csv(out)
    assert pf.COLUMNS == tuple(pf.PRESSURE_COLUMNS.split(","))
    assert len(table.rows) == 6
    assert table.manifest["gamma_grid_points"] == "34"
    assert table.rows[0]["t"] == (1.5,)
    for r in table.rows:
        assert r["gap"] == pytest.approx(r["upper"] - r["lower"])


def test_schema_errors(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    with pytest.raises(pf.SchemaError, match="row count 0"):
        pf.read_pressure_csv(empty)
    with pytest.raises(pf.SchemaError, match="row count 0"):
        pf.parse_pressure_csv(",".join(pf.COLUMNS) + "\n")
    with pytest.raises(pf.SchemaError, match="column mismatch"):
        pf.parse_pressure_csv("t,n,upper\n1,2,3\n")
    with pytest.raises(pf.SchemaError):
        pf.parse_pressure_csv(",".join(pf.COLUMNS) + "\n2,4,x,1,1,1,1,0\n")
    budget = pf.parse_pressure_csv(",".join(pf.COLUMNS) + "\n2,12,,2.125,2.125,,0.015625,\n")
    assert math.isnan(budget.rows[0]["upper"])

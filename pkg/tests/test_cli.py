import json

import pytest

from chromlag.cli import run
from chromlag.qseries import QRat, XSeries, q_pochhammer
from chromlag.seeds import FramedSeed, standard_necklace_seed
from chromlag.wavefn import OVTable


def out_json(capsys, argv, code=0):
    assert run(argv) == code
    return json.loads(capsys.readouterr().out)


def test_canoe_preset(capsys):
    data = out_json(capsys, ["wavefunction", "--preset", "canoe", "--g", "1", "--A", "[[1]]", "--order", "6"])
    F = XSeries.from_json(data)
    q = QRat.qpow(1)
    for v in range(7):
        assert F.coefficient((v,)) == QRat.qpow(v * v) / q_pochhammer(v)
    assert F.coefficient((1,)) == q / (1 - q**2)


def test_dt_rejects_negative(capsys):
    assert run(["dt-series", "--adjacency", "[[-1]]"]) == 2
    assert "chromlag" in capsys.readouterr().err


def test_disk_accepts_negative(capsys):
    data = out_json(capsys, ["disk-invariants", "--adjacency", "[[-2]]", "--order", "7"])
    assert [r["n"] for r in data["invariants"]] == [1, 1, 3, 10, 40, 171, 791]


def test_disk_csv(capsys, tmp_path):
    out = tmp_path / "disk.csv"
    assert run(["disk-invariants", "--adjacency", "[[2]]", "--order", "3", "--format", "csv", "--out", str(out)]) == 0
    assert out.read_text().splitlines() == ["d,n", "1,1", "2,-1", "3,1"]


def test_dt_series(capsys):
    data = out_json(capsys, ["dt-series", "--adjacency", "[[1]]", "--order", "4"])
    assert data["invariants"]["rows"] == [{"d": [1], "k": 0, "n": -1}]


def test_bad_order(capsys):
    assert run(["dt-series", "--adjacency", "[[1]]", "--order", "0"]) == 2


def test_mutate_roundtrip(capsys, tmp_path):
    seed_file = tmp_path / "seed.json"
    seed_file.write_text(json.dumps(standard_necklace_seed(1).to_json()))
    path = json.dumps([{"kind": "mutate", "edge": "s1", "sign": 1}, {"kind": "mutate", "edge": "s1", "sign": -1}])
    data = out_json(capsys, ["mutate", "--seed", str(seed_file), "--path", path])
    assert FramedSeed.from_json(data) == standard_necklace_seed(1)


def test_missing_file(capsys):
    assert run(["mutate", "--seed", "/nonexistent/seed.json"]) == 2


def test_wavefunction_from_seed_and_ov(capsys, tmp_path):
    s, _ = standard_necklace_seed(1).mutate("s1", 1)
    F = out_json(capsys, ["wavefunction", "--seed", json.dumps(s.to_json()), "--order", "5"])
    series = tmp_path / "F.json"
    series.write_text(json.dumps(F))
    table = out_json(capsys, ["ov-invariants", "--series", str(series)])
    assert OVTable.from_json(table).entries == {((1,), -1): -1}


def test_ov_csv(capsys):
    assert run(["ov-invariants", "--preset", "canoe", "--A", "[[1]]", "--format", "csv"]) == 0
    assert capsys.readouterr().out.splitlines() == ["d,k,n", "1,0,-1"]


def test_non_algebraic_seed_fails(capsys):
    s, _ = standard_necklace_seed(1).mutate("s1", 1)
    s, _ = s.mutate("s1", 1)
    assert run(["wavefunction", "--seed", json.dumps(s.to_json()), "--order", "3"]) == 1


@pytest.mark.parametrize("preset", ["prism", "aenv", "necklace"])
def test_wavefunction_presets(capsys, preset):
    data = out_json(capsys, ["wavefunction", "--preset", preset, "--order", "3"])
    assert data["terms"][0]["exp"] == [0] * len(data["terms"][0]["exp"])


def test_series_csv(capsys):
    assert run(["wavefunction", "--preset", "canoe", "--order", "2", "--format", "csv"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "exp,num,den" and len(lines) == 4


def test_foam_prism(capsys):
    data = out_json(capsys, ["foam-h1", "--preset", "prism"])
    assert data["rank"] == 2 and data["torsion"] == [] and data["framing_parameter_rank"] == 3


def test_chromatic(capsys):
    data = out_json(capsys, ["chromatic-check", "--preset", "cube", "--samples", "20", "--seed", "5"])
    assert data["ok"] and data["samples"] == 20


def test_verify_identities(capsys):
    data = out_json(capsys, ["verify-identities", "--name", "inversion", "--hbar", "0.8090169943749475+0.5877852522924731i"])
    assert data["ok"] and data["residual"] < 1e-8


def test_bad_complex(capsys):
    assert run(["verify-identities", "--name", "inversion", "--hbar", "not-a-number"]) == 2


def test_golden_subset(capsys):
    assert run(["golden", "--only", "1,3,7,8"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 4 and all(l.startswith("PASS") for l in lines)


def test_unknown_subcommand(capsys):
    assert run(["teleport"]) == 2

import json
from pathlib import Path

import pytest

from kanspec import cli
from kanspec.fincat import FiniteCategory, chain
from kanspec.psh_pointed import PointedSSet
from kanspec.spectra import SequentialSpectrum
from kanspec.stable_psh import StableComplex, StableMapping, isomorphic, sphere

SAMPLES = Path(__file__).resolve().parent.parent / "samples"


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_regress_ckp(capsys):
    code, out, _ = run(capsys, "regress", "ckp")
    assert code == 0
    assert ": 2" in out and ": 1" in out
    assert out.strip().splitlines()[-1] == "PASS"


def test_regress_locsph(capsys):
    code, out, _ = run(capsys, "regress", "locsph")
    assert code == 0 and out.count("PASS") == 41


def test_regress_oplax_weight(capsys):
    code, out, _ = run(capsys, "regress", "oplax-weight", "--max-arrows", "3")
    assert code == 0 and "FAIL" not in out


def test_emit_regulus_count(capsys):
    code, out, err = run(capsys, "emit-regulus", "--kind", "spherical", "--z", "-1..1", "--n", "0..2")
    assert code == 0
    family = json.loads(out)
    assert len(family) == 18
    assert "18 entries" in err


def test_emitted_regulus_re_parses(capsys):
    _, out, _ = run(capsys, "emit-regulus", "--kind", "spherical_horn", "--z", "0", "--n", "1..2")
    for entry in json.loads(out):
        f = StableMapping.from_json(entry["map"])
        assert f.to_json() == entry["map"]


def test_spectrify_fixed_point(capsys):
    code, out, err = run(capsys, "spectrify", "--in", SAMPLES / "omega_spectrum.json")
    assert code == 0 and "fixed point" in err
    E = SequentialSpectrum.from_json(json.loads(out))
    assert E.to_json() == json.loads(out)


def test_spectrify_non_fixed_point(capsys):
    code, _, err = run(capsys, "spectrify", "--in", SAMPLES / "crushed_spectrum.json")
    assert code == 0 and "fixed point" not in err


def test_suspend_and_loop_round_trip(capsys, tmp_path):
    out_file = tmp_path / "s.json"
    code, out, _ = run(capsys, "suspend", "--in", SAMPLES / "ckp_space.json", "--out", out_file)
    assert code == 0 and "PASS" in out
    data = json.loads(out_file.read_text())
    assert PointedSSet.from_json(data).to_json() == data
    code, out, _ = run(capsys, "loop", "--in", out_file)
    assert code == 0
    data = json.loads(out)
    assert PointedSSet.from_json(data).to_json() == data


def test_ksp_kps_round_trip(capsys, tmp_path):
    f = tmp_path / "e.json"
    code, _, _ = run(capsys, "kps", "--in", SAMPLES / "sphere_0_2.json", "--out", f)
    assert code == 0
    code, out, _ = run(capsys, "ksp", "--in", f)
    Z = StableComplex.from_json(json.loads(out))
    assert isomorphic(Z, sphere(0, 2))


def test_kps_rejects_cells(capsys):
    code, out, _ = run(capsys, "kps", "--in", SAMPLES / "stable_cell_0_1.json")
    assert code == 1 and "FAIL input is locally spherical" in out


def test_check_horn(capsys):
    code, out, _ = run(capsys, "check-horn", "--in", SAMPLES / "sphere_0_2.json", "--z", "0", "--n", "0..1", "--unique")
    assert code == 0
    assert out.count("PASS kind=spherical_horn") == 3


def test_check_horn_non_unique(capsys, tmp_path):
    # the empty boundary extends to the 0-sphere in two ways
    p = tmp_path / "s.json"
    p.write_text(json.dumps(sphere(0, 0).to_json()))
    code, out, _ = run(capsys, "check-horn", "--in", p, "--kind", "spherical_boundary", "--z", "0", "--n", "0", "--unique")
    assert code == 1 and "filler counts [2]" in out


def test_segal_on_category(capsys):
    code, out, _ = run(capsys, "segal", "--category", SAMPLES / "chain3.json", "--bound", 3)
    assert code == 0 and "FAIL" not in out


def test_segal_bad_bound(capsys):
    code, _, err = run(capsys, "segal", "--category", SAMPLES / "chain3.json", "--bound", 1)
    assert code == 2 and "bound" in err


def test_limits_counterexample(capsys):
    code, out, _ = run(capsys, "limits", "strict", "--json")
    report = json.loads(out)
    assert code == 0 and report["result"]["objects"] == []
    code, out, _ = run(capsys, "limits", "weighted", "--json")
    assert len(json.loads(out)["result"]["objects"]) == 1
    code, out, _ = run(capsys, "limits", "check-sp")
    assert code == 1 and "not an iso-fibration" in out


def test_limits_output_re_parses(capsys):
    code, out, _ = run(capsys, "limits", "oplax", "--in", SAMPLES / "parallel_pair_counterexample.json")
    assert code == 0
    data = json.loads(out)
    assert FiniteCategory.from_json(data).relabel().to_json() == data


def test_limits_comma(capsys):
    code, out, _ = run(capsys, "limits", "comma", "--count", 5, "--seed", 3)
    assert code == 0 and out.count("PASS instance") == 5


def test_seed_env_override(capsys, monkeypatch):
    monkeypatch.setenv("KANSPEC_SEED", "3")
    _, a, _ = run(capsys, "limits", "comma", "--count", 3, "--seed", 99, "--json")
    monkeypatch.delenv("KANSPEC_SEED")
    _, b, _ = run(capsys, "limits", "comma", "--count", 3, "--seed", 3, "--json")
    assert a == b
    monkeypatch.setenv("KANSPEC_SEED", "x")
    code, _, err = run(capsys, "limits", "comma")
    assert code == 2 and "KANSPEC_SEED" in err


def test_missing_file(capsys):
    code, _, err = run(capsys, "suspend", "--in", "/nonexistent.json")
    assert code == 2 and "/nonexistent.json" in err


def test_malformed_json_is_line_anchored(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{\n  "cells": [\n    oops\n  ]\n}\n')
    code, _, err = run(capsys, "suspend", "--in", p)
    assert code == 2 and f"{p}:3:" in err


def test_schema_error_is_line_anchored(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{\n  "levels": [],\n  "maps": [],\n  "tail_at": 0\n}\n')
    code, _, err = run(capsys, "spectrify", "--in", p)
    assert code == 2 and str(p) in err


def test_unknown_subcommand(capsys):
    code, _, _ = run(capsys, "frobnicate")
    assert code == 2


def test_bad_range(capsys):
    code, _, err = run(capsys, "emit-regulus", "--kind", "spherical", "--z", "a..b", "--n", "0")
    assert code == 2 and "range" in err


def _manifest(tmp_path, body):
    p = tmp_path / "m.json"
    p.write_text(json.dumps(body, indent=2))
    return p


def test_manifest_run(capsys, tmp_path):
    body = {
        "version": "1",
        "entities": [
            {"name": "c3", "type": "category", "data": chain(3).relabel().to_json()},
            {"name": "s", "type": "stable", "data": sphere(0, 1).to_json()},
        ],
        "commands": [
            {"run": "segal", "category": "c3", "bound": 3},
            {"run": "kps", "in": "s"},
            {"run": "regress ckp"},
            {"run": "emit-regulus", "kind": "spherical", "z": "-1..0", "n": "0"},
        ],
    }
    code, out, _ = run(capsys, "run", "--manifest", _manifest(tmp_path, body))
    assert code == 0 and out.count("PASS") >= 5


def test_manifest_reports_failures(capsys, tmp_path):
    body = {"version": "1", "entities": [], "commands": [{"run": "limits check-sp"}]}
    code, out, _ = run(capsys, "run", "--manifest", _manifest(tmp_path, body))
    assert code == 1 and "FAIL limits check-sp" in out


@pytest.mark.parametrize(
    "body,needle",
    [
        ({"version": "2"}, "version"),
        ({"version": "1", "entities": [{"name": "a", "type": "category", "data": {}}] * 2}, "duplicate"),
        ({"version": "1", "entities": [{"name": "a", "type": "blob", "data": {}}]}, "unknown type"),
        ({"version": "1", "commands": [{"run": "kps", "in": "ghost"}]}, "undefined entity"),
    ],
)
def test_manifest_validation(capsys, tmp_path, body, needle):
    code, _, err = run(capsys, "run", "--manifest", _manifest(tmp_path, body))
    assert code == 2 and needle in err


def test_manifest_errors_name_the_line(capsys, tmp_path):
    body = {"version": "1", "commands": [{"run": "kps", "in": "ghost"}]}
    p = _manifest(tmp_path, body)
    line = next(k for k, row in enumerate(p.read_text().splitlines(), 1) if "ghost" in row)
    _, _, err = run(capsys, "run", "--manifest", p)
    assert f"m.json:{line}:" in err


def test_report_json_shape(capsys):
    _, out, _ = run(capsys, "regress", "ckp", "--json")
    report = json.loads(out)
    assert report["tag"] == "ckp-counterexample"
    assert report["result"] == {"naive": 2, "kan": 1}
    assert all(set(c) == {"name", "passed", "detail"} for c in report["checks"])

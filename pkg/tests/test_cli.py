import json
import math

import pytest

from su2fields.cli import main, parse_angle
from su2fields.random_fields import GaussianModel
from su2fields.tables import table_from_csv


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def write_spec(tmp_path, obj, name="spec.json"):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


@pytest.mark.parametrize("text,value", [("0", 0.0), ("pi", math.pi), ("π/2", math.pi / 2), ("-3*pi/4", -0.75 * math.pi), ("2pi", 2 * math.pi), ("1.5", 1.5)])
def test_parse_angle(text, value):
    assert parse_angle(text) == value


def test_wigner_table_trivial(capsys):
    code, out, _ = run(capsys, "wigner-table", "--two-ell", "0", "--euler", "0", "0", "0")
    assert code == 0
    assert out.splitlines() == ["two_ell,two_m,two_s,re,im", "0,0,0,1.0,0.0"]


def test_wigner_table_flip_pattern(capsys):
    code, out, _ = run(capsys, "wigner-table", "--two-ell", "1", "--euler", "0", "pi", "0")
    assert code == 0
    _, D = table_from_csv(out)
    # entries are exact up to the rounding of cos(pi/2)
    assert abs(D[0, 0]) < 1e-16 and abs(D[1, 1]) < 1e-16
    assert D[0, 1] == 1 and D[1, 0] == -1


def test_wigner_table_alpha_beta_json(capsys):
    code, out, _ = run(capsys, "wigner-table", "--two-ell", "1", "--alpha-beta", "1", "0", "--format", "json")
    obj = json.loads(out)
    assert code == 0 and obj["two_ell"] == 1 and len(obj["entries"]) == 4


def test_malformed_angle_names_flag(capsys):
    code = None
    with pytest.raises(SystemExit) as exc:
        main(["wigner-table", "--two-ell", "1", "--euler", "0", "half", "0"])
    code = exc.value.code
    assert code == 2
    assert "--euler" in capsys.readouterr().err


def test_near_zero_alpha_beta(capsys):
    code, _, err = run(capsys, "wigner-table", "--two-ell", "1", "--alpha-beta", "0", "0")
    assert code == 2 and "--alpha-beta" in err


def test_wigner_table_cap(capsys):
    assert run(capsys, "wigner-table", "--two-ell", "65", "--euler", "0", "0", "0")[0] == 3


def test_grid_outputs(capsys):
    code, out, _ = run(capsys, "grid", "--band-limit-doubled", "1")
    assert code == 0 and out.splitlines()[0] == "phi,theta,psi,weight"
    code, out, _ = run(capsys, "grid", "--band-limit-doubled", "1", "--format", "json")
    assert code == 0 and json.loads(out)["columns"] == ["phi", "theta", "psi", "weight"]
    assert run(capsys, "grid", "--band-limit-doubled", "65")[0] == 3


def test_verify_default_passes(capsys, tmp_path):
    out = tmp_path / "verify.csv"
    code, _, _ = run(capsys, "verify", "--out", str(out))
    assert code == 0
    rows = out.read_text().splitlines()
    assert rows[0] == "name,metric,threshold,pass"
    assert all(r.endswith(",1") for r in rows[1:])


def test_verify_tolerance_override_fails(capsys):
    code, out, err = run(capsys, "verify", "--band-limit-doubled", "2", "--tol-override", "unitarity=1e-20")
    assert code == 1
    assert "unitarity" in err
    assert any(r.startswith("unitarity,") and r.endswith(",0") for r in out.splitlines())


def test_verify_unknown_override_key(capsys):
    assert run(capsys, "verify", "--band-limit-doubled", "1", "--tol-override", "nonsense=1")[0] == 2


def test_verify_band_limit_cap(capsys):
    assert run(capsys, "verify", "--band-limit-doubled", "65")[0] == 3


def test_bi_gaussian_correlations_pass(capsys, tmp_path):
    spec = write_spec(tmp_path, {"generator": "gaussian_bi_invariant", "band_limit_doubled": 2, "power_spectrum": [1.0, 0.5, 2.0], "seed": 11})
    code, out, _ = run(capsys, "mc-correlations", "--spec", spec, "--samples", "100000", "--format", "csv")
    assert code == 0
    rows = out.splitlines()
    assert rows[0] == "first,second,kind,est_re,est_im,pred_re,pred_im,stderr,pass"
    assert all(r.endswith(",1") for r in rows[1:])


def test_mc_correlations_single_target(capsys, tmp_path):
    spec = write_spec(tmp_path, {"generator": "rotated", "template": {"delta": [2, 0, 0]}, "side": "bi", "seed": 1, "targets": [[[2, 0, 0], [2, 0, 0]]]})
    assert run(capsys, "mc-correlations", "--spec", spec, "--samples", "2000")[0] == 0


def test_spin_spectra_realization(capsys, tmp_path):
    spec = write_spec(tmp_path, {"generator": "spin_measure", "two_ell": 2, "mu": [0.2, 0.3, 0.5], "seed": 3})
    code, out, _ = run(capsys, "spin-spectra", "--spec", spec, "--samples", "500")
    assert code == 0
    strong = dict(json.loads(out)["strong"]["measures"]["right"])
    for key, mu in ((-2, 0.2), (0, 0.3), (2, 0.5)):
        assert abs(strong[key] - mu) <= 1e-10


@pytest.mark.parametrize("command", ["field-sample", "mc-correlations", "spin-spectra"])
def test_reruns_are_byte_identical(command, capsys, tmp_path):
    spec = write_spec(tmp_path, {"generator": "gaussian_left_invariant", "band_limit_doubled": 1, "K": [[[[1, 0]]], [[[2, 0], [0, 1]], [[0, -1], [1, 0]]]], "seed": 5, "samples": 300})
    first = run(capsys, command, "--spec", spec)
    second = run(capsys, command, "--spec", spec)
    threaded = run(capsys, command, "--spec", spec, "--threads", "3")
    assert first[0] == 0 and first[1] == second[1] == threaded[1]
    other = run(capsys, command, "--spec", spec, "--seed", "6")
    assert other[1] != first[1]


@pytest.mark.parametrize(
    "obj",
    [
        {"generator": "isotropic", "band_limit_doubled": 1},
        {"generator": "gaussian_bi_invariant", "band_limit_doubled": 1, "power_spectrum": [1.0]},
        {"generator": "gaussian_left_invariant", "band_limit_doubled": 1, "K": [[[1]], [[1, 2], [2, 1]]]},
        {"generator": "rotated", "template": {"delta": [2, 1, 0]}},
        {"generator": "spin_measure", "two_ell": 2, "mu": [0.5, 0.6, 0.0]},
        {"generator": "gaussian_bi_invariant", "band_limit_doubled": 66, "power_spectrum": [1.0] * 67},
    ],
)
def test_invalid_spec_exit_code(obj, capsys, tmp_path):
    spec = write_spec(tmp_path, obj)
    assert run(capsys, "field-sample", "--spec", spec)[0] == 4


def test_missing_spec_file(capsys, tmp_path):
    assert run(capsys, "field-sample", "--spec", str(tmp_path / "absent.json"))[0] == 4


def test_field_sample_csv(capsys, tmp_path):
    spec = write_spec(tmp_path, {"generator": "gaussian_bi_invariant", "band_limit_doubled": 1, "power_spectrum": [1, 1]})
    code, out, _ = run(capsys, "field-sample", "--spec", spec, "--samples", "2", "--format", "csv")
    rows = out.splitlines()
    assert code == 0 and rows[0] == "sample,two_ell,two_m,two_s,re,im" and len(rows) == 1 + 2 * 5


def test_mc_correlations_flags_mismatch(capsys, tmp_path, monkeypatch):
    monkeypatch.setattr(GaussianModel, "predict", lambda self, a, b: (2.0, 0.0))
    spec = write_spec(tmp_path, {"generator": "gaussian_bi_invariant", "band_limit_doubled": 0, "power_spectrum": [1.0]})
    code, out, err = run(capsys, "mc-correlations", "--spec", spec, "--samples", "1000", "--format", "csv")
    assert code == 1 and "outside" in err
    assert out.splitlines()[1].endswith(",0")

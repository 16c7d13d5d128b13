import csv
import io
import json
import math
import subprocess
import sys

import pytest

from weylcap.bounds import depolarizing_capacity
from weylcap.cli import main
from weylcap.experiments import FIELDNAMES


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    return json.loads(out)


def test_bounds_depolarizing(capsys):
    out = run_json(capsys, "bounds", '{"d":3,"kind":"depolarizing","mu":0.5}')
    assert out["coincide"] is True
    assert out["exact_capacity"] == pytest.approx(depolarizing_capacity(3, 0.5), abs=1e-12)
    assert out["witness_n"] is not None


def test_bounds_noiseless_qubit(capsys):
    out = run_json(capsys, "bounds", '{"d":2,"p":[1,0,0,0]}')
    assert out["chi_lb"] == pytest.approx(1.0) and out["chi_ub"] == pytest.approx(1.0)


def test_bounds_upper_bound_example(capsys):
    out = run_json(capsys, "bounds", '{"d":2,"p":[0.5,0.3,0.15,0.05]}', "--json")
    assert out["chi_ub"] == pytest.approx(0.27807190511263774, abs=1e-12)


def test_bounds_from_file_and_stdin(capsys, tmp_path, monkeypatch):
    spec = tmp_path / "ch.json"
    spec.write_text('{"d":2,"p":[0.4,0.3,0.2,0.1]}')
    a = run_json(capsys, "bounds", str(spec))
    monkeypatch.setattr(sys, "stdin", io.StringIO(spec.read_text()))
    b = run_json(capsys, "bounds", "-")
    assert a == b


def test_bounds_with_oracle(capsys):
    out = run_json(capsys, "bounds", '{"d":2,"p":[0.4,0.3,0.2,0.1]}', "--oracle", "--restarts", "2")
    assert out["chi_opt"] == pytest.approx(out["chi_lb"], abs=1e-6)
    assert "oracle_converged" in out


@pytest.mark.parametrize(
    "spec, code",
    [
        ("{not json", 2),
        ('{"p":[1,0,0,0]}', 2),
        ('{"d":2,"kind":"nope"}', 2),
        ("/no/such/file.json", 2),
        ('{"d":2,"p":[0.5,0.5,0.5,0.5]}', 3),
        ('{"d":2,"p":[1,0,0]}', 3),
        ('{"d":3,"kind":"depolarizing","mu":1.5}', 3),
    ],
)
def test_bounds_exit_codes(capsys, spec, code):
    got, _, err = run(capsys, "bounds", spec)
    assert got == code
    assert err.startswith("weylcap:")


def _read_csv(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_sweep_qubit_all_coincide(capsys):
    code, out, _ = run(capsys, "sweep", "--d", "2", "--count", "100", "--no-oracle")
    assert code == 0
    rows = _read_csv(out)
    assert len(rows) == 100
    assert all(r["coincide"] == "true" for r in rows)
    ub = [float(r["chi_ub"]) for r in rows]
    assert ub == sorted(ub, reverse=True)


def test_sweep_header_and_invariants(capsys):
    code, out, _ = run(capsys, "sweep", "--d", "3", "--count", "6", "--restarts", "1", "--timing")
    assert code == 0
    assert out.splitlines()[0] == ",".join(FIELDNAMES)
    assert out.endswith("\r\n")
    for r in _read_csv(out):
        lb, ub, opt = float(r["chi_lb"]), float(r["chi_ub"]), float(r["chi_opt"])
        assert lb <= ub + 1e-9
        for x in (lb, ub, opt):
            assert 0 <= x <= math.log2(3) + 1e-12
        assert float(r["lb_runtime_seconds"]) > 0


def test_sweep_is_byte_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        assert main(["sweep", "--d", "3", "--count", "40", "--seed", "7", "--no-oracle", "--out", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert a.read_bytes().count(b"\r\n") == 41


def test_sweep_normalize(capsys):
    _, raw, _ = run(capsys, "sweep", "--d", "4", "--count", "10", "--no-oracle")
    _, norm, _ = run(capsys, "sweep", "--d", "4", "--count", "10", "--no-oracle", "--normalize")
    for r, n in zip(_read_csv(raw), _read_csv(norm)):
        assert float(n["chi_ub"]) == pytest.approx(float(r["chi_ub"]) / 2)
        assert 0 <= float(n["chi_lb"]) <= float(n["chi_ub"]) + 1e-9 <= 1 + 1e-12
        assert n["chi_opt"] == ""


def test_sweep_unwritable_path(capsys, tmp_path):
    code, _, err = run(capsys, "sweep", "--d", "2", "--count", "1", "--out", str(tmp_path / "no" / "x.csv"))
    assert code == 4 and "cannot write" in err


def test_sweep_bad_count(capsys):
    assert run(capsys, "sweep", "--d", "2", "--count", "0")[0] == 2


def test_special_depolarizing_noiseless(capsys):
    out = run_json(capsys, "special", "depolarizing", "--d", "3", "--mu", "0")
    for key in ("analytic", "chi_lb", "chi_ub"):
        assert out[key] == pytest.approx(math.log2(3), abs=1e-12)


def test_special_depol_like_one(capsys):
    out = run_json(capsys, "special", "depol-like-1", "--d", "3", "--xi", "0.3", "--idx", "1,2")
    assert out["analytic"] == pytest.approx(depolarizing_capacity(3, 0.3), abs=1e-12)
    assert out["abs_diff_lb"] < 1e-9 and out["abs_diff_ub"] < 1e-9
    assert out["params"]["idx"] == [1, 2]


def test_special_depol_like_two(capsys):
    out = run_json(capsys, "special", "depol-like-2", "--d", "2", "--eta", "0.8", "--kappa", "0.9")
    assert out["coincide"] is True
    assert out["chi_lb"] == pytest.approx(out["chi_ub"], abs=1e-12)
    assert out["abs_diff_lb"] < 1e-9


@pytest.mark.parametrize(
    "argv, code",
    [
        (["special", "depol-like-2", "--d", "3", "--eta", "0.2", "--kappa", "0.3"], 3),
        (["special", "depolarizing", "--d", "3"], 2),
        (["special", "depol-like-2", "--d", "3", "--eta", "0.8", "--kappa", "0.9", "--idx", "1,0", "--idx-b", "1,0"], 3),
    ],
)
def test_special_errors(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_eig_distinct(capsys):
    out = run_json(capsys, "eig", "3", "1", "--d", "4", "--json")
    assert out["order"] == 4 and not out["degenerate"]
    vals = {(round(a, 9), round(b, 9)) for a, b in out["eigenvalues"]}
    assert len(vals) == 4
    assert out["residual"] < 1e-12


def test_eig_identity(capsys):
    out = run_json(capsys, "eig", "0", "0", "--d", "5", "--json")
    for a, b in out["eigenvalues"]:
        assert a == pytest.approx(1.0) and b == pytest.approx(0.0, abs=1e-15)


def test_eig_degenerate(capsys):
    out = run_json(capsys, "eig", "0", "2", "--d", "4", "--json")
    assert out["order"] == 2 and out["degenerate"]
    assert sorted(round(a, 9) for a, _ in out["eigenvalues"]) == [-1, -1, 1, 1]


def test_eig_text_output(capsys):
    code, out, _ = run(capsys, "eig", "1", "1", "--d", "2")
    assert code == 0
    assert "order l=2" in out and "max |W v - lambda v|" in out


def test_eig_bad_index(capsys):
    assert run(capsys, "eig", "5", "0", "--d", "3")[0] == 2
    assert run(capsys, "eig", "0", "0", "--d", "1")[0] == 2


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["sweep"])
    assert exc.value.code == 2


def test_verify_passes(capsys):
    code, out, _ = run(capsys, "verify", "--count", "5")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 10 and all(line.startswith("PASS") for line in lines)


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "weylcap", "bounds", '{"d":2,"p":[1,0,0,0]}'],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["chi_lb"] == pytest.approx(1.0)

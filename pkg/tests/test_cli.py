import json
import subprocess
import sys
from fractions import Fraction

import pytest

from etaforge.cli import main
from etaforge.characters import char_from_spec, principal
from etaforge.decompose import sturm_bound
from etaforge.eta import EtaQuotientExpr, eta_chi_series, expand_quotient
from etaforge.exactfield import CycNum
from etaforge.qseries import QSeries, series_int_pow

one = principal(1)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--json")
    return code, json.loads(out)


def test_expand_eta(capsys):
    code, data = run_json(capsys, "expand", "eta", "--prec", "10")
    assert code == 0
    s = QSeries.from_json(data)
    assert s.leading_exponent == Fraction(1, 24)
    assert [s[n] for n in range(10)] == [1, -1, -1, 0, 0, 1, 0, 1, 0, 0]


def test_expand_eta_chi(capsys):
    code, data = run_json(capsys, "expand", "eta-chi", "--char", "kronecker:3", "--prec", "5")
    s = QSeries.from_json(data)
    assert s[0] == 1 and s[1] == -CycNum.zeta(3) + CycNum.zeta(3, 2)


def test_expand_e2_and_e2t(capsys):
    _, data = run_json(capsys, "expand", "e2", "--psi", "one:1", "--phi", "one:1", "--prec", "4")
    s = QSeries.from_json(data)
    assert [s[n] for n in range(4)] == [Fraction(-1, 12), 2, 6, 8]
    _, data = run_json(capsys, "expand", "e2t", "--t", "2", "--prec", "4")
    s = QSeries.from_json(data)
    assert [s[n] for n in range(4)] == [Fraction(1, 12), 2, 2, 8]


def test_expand_quotient_file(capsys, tmp_path):
    e = EtaQuotientExpr({(1, one): 24})
    path = tmp_path / "delta.json"
    path.write_text(json.dumps(e.to_json()))
    _, data = run_json(capsys, "expand", "quotient", "--quotient", str(path), "--prec", "5")
    s = QSeries.from_json(data)
    assert [s[n] for n in range(5)] == [1, -24, 252, -1472, 4830]


def test_default_precision_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("ETAFORGE_PREC_DEFAULT", "7")
    _, data = run_json(capsys, "expand", "eta")
    assert QSeries.from_json(data).precision == 7
    monkeypatch.setenv("ETAFORGE_PREC_DEFAULT", "seven")
    code, _, err = run(capsys, "expand", "eta")
    assert code == 2 and "ETAFORGE_PREC_DEFAULT" in err


def test_orders(capsys):
    code, data = run_json(capsys, "orders", "--char", "kronecker:3")
    assert code == 0 and data["level"] == 9
    assert [(c["cusp"], c["order"]) for c in data["cusps"]] == [("1/0", 0), ("0/1", 0), ("1/3", 3), ("2/3", -3)]
    _, data = run_json(capsys, "orders", "--char", "psi4")
    got = {c["cusp"]: c["order"] for c in data["cusps"]}
    assert got["1/4"] == 8 and got["3/4"] == -8
    _, data = run_json(capsys, "orders", "--char", "kronecker:5")
    assert {c["cusp"]: c["order"] for c in data["cusps"]}["2/5"] == -25
    code, out, _ = run(capsys, "orders", "--char", "kronecker:3")
    assert "1/3" in out and "Q = 9" in out


def test_error_exit_codes(capsys, tmp_path):
    assert run(capsys, "orders", "--char", "chi5:1")[0] == 6
    assert run(capsys, "orders", "--char", "one:6")[0] == 5
    assert run(capsys, "expand", "eta-chi", "--char", "kronecker:9")[0] == 3
    assert run(capsys, "expand", "eta-chi")[0] == 2
    assert run(capsys, "decompose", "--level", "9", "--series", str(tmp_path / "missing.json"))[0] == 4
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "decompose", "--level", "9", "--series", str(bad))[0] == 4
    short = tmp_path / "short.json"
    short.write_text(json.dumps(QSeries.one(5).to_json()))
    assert run(capsys, "decompose", "--level", "9", "--series", str(short))[0] == 5
    assert run(capsys, "multiplier", "--char", "kronecker:3", "--gamma=1,0,90,1")[0] == 7
    assert run(capsys, "multiplier", "--char", "kronecker:3", "--gamma", "1,1,1,1")[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["expand", "nothing"])
    assert exc.value.code == 2


def test_help_lists_exit_codes(capsys):
    with pytest.raises(SystemExit):
        main(["--help"])
    out = capsys.readouterr().out
    for code in range(8):
        assert f"  {code} " in out
    assert "ETAFORGE_PREC_DEFAULT" in out


def test_decompose_quotient_and_series(capsys, tmp_path):
    e = EtaQuotientExpr({(2, one): 24, (1, one): -24})
    qpath = tmp_path / "q.json"
    qpath.write_text(json.dumps(e.to_json()))
    code, data = run_json(capsys, "decompose", "--level", "2", "--quotient", str(qpath))
    assert code == 0 and data["certified"]
    assert {(x["t"], x["exp"]) for x in data["exponents"]} == {(1, "-24/1"), (2, "24/1")}

    P = sturm_bound(9) + 10
    f = series_int_pow(eta_chi_series(char_from_spec("kronecker:3"), P), 12)
    spath = tmp_path / "f.json"
    spath.write_text(json.dumps(f.to_json()))
    code, data = run_json(capsys, "decompose", "--level", "9", "--series", str(spath))
    assert code == 0
    assert data["exponents"] == [{"t": 1, "char": "kronecker:3", "exp": "12/1"}]


def test_decompose_exit_one_when_not_certified(capsys, tmp_path):
    e = EtaQuotientExpr({(1, one): 4, (2, one): -2})
    qpath = tmp_path / "q.json"
    qpath.write_text(json.dumps(e.to_json()))
    code, data = run_json(capsys, "decompose", "--level", "2", "--quotient", str(qpath))
    assert code == 1 and not data["certified"]


def test_decompose_unsupported_level(capsys, tmp_path):
    e = EtaQuotientExpr({(1, one): 6, (2, one): -6, (3, one): 2, (36, one): -2})
    qpath = tmp_path / "q.json"
    qpath.write_text(json.dumps(e.to_json()))
    code, data = run_json(capsys, "decompose", "--level", "36", "--quotient", str(qpath))
    assert data["level_class"] == "Unsupported"
    assert code == (0 if data["certified"] else 1)


def test_verify_suite(capsys):
    code, data = run_json(capsys, "verify", "lemma2")
    assert code == 0 and data["passed"]
    code, out, _ = run(capsys, "verify", "valence")
    assert code == 0 and "valence: PASS" in out


def test_multiplier_fixture(capsys):
    code, data = run_json(capsys, "multiplier", "--char", "kronecker:3", "--fixture", "9")
    assert code == 0


def test_multiplier_single_matrix(capsys):
    code, data = run_json(capsys, "multiplier", "--char", "kronecker:3", "--gamma", "1,0,9,1", "--tau=-0.1111111111111111,0.3333333333333333")
    assert code == 0


def test_output_file(capsys, tmp_path):
    out = tmp_path / "o.json"
    code, text, _ = run(capsys, "expand", "eta", "--prec", "4", "--json", "--output", str(out))
    assert code == 0
    assert QSeries.from_json(json.loads(out.read_text())).precision == 4


def test_json_output_is_byte_identical():
    cmd = [sys.executable, "-m", "etaforge", "multiplier", "--char", "kronecker:3", "--gamma", "1,0,9,1", "--json"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and a
    cmd = [sys.executable, "-m", "etaforge", "orders", "--char", "psi4", "--json"]
    assert subprocess.run(cmd, capture_output=True).stdout == subprocess.run(cmd, capture_output=True).stdout

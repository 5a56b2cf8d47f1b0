import csv
import io
import json

import pytest

from emeasure.cli import COMMANDS, RunConfig, main, run


def invoke(*argv):
    out, err = io.StringIO(), io.StringIO()
    from emeasure.cli import build_parser, config_from_args
    cfg = config_from_args(build_parser().parse_args(list(argv)))
    code = run(cfg, out, err)
    return code, out.getvalue(), err.getvalue()


def test_kappa_table_csv():
    code, out, _ = invoke("kappa-table", "--m-max", "14", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 13
    assert list(rows[0]) == ["m", "kappa_lower", "paper_value", "margin"]
    assert [r["paper_value"] for r in rows][:3] == ["0", "0.215544", "0.173121"]
    assert all(float(r["margin"]) >= -1e-6 for r in rows)


def test_omega_text():
    code, out, _ = invoke("omega", "--m", "2", "--loglogH", "4")
    assert code == 0
    assert "omega=3.2325 ±" in out


def test_det():
    code, out, _ = invoke("det", "--m", "1", "--l", "2", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert doc[0]["exponent"] == 4 and doc[0]["leading_coefficient"] != "0"


def test_precondition_exit_code():
    code, _, err = invoke("bound", "--m", "2", "--logH", "30")
    assert code == 2
    assert "v n1 log n1" in err
    assert invoke("omega", "--m", "2")[0] == 2
    assert invoke("qr-check", "--m", "4", "--l", "2181")[0] == 2
    assert invoke("omega", "--m", "2", "--loglogH", "4.0.1")[0] == 2


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as exc:
        main(["nonsense"])
    assert exc.value.code == 2


@pytest.mark.parametrize("argv", [
    ("fm-table", "--format", "json"),
    ("kappa", "--m", "7", "--format", "json"),
    ("factor", "--m", "5", "--l", "6", "--format", "json"),
    ("sparse", "--m1", "1", "--m2", "4", "--loglogH", "20", "--format", "json"),
    ("power", "--d", "6", "--m", "2", "--loglogH", "200", "--format", "json"),
    ("verify", "--lambda=-19,7,0", "--logH", "45", "--format", "json"),
    ("search", "--m", "1", "--box", "10", "--format", "json"),
    ("qr-check", "--m", "2", "--l", "16", "--format", "json"),
    ("bound", "--m", "3", "--logH", "200", "--corollary", "--format", "json"),
    ("approx", "--m", "2", "--l", "3", "--format", "json"),
])
def test_json_round_trip_and_determinism(argv):
    code, a, _ = invoke(*argv)
    assert code == 0
    _, b, _ = invoke(*argv)
    assert a == b
    doc = json.loads(a)
    assert json.loads(json.dumps(doc)) == doc


def test_search_output():
    code, out, _ = invoke("search", "--m", "1", "--box", "10", "--format", "json")
    assert json.loads(out)[0]["lambda"] == ["-19", "7"]


def test_kappa_limit_output():
    code, out, _ = invoke("kappa", "--limit", "--format", "json")
    assert json.loads(out)[0]["value"].startswith("0.75536661083")


def test_config_validation():
    with pytest.raises(Exception):
        RunConfig("bogus")
    with pytest.raises(Exception):
        RunConfig("omega", {}, precision_bits=8)
    assert len(COMMANDS) == 13


def test_main_entry(capsys):
    assert main(["omega", "--m", "3", "--loglogH", "10"]) == 0
    assert "omega=3.649 ±" in capsys.readouterr().out

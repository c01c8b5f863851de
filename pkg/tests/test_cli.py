import json

import pytest
from click.testing import CliRunner

from drinfeld_traces.cli import main, parse_range


def run(*args):
    return CliRunner().invoke(main, [str(a) for a in args])


def test_trace_examples():
    assert run("trace", "--q", 3, "--prime", "T", "--n", 1, "--k", 12, "--l", 1).output \
        == "T^2+1  [deg1_closed]\n"
    assert run("trace", "--q", 2, "--k", 177).output.startswith("T^80+T^64+T^48+T^16+1")
    assert run("trace", "--q", 3, "--k", 2).output.startswith("0")


def test_trace_json_and_unscaled():
    res = run("trace", "--q", 3, "--k", 12, "--format", "json")
    data = json.loads(res.output)
    assert data["trace"] == "T^2+1" and data["modulus"] == "x"
    assert data["coeffs"] == [[2, "1"], [0, "1"]]
    res = run("trace", "--q", 3, "--k", 12, "--unscaled", "--format", "json")
    assert json.loads(res.output)["trace"] == "T^3+T"


def test_extension_field_header():
    res = run("trace", "--q", 9, "--k", 18, "--l", 1)
    assert res.output.splitlines()[0] == "# F_9 = F_3[x]/(x^2+1)"
    res = run("trace", "--p", 3, "--r", 2, "--modulus", "x^2+x+2", "--k", 18, "--format", "json")
    assert json.loads(res.output)["modulus"] == "x^2+x+2"


def test_exit_codes():
    assert run("trace", "--q", 6, "--k", 10).exit_code == 2
    assert run("trace", "--q", 3, "--prime", "T^2", "--k", 10).exit_code == 2
    assert run("trace", "--q", 3, "--k", 10, "--n", 7).exit_code == 3
    assert run("trace", "--q", 3).exit_code == 2
    res = run("spectrum", "--q", 3, "--k", 40)
    assert res.exit_code == 4 and "fallback" in res.output
    assert run("spectrum", "--q", 3, "--k", 40, "--fallback", "--cap", 10).exit_code == 0
    assert run("trace", "--q", 3, "--k", 10, "--p", 3, "--modulus", "x^2+x").exit_code == 2


def test_error_message_is_one_line():
    res = run("trace", "--q", 3, "--k", 10, "--n", 7)
    assert res.output.count("\n") == 1 and res.output.startswith("error:")


def test_table_empty_range():
    res = run("table", "--qs", "3,5", "--k-range", "10:4")
    assert res.output == "k,q=3,q=5\n"


def test_table_matches_library():
    from drinfeld_traces import PolyA, TraceQuery, field_for_q, format_poly, trace_general
    res = run("table", "--qs", "3", "--l", 0, "--k-range", "8:20:2")
    lines = res.output.splitlines()
    assert lines[0] == "k,q=3"
    F = field_for_q(3)
    for line in lines[1:]:
        k, val = line.split(",")
        r = trace_general(TraceQuery(PolyA.parse(F, "T"), 1, int(k), 0))
        assert val == format_poly(r.value, compact=True)


def test_jobs_do_not_change_output():
    args = ["table", "--qs", "3,5", "--k-range", "4:40:2"]
    assert run(*args, "--jobs", 2).output == run(*args, "--jobs", 1).output


def test_iso_counts():
    assert run("iso", "--q", 3, "--a", 1, "--b", 1).output.strip().endswith("1")
    assert run("iso", "--q", 3, "--a", "T", "--b", 1).output.strip().endswith("0")


def test_census_csv():
    res = run("census", "--q", 3, "--n", 2)
    lines = res.output.splitlines()
    assert lines[0] == "a,b,case,count_mod_p"
    assert any(line.split(",")[2] == "4" for line in lines[1:])
    data = json.loads(run("census", "--q", 3, "--format", "json").output)
    assert {"q", "modulus", "prime", "n", "rows"} <= set(data)


def test_spectrum_slopes():
    data = json.loads(run("spectrum", "--q", 3, "--k", 16, "--l", 0).output)
    assert "slopes" in data
    res = run("slopes", "--q", 3, "--k", 16, "--l", 0, "--format", "csv")
    assert res.exit_code == 0 and res.output.count("\n") >= 2


def test_figure_csv():
    res = run("figure", "--q", 5, "--l", 3, "--k-range", "20:30")
    assert res.exit_code == 0
    assert res.output.splitlines()[0].count(",") >= 1


def test_parse_range():
    assert parse_range("4:10:2") == [4, 6, 8, 10]
    assert parse_range("3,7") == [3, 7]
    assert parse_range("5:4") == []
    with pytest.raises(ValueError):
        parse_range("a:b")

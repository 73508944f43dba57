import json
import math
from fractions import Fraction

import pytest

from jack_measures.cli import main
from jack_measures.jack import PartitionSum


def table_lines(out):
    return [line for line in out.splitlines() if line and not line.startswith("#")]


def json_output(out):
    return json.loads(out)


@pytest.fixture
def golden_file(tmp_path):
    def _golden_file(content):
        path = tmp_path / "golden.json"
        path.write_text(content, encoding="utf-8")
        return str(path)

    return _golden_file


def test_enumerate_single_length(capfd):
    assert main.run(["enumerate", "--lengths", "2"]) == main.EXIT_OK
    out, _ = capfd.readouterr()
    assert table_lines(out) == ["q,m,re,im", "0,0,1,0"]
    assert '# command: "enumerate"' in out


def test_enumerate_length_four(capfd):
    assert main.run(["enumerate", "--lengths", "4", "--table", "Y"]) == main.EXIT_OK
    out, _ = capfd.readouterr()
    assert table_lines(out) == ["q,m,re,im", "0,0,2,0", "0,2,1,0", "1,0,1,0"]


def test_enumerate_paths_json(capfd):
    assert main.run(["enumerate", "--lengths", "2", "2", "--table", "paths", "--format", "json"]) == main.EXIT_OK
    result = json_output(capfd.readouterr()[0])
    assert result["metadata"]["lengths"] == [2, 2]
    assert result["metadata"]["mode"] == "exact"
    weights = {}
    for row in result["data"]:
        key = (row["q"], row["m"])
        weights[key] = weights.get(key, 0) + int(row["re"])
    # E[T_2²] = 1 + ℏ for Plancherel
    assert weights == {(0, 0): 1, (1, 0): 1}


def test_enumerate_counts(capfd):
    assert main.run(["enumerate", "--lengths", "2", "--table", "C"]) == main.EXIT_OK
    out, _ = capfd.readouterr()
    assert table_lines(out)[0] == "q,m,mu_minus,mu_plus,count"
    assert "0,0,1,1,1" in table_lines(out)


def test_moments_routes_agree(capfd):
    arguments = ["moments", "--lengths", "2", "2", "--degree-cutoff", "4", "--format", "json"]
    assert main.run(arguments) == main.EXIT_OK
    rows = {row["route"]: row for row in json_output(capfd.readouterr()[0])["data"]}
    assert rows["paths"]["re"] == "2"
    assert rows["operator-displaced"]["re"] == "2"
    assert rows["operator-displaced"]["agrees"] is True
    assert rows["partition-sum"]["cutoff"] == 4
    assert rows["partition-sum"]["agrees"] is True


def test_moments_truncated(capfd):
    arguments = ["moments", "--lengths", "2", "--method", "truncated", "--degree-cutoff", "12", "--mode", "numeric"]
    assert main.run(arguments + ["--format", "json"]) == main.EXIT_OK
    rows = {row["route"]: row for row in json_output(capfd.readouterr()[0])["data"]}
    assert rows["operator-truncated"]["cutoff"] == 12
    assert "partition-sum" not in rows


def test_exact_mode_with_irrational_alpha(capfd):
    arguments = ["enumerate", "--lengths", "3", "3", "--ebar=-1", "--hbar", "1/2", "--format", "json"]
    assert main.run(arguments) == main.EXIT_OK
    result = json_output(capfd.readouterr()[0])
    meta = result["metadata"]
    assert (meta["mode"], meta["ebar"], meta["hbar"]) == ("exact", "-1", "1/2")
    assert all(isinstance(row["re"], str) for row in result["data"])
    expected = sum(Fraction(row["re"]) * Fraction(1, 2) ** row["q"] * (-1) ** row["m"] for row in result["data"])
    assert meta["value"] == [str(expected), "0"]
    assert meta["value"] == ["3/2", "0"]


@pytest.mark.parametrize(
    "arguments",
    [["--lengths", "2", "2", "--ebar=-1", "--hbar", "1/2"], ["--lengths", "4"], ["--lengths", "3", "--ebar", "1"]],
)
def test_moments_partition_sum_within_tail_bound(arguments, capfd):
    assert main.run(["moments", *arguments, "--degree-cutoff", "10", "--format", "json"]) == main.EXIT_OK
    result = json_output(capfd.readouterr()[0])
    rows = {row["route"]: row for row in result["data"]}
    assert isinstance(rows["paths"]["re"], str)
    summed = rows["partition-sum"]
    assert summed["agrees"] is True
    assert abs(Fraction(rows["paths"]["re"]) - Fraction(summed["re"])) <= summed["tail"]
    assert result["metadata"]["numeric_routes"] == ["partition-sum"]
    assert 0 < result["metadata"]["missing_mass"] < 1e-3


def test_moments_flags_partition_sum_outside_tail_bound(monkeypatch, caplog, capfd):
    summed = PartitionSum(value=0j, cutoff=4, missing_mass=0.0, tail_bound=0.0)
    monkeypatch.setattr(main, "partition_sum_moments", lambda *args: summed)
    arguments = ["moments", "--lengths", "2", "2", "--degree-cutoff", "4", "--format", "json"]
    assert main.run(arguments) == main.EXIT_OK
    rows = {row["route"]: row for row in json_output(capfd.readouterr()[0])["data"]}
    assert rows["partition-sum"]["agrees"] is False
    assert "more than its tail bound" in caplog.text


def test_limit_shape_convex(capfd):
    arguments = ["limit-shape", "--grid-min", "-3", "--grid-max", "3", "--grid-points", "3", "--format", "json"]
    assert main.run(arguments) == main.EXIT_OK
    data = json_output(capfd.readouterr()[0])["data"]
    assert [row["c"] for row in data] == [-3.0, 0.0, 3.0]
    assert data[1]["profile"] == pytest.approx(4 / math.pi, abs=1e-8)
    assert data[1]["closed_form"] == pytest.approx(4 / math.pi)


def test_limit_shape_dispersive(capfd):
    arguments = ["limit-shape", "--kind", "dispersive", "--ebar", "-1", "--matrix-size", "80", "--format", "json"]
    assert main.run(arguments) == main.EXIT_OK
    result = json_output(capfd.readouterr()[0])
    assert result["metadata"]["regime"] == "dispersive"
    assert result["metadata"]["M"] == 80
    assert all(row["gap"] == "" or row["gap"] >= 0 for row in result["data"])


def test_fluctuations_chebyshev(capfd):
    arguments = ["fluctuations", "--table", "chebyshev", "--p", "3", "--threads", "1", "--format", "json"]
    assert main.run(arguments) == main.EXIT_OK
    for row in json_output(capfd.readouterr()[0])["data"]:
        expected = 1 / row["k1"] if row["k1"] == row["k2"] else 0.0
        assert row["covariance"] == pytest.approx(expected, abs=1e-10)


def test_fluctuations_threads_keep_order(capfd):
    arguments = ["fluctuations", "--p", "3", "--covariance-method", "bd", "--format", "json"]
    assert main.run(arguments + ["--threads", "1"]) == main.EXIT_OK
    sequential = json_output(capfd.readouterr()[0])["data"]
    assert main.run(arguments + ["--threads", "4"]) == main.EXIT_OK
    parallel = json_output(capfd.readouterr()[0])["data"]
    assert [(row["p1"], row["p2"]) for row in sequential] == [(row["p1"], row["p2"]) for row in parallel]
    assert sequential[3]["covariance"] == pytest.approx(4.0)


def test_fluctuations_mean_shift(capfd):
    assert main.run(["fluctuations", "--table", "mean-shift", "--p", "5", "--format", "json"]) == main.EXIT_OK
    data = json_output(capfd.readouterr()[0])["data"]
    assert data[3]["closed_form"] == 3
    assert data[5]["paths"] == pytest.approx(25.0)


def test_quadrature_covariance_needs_zero_ebar(capfd):
    arguments = ["fluctuations", "--covariance-method", "bd", "--ebar=-1/2"]
    assert main.run(arguments) == main.EXIT_USAGE
    _, err = capfd.readouterr()
    assert "jack-measures: error:" in err


def test_sample_is_reproducible(monkeypatch, capfd):
    arguments = ["sample", "--degree-cutoff", "6", "--count", "50", "--hbar", "2"]
    assert main.run(arguments + ["--seed", "5"]) == main.EXIT_OK
    first, _ = capfd.readouterr()
    monkeypatch.setenv("JACK_MEASURES_SEED", "5")
    assert main.run(arguments) == main.EXIT_OK
    second, _ = capfd.readouterr()
    assert first == second
    assert len(table_lines(first)) == 51


def test_sample_tail_threshold(capfd):
    assert main.run(["sample", "--degree-cutoff", "1", "--count", "5"]) == main.EXIT_USAGE
    _, err = capfd.readouterr()
    assert "increase the degree cutoff" in err


def test_mode_from_environment(monkeypatch, capfd):
    monkeypatch.setenv("JACK_MEASURES_MODE", "numeric")
    assert main.run(["enumerate", "--lengths", "2", "--format", "json"]) == main.EXIT_OK
    assert json_output(capfd.readouterr()[0])["metadata"]["mode"] == "numeric"


def test_jack_basis(capfd):
    arguments = ["jack-basis", "--degree", "2", "--alpha", "2", "--hbar", "2", "--format", "json"]
    assert main.run(arguments) == main.EXIT_OK
    result = json_output(capfd.readouterr()[0])
    assert [row["partition"] for row in result["data"]] == [[2], [1, 1]]
    assert result["metadata"]["alpha"] == "2"


def test_missing_specialization(tmp_path, capfd):
    path = str(tmp_path / "absent.json")
    assert main.run(["enumerate", "--lengths", "2", "--spec", path]) == main.EXIT_USAGE
    _, err = capfd.readouterr()
    assert path in err


def test_output_file(tmp_path, capfd):
    path = tmp_path / "table.csv"
    assert main.run(["enumerate", "--lengths", "2", "-o", str(path)]) == main.EXIT_OK
    assert table_lines(path.read_text(encoding="utf-8")) == ["q,m,re,im", "0,0,1,0"]
    assert capfd.readouterr()[0] == ""


def test_alpha_excludes_ebar(capfd):
    with pytest.raises(SystemExit) as excinfo:
        main.run(["enumerate", "--lengths", "2", "--alpha", "2", "--ebar", "1"])
    assert excinfo.value.code == 2
    _, err = capfd.readouterr()
    assert "not allowed with argument --ebar" in err


@pytest.mark.parametrize("arguments", [["enumerate"], ["enumerate", "--lengths", "0"], ["moments", "--lengths", "x"]])
def test_invalid_arguments(arguments):
    with pytest.raises(SystemExit) as excinfo:
        main.parse_arguments(arguments)
    assert excinfo.value.code == 2


def test_rational_arguments():
    args = main.parse_arguments(["enumerate", "--lengths", "3", "--ebar=-1/2", "--hbar", "0.25"])
    assert args.ebar == Fraction(-1, 2)
    assert args.hbar == Fraction(1, 4)
    assert main.parse_arguments(["enumerate", "--lengths", "3"]).ebar == 0


def test_verify_passes(capfd):
    assert main.run(["verify", "--threads", "1"]) == main.EXIT_OK
    out, _ = capfd.readouterr()
    lines = table_lines(out)
    assert lines[0] == "check,passed,detail"
    assert all(",True," in line for line in lines[1:])


def test_verify_with_corrupted_golden(golden_file, capfd):
    assert main.run(["verify", "--golden", golden_file("{")]) == main.EXIT_VERIFICATION
    _, err = capfd.readouterr()
    assert "verification failed" in err


def test_verify_with_missing_golden(tmp_path, capfd):
    assert main.run(["verify", "--golden", str(tmp_path / "absent.json")]) == main.EXIT_USAGE

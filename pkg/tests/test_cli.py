"""Test module for the command line interface."""

import json

from click.testing import CliRunner
import polars as pl
import pytest

from tridecomp.cli.cli import cli
from tridecomp.generators import gen_complete, gen_join_regular
from tridecomp.graph import read_edge_list


@pytest.fixture
def runner():
    return CliRunner()


def test_gen_complete(runner):
    """Test the complete graph edge list."""
    result = runner.invoke(cli, ["gen", "complete", "-n", "4"])
    assert result.exit_code == 0
    assert result.output == "n 4\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n"


def test_gen_writes_file(runner, tmp_path):
    """Test generated graphs can be written and read back."""
    path = tmp_path / "join.txt"
    result = runner.invoke(cli, ["gen", "join", "-k", "1", "-o", str(path)])
    assert result.exit_code == 0
    graph = read_edge_list(path)
    assert graph.n == 36
    assert graph.min_degree() == 26


def test_gen_join_has_no_seed(runner):
    """Test the deterministic join command offers no seed option."""
    result = runner.invoke(cli, ["gen", "join", "--help"])
    assert result.exit_code == 0
    assert "--seed" not in result.output
    assert "--seed" in runner.invoke(cli, ["gen", "gnp", "--help"]).output


def test_gen_gnp_is_reproducible(runner):
    """Test the same seed gives the same edge list."""
    args = ["gen", "gnp", "-n", "12", "-p", "0.8", "-m", "6", "-s", "42"]
    first = runner.invoke(cli, args)
    second = runner.invoke(cli, args)
    assert first.exit_code == 0
    assert first.output == second.output


def test_gen_bad_parameters(runner):
    """Test generator errors exit with status 1."""
    result = runner.invoke(cli, ["gen", "complete", "-n", "0"])
    assert result.exit_code == 1
    assert "error:" in result.output


def test_decompose_json(runner, write_graph):
    """Test an exact report of K5 on stdout."""
    path = write_graph(gen_complete(5))
    result = runner.invoke(cli, ["decompose", "-i", str(path), "--exact"])
    assert result.exit_code == 0
    report = json.loads(result.output)
    assert report["summary"]["min_weight"] == "1/3"
    assert report["summary"]["mode"] == "exact"
    assert len(report["triangles"]) == 10
    assert all(record["total"] == "1/1" for record in report["edge_sums"])


def test_decompose_csv(runner, write_graph, tmp_path):
    """Test csv reports are split into triangle and edge tables."""
    path = write_graph(gen_complete(6))
    out = tmp_path / "k6.csv"
    result = runner.invoke(cli, ["decompose", "-i", str(path), "-f", "csv", "-o", str(out)])
    assert result.exit_code == 0
    triangles = pl.read_csv(tmp_path / "k6.triangles.csv")
    edges = pl.read_csv(tmp_path / "k6.edges.csv")
    assert triangles.columns == ["a", "b", "c", "weight"]
    assert triangles.height == 20
    assert edges.height == 15
    assert edges["total"].to_list() == pytest.approx([1.0] * 15)


def test_decompose_csv_needs_output(runner, write_graph):
    """Test csv output without a file name is refused."""
    path = write_graph(gen_complete(5))
    result = runner.invoke(cli, ["decompose", "-i", str(path), "-f", "csv"])
    assert result.exit_code == 1


def test_decompose_negative_weight(runner, tmp_path):
    """Test a negative weight exits with status 2 after writing the report."""
    graph_path = tmp_path / "join.txt"
    runner.invoke(cli, ["gen", "join", "-k", "1", "-o", str(graph_path)])
    out = tmp_path / "report.json"
    result = runner.invoke(cli, ["decompose", "-i", str(graph_path), "-o", str(out)])
    assert result.exit_code == 2
    assert "negative weight" in result.output
    assert json.loads(out.read_text())["summary"]["min_weight"] < 0


@pytest.mark.parametrize(
    "graph_args",
    [["complete", "-n", "3"], ["blowup", "-b", "k4", "-t", "2", "-m", "independent"],
     ["blowup", "-b", "c4", "-t", "1"]],
)
def test_decompose_no_decomposition(runner, tmp_path, graph_args):
    """Test undefined delegation weights and uncovered edges exit with status 3."""
    graph_path = tmp_path / "graph.txt"
    runner.invoke(cli, ["gen", *graph_args, "-o", str(graph_path)])
    result = runner.invoke(cli, ["decompose", "-i", str(graph_path)])
    assert result.exit_code == 3
    assert "error:" in result.output


def test_decompose_bad_input(runner, tmp_path):
    """Test unreadable and malformed inputs exit with status 1."""
    result = runner.invoke(cli, ["decompose", "-i", str(tmp_path / "missing.txt")])
    assert result.exit_code == 1
    path = tmp_path / "bad.txt"
    path.write_text("0 1 2\n", encoding="utf-8")
    result = runner.invoke(cli, ["decompose", "-i", str(path)])
    assert result.exit_code == 1
    assert "line 1" in result.output
    path.write_bytes(b"0 1\n\xff\xfe 0 2\n")
    result = runner.invoke(cli, ["decompose", "-i", str(path)])
    assert result.exit_code == 1
    assert "line 2: invalid utf-8" in result.output


def test_decompose_exact_too_large(runner, write_graph):
    """Test exact mode is refused above forty vertices."""
    path = write_graph(gen_complete(41))
    result = runner.invoke(cli, ["decompose", "-i", str(path), "--exact"])
    assert result.exit_code == 1


def test_verify_complete_graph(runner, write_graph, tmp_path):
    """Test K7 passes every check and the summary is written."""
    path = write_graph(gen_complete(7))
    out = tmp_path / "summary.json"
    result = runner.invoke(cli, ["verify", "-i", str(path), "--exact", "-o", str(out)])
    assert result.exit_code == 0
    assert "oracle == fast: ok" in result.output
    assert "bridge: ok" in result.output
    summary = json.loads(out.read_text())
    assert [check["name"] for check in summary["checks"]][0] == "edge sums"


def test_verify_join(runner, write_graph):
    """Test the join construction fails non-negativity only."""
    path = write_graph(gen_join_regular(1))
    result = runner.invoke(cli, ["verify", "-i", str(path)])
    assert result.exit_code == 2
    assert "non-negativity: FAILED" in result.output
    assert "bridge: skipped" in result.output
    assert "min_witness" in result.output


def test_program_threshold(runner):
    """Test the threshold is printed to fifteen decimals."""
    result = runner.invoke(cli, ["program", "threshold"])
    assert result.exit_code == 0
    assert result.output == "0.172673164646011\n"


@pytest.mark.parametrize(
    "d, verdict, chain_valid",
    [("0.17", "certified_le_1", True), ("0.18", "exceeds_1", False),
     ("1/6", "certified_le_1", True)],
)
def test_program_certify(runner, d, verdict, chain_valid):
    """Test certificates read d exactly."""
    result = runner.invoke(cli, ["program", "certify", "-d", d])
    assert result.exit_code == 0
    certificate = json.loads(result.output)
    assert certificate["verdict"] == verdict
    assert certificate["chain_valid"] is chain_valid


def test_program_certify_out_of_range(runner):
    """Test d >= 1/4 is refused."""
    result = runner.invoke(cli, ["program", "certify", "-d", "0.3"])
    assert result.exit_code == 1


def test_program_search(runner):
    """Test the level 10 search below the threshold peaks at b = 0."""
    result = runner.invoke(cli, ["program", "search", "-l", "10", "-d", "0.17", "-g", "1001"])
    assert result.exit_code == 0
    found = json.loads(result.output)
    assert found["best_point"]["b"] == 0.0
    assert found["best_value"] == pytest.approx(0.9717631, abs=1e-6)


def test_program_clamp_test(runner):
    """Test a short clamp test passes and is reproducible."""
    args = ["program", "clamp-test", "-l", "7", "-n", "1000", "-s", "5"]
    first = runner.invoke(cli, args)
    second = runner.invoke(cli, args)
    assert first.exit_code == 0
    assert "pass" in first.output
    assert first.output == second.output


def test_program_eval(runner):
    """Test evaluating the final objective in float and exact mode."""
    result = runner.invoke(cli, ["program", "eval", "-l", "10", "-d", "0.17", "-x", "b=0"])
    assert result.exit_code == 0
    payload = json.loads(result.output)
    assert payload["in_domain"]
    assert payload["value"] == pytest.approx(0.9717631, abs=1e-6)
    result = runner.invoke(cli, ["program", "eval", "-l", "10", "-d", "1/7", "-x", "b=0", "-e"])
    assert json.loads(result.output)["value"] == "18/25"


def test_program_eval_off_domain(runner):
    """Test off-domain points and unknown variables exit with status 1."""
    result = runner.invoke(
        cli, ["program", "eval", "-l", "9", "-d", "0.17", "-x", "a=0.18", "-x", "b=0"]
    )
    assert result.exit_code == 1
    assert "a <= d" in result.output
    result = runner.invoke(cli, ["program", "eval", "-l", "10", "-d", "0.17", "-x", "z=0"])
    assert result.exit_code == 1

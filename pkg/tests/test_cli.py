import pytest

from cli import RunConfig, build_parser, main, run
from digraphs.checks import parity_table
from digraphs.conditions import format_witness, search_identity_witness
from digraphs.gallery import bundled_algebra
from test_utils import fixture_path


def test_components_human(capsys):
    assert main(["components", "-i", "@D", "--kind", "extreme"]) == 0
    assert capsys.readouterr().out == "{{0,1},{2}}\n"


def test_components_from_file(capsys):
    assert main(["components", "-i", str(fixture_path("K.dg")), "--kind", "radical"]) == 0
    assert capsys.readouterr().out == "{{0,1,2,3}}\n"


def test_machine_output(capsys):
    assert main(["--format", "machine", "components", "-i", "@D", "--kind", "radical"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "command=components"
    assert "partition={{0,1,2}}" in lines
    assert 'stages=["{{0,1},{2}}","{{0,1,2}}"]' in lines
    assert "blocks=1" in lines
    assert lines[-1] == "end"


def test_chain_with_oracle(capsys):
    assert main(["--format", "machine", "chain", "-i", "@K", "--oracle"]) == 0
    out = capsys.readouterr().out
    assert "holds=true" in out
    assert "oracle={{0,1,2,3}}" in out


def test_negative_answers_exit_one(capsys):
    assert main(["path", "-i", "@D", "--from", "0", "--to", "2", "--mode", "symmetric"]) == 1
    assert capsys.readouterr().out == "no path\n"
    assert main(["compatible", "-i", "@C3", "-a", "@chain3meet"]) == 1
    assert main(["identity-search", "-a", "@sl2"]) == 1


def test_positive_answers(capsys):
    assert main(["path", "-i", "@D", "--from", "0", "--to", "2"]) == 0
    assert capsys.readouterr().out == "0 -> 1 -> 2\n"
    assert main(["hmbound", "-i", "@D"]) == 0
    assert capsys.readouterr().out == "3\n"
    assert main(["compatible", "-i", "@D", "-a", "@chain3meet"]) == 0


def test_homomorphisms(capsys):
    assert main(["homs", "--source", "@N", "--target", "@D"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out == ["0 0", "0 1", "1 0", "1 1", "2 2", "# 5 maps"]
    assert main(["homs", "--source", "@N", "--target", "@D", "--fix", "0=2", "--limit", "1"]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "2 2"


def test_retract(capsys):
    assert main(["--format", "machine", "retract", "-i", "@D", "--sub", "@N"]) == 0
    out = capsys.readouterr().out
    assert "coretraction=[0,1]" in out
    assert "retraction=[0,1,0]" in out


def test_quotient_prints_digraph_text(capsys):
    assert main(["quotient", "-i", "@D", "--partition", "{{0,1},{2}}"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("digraph D/~\nvertices 2\nreflexive\nedges\n")


def test_algebra_commands(capsys):
    assert main(["closure", "-a", "@chain3meet", "--seed", "2", "1"]) == 0
    assert capsys.readouterr().out == "1 2\n"
    assert main(["congruence", "-a", "@chain3meet", "--partition", "{{0,2},{1}}"]) == 1
    assert main(["--format", "machine", "terms", "-a", "@z2aff", "--arity", "6", "--idempotent", "--limit", "2"]) == 0
    assert "count=32" in capsys.readouterr().out
    assert main(["--format", "machine", "free", "-a", str(fixture_path("sl2.alg")), "--seed", "@C3"]) == 0
    out = capsys.readouterr().out
    assert "vertices=7" in out and "edge_count=28" in out


def test_generate_reports_proper_subuniverse(capsys):
    assert main(["generate", "-a", "@sl2", "--seed", "@C3", "--embedding", "1", "1", "1"]) == 2
    assert "proper subuniverse" in capsys.readouterr().err


def test_polymorphism_commands(capsys):
    assert main(["polymorphisms", "-i", "@K", "--arity", "2", "--idempotent"]) == 0
    out = capsys.readouterr().out
    assert "# projection 1" in out and "# projection 2" in out
    assert out.rstrip().endswith("# 2 tables")
    meet = " ".join(map(str, bundled_algebra("chain3meet").op("meet").table.table))
    assert main(["--format", "machine", "major", "--table", meet, "--arity", "2"]) == 0
    assert "least=[1,2]" in capsys.readouterr().out


def test_olsak_commands(capsys):
    parity = " ".join(map(str, parity_table((0, 1, 2)).table))
    assert main(["olsak", "--table", parity, "--size", "2"]) == 0
    assert main(["olsak", "-a", "@set2"]) == 1
    assert main(["olsak"]) == 2


def test_identity_check_from_file(tmp_path, capsys):
    z2 = bundled_algebra("z2aff")
    witness = tmp_path / "z2.witness"
    witness.write_text(format_witness(search_identity_witness(z2)))
    assert main(["identity-check", "-a", "@z2aff", "--witness", str(witness)]) == 0
    assert main(["identity-search", "-a", str(fixture_path("z2aff.alg"))]) == 0
    assert capsys.readouterr().out.count("witness n=1 endpoint=y") == 1


def test_conditions_commands(capsys):
    assert main(["--format", "machine", "collapse", "-i", "@C3"]) == 0
    assert 'obstructions=["hagemann-mitschke","hobby-mckenzie","taylor"]' in capsys.readouterr().out
    assert main(["free-cycle", "-a", "@z2aff", "-n", "3"]) == 0
    assert main(["d-retract", "-a", "@z2aff"]) == 1
    assert main(["rho", "-i", "@D"]) == 0


def test_usage_errors_go_to_stderr(capsys):
    assert main(["components", "-i", str(fixture_path("missing.dg"))]) == 2
    assert capsys.readouterr().err.startswith("error: cannot read")
    assert main(["components", "-i", str(fixture_path("bad_edge.dg"))]) == 2
    assert "line 5" in capsys.readouterr().err
    assert main(["--budget", "0", "components", "-i", "@D"]) == 2
    assert main(["homs", "--source", "@N", "--target", "@D", "--fix", "zero"]) == 2


def test_budget_errors_exit_three(capsys):
    assert main(["--budget", "10", "power", "-i", "@D", "-k", "3"]) == 3
    assert capsys.readouterr().err.startswith("budget exceeded")


def test_paper_check_selection(capsys):
    assert main(["paper-check", "--only", "gallery", "--only", "chain-meet"]) == 0
    assert capsys.readouterr().out == "PASS gallery\nPASS chain-meet\n"
    assert main(["--format", "machine", "paper-check", "--only", "gallery"]) == 0
    assert capsys.readouterr().out == "check=gallery\npassed=true\ndetail=\nend\n"


def test_paper_check_with_corrupted_fig3(capsys):
    fig3 = str(fixture_path("fig3_corrupted.dg"))
    assert main(["paper-check", "--only", "fig3", "--fig3", fig3]) == 1
    assert capsys.readouterr().out.startswith("FAIL fig3")


def test_unknown_commands():
    with pytest.raises(SystemExit):
        build_parser().parse_args(["frobnicate"])
    status, text = run(RunConfig(command="frobnicate"))
    assert status == 2
    assert "frobnicate" in text

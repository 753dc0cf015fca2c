import json

import pytest

from ptilt import workbench as wb
from ptilt.morcat import PObj
from ptilt.repmod import Rep

KRONECKER = "field p=2\nvertex 1\nvertex 2\narrow a: 1 -> 2\narrow b: 1 -> 2\n"


def _cli(capsys, *argv):
    code = wb.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_load_reports_dimension(capsys):
    code, out, _ = _cli(capsys, "load", "EX1")
    assert code == 0
    assert "dim: 5\n" in out and "basis\te_1 e_2 e_3 alpha beta\n" in out
    code, out, _ = _cli(capsys, "load", "A2")
    assert code == 0 and "dim: 3\n" in out


def test_output_is_deterministic(capsys):
    runs = [_cli(capsys, "verify", "D", "--algebra", "A2", "--json") for _ in range(2)]
    assert runs[0] == runs[1]


def test_json_lines_shape(capsys):
    code, out, _ = _cli(capsys, "enumerate", "stt", "--algebra", "A2", "--json")
    recs = [json.loads(line) for line in out.splitlines()]
    assert code == 0
    assert recs[0]["record"] == "report" and recs[0]["summary"] == {"count": 5}
    assert [r["record"] for r in recs[1:-1]] == ["row"] * 5
    assert recs[-1] == {"record": "status", "command": "enumerate stt", "status": "pass", "refused": ""}


def test_table1_reports_the_extra_row(capsys):
    code, out, _ = _cli(capsys, "table1")
    assert code == 1
    fails = [line for line in out.splitlines() if line.startswith("FAIL")]
    assert len(fails) == 1 and "P1" in fails[0] and "S3" in fails[0]


def test_table1_needs_the_example_algebra(capsys):
    code, _, err = _cli(capsys, "table1", "--algebra", "A2")
    assert code == 2 and err.startswith("error:")


@pytest.mark.parametrize("argv", [
    ("load", "/nonexistent/file.alg"),
    ("verify", "A", "--algebra", "nope"),
    ("verify", "Z"),
    ("frobnicate",),
])
def test_input_errors_exit_two(capsys, argv):
    assert _cli(capsys, *argv)[0] == 2


def test_refusal_exits_three(capsys, tmp_path):
    f = tmp_path / "kr.alg"
    f.write_text(KRONECKER + "indecs brute 6,6\n")
    code, _, err = _cli(capsys, "enumerate", "indecs", "--algebra", str(f))
    assert code == 3 and err.startswith("refused:")


def test_verify_passes_on_small_algebras(capsys):
    for target in ("A", "B", "D", "E", "cokfac", "duality"):
        assert _cli(capsys, "verify", target, "--algebra", "A2")[0] == 0


def test_final_variants(capsys):
    assert _cli(capsys, "verify", "final", "--algebra", "A2")[0] == 1
    assert _cli(capsys, "verify", "final", "--algebra", "A2", "--six-term-form", "unpulled",
                "--injective-witnesses")[0] == 0


def test_non_nakayama_needs_an_indecs_line():
    with pytest.raises(wb.InputError, match="indecs"):
        wb.parse_session(KRONECKER, "kr", wb.Options())


def test_brute_catalog_for_a_small_non_nakayama_quiver():
    text = "field p=2\nvertex 1\nvertex 2\nvertex 3\narrow a: 2 -> 1\narrow b: 3 -> 1\nindecs brute 1,1,1\n"
    s = wb.parse_session(text, "V", wb.Options())
    assert len(s.catalog) == 6


def test_session_literals(a2):
    text = wb.corpus_text("A2") + "module M = S2 + P1\npobj X = dom=(1,0) cod=(0,1) mat=[[alpha]]\n"
    s = wb.parse_session(text, "lit", wb.Options())
    assert isinstance(s.modules["M"], Rep) and s.modules["M"].dims == (1, 1)
    x = s.pobjs["X"]
    assert isinstance(x, PObj) and x.dom == (0,) and x.cod == (1,)
    assert wb.parse_pobj_literal(x.format().split(" ", 1)[1], s.algebra).key() == x.key()


@pytest.mark.parametrize("extra,where", [
    ("module M = S9\n", "line 7"),
    ("pobj X = dom=(0,1) cod=(1,0) mat=[[alpha]]\n", "line 7"),
    ("pobj X = nonsense\n", "line 7"),
])
def test_bad_literals_name_the_line(extra, where):
    with pytest.raises(wb.InputError, match=where):
        wb.parse_session(wb.corpus_text("A2") + extra, "bad", wb.Options())


def test_prime_override_is_recorded():
    s = wb.open_session("A2", wb.Options(prime=3))
    assert s.algebra.p == 3
    assert wb.cmd_load(s).summary["prime"] == 3


def test_golden_file_parses():
    rows = wb.golden_rows()
    assert len(rows) == 14 and rows[0][0] == "P1"
    assert all(t.startswith("{") and t.endswith("0}") for _, t in rows)


def test_nakayama_detection():
    assert all(wb.is_nakayama(wb.open_session(n, wb.Options()).algebra) for n in wb.CORPUS)


def test_inconclusive_status():
    rep = wb.Report("x", "A2", {"allow_inconclusive": False}, {}, inconclusive=[("a",)])
    assert (rep.status, rep.exit_code) == ("inconclusive", 1)
    rep.options = {"allow_inconclusive": True}
    assert (rep.status, rep.exit_code) == ("pass", 0)

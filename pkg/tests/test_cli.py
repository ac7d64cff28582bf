"""CLI: grammar, round-trips, subcommand outputs, exit codes, determinism."""

import json
import pathlib

import pytest

from koszulity.cli import RunConfig, format_document, main, parse_input, run
from koszulity.errors import InputError

DATA = pathlib.Path(__file__).parent / "data"

PK34_TEXT = (DATA / "pk34.txt").read_text()
COMMUTING_TEXT = (DATA / "commuting.txt").read_text()

X2_WITH_MODULE = """\
field 32003
vertices v
arrow x : v -> v
relation x*x
module
generator g : v degree 1
relation g*x
end
"""


# -- parsing ----------------------------------------------------------------------


def test_parse_pk34():
    doc = parse_input(PK34_TEXT)
    assert doc.char == 32003
    assert doc.vertices == ["1", "2", "3", "4", "5"]
    assert len(doc.arrows) == 7
    assert len(doc.relations) == 5
    assert doc.relations[0] == [(1, ("a1", "a2")), (32002, ("a1", "a3"))]


def test_parse_unknown_arrow_cites_line():
    text = "field 7\nvertices 1 2\narrow a1 : 1 -> 2\nrelation a1*a9\n"
    doc = parse_input(text)
    cfg = RunConfig(subcommand="classify", N=2, format="json")
    with pytest.raises(InputError) as err:
        run(cfg, doc)
    assert "line 4" in str(err.value)
    assert "a9" in str(err.value)


def test_parse_unknown_vertex_cites_position():
    with pytest.raises(InputError) as err:
        parse_input("vertices 1\narrow a : 1 -> 9\n")
    assert "line 2" in str(err.value)
    assert "unknown vertex 9" in str(err.value)


def test_parse_empty_relation_list_is_valid():
    doc = parse_input("field 7\nvertices 1 2\narrow a : 1 -> 2\n")
    code, out = run(RunConfig(subcommand="classify", N=3, format="json"), doc)
    assert code == 0
    assert json.loads(out)["verdict"] == "Koszul"


def test_parse_rejects_junk():
    with pytest.raises(InputError) as err:
        parse_input("vertices v\nfrobnicate 3\n")
    assert "line 2" in str(err.value)
    with pytest.raises(InputError):
        parse_input("field 6\n")  # not prime
    with pytest.raises(InputError):
        parse_input("module\n")  # unterminated


def test_parse_comments_and_blank_lines():
    doc = parse_input("# header\n\nfield 7\nvertices v  # trailing\n")
    assert doc.char == 7
    assert doc.vertices == ["v"]


def test_roundtrip_canonical_documents():
    for text in (PK34_TEXT, COMMUTING_TEXT, X2_WITH_MODULE):
        doc = parse_input(text)
        printed = format_document(doc)
        assert parse_input(printed) == doc
        # printing is a fixed point
        assert format_document(parse_input(printed)) == printed


def test_coefficient_printing_minimal_magnitude():
    doc = parse_input("field 7\nvertices v\narrow x : v -> v\nrelation 6*x*x\n")
    printed = format_document(doc)
    assert "relation -x*x" in printed


# -- subcommands ------------------------------------------------------------------------


def run_json(subcommand, text, **kwargs):
    doc = parse_input(text)
    cfg = RunConfig(subcommand=subcommand, format="json", **kwargs)
    code, out = run(cfg, doc)
    return code, json.loads(out)


def test_classify_pk34_json():
    code, out = run_json("classify", PK34_TEXT)
    assert code == 0
    assert out["verdict"] == "PK" and (out["p"], out["d"]) == (3, 4)
    assert out["fitting_pairs"] == [[3, 4]]
    assert out["termination_degree"] == 4


def test_classify_commuting_json():
    code, out = run_json("classify", COMMUTING_TEXT)
    assert code == 0
    assert out["verdict"] == "Koszul"


def test_resolve_betti_schema():
    code, out = run_json("resolve", COMMUTING_TEXT, N=4)
    assert code == 0
    assert [row["n"] for row in out["rows"]] == list(range(5))
    assert out["rows"][1]["generators"] == [{"vertex": "v", "degree": 1, "count": 2}]
    assert all(row["certified"] for row in out["rows"])


def test_ext_table_output():
    code, out = run_json("ext", COMMUTING_TEXT, N=4)
    assert code == 0
    cells = {(c["i"], c["j"]): c["dim"] for c in out["cells"]}
    assert cells == {(0, 0): 1, (1, 1): 2, (2, 2): 1}


def test_generation_output():
    code, out = run_json("generation", PK34_TEXT)
    assert code == 0
    assert out["generator_degrees"] == [0, 1, 3]


def test_arities_output():
    code, out = run_json("arities", PK34_TEXT, q_max=9)
    assert code == 0
    assert out["closed_form"] == list(range(2, 10))
    assert out["consistent"] is True


def test_module_classify_output():
    code, out = run_json("module-classify", X2_WITH_MODULE)
    assert code == 0
    assert out["piecewise_koszul"] is True and out["s"] == 1


def test_ek_output_is_ingestible():
    from koszulity import ingest_structure_constants, minimal_resolution, betti_table, classify

    code, out = run_json("ek", PK34_TEXT, N=12, D=9, k=1)
    assert code == 0
    alg = ingest_structure_constants(out)
    res = minimal_resolution(alg, None, N=3, D=alg.max_degree)
    assert classify(betti_table(res)).verdict == "Koszul"


def test_reduced2l_output():
    code, out = run_json("reduced2l", PK34_TEXT, l=3)
    assert code == 0
    assert all(c["passed"] for c in out["conditions"])


# -- main() exit codes ----------------------------------------------------------------------


def test_main_exit_codes(tmp_path, capsys):
    good = tmp_path / "good.txt"
    good.write_text(PK34_TEXT)
    assert main(["classify", str(good), "--format", "json"]) == 0
    captured = capsys.readouterr()
    assert json.loads(captured.out)["verdict"] == "PK"

    # refusal: yoneda with failing additivity hypothesis
    assert main(["yoneda", "1", "2", str(good)]) == 1
    captured = capsys.readouterr()
    assert "refused" in captured.err

    bad = tmp_path / "bad.txt"
    bad.write_text("vertices 1\narrow a : 1 -> 9\n")
    assert main(["classify", str(bad)]) == 2
    captured = capsys.readouterr()
    assert "error" in captured.err


def test_main_schema_flag(capsys):
    assert main(["--schema"]) == 0
    out = capsys.readouterr().out
    assert "INPUT GRAMMAR" in out
    assert "STRUCTURE-CONSTANT JSON" in out


def test_main_yoneda_success(tmp_path, capsys):
    good = tmp_path / "good.txt"
    good.write_text(PK34_TEXT)
    assert main(["yoneda", "3", "3", str(good), "--format", "json", "--max-hdeg", "8",
                 "--max-ideg", "11"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["surjective"] is True


def test_byte_identical_repeated_runs():
    for sub, kwargs in [
        ("classify", {}),
        ("resolve", {}),
        ("ext", {}),
        ("generation", {}),
        ("arities", {"q_max": 9}),
    ]:
        doc1 = parse_input(PK34_TEXT)
        doc2 = parse_input(PK34_TEXT)
        cfg = RunConfig(subcommand=sub, format="json", **kwargs)
        _, out1 = run(cfg, doc1)
        _, out2 = run(cfg, doc2)
        assert out1 == out2, sub


def test_char_precedence():
    # explicit flag beats the field line beats the default
    text = "field 7\nvertices v\narrow x : v -> v\nrelation x*x\n"
    doc = parse_input(text)
    code, out = run(RunConfig(subcommand="classify", format="json", char=5), doc)
    assert code == 0
    doc2 = parse_input("vertices v\narrow x : v -> v\nrelation x*x\n")
    code2, _ = run(RunConfig(subcommand="classify", format="json"), doc2)
    assert code2 == 0


def test_table_format_deterministic():
    doc = parse_input(COMMUTING_TEXT)
    cfg = RunConfig(subcommand="classify", format="table")
    _, out1 = run(cfg, doc)
    _, out2 = run(cfg, parse_input(COMMUTING_TEXT))
    assert out1 == out2
    assert "verdict: Koszul" in out1


def test_order_line_changes_nothing_observable():
    reordered = PK34_TEXT + "order a7 a6 a5 a4 a3 a2 a1\n"
    _, out1 = run_json("classify", PK34_TEXT)
    _, out2 = run_json("classify", reordered)
    assert out1 == out2

import json

import pytest

from lindep.cli import EXIT_OK, EXIT_PARSE, EXIT_TYPE, main

POS = {"line": int, "col": int}


def _conforms(diag: dict) -> None:
    """The documented diagnostic schema, plus the file the diagnostic came from."""
    assert set(diag) <= {"severity", "span", "rule", "message", "residue", "file"}
    assert isinstance(diag["severity"], str)
    assert isinstance(diag["rule"], str) and isinstance(diag["message"], str)
    span = diag["span"]
    if span is not None:
        for end in ("start", "end"):
            assert {k: type(v) for k, v in span[end].items()} == POS
    if "residue" in diag:
        assert set(diag["residue"]) == {"left", "right"}
        assert all(isinstance(a, str) for side in diag["residue"].values() for a in side)


@pytest.fixture
def write(tmp_path):
    def _write(text: str, name: str = "f.ld"):
        p = tmp_path / name
        p.write_text(text, encoding="utf-8")
        return str(p)

    return _write


def test_check_corpus_ok(corpus_dir):
    assert main(["check", str(corpus_dir / "paper.ld")]) == EXIT_OK


def test_check_impossible(corpus_dir, capsys):
    assert main(["check", "--no-color", str(corpus_dir / "impossible.ld")]) == EXIT_TYPE
    err = capsys.readouterr().err
    assert "ι x" in err and "solver-residue" in err


def test_empty_file(write):
    assert main(["check", write("")]) == EXIT_OK


def test_parse_error_exit(write, capsys):
    assert main(["check", write("def f : = 1")]) == EXIT_PARSE
    assert "error" in capsys.readouterr().err


def test_json_round_trips(corpus_dir, capsys):
    assert main(["check", "--json", str(corpus_dir / "impossible.ld")]) == EXIT_TYPE
    out = capsys.readouterr().out
    data = json.loads(out)
    assert len(data) == 2
    for d in data:
        _conforms(d)
    assert json.loads(json.dumps(data, ensure_ascii=False)) == data
    assert data[0]["residue"] == {"left": [], "right": ["ι x"]}


def test_json_parse_error_schema(write, capsys):
    assert main(["check", "--json", write("def = 1")]) == EXIT_PARSE
    (d,) = json.loads(capsys.readouterr().out)
    _conforms(d)
    assert d["span"] is not None


def test_output_deterministic(corpus_dir, capsys):
    outs = []
    for _ in range(2):
        main(["check", "--json", str(corpus_dir / "impossible.ld")])
        main(["check", "--show-production", "copyB", str(corpus_dir / "paper.ld")])
        outs.append(capsys.readouterr())
    assert outs[0] == outs[1]


def test_show_production(corpus_dir, capsys):
    assert main(["check", "--show-production", "switch", str(corpus_dir / "paper.ld")]) == EXIT_OK
    out = capsys.readouterr().out
    assert "▷" in out


@pytest.mark.parametrize(
    "argv, expected",
    [
        (["nf", "--ctx", "x:A,y:B", "ι (x , y)"], "{ι x, ι y}"),
        (["nf", "◇ ⊗ ◇"], "{}"),
        (["nf", "--ctx", "x:A", "ι x ^ 2"], "{ι x, ι x}"),
    ],
)
def test_nf(argv, expected, capsys):
    assert main(argv) == EXIT_OK
    assert capsys.readouterr().out.strip() == expected


def test_nf_parse_error(capsys):
    assert main(["nf", "ι ("]) == EXIT_PARSE


def test_run(corpus_dir, capsys):
    assert main(["run", str(corpus_dir / "paper.ld"), "switch", "(a , b)"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "(b , a)"


def test_run_bad_argument(corpus_dir, capsys):
    assert main(["run", str(corpus_dir / "paper.ld"), "idJ", "A", "b"]) == EXIT_TYPE

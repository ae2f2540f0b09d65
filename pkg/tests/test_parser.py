import pytest

from lindep.diagnostics import ParseError
from lindep.parser import parse_expr, parse_program, parse_telescope

ALIASES = [
    ("ι x ⊗ ◇", "iota x (*) <>"),
    ("⟨x : A⟩ ⊸ A", "<x : A> -o A"),
    ("ι x ⊩ A × A", "iota x ||- A * A"),
    ("λ x ↦ x ι", "\\x |-> x iota"),
    ("swap _ _ ∘ id _", "swap _ _ % id _"),
    ("id _ ⊗f id _", "id _ (*)f id _"),
    ("(x : A) → A", "(x : A) -> A"),
    ("Σ ℕ (fun _ => ⊤)", "Sigma Nat (fun _ => Unit)"),
]


@pytest.mark.parametrize("uni, ascii_", ALIASES)
def test_ascii_aliases(uni, ascii_):
    assert parse_expr(uni) == parse_expr(ascii_)


def test_empty_program():
    assert parse_program("") == []
    assert parse_program("-- only a comment\n") == []


def test_hyphenated_names():
    (decl,) = parse_program("def compose'-1-2 : ℕ = 0")
    assert decl.name == "compose'-1-2"


def test_postulate_many_names():
    assert len(parse_program("postulate A B : Type")) >= 1


def test_telescope():
    tel = parse_telescope("x:A,y:B")
    assert [n for n, _ in tel] == ["x", "y"]


@pytest.mark.parametrize("src", ["def = 1", "def f : = 0", "def f : ℕ = (1", "postulate : Type", "def f : ℕ = 1 $"])
def test_parse_errors(src):
    with pytest.raises(ParseError) as e:
        parse_program(src)
    assert e.value.diagnostic.span is not None


def test_arrow_codomain_may_be_judgment():
    parse_expr("(x : A) → ι x ⊩ B")

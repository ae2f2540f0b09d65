from hypothesis import given, settings, strategies as st

from lindep.program import Session

BASE = """
postulate A : Type
postulate a a' : A
def pairA : ◇ ⊩ ⟨x : A⟩ ⊸ ⟨y : A⟩ ⊸ A × A = λ x ↦ λ y ↦ (x , y) ι
def konst : ◇ ⊩ ⟨A⟩^0 ⊸ ⟨A⟩ ⊸ A = λ _ ↦ λ y ↦ y ι
"""

BY_LEFT = "def copyL (x : A) : ! (ι x) ⊩ A × A = (x , x) ι by (lax _ _ ∘ use _) ∘ dupl _"
BY_RIGHT = "def copyR (x : A) : ! (ι x) ⊩ A × A = (x , x) ι by lax _ _ ∘ (use _ ∘ dupl _)"


def _session(extra: str) -> tuple[Session, list]:
    s = Session()
    return s, s.load(BASE + extra)


def test_by_associativity_at_endpoints():
    s, errs = _session(BY_LEFT + "\n" + BY_RIGHT)
    assert errs == []
    ends = []
    for name in ("copyL", "copyR"):
        ends.append([(w.src, w.tgt) for w in s.witnesses(name)])
    assert ends[0] == ends[1]


ARGS = ["a ι", "a' ι", "x ι", "(konst < 0 @ a ι @ a' ι)"]


@settings(max_examples=10, deadline=None)
@given(st.sampled_from(ARGS))
def test_multiplicity_zero_is_vacuous(arg):
    prog = f"def k0 (x : A) : ι x ⊩ A = konst < 0 @ {arg} @ x ι"
    _, errs = _session(prog)
    assert errs == []


def test_multiplicity_one_is_not_vacuous():
    _, errs = _session("def k1 (x : A) : ι x ⊩ A × A = pairA @ a ι @ x ι")
    assert len(errs) == 1 and errs[0].residue is not None


def test_linear_application_consumes_supply():
    s, errs = _session("def p (x y : A) : ι x ⊗ ι y ⊩ A × A = pairA @ x ι @ y ι")
    assert errs == []
    assert s.run("p", ["a", "a'"]) == "(a , a')"


def test_variable_rule_needs_its_supply():
    _, errs = _session("def v (x : A) : ◇ ⊩ A = x ι")
    assert [e.rule for e in errs] == ["solver-residue"]


def test_errors_name_the_definition():
    _, errs = _session("def bad (x : A) : ◇ ⊩ A = x ι")
    assert errs[0].name == "bad" and errs[0].span is not None


def test_witness_endpoints_recheck():
    s, errs = _session(BY_RIGHT)
    assert errs == []
    for w in s.witnesses("copyR"):
        assert w.production is not None


def test_bang_abstraction_and_application():
    src = BY_RIGHT + """
def copyI : ◇ ⊩ !⟨A⟩ ⊸ A × A = λ x !↦ copyR x
def twice (x : A) : ! (ι x) ⊩ A × A = copyI !@ x ι
"""
    s, errs = _session(src)
    assert errs == []
    assert s.run("twice", ["a"]) == "(a , a)"

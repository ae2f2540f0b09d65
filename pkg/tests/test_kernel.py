import pytest
from hypothesis import given, settings, strategies as st

from lindep.diagnostics import LinDepError
from lindep.kernel import Context, Env, check, conv, infer, nf, whnf
from lindep.program import Session
from lindep.syntax import (
    NAT,
    Ann,
    App,
    Const,
    Fst,
    Lam,
    Mu,
    Pair,
    Pi,
    Sigma,
    Snd,
    Sum,
    Unit,
    Universe,
    Var,
    numeral,
    weaken,
)


@pytest.fixture(scope="module")
def loaded(corpus_dir):
    s = Session()
    assert s.load((corpus_dir / "paper.ld").read_text()) == []
    return s


def _bodies(env):
    return [d for d in env.defs.values() if d.body is not None]


def test_subject_reduction_on_corpus(loaded):
    env = loaded.env
    for d in _bodies(env):
        check(env, Context(), nf(env, d.body), d.type)


def test_nf_idempotent_on_corpus(loaded):
    env = loaded.env
    for d in _bodies(env):
        once = nf(env, d.body)
        assert nf(env, once) == once, d.name


def test_infer_check_round_trip_on_corpus(loaded):
    env = loaded.env
    for d in _bodies(env):
        ty = infer(env, Context(), Const(d.name))
        assert conv(env, ty, d.type)
        check(env, Context(), Const(d.name), ty)


def _env():
    env = Env()
    env.postulate("A", Universe())
    env.postulate("c", Const("A"))
    env.postulate("f", Pi(Const("A"), Const("A")))
    return env


small = st.recursive(
    st.sampled_from([Const("c")]),
    lambda t: st.one_of(
        st.builds(lambda a: App(Const("f"), a), t),
        st.builds(lambda a: App(Ann(Lam(App(Const("f"), Var(0))), Pi(Const("A"), Const("A"))), a), t),
        st.builds(lambda a, b: Fst(Pair(a, b)), t, t),
        st.builds(lambda a, b: Snd(Pair(a, b)), t, t),
    ),
    max_leaves=8,
)


@given(small)
def test_random_terms_round_trip(t):
    env = _env()
    ty = infer(env, Context(), t)
    check(env, Context(), t, ty)
    assert conv(env, ty, Const("A"))


@given(small)
def test_random_nf_idempotent_and_typed(t):
    env = _env()
    n = nf(env, t)
    assert nf(env, n) == n
    check(env, Context(), n, Const("A"))


def test_beta_and_projection():
    env = _env()
    t = App(Lam(Var(0)), Const("c"))
    assert whnf(env, t) == Const("c")
    assert whnf(env, Fst(Pair(Const("c"), Const("A")))) == Const("c")


def test_type_in_type():
    assert infer(Env(), Context(), Universe()) == Universe()


def test_negative_occurrence_is_rejected():
    env = _env()
    with pytest.raises(LinDepError):
        infer(env, Context(), Mu(Pi(Var(0), Const("A"))))


def test_positive_functor_accepted():
    env = _env()
    nat_like = Mu(Sum(Unit(), Var(0)))
    assert infer(env, Context(), nat_like) == Universe()


def test_mismatch_reports_rule():
    env = _env()
    with pytest.raises(LinDepError) as e:
        check(env, Context(), Const("c"), Universe())
    assert e.value.diagnostic.rule


def test_non_structural_recursion_rejected():
    s = Session()
    diags = s.load("def loop (n : ℕ) : ℕ = loop n")
    assert len(diags) == 1


def test_structural_recursion_computes():
    s = Session()
    assert s.run("add", ["2", "3"]) == "5"
    assert s.run("mul", ["2", "3"]) == "6"
    assert s.run("length", ["ℕ", "cons 1 (cons 1 nil)"]) == "2"

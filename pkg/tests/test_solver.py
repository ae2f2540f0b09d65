import random

import pytest
from hypothesis import given, settings

from gen import pairs, render, seeds, supplies, supply, world, leaves
from lindep.diagnostics import LinDepError
from lindep.solver import (
    AtomIota,
    MismatchResidue,
    brute_force_reachable,
    normalize_supply,
    solve,
    solve_or_fail,
    symmetrize,
)
from lindep.supply import check_production, endpoints
from lindep.syntax import Comp, Empty, Fst, Iota, Pair, Tensor, Term, Tt, Var, map_vars

ENV, CTX = world()


def _disguise(t: Term) -> Term:
    """A conv-equal supply: every ι argument goes through a projection redex."""
    match t:
        case Iota(a):
            return Iota(Fst(Pair(a, Tt())))
        case Tensor(a, b):
            return Tensor(_disguise(a), _disguise(b))
    return t


@given(supplies())
def test_canonical_for_conv_equal_supplies(d):
    assert normalize_supply(ENV, CTX, d).atoms == normalize_supply(ENV, CTX, _disguise(d)).atoms


@given(supplies())
def test_to_nf_from_nf_round_trip(d):
    n = normalize_supply(ENV, CTX, d)
    check_production(ENV, CTX, Comp(n.from_nf, n.to_nf), d, d)
    check_production(ENV, CTX, n.to_nf, d, n.supply)


@given(pairs())
def test_endpoints_deterministic(pair):
    p = solve(ENV, CTX, *pair)
    if not isinstance(p, MismatchResidue):
        env, ctx = world()
        assert endpoints(ENV, CTX, p) == endpoints(env, ctx, p)


@given(pairs())
def test_double_symmetrize_preserves_endpoints(pair):
    p = solve(ENV, CTX, *pair)
    if not isinstance(p, MismatchResidue):
        twice = symmetrize(ENV, CTX, symmetrize(ENV, CTX, p))
        assert endpoints(ENV, CTX, twice) == endpoints(ENV, CTX, p)


@given(pairs())
def test_solve_reflexive(pair):
    d = pair[0]
    check_production(ENV, CTX, solve(ENV, CTX, d, d), d, d)


@given(pairs(opaque_ok=False))
def test_residue_is_multiset_difference(pair):
    src, tgt = pair
    out = solve(ENV, CTX, src, tgt)
    if isinstance(out, MismatchResidue):
        assert out.left_only or out.right_only
        assert not set(out.left_only) & set(out.right_only)


def test_residue_render():
    ctx = CTX
    out = solve(ENV, ctx, Empty(), Iota(Var(2)))
    assert isinstance(out, MismatchResidue)
    assert out.render(ctx.names()) == "ι x ⊗ ◇ ≠ ◇"
    assert out.right_only == (AtomIota(Var(2)),)


def test_solve_or_fail_carries_residue():
    with pytest.raises(LinDepError) as e:
        solve_or_fail(ENV, CTX, Iota(Var(0)), Empty())
    d = e.value.diagnostic
    assert d.rule == "solver-residue"
    assert d.residue.render() == "◇ ≠ ι w ⊗ ◇"


def test_pairs_split_into_atoms():
    d = Iota(Pair(Var(2), Var(1)))
    atoms = normalize_supply(ENV, CTX, d).atoms
    assert sorted(atoms, key=repr) == sorted([AtomIota(Var(2)), AtomIota(Var(1))], key=repr)


def test_oracle_agrees_on_small_cases():
    x, y = Iota(Var(2)), Iota(Var(1))
    assert brute_force_reachable(ENV, CTX, Tensor(x, y), Tensor(y, x), depth=4)
    assert not brute_force_reachable(ENV, CTX, x, y, depth=6)
    assert brute_force_reachable(ENV, CTX, Iota(Pair(Var(2), Var(1))), Tensor(x, y), depth=2)


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_oracle_reachable_implies_solvable(seed):
    rng = random.Random(seed)
    src = render(rng, leaves(rng, rng.randrange(4)))
    from gen import walk

    tgt = walk(rng, src, 4)
    assert brute_force_reachable(ENV, CTX, src, tgt, depth=12, max_states=5000)
    assert not isinstance(solve(ENV, CTX, src, tgt), MismatchResidue)


# [DERIVED] answers of the breadth-first oracle at depth 12, frozen
ORACLE = [
    ("ι (x , y)", "ι y ⊗ ι x", True),
    ("ι (inl x)", "ι x", True),
    ("ι x ⊗ ◇", "ι x", True),
    ("ι tt ⊗ ι y", "ι y", True),
    ("ι x", "ι y", False),
    ("ι (x , x)", "ι x", False),
    ("ι (init (inr w)) ⊗ ι y", "ι (y , w)", True),
    ("◇", "ι tt ⊗ ι tt", True),
]


@pytest.mark.parametrize("src, tgt, reachable", ORACLE)
def test_solver_matches_frozen_oracle(src, tgt, reachable):
    from lindep.parser import parse_expr
    from lindep.program import Session
    from lindep.syntax import SupplyTy

    s = Session(prelude=False)
    sc = s.context("x:A,y:B,w:A")
    a, b = (s.elab.check(sc, parse_expr(e), SupplyTy()) for e in (src, tgt))
    out = solve(s.env, sc.ctx, a, b)
    assert isinstance(out, MismatchResidue) != reachable
    if reachable:
        check_production(s.env, sc.ctx, out, a, b)

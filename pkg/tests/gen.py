"""Random supplies over a small fixed context, shared by the test modules."""

from __future__ import annotations

import random

from hypothesis import strategies as st

from lindep.kernel import Context, Env
from lindep.syntax import (
    Bang,
    Const,
    Empty,
    Hom,
    Init,
    Inl,
    Inr,
    Iota,
    Pair,
    Sigma,
    Tensor,
    Term,
    Tt,
    Universe,
    Var,
    weaken,
)

A, B = Const("A"), Const("B")


def world() -> tuple[Env, Context]:
    """Postulates ``A B : Type``, ``c : A`` and the context ``x : A, y : B, w : A × B``."""
    env = Env()
    env.postulate("A", Universe())
    env.postulate("B", Universe())
    env.postulate("c", A)
    ctx = Context().extend("x", A).extend("y", B).extend("w", Sigma(A, weaken(B), "_"))
    return env, ctx


def leaves(rng: random.Random, n: int, nvars: int = 3) -> list[Term]:
    return [Var(rng.randrange(nvars)) for _ in range(n)]


def _wrap(rng: random.Random, t: Term) -> Term:
    for _ in range(rng.randrange(3)):
        t = rng.choice([Inl, Inr, Init])(t)
    return t


def _pack(rng: random.Random, items: list[Term]) -> list[Term]:
    """Group neighbouring terms into ι-pairs; returns supply pieces."""
    out = []
    i = 0
    while i < len(items):
        if i + 1 < len(items) and rng.random() < 0.3:
            out.append(Iota(_wrap(rng, Pair(_wrap(rng, items[i]), _wrap(rng, items[i + 1])))))
            i += 2
        else:
            out.append(Iota(_wrap(rng, items[i])))
            i += 1
    return out


def _tree(rng: random.Random, pieces: list[Term]) -> Term:
    if not pieces:
        return rng.choice([Empty(), Iota(Tt()), Tensor(Empty(), Empty())])
    if len(pieces) == 1:
        p = pieces[0]
        r = rng.random()
        if r < 0.15:
            return Tensor(p, Empty())
        if r < 0.25:
            return Tensor(Iota(Tt()), p)
        return p
    k = rng.randrange(1, len(pieces))
    return Tensor(_tree(rng, pieces[:k]), _tree(rng, pieces[k:]))


def render(rng: random.Random, atoms: list[Term], extra: list[Term] = ()) -> Term:
    """A random supply whose normal form is the multiset ``atoms`` plus ``extra``."""
    items = list(atoms)
    rng.shuffle(items)
    pieces = _pack(rng, items) + list(extra)
    rng.shuffle(pieces)
    return _tree(rng, pieces)


def opaque(rng: random.Random) -> Term:
    x, y = leaves(rng, 2)
    return rng.choice([Bang(Iota(x)), Hom(Iota(x), Iota(y))])


def supply_pair(rng: random.Random, max_atoms: int = 6, opaque_ok: bool = True, positive: float = 0.6):
    """Two supplies; with probability ``positive`` they share a normal form."""
    atoms = leaves(rng, rng.randrange(max_atoms + 1))
    extra = [opaque(rng)] if opaque_ok and rng.random() < 0.3 else []
    left = render(rng, atoms, extra)
    if rng.random() < positive:
        return left, render(rng, atoms, extra)
    other = list(atoms)
    r = rng.random()
    if other and r < 0.4:
        other.pop(rng.randrange(len(other)))
    elif other and r < 0.7:
        other[rng.randrange(len(other))] = leaves(rng, 1)[0]
    elif len(other) < max_atoms:
        other += leaves(rng, 1)
    else:
        other.pop()
    return left, render(rng, other, extra)


def supply(rng: random.Random, max_atoms: int = 5) -> Term:
    return render(rng, leaves(rng, rng.randrange(max_atoms + 1)))


def walk(rng: random.Random, t: Term, steps: int) -> Term:
    """Apply up to ``steps`` random single rewrites from the oracle's rule set."""
    from lindep.solver import _rewrites

    for _ in range(steps):
        options = [r for r in _rewrites(t) if not isinstance(r, Tensor) or r != Tensor(t, Empty()) or rng.random() < 0.2]
        if not options:
            break
        t = rng.choice(options)
    return t


seeds = st.integers(min_value=0, max_value=2**32 - 1)


def supplies(max_atoms: int = 5):
    return seeds.map(lambda s: supply(random.Random(s), max_atoms))


def pairs(max_atoms: int = 6, opaque_ok: bool = True):
    return seeds.map(lambda s: supply_pair(random.Random(s), max_atoms, opaque_ok))

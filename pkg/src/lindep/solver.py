"""Deciding productions between supplies and reconstructing witnesses.

A supply is flattened into a sorted list of atoms. Two supplies are related
exactly when their atom lists coincide; the witness is ``from₁ ∘ to₀``.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, fields
from typing import Union

from .diagnostics import Residue, fail
from .kernel import Context, Env, nf, whnf
from .supply import endpoints, assoc_inv, unitl, unitl_inv
from .syntax import (
    Assoc,
    Bang,
    BangF,
    Bind,
    Comp,
    Const,
    Curry,
    Empty,
    Free,
    Fst,
    Hom,
    Id,
    Init,
    Inl,
    Inr,
    Iota,
    LaxPair,
    LaxTt,
    OplPair,
    OplTt,
    Pair,
    Pow,
    RetInit,
    RetInl,
    RetInr,
    SecInit,
    SecInl,
    SecInr,
    SupAbs,
    Swap,
    Tensor,
    TensorF,
    Term,
    Tt,
    Uncurry,
    Unitr,
    UnitrInv,
    App,
    Var,
    size,
    term_key,
    weaken,
)


@dataclass(frozen=True)
class AtomIota:
    term: Term


@dataclass(frozen=True)
class AtomNeutral:
    """A supply-typed term that does not reduce to a supply former."""

    term: Term


@dataclass(frozen=True)
class AtomPowStuck:
    base: Term
    exponent: Term


@dataclass(frozen=True)
class AtomHom:
    src: tuple
    tgt: tuple


@dataclass(frozen=True)
class AtomAbs:
    dom: Term
    body: tuple
    name: str = "x"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, AtomAbs) and self.dom == other.dom and self.body == other.body

    def __hash__(self) -> int:
        return hash((AtomAbs, self.dom, self.body))


@dataclass(frozen=True)
class AtomBang:
    inner: tuple


Atom = Union[AtomIota, AtomNeutral, AtomPowStuck, AtomHom, AtomAbs, AtomBang]

_KIND = {AtomIota: 0, AtomNeutral: 1, AtomPowStuck: 2, AtomHom: 3, AtomAbs: 4, AtomBang: 5}


def _head(t: Term) -> tuple:
    while isinstance(t, (App, Fst)):
        t = t.fn if isinstance(t, App) else t.pair
    if isinstance(t, Var):
        return (0, -t.index, "")  # outermost binder first
    if isinstance(t, Const):
        return (1, 0, t.name)
    return (2, 0, "")


def atom_key(a: Atom) -> tuple:
    """Total order: head variable in context order, then kind, then structure."""
    match a:
        case AtomIota(t) | AtomNeutral(t):
            return (_head(t), _KIND[type(a)], term_key(t))
        case AtomPowStuck(b, m):
            return ((3, 0, ""), _KIND[type(a)], term_key(b), term_key(m))
        case AtomHom(s, t):
            return ((3, 0, ""), _KIND[type(a)], tuple(map(atom_key, s)), tuple(map(atom_key, t)))
        case AtomAbs(d, b):
            return ((3, 0, ""), _KIND[type(a)], term_key(d), tuple(map(atom_key, b)))
        case AtomBang(s):
            return ((3, 0, ""), _KIND[type(a)], tuple(map(atom_key, s)))
    raise TypeError(a)


def reify_atom(a: Atom) -> Term:
    match a:
        case AtomIota(t):
            return Iota(t)
        case AtomNeutral(t):
            return t
        case AtomPowStuck(b, m):
            return Pow(b, m)
        case AtomHom(s, t):
            return Hom(reify(s), reify(t))
        case AtomAbs(d, b):
            return SupAbs(d, reify(b), a.name)
        case AtomBang(s):
            return Bang(reify(s))
    raise TypeError(a)


def reify(atoms) -> Term:
    out: Term = Empty()
    for a in reversed(tuple(atoms)):
        out = Tensor(reify_atom(a), out)
    return out


def render_atom(a: Atom, names: list[str] | None = None) -> str:
    from .pretty import show

    return show(reify_atom(a), names)


def render_atoms(atoms, names: list[str] | None = None) -> str:
    parts = [render_atom(a, names) for a in atoms]
    return " ⊗ ".join(parts + ["◇"])


@dataclass(frozen=True)
class Normalized:
    atoms: tuple
    to_nf: Term
    from_nf: Term

    @property
    def supply(self) -> Term:
        return reify(self.atoms)


@dataclass(frozen=True)
class MismatchResidue:
    left_only: tuple
    right_only: tuple

    def as_residue(self, names: list[str] | None = None) -> Residue:
        return Residue(self.left_only, self.right_only, tuple(names or ()))

    def render(self, names: list[str] | None = None) -> str:
        return f"{render_atoms(self.right_only, names)} ≠ {render_atoms(self.left_only, names)}"


# -- flattening --------------------------------------------------------------


def _append(xs: list, tail: Term) -> tuple[Term, Term]:
    """``reify(xs) ⊗ tail ▷ xs ++ tail`` and back."""
    if not xs:
        return unitl(tail), unitl_inv(tail)
    head = reify_atom(xs[0])
    rest = reify(xs[1:])
    fwd, bwd = _append(xs[1:], tail)
    to = Comp(TensorF(Id(head), fwd), Assoc(head, rest, tail))
    back = Comp(assoc_inv(head, rest, tail), TensorF(Id(head), bwd))
    return to, back


def _single(t: Term) -> tuple[Term, Term]:
    return UnitrInv(t), Unitr(t)


def _flatten(env: Env, ctx: Context, d: Term) -> tuple[list, Term, Term]:
    w = whnf(env, d)
    match w:
        case Empty():
            return [], Id(Empty()), Id(Empty())
        case Tensor(a, b):
            xs, ta, fa = _flatten(env, ctx, a)
            ys, tb, fb = _flatten(env, ctx, b)
            app, app_inv = _append(xs, reify(ys))
            return xs + ys, Comp(app, TensorF(ta, tb)), Comp(TensorF(fa, fb), app_inv)
        case Iota(t):
            return _flatten_iota(env, ctx, whnf(env, t))
        case Pow(b, m):
            atom = AtomPowStuck(nf(env, b), nf(env, m))
        case Hom(a, b):
            na, nb = normalize_supply(env, ctx, a), normalize_supply(env, ctx, b)
            atom = AtomHom(na.atoms, nb.atoms)
            bridge, back = _hom_bridge(w, na, nb)
            to, frm = _single(reify_atom(atom))
            return [atom], Comp(to, bridge), Comp(back, frm)
        case SupAbs(dom, body):
            nb = normalize_supply(env, ctx.extend(w.name, dom), body)
            atom = AtomAbs(nf(env, dom), nb.atoms, w.name)
            bridge, back = _abs_bridge(w, nb, atom)
            to, frm = _single(reify_atom(atom))
            return [atom], Comp(to, bridge), Comp(back, frm)
        case Bang(s):
            ns = normalize_supply(env, ctx, s)
            atom = AtomBang(ns.atoms)
            to, frm = _single(reify_atom(atom))
            return [atom], Comp(to, BangF(ns.to_nf)), Comp(BangF(ns.from_nf), frm)
        case _:
            atom = AtomNeutral(nf(env, w))
    to, frm = _single(reify_atom(atom))
    return [atom], to, frm


def _flatten_iota(env: Env, ctx: Context, t: Term) -> tuple[list, Term, Term]:
    match t:
        case Tt():
            return [], OplTt(), LaxTt()
        case Pair(a, b):
            xs, to, frm = _flatten(env, ctx, Tensor(Iota(a), Iota(b)))
            return xs, Comp(to, OplPair(a, b)), Comp(LaxPair(a, b), frm)
        case Inl(a) | Inr(a) | Init(a):
            sec, ret = {Inl: (SecInl, RetInl), Inr: (SecInr, RetInr), Init: (SecInit, RetInit)}[type(t)]
            xs, to, frm = _flatten(env, ctx, Iota(a))
            return xs, Comp(to, sec(a)), Comp(ret(a), frm)
    atom = AtomIota(nf(env, t))
    to, frm = _single(reify_atom(atom))
    return [atom], to, frm


def _hom_bridge(h: Hom, na: Normalized, nb: Normalized) -> tuple[Term, Term]:
    la, lb = na.supply, nb.supply
    if h.src == la and h.tgt == lb:
        return Id(h), Id(h)
    new = Hom(la, lb)
    fwd = Curry(Comp(nb.to_nf, Comp(Uncurry(Id(h)), TensorF(Id(h), na.from_nf))))
    back = Curry(Comp(nb.from_nf, Comp(Uncurry(Id(new)), TensorF(Id(new), na.to_nf))))
    return fwd, back


def _abs_bridge(lam: SupAbs, nb: Normalized, atom: AtomAbs) -> tuple[Term, Term]:
    new = reify_atom(atom)
    if lam.body == nb.supply:
        return Id(lam), Id(lam)
    fwd = Bind(lam.dom, Comp(nb.to_nf, Free(Id(weaken(lam)), Var(0))), lam.name)
    back = Bind(lam.dom, Comp(nb.from_nf, Free(Id(weaken(new)), Var(0))), lam.name)
    return fwd, back


def _transposition(prefix: list, x: Term, y: Term, rest: Term) -> Term:
    """Swap the adjacent atoms ``x`` and ``y`` sitting after ``prefix``."""
    core = Comp(Assoc(y, x, rest), Comp(TensorF(Swap(x, y), Id(rest)), assoc_inv(x, y, rest)))
    for p in reversed(prefix):
        core = TensorF(Id(p), core)
    return core


def _sort(atoms: list) -> tuple[list, Term, Term]:
    """Bubble sort with explicit transpositions, returning both directions."""
    xs = list(atoms)
    fwd: list[Term] = []
    back: list[Term] = []
    n = len(xs)
    for i in range(n):
        for j in range(n - 1 - i):
            if atom_key(xs[j + 1]) < atom_key(xs[j]):
                prefix = [reify_atom(a) for a in xs[:j]]
                x, y = reify_atom(xs[j]), reify_atom(xs[j + 1])
                rest = reify(xs[j + 2 :])
                fwd.append(_transposition(prefix, x, y, rest))
                back.append(_transposition(prefix, y, x, rest))
                xs[j], xs[j + 1] = xs[j + 1], xs[j]
    if not fwd:
        ident = Id(reify(xs))
        return xs, ident, ident
    to = fwd[0]
    for p in fwd[1:]:
        to = Comp(p, to)
    frm = back[-1]
    for p in reversed(back[:-1]):
        frm = Comp(p, frm)
    return xs, to, frm


def normalize_supply(env: Env, ctx: Context, d: Term) -> Normalized:
    atoms, to, frm = _flatten(env, ctx, d)
    atoms, sort_to, sort_from = _sort(atoms)
    if not isinstance(sort_to, Id):
        to, frm = Comp(sort_to, to), Comp(frm, sort_from)
    return Normalized(tuple(atoms), to, frm)


def solve(env: Env, ctx: Context, src: Term, tgt: Term) -> Term | MismatchResidue:
    """A production ``src ▷ tgt``, or the atoms that fail to match."""
    n0 = normalize_supply(env, ctx, src)
    n1 = normalize_supply(env, ctx, tgt)
    if n0.atoms == n1.atoms:
        return Comp(n1.from_nf, n0.to_nf)
    c0, c1 = Counter(n0.atoms), Counter(n1.atoms)
    left = tuple(sorted((c0 - c1).elements(), key=atom_key))
    right = tuple(sorted((c1 - c0).elements(), key=atom_key))
    return MismatchResidue(left, right)


def solve_or_fail(env: Env, ctx: Context, src: Term, tgt: Term) -> Term:
    out = solve(env, ctx, src, tgt)
    if isinstance(out, MismatchResidue):
        fail(
            "solver-residue",
            "no production between the supplies; unmatched atoms remain",
            residue=out.as_residue(ctx.names()),
        )
    return out


# -- symmetry ----------------------------------------------------------------

_INVERSE = {
    Unitr: UnitrInv,
    UnitrInv: Unitr,
    OplPair: LaxPair,
    LaxPair: OplPair,
    SecInl: RetInl,
    RetInl: SecInl,
    SecInr: RetInr,
    RetInr: SecInr,
    SecInit: RetInit,
    RetInit: SecInit,
}


def symmetrize(env: Env, ctx: Context, p: Term) -> Term:
    """Invert a production built from the basic and data-type rules."""
    match p:
        case Id():
            return p
        case Comp(b, a):
            return Comp(symmetrize(env, ctx, a), symmetrize(env, ctx, b))
        case TensorF(l, r):
            return TensorF(symmetrize(env, ctx, l), symmetrize(env, ctx, r))
        case Assoc(a, b, c):
            return assoc_inv(a, b, c)
        case Swap(a, b):
            return Swap(b, a)
        case BangF(q):
            return BangF(symmetrize(env, ctx, q))
        case Curry(Comp(t, Comp(Uncurry(Id(h)), TensorF(Id(h2), f)))) if h == h2:
            # a hom bridge: conjugation by invertible productions
            new = endpoints(env, ctx, p)[1]
            return Curry(Comp(symmetrize(env, ctx, t), Comp(Uncurry(Id(new)), TensorF(Id(new), symmetrize(env, ctx, f)))))
        case Bind(dom, Comp(t, Free(Id(lam), Var(0)))):
            inner = ctx.extend(p.name, dom)
            new = weaken(endpoints(env, ctx, p)[1])
            return Bind(dom, Comp(symmetrize(env, inner, t), Free(Id(new), Var(0))), p.name)
        case OplTt():
            return LaxTt()
        case LaxTt():
            return OplTt()
    inv = _INVERSE.get(type(p))
    if inv is None:
        fail("not-invertible", f"{type(p).__name__} has no inverse production")
    return inv(*[getattr(p, f.name) for f in fields(p)])


# -- independent oracle ------------------------------------------------------


def _rewrites(t: Term):
    """Every supply reachable from ``t`` by one rule at one position."""
    # at the root
    match t:
        case Tensor(Tensor(a, b), c):
            yield Tensor(a, Tensor(b, c))
    match t:
        case Tensor(a, Tensor(b, c)):
            yield Tensor(Tensor(a, b), c)
    match t:
        case Tensor(a, b):
            yield Tensor(b, a)
            if b == Empty():
                yield a
    yield Tensor(t, Empty())
    match t:
        case Iota(Tt()):
            yield Empty()
        case Empty():
            yield Iota(Tt())
        case Iota(Pair(a, b)):
            yield Tensor(Iota(a), Iota(b))
        case Tensor(Iota(a), Iota(b)):
            yield Iota(Pair(a, b))
    match t:
        case Iota(Inl(a)) | Iota(Inr(a)) | Iota(Init(a)):
            yield Iota(a)
    match t:
        case Iota(a):
            yield Iota(Inl(a))
            yield Iota(Inr(a))
            yield Iota(Init(a))
    # below the root, through tensors
    if isinstance(t, Tensor):
        for l2 in _rewrites(t.left):
            yield Tensor(l2, t.right)
        for r2 in _rewrites(t.right):
            yield Tensor(t.left, r2)


def brute_force_reachable(
    env: Env,
    ctx: Context,
    src: Term,
    tgt: Term,
    depth: int,
    slack: int = 4,
    max_states: int = 200_000,
) -> bool:
    """Breadth-first search over single rule applications from both ends.

    The rule set is closed under inverses, so meeting in the middle is sound.
    """
    a, b = nf(env, src), nf(env, tgt)
    if a == b:
        return True
    bound = max(size(a), size(b)) + slack
    seen = [{a: 0}, {b: 0}]
    frontier = [deque([a]), deque([b])]
    budget = [(depth + 1) // 2, depth // 2]
    for step in range(depth):
        side = step % 2
        if budget[side] == 0:
            side = 1 - side
        budget[side] -= 1
        nxt: deque = deque()
        mine, other = seen[side], seen[1 - side]
        for s in frontier[side]:
            for r in _rewrites(s):
                if r in mine or size(r) > bound:
                    continue
                if r in other:
                    return True
                mine[r] = 0
                nxt.append(r)
                if len(mine) > max_states:
                    return False
        frontier[side] = nxt
    return False

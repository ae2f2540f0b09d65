"""Unified term syntax: host terms, types, supplies and productions.

Variables are de Bruijn indices. Binder name hints and type annotations on
constructors are carried for printing and inference only; they never take
part in equality.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from functools import lru_cache
from typing import Callable, ClassVar


@dataclass(frozen=True)
class Term:
    # field name -> number of binders the field lives under
    binders: ClassVar[dict[str, int]] = {}

    def __str__(self) -> str:
        from .pretty import show

        return show(self)


def _hint(default: str = "x"):
    return field(default=default, compare=False, repr=False)


def _ann():
    return field(default=None, compare=False, repr=False)


# -- host theory -------------------------------------------------------------


@dataclass(frozen=True)
class Var(Term):
    index: int


@dataclass(frozen=True)
class Universe(Term):
    pass


@dataclass(frozen=True)
class Const(Term):
    name: str


@dataclass(frozen=True)
class Pi(Term):
    dom: Term
    cod: Term
    name: str = _hint()
    binders = {"cod": 1}


@dataclass(frozen=True)
class Lam(Term):
    body: Term
    dom: Term | None = _ann()
    name: str = _hint()
    binders = {"body": 1}


@dataclass(frozen=True)
class App(Term):
    fn: Term
    arg: Term


@dataclass(frozen=True)
class Sigma(Term):
    fst_ty: Term
    snd_ty: Term
    name: str = _hint()
    binders = {"snd_ty": 1}


@dataclass(frozen=True)
class Pair(Term):
    fst: Term
    snd: Term
    ann: Term | None = _ann()


@dataclass(frozen=True)
class Fst(Term):
    pair: Term


@dataclass(frozen=True)
class Snd(Term):
    pair: Term


@dataclass(frozen=True)
class SigmaCase(Term):
    """Dependent pair eliminator; the body binds both components."""

    scrutinee: Term
    motive: Term
    body: Term
    names: tuple[str, str] = field(default=("x", "y"), compare=False, repr=False)
    binders = {"motive": 1, "body": 2}


@dataclass(frozen=True)
class Sum(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Inl(Term):
    value: Term
    ann: Term | None = _ann()


@dataclass(frozen=True)
class Inr(Term):
    value: Term
    ann: Term | None = _ann()


@dataclass(frozen=True)
class SumCase(Term):
    scrutinee: Term
    motive: Term
    left: Term
    right: Term
    names: tuple[str, str] = field(default=("x", "y"), compare=False, repr=False)
    binders = {"motive": 1, "left": 1, "right": 1}


@dataclass(frozen=True)
class Unit(Term):
    pass


@dataclass(frozen=True)
class Tt(Term):
    pass


@dataclass(frozen=True)
class UnitCase(Term):
    scrutinee: Term
    motive: Term
    branch: Term
    binders = {"motive": 1}


@dataclass(frozen=True)
class Mu(Term):
    functor: Term
    name: str = _hint("X")
    binders = {"functor": 1}


@dataclass(frozen=True)
class Init(Term):
    value: Term
    ann: Term | None = _ann()


@dataclass(frozen=True)
class MuCase(Term):
    scrutinee: Term
    motive: Term
    branch: Term
    name: str = _hint("u")
    binders = {"motive": 1, "branch": 1}


@dataclass(frozen=True)
class Ann(Term):
    term: Term
    type: Term


# -- supplies ----------------------------------------------------------------


@dataclass(frozen=True)
class SupplyTy(Term):
    pass


@dataclass(frozen=True)
class Empty(Term):
    pass


@dataclass(frozen=True)
class Tensor(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Iota(Term):
    term: Term


@dataclass(frozen=True)
class Hom(Term):
    src: Term
    tgt: Term


@dataclass(frozen=True)
class SupAbs(Term):
    dom: Term
    body: Term
    name: str = _hint()
    binders = {"body": 1}


@dataclass(frozen=True)
class Bang(Term):
    supply: Term


@dataclass(frozen=True)
class Pow(Term):
    base: Term
    exponent: Term


@dataclass(frozen=True)
class ProdTy(Term):
    src: Term
    tgt: Term


# -- productions -------------------------------------------------------------


class Production(Term):
    """Marker base for production constructors."""


@dataclass(frozen=True)
class Id(Production):
    supply: Term


@dataclass(frozen=True)
class Comp(Production):
    """``second ∘ first``."""

    second: Term
    first: Term


@dataclass(frozen=True)
class TensorF(Production):
    left: Term
    right: Term


@dataclass(frozen=True)
class Assoc(Production):
    a: Term
    b: Term
    c: Term


@dataclass(frozen=True)
class Swap(Production):
    a: Term
    b: Term


@dataclass(frozen=True)
class Unitr(Production):
    supply: Term


@dataclass(frozen=True)
class UnitrInv(Production):
    supply: Term


@dataclass(frozen=True)
class OplTt(Production):
    pass


@dataclass(frozen=True)
class LaxTt(Production):
    pass


@dataclass(frozen=True)
class OplPair(Production):
    fst: Term
    snd: Term


@dataclass(frozen=True)
class LaxPair(Production):
    fst: Term
    snd: Term


@dataclass(frozen=True)
class SecInl(Production):
    value: Term


@dataclass(frozen=True)
class RetInl(Production):
    value: Term


@dataclass(frozen=True)
class SecInr(Production):
    value: Term


@dataclass(frozen=True)
class RetInr(Production):
    value: Term


@dataclass(frozen=True)
class SecInit(Production):
    value: Term


@dataclass(frozen=True)
class RetInit(Production):
    value: Term


@dataclass(frozen=True)
class Curry(Production):
    prod: Term


@dataclass(frozen=True)
class Uncurry(Production):
    prod: Term


@dataclass(frozen=True)
class Bind(Production):
    dom: Term
    body: Term
    name: str = _hint()
    binders = {"body": 1}


@dataclass(frozen=True)
class Free(Production):
    prod: Term
    arg: Term


@dataclass(frozen=True)
class BangF(Production):
    prod: Term


@dataclass(frozen=True)
class Dupl(Production):
    supply: Term


@dataclass(frozen=True)
class Erase(Production):
    supply: Term


@dataclass(frozen=True)
class Use(Production):
    supply: Term


@dataclass(frozen=True)
class Mult(Production):
    supply: Term


@dataclass(frozen=True)
class CohEmpty(Production):
    pass


@dataclass(frozen=True)
class CohTensor(Production):
    a: Term
    b: Term


@dataclass(frozen=True)
class Hole(Term):
    """Placeholder in user-written productions, filled before checking."""


# -- generic traversal -------------------------------------------------------


@lru_cache(maxsize=None)
def layout(cls: type) -> tuple[tuple[str, int, bool, bool], ...]:
    out = []
    for f in fields(cls):
        is_term = f.name not in ("name", "names", "index")
        out.append((f.name, cls.binders.get(f.name, 0), is_term, f.compare))
    return tuple(out)


def children(t: Term) -> list[tuple[Term, int]]:
    """Immediate subterms with the number of binders each sits under."""
    out = []
    for name, k, is_term, _ in layout(type(t)):
        if is_term:
            v = getattr(t, name)
            if v is not None:
                out.append((v, k))
    return out


def map_vars(t: Term, on_var: Callable[[int, int], Term], depth: int = 0) -> Term:
    """Rebuild ``t`` replacing every variable via ``on_var(index, depth)``."""
    if isinstance(t, Var):
        return on_var(t.index, depth)
    shape = layout(type(t))
    if not shape:
        return t
    vals = []
    changed = False
    for name, k, is_term, _ in shape:
        v = getattr(t, name)
        if is_term and v is not None:
            nv = map_vars(v, on_var, depth + k)
            changed = changed or nv is not v
            v = nv
        vals.append(v)
    if not changed:
        return t
    return type(t)(*vals)


def weaken(t: Term, cut: int = 0, amount: int = 1) -> Term:
    """Shift free indices ``>= cut`` up by ``amount``."""
    if amount == 0:
        return t

    def on_var(i: int, d: int) -> Term:
        return Var(i + amount) if i >= cut + d else Var(i)

    return map_vars(t, on_var)


def substitute(t: Term, target: int, s: Term) -> Term:
    """Replace index ``target`` by ``s``; indices above it drop by one.

    ``s`` is scoped in the context with the target binding removed.
    """

    def on_var(i: int, d: int) -> Term:
        if i < target + d:
            return Var(i)
        if i == target + d:
            return weaken(s, 0, d)
        return Var(i - 1)

    return map_vars(t, on_var)


def instantiate(body: Term, s: Term) -> Term:
    """Substitute ``s`` for the innermost bound variable of ``body``."""
    return substitute(body, 0, s)


def replace_var(t: Term, target: int, s: Term) -> Term:
    """Replace index ``target`` by ``s`` leaving every other index alone."""

    def on_var(i: int, d: int) -> Term:
        if i == target + d:
            return weaken(s, 0, d)
        return Var(i)

    return map_vars(t, on_var)


def free_indices(t: Term) -> set[int]:
    out: set[int] = set()

    def visit(u: Term, depth: int) -> None:
        if isinstance(u, Var):
            if u.index >= depth:
                out.add(u.index - depth)
            return
        for c, k in children(u):
            visit(c, depth + k)

    visit(t, 0)
    return out


def mentions_const(t: Term, name: str) -> bool:
    if isinstance(t, Const):
        return t.name == name
    return any(mentions_const(c, name) for c, _ in children(t))


def term_key(t: Term) -> tuple:
    """Hashable structural key ignoring hints and annotations; a total order."""
    parts: list = [type(t).__name__]
    for f in fields(t):
        if not f.compare:
            continue
        v = getattr(t, f.name)
        parts.append(term_key(v) if isinstance(v, Term) else (v,))
    return tuple(parts)


def size(t: Term) -> int:
    return 1 + sum(size(c) for c, _ in children(t))


# -- library encodings -------------------------------------------------------

NAT = Mu(Sum(Unit(), Var(0)), name="ℕ")
BOOL = Sum(Unit(), Unit())
NAT_BODY = Sum(Unit(), NAT)


def maybe(a: Term) -> Term:
    return Sum(a, Unit())


def list_of(a: Term) -> Term:
    return Mu(Sum(Unit(), Sigma(weaken(a), Var(1), name="_")), name="X")


def zero() -> Term:
    return Init(Inl(Tt(), ann=NAT_BODY), ann=NAT)


def suc(n: Term) -> Term:
    return Init(Inr(n, ann=NAT_BODY), ann=NAT)


def numeral(k: int) -> Term:
    t = zero()
    for _ in range(k):
        t = suc(t)
    return t


def as_numeral(t: Term) -> int | None:
    """Read a closed numeral from a normal form, else None."""
    k = 0
    while True:
        match t:
            case Init(Inl(Tt())):
                return k
            case Init(Inr(n)):
                k += 1
                t = n
            case _:
                return None


TRUE = Inl(Tt(), ann=BOOL)
FALSE = Inr(Tt(), ann=BOOL)


def tensor_all(parts: list[Term]) -> Term:
    """Right-nested tensor ending in the empty supply."""
    out: Term = Empty()
    for p in reversed(parts):
        out = Tensor(p, out)
    return out

"""Linear types: an intuitionistic type with a supply family over it."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union

from .syntax import (
    App,
    Bang,
    Hom,
    Iota,
    Pi,
    Pow,
    ProdTy,
    Sigma,
    SupAbs,
    Term,
    Var,
    substitute,
    weaken,
)


class _BangMark:
    def __repr__(self) -> str:
        return "BANG"


BANG = _BangMark()


@dataclass(frozen=True)
class LBase:
    """``(A , ι)``."""

    ty: Term


@dataclass(frozen=True)
class LGen:
    """``(A , Θ)`` with ``Θ`` under one binder."""

    ty: Term
    fam: Term


@dataclass(frozen=True)
class LArrow:
    """``⟨x : dom⟩^mult ⊸ cod``; ``cod`` sits under the binder ``x``."""

    dom: "LType"
    mult: Union[Term, _BangMark]
    cod: "LType"
    name: str = "x"


LType = Union[LBase, LGen, LArrow]


def base(lt: LType) -> Term:
    match lt:
        case LBase(ty) | LGen(ty, _):
            return ty
        case LArrow(dom, _, cod):
            return Pi(base(dom), base(cod), lt.name)
    raise TypeError(lt)


def domain_supply(lt: LArrow) -> Term:
    """The supply consumed per call, in the context extended by the argument."""
    theta = fam(lt.dom)
    if lt.mult is BANG:
        return Bang(theta)
    return Pow(theta, weaken(lt.mult))


def fam(lt: LType) -> Term:
    """Supply family, with index 0 standing for the inhabitant."""
    match lt:
        case LBase():
            return Iota(Var(0))
        case LGen(_, f):
            return f
        case LArrow(dom, mult, cod):
            # under f, then x
            theta0 = weaken(fam(dom), 1, 1)
            consumed = Bang(theta0) if mult is BANG else Pow(theta0, weaken(mult, 0, 2))
            produced = substitute(weaken(fam(cod), 2, 1), 0, App(Var(1), Var(0)))
            return SupAbs(weaken(base(dom)), Hom(consumed, produced), lt.name)
    raise TypeError(lt)


def lmap(lt: LType, fn: Callable[[Term, int], Term], depth: int = 0) -> LType:
    """Apply ``fn(term, extra_binders)`` to every component."""
    match lt:
        case LBase(ty):
            return LBase(fn(ty, depth))
        case LGen(ty, f):
            return LGen(fn(ty, depth), fn(f, depth + 1))
        case LArrow(dom, mult, cod):
            m = mult if mult is BANG else fn(mult, depth)
            return LArrow(lmap(dom, fn, depth), m, lmap(cod, fn, depth + 1), lt.name)
    raise TypeError(lt)


def lweaken(lt: LType, cut: int = 0, amount: int = 1) -> LType:
    return lmap(lt, lambda t, d: weaken(t, cut + d, amount))


def lsubst(lt: LType, target: int, s: Term) -> LType:
    return lmap(lt, lambda t, d: substitute(t, target + d, weaken(s, 0, d)))


def linstantiate(lt: LType, s: Term) -> LType:
    return lsubst(lt, 0, s)


def judgment(delta: Term, lt: LType) -> Term:
    """``Δ ⊩ L`` as the kernel type ``Σ[a ∈ A] (Δ ▷ Θ a)``."""
    return Sigma(base(lt), ProdTy(weaken(delta), fam(lt)), "a")


def fam_at(lt: LType, a: Term) -> Term:
    return substitute(fam(lt), 0, a)

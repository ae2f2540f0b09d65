"""Rendering terms as surface text."""

from __future__ import annotations

from .syntax import (
    Ann,
    App,
    Bang,
    BangF,
    Bind,
    Comp,
    Const,
    Empty,
    Fst,
    Hom,
    Init,
    Inl,
    Inr,
    Iota,
    Lam,
    Mu,
    MuCase,
    Pair,
    Pi,
    Pow,
    ProdTy,
    Production,
    Sigma,
    SigmaCase,
    Snd,
    Sum,
    SumCase,
    SupAbs,
    SupplyTy,
    Tensor,
    TensorF,
    Term,
    Tt,
    Unit,
    UnitCase,
    Universe,
    Var,
    as_numeral,
    free_indices,
    Hole,
)

# production constructor -> surface name
PRODUCTION_NAMES = {
    "Id": "id",
    "Assoc": "assoc",
    "Swap": "swap",
    "Unitr": "unitr",
    "UnitrInv": "unitr'",
    "OplTt": "opltt",
    "LaxTt": "laxtt",
    "OplPair": "opl",
    "LaxPair": "lax",
    "SecInl": "secinl",
    "RetInl": "retinl",
    "SecInr": "secinr",
    "RetInr": "retinr",
    "SecInit": "secinit",
    "RetInit": "retinit",
    "Curry": "curry",
    "Uncurry": "uncurry",
    "Free": "free",
    "Dupl": "dupl",
    "Erase": "erase",
    "Use": "use",
    "Mult": "mult",
    "CohEmpty": "coh-empty",
    "CohTensor": "coh-tensor",
}

ATOM, APP, INFIX, LOW = 3, 2, 1, 0


class _Printer:
    def __init__(self, names: list[str] | None):
        self.names = list(names or [])

    def fresh(self, hint: str) -> str:
        base = hint or "x"
        if base == "_":
            base = "x"
        name = base
        while name in self.names:
            name += "'"
        return name

    def under(self, hint: str, fn, *, used: bool = True):
        name = self.fresh(hint) if used else "_"
        self.names.append(name)
        try:
            return name, fn()
        finally:
            self.names.pop()

    def wrap(self, text: str, level: int, need: int) -> str:
        return f"({text})" if level < need else text

    def show(self, t: Term, need: int = LOW) -> str:
        text, level = self.render(t)
        return self.wrap(text, level, need)

    def render(self, t: Term) -> tuple[str, int]:
        k = as_numeral(t)
        if k is not None:
            return str(k), ATOM
        match t:
            case Var(i):
                if i < len(self.names):
                    return self.names[-1 - i], ATOM
                return f"#{i}", ATOM
            case Universe():
                return "Type", ATOM
            case Const(n):
                return n, ATOM
            case Hole():
                return "_", ATOM
            case Pi(a, b):
                dom = self.show(a, INFIX)
                if 0 not in free_indices(b):
                    _, cod = self.under("_", lambda: self.show(b, LOW))
                    return f"{dom} → {cod}", LOW
                x, cod = self.under(t.name, lambda: self.show(b, LOW))
                return f"({x} : {self.show(a)}) → {cod}", LOW
            case Lam(body):
                x, b = self.under(t.name, lambda: self.show(body))
                return f"fun {x} => {b}", LOW
            case App(f, a):
                return f"{self.show(f, APP)} {self.show(a, ATOM)}", APP
            case Sigma(a, b):
                if 0 not in free_indices(b):
                    _, snd = self.under("_", lambda: self.show(b, APP))
                    return f"{self.show(a, APP)} × {snd}", INFIX
                x, snd = self.under(t.name, lambda: self.show(b))
                return f"Σ ({x} : {self.show(a)}) {snd}", LOW
            case Pair(a, b):
                return f"({self.show(a)} , {self.show(b)})", ATOM
            case Fst(p):
                return f"fst {self.show(p, ATOM)}", APP
            case Snd(p):
                return f"snd {self.show(p, ATOM)}", APP
            case Sum(a, b):
                return f"{self.show(a, APP)} + {self.show(b, INFIX)}", INFIX
            case Inl(a):
                return f"inl {self.show(a, ATOM)}", APP
            case Inr(a):
                return f"inr {self.show(a, ATOM)}", APP
            case Unit():
                return "⊤", ATOM
            case Tt():
                return "tt", ATOM
            case Mu(f):
                x, body = self.under(t.name, lambda: self.show(f))
                return f"μ {x}. {body}", LOW
            case Init(a):
                return f"init {self.show(a, ATOM)}", APP
            case SumCase(s, _, left, right):
                x, l = self.under(t.names[0], lambda: self.show(left))
                y, r = self.under(t.names[1], lambda: self.show(right))
                return f"case {self.show(s)} of {{ inl {x} → {l} ; inr {y} → {r} }}", LOW
            case UnitCase(s, _, branch):
                return f"case {self.show(s)} of {{ tt → {self.show(branch)} }}", LOW
            case MuCase(s, _, branch):
                x, b = self.under(t.name, lambda: self.show(branch))
                return f"case {self.show(s)} of {{ init {x} → {b} }}", LOW
            case SigmaCase(s, _, body):
                x = self.fresh(t.names[0])
                self.names.append(x)
                y, b = self.under(t.names[1], lambda: self.show(body))
                self.names.pop()
                return f"case {self.show(s)} of {{ ({x} , {y}) → {b} }}", LOW
            case Ann(a, ty):
                return f"({self.show(a)} : {self.show(ty)})", ATOM
            case SupplyTy():
                return "Supply", ATOM
            case Empty():
                return "◇", ATOM
            case Tensor(a, b):
                return f"{self.show(a, APP)} ⊗ {self.show(b, INFIX)}", INFIX
            case Iota(a):
                return f"ι {self.show(a, ATOM)}", APP
            case Hom(a, b):
                return f"[{self.show(a)} , {self.show(b)}]", ATOM
            case SupAbs(a, body):
                x, b = self.under(t.name, lambda: self.show(body))
                return f"Λ {x} : {self.show(a, APP)}. {b}", LOW
            case Bang(a):
                return f"! {self.show(a, ATOM)}", APP
            case Pow(a, m):
                return f"{self.show(a, ATOM)} ^ {self.show(m, ATOM)}", APP
            case ProdTy(a, b):
                return f"{self.show(a, INFIX)} ▷ {self.show(b, INFIX)}", LOW
            case Comp(b, a):
                return f"{self.show(b, APP)} ∘ {self.show(a, INFIX)}", INFIX
            case TensorF(a, b):
                return f"{self.show(a, APP)} ⊗f {self.show(b, INFIX)}", INFIX
            case BangF(p):
                return f"!f {self.show(p, ATOM)}", APP
            case Bind(a, body):
                x, b = self.under(t.name, lambda: self.show(body, ATOM))
                return f"bind {x} : {self.show(a, ATOM)}. {b}", LOW
            case Production():
                name = PRODUCTION_NAMES[type(t).__name__]
                args = [self.show(getattr(t, f), ATOM) for f in _field_names(t)]
                return " ".join([name] + args), (APP if args else ATOM)
        return repr(t), ATOM


def show(t: Term, names: list[str] | None = None) -> str:
    return _Printer(names).show(t)


# -- values at known types ---------------------------------------------------


def show_value(env, t: Term, ty: Term) -> str:
    """Print a closed normal form guided by its type (numerals, lists, booleans)."""
    from .kernel import whnf
    from .syntax import NAT, BOOL

    tyw = whnf(env, ty)
    if tyw == NAT:
        k = as_numeral(t)
        if k is not None:
            return str(k)
    if tyw == BOOL:
        if isinstance(t, Inl):
            return "true"
        if isinstance(t, Inr):
            return "false"
    match tyw, t:
        case Sigma(a, b), Pair(x, y):
            from .syntax import instantiate

            return f"({show_value(env, x, a)} , {show_value(env, y, instantiate(b, x))})"
        case Sum(a, Unit()), Inl(x):
            return f"just {_paren(show_value(env, x, a))}"
        case Sum(_, Unit()), Inr(Tt()):
            return "nothing"
        case Sum(a, _), Inl(x):
            return f"inl {_paren(show_value(env, x, a))}"
        case Sum(_, b), Inr(x):
            return f"inr {_paren(show_value(env, x, b))}"
        case Mu(f), Init(_):
            items = _as_list(env, t, tyw)
            if items is not None:
                return "[" + ", ".join(items) + "]"
    return show(t)


def _as_list(env, t: Term, ty: Mu) -> list[str] | None:
    from .syntax import instantiate

    layer = instantiate(ty.functor, ty)
    match layer:
        case Sum(Unit(), Sigma(elem, _)):
            pass
        case _:
            return None
    out = []
    while True:
        match t:
            case Init(Inl(Tt())):
                return out
            case Init(Inr(Pair(x, rest))):
                out.append(show_value(env, x, elem))
                t = rest
            case _:
                return None


def _paren(s: str) -> str:
    return s if " " not in s or s.startswith(("(", "[")) and s.endswith((")", "]")) else f"({s})"


def _field_names(t: Term) -> list[str]:
    from dataclasses import fields

    return [f.name for f in fields(t)]

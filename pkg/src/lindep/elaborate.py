"""From surface syntax to kernel terms: host terms, patterns and productions."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from . import supply as sup
from .supply import endpoints
from .diagnostics import LinDepError, fail
from .kernel import Context, Env, conv, infer as kinfer, nf, whnf
from .ltypes import BANG, LArrow, LBase, LType, base, judgment, lmap
from .parser import (
    S,
    SAbs,
    SAnn,
    SApp,
    SArrow,
    SBang,
    SBnat,
    SCase,
    SEmpty,
    SFun,
    SHole,
    SHom,
    SIf,
    SIota,
    SMu,
    SName,
    SNum,
    SOp,
    SPair,
    SPat,
    SPi,
    SSigma,
)
from .syntax import (
    BOOL,
    FALSE,
    NAT,
    TRUE,
    App,
    Assoc,
    Bang,
    BangF,
    CohEmpty,
    CohTensor,
    Comp,
    Const,
    Curry,
    Dupl,
    Empty,
    Erase,
    Free,
    Hole,
    Hom,
    Id,
    Init,
    Inl,
    Inr,
    Iota,
    Lam,
    LaxPair,
    LaxTt,
    Mu,
    MuCase,
    Mult,
    OplPair,
    OplTt,
    Pair,
    Pi,
    Pow,
    ProdTy,
    RetInit,
    RetInl,
    RetInr,
    SecInit,
    SecInl,
    SecInr,
    Sigma,
    SigmaCase,
    Sum,
    SumCase,
    SupAbs,
    SupplyTy,
    Swap,
    Tensor,
    TensorF,
    Term,
    Tt,
    Uncurry,
    Unit,
    UnitCase,
    Unitr,
    UnitrInv,
    Universe,
    Use,
    Var,
    Fst,
    Snd,
    instantiate,
    list_of,
    maybe,
    numeral,
    replace_var,
    weaken,
)
from .pretty import show

# -- scopes ------------------------------------------------------------------


@dataclass(frozen=True)
class Scope:
    """Kernel context plus surface names, aliases and linear annotations."""

    ctx: Context = Context()
    metas: tuple = ()
    names: tuple = ()  # (name, level) or (name, (term, depth))

    def bind(self, name: str, ty: Term, meta: LType | None = None) -> "Scope":
        level = len(self.ctx)
        names = self.names if name == "_" else self.names + ((name, level),)
        return Scope(self.ctx.extend(name, ty), self.metas + (meta,), names)

    def alias(self, name: str, term: Term) -> "Scope":
        if name == "_":
            return self
        return Scope(self.ctx, self.metas, self.names + ((name, (term, len(self.ctx))),))

    def resolve(self, name: str) -> Term | None:
        for n, where in reversed(self.names):
            if n == name:
                if isinstance(where, int):
                    return Var(len(self.ctx) - 1 - where)
                term, depth = where
                return weaken(term, 0, len(self.ctx) - depth)
        return None

    def meta(self, index: int) -> LType | None:
        from .ltypes import lweaken

        m = self.metas[-1 - index]
        return None if m is None else lweaken(m, 0, index + 1)


# -- goals for pattern matching ----------------------------------------------


@dataclass(frozen=True)
class HostGoal:
    ty: Term

    def kernel_type(self) -> Term:
        return self.ty

    def map(self, fn: Callable[[Term, int], Term]) -> "HostGoal":
        return HostGoal(fn(self.ty, 0))


@dataclass(frozen=True)
class LinGoal:
    delta: Term
    lt: LType

    def kernel_type(self) -> Term:
        return judgment(self.delta, self.lt)

    def map(self, fn: Callable[[Term, int], Term]) -> "LinGoal":
        return LinGoal(fn(self.delta, 0), lmap(self.lt, fn))


def _refine(goal, k: int, scrut: Term, pattern: Term):
    """Weaken the goal past ``k`` new binders and rewrite the scrutinee to ``pattern``."""
    goal = goal.map(lambda t, d: weaken(t, d, k))
    s = weaken(scrut, 0, k)
    if isinstance(s, Var):
        goal = goal.map(lambda t, d: replace_var(t, s.index + d, weaken(pattern, 0, d)))
    return goal


def _motive(goal, scrut: Term) -> Term:
    ty = weaken(goal.kernel_type(), 0, 1)
    if isinstance(scrut, Var):
        return replace_var(ty, scrut.index + 1, Var(0))
    return ty


# patterns: ("var", name) | ("wild",) | (ctor, [sub]) for ctor in inl/inr/init/pair/tt

WILD = ("wild",)


def _v(name: str):
    return WILD if name == "_" else ("var", name)


def _pattern(p: SPat):
    c, args = p.ctor, p.args

    def arity(n: int) -> None:
        if len(args) != n:
            fail("pattern-arity", f"{c} takes {n} pattern argument(s)")

    match c:
        case ",":
            return ("pair", [_v(args[0]), _v(args[1])])
        case "true" | "false" | "nothing" | "tt":
            arity(0)
            return {"true": ("inl", [WILD]), "false": ("inr", [WILD]), "nothing": ("inr", [WILD]), "tt": ("tt", [])}[c]
        case "just" | "inl" | "inr" | "init":
            arity(1)
            return ("inr" if c == "inr" else "init" if c == "init" else "inl", [_v(args[0])])
        case "zero" | "nil":
            arity(0)
            return ("init", [("inl", [WILD])])
        case "suc":
            arity(1)
            return ("init", [("inr", [_v(args[0])])])
        case "cons":
            arity(2)
            return ("init", [("inr", [("pair", [_v(args[0]), _v(args[1])])])])
        case "_":
            return WILD
    if args:
        fail("unknown-constructor", f"unknown constructor {c} in pattern")
    return ("var", c)


# -- production table --------------------------------------------------------

# name -> argument kinds: s supply, t term, p production, n number
PRODUCTIONS: dict[str, str] = {
    "id": "s",
    "assoc": "sss",
    "assoc'": "sss",
    "swap": "ss",
    "unitr": "s",
    "unitr'": "s",
    "unitl": "s",
    "unitl'": "s",
    "opltt": "",
    "laxtt": "",
    "opl": "tt",
    "lax": "tt",
    "secinl": "t",
    "retinl": "t",
    "secinr": "t",
    "retinr": "t",
    "secinit": "t",
    "retinit": "t",
    "curry": "p",
    "uncurry": "p",
    "free": "pt",
    "!f": "p",
    "dupl": "s",
    "erase": "s",
    "use": "s",
    "mult": "s",
    "coh-empty": "",
    "coh-tensor": "ss",
    "distr": "nnss",
}

_SIMPLE = {
    "id": Id,
    "assoc": Assoc,
    "swap": Swap,
    "unitr": Unitr,
    "unitr'": UnitrInv,
    "opl": OplPair,
    "lax": LaxPair,
    "secinl": SecInl,
    "retinl": RetInl,
    "secinr": SecInr,
    "retinr": RetInr,
    "secinit": SecInit,
    "retinit": RetInit,
    "dupl": Dupl,
    "erase": Erase,
    "use": Use,
    "mult": Mult,
    "coh-tensor": CohTensor,
}


def _spine(s: S) -> tuple[S, list[S]]:
    args = []
    while isinstance(s, SApp):
        args.append(s.arg)
        s = s.fn
    args.reverse()
    return s, args


def _with_span(e: LinDepError, s: S, name: str | None = None) -> LinDepError:
    if e.diagnostic.span is None and getattr(s, "span", None) is not None:
        return LinDepError(e.diagnostic.with_span(s.span, name))
    return e


_TYPE_NAMES = {
    "Type": (Universe(), Universe()),
    "Supply": (SupplyTy(), Universe()),
    "ℕ": (NAT, Universe()),
    "Bool": (BOOL, Universe()),
    "⊤": (Unit(), Universe()),
    "tt": (Tt(), Unit()),
    "true": (TRUE, BOOL),
    "false": (FALSE, BOOL),
    "zero": (numeral(0), NAT),
    "opltt": (OplTt(), ProdTy(Iota(Tt()), Empty())),
    "laxtt": (LaxTt(), ProdTy(Empty(), Iota(Tt()))),
    "coh-empty": (CohEmpty(), ProdTy(Empty(), Bang(Empty()))),
}


class HostElaborator:
    def __init__(self, env: Env):
        self.env = env

    # names
    def show(self, sc: Scope, t: Term) -> str:
        return show(nf(self.env, t), sc.ctx.names())

    def _lookup(self, sc: Scope, name: str) -> tuple[Term, Term]:
        v = sc.resolve(name)
        if v is not None:
            return v, kinfer(self.env, sc.ctx, v)
        if name in _TYPE_NAMES:
            return _TYPE_NAMES[name]
        if name in self.env:
            return Const(name), self.env.lookup(name).type
        fail("unbound-name", f"unknown name {name}")

    # checking
    def check(self, sc: Scope, s: S, ty: Term) -> Term:
        try:
            return self._check(sc, s, ty)
        except LinDepError as e:
            raise _with_span(e, s) from None

    def _check(self, sc: Scope, s: S, ty: Term) -> Term:
        env = self.env
        tw = whnf(env, ty)
        match s:
            case SFun(name, dom, body) if isinstance(tw, Pi):
                if dom is not None:
                    d = self.check(sc, dom, Universe())
                    if not conv(env, d, tw.dom):
                        fail("type-mismatch", f"binder type {self.show(sc, d)} does not match {self.show(sc, tw.dom)}")
                return Lam(self.check(sc.bind(name, tw.dom), body, tw.cod), tw.dom, name)
            case SPair(a, b) if isinstance(tw, Sigma):
                a1 = self.check(sc, a, tw.fst_ty)
                b1 = self.check(sc, b, instantiate(tw.snd_ty, a1))
                return Pair(a1, b1, ann=ty)
            case SIf(c, t, e):
                return self.case(sc, c, [(SPat("true", []), t), (SPat("false", []), e)], HostGoal(ty), self._host_body)
            case SCase(scr, branches):
                return self.case(sc, scr, branches, HostGoal(ty), self._host_body)
            case SOp("×", l, r) if not isinstance(tw, Universe):
                return self._mul(sc, l, r)
        built = self._constructor(sc, s, ty, tw)
        if built is not None:
            return built
        t, got = self.infer(sc, s)
        if not conv(env, got, ty):
            fail("type-mismatch", f"expected {self.show(sc, ty)}, got {self.show(sc, got)}")
        return t

    def _host_body(self, sc: Scope, s: S, goal: HostGoal) -> Term:
        return self.check(sc, s, goal.ty)

    def _mul(self, sc: Scope, l: S, r: S) -> Term:
        return App(App(Const("mul"), self.check(sc, l, NAT)), self.check(sc, r, NAT))

    def _constructor(self, sc: Scope, s: S, ty: Term, tw: Term) -> Term | None:
        head, args = _spine(s)
        if not isinstance(head, SName) or sc.resolve(head.name) is not None:
            return None
        name = head.name
        if isinstance(tw, Sum):
            if name in ("inl", "just") and len(args) == 1:
                return Inl(self.check(sc, args[0], tw.left), ann=ty)
            if name == "inr" and len(args) == 1:
                return Inr(self.check(sc, args[0], tw.right), ann=ty)
            if name == "nothing" and not args:
                return Inr(self.check(sc, SName("tt"), tw.right), ann=ty)
        if isinstance(tw, Mu):
            layer = whnf(self.env, instantiate(tw.functor, tw))
            if name == "init" and len(args) == 1:
                return Init(self.check(sc, args[0], layer), ann=ty)
            if name == "nil" and not args and isinstance(layer, Sum):
                return Init(Inl(Tt(), ann=layer), ann=ty)
            if name == "cons" and len(args) == 2 and isinstance(layer, Sum):
                cell = whnf(self.env, layer.right)
                if isinstance(cell, Sigma):
                    x = self.check(sc, args[0], cell.fst_ty)
                    xs = self.check(sc, args[1], instantiate(cell.snd_ty, x))
                    return Init(Inr(Pair(x, xs, ann=layer.right), ann=layer), ann=ty)
        return None

    # inference
    def infer(self, sc: Scope, s: S) -> tuple[Term, Term]:
        try:
            return self._infer(sc, s)
        except LinDepError as e:
            raise _with_span(e, s) from None

    def _infer(self, sc: Scope, s: S) -> tuple[Term, Term]:
        env = self.env
        U, SUP = Universe(), SupplyTy()
        match s:
            case SName(name):
                if name in PRODUCTIONS and PRODUCTIONS[name] and sc.resolve(name) is None:
                    fail("production-arity", f"{name} expects {len(PRODUCTIONS[name])} argument(s)")
                return self._lookup(sc, name)
            case SNum(k):
                return numeral(k), NAT
            case SApp():
                return self._infer_app(sc, s)
            case SPi(name, dom, cod) | SSigma(name, dom, cod):
                d = self.check(sc, dom, U)
                c = self.check(sc.bind(name, d), cod, U)
                return (Pi if isinstance(s, SPi) else Sigma)(d, c, name), U
            case SFun(name, dom, body) if dom is not None:
                d = self.check(sc, dom, U)
                b, bt = self.infer(sc.bind(name, d), body)
                return Lam(b, d, name), Pi(d, bt, name)
            case SPair(a, b):
                a1, at = self.infer(sc, a)
                b1, bt = self.infer(sc, b)
                ty = Sigma(at, weaken(bt), "_")
                return Pair(a1, b1, ann=ty), ty
            case SAnn(term, ty):
                t1 = self.check(sc, ty, U)
                return self.check(sc, term, t1), t1
            case SIf(_, t, _):
                _, ty = self.infer(sc, t)
                return self.check(sc, s, ty), ty
            case SIota(term):
                return Iota(self.loose(sc, term)), SUP
            case SBang(term):
                return Bang(self.check(sc, term, SUP)), SUP
            case SEmpty():
                return Empty(), SUP
            case SHom(a, b):
                return Hom(self.check(sc, a, SUP), self.check(sc, b, SUP)), SUP
            case SAbs(name, dom, body):
                d = self.check(sc, dom, U)
                return SupAbs(d, self.check(sc.bind(name, d), body, SUP), name), SUP
            case SMu(name, body):
                return Mu(self.check(sc.bind(name, U), body, U), name), U
            case SBnat(term):
                return App(Const("bnat"), self.check(sc, term, BOOL)), NAT
            case SArrow():
                return base(self.ltype(sc, s)), U
            case SOp(op, l, r):
                return self._infer_op(sc, op, l, r)
            case SHole():
                fail("unfilled-hole", "`_` is only allowed inside a production after `by`")
        fail("not-a-host-term", "this form only makes sense inside a linear judgment")

    def _infer_op(self, sc: Scope, op: str, l: S, r: S) -> tuple[Term, Term]:
        U, SUP = Universe(), SupplyTy()
        match op:
            case "→":
                d = self.check(sc, l, U)
                return Pi(d, self.check(sc.bind("_", d), r, U), "_"), U
            case "×":
                a, at = self.infer(sc, l)
                if isinstance(whnf(self.env, at), Universe):
                    return Sigma(a, self.check(sc.bind("_", a), r, U), "_"), U
                return self._mul(sc, l, r), NAT
            case "+":
                return Sum(self.check(sc, l, U), self.check(sc, r, U)), U
            case "⊗":
                return Tensor(self.check(sc, l, SUP), self.check(sc, r, SUP)), SUP
            case "^":
                return Pow(self.check(sc, l, SUP), self.check(sc, r, NAT)), SUP
            case "▷":
                return ProdTy(self.check(sc, l, SUP), self.check(sc, r, SUP)), U
            case "⊩":
                delta = self.check(sc, l, SUP)
                return judgment(delta, self.ltype(sc, r)), U
            case "∘" | "⊗f":
                p = (Comp if op == "∘" else TensorF)(self.infer(sc, l)[0], self.infer(sc, r)[0])
                src, tgt = endpoints(self.env, sc.ctx, p)
                return p, ProdTy(src, tgt)
        fail("not-a-host-term", f"`{op}` only makes sense inside a linear judgment")

    def _infer_app(self, sc: Scope, s: S) -> tuple[Term, Term]:
        U = Universe()
        head, args = _spine(s)
        if isinstance(head, SName) and sc.resolve(head.name) is None:
            name, n = head.name, len(args)
            if name in ("Maybe", "List") and n == 1:
                a = self.check(sc, args[0], U)
                return (maybe(a) if name == "Maybe" else list_of(a)), U
            if name == "suc" and n == 1:
                k = self.check(sc, args[0], NAT)
                return Init(Inr(k, ann=Sum(Unit(), NAT)), ann=NAT), NAT
            if name == "Σ" and n == 2:
                a = self.check(sc, args[0], U)
                fam = self.check(sc, args[1], Pi(a, U, "_"))
                return Sigma(a, App(weaken(fam), Var(0)), "_"), U
            if name == "just" and n == 1:
                a, at = self.infer(sc, args[0])
                return Inl(a, ann=maybe(at)), maybe(at)
            if name in ("fst", "snd") and n == 1:
                p, pt = self.infer(sc, args[0])
                pw = whnf(self.env, pt)
                if not isinstance(pw, Sigma):
                    fail("type-mismatch", f"{name} expects a pair, got {self.show(sc, pt)}")
                if name == "fst":
                    return Fst(p), pw.fst_ty
                return Snd(p), instantiate(pw.snd_ty, Fst(p))
            if name in PRODUCTIONS:
                p = self._production_term(sc, name, args, None)
                src, tgt = endpoints(self.env, sc.ctx, p)
                return p, ProdTy(src, tgt)
        f, ft = self.infer(sc, head)
        for a in args:
            fw = whnf(self.env, ft)
            if not isinstance(fw, Pi):
                fail("not-a-function", f"cannot apply something of type {self.show(sc, ft)}")
            a1 = self.check(sc, a, fw.dom)
            f, ft = App(f, a1), instantiate(fw.cod, a1)
        return f, ft

    def loose(self, sc: Scope, s: S) -> Term:
        """Elaborate the argument of ``ι``; bare constructors need no type."""
        head, args = _spine(s)
        if isinstance(head, SName) and sc.resolve(head.name) is None:
            name = head.name
            match name, len(args):
                case "nothing", 0:
                    return Inr(Tt())
                case "nil", 0:
                    return Init(Inl(Tt()))
                case ("inl" | "just"), 1:
                    return Inl(self.loose(sc, args[0]))
                case "inr", 1:
                    return Inr(self.loose(sc, args[0]))
                case "init", 1:
                    return Init(self.loose(sc, args[0]))
                case "cons", 2:
                    return Init(Inr(Pair(self.loose(sc, args[0]), self.loose(sc, args[1]))))
        if isinstance(s, SPair):
            return Pair(self.loose(sc, s.fst), self.loose(sc, s.snd))
        return self.infer(sc, s)[0]

    # linear types
    def ltype(self, sc: Scope, s: S) -> LType:
        try:
            return self._ltype(sc, s)
        except LinDepError as e:
            raise _with_span(e, s) from None

    def _ltype(self, sc: Scope, s: S) -> LType:
        if not isinstance(s, SArrow):
            return LBase(self.check(sc, s, Universe()))
        dom = self.ltype(sc, s.dom)
        if s.mult is None:
            mult = numeral(1)
        elif s.mult == "!":
            mult = BANG
        else:
            mult = self.check(sc, s.mult, NAT)
        binder = s.binder
        dty = base(dom)
        if isinstance(binder, tuple):
            inner = sc.bind("z", dty, dom)
            inner = inner.alias(binder[0], Fst(Var(0))).alias(binder[1], Snd(Var(0)))
            name = "z"
        else:
            name = binder or "_"
            inner = sc.bind(name, dty, dom)
        return LArrow(dom, mult, self.ltype(inner, s.cod), name if name != "_" else "x")

    # pattern matching
    def case(self, sc: Scope, scrut_s: S, branches, goal, body_fn) -> Term:
        scrut, sty = self.infer(sc, scrut_s)
        rows = []
        for p, body in branches:
            try:
                rows.append((_pattern(p), body))
            except LinDepError as e:
                raise _with_span(e, p) from None
        return self.match(sc, scrut, sty, rows, goal, body_fn)

    def match(self, sc: Scope, scrut: Term, sty: Term, rows, goal, body_fn) -> Term:
        if not rows:
            fail("non-exhaustive", "pattern match is missing a case")
        first = rows[0][0]
        if first[0] in ("var", "wild"):
            if first[0] == "var":
                sc = sc.alias(first[1], scrut)
            return body_fn(sc, rows[0][1], goal)
        kind = first[0]
        tw = whnf(self.env, sty)
        motive = _motive(goal, scrut)

        def sub_rows(ctor: str):
            out = []
            for pat, body in rows:
                if pat[0] == ctor:
                    out.append((pat[1], body))
                elif pat == WILD:
                    out.append(([WILD] * (2 if ctor == "pair" else 1), body))
                elif pat[0] == "var":
                    fail("unsupported-pattern", "a variable pattern after constructor patterns is not supported")
            return out

        def hint(rs, i: int = 0) -> str:
            for subs, _ in rs:
                if subs and subs[i][0] == "var":
                    return subs[i][1]
            return "_"

        def branch(ctor: str, ty: Term, pattern: Term) -> Term:
            rs = sub_rows(ctor)
            if isinstance(whnf(self.env, ty), Unit):
                # refine an ignored ⊤ to tt so that ι of it can be dropped
                rs = [([("tt", []) if subs[0] == WILD else subs[0]], b) for subs, b in rs]
            sc1 = sc.bind(hint(rs), ty)
            g1 = _refine(goal, 1, scrut, pattern)
            return self.match(sc1, Var(0), weaken(ty), [(subs[0], b) for subs, b in rs], g1, body_fn)

        if kind in ("inl", "inr"):
            if not isinstance(tw, Sum):
                fail("pattern-type", f"constructor pattern on a value of type {self.show(sc, sty)}")
            ann = weaken(sty)
            left = branch("inl", tw.left, Inl(Var(0), ann=ann))
            right = branch("inr", tw.right, Inr(Var(0), ann=ann))
            return SumCase(scrut, motive, left, right)
        if kind == "init":
            if not isinstance(tw, Mu):
                fail("pattern-type", f"constructor pattern on a value of type {self.show(sc, sty)}")
            layer = instantiate(tw.functor, tw)
            return MuCase(scrut, motive, branch("init", layer, Init(Var(0), ann=weaken(sty))))
        if kind == "tt":
            if not isinstance(tw, Unit):
                fail("pattern-type", f"tt pattern on a value of type {self.show(sc, sty)}")
            g1 = _refine(goal, 0, scrut, Tt())
            return UnitCase(scrut, motive, body_fn(sc, rows[0][1], g1))
        if kind == "pair":
            if not isinstance(tw, Sigma):
                fail("pattern-type", f"pair pattern on a value of type {self.show(sc, sty)}")
            rs = sub_rows("pair")
            subs, body = rs[0]
            if any(p[0] not in ("var", "wild") for p in subs):
                fail("unsupported-pattern", "nested patterns inside a pair are not supported")
            x, y = hint(rs, 0), hint(rs, 1)
            sc2 = sc.bind(x, tw.fst_ty).bind(y, tw.snd_ty)
            for i, p in enumerate(subs):
                if p[0] == "var":
                    sc2 = sc2.alias(p[1], Var(1 - i))
            g2 = _refine(goal, 2, scrut, Pair(Var(1), Var(0), ann=weaken(sty, 0, 2)))
            return SigmaCase(scrut, motive, body_fn(sc2, body, g2), (x, y))
        fail("unsupported-pattern", "unsupported pattern")

    # productions
    def _arg(self, sc: Scope, kind: str, s: S | None, filled: Term | None) -> Term:
        if s is None or isinstance(s, SHole):
            if filled is None:
                fail("unfilled-hole", "placeholder `_` in a production could not be determined")
            return filled
        match kind:
            case "s":
                return self.check(sc, s, SupplyTy())
            case "n":
                return self.check(sc, s, NAT)
            case "t":
                return self.loose(sc, s)
        return self.infer(sc, s)[0]

    def _production_term(self, sc: Scope, name: str, args: list[S], fills: list | None) -> Term:
        kinds = PRODUCTIONS[name]
        if len(args) != len(kinds):
            fail("production-arity", f"{name} expects {len(kinds)} argument(s), got {len(args)}")
        fills = fills or [None] * len(kinds)
        vals = [self._arg(sc, k, a, f) for k, a, f in zip(kinds, args, fills)]
        match name:
            case "unitl":
                return sup.unitl(*vals)
            case "unitl'":
                return sup.unitl_inv(*vals)
            case "assoc'":
                return sup.assoc_inv(*vals)
            case "distr":
                return sup.tensor_pow_distr(self.env, *vals)
            case "curry":
                return Curry(*vals)
            case "uncurry":
                return Uncurry(*vals)
            case "free":
                return Free(*vals)
            case "!f":
                return BangF(*vals)
        if name in _TYPE_NAMES:
            return _TYPE_NAMES[name][0]
        return _SIMPLE[name](*vals)

    def production(self, sc: Scope, s: S, src: Term) -> tuple[Term, Term]:
        """Elaborate a production whose source must be ``src``, filling ``_`` from it."""
        try:
            return self._production(sc, s, src)
        except LinDepError as e:
            raise _with_span(e, s) from None

    def _production(self, sc: Scope, s: S, src: Term) -> tuple[Term, Term]:
        env = self.env
        if isinstance(s, SOp) and s.op == "∘":
            p0, mid = self.production(sc, s.right, src)
            p1, tgt = self.production(sc, s.left, mid)
            return Comp(p1, p0), tgt
        if isinstance(s, SOp) and s.op == "⊗f":
            a, b = _shape(env, src, Tensor, "a tensor")
            p0, t0 = self.production(sc, s.left, a)
            p1, t1 = self.production(sc, s.right, b)
            return TensorF(p0, p1), Tensor(t0, t1)
        head, args = _spine(s)
        if isinstance(head, SName) and head.name in PRODUCTIONS and sc.resolve(head.name) is None:
            name = head.name
            if name == "!f" and len(args) == 1:
                (inner,) = _shape(env, src, Bang, "a !-supply")
                p, t = self.production(sc, args[0], inner)
                return BangF(p), Bang(t)
            if name == "uncurry" and len(args) == 1:
                a, _ = _shape(env, src, Tensor, "a tensor")
                p, t = self.production(sc, args[0], a)
                p = Uncurry(p)
            elif name == "free" and len(args) == 2:
                p, _ = self.production(sc, args[0], src)
                p = Free(p, self.loose(sc, args[1]))
            else:
                holes = any(isinstance(a, SHole) for a in args)
                fills = _fill(env, name, src) if holes else None
                p = self._production_term(sc, name, args, fills)
        else:
            p = self.infer(sc, s)[0]
        s0, t0 = endpoints(env, sc.ctx, p)
        if not conv(env, s0, src):
            fail(
                "production-endpoint",
                f"production source is {self.show(sc, s0)} but the supply at this point is {self.show(sc, src)}",
            )
        return p, t0


def _shape(env: Env, t: Term, cls: type, what: str) -> tuple:
    """Components of ``t`` as ``cls``, looking at the raw term before reducing it."""
    if not isinstance(t, cls):
        t = whnf(env, t)
    if not isinstance(t, cls):
        fail("production-shape", f"expected {what} here")
    from dataclasses import fields

    return tuple(getattr(t, f.name) for f in fields(t) if f.compare)


def _fill(env: Env, name: str, src: Term) -> list:
    """Arguments of a named production read off its required source."""
    T, B, I = Tensor, Bang, Iota
    match name:
        case "id" | "unitr'" | "unitl'":
            return [src]
        case "unitr":
            return [_shape(env, src, T, "d ⊗ ◇")[0]]
        case "unitl":
            return [_shape(env, src, T, "◇ ⊗ d")[1]]
        case "swap":
            return list(_shape(env, src, T, "a tensor"))
        case "assoc":
            ab, c = _shape(env, src, T, "(a ⊗ b) ⊗ c")
            return [*_shape(env, ab, T, "(a ⊗ b) ⊗ c"), c]
        case "assoc'":
            a, bc = _shape(env, src, T, "a ⊗ (b ⊗ c)")
            return [a, *_shape(env, bc, T, "a ⊗ (b ⊗ c)")]
        case "dupl" | "erase" | "use" | "mult":
            return [_shape(env, src, B, "a !-supply")[0]]
        case "coh-tensor":
            a, b = _shape(env, src, T, "!a ⊗ !b")
            return [_shape(env, a, B, "!a")[0], _shape(env, b, B, "!b")[0]]
        case "opl":
            (p,) = _shape(env, src, I, "ι (a , b)")
            return list(_shape(env, p, Pair, "ι (a , b)"))
        case "lax":
            a, b = _shape(env, src, T, "ι a ⊗ ι b")
            return [_shape(env, a, I, "ι a")[0], _shape(env, b, I, "ι b")[0]]
        case "secinl" | "secinr" | "secinit":
            (v,) = _shape(env, src, I, "ι of a constructor")
            cls = {"secinl": Inl, "secinr": Inr, "secinit": Init}[name]
            return [_shape(env, v, cls, "ι of a constructor")[0]]
        case "retinl" | "retinr" | "retinit":
            return [_shape(env, src, I, "ι a")[0]]
        case "distr":
            a, b = _shape(env, src, T, "d0 ^ m ⊗ d1 ^ k")
            pa, pb = _shape(env, a, Pow, "d0 ^ m"), _shape(env, b, Pow, "d1 ^ k")
            return [None, None, pa[0], pb[0]]
    return [None] * len(PRODUCTIONS[name])

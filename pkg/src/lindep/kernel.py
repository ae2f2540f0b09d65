"""Host dependent type theory: evaluation, definitional equality, checking."""

from __future__ import annotations

from dataclasses import dataclass

from .diagnostics import LinDepError, fail
from .syntax import (
    NAT,
    Ann,
    App,
    Bang,
    Const,
    Empty,
    Fst,
    Hole,
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
    Term,
    Tt,
    Unit,
    UnitCase,
    Universe,
    Var,
    children,
    free_indices,
    instantiate,
    layout,
    mentions_const,
    substitute,
    weaken,
)


@dataclass
class Definition:
    name: str
    type: Term
    body: Term | None = None
    checked: bool = False
    rec_arg: int | None = None  # position of the structural argument, if recursive


class Env:
    """Append-only table of top-level definitions and postulates."""

    def __init__(self) -> None:
        self.defs: dict[str, Definition] = {}

    def __contains__(self, name: str) -> bool:
        return name in self.defs

    def lookup(self, name: str) -> Definition:
        try:
            return self.defs[name]
        except KeyError:
            fail("unbound-constant", f"unknown constant {name}")

    def postulate(self, name: str, ty: Term) -> None:
        if name in self.defs:
            fail("duplicate-definition", f"{name} is already defined")
        check_type(self, Context(), ty)
        self.defs[name] = Definition(name, ty, None, True)


@dataclass(frozen=True)
class Context:
    entries: tuple[tuple[str, Term], ...] = ()

    def extend(self, name: str, ty: Term) -> "Context":
        return Context(self.entries + ((name, ty),))

    def lookup(self, index: int) -> Term:
        if index < 0 or index >= len(self.entries):
            fail("unbound-variable", f"unbound variable #{index}")
        _, ty = self.entries[-1 - index]
        return weaken(ty, 0, index + 1)

    def names(self) -> list[str]:
        return [n for n, _ in self.entries]

    def __len__(self) -> int:
        return len(self.entries)


# -- evaluation --------------------------------------------------------------


def _spine(t: Term) -> tuple[Term, list[Term]]:
    """Head of an application spine (looking through Fst) and its arguments."""
    args: list[Term] = []
    while True:
        if isinstance(t, App):
            args.append(t.arg)
            t = t.fn
        elif isinstance(t, Fst):
            t = t.pair
        else:
            args.reverse()
            return t, args


def _replace_head(t: Term, body: Term) -> Term:
    match t:
        case App(f, a):
            return App(_replace_head(f, body), a)
        case Fst(p):
            return Fst(_replace_head(p, body))
        case _:
            return body


def _is_canonical_mu(env: Env, t: Term) -> bool:
    return isinstance(whnf(env, t), Init)


def whnf(env: Env, t: Term) -> Term:
    while True:
        match t:
            case App(f, a):
                f2 = whnf(env, f)
                if isinstance(f2, Lam):
                    t = instantiate(f2.body, a)
                    continue
                t = App(f2, a)
                unfolded = _unfold_recursive(env, t)
                if unfolded is None:
                    return t
                t = unfolded
            case Fst(p):
                p2 = whnf(env, p)
                if isinstance(p2, Pair):
                    t = p2.fst
                    continue
                return Fst(p2)
            case Snd(p):
                p2 = whnf(env, p)
                if isinstance(p2, Pair):
                    t = p2.snd
                    continue
                return Snd(p2)
            case SumCase(s, m, left, right):
                s2 = whnf(env, s)
                if isinstance(s2, Inl):
                    t = instantiate(left, s2.value)
                elif isinstance(s2, Inr):
                    t = instantiate(right, s2.value)
                else:
                    return SumCase(s2, m, left, right, t.names)
            case UnitCase(s, m, branch):
                s2 = whnf(env, s)
                if isinstance(s2, Tt):
                    t = branch
                else:
                    return UnitCase(s2, m, branch)
            case MuCase(s, m, branch):
                s2 = whnf(env, s)
                if isinstance(s2, Init):
                    t = instantiate(branch, s2.value)
                else:
                    return MuCase(s2, m, branch, t.name)
            case SigmaCase(s, m, body):
                s2 = whnf(env, s)
                if isinstance(s2, Pair):
                    t = instantiate(substitute(body, 0, weaken(s2.snd)), s2.fst)
                else:
                    return SigmaCase(s2, m, body, t.names)
            case Ann(inner, _):
                t = inner
            case Pow(base, m):
                m2 = whnf(env, m)
                if isinstance(m2, Init):
                    v = whnf(env, m2.value)
                    if isinstance(v, Inl):
                        return Empty()
                    if isinstance(v, Inr):
                        return Tensor(base, Pow(base, v.value))
                return Pow(base, m2)
            case Const(name):
                d = env.defs.get(name)
                if d is None or d.body is None or d.rec_arg is not None:
                    return t
                t = d.body
            case _:
                return t


def _unfold_recursive(env: Env, t: Term) -> Term | None:
    head, args = _spine(t)
    if not isinstance(head, Const):
        return None
    d = env.defs.get(head.name)
    if d is None or d.body is None or d.rec_arg is None:
        return None
    if len(args) <= d.rec_arg or not _is_canonical_mu(env, args[d.rec_arg]):
        return None
    return _replace_head(t, d.body)


def nf(env: Env, t: Term) -> Term:
    """Full normal form; annotations are left untouched."""
    t = whnf(env, t)
    shape = layout(type(t))
    if not shape:
        return t
    vals = []
    for name, _, is_term, compare in shape:
        v = getattr(t, name)
        if is_term and compare and v is not None:
            v = nf(env, v)
        vals.append(v)
    return type(t)(*vals)


def eval_term(env: Env, t: Term) -> Term:
    return nf(env, t)


def conv(env: Env, a: Term, b: Term, ctx: Context | None = None, ty: Term | None = None) -> bool:
    if a == b:
        return True
    return nf(env, a) == nf(env, b)


# -- checking ----------------------------------------------------------------


def _show(env: Env, ctx: Context, t: Term) -> str:
    from .pretty import show

    return show(nf(env, t), ctx.names())


def check_type(env: Env, ctx: Context, t: Term) -> None:
    check(env, ctx, t, Universe())


def check_supply(env: Env, ctx: Context, t: Term) -> None:
    check(env, ctx, t, SupplyTy())


def _branch_motive(motive: Term, binders: int, pattern: Term) -> Term:
    return substitute(weaken(motive, 1, binders), 0, pattern)


def _positive(t: Term, x: int) -> bool:
    if x not in free_indices(t):
        return True
    match t:
        case Var():
            return True
        case Sum(a, b):
            return _positive(a, x) and _positive(b, x)
        case Sigma(a, b):
            return _positive(a, x) and _positive(b, x + 1)
        case Pi(a, b):
            return x not in free_indices(a) and _positive(b, x + 1)
        case _:
            return False


def _iota_argument(env: Env, ctx: Context, a: Term) -> None:
    """Any well-typed term may be put into a supply."""
    try:
        infer(env, ctx, a)
        return
    except LinDepError:
        match a:
            case Inl(v) | Inr(v) | Init(v):
                _iota_argument(env, ctx, v)
            case Pair(x, y):
                _iota_argument(env, ctx, x)
                _iota_argument(env, ctx, y)
            case _:
                raise


def infer(env: Env, ctx: Context, t: Term) -> Term:
    match t:
        case Var(i):
            return ctx.lookup(i)
        case Universe():
            return Universe()
        case Const(name):
            return env.lookup(name).type
        case Pi(a, b) | Sigma(a, b):
            check_type(env, ctx, a)
            check_type(env, ctx.extend(t.name, a), b)
            return Universe()
        case Sum(a, b):
            check_type(env, ctx, a)
            check_type(env, ctx, b)
            return Universe()
        case Unit() | SupplyTy():
            return Universe()
        case Mu(f):
            check_type(env, ctx.extend(t.name, Universe()), f)
            if not _positive(f, 0):
                fail("mu-positivity", "recursive type variable must occur strictly positively")
            return Universe()
        case ProdTy(a, b):
            check_supply(env, ctx, a)
            check_supply(env, ctx, b)
            return Universe()
        case Lam(body, dom):
            if dom is None:
                fail("cannot-infer", "cannot infer the type of an unannotated lambda")
            check_type(env, ctx, dom)
            return Pi(dom, infer(env, ctx.extend(t.name, dom), body), t.name)
        case App(f, a):
            fty = whnf(env, infer(env, ctx, f))
            if not isinstance(fty, Pi):
                fail("not-a-function", f"applying a non-function of type {_show(env, ctx, fty)}")
            check(env, ctx, a, fty.dom)
            return instantiate(fty.cod, a)
        case Pair(a, b, ann):
            if ann is not None:
                check(env, ctx, t, ann)
                return ann
            return Sigma(infer(env, ctx, a), weaken(infer(env, ctx, b)), "_")
        case Fst(p):
            pty = whnf(env, infer(env, ctx, p))
            if not isinstance(pty, Sigma):
                fail("not-a-pair", f"projection from {_show(env, ctx, pty)}")
            return pty.fst_ty
        case Snd(p):
            pty = whnf(env, infer(env, ctx, p))
            if not isinstance(pty, Sigma):
                fail("not-a-pair", f"projection from {_show(env, ctx, pty)}")
            return instantiate(pty.snd_ty, Fst(p))
        case Inl(_, ann) | Inr(_, ann) | Init(_, ann):
            if ann is None:
                fail("cannot-infer", "constructor needs a type annotation here")
            check_type(env, ctx, ann)
            check(env, ctx, t, ann)
            return ann
        case Tt():
            return Unit()
        case SumCase(s, motive, left, right):
            sty = whnf(env, infer(env, ctx, s))
            if not isinstance(sty, Sum):
                fail("case-scrutinee", f"sum case on {_show(env, ctx, sty)}")
            check_type(env, ctx.extend("z", sty), motive)
            wsty = weaken(sty)
            x, y = t.names
            check(env, ctx.extend(x, sty.left), left, _branch_motive(motive, 1, Inl(Var(0), wsty)))
            check(env, ctx.extend(y, sty.right), right, _branch_motive(motive, 1, Inr(Var(0), wsty)))
            return instantiate(motive, s)
        case UnitCase(s, motive, branch):
            sty = whnf(env, infer(env, ctx, s))
            if not isinstance(sty, Unit):
                fail("case-scrutinee", f"unit case on {_show(env, ctx, sty)}")
            check_type(env, ctx.extend("z", sty), motive)
            check(env, ctx, branch, instantiate(motive, Tt()))
            return instantiate(motive, s)
        case MuCase(s, motive, branch):
            sty = whnf(env, infer(env, ctx, s))
            if not isinstance(sty, Mu):
                fail("case-scrutinee", f"fixpoint case on {_show(env, ctx, sty)}")
            check_type(env, ctx.extend("z", sty), motive)
            layer = instantiate(sty.functor, sty)
            pat = Init(Var(0), weaken(sty))
            check(env, ctx.extend(t.name, layer), branch, _branch_motive(motive, 1, pat))
            return instantiate(motive, s)
        case SigmaCase(s, motive, body):
            sty = whnf(env, infer(env, ctx, s))
            if not isinstance(sty, Sigma):
                fail("case-scrutinee", f"pair case on {_show(env, ctx, sty)}")
            check_type(env, ctx.extend("z", sty), motive)
            x, y = t.names
            inner = ctx.extend(x, sty.fst_ty).extend(y, sty.snd_ty)
            pat = Pair(Var(1), Var(0), weaken(sty, 0, 2))
            check(env, inner, body, _branch_motive(motive, 2, pat))
            return instantiate(motive, s)
        case Ann(inner, ty):
            check_type(env, ctx, ty)
            check(env, ctx, inner, ty)
            return ty
        case Empty():
            return SupplyTy()
        case Tensor(a, b) | Hom(a, b):
            check_supply(env, ctx, a)
            check_supply(env, ctx, b)
            return SupplyTy()
        case Iota(a):
            _iota_argument(env, ctx, a)
            return SupplyTy()
        case SupAbs(a, body):
            check_type(env, ctx, a)
            check_supply(env, ctx.extend(t.name, a), body)
            return SupplyTy()
        case Bang(s):
            check_supply(env, ctx, s)
            return SupplyTy()
        case Pow(s, m):
            check_supply(env, ctx, s)
            try:
                check(env, ctx, m, NAT)
            except LinDepError as e:
                fail("pow-exponent", f"exponent must be a natural number: {e.diagnostic.message}")
            return SupplyTy()
        case Production():
            from .supply import endpoints

            src, tgt = endpoints(env, ctx, t)
            return ProdTy(src, tgt)
        case Hole():
            fail("unfilled-hole", "placeholder `_` could not be determined")
    fail("cannot-infer", f"cannot infer a type for {type(t).__name__}")


def check(env: Env, ctx: Context, t: Term, ty: Term) -> None:
    match t:
        case Lam(body, dom):
            tyw = whnf(env, ty)
            if not isinstance(tyw, Pi):
                fail("type-mismatch", f"lambda checked against {_show(env, ctx, tyw)}")
            if dom is not None and not conv(env, dom, tyw.dom):
                fail("type-mismatch", "lambda annotation disagrees with expected domain")
            check(env, ctx.extend(t.name, tyw.dom), body, tyw.cod)
            return
        case Pair(a, b):
            tyw = whnf(env, ty)
            if not isinstance(tyw, Sigma):
                fail("type-mismatch", f"pair checked against {_show(env, ctx, tyw)}")
            check(env, ctx, a, tyw.fst_ty)
            check(env, ctx, b, instantiate(tyw.snd_ty, a))
            return
        case Inl(v) | Inr(v):
            tyw = whnf(env, ty)
            if not isinstance(tyw, Sum):
                fail("type-mismatch", f"injection checked against {_show(env, ctx, tyw)}")
            check(env, ctx, v, tyw.left if isinstance(t, Inl) else tyw.right)
            return
        case Init(v):
            tyw = whnf(env, ty)
            if not isinstance(tyw, Mu):
                fail("type-mismatch", f"init checked against {_show(env, ctx, tyw)}")
            check(env, ctx, v, instantiate(tyw.functor, tyw))
            return
        case Production():
            tyw = whnf(env, ty)
            if not isinstance(tyw, ProdTy):
                fail("type-mismatch", f"production checked against {_show(env, ctx, tyw)}")
            from .supply import check_production

            check_production(env, ctx, t, tyw.src, tyw.tgt)
            return
    got = infer(env, ctx, t)
    if not conv(env, got, ty):
        fail(
            "type-mismatch",
            f"expected {_show(env, ctx, ty)} but got {_show(env, ctx, got)}",
        )


# -- definitions -------------------------------------------------------------


def _structural_position(env: Env, ty: Term) -> int | None:
    """Index of the first argument of fixpoint type, counting through a judgment."""
    pos = 0
    ty = whnf(env, ty)
    while True:
        if isinstance(ty, Sigma):
            ty = whnf(env, ty.fst_ty)
            continue
        if not isinstance(ty, Pi):
            return None
        if isinstance(whnf(env, ty.dom), Mu):
            return pos
        pos += 1
        ty = whnf(env, ty.cod)


def _check_structural(name: str, k: int, body: Term) -> None:
    """Recursive calls must pass a strictly smaller fixpoint argument."""

    def visit(t: Term, status: list, argpos: int | None) -> None:
        def bind(n: int, mark=None) -> list:
            return status + [mark] * n

        def var_status(u: Term):
            if isinstance(u, Var) and u.index < len(status):
                return status[-1 - u.index]
            return None

        head, args = _spine(t)
        if isinstance(head, Const) and head.name == name:
            if len(args) <= k or var_status(args[k]) != "smaller":
                fail("non-structural-recursion", f"recursive call to {name} is not on a structurally smaller argument")
            for a in args:
                visit(a, status, None)
            return
        match t:
            case Const(n) if n == name:
                fail("non-structural-recursion", f"bare recursive reference to {name}")
            case Free(Snd(h), a) if _spine(h)[0] == Const(name):
                if len(_spine(h)[1]) != k or var_status(a) != "smaller":
                    fail("non-structural-recursion", f"recursive call to {name} is not on a structurally smaller argument")
                visit(a, status, None)
                return
            case Lam(b) | Bind(_, b):
                mark = "param" if argpos == k else None
                if isinstance(t, Bind):
                    visit(t.dom, status, None)
                nxt = None if argpos is None or argpos >= k else argpos + 1
                visit(b, bind(1, mark), nxt)
                return
            case Pair(a, b):
                visit(a, status, argpos)
                visit(b, status, argpos)
                return
            case Curry(p) | Fst(p) | Snd(p):
                visit(p, status, argpos)
                return
            case MuCase(s, m, br) | SumCase(s, m, br, _) | SigmaCase(s, m, br) | UnitCase(s, m, br):
                st = var_status(s)
                if isinstance(t, MuCase):
                    new = "smaller" if st in ("param", "sub", "smaller") else None
                else:
                    new = "smaller" if st == "smaller" else ("sub" if st in ("param", "sub") else None)
                visit(s, status, None)
                visit(m, bind(1), None)
                if isinstance(t, SumCase):
                    visit(t.left, bind(1, new), None)
                    visit(t.right, bind(1, new), None)
                elif isinstance(t, SigmaCase):
                    visit(br, bind(2, new), None)
                elif isinstance(t, UnitCase):
                    visit(br, status, None)
                else:
                    visit(br, bind(1, new), None)
                return
        for c, nb in children(t):
            visit(c, bind(nb), None)

    visit(body, [], 0)


def check_definition(env: Env, name: str, ty: Term, body: Term) -> Definition:
    if name in env.defs:
        fail("duplicate-definition", f"{name} is already defined")
    check_type(env, Context(), ty)
    rec_arg = None
    if mentions_const(body, name):
        rec_arg = _structural_position(env, ty)
        if rec_arg is None:
            fail("non-structural-recursion", f"{name} recurses but has no argument of inductive type")
        _check_structural(name, rec_arg, body)
    d = Definition(name, ty)
    env.defs[name] = d
    try:
        check(env, Context(), body, ty)
    except LinDepError:
        del env.defs[name]
        raise
    d.body = body
    d.rec_arg = rec_arg
    d.checked = True
    return d


from .syntax import Bind, Curry, Free  # noqa: E402

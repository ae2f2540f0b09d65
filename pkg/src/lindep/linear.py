"""Elaboration of linear terms into judgments ``(a , δ) : Δ ⊩ L``."""

from __future__ import annotations

from dataclasses import dataclass, field

from .diagnostics import LinDepError, Span, fail
from .elaborate import HostElaborator, LinGoal, Scope, _spine, _with_span
from .kernel import Definition, Env, check_definition, conv, nf, whnf
from .ltypes import (
    BANG,
    LArrow,
    LBase,
    LGen,
    LType,
    base,
    domain_supply,
    fam_at,
    judgment,
    linstantiate,
    lsubst,
)
from .parser import DDef, DPostulate, S, SBy, SCase, SFn, SIf, SIotaPost, SLin, SName, SOp, SPat, SQApp
from .solver import solve_or_fail
from .supply import pow_production
from .syntax import (
    NAT,
    App,
    Bang,
    BangF,
    Bind,
    Comp,
    Const,
    Curry,
    Fst,
    Id,
    Iota,
    Lam,
    Pair,
    Pi,
    Pow,
    ProdTy,
    Sigma,
    Snd,
    SupplyTy,
    Tensor,
    TensorF,
    Term,
    Tt,
    Uncurry,
    Universe,
    Var,
    free_indices,
    numeral,
    substitute,
    weaken,
)


@dataclass
class LinearSignature:
    """A definition typed ``Δ ⊩ L`` under ``params`` parameters."""

    params: int
    delta: Term
    lt: LType


@dataclass
class Witness:
    span: Span | None
    names: list[str]
    src: Term
    tgt: Term
    production: Term
    definition: str = ""


def _instantiate_params(t: Term, args: list[Term]) -> Term:
    n = len(args)
    for i, a in enumerate(args):
        t = substitute(t, n - 1 - i, weaken(a, 0, n - 1 - i))
    return t


def _instantiate_params_l(lt: LType, args: list[Term]) -> LType:
    n = len(args)
    for i, a in enumerate(args):
        lt = lsubst(lt, n - 1 - i, weaken(a, 0, n - 1 - i))
    return lt


class Elaborator(HostElaborator):
    def __init__(self, env: Env):
        super().__init__(env)
        self.signatures: dict[str, LinearSignature] = {}
        self.witnesses: list[Witness] = []

    # -- bridges between supplies --------------------------------------------

    def bridge(self, sc: Scope, src: Term, tgt: Term, span: Span | None) -> Term | None:
        """A production ``src ▷ tgt`` from the solver, or None if they already agree."""
        if conv(self.env, src, tgt):
            return None
        p = solve_or_fail(self.env, sc.ctx, src, tgt)
        self.witnesses.append(Witness(span, sc.ctx.names(), src, tgt, p))
        return p

    def _fam_bridge(self, sc: Scope, a: Term, have: LType, want: LType, delta: Term, span) -> Term:
        if not conv(self.env, base(have), base(want)):
            fail("type-mismatch", f"expected {self.show(sc, base(want))}, got {self.show(sc, base(have))}")
        p = self.bridge(sc, fam_at(have, a), fam_at(want, a), span)
        return delta if p is None else Comp(p, delta)

    # -- synthesis -----------------------------------------------------------

    def synth(self, sc: Scope, s: S, expect: LType | None = None) -> tuple[Term, LType, Term, Term]:
        """``(a, L, Δ, δ)`` with ``δ : Δ ▷ Θ a``."""
        try:
            return self._synth(sc, s, expect)
        except LinDepError as e:
            raise _with_span(e, s) from None

    def _synth(self, sc: Scope, s: S, expect: LType | None):
        match s:
            case SIotaPost(term):
                if expect is not None:
                    ty = base(expect)
                    a = self.check(sc, term, ty)
                else:
                    a, ty = self.infer(sc, term)
                return a, LBase(ty), Iota(a), Id(Iota(a))
            case SFn(SName(name)) if isinstance(sc.resolve(name), Var):
                v = sc.resolve(name)
                lt = sc.meta(v.index)
                if lt is None:
                    lt = LBase(self.infer(sc, s.term)[1])
                delta = fam_at(lt, v)
                return v, lt, delta, Id(delta)
            case SFn():
                fail("not-a-linear-variable", "⊖ applies to a variable bound by a linear λ")
            case SOp("@" | "!@", f, arg):
                return self._synth_app(sc, f, arg, s.op, None)
            case SQApp(f, m, arg):
                return self._synth_app(sc, f, arg, "<@", m)
            case SBy():
                fail("by-needs-goal", "`by` needs a known supply; use it where a type is expected")
            case SLin() | SCase() | SIf():
                fail("cannot-synthesize", "this term needs a type annotation from its definition")
        head, args = _spine(s)
        if isinstance(head, SName) and sc.resolve(head.name) is None and head.name in self.signatures:
            return self._synth_const(sc, head.name, args)
        t, ty = self.infer(sc, s)
        tw = whnf(self.env, ty)
        if isinstance(tw, Sigma):
            pt = whnf(self.env, tw.snd_ty)
            if isinstance(pt, ProdTy):
                src = pt.src
                if 0 in free_indices(src):
                    src = nf(self.env, src)
                if 0 in free_indices(src):
                    fail("dependent-supply", "the supply of this judgment depends on its own result")
                delta = substitute(src, 0, Tt())
                return Fst(t), LGen(tw.fst_ty, pt.tgt), delta, Snd(t)
        fail(
            "not-a-judgment",
            f"expected a linear term, got a value of type {self.show(sc, ty)} (did you mean `x ι`?)",
        )

    def _synth_const(self, sc: Scope, name: str, args: list[S]):
        sig = self.signatures[name]
        if len(args) != sig.params:
            fail("parameter-count", f"{name} takes {sig.params} parameter(s), got {len(args)}")
        j, jt = Const(name), self.env.lookup(name).type
        vals = []
        for a in args:
            pw = whnf(self.env, jt)
            a1 = self.check(sc, a, pw.dom)
            vals.append(a1)
            j, jt = App(j, a1), substitute(pw.cod, 0, a1)
        delta = _instantiate_params(sig.delta, vals)
        lt = _instantiate_params_l(sig.lt, vals)
        return Fst(j), lt, delta, Snd(j)

    def _synth_app(self, sc: Scope, f: S, arg: S, mode: str, mult_s: S | None):
        af, lf, df, pf = self.synth(sc, f)
        if not isinstance(lf, LArrow):
            fail("not-a-linear-function", f"cannot apply a linear term of type {self.show(sc, base(lf))}")
        if mode == "!@":
            if lf.mult is not BANG:
                fail("multiplicity-mismatch", "`!@` applies a function taking a !-argument")
        elif lf.mult is BANG:
            fail("multiplicity-mismatch", "this function takes a !-argument; apply it with `!@`")
        else:
            want = numeral(1) if mode == "@" else self.check(sc, mult_s, NAT)
            if not conv(self.env, want, lf.mult):
                fail(
                    "multiplicity-mismatch",
                    f"argument multiplicity is {self.show(sc, lf.mult)}, applied with {self.show(sc, want)}",
                )
        ax, lx, dx, px = self.synth(sc, arg, lf.dom)
        px = self._fam_bridge(sc, ax, lx, lf.dom, px, arg.span)
        if lf.mult is BANG:
            consumed, lifted = Bang(dx), BangF(px)
        else:
            consumed, lifted = Pow(dx, lf.mult), pow_production(self.env, sc.ctx, px, lf.mult)
        from .syntax import Free

        p = Comp(Uncurry(Free(pf, ax)), TensorF(Id(df), lifted))
        return App(af, ax), linstantiate(lf.cod, ax), Tensor(df, consumed), p

    # -- checking ------------------------------------------------------------

    def check_lin(self, sc: Scope, s: S, delta: Term, lt: LType) -> tuple[Term, Term]:
        """``(a, δ)`` with ``δ : delta ▷ Θ a``."""
        try:
            return self._check_lin(sc, s, delta, lt)
        except LinDepError as e:
            raise _with_span(e, s) from None

    def _lin_body(self, sc: Scope, s: S, goal: LinGoal) -> Term:
        a, d = self.check_lin(sc, s, goal.delta, goal.lt)
        return Pair(a, d, ann=goal.kernel_type())

    def _check_lin(self, sc: Scope, s: S, delta: Term, lt: LType) -> tuple[Term, Term]:
        match s:
            case SLin(binder, bang, body):
                if not isinstance(lt, LArrow):
                    fail("unexpected-lambda", f"a linear λ needs a function type, not {self.show(sc, base(lt))}")
                if bang != (lt.mult is BANG):
                    fail("multiplicity-mismatch", "use `!↦` exactly when the argument is a !-argument")
                dty = base(lt.dom)
                name = binder if isinstance(binder, str) else "z"
                inner = sc.bind(name, dty, lt.dom)
                goal = LinGoal(Tensor(weaken(delta), domain_supply(lt)), lt.cod)
                if isinstance(binder, tuple):
                    from .elaborate import _v

                    row = (("pair", [_v(binder[0]), _v(binder[1])]), body)
                    j = self.match(inner, Var(0), weaken(dty), [row], goal, self._lin_body)
                    a, d = Fst(j), Snd(j)
                else:
                    a, d = self.check_lin(inner, body, goal.delta, goal.lt)
                hint = name if name != "_" else "x"
                return Lam(a, dty, hint), Bind(dty, Curry(d), hint)
            case SCase(scr, branches):
                j = self.case(sc, scr, branches, LinGoal(delta, lt), self._lin_body)
                return Fst(j), Snd(j)
            case SIf(c, t, e):
                rows = [(SPat("true", []), t), (SPat("false", []), e)]
                j = self.case(sc, c, rows, LinGoal(delta, lt), self._lin_body)
                return Fst(j), Snd(j)
            case SBy(term, prod):
                a, ls, ds, ps = self.synth(sc, term, lt)
                p, mid = self.production(sc, prod, delta)
                rest = self.bridge(sc, mid, ds, s.span)
                d = Comp(ps, p if rest is None else Comp(rest, p))
                return a, self._fam_bridge(sc, a, ls, lt, d, s.span)
        a, ls, ds, ps = self.synth(sc, s, lt)
        d = self._fam_bridge(sc, a, ls, lt, ps, s.span)
        p = self.bridge(sc, delta, ds, s.span)
        return a, (d if p is None else Comp(d, p))

    # -- declarations --------------------------------------------------------

    def declare(self, decl) -> None:
        if isinstance(decl, DPostulate):
            try:
                ty = self.check(Scope(), decl.type, Universe())
                self.env.postulate(decl.name, ty)
            except LinDepError as e:
                raise _with_span(e, decl, decl.name) from None
            return
        self.define(decl)

    def define(self, d: DDef) -> Definition:
        try:
            return self._define(d)
        except LinDepError as e:
            diag = e.diagnostic
            if diag.span is None:
                diag = diag.with_span(d.span)
            raise LinDepError(diag.with_span(None, d.name)) from None

    def _define(self, d: DDef) -> Definition:
        if d.name in self.env:
            fail("duplicate-definition", f"{d.name} is already defined")
        sc = Scope()
        doms = []
        for name, ty_s in d.params:
            t = self.check(sc, ty_s, Universe())
            doms.append((name, t))
            sc = sc.bind(name, t)
        linear = isinstance(d.type, SOp) and d.type.op == "⊩"
        if linear:
            delta = self.check(sc, d.type.left, SupplyTy())
            lt = self.ltype(sc, d.type.right)
            ty = judgment(delta, lt)
        else:
            ty = self.check(sc, d.type, Universe())
        full_ty = ty
        for name, t in reversed(doms):
            full_ty = Pi(t, full_ty, name)
        # provisional entry so recursive references elaborate
        self.env.defs[d.name] = Definition(d.name, full_ty)
        if linear:
            self.signatures[d.name] = LinearSignature(len(doms), delta, lt)
        start = len(self.witnesses)
        try:
            if linear:
                a, p = self.check_lin(sc, d.body, delta, lt)
                body = Pair(a, p, ann=ty)
            else:
                body = self.check(sc, d.body, ty)
            for name, t in reversed(doms):
                body = Lam(body, t, name)
        except LinDepError:
            self.signatures.pop(d.name, None)
            raise
        finally:
            del self.env.defs[d.name]
        for w in self.witnesses[start:]:
            w.definition = d.name
        try:
            return check_definition(self.env, d.name, full_ty, body)
        except LinDepError:
            self.signatures.pop(d.name, None)
            raise

"""Typing of productions: the judgment ``δ : Δ₀ ▷ Δ₁`` and derived productions."""

from __future__ import annotations

from .diagnostics import fail
from .kernel import Context, Env, _iota_argument, check, check_supply, check_type, conv, infer, nf, whnf
from .syntax import (
    NAT,
    Assoc,
    Bang,
    BangF,
    Bind,
    Comp,
    CohEmpty,
    CohTensor,
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
    LaxPair,
    LaxTt,
    Mult,
    OplPair,
    OplTt,
    Pair,
    Pow,
    ProdTy,
    RetInit,
    RetInl,
    RetInr,
    SecInit,
    SecInl,
    SecInr,
    SupAbs,
    Swap,
    Tensor,
    Term,
    TensorF,
    Tt,
    Uncurry,
    Unitr,
    UnitrInv,
    Use,
    as_numeral,
    free_indices,
    instantiate,
    numeral,
    substitute,
)


def _show(ctx: Context, t: Term) -> str:
    from .pretty import show

    return show(t, ctx.names())


def _supplies(env: Env, ctx: Context, *ts: Term) -> None:
    for t in ts:
        check_supply(env, ctx, t)


def endpoints(env: Env, ctx: Context, p: Term) -> tuple[Term, Term]:
    """Source and target supply of a production."""
    match p:
        case Id(d):
            _supplies(env, ctx, d)
            return d, d
        case Comp(second, first):
            s0, t0 = endpoints(env, ctx, first)
            s1, t1 = endpoints(env, ctx, second)
            if not conv(env, t0, s1):
                fail(
                    "compose-mismatch",
                    f"cannot compose: {_show(ctx, nf(env, t0))} does not match {_show(ctx, nf(env, s1))}",
                )
            return s0, t1
        case TensorF(left, right):
            s0, t0 = endpoints(env, ctx, left)
            s1, t1 = endpoints(env, ctx, right)
            return Tensor(s0, s1), Tensor(t0, t1)
        case Assoc(a, b, c):
            _supplies(env, ctx, a, b, c)
            return Tensor(Tensor(a, b), c), Tensor(a, Tensor(b, c))
        case Swap(a, b):
            _supplies(env, ctx, a, b)
            return Tensor(a, b), Tensor(b, a)
        case Unitr(d):
            _supplies(env, ctx, d)
            return Tensor(d, Empty()), d
        case UnitrInv(d):
            _supplies(env, ctx, d)
            return d, Tensor(d, Empty())
        case OplTt():
            return Iota(Tt()), Empty()
        case LaxTt():
            return Empty(), Iota(Tt())
        case OplPair(a, b) | LaxPair(a, b):
            _iota_argument(env, ctx, Pair(a, b))
            pair, split = Iota(Pair(a, b)), Tensor(Iota(a), Iota(b))
            return (pair, split) if isinstance(p, OplPair) else (split, pair)
        case SecInl(a) | RetInl(a):
            return _section(env, ctx, p, Inl(a), a, isinstance(p, SecInl))
        case SecInr(a) | RetInr(a):
            return _section(env, ctx, p, Inr(a), a, isinstance(p, SecInr))
        case SecInit(a) | RetInit(a):
            return _section(env, ctx, p, Init(a), a, isinstance(p, SecInit))
        case Curry(d):
            src, tgt = endpoints(env, ctx, d)
            src_w = whnf(env, src)
            if not isinstance(src_w, Tensor):
                fail("curry-shape", f"curry needs a production out of a tensor, got {_show(ctx, src_w)}")
            return src_w.left, Hom(src_w.right, tgt)
        case Uncurry(d):
            src, tgt = endpoints(env, ctx, d)
            tgt_w = whnf(env, tgt)
            if not isinstance(tgt_w, Hom):
                fail("uncurry-shape", f"uncurry needs a production into [_, _], got {_show(ctx, tgt_w)}")
            return Tensor(src, tgt_w.src), tgt_w.tgt
        case Bind(dom, body):
            check_type(env, ctx, dom)
            inner = ctx.extend(p.name, dom)
            src, tgt = endpoints(env, inner, body)
            if 0 in free_indices(src):
                src = nf(env, src)
                if 0 in free_indices(src):
                    fail("bind-source", f"bind: source supply mentions the bound variable {p.name}")
            return substitute(src, 0, Tt()), SupAbs(dom, tgt, p.name)
        case Free(d, a):
            src, tgt = endpoints(env, ctx, d)
            tgt_w = whnf(env, tgt)
            if not isinstance(tgt_w, SupAbs):
                fail("free-shape", f"free needs a production into Λ, got {_show(ctx, tgt_w)}")
            check(env, ctx, a, tgt_w.dom)
            return src, instantiate(tgt_w.body, a)
        case BangF(d):
            src, tgt = endpoints(env, ctx, d)
            return Bang(src), Bang(tgt)
        case Dupl(d):
            _supplies(env, ctx, d)
            return Bang(d), Bang(Tensor(d, d))
        case Erase(d):
            _supplies(env, ctx, d)
            return Bang(d), Empty()
        case Use(d):
            _supplies(env, ctx, d)
            return Bang(d), d
        case Mult(d):
            _supplies(env, ctx, d)
            return Bang(d), Bang(Bang(d))
        case CohEmpty():
            return Empty(), Bang(Empty())
        case CohTensor(a, b):
            _supplies(env, ctx, a, b)
            return Tensor(Bang(a), Bang(b)), Bang(Tensor(a, b))
        case Hole():
            fail("unfilled-hole", "placeholder `_` in a production could not be determined")
    ty = whnf(env, infer(env, ctx, p))
    if not isinstance(ty, ProdTy):
        fail("not-a-production", f"expected a production, got something of type {_show(ctx, ty)}")
    return ty.src, ty.tgt


def _section(env: Env, ctx: Context, p: Term, packed: Term, a: Term, forward: bool) -> tuple[Term, Term]:
    _iota_argument(env, ctx, packed)
    pair = (Iota(packed), Iota(a))
    return pair if forward else (pair[1], pair[0])


def check_production(env: Env, ctx: Context, p: Term, src: Term, tgt: Term) -> None:
    s, t = endpoints(env, ctx, p)
    for want, got, side in ((src, s, "source"), (tgt, t, "target")):
        if not conv(env, want, got):
            fail(
                "production-endpoint",
                f"production {side} is {_show(ctx, nf(env, got))} but {_show(ctx, nf(env, want))} was required",
            )


# -- derived productions -----------------------------------------------------


def compose(*ps: Term) -> Term:
    """``compose(p, q, r)`` is ``p ∘ q ∘ r``."""
    out = ps[-1]
    for p in reversed(ps[:-1]):
        out = Comp(p, out)
    return out


def assoc_inv(a: Term, b: Term, c: Term) -> Term:
    """``a ⊗ (b ⊗ c) ▷ (a ⊗ b) ⊗ c`` from assoc and swap."""
    return compose(
        Swap(c, Tensor(a, b)),
        Assoc(c, a, b),
        Swap(b, Tensor(c, a)),
        Assoc(b, c, a),
        Swap(a, Tensor(b, c)),
    )


def unitl(d: Term) -> Term:
    """``◇ ⊗ d ▷ d``."""
    return Comp(Unitr(d), Swap(Empty(), d))


def unitl_inv(d: Term) -> Term:
    """``d ▷ ◇ ⊗ d``."""
    return Comp(Swap(d, Empty()), UnitrInv(d))


def pow_production(env: Env, ctx: Context, delta: Term, m: Term) -> Term:
    """Apply ``delta`` ``m`` times side by side."""
    k = as_numeral(nf(env, m))
    if k is not None:
        out: Term = Id(Empty())
        for _ in range(k):
            out = TensorF(delta, out)
        return out
    src, tgt = endpoints(env, ctx, delta)
    if conv(env, src, tgt):
        return Id(Pow(src, m))
    fail(
        "open-multiplicity",
        "multiplicity is not a closed numeral; supply the production explicitly with `by`",
    )


def _powers(d: Term, k: int) -> Term:
    out: Term = Empty()
    for _ in range(k):
        out = Tensor(d, out)
    return out


def pow_split(d: Term, n: int, k: int) -> Term:
    """``d^(n+k) ▷ d^n ⊗ d^k`` on unfolded powers."""
    if n == 0:
        return unitl_inv(_powers(d, k))
    rest = pow_split(d, n - 1, k)
    return Comp(
        assoc_inv(d, _powers(d, n - 1), _powers(d, k)),
        TensorF(Id(d), rest),
    )


def middle_four(a: Term, b: Term, c: Term, d: Term) -> Term:
    """``(a ⊗ b) ⊗ (c ⊗ d) ▷ (a ⊗ c) ⊗ (b ⊗ d)``."""
    return compose(
        assoc_inv(a, c, Tensor(b, d)),
        TensorF(Id(a), Assoc(c, b, d)),
        TensorF(Id(a), TensorF(Swap(b, c), Id(d))),
        TensorF(Id(a), assoc_inv(b, c, d)),
        Assoc(a, b, Tensor(c, d)),
    )


def _distr(d0: Term, d1: Term, m: int, n: int) -> Term:
    if m == 0:
        return Unitr(Empty())
    block = Tensor(d0, _powers(d1, n))
    split = pow_split(d1, n, (m - 1) * n)
    return compose(
        TensorF(Id(block), _distr(d0, d1, m - 1, n)),
        middle_four(d0, _powers(d0, m - 1), _powers(d1, n), _powers(d1, (m - 1) * n)),
        TensorF(Id(Tensor(d0, _powers(d0, m - 1))), split),
    )


def tensor_pow_distr(env: Env, m: Term, n: Term, d0: Term, d1: Term) -> Term:
    """``d0^m ⊗ d1^(m·n) ▷ (d0 ⊗ d1^n)^m`` for closed numerals ``m`` and ``n``."""
    mk, nk = as_numeral(nf(env, m)), as_numeral(nf(env, n))
    if mk is None or nk is None:
        fail(
            "open-multiplicity",
            "distr needs closed numerals; supply the production explicitly with `by`",
        )
    src = Tensor(Pow(d0, m), Pow(d1, numeral(mk * nk)))
    tgt = Pow(Tensor(d0, Pow(d1, n)), m)
    return compose(Id(tgt), _distr(d0, d1, mk, nk), Id(src))


__all__ = [
    "endpoints",
    "check_production",
    "check_supply",
    "compose",
    "assoc_inv",
    "unitl",
    "unitl_inv",
    "pow_production",
    "tensor_pow_distr",
    "NAT",
]

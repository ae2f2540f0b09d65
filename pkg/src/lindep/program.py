"""Checking whole files: prelude loading, declaration order, diagnostics."""

from __future__ import annotations

from importlib.resources import files

from .diagnostics import Diagnostic, LinDepError
from .elaborate import Scope
from .kernel import Env, nf
from .linear import Elaborator, Witness
from .parser import parse_expr, parse_program, parse_telescope, SName
from .syntax import App, Const, Fst, Term, Universe, instantiate
from .kernel import whnf
from .ltypes import base


def prelude_source() -> str:
    return files("lindep").joinpath("prelude.ld").read_text(encoding="utf-8")


class Session:
    """An environment grown by checking declarations in order."""

    def __init__(self, prelude: bool = True):
        self.env = Env()
        self.elab = Elaborator(self.env)
        if prelude:
            errors = self.load(prelude_source(), "<prelude>")
            assert not errors, errors

    def load(self, src: str, path: str = "<input>") -> list[Diagnostic]:
        """Check every declaration; parse errors propagate as ``ParseError``."""
        out = []
        for decl in parse_program(src):
            try:
                self.elab.declare(decl)
            except LinDepError as e:
                out.append(e.diagnostic)
        return out

    def witnesses(self, name: str) -> list[Witness]:
        return [w for w in self.elab.witnesses if w.definition == name]

    def apply(self, name: str, args: list[str]) -> tuple[Term, Term]:
        """The erased program ``name`` applied to surface arguments, and its type."""
        el, sc = self.elab, Scope()
        d = self.env.lookup(name)
        sig = el.signatures.get(name)
        term, ty = Const(name), d.type
        parsed = [parse_expr(a) for a in args]
        nparams = sig.params if sig else len(parsed)
        for s in parsed[:nparams]:
            term, ty = self._apply_one(sc, term, ty, s)
        if sig is not None:
            ty = whnf(self.env, ty)
            term, ty = Fst(term), ty.fst_ty
            for s in parsed[nparams:]:
                term, ty = self._apply_one(sc, term, ty, s)
        elif len(parsed) > nparams:
            raise ValueError("too many arguments")
        return term, ty

    def _apply_one(self, sc: Scope, term: Term, ty: Term, s) -> tuple[Term, Term]:
        from .diagnostics import fail

        pw = whnf(self.env, ty)
        if not hasattr(pw, "dom") or pw.__class__.__name__ != "Pi":
            fail("too-many-arguments", "the program takes no further arguments")
        a = self.elab.check(sc, s, pw.dom)
        return App(term, a), instantiate(pw.cod, a)

    def run(self, name: str, args: list[str]) -> str:
        from .pretty import show_value

        term, ty = self.apply(name, args)
        return show_value(self.env, nf(self.env, term), ty)

    def context(self, telescope: str) -> Scope:
        """Scope for ``--ctx``; unknown type names are postulated as types."""
        sc = Scope()
        for name, ty_s in parse_telescope(telescope) if telescope.strip() else []:
            if isinstance(ty_s, SName) and sc.resolve(ty_s.name) is None and ty_s.name not in self.env:
                try:
                    self.elab.infer(sc, ty_s)
                except LinDepError:
                    self.env.postulate(ty_s.name, Universe())
            sc = sc.bind(name, self.elab.check(sc, ty_s, Universe()))
        return sc

    def supply_nf(self, expr: str, telescope: str = "") -> str:
        from .solver import normalize_supply, render_atom
        from .syntax import SupplyTy

        sc = self.context(telescope)
        d = self.elab.check(sc, parse_expr(expr), SupplyTy())
        atoms = normalize_supply(self.env, sc.ctx, d).atoms
        names = sc.ctx.names()
        return "{" + ", ".join(render_atom(a, names) for a in atoms) + "}"


__all__ = ["Session", "prelude_source", "base"]

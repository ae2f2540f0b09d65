r"""Lexer and parser for ``.ld`` source files.

Every Unicode operator has an ASCII spelling:

    ⊩ ||-    ⊸ -o    ↦ |->    !↦ !|->    → ->    ▷ |>    ⊗ (*)    ⊗f (*)f
    ∘ %      ◇ <>    ι iota   ⊖ fn      Λ /\    λ \     × *     ⟨ ⟩ < >
    Σ Sigma  ⊤ Unit  ℕ Nat    μ mu
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Any

from .diagnostics import Diagnostic, ParseError, Span

# -- surface syntax ----------------------------------------------------------


@dataclass
class S:
    span: Span | None = field(default=None, kw_only=True, repr=False, compare=False)


@dataclass
class SName(S):
    name: str


@dataclass
class SNum(S):
    value: int


@dataclass
class SHole(S):
    pass


@dataclass
class SApp(S):
    fn: S
    arg: S


@dataclass
class SOp(S):
    op: str
    left: S
    right: S


@dataclass
class SQApp(S):
    """``f < m @ a``."""

    fn: S
    mult: S
    arg: S


@dataclass
class SBy(S):
    term: S
    prod: S


@dataclass
class SPi(S):
    name: str
    dom: S
    cod: S


@dataclass
class SSigma(S):
    name: str
    dom: S
    cod: S


@dataclass
class SLin(S):
    """Linear lambda; ``binder`` is a name, ``"_"`` or a pair of names."""

    binder: Any
    bang: bool
    body: S


@dataclass
class SFun(S):
    name: str
    dom: S | None
    body: S


@dataclass
class SPat(S):
    ctor: str
    args: list[str]


@dataclass
class SCase(S):
    scrutinee: S
    branches: list[tuple[SPat, S]]


@dataclass
class SIf(S):
    cond: S
    then: S
    orelse: S


@dataclass
class SPair(S):
    fst: S
    snd: S


@dataclass
class SIota(S):
    term: S


@dataclass
class SIotaPost(S):
    """The variable rule ``a ι``."""

    term: S


@dataclass
class SFn(S):
    """``f ⊖``: a function as its identity judgment."""

    term: S


@dataclass
class SBang(S):
    term: S


@dataclass
class SEmpty(S):
    pass


@dataclass
class SHom(S):
    src: S
    tgt: S


@dataclass
class SAbs(S):
    name: str
    dom: S
    body: S


@dataclass
class SMu(S):
    name: str
    body: S


@dataclass
class SArrow(S):
    """``⟨x : A⟩^m ⊸ L``; ``mult`` is None for one, ``"!"`` for bang."""

    binder: Any
    dom: S
    mult: Any
    cod: S


@dataclass
class SBnat(S):
    term: S


@dataclass
class SAnn(S):
    term: S
    type: S


@dataclass
class DPostulate:
    name: str
    type: S
    span: Span


@dataclass
class DDef:
    name: str
    params: list[tuple[str, S]]
    type: S
    body: S
    span: Span


# -- lexer -------------------------------------------------------------------

_SYMBOLS = [
    ("!|->", "!↦"),
    ("||-", "⊩"),
    ("|->", "↦"),
    ("(*)f", "⊗f"),
    ("(*)", "⊗"),
    ("!↦", "!↦"),
    ("⊗f", "⊗f"),
    ("!@", "!@"),
    ("!f", "!f"),
    ("/\\", "Λ"),
    ("-o", "⊸"),
    ("->", "→"),
    ("=>", "⇒"),
    ("<>", "◇"),
    ("|>", "▷"),
    ("⊩", "⊩"),
    ("⊸", "⊸"),
    ("↦", "↦"),
    ("→", "→"),
    ("⇒", "⇒"),
    ("▷", "▷"),
    ("⊗", "⊗"),
    ("∘", "∘"),
    ("%", "∘"),
    ("◇", "◇"),
    ("◊", "◇"),
    ("ι", "ι"),
    ("⊖", "⊖"),
    ("Λ", "Λ"),
    ("λ", "λ"),
    ("\\", "λ"),
    ("×", "×"),
    ("*", "×"),
    ("⟨", "⟨"),
    ("⟩", "⟩"),
    ("<", "<"),
    (">", ">"),
    ("Σ", "Σ"),
    ("⊤", "⊤"),
    ("ℕ", "ℕ"),
    ("μ", "μ"),
    ("¬", "¬"),
    ("+", "+"),
    ("^", "^"),
    ("@", "@"),
    ("!", "!"),
    ("(", "("),
    (")", ")"),
    ("[", "["),
    ("]", "]"),
    ("{", "{"),
    ("}", "}"),
    (",", ","),
    (";", ";"),
    (":", ":"),
    ("=", "="),
    (".", "."),
    ("|", "|"),
]

_WORDS = {
    "iota": "ι",
    "fn": "⊖",
    "Sigma": "Σ",
    "Unit": "⊤",
    "Nat": "ℕ",
    "mu": "μ",
    "fun": "fun",
    "case": "case",
    "of": "of",
    "if": "if",
    "then": "then",
    "else": "else",
    "by": "by",
    "def": "def",
    "postulate": "postulate",
}

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_']*(?:-[A-Za-z0-9][A-Za-z0-9_']*)*")
_NUM = re.compile(r"[0-9]+")


@dataclass(frozen=True)
class Tok:
    kind: str  # "id", "num", "sym", "kw", "eof"
    text: str
    line: int
    col: int
    end_col: int


def _perr(message: str, line: int, col: int) -> ParseError:
    return ParseError(Diagnostic("parse-error", message, span=Span.at(line, col)))


def tokenize(src: str) -> list[Tok]:
    toks: list[Tok] = []
    for lineno, line in enumerate(src.splitlines(), 1):
        i = 0
        while i < len(line):
            ch = line[i]
            if ch.isspace():
                i += 1
                continue
            if line.startswith("--", i):
                break
            m = _IDENT.match(line, i)
            if m and not (ch == "_" and m.end() == i + 1):
                word = m.group()
                # "x-o" must not swallow the arrow
                if "-o" in word and re.search(r"-o(?![A-Za-z0-9_'])", word):
                    word = word[: word.index("-o")]
                kind = "kw" if word in _WORDS else "id"
                text = _WORDS.get(word, word)
                if word in ("iota", "fn", "Sigma", "Unit", "Nat", "mu"):
                    kind = "sym"
                toks.append(Tok(kind, text, lineno, i + 1, i + 1 + len(word)))
                i += len(word)
                continue
            if ch == "_":
                toks.append(Tok("sym", "_", lineno, i + 1, i + 2))
                i += 1
                continue
            m = _NUM.match(line, i)
            if m:
                toks.append(Tok("num", m.group(), lineno, i + 1, m.end() + 1))
                i = m.end()
                continue
            for lit, canon in _SYMBOLS:
                if line.startswith(lit, i):
                    if lit == "!f" and i + 2 < len(line) and (line[i + 2].isalnum() or line[i + 2] in "_'"):
                        continue
                    toks.append(Tok("sym", canon, lineno, i + 1, i + 1 + len(lit)))
                    i += len(lit)
                    break
            else:
                raise _perr(f"unexpected character {ch!r}", lineno, i + 1)
    last = len(src.splitlines()) or 1
    toks.append(Tok("eof", "", last + 1, 1, 1))
    return toks


# -- parser ------------------------------------------------------------------

_ATOM_START_SYM = {"(", "[", "◇", "⊤", "ℕ", "_", "⟨", "|", "Σ", "μ", "Λ"}


class Parser:
    def __init__(self, src: str):
        self.toks = tokenize(src)
        self.pos = 0
        self.in_bars = 0

    # token helpers
    @property
    def tok(self) -> Tok:
        return self.toks[self.pos]

    def peek(self, k: int = 1) -> Tok:
        return self.toks[min(self.pos + k, len(self.toks) - 1)]

    def at(self, *texts: str) -> bool:
        t = self.tok
        return t.kind in ("sym", "kw") and t.text in texts

    def advance(self) -> Tok:
        t = self.tok
        self.pos += 1
        return t

    def expect(self, text: str) -> Tok:
        if not self.at(text):
            raise _perr(f"expected {text!r} but found {self.tok.text or 'end of input'!r}", self.tok.line, self.tok.col)
        return self.advance()

    def ident(self) -> str:
        if self.tok.kind != "id":
            raise _perr(f"expected a name but found {self.tok.text or 'end of input'!r}", self.tok.line, self.tok.col)
        return self.advance().text

    def span_from(self, start: Tok) -> Span:
        prev = self.toks[self.pos - 1] if self.pos > 0 else start
        return Span.at(start.line, start.col, prev.line, prev.end_col)

    def mark(self, node: S, start: Tok) -> S:
        node.span = self.span_from(start)
        return node

    # declarations
    def program(self) -> list:
        decls = []
        while self.tok.kind != "eof":
            decls.append(self.declaration())
        return decls

    def declaration(self):
        start = self.tok
        if self.at("postulate"):
            self.advance()
            names = [self.ident()]
            while self.at(",") or self.tok.kind == "id":
                if self.at(","):
                    self.advance()
                names.append(self.ident())
            self.expect(":")
            ty = self.expr()
            return [DPostulate(n, ty, self.span_from(start)) for n in names] if len(names) > 1 else DPostulate(
                names[0], ty, self.span_from(start)
            )
        if self.at("def"):
            self.advance()
            name = self.ident()
            params: list[tuple[str, S]] = []
            while self.at("("):
                self.advance()
                group = [self.ident()]
                while self.tok.kind == "id":
                    group.append(self.ident())
                self.expect(":")
                ty = self.expr()
                self.expect(")")
                params.extend((n, ty) for n in group)
            self.expect(":")
            ty = self.expr()
            self.expect("=")
            body = self.expr()
            return DDef(name, params, ty, body, self.span_from(start))
        raise _perr(f"expected a declaration but found {self.tok.text!r}", self.tok.line, self.tok.col)

    # expressions, lowest precedence first
    def expr(self) -> S:
        start = self.tok
        e = self.binder_level()
        while self.at("by"):
            self.advance()
            p = self.binder_level()
            e = self.mark(SBy(e, p), start)
        return e

    def binder_level(self) -> S:
        start = self.tok
        if self.at("λ"):
            self.advance()
            binder = self.lin_binder()
            if self.at("!↦"):
                bang = True
            else:
                bang = False
                self.expect("↦")
            self.advance() if bang else None
            return self.mark(SLin(binder, bang, self.expr_nb()), start)
        if self.at("fun"):
            self.advance()
            params = []
            while not self.at("⇒"):
                if self.at("("):
                    self.advance()
                    names = [self.ident()]
                    while self.tok.kind == "id":
                        names.append(self.ident())
                    self.expect(":")
                    ty = self.expr()
                    self.expect(")")
                    params.extend((n, ty) for n in names)
                elif self.at("_"):
                    self.advance()
                    params.append(("_", None))
                else:
                    params.append((self.ident(), None))
            self.expect("⇒")
            body = self.expr_nb()
            for n, ty in reversed(params):
                body = SFun(n, ty, body, span=self.span_from(start))
            return body
        if self.at("case"):
            self.advance()
            scrut = self.expr()
            self.expect("of")
            self.expect("{")
            branches = []
            while True:
                pat = self.pattern()
                self.expect("→")
                branches.append((pat, self.expr()))
                if self.at(";"):
                    self.advance()
                    if self.at("}"):
                        break
                    continue
                break
            self.expect("}")
            return self.mark(SCase(scrut, branches), start)
        if self.at("if"):
            self.advance()
            c = self.expr()
            self.expect("then")
            t = self.expr()
            self.expect("else")
            e = self.expr_nb()
            return self.mark(SIf(c, t, e), start)
        return self.judgment_level()

    def expr_nb(self) -> S:
        """Body of a binder extends as far right as possible, ``by`` included."""
        return self.expr()

    def lin_binder(self):
        if self.at("("):
            self.advance()
            x = self.name_or_wild()
            self.expect(",")
            y = self.name_or_wild()
            self.expect(")")
            return (x, y)
        return self.name_or_wild()

    def name_or_wild(self) -> str:
        if self.at("_"):
            self.advance()
            return "_"
        return self.ident()

    def pattern(self) -> SPat:
        start = self.tok
        if self.at("("):
            self.advance()
            if self.tok.kind == "id" and self.peek().text == ",":
                x = self.name_or_wild()
                self.expect(",")
                y = self.name_or_wild()
                self.expect(")")
                return self.mark(SPat(",", [x, y]), start)
            p = self.pattern()
            self.expect(")")
            return p
        ctor = self.ident() if self.tok.kind == "id" else self.advance().text
        args = []
        while self.tok.kind == "id" or self.at("_"):
            args.append(self.name_or_wild())
        return self.mark(SPat(ctor, args), start)

    def judgment_level(self) -> S:
        start = self.tok
        left = self.arrow_level()
        if self.at("⊩"):
            self.advance()
            right = self.arrow_level()
            return self.mark(SOp("⊩", left, right), start)
        return left

    def arrow_level(self) -> S:
        start = self.tok
        # (x : A) → B  and  (x : A) × B
        if self.at("(") and self.peek().kind == "id" and self._is_telescope():
            saved = self.pos
            binders = self._telescope()
            if self.at("→") or self.at("×"):
                op = self.advance().text
                # a judgment to the right of → belongs to the codomain
                cod = self.judgment_level() if op == "→" else self.arrow_level()
                for name, ty in reversed(binders):
                    cod = (SPi if op == "→" else SSigma)(name, ty, cod, span=self.span_from(start))
                return cod
            self.pos = saved
        left = self.app_op_level()
        if self.at("→"):
            self.advance()
            return self.mark(SOp("→", left, self.judgment_level()), start)
        if self.at("▷"):
            self.advance()
            return self.mark(SOp("▷", left, self.app_op_level()), start)
        return left

    def _is_telescope(self) -> bool:
        k = 1
        while self.peek(k).kind == "id":
            k += 1
        return k > 1 and self.peek(k).text == ":" and self.peek(k).kind == "sym"

    def _telescope(self) -> list[tuple[str, S]]:
        out = []
        while self.at("(") and self.peek().kind == "id" and self._is_telescope():
            self.advance()
            names = [self.ident()]
            while self.tok.kind == "id":
                names.append(self.ident())
            self.expect(":")
            ty = self.expr()
            self.expect(")")
            out.extend((n, ty) for n in names)
        return out

    def app_op_level(self) -> S:
        start = self.tok
        left = self.comp_level()
        while True:
            if self.at("@", "!@"):
                op = self.advance().text
                left = self.mark(SOp(op, left, self.comp_level()), start)
            elif self.at("<"):
                self.advance()
                m = self.app_level()
                self.expect("@")
                left = self.mark(SQApp(left, m, self.comp_level()), start)
            else:
                return left

    def _right_assoc(self, ops: tuple[str, ...], next_level) -> S:
        start = self.tok
        left = next_level()
        if self.at(*ops):
            op = self.advance().text
            right = self._right_assoc(ops, next_level)
            return self.mark(SOp(op, left, right), start)
        return left

    def comp_level(self) -> S:
        return self._right_assoc(("∘",), self.tensorf_level)

    def tensorf_level(self) -> S:
        return self._right_assoc(("⊗f",), self.sum_level)

    def sum_level(self) -> S:
        return self._right_assoc(("+",), self.prod_level)

    def prod_level(self) -> S:
        return self._right_assoc(("×",), self.tensor_level)

    def tensor_level(self) -> S:
        return self._right_assoc(("⊗",), self.pow_level)

    def pow_level(self) -> S:
        start = self.tok
        base = self.app_level()
        while self.at("^"):
            self.advance()
            base = self.mark(SOp("^", base, self.app_level()), start)
        return base

    def can_start_atom(self) -> bool:
        t = self.tok
        if t.kind in ("id", "num"):
            return True
        if t.kind == "sym" and t.text in _ATOM_START_SYM:
            return not (t.text == "|" and self.in_bars)
        return False

    def app_level(self) -> S:
        start = self.tok
        if self.at("ι"):
            self.advance()
            head: S = self.mark(SIota(self.atom()), start)
        elif self.at("!"):
            self.advance()
            if self.at("⟨", "<"):
                return self.lin_arrow(start, bang=True)
            head = self.mark(SBang(self.atom()), start)
        elif self.at("!f"):
            self.advance()
            head = self.mark(SApp(SName("!f", span=self.span_from(start)), self.atom()), start)
        elif self.at("¬"):
            self.advance()
            head = self.mark(SApp(SName("not", span=self.span_from(start)), self.atom()), start)
        elif self.at("⟨", "<"):
            return self.lin_arrow(start, bang=False)
        else:
            head = self.atom()
        while True:
            if self.at("ι"):
                nxt = self.peek()
                starts = nxt.kind in ("id", "num") or (nxt.kind == "sym" and nxt.text in _ATOM_START_SYM - {"|"})
                if starts:
                    s2 = self.tok
                    self.advance()
                    head = self.mark(SApp(head, self.mark(SIota(self.atom()), s2)), start)
                else:
                    self.advance()
                    head = self.mark(SIotaPost(head), start)
            elif self.at("⊖"):
                self.advance()
                head = self.mark(SFn(head), start)
            elif self.can_start_atom():
                head = self.mark(SApp(head, self.atom()), start)
            else:
                return head

    def lin_arrow(self, start: Tok, bang: bool) -> S:
        if not self.at("⟨", "<"):
            raise _perr("expected ⟨", self.tok.line, self.tok.col)
        self.advance()
        binder: Any = None
        if self.tok.kind == "id" and self.peek().text == ":":
            binder = self.ident()
            self.advance()
        elif self.at("(") and self.peek().kind == "id" and self.peek(2).text == ",":
            self.advance()
            x = self.name_or_wild()
            self.expect(",")
            y = self.name_or_wild()
            self.expect(")")
            self.expect(":")
            binder = (x, y)
        elif self.at("_") and self.peek().text == ":":
            self.advance()
            self.advance()
            binder = "_"
        dom = self.expr()
        if not (self.at("⟩") or self.at(">")):
            raise _perr("expected ⟩ to close the argument", self.tok.line, self.tok.col)
        self.advance()
        mult: Any = "!" if bang else None
        if self.at("^"):
            if bang:
                raise _perr("a bang argument takes no multiplicity", self.tok.line, self.tok.col)
            self.advance()
            mult = self.app_level()
        self.expect("⊸")
        cod = self.judgment_free_arrow()
        return self.mark(SArrow(binder, dom, mult, cod), start)

    def judgment_free_arrow(self) -> S:
        return self.arrow_level()

    def atom(self) -> S:
        start = self.tok
        t = self.tok
        if t.kind == "id":
            self.advance()
            return self.mark(SName(t.text), start)
        if t.kind == "num":
            self.advance()
            return self.mark(SNum(int(t.text)), start)
        if self.at("_"):
            self.advance()
            return self.mark(SHole(), start)
        if self.at("◇"):
            self.advance()
            return self.mark(SEmpty(), start)
        if self.at("⊤"):
            self.advance()
            return self.mark(SName("⊤"), start)
        if self.at("ℕ"):
            self.advance()
            return self.mark(SName("ℕ"), start)
        if self.at("|") and not self.in_bars:
            self.advance()
            self.in_bars += 1
            inner = self.expr()
            self.in_bars -= 1
            self.expect("|")
            return self.mark(SBnat(inner), start)
        if self.at("⟨"):
            return self.lin_arrow(start, bang=False)
        if self.at("Σ"):
            self.advance()
            if self.at("(") and self._is_telescope():
                binders = self._telescope()
                cod = self.atom()
                for name, ty in reversed(binders):
                    cod = SSigma(name, ty, cod, span=self.span_from(start))
                return cod
            a = self.atom()
            b = self.atom()
            return self.mark(SApp(SApp(SName("Σ", span=a.span), a), b), start)
        if self.at("μ"):
            self.advance()
            name = self.ident()
            self.expect(".")
            return self.mark(SMu(name, self.expr()), start)
        if self.at("Λ"):
            self.advance()
            name = self.name_or_wild()
            self.expect(":")
            dom = self.app_level()
            self.expect(".")
            return self.mark(SAbs(name, dom, self.expr()), start)
        if self.at("["):
            self.advance()
            a = self.expr()
            self.expect(",")
            b = self.expr()
            self.expect("]")
            return self.mark(SHom(a, b), start)
        if self.at("("):
            self.advance()
            saved = self.in_bars
            self.in_bars = 0
            e = self.expr()
            if self.at(","):
                self.advance()
                rest = self.expr()
                self.expect(")")
                self.in_bars = saved
                return self.mark(SPair(e, rest), start)
            if self.at(":"):
                self.advance()
                ty = self.expr()
                self.expect(")")
                self.in_bars = saved
                return self.mark(SAnn(e, ty), start)
            self.expect(")")
            self.in_bars = saved
            return e
        raise _perr(f"unexpected {t.text or 'end of input'!r}", t.line, t.col)


def parse_program(src: str) -> list:
    decls = []
    for d in Parser(src).program():
        decls.extend(d if isinstance(d, list) else [d])
    return decls


def parse_expr(src: str) -> S:
    p = Parser(src)
    e = p.expr()
    if p.tok.kind != "eof":
        raise _perr(f"unexpected {p.tok.text!r}", p.tok.line, p.tok.col)
    return e


def parse_telescope(src: str) -> list[tuple[str, S]]:
    """``x : A, y : B x`` as used by ``--ctx``."""
    p = Parser(src)
    out = []
    while p.tok.kind != "eof":
        names = [p.ident()]
        while p.tok.kind == "id":
            names.append(p.ident())
        p.expect(":")
        ty = p.judgment_level()
        out.extend((n, ty) for n in names)
        if p.at(","):
            p.advance()
    return out

"""Structured checker errors."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class Position:
    line: int
    col: int


@dataclass(frozen=True)
class Span:
    start: Position
    end: Position

    @classmethod
    def at(cls, line: int, col: int, end_line: int | None = None, end_col: int | None = None) -> "Span":
        return cls(Position(line, col), Position(end_line or line, end_col or col))

    def __str__(self) -> str:
        return f"{self.start.line}:{self.start.col}"


@dataclass(frozen=True)
class Residue:
    """Atoms left unmatched on either side of a production goal."""

    left: tuple[Any, ...]
    right: tuple[Any, ...]
    names: tuple[str, ...] = field(default=(), compare=False)

    def render(self) -> str:
        from .solver import render_atoms

        names = list(self.names)
        return f"{render_atoms(self.right, names)} ≠ {render_atoms(self.left, names)}"


@dataclass(frozen=True)
class Diagnostic:
    rule: str
    message: str
    severity: str = "error"
    span: Span | None = None
    residue: Residue | None = None
    name: str | None = field(default=None, compare=False)

    def with_span(self, span: Span | None, name: str | None = None) -> "Diagnostic":
        if self.span is not None or span is None:
            return self if name is None or self.name else Diagnostic(
                self.rule, self.message, self.severity, self.span, self.residue, name
            )
        return Diagnostic(self.rule, self.message, self.severity, span, self.residue, name or self.name)

    def format(self, path: str = "<input>") -> str:
        where = f"{path}:{self.span}" if self.span else path
        head = f"{where}: {self.severity}[{self.rule}]"
        if self.name:
            head += f" in {self.name}"
        text = f"{head}: {self.message}"
        if self.residue is not None:
            text += f"\n  {self.residue.render()}"
        return text

    def to_json(self) -> dict:
        from .solver import render_atom

        out: dict[str, Any] = {"severity": self.severity}
        if self.span is not None:
            out["span"] = {
                "start": {"line": self.span.start.line, "col": self.span.start.col},
                "end": {"line": self.span.end.line, "col": self.span.end.col},
            }
        else:
            out["span"] = None
        out["rule"] = self.rule
        out["message"] = self.message
        if self.residue is not None:
            out["residue"] = {
                "left": [render_atom(a, list(self.residue.names)) for a in self.residue.left],
                "right": [render_atom(a, list(self.residue.names)) for a in self.residue.right],
            }
        return out


class LinDepError(Exception):
    def __init__(self, diagnostic: Diagnostic):
        super().__init__(diagnostic.message)
        self.diagnostic = diagnostic


class ParseError(LinDepError):
    pass


def fail(rule: str, message: str, residue: Residue | None = None) -> "NoReturn":  # type: ignore[name-defined]
    raise LinDepError(Diagnostic(rule, message, residue=residue))

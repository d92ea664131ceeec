"""Concrete syntax: formulas, Kripke model files, DOT export.

Formula grammar (ASCII, with unicode aliases accepted on input):

    formula  := disj ('->' formula)?          right associative
    disj     := conj ('|' conj)*               left associative
    conj     := prefix ('&' prefix)*           left associative
    prefix   := '~' prefix | '<n>' prefix | '[n]' prefix | atom
    atom     := 'T' | 'F' | name (':' sort)? | '(' formula ')'
    sort     := decimal natural | 'w'

A bare variable name defaults to sort omega. Parsed formulas come out
desugared. Errors carry byte-offset spans into the input.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

from .formulas import (
    BOT,
    OMEGA,
    TOP,
    And,
    Bot,
    Box,
    Dia,
    Formula,
    Implies,
    Neg,
    Or,
    Sort,
    Top,
    Var,
    desugar,
    render_sort,
    sort_key,
)
from .kripke import KripkeModel


class SourceSpan(NamedTuple):
    start: int
    end: int


class ParseError(ValueError):
    """Syntax or sort error, with a byte-offset span into the input."""

    def __init__(self, message: str, span: SourceSpan):
        super().__init__(f"{message} (bytes {span.start}..{span.end})")
        self.message = message
        self.span = span


def _byte_span(text: str, start: int, end: int) -> SourceSpan:
    # token positions are tracked in characters; spans are reported in bytes
    b0 = len(text[:start].encode("utf-8"))
    b1 = b0 + len(text[start:end].encode("utf-8"))
    return SourceSpan(b0, b1)


@dataclass
class _Token:
    kind: str
    value: object
    start: int
    end: int


_UNICODE_ALIASES = {"¬": "~", "∧": "&", "∨": "|", "⊤": "T", "⊥": "F"}


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c == "#":
            break
        if c in "()":
            tokens.append(_Token("lparen" if c == "(" else "rparen", c, i, i + 1))
            i += 1
            continue
        if c in "~¬":
            tokens.append(_Token("neg", "~", i, i + 1))
            i += 1
            continue
        if c in "&∧":
            tokens.append(_Token("and", "&", i, i + 1))
            i += 1
            continue
        if c in "|∨":
            tokens.append(_Token("or", "|", i, i + 1))
            i += 1
            continue
        if c == "→":
            tokens.append(_Token("implies", "->", i, i + 1))
            i += 1
            continue
        if c == "-":
            if i + 1 < n and text[i + 1] == ">":
                tokens.append(_Token("implies", "->", i, i + 2))
                i += 2
                continue
            raise ParseError("stray '-'", _byte_span(text, i, i + 1))
        if c in "<◊" or c in "[□":
            kind = "dia" if c in "<◊" else "box"
            closer = ">" if c == "<" else "]" if c == "[" else None
            j = i + 1
            if j >= n or not text[j].isdigit():
                raise ParseError("expected modality index", _byte_span(text, i, i + 1))
            k = j
            while k < n and text[k].isdigit():
                k += 1
            index = int(text[j:k])
            if closer is not None:
                if k >= n or text[k] != closer:
                    raise ParseError(f"expected '{closer}'", _byte_span(text, i, k))
                k += 1
            tokens.append(_Token(kind, index, i, k))
            i = k
            continue
        if c == "⊤" or c == "⊥":
            tokens.append(_Token("top" if c == "⊤" else "bot", c, i, i + 1))
            i += 1
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            name = text[i:j]
            if name == "T":
                tokens.append(_Token("top", name, i, j))
                i = j
                continue
            if name == "F":
                tokens.append(_Token("bot", name, i, j))
                i = j
                continue
            sort: Optional[Sort] = None
            end = j
            if j < n and text[j] == ":":
                k = j + 1
                if k < n and (text[k] == "w" or text[k] == "ω"):
                    sort = OMEGA
                    end = k + 1
                elif k < n and text[k].isdigit():
                    m = k
                    while m < n and text[m].isdigit():
                        m += 1
                    sort = int(text[k:m])
                    end = m
                else:
                    raise ParseError("expected sort after ':'", _byte_span(text, j, j + 1))
            tokens.append(_Token("var", (name, sort), i, end))
            i = end
            continue
        raise ParseError(f"unexpected character {c!r}", _byte_span(text, i, i + 1))
    tokens.append(_Token("eof", None, n, n))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0
        self.var_sorts: dict[str, Sort] = {}
        self.var_spans: dict[str, SourceSpan] = {}

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def error(self, message: str, tok: _Token):
        raise ParseError(message, _byte_span(self.text, tok.start, tok.end))

    def parse(self) -> Formula:
        f = self.implication()
        tok = self.peek()
        if tok.kind != "eof":
            self.error("unexpected trailing input", tok)
        return f

    def implication(self) -> Formula:
        left = self.disjunction()
        if self.peek().kind == "implies":
            self.next()
            right = self.implication()
            return Implies(left, right)
        return left

    def disjunction(self) -> Formula:
        out = self.conjunction()
        while self.peek().kind == "or":
            self.next()
            out = Or(out, self.conjunction())
        return out

    def conjunction(self) -> Formula:
        out = self.prefix()
        while self.peek().kind == "and":
            self.next()
            out = And(out, self.prefix())
        return out

    def prefix(self) -> Formula:
        tok = self.peek()
        if tok.kind == "neg":
            self.next()
            return Neg(self.prefix())
        if tok.kind == "dia":
            self.next()
            return Dia(tok.value, self.prefix())
        if tok.kind == "box":
            self.next()
            return Box(tok.value, self.prefix())
        return self.atom()

    def atom(self) -> Formula:
        tok = self.next()
        if tok.kind == "top":
            return TOP
        if tok.kind == "bot":
            return BOT
        if tok.kind == "lparen":
            f = self.implication()
            closing = self.next()
            if closing.kind != "rparen":
                self.error("expected ')'", closing)
            return f
        if tok.kind == "var":
            name, sort = tok.value
            if sort is None:
                sort = OMEGA
            span = _byte_span(self.text, tok.start, tok.end)
            if name in self.var_sorts:
                if self.var_sorts[name] != sort:
                    raise ParseError(
                        f"variable {name!r} used with sorts "
                        f"{render_sort(self.var_sorts[name])} and {render_sort(sort)}",
                        span,
                    )
            else:
                self.var_sorts[name] = sort
                self.var_spans[name] = span
            return Var(name, sort)
        self.error("expected a formula", tok)


def parse_formula(text: str) -> Formula:
    """Parse one formula; the result is desugared."""
    return desugar(_Parser(text).parse())


def parse_formula_file(text: str) -> list[Formula]:
    """One formula per non-blank line; '#' starts a comment."""
    out = []
    for line in text.splitlines():
        stripped = line.split("#", 1)[0].strip()
        if stripped:
            out.append(parse_formula(stripped))
    return out


_PREC_IMPLIES = 1
_PREC_OR = 2
_PREC_AND = 3
_PREC_PREFIX = 4


def _render(formula: Formula, parent_prec: int) -> str:
    if isinstance(formula, Top):
        return "T"
    if isinstance(formula, Bot):
        return "F"
    if isinstance(formula, Var):
        if formula.sort is OMEGA:
            return formula.name
        return f"{formula.name}:{render_sort(formula.sort)}"
    if isinstance(formula, Neg):
        return _wrap("~" + _render(formula.child, _PREC_PREFIX), _PREC_PREFIX, parent_prec)
    if isinstance(formula, Dia):
        return _wrap(f"<{formula.index}>" + _render(formula.child, _PREC_PREFIX), _PREC_PREFIX, parent_prec)
    if isinstance(formula, Box):
        return _wrap(f"[{formula.index}]" + _render(formula.child, _PREC_PREFIX), _PREC_PREFIX, parent_prec)
    if isinstance(formula, And):
        s = _render(formula.left, _PREC_AND) + " & " + _render(formula.right, _PREC_AND + 1)
        return _wrap(s, _PREC_AND, parent_prec)
    if isinstance(formula, Or):
        s = _render(formula.left, _PREC_OR) + " | " + _render(formula.right, _PREC_OR + 1)
        return _wrap(s, _PREC_OR, parent_prec)
    if isinstance(formula, Implies):
        s = _render(formula.left, _PREC_IMPLIES + 1) + " -> " + _render(formula.right, _PREC_IMPLIES)
        return _wrap(s, _PREC_IMPLIES, parent_prec)
    raise TypeError(f"not a formula: {formula!r}")


def _wrap(s: str, prec: int, parent_prec: int) -> str:
    return f"({s})" if prec < parent_prec else s


def render_formula(formula: Formula) -> str:
    """Surface syntax with minimal parentheses; parse_formula inverts it."""
    return _render(formula, 0)


def parse_model(text: str) -> KripkeModel:
    """Parse the line-oriented model file format.

    Sections in any order: 'worlds a b ...', 'rel <n>: <x> <y>' (one pair per
    line), 'val <name>:<sort> = {w1, w2, ...}', optional 'root <w>'.
    """
    worlds: list[str] = []
    world_set: set[str] = set()
    relations: dict[int, set[tuple[str, str]]] = {}
    valuation: dict[str, frozenset[str]] = {}
    sorts: dict[str, Sort] = {}
    root: Optional[str] = None

    deferred_rel: list[tuple[int, str, str, int]] = []
    deferred_val: list[tuple[str, Sort, list[str], int]] = []
    deferred_root: Optional[tuple[str, int]] = None

    def err(message: str, lineno: int):
        raise ParseError(message, _line_span(text, lineno))

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        if head == "worlds":
            if not rest:
                err("empty worlds line", lineno)
            for name in rest.split():
                if name in world_set:
                    err(f"duplicate world name {name!r}", lineno)
                world_set.add(name)
                worlds.append(name)
        elif head == "rel":
            label, sep, pair = rest.partition(":")
            if not sep or not label.strip().isdigit():
                err("expected 'rel <n>: <x> <y>'", lineno)
            parts = pair.split()
            if len(parts) != 2:
                err("expected 'rel <n>: <x> <y>'", lineno)
            deferred_rel.append((int(label.strip()), parts[0], parts[1], lineno))
        elif head == "val":
            name_part, sep, set_part = rest.partition("=")
            if not sep:
                err("expected 'val <name>:<sort> = {..}'", lineno)
            name_part = name_part.strip()
            vname, csep, sort_text = name_part.partition(":")
            if not csep or not vname:
                err("expected '<name>:<sort>' on val line", lineno)
            sort_text = sort_text.strip()
            if sort_text in ("w", "ω"):
                sort: Sort = OMEGA
            elif sort_text.isdigit():
                sort = int(sort_text)
            else:
                err(f"bad sort {sort_text!r}", lineno)
            set_part = set_part.strip()
            if not (set_part.startswith("{") and set_part.endswith("}")):
                err("expected world set in braces", lineno)
            inner = set_part[1:-1].strip()
            members = [w.strip() for w in inner.split(",") if w.strip()] if inner else []
            deferred_val.append((vname, sort, members, lineno))
        elif head == "root":
            if deferred_root is not None:
                err("duplicate root line", lineno)
            if not rest or len(rest.split()) != 1:
                err("expected 'root <w>'", lineno)
            deferred_root = (rest, lineno)
        else:
            err(f"unknown section {head!r}", lineno)

    if not worlds:
        raise ParseError("no worlds declared", SourceSpan(0, 0))
    for index, x, y, lineno in deferred_rel:
        for w in (x, y):
            if w not in world_set:
                err(f"undeclared world {w!r}", lineno)
        relations.setdefault(index, set()).add((x, y))
    for vname, sort, members, lineno in deferred_val:
        if vname in valuation:
            err(f"duplicate valuation for {vname!r}", lineno)
        for w in members:
            if w not in world_set:
                err(f"undeclared world {w!r}", lineno)
        valuation[vname] = frozenset(members)
        sorts[vname] = sort
    if deferred_root is not None:
        name, lineno = deferred_root
        if name not in world_set:
            err(f"undeclared world {name!r}", lineno)
        root = name

    return KripkeModel(
        worlds=tuple(worlds),
        relations={n: frozenset(pairs) for n, pairs in relations.items()},
        valuation=valuation,
        sorts=sorts,
        root=root,
    )


def _line_span(text: str, lineno: int) -> SourceSpan:
    lines = text.splitlines(keepends=True)
    start = sum(len(l) for l in lines[: lineno - 1])
    end = start + len(lines[lineno - 1].rstrip("\n")) if lineno <= len(lines) else start
    return _byte_span(text, start, end)


def render_model(model: KripkeModel) -> str:
    """Model file text; parse_model inverts it."""
    out = ["worlds " + " ".join(model.worlds)]
    for n in sorted(model.relations):
        for x, y in sorted(model.relations[n]):
            out.append(f"rel {n}: {x} {y}")
    for name in sorted(model.valuation):
        members = ", ".join(sorted(model.valuation[name]))
        out.append(f"val {name}:{render_sort(model.sorts[name])} = {{{members}}}")
    if model.root is not None:
        out.append(f"root {model.root}")
    return "\n".join(out) + "\n"


def _dot_escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def _dot_quote(s: str) -> str:
    return '"' + _dot_escape(s) + '"'


def export_dot(model: KripkeModel, highlight: Optional[str] = None) -> str:
    """DOT digraph: edges labeled by modality, nodes annotated with true variables."""
    lines = ["digraph kripke {"]
    for w in model.worlds:
        trues = sorted(name for name, members in model.valuation.items() if w in members)
        label = _dot_escape(w)
        if trues:
            label += "\\n{" + ", ".join(_dot_escape(t) for t in trues) + "}"
        attrs = [f'label="{label}"']
        if highlight is not None and w == highlight:
            attrs.append("style=filled")
            attrs.append("fillcolor=lightgrey")
            attrs.append("peripheries=2")
        lines.append(f"  {_dot_quote(w)} [{', '.join(attrs)}];")
    for n in sorted(model.relations):
        for x, y in sorted(model.relations[n]):
            lines.append(f"  {_dot_quote(x)} -> {_dot_quote(y)} [label={_dot_quote(str(n))}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def render_formula_set(formulas, one_per_line: bool = True) -> str:
    """Deterministic listing of a formula set, in structural order."""
    rendered = [render_formula(f) for f in sorted(formulas, key=sort_key)]
    return "\n".join(rendered) if one_per_line else ", ".join(rendered)

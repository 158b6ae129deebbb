"""Grammar-file syntax: tokenizer, expression parser, and macro table.

A grammar file is a sequence of `segment` inventory declarations and macro
definitions `head := body.` (with optional capitalized parameters, Prolog
style).  Expressions combine symbol sets and automata:

    []                 empty string          [E1, E2, ...]   concatenation
    {E1, E2, ...}      union                 E* / E^         star / optional
    E1 & E2            intersection          ~S              set complement
    X --> (Y / Z)      rewrite demand: X must be Y when followed by Z
    producer(S), consumer(S), "string", 'quoted-set-name', name(args)

`%` starts a comment.  Parsing is purely syntactic here; name resolution and
set-versus-machine typing happen in the compiler.
"""

from __future__ import annotations

from typing import NamedTuple

from .errors import GrammarError

BUILTIN_NAMES = frozenset(
    {
        "producer",
        "consumer",
        "not_contains",
        "ignore_technical_symbols_in",
        "add_self_loops",
        "add_skips",
        "add_repeats",
        "closed_interpretation",
        "stringToAutomaton",
    }
)

_PUNCT = (":=", "-->", "(", ")", "[", "]", "{", "}", ",", "&", "~", "*", "^", "/", ".")


class Token(NamedTuple):
    kind: str  # name | var | string | qname | punct | eof
    text: str
    line: int
    col: int


def tokenize_source(src: str) -> list[Token]:
    toks: list[Token] = []
    i, line, col = 0, 1, 1
    n = len(src)
    while i < n:
        c = src[i]
        if c == "\n":
            i, line, col = i + 1, line + 1, 1
            continue
        if c in " \t\r":
            i, col = i + 1, col + 1
            continue
        if c == "%":
            while i < n and src[i] != "\n":
                i += 1
            continue
        if c in "\"'":
            start_line, start_col = line, col
            j = src.find(c, i + 1)
            if j < 0 or "\n" in src[i:j]:
                raise GrammarError("unterminated quote", start_line, start_col)
            kind = "string" if c == '"' else "qname"
            toks.append(Token(kind, src[i + 1 : j], start_line, start_col))
            col += j + 1 - i
            i = j + 1
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (src[j].isalnum() or src[j] == "_"):
                j += 1
            word = src[i:j]
            kind = "var" if word[0].isupper() else "name"
            toks.append(Token(kind, word, line, col))
            col += j - i
            i = j
            continue
        for p in _PUNCT:
            if src.startswith(p, i):
                toks.append(Token("punct", p, line, col))
                i += len(p)
                col += len(p)
                break
        else:
            raise GrammarError(f"unexpected character {c!r}", line, col)
    toks.append(Token("eof", "", line, col))
    return toks


# -- expression AST --------------------------------------------------------------


class Empty(NamedTuple):
    pass


class Str(NamedTuple):
    text: str


class Name(NamedTuple):
    name: str


class Quoted(NamedTuple):
    name: str


class Var(NamedTuple):
    name: str


class Call(NamedTuple):
    name: str
    args: tuple


class Concat(NamedTuple):
    items: tuple


class Union(NamedTuple):
    items: tuple


class Star(NamedTuple):
    item: object


class Opt(NamedTuple):
    item: object


class And(NamedTuple):
    left: object
    right: object


class Not(NamedTuple):
    item: object


class Rule(NamedTuple):
    """X --> (Y / Z): symbols in X must fall in Y whenever Z follows."""

    subject: object
    outcome: object
    context: object


class _Parser:
    def __init__(self, toks: list[Token]):
        self.toks = toks
        self.pos = 0

    def peek(self) -> Token:
        return self.toks[self.pos]

    def next(self) -> Token:
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def expect(self, text: str) -> Token:
        t = self.next()
        if t.kind == "punct" and t.text == text:
            return t
        raise GrammarError(f"expected {text!r}, found {t.text or t.kind!r}", t.line, t.col)

    def at(self, text: str) -> bool:
        t = self.peek()
        return t.kind == "punct" and t.text == text

    # expr := and ('-->' '(' expr '/' expr ')')?
    def expr(self):
        left = self.and_expr()
        if self.at("-->"):
            self.next()
            self.expect("(")
            outcome = self.expr()
            self.expect("/")
            context = self.expr()
            self.expect(")")
            return Rule(left, outcome, context)
        return left

    def and_expr(self):
        node = self.unary()
        while self.at("&"):
            self.next()
            node = And(node, self.unary())
        return node

    def unary(self):
        if self.at("~"):
            self.next()
            return Not(self.unary())
        return self.postfix()

    def postfix(self):
        node = self.primary()
        while True:
            if self.at("*"):
                self.next()
                node = Star(node)
            elif self.at("^"):
                self.next()
                node = Opt(node)
            else:
                return node

    def seq(self, closer: str) -> tuple:
        items = []
        if not self.at(closer):
            items.append(self.expr())
            while self.at(","):
                self.next()
                items.append(self.expr())
        self.expect(closer)
        return tuple(items)

    def primary(self):
        t = self.next()
        if t.kind == "punct":
            if t.text == "(":
                node = self.expr()
                self.expect(")")
                return node
            if t.text == "[":
                items = self.seq("]")
                return Empty() if not items else Concat(items)
            if t.text == "{":
                return Union(self.seq("}"))
            raise GrammarError(f"unexpected {t.text!r}", t.line, t.col)
        if t.kind == "string":
            return Str(t.text)
        if t.kind == "qname":
            return Quoted(t.text)
        if t.kind == "var":
            return Var(t.text)
        if t.kind == "name":
            if self.at("("):
                self.next()
                return Call(t.text, self.seq(")"))
            return Name(t.text)
        raise GrammarError("unexpected end of input", t.line, t.col)


def parse_expression(src: str):
    """Parse one expression (for CLI entry arguments)."""
    p = _Parser(tokenize_source(src))
    node = p.expr()
    tail = p.peek()
    if tail.kind != "eof":
        raise GrammarError(f"trailing input {tail.text!r}", tail.line, tail.col)
    return node


# -- grammar files ----------------------------------------------------------------


class Macro(NamedTuple):
    params: tuple[str, ...]
    body: object
    line: int


class Grammar(NamedTuple):
    """Parsed grammar file: the segment inventory plus named definitions."""

    inventory: tuple[tuple[str, str, tuple[str, ...]], ...]
    macros: dict[str, Macro]


def parse_grammar(src: str) -> Grammar:
    p = _Parser(tokenize_source(src))
    inventory: list[tuple[str, str, tuple[str, ...]]] = []
    macros: dict[str, Macro] = {}
    while p.peek().kind != "eof":
        t = p.next()
        if t.kind == "name" and t.text == "segment":
            fields = []
            while not p.at("."):
                ft = p.next()
                if ft.kind not in ("name", "var"):
                    raise GrammarError(
                        f"bad token {ft.text or ft.kind!r} in segment declaration",
                        ft.line,
                        ft.col,
                    )
                fields.append(ft.text)
            p.expect(".")
            if len(fields) < 2:
                raise GrammarError(
                    "segment declaration needs a token and vowel/consonant",
                    t.line,
                    t.col,
                )
            inventory.append((fields[0], fields[1], tuple(fields[2:])))
            continue
        if t.kind != "name":
            raise GrammarError(
                f"expected a definition, found {t.text or t.kind!r}", t.line, t.col
            )
        if t.text in BUILTIN_NAMES or t.text == "segment":
            raise GrammarError(f"cannot redefine {t.text!r}", t.line, t.col)
        params: tuple[str, ...] = ()
        if p.at("("):
            p.next()
            names = []
            while not p.at(")"):
                pt = p.next()
                if pt.kind != "var":
                    raise GrammarError(
                        "macro parameters must be capitalized", pt.line, pt.col
                    )
                names.append(pt.text)
                if p.at(","):
                    p.next()
            p.expect(")")
            if len(set(names)) != len(names):
                raise GrammarError("duplicate macro parameter", t.line, t.col)
            params = tuple(names)
        p.expect(":=")
        body = p.expr()
        p.expect(".")
        if t.text in macros:
            raise GrammarError(f"{t.text!r} is defined twice", t.line, t.col)
        macros[t.text] = Macro(params, body, t.line)
    return Grammar(tuple(inventory), macros)

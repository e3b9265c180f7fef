"""Turtle reader and writer for the subset of the grammar this toolkit needs.

Supported: @prefix/PREFIX directives, angle-bracket IRIs, prefixed names,
labeled and anonymous blank nodes, predicate lists (;), object lists (,),
the "a" keyword, string/integer/decimal/double/boolean literals, ^^ datatype
and @lang annotations, and # comments. Collections "(...)", quoted triples
"<<...>>", and base IRIs are rejected with a positioned error instead of being
silently misread.

The writer is deterministic: subjects, predicates, and objects are emitted in
lexicographic order of their serialized form, so equal graphs serialize to
identical text.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import DmccError
from .graph import Graph
from .terms import (
    BlankNode,
    Iri,
    Literal,
    RDF_TYPE,
    Term,
    Triple,
    XSD_BOOLEAN,
    XSD_DECIMAL,
    XSD_DOUBLE,
    XSD_INTEGER,
    XSD_STRING,
    _escape_iri,
    _escape_literal,
    nt_form,
)


class TurtleParseError(DmccError):
    """Syntax or structural error in a Turtle document, with 1-based position."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.reason = message
        self.line = line
        self.column = column


class UnknownPrefixError(TurtleParseError):
    """A prefixed name used a prefix that was never declared."""

    def __init__(self, prefix: str, line: int, column: int):
        super().__init__(f"unknown prefix {prefix!r}", line, column)
        self.prefix = prefix


@dataclass(frozen=True)
class _Token:
    kind: str
    value: object
    line: int
    column: int

    @property
    def text(self) -> str:
        return str(self.value)


_IRIREF_RE = re.compile(r'<((?:[^<>"{}|^`\\\x00-\x20]|\\u[0-9A-Fa-f]{4}|\\U[0-9A-Fa-f]{8})*)>')
_BLANK_RE = re.compile(r"_:([A-Za-z0-9_](?:[A-Za-z0-9_-]*[A-Za-z0-9_])?)")
_DOUBLE_RE = re.compile(r"[+-]?(?:\d+\.\d*|\.\d+|\d+)[eE][+-]?\d+")
_DECIMAL_RE = re.compile(r"[+-]?\d*\.\d+")
_INTEGER_RE = re.compile(r"[+-]?\d+")
_WORD_RE = re.compile(r"[A-Za-z][A-Za-z0-9_-]*")
_LOCAL_RE = re.compile(r"[A-Za-z0-9_][A-Za-z0-9_]*")
_LANGTAG_RE = re.compile(r"@([A-Za-z]+(?:-[A-Za-z0-9]+)*)")

_STRING_ESCAPES = {
    "t": "\t",
    "b": "\b",
    "n": "\n",
    "r": "\r",
    "f": "\f",
    '"': '"',
    "'": "'",
    "\\": "\\",
}


def _unescape_uchars(raw: str, line: int, col: int) -> str:
    def sub(m: re.Match[str]) -> str:
        return chr(int(m.group(0)[2:], 16))

    try:
        return re.sub(r"\\u[0-9A-Fa-f]{4}|\\U[0-9A-Fa-f]{8}", sub, raw)
    except ValueError:
        raise TurtleParseError("invalid \\u escape code point", line, col) from None


class _Lexer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1

    def _advance(self, n: int) -> None:
        chunk = self.text[self.pos : self.pos + n]
        newlines = chunk.count("\n")
        if newlines:
            self.line += newlines
            self.col = n - chunk.rindex("\n")
        else:
            self.col += n
        self.pos += n

    def _error(self, message: str) -> TurtleParseError:
        return TurtleParseError(message, self.line, self.col)

    def _skip_trivia(self) -> None:
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch in " \t\r\n":
                self._advance(1)
            elif ch == "#":
                end = self.text.find("\n", self.pos)
                self._advance((end if end != -1 else len(self.text)) - self.pos)
            else:
                return

    def _read_string(self) -> str:
        text, pos = self.text, self.pos
        quote = text[pos]
        long_quote = text[pos : pos + 3] == quote * 3
        delim = quote * 3 if long_quote else quote
        start_line, start_col = self.line, self.col
        self._advance(len(delim))
        out: list[str] = []
        while True:
            if self.pos >= len(text):
                raise TurtleParseError("unterminated string literal", start_line, start_col)
            if text.startswith(delim, self.pos):
                self._advance(len(delim))
                return "".join(out)
            ch = text[self.pos]
            if ch == "\\":
                if self.pos + 1 >= len(text):
                    raise self._error("dangling escape at end of input")
                esc = text[self.pos + 1]
                if esc in _STRING_ESCAPES:
                    out.append(_STRING_ESCAPES[esc])
                    self._advance(2)
                elif esc in "uU":
                    width = 6 if esc == "u" else 10
                    raw = text[self.pos : self.pos + width]
                    if not re.fullmatch(r"\\u[0-9A-Fa-f]{4}|\\U[0-9A-Fa-f]{8}", raw):
                        raise self._error(f"invalid escape sequence {raw!r}")
                    out.append(_unescape_uchars(raw, self.line, self.col))
                    self._advance(width)
                else:
                    raise self._error(f"invalid escape sequence '\\{esc}'")
            elif ch == "\n" and not long_quote:
                raise self._error("newline inside single-line string")
            else:
                out.append(ch)
                self._advance(1)

    def tokens(self) -> list[_Token]:
        out: list[_Token] = []
        while True:
            self._skip_trivia()
            if self.pos >= len(self.text):
                out.append(_Token("eof", "", self.line, self.col))
                return out
            line, col = self.line, self.col
            text, pos = self.text, self.pos
            ch = text[pos]

            if text.startswith("<<", pos):
                raise self._error("quoted triples '<<...>>' are not supported")
            if ch == "<":
                m = _IRIREF_RE.match(text, pos)
                if not m:
                    raise self._error("malformed IRI reference")
                value = _unescape_uchars(m.group(1), line, col)
                self._advance(m.end() - pos)
                out.append(_Token("iriref", value, line, col))
                continue
            if ch in "\"'":
                value = self._read_string()
                out.append(_Token("string", value, line, col))
                continue
            if ch == "@":
                m = _LANGTAG_RE.match(text, pos)
                if not m:
                    raise self._error("malformed '@' token")
                word = m.group(1)
                kind = {"prefix": "at_prefix", "base": "at_base"}.get(word, "langtag")
                self._advance(m.end() - pos)
                out.append(_Token(kind, word, line, col))
                continue
            if text.startswith("_:", pos):
                m = _BLANK_RE.match(text, pos)
                if not m:
                    raise self._error("malformed blank node label")
                self._advance(m.end() - pos)
                out.append(_Token("blank", m.group(1), line, col))
                continue
            if ch in "+-.0123456789":
                for kind, pattern in (("double", _DOUBLE_RE), ("decimal", _DECIMAL_RE), ("integer", _INTEGER_RE)):
                    m = pattern.match(text, pos)
                    if m:
                        self._advance(m.end() - pos)
                        out.append(_Token(kind, m.group(0), line, col))
                        break
                else:
                    if ch == ".":
                        self._advance(1)
                        out.append(_Token(".", ".", line, col))
                    else:
                        raise self._error(f"unexpected character {ch!r}")
                continue
            if text.startswith("^^", pos):
                self._advance(2)
                out.append(_Token("^^", "^^", line, col))
                continue
            if ch in ";,[]()":
                self._advance(1)
                out.append(_Token(ch, ch, line, col))
                continue
            if ch == ":":
                m = _LOCAL_RE.match(text, pos + 1)
                local = m.group(0) if m else ""
                self._advance(1 + len(local))
                out.append(_Token("pname", ("", local), line, col))
                continue
            m = _WORD_RE.match(text, pos)
            if m:
                word = m.group(0)
                after = pos + len(word)
                if after < len(text) and text[after] == ":":
                    lm = _LOCAL_RE.match(text, after + 1)
                    local = lm.group(0) if lm else ""
                    self._advance(len(word) + 1 + len(local))
                    out.append(_Token("pname", (word, local), line, col))
                    continue
                self._advance(len(word))
                if word == "a":
                    out.append(_Token("a", word, line, col))
                elif word in ("true", "false"):
                    out.append(_Token("boolean", word, line, col))
                elif word.upper() == "PREFIX":
                    out.append(_Token("kw_prefix", word, line, col))
                elif word.upper() == "BASE":
                    out.append(_Token("kw_base", word, line, col))
                else:
                    raise TurtleParseError(f"unexpected token {word!r}", line, col)
                continue
            raise self._error(f"unexpected character {ch!r}")


class _Parser:
    def __init__(self, text: str):
        self.tokens = _Lexer(text).tokens()
        self.i = 0
        self.prefixes: dict[str, Iri] = {}
        self.triples: list[Triple] = []
        used = {t.value for t in self.tokens if t.kind == "blank"}
        self._fresh_counter = 0
        self._used_labels = used

    def _peek(self) -> _Token:
        return self.tokens[self.i]

    def _next(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def _expect(self, kind: str, what: str) -> _Token:
        tok = self._next()
        if tok.kind != kind:
            raise TurtleParseError(f"expected {what}, found {tok.text!r}", tok.line, tok.column)
        return tok

    def _error(self, message: str, tok: _Token) -> TurtleParseError:
        return TurtleParseError(message, tok.line, tok.column)

    def _fresh_blank(self) -> BlankNode:
        while True:
            label = f"b{self._fresh_counter}"
            self._fresh_counter += 1
            if label not in self._used_labels:
                self._used_labels.add(label)
                return BlankNode(label)

    def _resolve(self, tok: _Token) -> Iri:
        prefix, local = tok.value
        if prefix not in self.prefixes:
            raise UnknownPrefixError(prefix, tok.line, tok.column)
        return Iri(self.prefixes[prefix].value + local)

    def _make_iri(self, tok: _Token) -> Iri:
        try:
            return Iri(tok.value)
        except ValueError as exc:
            raise self._error(f"unusable IRI <{tok.value}>: {exc}", tok) from None

    def parse(self) -> Graph:
        while True:
            tok = self._peek()
            if tok.kind == "eof":
                break
            if tok.kind == "at_prefix":
                self._next()
                self._directive(needs_dot=True)
            elif tok.kind == "kw_prefix":
                self._next()
                self._directive(needs_dot=False)
            elif tok.kind in ("at_base", "kw_base"):
                raise self._error("base IRIs are not supported", tok)
            else:
                self._triples_statement()
        return Graph(self.triples, self.prefixes)

    def _directive(self, needs_dot: bool) -> None:
        tok = self._expect("pname", "a prefix name ending in ':'")
        prefix, local = tok.value
        if local:
            raise self._error(f"prefix declaration must not carry a local part: {prefix}:{local}", tok)
        ns = self._expect("iriref", "a namespace IRI")
        self.prefixes[prefix] = self._make_iri(ns)
        if needs_dot:
            self._expect(".", "'.' after @prefix directive")

    def _triples_statement(self) -> None:
        tok = self._peek()
        if tok.kind == "[":
            subject = self._bnode_property_list()
            if self._peek().kind != ".":
                self._predicate_object_list(subject, terminators=(".",))
        else:
            subject = self._subject()
            self._predicate_object_list(subject, terminators=(".",))
        self._expect(".", "'.' at end of statement")

    def _subject(self) -> Term:
        tok = self._next()
        if tok.kind == "iriref":
            return self._make_iri(tok)
        if tok.kind == "pname":
            return self._resolve(tok)
        if tok.kind == "blank":
            return BlankNode(tok.value)
        if tok.kind == "(":
            raise self._error("RDF collections '(...)' are not supported", tok)
        raise self._error(f"expected a subject, found {tok.text!r}", tok)

    def _verb(self) -> Iri:
        tok = self._next()
        if tok.kind == "a":
            return RDF_TYPE
        if tok.kind == "iriref":
            return self._make_iri(tok)
        if tok.kind == "pname":
            return self._resolve(tok)
        raise self._error(f"expected a predicate, found {tok.text!r}", tok)

    def _object(self) -> Term:
        tok = self._next()
        if tok.kind == "iriref":
            return self._make_iri(tok)
        if tok.kind == "pname":
            return self._resolve(tok)
        if tok.kind == "blank":
            return BlankNode(tok.value)
        if tok.kind == "[":
            self.i -= 1
            return self._bnode_property_list()
        if tok.kind == "(":
            raise self._error("RDF collections '(...)' are not supported", tok)
        if tok.kind == "string":
            return self._string_literal(tok)
        if tok.kind == "integer":
            return Literal(tok.value, XSD_INTEGER)
        if tok.kind == "decimal":
            return Literal(tok.value, XSD_DECIMAL)
        if tok.kind == "double":
            return Literal(tok.value, XSD_DOUBLE)
        if tok.kind == "boolean":
            return Literal(tok.value, XSD_BOOLEAN)
        raise self._error(f"expected an object, found {tok.text!r}", tok)

    def _string_literal(self, tok: _Token) -> Literal:
        nxt = self._peek()
        if nxt.kind == "langtag":
            self._next()
            return Literal(tok.value, language=nxt.value)
        if nxt.kind == "^^":
            self._next()
            dtok = self._next()
            if dtok.kind == "iriref":
                return Literal(tok.value, self._make_iri(dtok))
            if dtok.kind == "pname":
                return Literal(tok.value, self._resolve(dtok))
            raise self._error(f"expected a datatype IRI after '^^', found {dtok.text!r}", dtok)
        return Literal(tok.value, XSD_STRING)

    def _bnode_property_list(self) -> BlankNode:
        self._expect("[", "'['")
        node = self._fresh_blank()
        if self._peek().kind == "]":
            self._next()
            return node
        self._predicate_object_list(node, terminators=("]",))
        self._expect("]", "']' closing blank node")
        return node

    def _predicate_object_list(self, subject: Term, terminators: tuple[str, ...]) -> None:
        while True:
            verb = self._verb()
            self._object_list(subject, verb)
            if self._peek().kind != ";":
                return
            while self._peek().kind == ";":
                self._next()
            if self._peek().kind in terminators or self._peek().kind == "eof":
                return

    def _object_list(self, subject: Term, verb: Iri) -> None:
        self.triples.append(Triple(subject, verb, self._object()))
        while self._peek().kind == ",":
            self._next()
            self.triples.append(Triple(subject, verb, self._object()))


def parse_turtle(text: str) -> Graph:
    """Parse a Turtle document into a Graph.

    Blank labels from the source are preserved; anonymous [...] nodes receive
    fresh labels b0, b1, ... in document order, skipping labels the document
    already uses.
    """
    return _Parser(text).parse()


_BARE_PATTERNS = {
    XSD_INTEGER: re.compile(r"[+-]?\d+"),
    XSD_DECIMAL: re.compile(r"[+-]?\d*\.\d+"),
    XSD_DOUBLE: _DOUBLE_RE,
    XSD_BOOLEAN: re.compile(r"true|false"),
}


def _abbreviate(iri: Iri, prefixes: dict[str, Iri]) -> str | None:
    best: tuple[int, str, str] | None = None
    for prefix, ns in prefixes.items():
        value = ns.value
        if iri.value.startswith(value):
            local = iri.value[len(value) :]
            if local and _LOCAL_RE.fullmatch(local):
                key = (-len(value), prefix, local)
                if best is None or key < best:
                    best = key
    if best is None:
        return None
    return f"{best[1]}:{best[2]}"


def _turtle_term(term: Term, prefixes: dict[str, Iri], as_predicate: bool = False) -> str:
    if isinstance(term, Iri):
        if as_predicate and term == RDF_TYPE:
            return "a"
        short = _abbreviate(term, prefixes)
        return short if short is not None else f"<{_escape_iri(term.value)}>"
    if isinstance(term, BlankNode):
        return f"_:{term.label}"
    if isinstance(term, Literal):
        pattern = _BARE_PATTERNS.get(term.datatype)
        if pattern is not None and pattern.fullmatch(term.lexical):
            return term.lexical
        quoted = f'"{_escape_literal(term.lexical)}"'
        if term.language is not None:
            return f"{quoted}@{term.language}"
        if term.datatype == XSD_STRING:
            return quoted
        return f"{quoted}^^{_turtle_term(term.datatype, prefixes)}"
    raise TypeError(f"not an RDF term: {term!r}")


def serialize_turtle(graph: Graph) -> str:
    """Write a graph as Turtle; output re-parses to an isomorphic graph."""
    prefixes = dict(graph.prefixes)
    lines: list[str] = []
    for prefix in sorted(prefixes):
        lines.append(f"@prefix {prefix}: <{_escape_iri(prefixes[prefix].value)}> .")
    if lines:
        lines.append("")

    by_subject: dict[str, tuple[Term, dict[str, list[str]]]] = {}
    for t in graph:
        skey = nt_form(t.subject)
        _, preds = by_subject.setdefault(skey, (t.subject, {}))
        ptok = _turtle_term(t.predicate, prefixes, as_predicate=True)
        preds.setdefault(ptok, []).append(_turtle_term(t.object, prefixes))

    for skey in sorted(by_subject):
        subject, preds = by_subject[skey]
        stok = _turtle_term(subject, prefixes)
        parts: list[str] = []
        for ptok in sorted(preds):
            objs = ", ".join(sorted(preds[ptok]))
            parts.append(f"{ptok} {objs}")
        body = f" ;\n{' ' * 4}".join(parts)
        lines.append(f"{stok} {body} .")
        lines.append("")
    return "\n".join(lines).rstrip("\n") + ("\n" if by_subject or prefixes else "")

"""SELECT queries over basic graph patterns with filters, ordering, and limit.

The grammar is deliberately small: PREFIX directives, SELECT with explicit
variables or *, a WHERE block of triple patterns separated by dots, FILTER
with {=, !=, <, <=, >, >=, CONTAINS}, ORDER BY [ASC|DESC](?var), and LIMIT.
Everything else SPARQL offers (OPTIONAL, UNION, aggregates, ...) is rejected
loudly. Prefixes fall back to the vocabulary registry when not declared.

Evaluation is natural-join semantics over all pattern variables, then filters,
projection, ordering, and limit. Rows are deterministic: ORDER BY when given,
otherwise sorted by the serialized projected binding. A filter comparing
incompatible value types makes the row a non-match and bumps a warning
counter, it never aborts the query.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation

from .errors import DmccError
from .graph import Graph
from .terms import BlankNode, Iri, Literal, RDF_TYPE, Term, XSD_DECIMAL, XSD_DOUBLE, XSD_INTEGER, XSD_STRING, nt_form
from .terms import RDF_LANGSTRING
from .vocab import NAMESPACES


class QueryParseError(DmccError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        where = f" (line {line}, column {column})" if line else ""
        super().__init__(f"{message}{where}")
        self.reason = message
        self.line = line
        self.column = column


class UnsupportedKeywordError(QueryParseError):
    def __init__(self, keyword: str, line: int, column: int):
        super().__init__(f"unsupported keyword {keyword}", line, column)
        self.keyword = keyword


@dataclass(frozen=True)
class Variable:
    name: str


@dataclass(frozen=True)
class TriplePattern:
    subject: Term | Variable
    predicate: Term | Variable
    object: Term | Variable

    def variables(self) -> set[str]:
        return {p.name for p in (self.subject, self.predicate, self.object) if isinstance(p, Variable)}


FILTER_OPS = ("=", "!=", "<", "<=", ">", ">=", "contains")


@dataclass(frozen=True)
class FilterExpr:
    op: str
    left: Variable
    right: Literal | Variable

    def variables(self) -> set[str]:
        names = {self.left.name}
        if isinstance(self.right, Variable):
            names.add(self.right.name)
        return names


@dataclass(frozen=True)
class SelectQuery:
    projected: tuple[Variable, ...]
    patterns: tuple[TriplePattern, ...]
    filters: tuple[FilterExpr, ...] = ()
    order_by: tuple[Variable, str] | None = None  # (variable, "asc" | "desc")
    limit: int | None = None


@dataclass(frozen=True)
class ResultSet:
    columns: tuple[str, ...]
    rows: tuple[dict[str, Term], ...]
    filter_warnings: int = 0

    def to_json(self) -> dict:
        return {
            "columns": list(self.columns),
            "rows": [{c: nt_form(row[c]) for c in self.columns} for row in self.rows],
            "filterWarnings": self.filter_warnings,
        }


# --------------------------------------------------------------------------
# Parsing
# --------------------------------------------------------------------------

_REJECTED_KEYWORDS = {
    "OPTIONAL", "UNION", "MINUS", "GRAPH", "SERVICE", "BIND", "VALUES",
    "GROUP", "HAVING", "OFFSET", "DISTINCT", "REDUCED", "CONSTRUCT", "ASK",
    "DESCRIBE", "EXISTS", "NOT", "IN", "REGEX", "STR", "LANG", "DATATYPE",
}

_TOKEN_RES: tuple[tuple[str, re.Pattern[str]], ...] = (
    ("ws", re.compile(r"[ \t\r\n]+|#[^\n]*")),
    ("var", re.compile(r"\?([A-Za-z_][A-Za-z0-9_]*)")),
    ("iriref", re.compile(r'<([^<>"{}|^`\\\x00-\x20]*)>')),
    ("string", re.compile(r'"((?:[^"\\\n]|\\.)*)"')),
    ("double", re.compile(r"[+-]?(?:\d+\.\d*|\.\d+|\d+)[eE][+-]?\d+")),
    ("decimal", re.compile(r"[+-]?\d*\.\d+")),
    ("integer", re.compile(r"[+-]?\d+")),
    ("pname", re.compile(r"([A-Za-z][A-Za-z0-9_-]*)?:([A-Za-z0-9_][A-Za-z0-9_]*)?")),
    ("word", re.compile(r"[A-Za-z][A-Za-z0-9_]*")),
    ("op", re.compile(r"!=|<=|>=|[=<>]")),
    ("punct", re.compile(r"[{}().,*]")),
)

_STRING_UNESCAPES = {"n": "\n", "t": "\t", "r": "\r", '"': '"', "\\": "\\", "'": "'"}


@dataclass(frozen=True)
class _Tok:
    kind: str
    value: object
    line: int
    column: int

    @property
    def text(self) -> str:
        return str(self.value)


def _lex(text: str) -> list[_Tok]:
    tokens: list[_Tok] = []
    pos, line, col = 0, 1, 1
    while pos < len(text):
        for kind, pattern in _TOKEN_RES:
            m = pattern.match(text, pos)
            if not m:
                continue
            raw = m.group(0)
            if kind == "var":
                tokens.append(_Tok("var", m.group(1), line, col))
            elif kind == "iriref":
                tokens.append(_Tok("iriref", m.group(1), line, col))
            elif kind == "string":
                value = re.sub(
                    r"\\(.)", lambda e: _STRING_UNESCAPES.get(e.group(1), e.group(1)), m.group(1)
                )
                tokens.append(_Tok("string", value, line, col))
            elif kind == "pname":
                tokens.append(_Tok("pname", (m.group(1) or "", m.group(2) or ""), line, col))
            elif kind == "word":
                tokens.append(_Tok("word", raw, line, col))
            elif kind == "op":
                tokens.append(_Tok("op", raw, line, col))
            elif kind == "punct":
                tokens.append(_Tok(raw, raw, line, col))
            elif kind in ("double", "decimal", "integer"):
                tokens.append(_Tok(kind, raw, line, col))
            newlines = raw.count("\n")
            if newlines:
                line += newlines
                col = len(raw) - raw.rindex("\n")
            else:
                col += len(raw)
            pos = m.end()
            break
        else:
            raise QueryParseError(f"unexpected character {text[pos]!r}", line, col)
    tokens.append(_Tok("eof", "", line, col))
    return tokens


class _QueryParser:
    def __init__(self, text: str):
        self.tokens = _lex(text)
        self.i = 0
        self.prefixes: dict[str, Iri] = dict(NAMESPACES)

    def _peek(self) -> _Tok:
        return self.tokens[self.i]

    def _next(self) -> _Tok:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def _error(self, message: str, tok: _Tok) -> QueryParseError:
        return QueryParseError(message, tok.line, tok.column)

    def _expect_word(self, word: str) -> None:
        tok = self._next()
        if tok.kind != "word" or tok.value.upper() != word:
            raise self._error(f"expected {word}, found {tok.text!r}", tok)

    def _expect(self, kind: str, what: str) -> _Tok:
        tok = self._next()
        if tok.kind != kind:
            raise self._error(f"expected {what}, found {tok.text!r}", tok)
        return tok

    def _check_keyword(self, tok: _Tok) -> None:
        if tok.kind == "word" and tok.value.upper() in _REJECTED_KEYWORDS:
            raise UnsupportedKeywordError(tok.value.upper(), tok.line, tok.column)

    def _resolve(self, tok: _Tok) -> Iri:
        prefix, local = tok.value
        if prefix not in self.prefixes:
            raise self._error(f"unknown prefix {prefix!r}", tok)
        return Iri(self.prefixes[prefix].value + local)

    def parse(self) -> SelectQuery:
        while True:
            tok = self._peek()
            if tok.kind == "word" and tok.value.upper() == "PREFIX":
                self._next()
                name = self._expect("pname", "a prefix name ending in ':'")
                prefix, local = name.value
                if local:
                    raise self._error("prefix declaration must not carry a local part", name)
                ns = self._expect("iriref", "a namespace IRI")
                try:
                    self.prefixes[prefix] = Iri(ns.value)
                except ValueError as exc:
                    raise self._error(f"unusable namespace IRI: {exc}", ns) from None
            else:
                break

        self._check_keyword(self._peek())
        self._expect_word("SELECT")
        projected: list[Variable] = []
        star = False
        while True:
            tok = self._peek()
            if tok.kind == "var":
                projected.append(Variable(self._next().value))
            elif tok.kind == "*":
                self._next()
                star = True
            else:
                if tok.kind == "word" and tok.value.upper() != "WHERE":
                    self._check_keyword(tok)
                break
        if not star and not projected:
            raise self._error("SELECT needs variables or *", self._peek())
        self._check_keyword(self._peek())
        self._expect_word("WHERE")
        self._expect("{", "'{'")

        patterns: list[TriplePattern] = []
        filters: list[FilterExpr] = []
        while True:
            tok = self._peek()
            if tok.kind == "}":
                self._next()
                break
            if tok.kind == "eof":
                raise self._error("unterminated WHERE block", tok)
            if tok.kind == "word" and tok.value.upper() == "FILTER":
                self._next()
                filters.append(self._filter())
                if self._peek().kind == ".":
                    self._next()
                continue
            if tok.kind == "{":
                # nested group: name the algebra keyword behind it if any
                for ahead in self.tokens[self.i :]:
                    if ahead.kind == "word" and ahead.value.upper() in _REJECTED_KEYWORDS:
                        raise UnsupportedKeywordError(ahead.value.upper(), ahead.line, ahead.column)
                raise self._error("nested groups are not supported", tok)
            self._check_keyword(tok)
            patterns.append(self._pattern())
            if self._peek().kind == ".":
                self._next()
            elif self._peek().kind != "}":
                raise self._error(
                    f"expected '.' or '}}' after pattern, found {self._peek().text!r}", self._peek()
                )

        order_by = None
        limit = None
        while self._peek().kind == "word":
            word = self._peek().value.upper()
            if word == "ORDER":
                self._next()
                self._expect_word("BY")
                order_by = self._order_condition()
            elif word == "LIMIT":
                self._next()
                num = self._expect("integer", "a positive integer")
                limit = int(num.value)
                if limit <= 0:
                    raise self._error("LIMIT must be positive", num)
            else:
                self._check_keyword(self._peek())
                raise self._error(f"unexpected trailing token {self._peek().text!r}", self._peek())
        tail = self._peek()
        if tail.kind != "eof":
            self._check_keyword(tail)
            raise self._error(f"unexpected trailing token {tail.text!r}", tail)

        pattern_vars = set().union(*(p.variables() for p in patterns)) if patterns else set()
        if star:
            projected = [Variable(n) for n in sorted(pattern_vars)]
        for v in projected:
            if v.name not in pattern_vars:
                raise QueryParseError(f"projected variable ?{v.name} never occurs in a pattern")
        for f in filters:
            for name in f.variables():
                if name not in pattern_vars:
                    raise QueryParseError(f"filter variable ?{name} never occurs in a pattern")
        if order_by is not None and order_by[0].name not in pattern_vars:
            raise QueryParseError(f"ORDER BY variable ?{order_by[0].name} never occurs in a pattern")
        return SelectQuery(
            projected=tuple(projected),
            patterns=tuple(patterns),
            filters=tuple(filters),
            order_by=order_by,
            limit=limit,
        )

    def _pattern(self) -> TriplePattern:
        s = self._pattern_term(position="subject")
        p = self._pattern_term(position="predicate")
        o = self._pattern_term(position="object")
        return TriplePattern(s, p, o)

    def _pattern_term(self, position: str) -> Term | Variable:
        tok = self._next()
        if tok.kind == "var":
            return Variable(tok.value)
        if tok.kind == "iriref":
            try:
                return Iri(tok.value)
            except ValueError as exc:
                raise self._error(f"unusable IRI: {exc}", tok) from None
        if tok.kind == "pname":
            return self._resolve(tok)
        if tok.kind == "word" and tok.value == "a" and position == "predicate":
            return RDF_TYPE
        if position != "predicate":
            if tok.kind == "string":
                return Literal(tok.value)
            if tok.kind == "integer":
                return Literal(tok.value, XSD_INTEGER)
            if tok.kind == "decimal":
                return Literal(tok.value, XSD_DECIMAL)
            if tok.kind == "double":
                return Literal(tok.value, XSD_DOUBLE)
        self._check_keyword(tok)
        raise self._error(f"expected a {position} term, found {tok.text!r}", tok)

    def _order_condition(self) -> tuple[Variable, str]:
        tok = self._next()
        if tok.kind == "var":
            return (Variable(tok.value), "asc")
        if tok.kind == "word" and tok.value.upper() in ("ASC", "DESC"):
            direction = tok.value.lower()
            self._expect("(", "'(' after ASC/DESC")
            var = self._expect("var", "a variable")
            self._expect(")", "')'")
            return (Variable(var.value), direction)
        raise self._error(f"expected ?var, ASC(?var), or DESC(?var), found {tok.text!r}", tok)

    def _filter_operand(self) -> Literal | Variable:
        tok = self._next()
        if tok.kind == "var":
            return Variable(tok.value)
        if tok.kind == "string":
            return Literal(tok.value)
        if tok.kind == "integer":
            return Literal(tok.value, XSD_INTEGER)
        if tok.kind == "decimal":
            return Literal(tok.value, XSD_DECIMAL)
        if tok.kind == "double":
            return Literal(tok.value, XSD_DOUBLE)
        raise self._error(f"expected a variable or literal, found {tok.text!r}", tok)

    def _filter(self) -> FilterExpr:
        self._expect("(", "'(' after FILTER")
        tok = self._peek()
        if tok.kind == "word" and tok.value.upper() == "CONTAINS":
            self._next()
            self._expect("(", "'(' after CONTAINS")
            left = self._expect("var", "a variable")
            self._expect(",", "','")
            right = self._filter_operand()
            self._expect(")", "')'")
            self._expect(")", "')' closing FILTER")
            return FilterExpr("contains", Variable(left.value), right)
        left_tok = self._expect("var", "a variable on the left of a comparison")
        op_tok = self._expect("op", "a comparison operator")
        right = self._filter_operand()
        self._expect(")", "')' closing FILTER")
        return FilterExpr(op_tok.value, Variable(left_tok.value), right)


def parse_query(text: str) -> SelectQuery:
    return _QueryParser(text).parse()


# --------------------------------------------------------------------------
# Evaluation
# --------------------------------------------------------------------------

_NUMERIC_DATATYPES = {XSD_INTEGER, XSD_DECIMAL, XSD_DOUBLE}


def numeric_value(term: Term) -> Decimal | None:
    """Decimal value of a numeric literal, else None."""
    if isinstance(term, Literal) and term.datatype in _NUMERIC_DATATYPES:
        try:
            return Decimal(term.lexical)
        except InvalidOperation:
            return None
    return None


def _string_value(term: Term) -> str | None:
    if isinstance(term, Literal) and term.datatype in (XSD_STRING, RDF_LANGSTRING):
        return term.lexical
    return None


class _FilterTypeError(Exception):
    pass


def _apply_filter(f: FilterExpr, binding: dict[str, Term]) -> bool:
    left: Term = binding[f.left.name]
    right: Term = binding[f.right.name] if isinstance(f.right, Variable) else f.right
    if f.op == "contains":
        ls, rs = _string_value(left), _string_value(right)
        if ls is None or rs is None:
            raise _FilterTypeError
        return rs in ls
    ln, rn = numeric_value(left), numeric_value(right)
    if f.op in ("=", "!="):
        if ln is not None and rn is not None:
            return (ln == rn) if f.op == "=" else (ln != rn)
        return (left == right) if f.op == "=" else (left != right)
    if ln is None or rn is None:
        raise _FilterTypeError
    if f.op == "<":
        return ln < rn
    if f.op == "<=":
        return ln <= rn
    if f.op == ">":
        return ln > rn
    if f.op == ">=":
        return ln >= rn
    raise ValueError(f"unknown filter operator {f.op!r}")


def _bind(position: Term | Variable, binding: dict[str, Term]) -> Term | None:
    if isinstance(position, Variable):
        return binding.get(position.name)
    return position


def _extend(
    pattern: TriplePattern, triple, binding: dict[str, Term]
) -> dict[str, Term] | None:
    out = dict(binding)
    for position, value in (
        (pattern.subject, triple.subject),
        (pattern.predicate, triple.predicate),
        (pattern.object, triple.object),
    ):
        if isinstance(position, Variable):
            bound = out.get(position.name)
            if bound is None:
                out[position.name] = value
            elif bound != value:
                return None
    return out


def evaluate(g: Graph, q: SelectQuery) -> ResultSet:
    bindings: list[dict[str, Term]] = [{}]
    for pattern in q.patterns:
        extended: list[dict[str, Term]] = []
        for binding in bindings:
            matches = g.match(
                _bind(pattern.subject, binding),
                _bind(pattern.predicate, binding),
                _bind(pattern.object, binding),
            )
            for triple in matches:
                ext = _extend(pattern, triple, binding)
                if ext is not None:
                    extended.append(ext)
        bindings = extended
        if not bindings:
            break

    warnings = 0
    kept: list[dict[str, Term]] = []
    for binding in bindings:
        keep = True
        for f in q.filters:
            try:
                if not _apply_filter(f, binding):
                    keep = False
                    break
            except _FilterTypeError:
                warnings += 1
                keep = False
                break
        if keep:
            kept.append(binding)

    columns = tuple(v.name for v in q.projected)
    pairs = [(binding, {c: binding[c] for c in columns}) for binding in kept]

    def default_key(pair: tuple[dict[str, Term], dict[str, Term]]) -> tuple[str, ...]:
        return tuple(nt_form(pair[1][c]) for c in columns)

    pairs.sort(key=default_key)
    if q.order_by is not None:
        var, direction = q.order_by

        def order_key(pair: tuple[dict[str, Term], dict[str, Term]]):
            value = pair[0][var.name]
            num = numeric_value(value)
            return (0, num, "") if num is not None else (1, Decimal(0), nt_form(value))

        # stable sort keeps the default order among ties
        pairs.sort(key=order_key, reverse=(direction == "desc"))

    rows = [row for _, row in pairs]
    if q.limit is not None:
        rows = rows[: q.limit]
    return ResultSet(columns=columns, rows=tuple(rows), filter_warnings=warnings)

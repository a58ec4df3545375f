"""Tokenizer, recursive-descent parser, and canonical unparser.

The parser is layered by operator precedence, tightest first:

  1. property access / indexing / slicing (postfix)
  2. comparisons  < <= >= > = <>   (chains become conjunctions:
     ``a < b < c`` parses as ``a < b AND b < c``)
  3. IS NULL / IS NOT NULL
  4. string operators (STARTS WITH, ENDS WITH, CONTAINS) and IN
  5. NOT
  6. AND
  7. XOR
  8. OR

Parenthesized expressions are accepted as grouping.  Keywords are
case-insensitive and reserved; names, labels, relationship types and
property keys are case-sensitive identifiers.

Every ``match_*``/``parse_*`` method assumes the cursor sits on the first
token of its fragment and leaves it one past the last token consumed.

:func:`unparse` renders an AST back to canonical text such that
``parse(unparse(ast)) == ast``; this canonical text also serves as the
alias function for un-aliased RETURN items.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import ast
from .errors import ParseError

KEYWORDS = {
    "MATCH", "OPTIONAL", "WHERE", "WITH", "UNWIND", "RETURN", "AS",
    "UNION", "ALL", "AND", "OR", "XOR", "NOT", "IN", "IS", "NULL",
    "STARTS", "ENDS", "CONTAINS", "TRUE", "FALSE",
}

_PUNCT2 = ("<=", ">=", "<>", "..")
_PUNCT1 = "()[]{},:.|=<>-*"

_ESCAPES = {"\\": "\\", "'": "'", '"': '"', "n": "\n", "t": "\t"}


@dataclass(frozen=True)
class Token:
    kind: str  # IDENT, INT, STRING, EOF, or the punctuation itself
    value: str
    start: int
    end: int


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c in " \t\r\n":
            i += 1
            continue
        if text[i:i + 2] in _PUNCT2:
            tokens.append(Token(text[i:i + 2], text[i:i + 2], i, i + 2))
            i += 2
            continue
        if c in _PUNCT1:
            tokens.append(Token(c, c, i, i + 1))
            i += 1
            continue
        if c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(Token("INT", text[i:j], i, j))
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(Token("IDENT", text[i:j], i, j))
            i = j
            continue
        if c in "'\"":
            quote = c
            j = i + 1
            out: list[str] = []
            while True:
                if j >= n:
                    raise ParseError("unterminated string literal", (i, n))
                ch = text[j]
                if ch == quote:
                    j += 1
                    break
                if ch == "\\":
                    if j + 1 >= n or text[j + 1] not in _ESCAPES:
                        raise ParseError("bad escape sequence", (j, j + 2))
                    out.append(_ESCAPES[text[j + 1]])
                    j += 2
                    continue
                out.append(ch)
                j += 1
            tokens.append(Token("STRING", "".join(out), i, j))
            i = j
            continue
        raise ParseError(f"unexpected character {c!r}", (i, i + 1))
    tokens.append(Token("EOF", "", n, n))
    return tokens


class Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.pos = 0

    # -- cursor helpers -----------------------------------------------------

    def peek(self, ahead: int = 0) -> Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def at(self, kind: str) -> bool:
        return self.peek().kind == kind

    def at_kw(self, word: str) -> bool:
        tok = self.peek()
        return tok.kind == "IDENT" and tok.value.upper() == word

    def expect(self, kind: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError(f"unexpected {self._describe(tok)}", (tok.start, tok.end), expected=kind)
        return self.advance()

    def expect_kw(self, word: str) -> Token:
        if not self.at_kw(word):
            tok = self.peek()
            raise ParseError(f"unexpected {self._describe(tok)}", (tok.start, tok.end), expected=word)
        return self.advance()

    def take_kw(self, word: str) -> bool:
        if self.at_kw(word):
            self.advance()
            return True
        return False

    def expect_name(self) -> Token:
        tok = self.peek()
        if tok.kind != "IDENT":
            raise ParseError(f"unexpected {self._describe(tok)}", (tok.start, tok.end), expected="a name")
        if tok.value.upper() in KEYWORDS:
            raise ParseError(f"keyword {tok.value!r} cannot be used as a name", (tok.start, tok.end))
        return self.advance()

    @staticmethod
    def _describe(tok: Token) -> str:
        return "end of input" if tok.kind == "EOF" else f"{tok.value!r}"

    def _span_from(self, start: int) -> ast.Span:
        end = self.tokens[self.pos - 1].end if self.pos > 0 else start
        return (start, end)

    # -- expressions ----------------------------------------------------------

    def parse_expr(self) -> ast.Expr:
        return self._parse_or()

    def _parse_or(self) -> ast.Expr:
        left = self._parse_xor()
        while self.at_kw("OR"):
            start = left.span[0] if left.span else self.peek().start
            self.advance()
            right = self._parse_xor()
            left = ast.Or(left, right, span=self._span_from(start))
        return left

    def _parse_xor(self) -> ast.Expr:
        left = self._parse_and()
        while self.at_kw("XOR"):
            start = left.span[0] if left.span else self.peek().start
            self.advance()
            right = self._parse_and()
            left = ast.Xor(left, right, span=self._span_from(start))
        return left

    def _parse_and(self) -> ast.Expr:
        left = self._parse_not()
        while self.at_kw("AND"):
            start = left.span[0] if left.span else self.peek().start
            self.advance()
            right = self._parse_not()
            left = ast.And(left, right, span=self._span_from(start))
        return left

    def _parse_not(self) -> ast.Expr:
        if self.at_kw("NOT"):
            start = self.peek().start
            self.advance()
            operand = self._parse_not()
            return ast.Not(operand, span=self._span_from(start))
        return self._parse_string_in()

    def _parse_string_in(self) -> ast.Expr:
        left = self._parse_is_null()
        while True:
            if self.at_kw("IN"):
                start = left.span[0] if left.span else self.peek().start
                self.advance()
                right = self._parse_is_null()
                left = ast.InList(left, right, span=self._span_from(start))
            elif self.at_kw("STARTS") or self.at_kw("ENDS"):
                start = left.span[0] if left.span else self.peek().start
                word = self.advance().value.upper()
                self.expect_kw("WITH")
                right = self._parse_is_null()
                left = ast.StrOp(f"{word} WITH", left, right, span=self._span_from(start))
            elif self.at_kw("CONTAINS"):
                start = left.span[0] if left.span else self.peek().start
                self.advance()
                right = self._parse_is_null()
                left = ast.StrOp("CONTAINS", left, right, span=self._span_from(start))
            else:
                return left

    def _parse_is_null(self) -> ast.Expr:
        e = self._parse_comparison()
        while self.at_kw("IS"):
            start = e.span[0] if e.span else self.peek().start
            self.advance()
            negated = self.take_kw("NOT")
            self.expect_kw("NULL")
            e = ast.IsNull(e, negated, span=self._span_from(start))
        return e

    def _parse_comparison(self) -> ast.Expr:
        first = self._parse_postfix()
        chain: list[tuple[str, ast.Expr]] = []
        while self.peek().kind in ("<", "<=", ">=", ">", "=", "<>"):
            op = self.advance().kind
            chain.append((op, self._parse_postfix()))
        if not chain:
            return first
        # A chain a < b <= c means (a < b) AND (b <= c).
        comparisons: list[ast.Expr] = []
        left = first
        for op, right in chain:
            span = _join_spans(left.span, right.span)
            comparisons.append(ast.Cmp(op, left, right, span=span))
            left = right
        out = comparisons[0]
        for cmp_ in comparisons[1:]:
            out = ast.And(out, cmp_, span=_join_spans(out.span, cmp_.span))
        return out

    def _parse_postfix(self) -> ast.Expr:
        e = self._parse_primary()
        while True:
            if self.at("."):
                start = e.span[0] if e.span else self.peek().start
                self.advance()
                key = self.expect_name().value
                e = ast.Prop(e, key, span=self._span_from(start))
            elif self.at("["):
                start = e.span[0] if e.span else self.peek().start
                self.advance()
                if self.at(".."):
                    self.advance()
                    hi = self.parse_expr()
                    self.expect("]")
                    e = ast.Slice(e, None, hi, span=self._span_from(start))
                    continue
                first = self.parse_expr()
                if self.at("]"):
                    self.advance()
                    e = ast.Index(e, first, span=self._span_from(start))
                elif self.at(".."):
                    self.advance()
                    if self.at("]"):
                        self.advance()
                        e = ast.Slice(e, first, None, span=self._span_from(start))
                    else:
                        hi = self.parse_expr()
                        self.expect("]")
                        e = ast.Slice(e, first, hi, span=self._span_from(start))
                else:
                    tok = self.peek()
                    raise ParseError(
                        f"unexpected {self._describe(tok)} in index", (tok.start, tok.end),
                        expected="] or ..",
                    )
            else:
                return e

    def _parse_primary(self) -> ast.Expr:
        tok = self.peek()
        if tok.kind == "INT":
            self.advance()
            return ast.Lit(int(tok.value), span=(tok.start, tok.end))
        if tok.kind == "-":
            nxt = self.peek(1)
            if nxt.kind != "INT":
                raise ParseError("`-` is only valid before an integer literal", (tok.start, tok.end))
            self.advance()
            self.advance()
            return ast.Lit(-int(nxt.value), span=(tok.start, nxt.end))
        if tok.kind == "STRING":
            self.advance()
            return ast.Lit(tok.value, span=(tok.start, tok.end))
        if self.at_kw("TRUE"):
            self.advance()
            return ast.Lit(True, span=(tok.start, tok.end))
        if self.at_kw("FALSE"):
            self.advance()
            return ast.Lit(False, span=(tok.start, tok.end))
        if self.at_kw("NULL"):
            self.advance()
            return ast.Lit(None, span=(tok.start, tok.end))
        if tok.kind == "IDENT":
            if self.peek(1).kind == "(":
                name = self.expect_name().value
                self.expect("(")
                args: list[ast.Expr] = []
                if not self.at(")"):
                    args.append(self.parse_expr())
                    while self.at(","):
                        self.advance()
                        args.append(self.parse_expr())
                self.expect(")")
                return ast.FnCall(name, tuple(args), span=self._span_from(tok.start))
            name = self.expect_name().value
            return ast.Name(name, span=(tok.start, tok.end))
        if tok.kind == "(":
            self.advance()
            inner = self.parse_expr()
            self.expect(")")
            return inner
        if tok.kind == "[":
            self.advance()
            items: list[ast.Expr] = []
            if not self.at("]"):
                items.append(self.parse_expr())
                while self.at(","):
                    self.advance()
                    items.append(self.parse_expr())
            self.expect("]")
            return ast.ListLit(tuple(items), span=self._span_from(tok.start))
        if tok.kind == "{":
            entries = self._parse_map_entries(allow_duplicates=True)
            return ast.MapLit(entries, span=self._span_from(tok.start))
        raise ParseError(f"unexpected {self._describe(tok)}", (tok.start, tok.end), expected="an expression")

    def _parse_map_entries(self, allow_duplicates: bool) -> tuple[tuple[str, ast.Expr], ...]:
        open_tok = self.expect("{")
        entries: list[tuple[str, ast.Expr]] = []
        if not self.at("}"):
            while True:
                key_tok = self.expect_name()
                self.expect(":")
                entries.append((key_tok.value, self.parse_expr()))
                if self.at(","):
                    self.advance()
                    continue
                break
        self.expect("}")
        if not allow_duplicates:
            keys = [k for k, _ in entries]
            if len(keys) != len(set(keys)):
                raise ParseError("duplicate property key in pattern map",
                                 self._span_from(open_tok.start))
        return tuple(entries)

    # -- patterns -------------------------------------------------------------

    def parse_pattern_tuple(self) -> ast.PatternTuple:
        start = self.peek().start
        paths = [self.parse_pattern()]
        while self.at(","):
            self.advance()
            paths.append(self.parse_pattern())
        return ast.PatternTuple(tuple(paths), span=self._span_from(start))

    def parse_pattern(self) -> ast.PathPattern:
        start = self.peek().start
        name = None
        if self.peek().kind == "IDENT" and self.peek(1).kind == "=":
            name = self.expect_name().value
            self.expect("=")
        elements: list = [self._parse_node_pattern()]
        while self.peek().kind in ("-", "<"):
            elements.append(self._parse_rel_pattern())
            elements.append(self._parse_node_pattern())
        return ast.PathPattern(tuple(elements), name, span=self._span_from(start))

    def _parse_node_pattern(self) -> ast.NodePattern:
        start = self.expect("(").start
        name = None
        if self.peek().kind == "IDENT":
            name = self.expect_name().value
        labels: list[str] = []
        while self.at(":"):
            self.advance()
            labels.append(self.expect_name().value)
        props: tuple = ()
        if self.at("{"):
            props = self._parse_map_entries(allow_duplicates=False)
        self.expect(")")
        return ast.NodePattern(name, frozenset(labels), props, span=self._span_from(start))

    def _parse_rel_pattern(self) -> ast.RelPattern:
        start = self.peek().start
        left_arrow = False
        if self.at("<"):
            self.advance()
            left_arrow = True
        self.expect("-")
        self.expect("[")
        name = None
        if self.peek().kind == "IDENT":
            name = self.expect_name().value
        types: list[str] = []
        if self.at(":"):
            self.advance()
            types.append(self.expect_name().value)
            while self.at("|"):
                self.advance()
                types.append(self.expect_name().value)
        range_ = self._parse_len()
        props: tuple = ()
        if self.at("{"):
            props = self._parse_map_entries(allow_duplicates=False)
        self.expect("]")
        self.expect("-")
        right_arrow = False
        if self.at(">"):
            if left_arrow:
                tok = self.peek()
                raise ParseError("a relationship pattern cannot point both ways", (tok.start, tok.end))
            self.advance()
            right_arrow = True
        if left_arrow:
            direction = ast.LEFT
        elif right_arrow:
            direction = ast.RIGHT
        else:
            direction = ast.UNDIRECTED
        return ast.RelPattern(direction, name, frozenset(types), props, range_,
                              span=self._span_from(start))

    def _parse_len(self):
        if not self.at("*"):
            return None
        self.advance()
        if self.peek().kind == "INT":
            lo = int(self.advance().value)
            if self.at(".."):
                self.advance()
                if self.peek().kind == "INT":
                    return (lo, int(self.advance().value))
                return (lo, None)
            return (lo, lo)
        if self.at(".."):
            self.advance()
            hi_tok = self.expect("INT")
            return (None, int(hi_tok.value))
        return (None, None)

    # -- clauses and queries ----------------------------------------------------

    def parse_query(self) -> ast.Query:
        query: ast.Query = self._parse_clause_query()
        while self.at_kw("UNION"):
            start = query.span[0] if query.span else self.peek().start
            self.advance()
            all_ = self.take_kw("ALL")
            right = self._parse_clause_query()
            query = ast.UnionQuery(query, right, all_, span=self._span_from(start))
        return query

    def _parse_clause_query(self) -> ast.ClauseQuery:
        start = self.peek().start
        clauses: list[ast.Clause] = []
        while True:
            if self.at_kw("RETURN"):
                self.advance()
                star, items = self._parse_items(for_with=False)
                ret = ast.Return(star, items, span=self._span_from(start))
                return ast.ClauseQuery(tuple(clauses), ret, span=self._span_from(start))
            clauses.append(self._parse_clause())

    def _parse_clause(self) -> ast.Clause:
        tok = self.peek()
        start = tok.start
        if self.at_kw("OPTIONAL") or self.at_kw("MATCH"):
            optional = self.take_kw("OPTIONAL")
            self.expect_kw("MATCH")
            patterns = self.parse_pattern_tuple()
            where = self.parse_expr() if self.take_kw("WHERE") else None
            return ast.Match(patterns, optional, where, span=self._span_from(start))
        if self.at_kw("WITH"):
            self.advance()
            star, items = self._parse_items(for_with=True)
            where = self.parse_expr() if self.take_kw("WHERE") else None
            return ast.With(star, items, where, span=self._span_from(start))
        if self.at_kw("UNWIND"):
            self.advance()
            expr = self.parse_expr()
            self.expect_kw("AS")
            name = self.expect_name().value
            return ast.Unwind(expr, name, span=self._span_from(start))
        raise ParseError(
            f"unexpected {self._describe(tok)}", (tok.start, tok.end),
            expected="MATCH, OPTIONAL MATCH, WITH, UNWIND or RETURN",
        )

    def _parse_items(self, for_with: bool) -> tuple[bool, tuple[ast.Item, ...]]:
        star = False
        items: list[ast.Item] = []
        if self.at("*"):
            self.advance()
            star = True
            if not self.at(","):
                return star, ()
            self.advance()
        while True:
            tok = self.peek()
            expr = self.parse_expr()
            alias = None
            if self.take_kw("AS"):
                alias = self.expect_name().value
            elif for_with and not isinstance(expr, ast.Name):
                raise ParseError(
                    "a WITH item without AS must be a plain name",
                    (tok.start, self.tokens[self.pos - 1].end),
                )
            items.append((expr, alias))
            if self.at(","):
                self.advance()
                continue
            return star, tuple(items)


def _join_spans(a: ast.Span | None, b: ast.Span | None) -> ast.Span | None:
    if a is None or b is None:
        return a or b
    return (a[0], b[1])


# ---------------------------------------------------------------------------
# Entry points
# ---------------------------------------------------------------------------


def parse_query(text: str) -> ast.Query:
    p = Parser(text)
    q = p.parse_query()
    tok = p.peek()
    if tok.kind != "EOF":
        raise ParseError(f"trailing input {p._describe(tok)}", (tok.start, tok.end))
    return q


def parse_pattern(text: str) -> ast.PathPattern:
    p = Parser(text)
    pat = p.parse_pattern()
    tok = p.peek()
    if tok.kind != "EOF":
        raise ParseError(f"trailing input {p._describe(tok)}", (tok.start, tok.end))
    return pat


def parse_pattern_tuple(text: str) -> ast.PatternTuple:
    p = Parser(text)
    pats = p.parse_pattern_tuple()
    tok = p.peek()
    if tok.kind != "EOF":
        raise ParseError(f"trailing input {p._describe(tok)}", (tok.start, tok.end))
    return pats


def parse_expr(text: str) -> ast.Expr:
    p = Parser(text)
    e = p.parse_expr()
    tok = p.peek()
    if tok.kind != "EOF":
        raise ParseError(f"trailing input {p._describe(tok)}", (tok.start, tok.end))
    return e


# ---------------------------------------------------------------------------
# Unparsing (canonical text; also the alias function for RETURN items)
# ---------------------------------------------------------------------------

_LEVEL_OR = 1
_LEVEL_XOR = 2
_LEVEL_AND = 3
_LEVEL_NOT = 4
_LEVEL_STR_IN = 5
_LEVEL_IS_NULL = 6
_LEVEL_CMP = 7
_LEVEL_POSTFIX = 8


def _string_lit(s: str) -> str:
    out = s.replace("\\", "\\\\").replace("'", "\\'").replace("\n", "\\n").replace("\t", "\\t")
    return f"'{out}'"


def unparse_expr(e: ast.Expr, parent_level: int = 0) -> str:
    def wrap(text: str, level: int) -> str:
        return f"({text})" if level < parent_level else text

    if isinstance(e, ast.Lit):
        v = e.value
        if v is None:
            return "null"
        if isinstance(v, bool):
            return "true" if v else "false"
        if isinstance(v, int):
            return str(v)
        if isinstance(v, str):
            return _string_lit(v)
        raise ValueError(f"literal {v!r} has no concrete syntax")
    if isinstance(e, ast.Name):
        return e.name
    if isinstance(e, ast.FnCall):
        return f"{e.name}({', '.join(unparse_expr(a) for a in e.args)})"
    if isinstance(e, ast.Prop):
        return wrap(f"{unparse_expr(e.base, _LEVEL_POSTFIX)}.{e.key}", _LEVEL_POSTFIX)
    if isinstance(e, ast.Index):
        return wrap(f"{unparse_expr(e.base, _LEVEL_POSTFIX)}[{unparse_expr(e.index)}]", _LEVEL_POSTFIX)
    if isinstance(e, ast.Slice):
        lo = unparse_expr(e.lo) if e.lo is not None else ""
        hi = unparse_expr(e.hi) if e.hi is not None else ""
        return wrap(f"{unparse_expr(e.base, _LEVEL_POSTFIX)}[{lo}..{hi}]", _LEVEL_POSTFIX)
    if isinstance(e, ast.MapLit):
        inner = ", ".join(f"{k}: {unparse_expr(v)}" for k, v in e.entries)
        return "{" + inner + "}"
    if isinstance(e, ast.ListLit):
        return "[" + ", ".join(unparse_expr(x) for x in e.items) + "]"
    if isinstance(e, ast.Cmp):
        text = f"{unparse_expr(e.left, _LEVEL_POSTFIX)} {e.op} {unparse_expr(e.right, _LEVEL_POSTFIX)}"
        return wrap(text, _LEVEL_CMP)
    if isinstance(e, ast.IsNull):
        op = "IS NOT NULL" if e.negated else "IS NULL"
        return wrap(f"{unparse_expr(e.expr, _LEVEL_IS_NULL)} {op}", _LEVEL_IS_NULL)
    if isinstance(e, ast.StrOp):
        text = f"{unparse_expr(e.left, _LEVEL_STR_IN)} {e.op} {unparse_expr(e.right, _LEVEL_STR_IN + 1)}"
        return wrap(text, _LEVEL_STR_IN)
    if isinstance(e, ast.InList):
        text = f"{unparse_expr(e.item, _LEVEL_STR_IN)} IN {unparse_expr(e.container, _LEVEL_STR_IN + 1)}"
        return wrap(text, _LEVEL_STR_IN)
    if isinstance(e, ast.Not):
        return wrap(f"NOT {unparse_expr(e.expr, _LEVEL_NOT)}", _LEVEL_NOT)
    if isinstance(e, ast.And):
        text = f"{unparse_expr(e.left, _LEVEL_AND)} AND {unparse_expr(e.right, _LEVEL_AND + 1)}"
        return wrap(text, _LEVEL_AND)
    if isinstance(e, ast.Xor):
        text = f"{unparse_expr(e.left, _LEVEL_XOR)} XOR {unparse_expr(e.right, _LEVEL_XOR + 1)}"
        return wrap(text, _LEVEL_XOR)
    if isinstance(e, ast.Or):
        text = f"{unparse_expr(e.left, _LEVEL_OR)} OR {unparse_expr(e.right, _LEVEL_OR + 1)}"
        return wrap(text, _LEVEL_OR)
    raise TypeError(f"not an expression: {e!r}")


def _unparse_prop_map(props: tuple[tuple[str, ast.Expr], ...]) -> str:
    return "{" + ", ".join(f"{k}: {unparse_expr(v)}" for k, v in props) + "}"


def unparse_node_pattern(chi: ast.NodePattern) -> str:
    parts = chi.name or ""
    parts += "".join(f":{label}" for label in sorted(chi.labels))
    if chi.props:
        parts += (" " if parts else "") + _unparse_prop_map(chi.props)
    return f"({parts})"


def unparse_rel_pattern(rho: ast.RelPattern) -> str:
    body = rho.name or ""
    if rho.types:
        body += ":" + "|".join(sorted(rho.types))
    if rho.range_ is not None:
        lo, hi = rho.range_
        if lo is None and hi is None:
            body += "*"
        elif hi is None:
            body += f"*{lo}.."
        elif lo is None:
            body += f"*..{hi}"
        else:
            body += f"*{lo}..{hi}"
    if rho.props:
        body += (" " if body else "") + _unparse_prop_map(rho.props)
    if rho.direction == ast.LEFT:
        return f"<-[{body}]-"
    if rho.direction == ast.RIGHT:
        return f"-[{body}]->"
    return f"-[{body}]-"


def unparse_pattern(pat: ast.PathPattern) -> str:
    chunks = []
    for el in pat.elements:
        if isinstance(el, ast.NodePattern):
            chunks.append(unparse_node_pattern(el))
        else:
            chunks.append(unparse_rel_pattern(el))
    text = "".join(chunks)
    return f"{pat.name} = {text}" if pat.name else text


def unparse_pattern_tuple(pats: ast.PatternTuple) -> str:
    return ", ".join(unparse_pattern(p) for p in pats.paths)


def _unparse_items(star: bool, items: tuple[ast.Item, ...]) -> str:
    chunks = ["*"] if star else []
    for expr, alias in items:
        text = unparse_expr(expr)
        if alias is not None:
            text += f" AS {alias}"
        chunks.append(text)
    return ", ".join(chunks)


def unparse_clause(c: ast.Clause) -> str:
    if isinstance(c, ast.Match):
        text = ("OPTIONAL " if c.optional else "") + "MATCH " + unparse_pattern_tuple(c.patterns)
        if c.where is not None:
            text += " WHERE " + unparse_expr(c.where)
        return text
    if isinstance(c, ast.With):
        text = "WITH " + _unparse_items(c.star, c.items)
        if c.where is not None:
            text += " WHERE " + unparse_expr(c.where)
        return text
    if isinstance(c, ast.Unwind):
        return f"UNWIND {unparse_expr(c.expr)} AS {c.name}"
    raise TypeError(f"not a clause: {c!r}")


def unparse_query(q: ast.Query) -> str:
    if isinstance(q, ast.ClauseQuery):
        parts = [unparse_clause(c) for c in q.clauses]
        parts.append("RETURN " + _unparse_items(q.ret.star, q.ret.items))
        return " ".join(parts)
    if isinstance(q, ast.UnionQuery):
        op = "UNION ALL" if q.all else "UNION"
        return f"{unparse_query(q.left)} {op} {unparse_query(q.right)}"
    raise TypeError(f"not a query: {q!r}")


def alias_of(e: ast.Expr) -> str:
    """The injective alias function: canonical unparse of the expression."""
    return unparse_expr(e)

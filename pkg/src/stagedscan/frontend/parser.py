"""Lexer and recursive-descent parser for MiniObj (grammar: docs/grammar.ebnf)."""
from __future__ import annotations

import re
from dataclasses import dataclass

from . import ast as A
from .diagnostics import Diagnostic, FrontendError

KEYWORDS = {
    "import", "class", "fn", "virtual", "extern", "global", "let", "if", "else",
    "while", "return", "true", "false", "this", "new", "cast", "downcast", "ref",
    "Int", "Bool", "Ref",
} | (A.PRIM_NAMES - {"void"})

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<line_comment>//[^\n]*)
  | (?P<block_comment>/\*.*?\*/)
  | (?P<int>[0-9]+)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>->|::|==|!=|<=|>=|&&|\|\||[{}()\[\];:,.=<>+\-*/%!&])
    """,
    re.VERBOSE | re.DOTALL,
)


@dataclass(frozen=True)
class Token:
    kind: str  # ident, int, kw, op, eof
    text: str
    loc: A.Loc


def tokenize(text: str, file: str) -> list[Token]:
    tokens = []
    pos, line, col = 0, 1, 1
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise FrontendError([Diagnostic(A.Loc(file, line, col), f"unexpected character {text[pos]!r}")])
        kind = m.lastgroup
        chunk = m.group()
        loc = A.Loc(file, line, col)
        if kind == "ident":
            tokens.append(Token("kw" if chunk in KEYWORDS else "ident", chunk, loc))
        elif kind in ("int", "op"):
            tokens.append(Token(kind, chunk, loc))
        # advance line/col over the consumed chunk
        nl = chunk.count("\n")
        if nl:
            line += nl
            col = len(chunk) - chunk.rfind("\n")
        else:
            col += len(chunk)
        pos = m.end()
    if text.startswith("/*", pos):
        raise FrontendError([Diagnostic(A.Loc(file, line, col), "unterminated comment")])
    tokens.append(Token("eof", "", A.Loc(file, line, col)))
    return tokens


class Parser:
    def __init__(self, tokens: list[Token]):
        self.toks = tokens
        self.i = 0

    # -- token helpers ------------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def at(self, text: str) -> bool:
        t = self.tok
        return t.kind in ("op", "kw") and t.text == text

    def accept(self, text: str) -> Token | None:
        if self.at(text):
            return self.advance()
        return None

    def advance(self) -> Token:
        t = self.toks[self.i]
        if t.kind != "eof":
            self.i += 1
        return t

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.error(f"expected '{text}'")
        return self.advance()

    def ident(self) -> Token:
        if self.tok.kind != "ident":
            self.error("expected identifier")
        return self.advance()

    def error(self, msg: str):
        t = self.tok
        found = "end of input" if t.kind == "eof" else repr(t.text)
        raise FrontendError([Diagnostic(t.loc, f"syntax error: {msg}, found {found}")])

    # -- declarations -------------------------------------------------------

    def unit(self, name: str, file: str, source: str) -> A.TranslationUnit:
        decls = []
        while self.tok.kind != "eof":
            decls.append(self.top_decl())
        return A.TranslationUnit(name, decls, file=file, source=source)

    def top_decl(self):
        t = self.tok
        if self.accept("import"):
            name = self.ident().text
            self.expect(";")
            return A.Import(name, loc=t.loc)
        if self.at("class"):
            return self.class_decl()
        if self.accept("extern"):
            self.expect("fn")
            name, params, ret = self.signature()
            self.expect(";")
            return A.FunctionDecl(name, params, ret, None, kind="extern", loc=t.loc, end_loc=t.loc)
        if self.at("fn"):
            self.advance()
            name, params, ret = self.signature()
            body, end = self.block_with_end()
            return A.FunctionDecl(name, params, ret, body, loc=t.loc, end_loc=end)
        if t.kind == "ident" and self.toks[self.i + 1].text == "::":
            cls = self.advance().text
            self.expect("::")
            name = self.ident().text
            params = self.params()
            body, end = self.block_with_end()
            return A.FunctionDecl(name, params, A.VOID, body, kind="ctor", loc=t.loc, end_loc=end,
                                  qualifier=cls)
        if self.accept("global"):
            name = self.ident().text
            self.expect(":")
            ty = self.type_()
            self.expect("=")
            init = self.expr()
            self.expect(";")
            return A.GlobalDecl(name, ty, init, loc=t.loc)
        self.error("expected declaration")

    def class_decl(self) -> A.ClassDecl:
        start = self.expect("class")
        name = self.ident().text
        base = None
        if self.accept(":"):
            base = self.ident().text
        self.expect("{")
        fields, methods, ctors = [], [], []
        while not self.at("}"):
            t = self.tok
            if self.at("virtual") or self.at("fn"):
                virtual = bool(self.accept("virtual"))
                self.expect("fn")
                mname, params, ret = self.signature()
                body, end = self.block_with_end()
                methods.append(A.FunctionDecl(mname, params, ret, body, kind="method",
                                              virtual=virtual, loc=t.loc, end_loc=end))
                continue
            member = self.ident()
            if self.accept(":"):
                fields.append(A.FieldDecl(member.text, self.type_(), loc=member.loc))
                self.expect(";")
            elif self.at("("):
                params = self.params()
                if self.at(";"):
                    # constructor declared here, defined out of line elsewhere
                    body, end = None, self.advance().loc
                else:
                    body, end = self.block_with_end()
                ctors.append(A.FunctionDecl(member.text, params, A.VOID, body, kind="ctor",
                                            loc=member.loc, end_loc=end))
            else:
                self.error("expected ':' or '(' after member name")
        end = self.expect("}")
        return A.ClassDecl(name, base, fields, methods, ctors, loc=start.loc, end_loc=end.loc)

    def signature(self):
        name = self.ident().text
        params = self.params()
        ret = A.VOID
        if self.accept("->"):
            ret = self.type_()
        return name, params, ret

    def params(self) -> list[A.Param]:
        self.expect("(")
        out = []
        if not self.at(")"):
            while True:
                p = self.ident()
                self.expect(":")
                is_ref = bool(self.accept("ref"))
                out.append(A.Param(p.text, self.type_(), is_ref, loc=p.loc))
                if not self.accept(","):
                    break
        self.expect(")")
        return out

    def type_(self) -> A.Type:
        t = self.tok
        if t.kind == "kw" and t.text in A.PRIM_NAMES:
            self.advance()
            return A.PrimType(t.text)
        if self.accept("fn"):
            self.expect("(")
            ps = []
            if not self.at(")"):
                ps.append(self.type_())
                while self.accept(","):
                    ps.append(self.type_())
            self.expect(")")
            ret = A.VOID
            if self.accept("->"):
                ret = self.type_()
            return A.FnType(tuple(ps), ret)
        if t.kind == "ident":
            self.advance()
            return A.ClassType(t.text)
        self.error("expected type")

    # -- statements ---------------------------------------------------------

    def block_with_end(self):
        self.expect("{")
        stmts = []
        while not self.at("}"):
            stmts.append(self.stmt())
        end = self.expect("}")
        return stmts, end.loc

    def block(self) -> list:
        return self.block_with_end()[0]

    def stmt(self):
        t = self.tok
        if self.accept("let"):
            name = self.ident().text
            ty = None
            if self.accept(":"):
                ty = self.type_()
            self.expect("=")
            init = self.expr()
            self.expect(";")
            return A.Let(name, ty, init, loc=t.loc)
        if self.at("if"):
            return self.if_stmt()
        if self.accept("while"):
            self.expect("(")
            cond = self.expr()
            self.expect(")")
            return A.While(cond, self.block(), loc=t.loc)
        if self.accept("return"):
            value = None if self.at(";") else self.expr()
            self.expect(";")
            return A.Return(value, loc=t.loc)
        e = self.expr()
        if self.accept("="):
            value = self.expr()
            self.expect(";")
            return A.Assign(e, value, loc=t.loc)
        self.expect(";")
        return A.ExprStmt(e, loc=t.loc)

    def if_stmt(self) -> A.If:
        t = self.expect("if")
        self.expect("(")
        cond = self.expr()
        self.expect(")")
        then = self.block()
        els = None
        if self.accept("else"):
            els = [self.if_stmt()] if self.at("if") else self.block()
        return A.If(cond, then, els, loc=t.loc)

    # -- expressions (precedence climbing) ----------------------------------

    _BINARY = [
        ("||",),
        ("&&",),
        ("==", "!="),
        ("<", "<=", ">", ">="),
        ("+", "-"),
        ("*", "/", "%"),
    ]

    def expr(self) -> A.Expr:
        return self.binary(0)

    def binary(self, level: int) -> A.Expr:
        if level == len(self._BINARY):
            return self.unary()
        left = self.binary(level + 1)
        while self.tok.kind == "op" and self.tok.text in self._BINARY[level]:
            op = self.advance()
            right = self.binary(level + 1)
            left = A.Binary(op.text, left, right, loc=op.loc)
        return left

    def unary(self) -> A.Expr:
        t = self.tok
        if self.accept("!") or self.accept("-"):
            return A.Unary(t.text, self.unary(), loc=t.loc)
        return self.postfix()

    def postfix(self) -> A.Expr:
        e = self.primary()
        while True:
            t = self.tok
            if self.accept("."):
                e = A.FieldAccess(e, self.ident().text, loc=t.loc)
            elif self.at("("):
                e = A.Call(e, self.args(), loc=e.loc)
            else:
                return e

    def args(self) -> list:
        self.expect("(")
        out = []
        if not self.at(")"):
            out.append(self.expr())
            while self.accept(","):
                out.append(self.expr())
        self.expect(")")
        return out

    def primary(self) -> A.Expr:
        t = self.tok
        if t.kind == "int":
            self.advance()
            return A.IntLit(int(t.text), loc=t.loc)
        if t.kind == "ident":
            self.advance()
            return A.Name(t.text, loc=t.loc)
        if self.accept("true") or self.accept("false"):
            return A.BoolLit(t.text == "true", loc=t.loc)
        if t.text in A.TAGS and t.kind == "kw":
            self.advance()
            return A.TagLit(t.text, loc=t.loc)
        if self.accept("this"):
            return A.This(loc=t.loc)
        if self.accept("("):
            e = self.expr()
            self.expect(")")
            return e
        if self.accept("new"):
            cls = self.ident().text
            return A.New(cls, self.args(), loc=t.loc)
        if self.accept("&"):
            return A.FuncRef(self.ident().text, loc=t.loc)
        if self.accept("cast"):
            self.expect("<")
            to = self.type_()
            self.expect(">")
            self.expect("(")
            e = self.expr()
            self.expect(")")
            return A.Cast(to, e, loc=t.loc)
        if self.accept("downcast"):
            self.expect("<")
            cls = self.ident().text
            self.expect(">")
            self.expect("(")
            e = self.expr()
            self.expect(")")
            return A.Downcast(cls, e, loc=t.loc)
        self.error("expected expression")


def parse_syntax(source_text: str, unit_name: str, file: str | None = None) -> A.TranslationUnit:
    """Parse without semantic checking."""
    file = file or f"{unit_name}.mo"
    return Parser(tokenize(source_text, file)).unit(unit_name, file, source_text)

"""Lexer and recursive-descent parser for class-header source (.chd files).

The accepted language is a Java-like header subset: package declaration,
imports, class/interface declarations with extends/implements clauses, field
declarations and method signatures. Modifiers, annotations and throws clauses
are skipped; method bodies and field initializers are ignored when present.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ParseError

MODIFIERS = frozenset({
    "public", "protected", "private", "static", "final", "abstract",
    "synchronized", "native", "transient", "volatile", "strictfp", "default",
})
PRIMITIVES = frozenset({
    "int", "long", "short", "byte", "char", "boolean", "float", "double",
})
KEYWORDS = frozenset({"package", "import", "class", "interface",
                      "extends", "implements", "throws", "void"})

_PUNCT = set("{}()<>[];,.=?&")


@dataclass(frozen=True)
class Token:
    kind: str  # "ident", "punct", "eof"
    value: str
    line: int
    col: int


@dataclass
class TypeRef:
    """A source type reference: possibly qualified base name plus type arguments.

    Array dimensions decay to the element type at parse time; primitive and
    void references are never stored on a ClassDecl.
    """

    name: str
    args: list["TypeRef"] = field(default_factory=list)

    def flatten(self, include_args: bool) -> list[str]:
        """Base names referenced by this type; wildcards contribute only bounds."""
        names = [] if self.name == "?" else [self.name]
        if include_args or self.name == "?":
            for arg in self.args:
                names.extend(arg.flatten(include_args))
        return names


@dataclass
class ClassDecl:
    """Parsed header of one class or interface (nested types get their own)."""

    fqn: str
    package: str
    is_interface: bool = False
    supertypes: list[TypeRef] = field(default_factory=list)
    field_types: list[TypeRef] = field(default_factory=list)
    param_types: list[TypeRef] = field(default_factory=list)
    ctor_param_types: list[TypeRef] = field(default_factory=list)
    return_types: list[TypeRef] = field(default_factory=list)
    imports: list[str] = field(default_factory=list)
    type_params: set[str] = field(default_factory=set)
    line: int = 0

    @property
    def simple_name(self) -> str:
        return self.fqn.rsplit(".", 1)[-1]


def _is_ident_start(ch: str) -> bool:
    return ch.isalpha() or ch in "_$"


def _is_ident_part(ch: str) -> bool:
    return ch.isalnum() or ch in "_$"


def tokenize(source: str, filename: str | None = None) -> list[Token]:
    """Produce the token stream, skipping comments, modifiers and annotations."""
    tokens: list[Token] = []
    i, line, col = 0, 1, 1
    n = len(source)

    def err(msg: str, ln: int, cl: int) -> ParseError:
        return ParseError(msg, ln, cl, filename)

    def advance(count: int) -> None:
        nonlocal i, line, col
        for _ in range(count):
            if source[i] == "\n":
                line += 1
                col = 1
            else:
                col += 1
            i += 1

    while i < n:
        ch = source[i]
        if ch in " \t\r\n":
            advance(1)
            continue
        if source.startswith("//", i):
            while i < n and source[i] != "\n":
                advance(1)
            continue
        if source.startswith("/*", i):
            start_line, start_col = line, col
            advance(2)
            while i < n and not source.startswith("*/", i):
                advance(1)
            if i >= n:
                raise err("unterminated block comment", start_line, start_col)
            advance(2)
            continue
        if ch == "@":
            # Annotation: skip @QualifiedName and an optional balanced (...) tail.
            advance(1)
            if i >= n or not _is_ident_start(source[i]):
                raise err("expected annotation name after '@'", line, col)
            while i < n and (_is_ident_part(source[i]) or source[i] == "."):
                advance(1)
            if i < n and source[i] == "(":
                depth = 0
                while i < n:
                    if source[i] == "(":
                        depth += 1
                    elif source[i] == ")":
                        depth -= 1
                        if depth == 0:
                            advance(1)
                            break
                    advance(1)
            continue
        if _is_ident_start(ch):
            start, start_line, start_col = i, line, col
            while i < n and _is_ident_part(source[i]):
                advance(1)
            word = source[start:i]
            if word in MODIFIERS:
                continue
            tokens.append(Token("ident", word, start_line, start_col))
            continue
        if ch.isdigit():
            # Numeric literal; only ever skipped, so lex permissively.
            start, start_line, start_col = i, line, col
            while i < n and (_is_ident_part(source[i]) or source[i] == "."):
                advance(1)
            tokens.append(Token("literal", source[start:i], start_line, start_col))
            continue
        if ch in "\"'":
            quote, start_line, start_col = ch, line, col
            start = i
            advance(1)
            while i < n and source[i] != quote:
                advance(2 if source[i] == "\\" else 1)
            if i >= n:
                raise err("unterminated literal", start_line, start_col)
            advance(1)
            tokens.append(Token("literal", source[start:i], start_line, start_col))
            continue
        if source.startswith("...", i):
            tokens.append(Token("punct", "...", line, col))
            advance(3)
            continue
        if ch in _PUNCT:
            tokens.append(Token("punct", ch, line, col))
            advance(1)
            continue
        raise err(f"unexpected character {ch!r}", line, col)
    tokens.append(Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens: list[Token], filename: str | None = None):
        self.tokens = tokens
        self.pos = 0
        self.filename = filename
        self.package = ""
        self.imports: list[str] = []
        self.decls: list[ClassDecl] = []

    # -- token helpers ------------------------------------------------------

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def error(self, message: str, tok: Token | None = None) -> ParseError:
        tok = tok or self.peek()
        return ParseError(message, tok.line, tok.col, self.filename)

    def at_punct(self, value: str) -> bool:
        tok = self.peek()
        return tok.kind == "punct" and tok.value == value

    def at_word(self, value: str) -> bool:
        tok = self.peek()
        return tok.kind == "ident" and tok.value == value

    def expect_punct(self, value: str) -> Token:
        if not self.at_punct(value):
            raise self.error(f"expected {value!r}, found {self.peek().value!r}")
        return self.next()

    def expect_ident(self) -> Token:
        tok = self.peek()
        if tok.kind != "ident" or tok.value in KEYWORDS:
            raise self.error(f"expected identifier, found {tok.value!r}")
        return self.next()

    # -- grammar ------------------------------------------------------------

    def parse_unit(self) -> list[ClassDecl]:
        if self.at_word("package"):
            self.next()
            self.package = self.qualified_name()
            self.expect_punct(";")
        while self.at_word("import"):
            self.next()
            name = self.qualified_name()
            self.expect_punct(";")
            self.imports.append(name)
        if self.peek().kind == "eof":
            raise self.error("expected class or interface declaration")
        while self.peek().kind != "eof":
            self.type_decl(outer=None)
        seen: set[str] = set()
        for decl in self.decls:
            if decl.fqn in seen:
                raise ParseError(f"duplicate class {decl.fqn!r}", decl.line, 1,
                                 self.filename)
            seen.add(decl.fqn)
        return self.decls

    def qualified_name(self) -> str:
        parts = [self.expect_ident().value]
        while self.at_punct("."):
            self.next()
            parts.append(self.expect_ident().value)
        return ".".join(parts)

    def type_decl(self, outer: ClassDecl | None) -> None:
        tok = self.peek()
        if not (self.at_word("class") or self.at_word("interface")):
            raise self.error(f"expected 'class' or 'interface', found {tok.value!r}")
        is_interface = tok.value == "interface"
        self.next()
        name_tok = self.expect_ident()
        if outer is None:
            fqn = f"{self.package}.{name_tok.value}" if self.package else name_tok.value
        else:
            fqn = f"{outer.fqn}.{name_tok.value}"
        decl = ClassDecl(fqn=fqn, package=self.package, is_interface=is_interface,
                         imports=list(self.imports), line=name_tok.line)
        if self.at_punct("<"):
            decl.type_params |= self.type_param_names()
        if self.at_word("extends"):
            self.next()
            decl.supertypes.extend(self.type_list())
        if self.at_word("implements"):
            self.next()
            decl.supertypes.extend(self.type_list())
        self.expect_punct("{")
        while not self.at_punct("}"):
            if self.peek().kind == "eof":
                raise self.error("unexpected end of input in class body")
            self.member(decl)
        self.next()  # closing brace
        self.decls.append(decl)

    def type_param_names(self) -> set[str]:
        """Parse <T, U extends Bound & Other, ...>; bound types are discarded."""
        self.expect_punct("<")
        names: set[str] = set()
        while True:
            names.add(self.expect_ident().value)
            if self.at_word("extends"):
                self.next()
                self.type_ref()
                while self.at_punct("&"):
                    self.next()
                    self.type_ref()
            if self.at_punct(","):
                self.next()
                continue
            self.expect_punct(">")
            return names

    def type_list(self) -> list[TypeRef]:
        refs = [self.type_ref()]
        while self.at_punct(","):
            self.next()
            refs.append(self.type_ref())
        return refs

    def type_ref(self) -> TypeRef:
        if self.at_punct("?"):
            self.next()
            ref = TypeRef("?")
            if self.at_word("extends") or self.at_word("super"):
                self.next()
                ref.args.append(self.type_ref())
            return ref
        tok = self.peek()
        if tok.kind != "ident":
            raise self.error(f"expected type, found {tok.value!r}")
        if tok.value == "void":
            self.next()
            return TypeRef("void")
        if tok.value in PRIMITIVES:
            self.next()
            name = tok.value
            ref = TypeRef(name)
        else:
            ref = TypeRef(self.qualified_name())
        if self.at_punct("<"):
            self.next()
            ref.args.append(self.type_ref())
            while self.at_punct(","):
                self.next()
                ref.args.append(self.type_ref())
            self.expect_punct(">")
        while self.at_punct("["):
            self.next()
            self.expect_punct("]")  # arrays decay to the element type
        return ref

    def member(self, decl: ClassDecl) -> None:
        if self.at_word("class") or self.at_word("interface"):
            self.type_decl(outer=decl)
            return
        if self.at_punct("<"):
            decl.type_params |= self.type_param_names()
        ref = self.type_ref()
        if self.at_punct("("):
            # Constructor: the "type" was the class name.
            if ref.name != decl.simple_name:
                raise self.error(f"unexpected '(' after {ref.name!r}")
            self.method_tail(decl, return_ref=None, is_ctor=True)
            return
        name_tok = self.expect_ident()
        if self.at_punct("("):
            self.method_tail(decl, return_ref=ref)
            return
        # Field declaration, possibly multi-name with initializers.
        self.store(decl.field_types, ref, decl)
        while True:
            if self.at_punct("="):
                self.skip_initializer()
            if self.at_punct(","):
                self.next()
                self.expect_ident()
                self.store(decl.field_types, ref, decl)
                continue
            self.expect_punct(";")
            return

    def method_tail(self, decl: ClassDecl, return_ref: TypeRef | None,
                    is_ctor: bool = False) -> None:
        """Parse '(params) [throws ...] (; | {body})' and record the types."""
        self.expect_punct("(")
        params: list[TypeRef] = []
        if not self.at_punct(")"):
            while True:
                params.append(self.type_ref())
                if self.at_punct("..."):
                    self.next()
                if self.peek().kind == "ident" and self.peek().value not in KEYWORDS:
                    self.next()  # parameter name is optional
                if self.at_punct(","):
                    self.next()
                    continue
                break
        self.expect_punct(")")
        if self.at_word("throws"):
            self.next()
            self.qualified_name()
            while self.at_punct(","):
                self.next()
                self.qualified_name()
        if self.at_punct("{"):
            self.skip_block()
        else:
            self.expect_punct(";")
        bucket = decl.ctor_param_types if is_ctor else decl.param_types
        for param in params:
            self.store(bucket, param, decl)
        if return_ref is not None:
            self.store(decl.return_types, return_ref, decl)

    def store(self, bucket: list[TypeRef], ref: TypeRef, decl: ClassDecl) -> None:
        if ref.name == "void" or ref.name in PRIMITIVES:
            return
        bucket.append(ref)

    def skip_block(self) -> None:
        depth = 0
        while True:
            tok = self.next()
            if tok.kind == "eof":
                raise self.error("unterminated block", tok)
            if tok.kind == "punct" and tok.value == "{":
                depth += 1
            elif tok.kind == "punct" and tok.value == "}":
                depth -= 1
                if depth == 0:
                    return

    def skip_initializer(self) -> None:
        """Skip '= ...' up to the terminating ';' or ',' at nesting depth 0."""
        self.expect_punct("=")
        depth = 0
        while True:
            tok = self.peek()
            if tok.kind == "eof":
                raise self.error("unterminated field initializer")
            if tok.kind == "punct":
                if tok.value in "{([":
                    depth += 1
                elif tok.value in "})]":
                    depth -= 1
                elif tok.value in ";," and depth == 0:
                    return
            self.next()


def parse_class_headers(source_text: str, filename: str | None = None) -> list[ClassDecl]:
    """Parse one header-source file into ClassDecls (nested classes flattened)."""
    tokens = tokenize(source_text, filename)
    return _Parser(tokens, filename).parse_unit()

"""The ``.ctd`` script language: tokenizer, parser and canonical printer.

A script is a sequence of line-oriented statements::

    worlds A B C D F
    set AB = {A B}
    model m = avoidOnly(F)
    model k = { ob {A B} : {A} {A C}  ob {C D} : {C} }
    premise ob {A} in {A B}
    premise ought {A} given {A B C D F}
    system ANOMALY
    check
    classify
    closure goal {C} in {B C D}
    independence 5a 5b 5c 5d minus 5e
    lemma unique_bad
    enumerate

Newlines end statements except inside braces. ``#`` starts a comment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional, Union

from .axioms import PRESETS, UnknownAxiomError, parse_axiom

KEYWORDS = {
    "worlds", "set", "model", "premise", "system", "check", "classify",
    "closure", "independence", "lemma", "enumerate", "ob", "ought", "given",
    "in", "goal", "minus",
}
CONSTRUCTOR_ARITY = {
    "canon2": 2,
    "canon2_II": 2,
    "avoidOnly": 1,
    "avoidNone": 0,
    "noObligations": 0,
}
BRANCH_ORDERS = ("verbatim", "a_first")


class ParseError(Exception):
    def __init__(self, line: int, column: int, message: str, token: str = "") -> None:
        super().__init__(f"line {line}, column {column}: {message}" + (f" (at {token!r})" if token else ""))
        self.line = line
        self.column = column
        self.message = message
        self.token = token

    def as_dict(self) -> dict:
        return {"line": self.line, "column": self.column, "message": self.message, "token": self.token}


# ---------------------------------------------------------------------------
# script structure


@dataclass(frozen=True)
class SetLit:
    worlds: tuple[str, ...]


@dataclass(frozen=True)
class SetRef:
    name: str


SetTerm = Union[SetLit, SetRef]


@dataclass(frozen=True)
class Ctor:
    name: str
    args: tuple[Union[SetTerm, str], ...] = ()  # a str arg is a world name or branch order


@dataclass(frozen=True)
class ObLiteral:
    entries: tuple[tuple[SetTerm, tuple[SetTerm, ...]], ...]


@dataclass(frozen=True)
class Worlds:
    names: tuple[str, ...]
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class SetDef:
    name: str
    value: SetTerm
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class ModelDef:
    name: str
    value: Union[Ctor, ObLiteral]
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class PremiseOb:
    prop: SetTerm
    context: SetTerm
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class PremiseOught:
    prop: SetTerm
    given: SetTerm
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class SystemStmt:
    names: tuple[str, ...]
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Query:
    kind: str  # check | classify | closure | independence | lemma | enumerate
    goal: Optional[tuple[SetTerm, SetTerm]] = None  # closure: (prop, context)
    hold: tuple[str, ...] = ()
    fail: Optional[str] = None
    lemma: Optional[str] = None
    line: int = field(default=0, compare=False)


Statement = Union[Worlds, SetDef, ModelDef, PremiseOb, PremiseOught, SystemStmt, Query]


@dataclass(frozen=True)
class Script:
    statements: tuple[Statement, ...]

    @property
    def worlds(self) -> tuple[str, ...]:
        for st in self.statements:
            if isinstance(st, Worlds):
                return st.names
        return ()

    def queries(self) -> list[Query]:
        return [s for s in self.statements if isinstance(s, Query)]

    def declarations(self) -> list[Statement]:
        return [s for s in self.statements if not isinstance(s, Query)]


# ---------------------------------------------------------------------------
# tokenizer

_TOKEN = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<comment>\#[^\n]*)|(?P<nl>\n)|(?P<punct>[{}():=,])"
    r"|(?P<name>A?5\([a-g][-⁻]?\)|[A-Za-z0-9_][A-Za-z0-9_.\-]*)"
)


@dataclass(frozen=True)
class Token:
    kind: str  # name | punct | nl | eof
    text: str
    line: int
    col: int


def tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    line, line_start, pos, depth = 1, 0, 0, 0
    while pos < len(source):
        m = _TOKEN.match(source, pos)
        col = pos - line_start + 1
        if m is None:
            raise ParseError(line, col, "unexpected character", source[pos])
        kind = m.lastgroup
        text = m.group()
        if kind == "nl":
            if depth == 0:
                tokens.append(Token("nl", text, line, col))
            line += 1
            line_start = m.end()
        elif kind == "punct":
            if text == "{":
                depth += 1
            elif text == "}":
                depth = max(0, depth - 1)
            tokens.append(Token("punct", text, line, col))
        elif kind == "name":
            tokens.append(Token("name", text, line, col))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


# ---------------------------------------------------------------------------
# parser


class _Parser:
    def __init__(self, source: str) -> None:
        self.toks = tokenize(source)
        self.i = 0
        self.worlds: Optional[tuple[str, ...]] = None
        self.sets: set[str] = set()
        self.models: set[str] = set()

    # -- helpers --

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, message: str, tok: Optional[Token] = None) -> ParseError:
        t = tok or self.tok
        return ParseError(t.line, t.col, message, t.text)

    def next(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def expect(self, text: str) -> Token:
        if self.tok.text != text or self.tok.kind == "eof":
            raise self.error(f"expected {text!r}")
        return self.next()

    def name(self, what: str = "a name") -> Token:
        if self.tok.kind != "name":
            raise self.error(f"expected {what}")
        return self.next()

    def at_end_of_stmt(self) -> bool:
        return self.tok.kind in ("nl", "eof")

    def end_stmt(self) -> None:
        if not self.at_end_of_stmt():
            raise self.error("expected end of statement")
        if self.tok.kind == "nl":
            self.next()

    def need_worlds(self, tok: Token) -> tuple[str, ...]:
        if self.worlds is None:
            raise self.error("worlds must be declared first", tok)
        return self.worlds

    # -- grammar --

    def script(self) -> Script:
        stmts: list[Statement] = []
        while self.tok.kind != "eof":
            if self.tok.kind == "nl":
                self.next()
                continue
            stmts.append(self.statement())
        if self.worlds is None:
            raise ParseError(self.tok.line, self.tok.col, "script declares no worlds")
        return Script(tuple(stmts))

    def statement(self) -> Statement:
        t = self.tok
        kw = t.text
        if t.kind != "name":
            raise self.error("expected a statement")
        self.next()
        if kw == "worlds":
            return self.worlds_stmt(t)
        self.need_worlds(t)
        if kw == "set":
            name = self.fresh_name(self.sets, "set")
            self.expect("=")
            value = self.setterm()
            self.end_stmt()
            self.sets.add(name)
            return SetDef(name, value, t.line)
        if kw == "model":
            name = self.fresh_name(self.models, "model")
            self.expect("=")
            value = self.obliteral() if self.tok.text == "{" else self.ctor()
            self.end_stmt()
            self.models.add(name)
            return ModelDef(name, value, t.line)
        if kw == "premise":
            return self.premise(t)
        if kw == "system":
            names = []
            while not self.at_end_of_stmt():
                nt = self.name("an axiom or system name")
                self.check_axiom_name(nt)
                names.append(nt.text)
            if not names:
                raise self.error("system needs at least one name")
            self.end_stmt()
            return SystemStmt(tuple(names), t.line)
        if kw in ("check", "classify", "enumerate"):
            self.end_stmt()
            return Query(kw, line=t.line)
        if kw == "closure":
            goal = None
            if self.tok.text == "goal":
                self.next()
                prop = self.setterm()
                self.expect("in")
                ctx = self.setterm()
                goal = (prop, ctx)
            self.end_stmt()
            return Query("closure", goal=goal, line=t.line)
        if kw == "independence":
            hold = []
            while self.tok.kind == "name" and self.tok.text != "minus":
                nt = self.next()
                self.check_axiom_name(nt)
                hold.append(nt.text)
            self.expect("minus")
            ft = self.name("an axiom name")
            try:
                parse_axiom(ft.text)
            except UnknownAxiomError:
                raise self.error(f"unknown axiom {ft.text!r}", ft) from None
            self.end_stmt()
            return Query("independence", hold=tuple(hold), fail=ft.text, line=t.line)
        if kw == "lemma":
            from .lemmas import REGISTRY

            lt = self.name("a lemma id")
            if lt.text not in REGISTRY and lt.text != "all":
                raise self.error(f"unknown lemma {lt.text!r}", lt)
            self.end_stmt()
            return Query("lemma", lemma=lt.text, line=t.line)
        raise self.error(f"unknown statement {kw!r}", t)

    def worlds_stmt(self, t: Token) -> Worlds:
        if self.worlds is not None:
            raise self.error("worlds declared twice", t)
        names: list[str] = []
        while not self.at_end_of_stmt():
            nt = self.name("a world name")
            if nt.text in KEYWORDS:
                raise self.error("a keyword cannot name a world", nt)
            if nt.text in names:
                raise self.error(f"duplicate world {nt.text!r}", nt)
            names.append(nt.text)
        if len(names) > 8:
            raise self.error("at most 8 worlds are supported", t)
        self.end_stmt()
        self.worlds = tuple(names)
        return Worlds(tuple(names), t.line)

    def fresh_name(self, scope: set[str], what: str) -> str:
        nt = self.name(f"a {what} name")
        if nt.text in KEYWORDS:
            raise self.error("a keyword cannot be bound", nt)
        if nt.text in scope:
            raise self.error(f"{what} {nt.text!r} is already bound", nt)
        return nt.text

    def check_axiom_name(self, nt: Token) -> None:
        if nt.text in PRESETS:
            return
        try:
            parse_axiom(nt.text)
        except UnknownAxiomError:
            raise self.error(f"unknown axiom {nt.text!r}", nt) from None

    def premise(self, t: Token) -> Statement:
        if self.tok.text == "ob":
            self.next()
            prop = self.setterm()
            self.expect("in")
            ctx = self.setterm()
            self.end_stmt()
            return PremiseOb(prop, ctx, t.line)
        if self.tok.text == "ought":
            self.next()
            prop = self.setterm()
            self.expect("given")
            given = self.setterm()
            self.end_stmt()
            return PremiseOught(prop, given, t.line)
        raise self.error("expected 'ob' or 'ought'")

    def setterm(self) -> SetTerm:
        if self.tok.text == "{" and self.tok.kind == "punct":
            return self.setlit()
        nt = self.name("a set literal or set name")
        if nt.text not in self.sets:
            raise self.error(f"unbound set {nt.text!r}", nt)
        return SetRef(nt.text)

    def setlit(self) -> SetLit:
        self.expect("{")
        names: list[str] = []
        worlds = self.worlds or ()
        while self.tok.text != "}":
            nt = self.name("a world name")
            if nt.text not in worlds:
                raise self.error(f"undeclared world {nt.text!r}", nt)
            if nt.text not in names:
                names.append(nt.text)
        self.expect("}")
        order = {w: i for i, w in enumerate(worlds)}
        return SetLit(tuple(sorted(names, key=order.__getitem__)))

    def ctor(self) -> Ctor:
        nt = self.name("a constructor")
        if nt.text not in CONSTRUCTOR_ARITY:
            raise self.error(f"unknown constructor {nt.text!r}", nt)
        arity = CONSTRUCTOR_ARITY[nt.text]
        args: list[Union[SetTerm, str]] = []
        if self.tok.text == "(":
            self.next()
            while self.tok.text != ")":
                if args:
                    self.expect(",")
                args.append(self.ctor_arg(nt.text, len(args)))
            self.expect(")")
        allowed = (arity, arity + 1) if nt.text.startswith("canon2") else (arity,)
        if len(args) not in allowed:
            raise self.error(f"{nt.text} takes {arity} argument(s)", nt)
        return Ctor(nt.text, tuple(args))

    def ctor_arg(self, ctor: str, index: int) -> Union[SetTerm, str]:
        if ctor == "avoidOnly":
            wt = self.name("a world name")
            if wt.text not in (self.worlds or ()):
                raise self.error(f"undeclared world {wt.text!r}", wt)
            return wt.text
        if ctor.startswith("canon2") and index == 2:
            ot = self.name("a branch order")
            if ot.text not in BRANCH_ORDERS:
                raise self.error(f"branch order must be one of {BRANCH_ORDERS}", ot)
            return ot.text
        return self.setterm()

    def obliteral(self) -> ObLiteral:
        self.expect("{")
        entries = []
        while self.tok.text != "}":
            if self.tok.text != "ob":
                raise self.error("expected 'ob' or '}'")
            self.next()
            ctx = self.setterm()
            self.expect(":")
            props = []
            while self.tok.text not in ("ob", "}") and self.tok.kind != "eof":
                props.append(self.setterm())
            entries.append((ctx, tuple(props)))
        self.expect("}")
        return ObLiteral(tuple(entries))


def parse(source: str) -> Script:
    """Parse a whole script; the first error raises ParseError."""
    return _Parser(source).script()


def parse_model_literal(text: str, worlds: tuple[str, ...]) -> ObLiteral:
    p = _Parser(text)
    p.worlds = tuple(worlds)
    lit = p.obliteral()
    while p.tok.kind == "nl":
        p.next()
    if p.tok.kind != "eof":
        raise p.error("trailing input after model literal")
    return lit


# ---------------------------------------------------------------------------
# printer


def format_set(s: SetTerm) -> str:
    if isinstance(s, SetRef):
        return s.name
    return "{" + " ".join(s.worlds) + "}"


def format_model_value(v: Union[Ctor, ObLiteral]) -> str:
    if isinstance(v, Ctor):
        if not v.args and CONSTRUCTOR_ARITY[v.name] == 0:
            return v.name
        parts = [a if isinstance(a, str) else format_set(a) for a in v.args]
        return f"{v.name}({', '.join(parts)})"
    body = " ".join(
        f"ob {format_set(ctx)} :" + "".join(" " + format_set(p) for p in props)
        for ctx, props in v.entries
    )
    return "{ " + body + " }" if body else "{ }"


def format_statement(st: Statement) -> str:
    if isinstance(st, Worlds):
        return "worlds " + " ".join(st.names)
    if isinstance(st, SetDef):
        return f"set {st.name} = {format_set(st.value)}"
    if isinstance(st, ModelDef):
        return f"model {st.name} = {format_model_value(st.value)}"
    if isinstance(st, PremiseOb):
        return f"premise ob {format_set(st.prop)} in {format_set(st.context)}"
    if isinstance(st, PremiseOught):
        return f"premise ought {format_set(st.prop)} given {format_set(st.given)}"
    if isinstance(st, SystemStmt):
        return "system " + " ".join(st.names)
    if st.kind == "closure":
        if st.goal is None:
            return "closure"
        return f"closure goal {format_set(st.goal[0])} in {format_set(st.goal[1])}"
    if st.kind == "independence":
        return "independence " + "".join(h + " " for h in st.hold) + f"minus {st.fail}"
    if st.kind == "lemma":
        return f"lemma {st.lemma}"
    return st.kind


def format_script(script: Script) -> str:
    return "".join(format_statement(st) + "\n" for st in script.statements)

"""Text formats: formulas, sequent files, and signature files.

The formula grammar is deliberately rigid — binary connectives are always
parenthesised — so the printer has a single canonical form and print-then-
parse is the identity:

    formula := ident                    atom
             | '~' ident                negated atom
             | '(' formula '*' formula ')'   tensor        (positive)
             | '(' formula '|' formula ')'   par           (negative)
             | '(' formula '+' formula ')'   plus          (positive)
             | '(' formula '&' formula ')'   with          (negative)
             | '1' | 'bot' | '0' | 'top'     units
             | '!' label formula             bang
             | '?' label formula             question mark

Identifiers (atoms, labels, machine states) match ``[a-z_][a-zA-Z0-9_]*``;
``bot`` and ``top`` are reserved words.  ``#`` starts a comment anywhere in
the line-oriented formats.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ParseError
from .formulas import (
    Atom,
    Bang,
    Bot,
    Formula,
    NegAtom,
    One,
    Par,
    Plus,
    Qm,
    Sequent,
    Tensor,
    Top,
    With,
    Zero,
    BOT,
    ONE,
    TOP,
    ZERO,
)
from .signatures import Signature, close_signature, is_identifier

_PUNCT = {
    "(": "lparen",
    ")": "rparen",
    "*": "star",
    "|": "pipe",
    "+": "plus",
    "&": "amp",
    "!": "bang",
    "?": "qm",
    "~": "tilde",
    ",": "comma",
}

_RESERVED = {"bot", "top"}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str, filename: str | None = None) -> list[Token]:
    tokens: list[Token] = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if c in " \t\r":
            i += 1
            col += 1
            continue
        if c == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if c == "|" and i + 1 < n and text[i + 1] == "-":
            tokens.append(Token("turnstile", "|-", line, col))
            i += 2
            col += 2
            continue
        if c == "<" and i + 1 < n and text[i + 1] == "=":
            tokens.append(Token("le", "<=", line, col))
            i += 2
            col += 2
            continue
        if c in _PUNCT:
            tokens.append(Token(_PUNCT[c], c, line, col))
            i += 1
            col += 1
            continue
        if c in "01" and not (i + 1 < n and (text[i + 1].isalnum() or text[i + 1] == "_")):
            tokens.append(Token("unit", c, line, col))
            i += 1
            col += 1
            continue
        if c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(Token("number", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            kind = "reserved" if word in _RESERVED else "ident"
            tokens.append(Token(kind, word, line, col))
            col += j - i
            i = j
            continue
        raise ParseError(f"unexpected character {c!r}", line, col, filename)
    tokens.append(Token("eof", "", line, col))
    return tokens


class _Cursor:
    def __init__(self, tokens: list[Token], filename: str | None):
        self.tokens = tokens
        self.pos = 0
        self.filename = filename

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def expect(self, kind: str, what: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            self.fail(f"expected {what}, found {tok.text!r}" if tok.text else f"expected {what}")
        return self.next()

    def fail(self, message: str):
        self.fail_at(self.peek(), message)

    def fail_at(self, tok: Token, message: str):
        raise ParseError(message, tok.line, tok.column, self.filename)


_BINOPS = {"star": Tensor, "pipe": Par, "plus": Plus, "amp": With}


def _parse_formula(cur: _Cursor) -> Formula:
    tok = cur.peek()
    match tok.kind:
        case "ident":
            cur.next()
            if not is_identifier(tok.text):
                cur.fail_at(tok, f"malformed atom {tok.text!r}")
            return Atom(tok.text)
        case "tilde":
            cur.next()
            name = cur.expect("ident", "an atom after '~'")
            if not is_identifier(name.text):
                cur.fail_at(name, f"malformed atom {name.text!r}")
            return NegAtom(name.text)
        case "unit":
            cur.next()
            return ONE if tok.text == "1" else ZERO
        case "reserved":
            cur.next()
            return BOT if tok.text == "bot" else TOP
        case "bang" | "qm":
            cur.next()
            label = cur.expect("ident", f"a label after {tok.text!r}")
            if not is_identifier(label.text):
                cur.fail_at(label, f"malformed label {label.text!r}")
            body = _parse_formula(cur)
            return Bang(label.text, body) if tok.kind == "bang" else Qm(label.text, body)
        case "lparen":
            cur.next()
            left = _parse_formula(cur)
            op = cur.next()
            ctor = _BINOPS.get(op.kind)
            if ctor is None:
                raise ParseError(
                    f"expected a connective, found {op.text!r}", op.line, op.column, cur.filename
                )
            right = _parse_formula(cur)
            cur.expect("rparen", "')'")
            return ctor(left, right)
    cur.fail(f"expected a formula, found {tok.text!r}" if tok.text else "expected a formula")
    raise AssertionError  # unreachable


def parse_formula(text: str, filename: str | None = None) -> Formula:
    cur = _Cursor(tokenize(text, filename), filename)
    f = _parse_formula(cur)
    tok = cur.peek()
    if tok.kind != "eof":
        cur.fail(f"trailing input {tok.text!r}")
    return f


def print_formula(f: Formula) -> str:
    match f:
        case Atom(name):
            return name
        case NegAtom(name):
            return f"~{name}"
        case Tensor(a, b):
            return f"({print_formula(a)} * {print_formula(b)})"
        case Par(a, b):
            return f"({print_formula(a)} | {print_formula(b)})"
        case Plus(a, b):
            return f"({print_formula(a)} + {print_formula(b)})"
        case With(a, b):
            return f"({print_formula(a)} & {print_formula(b)})"
        case One():
            return "1"
        case Zero():
            return "0"
        case Bot():
            return "bot"
        case Top():
            return "top"
        case Bang(label, body):
            return f"!{label} {print_formula(body)}"
        case Qm(label, body):
            return f"?{label} {print_formula(body)}"
    raise TypeError(f"not a formula: {f!r}")


# --- sequent files ----------------------------------------------------------

def parse_sequent(text: str, filename: str | None = None) -> Sequent:
    """Either one formula per line, or ``|-`` followed by a comma list."""
    cur = _Cursor(tokenize(text, filename), filename)
    formulas: list[Formula] = []
    if cur.peek().kind == "turnstile":
        cur.next()
        formulas.append(_parse_formula(cur))
        while cur.peek().kind == "comma":
            cur.next()
            formulas.append(_parse_formula(cur))
    else:
        while cur.peek().kind != "eof":
            formulas.append(_parse_formula(cur))
    tok = cur.peek()
    if tok.kind != "eof":
        cur.fail(f"trailing input {tok.text!r}")
    if not formulas:
        cur.fail("a sequent needs at least one formula")
    return Sequent(tuple(formulas))


def print_sequent(seq: Sequent) -> str:
    return "\n".join(print_formula(f) for f in seq.context) + "\n"


# --- signature files --------------------------------------------------------

def parse_signature(text: str, filename: str | None = None) -> Signature:
    """Line-oriented format::

        labels: inf a b
        unbounded: inf
        order: a <= inf, b <= inf

    The ``unbounded`` and ``order`` lines may be omitted or left empty.
    Validation errors from closing the signature propagate unchanged.
    """
    labels: list[str] | None = None
    unbounded: list[str] = []
    order: list[tuple[str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if not stripped:
            continue
        key, sep, rest = stripped.partition(":")
        if not sep:
            raise ParseError("expected 'key: value'", lineno, 1, filename)
        key = key.strip()
        rest = rest.strip()
        if key == "labels":
            labels = rest.split()
        elif key == "unbounded":
            unbounded = rest.split()
        elif key == "order":
            if rest:
                for chunk in rest.split(","):
                    parts = chunk.split("<=")
                    if len(parts) != 2 or not parts[0].strip() or not parts[1].strip():
                        raise ParseError(
                            f"malformed order constraint {chunk.strip()!r}", lineno, 1, filename
                        )
                    order.append((parts[0].strip(), parts[1].strip()))
        else:
            raise ParseError(f"unknown key {key!r}", lineno, 1, filename)
    if labels is None:
        raise ParseError("missing 'labels:' line", 1, 1, filename)
    return close_signature(labels, unbounded, order)


def print_signature(sig: Signature) -> str:
    lines = [
        "labels: " + " ".join(sorted(sig.labels)),
        "unbounded: " + " ".join(sorted(sig.unbounded)),
    ]
    strict = sorted((u, v) for (u, v) in sig.order if u != v)
    lines.append("order: " + ", ".join(f"{u} <= {v}" for u, v in strict))
    return "\n".join(lines) + "\n"

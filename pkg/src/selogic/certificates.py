"""Text format for proof certificates, unfocused and focused.

Certificates are s-expressions over lower-case symbols and decimal
numbers.  Context positions are zero-based.  Unfocused nodes:

    (init I J)              axiom between positions I (atom) and J (negation)
    (tensor P (left I...) L R)   split at position P, listed positions go left
    (one)
    (plus1 P S)  (plus2 P S)
    (par P S)  (bot P S)
    (with P L R)
    (top P)
    (qm P S)  (bang P S)
    (weak P S)  (contr P S)

Focused nodes reuse par/bot/with/top verbatim and add:

    (finit N)               N is the position of the matching negated atom
    (f1)
    (ftensor (kept I...) (left I...) L R)
    (fplus1 S)  (fplus2 S)
    (fbang (kept I...) S)
    (blur S)
    (decide P S)  (ldecide P S)  (udecide P S)

The leaves finit and f1 carry no position lists: whatever unbounded
question-marked formulas remain in the context are absorbed implicitly,
and the checker verifies that nothing else is left over.
"""

from __future__ import annotations

from .errors import ParseError
from .focusing import BLUR, DECIDE, FBANG, FINIT, FONE, FPLUS1, FPLUS2, FTENSOR, LDECIDE, UDECIDE, FProof
from . import unfocused as uf
from .unfocused import UProof


class _SList:
    __slots__ = ("items", "line", "col")

    def __init__(self, items, line, col):
        self.items = items
        self.line = line
        self.col = col


def _lex(text: str, filename: str | None):
    line, col = 1, 1
    i = 0
    out = []
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
        elif ch in " \t\r":
            i += 1
            col += 1
        elif ch == ";":
            while i < len(text) and text[i] != "\n":
                i += 1
        elif ch in "()":
            out.append((ch, ch, line, col))
            i += 1
            col += 1
        elif ch.isdigit() or ch.islower() or ch == "_":
            start, start_col = i, col
            while i < len(text) and (text[i].isalnum() or text[i] == "_"):
                i += 1
                col += 1
            word = text[start:i]
            if word.isdigit():
                out.append(("num", int(word), line, start_col))
            else:
                out.append(("sym", word, line, start_col))
        else:
            raise ParseError(f"unexpected character {ch!r}", line, col, filename)
    return out


def _read_sexpr(text: str, filename: str | None):
    toks = _lex(text, filename)
    if not toks:
        raise ParseError("empty certificate", 1, 1, filename)

    pos = 0

    def expr():
        nonlocal pos
        if pos >= len(toks):
            raise ParseError("unexpected end of input", toks[-1][2], toks[-1][3], filename)
        kind, val, line, col = toks[pos]
        pos += 1
        if kind in ("num", "sym"):
            return val
        if kind == "(":
            items = []
            while True:
                if pos >= len(toks):
                    raise ParseError("unclosed parenthesis", line, col, filename)
                if toks[pos][0] == ")":
                    pos += 1
                    return _SList(items, line, col)
                items.append(expr())
        raise ParseError("unmatched closing parenthesis", line, col, filename)

    node = expr()
    if pos != len(toks):
        k, v, line, col = toks[pos]
        raise ParseError("trailing input after the certificate", line, col, filename)
    return node


class _Shape:
    """Pulls typed arguments out of one s-expression node."""

    def __init__(self, node, filename):
        if not isinstance(node, _SList) or not node.items or not isinstance(node.items[0], str):
            line = getattr(node, "line", 1)
            col = getattr(node, "col", 1)
            raise ParseError("expected a (rule ...) form", line, col, filename)
        self.node = node
        self.filename = filename
        self.tag = node.items[0]
        self.rest = node.items[1:]
        self.at = 0

    def fail(self, message: str):
        raise ParseError(f"{self.tag}: {message}", self.node.line, self.node.col, self.filename)

    def _next(self):
        if self.at >= len(self.rest):
            self.fail("too few arguments")
        x = self.rest[self.at]
        self.at += 1
        return x

    def num(self) -> int:
        x = self._next()
        if not isinstance(x, int):
            self.fail("expected a position number")
        return x

    def numlist(self, marker: str) -> tuple[int, ...]:
        x = self._next()
        if (
            not isinstance(x, _SList)
            or not x.items
            or x.items[0] != marker
            or not all(isinstance(y, int) for y in x.items[1:])
        ):
            self.fail(f"expected ({marker} ...) with position numbers")
        return tuple(x.items[1:])

    def sub(self):
        return self._next()

    def done(self):
        if self.at != len(self.rest):
            self.fail("too many arguments")


def parse_unfocused_proof(text: str, filename: str | None = None) -> UProof:
    return _u_from(_read_sexpr(text, filename), filename)


def _u_from(node, filename) -> UProof:
    s = _Shape(node, filename)
    match s.tag:
        case "init":
            i, j = s.num(), s.num()
            s.done()
            return UProof(uf.INIT, pair=(i, j))
        case "one":
            s.done()
            return UProof(uf.ONE_RULE)
        case "top":
            p = s.num()
            s.done()
            return UProof(uf.TOP_RULE, principal=p)
        case "tensor":
            p = s.num()
            left = s.numlist("left")
            l, r = s.sub(), s.sub()
            s.done()
            return UProof(
                uf.TENSOR,
                principal=p,
                split=left,
                premises=(_u_from(l, filename), _u_from(r, filename)),
            )
        case "with":
            p = s.num()
            l, r = s.sub(), s.sub()
            s.done()
            return UProof(
                uf.WITH, principal=p, premises=(_u_from(l, filename), _u_from(r, filename))
            )
        case "plus1" | "plus2" | "par" | "bot" | "qm" | "bang" | "weak" | "contr":
            p = s.num()
            sub = s.sub()
            s.done()
            return UProof(s.tag, principal=p, premises=(_u_from(sub, filename),))
        case _:
            s.fail("not an unfocused rule")


def print_unfocused_proof(proof: UProof) -> str:
    return _render(_u_sexpr(proof)) + "\n"


def _u_sexpr(p: UProof):
    match p.rule:
        case uf.INIT:
            return ["init", p.pair[0], p.pair[1]]
        case uf.ONE_RULE:
            return ["one"]
        case uf.TOP_RULE:
            return ["top", p.principal]
        case uf.TENSOR:
            return [
                "tensor",
                p.principal,
                ["left", *p.split],
                _u_sexpr(p.premises[0]),
                _u_sexpr(p.premises[1]),
            ]
        case uf.WITH:
            return ["with", p.principal, _u_sexpr(p.premises[0]), _u_sexpr(p.premises[1])]
        case _:
            return [p.rule, p.principal, _u_sexpr(p.premises[0])]


def parse_focused_proof(text: str, filename: str | None = None) -> FProof:
    return _f_from(_read_sexpr(text, filename), filename)


def _f_from(node, filename) -> FProof:
    s = _Shape(node, filename)
    match s.tag:
        case "finit":
            p = s.num()
            s.done()
            return FProof(FINIT, principal=p)
        case "f1":
            s.done()
            return FProof(FONE)
        case "top":
            p = s.num()
            s.done()
            return FProof(uf.TOP_RULE, principal=p)
        case "ftensor":
            kept = s.numlist("kept")
            left = s.numlist("left")
            l, r = s.sub(), s.sub()
            s.done()
            return FProof(
                FTENSOR,
                kept=kept,
                split=left,
                premises=(_f_from(l, filename), _f_from(r, filename)),
            )
        case "with":
            p = s.num()
            l, r = s.sub(), s.sub()
            s.done()
            return FProof(
                uf.WITH, principal=p, premises=(_f_from(l, filename), _f_from(r, filename))
            )
        case "fbang":
            kept = s.numlist("kept")
            sub = s.sub()
            s.done()
            return FProof(FBANG, kept=kept, premises=(_f_from(sub, filename),))
        case "fplus1" | "fplus2" | "blur":
            sub = s.sub()
            s.done()
            return FProof(s.tag, premises=(_f_from(sub, filename),))
        case "decide" | "ldecide" | "udecide" | "par" | "bot":
            p = s.num()
            sub = s.sub()
            s.done()
            return FProof(s.tag, principal=p, premises=(_f_from(sub, filename),))
        case _:
            s.fail("not a focused rule")


def print_focused_proof(proof: FProof) -> str:
    return _render(_f_sexpr(proof)) + "\n"


def _f_sexpr(p: FProof):
    match p.rule:
        case "finit":
            return ["finit", p.principal]
        case "f1":
            return ["f1"]
        case "top":
            return ["top", p.principal]
        case "ftensor":
            return [
                "ftensor",
                ["kept", *p.kept],
                ["left", *p.split],
                _f_sexpr(p.premises[0]),
                _f_sexpr(p.premises[1]),
            ]
        case "with":
            return ["with", p.principal, _f_sexpr(p.premises[0]), _f_sexpr(p.premises[1])]
        case "fbang":
            return ["fbang", ["kept", *p.kept], _f_sexpr(p.premises[0])]
        case "fplus1" | "fplus2" | "blur":
            return [p.rule, _f_sexpr(p.premises[0])]
        case _:
            return [p.rule, p.principal, _f_sexpr(p.premises[0])]


_WIDTH = 96


def _flat(x) -> str:
    if isinstance(x, list):
        return "(" + " ".join(_flat(y) for y in x) + ")"
    return str(x)


def _render(x, indent: int = 0, closers: int = 0) -> str:
    """One line when it fits, otherwise subproofs on their own lines.

    ``closers`` counts the parentheses ancestors will append to this
    subtree's final line, so the width check sees the real line length.
    Indentation deepens only where a node has two premises; a sole
    premise stays at its parent's indent.  Long runs of single-premise
    rules would otherwise march the text (and the pile of closing
    parentheses on the last line) past any width.
    """
    flat = _flat(x)
    if not isinstance(x, list) or indent + len(flat) + closers <= _WIDTH:
        return flat
    head = [y for y in x if not _is_subproof(y)]
    subs = [y for y in x if _is_subproof(y)]
    step = indent + 2 if len(subs) > 1 else indent
    pad = " " * step
    lines = ["(" + " ".join(_flat(y) for y in head)]
    for k, y in enumerate(subs):
        pending = closers + 1 if k == len(subs) - 1 else 1
        lines.append(pad + _render(y, step, pending))
    return "\n".join(lines) + ")"


def _is_subproof(y) -> bool:
    return isinstance(y, list) and (not y or y[0] not in ("left", "kept"))

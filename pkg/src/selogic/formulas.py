"""Formula syntax for one-sided subexponential linear logic.

Formulas are in negation normal form: negation appears only on atoms, and
the indexed exponentials come as a bang/question-mark pair over labels drawn
from an ambient signature.  All nodes are frozen dataclasses, so formulas,
contexts and sequents are hashable values that can be shared freely.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass
from functools import cache


@dataclass(frozen=True, slots=True)
class Atom:
    name: str


@dataclass(frozen=True, slots=True)
class NegAtom:
    name: str


@dataclass(frozen=True, slots=True)
class Tensor:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class One:
    pass


@dataclass(frozen=True, slots=True)
class Plus:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class Zero:
    pass


@dataclass(frozen=True, slots=True)
class Par:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class Bot:
    pass


@dataclass(frozen=True, slots=True)
class With:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class Top:
    pass


@dataclass(frozen=True, slots=True)
class Bang:
    label: str
    body: "Formula"


@dataclass(frozen=True, slots=True)
class Qm:
    label: str
    body: "Formula"


Formula = (
    Atom | NegAtom | Tensor | One | Plus | Zero | Par | Bot | With | Top | Bang | Qm
)

#: A context is an ordered tuple of formulas; proofs address it by position.
Context = tuple[Formula, ...]

ONE = One()
ZERO = Zero()
BOT = Bot()
TOP = Top()


class Polarity(enum.Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"


def dual(f: Formula) -> Formula:
    """The involutive De Morgan dual, computed structurally."""
    match f:
        case Atom(name):
            return NegAtom(name)
        case NegAtom(name):
            return Atom(name)
        case Tensor(a, b):
            return Par(dual(a), dual(b))
        case Par(a, b):
            return Tensor(dual(a), dual(b))
        case One():
            return BOT
        case Bot():
            return ONE
        case Plus(a, b):
            return With(dual(a), dual(b))
        case With(a, b):
            return Plus(dual(a), dual(b))
        case Zero():
            return TOP
        case Top():
            return ZERO
        case Bang(label, body):
            return Qm(label, dual(body))
        case Qm(label, body):
            return Bang(label, dual(body))
    raise TypeError(f"not a formula: {f!r}")


def polarity(f: Formula) -> Polarity:
    """Positive formulas have non-invertible rules; duals swap polarity."""
    match f:
        case Atom() | Tensor() | One() | Plus() | Zero() | Bang():
            return Polarity.POSITIVE
        case NegAtom() | Par() | Bot() | With() | Top() | Qm():
            return Polarity.NEGATIVE
    raise TypeError(f"not a formula: {f!r}")


def labels_of(f: Formula) -> frozenset[str]:
    """All subexponential labels occurring in the formula."""
    match f:
        case Bang(label, body) | Qm(label, body):
            return labels_of(body) | {label}
        case Tensor(a, b) | Par(a, b) | Plus(a, b) | With(a, b):
            return labels_of(a) | labels_of(b)
        case _:
            return frozenset()


_TAGS = (Atom, NegAtom, Tensor, One, Plus, Zero, Par, Bot, With, Top, Bang, Qm)
_TAG_INDEX = {cls: i for i, cls in enumerate(_TAGS)}


@cache
def formula_key(f: Formula):
    """A total order key; used only to canonicalise contexts as multisets."""
    match f:
        case Atom(name) | NegAtom(name):
            return (_TAG_INDEX[type(f)], (), name)
        case Tensor(a, b) | Plus(a, b) | Par(a, b) | With(a, b):
            return (_TAG_INDEX[type(f)], (formula_key(a), formula_key(b)), "")
        case Bang(label, body) | Qm(label, body):
            return (_TAG_INDEX[type(f)], (formula_key(body),), label)
        case _:
            return (_TAG_INDEX[type(f)], (), "")


def canonical(ctx: Context) -> Context:
    """A positional context collapsed to a canonical multiset ordering."""
    return tuple(sorted(ctx, key=formula_key))


def multiset_equal(a: Context, b: Context) -> bool:
    return Counter(a) == Counter(b)


@dataclass(frozen=True, slots=True)
class Sequent:
    """A one-sided sequent: a nonempty ordered context of formulas."""

    context: Context

    def __post_init__(self):
        if not isinstance(self.context, tuple):
            object.__setattr__(self, "context", tuple(self.context))
        if not self.context:
            raise ValueError("a sequent needs at least one formula")

    def __len__(self) -> int:
        return len(self.context)

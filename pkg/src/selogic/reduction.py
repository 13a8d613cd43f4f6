"""Encoding two-register machines as derivability problems.

A configuration becomes a context: one question-marked register token per
unit in each register (``?a ~__ra`` for register a, ``?b ~__rb`` for b) plus
the negated atom of the current state.  Each machine entry becomes one
positive *instruction element*; the whole table is placed in the context
under ``?inf`` so it can be reused ad libitum, and firing an entry is one
udecide on its element.  The element shapes make the machine's guards
structural:

* increments emit a fresh register token through a par,
* decrements demand one token via a ``!``-promotion at the register's label,
* zero tests promote at the *other* register's label, which succeeds only
  when no token of the tested register is around to block it,
* halting trades the state atom for a halt token ``~__h``, after which three
  shared helper elements drain leftover tokens and finally close the proof
  with ``!inf 1``.

The goal context is derivable exactly when the machine halts from the given
configuration — except for a start that is already the halting
configuration, where the run is trivially complete but the goal is not
derivable; :func:`proof_from_trace` refuses that empty trace.

:func:`proof_from_trace` turns a verified halting trace into a focused
certificate, and :func:`trace_from_proof` reads the trace back out of any
checked certificate for the goal.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

from .errors import AtomClash, CheckError, MalformedCertificate, TraceMismatch, UnknownState
from .focusing import (
    BLUR,
    DECIDE,
    FBANG,
    FINIT,
    FONE,
    FTENSOR,
    LDECIDE,
    UDECIDE,
    FProof,
    FSequent,
    fpremises_of,
)
from .formulas import ONE, Atom, Bang, Context, Formula, NegAtom, Par, Qm, Tensor
from .minsky import (
    DECRA,
    HALT,
    INCRA,
    Configuration,
    Entry,
    Machine,
    fired_entry,
    halting_config,
    step,
    validate_machine,
)
from .signatures import Signature, close_signature
from .unfocused import PAR

LABEL_INF = "inf"
LABEL_A = "a"
LABEL_B = "b"

HALT_ATOM = "__h"
TOKEN_A = "__ra"
TOKEN_B = "__rb"
RESERVED_ATOMS = frozenset({HALT_ATOM, TOKEN_A, TOKEN_B})

A_TOKEN = Qm(LABEL_A, NegAtom(TOKEN_A))
B_TOKEN = Qm(LABEL_B, NegAtom(TOKEN_B))

_DRAIN_A = Tensor(Tensor(Atom(HALT_ATOM), Bang(LABEL_A, Atom(TOKEN_A))), NegAtom(HALT_ATOM))
_DRAIN_B = Tensor(Tensor(Atom(HALT_ATOM), Bang(LABEL_B, Atom(TOKEN_B))), NegAtom(HALT_ATOM))
_FINISHER = Tensor(Atom(HALT_ATOM), Bang(LABEL_INF, ONE))


def encoding_signature() -> Signature:
    """Three labels: both register labels sit below the unbounded ``inf``."""
    return close_signature(
        labels=(LABEL_INF, LABEL_A, LABEL_B),
        unbounded=(LABEL_INF,),
        order=((LABEL_A, LABEL_INF), (LABEL_B, LABEL_INF)),
    )


def encode_config(c: Configuration) -> Context:
    """Register tokens for a, then for b, then the negated state atom."""
    return (A_TOKEN,) * c.a + (B_TOKEN,) * c.b + (NegAtom(c.state),)


def entry_element(e: Entry) -> Formula:
    src = Atom(e.source)
    match e.instruction:
        case "halt":
            return Tensor(src, NegAtom(HALT_ATOM))
        case "incra":
            return Tensor(src, Par(NegAtom(e.target), A_TOKEN))
        case "incrb":
            return Tensor(src, Par(NegAtom(e.target), B_TOKEN))
        case "decra":
            return Tensor(Tensor(src, Bang(LABEL_A, Atom(TOKEN_A))), NegAtom(e.target))
        case "decrb":
            return Tensor(Tensor(src, Bang(LABEL_B, Atom(TOKEN_B))), NegAtom(e.target))
        case "isza":
            return Tensor(src, Bang(LABEL_B, NegAtom(e.target)))
        case "iszb":
            return Tensor(src, Bang(LABEL_A, NegAtom(e.target)))
    raise AssertionError(f"unknown instruction {e.instruction!r}")


@dataclass(frozen=True)
class ReductionBundle:
    """Everything the translations need about one encoded machine."""

    signature: Signature
    machine: Machine
    init: Configuration
    table: tuple[Formula, ...]
    goal: Context
    entry_elements: tuple[int, ...]
    drain_a: int | None
    drain_b: int | None
    finisher: int | None


def encode_halting(m: Machine, init: Configuration) -> ReductionBundle:
    """Build the goal whose derivability matches halting from ``init``."""
    validate_machine(m)
    for name in sorted(m.states & RESERVED_ATOMS):
        raise AtomClash(f"state name {name!r} is reserved for the encoding")
    if init.state not in m.states:
        raise UnknownState(f"initial state {init.state!r} is not declared")
    if init.a < 0 or init.b < 0:
        raise ValueError("registers cannot be negative")
    table = [entry_element(e) for e in m.entries]
    entry_positions = tuple(range(len(table)))
    if any(e.instruction == HALT for e in m.entries):
        drain_a, drain_b, finisher = len(table), len(table) + 1, len(table) + 2
        table += [_DRAIN_A, _DRAIN_B, _FINISHER]
    else:
        drain_a = drain_b = finisher = None
    goal = tuple(Qm(LABEL_INF, f) for f in table) + encode_config(init)
    return ReductionBundle(
        signature=encoding_signature(),
        machine=m,
        init=init,
        table=tuple(table),
        goal=goal,
        entry_elements=entry_positions,
        drain_a=drain_a,
        drain_b=drain_b,
        finisher=finisher,
    )


def _w(head: FProof, *subs: FProof) -> FProof:
    return replace(head, premises=subs)


class _Builder:
    """Builds the canonical certificate for a replayed halting run.

    Intermediate sequents are recomputed through the checker's premise
    plans at every application, so a construction bug cannot produce an
    ill-formed certificate — it fails loudly instead.  The context suffix
    after the table is tracked as a tag list: "a"/"b" for register tokens,
    "s" for the state atom's negation, "h" for the halt token.
    """

    def __init__(self, bundle: ReductionBundle):
        self.bundle = bundle
        self.sig = bundle.signature
        self.k = len(bundle.table)
        self.element_at = {e: bundle.entry_elements[i] for i, e in enumerate(bundle.machine.entries)}

    def _apply1(self, fseq: FSequent, head: FProof) -> FSequent:
        (prem,) = fpremises_of(self.sig, fseq, head)
        return prem

    def running(self, fseq: FSequent, tail: list[str], fired: Sequence[Entry]) -> FProof:
        e, rest = fired[0], fired[1:]
        ud = FProof(UDECIDE, principal=self.element_at[e])
        fseq1 = self._apply1(fseq, ud)
        s_pos = self.k + tail.index("s")
        match e.instruction:
            case "incra" | "incrb":
                tok = "a" if e.instruction == INCRA else "b"
                t = FProof(FTENSOR, kept=(), split=(s_pos,))
                _, rf = fpremises_of(self.sig, fseq1, t)
                blur = FProof(BLUR)
                rf = self._apply1(rf, blur)
                par = FProof(PAR, principal=len(rf.context) - 1)
                rf = self._apply1(rf, par)
                tail = [x for x in tail if x != "s"] + ["s", tok]
                sub = self.running(rf, tail, rest)
                return _w(ud, _w(t, FProof(FINIT, principal=0), _w(blur, _w(par, sub))))
            case "decra" | "decrb":
                tok = "a" if e.instruction == DECRA else "b"
                assemble, rf, tail = self._spend(fseq1, tail, "s", tok)
                return _w(ud, assemble(self.running(rf, tail, rest)))
            case "isza" | "iszb":
                t = FProof(FTENSOR, kept=(), split=(s_pos,))
                _, rf = fpremises_of(self.sig, fseq1, t)
                bang = FProof(FBANG, kept=tuple(range(len(rf.context))))
                rf = self._apply1(rf, bang)
                tail = [x for x in tail if x != "s"] + ["s"]
                sub = self.running(rf, tail, rest)
                return _w(ud, _w(t, FProof(FINIT, principal=0), _w(bang, sub)))
            case "halt":
                t = FProof(FTENSOR, kept=(), split=(s_pos,))
                _, rf = fpremises_of(self.sig, fseq1, t)
                blur = FProof(BLUR)
                rf = self._apply1(rf, blur)
                tail = [x for x in tail if x != "s"] + ["h"]
                sub = self.drain(rf, tail)
                return _w(ud, _w(t, FProof(FINIT, principal=0), _w(blur, sub)))
        raise AssertionError(f"unknown instruction {e.instruction!r}")

    def drain(self, fseq: FSequent, tail: list[str]) -> FProof:
        """Burn leftover register tokens after the halt element fired."""
        if "a" in tail:
            ud = FProof(UDECIDE, principal=self.bundle.drain_a)
            assemble, rf, tail = self._spend(self._apply1(fseq, ud), tail, "h", "a")
            return _w(ud, assemble(self.drain(rf, tail)))
        if "b" in tail:
            ud = FProof(UDECIDE, principal=self.bundle.drain_b)
            assemble, rf, tail = self._spend(self._apply1(fseq, ud), tail, "h", "b")
            return _w(ud, assemble(self.drain(rf, tail)))
        ud = FProof(UDECIDE, principal=self.bundle.finisher)
        fseq1 = self._apply1(fseq, ud)
        t = FProof(FTENSOR, kept=(), split=(self.k + tail.index("h"),))
        _, rf = fpremises_of(self.sig, fseq1, t)
        bang = FProof(FBANG, kept=())
        rf = self._apply1(rf, bang)
        dec = FProof(DECIDE, principal=0)
        closer = _w(bang, _w(dec, FProof(FONE)))
        return _w(ud, _w(t, FProof(FINIT, principal=0), closer))

    def _spend(self, fseq: FSequent, tail: list[str], anchor: str, tok: str):
        """Shared shape of decrements and drains: a nested tensor consumes
        one register token plus the anchor atom's negation, and the right
        branch resumes with a fresh anchor negation appended."""
        a_pos = self.k + tail.index(anchor)
        t_pos = self.k + tail.index(tok)
        split = tuple(sorted((a_pos, t_pos)))
        outer = FProof(FTENSOR, kept=(), split=split)
        lf, rf = fpremises_of(self.sig, fseq, outer)
        left_tail = [tail[p - self.k] for p in split]
        inner = FProof(FTENSOR, kept=(), split=(left_tail.index(anchor),))
        _, lrf = fpremises_of(self.sig, lf, inner)
        left = _w(inner, FProof(FINIT, principal=0), self._consume_token(lrf))
        blur = FProof(BLUR)
        rf = self._apply1(rf, blur)
        new_tail = list(tail)
        new_tail.remove(tok)
        new_tail.remove(anchor)
        new_tail.append(anchor)

        def assemble(sub: FProof) -> FProof:
            return _w(outer, left, _w(blur, sub))

        return assemble, rf, new_tail

    def _consume_token(self, fseq: FSequent) -> FProof:
        """Close the promotion side of a decrement: the focused bang keeps
        the lone register token, whose negated atom then meets the body."""
        bang = FProof(FBANG, kept=(0,))
        f = self._apply1(fseq, bang)
        ld = FProof(LDECIDE, principal=0)
        f = self._apply1(f, ld)
        blur = FProof(BLUR)
        f = self._apply1(f, blur)
        dec = FProof(DECIDE, principal=0)
        return _w(bang, _w(ld, _w(blur, _w(dec, FProof(FINIT, principal=0)))))


def proof_from_trace(bundle: ReductionBundle, trace: Sequence[str]) -> FProof:
    """Certify a halting run as a focused proof of the goal.

    The trace must list exactly the instructions of the machine's complete
    run from the bundle's initial configuration; any deviation raises
    :class:`TraceMismatch`.  An empty trace — the machine starting in the
    halting configuration — is rejected with :class:`ValueError`, because
    that one halting case has no derivable goal: the proof must fire at
    least the halt element.
    """
    if not trace:
        raise ValueError("cannot certify an empty trace")
    m = bundle.machine
    target = halting_config(m)
    fired: list[Entry] = []
    c = bundle.init
    for i, name in enumerate(trace):
        if c == target:
            raise TraceMismatch(f"trace continues past the halting configuration at step {i}")
        e = fired_entry(m, c)
        if e is None:
            raise TraceMismatch(f"machine is stuck before step {i}, but the trace continues")
        if e.instruction != name:
            raise TraceMismatch(f"step {i} fires {e.instruction!r}, trace says {name!r}")
        fired.append(e)
        _, c = step(m, c)
    if c != target:
        raise TraceMismatch("trace stops before the halting configuration")
    tail = ["a"] * bundle.init.a + ["b"] * bundle.init.b + ["s"]
    return _Builder(bundle).running(FSequent(bundle.goal), tail, fired)


def trace_from_proof(bundle: ReductionBundle, proof: FProof) -> tuple[str, ...]:
    """Read the instruction sequence back out of a checked certificate.

    Every udecide in a certificate for an encoded goal focuses some table
    element; those carrying machine entries yield their mnemonics, the
    three draining helpers are bookkeeping and yield nothing.  The steps of
    a run cannot spread over parallel branches — each one consumes the
    unique state atom — so the mnemonics concatenate along a single spine.
    """
    sig = bundle.signature
    wrapped = [Qm(LABEL_INF, f) for f in bundle.table]
    names: list[str | None] = [e.instruction for e in bundle.machine.entries]
    names += [None] * (len(bundle.table) - len(names))

    def walk(fseq: FSequent, node: FProof) -> list[str]:
        here: list[str] = []
        if node.rule == UDECIDE:
            f = fseq.context[node.principal]
            try:
                j = wrapped.index(f)
            except ValueError:
                raise MalformedCertificate(
                    "udecide focuses a formula outside the instruction table"
                ) from None
            if names[j] is not None:
                here.append(names[j])
        branches = [
            walk(prem, sub)
            for prem, sub in zip(fpremises_of(sig, fseq, node), node.premises)
        ]
        tails = [b for b in branches if b]
        if len(tails) > 1:
            raise MalformedCertificate("instruction steps spread across parallel branches")
        return here + (tails[0] if tails else [])

    try:
        out = walk(FSequent(bundle.goal), proof)
    except CheckError as e:
        raise MalformedCertificate(f"not a certificate for this goal: {e}") from None
    if not out or out[-1] != HALT:
        raise MalformedCertificate("certificate never fires a halt instruction")
    return tuple(out)

"""Bounded proof search in the focused calculus.

The search runs the focusing discipline directly: with no focus it applies
the leftmost invertible rule (those never need backtracking), and once the
context is neutral it tries each decide flavour in a fixed order — ldecide,
then udecide, then decide, positions left to right.  Under focus the rules
are forced except for plus (two candidates) and tensor, which copies every
unbounded question-marked formula to both premises and enumerates subsets
of the remaining formulas for the left premise.

Because udecide keeps its formula, proofs can regress forever; the search
is made terminating by a per-branch cap on decides, deepened iteratively
from zero so the first proof found uses as few decides along any branch as
possible.  A failure memo keyed on canonical sequents makes the repeated
rounds cheap.  Everything is deterministic: the same call yields the same
certificate.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .errors import CheckError
from .focusing import (
    BLUR,
    DECIDE,
    FBANG,
    FINIT,
    FONE,
    FPLUS1,
    FPLUS2,
    FTENSOR,
    LDECIDE,
    UDECIDE,
    FProof,
    FSequent,
    fpremise_plans,
    fpremises_of,
    is_neutral_formula,
)
from .formulas import (
    Atom,
    Bang,
    Bot,
    NegAtom,
    One,
    Par,
    Plus,
    Polarity,
    Qm,
    Tensor,
    Top,
    With,
    Zero,
    formula_key,
    polarity,
)
from .signatures import Signature, is_unbounded, leq
from .unfocused import BOT_RULE, PAR, TOP_RULE, WITH, validate_labels


@dataclass(slots=True)
class SearchStats:
    nodes: int = 0
    deepest_decides: int = 0
    rounds: int = 0


@dataclass(frozen=True, slots=True)
class Proved:
    proof: FProof
    stats: SearchStats


@dataclass(frozen=True, slots=True)
class Exhausted:
    """No proof within budget.

    ``complete`` means every branch failed outright, so no budget increase
    could help; otherwise the decide cap or the node cap stopped the search.
    """

    stats: SearchStats
    complete: bool
    hit_node_cap: bool = False


SearchResult = Proved | Exhausted


class _NodeCap(Exception):
    pass


def prove_focused(
    sig: Signature,
    goal: FSequent,
    *,
    max_decides: int,
    max_nodes: int = 500_000,
    use_memo: bool = True,
) -> SearchResult:
    validate_labels(sig, goal.context)
    if goal.focus is not None:
        validate_labels(sig, (goal.focus,))
    stats = SearchStats()
    searcher = _Searcher(sig, stats, max_nodes, use_memo)
    try:
        for cap in range(max_decides + 1):
            stats.rounds += 1
            proof, cutoff = searcher.search(goal, cap, 0)
            if proof is not None:
                return Proved(proof, stats)
            if not cutoff:
                return Exhausted(stats, complete=True)
        return Exhausted(stats, complete=False)
    except _NodeCap:
        return Exhausted(stats, complete=False, hit_node_cap=True)


def _canonical(fseq: FSequent):
    ctx_key = tuple(sorted(formula_key(f) for f in fseq.context))
    focus_key = None if fseq.focus is None else formula_key(fseq.focus)
    return ctx_key, focus_key


class _Searcher:
    def __init__(self, sig: Signature, stats: SearchStats, max_nodes: int, use_memo: bool):
        self.sig = sig
        self.stats = stats
        self.max_nodes = max_nodes
        # canonical sequent -> (largest decide budget that failed, whether a
        # budget cutoff occurred inside that failed search)
        self.failed: dict | None = {} if use_memo else None

    def search(self, fseq: FSequent, budget: int, used: int) -> tuple[FProof | None, bool]:
        self.stats.nodes += 1
        if self.stats.nodes > self.max_nodes:
            raise _NodeCap
        if used > self.stats.deepest_decides:
            self.stats.deepest_decides = used

        key = None
        if self.failed is not None and (fseq.focus is not None or _all_neutral(fseq.context)):
            key = _canonical(fseq)
            hit = self.failed.get(key)
            if hit is not None and budget <= hit[0]:
                return None, hit[1]

        if fseq.focus is None:
            proof, cutoff = self._unfocused(fseq, budget, used)
        else:
            proof, cutoff = self._focused(fseq, budget, used)

        if proof is None and key is not None:
            hit = self.failed.get(key)
            if hit is None or hit[0] < budget:
                self.failed[key] = (budget, cutoff)
        return proof, cutoff

    def _expand(
        self, fseq: FSequent, head: FProof, budget: int, used: int
    ) -> tuple[FProof | None, bool]:
        """Search every premise of one rule application."""
        subs = []
        for prem in fpremises_of(self.sig, fseq, head):
            sub, cutoff = self.search(prem, budget, used)
            if sub is None:
                return None, cutoff
            subs.append(sub)
        return replace(head, premises=tuple(subs)), False

    def _unfocused(self, fseq: FSequent, budget: int, used: int) -> tuple[FProof | None, bool]:
        ctx = fseq.context
        for i, f in enumerate(ctx):
            if is_neutral_formula(f):
                continue
            match f:
                case Top():
                    return FProof(TOP_RULE, principal=i), False
                case Par():
                    return self._expand(fseq, FProof(PAR, principal=i), budget, used)
                case Bot():
                    return self._expand(fseq, FProof(BOT_RULE, principal=i), budget, used)
                case With():
                    return self._expand(fseq, FProof(WITH, principal=i), budget, used)
            raise AssertionError(f"non-neutral formula unhandled: {f!r}")

        # neutral: decide, spending one unit of budget
        cands = self._decide_candidates(ctx)
        if not cands:
            return None, False
        if budget == 0:
            return None, True
        any_cutoff = False
        for head in cands:
            proof, cutoff = self._expand(fseq, head, budget - 1, used + 1)
            if proof is not None:
                return proof, False
            any_cutoff = any_cutoff or cutoff
        return None, any_cutoff

    def _decide_candidates(self, ctx) -> list[FProof]:
        cands = []
        for i, f in enumerate(ctx):
            if isinstance(f, Qm) and not is_unbounded(self.sig, f.label):
                cands.append(FProof(LDECIDE, principal=i))
        for i, f in enumerate(ctx):
            if isinstance(f, Qm) and is_unbounded(self.sig, f.label):
                cands.append(FProof(UDECIDE, principal=i))
        for i, f in enumerate(ctx):
            if polarity(f) is not Polarity.POSITIVE:
                continue
            if isinstance(f, Zero):
                continue  # no rule can act on a focused zero
            if isinstance(f, Atom) and not any(
                isinstance(g, NegAtom) and g.name == f.name
                for j, g in enumerate(ctx)
                if j != i
            ):
                continue  # focusing an atom only ever ends in finit
            cands.append(FProof(DECIDE, principal=i))
        return cands

    def _focused(self, fseq: FSequent, budget: int, used: int) -> tuple[FProof | None, bool]:
        ctx = fseq.context
        match fseq.focus:
            case Atom(name=name):
                for i, g in enumerate(ctx):
                    if isinstance(g, NegAtom) and g.name == name:
                        head = FProof(FINIT, principal=i)
                        if self._valid(fseq, head):
                            return head, False
                return None, False
            case One():
                head = FProof(FONE)
                return (head, False) if self._valid(fseq, head) else (None, False)
            case Zero():
                return None, False
            case Plus():
                any_cutoff = False
                for rule in (FPLUS1, FPLUS2):
                    proof, cutoff = self._expand(fseq, FProof(rule), budget, used)
                    if proof is not None:
                        return proof, False
                    any_cutoff = any_cutoff or cutoff
                return None, any_cutoff
            case Tensor():
                kept = tuple(
                    i
                    for i, g in enumerate(ctx)
                    if isinstance(g, Qm) and is_unbounded(self.sig, g.label)
                )
                rest = [i for i in range(len(ctx)) if i not in kept]
                any_cutoff = False
                for mask in range(1 << len(rest)):
                    split = tuple(i for b, i in enumerate(rest) if mask >> b & 1)
                    head = FProof(FTENSOR, split=split, kept=kept)
                    proof, cutoff = self._expand(fseq, head, budget, used)
                    if proof is not None:
                        return proof, False
                    any_cutoff = any_cutoff or cutoff
                return None, any_cutoff
            case Bang(label=label):
                kept = tuple(
                    i
                    for i, g in enumerate(ctx)
                    if isinstance(g, Qm) and leq(self.sig, label, g.label)
                )
                head = FProof(FBANG, kept=kept)
                if not self._valid(fseq, head):
                    return None, False
                return self._expand(fseq, head, budget, used)
            case _:
                # negative focus: release it and resume the invertible phase
                return self._expand(fseq, FProof(BLUR), budget, used)

    def _valid(self, fseq: FSequent, head: FProof) -> bool:
        try:
            fpremise_plans(self.sig, fseq, head)
        except CheckError:
            return False
        return True


def _all_neutral(ctx) -> bool:
    return all(is_neutral_formula(f) for f in ctx)

"""The unfocused one-sided sequent calculus and its certificate checker.

A certificate is a tree of rule applications that addresses the conclusion
context positionally, so checking is deterministic: every node determines
its premise contexts exactly.  The same premise computation
(:func:`premise_plans` / :func:`premises_of`) also drives the bounded proof
search used as a test oracle and the positional bookkeeping needed to
re-index proofs under context permutations.

Rule tags::

    init      closes exactly  |- a, ~a
    one       closes exactly  |- 1
    top       closes any context at a top occurrence
    tensor    splits the rest of the context between the two subformulas
    plus1/2   picks a disjunct
    par       replaces (A | B) by A, B
    bot       deletes a bot
    with      duplicates the context into both premises
    qm        strips one question-mark prefix (any label)
    bang      promotion: every other formula must be ?v with u <= v
    weak      deletes ?u A, only for unbounded u
    contr     duplicates ?u A (copy inserted adjacently), only for unbounded u
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterator

from .errors import CheckError, Reason, UnknownLabel
from .formulas import (
    Atom,
    Bang,
    Bot,
    Context,
    Formula,
    NegAtom,
    ONE,
    Par,
    Plus,
    Qm,
    Sequent,
    Tensor,
    Top,
    With,
    canonical,
    labels_of,
)
from .signatures import Signature, is_unbounded, leq

INIT = "init"
TENSOR = "tensor"
ONE_RULE = "one"
PLUS1 = "plus1"
PLUS2 = "plus2"
PAR = "par"
BOT_RULE = "bot"
WITH = "with"
TOP_RULE = "top"
QM = "qm"
BANG = "bang"
WEAK = "weak"
CONTR = "contr"

ARITY = {
    INIT: 0,
    ONE_RULE: 0,
    TOP_RULE: 0,
    TENSOR: 2,
    WITH: 2,
    PLUS1: 1,
    PLUS2: 1,
    PAR: 1,
    BOT_RULE: 1,
    QM: 1,
    BANG: 1,
    WEAK: 1,
    CONTR: 1,
}


@dataclass(frozen=True, slots=True)
class UProof:
    """One node of an unfocused certificate.

    ``principal`` is the context position the rule acts on; ``init`` instead
    records ``pair = (atom position, negated-atom position)``; ``tensor``
    additionally records ``split``, the positions sent to the left premise.
    """

    rule: str
    principal: int | None = None
    pair: tuple[int, int] | None = None
    split: tuple[int, ...] | None = None
    premises: tuple["UProof", ...] = ()


# A premise "plan" describes each premise slot as a source in the conclusion:
#   ("keep", i)     the formula at position i, unchanged
#   ("part", i, k)  immediate subformula k of the formula at i (0=left/body)
#   ("copy", i)     a contraction duplicate of the formula at i
Source = tuple
Plan = list


def _part(f: Formula, k: int) -> Formula:
    match f:
        case Tensor(a, b) | Plus(a, b) | Par(a, b) | With(a, b):
            return a if k == 0 else b
        case Bang(_, body) | Qm(_, body):
            return body
    raise ValueError(f"formula has no part {k}: {f!r}")


def resolve(ctx: Context, src: Source) -> Formula:
    if src[0] == "part":
        return _part(ctx[src[1]], src[2])
    return ctx[src[1]]


def materialize(ctx: Context, plan: Plan) -> Context:
    return tuple(resolve(ctx, src) for src in plan)


def _fail(reason: Reason, message: str):
    raise CheckError(reason, message)


def premise_plans(sig: Signature, ctx: Context, node: UProof) -> list[Plan]:
    """Validate one rule application and lay out its premise contexts.

    Raises :class:`CheckError` (with an empty path; the recursive checker
    fills it in) when the node does not apply to ``ctx``.
    """
    n = len(ctx)
    rule = node.rule
    if rule not in ARITY:
        _fail(Reason.CONTEXT_MISMATCH, f"unknown rule tag {rule!r}")

    def principal() -> Formula:
        p = node.principal
        if p is None or not 0 <= p < n:
            _fail(Reason.CONTEXT_MISMATCH, f"position {p} out of range for context of {n}")
        return ctx[p]

    keeps = lambda it: [("keep", i) for i in it]

    match rule:
        case "init":
            if node.pair is None:
                _fail(Reason.CONTEXT_MISMATCH, "init needs an (atom, negation) position pair")
            i, j = node.pair
            if n != 2 or {i, j} != {0, 1}:
                _fail(Reason.CONTEXT_MISMATCH, "init closes exactly a two-formula context")
            a, b = ctx[i], ctx[j]
            if not (isinstance(a, Atom) and isinstance(b, NegAtom) and a.name == b.name):
                _fail(Reason.CONTEXT_MISMATCH, "init needs an atom facing its negation")
            return []
        case "one":
            if n != 1 or ctx[0] != ONE:
                _fail(Reason.CONTEXT_MISMATCH, "the unit rule closes exactly |- 1")
            return []
        case "top":
            if not isinstance(principal(), Top):
                _fail(Reason.CONTEXT_MISMATCH, "principal formula is not top")
            return []
        case "par":
            p = node.principal
            if not isinstance(principal(), Par):
                _fail(Reason.CONTEXT_MISMATCH, "principal formula is not a par")
            return [keeps(range(p)) + [("part", p, 0), ("part", p, 1)] + keeps(range(p + 1, n))]
        case "bot":
            p = node.principal
            if not isinstance(principal(), Bot):
                _fail(Reason.CONTEXT_MISMATCH, "principal formula is not bot")
            return [keeps(i for i in range(n) if i != p)]
        case "with":
            p = node.principal
            if not isinstance(principal(), With):
                _fail(Reason.CONTEXT_MISMATCH, "principal formula is not a with")
            side = lambda k: keeps(range(p)) + [("part", p, k)] + keeps(range(p + 1, n))
            return [side(0), side(1)]
        case "plus1" | "plus2":
            p = node.principal
            if not isinstance(principal(), Plus):
                _fail(Reason.CONTEXT_MISMATCH, "principal formula is not a plus")
            k = 0 if rule == "plus1" else 1
            return [keeps(range(p)) + [("part", p, k)] + keeps(range(p + 1, n))]
        case "qm":
            p = node.principal
            if not isinstance(principal(), Qm):
                _fail(Reason.CONTEXT_MISMATCH, "principal formula is not question-marked")
            return [keeps(range(p)) + [("part", p, 0)] + keeps(range(p + 1, n))]
        case "bang":
            p = node.principal
            f = principal()
            if not isinstance(f, Bang):
                _fail(Reason.CONTEXT_MISMATCH, "principal formula is not banged")
            for i in range(n):
                if i == p:
                    continue
                g = ctx[i]
                if not isinstance(g, Qm) or not leq(sig, f.label, g.label):
                    _fail(
                        Reason.PROMOTION_BLOCKED,
                        f"promotion of !{f.label} over a context formula that is not "
                        f"question-marked at a label above {f.label!r}",
                    )
            return [keeps(range(p)) + [("part", p, 0)] + keeps(range(p + 1, n))]
        case "weak":
            p = node.principal
            f = principal()
            if not isinstance(f, Qm):
                _fail(Reason.CONTEXT_MISMATCH, "weakening needs a question-marked formula")
            if not is_unbounded(sig, f.label):
                _fail(Reason.STRUCTURAL_ON_BOUNDED, f"label {f.label!r} does not admit weakening")
            return [keeps(i for i in range(n) if i != p)]
        case "contr":
            p = node.principal
            f = principal()
            if not isinstance(f, Qm):
                _fail(Reason.CONTEXT_MISMATCH, "contraction needs a question-marked formula")
            if not is_unbounded(sig, f.label):
                _fail(Reason.STRUCTURAL_ON_BOUNDED, f"label {f.label!r} does not admit contraction")
            return [keeps(range(p + 1)) + [("copy", p)] + keeps(range(p + 1, n))]
        case "tensor":
            p = node.principal
            f = principal()
            if not isinstance(f, Tensor):
                _fail(Reason.CONTEXT_MISMATCH, "principal formula is not a tensor")
            if node.split is None:
                _fail(Reason.CONTEXT_MISMATCH, "tensor needs a split")
            split = set(node.split)
            if len(split) != len(node.split):
                _fail(Reason.CONTEXT_MISMATCH, "tensor split repeats a position")
            others = set(range(n)) - {p}
            if not split <= others:
                _fail(Reason.CONTEXT_MISMATCH, "tensor split positions out of range")
            left = sorted(split | {p})
            right = sorted((others - split) | {p})
            plan = lambda poss, k: [("part", p, k) if i == p else ("keep", i) for i in poss]
            return [plan(left, 0), plan(right, 1)]
    raise AssertionError  # unreachable


def premises_of(sig: Signature, ctx: Context, node: UProof) -> tuple[Context, ...]:
    return tuple(materialize(ctx, plan) for plan in premise_plans(sig, ctx, node))


def validate_labels(sig: Signature, ctx: Context) -> None:
    for f in ctx:
        for u in labels_of(f):
            if u not in sig.labels:
                raise UnknownLabel(f"label {u!r} is not declared in the signature")


def check_unfocused(sig: Signature, goal: Sequent, proof: UProof) -> None:
    """Accept or reject a certificate; raises :class:`CheckError` to reject."""
    validate_labels(sig, goal.context)
    _check(sig, goal.context, proof, ())


def _check(sig: Signature, ctx: Context, node: UProof, path: tuple[int, ...]) -> None:
    try:
        plans = premise_plans(sig, ctx, node)
    except CheckError as e:
        raise CheckError(e.reason, e.message, path) from None
    if len(node.premises) != len(plans):
        raise CheckError(
            Reason.ARITY_MISMATCH,
            f"{node.rule} expects {len(plans)} premise(s), certificate has {len(node.premises)}",
            path,
        )
    for k, (plan, sub) in enumerate(zip(plans, node.premises)):
        _check(sig, materialize(ctx, plan), sub, path + (k,))


# --- proof statistics -------------------------------------------------------

def proof_size(proof: UProof) -> int:
    return 1 + sum(proof_size(p) for p in proof.premises)


def count_rule(proof: UProof, rule: str) -> int:
    own = 1 if proof.rule == rule else 0
    return own + sum(count_rule(p, rule) for p in proof.premises)


# --- bounded search (test oracle) ------------------------------------------

def search_unfocused(
    sig: Signature,
    goal: Sequent,
    *,
    max_rules: int,
    max_contractions: int,
) -> UProof | None:
    """Exhaustive bounded search over the unfocused rules.

    The budget counts total rule applications in the emitted tree, with a
    separate global cap on contractions.  Returning ``None`` means no proof
    exists within the budget — not that the sequent is unprovable.  This is
    a test oracle: the search enumerates every applicable rule (including
    all tensor splits) and only prunes branches that provably cannot matter:
    repeated states known to fail at an equal or larger budget, moves whose
    premises coincide with an already-tried move of the same rule, and
    branches that revisit an ancestor's context — budgets only shrink on the
    way down, so any proof below such a repeat has a smaller cycle-free
    counterpart that the enumeration reaches anyway.

    The contraction cap is explored in tiers 0, 1, ..., ``max_contractions``:
    a proof using c contractions is found at tier c, so the set of goals with
    some proof inside the budget is unchanged, but goals with thrifty proofs
    never pay for the contraction-heavy part of the space.  Failure records
    carry the budget they were established at, so one cache serves all tiers.
    """
    validate_labels(sig, goal.context)
    fails: dict = {}
    for cap in range(max_contractions + 1):
        for proof, _rules, _contr in _derivations(
            sig, goal.context, max_rules, cap, fails, {}, 0, [_FAR]
        ):
            return proof
    return None


def _moves(sig: Signature, ctx: Context, contr_left: int) -> Iterator[tuple[UProof, int]]:
    """All rule applications at ``ctx``, deterministically ordered."""
    n = len(ctx)
    if n == 2:
        for i, j in ((0, 1), (1, 0)):
            a, b = ctx[i], ctx[j]
            if isinstance(a, Atom) and isinstance(b, NegAtom) and a.name == b.name:
                yield UProof(INIT, pair=(i, j)), 0
    if n == 1 and ctx[0] == ONE:
        yield UProof(ONE_RULE), 0
    for p, f in enumerate(ctx):
        if isinstance(f, Top):
            yield UProof(TOP_RULE, principal=p), 0
    for p, f in enumerate(ctx):
        if isinstance(f, Bot):
            yield UProof(BOT_RULE, principal=p), 0
    for p, f in enumerate(ctx):
        if isinstance(f, Par):
            yield UProof(PAR, principal=p), 0
    for p, f in enumerate(ctx):
        if isinstance(f, With):
            yield UProof(WITH, principal=p), 0
    for p, f in enumerate(ctx):
        if isinstance(f, Plus):
            yield UProof(PLUS1, principal=p), 0
            yield UProof(PLUS2, principal=p), 0
    for p, f in enumerate(ctx):
        if isinstance(f, Qm):
            yield UProof(QM, principal=p), 0
    for p, f in enumerate(ctx):
        if isinstance(f, Bang) and all(
            isinstance(g, Qm) and leq(sig, f.label, g.label)
            for i, g in enumerate(ctx)
            if i != p
        ):
            yield UProof(BANG, principal=p), 0
    for p, f in enumerate(ctx):
        if isinstance(f, Tensor):
            others = [i for i in range(n) if i != p]
            for mask in range(1 << len(others)):
                split = tuple(others[k] for k in range(len(others)) if mask >> k & 1)
                yield UProof(TENSOR, principal=p, split=split), 0
    # structural moves come last so the first derivation found is one that
    # did not duplicate or discard anything it could avoid touching
    if contr_left > 0:
        for p, f in enumerate(ctx):
            if isinstance(f, Qm) and is_unbounded(sig, f.label):
                yield UProof(CONTR, principal=p), 1
    for p, f in enumerate(ctx):
        if isinstance(f, Qm) and is_unbounded(sig, f.label):
            yield UProof(WEAK, principal=p), 0


def _record_fail(fails: dict, key, rules_left: int, contr_left: int) -> None:
    entries = fails.setdefault(key, [])
    for rl, cl in entries:
        if rules_left <= rl and contr_left <= cl:
            return
    entries[:] = [(rl, cl) for rl, cl in entries if not (rl <= rules_left and cl <= contr_left)]
    entries.append((rules_left, contr_left))


_FAR = 10**9  # deeper than any path can reach


def _derivations(
    sig: Signature,
    ctx: Context,
    rules_left: int,
    contr_left: int,
    fails: dict,
    path: dict,
    depth: int,
    low: list,
) -> Iterator[tuple[UProof, int, int]]:
    """Yield (proof, rules used, contractions used) for every cycle-free
    derivation of ``ctx`` within the budget, in deterministic order.

    ``path`` maps each ancestor context of this premise to its depth.
    Meeting one again is pruned: budgets only shrink downward, so any
    derivation through the repeat has a smaller repeat-free counterpart
    that the enumeration reaches anyway.  It must not be one shared mutable
    mapping — sibling premises are enumerated while this generator sits
    suspended at a yield, and they may legitimately share a context with us.

    ``low`` is the caller's accumulator for the shallowest ancestor any
    cycle prune pointed at.  An exhausted subtree may cache its failure
    only when every prune inside it pointed at this node or deeper: such
    cycles close within the subtree, where the shortening argument applies,
    so the exhaustion is genuine.  A prune aimed above this node means some
    branch was cut for a reason that holds only on this particular path,
    and the verdict cannot be reused elsewhere.
    """
    mylow = [_FAR]
    try:
        if rules_left <= 0:
            return
        key = canonical(ctx)
        for rl, cl in fails.get(key, ()):
            if rules_left <= rl and contr_left <= cl:
                return
        seen_at = path.get(key)
        if seen_at is not None:
            mylow[0] = seen_at
            return
        below = {**path, key: depth}
        yielded = False
        seen: set = set()
        for head, ccost in _moves(sig, ctx, contr_left):
            prems = premises_of(sig, ctx, head)
            dedup = (head.rule, tuple(canonical(p) for p in prems))
            if dedup in seen:
                continue
            seen.add(dedup)
            if not prems:
                yielded = True
                yield head, 1, ccost
            elif len(prems) == 1:
                for sub, r, c in _derivations(
                    sig, prems[0], rules_left - 1, contr_left - ccost, fails, below, depth + 1, mylow
                ):
                    yielded = True
                    yield replace(head, premises=(sub,)), 1 + r, ccost + c
            else:
                # the right premise has the most budget when the left is
                # smallest; if even that fails, skip the whole product
                probe = _derivations(
                    sig, prems[1], rules_left - 2, contr_left - ccost, fails, below, depth + 1, mylow
                )
                if next(probe, None) is None:
                    continue
                probe.close()
                for s1, r1, c1 in _derivations(
                    sig, prems[0], rules_left - 2, contr_left - ccost, fails, below, depth + 1, mylow
                ):
                    for s2, r2, c2 in _derivations(
                        sig,
                        prems[1],
                        rules_left - 1 - r1,
                        contr_left - ccost - c1,
                        fails,
                        below,
                        depth + 1,
                        mylow,
                    ):
                        yielded = True
                        yield replace(head, premises=(s1, s2)), 1 + r1 + r2, ccost + c1 + c2
        if not yielded and mylow[0] >= depth:
            _record_fail(fails, key, rules_left, contr_left)
    finally:
        # fold into the caller even when abandoned mid-way: our prunes
        # happened inside the caller's subtree too
        if mylow[0] < low[0]:
            low[0] = mylow[0]


# --- positional re-indexing -------------------------------------------------

def _translate(src: Source, inv: list[int]) -> Source:
    if src[0] == "part":
        return ("part", inv[src[1]], src[2])
    return (src[0], inv[src[1]])


def permute_proof(sig: Signature, ctx: Context, proof: UProof, perm: tuple[int, ...]) -> UProof:
    """Re-index ``proof`` so it checks against the permuted context
    ``tuple(ctx[p] for p in perm)``.

    ``perm`` lists, for each new position, the old position it draws from.
    The premise-plan sources let each premise's induced permutation be read
    off mechanically, so the transformation works for arbitrary certificates.
    """
    n = len(ctx)
    inv = [0] * n
    for new, old in enumerate(perm):
        inv[old] = new
    new_ctx = tuple(ctx[p] for p in perm)
    head = replace(proof, premises=())
    new_head = replace(
        head,
        principal=None if proof.principal is None else inv[proof.principal],
        pair=None if proof.pair is None else (inv[proof.pair[0]], inv[proof.pair[1]]),
        split=None if proof.split is None else tuple(sorted(inv[i] for i in proof.split)),
    )
    old_plans = premise_plans(sig, ctx, head)
    new_plans = premise_plans(sig, new_ctx, new_head)
    new_premises = []
    for k, sub in enumerate(proof.premises):
        translated = [_translate(src, inv) for src in old_plans[k]]
        slot_of = {src: j for j, src in enumerate(translated)}
        sub_perm = tuple(slot_of[src] for src in new_plans[k])
        old_prem = materialize(ctx, old_plans[k])
        new_premises.append(permute_proof(sig, old_prem, sub, sub_perm))
    return replace(new_head, premises=tuple(new_premises))

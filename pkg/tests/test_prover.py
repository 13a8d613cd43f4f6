import random

import pytest
from hypothesis import given, settings, strategies as st

from selogic.corpus import load_corpus
from selogic.focusing import FSequent, check_focused
from selogic.generators import random_context, random_signature
from selogic.minsky import Halted, run
from selogic.parsing import parse_sequent
from selogic.prover import Exhausted, Proved, prove_focused
from selogic.reduction import encode_halting

# max_decides per corpus goal: trace length plus the register sum at the
# halt step plus three, a bound the canonical certificates stay inside
HALTING_BUDGETS = {
    "halt_only": 4,
    "incra_halt": 6,
    "incrb_halt": 6,
    "gated_zero": 5,
    "drain_a": 8,
    "drain_b": 8,
    "transfer_ab": 11,
}


def fgoal(text):
    return FSequent(parse_sequent(text).context)


def test_tiny_sequents(sig):
    out = prove_focused(sig, fgoal("|- x, ~x"), max_decides=1)
    assert isinstance(out, Proved)
    check_focused(sig, fgoal("|- x, ~x"), out.proof)

    out = prove_focused(sig, fgoal("|- x, ~y"), max_decides=4)
    assert isinstance(out, Exhausted)
    assert out.complete


def test_exhausted_complete_means_no_budget_will_help(sig):
    out = prove_focused(sig, fgoal("|- x, x"), max_decides=2)
    assert isinstance(out, Exhausted) and out.complete
    again = prove_focused(sig, fgoal("|- x, x"), max_decides=9)
    assert isinstance(again, Exhausted) and again.complete


def test_determinism(sig):
    goal = fgoal("|- (x * (y + 1)), ~x, ?inf ~y")
    a = prove_focused(sig, goal, max_decides=4)
    b = prove_focused(sig, goal, max_decides=4)
    assert isinstance(a, Proved) and isinstance(b, Proved)
    assert a.proof == b.proof


def test_budget_monotonicity(sig):
    goal = fgoal("|- (x * (y + 1)), ~x, ?inf ~y")
    small = prove_focused(sig, goal, max_decides=4)
    big = prove_focused(sig, goal, max_decides=9)
    assert isinstance(small, Proved) and isinstance(big, Proved)
    # iterative deepening revisits the same rounds, so the found proof agrees
    assert small.proof == big.proof


def test_node_cap_reports_incompleteness(sig):
    goal = fgoal("|- (x * (y + 1)), ~x, ?inf ~y")
    out = prove_focused(sig, goal, max_decides=6, max_nodes=3)
    assert isinstance(out, Exhausted)
    assert out.hit_node_cap and not out.complete


def test_memo_does_not_change_the_verdict(sig):
    for text in ("|- x, ~x", "|- ?inf ~x, (x * x)", "|- !u x, ~x"):
        goal = fgoal(text)
        with_memo = prove_focused(sig, goal, max_decides=5)
        without = prove_focused(sig, goal, max_decides=5, use_memo=False)
        assert type(with_memo) is type(without)
        if isinstance(with_memo, Proved):
            assert with_memo.proof == without.proof


@pytest.mark.parametrize("name,budget", sorted(HALTING_BUDGETS.items()))
def test_halting_corpus_goals_are_proved(name, budget):
    m, init = load_corpus(name)
    bundle = encode_halting(m, init)
    out = prove_focused(bundle.signature, FSequent(bundle.goal), max_decides=budget)
    assert isinstance(out, Proved), name
    check_focused(bundle.signature, FSequent(bundle.goal), out.proof)
    # the cap bounds decides per branch, not in the whole tree
    assert out.stats.deepest_decides <= budget


@pytest.mark.parametrize("name", ["loop", "gated_one"])
def test_diverging_goals_exhaust_within_the_cap(name):
    m, init = load_corpus(name)
    bundle = encode_halting(m, init)
    out = prove_focused(bundle.signature, FSequent(bundle.goal), max_decides=12)
    assert isinstance(out, Exhausted), name
    assert not out.hit_node_cap


def test_stuck_goal_is_definitively_unprovable():
    m, init = load_corpus("stuck")
    bundle = encode_halting(m, init)
    out = prove_focused(bundle.signature, FSequent(bundle.goal), max_decides=8)
    assert isinstance(out, Exhausted)
    assert out.complete


def test_already_halted_goal_is_definitively_unprovable():
    # the run halts with an empty trace, yet the goal has no proof: the
    # encoding can only finish by firing a halt entry at least once
    m, init = load_corpus("already_halted")
    bundle = encode_halting(m, init)
    assert run(m, init, max_steps=10) == Halted(())
    out = prove_focused(bundle.signature, FSequent(bundle.goal), max_decides=8)
    assert isinstance(out, Exhausted)
    assert out.complete


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_proofs_always_check(seed):
    rng = random.Random(seed)
    s = random_signature(rng)
    goal = FSequent(random_context(rng, s))
    out = prove_focused(s, goal, max_decides=6, max_nodes=60_000)
    if isinstance(out, Proved):
        check_focused(s, goal, out.proof)
        assert out.stats.deepest_decides <= 6

import pytest

from selogic.errors import UnknownLabel, UpwardClosureViolation
from selogic.signatures import close_signature, is_identifier, is_unbounded, leq


def test_order_is_reflexive_and_transitive():
    s = close_signature(("a", "b", "c"), (), (("a", "b"), ("b", "c")))
    for u in ("a", "b", "c"):
        assert leq(s, u, u)
    assert leq(s, "a", "c")
    assert not leq(s, "c", "a")


def test_undeclared_labels_are_rejected():
    with pytest.raises(UnknownLabel):
        close_signature(("a",), ("b",), ())
    with pytest.raises(UnknownLabel):
        close_signature(("a",), (), (("a", "b"),))
    with pytest.raises(UnknownLabel):
        close_signature(("a", "B"), (), ())


def test_unbounded_set_must_be_upward_closed():
    with pytest.raises(UpwardClosureViolation):
        close_signature(("a", "b"), ("a",), (("a", "b"),))
    # closure through a chain, not just a declared pair
    with pytest.raises(UpwardClosureViolation):
        close_signature(("a", "b", "c"), ("a",), (("a", "b"), ("b", "c")))
    # fine once everything above is unbounded too
    s = close_signature(("a", "b"), ("a", "b"), (("a", "b"),))
    assert is_unbounded(s, "a") and is_unbounded(s, "b")


def test_leq_rejects_unknown_labels():
    s = close_signature(("a",), (), ())
    with pytest.raises(UnknownLabel):
        leq(s, "a", "z")
    with pytest.raises(UnknownLabel):
        is_unbounded(s, "z")


def test_is_identifier():
    assert is_identifier("abc_1")
    assert is_identifier("_x")
    assert not is_identifier("")
    assert not is_identifier("1a")
    assert not is_identifier("A")
    assert not is_identifier("a-b")

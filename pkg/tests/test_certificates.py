import pytest

from selogic.certificates import (
    parse_focused_proof,
    parse_unfocused_proof,
    print_focused_proof,
    print_unfocused_proof,
)
from selogic.corpus import load_corpus
from selogic.errors import ParseError
from selogic.focusing import DECIDE, FINIT, FProof, FSequent, FTENSOR, check_focused, defocus
from selogic.formulas import Sequent
from selogic.minsky import run
from selogic.reduction import encode_halting, proof_from_trace
from selogic.unfocused import INIT, TENSOR, UProof, check_unfocused


FIN0 = FProof(FINIT, principal=0)


def test_pinned_focused_text():
    proof = FProof(DECIDE, principal=0, premises=(FIN0,))
    assert print_focused_proof(proof) == "(decide 0 (finit 0))\n"


def test_pinned_ftensor_text():
    pair = FProof(FTENSOR, kept=(), split=(0,), premises=(FIN0, FIN0))
    proof = FProof(DECIDE, principal=0, premises=(pair,))
    assert print_focused_proof(proof) == "(decide 0 (ftensor (kept) (left 0) (finit 0) (finit 0)))\n"


def test_pinned_unfocused_text():
    leaf = UProof(INIT, pair=(0, 1))
    proof = UProof(TENSOR, principal=0, split=(1,), premises=(leaf, leaf))
    assert print_unfocused_proof(proof) == "(tensor 0 (left 1) (init 0 1) (init 0 1))\n"


def test_parse_ignores_comments_and_whitespace():
    text = """
    ; a certificate with commentary
    (decide 0
       ; the axiom closes immediately
       (finit 0))  ; done
    """
    assert parse_focused_proof(text) == FProof(DECIDE, principal=0, premises=(FIN0,))


def test_parse_is_inverse_of_print_on_small_proofs():
    texts = [
        "(init 0 1)\n",
        "(one)\n",
        "(top 2)\n",
        "(contr 1 (qm 2 (weak 0 (init 0 1))))\n",
        "(with 0 (plus1 0 (init 0 1)) (plus2 0 (init 0 1)))\n",
        "(tensor 1 (left 0) (init 0 1) (bang 0 (one)))\n",
    ]
    for text in texts:
        assert print_unfocused_proof(parse_unfocused_proof(text)) == text
    ftexts = [
        "(f1)\n",
        "(udecide 1 (blur (par 0 (ldecide 0 (finit 0)))))\n",
        "(fbang (kept 0 2) (fplus2 (blur (bot 1 (decide 0 (finit 0))))))\n",
    ]
    for text in ftexts:
        assert print_focused_proof(parse_focused_proof(text)) == text


# The bundled machines whose runs halt with at least one step; their
# synthesized certificates exercise every rule the printers emit.
HALTING = ["halt_only", "incra_halt", "incrb_halt", "gated_zero", "drain_a", "drain_b", "transfer_ab"]


@pytest.fixture(scope="module")
def corpus_proofs():
    out = {}
    for name in HALTING:
        m, init = load_corpus(name)
        trace = run(m, init, 200).trace
        bundle = encode_halting(m, init)
        fp = proof_from_trace(bundle, trace)
        up = defocus(fp, bundle.signature, FSequent(bundle.goal))
        out[name] = (bundle, fp, up)
    return out


@pytest.mark.parametrize("name", HALTING)
def test_focused_roundtrip_on_corpus(name, corpus_proofs):
    bundle, fp, _ = corpus_proofs[name]
    text = print_focused_proof(fp)
    again = parse_focused_proof(text)
    assert again == fp
    assert print_focused_proof(again) == text
    check_focused(bundle.signature, FSequent(bundle.goal), again)


@pytest.mark.parametrize("name", HALTING)
def test_unfocused_roundtrip_on_corpus(name, corpus_proofs):
    bundle, _, up = corpus_proofs[name]
    text = print_unfocused_proof(up)
    again = parse_unfocused_proof(text)
    assert again == up
    assert print_unfocused_proof(again) == text
    check_unfocused(bundle.signature, Sequent(bundle.goal), again)


@pytest.mark.parametrize("name", HALTING)
def test_rendered_lines_stay_inside_96_columns(name, corpus_proofs):
    _, fp, up = corpus_proofs[name]
    for text in (print_focused_proof(fp), print_unfocused_proof(up)):
        assert all(len(line) <= 96 for line in text.splitlines())


# --- rejected inputs --------------------------------------------------------


@pytest.mark.parametrize(
    "text,needle",
    [
        ("", "empty certificate"),
        ("(decide 0 (finit 0)", "unclosed parenthesis"),
        (") (finit 0)", "unmatched closing parenthesis"),
        ("(f1) (f1)", "trailing input after the certificate"),
        ("(decide 0 [finit 0])", "unexpected character '['"),
        ("finit", "expected a (rule ...) form"),
        ("(frobnicate 3)", "frobnicate: not a focused rule"),
        ("(decide x (finit 0))", "decide: expected a position number"),
        ("(decide)", "decide: too few arguments"),
        ("(fbang 0 (f1))", "fbang: expected (kept ...) with position numbers"),
        # finit never carries a kept list: leftovers are absorbed implicitly
        ("(finit (kept 1) 0)", "finit: expected a position number"),
    ],
)
def test_focused_parse_errors(text, needle):
    with pytest.raises(ParseError) as e:
        parse_focused_proof(text)
    assert needle in str(e.value)


@pytest.mark.parametrize(
    "text,needle",
    [
        ("(finit 0)", "finit: not an unfocused rule"),
        ("(tensor 0 (left 1) (init 0 1) (init 0 1) (one))", "tensor: too many arguments"),
        ("(tensor 0 (kept 1) (init 0 1) (one))", "tensor: expected (left ...) with position numbers"),
        ("(init 0 one)", "init: expected a position number"),
    ],
)
def test_unfocused_parse_errors(text, needle):
    with pytest.raises(ParseError) as e:
        parse_unfocused_proof(text)
    assert needle in str(e.value)


def test_parse_error_positions_point_at_the_offending_token():
    with pytest.raises(ParseError) as e:
        parse_focused_proof("(decide 0\n  (oops 1))")
    assert (e.value.line, e.value.column) == (2, 3)
    with pytest.raises(ParseError) as e:
        parse_focused_proof("(f1)\n(f1)")
    assert (e.value.line, e.value.column) == (2, 1)


def test_parse_error_carries_filename():
    with pytest.raises(ParseError) as e:
        parse_focused_proof("(", filename="proof.cert")
    assert str(e.value).startswith("proof.cert:1:1:")

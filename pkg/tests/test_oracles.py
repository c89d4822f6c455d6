import random

import pytest

from omegaword.buchi import format_automaton
from omegaword.congruence import (
    GrowingBlockSequence,
    PeriodicWordSequence,
    check_condition1,
    classifier,
    profile_kernel_classifier,
    validate_condition2_witness,
)
from omegaword.errors import (
    AlphabetMismatchError,
    DegenerateErasureError,
    FormatError,
    UnsupportedWordError,
)
from omegaword.oracles import (
    LassoOracle,
    NeutralUnboundedBlocksOracle,
    PrimeBlocksOracle,
    RegularOracle,
    SingletonOracle,
    UnboundedBlocksOracle,
    get_oracle,
    neutral_letter_check,
)
from omegaword.words import (
    alphabet,
    finite_word,
    parse_word,
    up_word,
)

from helpers import random_automaton

AB = alphabet("ab")
AB1 = alphabet("ab1")


def w(text):
    return parse_word(text)


class TestUnboundedBlocks:
    def test_lasso_words(self):
        u = UnboundedBlocksOracle()
        assert u.member(w("(a)^w"))
        assert u.member(w("bbb(a)^w"))
        assert not u.member(w("(ab)^w"))
        assert not u.member(w("aaaa(ba)^w"))
        assert not u.member(w("(b)^w"))

    def test_block_words(self):
        u = UnboundedBlocksOracle()
        assert u.member(w("blocks(a,b;affine 1 0)"))
        assert u.member(w("blocks(a,b;affine 2 5)"))
        assert not u.member(w("blocks(a,b;constant 3)"))
        assert not u.member(w("blocks(a,b;ep 1|2 3)"))
        # growing b-blocks cap the a-runs at zero
        assert not u.member(w("blocks(b,a;affine 1 0)"))

    def test_finite_word_unsupported(self):
        with pytest.raises(UnsupportedWordError):
            UnboundedBlocksOracle().member(finite_word("ab", AB))

    def test_embedding(self):
        u = UnboundedBlocksOracle()
        assert u.member(up_word("", "a", alphabet("a")))
        with pytest.raises(AlphabetMismatchError):
            u.member(up_word("", "ac", alphabet("abc")))


class TestNeutralUnboundedBlocks:
    def test_erasure_semantics(self):
        o = NeutralUnboundedBlocksOracle()
        assert o.member(w("(a1)^w"))
        assert o.member(w("b11(1a)^w"))
        assert not o.member(w("(ab1)^w"))
        assert not o.member(w("1(1ba)^w"))
        assert o.member(w("(a)^w"))

    def test_degenerate_erasure(self):
        o = NeutralUnboundedBlocksOracle()
        with pytest.raises(DegenerateErasureError):
            o.member(w("(1)^w"))
        with pytest.raises(DegenerateErasureError):
            o.member(w("ab(1)^w"))

    def test_block_words_with_neutral_pieces(self):
        o = NeutralUnboundedBlocksOracle()
        assert o.member(w("blocks(a,b;affine 1 0)"))
        assert o.member(w("blocks(a,1;affine 1 0)"))
        assert o.member(w("blocks(a,1;constant 2)"))
        assert o.member(w("blocks(1,a;constant 3)"))
        assert not o.member(w("blocks(1,b;constant 3)"))
        assert not o.member(w("blocks(b,1;affine 1 0)"))
        with pytest.raises(DegenerateErasureError):
            o.member(w("blocks(b,1;constant 0)"))

    def test_agrees_with_plain_oracle_on_neutral_free_words(self):
        o, u = NeutralUnboundedBlocksOracle(), UnboundedBlocksOracle()
        rng = random.Random(5)
        for _ in range(100):
            p = tuple(rng.choice("ab") for _ in range(rng.randrange(0, 3)))
            v = tuple(rng.choice("ab") for _ in range(rng.randrange(1, 4)))
            word = up_word(p, v, AB)
            assert o.member(word) == u.member(word)

    def test_neutral_letter_check_passes(self):
        o = NeutralUnboundedBlocksOracle()
        assert neutral_letter_check(o, samples=150, rng=random.Random(1)) is None

    def test_neutral_letter_check_needs_neutral(self):
        with pytest.raises(UnsupportedWordError):
            neutral_letter_check(UnboundedBlocksOracle(), samples=1,
                                 rng=random.Random(0))

    def test_neutral_letter_check_catches_fakes(self):
        class Fake(NeutralUnboundedBlocksOracle):
            def membership_up(self, word):
                return "1" in word.prefix  # blatantly not neutral

        bad = neutral_letter_check(Fake(), samples=150, rng=random.Random(2))
        assert bad is not None
        assert bad["expected"] != bad["got"]


class TestLassoOracle:
    def test_membership(self):
        p = LassoOracle()
        assert p.member(w("(ab)^w"))
        assert p.member(w("bbb(a)^w"))
        assert p.member(w("blocks(a,b;constant 2)"))
        assert p.member(w("blocks(a,b;ep 1 2|3)"))
        assert not p.member(w("blocks(a,b;affine 1 0)"))


class TestPrimeBlocks:
    def test_periods(self):
        pr = PrimeBlocksOracle()
        assert pr.member(w("(aab)^w"))
        assert pr.member(w("(aaab)^w"))
        assert not pr.member(w("(ab)^w"))
        assert not pr.member(w("(aaaab)^w"))
        assert pr.member(w("(" + "a" * 7 + "b)^w"))
        assert not pr.member(w("(a)^w"))
        assert not pr.member(w("(abab)^w"))  # primitive root ab, n = 1

    def test_prefix_irrelevant_and_rotations(self):
        pr = PrimeBlocksOracle()
        assert pr.member(w("bbbb(aab)^w"))
        assert pr.member(w("a(aba)^w"))  # same word as (aab)^w after a shift

    def test_blocks(self):
        pr = PrimeBlocksOracle()
        assert pr.member(w("blocks(a,b;constant 3)"))
        assert not pr.member(w("blocks(a,b;constant 4)"))
        assert not pr.member(w("blocks(a,b;affine 1 0)"))


class TestSingleton:
    def test_lasso_target(self):
        s = SingletonOracle(w("(ab)^w"))
        assert s.member(w("(ab)^w"))
        assert s.member(w("a(ba)^w"))  # the same word, presented differently
        assert not s.member(w("(ba)^w"))
        assert not s.member(w("blocks(a,b;affine 1 0)"))
        assert s.member(w("blocks(a,b;constant 1)"))  # (ab)^w again

    def test_growing_target(self):
        s = SingletonOracle(w("blocks(a,b;affine 1 0)"))
        assert s.member(w("blocks(a,b;affine 1 0)"))
        assert not s.member(w("blocks(a,b;affine 2 0)"))
        assert not s.member(w("(ab)^w"))

    def test_finite_target_rejected(self):
        with pytest.raises(UnsupportedWordError):
            SingletonOracle(finite_word("ab", AB))


class TestRegularOracle:
    def test_membership_and_limits(self, tmp_path):
        rng = random.Random(9)
        a = random_automaton(rng)
        o = RegularOracle(a)
        from omegaword.buchi import accepts_up
        for _ in range(50):
            word = up_word(
                tuple(rng.choice("ab") for _ in range(rng.randrange(0, 3))),
                tuple(rng.choice("ab") for _ in range(rng.randrange(1, 4))), AB)
            assert o.member(word) == accepts_up(a, word)
        with pytest.raises(UnsupportedWordError):
            o.member(w("blocks(a,b;affine 1 0)"))


class TestRegistry:
    def test_names(self):
        assert get_oracle("U").name == "U"
        assert get_oracle("Uprime").neutral_letter == "1"
        assert get_oracle("P").member(w("(ab)^w"))
        assert get_oracle("primes").member(w("(aab)^w"))
        s = get_oracle("singleton:a(b)^w")
        assert s.member(w("a(b)^w")) and not s.member(w("(b)^w"))
        with pytest.raises(FormatError):
            get_oracle("nonsense")

    def test_regular_from_file(self, tmp_path):
        a = random_automaton(random.Random(3))
        path = tmp_path / "aut.txt"
        path.write_text(format_automaton(a))
        o = get_oracle(f"regular:{path}")
        assert o.alphabet == a.alphabet


class TestViolationFinder:
    def test_trivial_classifier(self):
        c = classifier(AB, ("q",), "q",
                       {("q", "a"): "q", ("q", "b"): "q"}, {"q": "all"})
        u = UnboundedBlocksOracle()
        witness = u.find_condition2_violation(c)
        assert validate_condition2_witness(c, u, witness)
        assert witness.original_member != witness.replaced_member
        assert isinstance(witness.original, GrowingBlockSequence)

    def test_parity_classifier_needs_second_candidate(self):
        # length parity: every replacement erases to a or eps, so the
        # growing sequence's replacement is still a member and the finder
        # must fall back to a constant sequence
        c = classifier(AB, ("p0", "p1"), "p0",
                       {("p0", "a"): "p1", ("p0", "b"): "p1",
                        ("p1", "a"): "p0", ("p1", "b"): "p0"},
                       {"p0": "even", "p1": "odd"})
        assert check_condition1(c) is None
        u = UnboundedBlocksOracle()
        witness = u.find_condition2_violation(c)
        assert validate_condition2_witness(c, u, witness)
        assert isinstance(witness.original, PeriodicWordSequence)
        assert witness.original_member is False
        assert witness.replaced_member is True

    def test_kernel_classifiers_always_lose(self):
        rng = random.Random(21)
        u = UnboundedBlocksOracle()
        for _ in range(10):
            a = random_automaton(rng)
            c = profile_kernel_classifier(a)
            witness = u.find_condition2_violation(c)
            assert validate_condition2_witness(c, u, witness)

    def test_neutral_oracle_finder(self):
        rng = random.Random(22)
        o = NeutralUnboundedBlocksOracle()
        for letters in ("ab", "ab1"):
            for _ in range(5):
                a = random_automaton(rng, letters=letters)
                c = profile_kernel_classifier(a)
                witness = o.find_condition2_violation(c)
                assert validate_condition2_witness(c, o, witness)

    def test_needs_ab(self):
        c = classifier(alphabet("a"), ("q",), "q", {("q", "a"): "q"}, {"q": "x"})
        with pytest.raises(UnsupportedWordError):
            UnboundedBlocksOracle().find_condition2_violation(c)

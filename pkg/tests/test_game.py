import random

import pytest

from omegaword.errors import FormatError, IllegalMoveError, UnsupportedWordError
from omegaword.game import (
    DUPLICATOR,
    SPOILER,
    ConstantDuplicator,
    CopyDuplicator,
    DivergingSpoiler,
    Forfeit,
    GameTranscript,
    IndexScheme,
    Interval,
    IntervalFamily,
    RandomDuplicator,
    RandomSpoiler,
    adjudicate,
    duplicator_copy_strategy,
    fixed_family,
    get_duplicator,
    get_spoiler,
    play_bounded,
    spoiler_diverging_strategy,
    transcript_from_json,
    transcript_to_json,
    validate_transcript,
)
from omegaword.oracles import (
    LassoOracle,
    NeutralUnboundedBlocksOracle,
    UnboundedBlocksOracle,
)
from omegaword.words import alphabet, finite_word, parse_word, up_word

AB = alphabet("ab")


def affine_word():
    return parse_word("blocks(a,b;affine 1 0)")


class TestIntervals:
    def test_basics(self):
        v = Interval(3, 5)
        assert len(v) == 3
        assert Interval(0, 1) < Interval(2, 2)
        assert not Interval(0, 2) < Interval(2, 5)
        with pytest.raises(FormatError):
            Interval(4, 2)
        with pytest.raises(FormatError):
            Interval(-1, 2)

    def test_family(self):
        fam = fixed_family([Interval(0, 1), Interval(3, 3)])
        assert fam.materialize(2) == (Interval(0, 1), Interval(3, 3))
        beyond = fam.materialize(4)[3]
        assert beyond.first > 3
        assert fam.next_after(1) == Interval(3, 3)
        assert fam.next_after(100).first > 100

    def test_family_must_increase(self):
        fam = IntervalFamily(lambda i: Interval(0, 1), "broken")
        with pytest.raises(FormatError):
            fam.materialize(2)


def legal_transcript():
    return GameTranscript(
        word=up_word("", "a", AB), horizon=1, oracle_name="U",
        family=(Interval(0, 1), Interval(4, 5)), family_note="fixed",
        selected=(Interval(0, 1),), chosen=(Interval(2, 2),),
        spoiler_words=(finite_word("a", AB),),
        duplicator_words=(finite_word("", AB),),
        scheme=IndexScheme((), (1,)), forfeit=None,
        verdicts=None, verdict_notes=("", ""), winner=None,
        adjudication_error=None)


class TestValidate:
    def test_legal(self):
        assert validate_transcript(legal_transcript()) == []

    def test_round1_disjointness(self):
        t = legal_transcript()
        t = _with(t, family=(Interval(0, 1), Interval(1, 2)))
        assert any("round1 disjointness" in m for m in validate_transcript(t))

    def test_round2_membership_and_labels(self):
        t = _with(legal_transcript(), selected=(Interval(0, 2),))
        assert any("round2 membership" in m for m in validate_transcript(t))
        t = _with(legal_transcript(), word=up_word("", "ab", AB))
        # V = [2,2] sits on an a, but make it sit on the b at position 1
        t = _with(t, chosen=(Interval(1, 1),))
        msgs = validate_transcript(t)
        assert any("round2" in m and "label" in m for m in msgs)

    def test_round2_interleaving(self):
        t = _with(legal_transcript(), chosen=(Interval(1, 2),))  # overlaps W_1
        assert any("round2 interleaving" in m for m in validate_transcript(t))

    def test_round3_length_bound_strict(self):
        t = _with(legal_transcript(), spoiler_words=(finite_word("aa", AB),))
        assert any("round3 length bound" in m for m in validate_transcript(t))

    def test_round4_length_bound(self):
        t = _with(legal_transcript(), duplicator_words=(finite_word("a", AB),))
        assert any("round4 length bound" in m for m in validate_transcript(t))

    def test_round5(self):
        t = _with(legal_transcript(), scheme=IndexScheme((), ()))
        assert any("round5 cycle" in m for m in validate_transcript(t))
        t = _with(legal_transcript(), scheme=IndexScheme((), (2,)))
        assert any("round5 range" in m for m in validate_transcript(t))
        t = _with(legal_transcript(), scheme=IndexScheme((1,), (1,)))
        assert any("round5 ordering" in m for m in validate_transcript(t))


def _with(t, **kw):
    from dataclasses import replace
    return replace(t, **kw)


class TestPlays:
    def test_copy_beats_random_on_growing_blocks(self):
        t = play_bounded(affine_word(), UnboundedBlocksOracle(),
                         RandomSpoiler(random.Random(7)),
                         duplicator_copy_strategy(), horizon=10)
        assert t.winner == DUPLICATOR
        assert t.forfeit is None
        assert t.verdicts[0] == t.verdicts[1]
        assert validate_transcript(t) == []

    def test_copy_many_seeds_both_oracles(self):
        for oracle in (UnboundedBlocksOracle(), NeutralUnboundedBlocksOracle()):
            for seed in range(20):
                t = play_bounded(affine_word(), oracle,
                                 RandomSpoiler(random.Random(seed)),
                                 CopyDuplicator(), horizon=6)
                assert t.winner == DUPLICATOR
                assert validate_transcript(t) == []

    def test_diverging_beats_copy_on_lasso(self):
        t = play_bounded(up_word("", "aab", AB), UnboundedBlocksOracle(),
                         DivergingSpoiler(), CopyDuplicator(), horizon=10)
        assert t.winner == SPOILER
        assert t.forfeit is not None and t.forfeit[0] == DUPLICATOR
        assert t.forfeit[1] == 2
        assert validate_transcript(t) == []

    def test_diverging_beats_copy_even_with_long_runs(self):
        # runs of length 5 exist, but the family sizes grow past them
        t = play_bounded(up_word("", "aaaaab", AB), UnboundedBlocksOracle(),
                         DivergingSpoiler(), CopyDuplicator(), horizon=10)
        assert t.winner == SPOILER

    def test_diverging_beats_constant_responder(self):
        t = play_bounded(up_word("", "aab", AB), NeutralUnboundedBlocksOracle(),
                         DivergingSpoiler(), ConstantDuplicator("a"), horizon=10)
        assert t.winner == SPOILER
        assert t.forfeit is None
        assert t.verdicts[0] != t.verdicts[1]
        assert validate_transcript(t) == []

    def test_copy_survives_on_word_in_language(self):
        # copy never forfeits when runs are unbounded, whatever the spoiler
        t = play_bounded(affine_word(), UnboundedBlocksOracle(),
                         DivergingSpoiler(), CopyDuplicator(), horizon=8)
        assert t.winner == DUPLICATOR
        assert t.forfeit is None

    def test_bad_interval_choice_forfeits(self):
        class BadDuplicator(CopyDuplicator):
            def round2(self, family):
                w = family.materialize(1)[0]
                # V on top of a b-position of (ab)^w
                return [(w, Interval(w.last + 2, w.last + 2))] * self.horizon

        t = play_bounded(up_word("", "ab", AB), UnboundedBlocksOracle(),
                         RandomSpoiler(random.Random(1)), BadDuplicator(),
                         horizon=1)
        assert t.winner == SPOILER
        assert t.forfeit[0] == DUPLICATOR and t.forfeit[1] == 2

    def test_malformed_strategy_output_is_an_error(self):
        class Broken(CopyDuplicator):
            def round2(self, family):
                return [(family.materialize(1)[0], Interval(5, 5))]  # too few

        with pytest.raises(IllegalMoveError):
            play_bounded(affine_word(), UnboundedBlocksOracle(),
                         RandomSpoiler(random.Random(2)), Broken(), horizon=3)

    def test_foreign_letters_are_an_error(self):
        class Alien(RandomSpoiler):
            def round3(self, selected):
                z = alphabet("z")
                return [finite_word("", z) if len(w) == 1 else finite_word("z", z)
                        for w in selected]

        with pytest.raises(IllegalMoveError):
            play_bounded(affine_word(), UnboundedBlocksOracle(),
                         Alien(random.Random(3)), CopyDuplicator(), horizon=6)

    def test_diverging_needs_violation_finder(self):
        with pytest.raises(UnsupportedWordError):
            play_bounded(affine_word(), LassoOracle(),
                         DivergingSpoiler(), CopyDuplicator(), horizon=3)


class TestAdjudication:
    def test_readjudication_is_stable(self):
        oracle = UnboundedBlocksOracle()
        for seed in range(10):
            t = play_bounded(affine_word(), oracle,
                             RandomSpoiler(random.Random(seed)),
                             RandomDuplicator(random.Random(seed + 1)),
                             horizon=5)
            again = adjudicate(t, oracle)
            assert again.winner == t.winner
            assert again.verdicts == t.verdicts

    def test_json_round_trip(self):
        oracle = NeutralUnboundedBlocksOracle()
        t = play_bounded(affine_word(), oracle,
                         RandomSpoiler(random.Random(4)),
                         CopyDuplicator(), horizon=5)
        back = transcript_from_json(transcript_to_json(t, oracle.alphabet))
        assert back == t
        assert adjudicate(back, oracle).winner == t.winner

    def test_json_round_trip_after_forfeit(self):
        t = play_bounded(up_word("", "aab", AB), UnboundedBlocksOracle(),
                         DivergingSpoiler(), CopyDuplicator(), horizon=10)
        back = transcript_from_json(transcript_to_json(t))
        assert back == t and back.forfeit == t.forfeit

    def test_bad_json_rejected(self):
        with pytest.raises(FormatError):
            transcript_from_json("{not json")


class TestRegistries:
    def test_names(self):
        assert isinstance(get_spoiler("random", random.Random(0)), RandomSpoiler)
        assert isinstance(get_spoiler("diverging"), DivergingSpoiler)
        assert isinstance(get_duplicator("copy"), CopyDuplicator)
        assert isinstance(get_duplicator("random", random.Random(0)), RandomDuplicator)
        d = get_duplicator("constant:ab")
        assert isinstance(d, ConstantDuplicator) and d.text == "ab"
        with pytest.raises(FormatError):
            get_spoiler("clairvoyant")
        with pytest.raises(FormatError):
            get_duplicator("random")  # rng required

    def test_factory_helpers(self):
        assert isinstance(duplicator_copy_strategy(), CopyDuplicator)
        assert isinstance(spoiler_diverging_strategy(), DivergingSpoiler)

"""Membership oracles for languages of infinite words.

An oracle decides membership for the presentation classes it supports
(lasso words and block words), declares its alphabet, and fails loudly on
anything it cannot decide exactly.  The registry covers:

* ``U``        words over {a, b} whose all-`a` stretches are unbounded
* ``Uprime``   words over {a, b, 1} that land in ``U`` after erasing the
               neutral letter ``1``
* ``P``        the ultimately periodic (lasso-presentable) words over {a, b}
* ``primes``   words ending in (a^n b)-blocks repeated forever, n prime
* ``singleton:<word>``  one infinite word
* ``regular:<file>``    the language of the automaton in the file

``U`` and ``Uprime`` also ship a violation finder: given any finite
classifier, it produces a factor sequence and a classwise-equivalent
replacement whose infinite products the language tells apart.  No finite
classifier survives this, which is the structural reason these languages
are not recognized by any finite-state device.
"""

from __future__ import annotations

import random
from typing import Optional

from .buchi import BuchiAutomaton, accepts_up
from .congruence import (
    Classifier,
    Condition2ViolationWitness,
    GrowingBlockSequence,
    PeriodicWordSequence,
    class_representatives,
    product_member,
    validate_condition2_witness,
)
from .errors import (
    AlphabetMismatchError,
    DegenerateErasureError,
    FormatError,
    UnsupportedWordError,
)
from .words import (
    AffineLengths,
    Alphabet,
    BlockWord,
    FiniteWord,
    UPWord,
    Word,
    alphabet,
    apply_hom,
    canonical,
    erasing_hom,
    max_letter_run,
    parse_word,
    to_up_word,
    with_alphabet,
)

AB = alphabet("ab")
AB1 = alphabet("ab1")


class LanguageOracle:
    """Base class: dispatch plus alphabet embedding.

    Words whose letters all belong to the oracle's alphabet are accepted
    regardless of the (possibly smaller) alphabet they were built over.
    """

    name: str = "?"
    alphabet: Alphabet = AB
    neutral_letter: Optional[str] = None

    def member(self, w: Word) -> bool:
        if isinstance(w, FiniteWord):
            raise UnsupportedWordError("a finite word is not an infinite word")
        w = self._embed(w)
        if isinstance(w, UPWord):
            return self.membership_up(w)
        return self.membership_block(w)

    def _embed(self, w: Word) -> Word:
        if w.alphabet == self.alphabet:
            return w
        letters = set(w.prefix) | set(w.period) if isinstance(w, UPWord) else {w.block, w.sep}
        if letters <= set(self.alphabet.letters):
            return with_alphabet(w, self.alphabet)
        raise AlphabetMismatchError(
            f"word over {w.alphabet.letters} does not embed into {self.alphabet.letters}")

    def membership_up(self, w: UPWord) -> bool:
        raise UnsupportedWordError(f"{self.name} does not decide lasso words")

    def membership_block(self, w: BlockWord) -> bool:
        raise UnsupportedWordError(f"{self.name} does not decide block words")

    def find_condition2_violation(self, c: Classifier) -> Condition2ViolationWitness:
        raise UnsupportedWordError(f"{self.name} has no violation finder")

    @property
    def has_violation_finder(self) -> bool:
        return type(self).find_condition2_violation is not LanguageOracle.find_condition2_violation


class UnboundedBlocksOracle(LanguageOracle):
    """Words over {a, b} whose maximal all-`a` intervals have unbounded size.

    A lasso word qualifies exactly when its period is all `a` (the word ends
    in an infinite `a`-tail); any period containing `b` caps the runs.  A
    block word qualifies exactly when its block lengths are unbounded.
    """

    name = "U"
    alphabet = AB

    def membership_up(self, w: UPWord) -> bool:
        return max_letter_run(w, "a") is None

    def membership_block(self, w: BlockWord) -> bool:
        return max_letter_run(w, "a") is None

    def find_condition2_violation(self, c: Classifier) -> Condition2ViolationWitness:
        return _unbounded_runs_violation(self, c)


class NeutralUnboundedBlocksOracle(LanguageOracle):
    """Words over {a, b, 1} whose `1`-erasure has unbounded all-`a` intervals.

    The letter 1 is neutral: inserting or deleting it never changes
    membership.  Erasure must leave an infinite word; a lasso word whose
    period is all 1s has no infinite erasure and is rejected as unsupported
    (DegenerateErasureError).
    """

    name = "Uprime"
    alphabet = AB1
    neutral_letter = "1"

    def __init__(self):
        self._erase = erasing_hom(AB1, "1", AB)

    def membership_up(self, w: UPWord) -> bool:
        erased = apply_hom(self._erase, w)
        if isinstance(erased, FiniteWord):
            raise DegenerateErasureError(
                "erasing the neutral letter leaves a finite word")
        return max_letter_run(erased, "a") is None

    def membership_block(self, w: BlockWord) -> bool:
        if w.block != "1" and w.sep != "1":
            return max_letter_run(apply_hom(self._erase, w), "a") is None
        if w.block == "1":
            # erasure keeps one separator per segment: sep^omega
            return w.sep == "a"
        # sep == "1": erasure concatenates all blocks
        if isinstance(w.lengths, AffineLengths):
            total_infinite = True
        else:
            up = to_up_word(w)
            total_infinite = any(x != "1" for x in up.period)
        if not total_infinite:
            raise DegenerateErasureError(
                "erasing the neutral letter leaves a finite word")
        return w.block == "a"

    def find_condition2_violation(self, c: Classifier) -> Condition2ViolationWitness:
        return _unbounded_runs_violation(self, c)


class LassoOracle(LanguageOracle):
    """The ultimately periodic words: every lasso word belongs, and a block
    word belongs exactly when its length sequence is bounded (growing blocks
    produce aperiodic words)."""

    name = "P"
    alphabet = AB

    def membership_up(self, w: UPWord) -> bool:
        return True

    def membership_block(self, w: BlockWord) -> bool:
        return w.lengths.bounded()


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class PrimeBlocksOracle(LanguageOracle):
    """Words with a tail (a^n b)(a^n b)... for a prime n.

    Prefix-independent: membership only looks at the eventual period.  A
    lasso word belongs when its primitive period is a rotation of a^n b with
    n prime; growing block words never belong (their tails are aperiodic).
    """

    name = "primes"
    alphabet = AB

    def membership_up(self, w: UPWord) -> bool:
        root = canonical(w).period
        return root.count("b") == 1 and _is_prime(len(root) - 1)

    def membership_block(self, w: BlockWord) -> bool:
        if not w.lengths.bounded():
            return False
        return self.membership_up(to_up_word(self._embed(w)))


class SingletonOracle(LanguageOracle):
    """Exactly one infinite word."""

    def __init__(self, target: Word):
        if isinstance(target, FiniteWord):
            raise UnsupportedWordError("a singleton language needs an infinite word")
        self.target = target
        self.alphabet = target.alphabet
        self.name = f"singleton:{target.text()}"

    def membership_up(self, w: UPWord) -> bool:
        t = self.target
        if isinstance(t, BlockWord):
            if not t.lengths.bounded():
                return False
            t = to_up_word(t)
        cw, ct = canonical(w), canonical(with_alphabet(t, self.alphabet))
        return (cw.prefix, cw.period) == (ct.prefix, ct.period)

    def membership_block(self, w: BlockWord) -> bool:
        if w.lengths.bounded():
            return self.membership_up(to_up_word(w))
        t = self.target
        if not (isinstance(t, BlockWord) and not t.lengths.bounded()):
            return False
        return (w.block, w.sep, w.lengths) == (t.block, t.sep, t.lengths)


class RegularOracle(LanguageOracle):
    """Membership decided by a Buchi automaton (lasso-presentable words)."""

    def __init__(self, automaton: BuchiAutomaton, name: Optional[str] = None):
        self.automaton = automaton
        self.alphabet = automaton.alphabet
        self.name = name or "regular"

    def membership_up(self, w: UPWord) -> bool:
        return accepts_up(self.automaton, w)

    def membership_block(self, w: BlockWord) -> bool:
        if not w.lengths.bounded():
            raise UnsupportedWordError(
                "automaton oracles decide lasso-presentable words only")
        return self.membership_up(to_up_word(w))


# ---------------------------------------------------------------------------
# the neutral-letter property, tested by sampling


def neutral_letter_check(oracle: LanguageOracle, *, samples: int,
                         rng: random.Random) -> Optional[dict]:
    """Sample words and check that inserting or deleting the oracle's neutral
    letter never flips membership.  Returns None, or a counterexample record.

    Sampled periods always keep at least one non-neutral letter, so every
    tested word stays inside the oracle's decidable domain.
    """
    neutral = oracle.neutral_letter
    if neutral is None:
        raise UnsupportedWordError(f"{oracle.name} has no neutral letter")
    letters = oracle.alphabet.letters
    solid = [x for x in letters if x != neutral]

    def sample() -> UPWord:
        p = tuple(rng.choice(letters) for _ in range(rng.randrange(0, 4)))
        v = [rng.choice(letters) for _ in range(rng.randrange(0, 4))]
        v.insert(rng.randrange(0, len(v) + 1), rng.choice(solid))
        return UPWord(oracle.alphabet, p, tuple(v))

    for _ in range(samples):
        w = sample()
        base = oracle.member(w)
        variants = []
        i = rng.randrange(0, len(w.prefix) + 1)
        variants.append(UPWord(oracle.alphabet,
                               w.prefix[:i] + (neutral,) + w.prefix[i:], w.period))
        j = rng.randrange(0, len(w.period) + 1)
        variants.append(UPWord(oracle.alphabet, w.prefix,
                               w.period[:j] + (neutral,) + w.period[j:]))
        if neutral in w.prefix:
            k = w.prefix.index(neutral)
            variants.append(UPWord(oracle.alphabet,
                                   w.prefix[:k] + w.prefix[k + 1:], w.period))
        if neutral in w.period and any(x != neutral for x in w.period):
            k = w.period.index(neutral)
            variants.append(UPWord(oracle.alphabet, w.prefix,
                                   w.period[:k] + w.period[k + 1:]))
        for v in variants:
            got = oracle.member(v)
            if got != base:
                return {"word": w, "variant": v, "expected": base, "got": got}
    return None


# ---------------------------------------------------------------------------
# violation finder for the unbounded-runs languages


def _erased_letters(oracle: LanguageOracle, letters: tuple[str, ...]) -> tuple[str, ...]:
    if oracle.neutral_letter is None:
        return letters
    return tuple(x for x in letters if x != oracle.neutral_letter)


def _unbounded_runs_violation(oracle: LanguageOracle,
                              c: Classifier) -> Condition2ViolationWitness:
    """A product-recognition violation against any finite classifier.

    The factor sequence u_i = a^i b has an eventually periodic class
    sequence (the classifier has finitely many states), so the classwise
    replacement sequence uses finitely many representative words and its
    product has bounded all-`a` runs, or no `b` at all.  Either way one of
    two candidates separates the products:

    * the growing sequence itself: its product has unbounded runs and
      belongs, while the replacement product usually does not;
    * otherwise every repeated replacement erases to a block of `a` only,
      and a constant sequence a^n b ... (not a member) gets replaced by a
      word with an all-`a` tail (a member).
    """
    if not {"a", "b"} <= set(c.alphabet.letters):
        raise UnsupportedWordError("the violation finder needs letters a and b")
    if not set(c.alphabet.letters) <= set(oracle.alphabet.letters):
        raise AlphabetMismatchError("classifier alphabet must embed into the oracle's")
    reps = class_representatives(c)

    def rep_after(i: int) -> FiniteWord:
        word = ("a",) * i + ("b",)
        return reps[c.classify(word)]

    # states after a^i trace a rho shape; find its head and cycle lengths
    seen = {}
    s = c.initial
    i = 0
    while s not in seen:
        seen[s] = i
        s = c.step(s, "a")
        i += 1
    mu, lam = seen[s], i - seen[s]
    start = max(mu, 1)
    head = tuple(rep_after(j) for j in range(1, start))
    cycle = tuple(rep_after(j) for j in range(start, start + lam))

    original_a = GrowingBlockSequence(c.alphabet, "a", "b", 1, 0)
    replaced_a = PeriodicWordSequence(head, cycle)
    om, note_o = product_member(oracle, original_a)
    rm, note_r = product_member(oracle, replaced_a)
    if om != rm:
        witness = Condition2ViolationWitness(
            original_a, replaced_a, original_a.product(),
            _try_product(replaced_a), om, rm,
            note_o or note_r or "growing blocks vs bounded replacement")
        if validate_condition2_witness(c, oracle, witness):
            return witness

    # replacement product was still a member: every repeated representative
    # erases to a-only letters and at least one has an a; a constant
    # sequence at that index flips the verdicts
    for j in range(start, start + lam):
        r = rep_after(j)
        if "a" in _erased_letters(oracle, r.letters):
            u = FiniteWord(c.alphabet, ("a",) * j + ("b",))
            original_b = PeriodicWordSequence((), (u,))
            replaced_b = PeriodicWordSequence((), (r,))
            om2, _ = product_member(oracle, original_b)
            rm2, _ = product_member(oracle, replaced_b)
            witness = Condition2ViolationWitness(
                original_b, replaced_b, original_b.product(),
                _try_product(replaced_b), om2, rm2,
                "constant blocks vs all-a replacement tail")
            if om2 != rm2 and validate_condition2_witness(c, oracle, witness):
                return witness
    raise AssertionError("no violation found; the classifier cannot be finite")


def _try_product(seq) -> Optional[Word]:
    from .errors import DegenerateProductError
    try:
        return seq.product()
    except DegenerateProductError:
        return None


# ---------------------------------------------------------------------------
# registry


def get_oracle(name: str) -> LanguageOracle:
    """Resolve an oracle by registry name (see the module docstring)."""
    if name == "U":
        return UnboundedBlocksOracle()
    if name == "Uprime":
        return NeutralUnboundedBlocksOracle()
    if name == "P":
        return LassoOracle()
    if name == "primes":
        return PrimeBlocksOracle()
    if name.startswith("singleton:"):
        return SingletonOracle(parse_word(name[len("singleton:"):]))
    if name.startswith("regular:"):
        path = name[len("regular:"):]
        from .buchi import parse_automaton
        with open(path, "r", encoding="utf-8") as fh:
            return RegularOracle(parse_automaton(fh.read()), name=name)
    raise FormatError(f"unknown oracle {name!r}")

"""The interval game that separates bounded from unbounded a-runs.

One play, parametrised by an infinite word and a language oracle L:

1. Spoiler lays out an infinite family of pairwise disjoint intervals.
2. Duplicator picks members W_1, W_2, ... of that family and interleaves
   them with intervals V_i of its own whose positions all carry the
   letter a in the word: W_1 < V_1 < W_2 < V_2 < ...
3. Spoiler picks finite words w_i with |w_i| < |W_i|.
4. Duplicator picks finite words v_i with |v_i| < |V_i|.
5. Spoiler picks an increasing index sequence.
6. Duplicator wins when the products w_{i_1} w_{i_2} ... and
   v_{i_1} v_{i_2} ... agree about membership in L.

When the word has all-a intervals of unbounded size, Duplicator can always
answer v_i = w_i inside a large enough V_i and win; otherwise Duplicator's
vocabulary is finite and Spoiler can cash in a product-recognition violation
of L.  Bounded play materializes `horizon` interval pairs and word pairs,
restricts round 5 to eventually periodic index schemes (so round 6 is
decidable on lasso presentations), and makes every illegal move an
immediate forfeit.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, replace
from typing import Callable, Optional

from .congruence import (
    Classifier,
    PeriodicWordSequence,
    classifier,
    product_member,
)
from .errors import BudgetExceededError, FormatError, IllegalMoveError, UnsupportedWordError
from .words import (
    Alphabet,
    FiniteWord,
    Word,
    alphabet,
    finite_word,
    format_word,
    letter_at,
    next_letter_run,
    parse_word,
)

SPOILER = "Spoiler"
DUPLICATOR = "Duplicator"

FAMILY_BUDGET = 100000


@dataclass(frozen=True)
class Interval:
    first: int
    last: int

    def __post_init__(self):
        if self.first < 0 or self.last < self.first:
            raise FormatError(f"bad interval [{self.first}, {self.last}]")

    def __len__(self):
        return self.last - self.first + 1

    def __lt__(self, other):  # the interval order: strictly before
        return self.last < other.first


class IntervalFamily:
    """An infinite family of pairwise disjoint intervals in increasing order,
    given by a 1-based generator; bounded play materializes a prefix."""

    def __init__(self, nth: Callable[[int], Interval], note: str):
        self._nth = nth
        self.note = note
        self._cache: list[Interval] = []

    def materialize(self, n: int) -> tuple[Interval, ...]:
        while len(self._cache) < n:
            if len(self._cache) >= FAMILY_BUDGET:
                raise BudgetExceededError("interval family budget exhausted")
            v = self._nth(len(self._cache) + 1)
            if self._cache and not (self._cache[-1] < v):
                raise FormatError("family intervals must be increasing")
            self._cache.append(v)
        return tuple(self._cache[:n])

    def next_after(self, pos: int) -> Interval:
        """First family member whose positions all lie beyond `pos`."""
        i = 0
        while True:
            if i == len(self._cache):
                self.materialize(len(self._cache) + 1)
            if self._cache[i].first > pos:
                return self._cache[i]
            i += 1

    @property
    def materialized(self) -> tuple[Interval, ...]:
        return tuple(self._cache)


def fixed_family(intervals, note="fixed") -> IntervalFamily:
    """A family given by an explicit prefix; continues with unit intervals
    beyond the last listed one (so that it is genuinely infinite)."""
    items = tuple(intervals)

    def nth(i: int) -> Interval:
        if i <= len(items):
            return items[i - 1]
        base = (items[-1].last if items else -1) + 2 * (i - len(items))
        return Interval(base, base)

    return IntervalFamily(nth, note)


@dataclass(frozen=True)
class IndexScheme:
    """Eventually periodic index sequence: the listed head, then the cycle's
    word pairs repeating forever (reusing materialized rounds)."""

    head: tuple[int, ...]
    cycle: tuple[int, ...]


@dataclass(frozen=True)
class GameTranscript:
    word: Word
    horizon: int
    oracle_name: str
    family: tuple[Interval, ...]            # materialized round-1 prefix
    family_note: str
    selected: tuple[Interval, ...]          # round 2: the W_i
    chosen: tuple[Interval, ...]            # round 2: the V_i
    spoiler_words: tuple[FiniteWord, ...]   # round 3
    duplicator_words: tuple[FiniteWord, ...]  # round 4
    scheme: Optional[IndexScheme]           # round 5
    forfeit: Optional[tuple[str, int, str]]  # (player, round, reason)
    verdicts: Optional[tuple[bool, bool]]
    verdict_notes: tuple[str, str]
    winner: Optional[str]
    adjudication_error: Optional[str]
    notes: tuple[str, ...] = ()


@dataclass(frozen=True)
class Forfeit:
    """Returned by a strategy that cannot (or will not) move legally."""

    reason: str


# ---------------------------------------------------------------------------
# legality


def validate_transcript(t: GameTranscript) -> list[str]:
    """All rule violations in the recorded rounds (empty list: legal play).
    Rounds cut short by a forfeit are simply absent and not judged."""
    out = []
    for a, b in zip(t.family, t.family[1:]):
        if not a < b:
            out.append(f"round1 disjointness: {a} vs {b}")
    n = len(t.selected)
    if len(t.chosen) != n:
        out.append("round2 pairing: each W_i needs its V_i")
    fam = set(t.family)
    for i, w in enumerate(t.selected, 1):
        if w not in fam:
            out.append(f"round2 membership: W_{i} not in the family")
    chain: list[Interval] = []
    for w, v in zip(t.selected, t.chosen):
        chain += [w, v]
    for a, b in zip(chain, chain[1:]):
        if not a < b:
            out.append(f"round2 interleaving: {a} not before {b}")
    for i, v in enumerate(t.chosen, 1):
        for p in range(v.first, v.last + 1):
            if letter_at(t.word, p) != "a":
                out.append(f"round2 labels: V_{i} covers a non-a position {p}")
                break
    for i, (w, iv) in enumerate(zip(t.spoiler_words, t.selected), 1):
        if len(w) >= len(iv):
            out.append(f"round3 length bound: |w_{i}| = {len(w)} vs |W_{i}| = {len(iv)}")
    if t.spoiler_words and len(t.spoiler_words) != n:
        out.append("round3 count: one word per interval pair")
    for i, (w, iv) in enumerate(zip(t.duplicator_words, t.chosen), 1):
        if len(w) >= len(iv):
            out.append(f"round4 length bound: |v_{i}| = {len(w)} vs |V_{i}| = {len(iv)}")
    if t.duplicator_words and len(t.duplicator_words) != n:
        out.append("round4 count: one word per interval pair")
    if t.scheme is not None:
        seq = t.scheme.head + t.scheme.cycle
        if not t.scheme.cycle:
            out.append("round5 cycle: must be nonempty")
        if any(i < 1 or i > len(t.spoiler_words) for i in seq):
            out.append("round5 range: indices must refer to materialized rounds")
        elif any(a >= b for a, b in zip(seq, seq[1:])):
            out.append("round5 ordering: indices must increase strictly")
    return out


def adjudicate(t: GameTranscript, oracle) -> GameTranscript:
    """Winner as a pure function of the transcript (idempotent): forfeits
    lose immediately; otherwise the scheme's two products are put to the
    oracle and Duplicator wins exactly when the verdicts agree."""
    if t.forfeit is not None:
        player = t.forfeit[0]
        winner = DUPLICATOR if player == SPOILER else SPOILER
        return replace(t, winner=winner, verdicts=None, verdict_notes=("", ""),
                       adjudication_error=None)
    if t.scheme is None:
        return replace(t, winner=None, adjudication_error="no round-5 scheme")
    seq_w = PeriodicWordSequence(
        tuple(t.spoiler_words[i - 1] for i in t.scheme.head),
        tuple(t.spoiler_words[i - 1] for i in t.scheme.cycle))
    seq_v = PeriodicWordSequence(
        tuple(t.duplicator_words[i - 1] for i in t.scheme.head),
        tuple(t.duplicator_words[i - 1] for i in t.scheme.cycle))
    try:
        mw, note_w = product_member(oracle, seq_w)
        mv, note_v = product_member(oracle, seq_v)
    except UnsupportedWordError as e:
        return replace(t, winner=None, verdicts=None, verdict_notes=("", ""),
                       adjudication_error=f"oracle could not decide a product: {e}")
    winner = DUPLICATOR if mw == mv else SPOILER
    return replace(t, winner=winner, verdicts=(mw, mv),
                   verdict_notes=(note_w, note_v), adjudication_error=None)


# ---------------------------------------------------------------------------
# the engine


def play_bounded(word: Word, oracle, spoiler, duplicator, *,
                 horizon: int) -> GameTranscript:
    """One bounded play.  Strategies move through their round callbacks; any
    illegal move forfeits for its author.  The returned transcript always
    passes validate_transcript and carries the adjudication."""
    if horizon < 1:
        raise IllegalMoveError("horizon must be at least 1")
    spoiler.begin(word, oracle, horizon)
    duplicator.begin(word, oracle, horizon)
    notes: list[str] = []

    t = GameTranscript(word, horizon, getattr(oracle, "name", "?"), (), "",
                       (), (), (), (), None, None, None, ("", ""), None, None)

    def finish(tt: GameTranscript) -> GameTranscript:
        tt = replace(tt, family=family.materialized if family else (),
                     notes=tuple(notes + list(getattr(spoiler, "notes", ()))))
        return adjudicate(tt, oracle)

    def forfeited(tt, player, round_no, reason):
        return finish(replace(tt, forfeit=(player, round_no, reason)))

    # round 1
    family = None
    move = spoiler.round1()
    if isinstance(move, Forfeit):
        return forfeited(t, SPOILER, 1, move.reason)
    if not isinstance(move, IntervalFamily):
        raise IllegalMoveError("round 1 must produce an IntervalFamily")
    family = move
    t = replace(t, family_note=family.note)

    # round 2
    move = duplicator.round2(family)
    if isinstance(move, Forfeit):
        return forfeited(t, DUPLICATOR, 2, move.reason)
    pairs = list(move)
    if len(pairs) != horizon or not all(
            isinstance(w, Interval) and isinstance(v, Interval) for w, v in pairs):
        raise IllegalMoveError("round 2 must produce horizon many (W, V) pairs")
    selected = tuple(w for w, _ in pairs)
    chosen = tuple(v for _, v in pairs)
    t2 = replace(t, selected=selected, chosen=chosen)
    bad = [m for m in validate_transcript(replace(
        t2, family=family.materialized)) if m.startswith("round2")]
    if bad:
        return forfeited(t, DUPLICATOR, 2, "; ".join(bad))
    t = t2

    # round 3
    move = spoiler.round3(selected)
    if isinstance(move, Forfeit):
        return forfeited(t, SPOILER, 3, move.reason)
    w_words = _as_words(move, horizon, oracle.alphabet, "round 3")
    for i, (w, iv) in enumerate(zip(w_words, selected), 1):
        if len(w) >= len(iv):
            return forfeited(t, SPOILER, 3, f"|w_{i}| = {len(w)} too long for W_{i}")
    t = replace(t, spoiler_words=w_words)

    # round 4
    move = duplicator.round4(w_words, chosen)
    if isinstance(move, Forfeit):
        return forfeited(t, DUPLICATOR, 4, move.reason)
    v_words = _as_words(move, horizon, oracle.alphabet, "round 4")
    for i, (v, iv) in enumerate(zip(v_words, chosen), 1):
        if len(v) >= len(iv):
            return forfeited(t, DUPLICATOR, 4, f"|v_{i}| = {len(v)} too long for V_{i}")
    t = replace(t, duplicator_words=v_words)

    # round 5
    move = spoiler.round5(w_words, v_words)
    if isinstance(move, Forfeit):
        return forfeited(t, SPOILER, 5, move.reason)
    if not isinstance(move, IndexScheme):
        raise IllegalMoveError("round 5 must produce an IndexScheme")
    seq = move.head + move.cycle
    if (not move.cycle or any(i < 1 or i > horizon for i in seq)
            or any(a >= b for a, b in zip(seq, seq[1:]))):
        return forfeited(t, SPOILER, 5, f"illegal index scheme {move}")
    t = replace(t, scheme=move)
    return finish(t)


def _as_words(move, horizon, alpha: Alphabet, where: str) -> tuple[FiniteWord, ...]:
    words = list(move)
    if len(words) != horizon or not all(isinstance(w, FiniteWord) for w in words):
        raise IllegalMoveError(f"{where} must produce horizon many finite words")
    for w in words:
        if any(x not in alpha for x in w.letters):
            raise IllegalMoveError(f"{where} word {w.text()!r} leaves the oracle alphabet")
    return tuple(words)


# ---------------------------------------------------------------------------
# duplicator strategies


class _Strategy:
    def begin(self, word, oracle, horizon):
        self.word = word
        self.oracle = oracle
        self.horizon = horizon
        self.notes: list[str] = []


class CopyDuplicator(_Strategy):
    """Mirror the opponent: pick V_i as an all-a interval at least as long
    as W_i (so that v_i = w_i is always legal) and answer v_i = w_i.
    Forfeits honestly when the word has no long enough a-run ahead, which is
    exactly the case of bounded a-runs."""

    def __init__(self, scan_budget: int = 10 ** 6):
        self.scan_budget = scan_budget

    def round2(self, family: IntervalFamily):
        pairs = []
        pos = -1
        for i in range(1, self.horizon + 1):
            w = family.next_after(pos)
            need = len(w)
            run = next_letter_run(self.word, "a", need, w.last + 1)
            if run is None:
                return Forfeit(
                    f"no all-a interval of size {need} beyond position {w.last}")
            s, _ = run
            if s + need - 1 > self.scan_budget:
                return Forfeit(f"scan budget {self.scan_budget} exhausted")
            v = Interval(s, s + need - 1)
            pairs.append((w, v))
            pos = v.last
        return pairs

    def round4(self, w_words, chosen):
        return list(w_words)


class RandomDuplicator(_Strategy):
    """Any legal V_i (the next nonempty a-run), then random short answers."""

    def __init__(self, rng):
        self.rng = rng

    def round2(self, family: IntervalFamily):
        pairs = []
        pos = -1
        for _ in range(self.horizon):
            w = family.next_after(pos)
            run = next_letter_run(self.word, "a", 1, w.last + 1)
            if run is None:
                return Forfeit("no a-labelled position remains")
            s, e = run
            v = Interval(s, self.rng.randint(s, e))
            pairs.append((w, v))
            pos = v.last
        return pairs

    def round4(self, w_words, chosen):
        letters = self.oracle.alphabet.letters
        out = []
        for v in chosen:
            k = self.rng.randrange(0, len(v))
            out.append(FiniteWord(self.oracle.alphabet,
                                  tuple(self.rng.choice(letters) for _ in range(k))))
        return out


class ConstantDuplicator(_Strategy):
    """Always answers the same word, inside a-runs just long enough for it."""

    def __init__(self, text: str = "a"):
        self.text = text

    def round2(self, family: IntervalFamily):
        need = len(self.text) + 1
        pairs = []
        pos = -1
        for _ in range(self.horizon):
            w = family.next_after(pos)
            run = next_letter_run(self.word, "a", need, w.last + 1)
            if run is None:
                return Forfeit(f"no all-a interval of size {need} remains")
            s, _ = run
            v = Interval(s, s + need - 1)
            pairs.append((w, v))
            pos = v.last
        return pairs

    def round4(self, w_words, chosen):
        return [finite_word(self.text, self.oracle.alphabet)
                for _ in range(self.horizon)]


def duplicator_copy_strategy(scan_budget: int = 10 ** 6) -> CopyDuplicator:
    return CopyDuplicator(scan_budget)


# ---------------------------------------------------------------------------
# spoiler strategies


class RandomSpoiler(_Strategy):
    """Random disjoint intervals, random short words, random legal scheme."""

    def __init__(self, rng):
        self.rng = rng

    def round1(self):
        rng = self.rng
        items: list[Interval] = []

        def nth(i: int) -> Interval:
            while len(items) < i:
                start = (items[-1].last + rng.randint(1, 4)) if items else rng.randint(0, 3)
                items.append(Interval(start, start + rng.randint(0, 4)))
            return items[i - 1]

        return IntervalFamily(nth, "random sizes 1-5, gaps 1-4")

    def round3(self, selected):
        letters = self.oracle.alphabet.letters
        out = []
        for w in selected:
            k = self.rng.randrange(0, len(w))
            out.append(FiniteWord(self.oracle.alphabet,
                                  tuple(self.rng.choice(letters) for _ in range(k))))
        return out

    def round5(self, w_words, v_words):
        n = self.horizon
        k = self.rng.randint(1, min(3, n))
        h = self.rng.randint(0, min(2, n - k))
        seq = sorted(self.rng.sample(range(1, n + 1), h + k))
        return IndexScheme(tuple(seq[:h]), tuple(seq[h:]))


class DivergingSpoiler(_Strategy):
    """The structural winning recipe for words with bounded a-runs.

    Round 1 makes the interval sizes diverge (size i at the i-th interval),
    which caps any Duplicator's vocabulary when a-runs are bounded.  Round 3
    cycles through all short words so every one of them recurs.  Round 5
    reconstructs Duplicator's response function from the observed rounds,
    asks the oracle's violation finder for a pair of product-separated
    sequences against it, and realizes that witness inside the transcript;
    when the witness needs rounds beyond the horizon, a direct scheme search
    over the materialized rounds stands in (noted in the transcript).
    """

    def __init__(self, vocab_bound: int = 2):
        self.vocab_bound = vocab_bound

    def begin(self, word, oracle, horizon):
        super().begin(word, oracle, horizon)
        if not getattr(oracle, "has_violation_finder", False):
            raise UnsupportedWordError(
                f"the diverging strategy needs an oracle with a violation finder, "
                f"not {getattr(oracle, 'name', '?')}")

    def round1(self):
        def nth(i: int) -> Interval:
            start = (i - 1) * (i + 2) // 2
            return Interval(start, start + i - 1)

        return IntervalFamily(nth, "sizes 1,2,3,... with unit gaps")

    def round3(self, selected):
        vocab = _words_length_lex(self.oracle.alphabet, self.vocab_bound)
        out = []
        p = 0
        for w in selected:
            for step in range(len(vocab)):
                cand = vocab[(p + step) % len(vocab)]
                if len(cand) < len(w):
                    out.append(cand)
                    p = (p + step + 1) % len(vocab)
                    break
            else:
                out.append(FiniteWord(self.oracle.alphabet, ()))
        return out

    def round5(self, w_words, v_words):
        scheme = self._realize_witness(w_words, v_words)
        if scheme is not None:
            return scheme
        scheme = self._scheme_search(w_words, v_words)
        if scheme is not None:
            self.notes.append("witness not realizable within horizon; "
                              "direct scheme search succeeded")
            return scheme
        self.notes.append("horizon insufficient: no separating scheme found")
        return IndexScheme((), (self.horizon,))

    def _realize_witness(self, w_words, v_words) -> Optional[IndexScheme]:
        c = _response_classifier(self.oracle.alphabet, w_words, v_words)
        witness = self.oracle.find_condition2_violation(c)
        if not isinstance(witness.original, PeriodicWordSequence):
            self.notes.append("witness sequence is not eventually periodic")
            return None
        head, cycle = witness.original.head, witness.original.cycle
        targets = list(head) + list(cycle)
        indices = []
        nxt = 1
        for tgt in targets:
            for i in range(nxt, self.horizon + 1):
                if w_words[i - 1].letters == tgt.letters:
                    indices.append(i)
                    nxt = i + 1
                    break
            else:
                return None
        scheme = IndexScheme(tuple(indices[:len(head)]), tuple(indices[len(head):]))
        if self._separates(scheme, w_words, v_words):
            self.notes.append("violation witness realized in the transcript")
            return scheme
        return None

    def _scheme_search(self, w_words, v_words) -> Optional[IndexScheme]:
        n = self.horizon
        singles = [IndexScheme((), (i,)) for i in range(1, n + 1)]
        pairs = [IndexScheme((), (i, j))
                 for i in range(1, n + 1) for j in range(i + 1, n + 1)]
        for scheme in singles + pairs:
            if self._separates(scheme, w_words, v_words):
                return scheme
        return None

    def _separates(self, scheme, w_words, v_words) -> bool:
        sw = PeriodicWordSequence(tuple(w_words[i - 1] for i in scheme.head),
                                  tuple(w_words[i - 1] for i in scheme.cycle))
        sv = PeriodicWordSequence(tuple(v_words[i - 1] for i in scheme.head),
                                  tuple(v_words[i - 1] for i in scheme.cycle))
        try:
            mw, _ = product_member(self.oracle, sw)
            mv, _ = product_member(self.oracle, sv)
        except UnsupportedWordError:
            return False
        return mw != mv


def spoiler_diverging_strategy(oracle=None, vocab_bound: int = 2) -> DivergingSpoiler:
    # the oracle argument is informational; begin() receives it again
    return DivergingSpoiler(vocab_bound)


def _words_length_lex(alpha: Alphabet, bound: int) -> list[FiniteWord]:
    out = [FiniteWord(alpha, ())]
    layer: list[tuple[str, ...]] = [()]
    for _ in range(bound):
        layer = [w + (x,) for w in layer for x in alpha]
        out.extend(FiniteWord(alpha, w) for w in layer)
    return out


def _response_classifier(alpha: Alphabet, w_words, v_words) -> Classifier:
    """Duplicator's observed response function, as a total classifier.

    The kernel of w_i -> v_i (most frequent response per word, earliest on
    ties), presented as a prefix tree over the observed words; unobserved
    words inherit the class of their longest observed ancestor, and
    everything beyond the tree falls into a sink with the overall most
    common class.
    """
    counts: dict = {}
    for w, v in zip(w_words, v_words):
        counts.setdefault(w.letters, Counter())[v.text()] += 1
    f = {}
    for w, cnt in counts.items():
        best = max(cnt.items(), key=lambda kv: kv[1])
        f[w] = best[0]
    overall = Counter(f.values())
    default = overall.most_common(1)[0][0] if overall else "eps"

    nodes = {()}
    for w in f:
        for k in range(len(w) + 1):
            nodes.add(w[:k])
    node_list = sorted(nodes, key=lambda p: (len(p), p))
    classes = {}
    for p in node_list:
        if p in f:
            classes[p] = f[p]
        elif p == ():
            classes[p] = default
        else:
            classes[p] = classes[p[:-1]]
    sink = ("#sink",)
    delta = {}
    for p in node_list:
        for x in alpha:
            q = p + (x,)
            delta[(p, x)] = q if q in nodes else sink
    for x in alpha:
        delta[(sink, x)] = sink
    all_states = node_list + [sink]
    classes[sink] = default
    return classifier(alpha, all_states, (), delta, classes)


# ---------------------------------------------------------------------------
# registries and serialization


def get_spoiler(name: str, rng=None):
    if name == "random":
        if rng is None:
            raise FormatError("the random spoiler needs a seeded rng")
        return RandomSpoiler(rng)
    if name == "diverging":
        return DivergingSpoiler()
    raise FormatError(f"unknown spoiler strategy {name!r}")


def get_duplicator(name: str, rng=None):
    if name == "copy":
        return CopyDuplicator()
    if name == "random":
        if rng is None:
            raise FormatError("the random duplicator needs a seeded rng")
        return RandomDuplicator(rng)
    if name.startswith("constant"):
        text = name.split(":", 1)[1] if ":" in name else "a"
        return ConstantDuplicator(text)
    raise FormatError(f"unknown duplicator strategy {name!r}")


def transcript_to_json(t: GameTranscript, move_alphabet: Optional[Alphabet] = None) -> str:
    if move_alphabet is None:
        move_alphabet = (t.spoiler_words[0].alphabet if t.spoiler_words
                         else t.word.alphabet)

    def iv(x: Interval):
        return [x.first, x.last]

    doc = {
        "word": format_word(t.word),
        "word_alphabet": list(t.word.alphabet.letters),
        "move_alphabet": list(move_alphabet.letters),
        "horizon": t.horizon,
        "oracle": t.oracle_name,
        "family": [iv(x) for x in t.family],
        "family_note": t.family_note,
        "selected": [iv(x) for x in t.selected],
        "chosen": [iv(x) for x in t.chosen],
        "spoiler_words": [w.text() for w in t.spoiler_words],
        "duplicator_words": [w.text() for w in t.duplicator_words],
        "scheme": None if t.scheme is None else {
            "head": list(t.scheme.head), "cycle": list(t.scheme.cycle)},
        "forfeit": None if t.forfeit is None else list(t.forfeit),
        "verdicts": None if t.verdicts is None else list(t.verdicts),
        "verdict_notes": list(t.verdict_notes),
        "winner": t.winner,
        "adjudication_error": t.adjudication_error,
        "notes": list(t.notes),
    }
    return json.dumps(doc, indent=2, sort_keys=True)


def transcript_from_json(text: str) -> GameTranscript:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(f"not a transcript: {e}") from None
    walpha = alphabet(doc["word_alphabet"])
    malpha = alphabet(doc["move_alphabet"])

    def fw(s: str) -> FiniteWord:
        return finite_word(() if s == "eps" else s, malpha)

    scheme = doc["scheme"]
    return GameTranscript(
        word=parse_word(doc["word"], walpha),
        horizon=doc["horizon"],
        oracle_name=doc["oracle"],
        family=tuple(Interval(a, b) for a, b in doc["family"]),
        family_note=doc["family_note"],
        selected=tuple(Interval(a, b) for a, b in doc["selected"]),
        chosen=tuple(Interval(a, b) for a, b in doc["chosen"]),
        spoiler_words=tuple(fw(s) for s in doc["spoiler_words"]),
        duplicator_words=tuple(fw(s) for s in doc["duplicator_words"]),
        scheme=None if scheme is None else IndexScheme(
            tuple(scheme["head"]), tuple(scheme["cycle"])),
        forfeit=None if doc["forfeit"] is None else tuple(doc["forfeit"]),
        verdicts=None if doc["verdicts"] is None else tuple(doc["verdicts"]),
        verdict_notes=tuple(doc["verdict_notes"]),
        winner=doc["winner"],
        adjudication_error=doc["adjudication_error"],
        notes=tuple(doc["notes"]),
    )

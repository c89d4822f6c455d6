"""Finite classifiers of finite words and congruence checks against them.

A Classifier is a total deterministic automaton whose states are labeled
with class names; it presents a finite-index equivalence on finite words
(two words are equivalent when they reach states with the same label).

For an equivalence to recognize a language of infinite words it must
(1) be compatible with concatenation on both sides, and
(2) never change membership of an infinite product when each factor is
    replaced by an equivalent word.

Condition (1) is decidable exactly from the classifier and `check_condition1`
decides it, returning a smallest violating instance; `lemma_repair` merges
the offending classes until the check passes, which takes at most
(index - 1) merges since every merge lowers the class count by one.
Condition (2) quantifies over all sequences of finite words, so only a
bounded search is offered; language oracles may ship an unbounded finder for
their own structure (see the oracles module).

The bounded congruences of an infinite-word language itself (two-sided with
lasso tails and infinite products, or right with lasso tails only) are
sampled the same way: all context instantiations up to a length bound.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Hashable, Iterable, Optional, Sequence, Union

from .buchi import BuchiAutomaton, _letter_profile, compose_profiles, transition_monoid
from .errors import (
    BudgetExceededError,
    DegenerateErasureError,
    DegenerateProductError,
    FormatError,
)
from .words import (
    AffineLengths,
    Alphabet,
    BlockWord,
    FiniteWord,
    UPWord,
    Word,
    canonical,
    omega_product,
)

State = Hashable


@dataclass(frozen=True, eq=False)
class Classifier:
    alphabet: Alphabet
    states: tuple[State, ...]
    initial: State
    delta: frozenset  # (state, letter, state), deterministic and total
    classes: tuple[tuple[State, str], ...]  # state -> class name, every state

    def __post_init__(self):
        declared = set(self.states)
        if len(declared) != len(self.states):
            raise FormatError("duplicate state")
        if self.initial not in declared:
            raise FormatError("initial state not declared")
        seen_edges = {}
        for (q, a, d) in self.delta:
            if q not in declared or d not in declared:
                raise FormatError("transition uses undeclared state")
            if a not in self.alphabet:
                raise FormatError(f"transition letter {a!r} not in alphabet")
            if (q, a) in seen_edges:
                raise FormatError(f"nondeterministic transition at {(q, a)!r}")
            seen_edges[(q, a)] = d
        for q in self.states:
            for a in self.alphabet:
                if (q, a) not in seen_edges:
                    raise FormatError(f"missing transition at {(q, a)!r}")
        labeled = {q for q, _ in self.classes}
        if labeled != declared or len(self.classes) != len(self.states):
            raise FormatError("classes must label every state exactly once")
        reachable_ids = {self.class_of_state(q) for q in self.reachable}
        all_ids = {c for _, c in self.classes}
        if reachable_ids != all_ids:
            raise FormatError("every class name must label some reachable state")

    def __eq__(self, other):
        if not isinstance(other, Classifier):
            return NotImplemented
        return (self.alphabet, self.states, self.initial, self.delta, self.classes) == \
               (other.alphabet, other.states, other.initial, other.delta, other.classes)

    def __hash__(self):
        return hash((self.alphabet, self.states, self.initial))

    @cached_property
    def _delta_map(self) -> dict:
        return {(q, a): d for (q, a, d) in self.delta}

    @cached_property
    def _class_map(self) -> dict:
        return dict(self.classes)

    @cached_property
    def reachable(self) -> tuple[State, ...]:
        seen = {self.initial}
        frontier = [self.initial]
        while frontier:
            q = frontier.pop()
            for a in self.alphabet:
                d = self._delta_map[(q, a)]
                if d not in seen:
                    seen.add(d)
                    frontier.append(d)
        return tuple(q for q in self.states if q in seen)

    def step(self, q: State, a: str) -> State:
        return self._delta_map[(q, a)]

    def state_after(self, letters: Sequence[str], start: Optional[State] = None) -> State:
        q = self.initial if start is None else start
        for a in letters:
            q = self._delta_map[(q, a)]
        return q

    def class_of_state(self, q: State) -> str:
        return self._class_map[q]

    def classify(self, letters: Sequence[str]) -> str:
        return self._class_map[self.state_after(letters)]

    def equivalent(self, u: Sequence[str], v: Sequence[str]) -> bool:
        return self.classify(u) == self.classify(v)

    @property
    def index(self) -> int:
        return len({self.class_of_state(q) for q in self.reachable})


def classifier(letters, states: Sequence[State], initial: State,
               delta: Union[dict, Iterable], classes: dict) -> Classifier:
    from .words import alphabet as make_alphabet
    alpha = letters if isinstance(letters, Alphabet) else make_alphabet(letters)
    if isinstance(delta, dict):
        edges = frozenset((q, a, d) for (q, a), d in delta.items())
    else:
        edges = frozenset(delta)
    return Classifier(alpha, tuple(states), initial, edges,
                      tuple(sorted(classes.items(), key=lambda kv: str(kv[0]))))


# ---------------------------------------------------------------------------
# shortest representatives


def state_representatives(c: Classifier) -> dict:
    """Shortest (length-lexicographic) word reaching each reachable state."""
    reps = {c.initial: ()}
    frontier = [c.initial]
    while frontier:
        nxt = []
        for q in frontier:
            for a in c.alphabet:
                d = c.step(q, a)
                if d not in reps:
                    reps[d] = reps[q] + (a,)
                    nxt.append(d)
        frontier = nxt
    return reps


def class_representatives(c: Classifier) -> dict:
    """Shortest (length-lexicographic) word per class name."""
    state_reps = state_representatives(c)
    out: dict = {}
    for q, letters in sorted(state_reps.items(), key=lambda kv: (len(kv[1]), kv[1])):
        name = c.class_of_state(q)
        if name not in out:
            out[name] = FiniteWord(c.alphabet, letters)
    return out


# ---------------------------------------------------------------------------
# condition (1): concatenation compatibility, decided exactly


@dataclass(frozen=True)
class Condition1Violation:
    """u and u' are classified alike, yet appending (side "right") or
    prepending (side "left") the context word w separates them."""

    side: str
    u: FiniteWord
    u_prime: FiniteWord
    w: FiniteWord
    class_before: str
    classes_after: tuple[str, str]

    def contexts(self) -> tuple[tuple[str, ...], tuple[str, ...]]:
        if self.side == "right":
            return (self.u.letters + self.w.letters, self.u_prime.letters + self.w.letters)
        return (self.w.letters + self.u.letters, self.w.letters + self.u_prime.letters)


def _right_violations(c: Classifier) -> list[Condition1Violation]:
    reps = state_representatives(c)
    order = list(c.reachable)
    found = []
    for i, p in enumerate(order):
        for q in order[i + 1:]:
            if c.class_of_state(p) != c.class_of_state(q):
                continue
            # BFS on state pairs for a separating suffix
            start = (p, q)
            back: dict = {start: None}
            frontier = [start]
            hit = None
            while frontier and hit is None:
                nxt = []
                for (s, t) in frontier:
                    for a in c.alphabet:
                        s2, t2 = c.step(s, a), c.step(t, a)
                        key = (s2, t2)
                        if key in back:
                            continue
                        back[key] = ((s, t), a)
                        if c.class_of_state(s2) != c.class_of_state(t2):
                            hit = key
                            break
                        nxt.append(key)
                    if hit:
                        break
                frontier = nxt
            if hit is None:
                continue
            letters: list[str] = []
            node = hit
            while back[node] is not None:
                node, a = back[node]
                letters.append(a)
            w = tuple(reversed(letters))
            u, u2 = sorted((reps[p], reps[q]), key=lambda x: (len(x), x))
            found.append(Condition1Violation(
                "right", FiniteWord(c.alphabet, u), FiniteWord(c.alphabet, u2),
                FiniteWord(c.alphabet, w), c.class_of_state(p),
                (c.classify(u + w), c.classify(u2 + w))))
    return found


def _transformation_monoid(c: Classifier, budget: int) -> list[tuple[tuple, tuple[str, ...]]]:
    """All state transformations induced by words, with shortest witnesses.

    Transformations are tuples over the reachable states (in declared order);
    the identity, witnessed by the empty word, comes first.
    """
    order = list(c.reachable)
    pos = {q: i for i, q in enumerate(order)}
    ident = tuple(range(len(order)))
    letter_fn = {}
    for a in c.alphabet:
        letter_fn[a] = tuple(pos[c.step(q, a)] for q in order)
    elements = {ident: ()}
    queue = [ident]
    while queue:
        g = queue.pop(0)
        for a in c.alphabet:
            f = letter_fn[a]
            h = tuple(f[g[i]] for i in range(len(order)))
            if h not in elements:
                if len(elements) >= budget:
                    raise BudgetExceededError(
                        f"classifier transformation monoid exceeded {budget} elements")
                elements[h] = elements[g] + (a,)
                queue.append(h)
    return [(g, w) for g, w in elements.items()]


def _left_violations(c: Classifier, budget: int) -> list[Condition1Violation]:
    order = list(c.reachable)
    pos = {q: i for i, q in enumerate(order)}
    reps = state_representatives(c)
    elements = _transformation_monoid(c, budget)
    init = pos[c.initial]
    by_class: dict = {}
    for g, wit in elements:
        by_class.setdefault(c.class_of_state(order[g[init]]), []).append((g, wit))
    found = []
    for group in by_class.values():
        group.sort(key=lambda gw: (len(gw[1]), gw[1]))
        for i, (g, wu) in enumerate(group):
            for (h, wu2) in group[i + 1:]:
                for s_idx, s in enumerate(order):
                    cg = c.class_of_state(order[g[s_idx]])
                    ch = c.class_of_state(order[h[s_idx]])
                    if cg != ch:
                        w = reps[s]
                        found.append(Condition1Violation(
                            "left", FiniteWord(c.alphabet, wu),
                            FiniteWord(c.alphabet, wu2), FiniteWord(c.alphabet, w),
                            c.classify(wu), (cg, ch)))
                        break
    return found


def check_condition1(c: Classifier, *, budget: int = 200000) -> Optional[Condition1Violation]:
    """Exact concatenation-compatibility check.

    Returns None when appending or prepending any word preserves the
    classifier's equivalence, else a violating instance.  Among all found
    violations the smallest is returned, ordered by total witness length,
    then by side (right before left), then by the words themselves.
    """
    found = _right_violations(c) + _left_violations(c, budget)
    if not found:
        return None
    return min(found, key=lambda v: (
        len(v.u) + len(v.u_prime) + len(v.w),
        v.side != "right",
        v.u.letters, v.u_prime.letters, v.w.letters))


def lemma_repair(c: Classifier, *, budget: int = 200000) -> Classifier:
    """Merge classes until check_condition1 passes.

    Each round merges the two classes separated by the reported violation,
    lowering the class count by one, so at most (index - 1) merges happen.
    """
    merges = 0
    limit = c.index - 1
    while True:
        violation = check_condition1(c, budget=budget)
        if violation is None:
            return c
        assert merges < limit, "merge count exceeded the class count bound"
        x, y = violation.contexts()
        cx, cy = c.classify(x), c.classify(y)
        keep, drop = sorted((cx, cy))
        relabeled = tuple((q, keep if name == drop else name) for q, name in c.classes)
        c = Classifier(c.alphabet, c.states, c.initial, c.delta, relabeled)
        merges += 1


# ---------------------------------------------------------------------------
# word sequences and condition (2)


@dataclass(frozen=True)
class PeriodicWordSequence:
    """u_1, u_2, ... where `head` lists the first few words and `cycle`
    repeats forever after."""

    head: tuple[FiniteWord, ...]
    cycle: tuple[FiniteWord, ...]

    def __post_init__(self):
        if not self.cycle:
            raise FormatError("a periodic word sequence needs a nonempty cycle")

    def nth(self, i: int) -> FiniteWord:
        if i < 1:
            raise IndexError("sequences are 1-indexed")
        if i <= len(self.head):
            return self.head[i - 1]
        return self.cycle[(i - len(self.head) - 1) % len(self.cycle)]

    def product(self) -> UPWord:
        return omega_product(self.head, self.cycle)

    def describe(self) -> str:
        h = " ".join(w.text() for w in self.head)
        cyc = " ".join(w.text() for w in self.cycle)
        return f"[{h} | {cyc} ...]" if h else f"[{cyc} ...]"


@dataclass(frozen=True)
class GrowingBlockSequence:
    """u_i = block^{rate*i + offset} sep: factor lengths grow without bound."""

    alphabet: Alphabet
    block: str
    sep: str
    rate: int
    offset: int

    def nth(self, i: int) -> FiniteWord:
        if i < 1:
            raise IndexError("sequences are 1-indexed")
        k = self.rate * i + self.offset
        return FiniteWord(self.alphabet, (self.block,) * k + (self.sep,))

    def product(self) -> BlockWord:
        return BlockWord(self.alphabet, self.block, self.sep,
                         AffineLengths(self.rate, self.offset))

    def describe(self) -> str:
        return f"[{self.block}^({self.rate}*i+{self.offset}){self.sep} for i = 1, 2, ...]"


WordSequence = Union[PeriodicWordSequence, GrowingBlockSequence]


def product_member(oracle, seq: WordSequence) -> tuple[bool, str]:
    """Membership of an infinite product in the oracle's language.

    Products that are not infinite words (the repeated factors concatenate to
    the empty word, or erasing the oracle's neutral letter leaves a finite
    word) are not members of a language of infinite words; they answer False
    with an explanatory note rather than failing.
    """
    try:
        w = seq.product()
    except DegenerateProductError:
        return (False, "product is a finite word")
    try:
        return (bool(oracle.member(w)), "")
    except DegenerateErasureError:
        return (False, "neutral erasure leaves a finite word")


@dataclass(frozen=True)
class Condition2ViolationWitness:
    """A sequence of factors, the classifier-equivalent replacement sequence,
    and the two products the oracle tells apart."""

    original: WordSequence
    replaced: WordSequence
    original_product: Word
    replaced_product: Optional[Word]
    original_member: bool
    replaced_member: bool
    note: str = ""


def validate_condition2_witness(c: Classifier, oracle, witness: Condition2ViolationWitness,
                                *, indices: int = 12) -> bool:
    """Re-derive everything the witness claims: per-index equivalence of the
    two sequences over a documented range, and both membership verdicts."""
    for i in range(1, indices + 1):
        u, r = witness.original.nth(i), witness.replaced.nth(i)
        if not c.equivalent(u.letters, r.letters):
            return False
    om, _ = product_member(oracle, witness.original)
    rm, _ = product_member(oracle, witness.replaced)
    return (om, rm) == (witness.original_member, witness.replaced_member) and om != rm


def _words_up_to(alpha: Alphabet, n: int) -> list[FiniteWord]:
    out = [FiniteWord(alpha, ())]
    layer: list[tuple[str, ...]] = [()]
    for _ in range(n):
        layer = [w + (a,) for w in layer for a in alpha]
        out.extend(FiniteWord(alpha, w) for w in layer)
    return out


def check_condition2_bounded(c: Classifier, oracle, *, word_bound: int,
                             cycle_bound: int, head_bound: int = 1,
                             ) -> Optional[Condition2ViolationWitness]:
    """Bounded search for a product-recognition violation.

    Enumerates eventually periodic factor sequences (factors up to
    `word_bound` letters, head/cycle up to the given lengths), replaces each
    factor by its class's shortest representative, and compares the oracle's
    verdicts on the two products.  Returns the first (in enumeration order)
    validated witness, or None.
    """
    reps = class_representatives(c)
    words = _words_up_to(c.alphabet, word_bound)
    replacement = {w.letters: reps[c.classify(w.letters)] for w in words}

    def heads():
        for h in range(head_bound + 1):
            yield from itertools.product(words, repeat=h)

    def cycles():
        for k in range(1, cycle_bound + 1):
            yield from itertools.product(words, repeat=k)

    all_cycles = list(cycles())
    for head in heads():
        for cycle in all_cycles:
            factors = head + cycle
            if all(replacement[w.letters].letters == w.letters for w in factors):
                continue
            original = PeriodicWordSequence(head, cycle)
            replaced = PeriodicWordSequence(
                tuple(replacement[w.letters] for w in head),
                tuple(replacement[w.letters] for w in cycle))
            om, note_o = product_member(oracle, original)
            rm, note_r = product_member(oracle, replaced)
            if om == rm:
                continue
            witness = Condition2ViolationWitness(
                original, replaced,
                original.product(),
                _product_or_none(replaced),
                om, rm, note_o or note_r)
            if validate_condition2_witness(c, oracle, witness):
                return witness
    return None


def _product_or_none(seq: WordSequence) -> Optional[Word]:
    try:
        return seq.product()
    except DegenerateProductError:
        return None


# ---------------------------------------------------------------------------
# classifiers from automata


def profile_kernel_classifier(a: BuchiAutomaton, *, budget: int = 50000) -> Classifier:
    """The classifier whose states are the automaton's transition profiles,
    each its own class.  Words are equivalent exactly when their profiles
    coincide, which is compatible with concatenation by construction."""
    m = transition_monoid(a, budget=budget)
    ident_key = m.identity.key
    names: dict = {ident_key: "e"}
    for i, p in enumerate(m.elements):
        if p.key not in names:
            names[p.key] = f"m{i}"
    states = list(names.values())
    delta = {}
    letter_profiles = {x: _letter_profile(a, x) for x in a.alphabet}
    key_to_profile = {m.identity.key: m.identity}
    for p in m.elements:
        key_to_profile[p.key] = p
    for key, name in names.items():
        p = key_to_profile[key]
        for x in a.alphabet:
            q = compose_profiles(p, letter_profiles[x])
            delta[(name, x)] = names[q.key]
    classes = {name: name for name in states}
    return classifier(a.alphabet, states, "e", delta, classes)


# ---------------------------------------------------------------------------
# bounded congruences of an infinite-word language


def _contexts_up_to(alpha: Alphabet, bound: int):
    """All lasso tails x (y)^omega with |x| <= bound, 1 <= |y| <= bound."""
    finite = [w.letters for w in _words_up_to(alpha, bound)]
    tails = []
    for x in finite:
        for y in finite:
            if y:
                tails.append((x, y))
    return finite, tails


def arnold_equiv_bounded(oracle, u: FiniteWord, u_prime: FiniteWord, *,
                         context_bound: int,
                         member: Optional[Callable[[UPWord], bool]] = None) -> bool:
    """Bounded two-sided congruence with lasso tails and infinite powers.

    Tests every context w _ x(y)^omega and every power w(_ v)^omega with the
    pieces bounded by `context_bound`.  Power contexts where either side's
    repeated word is empty are skipped (the product is not an infinite word).
    """
    alpha = u.alphabet
    if member is None:
        member = oracle.member
    finite, tails = _contexts_up_to(alpha, context_bound)
    for w in finite:
        for v in finite:
            uv, u2v = u.letters + v, u_prime.letters + v
            if not uv or not u2v:
                continue
            if member(UPWord(alpha, w, uv)) != member(UPWord(alpha, w, u2v)):
                return False
    for w in finite:
        for (x, y) in tails:
            left = UPWord(alpha, w + u.letters + x, y)
            right = UPWord(alpha, w + u_prime.letters + x, y)
            if member(left) != member(right):
                return False
    return True


def right_congruence_bounded(oracle, u: FiniteWord, u_prime: FiniteWord, *,
                             context_bound: int,
                             member: Optional[Callable[[UPWord], bool]] = None) -> bool:
    """Bounded right congruence: only lasso tails u _ x(y)^omega are tested."""
    alpha = u.alphabet
    if member is None:
        member = oracle.member
    _, tails = _contexts_up_to(alpha, context_bound)
    for (x, y) in tails:
        if member(UPWord(alpha, u.letters + x, y)) != \
           member(UPWord(alpha, u_prime.letters + x, y)):
            return False
    return True


@dataclass(frozen=True)
class BoundedPartition:
    """Classes of words up to the word bound, under one bounded congruence.

    Bounded verdicts need not be transitive (the unbounded relations are);
    any failures are surfaced in `non_transitive` rather than repaired, and
    the classes are then the transitive closure of the pairwise verdicts.
    """

    classes: tuple[tuple[FiniteWord, ...], ...]
    non_transitive: tuple[tuple[FiniteWord, FiniteWord, FiniteWord], ...]


def _partition(words: list[FiniteWord], equiv: Callable) -> BoundedPartition:
    n = len(words)
    verdict = [[True] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            verdict[i][j] = verdict[j][i] = equiv(words[i], words[j])
    bad = []
    for i in range(n):
        for j in range(n):
            if i == j or not verdict[i][j]:
                continue
            for k in range(n):
                if k != i and k != j and verdict[j][k] and not verdict[i][k]:
                    bad.append((words[i], words[j], words[k]))
    # transitive closure via union-find
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if verdict[i][j]:
                parent[find(i)] = find(j)
    groups: dict = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(words[i])
    classes = tuple(tuple(g) for g in groups.values())
    return BoundedPartition(classes, tuple(bad[:10]))


def _memo_member(oracle):
    cache: dict = {}

    def member(w: UPWord) -> bool:
        c = canonical(w)
        key = (c.prefix, c.period)
        got = cache.get(key)
        if got is None:
            got = bool(oracle.member(c))
            cache[key] = got
        return got

    return member


def arnold_classes_bounded(oracle, *, word_bound: int, context_bound: int) -> BoundedPartition:
    """Partition all words up to `word_bound` letters by the bounded
    two-sided congruence of the oracle's language."""
    alpha = oracle.alphabet
    words = _words_up_to(alpha, word_bound)
    member = _memo_member(oracle)
    return _partition(words, lambda u, v: arnold_equiv_bounded(
        oracle, u, v, context_bound=context_bound, member=member))


def right_classes_bounded(oracle, *, word_bound: int, context_bound: int) -> BoundedPartition:
    """Partition all words up to `word_bound` letters by the bounded right
    congruence of the oracle's language."""
    alpha = oracle.alphabet
    words = _words_up_to(alpha, word_bound)
    member = _memo_member(oracle)
    return _partition(words, lambda u, v: right_congruence_bounded(
        oracle, u, v, context_bound=context_bound, member=member))


# ---------------------------------------------------------------------------
# text format: the automaton format plus one `class q c` line per state


def parse_classifier(text: str) -> Classifier:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if len(lines) < 3:
        raise FormatError("classifier file needs alphabet/states/initial lines")
    heads = {}
    for i, key in enumerate(("alphabet", "states", "initial")):
        parts = lines[i].split()
        if not parts or parts[0] != key:
            raise FormatError(f"line {i + 1} must start with '{key}'")
        heads[key] = parts[1:]
    if len(heads["initial"]) != 1:
        raise FormatError("classifiers have exactly one initial state")
    classes: dict = {}
    delta = {}
    for ln in lines[3:]:
        parts = ln.split()
        if parts[0] == "class":
            if len(parts) != 3:
                raise FormatError(f"bad class line {ln!r}")
            classes[parts[1]] = parts[2]
        elif len(parts) == 3:
            if (parts[0], parts[1]) in delta:
                raise FormatError(f"duplicate transition at {(parts[0], parts[1])!r}")
            delta[(parts[0], parts[1])] = parts[2]
        else:
            raise FormatError(f"bad line {ln!r}")
    return classifier(Alphabet(tuple(heads["alphabet"])), tuple(heads["states"]),
                      heads["initial"][0], delta, classes)


def format_classifier(c: Classifier) -> str:
    for q in c.states:
        if not isinstance(q, str) or not q or any(ch.isspace() for ch in q):
            raise FormatError("serialization needs string state names")
    idx = {q: i for i, q in enumerate(c.states)}
    lines = [
        "alphabet " + " ".join(c.alphabet.letters),
        "states " + " ".join(c.states),
        "initial " + str(c.initial),
    ]
    lines += [f"class {q} {c.class_of_state(q)}" for q in c.states]
    lines += [f"{q} {a} {c.step(q, a)}"
              for q in c.states for a in c.alphabet.letters]
    return "\n".join(lines) + "\n"

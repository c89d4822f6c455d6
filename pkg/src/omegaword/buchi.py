"""Nondeterministic Buchi automata over finite alphabets.

Supported operations: membership of lasso words, emptiness with a lasso
witness, union, intersection, complementation, and letter-to-letter
relabelings.  Complementation goes through the automaton's transition
profiles: the profile of a finite word records, per state pair, whether the
word admits a path, and whether it admits a path through an accepting state
(endpoints included).  Profiles of all nonempty words form a finite monoid;
pairs (s, t) with s*t = s and t*t = t classify every infinite word, and the
complement is the union of the word classes of the non-accepting pairs.

The textual format, one automaton per file::

    alphabet a b
    states q0 q1
    initial q0
    accepting q1
    q0 a q0
    q0 a q1

Header lines in that order, then one `source letter target` line per
transition.  Serialization is the exact inverse of parsing for automata
whose states are strings.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Hashable, Iterable, Optional, Sequence

import numpy as np

from .errors import AlphabetMismatchError, BudgetExceededError, FormatError
from .words import Alphabet, FiniteWord, Homomorphism, UPWord
from .words import alphabet as make_alphabet

State = Hashable
Transition = tuple[State, str, State]

DEFAULT_STATE_BUDGET = 10**6


@dataclass(frozen=True, eq=False)
class BuchiAutomaton:
    alphabet: Alphabet
    states: tuple[State, ...]
    initial: frozenset
    accepting: frozenset
    transitions: frozenset

    def __post_init__(self):
        declared = set(self.states)
        if len(declared) != len(self.states):
            raise FormatError("duplicate state")
        for q in self.initial | self.accepting:
            if q not in declared:
                raise FormatError(f"undeclared state {q!r}")
        for src, letter, dst in self.transitions:
            if src not in declared or dst not in declared:
                raise FormatError(f"transition uses undeclared state: {(src, letter, dst)!r}")
            if letter not in self.alphabet:
                raise FormatError(f"transition letter {letter!r} not in alphabet")

    def __eq__(self, other):
        if not isinstance(other, BuchiAutomaton):
            return NotImplemented
        return (self.alphabet == other.alphabet and self.states == other.states
                and self.initial == other.initial and self.accepting == other.accepting
                and self.transitions == other.transitions)

    def __hash__(self):
        return hash((self.alphabet, self.states, self.initial, self.accepting))

    @cached_property
    def _index(self) -> dict:
        return {q: i for i, q in enumerate(self.states)}

    @cached_property
    def _adj(self) -> dict:
        """(state, letter) -> targets, sorted by declared state order."""
        table: dict = {}
        for src, letter, dst in self.transitions:
            table.setdefault((src, letter), []).append(dst)
        return {k: tuple(sorted(v, key=self._index.__getitem__)) for k, v in table.items()}

    def post(self, q: State, letter: str) -> tuple[State, ...]:
        return self._adj.get((q, letter), ())

    def step(self, source: Iterable[State], letter: str) -> frozenset:
        out: set = set()
        for q in source:
            out.update(self.post(q, letter))
        return frozenset(out)

    def run_word(self, source: Iterable[State], letters: Sequence[str]) -> frozenset:
        current = frozenset(source)
        for a in letters:
            current = self.step(current, a)
        return current


def automaton(letters, states: Sequence[State], initial: Iterable[State],
              accepting: Iterable[State], transitions: Iterable[Transition]) -> BuchiAutomaton:
    alpha = letters if isinstance(letters, Alphabet) else make_alphabet(letters)
    return BuchiAutomaton(alpha, tuple(states), frozenset(initial),
                          frozenset(accepting), frozenset(transitions))


# ---------------------------------------------------------------------------
# reachability, SCCs, membership, emptiness


def reachable_fragment(a: BuchiAutomaton) -> BuchiAutomaton:
    """Restrict to states reachable from the initial set (declared order kept)."""
    seen = set(a.initial)
    frontier = list(a.initial)
    while frontier:
        q = frontier.pop()
        for letter in a.alphabet:
            for dst in a.post(q, letter):
                if dst not in seen:
                    seen.add(dst)
                    frontier.append(dst)
    states = tuple(q for q in a.states if q in seen)
    trans = frozenset((s, x, d) for s, x, d in a.transitions if s in seen and d in seen)
    return BuchiAutomaton(a.alphabet, states, a.initial, a.accepting & seen, trans)


def _sccs(nodes: Sequence, adj: dict) -> list[list]:
    """Tarjan's algorithm, iterative.  `adj` maps node -> iterable of nodes."""
    index: dict = {}
    low: dict = {}
    on_stack: set = set()
    stack: list = []
    result: list[list] = []
    counter = 0
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(adj.get(root, ())))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            node, it = work[-1]
            advanced = False
            for nxt in it:
                if nxt not in index:
                    index[nxt] = low[nxt] = counter
                    counter += 1
                    stack.append(nxt)
                    on_stack.add(nxt)
                    work.append((nxt, iter(adj.get(nxt, ()))))
                    advanced = True
                    break
                elif nxt in on_stack:
                    low[node] = min(low[node], index[nxt])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                comp = []
                while True:
                    q = stack.pop()
                    on_stack.discard(q)
                    comp.append(q)
                    if q == node:
                        break
                result.append(comp)
    return result


def _cycle_nodes(nodes: Sequence, adj: dict) -> set:
    """Nodes lying on some cycle of the graph."""
    out: set = set()
    for comp in _sccs(nodes, adj):
        if len(comp) > 1:
            out.update(comp)
        else:
            q = comp[0]
            if q in adj and q in set(adj[q]):
                out.add(q)
    return out


def accepts_up(a: BuchiAutomaton, w: UPWord) -> bool:
    """Does the automaton accept the lasso word ``prefix . period^omega``?

    Decided on the product of the automaton with the period positions: the
    word is accepted exactly when, from some state reachable on the prefix,
    the product reaches an accepting node that lies on a cycle.
    """
    if w.alphabet != a.alphabet:
        raise AlphabetMismatchError("word and automaton alphabets differ")
    after_prefix = a.run_word(a.initial, w.prefix)
    if not after_prefix:
        return False
    n = len(w.period)
    start_nodes = [(q, 0) for q in after_prefix]
    adj: dict = {}
    seen = set(start_nodes)
    frontier = list(start_nodes)
    while frontier:
        q, i = frontier.pop()
        nxt = [(d, (i + 1) % n) for d in a.post(q, w.period[i])]
        adj[(q, i)] = nxt
        for node in nxt:
            if node not in seen:
                seen.add(node)
                frontier.append(node)
    cyc = _cycle_nodes(list(seen), adj)
    return any(q in a.accepting for (q, i) in cyc)


def is_empty(a: BuchiAutomaton) -> tuple[bool, Optional[UPWord]]:
    """Emptiness with a lasso witness.

    Returns (True, None) for an empty language, else (False, w) where w is an
    accepted lasso word: shortest prefix to the first viable accepting state
    (ties broken by declared order), then a shortest cycle through it.
    """
    frag = reachable_fragment(a)
    adj = {q: sorted({d for letter in frag.alphabet for d in frag.post(q, letter)},
                     key=frag._index.__getitem__)
           for q in frag.states}
    cyc = _cycle_nodes(frag.states, adj)
    targets = [q for q in frag.states if q in frag.accepting and q in cyc]
    if not targets:
        return (True, None)

    def bfs_to(sources: Iterable[State], goal_set: set) -> tuple[State, tuple[str, ...]]:
        paths = {q: () for q in sources}
        frontier = [q for q in frag.states if q in paths]
        for q in frontier:
            if q in goal_set:
                return (q, ())
        while frontier:
            nxt_frontier = []
            for q in frontier:
                for letter in frag.alphabet:
                    for d in frag.post(q, letter):
                        if d not in paths:
                            paths[d] = paths[q] + (letter,)
                            nxt_frontier.append(d)
                            if d in goal_set:
                                return (d, paths[d])
            frontier = nxt_frontier
        raise AssertionError("goal set unreachable")

    state, prefix = bfs_to(frag.initial, set(targets))
    # shortest cycle: BFS from the one-step successors of `state` back to it
    best: Optional[tuple[str, ...]] = None
    one_step = []
    for letter in frag.alphabet:
        for d in frag.post(state, letter):
            one_step.append((d, (letter,)))
    paths = {}
    frontier2 = []
    for d, word in one_step:
        if d == state and best is None:
            best = word
        if d not in paths:
            paths[d] = word
            frontier2.append(d)
    while best is None and frontier2:
        nxt_frontier = []
        for q in frontier2:
            for letter in frag.alphabet:
                for d in frag.post(q, letter):
                    if d == state:
                        best = paths[q] + (letter,)
                        break
                    if d not in paths:
                        paths[d] = paths[q] + (letter,)
                        nxt_frontier.append(d)
                if best is not None:
                    break
            if best is not None:
                break
        frontier2 = nxt_frontier
    assert best is not None  # `state` is on a cycle
    return (False, UPWord(a.alphabet, prefix, best))


# ---------------------------------------------------------------------------
# boolean operations


def union(a: BuchiAutomaton, b: BuchiAutomaton) -> BuchiAutomaton:
    if a.alphabet != b.alphabet:
        raise AlphabetMismatchError("union needs a shared alphabet")
    states = tuple((0, q) for q in a.states) + tuple((1, q) for q in b.states)
    trans = {((0, s), x, (0, d)) for s, x, d in a.transitions}
    trans |= {((1, s), x, (1, d)) for s, x, d in b.transitions}
    return BuchiAutomaton(
        a.alphabet, states,
        frozenset({(0, q) for q in a.initial} | {(1, q) for q in b.initial}),
        frozenset({(0, q) for q in a.accepting} | {(1, q) for q in b.accepting}),
        frozenset(trans))


def intersect(a: BuchiAutomaton, b: BuchiAutomaton) -> BuchiAutomaton:
    """Two-phase product: phase 1 waits for an accepting state of `a`, phase 2
    for one of `b`; meeting phase 2's goal is the acceptance condition."""
    if a.alphabet != b.alphabet:
        raise AlphabetMismatchError("intersection needs a shared alphabet")
    states = []
    trans = set()
    for p in a.states:
        for q in b.states:
            states.append((p, q, 1))
            states.append((p, q, 2))
    for (p, x, p2) in a.transitions:
        for (q, y, q2) in b.transitions:
            if x != y:
                continue
            trans.add(((p, q, 1), x, (p2, q2, 2 if p in a.accepting else 1)))
            trans.add(((p, q, 2), x, (p2, q2, 1 if q in b.accepting else 2)))
    initial = frozenset((p, q, 1) for p in a.initial for q in b.initial)
    accepting = frozenset((p, q, 2) for p in a.states for q in b.states if q in b.accepting)
    return reachable_fragment(
        BuchiAutomaton(a.alphabet, tuple(states), initial, accepting, frozenset(trans)))


# ---------------------------------------------------------------------------
# transition profiles and the profile monoid


class Profile:
    """Reachability data of one finite word: ``reach[p, q]`` says a path
    p -> q exists, ``reach_acc[p, q]`` that one exists visiting an accepting
    state (endpoints count)."""

    __slots__ = ("reach", "reach_acc", "key")

    def __init__(self, reach: np.ndarray, reach_acc: np.ndarray):
        self.reach = reach
        self.reach_acc = reach_acc
        self.key = reach.tobytes() + reach_acc.tobytes()

    def __eq__(self, other):
        return isinstance(other, Profile) and self.key == other.key

    def __hash__(self):
        return hash(self.key)


def compose_profiles(p: Profile, q: Profile) -> Profile:
    r1 = p.reach.astype(np.int32)
    r2 = q.reach.astype(np.int32)
    reach = (r1 @ r2) > 0
    reach_acc = ((p.reach_acc.astype(np.int32) @ r2) + (r1 @ q.reach_acc.astype(np.int32))) > 0
    return Profile(reach, reach_acc)


def _letter_profile(a: BuchiAutomaton, letter: str) -> Profile:
    n = len(a.states)
    reach = np.zeros((n, n), dtype=bool)
    reach_acc = np.zeros((n, n), dtype=bool)
    idx = a._index
    for (src, x, dst) in a.transitions:
        if x != letter:
            continue
        i, j = idx[src], idx[dst]
        reach[i, j] = True
        if src in a.accepting or dst in a.accepting:
            reach_acc[i, j] = True
    return Profile(reach, reach_acc)


def _identity_profile(a: BuchiAutomaton) -> Profile:
    n = len(a.states)
    reach = np.eye(n, dtype=bool)
    reach_acc = np.zeros((n, n), dtype=bool)
    for q in a.accepting:
        i = a._index[q]
        reach_acc[i, i] = True
    return Profile(reach, reach_acc)


@dataclass(eq=False)
class TransitionMonoid:
    """Profiles of all nonempty words over an automaton, with shortest
    witness words (discovered breadth-first, so length-lexicographic)."""

    automaton: BuchiAutomaton
    elements: list
    witnesses: list
    identity: Profile
    _by_key: dict
    _compose_cache: dict

    def index_of(self, p: Profile) -> int:
        return self._by_key[p.key]

    def letter(self, a: str) -> int:
        return self._by_key[_letter_profile(self.automaton, a).key]

    def compose(self, i: int, j: int) -> int:
        got = self._compose_cache.get((i, j))
        if got is None:
            got = self._by_key[compose_profiles(self.elements[i], self.elements[j]).key]
            self._compose_cache[(i, j)] = got
        return got

    def idempotents(self) -> list[int]:
        return [i for i in range(len(self.elements)) if self.compose(i, i) == i]

    def profile_of(self, letters: Sequence[str]) -> Profile:
        out = self.identity
        for a in letters:
            out = compose_profiles(out, _letter_profile(self.automaton, a))
        return out


def transition_monoid(a: BuchiAutomaton, *, budget: int = 50000) -> TransitionMonoid:
    """Generate the monoid of profiles of nonempty words, breadth-first by
    witness length.  Raises BudgetExceededError past `budget` elements."""
    elements: list[Profile] = []
    witnesses: list[tuple[str, ...]] = []
    by_key: dict = {}
    letter_profiles = [(x, _letter_profile(a, x)) for x in a.alphabet]
    queue: list[int] = []
    for x, p in letter_profiles:
        if p.key not in by_key:
            by_key[p.key] = len(elements)
            elements.append(p)
            witnesses.append((x,))
            queue.append(by_key[p.key])
    head = 0
    while head < len(queue):
        i = queue[head]
        head += 1
        for x, p in letter_profiles:
            q = compose_profiles(elements[i], p)
            if q.key not in by_key:
                if len(elements) >= budget:
                    raise BudgetExceededError(
                        f"transition monoid exceeded {budget} elements")
                by_key[q.key] = len(elements)
                elements.append(q)
                witnesses.append(witnesses[i] + (x,))
                queue.append(by_key[q.key])
    wit_words = [FiniteWord(a.alphabet, w) for w in witnesses]
    return TransitionMonoid(a, elements, wit_words, _identity_profile(a), by_key, {})


# ---------------------------------------------------------------------------
# complementation


def complement(a: BuchiAutomaton, *, state_budget: int = DEFAULT_STATE_BUDGET) -> BuchiAutomaton:
    """Complement via the profile monoid.

    Every infinite word factors as u w_1 w_2 ... where u has some profile s,
    every w_i has one idempotent profile t, and s*t = s.  Such a pair either
    proves acceptance for all its words (some initial-to-q path in s meets an
    accepting q-cycle in t) or refuses it for all of them.  The complement
    automaton guesses a refusing pair, reads u inside a profile tracker, and
    then checks the factorization: blocks are certified one at a time by a
    reset edge available exactly when the running block profile equals t.
    Only the reachable part is ever built.
    """
    a = reachable_fragment(a)
    if not a.states or not a.initial:
        q = "all"
        return BuchiAutomaton(a.alphabet, (q,), frozenset([q]), frozenset([q]),
                              frozenset((q, x, q) for x in a.alphabet))
    monoid = transition_monoid(a, budget=state_budget)
    ident = monoid.identity
    init_idx = [a._index[q] for q in a.initial]

    def pair_accepts(s: Profile, t: Profile) -> bool:
        acc = np.diagonal(t.reach_acc)
        rows = s.reach[init_idx]
        return bool(rows[:, acc].any())

    # refusing linked pairs, grouped by the prefix profile s
    jumps: dict = {}
    idem = [monoid.elements[i] for i in monoid.idempotents()]
    for t in idem:
        for s in [ident] + monoid.elements:
            if compose_profiles(s, t) == s and not pair_accepts(s, t):
                jumps.setdefault(s.key, []).append(t)

    letter_prof = {x: _letter_profile(a, x) for x in a.alphabet}
    compose_memo: dict = {}

    def after(m: Profile, x: str) -> Profile:
        got = compose_memo.get((m.key, x))
        if got is None:
            got = compose_profiles(m, letter_prof[x])
            compose_memo[(m.key, x)] = got
        return got

    profiles_by_key = {p.key: p for p in [ident] + monoid.elements}

    start = ("track", ident.key)
    states: dict = {start: None}
    order = [start]
    trans = set()
    frontier = [start]
    while frontier:
        node = frontier.pop()
        new_nodes = []
        if node[0] == "track":
            m = profiles_by_key[node[1]]
            for x in a.alphabet:
                nxt = ("track", after(m, x).key)
                trans.add((node, x, nxt))
                new_nodes.append(nxt)
                for t in jumps.get(node[1], ()):
                    jt = ("check", after(ident, x).key, t.key, False)
                    trans.add((node, x, jt))
                    new_nodes.append(jt)
        else:
            _, m_key, t_key, _fresh = node
            m = profiles_by_key[m_key]
            for x in a.alphabet:
                nxt = ("check", after(m, x).key, t_key, False)
                trans.add((node, x, nxt))
                new_nodes.append(nxt)
                if m_key == t_key:
                    reset = ("check", after(ident, x).key, t_key, True)
                    trans.add((node, x, reset))
                    new_nodes.append(reset)
        for nn in new_nodes:
            if nn not in states:
                if len(states) >= state_budget:
                    raise BudgetExceededError(f"complement exceeded {state_budget} states")
                states[nn] = None
                order.append(nn)
                frontier.append(nn)
    accepting = frozenset(n for n in order if n[0] == "check" and n[3])
    return BuchiAutomaton(a.alphabet, tuple(order), frozenset([start]),
                          accepting, frozenset(trans))


# ---------------------------------------------------------------------------
# relabelings


def map_letters(a: BuchiAutomaton, h: Homomorphism) -> BuchiAutomaton:
    """Apply a letter-to-letter homomorphism to every transition label."""
    if h.source != a.alphabet:
        raise AlphabetMismatchError("homomorphism source differs from automaton alphabet")
    for x in h.source:
        if len(h.image(x)) != 1:
            raise FormatError("map_letters needs a letter-to-letter homomorphism")
    trans = frozenset((s, h.image(x)[0], d) for s, x, d in a.transitions)
    return BuchiAutomaton(h.target, a.states, a.initial, a.accepting, trans)


def inverse_map_letters(a: BuchiAutomaton, h: Homomorphism) -> BuchiAutomaton:
    """Automaton for the inverse image under a letter-to-letter homomorphism
    into this automaton's alphabet."""
    if h.target != a.alphabet:
        raise AlphabetMismatchError("homomorphism target differs from automaton alphabet")
    for x in h.source:
        if len(h.image(x)) != 1:
            raise FormatError("inverse_map_letters needs a letter-to-letter homomorphism")
    trans = set()
    for g in h.source:
        img = h.image(g)[0]
        for (s, x, d) in a.transitions:
            if x == img:
                trans.add((s, g, d))
    return BuchiAutomaton(h.source, a.states, a.initial, a.accepting, frozenset(trans))


def with_canonical_names(a: BuchiAutomaton) -> BuchiAutomaton:
    """Rename states to q0, q1, ... in declared order (for serialization)."""
    names = {q: f"q{i}" for i, q in enumerate(a.states)}
    return BuchiAutomaton(
        a.alphabet, tuple(names[q] for q in a.states),
        frozenset(names[q] for q in a.initial),
        frozenset(names[q] for q in a.accepting),
        frozenset((names[s], x, names[d]) for s, x, d in a.transitions))


# ---------------------------------------------------------------------------
# text format


def parse_automaton(text: str) -> BuchiAutomaton:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if len(lines) < 4:
        raise FormatError("automaton file needs alphabet/states/initial/accepting lines")
    heads = {}
    for i, key in enumerate(("alphabet", "states", "initial", "accepting")):
        parts = lines[i].split()
        if not parts or parts[0] != key:
            raise FormatError(f"line {i + 1} must start with '{key}'")
        heads[key] = parts[1:]
    trans = []
    for ln in lines[4:]:
        parts = ln.split()
        if len(parts) != 3:
            raise FormatError(f"bad transition line {ln!r}")
        trans.append((parts[0], parts[1], parts[2]))
    return BuchiAutomaton(Alphabet(tuple(heads["alphabet"])), tuple(heads["states"]),
                          frozenset(heads["initial"]), frozenset(heads["accepting"]),
                          frozenset(trans))


def format_automaton(a: BuchiAutomaton) -> str:
    for q in a.states:
        if not isinstance(q, str) or not q or any(c.isspace() for c in q):
            raise FormatError(
                "serialization needs string state names; see with_canonical_names")
    idx = a._index
    order = sorted(a.transitions, key=lambda t: (idx[t[0]], a.alphabet.index(t[1]), idx[t[2]]))
    lines = [
        "alphabet " + " ".join(a.alphabet.letters),
        "states " + " ".join(a.states),
        "initial " + " ".join(sorted(a.initial, key=idx.__getitem__)),
        "accepting " + " ".join(sorted(a.accepting, key=idx.__getitem__)),
    ]
    lines += [f"{s} {x} {d}" for s, x, d in order]
    return "\n".join(lines) + "\n"

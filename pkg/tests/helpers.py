"""Shared test utilities: seeded random instances and independent reference
implementations used to cross-check the library."""

from __future__ import annotations

import random
from itertools import product

import networkx as nx

from omegaword.buchi import BuchiAutomaton, automaton
from omegaword.congruence import classifier
from omegaword.mso import (And, ExistsPos, ExistsSet, ForallPos, ForallSet,
                           Formula, Implies, In, Less, Letter, Not, Or)
from omegaword.words import Alphabet, FiniteWord, UPWord, alphabet, up_word


def random_automaton(rng: random.Random, max_states: int = 4, letters: str = "ab",
                     accept_prob: float = 0.45) -> BuchiAutomaton:
    n = rng.randrange(1, max_states + 1)
    states = [f"q{i}" for i in range(n)]
    trans = set()
    for q in states:
        for x in letters:
            k = rng.choices([0, 1, 2], weights=[25, 55, 20])[0]
            for d in rng.sample(states, min(k, n)):
                trans.add((q, x, d))
    accepting = {q for q in states if rng.random() < accept_prob}
    return automaton(alphabet(letters), states, {states[0]}, accepting, trans)


def random_up(rng: random.Random, letters: str = "ab", max_prefix: int = 3,
              max_period: int = 3) -> UPWord:
    p = "".join(rng.choice(letters) for _ in range(rng.randrange(0, max_prefix + 1)))
    v = "".join(rng.choice(letters) for _ in range(rng.randrange(1, max_period + 1)))
    return up_word(p, v, alphabet(letters))


def random_classifier(rng: random.Random, max_states: int = 4,
                      max_classes: int = 3):
    n = rng.randrange(1, max_states + 1)
    states = [f"s{i}" for i in range(n)]
    delta = {(q, x): rng.choice(states) for q in states for x in "ab"}
    # only label-reachable classes keep the constructor happy: compute first
    seen = {"s0"}
    frontier = ["s0"]
    while frontier:
        q = frontier.pop()
        for x in "ab":
            d = delta[(q, x)]
            if d not in seen:
                seen.add(d)
                frontier.append(d)
    names = [f"c{i}" for i in range(max_classes)]
    while True:
        classes = {q: rng.choice(names) for q in states}
        reach_names = {classes[q] for q in seen}
        if all(classes[q] in reach_names for q in states):
            break
    return classifier(alphabet("ab"), states, "s0", delta, classes)


def ref_accepts(a: BuchiAutomaton, w: UPWord) -> bool:
    """Independent lasso membership via networkx reachability and SCCs."""
    current = set(a.initial)
    for x in w.prefix:
        current = {d for q in current for d in a.post(q, x)}
    n = len(w.period)
    g = nx.DiGraph()
    for q in a.states:
        for i in range(n):
            g.add_node((q, i))
            for d in a.post(q, w.period[i]):
                g.add_edge((q, i), (d, (i + 1) % n))
    reach = set()
    for s in ((q, 0) for q in current):
        reach |= nx.descendants(g, s) | {s}
    for comp in nx.strongly_connected_components(g):
        on_cycle = len(comp) > 1 or any(g.has_edge(c, c) for c in comp)
        if not on_cycle:
            continue
        if any(node in reach and node[0] in a.accepting for node in comp):
            return True
    return False


def all_up_words(letters: str = "ab", max_prefix: int = 3,
                 max_period: int = 3) -> list[UPWord]:
    """Every lasso word with the given presentation size bounds."""
    alpha = alphabet(letters)
    out = []
    for np in range(max_prefix + 1):
        for prefix in product(letters, repeat=np):
            for nv in range(1, max_period + 1):
                for period in product(letters, repeat=nv):
                    out.append(UPWord(alpha, prefix, period))
    return out


def _segment_groups(letters: tuple[str, ...], budget: int):
    """All tuples of finite segments whose token cost fits the budget, paired
    with the cost actually used.  Each segment costs its length plus one (the
    separator that closes it), matching how separated words are measured."""
    yield (), 0
    for seglen in range(budget):
        for seg in product(letters, repeat=seglen):
            for rest, used in _segment_groups(letters, budget - seglen - 1):
                yield (seg,) + rest, used + seglen + 1


def all_separated_words(letters: str = "ab", max_tokens: int = 10):
    """Every separated word of token length <= max_tokens, counting each
    letter and each separator (the marked one included) as one token."""
    from omegaword.trio import SeparatedWord

    alpha = alphabet(letters)
    base = tuple(letters)
    for left, used in _segment_groups(base, max_tokens):
        lw = tuple(FiniteWord(alpha, seg) for seg in left)
        for right, _ in _segment_groups(base, max_tokens - used):
            yield SeparatedWord(alpha, lw,
                                tuple(FiniteWord(alpha, seg) for seg in right))


def random_sentence(rng: random.Random, letters: str = "ab",
                    depth: int = 4) -> Formula:
    """Closed predicate-free sentence: a Boolean combination of quantified
    chunks, so direct evaluation and one-shot compilation disagree loudly if
    either is wrong."""
    fresh_pos = iter(f"v{i}" for i in range(100))
    fresh_set = iter(f"V{i}" for i in range(100))

    def atom(pos_vars, set_vars):
        kinds = []
        if pos_vars:
            kinds += ["less", "letter", "letter"]
        if pos_vars and set_vars:
            kinds += ["in", "in"]
        if not kinds:
            v = next(fresh_pos)
            return ExistsPos(v, Letter(v, rng.choice(letters)))
        kind = rng.choice(kinds)
        if kind == "less":
            return Less(rng.choice(pos_vars), rng.choice(pos_vars))
        if kind == "letter":
            return Letter(rng.choice(pos_vars), rng.choice(letters))
        return In(rng.choice(pos_vars), rng.choice(set_vars))

    def chunk(d, pos_vars, set_vars):
        roll = rng.random()
        if d <= 0 or (roll < 0.3 and pos_vars):
            return atom(pos_vars, set_vars)
        if roll < 0.6 and len(pos_vars) < 3:
            v = next(fresh_pos)
            kind = rng.choice((ExistsPos, ForallPos))
            return kind(v, chunk(d - 1, pos_vars + (v,), set_vars))
        if roll < 0.72 and len(set_vars) < 2:
            v = next(fresh_set)
            kind = rng.choice((ExistsSet, ForallSet))
            return kind(v, chunk(d - 1, pos_vars, set_vars + (v,)))
        if roll < 0.82:
            return Not(chunk(d - 1, pos_vars, set_vars))
        parts = tuple(chunk(d - 1, pos_vars, set_vars) for _ in range(2))
        kind = rng.choice(("and", "or", "implies"))
        if kind == "and":
            return And(parts)
        if kind == "or":
            return Or(parts)
        return Implies(parts[0], parts[1])

    pieces = [chunk(depth - 1, (), ()) for _ in range(rng.choice((1, 2, 2, 3)))]
    out = pieces[0]
    for piece in pieces[1:]:
        kind = rng.choice(("and", "or", "implies"))
        if kind == "and":
            out = And((out, piece))
        elif kind == "or":
            out = Or((out, piece))
        else:
            out = Implies(out, piece)
    if rng.random() < 0.25:
        out = Not(out)
    return out


def ref_profile(a: BuchiAutomaton, letters) -> tuple[frozenset, frozenset]:
    """Independent word profile: (pairs with a path, pairs with a path through
    an accepting state, endpoints included), by direct dynamic programming."""
    pairs = {(q, q, q in a.accepting) for q in a.states}
    for x in letters:
        nxt = set()
        for (p, q, acc) in pairs:
            for d in a.post(q, x):
                nxt.add((p, d, acc or d in a.accepting))
        pairs = nxt
    reach = frozenset((p, q) for (p, q, _) in pairs)
    reach_acc = frozenset((p, q) for (p, q, acc) in pairs if acc)
    return reach, reach_acc

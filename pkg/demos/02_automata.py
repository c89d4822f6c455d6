"""Automata over infinite words: the boolean algebra, decided on lassos.

`omegaword.buchi` gives nondeterministic automata with the usual repeated-
visit acceptance, plus union, intersection, complementation through the
transition monoid, emptiness with a lasso witness, and a plain text format.
Membership of any lasso word is decided exactly.
"""

from omegaword import (accepts_up, automaton, complement, format_automaton,
                       intersect, is_empty, parse_word, transition_monoid,
                       union, up_word)
from omegaword.words import alphabet, format_word

ab = alphabet("ab")

# "Infinitely many a": park on q0, must pass through q1 (on a) again and again.
inf_a = automaton(ab, ["q0", "q1"], ["q0"], ["q1"],
                  [("q0", "a", "q1"), ("q0", "b", "q0"),
                   ("q1", "a", "q1"), ("q1", "b", "q0")])
print(format_automaton(inf_a))

for text in ["(ab)^w", "(b)^w", "ab(b)^w", "(aab)^w"]:
    w = parse_word(text, ab)
    print(f"  accepts {text:10}", accepts_up(inf_a, w))

# --- complementation --------------------------------------------------------

# The complement is built from the automaton's transition monoid: compose
# letter profiles until the set closes, then assemble lasso shapes that avoid
# every accepting loop.
m = transition_monoid(inf_a)
print("\ntransition monoid size:", len(m.elements))

co = complement(inf_a)
print("complement has", len(co.states), "states")
for text in ["(ab)^w", "(b)^w", "ab(b)^w"]:
    w = parse_word(text, ab)
    print(f"  complement accepts {text:10}", accepts_up(co, w))

# --- products and sums ------------------------------------------------------

inf_b = automaton(ab, ["p0", "p1"], ["p0"], ["p1"],
                  [("p0", "b", "p1"), ("p0", "a", "p0"),
                   ("p1", "b", "p1"), ("p1", "a", "p0")])

both = intersect(inf_a, inf_b)      # infinitely many a AND infinitely many b
either = union(co, complement(inf_b))
print("\nboth letters infinitely often, on (ab)^w:",
      accepts_up(both, up_word("", "ab", ab)))
print("both letters infinitely often, on a(b)^w:",
      accepts_up(both, up_word("a", "b", ab)))

# --- emptiness with witnesses -----------------------------------------------

empty, witness = is_empty(both)
print("\nis the intersection empty?", empty, "- witness:", format_word(witness))
assert accepts_up(both, witness)

# Intersecting a language with its own complement is empty, and emptiness
# says so without offering a witness.
nothing = intersect(inf_a, co)
empty, witness = is_empty(nothing)
print("language meet its complement empty?", empty, "- witness:", witness)

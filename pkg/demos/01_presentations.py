"""Finite presentations of infinite words.

Two presentation kinds live in `omegaword.words`: lasso words (a finite
prefix followed by a period repeated forever) and block words (runs of one
letter separated by another, with a computable length schedule).  Everything
else in the library consumes these presentations, so this walk-through shows
how to build them, compare them, and move between them.
"""

from omegaword import (alphabet, apply_hom, canonical, finite_word,
                       format_word, homomorphism, parse_word, to_up_word,
                       up_equal, up_word)
from omegaword.errors import UnsupportedWordError
from omegaword.words import letter_at, max_letter_run, prefix_of

ab = alphabet("ab")

# --- lasso words -----------------------------------------------------------

w = up_word("ab", "ba", ab)           # ab(ba)^w
print("lasso word:", format_word(w))
print("first 12 letters:", "".join(prefix_of(w, 12)))
print("letter at position 10^6:", letter_at(w, 10**6))

# The same infinite word has many presentations; `canonical` rolls the period
# to its primitive lexicographically least rotation and shortens the prefix.
other = parse_word("abba(baba)^w")
print("\nsame word, different presentation:", format_word(other))
print("equal as infinite words?", up_equal(w, other))
print("canonical forms:", format_word(canonical(w)), "==", format_word(canonical(other)))

# --- block words -----------------------------------------------------------

# blocks(a,b;affine 1 0): the n-th run of a has length n, i.e. a b aa b aaa b ...
g = parse_word("blocks(a,b;affine 1 0)")
print("\nblock word:", format_word(g))
print("first 15 letters:", "".join(prefix_of(g, 15)))
print("longest a-run seen anywhere:", max_letter_run(g, "a"))   # None = unbounded

# A constant schedule is secretly a lasso word, and `to_up_word` finds it.
c = parse_word("blocks(a,b;constant 2)")
print("\nconstant-2 block word as a lasso:", format_word(to_up_word(c)))
try:
    to_up_word(g)
except UnsupportedWordError as exc:
    print("growing schedule has no lasso form:", exc)

# --- letter-to-word substitutions ------------------------------------------

h = homomorphism({"a": "ab", "b": "b"}, ab, ab)
print("\nimage of", format_word(w), "under a->ab, b->b:",
      format_word(apply_hom(h, w)))

# Substitutions also act on finite words, and on block words as long as
# they send letters to letters (longer images would break the run shape).
u = finite_word("aab", ab)
print("image of", u.text(), "is", apply_hom(h, u).text())
swap = homomorphism({"a": "b", "b": "a"}, ab, ab)
print("image of", format_word(c), "under a<->b:", format_word(apply_hom(swap, c)))

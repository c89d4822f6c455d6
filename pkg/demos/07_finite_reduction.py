"""From infinite words back to finite ones.

Languages of infinite words built from a finite-word language L by "every
factor sequence eventually lands in L" style conditions inherit L's
machinery.  The bridge is a pipeline of finite-word gadgets, each a step a
rational transducer or homomorphism can implement:

  1. the pairing language   u#u'        (u, u' right-congruent for L),
  2. the two-group language u_1#...#u_n# v_1%#...%#v_m%#  (chained classes),
  3. its separator skeleton #^n %#^m    (forcing n = m),
  4. the loop language: finite words whose repetition lands in L.

All stages run here on L = {a^n b^n}, the textbook non-regular language
with a decidable right congruence.
"""

from omegaword import (alphabet, apply_transducer, finite_word,
                       get_finite_oracle, loop_representation, member_L1,
                       member_L2, parse_separated, parse_word,
                       project_to_separators, right_congruence_finite,
                       transducer)
from omegaword.trio import format_separated

ab = alphabet("ab")
anbn = get_finite_oracle("anbn")
print("membership in {a^n b^n}:",
      {t or "eps": anbn.member(finite_word(t, ab)) for t in ["ab", "aabb", "aab", ""]})

# --- stage 1: the right congruence, and pairs of equivalent words -----------

v = right_congruence_finite(anbn, "a", "aa")
print("\na ~ aa?", bool(v), "- separating suffix:", v.witness.text() or "eps")
v = right_congruence_finite(anbn, "aaabb", "aab")
print("aaabb ~ aab?", bool(v), "(both need exactly one more b)")

print("pairing language:  a#a ->", bool(member_L1(anbn, "a#a")),
      "   ab#a ->", bool(member_L1(anbn, "ab#a")))

# --- stage 2: two chained groups of segments ---------------------------------

# Members pair off two segment groups class by class; the conditions force
# the groups to have the same length even though nothing counts explicitly.
for text in ["a#aa#a%#aa%#", "a#aa#aa%#a%#", "a#a#a%#a%#"]:
    s = parse_separated(text, "ab")
    print(f"  {format_separated(s):16} member:", member_L2(anbn, s))

# --- stage 3: erase the letters, keep the separators -------------------------

s = parse_separated("a#aa#a%#aa%#", "ab")
print("\nseparator skeleton of a#aa#a%#aa%#:",
      "".join(project_to_separators(s).letters))

# --- rational transducers -----------------------------------------------------

# A transducer that doubles every a and keeps b; nondeterminism and output
# caps are part of the model.
double_a = transducer("ab", "ab", ["q"], "q", ["q"],
                      [("q", "a", "aa", "q"), ("q", "b", "b", "q")])
image, truncated = apply_transducer(double_a, finite_word("aab", ab))
print("\nimage of aab under a->aa:",
      sorted(w.text() for w in image), "- truncated:", truncated)

# --- stage 4: looping a finite language --------------------------------------

# prefix.(v)^w is in the loop language iff some rotation of v's primitive
# root, repeated a bounded number of times, lands in L.
loop = loop_representation(anbn)
for text in ["(ab)^w", "b(ab)^w", "(aabb)^w", "(aab)^w"]:
    print(f"  {text:10} in loop({anbn.name}):",
          loop.member(parse_word(text)))
print("  blocks(a,b;affine 1 0) in loop:",
      loop.member(parse_word("blocks(a,b;affine 1 0)")),
      "(growing blocks are never ultimately periodic)")

"""Monadic second-order logic on infinite words, plus language predicates.

Formulas are written in a small prefix syntax: position quantifiers
(exists1/forall1), set quantifiers (exists2/forall2), letter and order
atoms, and - the extension point - (pred L X1 ... Xk) atoms asking whether
the word spelled out by a tuple of sets belongs to the language plugged in
for L.  Predicate-free formulas compile to automata; predicate atoms are
evaluated against language oracles.
"""

from omegaword import (accepts_up, alphabet, compile_to_buchi,
                       encode_congruence_game, evaluate, format_formula,
                       get_oracle, mso_satisfiable, parse_formula, parse_word,
                       up_word)
from omegaword.mso import UPValuation, formula_size, indicator_set, render_formula

ab = alphabet("ab")

# --- satisfiability with lasso models ---------------------------------------

phi = parse_formula("(and (exists1 x (letter x b)) "
                    "(forall1 x (exists1 y (and (< x y) (letter y a)))))")
print("formula:", render_formula(phi))
sat, model = mso_satisfiable(phi, ab)
print("satisfiable:", sat, "- model:",
      model.word.text() if sat else "-")

bad = parse_formula("(and (exists1 x (letter x a)) (forall1 x (not (letter x a))))")
print("\ncontradiction satisfiable?", mso_satisfiable(bad, ab)[0])

# --- compilation to an automaton --------------------------------------------

inf_a = parse_formula("(forall1 x (exists1 y (and (< x y) (letter y a))))")
m = compile_to_buchi(inf_a, ab)
print("\n'infinitely many a' compiles to", len(m.states), "states")
for text in ["(ab)^w", "a(b)^w"]:
    print(f"  {text:8} accepted:", accepts_up(m, parse_word(text, ab)))

# --- direct evaluation on a valuation ---------------------------------------

order = parse_formula("(< x y)")
val = UPValuation(word=up_word("", "ab", ab), positions={"x": 0, "y": 3})
print("\nposition 0 before position 3:", evaluate(order, val))

# --- language predicates -----------------------------------------------------

# (pred L Xa Xb) asks whether the word that carries `a` on Xa and `b` on Xb
# belongs to whatever language the caller binds to L.  The sets must
# partition the positions, else the atom is simply false.
atom = parse_formula("(pred L Xa Xb)")
val = UPValuation(sets={"Xa": indicator_set("", "10"),
                        "Xb": indicator_set("", "01")})   # spells (ab)^w
print("\ndecoded word (ab)^w in the singleton language {(ab)^w}:",
      evaluate(atom, val, {"L": get_oracle("singleton:(ab)^w")}))
print("decoded word (ab)^w in U:",
      evaluate(atom, val, {"L": get_oracle("U")}))

# --- the game, as one sentence -----------------------------------------------

# The entire interval game - family, selection, coloring challenge,
# response, and the membership comparison - renders as a single closed
# sentence with exactly one predicate atom.  Its size grows affinely with
# the alphabet, which is what makes the rendering usable as a reduction.
print("\ngame sentence sizes over growing alphabets:")
sizes = []
for k in range(1, 5):
    sentence = encode_congruence_game(alphabet("abcd"[:k] + "1"))
    sizes.append(formula_size(sentence))
print("  sizes:", sizes, "- first differences:",
      [b - a for a, b in zip(sizes, sizes[1:])])
print("  one predicate atom, closed:",
      format_formula(sentence).count("(pred") == 1)

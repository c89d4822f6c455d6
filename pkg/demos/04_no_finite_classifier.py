"""Why some languages of infinite words have no finite classifier.

The language U ("between consecutive b's, the a-runs grow without bound")
is a boolean combination of automaton languages in spirit but provably not
presentable by any finite classifier: whatever machine you hand it, U's
oracle constructs a factor sequence and a classifier-equivalent replacement
whose infinite products it tells apart - so condition 2 fails.

The script runs that construction against two candidate machines and
re-validates the witnesses from scratch.
"""

from omegaword import classifier, get_oracle
from omegaword.congruence import validate_condition2_witness
from omegaword.words import format_word

u = get_oracle("U")


def defeat(c, name):
    w = u.find_condition2_violation(c)
    print(f"candidate machine: {name} (index {c.index})")
    print("  original factors:", w.original.describe())
    print("  replaced factors:", w.replaced.describe())
    print("  original product:", format_word(w.original_product),
          "- member:", w.original_member)
    print("  replaced product:",
          format_word(w.replaced_product) if w.replaced_product else "-",
          "- member:", w.replaced_member, ("(" + w.note + ")" if w.note else ""))
    ok = validate_condition2_witness(c, u, w)
    print("  witness re-validated:", ok)
    assert ok
    print()


# The one-state machine says ALL words are equivalent, so any factor may be
# replaced by any other.  The oracle answers with growing a-blocks (in U)
# replaced by a fixed factor (periodic, hence not in U).
trivial = classifier("ab", ["q"], "q",
                     {("q", "a"): "q", ("q", "b"): "q"}, {"q": "all"})
defeat(trivial, "everything-is-equivalent")

# A machine tracking the parity of a's.  Finer, but still finite: the oracle
# pumps within a class to break the growth of the runs.
parity = classifier("ab", ["even", "odd"], "even",
                    {("even", "a"): "odd", ("even", "b"): "even",
                     ("odd", "a"): "even", ("odd", "b"): "odd"},
                    {"even": "E", "odd": "O"})
defeat(parity, "a-parity")

print("Both candidates were defeated; no finite machine survives this test,")
print("which is exactly what separates U from the automaton-recognizable")
print("languages.")

"""The interval game: an interactive characterization of membership.

Two players argue about one infinite word w and one language.  The spoiler
proposes an infinite family of disjoint intervals of w and later challenges
with words built from the selected factors; the duplicator answers with
factor words of its own.  The duplicator wins when its answers track the
spoiler's across the language boundary.  Over U-like languages the word's
membership decides who can win - so strategies, not just verdicts, carry
the mathematical content.

Here we replay both outcomes with the packaged strategies and inspect the
transcripts round by round.
"""

import random

from omegaword import (get_duplicator, get_oracle, get_spoiler, parse_word,
                       play_bounded, transcript_from_json, transcript_to_json,
                       validate_transcript)


def show(t):
    print("  family:    ", t.family_note, "- first intervals",
          [(i.first, i.last) for i in t.family[:4]])
    print("  selected:  ", [(i.first, i.last) for i in t.selected])
    print("  chosen:    ", [(i.first, i.last) for i in t.chosen])
    print("  spoiler:   ", [w.text() or "eps" for w in t.spoiler_words])
    print("  duplicator:", [w.text() or "eps" for w in t.duplicator_words])
    if t.forfeit:
        print("  forfeit:   ", t.forfeit)
    print("  verdicts:  ", t.verdicts, t.verdict_notes)
    print("  winner:    ", t.winner)


# --- the word is in the language: the copying duplicator wins ---------------

u = get_oracle("U")
inside = parse_word("blocks(a,b;affine 1 0)")    # runs 1,2,3,... - in U
rng = random.Random(9)

print("word in U, random spoiler vs copying duplicator:")
t = play_bounded(inside, u, get_spoiler("random", rng),
                 get_duplicator("copy"), horizon=8)
show(t)
assert t.winner == "Duplicator"

# The copying duplicator never loses on a member word: whatever factors the
# spoiler assembles, it replays factors of the same word, and membership of
# the two products cannot differ.

# --- the word is outside: the diverging spoiler wins ------------------------

outside = parse_word("(aab)^w")                  # runs of length 2 forever
uprime = get_oracle("Uprime")                    # U padded with a neutral letter

print("\nword not in Uprime, diverging spoiler vs copying duplicator:")
t = play_bounded(outside, uprime, get_spoiler("diverging"),
                 get_duplicator("copy"), horizon=8)
show(t)
assert t.winner == "Spoiler"

# The diverging spoiler builds its challenge so that its own product lies in
# the language while anything assembled from the (too regular) factors of
# the word outside cannot - the copying duplicator is cornered.

# --- transcripts are plain data ---------------------------------------------

text = transcript_to_json(t)
back = transcript_from_json(text)
print("\ntranscript serialized to", len(text), "bytes of json;",
      "legality re-check:", validate_transcript(back) or "legal")

"""Finitely presented infinite words, and the machinery that tells their
languages apart: Büchi automata with a full boolean algebra, bounded
congruence computations, a two-player interval game with executable
strategies, a second-order formula layer with language predicates, and a
finite-word reduction pipeline.

The usual imports:

>>> from omegaword import up_word, automaton, accepts_up, get_oracle
"""

from .buchi import (
    BuchiAutomaton,
    accepts_up,
    automaton,
    complement,
    format_automaton,
    intersect,
    is_empty,
    parse_automaton,
    transition_monoid,
    union,
)
from .congruence import (
    Classifier,
    arnold_classes_bounded,
    check_condition1,
    check_condition2_bounded,
    classifier,
    format_classifier,
    lemma_repair,
    parse_classifier,
    profile_kernel_classifier,
    right_classes_bounded,
)
from .errors import (
    AlphabetMismatchError,
    BudgetExceededError,
    FormatError,
    IllegalMoveError,
    OmegawordError,
    UnsupportedFormulaError,
    UnsupportedWordError,
)
from .game import (
    GameTranscript,
    adjudicate,
    get_duplicator,
    get_spoiler,
    play_bounded,
    transcript_from_json,
    transcript_to_json,
    validate_transcript,
)
from .mso import (
    UPValuation,
    compile_to_buchi,
    encode_congruence_game,
    evaluate,
    format_formula,
    mso_satisfiable,
    parse_formula,
)
from .oracles import LanguageOracle, get_oracle
from .trio import (
    AnBnOracle,
    RationalTransducer,
    SeparatedWord,
    apply_transducer,
    get_finite_oracle,
    loop_representation,
    member_L1,
    member_L2,
    parse_separated,
    project_to_separators,
    right_congruence_finite,
    transducer,
)
from .words import (
    Alphabet,
    BlockWord,
    FiniteWord,
    UPWord,
    alphabet,
    apply_hom,
    canonical,
    finite_word,
    format_word,
    homomorphism,
    parse_word,
    to_up_word,
    up_equal,
    up_word,
)

__version__ = "0.1.0"

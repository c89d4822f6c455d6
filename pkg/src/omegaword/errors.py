"""Shared exception types.

Everything raised on purpose by this package derives from OmegawordError,
so callers can catch one type at the CLI boundary and map it to an exit
code without fishing for stray ValueErrors.
"""

from __future__ import annotations


class OmegawordError(Exception):
    """Base class for all errors raised deliberately by this package."""


class FormatError(OmegawordError):
    """Malformed textual input (word syntax, automaton files, formulas)."""


class AlphabetMismatchError(OmegawordError):
    """Two objects that must share an alphabet do not."""


class UnsupportedWordError(OmegawordError):
    """An oracle or operation was handed a presentation it cannot decide."""


class DegenerateErasureError(UnsupportedWordError):
    """Erasing the neutral letter left a finite word, not an infinite one."""


class UnsupportedHomomorphismError(OmegawordError):
    """The homomorphism cannot be applied to this presentation exactly."""


class DegenerateProductError(OmegawordError):
    """An infinite product whose repeated part concatenates to the empty word."""


class BudgetExceededError(OmegawordError):
    """A configured size or step budget was exhausted before completion."""


class IllegalMoveError(OmegawordError):
    """A game transcript or move violates the rules of some round."""


class UnsupportedFormulaError(OmegawordError):
    """A formula falls outside the decidable fragment of an operation."""

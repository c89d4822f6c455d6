"""Formula layer: syntax, scope checking, compilation, evaluation,
satisfiability, and the game-sentence constructor."""

from __future__ import annotations

import random

import pytest

from helpers import all_up_words, random_sentence
from omegaword.buchi import accepts_up, automaton, is_empty
from omegaword.errors import FormatError, UnsupportedFormulaError
from omegaword.mso import (And, ExistsPos, ExistsSet, ForallPos, ForallSet, Implies,
                           In, LAtom, Less, Letter, Not, Or, UPValuation,
                           check_scopes, code_valuation, coded_alphabet,
                           compile_to_buchi, count_latoms, decode_partition,
                           encode_congruence_game, evaluate, format_formula,
                           formula_size, free_variables, has_latoms,
                           indicator_set, is_closed, mso_satisfiable,
                           parse_formula, render_formula, singleton_set)
from omegaword.oracles import LassoOracle, RegularOracle
from omegaword.words import alphabet, parse_word, up_word

AB = alphabet("ab")

INF_A = "(forall1 x (exists1 y (and (< x y) (letter y a))))"


def inf_a_oracle():
    nba = automaton("ab", ["q0", "q1"], {"q0"}, {"q1"},
                    {("q0", "b", "q0"), ("q0", "a", "q1"),
                     ("q1", "a", "q1"), ("q1", "b", "q0")})
    return RegularOracle(nba, name="infA")


class TestSyntax:
    def test_parse_format_round_trip(self):
        texts = [
            INF_A,
            "(exists1 x (letter x a))",
            "(not (or (< x y) (in x X)))",
            "(implies (in x X) (in x Y))",
            "(exists2 X (forall1 x (in x X)))",
            "(pred L Xa Xb)",
            "(and (< x y) (< y z) (letter z b))",
        ]
        for text in texts:
            phi = parse_formula(text)
            assert format_formula(phi) == text
            assert parse_formula(format_formula(phi)) == phi

    def test_parse_rejects_malformed(self):
        bad = ["", "x", "(< x)", "(bogus x y)", "(and)", "(not a b)",
               "(exists1 (x) (< x x))", "(< x y) extra", "(", ")",
               "(pred L)", "(implies (< x y))"]
        for text in bad:
            with pytest.raises(FormatError):
                parse_formula(text)

    def test_render_math_style(self):
        phi = parse_formula(INF_A)
        text = render_formula(phi)
        assert "∀x" in text and "∃y" in text and "∧" in text
        assert "letter(y) = a" in text and "x < y" in text
        assert "∈" in render_formula(In("x", "X"))
        assert render_formula(LAtom("L", ("Xa", "Xb"))) == "L(Xa, Xb)"
        assert render_formula(Not(Less("x", "y"))) == "¬(x < y)"

    def test_size_counts_nodes(self):
        assert formula_size(Less("x", "y")) == 1
        assert formula_size(And((Less("x", "y"), In("x", "X")))) == 3
        assert formula_size(LAtom("L", ("X", "Y"))) == 3
        assert formula_size(parse_formula(INF_A)) == 5

    def test_free_variables_and_closedness(self):
        phi = parse_formula("(and (< x y) (exists1 y2 (in y2 X)))")
        pos, sets = free_variables(phi)
        assert pos == {"x", "y"} and sets == {"X"}
        assert not is_closed(phi)
        assert is_closed(parse_formula(INF_A))

    def test_latom_detection(self):
        phi = parse_formula("(and (pred L X Y) (pred L X Y))")
        assert has_latoms(phi) and count_latoms(phi) == 2
        assert not has_latoms(parse_formula(INF_A))


class TestScopes:
    def test_well_scoped(self):
        assert check_scopes(parse_formula(INF_A)) == []
        reuse = parse_formula(
            "(and (exists1 x (letter x a)) (exists1 x (letter x b)))")
        assert check_scopes(reuse) == []

    def test_rebinding_along_a_path(self):
        phi = parse_formula("(exists1 x (exists1 x (< x x)))")
        assert any("bound twice" in p for p in check_scopes(phi))

    def test_unbound_variables(self):
        problems = check_scopes(parse_formula("(< x y)"))
        assert len(problems) == 2 and all("unbound" in p for p in problems)
        assert check_scopes(parse_formula("(< x y)"),
                            free_positions=("x", "y")) == []

    def test_sort_clashes(self):
        phi = parse_formula("(exists2 X (exists1 x (< x X)))")
        assert any("used as a position" in p for p in check_scopes(phi))
        phi = parse_formula("(exists1 x (in x x))")
        assert any("used as a set" in p for p in check_scopes(phi))


class TestCompile:
    def test_infinitely_many_a(self):
        machine = compile_to_buchi(parse_formula(INF_A), AB)
        assert accepts_up(machine, up_word("", "ab", AB))
        assert not accepts_up(machine, up_word("a", "b", AB))

    def test_some_a(self):
        machine = compile_to_buchi(parse_formula("(exists1 x (letter x a))"), AB)
        assert accepts_up(machine, up_word("bbbbba", "b", AB))
        assert not accepts_up(machine, up_word("", "b", AB))

    def test_unsatisfiable_atom(self):
        machine = compile_to_buchi(parse_formula("(exists1 x (< x x))"), AB)
        empty, witness = is_empty(machine)
        assert empty and witness is None

    def test_free_context_tracks(self):
        phi = parse_formula("(in x X)")
        machine = compile_to_buchi(phi, AB, free=("x", "X"))
        assert machine.alphabet == coded_alphabet(AB, 2)
        word = up_word("abab", "ab", AB)
        inside = code_valuation(word, [singleton_set(2), indicator_set("001", "1")])
        outside = code_valuation(word, [singleton_set(2), indicator_set("1", "0")])
        assert accepts_up(machine, inside)
        assert not accepts_up(machine, outside)

    def test_quantifier_duality(self):
        body = parse_formula("(exists1 x (and (in x X) (letter x a)))")
        left = compile_to_buchi(Not(ExistsSet("X", body)), AB)
        right = compile_to_buchi(ForallSet("X", Not(body)), AB)
        for word in all_up_words("ab", 2, 2):
            assert accepts_up(left, word) == accepts_up(right, word)

    def test_rejects_latoms_and_bad_context(self):
        with pytest.raises(UnsupportedFormulaError):
            compile_to_buchi(LAtom("L", ("X", "Y")), AB)
        with pytest.raises(UnsupportedFormulaError):
            compile_to_buchi(parse_formula("(< x y)"), AB)
        with pytest.raises(FormatError):
            compile_to_buchi(parse_formula("(< x y)"), AB, free=("x", "x"))
        with pytest.raises(FormatError):
            compile_to_buchi(parse_formula("(exists1 x (letter x z))"), AB)


class TestEvaluate:
    def test_atoms_on_explicit_bindings(self):
        val = UPValuation(word=up_word("ab", "ba", AB),
                          positions={"x": 1, "y": 3},
                          sets={"X": indicator_set("01", "0")})
        assert evaluate(parse_formula("(< x y)"), val)
        assert not evaluate(parse_formula("(< y x)"), val)
        assert evaluate(parse_formula("(in x X)"), val)
        assert not evaluate(parse_formula("(in y X)"), val)
        assert evaluate(parse_formula("(letter x b)"), val)
        assert evaluate(parse_formula("(implies (< y x) (< x x))"), val)

    def test_quantifier_dispatch_matches_compile(self):
        phi = parse_formula(INF_A)
        assert evaluate(phi, UPValuation(word=up_word("", "ab", AB)))
        assert not evaluate(phi, UPValuation(word=up_word("a", "b", AB)))

    def test_quantified_subformula_with_free_variables(self):
        phi = parse_formula("(exists1 y (and (< x y) (in y X)))")
        val = UPValuation(word=up_word("", "ab", AB),
                          positions={"x": 3},
                          sets={"X": indicator_set("00001", "0")})
        assert evaluate(phi, val)
        val2 = UPValuation(word=up_word("", "ab", AB),
                           positions={"x": 5},
                           sets={"X": indicator_set("00001", "0")})
        assert not evaluate(phi, val2)

    def test_latom_partition_semantics(self):
        oracle = inf_a_oracle()
        atom = parse_formula("(pred R Xa Xb)")
        even_odd = UPValuation(sets={"Xa": indicator_set("", "10"),
                                     "Xb": indicator_set("", "01")})
        assert evaluate(atom, even_odd, {"R": oracle})
        only_b_late = UPValuation(sets={"Xa": indicator_set("1", "0"),
                                        "Xb": indicator_set("0", "1")})
        assert not evaluate(atom, only_b_late, {"R": oracle})
        overlap = UPValuation(sets={"Xa": indicator_set("", "1"),
                                    "Xb": indicator_set("", "01")})
        assert not evaluate(atom, overlap, {"R": oracle})
        gaps = UPValuation(sets={"Xa": indicator_set("", "100"),
                                 "Xb": indicator_set("", "010")})
        assert not evaluate(atom, gaps, {"R": oracle})

    def test_lasso_language_atom_true_on_lasso_valuations(self):
        rng = random.Random(5)
        atom = parse_formula("(pred P Xa Xb)")
        oracle = LassoOracle()
        for _ in range(20):
            bits = "".join(rng.choice("01") for _ in range(rng.randrange(1, 4)))
            head = "".join(rng.choice("01") for _ in range(rng.randrange(0, 3)))
            first = indicator_set(head, bits)
            other = indicator_set("".join("10"[c == "1"] for c in head),
                                  "".join("10"[c == "1"] for c in bits))
            val = UPValuation(sets={"Xa": first, "Xb": other})
            assert evaluate(atom, val, {"P": oracle})

    def test_errors(self):
        with pytest.raises(UnsupportedFormulaError):
            evaluate(ExistsSet("X", LAtom("L", ("X", "Y"))),
                     UPValuation(), {"L": LassoOracle()})
        with pytest.raises(UnsupportedFormulaError):
            evaluate(parse_formula("(pred L X Y)"), UPValuation(sets={}))
        with pytest.raises(FormatError):
            evaluate(parse_formula("(< x y)"), UPValuation(positions={"x": 0}))
        with pytest.raises(UnsupportedFormulaError):
            evaluate(parse_formula("(pred P X)"),
                     UPValuation(sets={"X": indicator_set("", "1")}),
                     {"P": LassoOracle()})

    def test_agreement_smoke(self):
        rng = random.Random(11)
        for _ in range(12):
            phi = random_sentence(rng, "ab", depth=3)
            machine = compile_to_buchi(phi, AB)
            for _ in range(5):
                prefix = "".join(rng.choice("ab") for _ in range(rng.randrange(3)))
                period = "".join(rng.choice("ab") for _ in range(rng.randrange(1, 4)))
                word = up_word(prefix, period, AB)
                assert evaluate(phi, UPValuation(word=word)) == \
                    accepts_up(machine, word)


class TestSatisfiable:
    def test_inf_a_and_inf_b(self):
        phi = parse_formula(
            "(and (forall1 x (exists1 y (and (< x y) (letter y a))))"
            " (forall1 u (exists1 v (and (< u v) (letter v b)))))")
        sat, model = mso_satisfiable(phi, "ab")
        assert sat and model is not None and model.word is not None
        assert evaluate(phi, model)

    def test_all_a_with_some_b(self):
        phi = parse_formula(
            "(and (forall1 x (letter x a)) (exists1 y (letter y b)))")
        sat, model = mso_satisfiable(phi, "ab")
        assert not sat and model is None

    def test_no_position_below_itself(self):
        sat, model = mso_satisfiable(parse_formula("(forall1 x (not (< x x)))"),
                                     "ab")
        assert sat and model is not None

    def test_witness_with_free_set(self):
        phi = parse_formula("(exists1 x (and (in x X) (letter x b)))")
        sat, model = mso_satisfiable(phi, "ab", free=("X",))
        assert sat and "X" in model.sets
        assert evaluate(phi, model)


class TestPartitionCoding:
    def test_decode_partition(self):
        tracks = [indicator_set("", "10"), indicator_set("", "01")]
        word = decode_partition(tracks, AB)
        assert word == up_word("", "ab", AB)
        assert decode_partition([indicator_set("", "1"),
                                 indicator_set("", "01")], AB) is None
        with pytest.raises(FormatError):
            decode_partition([indicator_set("", "1")], AB)

    def test_code_valuation_letters(self):
        word = up_word("a", "ab", AB)
        coded = code_valuation(word, [singleton_set(1)])
        assert coded.alphabet == coded_alphabet(AB, 1)
        assert coded.prefix[0] == "a|0"
        from omegaword.words import letter_at
        assert letter_at(coded, 1) == "a|1"
        assert letter_at(coded, 2) == "b|0"


class TestEncodeGame:
    def test_structure(self):
        phi = encode_congruence_game(alphabet("ab1"))
        assert is_closed(phi)
        assert check_scopes(phi) == []
        assert count_latoms(phi) == 1
        assert parse_formula(format_formula(phi)) == phi
        assert "∀X1" in render_formula(phi)

    def test_latom_arity_matches_alphabet(self):

        def only_atom(f):
            if isinstance(f, LAtom):
                return f
            from omegaword.mso import _children
            for c in _children(f):
                found = only_atom(c)
                if found is not None:
                    return found
            return None

        for letters in ("a1", "ab1", "abc1"):
            atom = only_atom(encode_congruence_game(alphabet(letters)))
            assert atom is not None and len(atom.args) == len(letters)

    def test_size_exactly_affine(self):
        sizes = [formula_size(encode_congruence_game(alphabet("abcde"[:k - 1] + "1")))
                 for k in range(2, 7)]
        steps = {b - a for a, b in zip(sizes, sizes[1:])}
        assert len(steps) == 1

    def test_rejects_bad_alphabets(self):
        with pytest.raises(FormatError):
            encode_congruence_game(alphabet("ab"), neutral="1")
        with pytest.raises(FormatError):
            encode_congruence_game(alphabet("1"), neutral="1")

import math
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from coxcheck.core import BeliefStructure, Domain
from coxcheck.files import load_structure
from coxcheck.forms import (
    CombinationConflict,
    CombinationForm,
    EquationCoverageError,
    FormError,
    NegationConflict,
    NegationForm,
    catalog_combination,
    catalog_negation,
    check_functional_equation,
    check_monotonicity,
    extract_combination,
    extract_negation,
    multiplicative_rep,
)

from conftest import fixture_path


def weights_structure(*weights):
    ws = [F(w) for w in weights]
    n = len(ws)
    atoms = tuple("abcd"[:n]) if n <= 4 else tuple(f"x{i}" for i in range(n))
    return BeliefStructure.from_weights(Domain(atoms), ws)


@st.composite
def small_weights(draw):
    n = draw(st.integers(2, 4))
    ints = draw(st.lists(st.integers(1, 9), min_size=n, max_size=n))
    total = sum(ints)
    return [F(i, total) for i in ints]


class TestExtractNegation:
    def test_third_structure_table(self):
        neg = extract_negation(weights_structure("1/3", "2/3"))
        assert neg.table == {
            F(0): F(1), F(1, 3): F(2, 3), F(2, 3): F(1, 3), F(1): F(0)
        }

    def test_single_atom_table(self):
        neg = extract_negation(weights_structure("1"))
        assert neg.table == {F(0): F(1), F(1): F(0)}

    def test_conflict_reports_two_witness_pairs(self):
        conflict = extract_negation(load_structure(fixture_path("a1_conflict.bel")))
        assert isinstance(conflict, NegationConflict)
        assert conflict.value == F(1, 2)
        assert conflict.output_a != conflict.output_b
        assert conflict.pair_a != conflict.pair_b

    @given(small_weights())
    def test_probability_tables_restrict_linear_complement(self, ws):
        d = Domain(tuple(f"x{i}" for i in range(len(ws))))
        neg = extract_negation(BeliefStructure.from_weights(d, ws))
        assert isinstance(neg, NegationForm)
        assert all(x + s == 1 for x, s in neg.table.items())

    def test_extraction_is_deterministic(self):
        b = weights_structure("1/6", "1/3", "1/2")
        assert extract_negation(b).table == extract_negation(b).table


class TestExtractCombination:
    def test_uniform_two_atom_entries(self):
        comb = extract_combination(weights_structure("1/2", "1/2"))
        assert comb.table[(F(1), F(1, 2))] == F(1, 2)
        assert comb.table[(F(1, 2), F(1))] == F(1, 2)

    @given(small_weights())
    def test_probability_tables_restrict_product(self, ws):
        d = Domain(tuple(f"x{i}" for i in range(len(ws))))
        comb = extract_combination(BeliefStructure.from_weights(d, ws))
        assert isinstance(comb, CombinationForm)
        assert all(x * y == out for (x, y), out in comb.table.items())

    def test_forged_collision_is_a_conflict(self):
        conflict = extract_combination(load_structure(fixture_path("a2_conflict.bel")))
        assert isinstance(conflict, CombinationConflict)
        assert conflict.args == (F(1, 4), F(2, 5))
        assert conflict.output_a != conflict.output_b

    def test_uniform_fast_path_matches_enumeration(self):
        slow = weights_structure(*(["1/7"] * 7))
        table_fast = extract_combination(slow).table
        by_masks = {}
        for b, a, u in slow.canonical_triple_masks():
            key = (slow.bel_masks(b, a), slow.bel_masks(a, u))
            by_masks[key] = slow.bel_masks(b, u)
        assert table_fast == by_masks


class TestMonotonicity:
    def test_minimum_fails_strictness_with_witness(self):
        report = check_monotonicity(catalog_combination("minimum"))
        assert report.strict_increase.status == "fail"
        assert report.strict_increase.detail
        assert report.nondecrease.status == "pass"
        # the classical witness: fixing one coordinate hides the other
        assert min(F(1, 2), F(1, 2)) == min(F(1, 2), F(3, 4))

    @pytest.mark.parametrize("name", ["product", "hamacher"])
    def test_strict_catalog_forms_pass(self, name):
        report = check_monotonicity(catalog_combination(name))
        assert report.strict_increase.passed
        assert report.nondecrease.passed
        assert report.continuity.passed

    def test_linear_complement_is_decreasing(self):
        report = check_monotonicity(catalog_negation("linear-complement"))
        assert report.decreasing.passed

    def test_tabular_negation_violation_detected(self):
        bad = NegationForm(kind="tabular", table={F(0): F(1, 2), F(1, 2): F(3, 4)})
        assert check_monotonicity(bad).decreasing.status == "fail"

    def test_tabular_combination_continuity_untestable(self):
        comb = extract_combination(weights_structure("1/2", "1/2"))
        report = check_monotonicity(comb)
        assert report.continuity.status == "untestable"

    def test_extracted_probability_table_is_monotone(self):
        comb = extract_combination(weights_structure("1/6", "1/3", "1/2"))
        report = check_monotonicity(comb)
        assert report.strict_increase.passed and report.nondecrease.passed


class TestFunctionalEquations:
    @pytest.mark.parametrize("name", ["product", "minimum", "hamacher"])
    def test_eq1_exact_zero_on_catalog(self, name):
        report = check_functional_equation(catalog_combination(name), "EQ1", 8)
        assert report.residual == 0
        assert not report.partial

    @pytest.mark.parametrize("eq", ["EQ3", "EQ3.5", "EQSYM"])
    def test_negation_equations_exact_zero(self, eq):
        report = check_functional_equation(catalog_negation("linear-complement"), eq, 10)
        assert report.residual == 0

    def test_zero_denominators_skipped_and_counted(self):
        report = check_functional_equation(
            catalog_negation("linear-complement"), "EQ3.5", 10
        )
        # oracle: x == 1 kills S(x); y == 0 kills x/y; the corner overlaps
        assert report.skipped == 10 + 10 - 1
        assert report.evaluated == 100 - 19

    def test_wrong_form_kind_rejected(self):
        with pytest.raises(FormError):
            check_functional_equation(catalog_negation("linear-complement"), "EQ1", 5)
        with pytest.raises(FormError):
            check_functional_equation(catalog_combination("product"), "EQ3", 5)

    def test_tabular_check_is_partial_and_never_leaves_table(self):
        comb = extract_combination(weights_structure("1/2", "1/2"))
        report = check_functional_equation(comb, "EQ1", 3)  # grid {0, 1/2, 1}
        assert report.residual == 0
        assert report.partial or report.evaluated == report.total

    def test_sparse_tabular_form_raises_coverage_error(self):
        sparse = NegationForm(kind="tabular", table={F(1, 3): F(2, 3)})
        with pytest.raises(EquationCoverageError):
            check_functional_equation(sparse, "EQ3", 5)

    def test_residual_positive_for_non_associative_table(self):
        table = {
            (F(1, 2), F(1, 2)): F(1, 4),
            (F(1, 2), F(1, 4)): F(1, 4),
            (F(1, 4), F(1, 2)): F(1, 8),
        }
        form = CombinationForm(kind="tabular", table=table)
        report = check_functional_equation(form, "EQ1", 3)
        assert report.residual > 0
        assert report.witness is not None


class TestMultiplicativeRep:
    def test_product_has_identity_representation(self):
        rep = multiplicative_rep(catalog_combination("product"), F(1, 2), 1e-9)
        assert rep.constant == 1.0
        assert rep.residual <= 10 * 1e-9
        assert max(abs(x - f) for x, f in rep.samples) < 1e-12

    def test_minimum_rejected_at_the_precondition(self):
        with pytest.raises(FormError, match="Par4-strict"):
            multiplicative_rep(catalog_combination("minimum"), F(1, 2))

    def test_tabular_rejected(self):
        comb = extract_combination(weights_structure("1/2", "1/2"))
        with pytest.raises(FormError, match="catalog"):
            multiplicative_rep(comb, F(1, 2))

    def test_anchor_must_be_interior(self):
        with pytest.raises(FormError, match="anchor"):
            multiplicative_rep(catalog_combination("product"), F(1))

    def test_hamacher_sample_points_increase(self):
        rep = multiplicative_rep(catalog_combination("hamacher"), F(1, 2), 1e-9)
        xs = [x for x, _ in rep.samples]
        fs = [f for _, f in rep.samples]
        assert xs == sorted(xs) and fs == sorted(fs)
        assert all(f > 0 for f in fs)
        assert rep.residual < 1e-6

    def test_interpolated_f_is_monotone(self):
        rep = multiplicative_rep(catalog_combination("hamacher"), F(1, 2), 1e-9)
        probes = [i / 40 for i in range(1, 41)]
        values = [rep.f(p) for p in probes]
        assert all(a <= b for a, b in zip(values, values[1:]))
        assert math.isclose(rep.f(1.0), 1.0)

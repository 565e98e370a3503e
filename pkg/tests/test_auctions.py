"""Ascending-auction engine, the three baseline rules, and trace invariants."""

import random
from fractions import Fraction as F

import pytest

from auctionkit import (Additive, Allocation, Certify, EMPTY_SET, Instance,
                        ItemSet, PriceVector, Raise, Stall, UnitDemand,
                        dgs_rule, english_additive_rule, envy_free_allocation,
                        gen_additive, gen_unit_demand, greedy_submodular_rule,
                        minimal_envy_free, run_ascending, serialize_trace)
from auctionkit.auctions import (EnvyFreeOutcome, StalledOutcome,
                                 StepLimitOutcome)
from auctionkit.errors import RuleViolationError


class TestEngineContract:
    def test_prices_monotone_and_strictly_raised(self, single_item_3_5):
        trace = run_ascending(single_item_3_5, dgs_rule(F(1)), 50)
        for earlier, later in zip(trace.steps, trace.steps[1:]):
            assert earlier.prices.dominated_by(later.prices)
            assert sum(later.prices.prices) > sum(earlier.prices.prices)

    def test_determinism(self, mp1_pair_instance):
        first = run_ascending(mp1_pair_instance, greedy_submodular_rule(F(1, 8)), 50)
        second = run_ascending(mp1_pair_instance, greedy_submodular_rule(F(1, 8)), 50)
        assert serialize_trace(first) == serialize_trace(second)

    def test_false_certify_is_an_error(self, single_item_3_5):
        class LyingRule:
            name = "liar"

            def __call__(self, instance, prices, demands):
                return Certify(Allocation((ItemSet([1]), EMPTY_SET)))

        with pytest.raises(RuleViolationError, match="not envy-free"):
            run_ascending(single_item_3_5, LyingRule(), 5)

    def test_empty_raise_is_an_error(self, single_item_3_5):
        class EmptyRaiser:
            name = "empty"

            def __call__(self, instance, prices, demands):
                return Raise(EMPTY_SET, F(1))

        with pytest.raises(RuleViolationError, match="empty"):
            run_ascending(single_item_3_5, EmptyRaiser(), 5)

    def test_nonpositive_increment_is_an_error(self, single_item_3_5):
        class ZeroRaiser:
            name = "zero"

            def __call__(self, instance, prices, demands):
                return Raise(ItemSet([1]), F(0))

        with pytest.raises(RuleViolationError, match="increment"):
            run_ascending(single_item_3_5, ZeroRaiser(), 5)

    def test_step_limit(self, single_item_3_5):
        trace = run_ascending(single_item_3_5, dgs_rule(F(1)), 2)
        assert isinstance(trace.outcome, StepLimitOutcome)
        assert len(trace.steps) == 2

    def test_certification_survives_independent_recheck(self, single_item_3_5):
        trace = run_ascending(single_item_3_5, dgs_rule(F(1)), 50)
        assert isinstance(trace.outcome, EnvyFreeOutcome)
        report = envy_free_allocation(single_item_3_5, trace.outcome.prices)
        assert report.envy_free


class TestDgsRule:
    def test_single_item_full_trace(self, single_item_3_5):
        trace = run_ascending(single_item_3_5, dgs_rule(F(1)), 50)
        assert [step.prices.prices[0] for step in trace.steps] == \
            [F(0), F(1), F(2), F(3)]
        assert isinstance(trace.outcome, EnvyFreeOutcome)
        assert trace.outcome.prices.prices == (F(3),)

    def test_three_bidders_two_items_lands_grid_minimal(self):
        inst = Instance(2, (UnitDemand((F(2), F(1))), UnitDemand((F(2), F(1))),
                            UnitDemand((F(1), F(2)))))
        trace = run_ascending(inst, dgs_rule(F(1)), 100)
        assert isinstance(trace.outcome, EnvyFreeOutcome)
        minimal = minimal_envy_free(inst, F(3), F(1))
        assert trace.outcome.prices in minimal

    def test_single_bidder_certifies_at_zero(self):
        inst = Instance(2, (UnitDemand((F(3), F(1))),))
        trace = run_ascending(inst, dgs_rule(F(1)), 10)
        assert isinstance(trace.outcome, EnvyFreeOutcome)
        assert trace.outcome.prices == PriceVector.zero(2)
        assert len(trace.steps) == 1

    def test_rejects_non_unit_demand(self, mp1_pair_instance):
        with pytest.raises(TypeError, match="unit-demand"):
            run_ascending(mp1_pair_instance, dgs_rule(F(1)), 5)

    def test_random_instances_terminate_minimal(self):
        rng = random.Random(41)
        for _ in range(15):
            n, m = rng.randint(1, 4), rng.randint(1, 3)
            inst = gen_unit_demand(n, m, (0, 4), seed=rng.randint(0, 9999))
            trace = run_ascending(inst, dgs_rule(F(1)), 500)
            assert isinstance(trace.outcome, EnvyFreeOutcome)
            assert trace.outcome.prices in minimal_envy_free(inst, F(4), F(1))


class TestEnglishAdditiveRule:
    def test_second_prices(self):
        inst = Instance(2, (Additive((F(5), F(0))), Additive((F(3), F(4))),
                            Additive((F(2), F(2)))))
        trace = run_ascending(inst, english_additive_rule(F(1)), 100)
        assert isinstance(trace.outcome, EnvyFreeOutcome)
        assert trace.outcome.prices.prices == (F(3), F(2))
        assert trace.outcome.allocation.assigned == \
            (ItemSet([1]), ItemSet([2]), EMPTY_SET)

    def test_single_bidder_pays_nothing(self):
        inst = Instance(2, (Additive((F(7), F(7))),))
        trace = run_ascending(inst, english_additive_rule(F(1)), 10)
        assert trace.outcome.prices == PriceVector.zero(2)
        assert trace.outcome.allocation.assigned == (ItemSet([1, 2]),)

    def test_all_zero_values(self):
        inst = Instance(2, (Additive((F(0), F(0))), Additive((F(0), F(0)))))
        trace = run_ascending(inst, english_additive_rule(F(1)), 10)
        assert isinstance(trace.outcome, EnvyFreeOutcome)
        assert trace.outcome.prices == PriceVector.zero(2)
        assert all(s == EMPTY_SET for s in trace.outcome.allocation.assigned)

    def test_rejects_non_additive(self, single_item_3_5):
        with pytest.raises(TypeError, match="additive"):
            run_ascending(single_item_3_5, english_additive_rule(F(1)), 5)

    def test_final_prices_are_rounded_second_values(self):
        rng = random.Random(42)
        for _ in range(15):
            n, m = rng.randint(1, 4), rng.randint(1, 4)
            inst = gen_additive(n, m, (0, 5), seed=rng.randint(0, 9999))
            trace = run_ascending(inst, english_additive_rule(F(1)), 200)
            assert isinstance(trace.outcome, EnvyFreeOutcome)
            for j in range(1, m + 1):
                values = sorted((v.values[j - 1] for v in inst.bidders),
                                reverse=True)
                second = values[1] if len(values) > 1 else F(0)
                assert trace.outcome.prices.price_of(j) == second


class TestGreedySubmodularRule:
    def test_reaches_envy_free_on_additive(self):
        rng = random.Random(43)
        for _ in range(10):
            n, m = rng.randint(1, 3), rng.randint(1, 3)
            inst = gen_additive(n, m, (0, 4), seed=rng.randint(0, 9999))
            trace = run_ascending(inst, greedy_submodular_rule(F(1)), 200)
            assert isinstance(trace.outcome, EnvyFreeOutcome)

    def test_two_multipeak_bidders_fail_to_certify(self, mp1_pair_instance):
        trace = run_ascending(mp1_pair_instance, greedy_submodular_rule(F(1, 8)),
                              200)
        assert isinstance(trace.outcome, (StalledOutcome, StepLimitOutcome))
        raised = [s for s in trace.steps if isinstance(s.action, Raise)]
        assert raised, "the rule raises inside the overlapping demanded sets"

    def test_zero_bidders_certify_immediately(self):
        trace = run_ascending(Instance(3, ()), greedy_submodular_rule(F(1)), 5)
        assert isinstance(trace.outcome, EnvyFreeOutcome)
        assert len(trace.steps) == 1

    def test_stall_is_recorded(self, mp1_pair_instance):
        trace = run_ascending(mp1_pair_instance, greedy_submodular_rule(F(1, 8)),
                              200)
        if isinstance(trace.outcome, StalledOutcome):
            assert isinstance(trace.steps[-1].action, Stall)

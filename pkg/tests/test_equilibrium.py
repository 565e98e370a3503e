"""Envy-free search, the unit-demand matching route, witnesses, and grids."""

import random
from fractions import Fraction as F

import pytest

from auctionkit import (Additive, Allocation, EMPTY_SET, Instance, ItemSet,
                        PriceVector, UnitDemand, Witness, brute_force_demand,
                        envy_free_allocation, gen_unit_demand,
                        is_price_envy_free, is_walrasian, minimal_envy_free,
                        unit_demand_envy_free, utility)
from auctionkit.errors import GridTooLargeError

from reference import naive_envy_free, overdemand_margin


class TestEnvyFreeAllocation:
    def test_single_item_indifference(self, single_item_3_5):
        report = envy_free_allocation(single_item_3_5, PriceVector((F(3),)))
        assert report.envy_free
        assert report.allocation.assigned == (EMPTY_SET, ItemSet([1]))

    def test_single_item_contested(self, single_item_3_5):
        report = envy_free_allocation(single_item_3_5, PriceVector((F(2),)))
        assert not report.envy_free
        assert report.witness.kind == "exhaustion-proof"
        assert report.nodes_explored >= 1

    def test_two_multipeak_bidders_not_envy_free(self, mp1_pair_instance):
        report = envy_free_allocation(mp1_pair_instance, PriceVector.zero(8))
        assert not report.envy_free
        # every demanded set is a peak plus one outside item; all 8x8 pairs meet
        assert report.nodes_explored >= 8

    def test_allocation_soundness(self, mp1_pair_instance):
        prices = PriceVector((F(1), F(1), F(1), F(1), F(2), F(1), F(1), F(1)))
        report = envy_free_allocation(mp1_pair_instance, prices)
        if report.envy_free:
            for bidder, bundle in zip(mp1_pair_instance.bidders,
                                      report.allocation.assigned):
                assert utility(bidder, prices, bundle) == \
                    brute_force_demand(bidder, prices).max_utility

    def test_matches_unpruned_product_search(self):
        rng = random.Random(31)
        for _ in range(30):
            n, m = rng.randint(1, 3), rng.randint(1, 3)
            inst = gen_unit_demand(n, m, (0, 4), seed=rng.randint(0, 999))
            prices = PriceVector(tuple(F(rng.randint(0, 4)) for _ in range(m)))
            assert envy_free_allocation(inst, prices).envy_free == \
                naive_envy_free(inst, prices)

    def test_zero_bidders_trivially_envy_free(self):
        report = envy_free_allocation(Instance(2, ()), PriceVector.zero(2))
        assert report.envy_free
        assert report.allocation.assigned == ()


class TestUnitDemandEnvyFree:
    def test_three_bidders_one_item_witness(self):
        inst = Instance(1, tuple(UnitDemand((F(5),)) for _ in range(3)))
        witness = unit_demand_envy_free(inst, PriceVector.zero(1))
        assert isinstance(witness, Witness)
        assert witness.items == ItemSet([1])
        assert witness.demanders == (0, 1, 2)

    def test_matching_agrees_with_search(self, single_item_3_5):
        result = unit_demand_envy_free(single_item_3_5, PriceVector((F(3),)))
        assert isinstance(result, Allocation)

    def test_zero_bidders(self):
        result = unit_demand_envy_free(Instance(3, ()), PriceVector.zero(3))
        assert isinstance(result, Allocation)
        assert result.assigned == ()

    def test_rejects_non_unit_demand(self):
        inst = Instance(1, (Additive((F(1),)),))
        with pytest.raises(TypeError, match="unit-demand"):
            unit_demand_envy_free(inst, PriceVector.zero(1))

    def test_agreement_and_witness_validity_random(self):
        rng = random.Random(32)
        for _ in range(60):
            n, m = rng.randint(1, 4), rng.randint(1, 4)
            inst = gen_unit_demand(n, m, (0, 5), seed=rng.randint(0, 9999))
            prices = PriceVector(tuple(F(rng.randint(0, 5)) for _ in range(m)))
            result = unit_demand_envy_free(inst, prices)
            search = envy_free_allocation(inst, prices)
            assert isinstance(result, Allocation) == search.envy_free
            if isinstance(result, Witness):
                assert overdemand_margin(inst, prices, result.items) > 0
                # inclusion-minimal: dropping any item kills the inequality
                for item in result.items:
                    trimmed = result.items - ItemSet([item])
                    assert overdemand_margin(inst, prices, trimmed) <= 0

    def test_allocations_are_demand_sets(self):
        rng = random.Random(33)
        for _ in range(30):
            n, m = rng.randint(1, 4), rng.randint(1, 4)
            inst = gen_unit_demand(n, m, (0, 5), seed=rng.randint(0, 9999))
            prices = PriceVector(tuple(F(rng.randint(0, 5)) for _ in range(m)))
            result = unit_demand_envy_free(inst, prices)
            if isinstance(result, Allocation):
                for bidder, bundle in zip(inst.bidders, result.assigned):
                    assert utility(bidder, prices, bundle) == \
                        brute_force_demand(bidder, prices).max_utility


class TestMinimalEnvyFree:
    def test_single_item_3_5(self, single_item_3_5):
        points = minimal_envy_free(single_item_3_5, F(6), F(1))
        assert [p.prices for p in points] == [(F(3),)]

    def test_zero_bidders(self):
        points = minimal_envy_free(Instance(2, ()), F(3), F(1))
        assert [p.prices for p in points] == [(F(0), F(0))]

    def test_two_additive_bidders_tie(self):
        inst = Instance(1, (Additive((F(4),)), Additive((F(4),))))
        points = minimal_envy_free(inst, F(5), F(1))
        assert [p.prices for p in points] == [(F(4),)]

    def test_returned_points_are_envy_free_and_minimal(self):
        rng = random.Random(34)
        for _ in range(10):
            n, m = rng.randint(1, 3), rng.randint(1, 2)
            inst = gen_unit_demand(n, m, (0, 3), seed=rng.randint(0, 999))
            points = minimal_envy_free(inst, F(3), F(1))
            assert points, "an envy-free grid point always exists at the bound"
            grid = [PriceVector((F(a), F(b))[:m])
                    for a in range(4) for b in range(4)][: 4 ** m]
            for p in points:
                assert is_price_envy_free(inst, p)
                for q in grid:
                    if q != p and q.dominated_by(p):
                        assert not is_price_envy_free(inst, q)

    def test_bound_below_values_rejected(self, single_item_3_5):
        with pytest.raises(ValueError, match="below the largest"):
            minimal_envy_free(single_item_3_5, F(2), F(1))

    def test_grid_safety_limit(self):
        inst = gen_unit_demand(1, 5, (0, 1), seed=1)
        with pytest.raises(GridTooLargeError):
            minimal_envy_free(inst, F(2), F(1, 500))

    def test_fractional_step(self, single_item_3_5):
        points = minimal_envy_free(single_item_3_5, F(6), F(1, 2))
        assert [p.prices for p in points] == [(F(3),)]


class TestIsWalrasian:
    def test_fully_allocated(self, single_item_3_5):
        alloc = Allocation((EMPTY_SET, ItemSet([1])))
        assert is_walrasian(single_item_3_5, PriceVector((F(3),)), alloc)

    def test_unallocated_item_with_positive_price(self):
        inst = Instance(2, (UnitDemand((F(3), F(0))), UnitDemand((F(5), F(0)))))
        alloc = Allocation((EMPTY_SET, ItemSet([1])))
        assert not is_walrasian(inst, PriceVector((F(3), F(1))), alloc)
        assert is_walrasian(inst, PriceVector((F(3), F(0))), alloc)

    def test_rejects_non_envy_free_allocation(self, single_item_3_5):
        alloc = Allocation((ItemSet([1]), EMPTY_SET))
        with pytest.raises(ValueError, match="not envy-free"):
            is_walrasian(single_item_3_5, PriceVector((F(3),)), alloc)


class TestAllocationType:
    def test_disjointness_enforced(self):
        with pytest.raises(ValueError, match="overlaps"):
            Allocation((ItemSet([1, 2]), ItemSet([2, 3])))

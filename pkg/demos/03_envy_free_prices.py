"""Envy-free prices: allocations, witnesses, and grid-minimal points.

A price vector is envy-free when every bidder can simultaneously receive
one of its utility-maximizing bundles, disjointly.  For unit-demand bidders
the question is a bipartite matching, and failures come with an
overdemanded-set witness; in general it is a backtracking search over
demand sets.  Minimal envy-free points are found by grid enumeration.

Run: python3 demos/03_envy_free_prices.py
"""

from fractions import Fraction as F

from auctionkit import (Allocation, Instance, ItemSet, PriceVector,
                        UnitDemand, envy_free_allocation, is_walrasian,
                        minimal_envy_free, unit_demand_envy_free)

print("== One item, two bidders valuing it at 3 and 5 ==")
inst = Instance(1, (UnitDemand((F(3),)), UnitDemand((F(5),))))
for level in range(0, 5):
    p = PriceVector((F(level),))
    report = envy_free_allocation(inst, p)
    verdict = "envy-free" if report.envy_free else "not envy-free"
    print(f"  p={level}: {verdict} ({report.nodes_explored} nodes)")
print("  minimal envy-free on the integer grid:",
      [[str(x) for x in q.prices] for q in minimal_envy_free(inst, F(6), F(1))])

print("\n== Overdemand witnesses ==")
crowd = Instance(1, tuple(UnitDemand((F(5),)) for _ in range(3)))
witness = unit_demand_envy_free(crowd, PriceVector.zero(1))
print(f"  three bidders, one item, zero price: witness kind={witness.kind}, "
      f"items={sorted(witness.items)}, demanders={list(witness.demanders)}")
print("  three bidders whose demands all sit inside one item: 3 > 1.")

print("\n== Matching route on a 3-bidder, 2-item market ==")
market = Instance(2, (UnitDemand((F(2), F(1))), UnitDemand((F(2), F(1))),
                      UnitDemand((F(1), F(2)))))
for prices in [PriceVector((F(0), F(0))), PriceVector((F(1), F(0))),
               PriceVector((F(2), F(1)))]:
    result = unit_demand_envy_free(market, prices)
    if isinstance(result, Allocation):
        print(f"  p={[str(x) for x in prices.prices]}: allocation "
              f"{[sorted(s) for s in result.assigned]}")
    else:
        print(f"  p={[str(x) for x in prices.prices]}: overdemanded "
              f"{sorted(result.items)} by bidders {list(result.demanders)}")
minimal = minimal_envy_free(market, F(3), F(1))
print("  grid-minimal envy-free points:",
      [[str(x) for x in q.prices] for q in minimal])

print("\n== Walrasian check (allocation-specific) ==")
p = minimal[0]
report = envy_free_allocation(market, p)
print(f"  at p={[str(x) for x in p.prices]}: allocation "
      f"{[sorted(s) for s in report.allocation.assigned]}, walrasian="
      f"{is_walrasian(market, p, report.allocation)}")
alt = Allocation((ItemSet([1]), ItemSet(), ItemSet([2])))
print(f"  an indifferent bidder can absorb item 1 at its price instead: "
      f"{[sorted(s) for s in alt.assigned]}, walrasian="
      f"{is_walrasian(market, p, alt)}")

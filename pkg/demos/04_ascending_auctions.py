"""Ascending auctions: where the classic rules work, and where they cannot.

The engine starts at the zero price vector, asks a rule what to do given
per-bidder demand reports, and verifies any certification independently.
Unit-demand markets (DGS overdemanded-set raises) and additive markets
(per-item English auction) terminate at minimal envy-free prices.  For the
two-bidder multi-peak market, which is provably not envy-free at the zero
price, the naive rule raises contested items until it can neither certify
nor justify a raise -- and says so.

Run: python3 demos/04_ascending_auctions.py
"""

from fractions import Fraction as F

from auctionkit import (Additive, Instance, ItemSet, MultiPeak, PriceVector,
                        SetSystem, UnitDemand, dgs_rule, english_additive_rule,
                        envy_free_allocation, greedy_submodular_rule,
                        minimal_envy_free, run_ascending)


def narrate(trace, label):
    print(f"== {label} ==")
    for i, step in enumerate(trace.steps):
        prices = [str(x) for x in step.prices.prices]
        action = step.action.__class__.__name__.lower()
        detail = ""
        if action == "raise":
            detail = f" items {sorted(step.action.items)} by {step.action.increment}"
        print(f"  step {i}: p={prices} -> {action}{detail}")
    outcome = trace.outcome.__class__.__name__.replace("Outcome", "")
    print(f"  outcome: {outcome} at p={[str(x) for x in trace.outcome.prices.prices]}")


inst = Instance(1, (UnitDemand((F(3),)), UnitDemand((F(5),))))
narrate(run_ascending(inst, dgs_rule(F(1)), 50), "DGS, one item, values 3 and 5")
print("  (3 is exactly the grid-minimal envy-free price:",
      [str(q.prices[0]) for q in minimal_envy_free(inst, F(6), F(1))], ")\n")

market = Instance(2, (Additive((F(5), F(0))), Additive((F(3), F(4))),
                      Additive((F(2), F(2)))))
narrate(run_ascending(market, english_additive_rule(F(1)), 50),
        "English, additive values (5,0) (3,4) (2,2)")
print("  (per-item second prices: 3 and 2)\n")

system = SetSystem((ItemSet([1, 2, 3, 4]), ItemSet([5, 6, 7, 8])), 4, F(1, 2))
pair = Instance(8, (MultiPeak(system, 8), MultiPeak(system, 8)))
report = envy_free_allocation(pair, PriceVector.zero(8))
print(f"== Two identical multi-peak bidders ==")
print(f"  zero price envy-free? {report.envy_free} "
      f"(exhaustive search, {report.nodes_explored} nodes)")
print("  every demanded bundle is a peak plus one outside item; any two meet.")
trace = run_ascending(pair, greedy_submodular_rule(F(1, 8)), 200)
narrate(trace, "greedy rule, increment 1/8")
print("  the rule raises inside the overlapping demands until its own demand")
print("  reports offer nothing shared to raise, then admits it is stuck:")
print("  no implemented ascending rule certifies a minimal envy-free price here.")

"""A tour of the valuation classes, ending at the multi-peak surprise.

The multi-peak family glues a quadratic "far" profile to elevated plateaus
around each peak of a set system.  Evaluated exactly as defined, the glue
seam is visible: walking one item past a peak's closeness boundary can
*lower* the value, so the family is not monotone (nor submodular) at the
classic parameters -- and the structural validators say so with a concrete
counterexample.

Run: python3 demos/01_valuation_landscape.py
"""

from fractions import Fraction as F

from auctionkit import (Additive, BudgetAdditive, ItemSet, MultiPeak,
                        SetSystem, UnitDemand, check_monotone,
                        check_submodular, eval_valuation, find_close_peak,
                        validate_set_system)


def show(label, value):
    print(f"  {label:<38} {value}")


print("== Plain classes ==")
additive = Additive((F(3), F(4), F(2)))
unit = UnitDemand((F(3), F(4), F(2)))
budget = BudgetAdditive((F(3), F(4), F(2)), budget=F(5))
bundle = ItemSet([1, 2])
show("additive v({1,2})", eval_valuation(additive, bundle))
show("unit-demand v({1,2})", eval_valuation(unit, bundle))
show("budget-additive (b=5) v({1,2})", eval_valuation(budget, bundle))

print("\n== A two-peak system on eight items ==")
system = SetSystem((ItemSet([1, 2, 3, 4]), ItemSet([5, 6, 7, 8])),
                   peak_size=4, epsilon=F(1, 2))
print("  peaks {1,2,3,4} and {5,6,7,8}, size 4, epsilon 1/2")
show("system valid?", validate_set_system(system).ok)

v = MultiPeak(system, num_items=8)
walk = [ItemSet(), ItemSet([1]), ItemSet([1, 2]), ItemSet([1, 2, 3]),
        ItemSet([1, 2, 3, 4]), ItemSet([1, 2, 3, 4, 5]),
        ItemSet([1, 2, 3, 4, 5, 6]), ItemSet(range(1, 9))]
print("\n  growing a bundle item by item:")
for bundle in walk:
    peak = find_close_peak(system, bundle)
    region = f"close to peak {peak}" if peak is not None else "far"
    show(f"v({sorted(bundle)})", f"{eval_valuation(v, bundle)}  ({region})")

print("\n  note the drop from {1,2,3,4,5} to {1,2,3,4,5,6}: 11/8 -> 15/16.")

print("\n== The validators make the seam official ==")
mono = check_monotone(v)
sub = check_submodular(v)
show("monotone?", mono.holds)
show("  counterexample (S, add x)", (sorted(mono.counterexample[0]),
                                     mono.counterexample[1]))
show("submodular?", sub.holds)
show("  counterexample (S, T)", tuple(sorted(s) for s in sub.counterexample))

print("\n== Larger epsilon smooths the seam ==")
gentler = MultiPeak(SetSystem((ItemSet([1, 2, 3, 4]), ItemSet([5, 6, 7, 8])),
                              4, F(3, 4)), 8)
show("epsilon=3/4 monotone?", check_monotone(gentler).holds)
show("epsilon=3/4 submodular?", check_submodular(gentler).holds)

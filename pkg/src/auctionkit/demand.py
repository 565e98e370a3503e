"""Utility computation and demand oracles.

Four routes to a demand set coexist here:

* brute_force_demand - the exhaustive reference over all subsets, the
  oracle everything else is measured against;
* additive_demand / unit_demand_demand - closed forms;
* budget_additive_demand - delegates to brute force (the demand problem
  for this class is NP-hard, so only desk-scale evaluation is offered);
* multipeak_demand - the polynomial candidate construction: a prefix scan
  at exact price thresholds for the far regime plus one scan per peak,
  with the winner rescored under the true valuation.

Canonical tie-break everywhere: among utility maximizers prefer the
smallest cardinality, then the lexicographically smallest item list.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import DemandCapExceededError, GroundSetTooLargeError
from .itemsets import (EMPTY_SET, ItemSet, bit_reversals, canonical_key,
                       popcounts)
from .valuations import (Additive, BudgetAdditive, MultiPeak, UnitDemand,
                         Valuation, close_region_value, eval_valuation,
                         value_table, _INT64_GUARD)

MAX_BRUTE_ITEMS = 20
MAX_ENUMERATION_ITEMS = 16


@dataclass(frozen=True)
class PriceVector:
    """Per-item nonnegative prices; the price of a set is the sum over it."""

    prices: tuple[Fraction, ...]

    def __post_init__(self):
        coerced = tuple(Fraction(p) for p in self.prices)
        object.__setattr__(self, "prices", coerced)
        if any(p < 0 for p in coerced):
            raise ValueError("prices must be nonnegative")

    @classmethod
    def zero(cls, num_items: int) -> "PriceVector":
        return cls((Fraction(0),) * num_items)

    @property
    def num_items(self) -> int:
        return len(self.prices)

    def price_of(self, item: int) -> Fraction:
        return self.prices[item - 1]

    def total(self, bundle: ItemSet) -> Fraction:
        if bundle.max_item() > self.num_items:
            raise ValueError(
                f"item {bundle.max_item()} has no price (ground set has "
                f"{self.num_items} items)")
        return sum((self.prices[j - 1] for j in bundle), Fraction(0))

    def dominated_by(self, other: "PriceVector") -> bool:
        """Componentwise <=, the domination order on price vectors."""
        if self.num_items != other.num_items:
            raise ValueError("price vectors must have equal length")
        return all(a <= b for a, b in zip(self.prices, other.prices))

    __le__ = dominated_by

    def raised(self, items: ItemSet, increment: Fraction) -> "PriceVector":
        increment = Fraction(increment)
        if items.max_item() > self.num_items:
            raise ValueError("cannot raise an item outside the ground set")
        return PriceVector(tuple(
            p + increment if (j + 1) in items else p
            for j, p in enumerate(self.prices)))


@dataclass(frozen=True)
class DemandResult:
    """Maximum utility, a canonical maximizer, and optionally how many exist."""

    max_utility: Fraction
    witness_set: ItemSet
    argmax_count: Optional[int] = None


def utility(valuation: Valuation, prices: PriceVector, bundle: ItemSet) -> Fraction:
    """u(S) = v(S) - p(S), exact."""
    return eval_valuation(valuation, bundle) - prices.total(bundle)


def _price_table(prices: PriceVector) -> tuple[np.ndarray, int]:
    """Dense scaled price sums over all subset masks."""
    denom = 1
    for p in prices.prices:
        denom = denom * p.denominator // math.gcd(denom, p.denominator)
    nums = [p.numerator * (denom // p.denominator) for p in prices.prices]
    bound = sum(nums)
    dtype = np.int64 if bound < _INT64_GUARD else object
    arr = np.zeros(1, dtype=dtype)
    for x in nums:
        arr = np.concatenate([arr, arr + x])
    return arr, denom


def _utilities(valuation: Valuation, prices: PriceVector) -> tuple[np.ndarray, int]:
    """Scaled utilities over all masks: utilities[mask] / denom."""
    if valuation.num_items != prices.num_items:
        raise ValueError("valuation and prices disagree on the ground set size")
    vt = value_table(valuation)
    pnums, pden = _price_table(prices)
    denom = vt.denom * pden // math.gcd(vt.denom, pden)
    a, b = denom // vt.denom, denom // pden
    vmax = int(np.max(np.abs(vt.nums))) if len(vt.nums) else 0
    pmax = int(pnums[-1]) if len(pnums) else 0
    if (vt.nums.dtype == object or pnums.dtype == object
            or vmax * a + pmax * b >= _INT64_GUARD):
        util = vt.nums.astype(object) * a - pnums.astype(object) * b
    else:
        util = vt.nums * a - pnums * b
    return util, denom


def _canonical_mask(candidates: np.ndarray, num_items: int) -> int:
    """Pick min cardinality, then lexicographically smallest item list."""
    cards = popcounts(candidates)
    smallest = candidates[cards == cards.min()]
    rev = bit_reversals(num_items)[smallest]
    return int(smallest[np.argmax(rev)])


def brute_force_demand(valuation: Valuation, prices: PriceVector) -> DemandResult:
    """Exhaustive reference oracle over all 2**m subsets."""
    m = valuation.num_items
    if m > MAX_BRUTE_ITEMS:
        raise GroundSetTooLargeError(
            f"brute-force demand is limited to {MAX_BRUTE_ITEMS} items")
    util, denom = _utilities(valuation, prices)
    best = util.max()
    hits = np.flatnonzero(util == best)
    mask = _canonical_mask(hits, m)
    return DemandResult(Fraction(int(best), denom), ItemSet.from_mask(mask),
                        argmax_count=len(hits))


def demand_sets(valuation: Valuation, prices: PriceVector, cap: int) -> list[ItemSet]:
    """All utility maximizers in canonical order; errors if more than cap."""
    m = valuation.num_items
    if m > MAX_ENUMERATION_ITEMS:
        raise GroundSetTooLargeError(
            f"demand-set enumeration is limited to {MAX_ENUMERATION_ITEMS} items")
    util, _ = _utilities(valuation, prices)
    hits = np.flatnonzero(util == util.max())
    if len(hits) > cap:
        raise DemandCapExceededError(len(hits), cap)
    cards = popcounts(hits)
    rev = bit_reversals(m)[hits]
    order = np.lexsort((-rev, cards))
    return [ItemSet.from_mask(int(mask)) for mask in hits[order]]


def algorithm_zero(prices: PriceVector, size: int) -> ItemSet:
    """Far-regime candidate: the longest cheap prefix under exact thresholds.

    Items are sorted by (price, index).  Because sorted prices ascend while
    the threshold 1/s - (2l-1)/(4 s^2) strictly descends, the satisfying
    ranks form a prefix and the maximal one meets both printed conditions.
    """
    if size < 1:
        raise ValueError("size must be positive")
    order = sorted(range(len(prices.prices)),
                   key=lambda j: (prices.prices[j], j))
    take = 0
    for rank, j in enumerate(order, start=1):
        threshold = Fraction(4 * size - (2 * rank - 1), 4 * size * size)
        if prices.prices[j] <= threshold:
            take = rank
        else:
            break
    return ItemSet(j + 1 for j in order[:take])


def algorithm_peak(prices: PriceVector, peak: ItemSet, size: int,
                   eps: Fraction) -> Optional[ItemSet]:
    """Close-regime candidate for one peak, or None when nothing is marked.

    For each count l of peak items with eps*s < l <= s, the largest outside
    count kappa with kappa + eps*s < l satisfying the exact price condition
    marks the set of the l cheapest peak items plus the kappa cheapest
    outside items; kappa = 0 contributes no outside-price term.  Marked sets
    are close to this peak by construction, so on well-formed systems their
    true value is the close-region formula; the best marked set wins, ties
    broken canonically.
    """
    eps = Fraction(eps)
    if len(peak) != size:
        raise ValueError(f"peak has {len(peak)} items, expected {size}")
    m = prices.num_items
    if peak.max_item() > m:
        raise ValueError("peak uses items outside the ground set")
    inside = sorted(peak, key=lambda j: (prices.price_of(j), j))
    outside = sorted((j for j in range(1, m + 1) if j not in peak),
                     key=lambda j: (prices.price_of(j), j))

    best: Optional[tuple[Fraction, tuple, ItemSet]] = None
    eps_s = eps * size
    l_min = math.floor(eps_s) + 1
    for l in range(l_min, size + 1):
        gap = Fraction(l) - eps_s  # > 0
        kappa_ub = min((gap.numerator - 1) // gap.denominator, m - size)
        if kappa_ub < 0:
            continue
        for kappa in range(kappa_ub, -1, -1):
            lhs = prices.price_of(inside[l - 1])
            if kappa:
                lhs += prices.price_of(outside[kappa - 1])
            rhs = (Fraction(3, 2 * size)
                   - (Fraction(2 * (kappa + l)) - eps_s) / (4 * size * size))
            if lhs <= rhs:
                marked = ItemSet(inside[:l]) | ItemSet(outside[:kappa])
                gain = (close_region_value(l, kappa, size, eps)
                        - prices.total(marked))
                entry = (gain, canonical_key(marked), marked)
                if (best is None or gain > best[0]
                        or (gain == best[0] and entry[1] < best[1])):
                    best = entry
                break
    return best[2] if best else None


def multipeak_demand(valuation: MultiPeak, prices: PriceVector) -> DemandResult:
    """Polynomial demand oracle: best of the empty set, the far candidate,
    and one candidate per peak, all rescored with the true valuation."""
    if not isinstance(valuation, MultiPeak):
        raise TypeError("multipeak_demand needs a MultiPeak valuation")
    if valuation.num_items != prices.num_items:
        raise ValueError("valuation and prices disagree on the ground set size")
    system = valuation.system
    candidates = [EMPTY_SET, algorithm_zero(prices, system.peak_size)]
    for peak in system.peaks:
        marked = algorithm_peak(prices, peak, system.peak_size, system.epsilon)
        if marked is not None:
            candidates.append(marked)
    best_set, best_gain = EMPTY_SET, Fraction(0)
    for cand in candidates:
        gain = utility(valuation, prices, cand)
        if gain > best_gain or (gain == best_gain
                                and canonical_key(cand) < canonical_key(best_set)):
            best_set, best_gain = cand, gain
    return DemandResult(best_gain, best_set, argmax_count=None)


def additive_demand(valuation: Additive, prices: PriceVector) -> DemandResult:
    """Closed form: take exactly the items with positive margin."""
    if not isinstance(valuation, Additive):
        raise TypeError("additive_demand needs an Additive valuation")
    if valuation.num_items != prices.num_items:
        raise ValueError("valuation and prices disagree on the ground set size")
    taken, gain, ties = [], Fraction(0), 0
    for j in range(1, valuation.num_items + 1):
        margin = valuation.values[j - 1] - prices.price_of(j)
        if margin > 0:
            taken.append(j)
            gain += margin
        elif margin == 0:
            ties += 1
    return DemandResult(gain, ItemSet(taken), argmax_count=2 ** ties)


def unit_demand_demand(valuation: UnitDemand, prices: PriceVector) -> DemandResult:
    """Closed form: the lowest-index best single item, or nothing."""
    if not isinstance(valuation, UnitDemand):
        raise TypeError("unit_demand_demand needs a UnitDemand valuation")
    if valuation.num_items != prices.num_items:
        raise ValueError("valuation and prices disagree on the ground set size")
    best_item, best_gain = None, Fraction(0)
    for j in range(1, valuation.num_items + 1):
        margin = valuation.values[j - 1] - prices.price_of(j)
        if margin > best_gain:
            best_item, best_gain = j, margin
    if best_item is None:
        return DemandResult(Fraction(0), EMPTY_SET, argmax_count=None)
    return DemandResult(best_gain, ItemSet([best_item]), argmax_count=None)


def budget_additive_demand(valuation: BudgetAdditive,
                           prices: PriceVector) -> DemandResult:
    """The demand problem for this class is NP-hard; enumerate exhaustively."""
    if not isinstance(valuation, BudgetAdditive):
        raise TypeError("budget_additive_demand needs a BudgetAdditive valuation")
    return brute_force_demand(valuation, prices)


def demand_oracle(valuation: Valuation, prices: PriceVector) -> DemandResult:
    """Dispatch to the best oracle available for the valuation's class."""
    if isinstance(valuation, Additive):
        return additive_demand(valuation, prices)
    if isinstance(valuation, UnitDemand):
        return unit_demand_demand(valuation, prices)
    if isinstance(valuation, MultiPeak):
        return multipeak_demand(valuation, prices)
    return brute_force_demand(valuation, prices)

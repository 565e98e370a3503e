"""Valuation classes over item sets, exact evaluation, and exhaustive validators.

Every value is an exact rational (fractions.Fraction); nothing is rounded,
so ties between bundles are decided exactly.  The multi-peak family follows
its defining piecewise formulas verbatim even where those formulas violate
monotonicity; check_monotone / check_submodular are the authority on
structure, and callers are expected to consult them rather than assume.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Union

import numpy as np

from .errors import GroundSetTooLargeError, MalformedSystemError
from .itemsets import ItemSet, all_masks, popcounts

# 2**20 subsets is about the largest table that stays in desk-scale seconds.
MAX_EXHAUSTIVE_ITEMS = 20

# Scaled integers above this bound leave int64 headroom; fall back to
# arbitrary-precision object arrays.
_INT64_GUARD = 1 << 60


def _fraction_tuple(values, *, what: str = "item values") -> tuple[Fraction, ...]:
    out = tuple(Fraction(v) for v in values)
    if any(v < 0 for v in out):
        raise ValueError(f"{what} must be nonnegative")
    return out


def _check_bundle(bundle: ItemSet, num_items: int) -> None:
    if bundle.max_item() > num_items:
        raise ValueError(
            f"item {bundle.max_item()} is outside the ground set 1..{num_items}"
        )


@dataclass(frozen=True)
class SetSystem:
    """k peaks of a common size with an overlap budget of epsilon * size.

    Structural constraints (exact sizes, pairwise overlaps) are *not*
    enforced here; validate_set_system reports on them.  Keeping malformed
    systems constructible is deliberate: the uniqueness error paths need
    exercising.
    """

    peaks: tuple[ItemSet, ...]
    peak_size: int
    epsilon: Fraction

    def __post_init__(self):
        object.__setattr__(self, "peaks", tuple(self.peaks))
        object.__setattr__(self, "epsilon", Fraction(self.epsilon))
        if not self.peaks:
            raise ValueError("a set system needs at least one peak")
        if self.peak_size < 1:
            raise ValueError("peak_size must be a positive integer")
        if not (0 < self.epsilon < 1):
            raise ValueError("epsilon must lie strictly between 0 and 1")


@dataclass(frozen=True)
class SystemReport:
    ok: bool
    violations: tuple[str, ...] = ()


@dataclass(frozen=True)
class MonotoneReport:
    holds: bool
    # (S, x) with v(S + x) < v(S)
    counterexample: Optional[tuple[ItemSet, int]] = None


@dataclass(frozen=True)
class SubmodularReport:
    holds: bool
    # (S, T) with v(S | T) + v(S & T) > v(S) + v(T)
    counterexample: Optional[tuple[ItemSet, ItemSet]] = None


def eps_close(bundle: ItemSet, target: ItemSet, eps: Fraction) -> bool:
    """Whether |S & T| - |S - T| > eps * |T|.  Asymmetric in S and T."""
    eps = Fraction(eps)
    inter = len(bundle & target)
    outside = len(bundle) - inter
    return Fraction(inter - outside) > eps * len(target)


def find_close_peak(system: SetSystem, bundle: ItemSet) -> Optional[int]:
    """Index of the unique peak the bundle is close to, or None.

    For systems satisfying the overlap budget the close peak is provably
    unique; closeness to two peaks therefore certifies a malformed system
    and raises.
    """
    hits = [i for i, peak in enumerate(system.peaks)
            if eps_close(bundle, peak, system.epsilon)]
    if len(hits) > 1:
        raise MalformedSystemError(
            f"{bundle!r} is close to peaks {hits}; the system is malformed"
        )
    return hits[0] if hits else None


def close_region_value(overlap: int, outside: int, size: int, eps: Fraction) -> Fraction:
    """Value of a bundle close to a peak: |S&A| = overlap, |S-A| = outside."""
    pe, qe = eps.numerator, eps.denominator
    num = (2 * size * qe * (overlap * (2 * qe - pe) + outside * (2 * qe + pe))
           + 4 * qe * qe * overlap * outside
           + pe * pe * size * size)
    return Fraction(num, 4 * size * size * qe * qe)


def far_region_value(cardinality: int, size: int) -> Fraction:
    """Value of a bundle far from every peak: |S|/s - |S|^2 / (4 s^2)."""
    return Fraction(cardinality * (4 * size - cardinality), 4 * size * size)


@dataclass(frozen=True)
class Additive:
    """v(S) = sum of per-item values."""

    values: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", _fraction_tuple(self.values))

    @property
    def num_items(self) -> int:
        return len(self.values)

    def value(self, bundle: ItemSet) -> Fraction:
        _check_bundle(bundle, self.num_items)
        return sum((self.values[j - 1] for j in bundle), Fraction(0))


@dataclass(frozen=True)
class UnitDemand:
    """v(S) = best single item in S."""

    values: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", _fraction_tuple(self.values))

    @property
    def num_items(self) -> int:
        return len(self.values)

    def value(self, bundle: ItemSet) -> Fraction:
        _check_bundle(bundle, self.num_items)
        return max((self.values[j - 1] for j in bundle), default=Fraction(0))


@dataclass(frozen=True)
class BudgetAdditive:
    """v(S) = min(budget, sum of per-item values)."""

    values: tuple[Fraction, ...]
    budget: Fraction

    def __post_init__(self):
        object.__setattr__(self, "values", _fraction_tuple(self.values))
        object.__setattr__(self, "budget", Fraction(self.budget))
        if self.budget < 0:
            raise ValueError("budget must be nonnegative")

    @property
    def num_items(self) -> int:
        return len(self.values)

    def value(self, bundle: ItemSet) -> Fraction:
        _check_bundle(bundle, self.num_items)
        return min(self.budget,
                   sum((self.values[j - 1] for j in bundle), Fraction(0)))


@dataclass(frozen=True)
class MultiPeak:
    """Piecewise valuation: elevated near each peak, quadratic elsewhere.

    The far-region formula turns negative once |S| exceeds 4 * peak_size, so
    ground sets that large are rejected outright rather than producing
    negative values.
    """

    system: SetSystem
    num_items: int

    def __post_init__(self):
        if self.num_items < 1:
            raise ValueError("num_items must be positive")
        if self.num_items > 4 * self.system.peak_size:
            raise ValueError(
                "ground sets larger than 4 * peak_size drive the far-region "
                "formula negative"
            )
        for i, peak in enumerate(self.system.peaks):
            if peak.max_item() > self.num_items:
                raise ValueError(f"peak {i} uses items beyond the ground set")

    def value(self, bundle: ItemSet) -> Fraction:
        _check_bundle(bundle, self.num_items)
        idx = find_close_peak(self.system, bundle)
        size = self.system.peak_size
        if idx is None:
            return far_region_value(len(bundle), size)
        overlap = len(bundle & self.system.peaks[idx])
        return close_region_value(overlap, len(bundle) - overlap, size,
                                  self.system.epsilon)


@dataclass(frozen=True)
class Explicit:
    """Dense table of values, indexed by subset mask."""

    num_items: int
    table: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "table", _fraction_tuple(self.table, what="table values"))
        if self.num_items > MAX_EXHAUSTIVE_ITEMS:
            raise GroundSetTooLargeError(
                f"explicit tables are limited to {MAX_EXHAUSTIVE_ITEMS} items")
        if len(self.table) != 1 << self.num_items:
            raise ValueError(
                f"table must have {1 << self.num_items} entries, "
                f"got {len(self.table)}")
        if self.table[0] != 0:
            raise ValueError("the empty set must have value 0")

    @classmethod
    def from_dict(cls, num_items: int, values: dict) -> "Explicit":
        """Build from {iterable-of-items: value}; missing subsets error."""
        dense: list[Optional[Fraction]] = [None] * (1 << num_items)
        for key, val in values.items():
            bundle = key if isinstance(key, ItemSet) else ItemSet(key)
            _check_bundle(bundle, num_items)
            dense[bundle.mask] = Fraction(val)
        missing = [m for m, v in enumerate(dense) if v is None]
        if missing:
            raise ValueError(
                f"table is missing {len(missing)} subsets, "
                f"first {ItemSet.from_mask(missing[0])!r}")
        return cls(num_items, tuple(dense))

    def value(self, bundle: ItemSet) -> Fraction:
        _check_bundle(bundle, self.num_items)
        return self.table[bundle.mask]


Valuation = Union[Additive, UnitDemand, BudgetAdditive, MultiPeak, Explicit]


def eval_valuation(valuation: Valuation, bundle: ItemSet) -> Fraction:
    """Exact value of a bundle under any valuation class."""
    return valuation.value(bundle)


def validate_set_system(system: SetSystem) -> SystemReport:
    """Check peak sizes and pairwise overlaps; every violation is listed."""
    violations = []
    size = system.peak_size
    budget = system.epsilon * size
    for i, peak in enumerate(system.peaks):
        if len(peak) != size:
            violations.append(f"peak {i} has size {len(peak)}, expected {size}")
    for i in range(len(system.peaks)):
        for j in range(i + 1, len(system.peaks)):
            overlap = len(system.peaks[i] & system.peaks[j])
            if Fraction(overlap) > budget:
                violations.append(
                    f"peaks {i} and {j} share {overlap} items, more than "
                    f"epsilon * size = {budget}")
    return SystemReport(ok=not violations, violations=tuple(violations))


# ---------------------------------------------------------------------------
# Dense exact tables and exhaustive validators
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ValueTable:
    """Exact dense values: value(mask) = nums[mask] / denom."""

    nums: np.ndarray  # int64, or object dtype when int64 would overflow
    denom: int
    num_items: int


def _scaled_ints(values) -> tuple[list[int], int]:
    denom = 1
    for v in values:
        denom = denom * v.denominator // math.gcd(denom, v.denominator)
    return [v.numerator * (denom // v.denominator) for v in values], denom


def _as_array(nums: list[int]) -> np.ndarray:
    peak = max((abs(x) for x in nums), default=0)
    dtype = np.int64 if peak < _INT64_GUARD else object
    return np.array(nums, dtype=dtype)


def _guard_items(num_items: int, what: str) -> None:
    if num_items > MAX_EXHAUSTIVE_ITEMS:
        raise GroundSetTooLargeError(
            f"{what} enumerates all subsets; limited to "
            f"{MAX_EXHAUSTIVE_ITEMS} items, got {num_items}")


@lru_cache(maxsize=32)
def value_table(valuation: Valuation) -> ValueTable:
    """Dense table of exact scaled values over all 2**m subsets."""
    m = valuation.num_items
    _guard_items(m, "value_table")

    if isinstance(valuation, (Additive, BudgetAdditive)):
        parts = list(valuation.values)
        if isinstance(valuation, BudgetAdditive):
            parts.append(valuation.budget)
        nums, denom = _scaled_ints(parts)
        bound = sum(abs(x) for x in nums)
        dtype = np.int64 if bound < _INT64_GUARD else object
        arr = np.zeros(1, dtype=dtype)
        item_nums = nums[:m] if isinstance(valuation, BudgetAdditive) else nums
        for x in item_nums:
            arr = np.concatenate([arr, arr + x])
        if isinstance(valuation, BudgetAdditive):
            arr = np.minimum(arr, nums[-1])
        return ValueTable(arr, denom, m)

    if isinstance(valuation, UnitDemand):
        nums, denom = _scaled_ints(valuation.values)
        arr = np.zeros(1, dtype=np.int64 if max(nums, default=0) < _INT64_GUARD else object)
        for x in nums:
            arr = np.concatenate([arr, np.maximum(arr, x)])
        return ValueTable(arr, denom, m)

    if isinstance(valuation, Explicit):
        nums, denom = _scaled_ints(valuation.table)
        return ValueTable(_as_array(nums), denom, m)

    if isinstance(valuation, MultiPeak):
        size = valuation.system.peak_size
        eps = valuation.system.epsilon
        pe, qe = eps.numerator, eps.denominator
        masks = all_masks(m)
        card = popcounts(masks)
        nums = qe * qe * card * (4 * size - card)  # far region
        close_any = np.zeros(len(masks), dtype=bool)
        for i, peak in enumerate(valuation.system.peaks):
            a = popcounts(masks & peak.mask)
            b = card - a
            close = qe * (a - b) > pe * size
            clash = close & close_any
            if clash.any():
                bad = int(np.flatnonzero(clash)[0])
                raise MalformedSystemError(
                    f"{ItemSet.from_mask(bad)!r} is close to two peaks; "
                    "the system is malformed")
            close_any |= close
            cnum = (2 * size * qe * (a * (2 * qe - pe) + b * (2 * qe + pe))
                    + 4 * qe * qe * a * b
                    + pe * pe * size * size)
            nums = np.where(close, cnum, nums)
        return ValueTable(nums.astype(np.int64), 4 * size * size * qe * qe, m)

    raise TypeError(f"unknown valuation class {type(valuation).__name__}")


def _expand_bit(compressed: int, bit: int) -> int:
    """Re-insert a 0 at position `bit` of a compressed mask."""
    low = compressed & ((1 << bit) - 1)
    return ((compressed >> bit) << (bit + 1)) | low


def check_monotone(valuation: Valuation) -> MonotoneReport:
    """Exhaustively verify v(S + x) >= v(S) for every S and x not in S.

    The returned counterexample is the first violation in (mask ascending,
    item ascending) order.
    """
    m = valuation.num_items
    _guard_items(m, "check_monotone")
    table = value_table(valuation)
    tensor = table.nums.reshape((2,) * m)
    best: Optional[tuple[int, int]] = None
    for bit in range(m):
        axis = m - 1 - bit
        low = tensor.take(0, axis=axis)
        high = tensor.take(1, axis=axis)
        viol = high < low
        if viol.any():
            compressed = int(np.argmax(viol.reshape(-1)))
            candidate = (_expand_bit(compressed, bit), bit + 1)
            if best is None or candidate < best:
                best = candidate
    if best is None:
        return MonotoneReport(holds=True)
    return MonotoneReport(holds=False,
                          counterexample=(ItemSet.from_mask(best[0]), best[1]))


def submodular_by_definition(valuation: Valuation) -> SubmodularReport:
    """Scan all subset pairs for v(S|T) + v(S&T) <= v(S) + v(T).

    The counterexample, if any, is the first pair in (S ascending,
    T ascending) order; by symmetry the scan may restrict to T >= S.
    """
    m = valuation.num_items
    _guard_items(m, "check_submodular")
    table = value_table(valuation)
    vals = table.nums
    masks = all_masks(m)
    for s_mask in range(1 << m):
        tail = masks[s_mask:]
        lhs = vals[tail | s_mask] + vals[tail & s_mask]
        rhs = vals[s_mask] + vals[s_mask:]
        viol = lhs > rhs
        if viol.any():
            t_mask = s_mask + int(np.argmax(viol))
            return SubmodularReport(
                holds=False,
                counterexample=(ItemSet.from_mask(s_mask),
                                ItemSet.from_mask(t_mask)))
    return SubmodularReport(holds=True)


def submodular_by_marginals(valuation: Valuation) -> bool:
    """Decide submodularity via decreasing marginals.

    For each item x the marginal g(S) = v(S + x) - v(S) over x-free sets S
    must be antitone under inclusion: g(S) >= g(T) whenever S is a subset
    of T.  That holds exactly when the min-over-subsets transform of g
    equals g itself.
    """
    m = valuation.num_items
    _guard_items(m, "check_submodular")
    table = value_table(valuation)
    tensor = table.nums.reshape((2,) * m)
    for bit in range(m):
        axis = m - 1 - bit
        marg = tensor.take(1, axis=axis) - tensor.take(0, axis=axis)
        mins = marg.copy()
        for a in range(mins.ndim):
            hi = tuple(slice(None) if k != a else 1 for k in range(mins.ndim))
            lo = tuple(slice(None) if k != a else 0 for k in range(mins.ndim))
            mins[hi] = np.minimum(mins[hi], mins[lo])
        if not bool((mins == marg).all()):
            return False
    return True


def check_submodular(valuation: Valuation) -> SubmodularReport:
    """Exhaustive submodularity check, cross-validated by two routes.

    The pairwise definition is the authority for the verdict and the
    counterexample; the decreasing-marginals route must agree, and a
    disagreement means an internal bug, never a property of the input.
    """
    report = submodular_by_definition(valuation)
    if submodular_by_marginals(valuation) != report.holds:
        raise RuntimeError(
            "internal disagreement between submodularity checkers")
    return report

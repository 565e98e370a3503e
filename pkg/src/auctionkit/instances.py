"""Seeded instance generators, load-time validation, and the file format.

Instance documents are JSON with exactly the keys m / bidders / metadata.
Rationals are canonical "num/den" strings with bare integers as shorthand;
decoding rejects non-canonical forms like "2/4" unless asked to normalize.
Explicit tables are keyed by comma-joined sorted item lists ("" is the empty
set) because JSON objects cannot key on arrays.

Generators are deterministic functions of (parameters, seed), and every
generated instance carries its provenance in metadata, so any fixture can be
regenerated from its metadata alone.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional, Union

from .errors import InfeasibleGenerationError, SchemaError
from .itemsets import ItemSet
from .demand import PriceVector
from .rationals import format_rational, parse_rational
from .valuations import (Additive, BudgetAdditive, Explicit, MultiPeak,
                         SetSystem, UnitDemand, Valuation, check_monotone,
                         validate_set_system)

MAX_GENERATION_RETRIES = 10_000


@dataclass(frozen=True)
class Instance:
    """Ground set of num_items items plus one valuation per bidder."""

    num_items: int
    bidders: tuple[Valuation, ...]
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "bidders", tuple(self.bidders))
        if self.num_items < 1:
            raise ValueError("an instance needs at least one item")
        for i, v in enumerate(self.bidders):
            if v.num_items != self.num_items:
                raise ValueError(
                    f"bidder {i} is defined on {v.num_items} items, "
                    f"instance has {self.num_items}")


def _check_range(name: str, lo: int, hi: int) -> None:
    if lo < 0 or hi < lo:
        raise ValueError(f"{name} must satisfy 0 <= lo <= hi, got ({lo}, {hi})")


def gen_additive(n: int, m: int, value_range: tuple[int, int], seed: int) -> Instance:
    """n additive bidders over m items; values uniform integers in the range."""
    lo, hi = value_range
    _check_range("value_range", lo, hi)
    rng = random.Random(seed)
    bidders = tuple(
        Additive(tuple(Fraction(rng.randint(lo, hi)) for _ in range(m)))
        for _ in range(n))
    return Instance(m, bidders, metadata={
        "name": f"additive-n{n}-m{m}-seed{seed}",
        "seed": seed,
        "generator_params": {"family": "additive", "n": n, "m": m,
                             "value_range": [lo, hi]},
    })


def gen_unit_demand(n: int, m: int, value_range: tuple[int, int], seed: int) -> Instance:
    lo, hi = value_range
    _check_range("value_range", lo, hi)
    rng = random.Random(seed)
    bidders = tuple(
        UnitDemand(tuple(Fraction(rng.randint(lo, hi)) for _ in range(m)))
        for _ in range(n))
    return Instance(m, bidders, metadata={
        "name": f"unit-demand-n{n}-m{m}-seed{seed}",
        "seed": seed,
        "generator_params": {"family": "unit_demand", "n": n, "m": m,
                             "value_range": [lo, hi]},
    })


def gen_budget_additive(n: int, m: int, value_range: tuple[int, int],
                        budget_range: tuple[int, int], seed: int) -> Instance:
    lo, hi = value_range
    blo, bhi = budget_range
    _check_range("value_range", lo, hi)
    _check_range("budget_range", blo, bhi)
    rng = random.Random(seed)
    bidders = tuple(
        BudgetAdditive(tuple(Fraction(rng.randint(lo, hi)) for _ in range(m)),
                       Fraction(rng.randint(blo, bhi)))
        for _ in range(n))
    return Instance(m, bidders, metadata={
        "name": f"budget-additive-n{n}-m{m}-seed{seed}",
        "seed": seed,
        "generator_params": {"family": "budget_additive", "n": n, "m": m,
                             "value_range": [lo, hi],
                             "budget_range": [blo, bhi]},
    })


def _draw_system(rng: random.Random, m: int, s: int, k: int,
                 eps: Fraction, budget: list[int]) -> SetSystem:
    """Rejection-sample k peaks of size s with pairwise overlaps <= eps*s."""
    peaks: list[ItemSet] = []
    while len(peaks) < k:
        candidate = ItemSet(rng.sample(range(1, m + 1), s))
        if all(Fraction(len(candidate & p)) <= eps * s for p in peaks):
            peaks.append(candidate)
        else:
            budget[0] -= 1
            if budget[0] <= 0:
                raise InfeasibleGenerationError(
                    f"could not place {k} peaks of size {s} with overlap "
                    f"budget {eps * s} in {m} items within the retry budget")
    return SetSystem(tuple(peaks), s, eps)


def gen_multipeak(m: int, s: int, k: int, eps: Fraction, n: int, seed: int,
                  share_system: bool = True,
                  max_retries: int = MAX_GENERATION_RETRIES) -> Instance:
    """n multi-peak bidders; one shared peak system, or one drawn per bidder."""
    eps = Fraction(eps)
    if not (0 < eps < 1):
        raise ValueError("eps must lie strictly between 0 and 1")
    if not (1 <= s <= m):
        raise ValueError(f"need 1 <= s <= m, got s={s}, m={m}")
    if k < 1 or n < 1:
        raise ValueError("k and n must be positive")
    if m > 4 * s:
        raise ValueError(
            "m > 4*s drives the far-region formula negative; pick a larger s")
    # Inclusion-exclusion lower bound on the union of k peaks; a failed
    # check is certain infeasibility, a passed one still defers to sampling.
    overlap_cap = int(eps * s)
    if k * s - (k * (k - 1) // 2) * overlap_cap > m:
        raise InfeasibleGenerationError(
            f"{k} peaks of size {s} with pairwise overlap at most "
            f"{overlap_cap} cannot fit in {m} items")
    rng = random.Random(seed)
    budget = [max_retries]
    if share_system:
        system = _draw_system(rng, m, s, k, eps, budget)
        bidders = tuple(MultiPeak(system, m) for _ in range(n))
    else:
        bidders = tuple(MultiPeak(_draw_system(rng, m, s, k, eps, budget), m)
                        for _ in range(n))
    return Instance(m, bidders, metadata={
        "name": f"multipeak-m{m}-s{s}-k{k}-seed{seed}",
        "seed": seed,
        "generator_params": {"family": "multi_peak", "m": m, "s": s, "k": k,
                             "epsilon": str(format_rational(eps)), "n": n,
                             "share_system": share_system},
    })


# ---------------------------------------------------------------------------
# File format
# ---------------------------------------------------------------------------

def _table_key(mask: int) -> str:
    return ",".join(str(j) for j in ItemSet.from_mask(mask))


def _encode_bidder(v: Valuation) -> dict:
    if isinstance(v, Additive):
        return {"type": "additive",
                "values": [format_rational(x) for x in v.values]}
    if isinstance(v, UnitDemand):
        return {"type": "unit_demand",
                "values": [format_rational(x) for x in v.values]}
    if isinstance(v, BudgetAdditive):
        return {"type": "budget_additive",
                "values": [format_rational(x) for x in v.values],
                "budget": format_rational(v.budget)}
    if isinstance(v, MultiPeak):
        return {"type": "multi_peak",
                "s": v.system.peak_size,
                "k": len(v.system.peaks),
                "epsilon": format_rational(v.system.epsilon),
                "peaks": [list(p) for p in v.system.peaks]}
    if isinstance(v, Explicit):
        return {"type": "explicit",
                "table": {_table_key(mask): format_rational(val)
                          for mask, val in enumerate(v.table)}}
    raise TypeError(f"unknown valuation class {type(v).__name__}")


def encode_instance(instance: Instance) -> bytes:
    doc = {
        "m": instance.num_items,
        "bidders": [_encode_bidder(v) for v in instance.bidders],
        "metadata": instance.metadata,
    }
    return (json.dumps(doc, sort_keys=True, indent=2) + "\n").encode()


def _expect(condition: bool, message: str) -> None:
    if not condition:
        raise SchemaError(message)


def _parse_values(raw: Any, m: int, where: str, canonicalize: bool) -> tuple[Fraction, ...]:
    _expect(isinstance(raw, list), f"{where}: expected a list of rationals")
    _expect(len(raw) == m, f"{where}: expected {m} entries, got {len(raw)}")
    out = []
    for idx, entry in enumerate(raw):
        val = parse_rational(entry, canonicalize=canonicalize,
                             where=f"{where}[{idx}]")
        _expect(val >= 0, f"{where}[{idx}]: values must be nonnegative")
        out.append(val)
    return tuple(out)


def _decode_bidder(raw: Any, m: int, where: str, canonicalize: bool) -> Valuation:
    _expect(isinstance(raw, dict), f"{where}: expected an object")
    kind = raw.get("type")
    try:
        if kind == "additive":
            _expect(set(raw) == {"type", "values"}, f"{where}: unexpected keys")
            return Additive(_parse_values(raw["values"], m, f"{where}.values",
                                          canonicalize))
        if kind == "unit_demand":
            _expect(set(raw) == {"type", "values"}, f"{where}: unexpected keys")
            return UnitDemand(_parse_values(raw["values"], m, f"{where}.values",
                                            canonicalize))
        if kind == "budget_additive":
            _expect(set(raw) == {"type", "values", "budget"},
                    f"{where}: unexpected keys")
            budget = parse_rational(raw["budget"], canonicalize=canonicalize,
                                    where=f"{where}.budget")
            _expect(budget >= 0, f"{where}.budget: must be nonnegative")
            return BudgetAdditive(
                _parse_values(raw["values"], m, f"{where}.values", canonicalize),
                budget)
        if kind == "multi_peak":
            _expect(set(raw) == {"type", "s", "k", "epsilon", "peaks"},
                    f"{where}: unexpected keys")
            s, k = raw["s"], raw["k"]
            _expect(isinstance(s, int) and s >= 1, f"{where}.s: positive int required")
            _expect(isinstance(k, int) and k >= 1, f"{where}.k: positive int required")
            eps = parse_rational(raw["epsilon"], canonicalize=canonicalize,
                                 where=f"{where}.epsilon")
            _expect(0 < eps < 1, f"{where}.epsilon: must lie strictly in (0, 1)")
            peaks_raw = raw["peaks"]
            _expect(isinstance(peaks_raw, list) and len(peaks_raw) == k,
                    f"{where}.peaks: expected {k} peaks")
            peaks = []
            for idx, entry in enumerate(peaks_raw):
                pwhere = f"{where}.peaks[{idx}]"
                _expect(isinstance(entry, list), f"{pwhere}: expected a list")
                _expect(entry == sorted(entry) and len(set(entry)) == len(entry),
                        f"{pwhere}: items must be sorted and distinct")
                _expect(all(isinstance(j, int) and 1 <= j <= m for j in entry),
                        f"{pwhere}: items must lie in 1..{m}")
                peaks.append(ItemSet(entry))
            system = SetSystem(tuple(peaks), s, eps)
            report = validate_set_system(system)
            _expect(report.ok,
                    f"{where}: invalid set system: " + "; ".join(report.violations))
            return MultiPeak(system, m)
        if kind == "explicit":
            _expect(set(raw) == {"type", "table"}, f"{where}: unexpected keys")
            table_raw = raw["table"]
            _expect(isinstance(table_raw, dict), f"{where}.table: expected an object")
            entries = {}
            for key, entry in table_raw.items():
                kwhere = f"{where}.table[{key!r}]"
                try:
                    items = [int(tok) for tok in key.split(",")] if key else []
                except ValueError:
                    raise SchemaError(f"{kwhere}: malformed subset key")
                _expect(items == sorted(items) and len(set(items)) == len(items),
                        f"{kwhere}: subset keys must be sorted and distinct")
                _expect(all(1 <= j <= m for j in items),
                        f"{kwhere}: items must lie in 1..{m}")
                bundle = ItemSet(items)
                val = parse_rational(entry, canonicalize=canonicalize, where=kwhere)
                _expect(val >= 0, f"{kwhere}: values must be nonnegative")
                entries[bundle.mask] = val
            _expect(len(entries) == 1 << m,
                    f"{where}.table: expected {1 << m} subsets, got {len(entries)}")
            valuation = Explicit(m, tuple(entries[mask] for mask in range(1 << m)))
            report = check_monotone(valuation)
            if not report.holds:
                bad, extra = report.counterexample
                raise SchemaError(
                    f"{where}.table: not monotone: adding item {extra} to "
                    f"{sorted(bad)} lowers the value")
            return valuation
    except (ValueError, TypeError) as exc:
        raise SchemaError(f"{where}: {exc}") from exc
    raise SchemaError(f"{where}.type: unknown valuation type {kind!r}")


def decode_instance(data: Union[bytes, str], *,
                    canonicalize_rationals: bool = False) -> Instance:
    """Parse and fully validate an instance document."""
    if isinstance(data, bytes):
        data = data.decode()
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"document is not valid JSON: {exc}") from exc
    _expect(isinstance(doc, dict), "document: expected an object")
    _expect(set(doc) <= {"m", "bidders", "metadata"},
            f"document: unexpected keys {sorted(set(doc) - {'m', 'bidders', 'metadata'})}")
    _expect("m" in doc and "bidders" in doc, "document: keys m and bidders are required")
    m = doc["m"]
    _expect(isinstance(m, int) and m >= 1, "m: expected a positive integer")
    _expect(isinstance(doc["bidders"], list), "bidders: expected a list")
    bidders = tuple(
        _decode_bidder(raw, m, f"bidders[{i}]", canonicalize_rationals)
        for i, raw in enumerate(doc["bidders"]))
    metadata = doc.get("metadata", {})
    _expect(isinstance(metadata, dict), "metadata: expected an object")
    return Instance(m, bidders, metadata)


def dump_prices(prices: PriceVector) -> bytes:
    doc = {"prices": [format_rational(p) for p in prices.prices]}
    return (json.dumps(doc, sort_keys=True, indent=2) + "\n").encode()


def load_prices(data: Union[bytes, str], num_items: Optional[int] = None, *,
                canonicalize_rationals: bool = False) -> PriceVector:
    if isinstance(data, bytes):
        data = data.decode()
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"document is not valid JSON: {exc}") from exc
    _expect(isinstance(doc, dict) and set(doc) == {"prices"},
            "document: expected exactly the key 'prices'")
    raw = doc["prices"]
    _expect(isinstance(raw, list), "prices: expected a list")
    if num_items is not None:
        _expect(len(raw) == num_items,
                f"prices: expected {num_items} entries, got {len(raw)}")
    out = []
    for idx, entry in enumerate(raw):
        val = parse_rational(entry, canonicalize=canonicalize_rationals,
                             where=f"prices[{idx}]")
        _expect(val >= 0, f"prices[{idx}]: prices must be nonnegative")
        out.append(val)
    return PriceVector(tuple(out))

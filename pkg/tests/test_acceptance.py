"""Acceptance suite: the eight exit criteria, one test and one printed
pass/fail line each.  Everything asserts exact rational equality; runtime
budgets are generous but enforced.

Run with `pytest -s tests/test_acceptance.py` to see the per-criterion lines.
"""

import json
import random
import time
from contextlib import contextmanager
from fractions import Fraction as F

import pytest

from auctionkit import (Additive, BudgetAdditive, Explicit, ItemSet,
                        PriceVector, UnitDemand,
                        additive_demand, brute_force_demand,
                        budget_additive_demand, check_monotone,
                        check_submodular, decode_instance, dgs_rule,
                        encode_instance, english_additive_rule,
                        envy_free_allocation, eval_valuation, gen_additive,
                        gen_budget_additive, gen_multipeak, gen_unit_demand,
                        greedy_submodular_rule, minimal_envy_free,
                        run_ascending, serialize_trace, unit_demand_demand,
                        unit_demand_envy_free, Allocation, Witness)
from auctionkit.auctions import (EnvyFreeOutcome, StalledOutcome,
                                 StepLimitOutcome)
from auctionkit.valuations import (submodular_by_definition,
                                   submodular_by_marginals)

from conftest import DATA_DIR
from corpus import build_corpus
from make_fixtures import (GREEDY_INCREMENT, GREEDY_MAX_STEPS, TRACE_PATH,
                           build_trace_bytes, mp1_pair)
from reference import overdemand_margin


@contextmanager
def criterion(number: int, budget_s: float, description: str):
    start = time.perf_counter()
    try:
        yield
    except BaseException:
        elapsed = time.perf_counter() - start
        print(f"ACCEPTANCE {number} FAIL - {description} [{elapsed:.2f}s]")
        raise
    elapsed = time.perf_counter() - start
    if elapsed >= budget_s:
        print(f"ACCEPTANCE {number} FAIL - {description} "
              f"[runtime {elapsed:.2f}s over budget {budget_s:.0f}s]")
        raise AssertionError(f"criterion {number} exceeded its runtime budget")
    print(f"ACCEPTANCE {number} PASS - {description} "
          f"[{elapsed:.2f}s / {budget_s:.0f}s]")


def test_criterion_1_multipeak_formula_pinning(mp1):
    with criterion(1, 1.0, "multi-peak formula pinning on hand-derived rationals"):
        assert eval_valuation(mp1, ItemSet([1])) == F(15, 64)
        assert eval_valuation(mp1, ItemSet([1, 2, 3])) == F(5, 8)
        assert eval_valuation(mp1, ItemSet([1, 2, 3, 4])) == F(13, 16)
        assert eval_valuation(mp1, ItemSet([1, 2, 3, 4, 5])) == F(11, 8)
        assert eval_valuation(mp1, ItemSet(range(1, 9))) == 1


def test_criterion_2_multipeak_oracle_equivalence():
    with criterion(2, 300.0, "multi-peak oracle equals brute force on the corpus"):
        corpus, counterexamples = build_corpus()
        frozen_corpus = json.loads((DATA_DIR / "multipeak_corpus.json").read_text())
        frozen_counter = json.loads(
            (DATA_DIR / "multipeak_counterexamples.json").read_text())

        pairs = sum(len(rec["prices"]) for rec in corpus["instances"])
        assert pairs >= 1000
        # every instance passing both validators matches everywhere, live
        for rec in corpus["instances"]:
            if rec["monotone"] and rec["submodular"]:
                assert all(row["match"] for row in rec["prices"]), rec["params"]
        # and the frozen statuses never regress
        assert corpus == frozen_corpus
        assert counterexamples == frozen_counter


def test_criterion_3_class_oracle_equivalence():
    with criterion(3, 120.0, "closed-form class oracles equal brute force"):
        for offset, (make, oracle) in enumerate([
            (lambda rng, vals, m: Additive(vals), additive_demand),
            (lambda rng, vals, m: UnitDemand(vals), unit_demand_demand),
            (lambda rng, vals, m: BudgetAdditive(vals, F(rng.randint(0, 15))),
             budget_additive_demand),
        ]):
            for case in range(1000):
                rng = random.Random(30_000 + 7919 * offset + case)
                m = rng.randint(1, 12)
                vals = tuple(F(rng.randint(0, 9)) for _ in range(m))
                prices = PriceVector(tuple(
                    F(rng.randint(0, 9), rng.choice([1, 2, 4]))
                    for _ in range(m)))
                valuation = make(rng, vals, m)
                assert oracle(valuation, prices).max_utility == \
                    brute_force_demand(valuation, prices).max_utility


def test_criterion_4_validator_correctness(mp1):
    with criterion(4, 60.0, "submodularity checker forms agree; violations flagged"):
        for case in range(500):
            rng = random.Random(40_000 + case)
            m = rng.randint(2, 8)
            table = [F(rng.randint(0, 6)) for _ in range(1 << m)]
            table[0] = F(0)
            valuation = Explicit(m, tuple(table))
            assert submodular_by_definition(valuation).holds == \
                submodular_by_marginals(valuation)
        supermodular = Explicit(2, (F(0), F(0), F(0), F(1)))
        report = check_submodular(supermodular)
        assert not report.holds
        assert report.counterexample == (ItemSet([1]), ItemSet([2]))
        mono = check_monotone(mp1)
        assert not mono.holds
        bundle, item = mono.counterexample
        assert eval_valuation(mp1, bundle) > eval_valuation(mp1, bundle.add(item))


def test_criterion_5_envy_free_ground_truth():
    with criterion(5, 120.0, "matching route agrees with search on price sweeps"):
        case = 0
        for n in range(1, 5):
            for m in range(1, 5):
                for seed in (0, 1, 2):
                    inst = gen_unit_demand(n, m, (0, 5), seed=500 + case)
                    case += 1
                    for point in range(6 ** m):
                        digits = []
                        rest = point
                        for _ in range(m):
                            digits.append(F(rest % 6))
                            rest //= 6
                        prices = PriceVector(tuple(digits))
                        result = unit_demand_envy_free(inst, prices)
                        search = envy_free_allocation(inst, prices)
                        assert isinstance(result, Allocation) == search.envy_free
                        if isinstance(result, Witness):
                            assert overdemand_margin(inst, prices,
                                                     result.items) > 0


def test_criterion_6_auction_baselines():
    with criterion(6, 300.0, "DGS grid-minimal; English second prices"):
        for case in range(200):
            rng = random.Random(60_000 + case)
            n, m = rng.randint(1, 5), rng.randint(1, 5)
            inst = gen_unit_demand(n, m, (0, 5), seed=61_000 + case)
            trace = run_ascending(inst, dgs_rule(F(1)), 1000)
            assert isinstance(trace.outcome, EnvyFreeOutcome)
            assert trace.outcome.prices in minimal_envy_free(inst, F(5), F(1))
        for case in range(200):
            rng = random.Random(62_000 + case)
            n, m = rng.randint(1, 5), rng.randint(1, 5)
            inst = gen_additive(n, m, (0, 5), seed=63_000 + case)
            trace = run_ascending(inst, english_additive_rule(F(1)), 1000)
            assert isinstance(trace.outcome, EnvyFreeOutcome)
            for j in range(1, m + 1):
                values = sorted((v.values[j - 1] for v in inst.bidders),
                                reverse=True)
                second = values[1] if len(values) > 1 else F(0)
                assert trace.outcome.prices.price_of(j) == second


def test_criterion_7_thesis_demonstration():
    with criterion(7, 60.0, "no rule certifies the two-bidder multi-peak fixture"):
        fixture = mp1_pair()
        report = envy_free_allocation(fixture, PriceVector.zero(8))
        assert not report.envy_free  # exhaustive proof at the zero price
        with pytest.raises(TypeError):
            run_ascending(fixture, dgs_rule(F(1)), GREEDY_MAX_STEPS)
        trace = run_ascending(fixture, greedy_submodular_rule(GREEDY_INCREMENT),
                              GREEDY_MAX_STEPS)
        assert isinstance(trace.outcome, (StalledOutcome, StepLimitOutcome))
        blob = serialize_trace(trace)
        assert blob == TRACE_PATH.read_bytes()
        assert build_trace_bytes() == blob  # byte-identical reproduction


def test_criterion_8_serialization_round_trips():
    with criterion(8, 30.0, "instance documents round-trip bit-identically"):
        count = 0
        for seed in range(125):
            instances = [
                gen_additive(1 + seed % 4, 1 + seed % 6, (0, 9), seed=seed),
                gen_unit_demand(1 + seed % 3, 1 + seed % 5, (0, 9), seed=seed),
                gen_budget_additive(1 + seed % 4, 1 + seed % 5, (0, 9),
                                    (0, 12), seed=seed),
                gen_multipeak(4 + 2 * (seed % 3), 2 + (seed % 3),
                              1 + seed % 2, F(2, 3), 1 + seed % 2, seed=seed),
            ]
            for inst in instances:
                blob = encode_instance(inst)
                assert encode_instance(decode_instance(blob)) == blob
                count += 1
        assert count == 500

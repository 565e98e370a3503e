"""Rebuild every frozen fixture under tests/data/.

Fixtures are deterministic functions of the committed parameters, so a
rebuild on an unchanged implementation must be a no-op; any diff is a
behaviour change that needs review.
"""

from fractions import Fraction
from pathlib import Path

from auctionkit import (Instance, ItemSet, MultiPeak, SetSystem,
                        greedy_submodular_rule, run_ascending, serialize_trace)

from corpus import write_corpus_files

DATA_DIR = Path(__file__).parent / "data"
TRACE_PATH = DATA_DIR / "mp1_greedy_trace.json"

# Increment for the frozen two-bidder run: 1/8 is small enough that the
# greedy rule stalls instead of overshooting into the everyone-takes-nothing
# region (where certification would be legitimate but uninformative).
GREEDY_INCREMENT = Fraction(1, 8)
GREEDY_MAX_STEPS = 200


def mp1_pair() -> Instance:
    system = SetSystem((ItemSet([1, 2, 3, 4]), ItemSet([5, 6, 7, 8])),
                       4, Fraction(1, 2))
    bidder = MultiPeak(system, 8)
    return Instance(8, (bidder, bidder), {"name": "mp1-pair"})


def build_trace_bytes() -> bytes:
    trace = run_ascending(mp1_pair(), greedy_submodular_rule(GREEDY_INCREMENT),
                          GREEDY_MAX_STEPS)
    return serialize_trace(trace)


def main() -> None:
    DATA_DIR.mkdir(exist_ok=True)
    corpus, counterexamples = write_corpus_files()
    TRACE_PATH.write_bytes(build_trace_bytes())
    pairs = sum(len(rec["prices"]) for rec in corpus["instances"])
    validating = sum(1 for rec in corpus["instances"]
                     if rec["monotone"] and rec["submodular"])
    print(f"corpus: {len(corpus['instances'])} instances, {pairs} pairs, "
          f"{validating} validating, {len(counterexamples)} mismatch fixtures")
    print(f"trace fixture: {TRACE_PATH.name} ({TRACE_PATH.stat().st_size} bytes)")


if __name__ == "__main__":
    main()

"""The matcher must agree with exhaustive tuple enumeration.

The oracle in randgen.brute_force_matches enumerates every |vars|-tuple
of tokens and filters by predicates and arcs directly; find_matches uses
candidate pruning and backtracking.  Any divergence is a matcher bug.
"""

import random

from hypothesis import given, strategies as st

from emorole.rules import find_matches
from .randgen import brute_force_matches, random_rule, random_sentence


def _production_tuples(rule, sentence):
    return sorted(
        tuple(m.bindings[name].index for name in sorted(m.bindings))
        for m in find_matches(rule, sentence)
    )


def test_matcher_agrees_with_brute_force_bulk():
    rng = random.Random(20240817)
    sentences = [random_sentence(rng, index=0) for _ in range(200)]
    rules = [random_rule(rng, f"r{i}") for i in range(50)]
    checked = 0
    for si, sentence in enumerate(sentences):
        for rule in rules[(si * 5) % 50:(si * 5) % 50 + 5]:
            assert _production_tuples(rule, sentence) == \
                brute_force_matches(rule, sentence), \
                f"divergence for rule {rule.id} on sentence {si}"
            checked += 1
    assert checked == 1000


@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_matcher_agrees_with_brute_force_random(seed):
    rng = random.Random(seed)
    sentence = random_sentence(rng, index=0, max_tokens=8)
    rule = random_rule(rng, "r")
    assert _production_tuples(rule, sentence) == brute_force_matches(rule, sentence)


def test_matcher_results_unique_and_sorted():
    rng = random.Random(7)
    for _ in range(50):
        sentence = random_sentence(rng, index=0)
        rule = random_rule(rng, "r")
        keys = [m.sort_key() for m in find_matches(rule, sentence)]
        assert keys == sorted(keys)
        assert len(keys) == len(set(keys))

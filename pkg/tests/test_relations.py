"""Vanishing relations, the normalized reduction engine, and the generic reducer."""

import json
import random
import time

import pytest

from hermdens.hironaka import HironakaEngine
from hermdens.partitions import lambda_ns_elements, partitions_fixed_length, trailing_zeros, weight
from hermdens.qalgebra import ONE, Q, RatFunc, ZERO, neg_q_power
from hermdens.relations import (
    GenericAlphaReducer,
    REWRITE_RULES,
    ReductionEngine,
    match_rewrite,
    reduce_normalized,
    theorem_terms,
    verify_relation,
)


def test_theorem_terms_merges_rank2_s1():
    rel = theorem_terms(2, 1, (1, 0))
    terms = dict((p, c) for c, p in rel.terms)
    assert terms == {(1, 0): ONE, (2, 1): -neg_q_power(-4)}
    assert rel.context == (2, 1, (1, 0))


def test_theorem_terms_generic_s1_collapses_middle():
    # for any head, the two promoted-by-one terms cancel
    for head in ((3,), (2, 1), (4, 4, 2)):
        n = len(head) + 1
        rel = theorem_terms(n, 1, head + (0,))
        terms = dict((p, c) for c, p in rel.terms)
        assert terms == {
            head + (0,): ONE,
            tuple(sorted(head + (2,), reverse=True)): -neg_q_power(-2 * n),
        }


def test_theorem_terms_rank2_s2_five_terms():
    rel = theorem_terms(2, 2, (0, 0))
    terms = {p: c for c, p in rel.terms}
    q = Q
    assert terms[(0, 0)] == ONE
    assert terms[(1, 0)] == ONE / q - ONE / q ** 2
    assert terms[(1, 1)] == -(ONE / q ** 3) - ONE / q ** 4
    assert terms[(2, 1)] == -(ONE / q ** 5) + ONE / q ** 6
    assert terms[(2, 2)] == ONE / q ** 7
    assert len(terms) == 5


def test_theorem_terms_leading_coefficient_is_one():
    for n, s, xi in ((3, 2, (2, 0, 0)), (4, 4, (0, 0, 0, 0)), (4, 1, (3, 2, 1, 0))):
        rel = theorem_terms(n, s, xi)
        terms = {p: c for c, p in rel.terms}
        assert terms[xi] == ONE


def test_theorem_terms_validation():
    with pytest.raises(ValueError):
        theorem_terms(2, 2, (1, 0))
    with pytest.raises(ValueError):
        theorem_terms(2, 0, (1, 1))


def test_verify_relation_examples():
    eng = HironakaEngine()
    ok, res = verify_relation(theorem_terms(2, 2, (0, 0)), (1, 1), eng)
    assert ok and res == ZERO
    ok, res = verify_relation(theorem_terms(3, 1, (2, 2, 0)), (2, 1, 1), eng)
    assert ok and res == ZERO
    # residual computed independently, term by term
    rel = theorem_terms(2, 1, (1, 0))
    manual = ZERO
    for coeff, part in rel.terms:
        manual = manual + coeff * eng.alpha(part, (2, 2))
    ok, res = verify_relation(rel, (2, 2), eng)
    assert ok and manual == res == ZERO


def test_negative_controls_have_nonzero_residual():
    # degenerate B (last part 0) genuinely breaks the relation
    eng = HironakaEngine()
    controls = [
        (1, 1, (0,), (0,)),
        (2, 1, (1, 0), (1, 0)),
        (2, 2, (0, 0), (2, 0)),
        (3, 1, (2, 2, 0), (2, 2, 0)),
    ]
    for n, s, xi, lam in controls:
        ok, res = verify_relation(theorem_terms(n, s, xi), lam, eng)
        assert not ok and not res.is_zero, (n, s, xi, lam)


def test_theorem_sweep_small():
    eng = HironakaEngine()
    for n in (1, 2, 3):
        lams = list(partitions_fixed_length(n, 1, 3))
        for s in range(1, n + 1):
            for xi in lambda_ns_elements(n, s, 2):
                rel = theorem_terms(n, s, xi)
                for lam in lams:
                    ok, res = verify_relation(rel, lam, eng)
                    assert ok, (n, s, xi, lam, str(res))


# ---------------------------------------------------------------------------
# rewrite rules
# ---------------------------------------------------------------------------

def test_rewrite_rules_cover_all_zero_tailed_shapes():
    for n in (2, 3, 4):
        for head in partitions_fixed_length(n - 1, 0, 6):
            xi = head + (0,)
            assert match_rewrite(xi) is not None, xi


def test_rewrite_rules_are_disjoint():
    # match_rewrite asserts uniqueness internally; sweep a grid through it
    for n in (2, 3, 4):
        for head in partitions_fixed_length(n - 1, 0, 5):
            match_rewrite(head + (0,))


def test_rewrite_rule_instantiation_two_placeholders():
    rule, bind = match_rewrite((5, 4, 0))
    assert rule.rule_id == "C2.19.4"
    assert bind == (5, 4)
    [(coeff, target)] = rule.instantiate(bind)
    assert target == (5, 4, 2) and coeff == Q ** 4


def test_corollary_identities_hold_through_direct_evaluation():
    eng = HironakaEngine()
    rng = random.Random(31)
    lams = {n: list(partitions_fixed_length(n, 1, 2)) for n in (2, 3, 4)}
    for n in (2, 3, 4):
        for rule in REWRITE_RULES[n]:
            slots = sum(1 for t in rule.pattern if t == "*")
            fill = tuple(sorted((rng.choice((3, 4)) for _ in range(slots)), reverse=True))
            it = iter(fill)
            xi = tuple(next(it) if t == "*" else t for t in rule.pattern)
            for lam in lams[n]:
                lhs = eng.normalized(xi, lam)
                rhs = ZERO
                for coeff, part in rule.instantiate(fill):
                    rhs = rhs + coeff * eng.normalized(part, lam)
                assert lhs == rhs, (rule.rule_id, xi, lam)


# ---------------------------------------------------------------------------
# the reduction engine
# ---------------------------------------------------------------------------

def test_reduce_worked_chain():
    eng = ReductionEngine()
    t0 = time.perf_counter()
    val, trace = eng.reduce_normalized((3, 0, 0), (8, 3, 2))
    elapsed = time.perf_counter() - t0
    assert val == Q ** 6 + Q ** 5 + Q ** 4
    assert len(trace) <= 10
    assert elapsed < 0.05
    used = set(trace.rule_ids())
    assert used == {"C2.19.7", "C2.19.8", "C2.17.2", "P2.15", "P2.14"}
    assert trace.rule_ids()[0] == "C2.19.7"
    assert trace.replay() == val


def test_reduce_worked_values():
    eng = ReductionEngine()
    assert eng.reduce_normalized((6, 0), (8, 6))[0] == Q ** 5 * (Q - 1)
    assert eng.reduce_normalized((5, 4, 3, 2), (5, 4, 3, 2))[0] == ONE
    assert eng.reduce_normalized((2, 0, 0), (3, 3, 2))[0] == \
        (Q + 1) * (Q ** 6 + Q ** 4 - Q ** 3 + Q ** 2)


def test_reduce_matches_direct_randomized():
    rng = random.Random(20260809)
    heng = HironakaEngine()
    red = ReductionEngine(HironakaEngine())
    for _ in range(60):
        n = rng.randint(1, 4)
        xi = tuple(sorted((rng.randint(0, 8) for _ in range(n)), reverse=True))
        lam = tuple(sorted((rng.randint(0, 8) for _ in range(n)), reverse=True))
        assert red.normalized_value(xi, lam) == heng.normalized(xi, lam), (xi, lam)


def test_trace_replay_randomized():
    rng = random.Random(88)
    eng = ReductionEngine()
    for _ in range(30):
        n = rng.randint(1, 4)
        xi = tuple(sorted((rng.randint(0, 6) for _ in range(n)), reverse=True))
        lam = tuple(sorted((rng.randint(0, 6) for _ in range(n)), reverse=True))
        val, trace = eng.reduce_normalized(xi, lam)
        assert trace.replay() == val, (xi, lam)


def test_trace_measure_decreases_along_steps():
    # rewrite children strictly decrease (|lam|, trailing zeros of xi, n)
    eng = ReductionEngine()
    _, trace = eng.reduce_normalized((4, 2, 0, 0), (5, 3, 2, 1))
    for step in trace.steps:
        parent = (weight(step.lam_before), trailing_zeros(step.xi_before), len(step.xi_before))
        for child in step.children:
            assert (weight(child.lam), trailing_zeros(child.xi), len(child.xi)) < parent


def test_trace_json_serialization():
    eng = ReductionEngine()
    val, trace = eng.reduce_normalized((3, 0, 0), (8, 3, 2))
    blob = json.loads(trace.dumps())
    assert blob[0]["rule_id"] == "C2.19.7"
    assert blob[0]["xi_before"] == [3, 0, 0]
    assert blob[0]["lambda_before"] == [8, 3, 2]
    assert RatFunc.from_json(blob[0]["factor"]) == Q ** 2 * (Q + 1)
    sib = blob[0]["additive_siblings"]
    assert len(sib) == 1 and sib[0]["xi"] == [3, 2, 2]


def test_trace_on_warm_cache_stays_valid():
    eng = ReductionEngine()
    eng.reduce_normalized((3, 0, 0), (8, 3, 2))
    val, trace = eng.reduce_normalized((3, 0, 0), (8, 3, 2))
    assert trace.rule_ids() == ["memo"]
    assert trace.replay() == val


def test_reduce_handles_fallback_for_rank5():
    eng = ReductionEngine()
    xi, lam = (1, 1, 0, 0, 0), (2, 1, 1, 1, 1)
    val, trace = eng.reduce_normalized(xi, lam)
    assert "hironaka-fallback" in trace.rule_ids()
    assert val == HironakaEngine().normalized(xi, lam)


def test_reduce_zero_shortcuts():
    eng = ReductionEngine()
    val, trace = eng.reduce_normalized((1, 0), (1, 1))
    assert val == ZERO and trace.rule_ids() == ["parity-zero"]
    val, trace = eng.reduce_normalized((2, 2), (3, 1))
    assert val == ZERO and trace.rule_ids() == ["support-zero"]


# ---------------------------------------------------------------------------
# generic unnormalized reduction
# ---------------------------------------------------------------------------

def test_generic_reduction_examples():
    heng = HironakaEngine()
    red = GenericAlphaReducer(heng)
    assert red.alpha_value((4, 0), (4, 2)) == Q ** 6 * (ONE + ONE / Q) ** 2
    assert red.alpha_value((0, 0), (1, 1)) == heng.alpha((0, 0), (1, 1))
    xi, lam = (1, 1, 0, 0, 0), (2, 1, 1, 1, 1)
    assert red.alpha_value(xi, lam) == heng.alpha(xi, lam)


def test_generic_reduction_randomized():
    rng = random.Random(77)
    heng = HironakaEngine()
    red = GenericAlphaReducer(heng)
    for _ in range(40):
        n = rng.randint(1, 5)
        xi = tuple(sorted((rng.randint(0, 4) for _ in range(n)), reverse=True))
        lam = tuple(sorted((rng.randint(0, 4) for _ in range(n)), reverse=True))
        assert red.alpha_value(xi, lam) == heng.alpha(xi, lam), (xi, lam)


def test_reduce_normalized_function_wrapper():
    val, trace = reduce_normalized((3, 0, 0), (8, 3, 2))
    assert val == Q ** 6 + Q ** 5 + Q ** 4 and len(trace) >= 1

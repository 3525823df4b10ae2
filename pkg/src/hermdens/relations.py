"""Inter-density relations: generation, verification, and fast reduction.

Three cooperating pieces live here.

``theorem_terms`` builds the linear relation satisfied by the densities
alpha(A_., B) whenever pi^{-1}B is still integral: for a label xi ending in
s zeros it combines the promotions xi_plus(xi, a, b) with the coefficients
d_{n,s,i}, and the whole combination annihilates alpha(., B).
``verify_relation`` checks such a relation by direct evaluation.

``ReductionEngine.reduce_normalized`` evaluates normalized densities
A_xi(A_lam) by rewriting instead of direct summation.  The rewrite loop:

  (a) 0 when the weights have different parity, and 0 when xi_n > lam_n
      (the form's values all have valuation >= xi_n, so nothing of smaller
      valuation is represented);
  (b) shift both labels down by one when both end in positive parts
      (rule id "P2.15");
  (c) drop a common trailing zero (rule id "P2.14");
  (d) for n <= 4, apply the tabulated rewrite keyed on the xi pattern
      (rule ids "C2.17.*", "C2.19.*", "C2.20.*"), valid while lam_n >= 1;
  (e) otherwise fall back to the direct evaluator ("hironaka-fallback").

Every evaluation returns an auditable ``ReductionTrace`` whose replay
reproduces the value exactly.  Each rewrite strictly decreases the measure
(|lam|, trailing zeros of xi, n), which is asserted per step.

``alpha_via_generic_reduction`` applies the same relation at the
unnormalized alpha level for arbitrary n: it eliminates trailing zeros of
xi via the relation solved for its leading term, scales both labels down
when possible, and delegates to the normalized engine once lam ends in 0.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from . import hironaka
from .partitions import (
    check_partition,
    d_coefficients,
    trailing_zeros,
    weight,
    xi_plus,
)
from .qalgebra import ONE, Q, RatFunc, ZERO, neg_q_power


# ---------------------------------------------------------------------------
# relation generation and verification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Relation:
    """A finite combination sum_i coeff_i * alpha(A_{part_i}, B) that vanishes
    for every B = A_lam with all parts >= 1."""

    terms: tuple          # tuple of (RatFunc, partition)
    context: tuple        # (n, s, xi)

    def partitions(self):
        return tuple(p for _, p in self.terms)


def theorem_terms(n, s, xi):
    """The vanishing relation attached to xi with s trailing zeros.

    Terms are [(d_{n,s,i}, xi_plus(xi,0,i))] plus
    [(-(-1)^s (-q)^{-ns} d_{n,s,i}, xi_plus(xi,i,s-i))], with coefficients
    of duplicate partitions merged and exact zeros dropped.  The xi term
    itself always survives with coefficient exactly 1.
    """
    xi = check_partition(xi)
    if len(xi) != n:
        raise ValueError(f"xi has length {len(xi)}, expected {n}")
    if not 1 <= s <= n:
        raise ValueError(f"need 1 <= s <= n, got s={s}")
    if trailing_zeros(xi) != s:
        raise ValueError(f"{xi} does not end in exactly {s} zeros")
    ds = d_coefficients(n, s)
    pref = neg_q_power(-n * s)
    if s % 2:
        pref = -pref
    acc = {}
    for i in range(s + 1):
        p = xi_plus(xi, 0, i)
        acc[p] = acc.get(p, ZERO) + ds[i]
    for i in range(s + 1):
        p = xi_plus(xi, i, s - i)
        acc[p] = acc.get(p, ZERO) - pref * ds[i]
    terms = tuple((c, p) for p, c in sorted(acc.items(), reverse=True) if not c.is_zero)
    return Relation(terms=terms, context=(n, s, xi))


def verify_relation(rel, lam, engine=None):
    """Evaluate the relation against B = A_lam; returns (is_zero, residual).

    Valid instances require all parts of lam >= 1; calls with lam_n = 0 are
    deliberate negative controls and generally leave a nonzero residual.
    """
    lam = check_partition(lam)
    engine = engine or hironaka.default_engine()
    residual = ZERO
    for coeff, part in rel.terms:
        residual = residual + coeff * engine.alpha(part, lam)
    return residual.is_zero, residual


# ---------------------------------------------------------------------------
# normalized rewrite rules for n <= 4
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RewriteRule:
    rule_id: str
    pattern: tuple       # ints match exactly, "*" matches any value >= 3
    rhs: tuple           # tuple of (RatFunc coefficient, target template)

    def match(self, xi):
        """Positional placeholder bindings, or None; () means a literal match."""
        bind = []
        for spec, x in zip(self.pattern, xi):
            if spec == "*":
                if x < 3:
                    return None
                bind.append(x)
            elif spec != x:
                return None
        return tuple(bind)

    def instantiate(self, bind):
        out = []
        for coeff, tpl in self.rhs:
            it = iter(bind)
            out.append((coeff, tuple(next(it) if t == "*" else t for t in tpl)))
        return out


def _rules():
    q = Q
    table = {
        2: [
            ("C2.17.1", (0, 0), [(q + 1, (1, 1)), (-q, (2, 2))]),
            ("C2.17.2", (1, 0), [(ONE, (2, 1))]),
            ("C2.17.3", (2, 0), [(q * (q - 1), (2, 2))]),
            ("C2.17.4", ("*", 0), [(q ** 2, ("*", 2))]),
        ],
        3: [
            ("C2.19.1", (0, 0, 0), [(q + 1, (2, 1, 1)), (-q ** 3, (2, 2, 2))]),
            ("C2.19.2", (1, 0, 0), [(q ** 3 + 1, (1, 1, 1)), (-q, (2, 2, 1))]),
            ("C2.19.3", (1, 1, 0), [(ONE, (2, 1, 1))]),
            ("C2.19.4", ("*", "*", 0), [(q ** 4, ("*", "*", 2))]),
            ("C2.19.5", ("*", 2, 0), [(q ** 3 * (q - 1), ("*", 2, 2))]),
            ("C2.19.6", (2, 2, 0), [(q ** 2 * (q ** 2 - q + 1), (2, 2, 2))]),
            ("C2.19.7", ("*", 0, 0), [(q ** 2 * (q + 1), ("*", 1, 1)), (-q ** 5, ("*", 2, 2))]),
            ("C2.19.8", (2, 0, 0), [(q ** 2 * (q + 1), (2, 1, 1)),
                                    (-q ** 3 * (q ** 2 - q + 1), (2, 2, 2))]),
            ("C2.19.9", (2, 1, 0), [(q * (q - 1), (2, 2, 1))]),
            ("C2.19.10", ("*", 1, 0), [(q ** 2, ("*", 2, 1))]),
        ],
        4: [
            ("C2.20.1", ("*", "*", "*", 0), [(q ** 6, ("*", "*", "*", 2))]),
            ("C2.20.2", ("*", "*", 2, 0), [(q ** 5 * (q - 1), ("*", "*", 2, 2))]),
            ("C2.20.3", ("*", "*", 1, 0), [(q ** 4, ("*", "*", 2, 1))]),
            ("C2.20.4", ("*", 2, 2, 0), [(q ** 4 * (q ** 2 - q + 1), ("*", 2, 2, 2))]),
            ("C2.20.5", ("*", 2, 1, 0), [(q ** 3 * (q - 1), ("*", 2, 2, 1))]),
            ("C2.20.6", ("*", 1, 1, 0), [(q ** 2, ("*", 2, 1, 1))]),
            ("C2.20.7", (2, 2, 2, 0), [(q ** 3 * (q ** 3 - q ** 2 + q - 1), (2, 2, 2, 2))]),
            ("C2.20.8", (2, 2, 1, 0), [(q ** 2 * (q ** 2 - q + 1), (2, 2, 2, 1))]),
            ("C2.20.9", (2, 1, 1, 0), [(q * (q - 1), (2, 2, 1, 1))]),
            ("C2.20.10", (1, 1, 1, 0), [(ONE, (2, 1, 1, 1))]),
            ("C2.20.11", ("*", "*", 0, 0), [(q ** 4 * (q + 1), ("*", "*", 1, 1)),
                                            (-q ** 9, ("*", "*", 2, 2))]),
            ("C2.20.12", ("*", 2, 0, 0), [(q ** 4 * (q + 1), ("*", 2, 1, 1)),
                                          (-q ** 7 * (q ** 2 - q + 1), ("*", 2, 2, 2))]),
            ("C2.20.13", ("*", 1, 0, 0), [(q ** 2 * (q ** 3 + 1), ("*", 1, 1, 1)),
                                          (-q ** 5, ("*", 2, 2, 1))]),
            ("C2.20.14", (2, 2, 0, 0), [(q ** 4 * (q + 1), (2, 2, 1, 1)),
                                        (-q ** 5 * (q ** 2 - q + 1) * (q ** 2 + 1), (2, 2, 2, 2))]),
            ("C2.20.15", (2, 1, 0, 0), [(q ** 2 * (q ** 3 + 1), (2, 1, 1, 1)),
                                        (-q ** 3 * (q ** 2 - q + 1), (2, 2, 2, 1))]),
            ("C2.20.16", (1, 1, 0, 0), [((q ** 3 + 1) * (q ** 2 + 1), (1, 1, 1, 1)),
                                        (-q, (2, 2, 1, 1))]),
            ("C2.20.17", ("*", 0, 0, 0), [(q ** 4 * (q + 1), ("*", 2, 1, 1)),
                                          (-q ** 9, ("*", 2, 2, 2))]),
            ("C2.20.18", (2, 0, 0, 0), [(q ** 3 * (q ** 2 - 1), (2, 2, 1, 1)),
                                        (-q ** 6 * (q ** 3 - q ** 2 + q - 1), (2, 2, 2, 2))]),
            ("C2.20.19", (1, 0, 0, 0), [(q ** 3 + 1, (2, 1, 1, 1)), (-q ** 3, (2, 2, 2, 1))]),
            ("C2.20.20", (0, 0, 0, 0), [((q + 1) * (q ** 3 + 1), (1, 1, 1, 1)),
                                        (-q * (q + 1), (2, 2, 1, 1)),
                                        (q ** 6, (2, 2, 2, 2))]),
        ],
    }
    return {n: tuple(RewriteRule(rid, pat, tuple(rhs)) for rid, pat, rhs in rows)
            for n, rows in table.items()}


REWRITE_RULES = _rules()


def match_rewrite(xi):
    """Find the unique rewrite rule matching xi (asserting pattern disjointness)."""
    hits = []
    for rule in REWRITE_RULES.get(len(xi), ()):
        bind = rule.match(xi)
        if bind is not None:
            hits.append((rule, bind))
    if not hits:
        return None
    assert len(hits) == 1, f"overlapping rewrite patterns for {xi}: {[r.rule_id for r, _ in hits]}"
    return hits[0]


# ---------------------------------------------------------------------------
# reduction traces
# ---------------------------------------------------------------------------

@dataclass
class TraceChild:
    factor: RatFunc
    xi: tuple
    lam: tuple
    value: RatFunc = None      # inline value for leaves and warm-memo hits
    note: str = None           # "parity-zero", "support-zero", "base-n1", "memo"

    def to_json(self):
        d = {"factor": self.factor.to_json(), "xi": list(self.xi), "lambda": list(self.lam)}
        if self.value is not None:
            d["value"] = self.value.to_json()
        if self.note:
            d["note"] = self.note
        return d


@dataclass
class TraceStep:
    rule_id: str
    xi_before: tuple
    lam_before: tuple
    children: list = field(default_factory=list)
    value: RatFunc = None      # value of this node (terminal steps carry it alone)

    def to_json(self):
        d = {
            "rule_id": self.rule_id,
            "xi_before": list(self.xi_before),
            "lambda_before": list(self.lam_before),
            "xi_after": None,
            "lambda_after": None,
            "factor": None,
            "additive_siblings": [c.to_json() for c in self.children[1:]],
        }
        if self.children:
            first = self.children[0]
            d["xi_after"] = list(first.xi)
            d["lambda_after"] = list(first.lam)
            d["factor"] = first.factor.to_json()
            if first.value is not None:
                d["value"] = first.value.to_json()
        elif self.value is not None:
            d["value"] = self.value.to_json()
        return d


@dataclass
class ReductionTrace:
    root: tuple
    steps: list = field(default_factory=list)

    def add(self, step):
        self.steps.append(step)
        return step

    def has_expanded(self, key):
        return any((s.xi_before, s.lam_before) == key for s in self.steps)

    def __len__(self):
        return len(self.steps)

    def rule_ids(self):
        return [s.rule_id for s in self.steps]

    def replay(self):
        """Recompute the root value from the recorded steps alone."""
        by_key = {(s.xi_before, s.lam_before): s for s in self.steps}
        memo = {}

        def value_of(key):
            if key in memo:
                return memo[key]
            step = by_key[key]
            if not step.children:
                val = step.value
            else:
                val = ZERO
                for child in step.children:
                    sub = child.value if child.value is not None \
                        else value_of((child.xi, child.lam))
                    val = val + child.factor * sub
            memo[key] = val
            return val

        return value_of(self.root)

    def to_json(self):
        return [s.to_json() for s in self.steps]

    def dumps(self, **kw):
        return json.dumps(self.to_json(), **kw)


# ---------------------------------------------------------------------------
# the normalized reduction engine
# ---------------------------------------------------------------------------

def _measure(xi, lam):
    return (weight(lam), trailing_zeros(xi), len(xi))


class ReductionEngine:
    """Rewrites normalized densities with memoization and auditable traces."""

    def __init__(self, hironaka_engine=None):
        self.hironaka = hironaka_engine or hironaka.HironakaEngine()
        self._memo = {}

    # leaf evaluation shared by the tracing and non-tracing paths
    def _leaf(self, xi, lam):
        if (weight(xi) - weight(lam)) % 2:
            return ZERO, "parity-zero"
        if xi[-1] > lam[-1]:
            return ZERO, "support-zero"
        if len(xi) == 1:
            return self.hironaka.normalized(xi, lam), "base-n1"
        return None

    def _expansion(self, xi, lam):
        """One rewrite: (rule_id, [(factor, child_xi, child_lam)]) or a terminal value."""
        n = len(xi)
        if xi[-1] >= 1 and lam[-1] >= 1:
            return "P2.15", [(ONE, tuple(x - 1 for x in xi), tuple(x - 1 for x in lam))]
        if xi[-1] == 0 and lam[-1] == 0:
            return "P2.14", [(ONE, xi[:-1], lam[:-1])]
        if xi[-1] == 0 and lam[-1] >= 1 and n <= 4:
            hit = match_rewrite(xi)
            assert hit is not None, f"rewrite table has no rule for {xi}"
            rule, bind = hit
            return rule.rule_id, [(c, p, lam) for c, p in rule.instantiate(bind)]
        return "hironaka-fallback", None

    def _eval(self, xi, lam, trace):
        key = (xi, lam)
        if key in self._memo and trace is None:
            return self._memo[key]
        leaf = self._leaf(xi, lam)
        if leaf is not None:
            val, rule = leaf
            if trace is not None:
                trace.add(TraceStep(rule, xi, lam, value=val))
            self._memo[key] = val
            return val
        if key in self._memo:
            # warm cache at the trace root: record a terminal step with the value
            val = self._memo[key]
            trace.add(TraceStep("memo", xi, lam, value=val))
            return val
        rule_id, children = self._expansion(xi, lam)
        if children is None:
            val = self.hironaka.normalized(xi, lam)
            if trace is not None:
                trace.add(TraceStep(rule_id, xi, lam, value=val))
            self._memo[key] = val
            return val
        step = trace.add(TraceStep(rule_id, xi, lam)) if trace is not None else None
        here = _measure(xi, lam)
        val = ZERO
        for factor, cxi, clam in children:
            assert _measure(cxi, clam) < here, \
                f"non-decreasing step {rule_id}: {(xi, lam)} -> {(cxi, clam)}"
            child = TraceChild(factor, cxi, clam)
            ckey = (cxi, clam)
            cleaf = self._leaf(cxi, clam)
            if cleaf is not None:
                sub, child.note = cleaf
                child.value = sub
                self._memo.setdefault(ckey, sub)
            elif ckey in self._memo:
                sub = self._memo[ckey]
                if trace is None or not trace.has_expanded(ckey):
                    # value computed before this trace began: inline it
                    child.value = sub
                    child.note = "memo"
            else:
                sub = self._eval(cxi, clam, trace)
            val = val + factor * sub
            if step is not None:
                step.children.append(child)
        if step is not None:
            step.value = val
        self._memo[key] = val
        return val

    def normalized_value(self, xi, lam):
        """The value alone, with memoization but no trace."""
        xi = check_partition(xi)
        lam = check_partition(lam)
        if len(xi) != len(lam):
            raise ValueError("normalized density needs labels of equal length")
        return self._eval(xi, lam, None)

    def reduce_normalized(self, xi, lam):
        """Evaluate A_xi(A_lam) by rewriting; returns (value, ReductionTrace)."""
        xi = check_partition(xi)
        lam = check_partition(lam)
        if len(xi) != len(lam):
            raise ValueError("normalized density needs labels of equal length")
        trace = ReductionTrace(root=(xi, lam))
        val = self._eval(xi, lam, trace)
        return val, trace


def reduce_normalized(xi, lam, engine=None):
    engine = engine or ReductionEngine()
    return engine.reduce_normalized(xi, lam)


# ---------------------------------------------------------------------------
# generic unnormalized reduction
# ---------------------------------------------------------------------------

class GenericAlphaReducer:
    """Evaluates alpha(A_xi, A_lam) for equal lengths via the vanishing relation.

    While lam ends in a positive part: a label xi ending in s zeros is
    rewritten through the relation solved for its own term (the coefficient
    of which is 1), which strictly reduces the number of trailing zeros;
    labels with no trailing zeros scale down by q^{n^2} per unit shift.
    Once lam ends in 0 the normalized engine times the self-density takes
    over.  Parity and support vanishing short-circuit to 0.
    """

    def __init__(self, hironaka_engine=None, reduction_engine=None):
        self.hironaka = hironaka_engine or hironaka.HironakaEngine()
        self.reducer = reduction_engine or ReductionEngine(self.hironaka)
        self._memo = {}

    def alpha_value(self, xi, lam):
        xi = check_partition(xi)
        lam = check_partition(lam)
        n = len(xi)
        if n != len(lam):
            raise ValueError("generic reduction needs labels of equal length")
        key = (xi, lam)
        if key in self._memo:
            return self._memo[key]
        if (weight(xi) - weight(lam)) % 2 or xi[-1] > lam[-1]:
            val = ZERO
        elif lam[-1] == 0:
            val = self.reducer.normalized_value(xi, lam) * self.hironaka.alpha(xi, xi)
        elif xi[-1] == 0:
            s = trailing_zeros(xi)
            ds = d_coefficients(n, s)
            pref = neg_q_power(-n * s)
            if s % 2:
                pref = -pref
            acc = {}
            for i in range(1, s + 1):
                p = xi_plus(xi, 0, i)
                acc[p] = acc.get(p, ZERO) - ds[i]
            for i in range(s + 1):
                p = xi_plus(xi, i, s - i)
                acc[p] = acc.get(p, ZERO) + pref * ds[i]
            val = ZERO
            for p, c in acc.items():
                if not c.is_zero:
                    val = val + c * self.alpha_value(p, lam)
        else:
            t = min(xi[-1], lam[-1])
            shifted = self.alpha_value(tuple(x - t for x in xi), tuple(x - t for x in lam))
            val = RatFunc.from_laurent({t * n * n: 1}) * shifted
        self._memo[key] = val
        return val


def alpha_via_generic_reduction(xi, lam, reducer=None):
    reducer = reducer or GenericAlphaReducer()
    return reducer.alpha_value(xi, lam)

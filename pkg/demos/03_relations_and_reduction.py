"""Inter-density relations: generate, verify, and reduce with a trace.

For a label xi ending in s zeros there is a linear relation among the
densities alpha(A_., B) valid whenever pi^{-1} B is still integral.  Solved
for its leading term, the relation drives a reduction engine that evaluates
normalized densities by rewriting instead of summation; the engine emits an
auditable trace whose replay reproduces the value exactly.
"""

import time

from hermdens import Q, alpha, theorem_terms, verify_relation
from hermdens.partitions import format_partition
from hermdens.relations import GenericAlphaReducer, ReductionEngine

print("== the relation attached to xi = (1,0) ==")
rel = theorem_terms(2, 1, (1, 0))
for coeff, part in rel.terms:
    print(f"  ({coeff}) * alpha(A_{format_partition(part)}, B)")
ok, residual = verify_relation(rel, (1, 1))
print("vanishes at B = A_11:", ok)
ok, residual = verify_relation(rel, (1, 0))
print("negative control (B = A_10, not divisible by pi): residual =", residual)

print("\n== the five-term rank-2 relation ==")
for coeff, part in theorem_terms(2, 2, (0, 0)).terms:
    print(f"  ({coeff}) * alpha(A_{format_partition(part)}, B)")

print("\n== reducing A_300(A_832) with a trace ==")
engine = ReductionEngine()
t0 = time.perf_counter()
value, trace = engine.reduce_normalized((3, 0, 0), (8, 3, 2))
elapsed = (time.perf_counter() - t0) * 1000
print(f"value = {value}   ({len(trace)} steps, {elapsed:.1f} ms)")
for i, step in enumerate(trace.steps, 1):
    targets = ", ".join(f"A_{format_partition(c.xi)}(A_{format_partition(c.lam)})"
                        for c in step.children) or f"= {step.value}"
    print(f"  step {i}: {step.rule_id:8s} "
          f"A_{format_partition(step.xi_before)}(A_{format_partition(step.lam_before)})"
          f" -> {targets}")
print("replay reproduces the value:", trace.replay() == value)

print("\n== a longer chain: A_60(A_86) ==")
value, trace = ReductionEngine().reduce_normalized((6, 0), (8, 6))
print("value =", value, " equals q^5(q-1):", value == Q ** 5 * (Q - 1))

print("\n== generic reduction at the unnormalized level (any rank) ==")
red = GenericAlphaReducer()
xi, lam = (1, 1, 0, 0, 0), (2, 1, 1, 1, 1)
got = red.alpha_value(xi, lam)
print(f"alpha{xi, lam} via relations:", got)
print("matches direct evaluation:", got == alpha(xi, lam))

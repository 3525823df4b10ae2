"""Exact arithmetic in q: the value type behind every density.

Densities of hermitian forms are exact rational functions of q (the residue
field size).  This demo walks the value type: construction, arithmetic,
the combinatorial primitives built from powers of (-q), numeric
specialization, and the Laurent-form check.
"""

from fractions import Fraction

from hermdens import Q, arith, as_laurent, evaluate_at, gauss_binomial, neg_q_power
from hermdens.qalgebra import ONE

print("== powers of (-q) ==")
for e in (0, 2, -3, 5):
    print(f"(-q)^{e} = {neg_q_power(e)}")

print("\n== Gaussian binomials ==")
print("[2;1] =", gauss_binomial(2, 1), "   (equals 1 - 1/q)")
print("[5;2] =", gauss_binomial(5, 2))
print("symmetry: [5;2] == [5;3]:", gauss_binomial(5, 2) == gauss_binomial(5, 3))

print("\n== field arithmetic is exact ==")
f = Q ** 6 * (ONE + ONE / Q) ** 2
print("q^6 (1+1/q)^2 =", f)
print("divided by (q+1):", arith(f, Q + 1, "div"))

print("\n== numeric specialization ==")
print("value at q=3:", evaluate_at(f, 3))
print("value at q=7/2:", evaluate_at(f, Fraction(7, 2)))

print("\n== Laurent membership ==")
print("as_laurent(q^6 (1+1/q)^2) =", as_laurent(f))
g = ONE / (Q + 1)
try:
    as_laurent(g)
except Exception as exc:
    print("1/(q+1) is not Laurent:", exc)

print("\n== the product identity behind the inner sums ==")
l, k = 6, 3
lhs = sum((neg_q_power((2 * l + 1 - j) * j // 2)
           * gauss_binomial(l, l - j) * gauss_binomial(l - j, l - k)
           for j in range(k + 1)), start=Q - Q)
rhs = gauss_binomial(l, k)
for j in range(k):
    rhs = rhs * (ONE + neg_q_power(l - j))
print(f"l={l}, k={k}: lhs == rhs:", lhs == rhs)

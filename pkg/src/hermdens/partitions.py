"""Partition combinatorics for hermitian class labels.

A partition is a plain tuple of non-increasing, non-negative integers; its
length is significant, so (3, 0) and (3,) label different classes (the
diagonal hermitian matrices diag(pi^3, 1) and diag(pi^3)).  Text syntax is
comma-separated parts, e.g. "8,3,2"; JSON form is an array of integers.

Besides the basic statistics (weight, the n-statistic sum (i-1)*lambda_i,
conjugates and the conjugate inner product), this module builds the special
constructions used by the density relations: the zero-tail promotions
``xi_plus``, the two-one paddings ``mu_lk``, and the coefficient family
``d_coefficients`` read off the product (1-(-q)^{-n}X)...(1-(-q)^{-n+s-1}X).
"""

from __future__ import annotations

import itertools
from collections import namedtuple
from functools import lru_cache

from .qalgebra import RatFunc, neg_q_power


def check_partition(parts, allow_empty=False):
    """Validate and normalize to a tuple of non-increasing, non-negative ints."""
    t = tuple(int(x) for x in parts)
    if not t and not allow_empty:
        raise ValueError("partition must have at least one part")
    for i, x in enumerate(t):
        if x < 0:
            raise ValueError(f"negative part {x} in partition {t}")
        if i and t[i - 1] < x:
            raise ValueError(f"parts not non-increasing in {t}")
    return t


def parse_partition(text):
    """Parse comma-separated text like '8,3,2' (trailing zeros explicit)."""
    try:
        return check_partition(text.split(","))
    except ValueError as exc:
        raise ValueError(f"bad partition {text!r}: {exc}") from None


def format_partition(parts):
    return ",".join(str(x) for x in parts)


def weight(parts):
    return sum(parts)


def n_stat(parts):
    """The statistic sum_i (i-1) * parts_i, 1-based."""
    return sum(i * x for i, x in enumerate(parts))


def tilde(parts):
    """Add one to every part."""
    return tuple(x + 1 for x in parts)


Stats = namedtuple("Stats", ["weight", "n_stat", "tilde"])


def stats(parts):
    parts = check_partition(parts)
    return Stats(weight(parts), n_stat(parts), tilde(parts))


def conjugate_part(parts, i):
    """The i-th part of the conjugate: the number of parts >= i (i >= 1)."""
    if i < 1:
        raise ValueError("conjugate index must be >= 1")
    return sum(1 for x in parts if x >= i)


def conjugate(parts):
    """Full conjugate partition, with length equal to the largest part."""
    if not parts or parts[0] == 0:
        return ()
    return tuple(conjugate_part(parts, i) for i in range(1, parts[0] + 1))


def conj_inner_product(xi, mu):
    """sum_{i>=1} xi'_i * mu'_i, a finite sum up to max(xi_1, mu_1)."""
    top = min(xi[0] if xi else 0, mu[0] if mu else 0)
    return sum(conjugate_part(xi, i) * conjugate_part(mu, i) for i in range(1, top + 1))


def trailing_zeros(parts):
    k = 0
    for x in reversed(parts):
        if x:
            break
        k += 1
    return k


def xi_plus(xi, a, b):
    """Promote a of xi's trailing zeros to 2s and b of them to 1s, re-sorted.

    Requires xi to end in s >= a+b zeros preceded by a nonzero part (unless
    all parts are zero).  Re-sorting matters when the last nonzero part of
    xi is smaller than 2, e.g. (4,1,0,0) with a=2 gives (4,2,2,1).
    """
    xi = check_partition(xi)
    s = trailing_zeros(xi)
    if a < 0 or b < 0 or a + b > s:
        raise ValueError(f"need a, b >= 0 with a + b <= {s} trailing zeros, got a={a}, b={b}")
    head = xi[: len(xi) - s]
    return tuple(sorted(head + (2,) * a + (1,) * b + (0,) * (s - a - b), reverse=True))


def mu_lk(mu_bar, l, k, n):
    """Concatenate mu_bar (all parts >= 2, length n-l) with k ones and l-k zeros."""
    mu_bar = check_partition(mu_bar, allow_empty=True)
    if any(x < 2 for x in mu_bar):
        raise ValueError(f"all parts of {mu_bar} must be >= 2")
    if len(mu_bar) != n - l:
        raise ValueError(f"expected length {n - l}, got {len(mu_bar)}")
    if not 0 <= k <= l:
        raise ValueError(f"need 0 <= k <= {l}, got {k}")
    return mu_bar + (1,) * k + (0,) * (l - k)


@lru_cache(maxsize=None)
def d_coefficients(n, s):
    """Coefficients d_{n,s,0..s} of prod_{j=0..s-1} (1 - (-q)^{-n+j} X) in X.

    In particular d_{n,s,0} = 1 for every s, d_{n,1,1} = -(-q)^{-n} and
    d_{n,2,2} = (-q)^{-(2n-1)}.
    """
    if not 1 <= s <= n:
        raise ValueError(f"need 1 <= s <= n, got s={s}, n={n}")
    coeffs = [RatFunc(1)]
    for j in range(s):
        t = neg_q_power(-n + j)
        nxt = [RatFunc(0)] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            nxt[i] = nxt[i] + c
            nxt[i + 1] = nxt[i + 1] - t * c
        coeffs = nxt
    return tuple(coeffs)


# ---------------------------------------------------------------------------
# enumeration helpers
# ---------------------------------------------------------------------------

def partitions_in_box(bounds):
    """All non-increasing tuples t with 0 <= t[i] <= bounds[i], by odometer."""
    for t in itertools.product(*(range(b + 1) for b in bounds)):
        if all(t[i] >= t[i + 1] for i in range(len(t) - 1)):
            yield t


def partitions_fixed_length(n, lo, hi):
    """Partitions of length n with every part in [lo, hi]."""
    for t in itertools.combinations_with_replacement(range(hi, lo - 1, -1), n):
        yield t


def partitions_first_part(level, length, min_part):
    """Partitions of the given length whose first part equals level."""
    if length == 1:
        if level >= min_part:
            yield (level,)
        return
    for rest in itertools.combinations_with_replacement(range(level, min_part - 1, -1), length - 1):
        yield (level,) + rest


def lambda_ns_elements(n, s, max_nonzero):
    """Elements of the s-trailing-zero stratum with nonzero parts <= max_nonzero."""
    if not 1 <= s <= n:
        raise ValueError(f"need 1 <= s <= n, got s={s}, n={n}")
    if s == n:
        yield (0,) * n
        return
    for head in partitions_fixed_length(n - s, 1, max_nonzero):
        yield head + (0,) * s

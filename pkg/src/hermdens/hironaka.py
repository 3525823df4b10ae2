"""Direct evaluation of local representation densities of hermitian forms.

For class labels xi (length m) and lam (length n) with m >= n, the density
alpha(A_xi, A_lam) is evaluated by Hironaka's explicit formula: a finite sum
over partitions mu of length n with mu <= lam + (1,...,1) componentwise,

    alpha = sum_mu (-1)^|mu| (-q)^(-n(mu) + (n-m-1)|mu| + <xi', mu'>)
                    prod_{j >= 1} I_j(mu, lam),

where each inner factor I_j is a short sum of powers of (-q) times two
Gaussian binomials, and depends only on the conjugate values of mu and of
lam+1 at j and j+1.  The product over j is finite: every factor with
j > max(mu_1, lam_1 + 1) equals 1.

The engine memoizes alpha on (xi, lam) keys and the inner factors on their
four conjugate values, and works in Laurent form internally (densities lie
in ZZ[q, q^-1]); results are returned as reduced ``RatFunc`` values.

Normalized densities divide by the self-density, alpha(A,B)/alpha(A,A), and
vanish whenever |xi| and |lam| have different parities (the determinant
valuations differ mod 2).  ``self_density_closed`` provides the tabulated
closed forms of self-densities for lengths up to 4.

Concurrency: all values are immutable and computations are pure; the memo
caches may be shared across threads (concurrent calls return identical
values) or confined to one engine instance per thread.
"""

from __future__ import annotations

from .partitions import (
    check_partition,
    conjugate_part,
    n_stat,
    partitions_in_box,
    tilde,
    weight,
)
from .qalgebra import RatFunc, ZERO, gauss_laurent, lau_iadd_scaled, lau_mul


class NotTabulated(LookupError):
    """Raised by ``self_density_closed`` for shapes outside the closed-form tables."""


def product_cutoff(mu, lam):
    """Largest j for which I_j(mu, lam) can differ from 1."""
    return max(mu[0] if mu else 0, lam[0] + 1)


class HironakaEngine:
    """Memoizing evaluator for alpha(A_xi, A_lam) and its normalization."""

    def __init__(self):
        self._alpha = {}
        self._inner = {}

    # -- inner factor -------------------------------------------------------

    def _inner_items(self, l1, l2, m1, m2):
        """I_j as a Laurent dict, keyed on ((lam~)'_j, (lam~)'_{j+1}, mu'_j, mu'_{j+1})."""
        key = (l1, l2, m1, m2)
        cached = self._inner.get(key)
        if cached is not None:
            return cached
        acc = {}
        for i in range(m2, min(l2, m1) + 1):
            prod = i * (2 * l2 + 1 - i)
            assert prod % 2 == 0
            e = prod // 2
            term = lau_mul(dict(gauss_laurent(l2 - m2, l2 - i)),
                           dict(gauss_laurent(l1 - i, l1 - m1)))
            lau_iadd_scaled(acc, term, shift=e, scale=1 if e % 2 == 0 else -1)
        self._inner[key] = acc
        return acc

    def I_j(self, mu, lam, j):
        """The j-th inner factor of the density formula (j >= 1)."""
        mu = check_partition(mu)
        lam = check_partition(lam)
        if j < 1:
            raise ValueError("j must be >= 1")
        lt = tilde(lam)
        items = self._inner_items(
            conjugate_part(lt, j), conjugate_part(lt, j + 1),
            conjugate_part(mu, j), conjugate_part(mu, j + 1))
        return RatFunc.from_laurent(items)

    # -- the density itself -------------------------------------------------

    def alpha(self, xi, lam):
        """alpha(A_xi, A_lam) for len(xi) = m >= n = len(lam), exact."""
        xi = check_partition(xi)
        lam = check_partition(lam)
        key = (xi, lam)
        cached = self._alpha.get(key)
        if cached is not None:
            return cached
        m, n = len(xi), len(lam)
        if m < n:
            raise ValueError(f"need len(xi) >= len(lam), got {m} < {n}")
        lt = tilde(lam)
        # every mu in the sum satisfies mu <= lt, so the product cutoff is
        # uniformly lam_1 + 1
        jmax = lam[0] + 1
        lt_conj = [0] + [conjugate_part(lt, j) for j in range(1, jmax + 3)]
        xi_conj = [0] + [conjugate_part(xi, i) for i in range(1, jmax + 2)]
        acc = {}
        for mu in partitions_in_box(lt):
            w = weight(mu)
            mu_conj = [0] * (jmax + 2)
            for j in range(1, jmax + 2):
                mu_conj[j] = sum(1 for x in mu if x >= j)
            prod = {0: 1}
            for j in range(1, jmax + 1):
                prod = lau_mul(prod, self._inner_items(
                    lt_conj[j], lt_conj[j + 1], mu_conj[j], mu_conj[j + 1]))
                if not prod:
                    break
            if not prod:
                continue
            ip = sum(xi_conj[i] * mu_conj[i]
                     for i in range(1, (mu[0] if mu else 0) + 1))
            e = -n_stat(mu) + (n - m - 1) * w + ip
            sign = -1 if (w + e) % 2 else 1
            lau_iadd_scaled(acc, prod, shift=e, scale=sign)
        val = RatFunc.from_laurent(acc)
        self._alpha[key] = val
        return val

    def normalized(self, xi, lam):
        """alpha(A_xi, A_lam) / alpha(A_xi, A_xi); zero on weight-parity mismatch."""
        xi = check_partition(xi)
        lam = check_partition(lam)
        if len(xi) != len(lam):
            raise ValueError("normalized density needs labels of equal length")
        if (weight(xi) - weight(lam)) % 2:
            return ZERO
        return self.alpha(xi, lam) / self.alpha(xi, xi)


_DEFAULT = HironakaEngine()


def default_engine():
    return _DEFAULT


def alpha(xi, lam):
    return _DEFAULT.alpha(xi, lam)


def normalized(xi, lam):
    return _DEFAULT.normalized(xi, lam)


def I_j(mu, lam, j):
    return _DEFAULT.I_j(mu, lam, j)


# ---------------------------------------------------------------------------
# closed self-density tables
# ---------------------------------------------------------------------------
#
# Each row is (shape, E, units, placeholders_recurse):
#   shape  -- tuple of slot specs; an int matches exactly, "*" matches any
#             value >= 3 (the tables' side condition on large parts);
#   E      -- the power of q in front;
#   units  -- signed exponents k encoding the unit factors
#             (1 + q^-k) for k > 0 and (1 - q^-|k|) for k < 0;
#   if the shape has placeholders, the row refers recursively to the
#   self-density of the placeholder values each reduced by 2.
#
# Rows outside these shapes are not tabulated; callers fall back to the
# direct alpha(xi, xi) evaluation, which is the ground truth in all cases.

_SELF_TABLE = {
    1: [
        ((0,), 0, (1,)),
        ((2,), 2, (1,)),
    ],
    2: [
        ((0, 0), 0, (1, -2)),
        ((1, 0), 1, (1, 1)),
        ((1, 1), 4, (1, -2)),
        ((2, 0), 2, (1, 1)),
        ((2, 1), 5, (1, 1)),
        ((2, 2), 8, (1, -2)),
        (("*", 0), 2, (1,)),
        (("*", 2), 8, (1,)),
    ],
    3: [
        (("*", "*", 0), 8, (1,)),
        (("*", "*", 1), 13, (1,)),
        (("*", "*", 2), 18, (1,)),
        (("*", 2, 0), 8, (1, 1)),
        (("*", 2, 1), 13, (1, 1)),
        (("*", 2, 2), 18, (1, -2)),
        ((2, 2, 0), 8, (1, 1, -2)),
        ((2, 2, 1), 13, (1, 1, -2)),
        ((2, 2, 2), 18, (1, -2, 3)),
        (("*", 0, 0), 2, (1, -2)),
        (("*", 1, 0), 5, (1, 1)),
        (("*", 1, 1), 10, (1, -2)),
        ((2, 0, 0), 2, (1, 1, -2)),
        ((2, 1, 0), 5, (1, 1, 1)),
        ((2, 1, 1), 10, (1, 1, -2)),
        ((0, 0, 0), 0, (1, -2, 3)),
        ((1, 0, 0), 1, (1, 1, -2)),
        ((1, 1, 0), 4, (1, 1, -2)),
        ((1, 1, 1), 9, (1, -2, 3)),
    ],
    4: [
        (("*", "*", "*", 0), 18, (1,)),
        (("*", "*", "*", 1), 25, (1,)),
        (("*", "*", "*", 2), 32, (1,)),
        (("*", "*", 2, 0), 18, (1, 1)),
        (("*", "*", 2, 1), 25, (1, 1)),
        (("*", "*", 2, 2), 32, (1, -2)),
        (("*", 2, 2, 0), 18, (1, 1, -2)),
        (("*", 2, 2, 1), 25, (1, 1, -2)),
        (("*", 2, 2, 2), 32, (1, -2, 3)),
        ((2, 2, 2, 0), 18, (1, 1, -2, 3)),
        ((2, 2, 2, 1), 25, (1, 1, -2, 3)),
        ((2, 2, 2, 2), 32, (1, -2, 3, -4)),
        (("*", "*", 0, 0), 8, (1, -2)),
        (("*", "*", 1, 0), 13, (1, 1)),
        (("*", "*", 1, 1), 20, (1, -2)),
        (("*", 2, 0, 0), 8, (1, 1, -2)),
        (("*", 2, 1, 0), 13, (1, 1, 1)),
        (("*", 2, 1, 1), 20, (1, 1, -2)),
        ((2, 2, 0, 0), 8, (1, 1, -2, -2)),
        ((2, 2, 1, 0), 13, (1, 1, 1, -2)),
        ((2, 2, 1, 1), 20, (1, 1, -2, -2)),
        (("*", 0, 0, 0), 2, (1, -2, 3)),
        (("*", 1, 0, 0), 5, (1, 1, -2)),
        (("*", 1, 1, 0), 10, (1, 1, -2)),
        (("*", 1, 1, 1), 17, (1, -2, 3)),
        ((2, 0, 0, 0), 2, (1, 1, -2, 3)),
        ((2, 1, 0, 0), 5, (1, 1, 1, -2)),
        ((2, 1, 1, 0), 10, (1, 1, 1, -2)),
        ((2, 1, 1, 1), 17, (1, 1, -2, 3)),
        ((0, 0, 0, 0), 0, (1, -2, 3, -4)),
        ((1, 0, 0, 0), 1, (1, 1, -2, 3)),
        ((1, 1, 0, 0), 4, (1, 1, -2, -2)),
        ((1, 1, 1, 0), 9, (1, 1, -2, 3)),
        ((1, 1, 1, 1), 16, (1, -2, 3, -4)),
    ],
}


def _unit_factor(k):
    # (1 + q^-k) for k > 0, (1 - q^-|k|) for k < 0
    return RatFunc.from_laurent({0: 1, -abs(k): 1 if k > 0 else -1})


def _match_shape(shape, xi):
    holders = []
    for spec, x in zip(shape, xi):
        if spec == "*":
            if x < 3:
                return None
            holders.append(x)
        elif spec != x:
            return None
    return holders


def self_density_table_rows(n):
    """The tabulated rows for labels of length n (empty if none)."""
    return tuple(_SELF_TABLE.get(n, ()))


def self_density_closed(xi, engine=None):
    """Closed form of alpha(A_xi, A_xi) from the tables, built recursively.

    Rows that refer to smaller self-densities resolve them from the tables
    when possible and by direct evaluation otherwise.  Raises
    ``NotTabulated`` for shapes outside the tables.
    """
    xi = check_partition(xi)
    engine = engine or _DEFAULT
    for shape, e, units in _SELF_TABLE.get(len(xi), ()):
        holders = _match_shape(shape, xi)
        if holders is None:
            continue
        val = Q_POW(e)
        for k in units:
            val = val * _unit_factor(k)
        if holders:
            inner = tuple(v - 2 for v in holders)
            try:
                val = val * self_density_closed(inner, engine)
            except NotTabulated:
                val = val * engine.alpha(inner, inner)
        return val
    raise NotTabulated(f"no closed self-density for {xi}")


def Q_POW(e):
    return RatFunc.from_laurent({e: 1})

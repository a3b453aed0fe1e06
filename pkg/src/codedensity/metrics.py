"""The three translation-invariant metrics and their exact ball volumes.

An :class:`AmbientSpace` fixes (q, ell, s, n) with m = ell*s and one of the
metrics Hamming, rank, or sum-rank with t equal blocks (t | n, block length
eta = n/t).  Weights act on codewords over F_{q^m} encoded as int tuples;
rank weights expand coordinates to base-q digit columns, so they require a
prime q (the formula-only operations accept any prime power).

``ball_volume`` is the closed-form exact count; ``ball_volume_oracle``
recounts by full enumeration and exists purely to check the former.
``volume_growth`` returns the leading coefficient and exponent of the ball
volume as one parameter grows, as exact rationals; the classifier compares
these symbolically, never through floats.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .combinat import binom, compositions, is_prime, prime_power, qbinom
from .fields import Codeword, FieldTower, SubspaceBasis
from .guards import Guards, GuardExceeded, UnsupportedAsymptotics

HAMMING = "hamming"
RANK = "rank"
SUMRANK = "sumrank"
METRICS = (HAMMING, RANK, SUMRANK)


@dataclass(frozen=True)
class AmbientSpace:
    """F_{q^m}^n with one of the three metrics; m = ell * s, eta = n / t."""

    q: int
    ell: int
    s: int
    n: int
    metric: str
    t: int = 1

    def __post_init__(self) -> None:
        if self.metric not in METRICS:
            raise ValueError(f"unknown metric {self.metric!r}; expected one of {METRICS}")
        if prime_power(self.q) is None:
            raise ValueError(f"q must be a prime power >= 2, got {self.q}")
        if self.ell < 1 or self.s < 1 or self.n < 1:
            raise ValueError("ell, s, n must be positive")
        if self.metric == SUMRANK:
            if self.t < 1 or self.n % self.t:
                raise ValueError(f"t={self.t} must divide n={self.n}")
        elif self.t != 1:
            raise ValueError(f"t is only meaningful for the sum-rank metric")

    @property
    def m(self) -> int:
        return self.ell * self.s

    @property
    def eta(self) -> int:
        if self.metric != SUMRANK:
            raise ValueError("eta is only defined for the sum-rank metric")
        return self.n // self.t

    @property
    def size(self) -> int:
        return self.q ** (self.m * self.n)

    @property
    def diameter(self) -> int:
        if self.metric == HAMMING:
            return self.n
        if self.metric == RANK:
            return min(self.n, self.m)
        return self.t * min(self.m, self.eta)

    def requires_prime_q(self) -> None:
        if not is_prime(self.q):
            raise ValueError(
                f"codeword-level operations need a prime q (towers over F_q); got q={self.q}"
            )


# ---------------------------------------------------------------------------
# weights and distances
# ---------------------------------------------------------------------------


def _digit_cols(x: Codeword, q: int, m: int) -> list[tuple[int, ...]]:
    cols = []
    for c in x:
        col = []
        for _ in range(m):
            c, r = divmod(c, q)
            col.append(r)
        cols.append(tuple(col))
    return cols


def _fp_rank(cols: list[tuple[int, ...]], p: int) -> int:
    """Rank over F_p of the matrix with the given columns."""
    if p == 2:
        basis: list[int] = []
        for col in cols:
            v = 0
            for i, d in enumerate(col):
                v |= d << i
            for b in basis:
                v = min(v, v ^ b)
            if v:
                basis.append(v)
        return len(basis)
    rows = [list(col) for col in cols]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] % p), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = pow(rows[r][c], p - 2, p)
        rows[r] = [v * inv % p for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] % p:
                f = rows[i][c]
                rows[i] = [(vi - f * vr) % p for vi, vr in zip(rows[i], rows[r])]
        r += 1
        rank += 1
        if r == len(rows):
            break
    return rank


def weight(space: AmbientSpace, x: Codeword) -> int:
    """Metric weight of x: nonzero count (Hamming), F_q-span dimension of the
    coordinates (rank), or the sum of per-block rank weights (sum-rank)."""
    if len(x) != space.n:
        raise ValueError(f"codeword length {len(x)} != n={space.n}")
    if space.metric == HAMMING:
        return sum(1 for c in x if c)
    space.requires_prime_q()
    cols = _digit_cols(x, space.q, space.m)
    if space.metric == RANK:
        return _fp_rank(cols, space.q)
    eta = space.eta
    return sum(
        _fp_rank(cols[b * eta : (b + 1) * eta], space.q) for b in range(space.t)
    )


def subtract(space: AmbientSpace, x: Codeword, y: Codeword) -> Codeword:
    """Coordinatewise difference in F_{q^m}^n (prime q; digitwise base q)."""
    q, m = space.q, space.m
    if q == 2:
        return tuple(a ^ b for a, b in zip(x, y))
    out = []
    for a, b in zip(x, y):
        acc, mult = 0, 1
        for _ in range(m):
            a, da = divmod(a, q)
            b, db = divmod(b, q)
            acc += ((da - db) % q) * mult
            mult *= q
        out.append(acc)
    return tuple(out)


def distance(space: AmbientSpace, x: Codeword, y: Codeword) -> int:
    if space.metric != HAMMING:
        space.requires_prime_q()
    if space.metric == HAMMING:
        return sum(1 for a, b in zip(x, y) if a != b)
    return weight(space, subtract(space, x, y))


def min_distance(
    code, space: AmbientSpace, *, tower: FieldTower | None = None
) -> int:
    """Minimum distance of a code.

    Nonlinear codes (any iterable of codewords) use all pairs.  A
    :class:`SubspaceBasis` uses the minimum weight over one representative
    per projective class of the row space: the weight is invariant under
    nonzero scalars from the middle field in all three metrics, because
    scalar multiplication is an F_q-linear bijection on each coordinate.
    """
    if isinstance(code, SubspaceBasis):
        if tower is None:
            raise ValueError("a tower is required to evaluate subspace codewords")
        if code.dim < 1:
            raise ValueError("minimum distance needs a nonzero code")
        return min(
            weight(space, tower.unflatten(vec, space.n))
            for vec in projective_span(code, tower)
        )
    words = list(code)
    if len(words) < 2:
        raise ValueError("minimum distance needs at least two codewords")
    best = None
    for x, y in itertools.combinations(words, 2):
        d = distance(space, x, y)
        if best is None or d < best:
            best = d
            if best == 0:
                break
    return best


def projective_span(basis: SubspaceBasis, tower: FieldTower):
    """One coefficient combination per projective class (first nonzero
    coefficient normalized to one), yielding flattened vectors."""
    k = basis.dim
    q = tower.subfield_order
    ns = len(basis.rows[0])
    rows = [list(r) for r in basis.rows]
    for lead in range(k):
        tail = k - lead - 1
        for combo in itertools.product(range(q), repeat=tail):
            vec = list(rows[lead])
            for offset, coeff in enumerate(combo):
                if coeff == 0:
                    continue
                row = rows[lead + 1 + offset]
                vec = [tower.k_add(v, tower.k_mul(coeff, r)) for v, r in zip(vec, row)]
            yield tuple(vec)


# ---------------------------------------------------------------------------
# ball volumes
# ---------------------------------------------------------------------------


def ball_volume(space: AmbientSpace, r: int) -> int:
    """Exact number of vectors at distance <= r from the origin.  Radii past
    the metric diameter clamp to the full space (callers pass d-1 where d may
    be diameter+1)."""
    if r < 0:
        raise ValueError(f"radius must be nonnegative, got {r}")
    r = min(r, space.diameter)
    q, m, n = space.q, space.m, space.n
    if space.metric == HAMMING:
        return sum(binom(n, i) * (q**m - 1) ** i for i in range(r + 1))
    if space.metric == RANK:
        return sum(
            qbinom(n, i, q) * _surjection_count(q, m, i) for i in range(r + 1)
        )
    eta, t = space.eta, space.t
    cap = min(m, eta)
    total = 0
    for h in range(r + 1):
        for u in compositions(h, t, cap):
            term = 1
            for ui in u:
                term *= qbinom(eta, ui, q) * _surjection_count(q, m, ui)
            total += term
    return total


def _surjection_count(q: int, m: int, i: int) -> int:
    out = 1
    for j in range(i):
        out *= q**m - q**j
    return out


@lru_cache(maxsize=None)
def _weight_distribution(space: AmbientSpace, guard_limit: int) -> tuple[int, ...]:
    if space.size > guard_limit:
        raise GuardExceeded("volume oracle space size", space.size, guard_limit)
    if space.metric != HAMMING:
        space.requires_prime_q()
    counts = [0] * (space.diameter + 1)
    qm = space.q**space.m
    for x in itertools.product(range(qm), repeat=space.n):
        counts[weight(space, x)] += 1
    return tuple(counts)


def ball_volume_oracle(space: AmbientSpace, r: int, guards: Guards | None = None) -> int:
    """Ball volume recounted by walking every vector of the space."""
    guards = guards or Guards()
    if r < 0:
        raise ValueError(f"radius must be nonnegative, got {r}")
    counts = _weight_distribution(space, guards.oracle_space)
    return sum(counts[: min(r, space.diameter) + 1])


# ---------------------------------------------------------------------------
# growth profiles
# ---------------------------------------------------------------------------

GROWING = ("q", "n", "ell", "s")


@dataclass(frozen=True)
class GrowthProfile:
    """Leading behavior of a quantity as one parameter X tends to infinity:

        value ~ coefficient * X^poly_degree * q^(exp_slope * X + exp_intercept)

    For ``var == "q"`` the base itself grows; the exponent is the constant
    ``exp_intercept`` (slope and polynomial degree stay zero).
    """

    coefficient: Fraction
    var: str
    exp_slope: Fraction
    exp_intercept: Fraction
    poly_degree: int = 0

    def __post_init__(self) -> None:
        if self.coefficient <= 0:
            raise ValueError("leading coefficient must be positive")
        if self.var not in GROWING:
            raise ValueError(f"unknown growing parameter {self.var!r}")


def volume_growth(space: AmbientSpace, r: int, growing: str) -> GrowthProfile:
    """Leading coefficient and exponent of the radius-r ball volume as the
    named parameter grows, with everything else held fixed.

    Supported pairs: Hamming and rank for every parameter, sum-rank for
    growing q only.  Unsupported pairs raise
    :class:`~codedensity.guards.UnsupportedAsymptotics`.
    """
    if growing not in GROWING:
        raise ValueError(f"unknown growing parameter {growing!r}")
    if r < 0:
        raise ValueError("radius must be nonnegative")
    q, m, n, ell, s = space.q, space.m, space.n, space.ell, space.s
    if r == 0:
        return GrowthProfile(Fraction(1), growing, Fraction(0), Fraction(0))
    if space.metric == HAMMING:
        if growing == "n":
            coeff = Fraction((q**m - 1) ** r, math.factorial(r))
            return GrowthProfile(coeff, "n", Fraction(0), Fraction(0), poly_degree=r)
        if r > n:
            raise ValueError(f"radius {r} exceeds the Hamming diameter {n}")
        if growing == "q":
            return GrowthProfile(Fraction(binom(n, r)), "q", Fraction(0), Fraction(r * m))
        if growing == "ell":
            return GrowthProfile(Fraction(binom(n, r)), "ell", Fraction(r * s), Fraction(0))
        return GrowthProfile(Fraction(binom(n, r)), "s", Fraction(r * ell), Fraction(0))
    if space.metric == RANK:
        if growing == "q":
            if r > min(n, m):
                raise ValueError(f"radius {r} exceeds the rank diameter {min(n, m)}")
            return GrowthProfile(Fraction(1), "q", Fraction(0), Fraction(r * (m + n - r)))
        if growing == "n":
            if r > m:
                raise ValueError(f"radius {r} exceeds the eventual rank diameter {m}")
            return GrowthProfile(Fraction(qbinom(m, r, q)), "n", Fraction(r), Fraction(0))
        if r > n:
            raise ValueError(f"radius {r} exceeds the eventual rank diameter {n}")
        if growing == "ell":
            return GrowthProfile(Fraction(qbinom(n, r, q)), "ell", Fraction(r * s), Fraction(0))
        return GrowthProfile(Fraction(qbinom(n, r, q)), "s", Fraction(r * ell), Fraction(0))
    if growing != "q":
        raise UnsupportedAsymptotics(
            "sum-rank ball growth is only available for growing q; "
            "supported pairs: hamming/rank x {q, n, ell, s}, sumrank x {q}"
        )
    eta, t = space.eta, space.t
    if r > t * min(m, eta):
        raise ValueError(f"radius {r} exceeds the sum-rank diameter {t * min(m, eta)}")
    z = r % t
    expo = Fraction(z * z, t) - z + r * (m + eta) - Fraction(r * r, t)
    return GrowthProfile(Fraction(binom(t, z)), "q", Fraction(0), expo)

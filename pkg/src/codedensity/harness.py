"""Empirical verification: exhaustive densities on tiny spaces, seeded Monte
Carlo estimation, and the bracket/volume/reduction verification suites.

Monte Carlo draws are keyed per trial: trial i uses a Philox stream with key
(seed, i), so results cannot depend on how trials are partitioned across
workers and a report is reproducible from (seed, trials, scenario) alone.
Confidence intervals are exact Clopper-Pearson bounds obtained by bisecting a
dyadic rational grid of width 2^-21 (< 10^-6) with exact integer binomial
tail comparisons, rounded outward so coverage is never understated.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from numpy.random import Generator, Philox

from .bounds import (
    CodeFamilySpec,
    nonlinear_bracket,
    sublinear_bracket,
)
from .classifier import Scenario, instantiate, ratio_probe
from .combinat import binom, qbinom
from .fields import (
    FieldTower,
    build_tower,
    codeword_from_int,
    enumerate_subspaces,
    sample_code_subset,
    sample_subspace,
)
from .guards import Guards, GuardExceeded
from .metrics import (
    AmbientSpace,
    HAMMING,
    RANK,
    SUMRANK,
    ball_volume,
    ball_volume_oracle,
    subtract,
    weight,
)

DEFAULT_SEED = 1729
_CP_BITS = 21  # dyadic grid of width 2^-21 < 10^-6
_MASK64 = (1 << 64) - 1


def trial_generator(seed: int, trial: int) -> Generator:
    """Counter-based stream for one trial; splittable by construction."""
    return Generator(Philox(key=[seed & _MASK64, trial & _MASK64]))


def _rat(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# exhaustive densities
# ---------------------------------------------------------------------------


def space_tower(space: AmbientSpace, ell: int, guards: Guards | None = None) -> FieldTower:
    space.requires_prime_q()
    if space.m % ell:
        raise ValueError(f"linearity {ell} must divide m={space.m}")
    return build_tower(space.q, ell, space.m // ell, guards or Guards())


def _flat_weight_table(space: AmbientSpace, tower: FieldTower):
    """Weight of every vector of F_{q^ell}^(n*s) keyed by a packed encoding.
    For q = 2 the packing is bitwise, so vector addition is XOR of keys."""
    ns = space.n * tower.s
    q_mid = tower.subfield_order
    if space.q == 2:
        bits = tower.ell
        pack = _pack_pow2(bits)
        table = [0] * (q_mid**ns)
        for vec in itertools.product(range(q_mid), repeat=ns):
            table[pack(vec)] = weight(space, tower.unflatten(vec, space.n))
        return table, pack
    table = {
        vec: weight(space, tower.unflatten(vec, space.n))
        for vec in itertools.product(range(q_mid), repeat=ns)
    }
    return table, None


def _pack_pow2(bits: int):
    def pack(vec: tuple[int, ...]) -> int:
        enc = 0
        for i, v in enumerate(vec):
            enc |= v << (i * bits)
        return enc

    return pack


def _subspace_min_weight(basis, tower: FieldTower, table, pack) -> int:
    """Minimum metric weight over one representative per projective class."""
    k = basis.dim
    q_mid = tower.subfield_order
    best = None
    if pack is not None:
        rows_enc = [pack(row) for row in basis.rows]
        mults = [
            [pack(tuple(tower.k_mul(c, v) for v in row)) for c in range(q_mid)]
            for row in basis.rows
        ]
        for lead in range(k):
            tail = mults[lead + 1 :]
            for combo in itertools.product(range(q_mid), repeat=k - 1 - lead):
                enc = rows_enc[lead]
                for mult, c in zip(tail, combo):
                    if c:
                        enc ^= mult[c]
                w = table[enc]
                if best is None or w < best:
                    best = w
                    if best <= 1:
                        return best
        return best
    for lead in range(k):
        tail_rows = basis.rows[lead + 1 :]
        for combo in itertools.product(range(q_mid), repeat=k - 1 - lead):
            vec = list(basis.rows[lead])
            for row, c in zip(tail_rows, combo):
                if c:
                    vec = [tower.k_add(v, tower.k_mul(c, r)) for v, r in zip(vec, row)]
            w = table[tuple(vec)]
            if best is None or w < best:
                best = w
                if best <= 1:
                    return best
    return best


@lru_cache(maxsize=64)
def linear_distance_histogram(
    space: AmbientSpace, ell: int, k: int, guards: Guards = Guards()
) -> tuple[tuple[int, int], ...]:
    """(min_distance, count) pairs over all dimension-k middle-field-linear
    codes in the space; one enumeration serves every distance target."""
    tower = space_tower(space, ell, guards)
    ns = space.n * tower.s
    total = qbinom(ns, k, tower.subfield_order)
    if total > guards.enumeration:
        raise GuardExceeded("linear code enumeration", total, guards.enumeration)
    table, pack = _flat_weight_table(space, tower)
    hist: Counter[int] = Counter()
    for basis in enumerate_subspaces(k, tower, space.n, guards):
        hist[_subspace_min_weight(basis, tower, table, pack)] += 1
    return tuple(sorted(hist.items()))


@lru_cache(maxsize=64)
def subset_distance_histogram(
    space: AmbientSpace, size: int, guards: Guards = Guards()
) -> tuple[tuple[int, int], ...]:
    """(min_distance, count) pairs over all size-S subsets of the space."""
    space.requires_prime_q()
    total_space = space.size
    total = binom(total_space, size)
    if total > guards.enumeration:
        raise GuardExceeded("subset code enumeration", total, guards.enumeration)
    tower = build_tower(space.q, 1, space.m, guards)
    words = [codeword_from_int(v, tower, space.n) for v in range(total_space)]
    weights = {w: weight(space, w) for w in words}
    hist: Counter[int] = Counter()
    for combo in itertools.combinations(range(total_space), size):
        best = None
        for a, b in itertools.combinations(combo, 2):
            dist = weights[subtract(space, words[a], words[b])]
            if best is None or dist < best:
                best = dist
                if best <= 1:
                    break
        hist[best] += 1
    return tuple(sorted(hist.items()))


def exact_density(
    space: AmbientSpace, spec: CodeFamilySpec, guards: Guards | None = None
) -> Fraction:
    """Exact fraction of codes in the family with minimum distance >= d."""
    guards = guards or Guards()
    spec.validate_for(space)
    if spec.linearity == 0:
        hist = subset_distance_histogram(space, spec.size, guards)
    else:
        hist = linear_distance_histogram(space, spec.linearity, spec.dim, guards)
    total = sum(c for _, c in hist)
    good = sum(c for dist, c in hist if dist >= spec.d)
    return Fraction(good, total)


# ---------------------------------------------------------------------------
# exact Clopper-Pearson intervals
# ---------------------------------------------------------------------------


def _cmp(a: int, b: int) -> int:
    return (a > b) - (a < b)


def _ge_tail_cmp(n: int, x: int, num: int, den: int, t_num: int, t_den: int) -> int:
    """Exact sign of P(X >= x | p = num/den) - t_num/t_den, X ~ Bin(n, p)."""
    if x <= 0 or num >= den:
        return _cmp(t_den, t_num)  # tail probability is 1
    if x > n or num <= 0:
        return _cmp(0, t_num)  # tail probability is 0
    a, b = num, den - num
    total_den = den**n
    threshold = t_num * total_den
    if n - x <= x:
        term = math.comb(n, x) * a**x * b ** (n - x)
        s = term
        for j in range(x, n):
            if s * t_den > threshold:
                return 1
            num_r = (n - j) * a
            den_r = (j + 1) * b
            if num_r < den_r:
                # terms now decay geometrically with ratio num_r/den_r, so the
                # remaining mass is below term * num_r / (den_r - num_r)
                gap = den_r - num_r
                if (s * gap + term * num_r) * t_den < threshold * gap:
                    return -1
            term = term * num_r // den_r
            s += term
        return _cmp(s * t_den, threshold)
    term = b**n
    s = term
    for j in range(0, x - 1):
        term = term * (n - j) * a // ((j + 1) * b)
        s += term
    return _cmp((total_den - s) * t_den, threshold)


def clopper_pearson(successes: int, trials: int, level: Fraction) -> tuple[Fraction, Fraction]:
    """Exact two-sided Clopper-Pearson interval, endpoints rounded outward
    onto the dyadic grid of width 2^-21."""
    if trials < 1 or not 0 <= successes <= trials:
        raise ValueError("need trials >= 1 and 0 <= successes <= trials")
    level = Fraction(level)
    if not 0 < level < 1:
        raise ValueError("confidence level must lie strictly between 0 and 1")
    half = (1 - level) / 2
    den = 1 << _CP_BITS
    if successes == 0:
        lower = Fraction(0)
    else:
        # P(X >= successes | p) is increasing in p; keep the largest grid
        # point where it still does not exceed alpha/2
        lo, hi = 0, den
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if _ge_tail_cmp(trials, successes, mid, den, half.numerator, half.denominator) <= 0:
                lo = mid
            else:
                hi = mid
        lower = Fraction(lo, den)
    if successes == trials:
        upper = Fraction(1)
    else:
        # P(X <= successes | p) <= alpha/2  <=>  P(X >= successes+1 | p) >= 1 - alpha/2
        comp = 1 - half
        lo, hi = 0, den
        while hi - lo > 1:
            mid = (lo + hi) // 2
            ok = (
                _ge_tail_cmp(trials, successes + 1, mid, den, comp.numerator, comp.denominator)
                >= 0
            )
            if ok:
                hi = mid
            else:
                lo = mid
        upper = Fraction(hi, den)
    return lower, upper


# ---------------------------------------------------------------------------
# Monte Carlo estimation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SampleReport:
    """A seeded Monte Carlo density estimate.

    ``worker_streams`` records the requested partition; it cannot influence
    the draws (streams are keyed per trial), so the canonical payload used
    for reproducibility comparisons carries the statistical fields and seed.
    """

    trials: int
    successes: int
    point_estimate: Fraction
    ci_lower: Fraction
    ci_upper: Fraction
    confidence_level: Fraction
    seed: int
    worker_streams: int

    def __post_init__(self) -> None:
        if not self.ci_lower <= self.point_estimate <= self.ci_upper:
            raise ValueError("point estimate escaped its confidence interval")

    def payload(self) -> dict:
        return {
            "ci_lower": _rat(self.ci_lower),
            "ci_upper": _rat(self.ci_upper),
            "confidence_level": _rat(self.confidence_level),
            "point_estimate": _rat(self.point_estimate),
            "seed": self.seed,
            "successes": self.successes,
            "trials": self.trials,
        }


def estimate_density(
    space: AmbientSpace,
    spec: CodeFamilySpec,
    trials: int,
    seed: int = DEFAULT_SEED,
    level: Fraction = Fraction(99, 100),
    worker_streams: int = 1,
    guards: Guards | None = None,
) -> SampleReport:
    """Monte Carlo estimate of the family density from i.i.d. uniform codes.

    Trial i belongs logically to stream i mod worker_streams, but its draws
    are keyed by (seed, i) alone, so the worker count never changes the
    successes.
    """
    guards = guards or Guards()
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if worker_streams < 1:
        raise ValueError("worker_streams must be >= 1")
    spec.validate_for(space)
    d = spec.d
    if spec.linearity == 0:
        tower = build_tower(space.q, 1, space.m, guards)
        words_cache: dict[int, tuple[int, ...]] = {}
        weights_cache: dict[tuple[int, ...], int] = {}

        def run_trial(i: int) -> bool:
            gen = trial_generator(seed, i)
            words = sample_code_subset(gen, spec.size, tower, space.n, guards)
            best = None
            for a, b in itertools.combinations(words, 2):
                diff = subtract(space, a, b)
                w = weights_cache.get(diff)
                if w is None:
                    w = weight(space, diff)
                    weights_cache[diff] = w
                if best is None or w < best:
                    best = w
                    if best < d:
                        break
            return best >= d

    else:
        tower = space_tower(space, spec.linearity, guards)
        table, pack = _flat_weight_table(space, tower)

        def run_trial(i: int) -> bool:
            gen = trial_generator(seed, i)
            basis = sample_subspace(gen, spec.dim, tower, space.n)
            return _subspace_min_weight(basis, tower, table, pack) >= d

    successes = sum(1 for i in range(trials) if run_trial(i))
    lower, upper = clopper_pearson(successes, trials, level)
    return SampleReport(
        trials=trials,
        successes=successes,
        point_estimate=Fraction(successes, trials),
        ci_lower=lower,
        ci_upper=upper,
        confidence_level=Fraction(level),
        seed=seed,
        worker_streams=worker_streams,
    )


# ---------------------------------------------------------------------------
# verification verdicts
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    """Outcome of one verification check; details make it re-derivable."""

    subject: str
    passed: bool
    details: dict


def verify_bracket(
    space: AmbientSpace, spec: CodeFamilySpec, guards: Guards | None = None
) -> Verdict:
    """Exact check that the exhaustive density lies inside the bracket."""
    guards = guards or Guards()
    density = exact_density(space, spec, guards)
    if spec.linearity == 0:
        bracket, _ = nonlinear_bracket(space, spec.size, spec.d)
    else:
        bracket, _ = sublinear_bracket(space, spec.dim, spec.linearity, spec.d)
    return Verdict(
        subject="bracket",
        passed=bracket.contains(density),
        details={
            "space": _space_label(space),
            "family": _family_label(spec),
            "density": _rat(density),
            "lower": _rat(bracket.lower),
            "upper": _rat(bracket.upper),
        },
    )


def _space_label(space: AmbientSpace) -> str:
    t = f",t={space.t}" if space.metric == SUMRANK else ""
    return f"{space.metric}(q={space.q},ell={space.ell},s={space.s},n={space.n}{t})"


def _family_label(spec: CodeFamilySpec) -> str:
    if spec.linearity == 0:
        return f"nonlinear(S={spec.size},d={spec.d})"
    return f"linear(ell={spec.linearity},k={spec.dim},d={spec.d})"


def volume_verification(spaces: list[AmbientSpace], guards: Guards | None = None) -> list[Verdict]:
    """ball_volume against the brute-force oracle, all radii."""
    guards = guards or Guards()
    out = []
    for space in spaces:
        for r in range(space.diameter + 1):
            closed = ball_volume(space, r)
            counted = ball_volume_oracle(space, r, guards)
            out.append(
                Verdict(
                    subject="volume",
                    passed=closed == counted,
                    details={
                        "space": _space_label(space),
                        "radius": r,
                        "closed_form": closed,
                        "enumerated": counted,
                    },
                )
            )
    return out


def reduction_verification(
    q: int, ell: int, s: int, n: int, guards: Guards | None = None
) -> list[Verdict]:
    """Sum-rank with t=1 must match rank, and with eta=1 must match Hamming:
    exact ball volumes at every radius and pointwise weights."""
    guards = guards or Guards()
    out = []
    rank_space = AmbientSpace(q, ell, s, n, RANK)
    one_block = AmbientSpace(q, ell, s, n, SUMRANK, t=1)
    ham_space = AmbientSpace(q, ell, s, n, HAMMING)
    unit_blocks = AmbientSpace(q, ell, s, n, SUMRANK, t=n)
    for a, b, name in ((one_block, rank_space, "t=1 vs rank"), (unit_blocks, ham_space, "eta=1 vs hamming")):
        for r in range(max(a.diameter, b.diameter) + 1):
            va, vb = ball_volume(a, r), ball_volume(b, r)
            out.append(
                Verdict(
                    "reduction",
                    va == vb,
                    {"pair": name, "space": _space_label(a), "radius": r, "volumes": (va, vb)},
                )
            )
        if a.size <= guards.oracle_space:
            tower = build_tower(q, 1, a.m, guards)
            mismatch = 0
            for v in range(a.size):
                word = codeword_from_int(v, tower, n)
                if weight(a, word) != weight(b, word):
                    mismatch += 1
            out.append(
                Verdict(
                    "reduction",
                    mismatch == 0,
                    {"pair": name, "space": _space_label(a), "weight_mismatches": mismatch},
                )
            )
    return out


def _criterion_volume_spaces(limit: int) -> list[AmbientSpace]:
    spaces = []
    for q in (2, 3):
        for m in range(1, 5):
            for n in range(1, 5):
                if q ** (m * n) > limit:
                    continue
                spaces.append(AmbientSpace(q, 1, m, n, HAMMING))
                spaces.append(AmbientSpace(q, 1, m, n, RANK))
                for t in (1, 2, 4):
                    if n % t == 0:
                        spaces.append(AmbientSpace(q, 1, m, n, SUMRANK, t=t))
    return spaces


def _linear_bracket_cases(guards: Guards):
    for ell, s in ((1, 1), (1, 2), (2, 1), (2, 2)):
        m = ell * s
        for n in (1, 2, 3):
            metrics = [AmbientSpace(2, ell, s, n, HAMMING), AmbientSpace(2, ell, s, n, RANK)]
            for t in range(2, n + 1):
                if n % t == 0:
                    metrics.append(AmbientSpace(2, ell, s, n, SUMRANK, t=t))
            ns = n * s
            for space in metrics:
                for k in range(1, ns + 1):
                    if qbinom(ns, k, 2**ell) > 10**5:
                        continue
                    for d in range(1, space.diameter + 2):
                        yield space, CodeFamilySpec(linearity=ell, d=d, dim=k)


def _nonlinear_bracket_cases():
    for q in (2, 3):
        for n in (2, 3):
            metrics = [AmbientSpace(q, 1, 1, n, HAMMING), AmbientSpace(q, 1, 1, n, RANK)]
            for t in range(2, n + 1):
                if n % t == 0:
                    metrics.append(AmbientSpace(q, 1, 1, n, SUMRANK, t=t))
            for space in metrics:
                for size in (2, 3, 4):
                    for d in range(1, space.diameter + 2):
                        yield space, CodeFamilySpec(linearity=0, d=d, size=size)


def bracket_verification(grid: str, guards: Guards | None = None) -> list[Verdict]:
    guards = guards or Guards()
    out = []
    if grid == "micro":
        cases = [
            (AmbientSpace(2, 1, 1, 2, HAMMING), CodeFamilySpec(0, 2, size=2)),
            (AmbientSpace(2, 1, 1, 3, HAMMING), CodeFamilySpec(0, 2, size=3)),
            (AmbientSpace(2, 1, 2, 2, HAMMING), CodeFamilySpec(1, 2, dim=1)),
            (AmbientSpace(2, 1, 2, 2, RANK), CodeFamilySpec(1, 2, dim=2)),
            (AmbientSpace(2, 1, 2, 2, SUMRANK, t=2), CodeFamilySpec(1, 2, dim=1)),
            (AmbientSpace(3, 1, 1, 2, HAMMING), CodeFamilySpec(0, 2, size=3)),
        ]
    else:
        cases = itertools.chain(_nonlinear_bracket_cases(), _linear_bracket_cases(guards))
    for space, spec in cases:
        out.append(verify_bracket(space, spec, guards))
    return out


def run_verification(grid: str, guards: Guards | None = None) -> list[Verdict]:
    """The bracket/reduction/volume suites at desk or micro scale."""
    guards = guards or Guards()
    if grid not in ("micro", "desk"):
        raise ValueError(f"unknown grid {grid!r}; expected micro or desk")
    verdicts: list[Verdict] = []
    if grid == "micro":
        spaces = [
            AmbientSpace(2, 1, 2, 2, HAMMING),
            AmbientSpace(2, 1, 2, 2, RANK),
            AmbientSpace(2, 1, 2, 4, SUMRANK, t=2),
            AmbientSpace(3, 1, 2, 2, RANK),
        ]
        verdicts += volume_verification(spaces, guards)
        verdicts += reduction_verification(2, 1, 2, 2, guards)
        verdicts += bracket_verification("micro", guards)
    else:
        verdicts += volume_verification(_criterion_volume_spaces(guards.oracle_space), guards)
        for q, m, n in ((2, 1, 2), (2, 2, 2), (2, 1, 4), (2, 3, 1), (3, 1, 2), (3, 2, 1)):
            if q ** (m * n) <= 2**12:
                verdicts += reduction_verification(q, 1, m, n, guards)
        verdicts += bracket_verification("desk", guards)
    return verdicts


# ---------------------------------------------------------------------------
# convergence experiments
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConvergenceRow:
    probe: int
    rho: Fraction
    lower: Fraction
    upper: Fraction


def convergence_experiment(
    sc: Scenario, probes: list[int], guards: Guards | None = None
) -> list[ConvergenceRow]:
    """Exact comparison ratio and finite density bracket at each probe value
    of the growing parameter; rows are ready for delimited export."""
    rows = []
    rhos = dict(ratio_probe(sc, probes))
    for value in probes:
        inst = instantiate(sc, value)
        space: AmbientSpace = inst["space"]
        if sc.nonlinear:
            size = inst["size"]
            if isinstance(size, Fraction):
                if size.denominator != 1:
                    raise ValueError("bracket evaluation needs an integer cardinality")
                size = int(size)
            bracket, _ = nonlinear_bracket(space, size, sc.d)
        else:
            bracket, _ = sublinear_bracket(space, inst["k"], inst["ell"], sc.d)
        rows.append(ConvergenceRow(value, rhos[value], bracket.lower, bracket.upper))
    return rows

"""Exponential polynomials and finite interval unions.

The two workhorse types of the whole lab: ExpPolynomial is a finite sum
c_1 e^{a_1 x} + ... + c_m e^{a_m x} with complex coefficients and complex
frequencies (a purely imaginary frequency 2*pi*i*f gives the trigonometric
case), and IntervalUnion is a sorted disjoint union of closed real intervals
with exact endpoint arithmetic.  On top of them sit certified supremum
bracketing, sublevel-set extraction with bisected boundaries, interval set
algebra, a lower-density window scan, and support-cover checks.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

TWO_PI = 2.0 * math.pi

# exp() of a double overflows just above e^709; the guard trips a little early
# so that intermediate products stay finite.
EXP_GUARD = 700.0

BISECT_TOL = 1e-10


class ExpOverflowError(OverflowError):
    """An exponent |Re(a) * x| exceeded the double-precision guard."""


class RefinementExhausted(RuntimeError):
    """Supremum bracketing failed to reach tolerance within the allowed levels."""


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExpTerm:
    coefficient: complex
    frequency: complex

    def __post_init__(self):
        if self.coefficient == 0:
            raise ValueError("term coefficient must be nonzero")
        object.__setattr__(self, "coefficient", complex(self.coefficient))
        object.__setattr__(self, "frequency", complex(self.frequency))


@dataclass(frozen=True)
class ExpPolynomial:
    terms: tuple[ExpTerm, ...]

    def __post_init__(self):
        terms = tuple(self.terms)
        if not terms:
            raise ValueError("polynomial needs at least one term")
        freqs = [t.frequency for t in terms]
        if len(set(freqs)) != len(freqs):
            raise ValueError("frequencies must be pairwise distinct")
        object.__setattr__(self, "terms", terms)

    @property
    def order(self) -> int:
        return len(self.terms)

    @property
    def is_trig(self) -> bool:
        """True when every frequency is purely imaginary (oscillatory case)."""
        return all(t.frequency.real == 0.0 for t in self.terms)

    @property
    def real_frequencies(self) -> tuple[float, ...]:
        """Oscillation frequencies f_j, where the exponent is 2*pi*i*f_j*x."""
        return tuple(t.frequency.imag / TWO_PI for t in self.terms)

    @property
    def min_separation(self) -> float | None:
        """Smallest gap between distinct real frequencies; None unless the
        polynomial is trigonometric of order >= 2."""
        if self.order < 2 or not self.is_trig:
            return None
        fs = sorted(self.real_frequencies)
        return min(b - a for a, b in zip(fs, fs[1:]))

    @property
    def coefficient_l1(self) -> float:
        """Sum of |c_j|; a certified global sup bound in the trigonometric case."""
        return math.fsum(abs(t.coefficient) for t in self.terms)

    @staticmethod
    def constant(c: complex) -> "ExpPolynomial":
        return ExpPolynomial((ExpTerm(c, 0.0),))

    @staticmethod
    def trig(pairs: Iterable[tuple[complex, float]]) -> "ExpPolynomial":
        """Build sum of c * e^{2 pi i f x} from (c, f) pairs."""
        return ExpPolynomial(tuple(ExpTerm(c, 2j * math.pi * f) for c, f in pairs))

    def to_quadruples(self) -> list[list[float]]:
        return [[t.coefficient.real, t.coefficient.imag,
                 t.frequency.real, t.frequency.imag] for t in self.terms]

    @staticmethod
    def from_quadruples(quads: Iterable[Sequence[float]]) -> "ExpPolynomial":
        return ExpPolynomial(tuple(
            ExpTerm(complex(cr, ci), complex(ar, ai)) for cr, ci, ar, ai in quads))


def _check_exponents(u: ExpPolynomial, x) -> None:
    xmax = float(np.max(np.abs(x))) if np.ndim(x) else abs(float(x))
    for t in u.terms:
        if abs(t.frequency.real) * xmax > EXP_GUARD:
            raise ExpOverflowError(
                f"|Re(a) * x| = {abs(t.frequency.real) * xmax:.3g} exceeds guard {EXP_GUARD}")


def evaluate(u: ExpPolynomial, x):
    """Evaluate u at a scalar or ndarray of real points."""
    arr = np.asarray(x, dtype=float)
    _check_exponents(u, arr)
    out = np.zeros(arr.shape, dtype=complex)
    for t in u.terms:
        out += t.coefficient * np.exp(t.frequency * arr)
    if arr.ndim == 0:
        return complex(out)
    return out


def shift(u: ExpPolynomial, b: float) -> ExpPolynomial:
    """Translate the argument: shift(u, b)(x) == u(x + b).

    Frequencies are unchanged; each coefficient picks up the exact factor
    e^{a_j b}.
    """
    b = float(b)
    for t in u.terms:
        if abs(t.frequency.real) * abs(b) > EXP_GUARD:
            raise ExpOverflowError("shift factor exponent exceeds guard")
    return ExpPolynomial(tuple(
        ExpTerm(t.coefficient * cmath.exp(t.frequency * b), t.frequency)
        for t in u.terms))


def derivative(u: ExpPolynomial) -> ExpPolynomial | None:
    """Termwise derivative; None when u is constant."""
    terms = tuple(ExpTerm(t.coefficient * t.frequency, t.frequency)
                  for t in u.terms if t.frequency != 0)
    return ExpPolynomial(terms) if terms else None


def multiply(u: ExpPolynomial, v: ExpPolynomial) -> ExpPolynomial:
    """Pointwise product as an ExpPolynomial; coincident frequencies merge."""
    acc: dict[complex, complex] = {}
    for s in u.terms:
        for t in v.terms:
            freq = s.frequency + t.frequency
            acc[freq] = acc.get(freq, 0.0) + s.coefficient * t.coefficient
    terms = tuple(ExpTerm(c, f) for f, c in acc.items() if c != 0)
    if not terms:
        raise ValueError("product cancels to the zero function")
    return ExpPolynomial(terms)


def linear_combination(polys: Sequence[ExpPolynomial],
                       weights: Sequence[complex]) -> ExpPolynomial | None:
    """Sum of weight_i * poly_i; returns None if everything cancels."""
    acc: dict[complex, complex] = {}
    for p, w in zip(polys, weights):
        for t in p.terms:
            acc[t.frequency] = acc.get(t.frequency, 0.0) + w * t.coefficient
    terms = tuple(ExpTerm(c, f) for f, c in acc.items() if abs(c) > 0)
    return ExpPolynomial(terms) if terms else None


# ---------------------------------------------------------------------------
# intervals
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RealInterval:
    lo: float
    hi: float

    def __post_init__(self):
        object.__setattr__(self, "lo", float(self.lo))
        object.__setattr__(self, "hi", float(self.hi))
        if not self.lo <= self.hi:
            raise ValueError(f"interval endpoints out of order: {self.lo} > {self.hi}")

    @property
    def length(self) -> float:
        return self.hi - self.lo

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi


def _merge_pairs(pairs: Iterable[tuple[float, float]]) -> tuple[RealInterval, ...]:
    ivs = sorted((float(lo), float(hi)) for lo, hi in pairs if float(hi) > float(lo))
    merged: list[list[float]] = []
    for lo, hi in ivs:
        if merged and lo <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    return tuple(RealInterval(lo, hi) for lo, hi in merged)


@dataclass(frozen=True)
class IntervalUnion:
    intervals: tuple[RealInterval, ...]

    def __post_init__(self):
        ivs = tuple(self.intervals)
        for a, b in zip(ivs, ivs[1:]):
            if not a.hi < b.lo:
                raise ValueError("intervals must be sorted and disjoint")
        object.__setattr__(self, "intervals", ivs)

    @staticmethod
    def of(pairs: Iterable[tuple[float, float]]) -> "IntervalUnion":
        """Canonical union from (lo, hi) pairs: sorted, merged, degenerates dropped."""
        return IntervalUnion(_merge_pairs(pairs))

    @staticmethod
    def empty() -> "IntervalUnion":
        return IntervalUnion(())

    @staticmethod
    def from_interval(iv: RealInterval) -> "IntervalUnion":
        return IntervalUnion.of([(iv.lo, iv.hi)])

    @property
    def measure(self) -> float:
        return math.fsum(iv.length for iv in self.intervals)

    @property
    def is_empty(self) -> bool:
        return not self.intervals

    @property
    def span(self) -> RealInterval:
        if self.is_empty:
            raise ValueError("empty union has no span")
        return RealInterval(self.intervals[0].lo, self.intervals[-1].hi)

    def contains(self, x: float) -> bool:
        return any(iv.contains(x) for iv in self.intervals)

    def to_pairs(self) -> list[list[float]]:
        return [[iv.lo, iv.hi] for iv in self.intervals]

    @staticmethod
    def from_pairs(pairs: Iterable[Sequence[float]]) -> "IntervalUnion":
        return IntervalUnion.of([(p[0], p[1]) for p in pairs])


def union(a: IntervalUnion, b: IntervalUnion) -> IntervalUnion:
    return IntervalUnion.of([(iv.lo, iv.hi) for iv in a.intervals + b.intervals])


def intersect(a: IntervalUnion, b: IntervalUnion) -> IntervalUnion:
    pairs = []
    for p in a.intervals:
        for q in b.intervals:
            if q.lo >= p.hi:
                break
            lo, hi = max(p.lo, q.lo), min(p.hi, q.hi)
            if hi > lo:
                pairs.append((lo, hi))
    return IntervalUnion.of(pairs)


def subtract(a: IntervalUnion, b: IntervalUnion) -> IntervalUnion:
    pairs = []
    for p in a.intervals:
        cursor = p.lo
        for q in b.intervals:
            if q.hi <= cursor:
                continue
            if q.lo >= p.hi:
                break
            if q.lo > cursor:
                pairs.append((cursor, q.lo))
            cursor = max(cursor, q.hi)
            if cursor >= p.hi:
                break
        if cursor < p.hi:
            pairs.append((cursor, p.hi))
    return IntervalUnion.of(pairs)


def translate(a: IntervalUnion, b: float) -> IntervalUnion:
    b = float(b)
    return IntervalUnion.of([(iv.lo + b, iv.hi + b) for iv in a.intervals])


def set_algebra(op: str, a: IntervalUnion, b) -> IntervalUnion:
    """Dispatcher over the four set operations; b is a union or, for
    translate, a real offset."""
    if op == "union":
        return union(a, b)
    if op == "intersect":
        return intersect(a, b)
    if op == "subtract":
        return subtract(a, b)
    if op == "translate":
        return translate(a, float(b))
    raise ValueError(f"unknown set operation {op!r}")


def truncate_to_measure(a: IntervalUnion, target: float) -> IntervalUnion:
    """Leftmost part of a with the requested measure (exact endpoint cut)."""
    if target <= 0:
        return IntervalUnion.empty()
    pairs = []
    acc = 0.0
    for iv in a.intervals:
        if acc + iv.length < target:
            pairs.append((iv.lo, iv.hi))
            acc += iv.length
        else:
            pairs.append((iv.lo, iv.lo + (target - acc)))
            return IntervalUnion.of(pairs)
    return IntervalUnion.of(pairs)


# ---------------------------------------------------------------------------
# sampling and certified suprema
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SamplingPlan:
    step: float
    refinement_levels: int = 6
    seed: int = 0

    def __post_init__(self):
        if self.step <= 0:
            raise ValueError("step must be positive")
        if self.refinement_levels < 1:
            raise ValueError("refinement_levels must be >= 1")


DEFAULT_STEP = 1.0 / 64.0


def max_real_frequency(u: ExpPolynomial) -> float:
    return max(abs(t.frequency) / TWO_PI for t in u.terms)


def default_plan(u: ExpPolynomial | None = None, *, refinement_levels: int = 6,
                 seed: int = 0) -> SamplingPlan:
    """Nyquist-style oversampled plan for u (or a generic plan when u is None).

    The step stays below 1 / (10 (1 + fmax)); we take a denser 1 / (12 (1 + fmax))
    so that six tenfold refinements certify suprema to 1e-6 relative.
    """
    if u is None:
        step = DEFAULT_STEP
    else:
        step = 1.0 / (12.0 * (1.0 + max_real_frequency(u)))
    return SamplingPlan(step=step, refinement_levels=refinement_levels, seed=seed)


def grid(lo: float, hi: float, step: float) -> np.ndarray:
    n = max(2, int(math.ceil((hi - lo) / step)) + 1)
    return np.linspace(lo, hi, n)


def derivative_bound(u: ExpPolynomial, interval: RealInterval) -> float:
    """Upper bound for |u'| on the interval: sum |c_j a_j| sup e^{Re(a_j) x}."""
    total = 0.0
    for t in u.terms:
        re = t.frequency.real
        if abs(re) * max(abs(interval.lo), abs(interval.hi)) > EXP_GUARD:
            raise ExpOverflowError("derivative bound exponent exceeds guard")
        growth = math.exp(max(re * interval.lo, re * interval.hi))
        total += abs(t.coefficient) * abs(t.frequency) * growth
    return total


_SPLIT = 10  # children per refined cell; levels multiply resolution tenfold


def sup_on_interval(u: ExpPolynomial, interval: RealInterval, plan: SamplingPlan,
                    rel_tol: float = 1e-6) -> tuple[float, float]:
    """Certified bracket (lower, upper) of sup |u| on the interval.

    Branch-and-bound on a uniform grid: the cell certificate is the center
    value plus the derivative bound times the half width.  Cells that cannot
    beat the best observed value are pruned; survivors are split tenfold per
    level up to plan.refinement_levels.
    """
    if interval.length <= 0:
        raise ValueError("interval must have positive length")
    lip = derivative_bound(u, interval)
    ends = np.abs(evaluate(u, np.array([interval.lo, interval.hi])))
    lower = float(ends.max())
    if lip == 0.0:
        return lower, lower

    step0 = min(plan.step, interval.length / 8.0)
    n_cells = max(8, int(math.ceil(interval.length / step0)))
    hw = interval.length / (2.0 * n_cells)
    centers = interval.lo + hw + 2.0 * hw * np.arange(n_cells)

    for _ in range(plan.refinement_levels + 1):
        vals = np.abs(evaluate(u, centers))
        lower = max(lower, float(vals.max()))
        potential = vals + lip * hw
        upper = max(lower, float(potential.max()))
        if upper - lower <= rel_tol * upper:
            return lower, upper
        keep = centers[potential > lower]
        if keep.size == 0:
            return lower, upper
        offsets = (2.0 * np.arange(_SPLIT) + 1.0) / _SPLIT - 1.0
        centers = (keep[:, None] + hw * offsets[None, :]).ravel()
        hw = hw / _SPLIT
    raise RefinementExhausted(
        f"sup bracket stuck at [{lower:.6g}, {upper:.6g}] after "
        f"{plan.refinement_levels} refinement levels")


def sup_on_union(u: ExpPolynomial, e: IntervalUnion, plan: SamplingPlan,
                 rel_tol: float = 1e-6) -> tuple[float, float]:
    if e.is_empty:
        raise ValueError("sup over an empty set")
    lowers, uppers = [], []
    for iv in e.intervals:
        lo, up = sup_on_interval(u, iv, plan, rel_tol)
        lowers.append(lo)
        uppers.append(up)
    return max(lowers), max(uppers)


# ---------------------------------------------------------------------------
# sign regions and sublevel sets
# ---------------------------------------------------------------------------

def _bisect_boundary(fn: Callable[[float], float], lo: float, hi: float,
                     lo_inside: bool, tol: float = BISECT_TOL) -> float:
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if (fn(mid) > 0.0) == lo_inside:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def region_above(fn: Callable[[np.ndarray], np.ndarray], interval: RealInterval,
                 step: float, tol: float = BISECT_TOL,
                 extra_nodes: np.ndarray | None = None) -> IntervalUnion:
    """Approximate {x in interval : fn(x) > 0} as an interval union.

    Boundaries between grid nodes of opposite sign are refined by bisection;
    sign features narrower than the grid step can be missed unless their
    locations are supplied as extra_nodes (pinning the extrema of the
    underlying function makes narrow features always sampled at their peak).
    """
    xs = grid(interval.lo, interval.hi, step)
    if extra_nodes is not None and len(extra_nodes):
        inside = extra_nodes[(extra_nodes > interval.lo) & (extra_nodes < interval.hi)]
        if len(inside):
            xs = np.unique(np.concatenate([xs, inside]))
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        vals = np.asarray(fn(xs), dtype=float)
    inside = vals > 0.0

    def scalar(x: float) -> float:
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            return float(fn(np.asarray([x]))[0])

    pairs = []
    start = xs[0] if inside[0] else None
    for i in range(len(xs) - 1):
        if inside[i] == inside[i + 1]:
            continue
        cut = _bisect_boundary(scalar, float(xs[i]), float(xs[i + 1]), bool(inside[i]), tol)
        if inside[i]:
            pairs.append((start, cut))
            start = None
        else:
            start = cut
    if start is not None:
        pairs.append((start, xs[-1]))
    return IntervalUnion.of(pairs)


def sublevel_set(u: ExpPolynomial, interval: RealInterval, t: float,
                 plan: SamplingPlan) -> IntervalUnion:
    """{x in interval : |u(x)| < t} with bisected boundary points."""
    if t <= 0:
        raise ValueError("threshold t must be positive")
    if interval.length <= 0:
        raise ValueError("interval must have positive length")
    step = min(plan.step, interval.length / 8.0)
    return region_above(lambda x: t - np.abs(evaluate(u, x)), interval, step)


def sublevel_measure_in(u: ExpPolynomial, e: IntervalUnion, t: float,
                        plan: SamplingPlan) -> float:
    """Measure of {x in e : |u(x)| <= t}, component by component."""
    total = 0.0
    for iv in e.intervals:
        total += sublevel_set(u, iv, t, plan).measure
    return total


# ---------------------------------------------------------------------------
# density scan and support covers
# ---------------------------------------------------------------------------

def beurling_lower_density_scan(k: IntervalUnion, r_values: Sequence[float],
                                window: RealInterval) -> list[tuple[float, float]]:
    """For each R, the infimum over window placements x of |k  [x, x+R]|.

    The measure is piecewise linear in x with breakpoints where x or x+R hits
    a component endpoint, so scanning the breakpoints gives the exact infimum.
    """
    rs = [float(r) for r in r_values]
    if any(r <= 0 for r in rs) or any(b <= a for a, b in zip(rs, rs[1:])):
        raise ValueError("R values must be positive and increasing")
    endpoints = sorted({p for iv in k.intervals for p in (iv.lo, iv.hi)})
    out = []
    for r in rs:
        xmax = window.hi - r
        if xmax < window.lo:
            raise ValueError("window shorter than scan length R")
        cands = {window.lo, xmax}
        for e in endpoints:
            for x in (e, e - r):
                if window.lo <= x <= xmax:
                    cands.add(x)
        best = min(
            intersect(k, IntervalUnion.of([(x, x + r)])).measure
            for x in sorted(cands))
        out.append((r, best))
    return out


def support_cover_check(k: IntervalUnion, b1: float, b2: float,
                        core: RealInterval | None = None,
                        tol: float = 1e-12) -> tuple[bool, bool, bool]:
    """The three translation-cover inclusions for a candidate support set.

    Checks, up to measure tol: k inside (k+b1) u (k+b2); k+b1 inside
    k u (k+b2); k+b2 inside (k+b1) u k.  A core interval restricts the
    check away from truncation boundaries of periodic supports.
    """
    if b1 == b2 or b1 == 0 or b2 == 0:
        raise ValueError("offsets must be distinct and nonzero")
    kb1, kb2 = translate(k, b1), translate(k, b2)

    def included(a: IntervalUnion, covers: list[IntervalUnion]) -> bool:
        diff = a
        for c in covers:
            diff = subtract(diff, c)
        if core is not None:
            diff = intersect(diff, IntervalUnion.from_interval(core))
        return diff.measure <= tol

    return (included(k, [kb1, kb2]),
            included(kb1, [k, kb2]),
            included(kb2, [kb1, k]))

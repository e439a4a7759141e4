"""Empirical verifiers for the sup-ratio, L2-energy, and product lower bounds.

Every verifier runs one trial on concrete inputs and returns a small record
with the measured quantities and the minimal constant that makes the trial
hold.  Suites aggregate trials into an InequalityReport with the fitted
constant taken over the whole corpus.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import integrate

from .exppoly import (
    ExpPolynomial,
    derivative,
    IntervalUnion,
    RealInterval,
    SamplingPlan,
    evaluate,
    grid,
    region_above,
    shift,
    subtract,
    sublevel_set,
    sup_on_interval,
    sup_on_union,
    truncate_to_measure,
)


class ExplosionGuard(RuntimeError):
    """Multi-index enumeration would exceed the configured path cap."""


class QuadratureMismatch(RuntimeError):
    """Two independent integration routes disagreed beyond tolerance."""


@dataclass(frozen=True)
class InequalityReport:
    trials: int
    fitted_constant: float
    worst_ratio: float
    all_hold: bool
    metadata: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# sup-ratio inequality on subsets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SupRatioTrial:
    m: int
    interval_length: float
    set_measure: float
    sup_interval: tuple[float, float]
    sup_subset: tuple[float, float]
    growth: float       # e^{|I| max|Re a_j|}
    ratio: float        # sup_I / sup_E, conservative bracket
    A_min: float        # minimal constant making this trial hold
    holds: bool


def verify_turan_nazarov(u: ExpPolynomial, interval: RealInterval,
                         subset: IntervalUnion, plan: SamplingPlan) -> SupRatioTrial:
    """One trial of sup_I |u| <= growth * (A |I| / |E|)^{m-1} sup_E |u|.

    Solves for the minimal A; for order 1 the exponent vanishes and the trial
    just checks sup_I <= growth * sup_E.
    """
    if subset.measure <= 0:
        raise ValueError("subset must have positive measure")
    m = u.order
    sup_i = sup_on_interval(u, interval, plan)
    sup_e = sup_on_union(u, subset, plan)
    growth_exp = interval.length * max(abs(t.frequency.real) for t in u.terms)
    growth = math.exp(growth_exp)
    ratio = sup_i[1] / sup_e[0]  # conservative: upper of I over lower of E
    if m == 1:
        a_min = 0.0
        holds = sup_i[0] <= growth * sup_e[1] * (1 + 1e-9)
    else:
        a_min = (subset.measure / interval.length) * (ratio / growth) ** (1.0 / (m - 1))
        holds = True
    return SupRatioTrial(
        m=m, interval_length=interval.length, set_measure=subset.measure,
        sup_interval=sup_i, sup_subset=sup_e, growth=growth, ratio=ratio,
        A_min=a_min, holds=holds)


def fit_sup_ratio_constant(trials: Sequence[SupRatioTrial]) -> InequalityReport:
    """Aggregate: the fitted A is the max of per-trial minima; the worst ratio
    re-checks every trial at that A."""
    a_fit = max(t.A_min for t in trials)
    worst = 0.0
    all_hold = all(t.holds for t in trials)
    for t in trials:
        if t.m == 1:
            rhs = t.growth * t.sup_subset[1]
        else:
            rhs = (t.growth
                   * (a_fit * t.interval_length / t.set_measure) ** (t.m - 1)
                   * t.sup_subset[1])
        worst = max(worst, t.sup_interval[0] / rhs) if rhs > 0 else math.inf
        if t.sup_interval[0] > rhs * (1 + 1e-9):
            all_hold = False
    return InequalityReport(trials=len(trials), fitted_constant=a_fit,
                            worst_ratio=worst, all_hold=all_hold,
                            metadata={"max_m": max(t.m for t in trials)})


# ---------------------------------------------------------------------------
# L2 energy bounds
# ---------------------------------------------------------------------------

def _abs2_quadrature(u: ExpPolynomial, lo: float, hi: float,
                     panel: float = 0.05, order: int = 16) -> float:
    base_x, base_w = np.polynomial.legendre.leggauss(order)
    n_panels = max(1, int(math.ceil((hi - lo) / panel)))
    edges = np.linspace(lo, hi, n_panels + 1)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    xq = (mid[:, None] + half[:, None] * base_x[None, :]).ravel()
    wq = (half[:, None] * base_w[None, :]).ravel()
    vals = np.abs(evaluate(u, xq)) ** 2
    return float(np.dot(wq, vals))


@dataclass(frozen=True)
class EnergyTrial:
    m: int
    window: float
    delta: float | None
    energy: float            # sum |c_j|^2
    integral: float
    lower: float
    upper: float
    holds: bool
    shift_gap: float         # |integral at a - integral of shifted poly at 0|


def verify_montgomery_vaughan(u: ExpPolynomial, window_length: float, a: float,
                              panel: float = 0.05) -> EnergyTrial:
    """Two-sided energy bound (K -/+ 1/delta) sum|c|^2 for the L2 mass of a
    trigonometric polynomial over any window of length K, plus the exact
    shift invariance of the integral."""
    if not u.is_trig:
        raise ValueError("energy bounds apply to trigonometric polynomials")
    k = float(window_length)
    delta = u.min_separation
    inv_delta = 0.0 if delta is None else 1.0 / delta
    energy = math.fsum(abs(t.coefficient) ** 2 for t in u.terms)

    integral = _abs2_quadrature(u, a, a + k, panel=panel)
    check = _abs2_quadrature(u, a, a + k, panel=panel / 2)
    if abs(check - integral) > 1e-10 * max(1.0, abs(integral)):
        raise QuadratureMismatch("energy quadrature did not stabilize")
    shifted = _abs2_quadrature(shift(u, a), 0.0, k, panel=panel)

    lower = (k - inv_delta) * energy
    upper = (k + inv_delta) * energy
    holds = lower - 1e-9 <= check <= upper + 1e-9
    return EnergyTrial(m=u.order, window=k, delta=delta, energy=energy,
                       integral=check, lower=lower, upper=upper, holds=holds,
                       shift_gap=abs(check - shifted))


# ---------------------------------------------------------------------------
# windowed infimum of the sup
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WindowInfTrial:
    window_length: float
    a_values: tuple[float, ...]
    window_sups: tuple[float, ...]
    C: float
    refined_C: float
    positive: bool


def inf_lower_bound(u: ExpPolynomial, a_values: Sequence[float],
                    window_length: float, plan: SamplingPlan) -> WindowInfTrial:
    """Scan sup |u| over windows [a, a+K]; the min over a is the empirical
    uniform lower constant.  A midpoint-refined scan confirms it stays away
    from zero."""
    if window_length <= 0:
        raise ValueError("window length must be positive")
    avals = tuple(float(a) for a in a_values)
    sups = tuple(
        sup_on_interval(u, RealInterval(a, a + window_length), plan)[0]
        for a in avals)
    c = min(sups)
    mids = tuple(0.5 * (x + y) for x, y in zip(avals, avals[1:]))
    refined = min([c] + [
        sup_on_interval(u, RealInterval(a, a + window_length), plan)[0]
        for a in mids]) if mids else c
    return WindowInfTrial(window_length=window_length, a_values=avals,
                          window_sups=sups, C=c, refined_C=refined,
                          positive=refined > 0.0)


# ---------------------------------------------------------------------------
# half split
# ---------------------------------------------------------------------------

def _sublevel_measure(u: ExpPolynomial, e: IntervalUnion, t: float,
                      plan: SamplingPlan) -> float:
    return math.fsum(sublevel_set(u, iv, t, plan).measure for iv in e.intervals)


def half_split(u: ExpPolynomial, e: IntervalUnion,
               plan: SamplingPlan) -> tuple[IntervalUnion, float]:
    """Split off the half of e where |u| is largest.

    Monotone bisection finds t with |{x in e : |u| <= t}| = |e| / 2; the
    returned set is e minus that sublevel part, and the bound is the grid
    infimum of |u| there (>= t by construction).  A constant |u| degenerates
    to the left-half convention.
    """
    half = e.measure / 2.0
    if half <= 0:
        raise ValueError("set must have positive measure")
    tol = e.measure * 1e-6
    hi_val = sup_on_union(u, e, plan)[1] * (1 + 1e-9)
    lo_t, hi_t = 0.0, hi_val
    for _ in range(80):
        mid = 0.5 * (lo_t + hi_t)
        if _sublevel_measure(u, e, mid, plan) < half:
            lo_t = mid
        else:
            hi_t = mid
        if hi_t - lo_t <= 1e-14 * hi_val:
            break
    t = hi_t  # ties toward larger t keeps the surviving bound larger
    removed_measure = _sublevel_measure(u, e, t, plan)

    if abs(removed_measure - half) > max(tol, 1e-9 * e.measure):
        # |u| is flat on a positive-measure chunk; fall back to the left half
        f_set = truncate_to_measure(e, half)
        xs = _union_sample(f_set, plan)
        return f_set, float(np.min(np.abs(evaluate(u, xs))))

    removed = IntervalUnion.of(
        [p for iv in e.intervals
         for p in sublevel_set(u, iv, t, plan).to_pairs()])
    f_set = subtract(e, removed)
    xs = _union_sample(f_set, plan)
    bound = float(np.min(np.abs(evaluate(u, xs))))
    return f_set, bound


def _union_sample(e: IntervalUnion, plan: SamplingPlan) -> np.ndarray:
    parts = [grid(iv.lo, iv.hi, min(plan.step, max(iv.length / 4, 1e-12)))
             for iv in e.intervals]
    if not parts:
        raise ValueError("cannot sample an empty set")
    return np.concatenate(parts)


# ---------------------------------------------------------------------------
# negative-log integrals via the layer cake
# ---------------------------------------------------------------------------

def _critical_points(v: ExpPolynomial, interval: RealInterval,
                     plan: SamplingPlan) -> np.ndarray:
    """Locations of the local extrema of |v| on the interval.

    Zeros of d/dx |v|^2 = 2 Re(conj(v) v'), found by a fine sign scan plus
    bisection.  Pinning these as grid nodes keeps narrow peaks and dips of
    |v| from slipping between samples.
    """
    dv = derivative(v)
    if dv is None:
        return np.empty(0)

    def slope(x):
        return np.real(np.conj(evaluate(v, x)) * evaluate(dv, x))

    xs = grid(interval.lo, interval.hi, plan.step / 4.0)
    vals = slope(xs)
    sgn = vals > 0.0
    crits = []
    for i in range(len(xs) - 1):
        if sgn[i] == sgn[i + 1]:
            continue
        lo, hi = float(xs[i]), float(xs[i + 1])
        lo_pos = bool(sgn[i])
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if (slope(np.asarray([mid]))[0] > 0.0) == lo_pos:
                lo = mid
            else:
                hi = mid
            if hi - lo <= 1e-13:
                break
        crits.append(0.5 * (lo + hi))
    return np.asarray(crits)


def _descend_sublevels(v: ExpPolynomial, interval: RealInterval,
                       thresholds_desc, plan: SamplingPlan,
                       crit: np.ndarray | None = None) -> list[IntervalUnion]:
    """Sublevel regions {x : |v(x)| < t} for descending thresholds.

    Sublevel sets nest, so each level rescans only the components of the
    previous one at a locally refined step.  This keeps dips resolved as they
    shrink toward the minima of |v|; the pinned critical points keep peaks
    that poke above the falling threshold from being skipped at birth.
    """
    if crit is None:
        crit = _critical_points(v, interval, plan)
    regions = IntervalUnion.from_interval(interval)
    out = []
    for t in thresholds_desc:
        regions = _sublevel_within(v, regions, float(t), plan, crit)
        out.append(regions)
    return out


def _sublevel_within(v: ExpPolynomial, parent: IntervalUnion, t: float,
                     plan: SamplingPlan,
                     crit: np.ndarray | None = None) -> IntervalUnion:
    pairs = []
    for comp in parent.intervals:
        local_step = min(plan.step, max(comp.length / 8.0, 1e-13))
        # boundaries to 1e-13 keep the measure-noise floor near 1e-12, which
        # the adaptive cell refinement needs for small integrals
        sub = region_above(lambda x: t - np.abs(evaluate(v, x)), comp,
                           local_step, tol=1e-13, extra_nodes=crit)
        pairs.extend((iv.lo, iv.hi) for iv in sub.intervals)
    return IntervalUnion.of(pairs)


def _descent_thresholds(top: float, floor: float, ratio: float) -> list[float]:
    pre = []
    t = top
    while t > floor:
        pre.append(t)
        t /= ratio
    return pre


def _lin_cell(t0: float, t1: float, e0: float, e1: float) -> float:
    """Integral of E(t)/t over [t0, t1] for the linear interpolant of E."""
    log_ratio = math.log(t1 / t0)
    slope = (e1 - e0) / (t1 - t0)
    return e0 * log_ratio + slope * ((t1 - t0) - t0 * log_ratio)


# measure values carry boundary-bisection noise around 1e-9; subdividing
# below that only chases noise
_CELL_TOL_FLOOR = 5e-11


def _adaptive_cell(v: ExpPolynomial, plan: SamplingPlan, t0: float, t1: float,
                   e0: float, e1: float, parent: IntervalUnion, crit: np.ndarray,
                   tol: float, depth: int) -> float:
    """Adaptive refinement of one threshold cell of the layer-cake integral.

    The measure curve has square-root kinks at every critical value of |v|,
    so fixed grids lose first-order accuracy there; bisecting cells until the
    linear estimate stabilizes concentrates work exactly at those kinks.
    """
    whole = _lin_cell(t0, t1, e0, e1)
    if depth <= 0:
        return whole
    mid = math.sqrt(t0 * t1)
    mid_regions = _sublevel_within(v, parent, mid, plan, crit)
    em = mid_regions.measure
    left = _lin_cell(t0, mid, e0, em)
    right = _lin_cell(mid, t1, em, e1)
    if abs(left + right - whole) <= tol:
        return left + right + (left + right - whole) / 3.0
    half_tol = max(tol / 2.0, _CELL_TOL_FLOOR)
    return (_adaptive_cell(v, plan, t0, mid, e0, em, mid_regions, crit,
                           half_tol, depth - 1)
            + _adaptive_cell(v, plan, mid, t1, em, e1, parent, crit,
                             half_tol, depth - 1))


def _layer_cake_log_minus(u: ExpPolynomial, b: float, interval: RealInterval,
                          plan: SamplingPlan, t_min: float = 1e-9,
                          n_t: int = 120, adaptive: bool = True) -> float:
    """Integral over the interval of log_-|u(x+b)| from sublevel measures at a
    geometric threshold grid, with a fitted power-law tail below t_min.

    Each cell integrates E(t)/t for the linear interpolant of the measure
    curve; with adaptive=True cells are bisected until their contribution
    stabilizes, which restores full accuracy at the square-root kinks the
    curve has at critical values of |u(.+b)|.
    """
    v = shift(u, b)
    top = sup_on_interval(v, interval, plan)[1] * (1 + 1e-9)
    ts = np.geomspace(t_min, 1.0, n_t)
    ratio = ts[1] / ts[0]

    crit = _critical_points(v, interval, plan)
    desc = np.concatenate([_descent_thresholds(top, 1.0, ratio), ts[::-1]])
    levels = _descend_sublevels(v, interval, desc, plan,
                                crit)[len(desc) - len(ts):][::-1]
    meas = np.array([r.measure for r in levels])

    rough = math.fsum(
        _lin_cell(float(ts[i]), float(ts[i + 1]), float(meas[i]), float(meas[i + 1]))
        for i in range(len(ts) - 1) if meas[i + 1] > 0.0)
    cell_tol = max(rough * 3e-6, _CELL_TOL_FLOOR)
    kink_values = np.sort(np.abs(evaluate(v, crit))) if len(crit) else np.empty(0)

    total = 0.0
    for i in range(len(ts) - 1):
        if meas[i + 1] <= 0.0:
            continue
        t0, t1 = float(ts[i]), float(ts[i + 1])
        e0, e1 = float(meas[i]), float(meas[i + 1])
        if not adaptive:
            total += _lin_cell(t0, t1, e0, e1)
            continue
        # split the cell at any contained critical value of |v|: the measure
        # curve has a square-root kink there, which would silently defeat the
        # midpoint acceptance test
        inner = sorted(kv for kv in np.unique(kink_values)
                       if t0 * (1 + 1e-12) < kv < t1 * (1 - 1e-12))
        pts = [t0] + inner + [t1]
        regs = {t1: levels[i + 1]}
        vals = {t0: e0, t1: e1}
        cur = levels[i + 1]
        for kv in reversed(inner):
            cur = _sublevel_within(v, cur, kv, plan, crit)
            regs[kv] = cur
            vals[kv] = cur.measure
        for a, b2 in zip(pts, pts[1:]):
            total += _adaptive_cell(v, plan, a, b2, vals[a], vals[b2],
                                    regs[b2], crit, cell_tol, 14)
    # tail below t_min assuming the local power law continues
    if meas[0] > 0.0:
        j, k = 0, 1
        while k < len(ts) and meas[k] <= meas[j]:
            k += 1
        if k < len(ts):
            p = ((math.log(meas[k]) - math.log(meas[j]))
                 / (math.log(ts[k]) - math.log(ts[j])))
            if p > 1e-9:
                total += float(meas[0]) / p
    return total


def _direct_log_minus(u: ExpPolynomial, b: float, interval: RealInterval,
                      plan: SamplingPlan) -> float:
    """Adaptive quadrature of log_-|u(x+b)|, well by well.

    The integrand lives on {|u(x+b)| < 1}, whose components can be far
    narrower than any global sampling; integrating each well separately keeps
    the adaptive rule from skipping them.
    """
    v = shift(u, b)
    top = sup_on_interval(v, interval, plan)[1] * (1 + 1e-9)
    levels = _descent_thresholds(top, 1.0, 1.15) + [1.0]
    regions = _descend_sublevels(v, interval, levels, plan)[-1]

    def integrand(x: float) -> float:
        val = abs(evaluate(v, x))
        if val == 0.0:
            val = abs(evaluate(v, x + 1e-13))  # jitter once off the zero
            if val == 0.0:
                raise QuadratureMismatch(f"zero of u sits on quadrature node x={x}")
        return max(0.0, -math.log(val))

    total = 0.0
    pad = 1e-12
    for comp in regions.intervals:
        lo = max(interval.lo, comp.lo - pad)
        hi = min(interval.hi, comp.hi + pad)
        result = integrate.quad(integrand, lo, hi, limit=400,
                                epsabs=1e-11, epsrel=1e-11, full_output=1)
        total += float(result[0])
    return total


def log_minus_integral(u: ExpPolynomial, b: float, interval: RealInterval,
                       plan: SamplingPlan, cross_tol: float = 1e-4) -> float:
    """Integral of log_-|u(x+b)| over the interval.

    Primary route is the layer-cake identity over sublevel measures; adaptive
    quadrature of the integrand cross-checks it to cross_tol relative.
    """
    layer = _layer_cake_log_minus(u, b, interval, plan)
    direct = _direct_log_minus(u, b, interval, plan)
    scale = max(abs(direct), 1e-9)
    if abs(layer - direct) > cross_tol * scale:
        raise QuadratureMismatch(
            f"layer-cake {layer:.8g} vs direct {direct:.8g} beyond {cross_tol:g} relative")
    return layer


# ---------------------------------------------------------------------------
# product lower bound over shifted copies
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ProductBoundResult:
    E: IntervalUnion
    eta_fit: float
    threshold: float          # Chebyshev cut on the summed log_- values
    log_minus_total: float
    inf_product: float


def verify_prod_lemma(u: ExpPolynomial, window_length: float,
                      shifts_b: Sequence[float], plan: SamplingPlan,
                      interval: RealInterval | None = None,
                      log_minus_values: Sequence[float] | None = None
                      ) -> ProductBoundResult:
    """Find E inside an interval of length K, |E| >= K/2, on which the product
    of |u(x + b_i)| stays above its fitted exponential floor.

    The threshold t = 3 * total / |I| comes from Chebyshev applied to the
    integral of the summed negative logs, which guarantees the removed set
    has measure at most |I| / 3.
    """
    interval = interval or RealInterval(0.0, window_length)
    bs = tuple(float(b) for b in shifts_b)
    k = len(bs)
    if log_minus_values is None:
        # the Chebyshev threshold tolerates a few percent of integral error,
        # so skip the adaptive refinement and use a coarse threshold grid here
        log_minus_values = [
            _layer_cake_log_minus(u, b, interval, plan, n_t=100, adaptive=False)
            for b in bs]
    total = math.fsum(log_minus_values)
    threshold = 3.0 * total / interval.length

    def summed_log_minus(x):
        acc = np.zeros_like(np.asarray(x, dtype=float))
        for b in bs:
            vals = np.abs(evaluate(shift(u, b), x))
            with np.errstate(divide="ignore"):
                acc += np.maximum(0.0, -np.log(vals))
        return acc

    if threshold <= 0.0:
        e_set = IntervalUnion.from_interval(interval)
    else:
        bad = region_above(lambda x: summed_log_minus(x) - threshold,
                           interval, plan.step)
        e_set = subtract(IntervalUnion.from_interval(interval), bad)
    if e_set.measure < interval.length / 2.0:
        raise RuntimeError(
            f"surviving set measure {e_set.measure:.6g} below half of "
            f"{interval.length:.6g}")

    xs = _union_sample(e_set, plan)
    prod = np.ones_like(xs)
    for b in bs:
        prod *= np.abs(evaluate(shift(u, b), xs))
    inf_prod = float(np.min(prod))
    eta_fit = -math.log(inf_prod) / k if inf_prod > 0 else math.inf
    return ProductBoundResult(E=e_set, eta_fit=eta_fit, threshold=threshold,
                              log_minus_total=total, inf_product=inf_prod)


# ---------------------------------------------------------------------------
# multi-index reciprocal sums
# ---------------------------------------------------------------------------

MULTI_INDEX_CAP = 100_000


def multi_index_sum(u: ExpPolynomial, offsets: Sequence[float], depth: int,
                    x: np.ndarray, cap: int = MULTI_INDEX_CAP) -> np.ndarray:
    """Sum over all n^k index paths of 1 / prod_j |u(x + s_j)| where s_j is the
    j-th prefix sum of chosen offsets.  Prefix products are shared down the
    recursion tree; zeros of u propagate as inf."""
    n = len(offsets)
    if n ** depth > cap:
        raise ExplosionGuard(f"{n}^{depth} paths exceed cap {cap}")
    x = np.asarray(x, dtype=float)
    total = np.zeros_like(x)

    def walk(level: int, offset: float, inv_prod: np.ndarray):
        nonlocal total
        for b in offsets:
            s = offset + b
            with np.errstate(divide="ignore"):
                factor = 1.0 / np.abs(evaluate(u, x + s))
            child = inv_prod * factor
            if level + 1 == depth:
                total = total + child
            else:
                walk(level + 1, s, child)

    if depth == 0:
        return np.ones_like(x)
    walk(0, 0.0, np.ones_like(x))
    return total


@dataclass(frozen=True)
class MultiIndexResult:
    E: IntervalUnion
    eta_fit: float
    threshold: float
    excluded_measure: float
    quantile: float


def verify_product_lemma(u: ExpPolynomial, n: int, shifts_b: Sequence[float],
                         window_length: float, depth: int, plan: SamplingPlan,
                         interval: RealInterval | None = None,
                         cap: int = MULTI_INDEX_CAP) -> MultiIndexResult:
    """Brute-force the n^k reciprocal-product sum on a grid and keep the
    half of the interval where it stays below the fitted threshold
    t = e^{eta k log k}."""
    if n > len(shifts_b):
        raise ValueError("need at least n offsets")
    offsets = tuple(float(b) for b in shifts_b[:n])
    interval = interval or RealInterval(0.0, window_length)
    xs = grid(interval.lo, interval.hi, plan.step)
    sums = multi_index_sum(u, offsets, depth, xs, cap=cap)

    finite = sums[np.isfinite(sums)]
    if finite.size == 0:
        raise RuntimeError("reciprocal sum infinite on the whole grid")
    q = 0.5
    e_set = IntervalUnion.empty()
    threshold = math.nan
    while q <= 0.96:
        threshold = float(np.quantile(finite, q))
        e_set = region_above(
            lambda x: threshold - multi_index_sum(u, offsets, depth, x, cap=cap),
            interval, plan.step)
        if e_set.measure >= interval.length / 2.0:
            break
        q += 0.02
    if e_set.measure < interval.length / 2.0:
        raise RuntimeError("could not retain half the interval below threshold")
    eta_fit = (math.log(threshold) / (depth * math.log(depth))
               if depth >= 2 else math.nan)
    return MultiIndexResult(E=e_set, eta_fit=eta_fit, threshold=threshold,
                            excluded_measure=interval.length - e_set.measure,
                            quantile=q)


def partition_count(n: int, k: int) -> int:
    """Number of nonnegative integer n-tuples with coordinate sum at most k,
    which is binomial(k + n, n)."""
    if n < 0 or k < 0:
        raise ValueError("n and k must be nonnegative")
    value = math.comb(k + n, n)
    if value > 2 ** 63 - 1:
        raise OverflowError("partition count exceeds 64-bit range")
    return value

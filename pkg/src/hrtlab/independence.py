"""Modulation-translation systems and numerical independence machinery.

A dependence relation is a finite family of modulation-translation atoms with
nonzero coefficients applied to a catalog function.  Grouping atoms by their
translation collapses the relation to sum_i u_i(x) f(x - b_i) with
trigonometric polynomials u_i, which is the form every verifier consumes.
Independence evidence comes from three directions: the sup of the collapsed
residual, the singular values of a windowed Gram matrix, and the determinant
staircase that builds witness sets stage by stage.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import permutations
from typing import Sequence

import numpy as np

from .catalog import FunctionSpec
from .exppoly import (
    ExpPolynomial,
    ExpTerm,
    IntervalUnion,
    RealInterval,
    SamplingPlan,
    TWO_PI,
    evaluate,
    grid,
    intersect,
    region_above,
    shift,
    sup_on_interval,
    translate,
)


class QuadratureError(RuntimeError):
    """Composite quadrature failed to stabilize."""


class StageEmpty(RuntimeError):
    """A stage of the witness staircase produced a set below resolution,
    the numerical analogue of 'a dependence relation is possible here'."""

    def __init__(self, stage: int, message: str = ""):
        self.stage = stage
        super().__init__(message or f"witness set empty at stage {stage}")


@dataclass(frozen=True)
class GaborAtom:
    a: float  # modulation frequency
    b: float  # translation

    def __post_init__(self):
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))


@dataclass(frozen=True)
class DependenceRelation:
    atoms: tuple[GaborAtom, ...]
    coefficients: tuple[complex, ...]
    function: FunctionSpec

    def __post_init__(self):
        if len(self.atoms) != len(self.coefficients):
            raise ValueError("atoms and coefficients must have equal length")
        if len(set(self.atoms)) != len(self.atoms):
            raise ValueError("atoms must be distinct")
        if any(c == 0 for c in self.coefficients):
            raise ValueError("coefficients must be nonzero")
        object.__setattr__(self, "coefficients",
                           tuple(complex(c) for c in self.coefficients))


@dataclass(frozen=True)
class CollapsedRelation:
    shifts: tuple[float, ...]
    polys: tuple[ExpPolynomial, ...]

    def __post_init__(self):
        if len(self.shifts) != len(self.polys):
            raise ValueError("shifts and polynomials must have equal length")
        if any(b >= c for b, c in zip(self.shifts, self.shifts[1:])):
            raise ValueError("shifts must be strictly increasing")


@dataclass(frozen=True)
class IndependenceScore:
    gram: np.ndarray
    sigma_min: float
    sigma_max: float
    verdict: str  # independent | numerically_dependent | inconclusive
    converged: bool = True
    windowed: bool = False


def collapse(rel: DependenceRelation) -> CollapsedRelation:
    """Group atoms by translation; each group becomes one trigonometric
    polynomial u_b(x) = sum of c e^{2 pi i a x} over its modulations."""
    groups: dict[float, list[tuple[complex, float]]] = {}
    for atom, c in zip(rel.atoms, rel.coefficients):
        groups.setdefault(atom.b, []).append((c, atom.a))
    shifts = tuple(sorted(groups))
    polys = tuple(ExpPolynomial.trig(groups[b]) for b in shifts)
    return CollapsedRelation(shifts=shifts, polys=polys)


def expand(coll: CollapsedRelation) -> list[tuple[GaborAtom, complex]]:
    """Inverse of collapse, for round-trip checks."""
    out = []
    for b, u in zip(coll.shifts, coll.polys):
        for t in u.terms:
            out.append((GaborAtom(a=t.frequency.imag / TWO_PI, b=b), t.coefficient))
    return out


# ---------------------------------------------------------------------------
# residuals
# ---------------------------------------------------------------------------

def residual(coll: CollapsedRelation, f: FunctionSpec, plan: SamplingPlan,
             window: RealInterval) -> float:
    """Sup over the window grid of |sum_i u_i(x) f(x - b_i)|."""
    xs = grid(window.lo, window.hi, plan.step)
    acc = np.zeros(xs.shape, dtype=complex)
    for b, u in zip(coll.shifts, coll.polys):
        acc += evaluate(u, xs) * f(xs - b)
    return float(np.max(np.abs(acc)))


def relation_scale(coll: CollapsedRelation, f: FunctionSpec, plan: SamplingPlan,
                   window: RealInterval) -> float:
    """Natural magnitude of the relation: max_i sup|u_i| times sup|f| over the
    shifted evaluation range."""
    sup_u = max(sup_on_interval(u, window, plan)[1] for u in coll.polys)
    xs = grid(window.lo, window.hi, plan.step)
    sup_f = max(float(np.max(np.abs(f(xs - b)))) for b in coll.shifts)
    return sup_u * sup_f


# ---------------------------------------------------------------------------
# Gram matrices
# ---------------------------------------------------------------------------

def _leggauss_nodes(window: RealInterval, n_panels: int, order: int):
    base_x, base_w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(window.lo, window.hi, n_panels + 1)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    xq = (mid[:, None] + half[:, None] * base_x[None, :]).ravel()
    wq = (half[:, None] * base_w[None, :]).ravel()
    return xq, wq


def _gram_once(f: FunctionSpec, atoms: Sequence[GaborAtom],
               window: RealInterval, n_panels: int, order: int) -> np.ndarray:
    xq, wq = _leggauss_nodes(window, n_panels, order)
    phi = np.empty((len(atoms), xq.size), dtype=complex)
    for j, atom in enumerate(atoms):
        phi[j] = np.exp(2j * math.pi * atom.a * xq) * f(xq - atom.b)
    g = (phi * wq) @ phi.conj().T
    return 0.5 * (g + g.conj().T)


def gram_matrix(f: FunctionSpec, atoms: Sequence[GaborAtom],
                window: RealInterval | None = None, order: int = 16,
                tol: float = 1e-12, max_doublings: int = 10,
                independent_threshold: float = 1e-8,
                dependent_threshold: float = 1e-12) -> IndependenceScore:
    """Windowed Gram matrix of the modulated translates with a spectral verdict.

    Composite Gauss-Legendre panels are doubled until every entry moves by
    at most tol; sigma_min / sigma_max > 1e-8 reads as independent, < 1e-12
    as numerically dependent, anything between as inconclusive.
    """
    window = window or f.window
    atoms = tuple(atoms)
    n_panels = 8
    prev = None
    converged = False
    for _ in range(max_doublings):
        g = _gram_once(f, atoms, window, n_panels, order)
        if prev is not None:
            scale = max(1.0, float(np.max(np.abs(g))))
            if float(np.max(np.abs(g - prev))) <= tol * scale:
                converged = True
                break
        prev = g
        n_panels *= 2
    if not converged:
        raise QuadratureError("gram entries failed to stabilize")
    sigmas = np.linalg.svd(g, compute_uv=False)
    smin, smax = float(sigmas[-1]), float(sigmas[0])
    ratio = smin / smax if smax > 0 else 0.0
    if ratio > independent_threshold:
        verdict = "independent"
    elif ratio < dependent_threshold:
        verdict = "numerically_dependent"
    else:
        verdict = "inconclusive"
    return IndependenceScore(gram=g, sigma_min=smin, sigma_max=smax,
                             verdict=verdict, converged=converged,
                             windowed=(f.decay_class == "none"))


# ---------------------------------------------------------------------------
# determinants
# ---------------------------------------------------------------------------

def relation_matrix(coll: CollapsedRelation, f: FunctionSpec,
                    xs: Sequence[float], n: int) -> np.ndarray:
    """The n x n matrix with entries u_j(x_i) f(x_i - b_j)."""
    if n > len(coll.shifts):
        raise ValueError("n exceeds the number of shifts")
    if len(xs) != n:
        raise ValueError("need exactly n sample points")
    m = np.empty((n, n), dtype=complex)
    for i, x in enumerate(xs):
        for j in range(n):
            m[i, j] = evaluate(coll.polys[j], x) * f(x - coll.shifts[j])
    return m


def det_expansion(m: np.ndarray) -> complex:
    """Determinant by signed permutation expansion (exact method, small n)."""
    n = m.shape[0]
    total = 0.0 + 0.0j
    for perm in permutations(range(n)):
        sign = 1
        seen = [False] * n
        for i in range(n):  # parity via cycle decomposition
            if seen[i]:
                continue
            length = 0
            j = i
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                length += 1
            if length % 2 == 0:
                sign = -sign
        term = sign + 0j
        for i in range(n):
            term *= m[i, perm[i]]
        total += term
    return total


def det_Mn(coll: CollapsedRelation, f: FunctionSpec, xs: Sequence[float],
           n: int) -> complex:
    """Determinant of the n x n relation matrix.

    Expansion over permutations up to n = 4, pivoted elimination above.
    """
    m = relation_matrix(coll, f, xs, n)
    if n <= 4:
        return det_expansion(m)
    return complex(np.linalg.det(m))


# ---------------------------------------------------------------------------
# witness sets
# ---------------------------------------------------------------------------

def witness_set(u: ExpPolynomial, m_const: float, shifts: Sequence[float],
                f: FunctionSpec, window: RealInterval,
                plan: SamplingPlan) -> IntervalUnion:
    """{x in window : |u(x) f(x)| > M sum_i |f(x + b_i)|} as an interval union."""
    if m_const <= 0:
        raise ValueError("M must be positive")
    if window.lo < 0:
        raise ValueError("witness windows live in the positive half-line")
    bs = tuple(float(b) for b in shifts)
    if any(b <= 0 for b in bs):
        raise ValueError("shifts must be positive")

    def gap(x):
        lhs = np.abs(evaluate(u, x)) * np.abs(f(x))
        rhs = np.zeros_like(lhs)
        for b in bs:
            rhs += np.abs(f(x + b))
        return lhs - m_const * rhs

    return region_above(gap, window, plan.step)


@dataclass(frozen=True)
class WitnessStage:
    stage: int
    Q: IntervalUnion
    delta: float
    c: float
    witness_measure: float
    sampled_ok: bool
    min_sampled_ratio: float


def _sample_union(rng: np.random.Generator, e: IntervalUnion, size: int) -> np.ndarray:
    lens = np.array([iv.length for iv in e.intervals])
    cum = np.cumsum(lens)
    total = cum[-1]
    picks = rng.random(size) * total
    out = np.empty(size)
    for i, p in enumerate(picks):
        j = int(np.searchsorted(cum, p, side="right"))
        j = min(j, len(lens) - 1)
        prev = cum[j] - lens[j]
        out[i] = e.intervals[j].lo + (p - prev)
    return out


def _union_grid(e: IntervalUnion, step: float) -> np.ndarray:
    parts = [grid(iv.lo, iv.hi, min(step, max(iv.length / 4, 1e-12)))
             for iv in e.intervals]
    return np.concatenate(parts)


def sequential_witness_build(coll: CollapsedRelation, f: FunctionSpec,
                             window: RealInterval, plan: SamplingPlan,
                             n_tuples: int = 200) -> list[WitnessStage]:
    """Stage-by-stage witness construction behind the determinant criterion.

    Stage n+1 takes the witness set of u_{n+1}(. + b_{n+1}) at level
    M = 2 n! U^{n+1} c_n^n / delta_n against the forward shift gaps, keeps its
    upper half by value (any positive-measure subset is allowed here), and
    translates by b_{n+1}.  Each completed stage re-verifies
    |det M_k| >= delta_k on tuples sampled from Q_1 x ... x Q_k.
    """
    if window.lo < 0:
        raise ValueError("the construction runs on the positive half-line")
    shifts_b = coll.shifts
    n_stages = len(shifts_b)
    hull = RealInterval(window.lo + min(shifts_b), window.hi + max(shifts_b))
    u_sup = max(sup_on_interval(u, hull, plan)[1] for u in coll.polys)
    rng = np.random.default_rng(plan.seed)

    stages: list[WitnessStage] = []
    qs: list[IntervalUnion] = []
    delta = math.nan
    c_bound = 0.0

    for k in range(n_stages):
        b_k = shifts_b[k]
        u_shifted = shift(coll.polys[k], b_k)

        if k == 0:
            ys = grid(window.lo, window.hi, plan.step)
            g_vals = np.abs(evaluate(u_shifted, ys)) * np.abs(f(ys))
            peak = float(np.max(g_vals))
            if peak <= 0.0:
                raise StageEmpty(1, "no positive base value for stage 1")
            e_raw = region_above(
                lambda x: np.abs(evaluate(u_shifted, x)) * np.abs(f(x)) - 0.5 * peak,
                window, plan.step)
            e_good = e_raw
            delta = 0.5 * peak
        else:
            m_const = 2.0 * math.factorial(k) * u_sup ** (k + 1) * c_bound ** k / delta
            gaps = tuple(b_k - shifts_b[i] for i in range(k))
            e_raw = witness_set(u_shifted, m_const, gaps, f, window, plan)
            if e_raw.measure < plan.step:
                raise StageEmpty(k + 1,
                                 f"stage {k + 1} witness measure {e_raw.measure:.3g} "
                                 f"below resolution at M = {m_const:.3g}")
            ys = _union_grid(e_raw, plan.step)
            g_vals = np.abs(evaluate(u_shifted, ys)) * np.abs(f(ys))
            peak = float(np.max(g_vals))
            e_good = intersect(e_raw, region_above(
                lambda x: np.abs(evaluate(u_shifted, x)) * np.abs(f(x)) - 0.5 * peak,
                e_raw.span, plan.step))
            if e_good.is_empty:
                e_good = e_raw
            yg = _union_grid(e_good, plan.step)
            g_min = float(np.min(np.abs(evaluate(u_shifted, yg)) * np.abs(f(yg))))
            delta = 0.5 * delta * g_min

        q_k = translate(e_good, b_k)
        qs.append(q_k)
        xs_all = np.concatenate([_union_grid(q, plan.step) for q in qs])
        c_bound = max(c_bound, max(
            float(np.max(np.abs(f(xs_all - b)))) for b in shifts_b))

        sampled_ok = True
        min_ratio = math.inf
        if k >= 1:
            samples = [_sample_union(rng, q, n_tuples) for q in qs]
            for t in range(n_tuples):
                xt = [float(samples[j][t]) for j in range(k + 1)]
                d = abs(det_Mn(coll, f, xt, k + 1))
                ratio = d / delta
                min_ratio = min(min_ratio, ratio)
                if d < delta * (1.0 - 1e-9):
                    sampled_ok = False
        stages.append(WitnessStage(
            stage=k + 1, Q=q_k, delta=delta, c=c_bound,
            witness_measure=e_good.measure, sampled_ok=sampled_ok,
            min_sampled_ratio=min_ratio))
    return stages

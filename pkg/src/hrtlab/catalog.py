"""Catalog of concrete test functions with declared decay classes.

Each entry carries a closed-form vectorized evaluator, a decay-class label,
an evaluation window, and (for exact exponential tails) the tail parameters.
Evaluators are module-level functions bound with functools.partial so that
specs stay picklable for worker pools.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import partial
from typing import Callable, Sequence

import numpy as np

from .exppoly import EXP_GUARD, IntervalUnion, RealInterval, grid

DECAY_CLASSES = frozenset({
    "compact_support", "gaussian", "xlogx", "superexponential",
    "exponential_tail", "none",
})

# decay-class weight functions are evaluated for x >= this floor only;
# the x log x functional is meaningless near the origin
DECAY_X_MIN = 2.0


@dataclass(frozen=True)
class TailParams:
    """Exact exponential tail: f(x) = c e^{a x} for x > b0 (b0 None when the
    closed form holds on the whole window)."""
    a: complex
    c: complex
    b0: float | None


@dataclass(frozen=True)
class FunctionSpec:
    name: str
    evaluator: Callable[[np.ndarray], np.ndarray]
    decay_class: str
    window: RealInterval
    support_hint: IntervalUnion | None = None  # None means all of R
    tail: TailParams | None = None

    def __post_init__(self):
        if self.decay_class not in DECAY_CLASSES:
            raise ValueError(f"unknown decay class {self.decay_class!r}")

    def __call__(self, x):
        arr = np.asarray(x, dtype=float)
        out = self.evaluator(arr)
        if arr.ndim == 0:
            return complex(out)
        return out


# ---------------------------------------------------------------------------
# evaluators
# ---------------------------------------------------------------------------

def _gaussian(x):
    return np.exp(-math.pi * x * x)


def _poly_gauss(x, coeffs):
    return np.polyval(coeffs, x) * np.exp(-x * x)


def _xlogx(x):
    ax = np.abs(x)
    return np.exp(-ax * np.log1p(ax))


def _two_sided_exp(x):
    return np.exp(-np.abs(x))


def _one_sided_exp(x):
    return np.where(x > 0, np.exp(-np.clip(x, 0, None)), 0.0)


def _full_exp(x):
    return np.exp(-x)


def _bump(x, center, radius):
    t = (x - center) / radius
    out = np.zeros_like(np.asarray(t, dtype=float))
    inside = np.abs(t) < 1.0
    ti = t[inside]
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - ti * ti))
    return out


def _polynomial_eps(x, coeffs, epsilon):
    return np.polyval(coeffs, x) * np.exp(-np.abs(x) ** (1.0 + epsilon))


def _piecewise(x, pieces):
    """pieces: tuple of (lo, hi, poly_coeffs, exp_poly_coeffs); the value on
    [lo, hi] is p(x) * exp(q(x)), zero elsewhere."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    for lo, hi, p, q in pieces:
        m = (x >= lo) & (x <= hi)
        if np.any(m):
            out[m] = np.polyval(p, x[m]) * np.exp(np.polyval(q, x[m]))
    return out


_L2_WINDOW = RealInterval(-40.0, 40.0)


def _make_gaussian():
    return FunctionSpec("gaussian", _gaussian, "gaussian", _L2_WINDOW)


def _make_poly_gauss(coeffs=(1.0, 0.0, 1.0)):
    return FunctionSpec("poly_gauss", partial(_poly_gauss, coeffs=tuple(coeffs)),
                        "gaussian", _L2_WINDOW)


def _make_xlogx():
    return FunctionSpec("xlogx", _xlogx, "xlogx", _L2_WINDOW)


def _make_two_sided_exp():
    return FunctionSpec("two_sided_exp", _two_sided_exp, "exponential_tail",
                        _L2_WINDOW, tail=TailParams(a=-1.0, c=1.0, b0=0.0))


def _make_one_sided_exp():
    return FunctionSpec("one_sided_exp", _one_sided_exp, "exponential_tail",
                        _L2_WINDOW,
                        support_hint=IntervalUnion.of([(0.0, _L2_WINDOW.hi)]),
                        tail=TailParams(a=-1.0, c=1.0, b0=0.0))


def _make_full_exp():
    # e^{-x} on a window; translates are exactly proportional, so this entry
    # drives every known-dependent test
    return FunctionSpec("full_exp", _full_exp, "none", RealInterval(0.0, 40.0),
                        tail=TailParams(a=-1.0, c=1.0, b0=None))


def _make_bump(center=2.5, radius=0.5):
    lo, hi = center - radius, center + radius
    return FunctionSpec("bump", partial(_bump, center=center, radius=radius),
                        "compact_support", RealInterval(lo - 1.0, hi + 1.0),
                        support_hint=IntervalUnion.of([(lo, hi)]))


def _make_polynomial_eps(coeffs=(1.0, 0.0, 0.0), epsilon=1.0):
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    return FunctionSpec("polynomial_eps",
                        partial(_polynomial_eps, coeffs=tuple(coeffs),
                                epsilon=float(epsilon)),
                        "xlogx", _L2_WINDOW)


_BUILTINS: dict[str, Callable[..., FunctionSpec]] = {
    "gaussian": _make_gaussian,
    "poly_gauss": _make_poly_gauss,
    "xlogx": _make_xlogx,
    "two_sided_exp": _make_two_sided_exp,
    "one_sided_exp": _make_one_sided_exp,
    "full_exp": _make_full_exp,
    "bump": _make_bump,
    "polynomial_eps": _make_polynomial_eps,
}


def builtin(name: str, **params) -> FunctionSpec:
    """Look up a catalog entry by name; some entries accept parameters
    (poly_gauss/polynomial_eps coefficients, bump geometry)."""
    try:
        factory = _BUILTINS[name]
    except KeyError:
        raise KeyError(f"unknown catalog function {name!r}; "
                       f"available: {sorted(_BUILTINS)}") from None
    return factory(**params)


def catalog_names() -> list[str]:
    return sorted(_BUILTINS)


def custom_piecewise(name: str, pieces: Sequence[Sequence], window=None) -> FunctionSpec:
    """Config-defined function: a list of [lo, hi, poly_coeffs, exp_poly_coeffs]
    pieces, each meaning p(x) * exp(q(x)) on [lo, hi]."""
    parsed = tuple((float(p[0]), float(p[1]), tuple(map(float, p[2])),
                    tuple(map(float, p[3]))) for p in pieces)
    hull = RealInterval(min(p[0] for p in parsed), max(p[1] for p in parsed))
    win = RealInterval(*window) if window is not None else hull
    return FunctionSpec(name, partial(_piecewise, pieces=parsed), "none", win,
                        support_hint=IntervalUnion.of(
                            [(p[0], p[1]) for p in parsed]))


# ---------------------------------------------------------------------------
# decay verification
# ---------------------------------------------------------------------------

_WEIGHT_EXPONENTS = {
    "gaussian": lambda c, x: c * x * x,
    "xlogx": lambda c, x: c * x * np.log(x),
    "superexponential": lambda c, x: c * x,
}


@dataclass(frozen=True)
class DecayReport:
    function: str
    decay_class: str
    c_values: tuple[float, ...]
    window_maxima: dict[float, tuple[float, ...]]
    verdicts: dict[float, bool]
    verdict: bool


def verify_decay(f: FunctionSpec, c_values: Sequence[float], x_max: float,
                 decay_class: str | None = None, n_windows: int = 3,
                 points_per_window: int = 400) -> DecayReport:
    """Evaluate |f(x)| e^{w_c(x)} over dyadic tail windows of [0, x_max].

    The weight w_c is picked by the claimed decay class (c x^2, c x log x, or
    c x).  The per-c verdict is true when the window maxima strictly decrease
    toward x_max, i.e. the weighted function still dies out.
    """
    cls = decay_class or f.decay_class
    if cls not in _WEIGHT_EXPONENTS:
        raise ValueError(f"decay class {cls!r} has no tail weight")
    weight = _WEIGHT_EXPONENTS[cls]
    if any(c <= 0 for c in c_values):
        raise ValueError("c values must be positive")

    edges = [x_max / 2 ** j for j in range(n_windows, -1, -1)]
    maxima: dict[float, tuple[float, ...]] = {}
    verdicts: dict[float, bool] = {}
    for c in c_values:
        per_window = []
        for lo, hi in zip(edges, edges[1:]):
            lo = max(lo, DECAY_X_MIN)
            if hi <= lo:
                raise ValueError("x_max too small for the tail windows")
            xs = np.linspace(lo, hi, points_per_window)
            expo = weight(c, xs)
            if np.max(expo) > EXP_GUARD:
                raise OverflowError("decay weight exponent exceeds guard")
            per_window.append(float(np.max(np.abs(f(xs)) * np.exp(expo))))
        maxima[c] = tuple(per_window)
        verdicts[c] = all(b < a for a, b in zip(per_window, per_window[1:]))
    return DecayReport(f.name, cls, tuple(float(c) for c in c_values),
                       maxima, verdicts, all(verdicts.values()))


# ---------------------------------------------------------------------------
# quasi-monotonicity
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuasiMonotoneReport:
    b_values: tuple[float, ...]
    C_estimates: tuple[float, ...]
    verdict: bool
    stable: tuple[bool, ...] = ()
    zero_warnings: tuple[str, ...] = ()


def _ratio_sup(f: FunctionSpec, b: float, xs: np.ndarray) -> tuple[float, bool, str | None]:
    num = np.abs(f(xs + b))
    den = np.abs(f(xs))
    zero = den == 0.0
    warning = None
    if np.any(zero):
        if np.any(num[zero] > 0.0):
            return math.inf, False, f"b={b}: |f| vanishes where |f(.+b)| > 0"
        warning = f"b={b}: zero/zero grid points skipped"
    valid = ~zero
    if not np.any(valid):
        return math.inf, False, f"b={b}: f vanishes on the whole grid"
    return float(np.max(num[valid] / den[valid])), True, warning


def quasi_monotone_scan(f: FunctionSpec, b_values: Sequence[float],
                        x_grid: Sequence[float],
                        stability_tol: float = 0.05) -> QuasiMonotoneReport:
    """Estimate C(b) = sup_{x>0} |f(x+b)| / |f(x)| over the given grid.

    The estimate is recomputed on a midpoint-refined grid; a b passes when
    both suprema are finite and the refinement moves the value by at most
    stability_tol relative.  Division by zero at a grid point is reported,
    not fatal, unless the numerator is positive there.
    """
    if any(b <= 0 for b in b_values):
        raise ValueError("b values must be positive")
    xs = np.asarray(sorted(x_grid), dtype=float)
    if xs[0] < 0:
        raise ValueError("x grid must sit in x >= 0")
    mids = 0.5 * (xs[:-1] + xs[1:])
    fine = np.sort(np.concatenate([xs, mids]))

    cs, ok, stable, warnings = [], [], [], []
    for b in b_values:
        c0, finite0, w0 = _ratio_sup(f, b, xs)
        c1, finite1, w1 = _ratio_sup(f, b, fine)
        for w in (w0, w1):
            if w:
                warnings.append(w)
        is_stable = (finite0 and finite1
                     and abs(c1 - c0) <= stability_tol * max(c0, c1))
        cs.append(c1 if finite1 else math.inf)
        stable.append(is_stable)
        ok.append(finite0 and finite1 and is_stable)
    return QuasiMonotoneReport(
        b_values=tuple(float(b) for b in b_values),
        C_estimates=tuple(cs),
        verdict=all(ok),
        stable=tuple(stable),
        zero_warnings=tuple(dict.fromkeys(warnings)))

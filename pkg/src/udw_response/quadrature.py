"""Adaptive complex-valued quadrature with error estimates.

The engine is an adaptive Gauss-Kronrod (7/15) bisection scheme.  Two
hints tune it for the integrands that show up in the response formulas:

* ``oscillation``: the caller supplies the known local angular frequency
  (frequencies here are always known analytically), and the initial
  panelization keeps panel widths below a fraction of one period.
* ``singularity``: an integrable logarithmic endpoint singularity is
  declared as ``"left"`` or ``"right"``; the affected end is integrated
  under the cubic substitution x = x0 + w t^3 which regularizes log and
  mild algebraic endpoint behaviour.

Results are deterministic: panels are totalled in interval order with
compensated summation, so identical inputs give bit-identical output.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, replace

import numpy as np


class ConvergenceError(RuntimeError):
    """A quadrature or extrapolation did not reach its tolerance."""


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and knobs shared by every integral in the package.

    ``eps_regulator`` is the starting value (in units of 1/m) of the
    short-distance regulator used by the vacuum two-point function
    oracle; ``eps_extrapolation_levels`` is the number of halvings used
    when extrapolating it to zero.
    """

    rel_tol: float = 1e-9
    abs_tol: float = 1e-12
    max_subdivisions: int = 2000
    oscillation_panels_per_period: int = 8
    eps_regulator: float = 1e-6
    eps_extrapolation_levels: int = 3

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("QuadratureSpec: tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("QuadratureSpec: max_subdivisions must be >= 1")
        if self.oscillation_panels_per_period < 1:
            raise ValueError("QuadratureSpec: oscillation_panels_per_period must be >= 1")
        if not (self.eps_regulator > 0):
            raise ValueError("QuadratureSpec: eps_regulator must be positive")
        if self.eps_extrapolation_levels < 1:
            raise ValueError("QuadratureSpec: eps_extrapolation_levels must be >= 1")


@dataclass(frozen=True)
class IntegralResult:
    value: complex
    error_estimate: float
    subdivisions_used: int
    converged: bool


# 15-point Kronrod / 7-point Gauss pair (standard QUADPACK constants).
_XGK_HALF = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
])
_WGK_HALF = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG_HALF = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

_XGK = np.concatenate([-_XGK_HALF[:7], [0.0], _XGK_HALF[6::-1]])
_WGK = np.concatenate([_WGK_HALF[:7], [_WGK_HALF[7]], _WGK_HALF[6::-1]])
_WG = np.zeros(15)
_WG[[1, 3, 5, 7, 9, 11, 13]] = np.concatenate([_WG_HALF[:3], [_WG_HALF[3]], _WG_HALF[2::-1]])

_EPS = np.finfo(float).eps
_UFLOW = np.finfo(float).tiny


def _map_nodes(lo, hi, seg):
    """Map GK nodes on [lo, hi] of the segment parameter to x and Jacobian."""
    half = 0.5 * (hi - lo)
    t = 0.5 * (hi + lo) + half * _XGK
    kind = seg[0]
    if kind == "id":
        return t, t, np.ones_like(t)
    _, x0, width, sign = seg
    x = x0 + sign * width * t**3
    # t runs away from the singular endpoint on both maps, so the
    # orientation flip of the sign=-1 map cancels its negative dx/dt.
    jac = 3.0 * width * t * t
    return t, x, jac


def _panel(f, lo, hi, seg):
    """One GK15 evaluation on a segment-parameter interval [lo, hi]."""
    t, x, jac = _map_nodes(lo, hi, seg)
    live = x != seg[1] if seg[0] != "id" else slice(None)
    fv = np.zeros(15, dtype=complex)
    fx = np.asarray(f(x[live]), dtype=complex)
    fv[live] = fx * jac[live]

    half = 0.5 * (hi - lo)
    if not np.all(np.isfinite(fv)):
        # Unresolvable point values: report a huge (finite) error so the
        # panel keeps getting split and never poisons the running totals.
        return complex(np.sum(np.where(np.isfinite(fv), fv, 0.0)) * half), 1e200

    resk = np.dot(_WGK, fv)
    resg = np.dot(_WG, fv)
    resabs = float(np.dot(_WGK, np.abs(fv)))
    resasc = float(np.dot(_WGK, np.abs(fv - 0.5 * resk)))
    value = resk * half
    err = abs(resk - resg) * half
    resabs *= half
    resasc *= half
    if resasc != 0.0 and err != 0.0:
        err = resasc * min(1.0, (200.0 * err / resasc) ** 1.5)
    if resabs > _UFLOW / (50.0 * _EPS):
        err = max(_EPS * 50.0 * resabs, err)
    return value, err


def _initial_breaks(a, b, spec, oscillation):
    if oscillation is None or oscillation <= 0.0:
        return [a, b]
    width = (2.0 * np.pi / oscillation) / spec.oscillation_panels_per_period
    n = int(math.ceil((b - a) / width))
    n = max(1, min(n, max(1, int(0.8 * spec.max_subdivisions))))
    return list(np.linspace(a, b, n + 1))


def integrate_1d(f, a, b, spec=None, *, singularity=None, oscillation=None,
                 vectorized=True):
    """Adaptively integrate a complex-valued f over [a, b].

    ``singularity`` declares an integrable endpoint singularity ("left"
    or "right"); ``oscillation`` is the known angular frequency of the
    integrand, used to size the initial panels.  With ``vectorized``
    False, f is called one float at a time.
    """
    spec = spec or QuadratureSpec()
    if b < a:
        raise ValueError("integrate_1d: requires a <= b")
    if singularity not in (None, "left", "right"):
        raise ValueError("integrate_1d: singularity must be None, 'left' or 'right'")
    if a == b:
        return IntegralResult(0.0 + 0.0j, 0.0, 0, True)
    if not vectorized:
        g = f
        f = lambda xs: np.array([g(float(x)) for x in np.atleast_1d(xs)], dtype=complex)

    # Segment list: (kind, ...) with its own parameter interval.
    segments = []

    def _add_plain(lo, hi):
        breaks = _initial_breaks(lo, hi, spec, oscillation)
        for left, right in zip(breaks[:-1], breaks[1:]):
            segments.append((("id",), left, right))

    if singularity is None:
        _add_plain(a, b)
    else:
        window = b - a
        if oscillation is not None and oscillation > 0.0:
            window = min(window, (2.0 * np.pi / oscillation) / spec.oscillation_panels_per_period)
        if singularity == "left":
            segments.append((("cube", a, window, 1.0), 0.0, 1.0))
            rest = (a + window, b)
        else:
            segments.append((("cube", b, window, -1.0), 0.0, 1.0))
            rest = (a, b - window)
        if rest[1] > rest[0]:
            _add_plain(rest[0], rest[1])

    heap = []
    done = []  # panels too narrow to split further
    counter = 0
    total = 0.0 + 0.0j
    total_err = 0.0
    nused = 0
    for iseg, (seg, lo, hi) in enumerate(segments):
        value, err = _panel(f, lo, hi, seg)
        total += value
        total_err += err
        nused += 1
        heapq.heappush(heap, (-err, counter, iseg, lo, hi, value, err))
        counter += 1

    def _converged():
        return total_err <= max(spec.rel_tol * abs(total), spec.abs_tol)

    while heap and not _converged() and nused < spec.max_subdivisions:
        neg_err, _, iseg, lo, hi, value, err = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            done.append((iseg, lo, hi, value, err))
            continue
        seg = segments[iseg][0]
        v1, e1 = _panel(f, lo, mid, seg)
        v2, e2 = _panel(f, mid, hi, seg)
        total += (v1 + v2) - value
        total_err += (e1 + e2) - err
        nused += 1
        heapq.heappush(heap, (-e1, counter, iseg, lo, mid, v1, e1))
        counter += 1
        heapq.heappush(heap, (-e2, counter, iseg, mid, hi, v2, e2))
        counter += 1

    panels = done + [(iseg, lo, hi, value, err) for (_, _, iseg, lo, hi, value, err) in heap]
    panels.sort(key=lambda p: (p[0], p[1]))
    value = complex(math.fsum(p[3].real for p in panels),
                    math.fsum(p[3].imag for p in panels))
    err = math.fsum(p[4] for p in panels)
    converged = err <= max(spec.rel_tol * abs(value), spec.abs_tol)
    return IntegralResult(value, err, nused, converged)


def integrate_2d(f, a, b, c, d, spec=None, *, oscillation_x=None, oscillation_y=None,
                 diagonal_singularity=False, vectorized_y=True):
    """Iterated adaptive integration of f(x, y) over [a, b] x [c, d].

    With ``diagonal_singularity`` the inner integral is split at y = x,
    which handles kernels that are log-singular (or regularized but
    sharply peaked) on the diagonal.
    """
    spec = spec or QuadratureSpec()
    if b < a or d < c:
        raise ValueError("integrate_2d: requires a <= b and c <= d")
    if (b == a) or (d == c):
        return IntegralResult(0.0 + 0.0j, 0.0, 0, True)

    inner_spec = replace(spec, rel_tol=0.1 * spec.rel_tol, abs_tol=0.1 * spec.abs_tol)
    inner_stats = {"err": [], "n": 0, "all_converged": True}

    def g(x):
        x = float(x)
        fy = lambda ys: f(x, ys)
        if diagonal_singularity and c < x < d:
            left = integrate_1d(fy, c, x, inner_spec, singularity="right",
                                oscillation=oscillation_y, vectorized=vectorized_y)
            right = integrate_1d(fy, x, d, inner_spec, singularity="left",
                                 oscillation=oscillation_y, vectorized=vectorized_y)
            res_val = left.value + right.value
            res_err = left.error_estimate + right.error_estimate
            res_n = left.subdivisions_used + right.subdivisions_used
            res_ok = left.converged and right.converged
        else:
            res = integrate_1d(fy, c, d, inner_spec, oscillation=oscillation_y,
                               vectorized=vectorized_y)
            res_val, res_err = res.value, res.error_estimate
            res_n, res_ok = res.subdivisions_used, res.converged
        inner_stats["err"].append(res_err)
        inner_stats["n"] += res_n
        inner_stats["all_converged"] &= res_ok
        return res_val

    outer = integrate_1d(g, a, b, spec, oscillation=oscillation_x, vectorized=False)
    mean_inner = math.fsum(inner_stats["err"]) / max(1, len(inner_stats["err"]))
    err = outer.error_estimate + (b - a) * mean_inner
    converged = (outer.converged and inner_stats["all_converged"]
                 and err <= max(spec.rel_tol * abs(outer.value), spec.abs_tol))
    return IntegralResult(outer.value, err, outer.subdivisions_used + inner_stats["n"],
                          converged)


def extrapolate_eps(g, spec=None, *, noise_floor=0.0):
    """Polynomial (Neville) extrapolation of g(eps) to eps -> 0+.

    Evaluates g on the geometric ladder eps_regulator * 2^-k and returns
    the extrapolated limit; raises ConvergenceError when successive
    extrapolants do not settle.  ``noise_floor`` is the known evaluation
    noise of g itself (for example its quadrature error estimate);
    extrapolant differences at or below it count as settled.
    """
    spec = spec or QuadratureSpec()
    n = spec.eps_extrapolation_levels + 1
    eps = [spec.eps_regulator * 0.5**k for k in range(n)]
    values = [complex(g(e)) for e in eps]
    return extrapolate_values(eps, values, noise_floor=noise_floor)


def extrapolate_values(eps, values, *, noise_floor=0.0):
    """Neville extrapolation to zero of precomputed (eps, value) pairs."""
    n = len(eps)
    if n < 2 or len(values) != n:
        raise ValueError("extrapolate_values: need matching lists of at least 2 samples")
    tbl = [complex(v) for v in values]

    scale = max(abs(v) for v in tbl) + _UFLOW
    diag = [tbl[n - 1]]  # last-row Neville sequence, starting from the smallest eps
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            tbl[i] = (eps[i] * tbl[i - 1] - eps[i - j] * tbl[i]) / (eps[i] - eps[i - j])
        diag.append(tbl[n - 1])
    diffs = [abs(diag[k] - diag[k - 1]) for k in range(1, n)]
    # A genuine expansion in eps contracts by >= 2x per column on a
    # ratio-2 ladder; anything contracting slower than ~2x is not
    # settling and gets reported rather than silently returned.
    floor = 1000.0 * _EPS * scale + abs(noise_floor)
    if len(diffs) >= 2 and diffs[-1] > 0.45 * diffs[-2] + floor:
        raise ConvergenceError(
            f"extrapolate_eps: extrapolants are not settling (last differences "
            f"{diffs[-2]:.3e}, {diffs[-1]:.3e})"
        )
    return diag[-1]

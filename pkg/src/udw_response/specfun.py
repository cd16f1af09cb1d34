"""Self-contained special functions used by the response integrands.

Everything the physics kernels need lives here, with no dependency on
scipy: Bessel J0 and Y0 on the real axis (Cephes-style rational
approximations), the modified Bessel K0 on the closed right half-plane,
the Faddeeva function w(z) = exp(-z^2) erfc(-iz), the complementary
error function for arbitrary complex argument, and the exponential
integral of order 1/2,

    E_{1/2}(z) = int_1^inf exp(-z t) / sqrt(t) dt = sqrt(pi/z) erfc(sqrt(z)).

All functions accept scalars or numpy arrays, are pure, and reject
non-finite input.
"""

from __future__ import annotations

import numpy as np

EULER_GAMMA = 0.5772156649015329

_SQ2OPI = np.sqrt(2.0 / np.pi)
_PIO4 = np.pi / 4.0
_TWOOPI = 2.0 / np.pi


class SpecialFunctionDomainError(ValueError):
    """Argument outside the supported domain of a special function."""


# ---------------------------------------------------------------------------
# Cephes double-precision rational approximations for J0 and Y0.
# Coefficient tables are the classic Cephes ones (public domain).
# ---------------------------------------------------------------------------

_RP = np.array([
    -4.79443220978201773821e9,
    1.95617491946556577543e12,
    -2.49248344360967716204e14,
    9.70862251047306323952e15,
])
_RQ = np.array([  # implicit leading 1.0
    4.99563147152651017219e2,
    1.73785401676374683123e5,
    4.84409658339962045305e7,
    1.11855537045356834862e10,
    2.11277520115489217587e12,
    3.10518229857422583814e14,
    3.18121955943204943306e16,
    1.71086294081043136091e18,
])
_PP = np.array([
    7.96936729297347051624e-4,
    8.28352392107440799803e-2,
    1.23953371646414299388e0,
    5.44725003058768775090e0,
    8.74716500199817011941e0,
    5.30324038235394892183e0,
    9.99999999999999997821e-1,
])
_PQ = np.array([
    9.24408810558863637013e-4,
    8.56288474354474431428e-2,
    1.25352743901058953537e0,
    5.47097740330417105182e0,
    8.76190883237069594232e0,
    5.30605288235394617618e0,
    1.00000000000000000218e0,
])
_QP = np.array([
    -1.13663838898469149931e-2,
    -1.28252718670509318512e0,
    -1.95539544257735972385e1,
    -9.32060152123768231369e1,
    -1.77681167980488050595e2,
    -1.47077505154951170175e2,
    -5.14105326766599330220e1,
    -6.05014350600728481186e0,
])
_QQ = np.array([  # implicit leading 1.0
    6.43178256118178023184e1,
    8.56430025976980587198e2,
    3.88240183605401609683e3,
    7.24046774195652478189e3,
    5.93072701187316984827e3,
    2.06209331660327847417e3,
    2.42005740240291393179e2,
])
_YP = np.array([
    1.55924367855235737965e4,
    -1.46639295903971606143e7,
    5.43526477051876500413e9,
    -9.82136065717911466409e11,
    8.75906394395366999549e13,
    -3.46628303384729719441e15,
    4.42733268572569800351e16,
    -1.84950800436986690637e16,
])
_YQ = np.array([  # implicit leading 1.0
    1.04128353664259848412e3,
    6.26107330137134956842e5,
    2.68919633393814121987e8,
    8.64002487103935000337e10,
    2.02979612750105546709e13,
    3.17157752842975028269e15,
    2.50596256172653059228e17,
])
_DR1 = 5.78318596294678452118e0
_DR2 = 3.04712623436620863991e1


def _polevl(x, coefs):
    """Horner evaluation of a polynomial with the given coefficients."""
    result = np.full_like(np.asarray(x, dtype=float), coefs[0])
    for c in coefs[1:]:
        result = result * x + c
    return result


def _p1evl(x, coefs):
    """Horner evaluation with an implicit leading coefficient of 1."""
    result = np.asarray(x, dtype=float) + coefs[0]
    for c in coefs[1:]:
        result = result * x + c
    return result


def _as_finite_real(x, name):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise SpecialFunctionDomainError(f"{name}: input must be finite")
    return arr


def bessel_j0(x):
    """Bessel function of the first kind, order zero, for real x >= 0."""
    arr = _as_finite_real(x, "bessel_j0")
    if np.any(arr < 0.0):
        raise SpecialFunctionDomainError("bessel_j0: argument must be >= 0")
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    out = np.empty_like(arr)

    small = arr <= 5.0
    if np.any(small):
        xs = arr[small]
        z = xs * xs
        p = (z - _DR1) * (z - _DR2) * _polevl(z, _RP) / _p1evl(z, _RQ)
        tiny = xs < 1e-5
        if np.any(tiny):
            p = np.where(tiny, 1.0 - z / 4.0, p)
        out[small] = p
    large = ~small
    if np.any(large):
        xl = arr[large]
        w = 5.0 / xl
        z = 25.0 / (xl * xl)
        p = _polevl(z, _PP) / _polevl(z, _PQ)
        q = _polevl(z, _QP) / _p1evl(z, _QQ)
        xn = xl - _PIO4
        out[large] = (p * np.cos(xn) - w * q * np.sin(xn)) * _SQ2OPI / np.sqrt(xl)

    return float(out[0]) if scalar else out


def bessel_y0(x):
    """Bessel function of the second kind, order zero, for real x > 0."""
    arr = _as_finite_real(x, "bessel_y0")
    if np.any(arr <= 0.0):
        raise SpecialFunctionDomainError("bessel_y0: argument must be > 0")
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    out = np.empty_like(arr)

    small = arr <= 5.0
    if np.any(small):
        xs = arr[small]
        z = xs * xs
        w = _polevl(z, _YP) / _p1evl(z, _YQ)
        w = w + _TWOOPI * np.log(xs) * bessel_j0(xs)
        out[small] = w
    large = ~small
    if np.any(large):
        xl = arr[large]
        w = 5.0 / xl
        z = 25.0 / (xl * xl)
        p = _polevl(z, _PP) / _polevl(z, _PQ)
        q = _polevl(z, _QP) / _p1evl(z, _QQ)
        xn = xl - _PIO4
        out[large] = (p * np.sin(xn) + w * q * np.cos(xn)) * _SQ2OPI / np.sqrt(xl)

    return float(out[0]) if scalar else out


# ---------------------------------------------------------------------------
# K0 on the closed right half-plane.
#
# Small |z|: the logarithmic power series
#     K0(z) = -(log(z/2) + gamma) I0(z) + sum_k H_k (z^2/4)^k / (k!)^2.
# Larger |z|: the rotated-contour Laplace representation.  Starting from
#     K0(z) = exp(-z) int_0^inf 2 exp(-z s^2) / sqrt(s^2 + 2) ds
# and turning the path by theta = -arg(z)/2 makes the exponent real:
#     K0(z) = (2 exp(-z + i theta) / sqrt|z|)
#             int_0^inf exp(-u^2) / sqrt(2 + exp(2 i theta) u^2 / |z|) du.
# The integrand is smooth and Gaussian-decaying for |arg z| <= pi/2, so a
# fixed composite Gauss-Legendre rule reaches machine precision.
# ---------------------------------------------------------------------------

_K0_SERIES_RADIUS = 3.5
_K0_SERIES_TERMS = 30


def _build_k0_nodes():
    edges = np.array([0.0, 0.8, 1.6, 2.4, 3.2, 4.2, 5.5, 7.0])
    xg, wg = np.polynomial.legendre.leggauss(20)
    nodes = []
    weights = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        half = 0.5 * (hi - lo)
        mid = 0.5 * (hi + lo)
        nodes.append(mid + half * xg)
        weights.append(half * wg)
    nodes = np.concatenate(nodes)
    weights = np.concatenate(weights)
    return nodes, weights * np.exp(-nodes * nodes)


_K0_NODES, _K0_WEIGHTS = _build_k0_nodes()


def _k0_series(z):
    q = 0.25 * z * z
    term = np.ones_like(z)
    i0 = np.ones_like(z)
    hsum = np.zeros_like(z)
    h = 0.0
    for k in range(1, _K0_SERIES_TERMS + 1):
        term = term * q / (k * k)
        h += 1.0 / k
        i0 = i0 + term
        hsum = hsum + h * term
    return -(np.log(0.5 * z) + EULER_GAMMA) * i0 + hsum


def _k0_contour(z):
    absz = np.abs(z)
    theta = -0.5 * np.angle(z)
    rot = np.exp(2j * theta)
    g = 1.0 / np.sqrt(2.0 + rot[:, None] * (_K0_NODES * _K0_NODES)[None, :] / absz[:, None])
    integral = g @ _K0_WEIGHTS
    return 2.0 * np.exp(-z + 1j * theta) / np.sqrt(absz) * integral


def bessel_k0_complex(z):
    """Modified Bessel function K0 for complex z with Re z >= 0, z != 0.

    Principal branch.  Near z = 0 the value behaves as -log(z/2) - gamma.
    """
    arr = np.asarray(z, dtype=complex)
    if not np.all(np.isfinite(arr)):
        raise SpecialFunctionDomainError("bessel_k0_complex: input must be finite")
    if np.any(arr == 0):
        raise SpecialFunctionDomainError("bessel_k0_complex: K0 diverges at z = 0")
    if np.any(arr.real < 0.0):
        raise SpecialFunctionDomainError("bessel_k0_complex: Re z must be >= 0")
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    out = np.empty_like(arr)

    small = np.abs(arr) < _K0_SERIES_RADIUS
    if np.any(small):
        out[small] = _k0_series(arr[small])
    if np.any(~small):
        out[~small] = _k0_contour(arr[~small])

    return complex(out[0]) if scalar else out


# ---------------------------------------------------------------------------
# Faddeeva function on the closed upper half-plane (Weideman's rational
# approximation; J.A.C. Weideman, SIAM J. Numer. Anal. 31 (1994) 1497).
# ---------------------------------------------------------------------------

_WEIDEMAN_N = 48


def _weideman_coefficients(n):
    m = 2 * n
    k = np.arange(-m + 1, m)
    length = np.sqrt(n / np.sqrt(2.0))
    theta = k * np.pi / m
    t = length * np.tan(0.5 * theta)
    f = np.zeros(2 * m)
    f[1:] = np.exp(-t * t) * (length * length + t * t)
    a = np.real(np.fft.fft(np.fft.fftshift(f))) / (2.0 * m)
    return length, a[1:n + 1][::-1]


_WEIDEMAN_L, _WEIDEMAN_A = _weideman_coefficients(_WEIDEMAN_N)


def faddeeva_w(z):
    """Faddeeva function w(z) = exp(-z^2) erfc(-iz) for Im z >= 0."""
    arr = np.asarray(z, dtype=complex)
    if not np.all(np.isfinite(arr)):
        raise SpecialFunctionDomainError("faddeeva_w: input must be finite")
    if np.any(arr.imag < 0.0):
        raise SpecialFunctionDomainError("faddeeva_w: Im z must be >= 0")
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)

    lz = _WEIDEMAN_L - 1j * arr
    big_z = (_WEIDEMAN_L + 1j * arr) / lz
    p = np.polyval(_WEIDEMAN_A, big_z)
    out = 2.0 * p / (lz * lz) + (1.0 / np.sqrt(np.pi)) / lz

    return complex(out[0]) if scalar else out


def erfc_complex(z):
    """Complementary error function for arbitrary finite complex z.

    Uses erfc(z) = exp(-z^2) w(iz) on Re z >= 0 and the reflection
    erfc(-z) = 2 - erfc(z) elsewhere.  Raises OverflowError when the
    intermediate exp(-z^2) exceeds double range (|Im z|^2 - |Re z|^2
    beyond ~709), instead of silently saturating.
    """
    arr = np.asarray(z, dtype=complex)
    if not np.all(np.isfinite(arr)):
        raise SpecialFunctionDomainError("erfc_complex: input must be finite")
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)

    flipped = arr.real < 0.0
    zr = np.where(flipped, -arr, arr)
    exponent = zr.imag * zr.imag - zr.real * zr.real
    if np.any(exponent > 709.0):
        raise OverflowError(
            "erfc_complex: exp(-z^2) overflows double precision for this argument"
        )
    vals = np.exp(-zr * zr) * faddeeva_w(1j * zr)
    out = np.where(flipped, 2.0 - vals, vals)

    return complex(out[0]) if scalar else out


def exp_integral_half(z):
    """Exponential integral of order 1/2 for complex z != 0.

    E_{1/2}(z) = sqrt(pi)/sqrt(z) * erfc(sqrt(z)) with the principal
    square root.  Diverges at z = 0.
    """
    arr = np.asarray(z, dtype=complex)
    if not np.all(np.isfinite(arr)):
        raise SpecialFunctionDomainError("exp_integral_half: input must be finite")
    if np.any(arr == 0):
        raise SpecialFunctionDomainError("exp_integral_half: E_1/2 diverges at z = 0")
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)

    root = np.sqrt(arr)
    out = np.sqrt(np.pi) / root * erfc_complex(root)

    return complex(out[0]) if scalar else out

"""Field-theory kernels pulled back to the detector worldline.

The detector sits at rest at the spatial origin, x_D(tau) = (tau, 0).
The field state is a non-relativistic single-particle Gaussian wave
packet of a massive scalar in 1+1 dimensions, characterized by the mass
m, momentum width sigma, initial center x0 and mean momentum k0.  All
quantities are nondimensionalized in units of sigma (sigma = 1 unless
stated otherwise): masses and momenta in sigma, times and positions in
1/sigma.

Two-point functions split into a vacuum piece

    W_v(tau, tau') = K0(m [eps + i (tau - tau')]) / (2 pi)

and a matter piece W_m which factorizes as

    W_m(tau, tau') = C [A(tau) conj(A(tau')) + A(tau') conj(A(tau))]

with a real positive constant C and a single complex amplitude A(tau).
The factorized form is what makes the one-dimensional reduction of the
matter transition probability possible.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .specfun import bessel_k0_complex


class NonRelativisticValidityWarning(UserWarning):
    """Parameters strain the non-relativistic wave-packet approximation."""


_VALIDITY_RATIO = 0.1


@dataclass(frozen=True)
class ParticleState:
    """One-particle Gaussian wave packet of the massive field.

    m: particle mass (units of sigma), m > 0
    sigma: momentum-space width; the nondimensionalization unit
    x0: initial center position (units of 1/sigma)
    k0: initial mean momentum (units of sigma)

    The non-relativistic description needs sigma << m and |k0| << m;
    ratios above 0.1 trigger a warning but are not rejected.
    """

    m: float
    sigma: float = 1.0
    x0: float = 0.0
    k0: float = 0.0

    def __post_init__(self):
        for name in ("m", "sigma", "x0", "k0"):
            if not np.isfinite(getattr(self, name)):
                raise ValueError(f"ParticleState: {name} must be finite")
        if self.m <= 0:
            raise ValueError("ParticleState: m must be positive")
        if self.sigma <= 0:
            raise ValueError("ParticleState: sigma must be positive")
        if self.sigma / self.m > _VALIDITY_RATIO or abs(self.k0) / self.m > _VALIDITY_RATIO:
            warnings.warn(
                f"ParticleState(m={self.m}, sigma={self.sigma}, k0={self.k0}): "
                "sigma/m or |k0|/m exceeds 0.1; the non-relativistic "
                "approximation degrades here",
                NonRelativisticValidityWarning,
                stacklevel=2,
            )


@dataclass(frozen=True)
class WorldlinePoint:
    """A proper time on the static detector worldline (tau, x=0)."""

    tau: float

    def __post_init__(self):
        if not np.isfinite(self.tau):
            raise ValueError("WorldlinePoint: tau must be finite")


def phi_squared_matter(state, t, x):
    """Matter part of <phi(t, x)^2>: the packet energy density over m^2.

    Equals the free-particle quantum-mechanical probability density
    divided by m.  Strictly positive.
    """
    m, sg = state.m, state.sigma
    spread = 1.0 + (sg * sg * t / m) ** 2
    center = state.x0 + state.k0 * t / m
    gauss = np.exp(-sg * sg * (x - center) ** 2 / spread)
    return (1.0 / m) * np.sqrt(sg * sg / (np.pi * spread)) * gauss


def qm_wavefunction(state, t, x):
    """Free Gaussian wave packet evolved under H = p^2 / 2m.

    Principal square root of the complex prefactor; the argument
    1 + i t sigma^2 / m always has positive real part.
    """
    m, sg = state.m, state.sigma
    u = 1.0 + 1j * t * sg * sg / m
    center = state.x0 + state.k0 * t / m
    pref = np.sqrt(sg / (np.sqrt(np.pi) * u))
    phase = 1j * state.k0 * (x - state.x0) - 1j * state.k0**2 * t / (2.0 * m)
    return pref * np.exp(-0.5 * sg * sg * (x - center) ** 2 / u + phase)


def qm_density(state, t, x):
    """|Psi(x, t)|^2 of the free wave packet; equals m * phi_squared_matter."""
    m, sg = state.m, state.sigma
    spread = 1.0 + (sg * sg * t / m) ** 2
    center = state.x0 + state.k0 * t / m
    return np.sqrt(sg * sg / (np.pi * spread)) * np.exp(
        -sg * sg * (x - center) ** 2 / spread
    )


def wightman_vacuum(m, tau, tau_p, eps):
    """Vacuum two-point function on the worldline, regulator eps kept finite.

    W_v = K0(m [eps + i (tau - tau')]) / (2 pi).  The eps -> 0+ limit is
    the caller's job (extrapolation); eps <= 0 is rejected here.
    """
    if not eps > 0:
        raise ValueError("wightman_vacuum: eps must be > 0")
    z = m * (eps + 1j * (np.asarray(tau) - np.asarray(tau_p)))
    return bessel_k0_complex(z) / (2.0 * np.pi)


def matter_amplitude_prefactor(state):
    """The real constant C in W_m = C [A A'* + A' A*]."""
    m, sg = state.m, state.sigma
    return np.exp(-state.k0**2 / sg**2) / (2.0 * np.sqrt(np.pi) * m * sg)


def matter_amplitude_factor(state, tau):
    """Complex amplitude A(tau) of the factorized matter kernel.

    A(tau) = exp(-i m tau) exp[ S / (2 (1/sigma^2 + i tau/m)) ]
             / sqrt(1/sigma^2 + i tau/m),     S = (k0/sigma^2 - i x0)^2.
    """
    m, sg = state.m, state.sigma
    a = 1.0 / sg**2 + 1j * np.asarray(tau) / m
    source = (state.k0 / sg**2 - 1j * state.x0) ** 2
    return np.exp(-1j * m * np.asarray(tau) + source / (2.0 * a)) / np.sqrt(a)


def wightman_matter(state, tau, tau_p):
    """Matter part of the worldline two-point function.

    Written out directly (not through the factorization), it is the
    symmetrized product of packet amplitudes; real and symmetric in
    (tau, tau').
    """
    m, sg = state.m, state.sigma
    tau = np.asarray(tau)
    tau_p = np.asarray(tau_p)
    norm = 1.0 / (2.0 * np.sqrt(np.pi) * m * sg)
    splus = (state.k0 / sg**2 - 1j * state.x0) ** 2
    sminus = (state.k0 / sg**2 + 1j * state.x0) ** 2

    def half(t1, t2):
        a = 1.0 / sg**2 + 1j * t1 / m
        b = 1.0 / sg**2 - 1j * t2 / m
        expo = -1j * m * (t1 - t2) - state.k0**2 / sg**2
        expo = expo + splus / (2.0 * a) + sminus / (2.0 * b)
        return np.exp(expo) / (np.sqrt(a) * np.sqrt(b))

    return norm * (half(tau, tau_p) + half(tau_p, tau))

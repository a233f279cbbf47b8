"""Transverse-momentum pair amplitude for degenerate type-I emission.

The two emitted photons are described by the four Cartesian transverse
wave-vector components (k1x, k2x, k1y, k2y), all in cm^-1.  The
amplitude factorizes into a Gaussian pump envelope in the summed
components and a sinc of the longitudinal phase mismatch, which depends
only on the squared magnitude of the difference components:

    psi = exp(-w_p^2 (k+x^2 + k+y^2) / 2)
          * sinc( (pi L / 8 n_o lam) * (4 theta0^2 - kappa-x^2 - kappa-y^2) )

with kappa = lam * k / pi the dimensionless momentum (lam converted to
cm once, here).  All constant prefactors are dropped; amplitudes are
unnormalized and normalization is applied only at the curve level.
The amplitude is real.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .crystal import MICRON_TO_CM, index_ordinary, phase_match, CutConfig

__all__ = [
    "SpdcParams",
    "MomentumPoint4",
    "sinc",
    "pump_envelope",
    "mismatch_arg",
    "psi",
    "density4",
]


def sinc(x):
    """sin(x)/x with sinc(0) = 1 exactly; safe for |x| up to ~1e8."""
    return np.sinc(np.asarray(x) / np.pi)


@dataclass(frozen=True)
class SpdcParams:
    """Physical configuration of one down-conversion setup.

    lambda_p : pump wavelength, um
    w_p      : pump waist, cm
    L        : crystal length, cm
    theta0   : cone opening angle, rad (0 in the collinear regime)
    n_o      : ordinary index of the emitted photons, i.e. at 2*lambda_p
    """

    lambda_p: float
    w_p: float
    L: float
    theta0: float
    n_o: float

    def __post_init__(self):
        if self.lambda_p <= 0 or self.w_p <= 0 or self.L <= 0:
            raise ValueError("lambda_p, w_p and L must all be positive")
        if self.theta0 < 0:
            raise ValueError("theta0 must be >= 0")
        if self.n_o <= 1.0:
            raise ValueError("n_o must exceed 1")

    @property
    def lambda_cm(self):
        """Pump wavelength in cm (single conversion point for all formulas)."""
        return self.lambda_p * MICRON_TO_CM

    @property
    def sinc_scale(self):
        """Dimensionless gain pi*L/(8 n_o lambda_p) multiplying the mismatch."""
        return math.pi * self.L / (8.0 * self.n_o * self.lambda_cm)

    def kappa(self, k):
        """Dimensionless momentum lam*k/pi for k in cm^-1."""
        return self.lambda_cm * np.asarray(k) / math.pi

    def k_from_kappa(self, kappa):
        """Inverse of kappa(): cm^-1 from the dimensionless momentum."""
        return math.pi * np.asarray(kappa) / self.lambda_cm

    @classmethod
    def from_crystal(cls, disp, lambda_p, w_p, L, *, phi0=None, theta0=None):
        """Build params from a dispersion set plus either a cut angle or an explicit cone angle.

        Exactly one of phi0 / theta0 must be given.  With phi0 the cone
        angle comes from phase matching (a cut on the collinear-impossible
        side raises ValueError); with theta0 only the signal index is
        taken from the crystal data.
        """
        if (phi0 is None) == (theta0 is None):
            raise ValueError("provide exactly one of phi0 / theta0")
        if theta0 is None:
            pm = phase_match(disp, CutConfig(phi0=phi0, lambda_p=lambda_p))
            if pm.theta0 is None:
                raise ValueError(
                    f"no emission cone at phi0 = {phi0} (index difference "
                    f"{pm.delta_n:+.3e} >= 0)")
            return cls(lambda_p=lambda_p, w_p=w_p, L=L, theta0=pm.theta0,
                       n_o=pm.n_o_signal)
        n_o = index_ordinary(disp, 2.0 * lambda_p)
        return cls(lambda_p=lambda_p, w_p=w_p, L=L, theta0=theta0, n_o=n_o)


@dataclass(frozen=True)
class MomentumPoint4:
    """One point of the four-dimensional transverse momentum space, cm^-1."""

    k1x: float
    k2x: float
    k1y: float
    k2y: float

    @property
    def k_plus_x(self):
        return self.k1x + self.k2x

    @property
    def k_minus_x(self):
        return self.k1x - self.k2x

    @property
    def k_plus_y(self):
        return self.k1y + self.k2y

    @property
    def k_minus_y(self):
        return self.k1y - self.k2y


def pump_envelope(k_plus_x, k_plus_y, params):
    """Gaussian pump envelope exp(-w_p^2 (k+x^2 + k+y^2)/2), unnormalized."""
    kx = np.asarray(k_plus_x, dtype=float)
    ky = np.asarray(k_plus_y, dtype=float)
    w2 = params.w_p * params.w_p
    return np.exp(-0.5 * w2 * (kx * kx + ky * ky))


def mismatch_arg(k_minus_x, k_minus_y, params):
    """Dimensionless sinc argument of the longitudinal phase mismatch.

    Vanishes on the emission cone kappa-x^2 + kappa-y^2 = (2 theta0)^2
    and is positive inside it.
    """
    kx = params.kappa(k_minus_x)
    ky = params.kappa(k_minus_y)
    return params.sinc_scale * (4.0 * params.theta0 ** 2 - kx * kx - ky * ky)


def psi(point, params):
    """Real pair amplitude at one 4-momentum point (unnormalized)."""
    return (pump_envelope(point.k_plus_x, point.k_plus_y, params)
            * sinc(mismatch_arg(point.k_minus_x, point.k_minus_y, params)))


def density4(point, params):
    """Four-dimensional joint probability density |psi|^2 (unnormalized)."""
    a = psi(point, params)
    return a * a

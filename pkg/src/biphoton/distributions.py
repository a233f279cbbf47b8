"""Reduced pair distributions, widths and the entanglement ratio.

Integrating the 4-D joint density over both photons' y components
leaves a product of a Gaussian in the summed x momenta and a function
of the difference momentum alone,

    f_exact(k-x) = integral dq  sinc^2[ S * (4 theta0^2 - kappa^2 - q^2) ],

with kappa = lam*k-x/pi, q the dimensionless y-difference variable and
S = pi*L/(8 n_o lam) a large gain (10^2..10^4 for cm-scale crystals).
The integrand oscillates on a scale ~1/(S*q), so uniform grids alias
it badly.  The integrator here splits the q axis into panels bounded
by consecutive zeros of the sinc argument (one oscillation arch per
panel), applies fixed-order Gauss-Legendre per panel, and closes the
remaining infinite tail analytically: after the substitution
x = S*(q^2 - c) the tail is sinc^2(x) times the slowly varying weight
(c + x/S)^(-1/2), whose non-oscillatory half has a smooth one-panel
closed form and whose oscillatory half is reduced by two integrations
by parts to a boundary term plus a rigorously bounded remainder.  The
truncation point is pushed outward (doubling the panel count) until
that remainder bound drops below the requested relative accuracy.

Because the gain is large, sinc^2 acts nearly like a delta function of
its argument, giving the closed-form cone-interior approximation
f_approx = 8 n_o lam / (L sqrt(4 theta0^2 - kappa^2)) with integrable
inverse-square-root singularities at kappa = +-2 theta0.

Widths follow the conventions used for the closed-form results: the
difference-momentum width is sqrt(2) pi theta0 / lam, the single-photon
width is half of it, and the conditional (coincidence) width is
1/(2 w_p); their ratio R = sqrt(2) pi theta0 w_p / lam quantifies the
entanglement.  Note that for the Gaussian conditional curve the plain
standard deviation is 1/(sqrt(2) w_p); the quoted 1/(2 w_p) is the
reciprocal-waist convention, a factor sqrt(2) below the standard
deviation.  measured_coincidence_width() applies that conversion when
estimating the width from a sampled curve so that measured and
closed-form values agree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .curves import Curve
from .wavefunction import pump_envelope

__all__ = [
    "QuadratureError",
    "EntanglementReport",
    "f_exact",
    "f_approx",
    "width_minus",
    "width_single",
    "width_coincidence",
    "entanglement_ratio",
    "classify_regime",
    "entanglement_report",
    "reduced_bipartite",
    "default_kappa_grid",
    "coincidence_kappa_grid",
    "single_particle_curve",
    "coincidence_curve",
    "plane_restricted_curve",
    "f_approx_moment_ratio",
    "measured_coincidence_width",
    "REGIME_NONCOLLINEAR",
    "REGIME_INTERMEDIATE",
    "REGIME_COLLINEAR",
]

REGIME_NONCOLLINEAR = "noncollinear-broadened"
REGIME_INTERMEDIATE = "intermediate"
REGIME_COLLINEAR = "collinear"

# Regime thresholds: theta0 vs sqrt(lam/L) with a symmetric factor 3.
REGIME_FACTOR = 3.0

_GL15_NODES, _GL15_WEIGHTS = np.polynomial.legendre.leggauss(15)
_GL32_NODES, _GL32_WEIGHTS = np.polynomial.legendre.leggauss(32)


class QuadratureError(RuntimeError):
    """Requested accuracy not reached within the panel budget.

    Carries the best available estimate and its error bound.
    """

    def __init__(self, message, estimate, bound):
        super().__init__(message)
        self.estimate = estimate
        self.bound = bound


def _sinc2(x):
    s = np.sinc(x / np.pi)
    return s * s


def _panel_gauss_sinc2(edges, c, scale):
    """Gauss-Legendre sum of sinc^2(scale*(c - q^2)) over consecutive panels.

    Panels and nodes are evaluated in one vectorized pass; the
    accumulation order is fixed (panel index, then node index), so the
    result is bit-identical from call to call.
    """
    a = edges[:-1]
    b = edges[1:]
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    q = mid[:, None] + half[:, None] * _GL15_NODES[None, :]
    vals = _sinc2(scale * (c - q * q))
    return float(np.sum(vals * _GL15_WEIGHTS[None, :], axis=1) @ half)


def _smooth_tail(c, scale, x0):
    """integral_{x0}^inf x^(-2) (c + x/scale)^(-1/2) dx, closed one-panel form.

    Substitutions x -> x0/t -> x0/s^2 remove both the infinite range and
    the square-root behavior, leaving a smooth integrand on (0, 1).
    """
    s = 0.5 * (_GL32_NODES + 1.0)
    w = 0.5 * _GL32_WEIGHTS
    integ = s * s / np.sqrt(c * scale * s * s + x0)
    return 2.0 * math.sqrt(scale) / x0 * float(integ @ w)


def _tail_beyond(c, scale, x0):
    """Tail integral_{qN}^inf sinc^2(scale*(c-q^2)) dq for x0 = scale*(qN^2-c).

    x0 must be a positive multiple of pi (a sinc zero), which kills the
    sin(2 x0) boundary terms of the integration by parts.  Returns
    (value, error_bound).
    """
    u = c + x0 / scale            # = qN^2
    w0 = 1.0 / math.sqrt(u)
    wp = -0.5 / (scale * u ** 1.5)
    wpp = 0.75 / (scale * scale * u ** 2.5)
    h = w0 / (x0 * x0)
    hp = wp / (x0 * x0) - 2.0 * w0 / x0 ** 3
    hpp = wpp / (x0 * x0) - 4.0 * wp / x0 ** 3 + 6.0 * w0 / x0 ** 4
    t1 = _smooth_tail(c, scale, x0)
    i_osc = -0.25 * hp            # sin(2 x0) = 0, cos(2 x0) = 1
    value = (0.5 * t1 - 0.5 * i_osc) / (2.0 * scale)
    bound = abs(hpp) / (16.0 * 2.0 * scale)
    return value, bound


_MAX_PANELS = 4_000_000


def _f_of_c(c, scale, rel_tol=1e-6):
    """F(c) = 2 * integral_0^inf sinc^2(scale*(c - q^2)) dq."""
    m_hi = math.floor(scale * c / math.pi)
    n_outer = 64
    total = bound = None
    for _ in range(22):
        m_lo = min(m_hi, 0) - n_outer
        if m_hi - m_lo + 2 > _MAX_PANELS:
            raise QuadratureError(
                f"panel budget exceeded ({m_hi - m_lo + 2} panels needed)",
                total, None if bound is None else 2.0 * bound)
        ms = np.arange(m_hi, m_lo - 1, -1, dtype=float)
        edges = np.sqrt(np.maximum(c - ms * math.pi / scale, 0.0))
        edges = np.concatenate([[0.0], edges])
        keep = np.concatenate([[True], np.diff(edges) > 0.0])
        edges = edges[keep]
        body = _panel_gauss_sinc2(edges, c, scale)
        x0 = -m_lo * math.pi
        tail, half_bound = _tail_beyond(c, scale, x0)
        total = 2.0 * (body + tail)
        bound = half_bound
        if bound * 2.0 <= 0.5 * rel_tol * abs(total) or total == 0.0:
            return total
        n_outer *= 2
    raise QuadratureError(
        f"accuracy {rel_tol:g} not reached (bound {2*bound:.3e} on {total:.6e})",
        total, 2.0 * bound)


def f_exact(k_minus_x, params, rel_tol=1e-6):
    """Reduced difference-momentum distribution by adaptive panel quadrature.

    k_minus_x in cm^-1; the result is the dimensionless q-integral of
    the squared mismatch sinc, accurate to rel_tol in relative terms.
    Even in its argument.  Raises QuadratureError (with the running
    estimate attached) if the panel budget is exhausted first.
    """
    kappa = float(params.kappa(k_minus_x))
    c = 4.0 * params.theta0 ** 2 - kappa * kappa
    return _f_of_c(c, params.sinc_scale, rel_tol)


def f_approx(k_minus_x, params):
    """Cone-interior closed form 8 n_o lam/(L sqrt(4 theta0^2 - kappa^2)).

    Returns 0 outside the open support interval and +inf exactly at the
    edges (the singularity is integrable; callers integrating across it
    must transform it away, as f_approx_moment_ratio does).
    """
    kappa = float(params.kappa(k_minus_x))
    c = 4.0 * params.theta0 ** 2 - kappa * kappa
    if c < 0.0:
        return 0.0
    if c == 0.0:
        return math.inf
    return 8.0 * params.n_o * params.lambda_cm / (params.L * math.sqrt(c))


def width_minus(params):
    """Width of the difference-momentum distribution, sqrt(2) pi theta0/lam, cm^-1."""
    return math.sqrt(2.0) * math.pi * params.theta0 / params.lambda_cm


def width_single(params):
    """Single-photon momentum width, half the difference width, cm^-1."""
    return 0.5 * width_minus(params)


def width_coincidence(params):
    """Conditional (coincidence) width 1/(2 w_p), cm^-1 (reciprocal-waist convention)."""
    return 0.5 / params.w_p


def entanglement_ratio(params):
    """R = single width / coincidence width = sqrt(2) pi theta0 w_p / lam."""
    return math.sqrt(2.0) * math.pi * params.theta0 * params.w_p / params.lambda_cm


def classify_regime(params):
    """Compare theta0 against sqrt(lam/L) with a symmetric margin factor."""
    crystal_scale = math.sqrt(params.lambda_cm / params.L)
    if params.theta0 > REGIME_FACTOR * crystal_scale:
        return REGIME_NONCOLLINEAR
    if params.theta0 < crystal_scale / REGIME_FACTOR:
        return REGIME_COLLINEAR
    return REGIME_INTERMEDIATE


@dataclass(frozen=True)
class EntanglementReport:
    width_single: float   # cm^-1
    width_coinc: float    # cm^-1
    width_minus: float    # cm^-1
    ratio: float
    regime: str

    def render(self, extra_lines=()):
        lines = [
            f"single-photon width   : {self.width_single:.6g} cm^-1",
            f"coincidence width     : {self.width_coinc:.6g} cm^-1",
            f"difference width      : {self.width_minus:.6g} cm^-1",
            f"width ratio R         : {self.ratio:.6g}",
            f"broadening regime     : {self.regime}",
        ]
        lines.extend(extra_lines)
        return "\n".join(lines) + "\n"


def entanglement_report(params):
    return EntanglementReport(
        width_single=width_single(params),
        width_coinc=width_coincidence(params),
        width_minus=width_minus(params),
        ratio=entanglement_ratio(params),
        regime=classify_regime(params),
    )


def reduced_bipartite(k1x, k2x, params, rel_tol=1e-6):
    """y-reduced joint density exp(-w_p^2 (k1x+k2x)^2) * f_exact(k1x-k2x)."""
    kp = k1x + k2x
    gauss = math.exp(-(params.w_p * kp) ** 2)
    return gauss * f_exact(k1x - k2x, params, rel_tol)


def default_kappa_grid(params, n=2001, span_factor=1.5):
    """Uniform dimensionless grid covering both the cone and the collinear scale."""
    span = span_factor * max(2.0 * params.theta0,
                             math.sqrt(params.lambda_cm / params.L))
    return np.linspace(-span, span, n)


def coincidence_kappa_grid(k2x_fixed, params, n=501, halfspan_sigmas=6.0):
    """Grid centered on the conditional peak at -k2x, a few Gaussian widths wide."""
    center = -float(params.kappa(k2x_fixed))
    sigma = params.lambda_cm / (math.pi * math.sqrt(2.0) * params.w_p)
    h = halfspan_sigmas * sigma
    return np.linspace(center - h, center + h, n)


def _params_meta(params):
    return {
        "lambda_p_um": repr(params.lambda_p),
        "w_p_cm": repr(params.w_p),
        "L_cm": repr(params.L),
        "theta0_rad": repr(params.theta0),
        "n_o": repr(params.n_o),
    }


def single_particle_curve(kappa_grid, params, exact=True, rel_tol=1e-6,
                          normalization="raw"):
    """Marginal momentum distribution of one photon: F(2 k1x) over the grid.

    The exact reduction is the default; exact=False substitutes the
    cone-interior closed form (whose singular edge points, if hit by
    the grid, are clipped to the largest finite neighbour).
    """
    ks = params.k_from_kappa(kappa_grid)
    if exact:
        vals = np.array([f_exact(2.0 * k, params, rel_tol) for k in ks])
    else:
        vals = np.array([f_approx(2.0 * k, params) for k in ks])
        finite = np.isfinite(vals)
        if not finite.all():
            vals[~finite] = vals[finite].max()
    meta = _params_meta(params)
    meta["kind"] = "single-particle" + ("" if exact else " (cone-interior form)")
    curve = Curve(x=np.asarray(kappa_grid, dtype=float), y=vals,
                  xunit="kappa", normalization="raw", meta=meta)
    return curve.normalized(normalization) if normalization != "raw" else curve


def coincidence_curve(k2x_fixed, params, kappa_grid=None, rel_tol=1e-6,
                      normalization="raw"):
    """Conditional distribution of k1x at fixed k2x: Gaussian times F(2 k2x).

    Peaks at k1x = -k2x; the overall factor F(2 k2x) only matters for
    the raw scale (it vanishes quickly once |2 k2x| leaves the cone).
    """
    if kappa_grid is None:
        kappa_grid = coincidence_kappa_grid(k2x_fixed, params)
    k1 = params.k_from_kappa(kappa_grid)
    scale = f_exact(2.0 * k2x_fixed, params, rel_tol)
    vals = pump_envelope(k1 + k2x_fixed, 0.0, params) ** 2 * scale
    meta = _params_meta(params)
    meta["kind"] = "coincidence"
    meta["k2x_cm^-1"] = repr(float(k2x_fixed))
    curve = Curve(x=np.asarray(kappa_grid, dtype=float), y=vals,
                  xunit="kappa", normalization="raw", meta=meta)
    return curve.normalized(normalization) if normalization != "raw" else curve


_GH64_NODES, _GH64_WEIGHTS = np.polynomial.hermite.hermgauss(64)


def plane_restricted_curve(kappa_grid, params, normalization="raw"):
    """Distribution obtained when only in-plane photons are counted.

    integral dk2x |psi(k1x, k2x, 0, 0)|^2, evaluated with Gauss-Hermite
    nodes riding the pump Gaussian (substituting k2x = -k1x + t/w_p).
    In-plane restriction skips the y reduction entirely, so this curve
    is drastically narrower than the single-photon marginal.
    """
    kappa_grid = np.asarray(kappa_grid, dtype=float)
    k1 = params.k_from_kappa(kappa_grid)
    t = _GH64_NODES / params.w_p
    kminus = 2.0 * k1[:, None] - t[None, :]
    kap = params.kappa(kminus)
    arg = params.sinc_scale * (4.0 * params.theta0 ** 2 - kap * kap)
    vals = (_sinc2(arg) @ _GH64_WEIGHTS) / params.w_p
    meta = _params_meta(params)
    meta["kind"] = "plane-restricted"
    curve = Curve(x=kappa_grid, y=vals, xunit="kappa", normalization="raw",
                  meta=meta)
    return curve.normalized(normalization) if normalization != "raw" else curve


def f_approx_moment_ratio(params, order=2, n_nodes=400):
    """Moment <k^order> of the cone-interior form by singularity-free quadrature.

    The substitution kappa = 2 theta0 sin(u) cancels the edge
    singularities exactly; Gauss-Legendre in u then converges fast.
    Both moments are evaluated through f_approx itself so the check
    exercises the public formula, not a rearranged expression.
    """
    nodes, weights = np.polynomial.legendre.leggauss(n_nodes)
    u = 0.5 * math.pi * nodes
    w = 0.5 * math.pi * weights
    kmax = 2.0 * math.pi * params.theta0 / params.lambda_cm
    k = kmax * np.sin(u)
    jac = kmax * np.cos(u)
    fvals = np.array([f_approx(ki, params) for ki in k])
    num = float(np.sum(k ** order * fvals * jac * w))
    den = float(np.sum(fvals * jac * w))
    return num / den


def measured_coincidence_width(curve):
    """Coincidence width from a sampled conditional curve, cm^-1.

    The plain rms width of the Gaussian conditional curve is
    1/(sqrt(2) w_p); dividing by sqrt(2) converts it to the
    reciprocal-waist convention 1/(2 w_p) used by width_coincidence().
    Curves on the dimensionless axis are converted using the metadata
    echo of lambda_p.
    """
    sigma = curve.rms_width()
    if curve.xunit == "kappa":
        lam_cm = float(curve.meta["lambda_p_um"]) * 1e-4
        sigma = sigma * math.pi / lam_cm
    return sigma / math.sqrt(2.0)

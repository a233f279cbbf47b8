"""Detection-plane ring geometry and detector-scan simulation.

The emission cone intersects a plane at distance z in an annulus of
radius r0 = z * theta0.  A detector moving along a vertical line at
horizontal offset x sums counts over its whole travel, so the expected
count is a line integral across the annulus; repeating for many
offsets traces out the same curve as the y-reduction of the joint
density.  Two independent routes to that curve are provided:

* an analytic mode that integrates an idealized uniform annulus of
  thickness delta_r = z * lam/(2 pi w_p) (the pump-waist-limited
  correlation width mapped to the plane); its vertical-line chord
  reproduces the inverse-square-root projection law, and

* a Monte-Carlo mode that draws photon pairs from the actual pair
  density (Gaussian summed momenta; difference-momentum magnitude from
  the squared-sinc radial law, uniform azimuth), maps each photon to
  the plane via r = z * lam * k_perp / pi, and bins detections per
  scan line.

Positions are in cm in the detection plane; x = z * kappa links them
to the dimensionless momentum axis used by the theory curves.
Sampling is reproducible: a 64-bit seed (and optional shard count)
fully determines the output, and shard streams are spawned and merged
in index order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .curves import Curve
from .distributions import width_coincidence
from .wavefunction import SpdcParams

__all__ = [
    "NoRingError",
    "RingGeometry",
    "PairBatch",
    "ScanResult",
    "ring_from_params",
    "chord_length",
    "sample_pairs",
    "scan_single",
    "scan_coincidence",
]


class NoRingError(ValueError):
    """Collinear configuration: the detection-plane annulus degenerates."""


@dataclass(frozen=True)
class RingGeometry:
    """Annulus in the detection plane: distance z, radius r0, thickness delta_r (cm)."""

    z: float
    r0: float
    delta_r: float

    def __post_init__(self):
        if self.z <= 0 or self.r0 <= 0 or self.delta_r <= 0:
            raise ValueError("z, r0 and delta_r must be positive")
        if self.delta_r >= self.r0:
            raise ValueError("ring thickness must be below its radius")

    @property
    def r_outer(self):
        return self.r0 + 0.5 * self.delta_r

    @property
    def r_inner(self):
        return self.r0 - 0.5 * self.delta_r


def ring_from_params(params, z):
    """Ring radius z*theta0 and thickness z*width_coincidence*lam/pi.

    Raises NoRingError for collinear parameters (theta0 = 0).
    """
    if z <= 0:
        raise ValueError("z must be positive")
    if params.theta0 <= 0.0:
        raise NoRingError("theta0 = 0: no emission ring to scan")
    r0 = z * params.theta0
    delta_r = z * width_coincidence(params) * params.lambda_cm / math.pi
    return RingGeometry(z=z, r0=r0, delta_r=delta_r)


def chord_length(x, ring):
    """Total length cut from the annulus by the vertical line at offset x (cm).

    Both crossings (upper and lower arc) are counted; the line misses
    the annulus entirely for |x| > r_outer.
    """
    x = np.asarray(x, dtype=float)
    outer = np.sqrt(np.maximum(ring.r_outer ** 2 - x * x, 0.0))
    inner = np.sqrt(np.maximum(ring.r_inner ** 2 - x * x, 0.0))
    return 2.0 * (outer - inner)


@dataclass(frozen=True)
class PairBatch:
    """Detection-plane positions of sampled photon pairs (cm)."""

    x1: np.ndarray
    y1: np.ndarray
    x2: np.ndarray
    y2: np.ndarray
    z: float
    seed: int
    shards: int
    params: SpdcParams

    def __len__(self):
        return len(self.x1)


def _radial_table(params, kappa_cut, n_knots):
    """Inverse-CDF table for the difference-momentum magnitude.

    Radial density kappa * sinc^2(S*(4 theta0^2 - kappa^2)) tabulated on
    a uniform kappa grid; the trapezoid cumulative is normalized and
    inverted by monotone linear interpolation at sampling time.
    """
    kap = np.linspace(0.0, kappa_cut, n_knots)
    arg = params.sinc_scale * (4.0 * params.theta0 ** 2 - kap * kap)
    s = np.sinc(arg / math.pi)
    pdf = kap * s * s
    cdf = np.concatenate([[0.0], np.cumsum(0.5 * (pdf[1:] + pdf[:-1]) * np.diff(kap))])
    cdf /= cdf[-1]
    return kap, cdf


def _default_kappa_cut(params):
    return 3.0 * max(2.0 * params.theta0,
                     math.sqrt(params.lambda_cm / params.L))


def _default_knots(params, kappa_cut):
    # resolve the narrowest squared-sinc arch near the cone with >= ~32 knots
    peak = max(2.0 * params.theta0, math.sqrt(math.pi / params.sinc_scale))
    lobe = math.pi / (2.0 * params.sinc_scale * peak)
    return int(min(500_000, max(10_000, math.ceil(32.0 * kappa_cut / lobe))))


def sample_pairs(params, z, n, seed, azimuth_origin=0.0, shards=1):
    """Draw n photon pairs and map them to the detection plane at distance z.

    Summed momenta are Gaussian with the pump-envelope variance; the
    difference-momentum magnitude follows the squared-sinc radial law by
    inverse-transform sampling from a tabulated cumulative; the azimuth
    is uniform (measured from azimuth_origin, whose value must not
    affect any binned statistic).  A fixed (seed, shards) pair gives a
    bit-identical batch; shards are generated from spawned substreams
    and concatenated in shard order.
    """
    if n <= 0:
        raise ValueError("n must be positive")
    if shards < 1:
        raise ValueError("shards must be >= 1")
    kappa_cut = _default_kappa_cut(params)
    kap_knots, cdf = _radial_table(params, kappa_cut, _default_knots(params, kappa_cut))

    counts = [n // shards] * shards
    counts[-1] += n - sum(counts)
    streams = np.random.SeedSequence(seed).spawn(shards)

    sigma_kplus = 1.0 / (params.w_p * math.sqrt(2.0))
    lam_over_pi = params.lambda_cm / math.pi

    xs1, ys1, xs2, ys2 = [], [], [], []
    for ss, m in zip(streams, counts):
        rng = np.random.default_rng(ss)
        kpx = rng.normal(0.0, sigma_kplus, m)
        kpy = rng.normal(0.0, sigma_kplus, m)
        u = rng.random(m)
        kappa_minus = np.interp(u, cdf, kap_knots)
        phi = azimuth_origin + 2.0 * math.pi * rng.random(m)
        kmx = kappa_minus * np.cos(phi) / lam_over_pi
        kmy = kappa_minus * np.sin(phi) / lam_over_pi
        k1x, k1y = 0.5 * (kpx + kmx), 0.5 * (kpy + kmy)
        k2x, k2y = 0.5 * (kpx - kmx), 0.5 * (kpy - kmy)
        scale = z * lam_over_pi
        xs1.append(scale * k1x)
        ys1.append(scale * k1y)
        xs2.append(scale * k2x)
        ys2.append(scale * k2y)

    return PairBatch(x1=np.concatenate(xs1), y1=np.concatenate(ys1),
                     x2=np.concatenate(xs2), y2=np.concatenate(ys2),
                     z=z, seed=seed, shards=shards, params=params)


@dataclass(frozen=True)
class ScanResult:
    """Counts per vertical scan line.

    positions are line offsets in cm (uniform spacing, bin centers in
    Monte-Carlo mode); counts are expected densities in analytic mode
    and nonnegative totals in Monte-Carlo mode.
    """

    positions: np.ndarray
    counts: np.ndarray
    mode: str
    pairs_sampled: int | None = None
    seed: int | None = None
    d2_position: float | None = None
    slit_width: float | None = None
    meta: dict = field(default_factory=dict)

    @property
    def is_empty(self):
        return float(np.sum(self.counts)) == 0.0

    def to_curve(self, z):
        """Re-express the scan on the dimensionless momentum axis (kappa = x/z)."""
        return Curve(x=self.positions / z, y=np.asarray(self.counts, dtype=float),
                     xunit="kappa", normalization="raw", meta=dict(self.meta))

    def header_lines(self):
        lines = [f"biphoton scan", f"mode: {self.mode}"]
        if self.seed is not None:
            lines.append(f"seed: {self.seed}")
        if self.pairs_sampled is not None:
            lines.append(f"pairs_sampled: {self.pairs_sampled}")
        if self.d2_position is not None:
            lines.append(f"d2_position_cm: {self.d2_position!r}")
        if self.slit_width is not None:
            lines.append(f"slit_width_cm: {self.slit_width!r}")
        for key in sorted(self.meta):
            lines.append(f"meta: {key}={self.meta[key]}")
        return lines

    def write(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            for line in self.header_lines():
                fh.write(f"# {line}\n")
            for xi, ci in zip(self.positions, self.counts):
                fh.write(f"{xi:.12e} {ci:.12e}\n")


def _bin_edges(positions):
    positions = np.asarray(positions, dtype=float)
    steps = np.diff(positions)
    if positions.size < 2 or not np.allclose(steps, steps[0], rtol=1e-9, atol=0.0):
        raise ValueError("scan positions must be a uniform grid")
    h = steps[0]
    return np.concatenate([positions - 0.5 * h, [positions[-1] + 0.5 * h]])


def scan_single(source, positions):
    """Single-detector scan: expected or sampled counts per vertical line.

    With a RingGeometry the result is the uniform-annulus line integral
    (chord length scaled by the ring's uniform angular density); with a
    PairBatch every sampled photon of every pair is histogrammed onto
    the scan lines.
    """
    positions = np.asarray(positions, dtype=float)
    if isinstance(source, RingGeometry):
        counts = chord_length(positions, source) / (2.0 * math.pi * source.r0)
        return ScanResult(positions=positions, counts=counts, mode="single-analytic",
                          meta={"r0_cm": repr(source.r0),
                                "delta_r_cm": repr(source.delta_r)})
    if isinstance(source, PairBatch):
        edges = _bin_edges(positions)
        xs = np.concatenate([source.x1, source.x2])
        counts, _ = np.histogram(xs, bins=edges)
        return ScanResult(positions=positions, counts=counts.astype(float),
                          mode="single-mc", pairs_sampled=len(source),
                          seed=source.seed)
    raise TypeError(f"cannot scan a {type(source).__name__}")


def scan_coincidence(samples, d2_position, slit_width, positions):
    """Coincidence scan: bin one photon's line offset when its partner hits D2.

    D2 is an ideal vertical slit of the given width centered at
    d2_position; either photon of a pair may trigger it.  An empty
    result (no pair captured) is flagged, not an error.
    """
    if slit_width <= 0:
        raise ValueError("slit_width must be positive")
    positions = np.asarray(positions, dtype=float)
    edges = _bin_edges(positions)
    half = 0.5 * slit_width
    hit2 = np.abs(samples.x2 - d2_position) <= half
    hit1 = np.abs(samples.x1 - d2_position) <= half
    partner = np.concatenate([samples.x1[hit2], samples.x2[hit1]])
    counts, _ = np.histogram(partner, bins=edges)
    return ScanResult(positions=positions, counts=counts.astype(float),
                      mode="coincidence", pairs_sampled=len(samples),
                      seed=samples.seed, d2_position=float(d2_position),
                      slit_width=float(slit_width))

"""Sampled 1-D distribution curves: normalization, moments, widths, file I/O.

A Curve is a strictly increasing abscissa grid plus nonnegative values.
Abscissae are either dimensionless momenta (lam*k/pi, xunit "kappa") or
plain wave numbers in cm^-1 (xunit "cm^-1"); the unit tag travels with
the data.  Files are two-column delimiter-separated text with `#`
header lines carrying the unit tag, the normalization tag and an echo
of whatever metadata the producer attached.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

__all__ = ["Curve", "read_curve"]

NORMALIZATIONS = ("raw", "unit-area", "unit-peak")
XUNITS = ("kappa", "cm^-1")


@dataclass(frozen=True)
class Curve:
    x: np.ndarray
    y: np.ndarray
    xunit: str = "kappa"
    normalization: str = "raw"
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "x", np.asarray(self.x, dtype=float))
        object.__setattr__(self, "y", np.asarray(self.y, dtype=float))
        if self.x.ndim != 1 or self.x.shape != self.y.shape:
            raise ValueError("x and y must be 1-D arrays of equal length")
        if self.x.size < 2:
            raise ValueError("a curve needs at least two samples")
        if not np.all(np.diff(self.x) > 0):
            raise ValueError("abscissae must be strictly increasing")
        if np.any(self.y < 0) or not np.all(np.isfinite(self.y)):
            raise ValueError("values must be finite and nonnegative")
        if self.normalization not in NORMALIZATIONS:
            raise ValueError(f"unknown normalization {self.normalization!r}")
        if self.xunit not in XUNITS:
            raise ValueError(f"unknown xunit {self.xunit!r}")

    def area(self):
        """Trapezoid integral of the curve over its grid."""
        return float(np.trapezoid(self.y, self.x))

    def peak(self):
        return float(self.y.max())

    def argmax_x(self):
        return float(self.x[int(np.argmax(self.y))])

    def normalized(self, mode="unit-area"):
        """Return a copy rescaled to unit trapezoid area or unit peak."""
        if mode == "raw":
            return self
        if mode == "unit-area":
            scale = self.area()
        elif mode == "unit-peak":
            scale = self.peak()
        else:
            raise ValueError(f"unknown normalization {mode!r}")
        if scale <= 0:
            raise ValueError("cannot normalize an all-zero curve")
        return replace(self, y=self.y / scale, normalization=mode)

    def mean(self):
        w = np.trapezoid(self.y, self.x)
        return float(np.trapezoid(self.x * self.y, self.x) / w)

    def rms_width(self, center=None):
        """Square root of the second central moment, curve taken as a density."""
        if center is None:
            center = self.mean()
        w = np.trapezoid(self.y, self.x)
        m2 = np.trapezoid((self.x - center) ** 2 * self.y, self.x) / w
        return float(np.sqrt(m2))

    def excess_kurtosis(self):
        c = self.mean()
        w = np.trapezoid(self.y, self.x)
        m2 = np.trapezoid((self.x - c) ** 2 * self.y, self.x) / w
        m4 = np.trapezoid((self.x - c) ** 4 * self.y, self.x) / w
        return float(m4 / (m2 * m2) - 3.0)

    def fwhm(self):
        """Total width of the region where the curve is at least half its maximum.

        Crossings are located by linear interpolation, and the lengths
        of all segments above the half-maximum level are summed, so the
        value stays meaningful for multi-peaked curves.
        """
        half = 0.5 * self.peak()
        above = self.y >= half
        if not above.any():
            return 0.0
        total = 0.0
        x, y = self.x, self.y
        n = len(x)
        i = 0
        while i < n:
            if not above[i]:
                i += 1
                continue
            j = i
            while j + 1 < n and above[j + 1]:
                j += 1
            left = x[i]
            if i > 0:
                left = x[i - 1] + (half - y[i - 1]) * (x[i] - x[i - 1]) / (y[i] - y[i - 1])
            right = x[j]
            if j + 1 < n:
                right = x[j] + (y[j] - half) * (x[j + 1] - x[j]) / (y[j] - y[j + 1])
            total += right - left
            i = j + 1
        return float(total)

    def header_lines(self, extra=()):
        lines = ["biphoton curve",
                 f"xunit: {self.xunit}",
                 f"normalization: {self.normalization}"]
        for key in sorted(self.meta):
            lines.append(f"meta: {key}={self.meta[key]}")
        lines.extend(extra)
        return lines

    def write(self, path, extra_header=()):
        with open(path, "w", encoding="utf-8") as fh:
            for line in self.header_lines(extra_header):
                fh.write(f"# {line}\n")
            for xi, yi in zip(self.x, self.y):
                fh.write(f"{xi:.12e} {yi:.12e}\n")


def read_curve(path):
    """Round-trip loader for Curve.write output."""
    xunit, normalization, meta = "kappa", "raw", {}
    xs, ys = [], []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if body.startswith("xunit:"):
                    xunit = body.split(":", 1)[1].strip()
                elif body.startswith("normalization:"):
                    normalization = body.split(":", 1)[1].strip()
                elif body.startswith("meta:"):
                    kv = body.split(":", 1)[1].strip()
                    if "=" in kv:
                        k, _, v = kv.partition("=")
                        meta[k.strip()] = v.strip()
                continue
            sx, sy = line.split()
            xs.append(float(sx))
            ys.append(float(sy))
    return Curve(x=np.array(xs), y=np.array(ys), xunit=xunit,
                 normalization=normalization, meta=meta)

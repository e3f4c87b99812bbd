"""Sampled optical spectra and their CSV interchange format.

A :class:`Spectrum` is an immutable (wavelength, value) series on a strictly
ascending wavelength grid in nanometers.  Emitter emission, mirror
reflectivity curves and filtered cavity output all use this container.

CSV format: header line ``wavelength_nm,value``, one row per sample, values
rendered with ``%.9g``, LF line endings.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = ["Spectrum"]

_trapezoid = getattr(np, "trapezoid", None) or np.trapz


def _as_grid(values, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional")
    return arr


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Intensity-like quantity sampled on an ascending wavelength grid."""

    wavelength_nm: np.ndarray
    value: np.ndarray

    def __post_init__(self):
        wl = _as_grid(self.wavelength_nm, "wavelength_nm")
        val = _as_grid(self.value, "value")
        if wl.size == 0:
            raise ValueError("empty wavelength grid")
        if wl.size != val.size:
            raise ValueError("wavelength and value arrays differ in length")
        if wl.size > 1 and not np.all(np.diff(wl) > 0):
            raise ValueError("wavelength grid must be strictly ascending")
        if not (np.all(np.isfinite(wl)) and np.all(np.isfinite(val))):
            raise ValueError("spectrum contains non-finite entries")
        object.__setattr__(self, "wavelength_nm", wl)
        object.__setattr__(self, "value", val)

    def __len__(self) -> int:
        return int(self.wavelength_nm.size)

    @property
    def support(self) -> tuple[float, float]:
        return float(self.wavelength_nm[0]), float(self.wavelength_nm[-1])

    def resample(self, grid) -> "Spectrum":
        """Linear interpolation onto a new grid; zero outside the support."""
        grid = _as_grid(grid, "grid")
        vals = np.interp(grid, self.wavelength_nm, self.value, left=0.0, right=0.0)
        return Spectrum(grid, vals)

    def total(self) -> float:
        """Trapezoidal integral of the values over the wavelength grid."""
        return float(_trapezoid(self.value, self.wavelength_nm))

    def scaled(self, factor: float) -> "Spectrum":
        return Spectrum(self.wavelength_nm, self.value * factor)

    def write_csv(self, path) -> None:
        lines = ["wavelength_nm,value"]
        lines += [f"{w:.9g},{v:.9g}" for w, v in zip(self.wavelength_nm, self.value)]
        Path(path).write_bytes(("\n".join(lines) + "\n").encode("ascii"))

    @classmethod
    def read_csv(cls, path) -> "Spectrum":
        text = Path(path).read_text(encoding="ascii")
        lines = [ln for ln in text.split("\n") if ln.strip()]
        if not lines or lines[0].strip() != "wavelength_nm,value":
            raise ValueError(f"{path}: expected 'wavelength_nm,value' header")
        wl, val = [], []
        for ln in lines[1:]:
            fields = ln.split(",")
            if len(fields) != 2:
                raise ValueError(f"{path}: malformed row {ln!r}")
            wl.append(float(fields[0]))
            val.append(float(fields[1]))
        return cls(np.asarray(wl), np.asarray(val))

"""Parametric single-emitter emission models.

An emitter is a zero-phonon line (the 0-0 transition) plus a list of
red-shifted vibronic bands.  Band weights are emission fractions and must sum
to one; each band is an area-normalized Lorentzian or Gaussian, so a sampled
model integrates to (approximately) unity over its support.

JSON schema::

    {"zpl": {"center_nm": ..., "fwhm_nm": ..., "weight": ...},
     "vibronic": [{"center_nm": ..., "fwhm_nm": ..., "weight": ..., "shape": ...}]}
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .spectra import Spectrum
from .stacks import SPEED_OF_LIGHT

__all__ = [
    "EmissionBand",
    "EmitterModel",
    "default_dbt_model",
    "linewidth_ghz_to_nm",
    "load_emitter",
    "save_emitter",
]

_SHAPES = ("lorentzian", "gaussian")
_WEIGHT_TOL = 1e-9


@dataclass(frozen=True)
class EmissionBand:
    """One emission band: center and FWHM in nm, emission fraction, lineshape."""

    center_nm: float
    fwhm_nm: float
    weight: float
    shape: str = "lorentzian"

    def __post_init__(self):
        if not self.center_nm > 0:
            raise ValueError("band center must be positive")
        if not self.fwhm_nm > 0:
            raise ValueError("band width must be positive")
        if not 0.0 < self.weight <= 1.0:
            raise ValueError("band weight must lie in (0, 1]")
        if self.shape not in _SHAPES:
            raise ValueError(f"shape must be one of {_SHAPES}, got {self.shape!r}")

    def profile(self, wavelengths_nm) -> np.ndarray:
        """Area-normalized profile scaled by the band weight."""
        lam = np.asarray(wavelengths_nm, dtype=float)
        d = lam - self.center_nm
        if self.shape == "lorentzian":
            half = self.fwhm_nm / 2.0
            pdf = (half / math.pi) / (d**2 + half**2)
        else:
            pdf = (2.0 / self.fwhm_nm) * math.sqrt(math.log(2.0) / math.pi) * np.exp(
                -4.0 * math.log(2.0) * d**2 / self.fwhm_nm**2)
        return self.weight * pdf

    def _reach_nm(self) -> float:
        # Lorentzian tails are heavy; carry them further than Gaussian ones.
        return (6.0 if self.shape == "lorentzian" else 3.0) * self.fwhm_nm


@dataclass(frozen=True)
class EmitterModel:
    """Zero-phonon line plus vibronic bands, weights summing to one."""

    zpl: EmissionBand
    vibronic: tuple[EmissionBand, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "vibronic", tuple(self.vibronic))
        total = self.zpl.weight + sum(b.weight for b in self.vibronic)
        if abs(total - 1.0) > _WEIGHT_TOL:
            raise ValueError(f"band weights must sum to 1, got {total!r}")

    @property
    def zpl_weight(self) -> float:
        """Fraction of the emission in the 0-0 channel (the branching ratio)."""
        return self.zpl.weight

    @property
    def bands(self) -> tuple[EmissionBand, ...]:
        return (self.zpl,) + self.vibronic

    def support(self) -> tuple[float, float]:
        lo = min(b.center_nm - b._reach_nm() for b in self.bands)
        hi = max(b.center_nm + b._reach_nm() for b in self.bands)
        return max(lo, 1.0), hi

    def default_grid(self, step_nm: float = 0.05) -> np.ndarray:
        lo, hi = self.support()
        n = max(int(round((hi - lo) / step_nm)) + 1, 2)
        return np.linspace(lo, hi, n)

    def sample(self, wavelengths_nm=None) -> Spectrum:
        """Emission model evaluated on a grid (default grid spans the support)."""
        grid = self.default_grid() if wavelengths_nm is None else np.asarray(wavelengths_nm, float)
        total = np.zeros_like(grid, dtype=float)
        for band in self.bands:
            total += band.profile(grid)
        return Spectrum(grid, total)

    def to_dict(self) -> dict:
        return {
            "zpl": {"center_nm": self.zpl.center_nm, "fwhm_nm": self.zpl.fwhm_nm,
                    "weight": self.zpl.weight},
            "vibronic": [
                {"center_nm": b.center_nm, "fwhm_nm": b.fwhm_nm, "weight": b.weight,
                 "shape": b.shape}
                for b in self.vibronic
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "EmitterModel":
        try:
            z = data["zpl"]
            zpl = EmissionBand(float(z["center_nm"]), float(z["fwhm_nm"]),
                               float(z["weight"]), str(z.get("shape", "lorentzian")))
            vib = tuple(
                EmissionBand(float(b["center_nm"]), float(b["fwhm_nm"]), float(b["weight"]),
                             str(b.get("shape", "gaussian")))
                for b in data.get("vibronic", ())
            )
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed emitter description: {exc}") from exc
        return cls(zpl, vib)


def linewidth_ghz_to_nm(fwhm_ghz: float, center_nm: float) -> float:
    """Convert a frequency linewidth to wavelength units at a given center."""
    if not fwhm_ghz > 0:
        raise ValueError("linewidth must be positive")
    return (center_nm * 1e-9) ** 2 * fwhm_ghz * 1e9 / SPEED_OF_LIGHT * 1e9


def default_dbt_model() -> EmitterModel:
    """Synthetic dibenzoterrylene-like room-temperature emission model.

    A 0-0 line at 785 nm carrying 30% of the emission, plus three Gaussian
    vibronic bands extending the spectrum to about 860 nm.  The parameters
    are illustrative; substitute a measured spectrum for quantitative work.
    """
    return EmitterModel(
        zpl=EmissionBand(785.0, 10.0, 0.30, "lorentzian"),
        vibronic=(
            EmissionBand(810.0, 18.0, 0.35, "gaussian"),
            EmissionBand(830.0, 22.0, 0.20, "gaussian"),
            EmissionBand(850.0, 28.0, 0.15, "gaussian"),
        ),
    )


def load_emitter(path) -> EmitterModel:
    with open(path, "r", encoding="utf-8") as fh:
        return EmitterModel.from_dict(json.load(fh))


def save_emitter(model: EmitterModel, path) -> None:
    Path(path).write_text(json.dumps(model.to_dict(), indent=2, sort_keys=True) + "\n",
                          encoding="utf-8")

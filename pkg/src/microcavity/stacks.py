"""Transfer-matrix optics for planar dielectric multilayer mirrors.

Characteristic 2x2 matrix method for lossless isotropic layers, following the
treatment in Macleod, "Thin-Film Optical Filters" (ch. 2).  Conventions used
throughout:

* layers are listed from the ambient side toward the substrate,
* the angle of incidence is measured in the ambient medium,
* tilted admittances are ``n cos(theta)`` for s and ``n / cos(theta)`` for p
  polarization (free-space admittance divided out),
* the power transmittance already contains the substrate/ambient admittance
  ratio, so ``R + T = 1`` holds exactly for lossless stacks.

Complex layer cosines are allowed, which covers evanescent propagation inside
low-index layers at steep incidence.  All functions are pure and safe to call
concurrently; grid evaluation reuses the same elementwise operations as the
single-wavelength path, so results are bit-identical either way.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .spectra import Spectrum

__all__ = [
    "SPEED_OF_LIGHT",
    "SILICA_INDEX",
    "TANTALA_INDEX",
    "TITANIA_INDEX",
    "ANTHRACENE_INDEX",
    "Layer",
    "LayerStack",
    "StackResponse",
    "Stopband",
    "StopbandWarning",
    "quarter_wave_stack",
    "stack_response",
    "reflectivity_spectrum",
    "transmittance_spectrum",
    "stopband",
    "stopband_width_estimate",
    "group_delay_length",
    "characterization_dbr",
    "emission_band_dbr",
    "bead_experiment_dbr",
    "load_stack",
    "save_stack",
]

SPEED_OF_LIGHT = 299792458.0  # m/s

# Handbook indices, dispersion-free.  The sputtered coatings are modelled as
# lossless dielectrics; measured roughness is low enough that scattering loss
# is ignored.  Override via stack files for other materials.
SILICA_INDEX = 1.46
TANTALA_INDEX = 2.10
TITANIA_INDEX = 2.35
ANTHRACENE_INDEX = 1.60

_DEFAULT_SUBSTRATE_INDEX = 1.5


class StopbandWarning(UserWarning):
    """Raised when a penetration depth is requested outside the stopband."""


@dataclass(frozen=True)
class Layer:
    """One lossless dielectric layer."""

    refractive_index: float
    thickness_nm: float

    def __post_init__(self):
        if not self.refractive_index >= 1.0:
            raise ValueError(f"refractive index {self.refractive_index} < 1 is not "
                             "supported by the lossless dielectric model")
        if not self.thickness_nm > 0.0:
            raise ValueError(f"layer thickness must be positive, got {self.thickness_nm}")


@dataclass(frozen=True)
class LayerStack:
    """Ordered layers between two half-spaces; first layer faces the ambient."""

    layers: tuple[Layer, ...] = ()
    ambient_index: float = 1.0
    substrate_index: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(self.layers))
        for side, n in (("ambient", self.ambient_index), ("substrate", self.substrate_index)):
            if not n >= 1.0:
                raise ValueError(f"{side} index {n} < 1 is non-physical here")

    def __len__(self) -> int:
        return len(self.layers)

    def reversed(self) -> "LayerStack":
        """The same physical structure viewed from the substrate side."""
        return LayerStack(tuple(self.layers[::-1]), self.substrate_index, self.ambient_index)

    def to_dict(self) -> dict:
        return {
            "ambient_index": self.ambient_index,
            "substrate_index": self.substrate_index,
            "layers": [
                {"index": layer.refractive_index, "thickness_nm": layer.thickness_nm}
                for layer in self.layers
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "LayerStack":
        try:
            layers = tuple(
                Layer(float(entry["index"]), float(entry["thickness_nm"]))
                for entry in data["layers"]
            )
            return cls(layers, float(data["ambient_index"]), float(data["substrate_index"]))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed stack description: {exc}") from exc


@dataclass(frozen=True)
class StackResponse:
    """Complex amplitudes and power coefficients at one evaluation point.

    ``T`` is the power transmittance including the substrate admittance
    factor, so ``R + T = 1`` for lossless stacks.
    """

    wavelength_nm: float
    angle_rad: float
    polarization: str
    r: complex
    t: complex
    R: float
    T: float


def quarter_wave_stack(n_high: float, n_low: float, n_bilayers: int,
                       center_wavelength_nm: float, low_index_on_top: bool = True,
                       ambient_index: float = 1.0,
                       substrate_index: float = _DEFAULT_SUBSTRATE_INDEX) -> LayerStack:
    """Build a quarter-wave high/low bilayer mirror.

    Each layer is ``center_wavelength / (4 n)`` thick.  With
    ``low_index_on_top`` the low-index material faces the ambient, which puts
    a field antinode at the top surface (where an emitter film would sit).

    Parameters
    ----------
    n_high, n_low : float
        Layer indices, ``n_high > n_low >= 1``.
    n_bilayers : int
        Number of high/low pairs; zero gives the bare interface.
    center_wavelength_nm : float
        Design wavelength in nm.
    """
    if n_low < 1.0 or n_high < 1.0:
        raise ValueError("refractive indices below 1 are non-physical here")
    if not n_high > n_low:
        raise ValueError(f"need n_high > n_low, got {n_high} <= {n_low}")
    if n_bilayers < 0:
        raise ValueError("n_bilayers must be >= 0")
    if not center_wavelength_nm > 0:
        raise ValueError("center wavelength must be positive")
    high = Layer(n_high, center_wavelength_nm / (4.0 * n_high))
    low = Layer(n_low, center_wavelength_nm / (4.0 * n_low))
    pair = (low, high) if low_index_on_top else (high, low)
    return LayerStack(pair * n_bilayers, ambient_index, substrate_index)


def _tilted_admittance(n, cos_t, polarization: str):
    return n * cos_t if polarization == "s" else n / cos_t


def _response_arrays(stack: LayerStack, wavelengths_nm: np.ndarray, angle_rad: float,
                     polarization: str):
    """Complex r, t and power R, T over a wavelength array (one pass per layer)."""
    if polarization not in ("s", "p"):
        raise ValueError(f"polarization must be 's' or 'p', got {polarization!r}")
    if not 0.0 <= angle_rad < math.pi / 2:
        raise ValueError(f"angle of incidence must lie in [0, pi/2), got {angle_rad}")
    lam = np.asarray(wavelengths_nm, dtype=float)
    if np.any(lam <= 0):
        raise ValueError("wavelengths must be positive")

    n0 = stack.ambient_index
    ns = stack.substrate_index
    kx = n0 * math.sin(angle_rad)  # conserved tangential component (Snell)
    eta0 = _tilted_admittance(n0, math.cos(angle_rad), polarization)
    cos_s = np.sqrt(1.0 - (kx / ns) ** 2 + 0j)
    eta_s = _tilted_admittance(ns, cos_s, polarization)

    m11 = np.ones_like(lam, dtype=complex)
    m12 = np.zeros_like(lam, dtype=complex)
    m21 = np.zeros_like(lam, dtype=complex)
    m22 = np.ones_like(lam, dtype=complex)
    for layer in stack.layers:
        n = layer.refractive_index
        cos_l = np.sqrt(1.0 - (kx / n) ** 2 + 0j)
        eta = _tilted_admittance(n, cos_l, polarization)
        delta = 2.0 * np.pi * n * layer.thickness_nm * cos_l / lam
        c = np.cos(delta)
        s = np.sin(delta)
        a12 = 1j * s / eta
        a21 = 1j * eta * s
        m11, m12, m21, m22 = (m11 * c + m12 * a21, m11 * a12 + m12 * c,
                              m21 * c + m22 * a21, m21 * a12 + m22 * c)

    b = m11 + m12 * eta_s
    cc = m21 + m22 * eta_s
    denom = eta0 * b + cc
    r = (eta0 * b - cc) / denom
    t = 2.0 * eta0 / denom
    big_r = np.abs(r) ** 2
    big_t = np.abs(t) ** 2 * np.real(eta_s) / eta0
    return r, t, big_r, big_t


def stack_response(stack: LayerStack, wavelength_nm: float, angle_rad: float = 0.0,
                   polarization: str = "s") -> StackResponse:
    """Complex reflection/transmission of the stack at one (wavelength, angle)."""
    lam = np.asarray([float(wavelength_nm)])
    r, t, big_r, big_t = _response_arrays(stack, lam, angle_rad, polarization)
    return StackResponse(float(wavelength_nm), float(angle_rad), polarization,
                         complex(r[0]), complex(t[0]), float(big_r[0]), float(big_t[0]))


def _spectrum_grid(wavelengths_nm) -> np.ndarray:
    grid = np.asarray(wavelengths_nm, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError("wavelength grid must be a non-empty 1-d array")
    if grid.size > 1 and not np.all(np.diff(grid) > 0):
        raise ValueError("wavelength grid must be strictly ascending")
    return grid


def reflectivity_spectrum(stack: LayerStack, wavelengths_nm, angle_rad: float = 0.0,
                          polarization: str = "s") -> Spectrum:
    """Power reflectance sampled on an ascending wavelength grid."""
    grid = _spectrum_grid(wavelengths_nm)
    _, _, big_r, _ = _response_arrays(stack, grid, angle_rad, polarization)
    return Spectrum(grid, big_r)


def transmittance_spectrum(stack: LayerStack, wavelengths_nm, angle_rad: float = 0.0,
                           polarization: str = "s") -> Spectrum:
    """Power transmittance sampled on an ascending wavelength grid."""
    grid = _spectrum_grid(wavelengths_nm)
    _, _, _, big_t = _response_arrays(stack, grid, angle_rad, polarization)
    return Spectrum(grid, big_t)


@dataclass(frozen=True)
class Stopband:
    """Contiguous wavelength interval where the reflectance stays above threshold."""

    lambda_min_nm: float
    lambda_max_nm: float

    @property
    def width_nm(self) -> float:
        return self.lambda_max_nm - self.lambda_min_nm

    @property
    def center_nm(self) -> float:
        return 0.5 * (self.lambda_min_nm + self.lambda_max_nm)

    def contains(self, wavelength_nm: float) -> bool:
        return self.lambda_min_nm <= wavelength_nm <= self.lambda_max_nm


def stopband(stack: LayerStack, threshold: float = 0.99,
             search_range: tuple[float, float] = (400.0, 1200.0),
             angle_rad: float = 0.0, polarization: str = "s",
             samples: int = 2001) -> Stopband | None:
    """Widest contiguous interval with ``R >= threshold``, or None if none exists.

    The interval is located on a dense grid over ``search_range`` and its
    edges are then refined by bisection on ``R - threshold``.
    """
    if not 0.0 < threshold < 1.0:
        raise ValueError("threshold must lie strictly between 0 and 1")
    lo, hi = float(search_range[0]), float(search_range[1])
    if not 0.0 < lo < hi:
        raise ValueError("search range must be an ascending positive interval")
    if samples < 16:
        raise ValueError("need at least 16 samples to bracket a stopband")

    grid = np.linspace(lo, hi, samples)
    _, _, big_r, _ = _response_arrays(stack, grid, angle_rad, polarization)
    above = big_r >= threshold
    if not above.any():
        return None

    # widest run of consecutive True
    best_start = best_stop = -1
    best_len = 0
    i = 0
    while i < samples:
        if above[i]:
            j = i
            while j + 1 < samples and above[j + 1]:
                j += 1
            if j - i + 1 > best_len:
                best_len = j - i + 1
                best_start, best_stop = i, j
            i = j + 1
        else:
            i += 1

    def refl(w: float) -> float:
        return stack_response(stack, w, angle_rad, polarization).R

    def bisect_edge(w_out: float, w_in: float) -> float:
        # R(w_in) >= threshold > R(w_out); returns the crossing
        for _ in range(60):
            mid = 0.5 * (w_out + w_in)
            if refl(mid) >= threshold:
                w_in = mid
            else:
                w_out = mid
        return w_in

    left = grid[best_start]
    if best_start > 0:
        left = bisect_edge(grid[best_start - 1], grid[best_start])
    right = grid[best_stop]
    if best_stop < samples - 1:
        right = bisect_edge(grid[best_stop + 1], grid[best_stop])
    return Stopband(float(left), float(right))


def stopband_width_estimate(n_high: float, n_low: float, center_wavelength_nm: float) -> float:
    """First-order analytic stopband width of a quarter-wave mirror, in nm.

    ``delta_lambda / lambda_0 = (4 / pi) arcsin((n_H - n_L) / (n_H + n_L))``.
    """
    contrast = (n_high - n_low) / (n_high + n_low)
    return center_wavelength_nm * (4.0 / math.pi) * math.asin(contrast)


def group_delay_length(stack: LayerStack, wavelength_nm: float, angle_rad: float = 0.0,
                       polarization: str = "s", rel_step: float = 1e-4,
                       reliability_threshold: float = 0.9) -> float:
    """Effective penetration depth of the mirror in micrometers.

    Computed from the frequency slope of the reflection phase,
    ``L_pen = -(c / 2) dphi/domega``, by a central finite difference with a
    relative frequency step ``rel_step``.  Inside the stopband the phase is a
    smooth, nearly linear function and the result is the extra length the
    mirror adds to a resonator.  Outside the stopband the notion loses
    meaning; a :class:`StopbandWarning` is emitted when the reflectance at the
    probe wavelength falls below ``reliability_threshold``.
    """
    if not wavelength_nm > 0:
        raise ValueError("wavelength must be positive")
    if not 0.0 < rel_step < 0.01:
        raise ValueError("rel_step must be a small positive fraction")
    lam0 = float(wavelength_nm)
    # omega*(1 +/- h)  <->  lambda / (1 +/- h)
    lam = np.asarray([lam0 / (1.0 + rel_step), lam0, lam0 / (1.0 - rel_step)])
    r, _, big_r, _ = _response_arrays(stack, lam, angle_rad, polarization)

    phi0 = float(np.angle(r[1]))

    def near(phase: float) -> float:
        # shift onto the branch containing phi0
        return phi0 + math.remainder(phase - phi0, 2.0 * math.pi)

    phi_plus = near(float(np.angle(r[0])))   # at omega*(1+h)
    phi_minus = near(float(np.angle(r[2])))  # at omega*(1-h)

    omega0 = 2.0 * math.pi * SPEED_OF_LIGHT / (lam0 * 1e-9)
    dphi_domega = (phi_plus - phi_minus) / (2.0 * omega0 * rel_step)
    length_um = -0.5 * SPEED_OF_LIGHT * dphi_domega * 1e6

    if float(big_r[1]) < reliability_threshold:
        warnings.warn(
            f"reflectance {float(big_r[1]):.3f} at {lam0:.1f} nm is below "
            f"{reliability_threshold}; the wavelength is outside the stopband and "
            "the penetration depth is unreliable",
            StopbandWarning, stacklevel=2)
    return length_um


# ---------------------------------------------------------------------------
# Mirror presets for the three coating runs used across the experiments.
# Layer counts are as built; center wavelengths are reconstructions chosen so
# the computed stopbands match the measured band gaps.

def characterization_dbr(n_bilayers: int = 13, center_nm: float = 780.0) -> LayerStack:
    """Silica/tantala quarter-wave mirror for the 780 nm probe laser band."""
    return quarter_wave_stack(TANTALA_INDEX, SILICA_INDEX, n_bilayers, center_nm)


def emission_band_dbr(n_bilayers: int = 4, center_nm: float = 772.0) -> LayerStack:
    """Silica/tantala mirror whose gap spans the dye emission band (~685-880 nm).

    The 4-bilayer default is the thin coating used under the doped film; pass
    a larger ``n_bilayers`` for a fully reflective version of the same design.
    """
    return quarter_wave_stack(TANTALA_INDEX, SILICA_INDEX, n_bilayers, center_nm)


def bead_experiment_dbr(n_bilayers: int = 12, center_nm: float = 592.0) -> LayerStack:
    """Silica/titania mirror for the bead mapping band (~524-684 nm)."""
    return quarter_wave_stack(TITANIA_INDEX, SILICA_INDEX, n_bilayers, center_nm)


def load_stack(path) -> LayerStack:
    """Read a stack description from a JSON file."""
    with open(path, "r", encoding="utf-8") as fh:
        return LayerStack.from_dict(json.load(fh))


def save_stack(stack: LayerStack, path) -> None:
    Path(path).write_text(json.dumps(stack.to_dict(), indent=2, sort_keys=True) + "\n",
                          encoding="utf-8")

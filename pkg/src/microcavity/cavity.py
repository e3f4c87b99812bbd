"""Plano-concave Fabry-Perot resonator relations.

Finesse, free spectral range, resonance condition, Airy transmission,
transverse-mode structure and Gaussian mode geometry for a short cavity
formed by a curved micromirror facing a planar high reflector.  The Gaussian
beam relations are the standard resonator results (Kogelnik and Li, Appl.
Opt. 5, 1550 (1966)); the mode volume uses the standing-wave factor,
``V = pi w0^2 L / 4``.

Unit conventions: lengths and radii of curvature in micrometers, wavelengths
and length splittings in nanometers, angles in radians.  All functions are
pure and deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from numpy.polynomial.hermite import hermval

from .stacks import SPEED_OF_LIGHT, LayerStack, stack_response

__all__ = [
    "UnstableCavityError",
    "MirrorSpec",
    "CavityGeometry",
    "TransverseMode",
    "ModeShape",
    "FreeSpectralRange",
    "gold_mirror",
    "finesse_from_reflectivities",
    "finesse_from_linewidth",
    "free_spectral_range",
    "resonance_length",
    "airy_transmission",
    "plane_wave_peak_transmission",
    "transverse_mode_spacing",
    "radius_from_splitting",
    "gaussian_waist",
    "mode_volume",
    "quality_factor",
    "hermite_gauss_intensity",
    "cavity_report",
]

# intensity FWHM of a Gaussian mode in terms of the 1/e field half-width w0
FWHM_PER_WAIST = math.sqrt(2.0 * math.log(2.0))


class UnstableCavityError(ValueError):
    """Plano-concave geometry outside the stability range 0 < L < r1."""


def _require_stable(length_um: float, radius_um: float) -> None:
    if not 0.0 < length_um < radius_um:
        raise UnstableCavityError(
            f"unstable plano-concave geometry: need 0 < L < r1, got "
            f"L = {length_um} um, r1 = {radius_um} um")


@dataclass(frozen=True)
class MirrorSpec:
    """Power reflectivity, transmission and reflection phase of one mirror.

    ``kind`` is ``"stack"`` when the values were derived from a layer stack
    (kept as ``source_stack``) and ``"fixed"`` otherwise.  The deficit
    ``1 - R - T`` is loss.
    """

    reflectivity: float
    transmission: float = 0.0
    reflection_phase_rad: float = math.pi
    source_stack: LayerStack | None = None

    def __post_init__(self):
        if not 0.0 < self.reflectivity <= 1.0:
            raise ValueError(f"reflectivity must lie in (0, 1], got {self.reflectivity}")
        if self.transmission < 0.0 or self.reflectivity + self.transmission > 1.0 + 1e-12:
            raise ValueError("need 0 <= T <= 1 - R (the deficit is loss)")

    @property
    def kind(self) -> str:
        return "stack" if self.source_stack is not None else "fixed"

    @property
    def loss(self) -> float:
        return max(0.0, 1.0 - self.reflectivity - self.transmission)

    @classmethod
    def from_stack(cls, stack: LayerStack, wavelength_nm: float, angle_rad: float = 0.0,
                   polarization: str = "s") -> "MirrorSpec":
        resp = stack_response(stack, wavelength_nm, angle_rad, polarization)
        return cls(resp.R, resp.T, float(np.angle(resp.r)), stack)


def gold_mirror(reflectivity: float = 0.97, transmission: float = 0.0) -> MirrorSpec:
    """Scalar model of the gold-coated micromirror: fixed R, reflection phase pi.

    Metal dispersion is deliberately not modelled; the measured reflectivity
    is the one quantity the rest of the toolkit consumes.
    """
    return MirrorSpec(reflectivity, transmission, math.pi)


@dataclass(frozen=True)
class CavityGeometry:
    """Plano-concave resonator: optical length, order, mirror curvature, wavelength."""

    length_um: float
    order: int
    radius_um: float
    wavelength_nm: float

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("longitudinal order must be >= 1")
        if not self.wavelength_nm > 0:
            raise ValueError("wavelength must be positive")
        _require_stable(self.length_um, self.radius_um)

    @classmethod
    def on_resonance(cls, order: int, wavelength_nm: float, radius_um: float) -> "CavityGeometry":
        return cls(resonance_length(order, wavelength_nm), order, radius_um, wavelength_nm)


@dataclass(frozen=True)
class TransverseMode:
    """Hermite-Gauss TEM_pn indices; the combined order is p + n."""

    p: int = 0
    n: int = 0

    def __post_init__(self):
        if self.p < 0 or self.n < 0:
            raise ValueError("mode indices must be non-negative")

    @property
    def order(self) -> int:
        return self.p + self.n


@dataclass(frozen=True)
class ModeShape:
    """Gaussian mode geometry at the planar mirror."""

    waist_um: float          # 1/e half-width of the field amplitude
    fwhm_um: float           # intensity full width at half maximum
    volume_um3: float
    volume_lambda3: float


class FreeSpectralRange(NamedTuple):
    frequency_thz: float
    wavelength_nm: float


def finesse_from_reflectivities(r1: float, r2: float) -> float:
    """Finesse of a two-mirror resonator,
    ``F = pi (R1 R2)^(1/4) / (1 - sqrt(R1 R2))``."""
    for name, value in (("R1", r1), ("R2", r2)):
        if not 0.0 < value < 1.0:
            raise ValueError(f"{name} must lie strictly between 0 and 1, got {value}")
    root = math.sqrt(r1 * r2)
    return math.pi * math.sqrt(root) / (1.0 - root)


def finesse_from_linewidth(linewidth_nm: float, wavelength_nm: float) -> float:
    """Finesse from a length-scan linewidth, ``F = lambda / (2 dL)``.

    ``linewidth_nm`` is the FWHM of one resonance expressed as mirror
    displacement; the half-wavelength resonance spacing makes the ratio a
    finesse.
    """
    if not linewidth_nm > 0:
        raise ValueError("linewidth must be positive")
    return wavelength_nm / (2.0 * linewidth_nm)


def free_spectral_range(length_um: float, wavelength_nm: float) -> FreeSpectralRange:
    """FSR of a cavity of optical length L: ``c/2L`` in THz, ``lambda^2/2L`` in nm."""
    if not length_um > 0:
        raise ValueError("cavity length must be positive")
    freq_hz = SPEED_OF_LIGHT / (2.0 * length_um * 1e-6)
    wl_nm = wavelength_nm**2 / (2.0 * length_um * 1e3)
    return FreeSpectralRange(freq_hz / 1e12, wl_nm)


def resonance_length(order: int, wavelength_nm: float) -> float:
    """Resonant optical length ``L = m lambda / 2`` in micrometers."""
    if order < 1:
        raise ValueError("longitudinal order must be >= 1")
    return order * wavelength_nm / 2.0 * 1e-3


def airy_transmission(x, finesse: float, fsr: float, peak_transmission: float = 1.0):
    """Periodic Fabry-Perot transmission versus detuning.

    ``T(x) = T_peak / (1 + (2F/pi)^2 sin^2(pi x / FSR))`` with ``x`` and
    ``fsr`` in the same units (length or frequency).  The detuning is reduced
    modulo the FSR first, so the periodicity is exact.
    """
    if not finesse > 0:
        raise ValueError("finesse must be positive")
    if not fsr > 0:
        raise ValueError("free spectral range must be positive")
    if not 0.0 < peak_transmission <= 1.0:
        raise ValueError("peak transmission must lie in (0, 1]")
    u = np.remainder(np.asarray(x, dtype=float), fsr)
    coeff = (2.0 * finesse / math.pi) ** 2
    out = peak_transmission / (1.0 + coeff * np.sin(math.pi * u / fsr) ** 2)
    return out if out.ndim else float(out)


def plane_wave_peak_transmission(t1: float, t2: float, r1: float, r2: float) -> float:
    """On-resonance transmission ``T1 T2 / (1 - sqrt(R1 R2))^2``.

    Exposed for transmission budgets; nothing in the toolkit applies it
    implicitly, because it requires the transmission/loss split of both
    mirrors, which a reflectivity measurement alone does not give.
    """
    for name, value in (("T1", t1), ("T2", t2)):
        if value < 0:
            raise ValueError(f"{name} must be non-negative")
    for name, value in (("R1", r1), ("R2", r2)):
        if not 0.0 < value < 1.0:
            raise ValueError(f"{name} must lie strictly between 0 and 1")
    return t1 * t2 / (1.0 - math.sqrt(r1 * r2)) ** 2


def transverse_mode_spacing(length_um: float, radius_um: float, wavelength_nm: float,
                            delta_order: int = 1) -> float:
    """Length offset between transverse mode groups, in nm.

    ``dL = (lambda / 2 pi) d(n+p) sqrt(L / r1)``, the small-Gouy-phase form
    valid for L much shorter than the mirror curvature radius.
    """
    _require_stable(length_um, radius_um)
    return (wavelength_nm / (2.0 * math.pi)) * delta_order * math.sqrt(length_um / radius_um)


def radius_from_splitting(splitting_nm: float, length_um: float, wavelength_nm: float) -> float:
    """Mirror radius of curvature from a measured transverse splitting, in um.

    Inverts :func:`transverse_mode_spacing` for ``delta_order = 1``:
    ``r1 = L (lambda / (2 pi dL))^2``.
    """
    if not splitting_nm > 0:
        raise ValueError("splitting must be positive")
    if not length_um > 0:
        raise ValueError("cavity length must be positive")
    return length_um * (wavelength_nm / (2.0 * math.pi * splitting_nm)) ** 2


def gaussian_waist(length_um: float, radius_um: float, wavelength_nm: float) -> ModeShape:
    """Gaussian mode at the planar mirror of a stable plano-concave resonator.

    ``w0^2 = (lambda / pi) sqrt(L (r1 - L))``; the intensity FWHM is
    ``w0 sqrt(2 ln 2)`` and the standing-wave mode volume ``pi w0^2 L / 4``.
    """
    _require_stable(length_um, radius_um)
    lam_um = wavelength_nm * 1e-3
    waist = math.sqrt((lam_um / math.pi) * math.sqrt(length_um * (radius_um - length_um)))
    vol_um3, vol_lam3 = mode_volume(waist, length_um, wavelength_nm)
    return ModeShape(waist, waist * FWHM_PER_WAIST, vol_um3, vol_lam3)


def mode_volume(waist_um: float, length_um: float, wavelength_nm: float,
                penetration_um: float = 0.0) -> tuple[float, float]:
    """Standing-wave mode volume ``V = pi w0^2 L / 4`` in um^3 and in lambda^3.

    ``penetration_um`` optionally adds the mirror group-delay length to L for
    an effective-length variant; the default keeps the bare geometric length.
    """
    if not (waist_um > 0 and length_um > 0 and wavelength_nm > 0):
        raise ValueError("waist, length and wavelength must be positive")
    if penetration_um < 0:
        raise ValueError("penetration length cannot be negative")
    length = length_um + penetration_um
    vol = math.pi * waist_um**2 * length / 4.0
    return vol, vol / (wavelength_nm * 1e-3) ** 3


def quality_factor(finesse: float, order: int) -> float:
    """Q of the m-th longitudinal resonance, ``Q = F m``."""
    if not finesse > 0:
        raise ValueError("finesse must be positive")
    if order < 1:
        raise ValueError("longitudinal order must be >= 1")
    return finesse * order


def hermite_gauss_intensity(mode: TransverseMode, waist_um: float, x_um, y_um):
    """Relative TEM_pn intensity profile at the planar mirror.

    ``|H_p(sqrt(2) x / w) H_n(sqrt(2) y / w)|^2 exp(-2 (x^2 + y^2) / w^2)``,
    unnormalized so the TEM_00 peak equals 1.  Accepts scalars or arrays
    (broadcast together).
    """
    if not waist_um > 0:
        raise ValueError("waist must be positive")
    x = np.asarray(x_um, dtype=float)
    y = np.asarray(y_um, dtype=float)
    coeff_p = np.zeros(mode.p + 1)
    coeff_p[mode.p] = 1.0
    coeff_n = np.zeros(mode.n + 1)
    coeff_n[mode.n] = 1.0
    hx = hermval(math.sqrt(2.0) * x / waist_um, coeff_p)
    hy = hermval(math.sqrt(2.0) * y / waist_um, coeff_n)
    out = (hx * hy) ** 2 * np.exp(-2.0 * (x**2 + y**2) / waist_um**2)
    return out if np.ndim(out) else float(out)


def cavity_report(r1_reflectivity: float, r2_reflectivity: float, order: int,
                  wavelength_nm: float, radius_um: float) -> dict:
    """Summary of the resonator at the m-th resonance, as a flat dict.

    Keys: finesse, fsr_nm, fsr_thz, length_um, order_m, radius_um, waist_um,
    fwhm_um, mode_volume_um3, mode_volume_lambda3, q_factor.
    """
    finesse = finesse_from_reflectivities(r1_reflectivity, r2_reflectivity)
    length_um = resonance_length(order, wavelength_nm)
    fsr = free_spectral_range(length_um, wavelength_nm)
    shape = gaussian_waist(length_um, radius_um, wavelength_nm)
    return {
        "finesse": finesse,
        "fsr_nm": fsr.wavelength_nm,
        "fsr_thz": fsr.frequency_thz,
        "length_um": length_um,
        "order_m": order,
        "radius_um": radius_um,
        "waist_um": shape.waist_um,
        "fwhm_um": shape.fwhm_um,
        "mode_volume_um3": shape.volume_um3,
        "mode_volume_lambda3": shape.volume_lambda3,
        "q_factor": quality_factor(finesse, order),
    }

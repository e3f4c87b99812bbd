"""Emitter-cavity coupling predictions.

Weak-coupling (Purcell) regime only: the peak rate enhancement of a closed
cavity, ``F_p = 3 Q lambda^3 / (4 pi^2 V)``, is reduced for an open scanning
microcavity by the fraction of the dipole's solid angle the mode subtends and
by the spectral overlap of the cavity line with the emission.  The same
module carries the room-temperature observables: the spectrally filtered
single-molecule spectrum behind the cavity and a simplified scalar model of
the back-focal-plane emission pattern.

Conventions documented here because they fix absolute scales:

* solid-angle fraction: ``(theta/2)^2`` with ``theta = lambda / (pi w0)``,
  i.e. the far-field cone of the Gaussian mode over the full sphere, one
  output direction.  Alternative definitions differ by factors of a few and
  rescale every downstream enhancement accordingly.
* spectral overlap: energy-weighted,
  ``int S T dl / (T_peak int S dl)``, evaluated numerically.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .cavity import CavityGeometry, airy_transmission, gaussian_waist, transverse_mode_spacing
from .emitters import EmitterModel
from .spectra import Spectrum, _trapezoid
from .stacks import LayerStack, _response_arrays

__all__ = [
    "PurcellReport",
    "SpectralOverlapWarning",
    "purcell_max",
    "solid_angle_fraction",
    "spectral_overlap",
    "effective_enhancement",
    "branching_ratio",
    "required_enhancement",
    "purcell_report",
    "cavity_filter",
    "filtered_spectrum",
    "bfp_radial_profile",
]


class SpectralOverlapWarning(UserWarning):
    """The cavity resonance misses the emitter spectrum entirely."""


def purcell_max(q_factor: float, mode_volume_lambda3: float) -> float:
    """Peak Purcell factor ``3 Q / (4 pi^2 V)`` with V in units of lambda^3."""
    if not q_factor > 0:
        raise ValueError("quality factor must be positive")
    if not mode_volume_lambda3 > 0:
        raise ValueError("mode volume must be positive")
    return 3.0 * q_factor / (4.0 * math.pi**2 * mode_volume_lambda3)


def solid_angle_fraction(waist_um: float, wavelength_nm: float) -> float:
    """Fraction of the full solid angle subtended by the cavity mode.

    Far-field divergence ``theta = lambda / (pi w0)`` of the Gaussian mode;
    the returned fraction is ``theta^2 / 4`` (one output direction).
    """
    if not waist_um > 0:
        raise ValueError("waist must be positive")
    theta = (wavelength_nm * 1e-3) / (math.pi * waist_um)
    return theta**2 / 4.0


def spectral_overlap(emitter: EmitterModel, cavity_fwhm_nm: float,
                     resonant_wavelength_nm: float, fsr_nm: float,
                     grid=None) -> float:
    """Energy-weighted overlap of the cavity line with the emission spectrum.

    ``int S(l) T(l) dl / (T_peak int S(l) dl)`` where T is the Airy comb with
    linewidth ``cavity_fwhm_nm``, period ``fsr_nm`` and one resonance pinned
    at ``resonant_wavelength_nm``.  Lies in [0, 1]; approaches 1 for emission
    much narrower than the cavity line, and ``(pi/2) fwhm / width`` for
    emission much broader.
    """
    if not cavity_fwhm_nm > 0:
        raise ValueError("cavity linewidth must be positive")
    if not fsr_nm > cavity_fwhm_nm:
        raise ValueError("free spectral range must exceed the cavity linewidth")
    lo, hi = emitter.support()
    if not lo <= resonant_wavelength_nm <= hi:
        warnings.warn(
            f"resonance at {resonant_wavelength_nm} nm lies outside the emitter "
            f"support [{lo:.1f}, {hi:.1f}] nm; overlap is zero",
            SpectralOverlapWarning, stacklevel=2)
        return 0.0
    if grid is None:
        narrowest = min(b.fwhm_nm for b in emitter.bands)
        step = min(cavity_fwhm_nm, narrowest) / 25.0
        n = int(round((hi - lo) / step)) + 1
        grid = np.linspace(lo, hi, n)
    spec = emitter.sample(grid)
    finesse = fsr_nm / cavity_fwhm_nm
    comb = airy_transmission(spec.wavelength_nm - resonant_wavelength_nm, finesse, fsr_nm)
    numer = Spectrum(spec.wavelength_nm, spec.value * comb).total()
    denom = spec.total()
    return float(numer / denom)


def effective_enhancement(peak_purcell: float, solid_fraction: float, overlap: float) -> float:
    """Open-cavity modification of the radiative rate: the product of the
    closed-cavity Purcell factor and the two reduction factors."""
    if peak_purcell < 0:
        raise ValueError("Purcell factor must be non-negative")
    for name, value in (("solid-angle fraction", solid_fraction), ("overlap", overlap)):
        if not 0.0 <= value <= 1.0:
            raise ValueError(f"{name} must lie in [0, 1], got {value}")
    return peak_purcell * solid_fraction * overlap


def branching_ratio(alpha0: float, enhancement: float) -> float:
    """Branching ratio after multiplying the 0-0 rate by ``enhancement``.

    ``alpha' = E a0 / (E a0 + 1 - a0)``: the 0-0 rate is scaled while the
    red-shifted emission is untouched.
    """
    if not 0.0 < alpha0 < 1.0:
        raise ValueError("the bare branching ratio must lie strictly between 0 and 1")
    if enhancement < 0:
        raise ValueError("rate enhancement must be non-negative")
    scaled = enhancement * alpha0
    return scaled / (scaled + (1.0 - alpha0))


def required_enhancement(alpha0: float, target: float) -> float:
    """0-0 rate factor needed to reach a target branching ratio.

    Exact inverse of :func:`branching_ratio`:
    ``E = target (1 - a0) / (a0 (1 - target))``.  Targets at or below the
    bare ratio are rejected; rate suppression is not modelled.
    """
    if not 0.0 < alpha0 < 1.0:
        raise ValueError("the bare branching ratio must lie strictly between 0 and 1")
    if not alpha0 < target < 1.0:
        raise ValueError(f"target must lie strictly between alpha0={alpha0} and 1")
    return target * (1.0 - alpha0) / (alpha0 * (1.0 - target))


@dataclass(frozen=True)
class PurcellReport:
    """Factor breakdown from the closed-cavity peak to the branching ratio."""

    purcell_max: float
    solid_angle_fraction: float
    spectral_overlap: float
    effective_enhancement: float
    branching_ratio_after: float

    def __post_init__(self):
        if self.effective_enhancement > self.purcell_max * (1.0 + 1e-12):
            raise ValueError("effective enhancement cannot exceed the peak Purcell factor")

    def to_dict(self) -> dict:
        return {
            "purcell_max": self.purcell_max,
            "solid_angle_fraction": self.solid_angle_fraction,
            "spectral_overlap": self.spectral_overlap,
            "effective_enhancement": self.effective_enhancement,
            "branching_ratio_after": self.branching_ratio_after,
        }


def purcell_report(q_factor: float, mode_volume_lambda3: float, solid_fraction: float,
                   overlap: float, alpha0: float) -> PurcellReport:
    """Compose the enhancement chain into a report.

    The branching ratio uses the total 0-0 rate factor ``1 + modification``:
    in an open resonator the free-space decay persists and the cavity channel
    adds to it.
    """
    peak = purcell_max(q_factor, mode_volume_lambda3)
    eff = effective_enhancement(peak, solid_fraction, overlap)
    after = branching_ratio(alpha0, 1.0 + eff)
    return PurcellReport(peak, solid_fraction, overlap, eff, after)


def cavity_filter(wavelengths_nm, finesse: float, length_um: float,
                  resonant_wavelength_nm: float, transverse_orders=(0,),
                  transverse_weights=None, radius_um: float | None = None,
                  peak_transmission: float = 1.0) -> np.ndarray:
    """Fixed-length cavity transmission versus wavelength.

    One Airy comb per transverse order; order t resonates at a length shorter
    by ``t (lambda / 2 pi) sqrt(L / r1)`` than the fundamental, so its peaks
    sit blue of the TEM00 peaks.  The optical length is re-anchored to the
    nearest integer order so the fundamental comb peaks exactly at
    ``resonant_wavelength_nm``.
    """
    if not finesse > 0:
        raise ValueError("finesse must be positive")
    if not length_um > 0:
        raise ValueError("cavity length must be positive")
    if not 0.0 < peak_transmission <= 1.0:
        raise ValueError("peak transmission must lie in (0, 1]")
    orders = tuple(int(t) for t in transverse_orders)
    if any(t < 0 for t in orders):
        raise ValueError("transverse orders must be non-negative")
    if transverse_weights is None:
        weights = (1.0,) * len(orders)
    else:
        weights = tuple(float(w) for w in transverse_weights)
        if len(weights) != len(orders):
            raise ValueError("one weight per transverse order is required")
    if any(t > 0 for t in orders) and radius_um is None:
        raise ValueError("higher transverse orders require the mirror radius of curvature")

    lam = np.asarray(wavelengths_nm, dtype=float)
    order_m = int(round(2.0 * length_um * 1e3 / resonant_wavelength_nm))
    if order_m < 1:
        raise ValueError("cavity is shorter than half the resonant wavelength")
    length_nm = order_m * resonant_wavelength_nm / 2.0

    coeff = (2.0 * finesse / math.pi) ** 2
    total = np.zeros_like(lam)
    for t, w in zip(orders, weights):
        if t == 0:
            offset = 0.0
        else:
            offset = transverse_mode_spacing(length_nm * 1e-3, radius_um,
                                             resonant_wavelength_nm, t)
        phase = 2.0 * math.pi * (length_nm - offset) / lam
        total += w * peak_transmission / (1.0 + coeff * np.sin(phase) ** 2)
    return total


def filtered_spectrum(emission: Spectrum, finesse: float, length_um: float,
                      resonant_wavelength_nm: float, leak_background=0.0,
                      transverse_orders=(0,), transverse_weights=None,
                      radius_um: float | None = None,
                      peak_transmission: float = 1.0) -> Spectrum:
    """Emission spectrum seen through the cavity.

    ``S_out = S (T_cavity + B)``: the cavity passes the resonant slivers of
    the emission and the background term B models light leaking around the
    resonator (a scalar, or a Spectrum resampled onto the emission grid).
    Purely multiplicative, which is what distinguishes filtering from an
    actual radiative-rate redistribution.
    """
    comb = cavity_filter(emission.wavelength_nm, finesse, length_um,
                         resonant_wavelength_nm, transverse_orders,
                         transverse_weights, radius_um, peak_transmission)
    if isinstance(leak_background, Spectrum):
        b_lo, b_hi = leak_background.support
        e_lo, e_hi = emission.support
        if b_hi < e_lo or b_lo > e_hi:
            raise ValueError("background spectrum does not overlap the emission grid")
        background = leak_background.resample(emission.wavelength_nm).value
    else:
        background = float(leak_background)
        if background < 0:
            raise ValueError("background must be non-negative")
    return Spectrum(emission.wavelength_nm, emission.value * (comb + background))


def bfp_radial_profile(emitter: EmitterModel, stack: LayerStack, angles_rad,
                       cavity_on: bool = False,
                       geometry: CavityGeometry | None = None,
                       lobe_scale: float = 1.0, grid=None) -> np.ndarray:
    """Simplified scalar back-focal-plane radial intensity profile.

    Without the top mirror the profile at emission angle theta (measured in
    the ambient medium on the emitter side) is the unpolarized average of the
    s and p stack transmittances integrated against the emission spectrum:
    emission inside the stopband escapes only at angles where the blue-shifted
    band edge has moved past it, which produces a ring.  With the cavity on
    resonance a Gaussian lobe of 1/e^2 angular half-width
    ``theta_0 = lambda / (pi w0)`` is added at the center, scaled to
    ``lobe_scale`` times the off-resonance maximum.

    Dipole orientation factors are not modelled; the thin-film samples keep
    the transition dipoles in the mirror plane, and this profile is meant for
    structural comparisons only.
    """
    angles = np.asarray(angles_rad, dtype=float)
    if np.any(angles < 0) or np.any(angles >= math.pi / 2):
        raise ValueError("emission angles must lie in [0, pi/2)")
    spec = emitter.sample(grid)
    weights = spec.value / spec.total()

    profile = np.empty_like(angles)
    for i, theta in enumerate(angles):
        _, _, _, t_s = _response_arrays(stack, spec.wavelength_nm, float(theta), "s")
        _, _, _, t_p = _response_arrays(stack, spec.wavelength_nm, float(theta), "p")
        t_mean = 0.5 * (t_s + t_p)
        profile[i] = _trapezoid(weights * t_mean, spec.wavelength_nm)

    if cavity_on:
        if geometry is None:
            raise ValueError("the on-resonance lobe requires the cavity geometry")
        shape = gaussian_waist(geometry.length_um, geometry.radius_um,
                               geometry.wavelength_nm)
        theta0 = (geometry.wavelength_nm * 1e-3) / (math.pi * shape.waist_um)
        lobe = lobe_scale * float(profile.max()) * np.exp(-2.0 * (angles / theta0) ** 2)
        profile = profile + lobe
    return profile

"""Refractive and group index, sub/superluminal classification, slab propagation.

Field convention: ``E(z, t) = Re[a(t) exp(i (k z - w t))]`` with the
envelope expanded as ``a(t) = sum_k A_k exp(-i W_k t)`` around the carrier,
so that a slab of length ``L`` multiplies each component by
``exp(i n(w) w L / c)``.  ``Im n > 0`` is loss.
"""

from dataclasses import dataclass

import numpy as np

from .constants import C


@dataclass(frozen=True)
class DispersionResult:
    omega_grid: np.ndarray
    n_complex: np.ndarray
    n_group: np.ndarray
    v_group: np.ndarray
    classification: np.ndarray


@dataclass(frozen=True)
class PulseRun:
    carrier: float
    time: np.ndarray
    envelope_in: np.ndarray
    envelope_out: np.ndarray
    slab_length: float
    transit_time: float
    vacuum_time: float
    measured_delay: float
    predicted_delay: float
    n_group_carrier: float


def refractive_index(chi):
    """Principal branch ``sqrt(1 + chi)``, so ``Re n >= 0``."""
    arg = 1.0 + np.asarray(chi, dtype=complex)
    if np.any(arg == 0):
        raise ArithmeticError("1 + chi = 0: refractive index branch point")
    return np.sqrt(arg)


def group_index(omega_grid, n_complex):
    """``n_g = Re n + w d(Re n)/dw`` with central differences inside the grid.

    Endpoints use second-order one-sided differences.
    """
    w = np.asarray(omega_grid, dtype=float)
    if w.size < 3:
        raise ValueError("need at least 3 grid points for a derivative")
    if np.any(np.diff(w) <= 0):
        raise ValueError("omega grid must be strictly increasing")
    n_re = np.real(n_complex)
    return n_re + w * np.gradient(n_re, w, edge_order=2)


def group_index_complex(omega_grid, n_complex):
    """Complex ``n + w dn/dw``, for diagnostics."""
    w = np.asarray(omega_grid, dtype=float)
    n = np.asarray(n_complex, dtype=complex)
    return n + w * np.gradient(n, w, edge_order=2)


def group_index_analytic(omega, chi, dchi_domega):
    """Group index from a closed-form ``chi(w)`` and its derivative."""
    n = refractive_index(chi)
    return np.real(n) + omega * np.real(np.asarray(dchi_domega) / (2.0 * n))


LUMINAL, SUBLUMINAL, SUPERLUMINAL = "luminal", "subluminal", "superluminal"


def classify(n_group, tol=1e-9):
    """Label each group index as sub-, super- or luminal.

    ``n_g > 1 + tol`` is subluminal; within ``tol`` of 1 or of 0 is the
    luminal band; anything else (``n_g < 0`` or ``0 < n_g < 1``) is
    superluminal.
    """
    ng = np.asarray(n_group, dtype=float)
    out = np.full(ng.shape, SUPERLUMINAL, dtype=object)
    out[ng > 1.0 + tol] = SUBLUMINAL
    out[(np.abs(ng - 1.0) <= tol) | (np.abs(ng) <= tol)] = LUMINAL
    return out


def group_velocity(n_group):
    with np.errstate(divide="ignore"):
        return C / np.asarray(n_group, dtype=float)


def dispersion(omega_grid, chi, tol=1e-9):
    """Bundle index, group index, group velocity and labels on one grid."""
    n = refractive_index(chi)
    ng = group_index(omega_grid, n)
    return DispersionResult(np.asarray(omega_grid, dtype=float), n, ng, group_velocity(ng), classify(ng, tol))


def delta_to_omega(delta, carrier):
    """Detuning grid to absolute probe frequency, ``w = w_p0 + delta``."""
    return carrier + np.asarray(delta, dtype=float)


def zero_crossings(x, y):
    """Linearly interpolated abscissae where ``y`` changes sign."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    out = []
    for i in range(len(y) - 1):
        if y[i] == 0.0:
            out.append(x[i])
        elif y[i] * y[i + 1] < 0:
            out.append(x[i] - y[i] * (x[i + 1] - x[i]) / (y[i + 1] - y[i]))
    if len(y) and y[-1] == 0.0:
        out.append(x[-1])
    return out


# --- pulse propagation -------------------------------------------------------

def gaussian_envelope(time, fwhm, center=0.0):
    """Unit-peak Gaussian field envelope with intensity FWHM ``fwhm``."""
    sigma = fwhm / (2.0 * np.sqrt(2.0 * np.log(2.0)))
    return np.exp(-((time - center) ** 2) / (4.0 * sigma**2)).astype(complex)


def _peak_time(time, intensity):
    """Argmax with a three-point parabolic refinement."""
    i = int(np.argmax(intensity))
    dt = time[1] - time[0]
    if 0 < i < len(intensity) - 1:
        ym, y0, yp = intensity[i - 1], intensity[i], intensity[i + 1]
        denom = ym - 2.0 * y0 + yp
        if denom != 0:
            return time[i] + 0.5 * dt * (ym - yp) / denom
    return time[i]


def _spectral_extent(omega, power, floor=1e-10):
    keep = power >= floor * power.max()
    return omega[keep].min(), omega[keep].max()


def propagate_pulse(omega_grid, chi, carrier, time, envelope, slab_length, max_fraction=1.0 / 3.0):
    """Send an envelope through a slab with susceptibility ``chi(w)``.

    Parameters
    ----------
    omega_grid, chi : array
        Tabulated susceptibility (absolute angular frequency, increasing).
        Between nodes ``Re`` and ``Im`` of ``n`` are interpolated linearly.
    carrier : float
        Carrier angular frequency.
    time, envelope : array
        Uniform time grid and complex envelope samples.  The window must be
        long enough to contain the delayed pulse (the FFT is circular).
    slab_length : float
        ``L`` in metres.

    Returns
    -------
    PulseRun
        ``transit_time`` is the peak-to-peak time including ``L/c``;
        ``measured_delay`` subtracts the vacuum transit.
    """
    if slab_length <= 0:
        raise ValueError("slab length must be positive")
    omega_grid = np.asarray(omega_grid, dtype=float)
    time = np.asarray(time, dtype=float)
    envelope = np.asarray(envelope, dtype=complex)
    chi = np.asarray(chi, dtype=complex)
    dt = time[1] - time[0]
    npts = len(time)

    w_base = 2.0 * np.pi * np.fft.fftfreq(npts, dt)
    # a(t_n) = sum_k A_k exp(-i W_k t_n)  <=>  a = fft(A), i.e. A = ifft(a)
    spec = np.fft.ifft(envelope) * np.exp(1j * w_base * time[0])
    power = np.abs(spec) ** 2
    lo, hi = _spectral_extent(w_base, power)
    span = omega_grid[-1] - omega_grid[0]
    if (hi - lo) > max_fraction * span or carrier + lo < omega_grid[0] or carrier + hi > omega_grid[-1]:
        raise ValueError(
            f"pulse bandwidth {hi - lo:.3g} rad/s does not fit in the chi grid "
            f"(span {span:.3g}, limit {max_fraction:.2f} of it)"
        )

    n_grid = refractive_index(chi)
    w_abs = carrier + w_base
    n_re = np.interp(w_abs, omega_grid, n_grid.real)
    n_im = np.interp(w_abs, omega_grid, n_grid.imag)
    phase = (n_re + 1j * n_im) * w_abs * slab_length / C
    # the constant carrier phase does not move the envelope
    phase -= np.interp(carrier, omega_grid, n_grid.real) * carrier * slab_length / C
    out_spec = spec * np.exp(1j * phase)
    out = np.fft.fft(out_spec * np.exp(-1j * w_base * time[0]))

    t_in = _peak_time(time, np.abs(envelope) ** 2)
    t_out = _peak_time(time, np.abs(out) ** 2)
    window = npts * dt
    transit = float((t_out - t_in + 0.5 * window) % window - 0.5 * window)

    ng_grid = group_index(omega_grid, n_grid)
    ng_c = float(np.interp(carrier, omega_grid, ng_grid))
    vac = slab_length / C
    return PulseRun(
        carrier=carrier,
        time=time,
        envelope_in=envelope,
        envelope_out=out,
        slab_length=slab_length,
        transit_time=transit,
        vacuum_time=vac,
        measured_delay=transit - vac,
        predicted_delay=(ng_c - 1.0) * vac,
        n_group_carrier=ng_c,
    )

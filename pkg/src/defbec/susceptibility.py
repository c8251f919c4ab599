"""Polarization and linear/nonlinear susceptibilities of the deformed condensate.

The first-order energy shift ``E_jm - E0_jm`` at a fixed exciton number is a
cubic in the photon number ``n``.  Writing it as
``c0 + c1 n + c2 n^2 + c3 n^3`` and differentiating with respect to the field
amplitude ``eps sqrt(n)`` gives

    P = -(1/eps) [2 c1 sqrt(n) + 4 c2 n^(3/2) + 6 c3 n^(5/2)]

and term-by-term matching against ``eps0 chi1 E + eps0 chi3 E^3 + eps0 chi5 E^5``
with ``E = eps sqrt(n)`` yields the susceptibilities.  ``c0`` never contributes.
"""

from dataclasses import dataclass, field
from functools import lru_cache
import math

import numpy as np

from . import lambda_core as lc
from .constants import EPS0, HBAR
from .deformed_algebra import CondensateParams
from .sector_hamiltonian import (
    TERMS,
    ExcitationSector,
    HamiltonianParams,
    first_order_shift,
    term_coefficients,
    term_diagonals,
)

SAMPLE_PHOTONS = (0, 1, 2, 3, 4)


@dataclass(frozen=True)
class FieldQuantization:
    """Field per photon ``eps = sqrt(hbar w_p / (2 eps0 V))`` (V/m)."""

    omega_p: float
    quant_volume: float
    photons: float = 0.0

    def __post_init__(self):
        if self.quant_volume <= 0 or self.omega_p <= 0:
            raise ValueError("need positive volume and frequency")
        if self.photons < 0:
            raise ValueError("photon number must be >= 0")

    @property
    def epsilon(self):
        return math.sqrt(HBAR * self.omega_p / (2.0 * EPS0 * self.quant_volume))

    @property
    def field(self):
        return self.epsilon * math.sqrt(self.photons)


@dataclass(frozen=True)
class EnergyPolynomial:
    """``E_jm - E0_jm = c0 + c1 n + c2 n^2 + c3 n^3`` (joules) at fixed ``n_e``."""

    c0: object
    c1: object
    c2: object
    c3: object

    def __call__(self, n):
        return self.c0 + self.c1 * n + self.c2 * n**2 + self.c3 * n**3


@lru_cache(maxsize=None)
def _term_power_coefficients(n_e):
    """Exact rational power-basis coefficients ``[c0..c3]`` per structural term."""
    import sympy

    x = sympy.Symbol("n")
    out = {}
    for t in TERMS:
        pts = [(k, term_diagonals(sympy.Integer(k), sympy.Integer(n_e))[t]) for k in SAMPLE_PHOTONS]
        poly = sympy.Poly(sympy.interpolate(pts, x), x)
        coeffs = [poly.coeff_monomial(x**k) for k in range(5)]
        if coeffs[4] != 0:
            raise ArithmeticError(f"term {t} is not cubic in n")
        out[t] = tuple(float(c) for c in coeffs[:4])
    return out


def energy_excess_polynomial(n_e, params, source="analytic", subtract_offset=False):
    """Cubic coefficients of the first-order energy shift in the photon number.

    Parameters
    ----------
    n_e : int
        Fixed exciton number.
    params : HamiltonianParams
        May carry arrays (e.g. ``delta``, ``K1``, ``K2`` over a detuning grid)
        when ``source="analytic"``.
    source : {"analytic", "numeric"}
        ``analytic`` interpolates the closed form exactly (rational arithmetic
        per structural term, so a vanishing prefactor gives an exactly
        vanishing coefficient).  ``numeric`` uses the rotated diagonal of the
        H' matrix at ``n = 0..4`` and a float interpolation; it is a cross-check
        whose c2, c3 carry an absolute error of order ``1e-15 |c1|``, too coarse
        for the nonlinear terms when the ``omega_p/2`` term dominates.
    """
    if n_e < 0:
        raise ValueError("n_e must be >= 0")
    coeff = term_coefficients(params, subtract_offset=subtract_offset)
    if source == "analytic":
        table = _term_power_coefficients(int(n_e))
        cs = [HBAR * sum(coeff[t] * table[t][k] for t in TERMS) for k in range(4)]
        return EnergyPolynomial(*cs)
    if source != "numeric":
        raise ValueError(f"unknown source {source!r}")

    energies = []
    for n in SAMPLE_PHOTONS:
        n_exc = n + n_e
        if n_exc == 0:
            energies.append(0.0)  # vacuum: every term annihilates it
            continue
        sector = ExcitationSector(n_exc)
        shift = first_order_shift(sector, params)
        if subtract_offset:
            shift = shift - HBAR * (params.omega_p / 2.0) * n_exc / 2.0
        energies.append(shift[sector.index((n - n_e) / 2.0)])
    energies = np.asarray(energies, dtype=complex)
    c4, c3, c2, c1, c0 = np.polyfit(np.asarray(SAMPLE_PHOTONS, dtype=float), energies, 4)
    scale = max(abs(c1), abs(c2), abs(c3), abs(c0), np.finfo(float).tiny)
    if abs(c4) > 1e-9 * scale:
        raise ArithmeticError(f"energy shift is not cubic in n (quartic residual {abs(c4):.3g})")
    return EnergyPolynomial(c0, c1, c2, c3)


def polarization(n, poly, epsilon):
    """``P = -(1/eps) d(E_jm - E0_jm)/d sqrt(n)`` from the cubic coefficients."""
    if np.any(np.asarray(n) < 0):
        raise ValueError("photon number must be >= 0")
    s = np.sqrt(n)
    return -(2.0 * poly.c1 * s + 4.0 * poly.c2 * s**3 + 6.0 * poly.c3 * s**5) / epsilon


def chis_from_polynomial(poly, epsilon):
    """``(chi1, chi3, chi5)`` by matching powers of ``eps sqrt(n)``."""
    return (
        -2.0 * poly.c1 / (EPS0 * epsilon**2),
        -4.0 * poly.c2 / (EPS0 * epsilon**4),
        -6.0 * poly.c3 / (EPS0 * epsilon**6),
    )


def printed_susceptibilities(params, epsilon, photons, n_e, subtract_offset=False):
    """The three susceptibilities exactly as typeset, with ``j+m = n``, ``j-m = n_e``.

    Kept for comparison; note the first bracket still depends on ``n``.
    """
    p = params
    pf = p.pair_factor
    jpm, jmm = photons, n_e
    first = (0.0 if subtract_offset else p.omega_p / 2.0) + p.delta
    b1 = (
        first
        + (1.5 * p.omega_p + p.delta) * p.collision_factor * (-0.5 + 2.0 * jpm)
        - p.K1 * pf
        + p.K2
        + p.K2 * pf * (0.5 * jmm * (jmm - 1) + 0.5 * jmm)
    )
    b3 = (
        (1.5 * p.omega_p + p.delta) * p.collision_factor
        + 2.0 * p.K1 * pf
        + 2.0 * p.K2
        + p.K2 * pf * (-1.0 - jmm)
    )
    b5 = 1.5 * p.K2 * pf
    return (
        -HBAR * b1 / (epsilon**2 * EPS0),
        -HBAR * b3 / (epsilon**4 * EPS0),
        -HBAR * b5 / (epsilon**6 * EPS0),
    )


def photon_number_from_intensity(intensity, anchor_intensity=0.8, anchor_photons=25.0):
    """Mean photon number, linear in probe intensity (W/m^2).

    Calibrated so that ``anchor_intensity`` (80 uW/cm^2 = 0.8 W/m^2 for the
    sodium preset) maps to ``anchor_photons``.
    """
    if np.any(np.asarray(intensity) < 0):
        raise ValueError("intensity must be >= 0")
    return intensity * (anchor_photons / anchor_intensity)


@dataclass(frozen=True)
class MediumModel:
    """Everything needed to evaluate chi(delta) for one condensate."""

    atoms: lc.AtomicParams
    condensate: CondensateParams
    g1: complex
    omega_p: float = None
    n_exciton: int = 1
    path: str = "derived"
    subtract_offset: bool = False
    source: str = "analytic"
    third_order: str = "liouville"

    def __post_init__(self):
        if self.omega_p is None:
            object.__setattr__(self, "omega_p", self.atoms.omega_opt)
        if self.path not in ("derived", "printed"):
            raise ValueError(f"unknown path {self.path!r}")

    def field_quantization(self, photons=0.0):
        return FieldQuantization(self.omega_p, self.condensate.volume, photons)

    def hamiltonian_params(self, delta):
        cc = lc.coupling_constants(self.atoms, self.condensate, delta, self.g1, omega_p=self.omega_p,
                                   third_order=self.third_order)
        return HamiltonianParams(
            omega_p=self.omega_p,
            delta=np.asarray(delta, dtype=float) if np.ndim(delta) else float(delta),
            K1=cc.K1,
            K2=cc.K2,
            kappa=self.condensate.kappa,
            eta=self.condensate.eta,
        )

    def susceptibilities(self, delta, photons):
        """``(chi1, chi3, chi5)`` at detuning(s) ``delta``."""
        hp = self.hamiltonian_params(delta)
        eps = self.field_quantization(photons).epsilon
        if self.path == "printed":
            return printed_susceptibilities(hp, eps, photons, self.n_exciton, self.subtract_offset)
        if self.source == "numeric" and np.ndim(delta):
            rows = [self.susceptibilities(float(d), photons) for d in np.asarray(delta)]
            return tuple(np.array(col) for col in zip(*rows))
        poly = energy_excess_polynomial(self.n_exciton, hp, self.source, self.subtract_offset)
        return chis_from_polynomial(poly, eps)


def susceptibilities(params, field_quant, n_e=1, path="derived", subtract_offset=False, source="analytic"):
    """``(chi1, chi3, chi5)`` for explicit Hamiltonian parameters."""
    eps = field_quant.epsilon
    if path == "printed":
        return printed_susceptibilities(params, eps, field_quant.photons, n_e, subtract_offset)
    poly = energy_excess_polynomial(n_e, params, source, subtract_offset)
    return chis_from_polynomial(poly, eps)


@dataclass(frozen=True)
class SusceptibilitySpectrum:
    delta_grid: np.ndarray
    chi1: np.ndarray
    chi3: np.ndarray
    chi5: np.ndarray
    chi_total: np.ndarray
    chi_nl: np.ndarray
    photons: float
    field_sq: float
    params: dict = field(default_factory=dict)


def chi_total(delta_grid, n, model):
    """Total and nonlinear susceptibility over a detuning grid (rad/s)."""
    delta_grid = np.asarray(delta_grid, dtype=float)
    if delta_grid.size == 0:
        raise ValueError("empty detuning grid")
    chi1, chi3, chi5 = (np.broadcast_to(np.asarray(c, dtype=complex), delta_grid.shape).copy()
                        for c in model.susceptibilities(delta_grid, n))
    e2 = model.field_quantization(n).epsilon ** 2 * n
    chi_nl = chi3 * e2 + chi5 * e2**2
    total = chi1 + chi_nl
    snapshot = {
        "n_atoms": model.condensate.n_atoms,
        "kappa": model.condensate.kappa,
        "eta": model.condensate.eta,
        "n_exciton": model.n_exciton,
        "path": model.path,
        "subtract_offset": model.subtract_offset,
    }
    return SusceptibilitySpectrum(delta_grid, chi1, chi3, chi5, total, chi_nl, n, e2, snapshot)

"""Steady-state response of the Lambda atom and the coupling-constant chain.

Conventions
-----------
Everything is in angular units (rad/s).  The detuning ``delta`` is the offset
of the |3> level above the probe photon energy, ``delta = omega_3 - omega_p``,
and the coupling field is taken on resonance, so the two-photon detuning
equals ``delta`` as well.

Decay enters as in the Liouville equation with the factor 2 inside the
sandwich term: the jump operator for the ``i -> j`` channel is
``sqrt(2 * gamma_ij) |j><i|``.  With that choice the |3>-|2> coherence decays
at ``gamma31 + gamma32 = 2 * gamma_opt`` and the |1>-|2> coherence at
``gamma12 = gamma_mag``, which reproduces the closed-form weak-probe result
``rho32 / g2 -> 1 / Gamma`` exactly.
"""

from dataclasses import dataclass
import math
import warnings

import numpy as np

from .constants import EPS0, HBAR


@dataclass(frozen=True)
class AtomicParams:
    """Lambda atom: decay rates, splittings (rad/s) and dipoles (C m)."""

    gamma31: float
    gamma32: float
    gamma12: float
    omega12: float
    omega_opt: float
    mu32: float
    mu31: float

    def __post_init__(self):
        if min(self.gamma31, self.gamma32, self.gamma12) < 0:
            raise ValueError("decay rates must be non-negative")
        if not self.omega_opt > self.omega12 > 0:
            raise ValueError("need omega_opt > omega12 > 0")
        if self.mu32 <= 0 or self.mu31 <= 0:
            raise ValueError("dipole moments must be positive")


@dataclass(frozen=True)
class FieldParams:
    """Coupling/probe drive.  ``g1``, ``g2`` are Rabi frequencies in rad/s."""

    g1: complex
    g2: complex = 0.0
    delta: float = 0.0
    omega_p: float = 0.0
    omega_c: float = 0.0
    intensity_p: float = 0.0
    intensity_c: float = 0.0
    A_c: float = 0.0
    A_p: float = 0.0

    # |g2|/|g1| above this leaves the perturbative regime
    weak_probe_ratio = 0.1

    def __post_init__(self):
        if abs(self.g1) > 0 and abs(self.g2) > self.weak_probe_ratio * abs(self.g1):
            warnings.warn(
                f"|g2|/|g1| = {abs(self.g2) / abs(self.g1):.3g} is not small; "
                "the perturbative expansion in g2 is unreliable",
                stacklevel=2,
            )


@dataclass(frozen=True)
class LambdaSteadyState:
    gamma_opt: float
    gamma_mag: float
    big_gamma: complex
    rho32_1: complex
    rho32_3: complex
    L_l: complex
    L_nl: complex


@dataclass(frozen=True)
class CouplingConstants:
    k0: float
    k1: complex
    k2: complex
    K1: complex
    K2: complex


def derived_rates(atoms):
    """Return ``(gamma_opt, gamma_mag)``."""
    return (atoms.gamma31 + atoms.gamma32) / 2.0, atoms.gamma12


def gamma_factor(delta, g1, rates):
    """Complex denominator of the weak-probe coherence.

    ``Gamma = delta - 2i gamma_opt + |g1|^2 / (i gamma_mag - delta)``.
    ``delta`` may be an array.
    """
    gamma_opt, gamma_mag = rates
    delta = np.asarray(delta, dtype=float)
    denom = 1j * gamma_mag - delta
    if np.any(denom == 0):
        if abs(g1) == 0:
            denom = np.where(denom == 0, 1.0, denom)
        else:
            raise ZeroDivisionError("gamma_mag = 0 and delta = 0: two-photon pole")
    out = delta - 2j * gamma_opt + abs(g1) ** 2 / denom
    return out[()] if out.ndim == 0 else out


def rho32_coefficients(delta, g1, rates):
    """First- and third-order probe coefficients of the |3>-|2> coherence.

    Returns ``(rho32_1, rho32_3)`` with ``rho32 ~ rho32_1 g2 + rho32_3 |g2|^2 g2``.
    The bracket ``1/(2 gamma_opt) + 1/gamma_mag`` is a plain sum.
    """
    gamma_opt, gamma_mag = rates
    big = np.asarray(gamma_factor(delta, g1, rates), dtype=complex)
    if np.any(big == 0):
        raise ZeroDivisionError("Gamma vanishes")
    r1 = 1.0 / big
    bracket = 1.0 / (2.0 * gamma_opt) + (1.0 / gamma_mag if gamma_mag > 0 else math.inf)
    r3 = (1j / big) * (np.conj(big) - big) / (2.0 * np.abs(big) ** 2) * bracket
    if big.ndim == 0:
        return complex(r1), complex(r3)
    return r1, r3


THIRD_ORDER = ("liouville", "closed_form")


def _third_order(atoms, delta, g1, rates, third_order):
    """``(rho32_1, rho32_3)`` with the cubic term from the chosen source."""
    r1, r3 = rho32_coefficients(delta, g1, rates)
    if third_order == "liouville":
        r3 = liouville_rho32_series(atoms, delta, g1)[1]
    elif third_order != "closed_form":
        raise ValueError(f"third_order must be one of {THIRD_ORDER}, got {third_order!r}")
    return r1, r3


def steady_state(atoms, delta, g1, third_order="liouville"):
    """Bundle of the weak-probe quantities at one detuning."""
    rates = derived_rates(atoms)
    big = gamma_factor(delta, g1, rates)
    r1, r3 = _third_order(atoms, delta, g1, rates, third_order)
    r1_bare, _ = rho32_coefficients(delta, 0.0, rates)
    return LambdaSteadyState(
        gamma_opt=rates[0],
        gamma_mag=rates[1],
        big_gamma=complex(big),
        rho32_1=r1,
        rho32_3=complex(r3),
        L_l=r1 / r1_bare,
        L_nl=complex(r3) / r1_bare,
    )


def single_photon_rabi(mu32, omega_p, quant_volume):
    """``k0 = mu32 sqrt(omega_p / (2 hbar eps0 V))`` in rad/s."""
    if quant_volume <= 0:
        raise ValueError("quantization volume must be positive")
    return mu32 * math.sqrt(omega_p / (2.0 * HBAR * EPS0 * quant_volume))


def coupling_constants(atoms, condensate, delta, g1, quant_volume=None, omega_p=None,
                       third_order="liouville"):
    """Linear/nonlinear photon-exciton couplings, single-atom and collective.

    ``quant_volume`` defaults to ``N / density``; ``omega_p`` to the atomic
    optical frequency.  ``delta`` may be an array, in which case the complex
    fields are arrays too.  ``third_order`` picks the source of the cubic
    coherence: the perturbative Liouville solution or the closed form of
    :func:`rho32_coefficients`.
    """
    if condensate.n_atoms < 1:
        raise ValueError("need at least one atom")
    V = condensate.volume if quant_volume is None else quant_volume
    w = atoms.omega_opt if omega_p is None else omega_p
    k0 = single_photon_rabi(atoms.mu32, w, V)
    rates = derived_rates(atoms)
    r1, r3 = _third_order(atoms, delta, g1, rates, third_order)
    r1_bare, _ = rho32_coefficients(delta, 0.0, rates)
    if np.any(np.asarray(r1_bare) == 0):
        raise ZeroDivisionError("bare linear coherence vanishes")
    L_l = r1 / r1_bare
    L_nl = r3 / r1_bare
    k1 = k0 * L_l
    k2 = k0**3 * L_nl
    root_n = math.sqrt(condensate.n_atoms)
    return CouplingConstants(k0=k0, k1=k1, k2=k2, K1=root_n * k1, K2=root_n * k2)


# --- Liouville-equation oracle ---------------------------------------------

def _projector(i, j):
    m = np.zeros((3, 3), dtype=complex)
    m[i, j] = 1.0
    return m


def lambda_hamiltonian(delta, g1, g2):
    """Rotating-frame Hamiltonian / hbar on the basis (|1>, |2>, |3>)."""
    h = np.zeros((3, 3), dtype=complex)
    h[0, 0] = delta
    h[2, 2] = delta
    h[2, 0] = -g1
    h[2, 1] = -g2
    h[0, 2] = -np.conj(g1)
    h[1, 2] = -np.conj(g2)
    return h


def liouvillian(atoms, delta, g1, g2):
    """9x9 generator acting on row-major ``vec(rho)``."""
    h = lambda_hamiltonian(delta, g1, g2)
    eye = np.eye(3)
    gen = -1j * (np.kron(h, eye) - np.kron(eye, h.T))
    # index 0 = |1>, 1 = |2>, 2 = |3>
    channels = [
        (atoms.gamma12, _projector(1, 0)),
        (atoms.gamma32, _projector(1, 2)),
        (atoms.gamma31, _projector(0, 2)),
    ]
    for rate, jump in channels:
        if rate == 0:
            continue
        jd_j = jump.conj().T @ jump
        gen += 2.0 * rate * (
            np.kron(jump, jump.conj())
            - 0.5 * np.kron(jd_j, eye)
            - 0.5 * np.kron(eye, jd_j.T)
        )
    return gen


def liouville_steady_state(atoms, fields, null_tol=1e-10):
    """Numerical steady state of the full three-level master equation.

    Independent of the perturbative formulas; used to validate them.

    Raises
    ------
    np.linalg.LinAlgError
        If the generator does not have a one-dimensional null space.
    """
    if max(atoms.gamma12, atoms.gamma31, atoms.gamma32) <= 0:
        raise np.linalg.LinAlgError("no dissipation: steady state is not unique")
    gen = liouvillian(atoms, fields.delta, fields.g1, fields.g2)
    sv = np.linalg.svd(gen, compute_uv=False)
    null_dim = int(np.sum(sv <= null_tol * sv[0]))
    if null_dim != 1:
        raise np.linalg.LinAlgError(f"Liouvillian null space has dimension {null_dim}")
    # replace the rho_11 equation by the trace condition
    a = gen.copy()
    b = np.zeros(9, dtype=complex)
    a[0, :] = 0.0
    a[0, [0, 4, 8]] = 1.0
    b[0] = 1.0
    rho = np.linalg.solve(a, b).reshape(3, 3)
    rho = 0.5 * (rho + rho.conj().T)
    return rho / np.trace(rho).real


def liouville_rho32_series(atoms, delta, g1):
    """Exact ``(c1, c3)`` of ``rho32 = c1 g2 + c3 g2^3 + ...`` for real ``g2``.

    The generator is ``L0 + g2 V``; each order solves ``L0 rho_k = -V rho_{k-1}``
    with ``Tr rho_k = 0``, starting from the probe-free steady state.  Arrays
    are returned if ``delta`` is an array.
    """
    deltas = np.atleast_1d(np.asarray(delta, dtype=float))
    # delta enters the generator linearly, so the stack is built in one go
    base = liouvillian(atoms, 0.0, g1, 0.0)
    slope = liouvillian(atoms, 1.0, g1, 0.0) - base
    v = liouvillian(atoms, 0.0, g1, 1.0) - base
    a = base[None] + deltas[:, None, None] * slope[None]
    a[:, 0, :] = 0.0
    a[:, 0, [0, 4, 8]] = 1.0
    b = np.zeros((deltas.size, 9, 1), dtype=complex)
    b[:, 0] = 1.0
    rho = [np.linalg.solve(a, b)]
    for _ in range(3):
        b = -v[None] @ rho[-1]
        b[:, 0] = 0.0
        rho.append(np.linalg.solve(a, b))
    c1 = rho[1][:, 7, 0]  # row-major index of (|3>, |2>)
    c3 = rho[3][:, 7, 0]
    if np.ndim(delta) == 0:
        return complex(c1[0]), complex(c3[0])
    return c1, c3


def rho32(rho):
    """The |3>-|2> coherence from a (|1>,|2>,|3>) density matrix."""
    return rho[2, 1]


def perturbative_fit(samples):
    """Fit ``rho32 = c0 + c1 g2 + c3 |g2|^2 g2`` by least squares.

    Parameters
    ----------
    samples : iterable of (g2, rho32)
        Real probe Rabi frequencies and complex coherences.

    Returns
    -------
    (c0, c1, c3)
    """
    g2, rho = zip(*samples)
    g2 = np.asarray(g2, dtype=float)
    rho = np.asarray(rho, dtype=complex)
    if len(np.unique(g2)) < 3:
        raise np.linalg.LinAlgError("need at least 3 distinct g2 samples")
    scale = np.max(np.abs(g2))
    x = g2 / scale
    design = np.column_stack([np.ones_like(x), x, np.abs(x) ** 2 * x])
    coef, *_ = np.linalg.lstsq(design, rho, rcond=None)
    return complex(coef[0]), complex(coef[1] / scale), complex(coef[2] / scale**3)

"""f-deformed oscillator algebra, Gardiner phonons and the collision deformation.

Energies are returned in joules (``hbar * omega0`` units made explicit);
frequencies in rad/s, without a stray ``hbar``.
"""

from dataclasses import dataclass, field
import math
import warnings

import numpy as np

from .constants import HBAR, KB


@dataclass(frozen=True)
class DeformedAlgebraParams:
    """Generalized deformed-oscillator parameters.

    Stored in the hyperbolic parametrization ``(tau, mu, nu, beta)``;
    ``q = exp(tau)``, ``alpha = nu + mu`` and ``gamma_p = nu - mu`` are derived.
    """

    tau: float = 1.0
    mu: float = 0.0
    nu: float = 0.0
    beta: float = 0.0
    omega0: float = 1.0

    @classmethod
    def from_q(cls, q, alpha, beta, gamma_p, omega0=1.0):
        if q <= 0:
            raise ValueError("q must be positive")
        return cls(
            tau=math.log(q),
            mu=(alpha - gamma_p) / 2.0,
            nu=(alpha + gamma_p) / 2.0,
            beta=beta,
            omega0=omega0,
        )

    @property
    def q(self):
        return math.exp(self.tau)

    @property
    def alpha(self):
        return self.nu + self.mu

    @property
    def gamma_p(self):
        return self.nu - self.mu


@dataclass(frozen=True)
class CondensateParams:
    """Condensate description.

    ``eta`` is ``1/N`` unless the ``eta_zero`` sentinel was requested, in which
    case it is exactly 0 while ``n_atoms`` still sets the collective couplings.
    ``quant_volume`` (m^3) defaults to ``n_atoms / density``; pass it explicitly
    to hold the field quantization volume fixed while N varies.
    """

    n_atoms: float
    kappa: float = 0.0
    density: float = 3.3e18
    n_c: float = 0.0
    eta: float = field(default=None)
    quant_volume: float = None

    # kappa * (n - 1) above this leaves the small-deformation regime
    kappa_warn = 0.1

    def __post_init__(self):
        if self.n_atoms < 1:
            raise ValueError("n_atoms must be >= 1")
        if self.kappa < 0:
            raise ValueError("collision rate must be non-negative")
        if self.eta is None:
            object.__setattr__(self, "eta", 1.0 / self.n_atoms)
        if self.quant_volume is not None and self.quant_volume <= 0:
            raise ValueError("quantization volume must be positive")

    @classmethod
    def build(cls, n_atoms, kappa=0.0, density=3.3e18, eta_zero=False, n_c=None, quant_volume=None):
        return cls(
            n_atoms=n_atoms,
            kappa=kappa,
            density=density,
            n_c=n_atoms if n_c is None else n_c,
            eta=0.0 if eta_zero else 1.0 / n_atoms,
            quant_volume=quant_volume,
        )

    @property
    def volume(self):
        """Quantization volume (m^3)."""
        if self.quant_volume is not None:
            return self.quant_volume
        return self.n_atoms / self.density

    def check_working_range(self, n_max):
        if self.kappa * (n_max - 1) > self.kappa_warn:
            warnings.warn(
                f"kappa*(n-1) = {self.kappa * (n_max - 1):.3g} is not small",
                stacklevel=2,
            )


@dataclass(frozen=True)
class OperatorMatrix:
    """Dense operator on a truncated number basis."""

    matrix: np.ndarray
    basis_label: str = "|n>, n = 0..dim-1"

    def __post_init__(self):
        m = np.asarray(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
            raise ValueError("operator matrix must be square and non-empty")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self):
        return self.matrix.shape[0]

    @property
    def H(self):
        return OperatorMatrix(self.matrix.conj().T, self.basis_label)

    def __matmul__(self, other):
        other = other.matrix if isinstance(other, OperatorMatrix) else other
        return OperatorMatrix(self.matrix @ other, self.basis_label)


# --- deformation functions ---------------------------------------------------

def _sinh_ratio(x, n):
    """``sinh(n x) / sinh(x)`` with the ``x -> 0`` limit ``n``."""
    if abs(x) < 1e-8:
        return n * (1.0 + (n * n - 1.0) * x * x / 6.0)
    return math.sinh(n * x) / math.sinh(x)


def n_f_squared(n, params):
    """``n |f(n)|^2``; well defined at ``n = 0`` where it vanishes."""
    p = params
    return _sinh_ratio(p.tau * p.mu, n) * math.exp(p.tau * (p.beta + p.nu * (n - 1)))


def f_squared(n, params):
    """``|f(n)|^2`` in the hyperbolic form; ``mu = 0`` uses the analytic limit."""
    if n < 1:
        raise ValueError("f_squared needs n >= 1")
    return n_f_squared(n, params) / n


def f_squared_q_form(n, q, alpha, beta, gamma_p):
    """``|f(n)|^2`` in the original ``(q, alpha, beta, gamma)`` parametrization.

    General branch ``q^beta (q^(alpha n) - q^(gamma n)) / (n (q^alpha - q^gamma))``;
    ``alpha == gamma`` branch ``q^(beta + gamma (n - 1))``.
    """
    if n < 1:
        raise ValueError("f_squared needs n >= 1")
    if alpha == gamma_p or q == 1.0:
        return q ** (beta + gamma_p * (n - 1))
    return q**beta * (q ** (alpha * n) - q ** (gamma_p * n)) / (n * (q**alpha - q**gamma_p))


def free_oscillator_energy(n, params):
    """``(hbar w0 / 2) [ |f(n+1)|^2 (n+1) + |f(n)|^2 n ]`` in joules."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return 0.5 * HBAR * params.omega0 * (n_f_squared(n + 1, params) + n_f_squared(n, params))


def free_energy_closed_form(n, params):
    """Closed form for ``mu = beta = 0``: ``(hbar w0/2) e^(tau nu n) [1 + n (1 + e^(-tau nu))]``."""
    tn = params.tau * params.nu
    return 0.5 * HBAR * params.omega0 * math.exp(tn * n) * (1.0 + n * (1.0 + math.exp(-tn)))


def free_energy_quadratic(n, params):
    """Quadratic-in-n truncation for ``tau = 1``, small ``nu n``."""
    nu = params.nu
    return 0.5 * HBAR * params.omega0 * (
        1.0 + n * (1.0 + nu + math.exp(-nu)) + n * n * nu * (1.0 + math.exp(-nu))
    )


def oscillator_frequency(n, params):
    """Exact level gap ``E(n+1) - E(n)`` divided by hbar (rad/s)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return 0.5 * params.omega0 * (n_f_squared(n + 2, params) - n_f_squared(n, params))


def frequency_closed_form(n, params):
    """``w0 e^(tau nu n) [e^(tau nu) + n sinh(tau nu)]`` (exact for ``mu = beta = 0``)."""
    tn = params.tau * params.nu
    return params.omega0 * math.exp(tn * n) * (math.exp(tn) + n * math.sinh(tn))


def frequency_small_nu(n, params):
    """Small-``nu`` approximant ``w0 [e^nu + n nu (1 + e^nu) + n^2 nu^3]``."""
    nu = params.nu
    return params.omega0 * (math.exp(nu) + n * nu * (1.0 + math.exp(nu)) + n * n * nu**3)


def collision_mapping(kappa, omega0):
    """Deformation parameters that reproduce a ``(hbar kappa/2) n^2`` collision term."""
    if omega0 <= 0:
        raise ValueError("omega0 must be positive")
    return DeformedAlgebraParams(tau=1.0, mu=0.0, nu=kappa / (2.0 * omega0), beta=0.0, omega0=omega0)


def small_deformation_energy(n, params):
    """Energy expanded to first order in ``nu`` and ``mu^2`` (joules)."""
    mu2 = params.mu**2
    return 0.5 * HBAR * params.omega0 * (
        (2 * n + 1) + mu2 * n / 6.0 + (0.5 * mu2 + 2.0 * params.nu) * n * n
    )


def small_deformation_interaction(n, params):
    """Nonlinear part of :func:`small_deformation_energy`."""
    mu2 = params.mu**2
    return 0.5 * HBAR * params.omega0 * (mu2 * n / 6.0 + (0.5 * mu2 + 2.0 * params.nu) * n * n)


def collision_energy_ab_initio(n, kappa, omega0):
    """Free f-oscillator energy with ``f(n) = sqrt(kappa n + 1 - kappa)`` inserted directly.

    Evaluates to ``hbar w0 (n + 1/2) + hbar w0 kappa n^2``: the nonlinear term
    is ``2 w0`` times the mapped-route ``(hbar kappa / 2) n^2``, with kappa
    dimensionless here.
    """
    def nf2(k):
        return (kappa * k + 1.0 - kappa) * k

    return 0.5 * HBAR * omega0 * (nf2(n + 1) + nf2(n))


def collision_deformation_f2(n, kappa):
    """``f2(n) = sqrt(kappa n + 1 - kappa)``."""
    rad = kappa * n + (1.0 - kappa)
    if rad < 0:
        raise ValueError(f"f2 radicand negative: kappa={kappa}, n={n}")
    return math.sqrt(rad)


def estimate_collision_rate(density, scattering_length, temperature, atom_mass):
    """``kappa ~ rho pi a^2 v_rms`` with ``v_rms = sqrt(3 kB T / m)`` (SI, 1/s)."""
    if min(density, scattering_length, atom_mass) <= 0 or temperature < 0:
        raise ValueError("inputs must be positive")
    v_rms = math.sqrt(3.0 * KB * temperature / atom_mass)
    return density * math.pi * scattering_length**2 * v_rms


def gardiner_f1(n_e, eta):
    """``f1(n_e; eta) = sqrt(1 - eta (n_e - 1))``."""
    rad = 1.0 - eta * (n_e - 1)
    if rad < 0:
        raise ValueError(f"f1 undefined for n_e={n_e} > N + 1")
    return math.sqrt(rad)


# --- operator matrices -------------------------------------------------------

BUILDERS = ("bare", "gardiner_exact", "gardiner_firstorder", "collision_deformed", "combined_first_order")


def annihilation(dim):
    """Bare ``a`` with ``a|n> = sqrt(n)|n-1>``."""
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), k=1)


def number(dim):
    return np.diag(np.arange(dim, dtype=float))


def gardiner_phonon(dim, eta):
    """Number-conserving phonon ``b_q = b_g^+ b_e / sqrt(N)`` at fixed total N.

    On ``|n_e, N - n_e>`` the two-mode element is
    ``sqrt(n_e (N - n_e + 1) / N) = sqrt(n_e) sqrt(1 - eta (n_e - 1))``.
    """
    b = np.zeros((dim, dim))
    for ne in range(1, dim):
        rad = ne * (1.0 - eta * (ne - 1))
        if rad < 0:
            raise ValueError(f"truncation dim {dim} exceeds the atom number")
        b[ne - 1, ne] = math.sqrt(rad)
    return b


def build_operator_matrices(dim, condensate, which="bare"):
    """Annihilation and creation matrices for one of the named constructions.

    ``which`` is one of ``bare``, ``gardiner_exact``, ``gardiner_firstorder``,
    ``collision_deformed`` (phonon dressed by ``f2`` of the phonon number) and
    ``combined_first_order`` (both deformations, first order in eta and kappa).
    Every builder only lowers, so the returned annihilators are exact on the
    truncated space; products like ``[a, a^+]`` are wrong on the top row only.
    """
    if dim < 2:
        raise ValueError("dim must be >= 2")
    if which not in BUILDERS:
        raise ValueError(f"unknown construction {which!r}; choose from {BUILDERS}")
    eta, kappa = condensate.eta, condensate.kappa
    b = annihilation(dim)
    bd = b.T
    n = number(dim)
    eye = np.eye(dim)

    if which == "bare":
        ann = b
    elif which == "gardiner_exact":
        ann = gardiner_phonon(dim, eta)
    elif which == "gardiner_firstorder":
        ann = b - 0.5 * eta * (bd @ b @ b)
    elif which == "collision_deformed":
        bq = gardiner_phonon(dim, eta)
        nq = np.diag(bq.T @ bq)
        f2 = np.array([collision_deformation_f2(x, kappa) for x in nq])
        ann = bq @ np.diag(f2)
    else:
        ann = b - 0.5 * eta * (bd @ b @ b) - 0.5 * kappa * (b @ (eye - n))
    ann = np.asarray(ann, dtype=complex)
    label = f"{which}: |n>, n = 0..{dim - 1}"
    return OperatorMatrix(ann, label), OperatorMatrix(ann.conj().T, label)


def deformed_ladder(dim, params):
    """``A = a f(N)``, ``A^+ = f(N) a^+`` for the generalized deformation (real f)."""
    f = np.array([0.0] + [math.sqrt(f_squared(k, params)) for k in range(1, dim)])
    a = annihilation(dim)
    return a @ np.diag(f), np.diag(f) @ a.T

"""Photon-exciton Hamiltonian on a fixed excitation sector.

The two modes (photon ``a``, exciton ``b``) are represented by the Schwinger
construction.  A sector with ``n_exc`` total excitations is the spin
``j = n_exc/2`` multiplet; its basis is ``|n, n_e>`` with ``n + n_e = n_exc``,
ordered by ``n_e = 0 .. n_exc`` (so ``m = (n - n_e)/2`` runs from ``j`` down to
``-j``).

Operator strings in the perturbation are applied literally, right to left, on
a two-mode Fock space one level deeper than the sector needs, then restricted
to the sector.  No reordering is done.
"""

from dataclasses import dataclass
from functools import lru_cache
import warnings

import numpy as np
import scipy.linalg
import scipy.sparse as sp

from .constants import HBAR
from .deformed_algebra import OperatorMatrix


@dataclass(frozen=True)
class ExcitationSector:
    n_exc: int

    def __post_init__(self):
        if self.n_exc < 1:
            raise ValueError("n_exc must be >= 1")

    @property
    def j(self):
        return self.n_exc / 2.0

    @property
    def dim(self):
        return self.n_exc + 1

    @property
    def basis(self):
        """``[(n, n_e), ...]`` in sector order."""
        return [(self.n_exc - ne, ne) for ne in range(self.n_exc + 1)]

    @property
    def m_values(self):
        return np.array([(n - ne) / 2.0 for n, ne in self.basis])

    def index(self, m):
        k = self.j - m
        if abs(m) > self.j or abs(k - round(k)) > 1e-12:
            raise ValueError(f"m={m} not in the j={self.j} multiplet")
        return int(round(k))


@dataclass(frozen=True)
class AngularOps:
    Jx: OperatorMatrix
    Jy: OperatorMatrix
    Jz: OperatorMatrix
    Jplus: OperatorMatrix
    Jminus: OperatorMatrix

    def casimir(self):
        x, y, z = self.Jx.matrix, self.Jy.matrix, self.Jz.matrix
        return x @ x + y @ y + z @ z


@dataclass(frozen=True)
class HamiltonianParams:
    """Couplings entering H0 and H' (all rates in rad/s).

    ``eta`` is ``1/N`` of the condensate; ``kappa`` is added to ``-eta``
    as printed, so it is used as a bare number.
    """

    omega_p: float
    delta: float = 0.0
    K1: complex = 0.0
    K2: complex = 0.0
    kappa: float = 0.0
    eta: float = 0.0

    @property
    def pair_factor(self):
        """``kappa/2 - eta/2`` multiplying the phase-space-filling terms."""
        return 0.5 * self.kappa - 0.5 * self.eta

    @property
    def collision_factor(self):
        """``kappa - eta`` multiplying the biexciton term."""
        return self.kappa - self.eta


# --- two-mode operator algebra ----------------------------------------------

class _TwoMode:
    """Sparse photon/exciton ladder operators with per-mode cutoff."""

    def __init__(self, n_exc):
        self.levels = n_exc + 2
        lower = sp.diags(np.sqrt(np.arange(1, self.levels, dtype=float)), 1, format="csr")
        eye = sp.identity(self.levels, format="csr")
        self.a = sp.kron(lower, eye, format="csr")
        self.b = sp.kron(eye, lower, format="csr")
        self.ad = self.a.T.tocsr()
        self.bd = self.b.T.tocsr()
        self.idx = [n * self.levels + ne for n, ne in ExcitationSector(n_exc).basis]

    def string(self, *ops):
        """Product of ladder operators as written (rightmost acts first)."""
        out = ops[0]
        for op in ops[1:]:
            out = out @ op
        return out

    def restrict(self, op):
        return op.toarray()[np.ix_(self.idx, self.idx)]


# H' = hbar * sum_t coefficient_t(params) * TERM_t
TERMS = ("number", "biexciton", "pair", "k2_linear", "k2_pair")


@lru_cache(maxsize=None)
def _structural(n_exc):
    t = _TwoMode(n_exc)
    a, ad, b, bd = t.a, t.ad, t.b, t.bd
    mats = {
        "number": t.string(bd, b),
        "biexciton": t.string(bd, bd, b, b),
        "pair": t.string(a, bd, bd, b) + t.string(ad, bd, b, b),
        "k2_linear": t.string(a, ad, a, bd) + t.string(ad, a, ad, b),
        "k2_pair": t.string(a, ad, a, bd, bd, b) + t.string(ad, a, ad, bd, b, b),
        "photon_number": t.string(ad, a),
        "exciton_number": t.string(bd, b),
        "Jplus": t.string(ad, b),
        "Jminus": t.string(a, bd),
    }
    out = {k: t.restrict(v) for k, v in mats.items()}
    for v in out.values():
        v.setflags(write=False)
    return out


def term_coefficients(params, subtract_offset=False):
    """Coefficients (rad/s) of each structural term of H' / hbar.

    ``subtract_offset`` drops the constant ``omega_p/2`` from the exciton
    number term (a plotting convenience; it only shifts chi1 by a constant).
    """
    p = params
    return {
        "number": (0.0 if subtract_offset else p.omega_p / 2.0) + p.delta,
        "biexciton": (1.5 * p.omega_p + p.delta) * p.collision_factor,
        "pair": p.K1 * p.pair_factor,
        "k2_linear": p.K2,
        "k2_pair": p.K2 * p.pair_factor,
    }


def sector_with_ops(n_exc):
    """Sector basis plus the Schwinger angular-momentum matrices."""
    sector = ExcitationSector(n_exc)
    s = _structural(n_exc)
    jp = s["Jplus"].astype(complex)
    jm = s["Jminus"].astype(complex)
    jz = 0.5 * (s["photon_number"] - s["exciton_number"]).astype(complex)
    jx = 0.5 * (jp + jm)
    jy = (jp - jm) / 2j
    label = f"|n, n_e>, n + n_e = {n_exc}"
    ops = AngularOps(*(OperatorMatrix(m, label) for m in (jx, jy, jz, jp, jm)))
    return sector, ops


def build_h0(sector, params):
    """``hbar omega_p N + 2 hbar K1 Jx`` on the sector (joules)."""
    _, ops = sector_with_ops(sector.n_exc)
    h = HBAR * (params.omega_p * sector.n_exc * np.eye(sector.dim) + 2.0 * params.K1 * ops.Jx.matrix)
    return OperatorMatrix(h, ops.Jx.basis_label)


def build_hprime(sector, params):
    """Perturbation H' on the sector (joules); Hermitian for real K1, K2."""
    s = _structural(sector.n_exc)
    coeff = term_coefficients(params)
    h = np.zeros((sector.dim, sector.dim), dtype=complex)
    for name in TERMS:
        h += coeff[name] * s[name]
    return OperatorMatrix(HBAR * h, f"|n, n_e>, n + n_e = {sector.n_exc}")


@lru_cache(maxsize=None)
def _rotation(n_exc):
    """``(R, theta, residual)`` with ``R = exp(i theta Jy)`` and ``R Jz R^-1 = Jx``.

    The sign of ``theta = +-pi/2`` is chosen by the defining property rather
    than by convention.
    """
    _, ops = sector_with_ops(n_exc)
    best = None
    for theta in (np.pi / 2, -np.pi / 2):
        r = scipy.linalg.expm(1j * theta * ops.Jy.matrix)
        resid = np.linalg.norm(r @ ops.Jz.matrix @ r.conj().T - ops.Jx.matrix)
        if best is None or resid < best[2]:
            best = (r, theta, resid)
    r, theta, resid = best
    r.setflags(write=False)
    return r, theta, resid


def rotation(sector):
    """Unitary whose columns ``R|jm>`` are the eigenvectors of H0."""
    return _rotation(sector.n_exc)[0]


def rotated_hprime(sector, params):
    """``R^-1 H' R`` (joules); its diagonal is the first-order energy shift."""
    r = rotation(sector)
    return r.conj().T @ build_hprime(sector, params).matrix @ r


def unperturbed_energy(sector, params, m):
    """``hbar omega_p N + 2 hbar K1 m``."""
    return HBAR * (params.omega_p * sector.n_exc + 2.0 * params.K1 * m)


def perturbation_ratio(sector, params, rotated=None):
    """Largest rotated off-diagonal of H' over the smallest H0 level gap."""
    hr = rotated_hprime(sector, params) if rotated is None else rotated
    off = np.max(np.abs(hr - np.diag(np.diag(hr)))) if sector.dim > 1 else 0.0
    gap = 2.0 * HBAR * abs(params.K1)
    if off == 0:
        return 0.0
    return np.inf if gap == 0 else off / gap


def rotated_first_order_energy(sector, params, m=None, guard=0.1):
    """First-order energies ``E_jm = E0_jm + <jm| R^-1 H' R |jm>`` (joules).

    With ``m=None`` returns the whole multiplet in sector order.  Warns when
    the rotated off-diagonal coupling is not small next to the H0 gaps.
    """
    hr = rotated_hprime(sector, params)
    ratio = perturbation_ratio(sector, params, hr)
    if ratio >= guard:
        warnings.warn(
            f"first-order theory unreliable: off-diagonal/gap = {ratio:.3g}",
            stacklevel=2,
        )
    shift = np.diag(hr)
    e0 = unperturbed_energy(sector, params, sector.m_values)
    if m is None:
        return e0 + shift
    k = sector.index(m)
    return e0[k] + shift[k]


def first_order_shift(sector, params):
    """Diagonal of ``R^-1 H' R`` without the guard (joules)."""
    return np.diag(rotated_hprime(sector, params))


# --- closed-form first-order matrix element ---------------------------------

def term_diagonals(n, ne):
    """Rotated diagonal ``<n, n_e| R^-1 TERM R |n, n_e>`` of each structural term.

    Exact polynomials in the photon number ``n = j + m`` and exciton number
    ``n_e = j - m``; valid for ints, Fractions, floats and arrays.
    """
    return {
        "number": (n + ne) / 2,
        "biexciton": (ne * (ne - 1) + n * (n - 1)) / 4 + n * ne,
        "pair": (n * (n - 1) - ne * (ne - 1)) / 2,
        "k2_linear": (n - ne) / 2 + (n * n - ne * ne) / 2,
        "k2_pair": (
            (n * (n - 1) - ne * (ne - 1)) / 2
            + (n * (n - 1) * (n - 2) - ne * (ne - 1) * (ne - 2)) / 4
            - n * ne * (n - 1) / 4
            + n * ne * (ne - 1) / 4
        ),
    }


def matrix_element_analytic(j, m, params):
    """Closed form of ``<jm| R^-1 H' R |jm>`` in joules.

    The antisymmetric ``(j+m)(j+m-1) - (j-m)(j-m-1)`` brackets in the K1 and
    K2 phase-space-filling terms are what the exact rotation produces.
    """
    d = term_diagonals(j + m, j - m)
    c = term_coefficients(params)
    return HBAR * sum(c[t] * d[t] for t in TERMS)


def matrix_element_printed(j, m, params):
    """The matrix element exactly as typeset, kept for comparison only.

    Differs from :func:`matrix_element_analytic` in the K1 bracket (symmetric
    instead of antisymmetric) and in the self-cancelling K2 pair.
    """
    n, ne = j + m, j - m
    p = params
    pf = p.pair_factor
    val = (p.omega_p / 2 + p.delta) * (n / 2 + ne / 2)
    val += (1.5 * p.omega_p + p.delta) * p.collision_factor * (
        ne * (ne - 1) / 4 + n * (n - 1) / 4 + (j * j - m * m)
    )
    val += p.K1 * pf * (ne * (ne - 1) / 2 + n * (n - 1) / 2)
    val += p.K2 * (
        n / 2 - ne / 2 + n**2 / 2 - ne**2 / 2
        + pf * (
            n * (n - 1) / 2 - n * (n - 1) / 2
            + n * (n - 1) * (n - 2) / 4 - ne * (ne - 1) * (ne - 2) / 4
            - n * ne * (n - 1) / 4 + n * ne * (ne - 1) / 4
        )
    )
    return HBAR * val

"""Oracle checks, one function per acceptance criterion.

Each check returns a :class:`CheckResult`; nothing here asserts, so the same
functions back the ``defbec validate`` command and the acceptance tests.
"""

from dataclasses import dataclass
import tempfile
import time
from pathlib import Path

import numpy as np

from . import deformed_algebra as da
from . import lambda_core as lc
from .config import RunConfig
from .constants import AMU, C, HBAR, TWO_PI, angular
from .dispersion_pulse import (
    gaussian_envelope,
    group_index,
    group_index_analytic,
    propagate_pulse,
    refractive_index,
)
from .sector_hamiltonian import (
    ExcitationSector,
    HamiltonianParams,
    first_order_shift,
    matrix_element_analytic,
    matrix_element_printed,
)
from .susceptibility import (
    MediumModel,
    chi_total,
    energy_excess_polynomial,
    polarization,
)
from .sweeps import emit, run_sweep, sign_report


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    elapsed: float = 0.0

    def line(self):
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.detail} ({self.elapsed:.2f} s)"


def _timed(fn):
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        name, passed, detail = fn(*args, **kwargs)
        return CheckResult(name, bool(passed), detail, time.perf_counter() - t0)

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def sodium():
    return RunConfig(-20e6, 20e6)


# 1 ---------------------------------------------------------------------------

def random_hamiltonian_params(rng):
    """Random couplings spanning many decades; K1, K2 complex."""
    return HamiltonianParams(
        omega_p=10 ** rng.uniform(9, 16),
        delta=rng.uniform(-1e9, 1e9),
        K1=complex(*(10 ** rng.uniform(0, 9, 2) * rng.choice([-1, 1], 2))),
        K2=complex(*(10 ** rng.uniform(-6, 6, 2) * rng.choice([-1, 1], 2))),
        kappa=rng.uniform(0, 0.05),
        eta=1.0 / rng.integers(50, 10**6),
    )


@_timed
def check_matrix_element(n_max=30, tuples=100, seed=1, tol=1e-9):
    """Closed-form matrix element vs the numerically rotated diagonal of H'."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    printed_dev = 0.0
    for _ in range(tuples):
        p = random_hamiltonian_params(rng)
        for n_exc in range(1, n_max + 1):
            sector = ExcitationSector(n_exc)
            num = first_order_shift(sector, p)
            ana = np.array([matrix_element_analytic(sector.j, m, p) for m in sector.m_values])
            scale = np.max(np.abs(num))
            worst = max(worst, np.max(np.abs(num - ana)) / scale)
            prn = np.array([matrix_element_printed(sector.j, m, p) for m in sector.m_values])
            printed_dev = max(printed_dev, np.max(np.abs(prn - num)) / scale)
    detail = (f"worst relative deviation {worst:.2e} (tol {tol:g}) over n_exc<=30, {tuples} tuples; "
              f"typeset form deviates by up to {printed_dev:.2e}")
    return "matrix element oracle", worst <= tol, detail


def printed_k2_pair_bracket(n):
    """Leading pair bracket of the typeset K2 term: ``n(n-1)/2 - n(n-1)/2``."""
    return n * (n - 1) / 2 - n * (n - 1) / 2


# 2 ---------------------------------------------------------------------------

@_timed
def check_linear_response(points=41, tol=1e-3):
    """Liouville steady state vs ``1/Gamma`` under a weak probe."""
    cfg = sodium()
    atoms = cfg.atoms()
    rates = lc.derived_rates(atoms)
    g2 = 1e-4 * rates[0]
    worst = 0.0
    for delta in np.linspace(-TWO_PI * 20e6, TWO_PI * 20e6, points):
        rho = lc.liouville_steady_state(atoms, lc.FieldParams(g1=cfg.g1, g2=g2, delta=delta))
        ref = 1.0 / lc.gamma_factor(delta, cfg.g1, rates)
        worst = max(worst, abs(lc.rho32(rho) / g2 - ref) / abs(ref))
    return "Lambda linear response", worst <= tol, f"worst relative deviation {worst:.2e} (tol {tol:g})"


# 3 ---------------------------------------------------------------------------

@_timed
def check_eit_transparency(points=4001, tol=1e-4):
    """Absorption at line centre relative to the window maximum."""
    cfg = sodium()
    rates = lc.derived_rates(cfg.atoms())
    grid = np.linspace(-TWO_PI * 20e6, TWO_PI * 20e6, points)
    absorption = np.abs(np.imag(1.0 / lc.gamma_factor(grid, cfg.g1, rates)))
    centre = abs(np.imag(1.0 / lc.gamma_factor(0.0, cfg.g1, rates)))
    ratio = centre / absorption.max()
    return "EIT transparency", ratio <= tol, f"|Im(1/Gamma)| ratio at delta=0: {ratio:.3e} (tol {tol:g})"


# 4 ---------------------------------------------------------------------------

@_timed
def check_limits(dim=51):
    """Undeformed limits of the susceptibility and of the operator algebra."""
    cfg = sodium()
    grid = np.linspace(-TWO_PI * 20e6, TWO_PI * 20e6, 41)
    failures = []

    sentinel = RunConfig(-20e6, 20e6, eta_zero=True).condensate(0.0, 1e14)
    undeformed = MediumModel(cfg.atoms(), sentinel, cfg.g1)
    _, _, chi5 = undeformed.susceptibilities(grid, 25.0)
    if np.any(np.asarray(chi5) != 0):
        failures.append("chi5 != 0 at kappa=0, eta=0")

    bare = da.annihilation(dim)
    cond = da.CondensateParams.build(1e14, kappa=0.0, eta_zero=True)
    for which in da.BUILDERS:
        ann, cre = da.build_operator_matrices(dim, cond, which)
        if np.max(np.abs(ann.matrix - bare)) > 1e-12 or np.max(np.abs(cre.matrix - bare.T)) > 1e-12:
            failures.append(f"{which} differs from bare")

    for n in range(0, 51):
        if n and da.collision_deformation_f2(n, 0.0) != 1.0:
            failures.append(f"f2({n}, 0) != 1")
        if da.gardiner_f1(n, 0.0) != 1.0:
            failures.append(f"f1({n}, 0) != 1")

    for n_atoms in (100, 200, 300, 1e4):
        cond = da.CondensateParams.build(n_atoms, kappa=1.0 / n_atoms,
                                         quant_volume=cfg.resolved_volume())
        model = MediumModel(cfg.atoms(), cond, cfg.g1)
        _, _, chi5 = model.susceptibilities(grid, 25.0)
        if np.any(np.asarray(chi5) != 0):
            failures.append(f"chi5 != 0 at kappa=1/N, N={n_atoms}")

    detail = "all limits exact" if not failures else "; ".join(failures[:5])
    return "limit reductions", not failures, detail


# 5 ---------------------------------------------------------------------------

RB87_MASS = 86.909 * AMU
RB87_SCATTERING_LENGTH = 5.3e-9
RB87_DENSITY = 1e18  # 1e12 cm^-3
RB87_TEMPERATURE = 180e-9


@_timed
def check_deformed_spectra():
    """Closed form vs quadratic truncation, collision mapping, Rb-87 rate."""
    failures = []
    worst_ratio = 0.0
    for nu in (1e-4, 1e-3, 1e-2, 0.05, 0.1):
        p = da.DeformedAlgebraParams(tau=1.0, mu=0.0, nu=nu, beta=0.0)
        for n in range(0, 1001):
            if nu * n > 0.1:
                break
            exact = da.free_energy_closed_form(n, p)
            quad = da.free_energy_quadratic(n, p)
            rel = abs(exact - quad) / abs(exact)
            bound = 3.0 * (nu * n) ** 2
            if n and bound:
                worst_ratio = max(worst_ratio, rel / bound)
            if rel > bound and not (n == 0 and rel < 1e-15):
                failures.append(f"nu={nu}, n={n}: {rel:.2e} > {bound:.2e}")

    omega0 = angular(5.1e14)
    for kappa in (0.0, 0.005, 0.008, 1.0):
        p = da.collision_mapping(kappa, omega0)
        for n in range(0, 11):
            got = da.small_deformation_interaction(n, p)
            want = 0.5 * HBAR * kappa * n * n
            if abs(got - want) > 1e-14 * max(abs(want), 1e-300):
                failures.append(f"mapping kappa={kappa}, n={n}")

    rate = da.estimate_collision_rate(RB87_DENSITY, RB87_SCATTERING_LENGTH, RB87_TEMPERATURE, RB87_MASS)
    if not 0.1 <= rate <= 10.0:
        failures.append(f"Rb-87 rate {rate:.3g} 1/s outside [0.1, 10]")
    detail = (f"truncation error at most {worst_ratio:.2f} of 3(nu n)^2; mapping exact at n<=10; "
              f"Rb-87 rate {rate:.3g} 1/s")
    return "deformed spectra", not failures, detail if not failures else "; ".join(failures[:5])


# 6 ---------------------------------------------------------------------------

def energy_continuous(s, n_e, params):
    """First-order energy excess at real ``sqrt(n) = s`` (closed form)."""
    n = s * s
    j, m = (n + n_e) / 2.0, (n - n_e) / 2.0
    return matrix_element_analytic(j, m, params)


@_timed
def check_polarization(tol=1e-6, rel_step=1e-4):
    """Cubic-fit polarization vs central differences of E over sqrt(n)."""
    cfg = sodium()
    worst = 0.0
    families = [(k, 1e14, True) for k in (0.0, 0.005, 0.008)]
    families += [(k, n, False) for k in (0.0, 0.005, 0.008) for n in (100, 200, 300)]
    for kappa, n_atoms, eta_zero in families:
        cond = da.CondensateParams.build(n_atoms, kappa=kappa, eta_zero=eta_zero,
                                         quant_volume=cfg.resolved_volume())
        model = MediumModel(cfg.atoms(), cond, cfg.g1)
        eps = model.field_quantization(25.0).epsilon
        for delta in (-TWO_PI * 10e6, TWO_PI * 1e6, TWO_PI * 15e6):
            hp = model.hamiltonian_params(delta)
            poly = energy_excess_polynomial(1, hp, source="numeric")
            for n in (1, 4, 25):
                s = np.sqrt(n)
                h = rel_step * s
                fd = -(energy_continuous(s + h, 1, hp) - energy_continuous(s - h, 1, hp)) / (2 * h) / eps
                fit = polarization(n, poly, eps)
                worst = max(worst, abs(fit - fd) / abs(fd))
    return "polarization derivative", worst <= tol, f"worst relative deviation {worst:.2e} (tol {tol:g})"


# 7 ---------------------------------------------------------------------------

def doublet_chi(omega, centre, split, width, strength):
    """Two gain lines at ``centre +- split``; returns ``(chi, dchi/domega)``."""
    chi = np.zeros_like(omega, dtype=complex)
    dchi = np.zeros_like(omega, dtype=complex)
    for w0 in (centre - split, centre + split):
        den = omega - w0 + 1j * width
        chi += strength / den
        dchi += -strength / den**2
    return chi, dchi


def lorentzian_chi(omega, centre, width, strength):
    """Absorbing line; returns ``(chi, dchi/domega)``."""
    den = centre - omega - 1j * width
    return strength / den, strength / den**2


@_timed
def check_pulse(slab_length=1e-4, fwhm=1e-6):
    failures = []
    carrier = angular(5.1e14)
    omega = carrier + np.linspace(-TWO_PI * 200e6, TWO_PI * 200e6, 40001)
    t = np.linspace(-40e-6, 40e-6, 2**15, endpoint=False)
    dt = t[1] - t[0]
    env = gaussian_envelope(t, fwhm)

    vac = propagate_pulse(omega, np.zeros(omega.size), carrier, t, env, slab_length)
    vac_err = abs(vac.transit_time - vac.vacuum_time)
    if vac_err > dt:
        failures.append(f"vacuum transit off by {vac_err:.2e} s")

    n0 = 1.5
    flat = propagate_pulse(omega, np.full(omega.size, n0**2 - 1.0), carrier, t, env, slab_length)
    flat_err = abs(flat.measured_delay - (n0 - 1.0) * slab_length / C)
    if flat_err > dt:
        failures.append(f"nondispersive delay off by {flat_err:.2e} s")

    chi, _ = doublet_chi(omega, carrier, TWO_PI * 20e6, TWO_PI * 1e6, TWO_PI * 2e4)
    dbl = propagate_pulse(omega, chi, carrier, t, env, slab_length)
    dbl_rel = abs(dbl.measured_delay - dbl.predicted_delay) / abs(dbl.predicted_delay)
    if not (dbl.measured_delay < 0 and dbl_rel <= 0.05):
        failures.append(f"doublet delay {dbl.measured_delay:.3e} vs {dbl.predicted_delay:.3e}")

    w0, gam = 1e9, 1e6
    grid = w0 + np.linspace(-5 * gam, 5 * gam, 10001)
    lor, dlor = lorentzian_chi(grid, w0, gam, 5e-4)
    ng_fd = group_index(grid, refractive_index(lor))
    ng_an = group_index_analytic(grid, lor, dlor)
    inner = slice(1, -1)
    ng_rel = np.max(np.abs(ng_fd[inner] - ng_an[inner]) / np.abs(ng_an[inner]))
    if ng_rel > 1e-6:
        failures.append(f"Lorentzian n_g deviation {ng_rel:.2e}")

    detail = (f"vacuum {vac_err:.1e} s, flat slab {flat_err:.1e} s (dt {dt:.1e} s), "
              f"doublet n_g {dbl.n_group_carrier:.4g} delay error {dbl_rel:.2%}, "
              f"Lorentzian n_g {ng_rel:.1e}")
    return "pulse and dispersion", not failures, detail if not failures else "; ".join(failures)


# 8 ---------------------------------------------------------------------------

def peak_nonlinear(config, kappa, n_atoms, eta_zero, photons=25.0, points=400):
    cond = da.CondensateParams.build(n_atoms, kappa=kappa, eta_zero=eta_zero,
                                     density=config.values["density"],
                                     quant_volume=config.resolved_volume())
    model = MediumModel(config.atoms(), cond, config.g1, n_exciton=1, third_order=config.third_order)
    grid = TWO_PI * np.linspace(config.delta_min_hz, config.delta_max_hz, points)
    return float(np.max(np.abs(chi_total(grid, photons, model).chi_nl.real)))


@_timed
def check_trends():
    cfg = sodium()
    by_kappa = [peak_nonlinear(cfg, k, 1e14, True) for k in (0.0, 0.005, 0.008)]
    by_eta = [peak_nonlinear(cfg, 0.0, n, False) for n in (300, 200, 100)]
    ok = all(np.diff(by_kappa) >= 0) and all(np.diff(by_eta) >= 0)
    sweep = RunConfig(-20e6, 20e6, kappa=(0.0, 0.005, 0.008), n_atoms=(1e14,), eta_zero=True)
    _, lines = sign_report(run_sweep(sweep))
    detail = ("peak |Re chi_nl| vs kappa " + ", ".join(f"{v:.3e}" for v in by_kappa)
              + "; vs eta (N=300,200,100) " + ", ".join(f"{v:.3e}" for v in by_eta)
              + " | " + " | ".join(lines))
    return "trend reproduction", ok, detail


# 9 ---------------------------------------------------------------------------

@_timed
def check_determinism(limit=5.0):
    cfg = RunConfig(-20e6, 20e6, kappa=(0.0, 0.005, 0.008), n_atoms=(1e14,), eta_zero=True,
                    points=400, formats=("csv", "json"))
    blobs = []
    times = []
    with tempfile.TemporaryDirectory() as tmp:
        for i in range(2):
            t0 = time.perf_counter()
            records = run_sweep(cfg)
            paths = emit(records, cfg, out_dir=Path(tmp) / str(i))
            times.append(time.perf_counter() - t0)
            blobs.append({p.name: p.read_bytes() for p in paths})
    same = blobs[0] == blobs[1]
    ok = same and len(records) == 1200 and max(times) < limit
    detail = (f"{len(records)} records, slowest run {max(times):.2f} s (limit {limit:g} s), "
              f"outputs {'byte-identical' if same else 'DIFFER'}")
    return "determinism and speed", ok, detail


CHECKS = (
    check_matrix_element,
    check_linear_response,
    check_eit_transparency,
    check_limits,
    check_deformed_spectra,
    check_polarization,
    check_pulse,
    check_trends,
    check_determinism,
)


def run_all():
    return [check() for check in CHECKS]

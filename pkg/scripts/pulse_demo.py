"""Gaussian pulse through a slab of the condensate, plus a gain-doublet
reference medium whose group index is strongly negative.

    python3 scripts/pulse_demo.py
"""

import numpy as np

from defbec.config import RunConfig
from defbec.constants import TWO_PI
from defbec.dispersion_pulse import gaussian_envelope, propagate_pulse
from defbec.susceptibility import chi_total
from defbec.sweeps import model_for
from defbec.validate import doublet_chi


def report(label, run):
    kind = "subluminal" if run.n_group_carrier > 1 else "superluminal"
    print(f"{label}: n_g = {run.n_group_carrier:.6g} ({kind}), "
          f"delay measured {run.measured_delay:.4g} s, predicted {run.predicted_delay:.4g} s")


def main():
    cfg = RunConfig(-200e6, 200e6, points=40001, eta_zero=True)
    t = np.linspace(-20e-6, 20e-6, 2**14, endpoint=False)
    envelope = gaussian_envelope(t, cfg.fwhm)
    d_hz = np.linspace(cfg.delta_min_hz, cfg.delta_max_hz, cfg.points)

    for kappa, offset_hz in ((0.008, 0.0), (0.008, 5e6), (0.008, -5e6)):
        model = model_for(cfg, kappa, 1e14)
        spec = chi_total(TWO_PI * d_hz, cfg.photon_number(), model)
        omega = model.omega_p + TWO_PI * d_hz
        run = propagate_pulse(omega, spec.chi_total, model.omega_p + TWO_PI * offset_hz,
                              t, envelope, cfg.slab_length)
        report(f"condensate kappa={kappa} offset={offset_hz:g} Hz", run)

    carrier = TWO_PI * 5.1e14
    omega = carrier + TWO_PI * d_hz
    chi, _ = doublet_chi(omega, carrier, TWO_PI * 20e6, TWO_PI * 1e6, TWO_PI * 2e4)
    report("gain doublet", propagate_pulse(omega, chi, carrier, t, envelope, 1e-4))


if __name__ == "__main__":
    main()

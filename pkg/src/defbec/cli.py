"""Command line entry point: ``defbec sweep | pulse | validate``."""

import argparse
import sys

import numpy as np

from .config import ConfigError, from_mapping, load_config, with_updates
from .constants import TWO_PI
from .dispersion_pulse import gaussian_envelope, propagate_pulse
from .susceptibility import chi_total
from .sweeps import emit, model_for, run_sweep, sign_report


def _floats(text):
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _range(text):
    try:
        lo, hi = (float(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected MIN:MAX in Hz, got {text!r}") from None
    return lo, hi


def _add_common(p):
    p.add_argument("--config", help="flat TOML file; flags given on the command line win")
    p.add_argument("--preset", default=None)
    p.add_argument("--kappa", type=_floats, help="collision rates in 1/s, comma separated")
    p.add_argument("--natoms", type=_floats, help="atom numbers, comma separated")
    p.add_argument("--eta-zero", action="store_true", default=None, help="set 1/N to exactly 0")
    p.add_argument("--delta-range", type=_range, help="detuning window MIN:MAX in Hz")
    p.add_argument("--points", type=int)
    p.add_argument("--photons", type=float)
    p.add_argument("--intensity", type=float, help="probe intensity in W/m^2 (instead of --photons)")
    p.add_argument("--n-exciton", type=int)
    p.add_argument("--volume-mode", choices=("fixed", "density"))
    p.add_argument("--quant-volume", type=float, help="quantization volume in m^3 (fixed mode)")
    p.add_argument("--printed-path", action="store_true", default=None)
    p.add_argument("--subtract-offset", action="store_true", default=None)
    p.add_argument("--third-order", choices=("liouville", "closed_form"),
                   help="source of the cubic probe coherence")
    p.add_argument("--out")


def build_config(args):
    """Merge a config file (if any) with explicit flags."""
    flags = {
        "preset": args.preset,
        "kappa": args.kappa,
        "n_atoms": args.natoms,
        "eta_zero": args.eta_zero,
        "points": args.points,
        "photons": args.photons,
        "intensity": args.intensity,
        "n_exciton": args.n_exciton,
        "volume_mode": args.volume_mode,
        "quant_volume": args.quant_volume,
        "printed_path": args.printed_path,
        "subtract_offset": args.subtract_offset,
        "third_order": args.third_order,
        "out": args.out,
    }
    if args.delta_range is not None:
        flags["delta_min_hz"], flags["delta_max_hz"] = args.delta_range
    for extra in ("formats", "timestamp", "slab_length", "fwhm"):
        flags[extra] = getattr(args, extra, None)
    flags = {k: v for k, v in flags.items() if v is not None}
    if args.intensity is not None and args.photons is None:
        flags["photons"] = None  # the intensity decides the photon number
    if args.config:
        cfg = load_config(args.config)
        return with_updates(cfg, **flags)
    return from_mapping(flags, source="command line")


def cmd_sweep(args):
    cfg = build_config(args)
    records = run_sweep(cfg)
    paths = emit(records, cfg)
    _, lines = sign_report(records)
    for line in lines:
        print(line)
    print(f"wrote {len(paths)} file(s) to {cfg.out}")
    return 0


def cmd_pulse(args):
    cfg = build_config(args)
    kappa, n_atoms = cfg.kappa[0], cfg.n_atoms[0]
    model = model_for(cfg, kappa, n_atoms)
    d_hz = np.linspace(cfg.delta_min_hz, cfg.delta_max_hz, cfg.points)
    spec = chi_total(TWO_PI * d_hz, cfg.photon_number(), model)
    carrier = model.omega_p + TWO_PI * args.carrier_offset
    omega = model.omega_p + TWO_PI * d_hz
    window = args.window_fwhm * cfg.fwhm
    t = np.linspace(-window / 2, window / 2, args.samples, endpoint=False)
    run = propagate_pulse(omega, spec.chi_total, carrier, t, gaussian_envelope(t, cfg.fwhm), cfg.slab_length)
    label = "subluminal" if run.n_group_carrier > 1 else "superluminal" if run.n_group_carrier < 1 else "luminal"
    print(f"kappa={kappa!r} N={n_atoms!r} L={cfg.slab_length!r} m FWHM={cfg.fwhm!r} s")
    print(f"n_g(carrier) = {run.n_group_carrier!r} ({label})")
    print(f"measured delay  = {run.measured_delay!r} s")
    print(f"predicted delay = {run.predicted_delay!r} s")
    print(f"time step       = {float(t[1] - t[0])!r} s")
    return 0


def cmd_validate(args):
    from .validate import run_all

    results = run_all()
    for r in results:
        print(r.line())
    return 0 if all(r.passed for r in results) else 1


def make_parser():
    parser = argparse.ArgumentParser(prog="defbec", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="susceptibility and group index over (kappa, N, delta)")
    _add_common(p)
    p.add_argument("--format", dest="formats", type=lambda s: tuple(x for x in s.split(",") if x))
    p.add_argument("--timestamp", action="store_true", default=None, help="stamp SVG files")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("pulse", help="propagate a Gaussian pulse through a slab")
    _add_common(p)
    p.add_argument("--slab-length", type=float)
    p.add_argument("--fwhm", type=float)
    p.add_argument("--carrier-offset", type=float, default=0.0, help="carrier detuning in Hz")
    p.add_argument("--samples", type=int, default=2**14)
    p.add_argument("--window-fwhm", type=float, default=40.0, help="time window in units of FWHM")
    p.set_defaults(func=cmd_pulse)

    p = sub.add_parser("validate", help="run the oracle checks")
    p.set_defaults(func=cmd_validate)
    return parser


def _join_ranges(argv):
    """Glue ``--delta-range -2e7:2e7`` into one token; argparse would read the
    value as an option because of the leading minus."""
    out = []
    it = iter(argv)
    for tok in it:
        if tok == "--delta-range":
            out.append(f"{tok}={next(it, '')}")
        else:
            out.append(tok)
    return out


def main(argv=None):
    parser = make_parser()
    args = parser.parse_args(_join_ranges(sys.argv[1:] if argv is None else list(argv)))
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"defbec: configuration error: {exc}", file=sys.stderr)
        return 2
    except (ArithmeticError, ValueError, OSError) as exc:
        print(f"defbec: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

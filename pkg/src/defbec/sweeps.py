"""Parameter sweeps over (kappa, N, delta) and CSV / JSON / SVG emission."""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
import csv
import datetime
import json
import math
import os
from pathlib import Path

import numpy as np

from . import __version__
from .constants import TWO_PI
from .dispersion_pulse import group_index, refractive_index, zero_crossings
from .susceptibility import MediumModel, chi_total

CSV_HEADER = (
    "kappa", "n_atoms", "delta_hz",
    "chi1_re", "chi1_im", "chinl_re", "chinl_im", "chi_re", "chi_im", "n_group",
    "flag",
)
QUANTITIES = ("n_group", "chi_re", "chi_im", "chinl_re", "chinl_im", "chi1_re", "chi1_im")
LINE_STYLES = ("2,3", "", "8,3,2,3")  # dotted, solid, dash-dot


@dataclass(frozen=True)
class SweepRecord:
    kappa: float
    n_atoms: float
    delta_hz: float
    chi1: complex
    chinl: complex
    chi: complex
    n_group: float
    flag: str = "ok"

    def row(self):
        return (
            self.kappa, self.n_atoms, self.delta_hz,
            self.chi1.real, self.chi1.imag, self.chinl.real, self.chinl.imag,
            self.chi.real, self.chi.imag, self.n_group, self.flag,
        )

    def value(self, quantity):
        return dict(zip(CSV_HEADER, self.row()))[quantity]


def delta_grid_hz(config):
    return np.linspace(config.delta_min_hz, config.delta_max_hz, config.points)


def model_for(config, kappa, n_atoms):
    return MediumModel(
        config.atoms(),
        config.condensate(kappa, n_atoms),
        config.g1,
        n_exciton=config.n_exciton,
        path="printed" if config.printed_path else "derived",
        subtract_offset=config.subtract_offset,
        third_order=config.third_order,
    )


def evaluate_family(config, kappa, n_atoms, model=None):
    """Records for one (kappa, N) pair over the detuning grid."""
    model = model_for(config, kappa, n_atoms) if model is None else model
    d_hz = delta_grid_hz(config)
    try:
        spec = chi_total(TWO_PI * d_hz, config.photon_number(), model)
    except (ArithmeticError, ValueError) as exc:
        raise type(exc)(f"kappa={kappa}, n_atoms={n_atoms}: {exc}") from exc

    flags = np.full(d_hz.shape, "ok", dtype=object)
    arg = 1.0 + spec.chi_total
    flags[arg == 0] = "branch"
    n = np.where(arg == 0, np.nan, np.sqrt(np.where(arg == 0, 1.0, arg)))
    omega = model.omega_p + TWO_PI * d_hz
    n_g = group_index(omega, n)
    bad = ~np.isfinite(n_g) & (flags == "ok")
    flags[bad] = "nonfinite"
    return [
        SweepRecord(float(kappa), float(n_atoms), float(d_hz[i]),
                    complex(spec.chi1[i]), complex(spec.chi_nl[i]), complex(spec.chi_total[i]),
                    float(n_g[i]), str(flags[i]))
        for i in range(d_hz.size)
    ]


def _threads():
    raw = os.environ.get("DEFBEC_THREADS")
    if raw is None:
        return min(4, os.cpu_count() or 1)
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"DEFBEC_THREADS must be an integer, got {raw!r}") from None
    return max(1, value)


def run_sweep(config):
    """Cartesian product in canonical order: kappa outer, N middle, delta inner."""
    pairs = [(k, n) for k in config.kappa for n in config.n_atoms]
    workers = min(_threads(), len(pairs))
    if workers <= 1:
        families = [evaluate_family(config, k, n) for k, n in pairs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            families = list(pool.map(lambda p: evaluate_family(config, *p), pairs))
    return [r for fam in families for r in fam]


def group(records, key):
    """Ordered ``{(kappa, n_atoms): [records]}``."""
    out = {}
    for r in records:
        out.setdefault(key(r), []).append(r)
    return out


def sign_report(records):
    """Zero crossings of n_g(delta) per family and which signs occur."""
    lines = []
    summary = []
    for (kappa, n_atoms), recs in group(records, lambda r: (r.kappa, r.n_atoms)).items():
        x = np.array([r.delta_hz for r in recs])
        ng = np.array([r.n_group for r in recs])
        ok = np.isfinite(ng)
        zeros = zero_crossings(x[ok], ng[ok])
        positive, negative = bool(np.any(ng[ok] > 0)), bool(np.any(ng[ok] < 0))
        sub, sup = bool(np.any(ng[ok] > 1)), bool(np.any(ng[ok] < 1))
        summary.append({
            "kappa": kappa,
            "n_atoms": n_atoms,
            "n_group_zero_crossings_hz": zeros,
            "both_signs": positive and negative,
            "subluminal_and_superluminal": sub and sup,
            "n_group_min": float(ng[ok].min()) if ok.any() else math.nan,
            "n_group_max": float(ng[ok].max()) if ok.any() else math.nan,
        })
        lines.append(
            f"kappa={kappa!r} N={n_atoms!r}: n_g in [{summary[-1]['n_group_min']:.9g}, "
            f"{summary[-1]['n_group_max']:.9g}], {len(zeros)} zero crossing(s)"
            + (f" at {', '.join(f'{z:.6g}' for z in zeros)} Hz" if zeros else "")
            + f"; both signs of n_g: {'yes' if positive and negative else 'no'}"
            + f"; sub- and superluminal: {'yes' if sub and sup else 'no'}"
        )
    return summary, lines


# --- emission ----------------------------------------------------------------

def write_csv(records, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in records:
            w.writerow([repr(v) if isinstance(v, float) else v for v in r.row()])


def read_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    out = []
    for row in rows:
        f = {k: float(v) for k, v in row.items() if k != "flag"}
        out.append(SweepRecord(
            f["kappa"], f["n_atoms"], f["delta_hz"],
            complex(f["chi1_re"], f["chi1_im"]), complex(f["chinl_re"], f["chinl_im"]),
            complex(f["chi_re"], f["chi_im"]), f["n_group"], row["flag"],
        ))
    return out


def _finite_or_none(v):
    return v if not isinstance(v, float) or math.isfinite(v) else None


def write_json(records, path, config):
    summary, _ = sign_report(records)
    doc = {
        "metadata": {
            "config": config.snapshot(),
            "code_version": __version__,
            "errata_path": "printed" if config.printed_path else "derived",
            "columns": list(CSV_HEADER),
        },
        "report": summary,
        "records": [[_finite_or_none(v) for v in r.row()] for r in records],
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1, sort_keys=True, allow_nan=False)
        fh.write("\n")


def _svg_chart(title, xlabel, series, timestamp=None, width=640, height=400):
    """Minimal line chart; ``series`` is ``[(label, x, y), ...]``."""
    left, right, top, bottom = 80, 20, 40, 50
    xs = np.concatenate([np.asarray(s[1], float) for s in series])
    ys = np.concatenate([np.asarray(s[2], float) for s in series])
    ys = ys[np.isfinite(ys)]
    x0, x1 = float(xs.min()), float(xs.max())
    y0, y1 = (float(ys.min()), float(ys.max())) if ys.size else (0.0, 1.0)
    if y1 == y0:
        y0, y1 = y0 - 0.5 * (abs(y0) or 1.0), y1 + 0.5 * (abs(y1) or 1.0)
    pw, ph = width - left - right, height - top - bottom

    def px(x):
        return left + (x - x0) / (x1 - x0) * pw

    def py(y):
        return top + (y1 - y) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
        f'<text x="{width / 2}" y="22" text-anchor="middle" font-size="14">{title}</text>',
        f'<text x="{width / 2}" y="{height - 10}" text-anchor="middle" font-size="12">{xlabel}</text>',
        f'<text x="{left - 6}" y="{top + 4}" text-anchor="end" font-size="10">{y1:.4g}</text>',
        f'<text x="{left - 6}" y="{top + ph}" text-anchor="end" font-size="10">{y0:.4g}</text>',
        f'<text x="{left}" y="{top + ph + 16}" text-anchor="middle" font-size="10">{x0:.4g}</text>',
        f'<text x="{left + pw}" y="{top + ph + 16}" text-anchor="middle" font-size="10">{x1:.4g}</text>',
    ]
    for i, (label, x, y) in enumerate(series):
        pts = " ".join(
            f"{px(a):.2f},{py(b):.2f}" for a, b in zip(x, y) if math.isfinite(b)
        )
        dash = LINE_STYLES[i % len(LINE_STYLES)]
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        out.append(f'<polyline fill="none" stroke="black" stroke-width="1.2"{dash_attr} points="{pts}"/>')
        ly = top + 16 + 16 * i
        out.append(f'<line x1="{left + pw - 150}" y1="{ly}" x2="{left + pw - 110}" y2="{ly}" '
                   f'stroke="black"{dash_attr}/>')
        out.append(f'<text x="{left + pw - 104}" y="{ly + 4}" font-size="11">{label}</text>')
    if timestamp:
        out.append(f'<text x="{width - 4}" y="{height - 4}" text-anchor="end" font-size="8">{timestamp}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_svgs(records, out_dir, config, timestamp=False):
    """One chart per (quantity, family); returns the written paths."""
    stamp = datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds") if timestamp else None
    by_pair = group(records, lambda r: (r.kappa, r.n_atoms))
    families = []
    if len(config.kappa) > 1 or len(config.n_atoms) == 1:
        for n in config.n_atoms:
            families.append((f"N{n:g}", "N = %g" % n, [(f"kappa = {k:g} 1/s", by_pair[(k, n)]) for k in config.kappa]))
    if len(config.n_atoms) > 1:
        for k in config.kappa:
            families.append((f"kappa{k:g}", "kappa = %g 1/s" % k, [(f"N = {n:g}", by_pair[(k, n)]) for n in config.n_atoms]))
    written = []
    for q in QUANTITIES:
        for tag, caption, members in families:
            series = [
                (label, [r.delta_hz for r in recs], [r.value(q) for r in recs])
                for label, recs in members
            ]
            path = Path(out_dir) / f"{q}_{tag}.svg"
            path.write_text(_svg_chart(f"{q} ({caption})", "detuning (Hz)", series, stamp))
            written.append(path)
    return written


def emit(records, config, out_dir=None, formats=None, timestamp=None):
    """Write the requested formats plus a plain-text report; returns paths."""
    if not records:
        raise ValueError("no records to emit")
    out_dir = Path(config.out if out_dir is None else out_dir)
    formats = config.formats if formats is None else formats
    timestamp = config.timestamp if timestamp is None else timestamp
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        written = []
        if "csv" in formats:
            written.append(out_dir / "sweep.csv")
            write_csv(records, written[-1])
        if "json" in formats:
            written.append(out_dir / "sweep.json")
            write_json(records, written[-1], config)
        if "svg" in formats:
            written.extend(write_svgs(records, out_dir, config, timestamp))
        _, lines = sign_report(records)
        written.append(out_dir / "report.txt")
        written[-1].write_text("\n".join(lines) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write output under {out_dir}: {exc}") from exc
    return written

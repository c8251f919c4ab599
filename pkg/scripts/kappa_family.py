"""Susceptibility and group index across collision rates at fixed N.

    python3 scripts/kappa_family.py [out_dir]
"""

import sys

from defbec.config import RunConfig
from defbec.sweeps import emit, run_sweep, sign_report


def main(out="out/kappa_family"):
    cfg = RunConfig(
        -20e6, 20e6,
        kappa=(0.0, 0.005, 0.008),
        n_atoms=(1e14,),
        eta_zero=True,
        formats=("csv", "json", "svg"),
        out=out,
    )
    records = run_sweep(cfg)
    paths = emit(records, cfg)
    for line in sign_report(records)[1]:
        print(line)
    print(f"wrote {len(paths)} files to {out}")


if __name__ == "__main__":
    main(*sys.argv[1:])

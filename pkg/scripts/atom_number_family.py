"""Susceptibility and group index across atom numbers at fixed kappa.

The quantization volume is held fixed by default; pass ``density`` as the
second argument to let it scale as N / density instead.

    python3 scripts/atom_number_family.py [out_dir] [fixed|density]
"""

import sys

from defbec.config import RunConfig
from defbec.sweeps import emit, run_sweep, sign_report


def main(out="out/atom_number_family", volume_mode="fixed"):
    cfg = RunConfig(
        -20e6, 20e6,
        kappa=(0.008,),
        n_atoms=(300.0, 200.0, 100.0),
        volume_mode=volume_mode,
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

"""Run configuration, presets and the flat TOML loader.

Every frequency-like key ending in ``_hz`` is an ordinary frequency and is
converted to rad/s with a factor 2 pi.  Collision rates ``kappa`` are plain
rates in 1/s and are never multiplied by 2 pi.
"""

from dataclasses import asdict, dataclass, field, fields, replace
import sys

from .constants import angular
from .deformed_algebra import CondensateParams
from .lambda_core import AtomicParams

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib


PRESETS = {
    "sodium": {
        "omega12_hz": 1772e6,
        "omega_opt_hz": 5.1e14,
        "density": 3.3e18,  # 3.3e12 cm^-3
        "mu32": 22e-30,
        "mu31": 22e-30,
        "gamma31_hz": 5e6,
        "gamma32_hz": 5e6,
        "gamma12_hz": 38e3,
        "g1_hz": 21.4e6,
        "intensity_p": 0.8,  # 80 uW/cm^2
        "intensity_c": 550.0,  # 55 mW/cm^2
    },
}

# fixed quantization volume for the "fixed" mode: the volume of 1e14 atoms
REFERENCE_ATOMS = 1e14

FORMATS = ("csv", "json", "svg")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    """Everything a sweep needs.  Detunings are in Hz, ``kappa`` in 1/s."""

    delta_min_hz: float
    delta_max_hz: float
    preset: str = "sodium"
    points: int = 400
    kappa: tuple = (0.0,)
    n_atoms: tuple = (1e14,)
    eta_zero: bool = False
    photons: float = 25.0
    intensity: float = None
    n_exciton: int = 1
    volume_mode: str = "fixed"
    quant_volume: float = None
    printed_path: bool = False
    subtract_offset: bool = False
    third_order: str = "liouville"
    formats: tuple = ("csv",)
    out: str = "defbec-out"
    timestamp: bool = False
    slab_length: float = 1e-4
    fwhm: float = 1e-6
    overrides: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.preset not in PRESETS:
            raise ConfigError(f"unknown preset {self.preset!r}; known: {sorted(PRESETS)}")
        if self.points < 3:
            raise ConfigError("points must be >= 3")
        if not self.delta_max_hz > self.delta_min_hz:
            raise ConfigError("delta range must have max > min")
        if not self.kappa:
            raise ConfigError("need at least one kappa value")
        if not self.n_atoms:
            raise ConfigError("need at least one n_atoms value")
        if any(k < 0 for k in self.kappa):
            raise ConfigError("kappa must be >= 0")
        if any(n < 1 for n in self.n_atoms):
            raise ConfigError("n_atoms must be >= 1")
        if self.volume_mode not in ("fixed", "density"):
            raise ConfigError("volume_mode must be 'fixed' or 'density'")
        bad = set(self.formats) - set(FORMATS)
        if bad:
            raise ConfigError(f"unknown output format(s) {sorted(bad)}")
        unknown = set(self.overrides) - set(PRESETS[self.preset])
        if unknown:
            raise ConfigError(f"unknown preset override(s) {sorted(unknown)}")
        if self.photons is None and self.intensity is None:
            raise ConfigError("need photons or intensity")
        if self.third_order not in ("liouville", "closed_form"):
            raise ConfigError("third_order must be 'liouville' or 'closed_form'")
        if self.n_exciton < 0:
            raise ConfigError("n_exciton must be >= 0")

    @property
    def values(self):
        """Preset values with overrides applied."""
        return {**PRESETS[self.preset], **self.overrides}

    def atoms(self):
        v = self.values
        return AtomicParams(
            gamma31=angular(v["gamma31_hz"]),
            gamma32=angular(v["gamma32_hz"]),
            gamma12=angular(v["gamma12_hz"]),
            omega12=angular(v["omega12_hz"]),
            omega_opt=angular(v["omega_opt_hz"]),
            mu32=v["mu32"],
            mu31=v["mu31"],
        )

    @property
    def g1(self):
        return angular(self.values["g1_hz"])

    def resolved_volume(self):
        """Quantization volume for the fixed mode, ``None`` for the density mode."""
        if self.volume_mode == "density":
            return None
        if self.quant_volume is not None:
            return self.quant_volume
        return REFERENCE_ATOMS / self.values["density"]

    def condensate(self, kappa, n_atoms):
        return CondensateParams.build(
            n_atoms,
            kappa=kappa,
            density=self.values["density"],
            eta_zero=self.eta_zero,
            quant_volume=self.resolved_volume(),
        )

    def photon_number(self):
        if self.photons is not None:
            return float(self.photons)
        from .susceptibility import photon_number_from_intensity

        return float(photon_number_from_intensity(self.intensity, self.values["intensity_p"]))

    def snapshot(self):
        d = asdict(self)
        d["kappa"] = list(self.kappa)
        d["n_atoms"] = list(self.n_atoms)
        d["formats"] = list(self.formats)
        return d


_FIELDS = {f.name: f for f in fields(RunConfig)}
_TUPLE_KEYS = ("kappa", "n_atoms", "formats")


def _coerce(key, value):
    if key in _TUPLE_KEYS:
        seq = value if isinstance(value, (list, tuple)) else [value]
        return tuple(str(x) if key == "formats" else float(x) for x in seq)
    if key == "points" or key == "n_exciton":
        if isinstance(value, bool) or not float(value).is_integer():
            raise ConfigError(f"{key} must be an integer")
        return int(value)
    return value


def from_mapping(data, source="<mapping>"):
    """Build a :class:`RunConfig` from a flat key/value mapping.

    Keys are config field names or preset parameter names (the latter become
    overrides).  Unknown keys are rejected.
    """
    data = dict(data)
    preset = data.get("preset", "sodium")
    if preset not in PRESETS:
        raise ConfigError(f"{source}: unknown preset {preset!r}")
    kwargs, overrides = {}, {}
    for key, value in data.items():
        if isinstance(value, dict):
            raise ConfigError(f"{source}: key {key!r}: nested tables are not allowed")
        if key in PRESETS[preset]:
            overrides[key] = float(value)
        elif key in _FIELDS and key != "overrides":
            kwargs[key] = _coerce(key, value)
        else:
            raise ConfigError(f"{source}: unknown key {key!r}")
    for req in ("delta_min_hz", "delta_max_hz"):
        if req not in kwargs:
            raise ConfigError(f"{source}: missing delta range ({req})")
    try:
        return RunConfig(overrides=overrides, **kwargs)
    except ConfigError as exc:
        raise ConfigError(f"{source}: {exc}") from None


def load_config(path):
    """Parse a flat TOML file into a :class:`RunConfig`."""
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    return from_mapping(data, source=str(path))


def with_updates(config, **changes):
    return replace(config, **changes)

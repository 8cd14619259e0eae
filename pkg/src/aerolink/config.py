"""Simulation configuration and the flat key-value config-file format.

The config file is plain text: one ``key = value`` pair per line, ``#``
starts a comment, no nesting.  Unknown keys are rejected with a diagnostic
naming the key.  List-valued keys (``scheme``, ``direction``, ``n_ues``)
take comma-separated values; ``scheme`` also accepts ``all`` and
``direction`` accepts ``both``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace

from .errors import ConfigurationError

DIRECTIONS = ("uplink", "downlink")
_DIRECTION_ALIASES = {"ul": "uplink", "dl": "downlink", "uplink": "uplink", "downlink": "downlink"}


@dataclass(frozen=True)
class SystemConfig:
    """All physical and scheme parameters plus the sweep definition.

    ``cell_radius_m`` is interpreted as the hex circumradius (center to
    vertex); the inter-site distance is sqrt(3) times it.  ``n_ues``
    holds the terrestrial-UE sweep values; ``schemes``/``directions``
    select which pipelines the harness runs.
    """

    fc_ghz: float = 2.0
    rb_bandwidth_hz: float = 180e3
    n_rbs: int = 10
    noise_psd_dbm_hz: float = -164.0
    tx_power_dbm: float = 20.0
    tiers: int = 3
    cell_radius_m: float = 800.0
    bs_height_m: float = 25.0
    uav_altitude_m: float = 200.0
    ue_height_m: float = 1.5
    n_uavs: int = 8
    n_ues: tuple[int, ...] = (20, 40, 80, 120, 160, 200)
    downtilt_deg: float = 10.0
    ant_gain_max_dbi: float = 8.0
    ant_beamwidth_deg: float = 10.0
    ant_sla_db: float = 20.0
    schemes: tuple[int, ...] = (1, 2, 3, 4, 5)
    directions: tuple[str, ...] = DIRECTIONS
    n_drops: int = 1000
    master_seed: int = 1
    honest_helper_accounting: bool = True
    qf_enabled: bool = False
    qf_bits: int = 8
    forward_uav_message: bool = False
    association_includes_antenna: bool = False

    @property
    def tx_power_mw(self) -> float:
        return 10.0 ** (self.tx_power_dbm / 10.0)

    @property
    def noise_rb_mw(self) -> float:
        return 10.0 ** ((self.noise_psd_dbm_hz + 10.0 * math.log10(self.rb_bandwidth_hz)) / 10.0)

    def validate(self) -> None:
        """Raise ConfigurationError on any violated invariant."""
        checks = [
            (self.fc_ghz > 0, "fc_ghz must be positive"),
            (self.rb_bandwidth_hz > 0, "rb_bandwidth_hz must be positive"),
            (self.n_rbs >= 1, "n_rbs must be at least 1"),
            (self.tiers >= 0, "tiers must be non-negative"),
            (self.cell_radius_m > 0, "cell_radius_m must be positive"),
            (self.bs_height_m > 0, "bs_height_m must be positive"),
            (self.uav_altitude_m > 0, "uav_altitude_m must be positive"),
            (self.ue_height_m > 0, "ue_height_m must be positive"),
            (self.n_uavs >= 0, "n_uavs must be non-negative"),
            (
                self.n_uavs <= self.n_rbs,
                f"n_uavs ({self.n_uavs}) must not exceed n_rbs ({self.n_rbs}): "
                "inter-UAV orthogonality requires one distinct RB per UAV",
            ),
            (self.ant_beamwidth_deg > 0, "ant_beamwidth_deg must be positive"),
            (self.ant_sla_db >= 0, "ant_sla_db must be non-negative"),
            (len(self.n_ues) > 0, "n_ues must list at least one UE count"),
            (all(n >= 0 for n in self.n_ues), "n_ues values must be non-negative"),
            (len(self.schemes) > 0, "scheme must select at least one scheme"),
            (
                all(s in (1, 2, 3, 4, 5) for s in self.schemes),
                f"scheme values must lie in 1..5, got {self.schemes}",
            ),
            (len(self.directions) > 0, "direction must select at least one direction"),
            (
                all(d in DIRECTIONS for d in self.directions),
                f"direction values must be uplink/downlink, got {self.directions}",
            ),
            (self.n_drops >= 1, "n_drops must be at least 1"),
            (self.qf_bits >= 1, "qf_bits must be at least 1"),
        ]
        for ok, message in checks:
            if not ok:
                raise ConfigurationError(message)


_FILE_KEYS = {  # file key -> dataclass field
    **{f.name: f.name for f in fields(SystemConfig) if f.name not in ("schemes", "directions")},
    "scheme": "schemes",
    "direction": "directions",
}
_BOOL_WORDS = {"1": True, "true": True, "on": True, "yes": True,
               "0": False, "false": False, "off": False, "no": False}


def _parse_bool(key: str, raw: str) -> bool:
    try:
        return _BOOL_WORDS[raw.strip().lower()]
    except KeyError:
        raise ConfigurationError(f"config key '{key}': expected a boolean, got '{raw}'") from None


def _parse_value(field_name: str, key: str, raw: str):
    raw = raw.strip()
    if field_name == "schemes":
        if raw.lower() == "all":
            return (1, 2, 3, 4, 5)
        return tuple(_parse_int(key, tok) for tok in _split_list(key, raw))
    if field_name == "directions":
        if raw.lower() == "both":
            return DIRECTIONS
        out = []
        for tok in _split_list(key, raw):
            if tok.lower() not in _DIRECTION_ALIASES:
                raise ConfigurationError(f"config key '{key}': unknown direction '{tok}'")
            out.append(_DIRECTION_ALIASES[tok.lower()])
        return tuple(out)
    if field_name == "n_ues":
        return tuple(_parse_int(key, tok) for tok in _split_list(key, raw))
    proto = SystemConfig.__dataclass_fields__[field_name].default
    if isinstance(proto, bool):
        return _parse_bool(key, raw)
    if isinstance(proto, int):
        return _parse_int(key, raw)
    if isinstance(proto, float):
        try:
            return float(raw)
        except ValueError:
            raise ConfigurationError(f"config key '{key}': expected a number, got '{raw}'") from None
    return raw


def _split_list(key: str, raw: str) -> list[str]:
    toks = [tok.strip() for tok in raw.split(",") if tok.strip()]
    if not toks:
        raise ConfigurationError(f"config key '{key}': empty list")
    return toks


def _parse_int(key: str, raw: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise ConfigurationError(f"config key '{key}': expected an integer, got '{raw}'") from None


def parse_config_text(text: str, base: SystemConfig | None = None) -> SystemConfig:
    """Parse config-file text into a SystemConfig (unknown keys rejected)."""
    cfg = base if base is not None else SystemConfig()
    updates = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigurationError(f"config line {lineno}: expected 'key = value', got '{body}'")
        key, raw = (part.strip() for part in body.split("=", 1))
        if key not in _FILE_KEYS:
            raise ConfigurationError(f"config line {lineno}: unknown key '{key}'")
        field_name = _FILE_KEYS[key]
        updates[field_name] = _parse_value(field_name, key, raw)
    return replace(cfg, **updates)


def load_config(path: str, base: SystemConfig | None = None) -> SystemConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigurationError(f"cannot read config file '{path}': {exc}") from exc
    return parse_config_text(text, base)


def config_to_text(cfg: SystemConfig) -> str:
    """Render a config as file text; parses back to an identical config."""

    def fmt(value) -> str:
        if isinstance(value, bool):
            return "true" if value else "false"
        if isinstance(value, tuple):
            return ",".join(str(v) for v in value)
        return repr(value) if isinstance(value, float) else str(value)

    lines = ["# aerolink simulation configuration"]
    for file_key, field_name in _FILE_KEYS.items():
        lines.append(f"{file_key} = {fmt(getattr(cfg, field_name))}")
    return "\n".join(lines) + "\n"

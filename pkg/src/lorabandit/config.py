"""Experiment configuration: JSON ingestion, validation and defaults.

An empty JSON document yields the default experiment: 4 policies x
device counts {10, 15, 20, 25, 30} x 5 runs of 200 attempts each, on the
5-channel / 5-power plan with the stock energy constants.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

from .energy import EnergyModel, RadioConfig
from .netsim import POLICY_NAMES, RunSetup
from .params import (
    DEFAULT_DRAW_MW,
    Channel,
    ConfigError,
    TxPower,
    default_channels,
    default_powers,
)

DEFAULT_DEVICE_COUNTS = (10, 15, 20, 25, 30)


@dataclass
class ExperimentConfig:
    policies: list[str] = field(default_factory=lambda: list(POLICY_NAMES))
    device_counts: list[int] = field(default_factory=lambda: list(DEFAULT_DEVICE_COUNTS))
    runs_per_point: int = 5
    t_attempts: int = 200
    interval_s: float = 10.0
    channels: list[Channel] = field(default_factory=default_channels)
    powers: list[TxPower] = field(default_factory=default_powers)
    energy: EnergyModel = None
    radio: RadioConfig = field(default_factory=RadioConfig)
    epsilon: float = 0.1
    cs_duration_s: float = 0.005
    reward_mode: str = "normalized"
    epsilon_reward: str = "energy"
    payload_base: int = 36
    payload_spread: int = 9
    adr_quality_hz: list[float] | None = None
    base_seed: int = 20240901

    def __post_init__(self):
        if self.energy is None:
            self.energy = EnergyModel(
                p_toa_by_level={p.level_dbm: p.draw_mw for p in self.powers}
            )
        self.validate()

    def validate(self) -> None:
        for p in self.policies:
            if p not in POLICY_NAMES:
                raise ConfigError(f"unknown policy {p!r}; expected one of {POLICY_NAMES}")
        if not self.policies:
            raise ConfigError("at least one policy required")
        if not self.device_counts or any(n < 1 for n in self.device_counts):
            raise ConfigError("device_counts must be positive")
        if self.runs_per_point < 1:
            raise ConfigError("runs_per_point must be >= 1")
        if self.t_attempts < 1:
            raise ConfigError("t_attempts must be >= 1")
        if self.interval_s <= 0:
            raise ConfigError("interval_s must be positive")
        if not 0.0 <= self.epsilon <= 1.0:
            raise ConfigError("epsilon must be in [0, 1]")
        if self.cs_duration_s < 0:
            raise ConfigError("cs_duration_s must be non-negative")
        if self.reward_mode not in ("normalized", "raw"):
            raise ConfigError("reward_mode must be 'normalized' or 'raw'")
        if self.epsilon_reward not in ("energy", "ack"):
            raise ConfigError("epsilon_reward must be 'energy' or 'ack'")
        for p in self.powers:
            if p.level_dbm not in self.energy.p_toa_by_level:
                raise ConfigError(
                    f"power level {p.level_dbm} dBm missing from the energy draw table"
                )
        draws = [p.draw_mw for p in sorted(self.powers, key=lambda p: p.level_dbm)]
        if any(b <= a for a, b in zip(draws, draws[1:])):
            raise ConfigError("draw_mw must be strictly increasing in level_dbm")
        if not any(c.receivable for c in self.channels):
            raise ConfigError("at least one channel must be receivable")

    def run_setup(self, policy: str, n_devices: int) -> RunSetup:
        return RunSetup(
            policy=policy,
            n_devices=n_devices,
            t_attempts=self.t_attempts,
            interval_s=self.interval_s,
            channels=list(self.channels),
            powers=list(self.powers),
            radio=self.radio,
            energy=self.energy,
            epsilon=self.epsilon,
            cs_duration_s=self.cs_duration_s,
            reward_mode=self.reward_mode,
            epsilon_reward=self.epsilon_reward,
            payload_base=self.payload_base,
            payload_spread=self.payload_spread,
            adr_quality_hz=self.adr_quality_hz,
        )

    def to_dict(self) -> dict:
        return {
            "policies": self.policies,
            "device_counts": self.device_counts,
            "runs_per_point": self.runs_per_point,
            "t_attempts": self.t_attempts,
            "interval_s": self.interval_s,
            "channels": [
                {"mhz": c.mhz, "receivable": c.receivable} for c in self.channels
            ],
            "powers": [
                {"level_dbm": p.level_dbm, "draw_mw": p.draw_mw} for p in self.powers
            ],
            "energy": {
                "e_wu_mj": self.energy.e_wu_mj,
                "e_proc_mj": self.energy.e_proc_mj,
                "e_r_mj": self.energy.e_r_mj,
                "p_mcu_mw": self.energy.p_mcu_mw,
                "p_toa_mw": {str(k): v for k, v in self.energy.p_toa_by_level.items()},
            },
            "radio": {
                "sf": self.radio.sf,
                "bw_hz": self.radio.bw_hz,
                "n_preamble": self.radio.n_preamble,
            },
            "epsilon": self.epsilon,
            "cs_duration_s": self.cs_duration_s,
            "reward_mode": self.reward_mode,
            "epsilon_reward": self.epsilon_reward,
            "payload_base": self.payload_base,
            "payload_spread": self.payload_spread,
            "adr_quality_mhz": (
                None
                if self.adr_quality_hz is None
                else [hz / 1e6 for hz in self.adr_quality_hz]
            ),
            "base_seed": self.base_seed,
        }

    def config_hash(self) -> str:
        canonical = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode()).hexdigest()


def _parse_channels(raw: list) -> list[Channel]:
    channels = []
    for entry in raw:
        try:
            channels.append(Channel(float(entry["mhz"]) * 1e6, bool(entry["receivable"])))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"bad channel entry {entry!r}: {exc}") from exc
    return channels


def _parse_powers(raw: list, draw_table: dict[int, float]) -> list[TxPower]:
    powers = []
    for entry in raw:
        try:
            level = int(entry["level_dbm"])
            draw = float(entry.get("draw_mw", draw_table.get(level, 0.0)))
            powers.append(TxPower(level, draw))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"bad power entry {entry!r}: {exc}") from exc
    return powers


def config_from_dict(doc: dict) -> ExperimentConfig:
    """Build and validate a config, filling every omitted field with defaults."""
    if not isinstance(doc, dict):
        raise ConfigError("config document must be a JSON object")
    known = {
        "policies", "device_counts", "runs_per_point", "t_attempts", "interval_s",
        "channels", "powers", "energy", "radio", "epsilon", "cs_duration_s",
        "reward_mode", "epsilon_reward", "payload_base", "payload_spread",
        "adr_quality_mhz", "base_seed",
    }
    unknown = set(doc) - known
    if unknown:
        raise ConfigError(f"unknown config fields: {sorted(unknown)}")

    kwargs: dict = {}
    for key in (
        "policies", "device_counts", "runs_per_point", "t_attempts", "interval_s",
        "epsilon", "cs_duration_s", "reward_mode", "epsilon_reward",
        "payload_base", "payload_spread", "base_seed",
    ):
        if key in doc:
            kwargs[key] = doc[key]

    if "channels" in doc:
        kwargs["channels"] = _parse_channels(doc["channels"])

    energy_doc = doc.get("energy", {})
    draw_table = dict(DEFAULT_DRAW_MW)
    if "p_toa_mw" in energy_doc:
        draw_table = {int(k): float(v) for k, v in energy_doc["p_toa_mw"].items()}

    if "powers" in doc:
        kwargs["powers"] = _parse_powers(doc["powers"], draw_table)
    elif "p_toa_mw" in energy_doc:
        kwargs["powers"] = default_powers(draw_table)

    if energy_doc:
        base = EnergyModel(p_toa_by_level=draw_table)
        kwargs["energy"] = EnergyModel(
            e_wu_mj=float(energy_doc.get("e_wu_mj", base.e_wu_mj)),
            e_proc_mj=float(energy_doc.get("e_proc_mj", base.e_proc_mj)),
            e_r_mj=float(energy_doc.get("e_r_mj", base.e_r_mj)),
            p_mcu_mw=float(energy_doc.get("p_mcu_mw", base.p_mcu_mw)),
            p_toa_by_level=draw_table,
        )

    if "radio" in doc:
        radio_doc = doc["radio"]
        kwargs["radio"] = RadioConfig(
            sf=int(radio_doc.get("sf", 7)),
            bw_hz=float(radio_doc.get("bw_hz", 125_000.0)),
            n_preamble=int(radio_doc.get("n_preamble", 8)),
        )

    if "adr_quality_mhz" in doc and doc["adr_quality_mhz"] is not None:
        kwargs["adr_quality_hz"] = [float(mhz) * 1e6 for mhz in doc["adr_quality_mhz"]]

    return ExperimentConfig(**kwargs)


def load_config(path) -> ExperimentConfig:
    """Parse and validate a JSON config file."""
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: parse error at line {exc.lineno}: {exc.msg}") from exc
    except OSError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    return config_from_dict(doc)

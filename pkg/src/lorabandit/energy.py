"""Airtime and active-mode energy model, plus the ACK reward basis.

All times are in seconds, energies in millijoules and powers in milliwatts,
so power * time lands directly in mJ.
"""

from __future__ import annotations

from dataclasses import dataclass

from .params import ConfigError, TxPower


@dataclass(frozen=True)
class RadioConfig:
    """PHY parameters fixed per attempt: SF, bandwidth and symbol counts."""

    sf: int = 7
    bw_hz: float = 125_000.0
    n_preamble: int = 8
    n_payload: int = 36

    def __post_init__(self):
        if self.bw_hz <= 0:
            raise ConfigError("bandwidth must be positive")
        if self.n_preamble < 0 or self.n_payload < 0:
            raise ConfigError("symbol counts must be non-negative")


@dataclass(frozen=True)
class EnergyModel:
    """Fixed per-attempt energy overheads and the TX draw table.

    e_wu / e_proc / e_r are treated as fixed per-attempt contributions in mJ
    (wake-up, parameter-selection processing, receive window).
    """

    e_wu_mj: float = 56.1
    e_proc_mj: float = 85.8
    e_r_mj: float = 66.0
    p_mcu_mw: float = 29.7
    p_toa_by_level: dict[int, float] = None  # dBm -> mW

    def __post_init__(self):
        for name in ("e_wu_mj", "e_proc_mj", "e_r_mj", "p_mcu_mw"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive")
        if not self.p_toa_by_level:
            raise ConfigError("p_toa_by_level table required")
        for level, mw in self.p_toa_by_level.items():
            if mw <= 0:
                raise ConfigError(f"draw for {level} dBm must be positive")

    @property
    def overhead_mj(self) -> float:
        """Energy charged even when no transmission happens."""
        return self.e_wu_mj + self.e_proc_mj + self.e_r_mj


@dataclass(frozen=True)
class AttemptEnergy:
    """Timing and energy breakdown of one transmission attempt."""

    t_symbol: float
    t_preamble: float
    t_payload: float
    t_toa: float
    e_toa_mj: float
    e_active_mj: float


def symbol_time(cfg: RadioConfig) -> float:
    """Duration of one chirp symbol: 2^SF / BW."""
    return (2 ** cfg.sf) / cfg.bw_hz


def time_on_air(cfg: RadioConfig) -> tuple[float, float, float]:
    """Preamble, payload and total on-air time for one packet.

    Preamble lasts (4.25 + n_preamble) symbols; payload lasts n_payload
    symbols; the total is their sum.
    """
    t_sym = symbol_time(cfg)
    t_preamble = (4.25 + cfg.n_preamble) * t_sym
    t_payload = cfg.n_payload * t_sym
    return t_preamble, t_payload, t_preamble + t_payload


def attempt_energy(cfg: RadioConfig, model: EnergyModel, power: TxPower) -> AttemptEnergy:
    """Full energy accounting of one transmitted attempt.

    e_toa = (p_mcu + draw(level)) * t_toa;
    e_active = e_wu + e_proc + e_toa + e_r.
    """
    if power.level_dbm not in model.p_toa_by_level:
        raise ConfigError(
            f"power level {power.level_dbm} dBm missing from p_toa_by_level"
        )
    t_preamble, t_payload, t_toa = time_on_air(cfg)
    e_toa = (model.p_mcu_mw + model.p_toa_by_level[power.level_dbm]) * t_toa
    e_active = model.e_wu_mj + model.e_proc_mj + e_toa + model.e_r_mj
    return AttemptEnergy(
        t_symbol=symbol_time(cfg),
        t_preamble=t_preamble,
        t_payload=t_payload,
        t_toa=t_toa,
        e_toa_mj=e_toa,
        e_active_mj=e_active,
    )


def reward_basis(
    e: AttemptEnergy, mode: str = "normalized", e_toa_min_mj: float | None = None
) -> float:
    """Reward granted for an ACKed attempt.

    normalized (default): e_toa_min / e_toa, in (0, 1], where e_toa_min is
    the transmission energy at the cheapest configured power for the same
    payload.  raw: 1 / e_toa in 1/mJ.  Both decrease with TX power, so the
    learner is pushed toward the cheapest power that still gets ACKed.
    """
    if e.e_toa_mj <= 0:
        raise ValueError("e_toa must be positive")
    if mode == "raw":
        return 1.0 / e.e_toa_mj
    if mode == "normalized":
        if e_toa_min_mj is None:
            raise ValueError("normalized mode requires e_toa_min_mj")
        return e_toa_min_mj / e.e_toa_mj
    raise ConfigError(f"unknown reward mode {mode!r}")


def min_toa_energy(cfg: RadioConfig, model: EnergyModel, powers: list[TxPower]) -> float:
    """e_toa at the cheapest configured draw, used to normalize rewards."""
    if not powers:
        raise ConfigError("empty power list")
    cheapest = min(powers, key=lambda p: model.p_toa_by_level.get(p.level_dbm, float("inf")))
    return attempt_energy(cfg, model, cheapest).e_toa_mj

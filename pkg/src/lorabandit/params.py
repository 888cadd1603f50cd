"""Channel / transmission-power domain types and the bandit arm space."""

from __future__ import annotations

from dataclasses import dataclass


class ConfigError(ValueError):
    """Raised for invalid or inconsistent configuration."""


@dataclass(frozen=True)
class Channel:
    """One selectable uplink frequency.

    ``receivable`` is True only for the frequencies the gateway actually
    listens on; transmitting on any other channel can never be ACKed.
    """

    center_frequency_hz: float
    receivable: bool

    @property
    def mhz(self) -> float:
        return self.center_frequency_hz / 1e6


@dataclass(frozen=True)
class TxPower:
    """One transmission power level and the radio draw it induces."""

    level_dbm: int
    draw_mw: float

    def __post_init__(self):
        if self.draw_mw <= 0:
            raise ConfigError(f"draw_mw must be positive, got {self.draw_mw}")


@dataclass(frozen=True)
class ParamCombo:
    """A single bandit arm: a (channel, power) pair with its ordinal index."""

    channel: Channel
    power: TxPower
    arm_index: int


# Default experiment setup: five selectable channels, the gateway listening
# on the middle three, and five power levels.
DEFAULT_CHANNEL_MHZ = (920.6, 921.0, 921.4, 921.8, 922.2)
DEFAULT_RECEIVABLE_MHZ = (921.0, 921.4, 921.8)
DEFAULT_POWER_DBM = (-3, 1, 5, 9, 13)

# dBm -> transmit-draw mW used by the energy model.  A placeholder table
# shaped like a low-efficiency PA (draw tracking radiated power, which grows
# ~2.5x per 4 dBm); it is configuration, not measurement, and can be
# overridden per run.  The steep spread lets a learner separate power levels
# within a couple hundred attempts.
DEFAULT_DRAW_MW = {-3: 15.0, 1: 30.0, 5: 70.0, 9: 165.0, 13: 400.0}


def default_channels() -> list[Channel]:
    return [
        Channel(mhz * 1e6, receivable=mhz in DEFAULT_RECEIVABLE_MHZ)
        for mhz in DEFAULT_CHANNEL_MHZ
    ]


def default_powers(draw_mw: dict[int, float] | None = None) -> list[TxPower]:
    table = DEFAULT_DRAW_MW if draw_mw is None else draw_mw
    return [TxPower(dbm, table[dbm]) for dbm in DEFAULT_POWER_DBM]


def build_arm_space(channels: list[Channel], powers: list[TxPower]) -> list[ParamCombo]:
    """Enumerate the full Cartesian product of channels and powers.

    Order is channel-major (channels in the given order) with powers
    ascending by dBm inside each channel; ``arm_index`` follows that order.
    """
    if not channels:
        raise ConfigError("at least one channel required")
    if not powers:
        raise ConfigError("at least one power level required")

    freqs = [c.center_frequency_hz for c in channels]
    if len(set(freqs)) != len(freqs):
        raise ConfigError(f"duplicate channel frequency in {sorted(freqs)}")
    levels = [p.level_dbm for p in powers]
    if len(set(levels)) != len(levels):
        raise ConfigError(f"duplicate power level in {sorted(levels)}")

    ordered_powers = sorted(powers, key=lambda p: p.level_dbm)
    combos = []
    for ch in channels:
        for pw in ordered_powers:
            combos.append(ParamCombo(ch, pw, len(combos)))
    return combos


def receivable_channels(channels: list[Channel]) -> list[Channel]:
    """The gateway-visible channels, sorted by frequency."""
    return sorted(
        (c for c in channels if c.receivable), key=lambda c: c.center_frequency_hz
    )


def arm_lookup(arms: list[ParamCombo]) -> dict[tuple[float, int], int]:
    """Map (frequency_hz, level_dbm) back to arm_index."""
    return {
        (a.channel.center_frequency_hz, a.power.level_dbm): a.arm_index for a in arms
    }

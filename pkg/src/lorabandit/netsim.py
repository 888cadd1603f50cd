"""Event-driven simulation of N devices contending for the gateway.

Each device wakes on its own fixed cadence, asks its policy for a
(channel, power) arm, carrier-senses, transmits, and learns from the
ACK/no-ACK outcome.  Any temporal overlap of two transmissions on the same
frequency destroys both (no capture effect); the gateway's receivers handle
their channels independently.  Time is integer microseconds internally so
event ordering is exact and runs are bit-reproducible.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from enum import IntEnum

import numpy as np

from .energy import (
    AttemptEnergy,
    EnergyModel,
    RadioConfig,
    attempt_energy,
    min_toa_energy,
    reward_basis,
)
from .metrics import Cause, RunRecord
from .params import Channel, ConfigError, ParamCombo, TxPower, build_arm_space
from .policies import (
    AdrLitePolicy,
    EpsilonGreedyPolicy,
    Feedback,
    FixedPolicy,
    Policy,
    UcbTunedPolicy,
)

POLICY_NAMES = ("proposed_ucb_tuned", "epsilon_greedy", "adr_lite", "fixed")


class EventKind(IntEnum):
    WAKE = 0
    TX_END = 1


@dataclass(frozen=True)
class SimEvent:
    time_us: int
    kind: EventKind
    device: int
    seq: int


@dataclass
class RunSetup:
    """Everything one simulation run needs, already validated."""

    policy: str
    n_devices: int
    t_attempts: int = 200
    interval_s: float = 10.0
    channels: list[Channel] = None
    powers: list[TxPower] = None
    radio: RadioConfig = None  # n_payload field is a base; per-device override applies
    energy: EnergyModel = None
    epsilon: float = 0.1
    cs_duration_s: float = 0.005
    reward_mode: str = "normalized"
    epsilon_reward: str = "energy"  # "energy" (shared shaping) or "ack" (0/1)
    payload_base: int = 36
    payload_spread: int = 9
    adr_quality_hz: list[float] | None = None


@dataclass
class DeviceState:
    device_index: int
    policy: Policy
    start_offset_s: float
    n_payload: int
    attempts_done: int = 0


@dataclass
class _Transmission:
    device: int
    start_us: int
    end_us: int
    arm_index: int
    attempt: int
    wake_us: int
    energy: AttemptEnergy
    collided: bool = False


@dataclass
class ChannelOccupancy:
    """In-flight transmissions per channel index."""

    in_flight: dict[int, list[_Transmission]] = field(default_factory=dict)

    def on_channel(self, ch: int) -> list[_Transmission]:
        return self.in_flight.setdefault(ch, [])

    def add(self, ch: int, tx: _Transmission) -> None:
        self.on_channel(ch).append(tx)

    def remove(self, ch: int, tx: _Transmission) -> None:
        self.on_channel(ch).remove(tx)

    def total_in_flight(self) -> int:
        return sum(len(v) for v in self.in_flight.values())


def payload_symbols(device_index: int, base: int = 36, spread: int = 9) -> int:
    """Deterministic per-device payload size: base + (index mod spread)."""
    return base + device_index % spread


def device_rng(seed: int, device_index: int, stream: int) -> np.random.Generator:
    """Independent per-device RNG stream; adding devices never reshuffles others."""
    ss = np.random.SeedSequence([seed & 0xFFFFFFFFFFFFFFFF, device_index, stream])
    return np.random.default_rng(ss)


def schedule_attempts(device: DeviceState, interval_s: float, t_attempts: int) -> list[float]:
    """Wake times in seconds: start_offset + i * interval."""
    if interval_s <= 0:
        raise ConfigError("transmission interval must be positive")
    return [device.start_offset_s + i * interval_s for i in range(t_attempts)]


def carrier_sense(
    occupancy: ChannelOccupancy, ch: int, t_us: int, cs_duration_us: int
) -> bool:
    """True iff any in-flight transmission overlaps the sense window.

    Intervals are half-open: a transmission ending exactly at t is not heard,
    and one starting exactly at the end of the window is not heard either.
    """
    if cs_duration_us < 0:
        raise ConfigError("carrier-sense duration must be non-negative")
    window_end = t_us + cs_duration_us
    return any(
        tx.start_us < window_end and tx.end_us > t_us
        for tx in occupancy.on_channel(ch)
    )


def resolve_reception(channel: Channel, tx: _Transmission) -> Cause:
    """Outcome of a completed transmission as seen by the gateway."""
    if not channel.receivable:
        return Cause.CHANNEL_NOT_RECEIVABLE
    if tx.collided:
        return Cause.COLLISION
    return Cause.SUCCESS


def _make_policy(setup: RunSetup, device_index: int, arms: list[ParamCombo], seed: int) -> Policy:
    rng = device_rng(seed, device_index, stream=0)
    if setup.policy == "proposed_ucb_tuned":
        return UcbTunedPolicy(len(arms), rng)
    if setup.policy == "epsilon_greedy":
        return EpsilonGreedyPolicy(len(arms), setup.epsilon, rng)
    if setup.policy == "fixed":
        return FixedPolicy(device_index, arms)
    if setup.policy == "adr_lite":
        return AdrLitePolicy(arms, setup.adr_quality_hz)
    raise ConfigError(f"unknown policy {setup.policy!r}; expected one of {POLICY_NAMES}")


def run_simulation(setup: RunSetup, seed: int) -> list[RunRecord]:
    """Execute one run and return every attempt record in event order."""
    if setup.n_devices < 1:
        raise ConfigError("need at least one device")
    if setup.t_attempts < 0:
        raise ConfigError("attempt count must be non-negative")

    arms = build_arm_space(setup.channels, setup.powers)
    interval_us = round(setup.interval_s * 1e6)
    cs_us = round(setup.cs_duration_s * 1e6)

    # Validate energies for every (device payload, power) pair up front.
    payloads = sorted(
        {
            payload_symbols(i, setup.payload_base, setup.payload_spread)
            for i in range(setup.n_devices)
        }
    )
    energy_cache: dict[tuple[int, int], AttemptEnergy] = {}
    e_toa_min: dict[int, float] = {}
    for n_payload in payloads:
        radio = RadioConfig(
            sf=setup.radio.sf,
            bw_hz=setup.radio.bw_hz,
            n_preamble=setup.radio.n_preamble,
            n_payload=n_payload,
        )
        for pw in setup.powers:
            energy_cache[(n_payload, pw.level_dbm)] = attempt_energy(
                radio, setup.energy, pw
            )
        e_toa_min[n_payload] = min_toa_energy(radio, setup.energy, setup.powers)

    devices = []
    for i in range(setup.n_devices):
        sim_rng = device_rng(seed, i, stream=1)
        offset_us = int(sim_rng.integers(0, interval_us))
        devices.append(
            DeviceState(
                device_index=i,
                policy=_make_policy(setup, i, arms, seed),
                start_offset_s=offset_us / 1e6,
                n_payload=payload_symbols(i, setup.payload_base, setup.payload_spread),
            )
        )

    # (time_us, seq, kind, payload); seq makes the order total and deterministic.
    queue: list = []
    seq = 0
    for dev in devices:
        offset_us = round(dev.start_offset_s * 1e6)
        for i in range(setup.t_attempts):
            heapq.heappush(queue, (offset_us + i * interval_us, seq, EventKind.WAKE, dev.device_index, None))
            seq += 1

    occupancy = ChannelOccupancy()
    channel_index = {a.channel.center_frequency_hz: setup.channels.index(a.channel) for a in arms}
    records: list[RunRecord] = []

    def finish(dev: DeviceState, tx: _Transmission, cause: Cause) -> None:
        acked = cause is Cause.SUCCESS
        reward = 0.0
        if acked:
            if setup.policy == "epsilon_greedy" and setup.epsilon_reward == "ack":
                reward = 1.0
            else:
                reward = reward_basis(
                    tx.energy, setup.reward_mode, e_toa_min[dev.n_payload]
                )
        arm = arms[tx.arm_index]
        dev.policy.observe(
            Feedback(tx.arm_index, acked, reward, tx.energy.e_toa_mj)
        )
        records.append(
            RunRecord(
                run_seed=seed,
                device=dev.device_index,
                attempt=tx.attempt,
                arm_index=tx.arm_index,
                channel_hz=arm.channel.center_frequency_hz,
                power_dbm=arm.power.level_dbm,
                cause=cause.value,
                acked=acked,
                reward=reward,
                e_toa=tx.energy.e_toa_mj,
                e_active=tx.energy.e_active_mj,
                wake_time=tx.wake_us / 1e6,
            )
        )

    while queue:
        t_us, _, kind, device_index, payload = heapq.heappop(queue)
        dev = devices[device_index]

        if kind is EventKind.TX_END:
            tx: _Transmission = payload
            arm = arms[tx.arm_index]
            ch = channel_index[arm.channel.center_frequency_hz]
            occupancy.remove(ch, tx)
            finish(dev, tx, resolve_reception(arm.channel, tx))
            continue

        decision = dev.policy.select()
        arm = arms[decision.arm_index]
        ch = channel_index[arm.channel.center_frequency_hz]
        attempt = dev.attempts_done
        dev.attempts_done += 1

        if carrier_sense(occupancy, ch, t_us, cs_us):
            # Abandon this interval: overheads are paid, the radio never fires.
            dev.policy.observe(Feedback(decision.arm_index, False, 0.0, 0.0))
            records.append(
                RunRecord(
                    run_seed=seed,
                    device=dev.device_index,
                    attempt=attempt,
                    arm_index=decision.arm_index,
                    channel_hz=arm.channel.center_frequency_hz,
                    power_dbm=arm.power.level_dbm,
                    cause=Cause.CARRIER_BUSY.value,
                    acked=False,
                    reward=0.0,
                    e_toa=0.0,
                    e_active=setup.energy.overhead_mj,
                    wake_time=t_us / 1e6,
                )
            )
            continue

        e = energy_cache[(dev.n_payload, arm.power.level_dbm)]
        start_us = t_us + cs_us
        end_us = start_us + round(e.t_toa * 1e6)
        tx = _Transmission(
            device=dev.device_index,
            start_us=start_us,
            end_us=end_us,
            arm_index=decision.arm_index,
            attempt=attempt,
            wake_us=t_us,
            energy=e,
        )
        for other in occupancy.on_channel(ch):
            if other.start_us < end_us and other.end_us > start_us:
                other.collided = True
                tx.collided = True
        occupancy.add(ch, tx)
        heapq.heappush(queue, (end_us, seq, EventKind.TX_END, dev.device_index, tx))
        seq += 1

    if occupancy.total_in_flight() != 0:
        raise RuntimeError("transmissions left in flight after the event queue drained")
    return records

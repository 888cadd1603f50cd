"""Per-device transmission parameter selection policies.

Four policies share one interface: the variance-aware upper-confidence-bound
learner (the proposed method), epsilon-greedy, a static even channel
assignment, and ADR-Lite's outcome-driven binary search over a quality-sorted
parameter list.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .params import (
    DEFAULT_CHANNEL_MHZ,
    DEFAULT_RECEIVABLE_MHZ,
    Channel,
    ConfigError,
    ParamCombo,
    TxPower,
    receivable_channels,
)

MAX_BERNOULLI_VARIANCE = 0.25


class Phase(Enum):
    INITIALIZATION = "initialization"
    LEARNED = "learned"


@dataclass
class ArmState:
    """Running statistics for one arm."""

    pulls: int = 0
    reward_sum: float = 0.0
    reward_sq_sum: float = 0.0
    successes: int = 0

    @property
    def mean(self) -> float:
        return self.reward_sum / self.pulls if self.pulls else 0.0

    @property
    def variance(self) -> float:
        """Empirical variance of observed rewards, clamped at 0."""
        if self.pulls == 0:
            return 0.0
        var = self.reward_sq_sum / self.pulls - self.mean ** 2
        return max(var, 0.0)


@dataclass(frozen=True)
class PolicyDecision:
    arm_index: int
    phase: Phase = Phase.LEARNED


@dataclass(frozen=True)
class Feedback:
    """Outcome of one attempt, as seen by the policy."""

    arm_index: int
    acked: bool
    reward: float
    e_toa_mj: float = 0.0


def ucb_variance(arm: ArmState, m: int) -> float:
    """Variance estimator: sigma^2 + sqrt(2 ln m / pulls)."""
    if arm.pulls < 1:
        raise ValueError("arm has never been pulled; run initialization first")
    if m < arm.pulls:
        raise ValueError(f"total plays {m} < arm pulls {arm.pulls}")
    return arm.variance + math.sqrt(2.0 * math.log(m) / arm.pulls)


def ucb_score(arm: ArmState, m: int) -> float:
    """Mean reward plus the variance-capped exploration bonus.

    score = C/S + sqrt((ln m / S) * min(1/4, V)) with V from ucb_variance.
    """
    if arm.pulls < 1:
        raise ValueError("arm has never been pulled; run initialization first")
    v = ucb_variance(arm, m)
    bonus = math.sqrt(
        (math.log(m) / arm.pulls) * min(MAX_BERNOULLI_VARIANCE, v)
    )
    return arm.mean + bonus


def _uniform_argmax(values: list[float], rng: np.random.Generator) -> int:
    best = max(values)
    tied = [i for i, v in enumerate(values) if v == best]
    if len(tied) == 1:
        return tied[0]
    return tied[int(rng.integers(len(tied)))]


def select_ucb(arms: list[ArmState], m: int, tie_rng: np.random.Generator) -> PolicyDecision:
    """Pick the next arm: uncovered arms first, then max score.

    While any arm is unpulled the lowest-indexed such arm is forced
    (initialization pass); afterwards the max-score arm wins, with exact
    ties broken uniformly at random.
    """
    if not arms:
        raise ValueError("empty arm list")
    for i, arm in enumerate(arms):
        if arm.pulls == 0:
            return PolicyDecision(i, Phase.INITIALIZATION)
    scores = [ucb_score(arm, m) for arm in arms]
    return PolicyDecision(_uniform_argmax(scores, tie_rng), Phase.LEARNED)


def select_epsilon_greedy(
    arms: list[ArmState], epsilon: float, rng: np.random.Generator
) -> PolicyDecision:
    """Uniform random arm with probability epsilon, else best mean reward.

    Unpulled arms count as mean 0; greedy ties break uniformly at random.
    """
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError(f"epsilon must be in [0, 1], got {epsilon}")
    if not arms:
        raise ValueError("empty arm list")
    if rng.random() < epsilon:
        return PolicyDecision(int(rng.integers(len(arms))))
    means = [arm.mean for arm in arms]
    return PolicyDecision(_uniform_argmax(means, rng))


def update(arm: ArmState, fb: Feedback) -> None:
    """Fold one attempt's feedback into the arm statistics."""
    if fb.reward < 0:
        raise ValueError(f"negative reward {fb.reward}")
    arm.pulls += 1
    arm.reward_sum += fb.reward
    arm.reward_sq_sum += fb.reward ** 2
    if fb.acked:
        arm.successes += 1


def select_fixed(device_index: int, arms: list[ParamCombo]) -> PolicyDecision:
    """Static assignment: receivable channels round-robin, minimum power."""
    channels = receivable_channels(sorted(
        {a.channel for a in arms}, key=lambda c: c.center_frequency_hz
    ))
    if not channels:
        raise ConfigError("no receivable channel to pin the fixed policy on")
    target = channels[device_index % len(channels)]
    min_level = min(a.power.level_dbm for a in arms)
    for a in arms:
        if a.channel == target and a.power.level_dbm == min_level:
            return PolicyDecision(a.arm_index)
    raise ConfigError("arm space does not contain the fixed assignment")


def adr_lite_next(prev_index: int, acked: bool, list_len: int) -> int:
    """Binary-search step through the quality-sorted parameter list.

    Success halves toward the head (cheaper parameters, floor); failure
    moves to the midpoint of the previous pick and the tail (ceil).
    """
    if not 0 <= prev_index < list_len:
        raise ValueError(f"prev_index {prev_index} out of [0, {list_len})")
    if acked:
        return prev_index // 2
    return math.ceil((list_len - 1 + prev_index) / 2)


def adr_lite_list(
    channels: list[Channel],
    powers: list[TxPower],
    quality_order_hz: list[float] | None = None,
) -> list[ParamCombo]:
    """ADR-Lite's own ordering of the parameter pairs.

    Power-major ascending; within one power the channels run worst-first.
    For the default channel plan the non-receivable channels (guaranteed
    losers) come first, then the receivable ones, each group by ascending
    frequency.  Any other channel plan must supply an explicit quality order.
    """
    if quality_order_hz is None:
        plan = sorted((c.mhz, c.receivable) for c in channels)
        default_plan = sorted(
            (mhz, mhz in DEFAULT_RECEIVABLE_MHZ) for mhz in DEFAULT_CHANNEL_MHZ
        )
        if plan != default_plan:
            raise ConfigError(
                "non-default channel plan requires an explicit channel quality order"
            )
        ordered = sorted(
            channels,
            key=lambda c: (c.receivable, c.center_frequency_hz),
        )
    else:
        by_freq = {c.center_frequency_hz: c for c in channels}
        if sorted(by_freq) != sorted(quality_order_hz):
            raise ConfigError(
                "channel quality order must list every configured frequency exactly once"
            )
        ordered = [by_freq[hz] for hz in quality_order_hz]

    combos = []
    for pw in sorted(powers, key=lambda p: p.level_dbm):
        for ch in ordered:
            combos.append(ParamCombo(ch, pw, len(combos)))
    return combos


class Policy:
    """Interface shared by all selection policies."""

    def select(self) -> PolicyDecision:
        raise NotImplementedError

    def observe(self, fb: Feedback) -> None:
        raise NotImplementedError


@dataclass
class UcbTunedPolicy(Policy):
    n_arms: int
    rng: np.random.Generator
    arms: list[ArmState] = field(init=False)
    total_plays: int = field(default=0, init=False)

    def __post_init__(self):
        self.arms = [ArmState() for _ in range(self.n_arms)]

    def select(self) -> PolicyDecision:
        return select_ucb(self.arms, self.total_plays, self.rng)

    def observe(self, fb: Feedback) -> None:
        update(self.arms[fb.arm_index], fb)
        self.total_plays += 1


@dataclass
class EpsilonGreedyPolicy(Policy):
    n_arms: int
    epsilon: float
    rng: np.random.Generator
    arms: list[ArmState] = field(init=False)

    def __post_init__(self):
        self.arms = [ArmState() for _ in range(self.n_arms)]

    def select(self) -> PolicyDecision:
        return select_epsilon_greedy(self.arms, self.epsilon, self.rng)

    def observe(self, fb: Feedback) -> None:
        update(self.arms[fb.arm_index], fb)


class FixedPolicy(Policy):
    """Constant arm chosen once from the device index."""

    def __init__(self, device_index: int, arms: list[ParamCombo]):
        self.decision = select_fixed(device_index, arms)

    def select(self) -> PolicyDecision:
        return self.decision

    def observe(self, fb: Feedback) -> None:
        pass


class AdrLitePolicy(Policy):
    """Stateless-history search: only the previous outcome steers the walk."""

    def __init__(
        self,
        arms: list[ParamCombo],
        quality_order_hz: list[float] | None = None,
    ):
        channels = sorted(
            {a.channel for a in arms}, key=lambda c: c.center_frequency_hz
        )
        powers = sorted({a.power for a in arms}, key=lambda p: p.level_dbm)
        self.search_list = adr_lite_list(channels, powers, quality_order_hz)
        self.to_arm_index = {
            (c.channel.center_frequency_hz, c.power.level_dbm): None
            for c in self.search_list
        }
        for a in arms:
            self.to_arm_index[(a.channel.center_frequency_hz, a.power.level_dbm)] = a.arm_index
        self.next_list_index = len(self.search_list) - 1
        self._pending_list_index: int | None = None

    def select(self) -> PolicyDecision:
        self._pending_list_index = self.next_list_index
        combo = self.search_list[self.next_list_index]
        arm = self.to_arm_index[(combo.channel.center_frequency_hz, combo.power.level_dbm)]
        return PolicyDecision(arm)

    def observe(self, fb: Feedback) -> None:
        if self._pending_list_index is None:
            raise RuntimeError("observe() without a preceding select()")
        self.next_list_index = adr_lite_next(
            self._pending_list_index, fb.acked, len(self.search_list)
        )
        self._pending_list_index = None

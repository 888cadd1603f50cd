"""Run one 30-device simulation per policy and compare the outcomes.

Each device independently picks a (channel, power) arm every 10 simulated
seconds for 200 attempts; the gateway ACKs collision-free packets on its
three receivable channels.  The summary shows how the learners trade success
rate against transmit energy.
"""

from collections import Counter

from lorabandit import ExperimentConfig, run_simulation, summarize_run
from lorabandit.netsim import POLICY_NAMES

cfg = ExperimentConfig()
N = 30
SEED = 42

print(f"{N} devices, {cfg.t_attempts} attempts each, seed {SEED}")
print(f"{'policy':<20} {'success':>8} {'EE (1/mJ)':>10} {'-3 dBm share':>13} "
      f"{'outcome mix'}")
for policy in POLICY_NAMES:
    records = run_simulation(cfg.run_setup(policy, N), SEED)
    s = summarize_run(records, config_key=policy)
    causes = Counter(r.cause for r in records)
    mix = ", ".join(f"{k}={v}" for k, v in causes.most_common())
    print(f"{policy:<20} {s.success_rate:>8.3f} {s.energy_efficiency:>10.5f} "
          f"{s.tp_ratio.get(-3, 0.0):>13.3f} {mix}")

print()
print("The UCB learner concentrates its successes on the minimum power")
print("(high -3 dBm share) at the cost of a forced pass over all 25 arms;")
print("the static assignment never explores and never pays that tax.")

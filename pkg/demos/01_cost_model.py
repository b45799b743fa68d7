"""Where the cost of one task goes: local CPU versus an LTE upload to the cloud."""

from fogoffload import CLOUD_ID, LOCAL, Device, Link, Scenario, Server, ServerKind, Task, User
from fogoffload import cost

# an 800 kbit task at 300 cycles/bit on a 1 GHz phone
task = Task(size_bits=8e5, density_cycles_per_bit=300)
phone = Device(cpu_hz=1e9)
lte = Link(rate_bps=5.85e6, energy_j_per_s=2.605, rtt_s=0.2)
user = User(0, task, phone, weight_energy=1.0, weight_time=1.0, links={CLOUD_ID: lte})
s = Scenario([user], [Server(CLOUD_ID, ServerKind.CLOUD, 4e9)])

local = cost.local_cost(user)
print(f"alpha        {cost.alpha(phone):.4f} J/s")
print(f"local        {local.time_s:.4f} s, {local.energy_j:.4f} J -> cost {local.weighted_cost:.4f}")

cloud = cost.offload_cost(s, 0, CLOUD_ID, (CLOUD_ID,))
print(f"cloud        transmit {cloud.transmit_s:.4f} s + rtt {cloud.rtt_s} s + compute {cloud.compute_s:.4f} s")
print(f"             {cloud.energy_j:.4f} J -> cost {cloud.weighted_cost:.4f}")

# negative QoE: the radio burns more than the CPU would
print(f"qoe(cloud)   {cost.qoe(s, 0, CLOUD_ID, (CLOUD_ID,)):+.4f}")
print(f"qoe(local)   {cost.qoe(s, 0, LOCAL, (LOCAL,)):+.4f}")

# a slow microcontroller with a big job flips the sign
mcu = User(0, Task(4e6, 600), Device(1e8), 1.0, 1.0, {CLOUD_ID: lte})
s2 = Scenario([mcu], s.servers)
print(f"qoe(mcu)     {cost.qoe(s2, 0, CLOUD_ID, (CLOUD_ID,)):+.4f}")

# processor sharing on a fog node: each co-resident adds min(w, w') / f
for w_other in (1e8, 2e8, 4e8):
    print(f"fog delay of a 2e8-cycle task next to {w_other:.0e}: "
          f"{cost.fog_delay(2e8, 2e9, [w_other]):.3f} s")

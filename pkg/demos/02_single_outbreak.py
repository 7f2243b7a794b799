"""Simulate one outbreak on a scale-free network, event by event.

Run: python3 demos/02_single_outbreak.py

A single exact (Gillespie) realization: every infection and recovery is
an individually timed event, so the trajectory is a step function in
continuous time rather than a smooth curve.
"""

from netepi.dynamics import RateParams, gillespie_run, init_state, summarize_trajectory
from netepi.graphs import generate_ba

g = generate_ba(1000, 5, seed=7)
params = RateParams(beta=0.15, gamma=1.0)  # R0 = beta * <k> / gamma ~= 1.5
state = init_state(g, 0.01, seed=1)  # 1% seeded infectious

traj = gillespie_run(g, params, state, t_max=30.0, seed=2)
summary = summarize_trajectory(traj)

print(f"events simulated        : {summary.total_events}")
print(f"peak infected fraction  : {summary.peak_infected_fraction:.3f}")
print(f"peak time               : {summary.peak_time:.2f}")
print(f"final epidemic scope    : {summary.final_recovered_fraction:.3f}")
print()

# a coarse text rendering of I(t)
import numpy as np

grid = np.linspace(0.0, traj.times[-1], 25)
_, i_counts, _ = traj.counts_at(grid)
top = max(int(i) for i in i_counts) or 1
for t, i in zip(grid, i_counts):
    bar = "#" * round(40 * int(i) / top)
    print(f"t={t:5.1f}  I={int(i):4d}  {bar}")

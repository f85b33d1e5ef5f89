"""Null calibration and a coarse power surface.

Small replicate counts keep this under a minute; the CLI runs the
full-size versions.
"""

import math

import numpy as np

from angularcp import FisherParams, SineModelParams, sample_fisher, sample_vm_sine
from angularcp.samplers import SampleStats
from angularcp.simulation import NullExperimentConfig, PowerGridConfig, null_experiment, power_grid

stats = SampleStats()
x = sample_vm_sine(SineModelParams(kappa3=2), 5000, seed=0, stats=stats)
print(f"sine model acceptance rate {stats.acceptance_rate:.3f}")
print("sample correlation of sines:", round(np.corrcoef(np.sin(x[:, 0]), np.sin(x[:, 1]))[0, 1], 3))

f = sample_fisher(FisherParams(alpha=math.pi / 4, beta=0.0, kappa=20), 2000, seed=0)
print("Fisher colatitude mean ~ pi/4:", round(float(f[:, 1].mean()), 3))

null = null_experiment(NullExperimentConfig(n=300, reps=400, seed=1))
print(f"null: rejection {null.rejection_rate:.3f}  KS distance {null.ks_distance:.3f}")

grid = (-math.pi / 2, -math.pi / 4, 0.0, math.pi / 4, math.pi / 2)
pw = power_grid(PowerGridConfig(delta_phi_grid=grid, delta_theta_grid=grid, n=200, reps=100, seed=1))
print("power (rows dtheta, cols dphi):")
print(np.array2string(pw.rates, precision=2))

"""Regenerate the bundled synthetic wind/wave direction series.

Hourly directions in degrees for 360 hours, with mean-direction changes
after hours 123 and 240. Written once; the golden report in this directory
was produced from the committed CSV, so rerunning this script is only
needed if the dataset itself is meant to change.

    python3 tests/data/generate_synthetic.py > tests/data/synthetic_wind_wave.csv
    angularcp segment tests/data/synthetic_wind_wave.csv --time-col time > tests/data/synthetic_wind_wave.golden.json
"""

import math
import sys
from datetime import datetime, timedelta

import numpy as np

from angularcp.samplers import SineModelParams, sample_vm_sine

regimes = [
    (123, SineModelParams(mu_phi=math.radians(280), mu_theta=math.radians(300), kappa1=3, kappa2=4, kappa3=1)),
    (117, SineModelParams(mu_phi=math.radians(200), mu_theta=math.radians(250), kappa1=3, kappa2=4, kappa3=1)),
    (120, SineModelParams(mu_phi=math.radians(60), mu_theta=math.radians(100), kappa1=3, kappa2=4, kappa3=1)),
]
rng = np.random.default_rng(20240101)
x = np.vstack([sample_vm_sine(p, n, rng) for n, p in regimes])
t0 = datetime(2023, 7, 1)
out = sys.stdout
out.write("time,wind_dir,wave_dir\n")
for i, (phi, theta) in enumerate(np.degrees(x)):
    out.write(f"{(t0 + timedelta(hours=i)).isoformat()},{phi:.2f},{theta:.2f}\n")

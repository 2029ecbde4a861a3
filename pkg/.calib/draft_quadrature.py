"""Draft validation of the two-site polish quadrature oracle test."""
import time

import numpy as np

from symest.polish_mcmc import PolishConfig, polish_sweep
from symest.samplers import RngStream
from symest.symbolic import Interval, RefinedCells

theta_box = Interval(-1.8, -1.6)
c0 = Interval(0.4, 0.8)
c1 = Interval(-0.5, 0.1)
sigma = 0.05
lam = 1.0 / (2.0 * sigma * sigma)
cells = RefinedCells(epsilon=0.3, cells=(c0, c1))
config = PolishConfig(truncation=theta_box, sigma=sigma, epsilon=0.3,
                      sweeps=10, burn_in=1)

sweeps, burn = 500_000, 5_000
rng = RngStream(42, 0)
y = np.array([0.6, -0.2])
theta = -1.7
t0 = time.perf_counter()
samples = np.empty((sweeps, 2))
for t in range(sweeps):
    theta = polish_sweep(y, theta, config, cells, rng)
    samples[t] = (theta, y[1])
samples = samples[burn:]
print(f"chain: {time.perf_counter()-t0:.1f}s")

t0 = time.perf_counter()
nth, ny1, ny0 = 400, 400, 1501
thg = np.linspace(theta_box.lower, theta_box.upper, nth + 1)
thg = 0.5 * (thg[1:] + thg[:-1])
y1g = np.linspace(c1.lower, c1.upper, ny1 + 1)
y1g = 0.5 * (y1g[1:] + y1g[:-1])
y0g = np.linspace(c0.lower, c0.upper, ny0)
joint = np.empty((nth, ny1))
for i, th in enumerate(thg):
    g = 1.0 + th * y0g * y0g
    joint[i] = np.trapezoid(
        np.exp(-lam * (y1g[:, None] - g[None, :]) ** 2), y0g, axis=1)
joint /= joint.sum()
print(f"quadrature: {time.perf_counter()-t0:.1f}s")

bins = 20
truth = joint.reshape(bins, nth // bins, bins, ny1 // bins).sum(axis=(1, 3))
h, _, _ = np.histogram2d(
    samples[:, 0], samples[:, 1],
    bins=[np.linspace(theta_box.lower, theta_box.upper, bins + 1),
          np.linspace(c1.lower, c1.upper, bins + 1)])
h /= h.sum()
tv = 0.5 * np.abs(h - truth).sum()
print(f"TV = {tv:.4f} on {bins}x{bins} bins, {sweeps-burn} draws")

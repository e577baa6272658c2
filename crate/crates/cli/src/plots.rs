//! Standalone matplotlib scripts written next to the CSV files.

pub const TRAJECTORY_SCRIPT: &str = "plot_trajectory.py";
pub const AMPLITUDE_MAP_SCRIPT: &str = "plot_amplitude_map.py";
pub const AMPLITUDE_CURVES_SCRIPT: &str = "plot_amplitude_curves.py";

pub const TRAJECTORY: &str = r##"#!/usr/bin/env python3
"""Noise-free, ensemble-mean and corrected trajectories from trajectory.csv."""
import os
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

here = os.path.dirname(os.path.abspath(__file__))
data = np.genfromtxt(os.path.join(here, "trajectory.csv"), delimiter=",", names=True, comments="#")

fig, ax = plt.subplots(figsize=(8, 3.5))
ax.plot(data["t"], data["u_deterministic"], color="tab:red", lw=0.8, label="noise-free")
ax.fill_between(
    data["t"],
    data["u_ensemble_mean"] - 2 * data["u_ensemble_se"],
    data["u_ensemble_mean"] + 2 * data["u_ensemble_se"],
    color="0.8",
)
ax.plot(data["t"], data["u_ensemble_mean"], color="0.3", lw=0.8, label="ensemble mean")
ax.plot(data["t"], data["u_corrected"], "k--", lw=0.8, label="corrected")
ax.set_xlabel("t")
ax.set_ylabel("u")
ax.legend(loc="upper right", frameon=False)
fig.tight_layout()
out = sys.argv[1] if len(sys.argv) > 1 else os.path.join(here, "trajectory.png")
fig.savefig(out, dpi=150)
"##;

pub const AMPLITUDE_MAP: &str = r##"#!/usr/bin/env python3
"""Ensemble-mean amplitude over (eps, D) from scan.csv."""
import os
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

here = os.path.dirname(os.path.abspath(__file__))
data = np.genfromtxt(os.path.join(here, "scan.csv"), delimiter=",", names=True, comments="#", dtype=None, encoding="utf-8")

eps = np.unique(data["eps"])
noise = np.unique(data["D"])
grid = np.full((noise.size, eps.size), np.nan)
for row in data:
    grid[np.searchsorted(noise, row["D"]), np.searchsorted(eps, row["eps"])] = row["amp_ensemble"]

fig, ax = plt.subplots(figsize=(6, 4))
mesh = ax.pcolormesh(eps, np.arange(noise.size), grid, shading="nearest", cmap="viridis")
ax.set_yticks(np.arange(noise.size))
ax.set_yticklabels([f"{d:g}" for d in noise])
ax.axvline(0.0, color="w", lw=0.8, ls=":")
ax.set_xlabel("eps")
ax.set_ylabel("D")
fig.colorbar(mesh, label="amplitude")
fig.tight_layout()
out = sys.argv[1] if len(sys.argv) > 1 else os.path.join(here, "amplitude_map.png")
fig.savefig(out, dpi=150)
"##;

pub const AMPLITUDE_CURVES: &str = r##"#!/usr/bin/env python3
"""Amplitude against eps for each D in scan.csv."""
import os
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

here = os.path.dirname(os.path.abspath(__file__))
data = np.genfromtxt(os.path.join(here, "scan.csv"), delimiter=",", names=True, comments="#", dtype=None, encoding="utf-8")

fig, ax = plt.subplots(figsize=(6, 4))
colors = plt.cm.viridis(np.linspace(0, 0.85, len(np.unique(data["D"]))))
for color, d in zip(colors, np.unique(data["D"])):
    rows = np.sort(data[data["D"] == d], order="eps")
    if d == 0:
        ax.plot(rows["eps"], rows["amp_noise_free"], color="tab:red", label="D = 0")
        continue
    ax.plot(rows["eps"], rows["amp_ensemble"], color=color, label=f"D = {d:g}, ensemble")
    ax.plot(rows["eps"], rows["amp_corrected"], color=color, ls="--", label=f"D = {d:g}, corrected")
ax.set_xlabel("eps")
ax.set_ylabel("amplitude")
ax.legend(frameon=False)
fig.tight_layout()
out = sys.argv[1] if len(sys.argv) > 1 else os.path.join(here, "amplitude_curves.png")
fig.savefig(out, dpi=150)
"##;

#!/usr/bin/env python3
"""Regenerates crates/core/fixtures/ecg_excerpt.csv.

Synthetic single-lead ECG shaped like a resampled MIT-BIH export: each beat
is a sum of Gaussian P, Q, R, S and T waves around the R peak, with
beat-to-beat RR jitter, slow baseline wander and white measurement noise.
The trace is first produced the way the database stores it (360 Hz,
200 adu/mV) and then linearly interpolated to 1 kHz, scaled to 0.3 Vpp and
centered at 0.9 V. The seed is fixed so the output is reproducible.
"""
import os

import numpy as np

FS_RECORD = 360.0
ADU_PER_MV = 200.0
FS = 1000.0
DURATION_S = 12.0
SEED = 20220707
VPP = 0.3
CENTER = 0.9
QRS_MV = 1.6
NOISE_MV = float(os.environ.get("NOISE_MV", "0.03"))

# (amplitude, offset from R peak [s], width [s])
WAVES = [
    (0.14, -0.200, 0.024),   # P
    (-0.10, -0.034, 0.009),  # Q
    (1.00, 0.000, 0.010),    # R
    (-0.26, 0.034, 0.010),   # S
    (0.22, 0.250, 0.040),    # T, rising limb
    (0.14, 0.300, 0.028),    # T, falling limb
]


def main(path):
    rng = np.random.default_rng(SEED)
    m = int(np.ceil(DURATION_S * FS_RECORD)) + 2
    t = np.arange(m) / FS_RECORD
    x = np.zeros(m)
    r = 0.35
    while r < DURATION_S + 1.0:
        for amp, off, width in WAVES:
            x += amp * np.exp(-0.5 * ((t - r - off) / width) ** 2)
        r += 0.83 * (1.0 + 0.05 * rng.standard_normal())
    x += 0.03 * np.sin(2 * np.pi * 0.21 * t + 0.4) + 0.015 * np.sin(2 * np.pi * 0.47 * t)
    mv = QRS_MV * x + NOISE_MV * rng.standard_normal(m)
    adu = np.round(mv * ADU_PER_MV)
    n = int(round(DURATION_S * FS))
    y = np.interp(np.arange(n) / FS, t, adu)
    y = (y - y.min()) / (y.max() - y.min())
    v = CENTER + VPP * (y - 0.5)
    with open(path, "w", newline="\n") as f:
        f.write("t,v\n")
        for i in range(n):
            f.write(f"{i / FS:.3f},{v[i]:.6f}\n")


if __name__ == "__main__":
    import sys
    main(sys.argv[1] if len(sys.argv) > 1 else "crates/core/fixtures/ecg_excerpt.csv")

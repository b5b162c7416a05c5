#!/usr/bin/env python3
# Copyright (c) MonoNet Contributors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Plots the CSV files written by the mononet CLI.

    plot.py fit-demo DIR [-o fit.png]     cubic fits, one panel per variant
    plot.py synth DIR [-o synth.png]      synthetic surfaces and slices
    plot.py curve FILE... [-o curve.png]  loss curves or response sweeps
"""
import argparse
import glob
import os
import re

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
import pandas as pd  # noqa: E402


def fit_demo(directory, out):
    files = sorted(glob.glob(os.path.join(directory, "fit_*_w*.csv")))
    if not files:
        raise SystemExit(f"no fit_*_w*.csv files in {directory}")
    curves = {}
    for f in files:
        m = re.match(r"fit_(.+)_w(\d+)\.csv", os.path.basename(f))
        curves.setdefault(m.group(1), []).append((int(m.group(2)), pd.read_csv(f)))
    variants = [v for v in ("unconstrained", "convex", "three_activation") if v in curves]
    fig, axes = plt.subplots(1, len(variants), figsize=(4 * len(variants), 3.5), sharey=True)
    for ax, v in zip(np.atleast_1d(axes), variants):
        first = True
        for width, df in sorted(curves[v], key=lambda c: c[0]):
            if first:
                ax.plot(df.x, df.y_true, "k--", lw=1, label="x^3")
                first = False
            ax.plot(df.x, df.y_pred, label=f"width {width}")
        ax.set_title(v.replace("_", " "))
        ax.set_xlabel("x")
        ax.legend()
    fig.tight_layout()
    fig.savefig(out, dpi=150)


def synth(directory, out):
    df = pd.read_csv(os.path.join(directory, "synth_surface.csv"))
    xs, ys = np.unique(df.x), np.unique(df.y)
    columns = [c for c in df.columns if c not in ("x", "y")]
    fig = plt.figure(figsize=(4 * len(columns), 7))
    for i, c in enumerate(columns):
        z = df[c].to_numpy().reshape(len(xs), len(ys))
        ax = fig.add_subplot(2, len(columns), i + 1, projection="3d")
        X, Y = np.meshgrid(xs, ys, indexing="ij")
        ax.plot_surface(X, Y, z, cmap="viridis", linewidth=0)
        ax.set_title(c.replace("_", " "))
        ax.set_xlabel("x")
        ax.set_ylabel("y")
        sl = fig.add_subplot(2, len(columns), len(columns) + i + 1)
        for j in np.linspace(0, len(ys) - 1, 5).astype(int):
            sl.plot(xs, z[:, j], label=f"y = {ys[j]:.2f}")
        sl.set_xlabel("x")
        if i == 0:
            sl.legend(fontsize="small")
    fig.tight_layout()
    fig.savefig(out, dpi=150)


def curve(files, out):
    fig, ax = plt.subplots(figsize=(5, 3.5))
    for f in files:
        df = pd.read_csv(f)
        x = df.columns[0]
        for c in df.columns[1:]:
            ax.plot(df[x], df[c], label=f"{os.path.basename(f)}:{c}")
        ax.set_xlabel(x)
        if x == "epoch":
            ax.set_yscale("log")
    ax.legend(fontsize="small")
    fig.tight_layout()
    fig.savefig(out, dpi=150)


def main():
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("what", choices=["fit-demo", "synth", "curve"])
    p.add_argument("paths", nargs="+")
    p.add_argument("-o", "--out")
    a = p.parse_args()
    out = a.out or f"{a.what}.png"
    if a.what == "fit-demo":
        fit_demo(a.paths[0], out)
    elif a.what == "synth":
        synth(a.paths[0], out)
    else:
        curve(a.paths, out)
    print(out)


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""Plot magnetization and bond-current traces from a trajectory CSV.

Usage: plot_trajectory.py PREFIX_trajectory.csv [-o out.png]
"""
import argparse
import csv

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("csv_path", help="trajectory CSV written by the collide or rectify subcommands")
    ap.add_argument("-o", "--out", default=None, help="output image (default: <csv stem>.png)")
    args = ap.parse_args()

    with open(args.csv_path, newline="") as f:
        reader = csv.reader(f)
        header = next(reader)
        rows = [[float(x) for x in row] for row in reader]

    cols = {name: [r[i] for r in rows] for i, name in enumerate(header)}
    t = cols["time"]
    mag_names = [n for n in header if n.startswith("m_")]
    cur_names = [n for n in header if n.startswith("j_")]

    fig, (ax_m, ax_j) = plt.subplots(2, 1, sharex=True, figsize=(7, 6))
    for n in mag_names:
        ax_m.plot(t, cols[n], label=n)
    for n in cur_names:
        ax_j.plot(t, cols[n], label=n)
    ax_m.set_ylabel(r"$\langle\sigma^z\rangle$")
    ax_j.set_ylabel("bond current")
    ax_j.set_xlabel("time")
    ax_m.legend(ncol=4, fontsize=8)
    ax_j.legend(ncol=4, fontsize=8)
    fig.tight_layout()

    out = args.out or args.csv_path.rsplit(".", 1)[0] + ".png"
    fig.savefig(out, dpi=150)
    print(f"wrote {out}")


if __name__ == "__main__":
    main()

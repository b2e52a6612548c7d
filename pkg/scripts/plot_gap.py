"""Plot a gap-experiment ``tables.csv`` (log-log) to a PNG.

    python scripts/plot_gap.py out/tables.csv out/gap.png

Needs matplotlib, which the package itself does not depend on.
"""
import argparse
import csv
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

SERIES = ["fa_mass", "delta_area", "delta_lower_bound", "constructive_mass",
          "constructive_bound", "support_fa_mass"]


def read(path):
    tables = defaultdict(lambda: defaultdict(dict))
    with open(path, newline="") as f:
        for row in csv.DictReader(f):
            if row["value"] == "":
                continue
            try:
                v = float(row["value"])
            except ValueError:
                continue
            tables[row["table"]][row["column"]][int(row["index"])] = v
    return tables


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("tables")
    ap.add_argument("png")
    args = ap.parse_args(argv)
    t = read(args.tables)
    fig, (left, right) = plt.subplots(1, 2, figsize=(10, 4))
    lengths = t["gap"]["length"]
    for col in SERIES:
        pts = sorted((lengths[n], v) for n, v in t["gap"][col].items() if v > 0 and n in lengths)
        if pts:
            left.loglog(*zip(*pts), marker="o", label=col)
    left.set_xlabel("curve length")
    left.set_ylabel("area / mass")
    left.legend(fontsize="small")
    dist = sorted(t["dist"]["dist"].items())
    if dist:
        right.loglog(*zip(*dist), marker=".")
    right.set_xlabel("l")
    right.set_ylabel("dist(l)")
    fig.tight_layout()
    fig.savefig(args.png, dpi=120)


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Writes the synthetic 150-business-day backtest fixture and its run config.

Price: linear trend + 20-day cycle + Gaussian noise. Each news column is a
noisy, source-specific view of the next day's price change squashed to
[-1, 1], so the compounds carry some signal about the target.
"""

import argparse
import datetime as dt
import json
import math
import random
from pathlib import Path

SOURCES = ("wsj", "reuters", "cnbc", "fortune")


def business_days(start, count):
    day = start
    out = []
    while len(out) < count:
        if day.weekday() < 5:
            out.append(day)
        day += dt.timedelta(days=1)
    return out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out-dir", default="tests/fixtures")
    ap.add_argument("--seed", type=int, default=20180601)
    ap.add_argument("--days", type=int, default=150)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    dates = business_days(dt.date(2017, 12, 7), args.days)
    prices = []
    for t in range(args.days):
        level = 2600.0 + 0.8 * t + 25.0 * math.sin(2.0 * math.pi * t / 20.0)
        prices.append(level + rng.gauss(0.0, 4.0))

    gains = {"wsj": 0.09, "reuters": 0.07, "cnbc": 0.05, "fortune": 0.03}
    noise = {"wsj": 0.25, "reuters": 0.3, "cnbc": 0.4, "fortune": 0.5}
    rows = []
    for t, day in enumerate(dates):
        change = prices[t + 1] - prices[t] if t + 1 < args.days else 0.0
        comps = []
        for s in SOURCES:
            v = math.tanh(gains[s] * change + rng.gauss(0.0, noise[s]))
            comps.append(max(-1.0, min(1.0, round(v, 4))))
        rows.append((day.isoformat(), *comps, round(prices[t], 2)))

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "synthetic_backtest.csv", "w", newline="\n") as f:
        f.write("date,wsj,reuters,cnbc,fortune,adj_close\n")
        for r in rows:
            f.write(",".join(str(x) for x in r) + "\n")

    n_train, n_val = 100, 25
    split = {
        "train": [dates[0].isoformat(), dates[n_train - 1].isoformat()],
        "validation": [dates[n_train].isoformat(), dates[n_train + n_val - 1].isoformat()],
        "test": [dates[n_train + n_val].isoformat(), dates[-1].isoformat()],
    }
    config = {"data": "synthetic_backtest.csv", "split": split, "window": 10}
    with open(out / "synthetic_backtest.json", "w") as f:
        json.dump(config, f, indent=2)
        f.write("\n")


if __name__ == "__main__":
    main()

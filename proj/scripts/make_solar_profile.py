#!/usr/bin/env python3
"""Synthetic hourly PV resource for a tropical monsoon site.

Writes 8760 rows of per-kW output (peak-sun-hour equivalents per hour).
The year is scaled so the annual total equals PSH x 365, which keeps the
annualized PV figures of the flat model. Day-to-day weather is an AR(1)
clearness index around a monthly mean, plus one multi-day overcast spell
in the wet season.
"""

import argparse
import math

import numpy as np

DAYS_IN_MONTH = [31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31]

# Relative monthly irradiance: dry winter, bright pre-monsoon, wet monsoon.
MONTHLY = [0.95, 1.05, 1.15, 1.18, 1.12, 0.92, 0.84, 0.86, 0.88, 1.00, 1.00, 0.92]

# Day length in hours around 23 N.
DAY_LENGTH = [10.8, 11.3, 12.0, 12.7, 13.3, 13.6, 13.5, 13.0, 12.3, 11.6, 11.0, 10.6]


def build(psh, seed, rho, sigma, spell_start, spell_days, spell_level):
    rng = np.random.default_rng(seed)
    days = sum(DAYS_IN_MONTH)
    month_of_day = np.repeat(np.arange(12), DAYS_IN_MONTH)

    # Daily clearness: AR(1) noise around the monthly mean.
    noise = np.zeros(days)
    for d in range(1, days):
        noise[d] = rho * noise[d - 1] + sigma * math.sqrt(1 - rho * rho) * rng.standard_normal()
    daily = np.array([MONTHLY[m] for m in month_of_day]) * np.clip(1.0 + noise, 0.15, 1.6)
    daily[spell_start:spell_start + spell_days] = spell_level * MONTHLY[month_of_day[spell_start]]

    out = np.zeros(days * 24)
    for d in range(days):
        length = DAY_LENGTH[month_of_day[d]]
        rise = 12.0 - length / 2.0
        # Half-sine shape integrated over each clock hour.
        edges = np.clip(np.arange(25) - rise, 0.0, length)
        cum = (1.0 - np.cos(math.pi * edges / length)) / 2.0
        out[d * 24:(d + 1) * 24] = daily[d] * np.diff(cum)

    out *= psh * days / out.sum()
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="data/solar_profile.csv")
    ap.add_argument("--psh", type=float, default=4.59)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--rho", type=float, default=0.6)
    ap.add_argument("--sigma", type=float, default=0.3)
    ap.add_argument("--spell-start", type=int, default=200, help="first day (0-based) of the overcast spell")
    ap.add_argument("--spell-days", type=int, default=5)
    ap.add_argument("--spell-level", type=float, default=0.1)
    args = ap.parse_args()

    values = build(args.psh, args.seed, args.rho, args.sigma, args.spell_start, args.spell_days,
                   args.spell_level)
    with open(args.out, "w") as f:
        f.write("pv_kwh_per_kw\n")
        for v in values:
            f.write(f"{v:.6f}\n")


if __name__ == "__main__":
    main()

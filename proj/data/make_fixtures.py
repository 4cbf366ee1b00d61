#!/usr/bin/env python3
"""Regenerates the synthetic CSV fixtures in this directory.

Temperature is built from both forcings plus AR(1) noise so that the solar
fit does better through the mid-century plateau and the CO2 fit afterwards.
"""
import argparse
from pathlib import Path

import numpy as np
from scipy.interpolate import PchipInterpolator

CO2_KNOTS = {
    1880: 290.7, 1900: 295.8, 1920: 303.0, 1940: 310.4, 1950: 311.3, 1960: 316.9,
    1970: 325.7, 1980: 338.7, 1990: 354.2, 2000: 369.6, 2005: 379.8, 2010: 389.3,
    2014: 397.5, 2020: 412.0, 2030: 449.3, 2040: 489.4, 2050: 540.5, 2060: 603.5,
    2070: 676.9, 2080: 758.2, 2090: 844.8, 2100: 935.9,
}

# Slow solar background in W/m^2, before the 11-year cycle is added.
TSI_KNOTS = {
    1880: 1360.70, 1900: 1360.45, 1910: 1360.40, 1925: 1360.70, 1940: 1361.10,
    1955: 1361.30, 1965: 1361.10, 1975: 1360.90, 1990: 1360.75, 2014: 1360.60,
}
# Projected decline after the record ends, as a fraction of --solar-drop.
TSI_PROJECTION = {2030: 0.4, 2050: 0.85, 2075: 1.0, 2100: 0.9}

FIRST, LAST_FORCING, LAST_TEMP = 1880, 2100, 2014


def smooth11(x):
    out = np.empty_like(x)
    n = len(x)
    for i in range(n):
        h = min(5, i, n - 1 - i)
        out[i] = x[i - h:i + h + 1].mean()
    return out


def haze(years):
    """Aerosol-like cooling that builds after 1945 and eases after 1975."""
    up = np.clip((years - 1945) / 25.0, 0, 1)
    down = np.clip((years - 1975) / 30.0, 0, 1)
    return -(up - down)


def build(seed, co2_coef, tsi_coef, haze_coef, solar_drop, rho, sigma):
    rng = np.random.default_rng(seed)
    years = np.arange(FIRST, LAST_FORCING + 1)
    ky = np.array(sorted(CO2_KNOTS))
    ppm = np.exp(PchipInterpolator(ky, np.log([CO2_KNOTS[y] for y in ky]))(years))
    knots = dict(TSI_KNOTS)
    knots.update({y: TSI_KNOTS[2014] - solar_drop * f for y, f in TSI_PROJECTION.items()})
    ky = np.array(sorted(knots))
    background = PchipInterpolator(ky, [knots[y] for y in ky])(years)
    cycle = 0.45 * np.sin(2 * np.pi * (years - 1880.5) / 11.0)
    wm2 = background + cycle

    t_years = np.arange(FIRST, LAST_TEMP + 1)
    m = len(t_years)
    noise = np.empty(m)
    noise[0] = rng.normal(0, sigma / np.sqrt(1 - rho * rho))
    for i in range(1, m):
        noise[i] = rho * noise[i - 1] + rng.normal(0, sigma)
    signal = (co2_coef * (np.log(ppm[:m]) - np.log(CO2_KNOTS[1880]))
              + tsi_coef * (smooth11(wm2)[:m] - 1360.6)
              + haze_coef * haze(t_years))
    temp = signal + noise
    # Anomalies relative to the 1951-1980 mean.
    temp -= temp[(t_years >= 1951) & (t_years <= 1980)].mean()
    return years, ppm, wm2, t_years, temp


def write(path, header, years, values, digits):
    with open(path, "w") as f:
        f.write(f"year,{header}\n")
        for y, v in zip(years, values):
            f.write(f"{y},{v:.{digits}f}\n")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", type=Path, default=Path(__file__).resolve().parent)
    ap.add_argument("--seed", type=int, default=81)
    ap.add_argument("--co2-coef", type=float, default=3.3)
    ap.add_argument("--tsi-coef", type=float, default=0.5)
    ap.add_argument("--haze-coef", type=float, default=0.25)
    ap.add_argument("--solar-drop", type=float, default=0.95)
    ap.add_argument("--rho", type=float, default=0.5)
    ap.add_argument("--sigma", type=float, default=0.08)
    a = ap.parse_args()
    years, ppm, wm2, t_years, temp = build(a.seed, a.co2_coef, a.tsi_coef, a.haze_coef, a.solar_drop, a.rho, a.sigma)
    write(a.out / "co2_ppm.csv", "ppm", years, ppm, 2)
    write(a.out / "tsi_wm2.csv", "wm2", years, wm2, 4)
    write(a.out / "temperature.csv", "anomaly_c", t_years, temp, 3)


if __name__ == "__main__":
    main()

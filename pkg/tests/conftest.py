"""Shared helpers for the test suite."""

import os

import numpy as np
import pytest


def loglog_slope(x, y, lo, hi):
    """Least-squares slope of ln y vs ln x restricted to x in [lo, hi]."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    mask = (x >= lo) & (x <= hi) & (y > 0)
    return float(np.polyfit(np.log(x[mask]), np.log(y[mask]), 1)[0])


def lattice_ks(balances, temperature, floor=0):
    """Kolmogorov-Smirnov distance between the complementary CDF of the
    integer balances and exp(-m/T), evaluated on the integer lattice."""
    shifted = np.asarray(balances) - floor
    ms = np.arange(0, shifted.max() + 1)
    comp = 1.0 - np.searchsorted(np.sort(shifted), ms, side="left") / shifted.size
    return float(np.abs(comp - np.exp(-ms / temperature)).max())


def wri_data_dir():
    """Directory with real WRI downloads (energy.csv / population.csv),
    or None; gates the full-dataset tests."""
    path = os.environ.get("INEQSTATS_WRI_DIR")
    if path and os.path.isdir(path):
        return path
    return None


requires_wri = pytest.mark.skipif(
    wri_data_dir() is None,
    reason="set INEQSTATS_WRI_DIR to a directory with WRI energy.csv and "
           "population.csv to run the full-dataset checks",
)

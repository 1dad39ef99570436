"""
Scanning the laser parameters
=============================

log10 of m_ss over a grid of Rabi frequency and detuning.  Negative values
(heating) are masked, not clipped.  The same scans are available from the
command line as ``sideband-cooling figure fig2a`` etc.
"""
import numpy as np

from sideband_cooling import presets
from sideband_cooling.cli import ScanGrid, evaluate_scan, log_with_mask

for key in "abc":
    p = presets.FIG2[key]
    (wlo, whi), (dlo, dhi) = presets.scan_ranges(p)
    grid = ScanGrid((wlo, whi, 31, "log"), (dlo, dhi, 31, "log"), p, "m_ss")
    logm, mask = log_with_mask(evaluate_scan(grid, workers=4))
    i, j = np.unravel_index(np.nanargmin(logm), logm.shape)
    print(f"({key}) nu/Gamma = {p.nu / p.gamma:g}: minimum m_ss = {10 ** logm[i, j]:.3g} "
          f"at delta = {grid.deltas[i]:.3g}, omega = {grid.omegas[j]:.3g}; "
          f"{mask.sum()} of {mask.size} points heat")

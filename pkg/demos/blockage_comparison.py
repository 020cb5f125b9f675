"""Blockage walkthrough: run the link twice on identical noise draws, once
steered by the observer's predictions (position reports keep arriving during
blockage) and once by echo-based sensing that freezes its angles inside a
3-second blockage window. Prints the per-window spectral-efficiency gap and
a coarse timeline.
"""

import numpy as np

from uiobeam.config import config_from_mapping
from uiobeam.simulate import run_compare

CONFIG = {
    "observer": {"mu_max": [0.05]},
    "blockage": {"windows": [[20.0, 23.0]]},
    "run": {"horizon": 300, "seed": 1},
}


def main():
    cfg = config_from_mapping(CONFIG)
    summary = run_compare(cfg, "blockage_out")
    print("=== paired comparison, one 3 s blockage window at t = 20 s ===")
    print(f"window mean SE, prediction-steered : {summary['window_mean_se_uio']:.3f} bit/s/Hz")
    print(f"window mean SE, echo baseline      : "
          f"{summary['window_mean_se_echo_baseline']:.3f} bit/s/Hz")
    print(f"gap inside window                  : {summary['window_se_gap']:.3f} bit/s/Hz")
    print(f"outside-window means               : {summary['outside_mean_se_uio']:.3f} vs "
          f"{summary['outside_mean_se_echo_baseline']:.3f} bit/s/Hz")
    print()

    data = np.genfromtxt("blockage_out/se_compare.csv", delimiter=",", names=True)
    print("t(s)   uio_SE  echo_SE")
    for t in (18.0, 20.0, 21.0, 22.0, 22.8, 24.0):
        k = int(round(t / 0.15))
        row = data[k]
        marker = "  <- blocked" if row["in_window"] else ""
        print(f"{row['t']:5.2f}  {row['se_uio']:6.3f}  {row['se_echo_baseline']:7.3f}{marker}")
    print()
    print("Echo-based steering decays inside the window as the UAVs keep moving;")
    print("the observer-fed beams barely notice it. Full trace: blockage_out/.")


if __name__ == "__main__":
    main()

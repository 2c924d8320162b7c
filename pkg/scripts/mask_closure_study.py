"""Effect of leaving the downstream-face node of each solid element unpenalized.

The library assigns every node of a solid element to the solid (chi = 1).
This script compares that with a half-open closure where nodes on a face
shared with a downstream fluid element get chi = 0, for the 1D advection
cases and the 2D L-shape case.
"""
import argparse

import numpy as np

from penaldg import experiments as ex


def open_downstream_1d(chi, solid):
    chi = chi.copy()
    K = solid.size
    for k in np.flatnonzero(solid):
        if not solid[(k + 1) % K]:
            chi[k, -1] = 0.0
    return chi


def open_downstream_2d(chi, solid):
    chi = chi.copy()
    Kx, Ky = solid.shape
    for i, j in zip(*np.nonzero(solid)):
        if not solid[(i + 1) % Kx, j]:
            chi[i, j, -1, :] = 0.0
        if not solid[i, (j + 1) % Ky]:
            chi[i, j, :, -1] = 0.0
    return chi


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--skip-2d", action="store_true")
    args = p.parse_args()
    print("case,closure,error_fluid,error_solid,reference")
    for cfg, ref in zip(ex._fig4_configs(), ex.FIG4_REFERENCE):
        for name, hook in (("closed", None), ("half_open", open_downstream_1d)):
            r = ex.run(cfg, chi_transform=hook).report
            print(f"{cfg.case_id},{name},{r.error_fluid:.4e},{r.error_solid:.4e},{ref:.4e}")
    if not args.skip_2d:
        for cfg, ref in zip(ex._fig9_configs(), ex.FIG9_REFERENCE):
            for name, hook in (("closed", None), ("half_open", open_downstream_2d)):
                r = ex.run(cfg, chi_transform=hook).report
                print(f"{cfg.case_id},{name},{r.error_fluid:.4e},{r.error_solid:.4e},{ref:.4e}")


if __name__ == "__main__":
    main()

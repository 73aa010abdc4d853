"""Failure probability against its fidelity lower bound as the priors vary.

With eta_U >= eta_V the bound 2 sqrt(eta_U eta_V) D is attained exactly
while D <= sqrt(eta_V / eta_U); past that point the gap grows as
(sqrt(eta_V) - D sqrt(eta_U))^2.
"""
import argparse
import csv
import sys

import numpy as np

from chandisc import UnitaryPair, cb_process_fidelity, min_error_unitary, saturation_check


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--theta", type=float, default=np.pi / 2, help="phase of diag(1, e^{i theta})")
    ap.add_argument("--points", type=int, default=11)
    args = ap.parse_args()

    v = np.diag([1, np.exp(1j * args.theta)])
    dval = cb_process_fidelity(UnitaryPair(np.eye(2), v)).d_value
    print(f"# D = {dval:.10f}, saturation ends at eta_U = {1 / (1 + dval**2):.6f}", file=sys.stderr)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["eta_u", "p_fail", "lower_bound", "gap", "saturated", "p_error"])
    for eta in np.linspace(0.5, 0.99, args.points):
        pair = UnitaryPair(np.eye(2), v, eta, 1 - eta)
        sat = saturation_check(pair)
        p_err, _ = min_error_unitary(pair)
        w.writerow([f"{eta:.4f}", f"{sat.p_fail:.10f}", f"{sat.lower_bound:.10f}",
                    f"{sat.gap:.3e}", int(sat.saturated), f"{p_err:.10f}"])


if __name__ == "__main__":
    main()

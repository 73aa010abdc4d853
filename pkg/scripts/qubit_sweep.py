"""Sweep the relative phase between I and diag(1, e^{i theta}).

For a qubit the fidelity is |1 + e^{i theta}| / 2 = |cos(theta / 2)|; the
table compares it with the grid oracle and lists both optimal
probabilities at equal priors.
"""
import argparse
import csv
import sys

import numpy as np

from chandisc import UnitaryPair, cb_process_fidelity, fidelity_bruteforce_oracle, min_error_unitary, unambiguous_unitary


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=13)
    ap.add_argument("--resolution", type=int, default=400, help="oracle grid resolution")
    args = ap.parse_args()

    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["theta", "d_value", "cos_half", "oracle", "p_error", "p_fail"])
    for theta in np.linspace(0, np.pi, args.points):
        pair = UnitaryPair(np.eye(2), np.diag([1, np.exp(1j * theta)]))
        dval = cb_process_fidelity(pair).d_value
        p_err, _ = min_error_unitary(pair)
        p_fail, _ = unambiguous_unitary(pair)
        oracle = fidelity_bruteforce_oracle(pair, args.resolution)
        w.writerow([f"{x:.10f}" for x in (theta, dval, abs(np.cos(theta / 2)), oracle, p_err, p_fail)])


if __name__ == "__main__":
    main()

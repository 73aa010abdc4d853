"""Acceptance suite: ten end-to-end criteria at their stated tolerances.

Run under pytest (a summary line per criterion is printed at the end of
the session) or directly with ``python3 tests/test_acceptance.py``.
"""
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from chandisc import (  # noqa: E402
    Channel,
    ChannelPairProblem,
    OptimizerConfig,
    QuantumState,
    TwoStateProblem,
    UnitaryPair,
    cb_process_fidelity,
    fidelity_bruteforce_oracle,
    helstrom,
    maxent_upper_bound,
    min_error_unitary,
    no_ancilla_upper_bound,
    outcome_probabilities,
    perfect_distinguishability,
    ppovm_of_strategy,
    sandwich_check,
    saturation_check,
    unambiguous_unitary,
)
from chandisc.shots import run_prior_shots  # noqa: E402
from helpers import haar, random_density, random_pair  # noqa: E402

ROOT = Path(__file__).resolve().parents[1]


def _unitary_problem(pair):
    return ChannelPairProblem(Channel.from_unitary(pair.u), Channel.from_unitary(pair.v), pair.eta_u, pair.eta_v)


def _equal_prior_pairs():
    rng = np.random.default_rng(303)
    return [random_pair(2 + k % 3, rng) for k in range(100)]


def criterion_1():
    rng = np.random.default_rng(101)
    worst = 0.0
    for _ in range(200):
        u, v = haar(2, rng), haar(2, rng)
        dval = cb_process_fidelity(UnitaryPair(u, v)).d_value
        worst = max(worst, abs(dval - 0.5 * abs(np.trace(u.conj().T @ v))))
    return worst <= 1e-10, f"max |D - |tr(U^dag V)|/2| = {worst:.2e} over 200 qubit pairs"


def criterion_2():
    cnot, swap = Channel.gate("CNOT"), Channel.gate("SWAP")
    pair = UnitaryPair(cnot.unitary, swap.unitary)
    dval = cb_process_fidelity(pair).d_value
    tr = abs(np.trace(pair.w))
    res = perfect_distinguishability(ChannelPairProblem(cnot, swap))
    ok = dval == 0 and abs(tr - 1) < 1e-12 and res.distinguishable and res.residual <= 1e-8
    return ok, f"D = {dval:g}, |tr(U^dag V)| = {tr:.12g}, witness residual {res.residual:.2e}"


def criterion_3():
    worst_fail = worst_err = 0.0
    for pair in _equal_prior_pairs():
        dval = cb_process_fidelity(pair).d_value
        p_fail, _ = unambiguous_unitary(pair)
        p_err, _ = min_error_unitary(pair)
        worst_fail = max(worst_fail, abs(p_fail - dval))
        worst_err = max(worst_err, abs(p_err - 0.5 * (1 - np.sqrt(1 - dval**2))))
    ok = worst_fail <= 1e-9 and worst_err <= 1e-9
    return ok, f"max |p_fail - D| = {worst_fail:.2e}, max |p_error - formula| = {worst_err:.2e}"


def criterion_4():
    rng = np.random.default_rng(404)
    worst, counts = 0.0, [0, 0]
    for k in range(100):
        # the larger prior goes with U; the bound's branch test assumes it
        eta_u = rng.uniform(0.5, 0.99)
        pair = random_pair(2 + k % 2, rng, priors=(eta_u, 1 - eta_u))
        dval = cb_process_fidelity(pair).d_value
        sat = saturation_check(pair)
        if dval <= np.sqrt(pair.eta_v / pair.eta_u):
            counts[0] += 1
            worst = max(worst, sat.gap)
        else:
            counts[1] += 1
            expected = (np.sqrt(pair.eta_v) - dval * np.sqrt(pair.eta_u)) ** 2
            worst = max(worst, abs(sat.gap - expected))
    return worst <= 1e-9, f"worst deviation {worst:.2e}; {counts[0]} saturated / {counts[1]} unsaturated samples"


def criterion_5():
    rng = np.random.default_rng(505)
    above, below = 0.0, 0.0
    for k in range(50):
        pair = random_pair(2 + k % 3, rng)
        diff = fidelity_bruteforce_oracle(pair, 1000) - cb_process_fidelity(pair).d_value
        above, below = max(above, diff), max(below, -diff)
    ok = above <= 2e-3 and below <= 1e-12
    return ok, f"oracle - D within [-{below:.1e}, {above:.2e}] over 50 pairs"


def criterion_6():
    worst = 0.0
    for pair in _equal_prior_pairs():
        cu, cv = Channel.from_unitary(pair.u), Channel.from_unitary(pair.v)
        p_err, s = min_error_unitary(pair)
        pp = ppovm_of_strategy(s)
        got = 1 - pair.eta_u * outcome_probabilities(pp, cu)[0] - pair.eta_v * outcome_probabilities(pp, cv)[1]
        worst = max(worst, abs(got - p_err))
        p_fail, s = unambiguous_unitary(pair)
        pp = ppovm_of_strategy(s)
        got = pair.eta_u * outcome_probabilities(pp, cu)[2] + pair.eta_v * outcome_probabilities(pp, cv)[2]
        worst = max(worst, abs(got - p_fail))
    return worst <= 1e-9, f"max |achieved - closed form| = {worst:.2e}"


def _batched_povms(n, rng):
    g = rng.standard_normal((2, n, 2, 2)) + 1j * rng.standard_normal((2, n, 2, 2))
    p = np.conj(np.swapaxes(g, -1, -2)) @ g
    w, v = np.linalg.eigh(p[0] + p[1])
    s = (v / np.sqrt(w)[:, None, :]) @ np.conj(np.swapaxes(v, -1, -2))
    return s @ p[0] @ s, s @ p[1] @ s


def criterion_7():
    rng = np.random.default_rng(707)
    worst = -np.inf
    for _ in range(200):
        eta = rng.uniform()
        r1, r2 = random_density(2, rng), random_density(2, rng)
        best = helstrom(TwoStateProblem(QuantumState(r1), QuantumState(r2), eta, 1 - eta)).p_error
        e1, e2 = _batched_povms(500, rng)
        err = 1 - eta * np.einsum("nij,ji->n", e1, r1).real - (1 - eta) * np.einsum("nij,ji->n", e2, r2).real
        worst = max(worst, best - err.min())
    return worst <= 1e-9, f"largest improvement over the formula {worst:.2e} (200 x 500 samples)"


def criterion_8():
    shots, seed = 100_000, 808
    pair = UnitaryPair(np.eye(2), np.diag([1, 1j]))
    chans = (Channel.from_unitary(pair.u), Channel.from_unitary(pair.v))
    p_err, s = min_error_unitary(pair)
    r = run_prior_shots(s, chans, (0.5, 0.5), shots, seed, ("ch1", "ch2"))
    z = abs(r.empirical_error_rate - 0.1464466) / r.standard_errors["error"]
    tv_err = r.total_variation()
    _, s = unambiguous_unitary(pair)
    u = run_prior_shots(s, chans, (0.5, 0.5), shots, seed + 1, ("ch1", "ch2", "inconclusive"))
    tv_ok = tv_err <= 5 * np.sqrt(2 / shots) and u.total_variation() <= 5 * np.sqrt(3 / shots)
    ok = z <= 3 and u.wrong_conclusions == 0 and tv_ok and abs(p_err - 0.1464466) < 1e-7
    return ok, f"error rate {r.empirical_error_rate:.5f} ({z:.2f} SE), {u.wrong_conclusions} wrong unambiguous conclusions"


def criterion_9():
    rng = np.random.default_rng(909)
    cfg = OptimizerConfig(restarts=3)
    maxent_gap, na_gap, na_below, rhs_gap, holds = np.inf, 0.0, 0.0, 0.0, True
    for k in range(100):
        d = 4 if k % 10 == 9 else 2 + k % 2
        eta = rng.uniform(0.05, 0.95)
        pair = random_pair(d, rng, priors=(eta, 1 - eta))
        pp = _unitary_problem(pair)
        p_err, _ = min_error_unitary(pair)
        maxent_gap = min(maxent_gap, maxent_upper_bound(pp) - p_err)
        na = no_ancilla_upper_bound(pp, cfg) - p_err
        na_gap, na_below = max(na_gap, na), max(na_below, -na)
        eq = _unitary_problem(UnitaryPair(pair.u, pair.v))
        sw = sandwich_check(eq)
        holds &= sw.holds
        rhs_gap = max(rhs_gap, abs(sw.rhs - sw.mid))
    ok = maxent_gap >= -1e-12 and na_gap <= 1e-6 and na_below <= 1e-9 and holds and rhs_gap <= 1e-6
    return ok, (f"min(maxent - p_error) = {maxent_gap:.2e}, no-ancilla gap in "
                f"[-{na_below:.1e}, {na_gap:.1e}], sandwich rhs slack {rhs_gap:.1e}")


def criterion_10():
    cmd = [sys.executable, "-m", "chandisc", "report-all", "--input", str(ROOT / "problems" / "cnot_swap.json")]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    return a == b, f"{len(a)} bytes, identical: {a == b}"


CRITERIA = {
    1: ("qubit closed form", criterion_1),
    2: ("CNOT vs SWAP perfect discrimination", criterion_2),
    3: ("equal-prior identities", criterion_3),
    4: ("failure bound saturation", criterion_4),
    5: ("brute-force oracle agreement", criterion_5),
    6: ("achieved-strategy agreement", criterion_6),
    7: ("Helstrom vs sampled POVMs", criterion_7),
    8: ("Monte-Carlo", criterion_8),
    9: ("bound ordering", criterion_9),
    10: ("CLI determinism", criterion_10),
}


def _line(n, ok, detail):
    return f"criterion {n:2d} [{'PASS' if ok else 'FAIL'}] {CRITERIA[n][0]}: {detail}"


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_criterion(n):
    from conftest import ACCEPTANCE_LINES

    ok, detail = CRITERIA[n][1]()
    line = _line(n, ok, detail)
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


if __name__ == "__main__":
    results = []
    for n, (_, fn) in sorted(CRITERIA.items()):
        ok, detail = fn()
        results.append(ok)
        print(_line(n, ok, detail), flush=True)
    sys.exit(0 if all(results) else 1)

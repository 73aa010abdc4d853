"""Task dispatch and report assembly.

Every number in a report is wrapped as ``{"value": x, "provenance": tag}``
with ``tag`` one of ``exact`` (closed form), ``numerical`` (optimizer
output, not certified) or ``empirical`` (Monte-Carlo estimate).
"""
from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .bounds import (
    maxent_upper_bound,
    no_ancilla_upper_bound,
    perfect_distinguishability,
    prop1_lower_bound,
    sandwich_check,
)
from .errors import UnsupportedTask
from .ppovm import outcome_probabilities, ppovm_of_strategy
from .problem import ProblemFile, complex_list, dumps, problem_to_dict
from .shots import run_prior_shots
from .states import posterior
from .unitary import (
    UnitaryPair,
    cb_process_fidelity,
    min_error_unitary,
    perfect_witness,
    saturation_check,
    unambiguous_unitary,
)

TASKS = ("fidelity", "min-error", "unambiguous", "bounds", "simulate", "report-all")
DEFAULT_SHOTS = 100_000


def q(value, provenance: str) -> dict:
    return {"value": float(value), "provenance": provenance}


@dataclass
class DiscriminationReport:
    task: str
    problem: dict
    results: dict

    def to_dict(self) -> dict:
        return {"task": self.task, "problem": self.problem, "results": self.results}

    def to_json(self) -> str:
        return dumps(self.to_dict()) + "\n"

    def to_text(self) -> str:
        lines = [f"task: {self.task}"]
        _text_lines(self.results, "", lines)
        return "\n".join(lines) + "\n"


def _depth(x) -> int:
    return 1 + max((_depth(v) for v in x), default=0) if isinstance(x, list) else 0


def _text_lines(node, prefix, lines):
    for key, val in node.items():
        name = f"{prefix}{key}"
        if isinstance(val, dict) and set(val) == {"value", "provenance"}:
            lines.append(f"{name}: {val['value']:.12g} [{val['provenance']}]")
        elif isinstance(val, dict):
            _text_lines(val, name + ".", lines)
        elif isinstance(val, list) and (len(val) > 8 or _depth(val) > 2):
            lines.append(f"{name}: <nested array, {len(val)} entries, depth {_depth(val)}>")
        else:
            lines.append(f"{name}: {val}")


# -- sections ----------------------------------------------------------------


def _hull_section(fid) -> dict:
    pts = np.exp(1j * fid.eigenphases)
    hp = fid.hull_point()
    return {
        "eigenphases": [float(x) for x in fid.eigenphases],
        "eigenvalues": complex_list(pts),
        "zero_in_hull": bool(fid.zero_in_hull),
        "chosen_pair": list(fid.optimal_pair) if fid.optimal_pair is not None else None,
        "weights": [float(w) for w in fid.optimal_xi_diagonal],
        "closest_point": [hp.real, hp.imag],
    }


def _strategy_section(strategy, labels) -> dict:
    return {
        "provenance": "exact",
        "test_state": complex_list(strategy.test_state),
        "schmidt_coefficients": [float(s) for s in strategy.schmidt_coefficients()],
        "outcome_labels": list(labels),
        "effects": [complex_list(f.e) for f in strategy.output_povm],
    }


def _achieved(strategy, problem: ProblemFile):
    ppovm = ppovm_of_strategy(strategy)
    return np.array([outcome_probabilities(ppovm, ch) for ch in problem.channels])


def _posteriors(table, priors) -> list:
    out = []
    for x in range(table.shape[1]):
        if (np.asarray(priors) @ table[:, x]) <= 1e-15:
            out.append(None)
        else:
            out.append([float(v) for v in posterior(priors, table, x)])
    return out


def _pair(problem: ProblemFile) -> UnitaryPair:
    a, b = problem.channels
    return UnitaryPair.from_channels(a, b, *problem.priors, tol=problem.tol)


def _fidelity(problem, out, fid=None):
    if problem.is_unitary:
        fid = fid or cb_process_fidelity(_pair(problem))
        out["d_value"] = q(fid.d_value, "exact")
        out["hull"] = _hull_section(fid)
        witness = perfect_witness(fid)
        if witness is not None:
            out["witness_xi"] = complex_list(witness)
    else:
        res = prop1_lower_bound(problem.pair_problem(), problem.optimizer)
        out["d_value"] = q(res.trace_value, "numerical")
        out["optimal_xi"] = complex_list(res.argmin_xi.rho)


def _min_error(problem, out, fid=None):
    eta = problem.priors
    if not problem.is_unitary:
        pp = problem.pair_problem()
        out["bounds"] = {
            "maxent_upper": q(maxent_upper_bound(pp), "exact"),
            "no_ancilla_upper": q(no_ancilla_upper_bound(pp, problem.optimizer), "numerical"),
        }
        return
    pair = _pair(problem)
    fid = fid or cb_process_fidelity(pair)
    p_error, strategy = min_error_unitary(pair, fid)
    labels = ("ch1", "ch2")
    table = _achieved(strategy, problem)
    achieved = 1.0 - eta[0] * table[0, 0] - eta[1] * table[1, 1]
    out["d_value"] = q(fid.d_value, "exact")
    out["p_error"] = q(p_error, "exact")
    out["strategy"] = _strategy_section(strategy, labels)
    out["strategy"]["posteriors"] = _posteriors(table, eta)
    out["cross_checks"] = {"achieved_p_error": q(achieved, "exact"),
                           "delta": q(achieved - p_error, "exact")}
    return strategy


def _unambiguous(problem, out, fid=None):
    eta = problem.priors
    if not problem.is_unitary:
        res = prop1_lower_bound(problem.pair_problem(), problem.optimizer)
        out["bounds"] = {"prop1_lower": q(res.bound, "numerical")}
        return
    pair = _pair(problem)
    fid = fid or cb_process_fidelity(pair)
    p_fail, strategy = unambiguous_unitary(pair, fid)
    labels = ("ch1", "ch2", "inconclusive")
    table = _achieved(strategy, problem)
    achieved = eta[0] * table[0, 2] + eta[1] * table[1, 2]
    sat = saturation_check(pair, fid)
    out["d_value"] = q(fid.d_value, "exact")
    out["p_fail"] = q(p_fail, "exact")
    out["strategy"] = _strategy_section(strategy, labels)
    out["strategy"]["posteriors"] = _posteriors(table, eta)
    out["saturation"] = {
        "lower_bound": q(sat.lower_bound, "exact"),
        "gap": q(sat.gap, "exact"),
        "branch_threshold": q(sat.branch_threshold, "exact"),
        "saturated": sat.saturated,
    }
    out["cross_checks"] = {
        "achieved_p_fail": q(achieved, "exact"),
        "delta": q(achieved - p_fail, "exact"),
        "wrong_conclusion_probability": q(table[0, 1] + table[1, 0], "exact"),
    }
    return strategy


def _bounds(problem, out, fid=None):
    pp = problem.pair_problem()
    prop1 = prop1_lower_bound(pp, problem.optimizer)
    section = {
        "prop1_lower": q(prop1.bound, "numerical"),
        "prop1_trace_value": q(prop1.trace_value, "numerical"),
        "maxent_upper": q(maxent_upper_bound(pp), "exact"),
        "no_ancilla_upper": q(no_ancilla_upper_bound(pp, problem.optimizer), "numerical"),
    }
    pd = perfect_distinguishability(pp, problem.optimizer)
    section["perfect_distinguishability"] = {
        "distinguishable": pd.distinguishable,
        "residual": q(pd.residual, pd.provenance),
        "witness_xi": complex_list(pd.witness_xi.rho) if pd.witness_xi is not None else None,
    }
    if problem.is_unitary:
        sw = sandwich_check(pp)
        section["sandwich"] = {
            "lhs": q(sw.lhs, "exact"),
            "mid": q(sw.mid, "exact"),
            "rhs": q(sw.rhs, "exact"),
            "holds": sw.holds,
        }
    out["bounds"] = section


def _simulate(problem, out, fid=None):
    if not problem.is_unitary:
        raise UnsupportedTask("simulation needs an exact optimal strategy (unitary channels only)")
    pair = _pair(problem)
    fid = fid or cb_process_fidelity(pair)
    shots = problem.shots or DEFAULT_SHOTS
    sim = {"shots": shots, "seed": problem.seed}
    p_error, s_err = min_error_unitary(pair, fid)
    r = run_prior_shots(s_err, problem.channels, problem.priors, shots, problem.seed, ("ch1", "ch2"))
    sim["min_error"] = {
        "predicted": q(p_error, "exact"),
        "error_rate": q(r.empirical_error_rate, "empirical"),
        "standard_error": q(r.standard_errors["error"], "empirical"),
        "counts": [int(c) for c in r.counts],
    }
    p_fail, s_un = unambiguous_unitary(pair, fid)
    r = run_prior_shots(s_un, problem.channels, problem.priors, shots, problem.seed + 1,
                        ("ch1", "ch2", "inconclusive"))
    sim["unambiguous"] = {
        "predicted": q(p_fail, "exact"),
        "failure_rate": q(r.empirical_failure_rate, "empirical"),
        "standard_error": q(r.standard_errors["failure"], "empirical"),
        "wrong_conclusions": int(r.wrong_conclusions),
        "counts": [int(c) for c in r.counts],
    }
    out["simulation"] = sim


def run_task(problem: ProblemFile, task: str) -> DiscriminationReport:
    if task not in TASKS:
        raise UnsupportedTask(f"unknown task {task!r}; choose from {', '.join(TASKS)}")
    out: dict = {"channel_kind": "unitary" if problem.is_unitary else "general"}
    fid = cb_process_fidelity(_pair(problem)) if problem.is_unitary else None
    if task == "fidelity":
        _fidelity(problem, out, fid)
    elif task == "min-error":
        _min_error(problem, out, fid)
    elif task == "unambiguous":
        _unambiguous(problem, out, fid)
    elif task == "bounds":
        _bounds(problem, out, fid)
    elif task == "simulate":
        _simulate(problem, out, fid)
    else:
        sections = {}
        for name, fn in (("fidelity", _fidelity), ("min_error", _min_error),
                         ("unambiguous", _unambiguous), ("bounds", _bounds)):
            sections[name] = {}
            fn(problem, sections[name], fid)
        if problem.is_unitary:
            _simulate(problem, sections, fid)
            _cross_check_all(problem, sections)
        out.update(sections)
    return DiscriminationReport(task, problem_to_dict(problem), out)


def _cross_check_all(problem, sec):
    """Deltas between exact values, bounds and the equal-prior identities."""
    eta1, eta2 = problem.priors
    dval = sec["fidelity"]["d_value"]["value"]
    p_err = sec["min_error"]["p_error"]["value"]
    p_fail = sec["unambiguous"]["p_fail"]["value"]
    b = sec["bounds"]["bounds"]
    checks = {
        "maxent_minus_p_error": q(b["maxent_upper"]["value"] - p_err, "numerical"),
        "no_ancilla_minus_p_error": q(b["no_ancilla_upper"]["value"] - p_err, "numerical"),
        "p_fail_minus_prop1": q(p_fail - b["prop1_lower"]["value"], "numerical"),
        "prop1_trace_minus_d": q(b["prop1_trace_value"]["value"] - dval, "numerical"),
    }
    if eta1 == eta2:
        checks["p_fail_minus_d"] = q(p_fail - dval, "exact")
        formula = 0.5 * (1.0 - np.sqrt(max(0.0, 1.0 - dval * dval)))
        checks["p_error_minus_d_formula"] = q(p_err - formula, "exact")
    sec["cross_checks"] = checks


def write_hull_csv(problem: ProblemFile, path) -> None:
    if not problem.is_unitary:
        raise UnsupportedTask("hull data exists only for unitary channels")
    fid = cb_process_fidelity(_pair(problem))
    support = set(fid.support)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["index", "phase", "re", "im", "weight", "in_support"])
        for k, th in enumerate(fid.eigenphases):
            w.writerow([k, "%.17g" % th, "%.17g" % np.cos(th), "%.17g" % np.sin(th),
                        "%.17g" % fid.optimal_xi_diagonal[k], int(k in support)])

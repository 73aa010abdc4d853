"""Problem files: parsing, validation and exact JSON serialization.

A problem file is a JSON object::

    {
      "channels": ["CNOT", {"type": "unitary", "matrix": [[...], ...]}],
      "priors": [0.5, 0.5],
      "tol": 1e-9,
      "optimizer": {"restarts": 20, "max_iterations": 2000, "seed": 0,
                    "convergence_tol": 1e-10},
      "shots": 100000,
      "seed": 0
    }

Channels are a gate name (I, X, Y, Z, H, CNOT, SWAP), ``{"type": "unitary",
"matrix": M}``, ``{"type": "unitary", "name": "H"}`` or ``{"type": "kraus",
"operators": [M, ...]}``. Matrix entries are real numbers or ``[re, im]``
pairs, rows listed first. Only ``channels`` is required.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .bounds import ChannelPairProblem, OptimizerConfig
from .core import GATES, Channel, validate_channel
from .errors import DimensionMismatch, InvalidChannel, ParseError, ValidationError
from .matkernel import DEFAULT_TOL

PRIOR_SUM_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class ProblemFile:
    channels: tuple
    priors: tuple = (0.5, 0.5)
    tol: float = DEFAULT_TOL
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)
    shots: int | None = None
    seed: int = 0
    channel_checks: tuple = ()

    @property
    def is_unitary(self) -> bool:
        return all(ch.is_unitary for ch in self.channels)

    def pair_problem(self) -> ChannelPairProblem:
        return ChannelPairProblem(self.channels[0], self.channels[1], *self.priors)

    def with_overrides(self, **kw) -> "ProblemFile":
        kw = {k: v for k, v in kw.items() if v is not None}
        if "priors" in kw:
            _check_priors(kw["priors"])
        return replace(self, **kw)


def _parse_complex(x, where: str) -> complex:
    if isinstance(x, bool):
        raise ParseError("expected a number or [re, im]", where)
    if isinstance(x, (int, float)):
        return complex(float(x), 0.0)
    if (
        isinstance(x, list)
        and len(x) == 2
        and all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in x)
    ):
        return complex(float(x[0]), float(x[1]))
    raise ParseError("expected a number or [re, im]", where)


def _parse_matrix(m, where: str) -> np.ndarray:
    if not isinstance(m, list) or not m or not all(isinstance(r, list) for r in m):
        raise ParseError("expected a nonempty list of rows", where)
    n = len(m)
    if any(len(r) != n for r in m):
        raise ParseError(f"matrix must be square ({n} rows)", where)
    return np.array(
        [[_parse_complex(x, f"{where}[{i}][{j}]") for j, x in enumerate(r)] for i, r in enumerate(m)],
        dtype=complex,
    )


def _gate(name, where):
    if name not in GATES:
        raise ParseError(f"unknown gate {name!r}; known: {', '.join(GATES)}", where)
    return Channel.gate(name)


def parse_channel(obj, where: str = "channel") -> Channel:
    if isinstance(obj, str):
        return _gate(obj, where)
    if not isinstance(obj, dict):
        raise ParseError("channel must be a gate name or an object", where)
    kind = obj.get("type")
    if kind == "unitary":
        if "name" in obj:
            return _gate(obj["name"], f"{where}.name")
        if "matrix" not in obj:
            raise ParseError("unitary channel needs 'matrix' or 'name'", where)
        return Channel.from_unitary(_parse_matrix(obj["matrix"], f"{where}.matrix"))
    if kind == "kraus":
        ops = obj.get("operators")
        if not isinstance(ops, list) or not ops:
            raise ParseError("kraus channel needs a nonempty 'operators' list", where)
        mats = [_parse_matrix(k, f"{where}.operators[{i}]") for i, k in enumerate(ops)]
        try:
            return Channel.from_kraus(mats)
        except DimensionMismatch as exc:
            raise ParseError(str(exc), f"{where}.operators") from exc
    raise ParseError(f"unknown channel type {kind!r}", f"{where}.type")


def _check_priors(priors):
    a, b = priors
    if a < 0 or b < 0 or abs(a + b - 1) > PRIOR_SUM_TOL:
        raise ValidationError(
            f"priors ({a!r}, {b!r}) must be nonnegative and sum to 1",
            [("priors_sum", abs(a + b - 1))],
        )


def _number(obj, key, kind, default, where="problem"):
    if key not in obj:
        return default
    v = obj[key]
    ok = isinstance(v, (int, float)) and not isinstance(v, bool)
    if kind is int:
        ok = ok and float(v).is_integer()
    if not ok:
        raise ParseError(f"expected {kind.__name__}", f"{where}.{key}")
    return kind(v)


def problem_from_dict(obj) -> ProblemFile:
    if not isinstance(obj, dict):
        raise ParseError("top level must be an object")
    chans = obj.get("channels")
    if not isinstance(chans, list) or len(chans) != 2:
        raise ParseError("expected exactly two channels", "channels")
    channels = tuple(parse_channel(c, f"channels[{i}]") for i, c in enumerate(chans))

    priors = obj.get("priors", [0.5, 0.5])
    if (
        not isinstance(priors, list)
        or len(priors) != 2
        or not all(isinstance(p, (int, float)) and not isinstance(p, bool) for p in priors)
    ):
        raise ParseError("expected two numbers", "priors")
    priors = (float(priors[0]), float(priors[1]))

    tol = _number(obj, "tol", float, DEFAULT_TOL)
    opt = obj.get("optimizer", {})
    if not isinstance(opt, dict):
        raise ParseError("expected an object", "optimizer")
    base = OptimizerConfig()
    try:
        optimizer = OptimizerConfig(
            restarts=_number(opt, "restarts", int, base.restarts, "optimizer"),
            max_iterations=_number(opt, "max_iterations", int, base.max_iterations, "optimizer"),
            seed=_number(opt, "seed", int, base.seed, "optimizer"),
            convergence_tol=_number(opt, "convergence_tol", float, base.convergence_tol, "optimizer"),
        )
    except ValueError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ValidationError(str(exc)) from exc
    shots = _number(obj, "shots", int, None)
    seed = _number(obj, "seed", int, 0)
    problem = ProblemFile(channels, priors, tol, optimizer, shots, seed)
    return validate_problem(problem)


def validate_problem(p: ProblemFile) -> ProblemFile:
    """Run structural checks; raise ValidationError listing every failure."""
    _check_priors(p.priors)
    if p.channels[0].dim != p.channels[1].dim:
        raise ValidationError(
            f"channel dimensions differ ({p.channels[0].dim} vs {p.channels[1].dim})",
            [("dimension", float(abs(p.channels[0].dim - p.channels[1].dim)))],
        )
    if p.channels[0].dim < 2:
        raise ValidationError("channels must act on dimension >= 2", [("dimension", 0.0)])
    if p.shots is not None and p.shots < 1:
        raise ValidationError("shots must be positive", [("shots", float(p.shots))])
    checks, failures = [], []
    for i, ch in enumerate(p.channels):
        rep = validate_channel(ch, p.tol)
        checks.append(rep)
        failures += [(f"channels[{i}].{c.name}", c.residual) for c in rep.failures()]
    if failures:
        detail = ", ".join(f"{n} residual {r:.3e}" for n, r in failures)
        raise ValidationError(f"invalid channel: {detail}", failures)
    return replace(p, channel_checks=tuple(checks))


def load_problem(text: str) -> ProblemFile:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno} column {exc.colno}") from exc
    try:
        return problem_from_dict(obj)
    except InvalidChannel as exc:
        raise ParseError(str(exc), "channels") from exc


def parse_problem(source) -> ProblemFile:
    """Read a problem from a path or a text stream."""
    if hasattr(source, "read"):
        return load_problem(source.read())
    try:
        with open(source, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(str(exc), str(source)) from exc
    return load_problem(text)


# -- serialization ---------------------------------------------------------


def complex_list(a) -> list:
    a = np.asarray(a, dtype=complex)
    if a.ndim == 0:
        return [float(a.real), float(a.imag)]
    return [complex_list(x) for x in a]


def channel_to_dict(ch: Channel):
    if ch.name is not None:
        return ch.name
    if ch.is_unitary:
        return {"type": "unitary", "matrix": complex_list(ch.unitary)}
    return {"type": "kraus", "operators": [complex_list(k) for k in ch.operators]}


def problem_to_dict(p: ProblemFile) -> dict:
    out = {
        "channels": [channel_to_dict(c) for c in p.channels],
        "priors": list(p.priors),
        "tol": p.tol,
        "optimizer": {
            "restarts": p.optimizer.restarts,
            "max_iterations": p.optimizer.max_iterations,
            "seed": p.optimizer.seed,
            "convergence_tol": p.optimizer.convergence_tol,
        },
        "seed": p.seed,
    }
    if p.shots is not None:
        out["shots"] = p.shots
    return out


def format_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite number {x}")
    return "%.17g" % x


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON text with every float written to 17 significant digits."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, (bool, np.bool_)) or obj is None:
        return json.dumps(bool(obj) if obj is not None else None)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(x, (int, float, np.number)) and not isinstance(x, bool) for x in obj):
            return "[" + ", ".join(dumps(x) for x in obj) + "]"
        items = [pad + dumps(x, indent, _level + 1) for x in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    raise TypeError(f"cannot serialize {type(obj).__name__}")

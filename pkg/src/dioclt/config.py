"""key=value experiment config files ('#' comments, unknown keys rejected)."""

from __future__ import annotations

import math
from typing import Optional

from .model import (
    ApproximationProblem,
    MODE_CONGRUENCE,
    MODE_INHOMOGENEOUS,
    NormSpec,
    Q_LOWER_EXCLUSIVE0,
    canonical_norm,
)
from .montecarlo import CENTER_THEOREM, SimulationConfig


class ConfigError(ValueError):
    pass


PROBLEM_KEYS = ("m", "n", "thetas", "weights", "norm", "mode", "modulus",
                "residues", "orthant", "q_lower")
SIM_KEYS = ("M", "num_samples", "seed", "parallelism", "centering")
ALL_KEYS = PROBLEM_KEYS + SIM_KEYS


def parse_norm(text: str) -> NormSpec:
    text = text.strip().lower()
    if text == "sup":
        return NormSpec.sup()
    if text == "euclidean":
        return NormSpec.euclidean()
    if text.startswith("p:"):
        return NormSpec.lp(float(text[2:]))
    raise ConfigError(f"unknown norm {text!r} (expected sup, euclidean, or p:<exponent>)")


def norm_to_str(norm: NormSpec) -> str:
    norm = canonical_norm(norm)
    if norm.kind == "p":
        return f"p:{norm.p:.17g}"
    return norm.kind


def _float_list(text: str) -> tuple:
    return tuple(float(x) for x in text.split(","))


def _int_list(text: str) -> tuple:
    return tuple(int(x) for x in text.split(","))


def parse_config_text(text: str) -> SimulationConfig:
    kv = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in ALL_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in kv:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        kv[key] = value

    for req in ("m", "n", "thetas", "M", "num_samples"):
        if req not in kv:
            raise ConfigError(f"missing required key {req!r}")

    m = int(kv["m"])
    n = int(kv["n"])
    thetas = _float_list(kv["thetas"])
    weights = _float_list(kv["weights"]) if "weights" in kv else tuple(n / m for _ in range(m))
    problem = ApproximationProblem(
        m=m,
        n=n,
        thetas=thetas,
        weights=weights,
        norm=parse_norm(kv.get("norm", "sup")),
        mode=kv.get("mode", MODE_INHOMOGENEOUS),
        modulus=int(kv.get("modulus", 1)),
        residues=_int_list(kv["residues"]) if "residues" in kv else None,
        orthant=tuple(s.strip() for s in kv["orthant"].split(",")) if "orthant" in kv else None,
        q_lower=kv.get("q_lower", Q_LOWER_EXCLUSIVE0),
    )
    return SimulationConfig(
        problem=problem,
        M=int(kv["M"]),
        num_samples=int(kv["num_samples"]),
        seed=int(kv.get("seed", 0)),
        parallelism=int(kv["parallelism"]) if "parallelism" in kv else None,
        centering=kv.get("centering", CENTER_THEOREM),
    ).validated()


def serialize_config(config: SimulationConfig) -> str:
    p = config.problem
    lines = [
        "# dioclt experiment configuration",
        f"m = {p.m}",
        f"n = {p.n}",
        "thetas = " + ",".join(format(t, ".17g") for t in p.thetas),
        "weights = " + ",".join(format(w, ".17g") for w in p.weights),
        f"norm = {norm_to_str(p.norm)}",
        f"mode = {p.mode}",
    ]
    if p.is_congruence:
        lines.append(f"modulus = {p.modulus}")
        lines.append("residues = " + ",".join(str(r) for r in p.residues))
    if p.orthant is not None:
        lines.append("orthant = " + ",".join(p.orthant))
    lines += [
        f"q_lower = {p.q_lower}",
        f"M = {config.M}",
        f"num_samples = {config.num_samples}",
        f"seed = {config.seed}",
    ]
    if config.parallelism is not None:
        lines.append(f"parallelism = {config.parallelism}")
    lines.append(f"centering = {config.centering}")
    return "\n".join(lines) + "\n"

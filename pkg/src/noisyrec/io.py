"""JSON on-disk format for experiments.

    {"alpha": 0.25, "signals": ["s0", "s1"], "lik_min": [...], "lik_maj": [...],
     "embedding": [[...], ...] (optional), "involution": [1, 0] (optional)}
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .errors import InvalidExperiment
from .experiment import Experiment, Involution, Prior

REQUIRED_KEYS = ("alpha", "signals", "lik_min", "lik_maj")


def experiment_to_dict(exp: Experiment, prior: Prior, inv: Involution | None = None) -> dict:
    out: dict[str, Any] = {
        "alpha": prior.alpha,
        "signals": list(exp.labels),
        "lik_min": exp.lik_min.tolist(),
        "lik_maj": exp.lik_maj.tolist(),
    }
    if exp.space.embedding is not None:
        out["embedding"] = [list(p) for p in exp.space.embedding]
    if inv is not None:
        out["involution"] = list(inv.pairing)
    return out


def experiment_from_dict(data: Any) -> tuple[Experiment, Prior, Involution | None]:
    if not isinstance(data, dict):
        raise InvalidExperiment("experiment JSON must be an object")
    missing = [k for k in REQUIRED_KEYS if k not in data]
    if missing:
        raise InvalidExperiment(f"missing key(s): {', '.join(missing)}")
    for key in ("signals", "lik_min", "lik_maj"):
        if not isinstance(data[key], list):
            raise InvalidExperiment(f"{key} must be a list")
    prior = Prior(data["alpha"])
    exp = Experiment.from_rows(
        data["lik_min"], data["lik_maj"], labels=data["signals"], embedding=data.get("embedding")
    )
    inv = None
    if data.get("involution") is not None:
        inv = Involution(tuple(data["involution"]))
        if len(inv) != exp.n_signals:
            raise InvalidExperiment(
                f"involution has {len(inv)} entries for {exp.n_signals} signals"
            )
    return exp, prior, inv


def dumps_experiment(exp: Experiment, prior: Prior, inv: Involution | None = None) -> str:
    return json.dumps(experiment_to_dict(exp, prior, inv), indent=2) + "\n"


def load_experiment(path: str | Path) -> tuple[Experiment, Prior, Involution | None]:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise InvalidExperiment(f"not valid JSON: {e}") from None
    return experiment_from_dict(data)

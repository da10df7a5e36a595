"""JSON model files.

Python's float repr is the shortest string that round-trips, so a
save/load cycle reproduces every coefficient exactly.
"""

from __future__ import annotations

import json

import numpy as np

from .kernel import KernelSpec
from .model import TrainConfig, TrainedModel

FORMAT_VERSION = 1


class ModelFormatError(ValueError):
    pass


def model_to_dict(model: TrainedModel, extra_meta: dict | None = None) -> dict:
    cfg = model.config
    meta = {"n": model.meta.get("n"), "dual_objective": model.meta.get("dual_objective"),
            "primal_objective": model.meta.get("primal_objective"),
            "max_kkt_violation": model.meta.get("max_kkt_violation")}
    meta.update(extra_meta or {})
    return {
        "format_version": FORMAT_VERSION,
        "kernel": {"kind": model.kernel.kind.value, "gamma": model.kernel.gamma},
        "config": {"rho1": cfg.rho1, "rho2": cfg.rho2, "c1": cfg.C1, "c2": cfg.C2, "tol": cfg.tol},
        "bias": model.bias,
        "support_points": [
            {"x": [float(v) for v in x], "y": int(yl), "alpha": float(a), "theta": float(t)}
            for x, yl, a, t in zip(model.support_x, model.support_y, model.support_alpha, model.support_theta)
        ],
        "converged": bool(model.converged),
        "training_meta": meta,
    }


def model_from_dict(doc: dict) -> TrainedModel:
    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise ModelFormatError(f"unsupported model format_version {version!r} (expected {FORMAT_VERSION})")
    try:
        kernel = KernelSpec(doc["kernel"]["kind"], doc["kernel"]["gamma"])
        c = doc["config"]
        cfg = TrainConfig(kernel=kernel, rho1=c["rho1"], rho2=c["rho2"], C1=c["c1"], C2=c["c2"], tol=c["tol"])
        sps = doc["support_points"]
        dim = len(sps[0]["x"]) if sps else int(doc.get("dim", 0))
        X = np.array([sp["x"] for sp in sps], dtype=float).reshape(len(sps), dim)
        return TrainedModel(
            kernel=kernel, support_x=X,
            support_y=np.array([sp["y"] for sp in sps], dtype=float),
            support_alpha=np.array([sp["alpha"] for sp in sps], dtype=float),
            support_theta=np.array([sp["theta"] for sp in sps], dtype=float),
            bias=float(doc["bias"]), config=cfg, converged=bool(doc["converged"]),
            meta=dict(doc.get("training_meta") or {}),
        )
    except (KeyError, TypeError, IndexError) as exc:
        raise ModelFormatError(f"malformed model file: {exc!r}") from None


def save_model(model: TrainedModel, path, extra_meta: dict | None = None) -> None:
    doc = model_to_dict(model, extra_meta)
    if model.n_support == 0:
        doc["dim"] = model.dim
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def load_model(path) -> TrainedModel:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ModelFormatError(f"not a JSON model file: {exc}") from None
    return model_from_dict(doc)

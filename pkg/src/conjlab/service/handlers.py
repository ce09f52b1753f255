"""Computation handlers shared by the HTTP service and the CLI.

Each handler accepts a plain-dict payload (already JSON-decoded), performs
the full field-path validation via the serialization layer, and returns a
JSON-ready dict.  Domain errors surface as ConjlabError subclasses; the
transport layers translate them to exit codes / HTTP statuses.
"""
from __future__ import annotations

import numpy as np

from .. import io
from .. import metrology as met
from ..conjugation import Conjugation, is_eigenvector
from ..errors import ConfigError, DimensionError
from ..invariants import run_checks
from ..linalg import DEFAULT_TOL, takagi
from ..measurability import prod_eigenbasis_search
from ..twoqubit import (
    average_concurrence,
    classify,
    concurrence,
    hadamard_eigenframe,
    magic_spectrum,
    min_average_concurrence,
    stiefel_eigenframe,
)


def _tol(value, default: float) -> float:
    return default if value is None else float(value)


def _require_conjugation(payload: dict, key: str = "conjugation") -> Conjugation:
    if key not in payload or payload[key] is None:
        raise ConfigError(f"{key}: missing")
    theta = io.conjugation_from_json(payload[key], key)
    if not isinstance(theta, Conjugation):
        theta = Conjugation(theta.matrix, theta.dims)
    return theta


def spectrum_handler(payload: dict) -> dict:
    theta = _require_conjugation(payload)
    deg = _tol(payload.get("degeneracy_tol"), DEFAULT_TOL.degeneracy_tol)
    spec = magic_spectrum(theta, degeneracy_tol=deg)
    out = io.spectrum_to_json(spec)
    out["trace"] = io.complex_to_json(spec.trace())
    out["min_average_concurrence"] = float(abs(spec.trace()))
    return out


def classify_handler(payload: dict) -> dict:
    theta = _require_conjugation(payload)
    tol = _tol(payload.get("tol"), DEFAULT_TOL.eq_tol)
    deg = _tol(payload.get("degeneracy_tol"), DEFAULT_TOL.degeneracy_tol)
    cls = classify(theta, tol=tol, degeneracy_tol=deg)
    return io.classification_to_json(cls)


def takagi_handler(payload: dict) -> dict:
    if "matrix" not in payload or payload["matrix"] is None:
        raise ConfigError("matrix: missing")
    m, _ = io.matrix_from_json(payload["matrix"], "matrix")
    tol = _tol(payload.get("tol"), DEFAULT_TOL.eq_tol)
    deg = _tol(payload.get("degeneracy_tol"), DEFAULT_TOL.degeneracy_tol)
    res = takagi(m, tol=tol, degeneracy_tol=deg)
    return io.takagi_to_json(res, m)


def eigenframe_handler(payload: dict) -> dict:
    theta = _require_conjugation(payload)
    deg = _tol(payload.get("degeneracy_tol"), DEFAULT_TOL.degeneracy_tol)
    stiefel = payload.get("stiefel")
    if stiefel is not None:
        frame = stiefel_eigenframe(theta, np.asarray(stiefel, dtype=float),
                                   degeneracy_tol=deg)
        kind = "stiefel"
    else:
        frame = hadamard_eigenframe(theta, degeneracy_tol=deg)
        kind = "hadamard"
    phases = []
    for v in frame.vectors:
        z = is_eigenvector(theta, v, tol=1e-7)
        phases.append(io.complex_to_json(z) if z is not None else None)
    return {
        "kind": kind,
        "frame": io.frame_to_json(frame),
        "eigenvalues": phases,
        "per_vector_concurrence": [float(concurrence(v)) for v in frame.vectors],
        "average_concurrence": float(average_concurrence(frame)),
        "min_average_concurrence": float(min_average_concurrence(theta)),
    }


def measurability_handler(payload: dict) -> dict:
    theta = _require_conjugation(payload)
    tol = _tol(payload.get("tol"), DEFAULT_TOL.eq_tol)
    deg = _tol(payload.get("degeneracy_tol"), DEFAULT_TOL.degeneracy_tol)
    budget = int(payload.get("budget", 256))
    seed = payload.get("seed")
    seed = int(seed) if seed is not None else None
    report = prod_eigenbasis_search(theta, tol=tol, degeneracy_tol=deg,
                                    budget=budget, seed=seed)
    return io.report_to_json(report)


def _experiment_pieces(payload: dict):
    cfg = io.magnetometry_config_from_json(payload, "config")
    model = met.magnetometry_model(cfg["field_dim"], cfg["qubits"], cfg["initial"],
                                   weights=cfg["weights"])
    fisher_tol = _tol(payload.get("fisher_tol"), DEFAULT_TOL.fisher_tol)
    return cfg, model, fisher_tol


def magnetometry_handler(payload: dict) -> dict:
    """Protected-measurement sweep: the network conjugation's eigenframe POVM
    against the sensing model, point by point."""
    cfg, model, fisher_tol = _experiment_pieces(payload)
    if cfg["experiment"] != "magnetometry":
        raise ConfigError("config.experiment: expected 'magnetometry'")
    n = cfg["qubits"]
    theta = met.magnetometry_network_conjugation(cfg["field_dim"], n,
                                                 alpha=cfg["alpha"])
    if cfg["field_dim"] == 1:
        frame = met.product_protected_frame([met.magnetometry_conjugation(1)] * n)
        povm_kind = "product-protected"
    else:
        frame = met.magic_frame(n // 2)
        povm_kind = "magic"
    povm = met.POVM.from_frame(frame)
    points = []
    for x in cfg["points"]:
        pair = met.fisher_matrices(povm, model, x)
        points.append(io.fisher_point_to_json(x, pair.classical, pair.quantum,
                                              fisher_tol=fisher_tol))
    return {
        "experiment": "magnetometry",
        "field_dim": cfg["field_dim"],
        "qubits": n,
        "alpha": cfg["alpha"],
        "povm": povm_kind,
        "certificate": {k: float(v) for k, v in
                        met.anticommutation_certificate(theta, n, cfg["field_dim"]).items()},
        "imaginarity_free": bool(met.is_imaginarity_free(model, theta, cfg["points"])),
        "points": points,
    }


def antiparallel_handler(payload: dict) -> dict:
    """Antiparallel doubling sweep: base network model vs its doubled copy,
    measured in the cross-node product eigenframe."""
    cfg, base, fisher_tol = _experiment_pieces(payload)
    if cfg["experiment"] != "antiparallel":
        raise ConfigError("config.experiment: expected 'antiparallel'")
    n = cfg["qubits"]
    if "conjugation" in payload and payload["conjugation"] is not None:
        theta = _require_conjugation(payload)
        if theta.dims != base.dims:
            raise DimensionError("conjugation dimensions do not match the model")
    else:
        theta = met.magnetometry_network_conjugation(1, n)
    ap = met.antiparallel_model(base, theta)
    povm = met.POVM.from_frame(ap.node_product_frame())
    points = []
    for x in cfg["points"]:
        f_base = met.quantum_fisher_pure(base, x)
        pair = met.fisher_matrices(povm, ap.model, x)
        rec = io.fisher_point_to_json(x, pair.classical, pair.quantum,
                                      fisher_tol=fisher_tol)
        rec["base_quantum"] = np.asarray(f_base, dtype=float).tolist()
        rec["doubling_defect"] = float(np.max(np.abs(pair.quantum - 2.0 * f_base)))
        points.append(rec)
    return {
        "experiment": "antiparallel",
        "field_dim": cfg["field_dim"],
        "qubits": n,
        "alpha": cfg["alpha"],
        "points": points,
    }


def table1_handler() -> dict:
    return {"rows": io.table1_rows()}


def figure2_handler(grid: int) -> dict:
    rows = io.figure2_rows(grid)
    return {"grid": int(grid),
            "rows": [[p2, p3, val] for p2, p3, val in rows]}


def verify_handler(payload: dict) -> dict:
    seed = int(payload.get("seed", 0))
    names = payload.get("checks")
    try:
        results = run_checks(names, seed=seed)
    except KeyError as exc:
        raise ConfigError(str(exc).strip("'\"")) from exc
    return {
        "seed": seed,
        "passed": all(r.ok for r in results),
        "results": [{"name": r.name, "ok": r.ok, "detail": r.detail,
                     "seconds": round(r.seconds, 6)} for r in results],
    }

"""JSON/CSV serialization for operators, frames, reports and sweeps.

Matrices and vectors travel as ``{"dims": [...], "re": [[...]], "im": [[...]]}``
(row-major, ``dims`` optional); complex scalars exclusively as
``{"re": ..., "im": ...}``.  Named conjugation constructors are dispatched
from ``{"kind": ...}`` objects.  All emitters sort keys so identical inputs
produce byte-identical artifacts.
"""
from __future__ import annotations

import json

import numpy as np

from .conjugation import Antiunitary, Conjugation, Frame, build_named
from .errors import ConfigError
from .linalg import TakagiResult, as_complex
from .measurability import MeasurabilityReport
from .twoqubit import MagicSpectrum, TwoQubitClass

_NAMED_KINDS = ("conjugate_swap", "collective_spin_flip", "spin_flip", "cz",
                "product", "candidate", "oneway")


# ---------------------------------------------------------------------------
# scalars, vectors, matrices
# ---------------------------------------------------------------------------

def complex_to_json(z: complex) -> dict:
    return {"re": float(np.real(z)), "im": float(np.imag(z))}


def complex_from_json(obj, path: str = "value") -> complex:
    if not isinstance(obj, dict) or "re" not in obj or "im" not in obj:
        raise ConfigError(f"{path}: complex numbers must be objects with 're' and 'im'")
    try:
        return complex(float(obj["re"]), float(obj["im"]))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{path}: non-numeric 're'/'im' entry") from exc


def array_to_json(a, dims=None) -> dict:
    a = np.asarray(a, dtype=complex)
    out = {"re": np.real(a).tolist(), "im": np.imag(a).tolist()}
    if dims is not None:
        out["dims"] = [int(d) for d in dims]
    return out


def _parse_re_im(obj, path: str, ndim: int) -> np.ndarray:
    if not isinstance(obj, dict):
        raise ConfigError(f"{path}: expected an object with 're'/'im' arrays")
    if "re" not in obj:
        raise ConfigError(f"{path}.re: missing")
    re = np.asarray(obj["re"], dtype=float)
    if "im" in obj and obj["im"] is not None:
        im = np.asarray(obj["im"], dtype=float)
    else:
        im = np.zeros_like(re)
    if re.shape != im.shape:
        raise ConfigError(f"{path}: 're' shape {re.shape} != 'im' shape {im.shape}")
    if re.ndim != ndim:
        kind = "vector" if ndim == 1 else "matrix"
        raise ConfigError(f"{path}: expected a {ndim}-dimensional {kind} array, "
                          f"got {re.ndim} dimensions")
    arr = re + 1j * im
    if not np.all(np.isfinite(re)) or not np.all(np.isfinite(im)):
        raise ConfigError(f"{path}: non-finite entries")
    return arr


def _parse_dims(obj, path: str) -> tuple[int, ...] | None:
    if "dims" not in obj or obj["dims"] is None:
        return None
    dims = obj["dims"]
    if not isinstance(dims, (list, tuple)) or not dims:
        raise ConfigError(f"{path}.dims: must be a non-empty list of integers")
    try:
        return tuple(int(d) for d in dims)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{path}.dims: non-integer entry") from exc


def vector_from_json(obj, path: str = "vector") -> tuple[np.ndarray, tuple[int, ...] | None]:
    return _parse_re_im(obj, path, 1), _parse_dims(obj, path)


def matrix_from_json(obj, path: str = "matrix") -> tuple[np.ndarray, tuple[int, ...] | None]:
    m = _parse_re_im(obj, path, 2)
    if m.shape[0] != m.shape[1]:
        raise ConfigError(f"{path}: matrix must be square, got shape {m.shape}")
    return m, _parse_dims(obj, path)


def _infer_dims(n: int) -> tuple[int, ...]:
    """Default subsystem split: 2-qubit for dimension 4, single system otherwise."""
    return (2, 2) if n == 4 else (n,)


# ---------------------------------------------------------------------------
# conjugations
# ---------------------------------------------------------------------------

def conjugation_from_json(obj, path: str = "conjugation") -> Antiunitary:
    """Build an antiunitary from a matrix object or a named-kind object."""
    if not isinstance(obj, dict):
        raise ConfigError(f"{path}: expected a JSON object")
    if "kind" in obj:
        kind = obj["kind"]
        if kind not in _NAMED_KINDS:
            raise ConfigError(f"{path}.kind: unknown kind {kind!r}; "
                              f"expected one of {', '.join(_NAMED_KINDS)}")
        params: dict = {}
        if kind == "conjugate_swap":
            params["d"] = int(obj.get("d", 2))
        elif kind == "product":
            if "factors" not in obj:
                raise ConfigError(f"{path}.factors: missing for kind 'product'")
            params["factors"] = [matrix_from_json(f, f"{path}.factors[{i}]")[0]
                                 for i, f in enumerate(obj["factors"])]
            if obj.get("dims") is not None:
                params["dims"] = _parse_dims(obj, path)
        elif kind == "candidate":
            for key in ("basis", "phases", "dims"):
                if key not in obj:
                    raise ConfigError(f"{path}.{key}: missing for kind 'candidate'")
            params["basis"] = [vector_from_json(v, f"{path}.basis[{i}]")[0]
                               for i, v in enumerate(obj["basis"])]
            try:
                params["phases"] = tuple(float(p) for p in obj["phases"])
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"{path}.phases: non-numeric entry") from exc
            params["dims"] = _parse_dims(obj, path)
        elif kind == "oneway":
            if "blocks" not in obj:
                raise ConfigError(f"{path}.blocks: missing for kind 'oneway'")
            params["blocks"] = [matrix_from_json(b, f"{path}.blocks[{i}]")[0]
                                for i, b in enumerate(obj["blocks"])]
        return build_named(kind, **params)
    m, dims = matrix_from_json(obj, path)
    if dims is None:
        dims = _infer_dims(m.shape[0])
    return Conjugation(m, dims)


def antiunitary_to_json(theta: Antiunitary) -> dict:
    return array_to_json(theta.matrix, theta.dims)


# ---------------------------------------------------------------------------
# frames, spectra, classification, reports
# ---------------------------------------------------------------------------

def frame_to_json(frame: Frame | None) -> dict | None:
    if frame is None:
        return None
    return {"dims": [int(d) for d in frame.dims],
            "vectors": [array_to_json(v) for v in frame.vectors]}


def frame_from_json(obj, path: str = "frame") -> Frame:
    if not isinstance(obj, dict) or "vectors" not in obj:
        raise ConfigError(f"{path}: expected an object with a 'vectors' list")
    dims = _parse_dims(obj, path)
    if dims is None:
        raise ConfigError(f"{path}.dims: required for frames")
    vecs = [vector_from_json(v, f"{path}.vectors[{i}]")[0]
            for i, v in enumerate(obj["vectors"])]
    if not vecs:
        raise ConfigError(f"{path}.vectors: must be non-empty")
    return Frame(vectors=np.array(vecs), dims=dims)


def spectrum_to_json(spec: MagicSpectrum) -> dict:
    return {"spectrum": [complex_to_json(z) for z in spec.values],
            "canonical_phases": [float(p) for p in spec.canonical_phases()]}


def classification_to_json(cls: TwoQubitClass) -> dict:
    out = {"tag": cls.tag,
           "spectrum": spectrum_to_json(cls.spectrum),
           "witness": None,
           "witness_phases": None}
    if cls.witness is not None:
        out["witness"] = [array_to_json(v) for v in cls.witness.vectors]
    if cls.witness_phases is not None:
        out["witness_phases"] = [float(p) for p in cls.witness_phases]
    return out


def report_to_json(report: MeasurabilityReport) -> dict:
    return {"verdict": report.verdict,
            "failed_condition": report.failed_condition,
            "degeneracy_flag": bool(report.degeneracy_flag),
            "budget_used": int(report.budget_used),
            "witness": frame_to_json(report.witness),
            "promoted": bool(report.promoted)}


def takagi_to_json(res: TakagiResult, original=None) -> dict:
    out = {"values": [float(v) for v in res.values],
           "v": array_to_json(res.v)}
    if original is not None:
        out["reconstruction_error"] = float(res.reconstruction_error(as_complex(original)))
    return out


def fisher_point_to_json(point, classical: np.ndarray, quantum: np.ndarray,
                         *, fisher_tol: float) -> dict:
    gap = quantum - classical
    gap_norm = float(np.max(np.abs(gap)))
    cond = float(np.linalg.cond(quantum)) if np.all(np.isfinite(quantum)) else float("inf")
    return {"point": [float(v) for v in np.atleast_1d(point)],
            "classical": np.asarray(classical, dtype=float).tolist(),
            "quantum": np.asarray(quantum, dtype=float).tolist(),
            "gap_norm": gap_norm,
            "saturated": bool(gap_norm < fisher_tol),
            "quantum_condition": cond}


# ---------------------------------------------------------------------------
# experiment configs
# ---------------------------------------------------------------------------

def magnetometry_config_from_json(obj, path: str = "config") -> dict:
    """Parse a magnetometry/antiparallel experiment config.

    Returns a dict with keys experiment, field_dim, qubits, alpha, initial
    (string or weights tuple or vector), points (list of float lists).
    """
    if not isinstance(obj, dict):
        raise ConfigError(f"{path}: expected a JSON object")
    experiment = obj.get("experiment", "magnetometry")
    if experiment not in ("magnetometry", "antiparallel"):
        raise ConfigError(f"{path}.experiment: unknown experiment {experiment!r}")
    try:
        field_dim = int(obj.get("field_dim", 1))
        qubits = int(obj.get("qubits", 2))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{path}.field_dim/.qubits: must be integers") from exc
    alpha = float(obj.get("alpha", 0.0))

    initial = obj.get("initial", "ghz_z")
    weights = None
    if isinstance(initial, dict):
        if "superposed" in initial:
            weights = tuple(float(w) for w in initial["superposed"])
            if len(weights) != 3:
                raise ConfigError(f"{path}.initial.superposed: needs 3 weights")
            initial = "superposed"
        elif "ghz" in initial:
            axis = str(initial["ghz"]).lower()
            if axis not in ("x", "y", "z"):
                raise ConfigError(f"{path}.initial.ghz: axis must be x, y or z")
            initial = f"ghz_{axis}"
        elif "re" in initial:
            initial = vector_from_json(initial, f"{path}.initial")[0]
        else:
            raise ConfigError(f"{path}.initial: unrecognized initial-state object")
    elif isinstance(initial, str):
        if initial.lower() not in ("ghz_x", "ghz_y", "ghz_z", "superposed"):
            raise ConfigError(f"{path}.initial: unknown initial state {initial!r}")
        initial = initial.lower()
    else:
        raise ConfigError(f"{path}.initial: must be a string or object")

    points_raw = obj.get("points")
    if not isinstance(points_raw, list) or not points_raw:
        raise ConfigError(f"{path}.points: must be a non-empty list of parameter points")
    points = []
    for i, pt in enumerate(points_raw):
        arr = np.atleast_1d(np.asarray(pt, dtype=float))
        if arr.shape != (field_dim,):
            raise ConfigError(f"{path}.points[{i}]: expected {field_dim} components, "
                              f"got shape {arr.shape}")
        points.append([float(v) for v in arr])
    return {"experiment": experiment, "field_dim": field_dim, "qubits": qubits,
            "alpha": alpha, "initial": initial, "weights": weights, "points": points}


# ---------------------------------------------------------------------------
# emitters
# ---------------------------------------------------------------------------

def dumps(obj) -> str:
    """Deterministic JSON: sorted keys, 2-space indent, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False) + "\n"


def loads(text: str, path: str = "input"):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: malformed JSON ({exc.msg} at line {exc.lineno})") from exc


def figure2_rows(grid: int) -> list[tuple[float, float, float]]:
    """Minimum average concurrence |2 + e^{iφ₂} + e^{iφ₃}| on the triangle
    0 ≤ φ₂ ≤ φ₃ of an endpoint-exclusive grid φ = 2πk/grid."""
    if grid < 2:
        raise ConfigError("grid must be at least 2")
    phis = [2.0 * np.pi * k / grid for k in range(grid)]
    rows = []
    for i, p2 in enumerate(phis):
        for p3 in phis[i:]:
            val = abs(2.0 + np.exp(1j * p2) + np.exp(1j * p3))
            if val < 1e-14:  # roundoff floor; the analytic zero is exact
                val = 0.0
            rows.append((p2, p3, float(val)))
    return rows


def figure2_csv(rows) -> str:
    lines = ["phi2,phi3,min_avg_concurrence"]
    for p2, p3, val in rows:
        lines.append(f"{p2:.12g},{p3:.12g},{val:.12g}")
    return "\n".join(lines) + "\n"


def magnetometry_sweep_csv(points: list[dict]) -> str:
    """Flat CSV for parameter sweeps: one row per point, matrices omitted."""
    if not points:
        raise ConfigError("no sweep points to emit")
    n = len(points[0]["point"])
    header = [f"phi{i + 1}" for i in range(n)] + ["gap_norm", "saturated",
                                                  "quantum_condition"]
    lines = [",".join(header)]
    for rec in points:
        cells = [f"{v:.12g}" for v in rec["point"]]
        cells.append(f"{rec['gap_norm']:.12g}")
        cells.append("1" if rec["saturated"] else "0")
        cells.append(f"{rec['quantum_condition']:.12g}")
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def table1_rows() -> list[dict]:
    """Spectra and measurability tags of the three reference conjugations."""
    from .twoqubit import classify, magic_spectrum
    from .conjugation import collective_spin_flip, conjugate_swap, product_conjugation

    entries = [
        ("collective spin flip", collective_spin_flip()),
        ("conjugate swap", conjugate_swap(2)),
        ("product", product_conjugation([np.eye(2), np.eye(2)])),
    ]
    display = {"SepUnmeasurable": "Sep-unmeasurable",
               "ProdMeasurable": "Prod-measurable",
               "Product": "Prod-measurable"}
    rows = []
    for name, theta in entries:
        spec = magic_spectrum(theta)
        tag = classify(theta).tag
        rows.append({"name": name,
                     "spectrum": [complex_to_json(z) for z in spec.values],
                     "tag": display[tag],
                     "raw_tag": tag})
    return rows


def table1_csv(rows) -> str:
    lines = ["name,spectrum,tag"]
    for row in rows:
        parts = []
        for z in row["spectrum"]:
            parts.append(f"{z['re']:+.9g}{z['im']:+.9g}j")
        lines.append(f"{row['name']},{' '.join(parts)},{row['tag']}")
    return "\n".join(lines) + "\n"

"""Text documents for matrices, vectors, ensembles, channels, certificates and reports.

A document is a JSON object with ``schema_version`` ``"1"``, a ``kind`` and a
kind-specific payload.  Complex numbers are written as ``[re, im]`` pairs of
doubles using the shortest repr that round-trips, so
``parse(serialize(x))`` reproduces ``x`` bit for bit.  Hand-written files may
use a bare number for a real entry.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..constrained_opt.channels import KrausChannel
from ..decomposition import DecompositionCertificate
from ..errors import DocumentError
from ..states import (
    DensityMatrix,
    EnergyObservable,
    Ensemble,
    Mode,
    PureState,
    SubnormalizedOperator,
)

SCHEMA_VERSION = "1"
KINDS = ("matrix", "vector", "ensemble", "channel", "certificate", "report")

__all__ = [
    "SCHEMA_VERSION",
    "KINDS",
    "Report",
    "to_document",
    "from_document",
    "serialize",
    "parse",
    "load",
    "dump",
]


@dataclass(frozen=True)
class Report:
    """Free-form result record: a type tag plus JSON-like data (arrays allowed)."""

    report_type: str
    data: dict = field(default_factory=dict)


# --- complex arrays -------------------------------------------------------------


def _pair(z) -> list[float]:
    re, im = float(z.real), float(z.imag)
    if not (math.isfinite(re) and math.isfinite(im)):
        raise DocumentError("non-finite entry cannot be serialized")
    return [re, im]


def encode_array(a) -> list:
    """Nested lists of ``[re, im]`` pairs."""
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim == 0:
        return _pair(a[()])
    return [encode_array(x) for x in a]


def _is_pair(x) -> bool:
    return (isinstance(x, list) and len(x) == 2
            and all(isinstance(t, (int, float)) and not isinstance(t, bool) for t in x))


def decode_array(data, ndim: int, what: str = "array") -> np.ndarray:
    def rec(x, depth):
        if depth == 0:
            if isinstance(x, (int, float)) and not isinstance(x, bool):
                return complex(float(x), 0.0)  # hand-written real entry
            if not _is_pair(x):
                raise DocumentError(f"{what}: expected an [re, im] pair, got {x!r}")
            return complex(float(x[0]), float(x[1]))
        if not isinstance(x, list) or not x:
            raise DocumentError(f"{what}: expected a nonempty list at depth {ndim - depth}")
        return [rec(y, depth - 1) for y in x]

    nested = rec(data, ndim)
    try:
        arr = np.array(nested, dtype=np.complex128)
    except ValueError as exc:  # ragged
        raise DocumentError(f"{what}: ragged nesting") from exc
    if arr.ndim != ndim:
        raise DocumentError(f"{what}: expected {ndim} dimensions, got {arr.ndim}")
    return arr


# --- report values ----------------------------------------------------------------


def _encode_value(v):
    if isinstance(v, (bool, str)) or v is None:
        return v
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else {"float": repr(v)}
    if isinstance(v, (complex, np.complexfloating)):
        return {"complex": _pair(complex(v))}
    if isinstance(v, PureState):
        v = v.vec
    if isinstance(v, np.ndarray):
        if np.iscomplexobj(v):
            return {"complex_array": encode_array(v), "ndim": v.ndim}
        return {"real_array": np.asarray(v, dtype=float).tolist(), "ndim": v.ndim}
    if isinstance(v, dict):
        return {"dict": {str(k): _encode_value(x) for k, x in v.items()}}
    if isinstance(v, (list, tuple)):
        return [_encode_value(x) for x in v]
    raise DocumentError(f"cannot serialize report value of type {type(v).__name__}")


def _decode_value(v):
    if isinstance(v, list):
        return [_decode_value(x) for x in v]
    if not isinstance(v, dict):
        return v
    if set(v) == {"float"}:
        return float(v["float"])
    if set(v) == {"complex"}:
        if not _is_pair(v["complex"]):
            raise DocumentError("bad complex value")
        return complex(*v["complex"])
    if set(v) == {"complex_array", "ndim"}:
        return decode_array(v["complex_array"], int(v["ndim"]), "complex_array")
    if set(v) == {"real_array", "ndim"}:
        arr = np.array(v["real_array"], dtype=float)
        if arr.ndim != int(v["ndim"]):
            raise DocumentError("real_array: dimension mismatch")
        return arr
    if set(v) == {"dict"} and isinstance(v["dict"], dict):
        return {k: _decode_value(x) for k, x in v["dict"].items()}
    raise DocumentError(f"unrecognized report value {sorted(v)}")


# --- kinds ------------------------------------------------------------------------


def _components(ens: Ensemble) -> list:
    return [{"weight": float(p), "vector": encode_array(s.vec)} for p, s in ens]


def _ensemble(items) -> Ensemble:
    if not isinstance(items, list):
        raise DocumentError("ensemble: components must be a list")
    comps = []
    for c in items:
        if not isinstance(c, dict) or set(c) != {"weight", "vector"}:
            raise DocumentError("ensemble: each component needs exactly 'weight' and 'vector'")
        comps.append((float(c["weight"]), PureState(decode_array(c["vector"], 1, "vector"))))
    return Ensemble(comps)


def to_document(obj) -> dict:
    doc = {"schema_version": SCHEMA_VERSION}
    if isinstance(obj, (DensityMatrix, SubnormalizedOperator, EnergyObservable)):
        obj = obj.mat
    if isinstance(obj, PureState):
        obj = obj.vec
    if isinstance(obj, np.ndarray) and obj.ndim == 2:
        if obj.shape[0] != obj.shape[1]:
            raise DocumentError(f"matrix must be square, got shape {obj.shape}")
        doc.update(kind="matrix", dim=obj.shape[0], matrix=encode_array(obj))
    elif isinstance(obj, np.ndarray) and obj.ndim == 1:
        doc.update(kind="vector", dim=obj.shape[0], vector=encode_array(obj))
    elif isinstance(obj, Ensemble):
        doc.update(kind="ensemble", dim=obj.dim, components=_components(obj))
    elif isinstance(obj, KrausChannel):
        doc.update(kind="channel", kraus=[encode_array(K) for K in obj.kraus])
    elif isinstance(obj, DecompositionCertificate):
        doc.update(
            kind="certificate",
            mode=obj.mode.value,
            budget=float(obj.budget),
            target=encode_array(obj.target.mat),
            observable=encode_array(obj.observable.mat),
            components=_components(obj.ensemble),
            energies=[float(e) for e in obj.energies],
            reconstruction_error=float(obj.reconstruction_error),
            merges=int(obj.merges),
        )
    elif isinstance(obj, Report):
        doc.update(kind="report", report_type=obj.report_type,
                   data={str(k): _encode_value(v) for k, v in obj.data.items()})
    else:
        raise DocumentError(f"no document kind for {type(obj).__name__}")
    return doc


_FIELDS = {
    "matrix": {"dim", "matrix"},
    "vector": {"dim", "vector"},
    "ensemble": {"dim", "components"},
    "channel": {"kraus"},
    "certificate": {"mode", "budget", "target", "observable", "components", "energies",
                    "reconstruction_error", "merges"},
    "report": {"report_type", "data"},
}


def from_document(doc: dict):
    if not isinstance(doc, dict):
        raise DocumentError("document must be a JSON object")
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise DocumentError(f"unsupported schema_version {doc.get('schema_version')!r}")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise DocumentError(f"unknown kind {kind!r}")
    payload = set(doc) - {"schema_version", "kind"}
    if payload != _FIELDS[kind]:
        raise DocumentError(f"{kind}: expected fields {sorted(_FIELDS[kind])}, got {sorted(payload)}")

    if kind in ("matrix", "vector", "ensemble"):
        dim = doc["dim"]
        if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
            raise DocumentError(f"{kind}: dim must be a positive integer, got {dim!r}")
    if kind == "matrix":
        arr = decode_array(doc["matrix"], 2, "matrix")
        if arr.shape != (dim, dim):
            raise DocumentError(f"matrix: declared dim {dim} but rows give shape {arr.shape}")
        return arr
    if kind == "vector":
        arr = decode_array(doc["vector"], 1, "vector")
        if arr.shape != (dim,):
            raise DocumentError(f"vector: declared dim {dim} but found {arr.shape[0]} entries")
        return arr
    if kind == "ensemble":
        ens = _ensemble(doc["components"])
        if ens.dim != dim:
            raise DocumentError(f"ensemble: declared dim {dim} but vectors have dimension {ens.dim}")
        return ens
    if kind == "channel":
        if not isinstance(doc["kraus"], list) or not doc["kraus"]:
            raise DocumentError("channel: kraus must be a nonempty list")
        return KrausChannel([decode_array(K, 2, "kraus") for K in doc["kraus"]])
    if kind == "certificate":
        try:
            mode = Mode(doc["mode"])
        except ValueError as exc:
            raise DocumentError(f"certificate: unknown mode {doc['mode']!r}") from exc
        return DecompositionCertificate(
            target=DensityMatrix(decode_array(doc["target"], 2, "target")),
            observable=EnergyObservable(decode_array(doc["observable"], 2, "observable")),
            ensemble=_ensemble(doc["components"]),
            reconstruction_error=float(doc["reconstruction_error"]),
            energies=tuple(float(e) for e in doc["energies"]),
            mode=mode,
            budget=float(doc["budget"]),
            merges=int(doc["merges"]),
        )
    if not isinstance(doc["data"], dict) or not isinstance(doc["report_type"], str):
        raise DocumentError("report: data must be an object and report_type a string")
    return Report(doc["report_type"], {k: _decode_value(v) for k, v in doc["data"].items()})


def serialize(obj) -> str:
    """JSON text with one top-level field per line and compact values."""
    doc = to_document(obj)
    lines = [f"  {json.dumps(k)}: {json.dumps(v, allow_nan=False)}" for k, v in doc.items()]
    return "{\n" + ",\n".join(lines) + "\n}\n"


def parse(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON: {exc}") from exc
    return from_document(doc)


def load(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc.strerror}") from exc
    return parse(text)


def dump(obj, path) -> None:
    Path(path).write_text(serialize(obj))

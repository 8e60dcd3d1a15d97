"""JSON file formats for channels, rate maps and gate-set model configs.

Channel file::

    {"qubits": N, "rep": "ptm" | "chi", "basis": "pauli-normalized",
     "matrix": [[...], ...]}            # chi entries are [re, im] pairs

Rows and columns follow the canonical Pauli index order. Floats are written
with ``repr`` precision so files round-trip exactly.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Union

import numpy as np

from .errors import FileFormatError
from .generators import ErrorGeneratorRates
from .models import GateSetModel
from .superop import chi_from_ptm, n_qubits_of, ptm_from_chi

BASIS_NAME = "pauli-normalized"

PathLike = Union[str, Path]


def channel_to_json(ptm: np.ndarray, rep: str = "ptm") -> dict:
    ptm = np.asarray(ptm, dtype=float)
    n = n_qubits_of(ptm)
    if rep == "ptm":
        matrix: Any = ptm.tolist()
    elif rep == "chi":
        chi = chi_from_ptm(ptm)
        matrix = [[[float(z.real), float(z.imag)] for z in row] for row in chi]
    else:
        raise ValueError(f"unknown representation {rep!r}")
    return {"qubits": n, "rep": rep, "basis": BASIS_NAME, "matrix": matrix}


def channel_from_json(obj: dict) -> np.ndarray:
    """PTM from a channel document (either representation)."""
    try:
        n = int(obj["qubits"])
        rep = obj.get("rep", "ptm")
        basis = obj.get("basis", BASIS_NAME)
        raw = obj["matrix"]
    except (KeyError, TypeError, ValueError) as exc:
        raise FileFormatError(f"malformed channel document: {exc}") from None
    if basis != BASIS_NAME:
        raise FileFormatError(f"unsupported basis {basis!r}; expected {BASIS_NAME!r}")
    dim = 4**n
    try:
        if rep == "ptm":
            mat = np.array(raw, dtype=float)
        elif rep == "chi":
            arr = np.array(raw, dtype=float)
            if arr.ndim != 3 or arr.shape[2] != 2:
                raise FileFormatError("chi entries must be [re, im] pairs")
            mat = arr[..., 0] + 1j * arr[..., 1]
        else:
            raise FileFormatError(f"unknown representation {rep!r}")
    except ValueError as exc:
        raise FileFormatError(f"bad matrix entries: {exc}") from None
    if mat.shape != (dim, dim):
        raise FileFormatError(f"matrix shape {mat.shape} does not match {n} qubits")
    if not np.all(np.isfinite(mat)):
        raise FileFormatError("matrix has non-finite entries")
    return ptm_from_chi(mat) if rep == "chi" else mat


def _read_json(path: PathLike) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"{path}: invalid JSON ({exc})") from None


def write_json(path: PathLike, payload: Any) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=1)
        fh.write("\n")


def read_channel(path: PathLike) -> np.ndarray:
    return channel_from_json(_read_json(path))


def write_channel(path: PathLike, ptm: np.ndarray, rep: str = "ptm") -> None:
    write_json(path, channel_to_json(ptm, rep))


def read_rates(path: PathLike) -> ErrorGeneratorRates:
    obj = _read_json(path)
    try:
        return ErrorGeneratorRates.from_json(obj)
    except (KeyError, TypeError) as exc:
        raise FileFormatError(f"{path}: malformed rates document ({exc})") from None


def write_rates(path: PathLike, rates: ErrorGeneratorRates) -> None:
    write_json(path, rates.to_json())


def read_gate_set(path: PathLike, n_qubits: int | None = None) -> GateSetModel:
    return GateSetModel.from_json(_read_json(path), n_qubits)

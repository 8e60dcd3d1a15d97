"""Decomposition reports: one in-memory document rendered as JSON or an aligned table."""
from __future__ import annotations

from typing import Optional

import numpy as np

from .generators import (
    KINDS,
    LOGARITHM,
    ErrorGeneratorRates,
    decompose,
    extract_error_generator,
    stochastic_constraints,
)
from .metrics import metrics_report
from .superop import check_process

SECTOR_NAMES = {"H": "Hamiltonian", "S": "Pauli-stochastic", "C": "Pauli-correlation", "A": "active"}
DISPLAY_THRESHOLD = 1e-12

A_SIGN_NOTE = (
    "A(P,Q) follows i(P rho Q - Q rho P + 1/2{[P,Q], rho}); amplitude damping toward |0> "
    "gives a negative a(X,Y)"
)
DIVISIBILITY_NOTE = (
    "negative stochastic rates under the logarithm convention mean the error process is "
    "not infinitely divisible (exp(t L) is not CP for some 0 < t < 1)"
)


def sector_table(rates: ErrorGeneratorRates) -> dict[str, list[dict]]:
    """Rates grouped by sector, each sorted by decreasing magnitude."""
    out: dict[str, list[dict]] = {}
    for kind in KINDS:
        rows = [(lb, v) for lb, v in rates.items() if lb.kind == kind]
        rows.sort(key=lambda item: (-abs(item[1]), item[0].sort_key))
        out[kind] = [{"label": str(lb), **lb.to_json(), "rate": v} for lb, v in rows]
    return out


def rates_report(
    rates: ErrorGeneratorRates,
    threshold: float = DISPLAY_THRESHOLD,
    diagnostics: Optional[dict] = None,
    metrics: Optional[dict] = None,
) -> dict:
    """Report document for a rate map.

    The top-level ``qubits``/``convention``/``rates`` keys are exactly the
    rates file format, so a saved report can be read back as a rates file.
    """
    doc = rates.to_json()
    constraints = stochastic_constraints(rates)
    negative = [str(lb) for lb, v in rates.items() if lb.kind == "S" and v < -threshold]
    notes = []
    if negative and rates.convention == LOGARITHM:
        notes.append(DIVISIBILITY_NOTE)
    if any(lb.kind == "A" for lb in rates.labels()):
        notes.append(A_SIGN_NOTE)
    if metrics is None:
        metrics = metrics_report(rates=rates).to_json()
    doc.update(
        {
            "threshold": threshold,
            "sectors": sector_table(rates),
            "sector_norms": {k: rates.sector(k).norm() for k in KINDS},
            "negative_rates": negative,
            "constraints": constraints.to_json(),
            "metrics": metrics,
            "diagnostics": diagnostics or {},
            "notes": notes,
        }
    )
    return doc


def decomposition_report(
    gate: np.ndarray,
    target: np.ndarray,
    convention: str = LOGARITHM,
    threshold: float = DISPLAY_THRESHOLD,
) -> dict:
    """Extract, decompose and summarize the error in ``gate`` relative to ``target``."""
    generator = extract_error_generator(gate, target, convention)
    rates = decompose(generator, convention=convention)
    error_process = np.linalg.solve(np.asarray(target).T, np.asarray(gate).T).T
    diagnostics = {
        "gate": check_process(gate).to_dict(),
        "error_process": check_process(error_process).to_dict(),
        "generator_norm": float(np.linalg.norm(generator)),
    }
    metrics = metrics_report(gate, target, rates.convention, rates=rates).to_json()
    return rates_report(rates, threshold, diagnostics, metrics)


def _fmt(value: float) -> str:
    return f"{value: .6e}"


def render_text(doc: dict) -> str:
    """Aligned plain-text table for a report document."""
    threshold = doc.get("threshold", DISPLAY_THRESHOLD)
    conv = doc["convention"]
    lines = [f"Error generator rates ({doc['qubits']} qubit(s), {conv} convention, |rate| >= {threshold:g})"]
    rows = []
    for kind in KINDS:
        for row in doc["sectors"][kind]:
            if abs(row["rate"]) < threshold:
                continue
            flag = ""
            if kind == "S" and row["rate"] < 0:
                flag = "NEGATIVE RATE"
            rows.append((SECTOR_NAMES[kind], row["label"], _fmt(row["rate"]), flag))
    if not rows:
        lines.append("  (no rates above threshold)")
    else:
        widths = [max(len(r[i]) for r in rows + [("sector", "generator", "rate", "")]) for i in range(4)]
        header = ("sector", "generator", "rate", "")
        lines.append("  " + "  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip())
        lines.append("  " + "  ".join("-" * w for w in widths[:3]))
        for r in rows:
            lines.append("  " + "  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
    m = doc.get("metrics") or {}
    if m:
        lines.append("")
        lines.append(f"  J-probability  epsilon_J = {m['epsilon_j']:.6e}")
        lines.append(f"  J-amplitude    theta_J   = {m['theta_j']:.6e}")
        lines.append(f"  1 - (eps + theta^2)      = {m['fidelity_approx']:.12f}")
        if m.get("fidelity") is not None:
            lines.append(f"  entanglement fidelity    = {m['fidelity']:.12f}")
    cons = doc.get("constraints")
    if cons and (cons["violations"] or not cons["tensor_psd"]):
        lines.append("")
        lines.append(f"  stochastic tensor PSD: {cons['tensor_psd']} (min eigenvalue {cons['min_eigenvalue']:.3e})")
        for v in cons["violations"]:
            lines.append(f"  bound violated: |{v['label']}| = {abs(v['value']):.3e} > {v['bound']:.3e}")
    notes = list(doc.get("notes", [])) + [n for n in m.get("notes", []) if n not in doc.get("notes", [])]
    if notes:
        lines.append("")
        lines.extend(f"  note: {n}" for n in notes)
    return "\n".join(lines)


__all__ = ["decomposition_report", "rates_report", "render_text", "sector_table"]

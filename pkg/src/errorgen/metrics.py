"""Jamiolkowski probability / amplitude and entanglement fidelity."""
from __future__ import annotations

import warnings
from collections import defaultdict
from dataclasses import asdict, dataclass, field
from typing import Optional, Union

import numpy as np

from .errors import NonTPGeneratorError
from .generators import (
    LOGARITHM,
    TP_ROW_TOL,
    ErrorGeneratorRates,
    decompose,
    extract_error_generator,
)
from .pauli import commutes, pauli_product, pauli_vec_basis
from .superop import check_process, jamiolkowski, n_qubits_of

DIAMOND_NOTE = (
    "diamond-norm error is not computed; up to O(1) factors it scales as "
    "epsilon_J + theta_J"
)

GeneratorInput = Union[np.ndarray, ErrorGeneratorRates]


def _psi(n_qubits: int) -> np.ndarray:
    return pauli_vec_basis(n_qubits)[:, 0]


def _checked_generator(gen: np.ndarray) -> np.ndarray:
    gen = np.asarray(gen, dtype=float)
    n_qubits_of(gen)
    if np.max(np.abs(gen[0])) > TP_ROW_TOL:
        raise NonTPGeneratorError("metrics need a trace-preserving generator (zero top row)")
    return gen


def j_probability(gen: GeneratorInput) -> float:
    """Probability moved off the maximally entangled input: ``-<Psi|rho_J(L)|Psi>``.

    For a rate map this is the sum of the S rates.
    """
    if isinstance(gen, ErrorGeneratorRates):
        return float(sum(v for lb, v in gen.rates.items() if lb.kind == "S"))
    gen = _checked_generator(gen)
    psi = _psi(n_qubits_of(gen))
    return float(-np.vdot(psi, jamiolkowski(gen) @ psi).real)


def amplitude_column(rates: ErrorGeneratorRates) -> dict:
    """Off-diagonal Choi-sum entries ``chi[R, I]`` produced by the rates.

    Only H terms, C terms on commuting pairs and A terms on anticommuting
    pairs contribute. Works without dense matrices, for any qubit count.
    """
    col: dict = defaultdict(complex)
    for label, value in rates.rates.items():
        if label.kind == "H":
            col[label.p] += -1j * value
        elif label.kind == "C" and commutes(label.p, label.q):
            prod = pauli_product(label.p, label.q)
            col[prod.pauli] += -prod.phase * value
        elif label.kind == "A" and not commutes(label.p, label.q):
            prod = pauli_product(label.p, label.q)
            col[prod.pauli] += 1j * prod.phase * value
    return dict(col)


def j_amplitude(gen: GeneratorInput) -> float:
    """Norm of the amplitude moved off the maximally entangled input."""
    if isinstance(gen, ErrorGeneratorRates):
        return float(np.sqrt(sum(abs(v) ** 2 for v in amplitude_column(gen).values())))
    gen = _checked_generator(gen)
    psi = _psi(n_qubits_of(gen))
    moved = jamiolkowski(gen) @ psi
    moved -= psi * np.vdot(psi, moved)
    return float(np.linalg.norm(moved))


def entanglement_fidelity(g: np.ndarray, target: np.ndarray, check: bool = True) -> float:
    """``<Psi|rho_J(g target^-1)|Psi>``; warns if either input is not CPTP."""
    g = np.asarray(g, dtype=float)
    target = np.asarray(target, dtype=float)
    if check:
        for name, mat in (("gate", g), ("target", target)):
            if not check_process(mat).is_cptp:
                warnings.warn(f"{name} process is not CPTP; fidelity may be meaningless", stacklevel=2)
    error_process = np.linalg.solve(target.T, g.T).T
    psi = _psi(n_qubits_of(g))
    return float(np.vdot(psi, jamiolkowski(error_process) @ psi).real)


def fidelity_approximation(rates_or_gen: GeneratorInput) -> float:
    """Small-error estimate ``1 - (epsilon_J + theta_J**2)`` of entanglement fidelity."""
    eps = j_probability(rates_or_gen)
    theta = j_amplitude(rates_or_gen)
    return 1.0 - (eps + theta**2)


@dataclass
class MetricsReport:
    epsilon_j: float
    theta_j: float
    fidelity: Optional[float]
    fidelity_approx: float
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return asdict(self)


def metrics_report(
    g: Optional[np.ndarray] = None,
    target: Optional[np.ndarray] = None,
    convention: str = LOGARITHM,
    rates: Optional[ErrorGeneratorRates] = None,
) -> MetricsReport:
    """Metrics for a gate against its target, or for a bare rate map."""
    notes = [DIAMOND_NOTE]
    fidelity = None
    if rates is None:
        if g is None or target is None:
            raise ValueError("need either rates or both gate and target")
        rates = decompose(extract_error_generator(g, target, convention), convention=convention)
    if g is not None and target is not None:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            fidelity = entanglement_fidelity(g, target)
        notes.extend(str(w.message) for w in caught)
    eps = j_probability(rates)
    theta = j_amplitude(rates)
    if any(v < 0 for lb, v in rates.rates.items() if lb.kind == "S" and abs(v) > 1e-12):
        notes.append("negative stochastic rate: error process is not infinitely divisible")
    return MetricsReport(eps, theta, fidelity, 1.0 - (eps + theta**2), notes)

"""Reference channels, ideal gate targets, and seeded random small-error maps."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from typing import Mapping

import numpy as np
import scipy.linalg

from .errors import ChannelParameterError
from .generators import ErrorGeneratorRates, GeneratorLabel, process_from_rates
from .pauli import PauliLike, as_pauli, commutes, dense_matrix, enumerate_paulis
from .superop import ptm_from_kraus, ptm_from_unitary


def _check_unit(name: str, value: float, hi: float = 1.0) -> None:
    if not 0.0 <= value <= hi:
        raise ChannelParameterError(f"{name}={value} outside [0, {hi}]")


def _tensor_power(ptm: np.ndarray, n_qubits: int) -> np.ndarray:
    return reduce(np.kron, [ptm] * n_qubits)


def identity_channel(n_qubits: int = 1) -> np.ndarray:
    return np.eye(4**n_qubits)


def pauli_rotation(pauli: PauliLike, theta: float) -> np.ndarray:
    """PTM of ``exp(-i theta P / 2)``, a rotation by ``theta`` about ``P``."""
    p = as_pauli(pauli)
    return ptm_from_unitary(scipy.linalg.expm(-0.5j * theta * dense_matrix(p)))


def pauli_channel(probabilities: Mapping[PauliLike, float], n_qubits: int) -> np.ndarray:
    """``rho -> sum_P p_P P rho P``; unspecified mass goes to the identity.

    The PTM is diagonal: Q is scaled by ``1 - 2 * sum(p_P for P anticommuting with Q)``.
    """
    probs = [(as_pauli(p), float(prob)) for p, prob in probabilities.items()]
    diag = [
        1.0 - 2.0 * sum(prob for p, prob in probs if not commutes(p, q))
        for q in enumerate_paulis(n_qubits)
    ]
    return np.diag(diag)


def depolarizing(q: float, n_qubits: int = 1) -> np.ndarray:
    """Uniform Pauli channel with total non-identity error probability ``q``.

    ``q = 1 - 1/d^2`` is the completely depolarizing channel.
    """
    _check_unit("q", q)
    paulis = enumerate_paulis(n_qubits)[1:]
    return pauli_channel({p: q / len(paulis) for p in paulis}, n_qubits)


def dephasing(pauli: PauliLike, q: float) -> np.ndarray:
    """``(1 - q) rho + q P rho P``."""
    _check_unit("q", q)
    p = as_pauli(pauli)
    return pauli_channel({p: q}, p.n_qubits)


def amplitude_damping(gamma: float, n_qubits: int = 1) -> np.ndarray:
    """Decay from ``|1>`` to ``|0>`` with probability ``gamma`` on every qubit."""
    _check_unit("gamma", gamma)
    k0 = np.array([[1.0, 0.0], [0.0, np.sqrt(1.0 - gamma)]])
    k1 = np.array([[0.0, np.sqrt(gamma)], [0.0, 0.0]])
    return _tensor_power(ptm_from_kraus([k0, k1]), n_qubits)


def indivisible_xy(p: float, n_qubits: int = 1) -> np.ndarray:
    """``(1 - 2p) rho + p X rho X + p Y rho Y`` on every qubit, ``p <= 1/4``."""
    _check_unit("p", p, 0.25)
    return _tensor_power(pauli_channel({"X": p, "Y": p}, 1), n_qubits)


def random_lindbladian_rates(seed: int, scale: float, n_qubits: int = 1) -> ErrorGeneratorRates:
    """Rates of a random valid Lindbladian, deterministic per seed.

    Hamiltonian rates are Gaussian with ``||h|| ~ scale``. The dissipator uses
    a PSD Kossakowski matrix ``K = W W^dagger`` over non-identity Paulis with
    ``trace(K) ~ scale``; its entries map to rates as ``s_P = K_PP``,
    ``c_PQ = Re K_PQ`` and ``a_PQ = Im K_PQ``.
    """
    if scale < 0:
        raise ChannelParameterError("scale must be non-negative")
    rng = np.random.default_rng(seed)
    paulis = enumerate_paulis(n_qubits)[1:]
    m = len(paulis)
    h = rng.normal(size=m) * scale / np.sqrt(m)
    w = (rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m))) * np.sqrt(scale / (2 * m * m))
    kossakowski = w @ w.conj().T
    rates: dict[GeneratorLabel, float] = {}
    for i, p in enumerate(paulis):
        rates[GeneratorLabel("H", p)] = h[i]
        rates[GeneratorLabel("S", p)] = kossakowski[i, i].real
        for j in range(i + 1, m):
            q = paulis[j]
            rates[GeneratorLabel("C", p, q)] = kossakowski[i, j].real
            rates[GeneratorLabel("A", p, q)] = kossakowski[i, j].imag
    rates = {lb: v for lb, v in rates.items() if v != 0.0}
    return ErrorGeneratorRates(n_qubits, rates)


def make_random_small(seed: int, scale: float, n_qubits: int = 1) -> np.ndarray:
    """CPTP error process ``exp(L)`` for a random Lindbladian ``L``."""
    return process_from_rates(random_lindbladian_rates(seed, scale, n_qubits))


_CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
_CZ = np.diag([1, 1, 1, -1]).astype(complex)

IDEAL_GATES = {
    "I": lambda: identity_channel(1),
    "X": lambda: pauli_rotation("X", np.pi),
    "Y": lambda: pauli_rotation("Y", np.pi),
    "Z": lambda: pauli_rotation("Z", np.pi),
    "Xpi2": lambda: pauli_rotation("X", np.pi / 2),
    "Ypi2": lambda: pauli_rotation("Y", np.pi / 2),
    "Zpi2": lambda: pauli_rotation("Z", np.pi / 2),
    "CNOT": lambda: ptm_from_unitary(_CNOT),
    "CZ": lambda: ptm_from_unitary(_CZ),
}


def ideal_target(name: str) -> np.ndarray:
    try:
        return IDEAL_GATES[name]()
    except KeyError:
        raise ChannelParameterError(
            f"unknown ideal gate {name!r}; choose from {', '.join(IDEAL_GATES)}"
        ) from None


CHANNEL_KINDS = (
    "identity", "pauli_rotation", "depolarizing", "dephasing",
    "amplitude_damping", "indivisible_xy", "random_small",
)


@dataclass
class ChannelSpec:
    kind: str
    n_qubits: int = 1
    params: dict = field(default_factory=dict)


def make_channel(spec: ChannelSpec) -> np.ndarray:
    kind, n, params = spec.kind, spec.n_qubits, dict(spec.params)
    try:
        if kind == "identity":
            return identity_channel(n)
        if kind == "pauli_rotation":
            return pauli_rotation(_sized(params["pauli"], n), float(params["theta"]))
        if kind == "depolarizing":
            return depolarizing(float(params["q"]), n)
        if kind == "dephasing":
            return dephasing(_sized(params["pauli"], n), float(params["q"]))
        if kind == "amplitude_damping":
            return amplitude_damping(float(params["gamma"]), n)
        if kind == "indivisible_xy":
            return indivisible_xy(float(params["p"]), n)
        if kind == "random_small":
            return make_random_small(int(params["seed"]), float(params["scale"]), n)
    except KeyError as exc:
        raise ChannelParameterError(f"channel {kind!r} needs parameter {exc.args[0]!r}") from None
    raise ChannelParameterError(f"unknown channel kind {kind!r}; choose from {', '.join(CHANNEL_KINDS)}")


def _sized(pauli: PauliLike, n_qubits: int):
    p = as_pauli(pauli)
    if p.n_qubits != n_qubits:
        raise ChannelParameterError(f"Pauli {p} does not act on {n_qubits} qubits")
    return p


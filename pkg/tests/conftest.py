"""Independent dense oracles shared by the test modules.

Nothing here goes through the package's chi/Liouville machinery: Pauli
matrices are built from explicit krons and superoperators by evaluating maps
on basis operators directly.
"""
import itertools
from functools import reduce

import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

SINGLE = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def pauli_mat(text: str) -> np.ndarray:
    return reduce(np.kron, [SINGLE[c] for c in text])


def pauli_strings(n: int) -> list[str]:
    return ["".join(t) for t in itertools.product("IXYZ", repeat=n)]


def ptm_of_map(fn, n: int) -> np.ndarray:
    """Normalized-basis PTM of a linear map: G_ij = Tr(P_i fn(P_j)) / d."""
    d = 2**n
    mats = [pauli_mat(s) for s in pauli_strings(n)]
    return np.array([[np.trace(pi @ fn(pj)).real / d for pj in mats] for pi in mats])


def hamiltonian_map(p):
    P = pauli_mat(p)
    return lambda rho: -1j * (P @ rho - rho @ P)


def stochastic_map(p):
    P = pauli_mat(p)
    return lambda rho: P @ rho @ P - rho


def correlation_map(p, q):
    P, Q = pauli_mat(p), pauli_mat(q)
    anti = P @ Q + Q @ P
    return lambda rho: P @ rho @ Q + Q @ rho @ P - 0.5 * (anti @ rho + rho @ anti)


def active_map(p, q):
    P, Q = pauli_mat(p), pauli_mat(q)
    comm = P @ Q - Q @ P
    return lambda rho: 1j * (P @ rho @ Q - Q @ rho @ P + 0.5 * (comm @ rho + rho @ comm))


def oracle_generator(kind: str, p: str, q: str | None = None) -> np.ndarray:
    n = len(p)
    fn = {
        "H": lambda: hamiltonian_map(p),
        "S": lambda: stochastic_map(p),
        "C": lambda: correlation_map(p, q),
        "A": lambda: active_map(p, q),
    }[kind]()
    return ptm_of_map(fn, n)


def unitary_ptm(u: np.ndarray) -> np.ndarray:
    n = int(np.log2(u.shape[0]))
    return ptm_of_map(lambda rho: u @ rho @ u.conj().T, n)


def kraus_ptm(ops, n: int) -> np.ndarray:
    return ptm_of_map(lambda rho: sum(k @ rho @ k.conj().T for k in ops), n)


def random_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    z = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_cptp(rng: np.random.Generator, n: int, n_kraus: int = 3) -> np.ndarray:
    """Random CPTP PTM from a random isometry (Kraus rank ``n_kraus``)."""
    d = 2**n
    z = rng.normal(size=(d * n_kraus, d)) + 1j * rng.normal(size=(d * n_kraus, d))
    v, _ = np.linalg.qr(z)
    ops = [v[k * d:(k + 1) * d] for k in range(n_kraus)]
    return kraus_ptm(ops, n)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)

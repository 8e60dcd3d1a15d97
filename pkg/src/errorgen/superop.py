"""Dense superoperator representations and the conversions between them.

Process matrices are plain real ``numpy`` arrays of shape ``(4**N, 4**N)``
holding the Pauli transfer matrix (PTM) in the *normalized* Pauli basis
``P/sqrt(d)``, so the identity channel is the identity matrix, the top row of
a trace-preserving map is ``[1, 0, ..., 0]`` and its left column is
``[1, 0, ..., 0]^T`` iff the map is unital.

Chi matrices use unnormalized Paulis, ``G[rho] = sum_PQ chi[P, Q] P rho Q``,
so the identity channel has ``chi[I, I] = 1``.

Internally everything is routed through the row-major "Liouville" matrix
(``vec(A rho B) = (A kron B^T) vec(rho)``) and the Jamiolkowski state
``(G kron 1)[|Psi><Psi|]``; the Pauli basis change between them is unitary.
"""
from __future__ import annotations

import warnings
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np
import scipy.linalg

from .errors import (
    DenseLimitError,
    NoRealLogarithmError,
    NonHermitianError,
    SingularMatrixError,
)
from .pauli import DENSE_LIMIT, pauli_vec_basis

CP_TOL = 1e-9
TP_TOL = 1e-9
HERMITIAN_TOL = 1e-10
IMAG_RESIDUE_TOL = 1e-8
SINGULAR_TOL = 1e-12


def n_qubits_of(matrix: np.ndarray) -> int:
    """Qubit count of a ``4**N x 4**N`` superoperator (raises otherwise)."""
    matrix = np.asarray(matrix)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {matrix.shape}")
    dim = matrix.shape[0]
    n = (dim.bit_length() - 1) // 2
    if dim < 4 or 4**n != dim:
        raise ValueError(f"dimension {dim} is not 4**N")
    if n > DENSE_LIMIT:
        raise DenseLimitError(f"{n} qubits exceeds dense limit {DENSE_LIMIT}")
    return n


def _reshuffle(mat: np.ndarray, d: int) -> np.ndarray:
    # [(a,b),(i,j)] <-> [(a,i),(b,j)]; an involution
    return mat.reshape(d, d, d, d).transpose(0, 2, 1, 3).reshape(d * d, d * d)


def liouville_from_ptm(ptm: np.ndarray) -> np.ndarray:
    basis = pauli_vec_basis(n_qubits_of(ptm))
    return basis @ ptm @ basis.conj().T


def ptm_from_liouville(liou: np.ndarray, check_real: bool = True) -> np.ndarray:
    basis = pauli_vec_basis(n_qubits_of(liou))
    ptm = basis.conj().T @ liou @ basis
    if check_real:
        scale = max(1.0, float(np.max(np.abs(ptm))))
        if np.max(np.abs(ptm.imag)) > HERMITIAN_TOL * scale:
            raise NonHermitianError("superoperator is not Hermiticity preserving")
        return np.ascontiguousarray(ptm.real)
    return ptm


def jamiolkowski(op: np.ndarray) -> np.ndarray:
    """Jamiolkowski state ``(op kron 1)[|Psi><Psi|]`` of a process or generator.

    The result acts on system (first factor) times ancilla, has dimension
    ``d^2`` and equals ``|Psi><Psi|`` for the identity channel.
    """
    op = np.asarray(op)
    d = 2 ** n_qubits_of(op)
    return _reshuffle(liouville_from_ptm(op), d) / d


def ptm_from_jamiolkowski(rho_j: np.ndarray) -> np.ndarray:
    d = 2 ** n_qubits_of(rho_j)
    return ptm_from_liouville(_reshuffle(np.asarray(rho_j, dtype=complex), d) * d)


def chi_from_ptm(ptm: np.ndarray) -> np.ndarray:
    """Chi (Choi-sum) matrix of a PTM, indexed by canonical Pauli order."""
    basis = pauli_vec_basis(n_qubits_of(ptm))
    return basis.conj().T @ jamiolkowski(ptm) @ basis


def ptm_from_chi(chi: np.ndarray, atol: float = HERMITIAN_TOL) -> np.ndarray:
    chi = np.asarray(chi, dtype=complex)
    basis = pauli_vec_basis(n_qubits_of(chi))
    if np.max(np.abs(chi - chi.conj().T), initial=0.0) > atol:
        raise NonHermitianError("chi matrix is not Hermitian")
    return ptm_from_jamiolkowski(basis @ chi @ basis.conj().T)


def ptm_from_unitary(unitary: np.ndarray) -> np.ndarray:
    """PTM of ``rho -> U rho U^dagger``."""
    unitary = np.asarray(unitary, dtype=complex)
    return ptm_from_liouville(np.kron(unitary, unitary.conj()))


def ptm_from_kraus(kraus_ops: Sequence[np.ndarray]) -> np.ndarray:
    """PTM of ``rho -> sum_k K rho K^dagger``."""
    liou = sum(np.kron(k, np.conj(k)) for k in map(np.asarray, kraus_ops))
    return ptm_from_liouville(liou)


def apply_to_operator(ptm: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """Apply a PTM to a ``d x d`` operator, returning an operator."""
    d = np.asarray(rho).shape[0]
    liou = liouville_from_ptm(ptm)
    return (liou @ np.asarray(rho, dtype=complex).reshape(-1)).reshape(d, d)


def hs_inner(a: np.ndarray, b: np.ndarray) -> float:
    """Hilbert-Schmidt inner product ``Tr(a^T b)`` of two real superoperators."""
    return float(np.vdot(np.asarray(a), np.asarray(b)).real)


@dataclass
class ProcessDiagnostics:
    is_tp: bool
    is_unital: bool
    is_cp: bool
    min_choi_eigenvalue: float
    distance_to_identity: float

    @property
    def is_cptp(self) -> bool:
        return self.is_tp and self.is_cp

    def to_dict(self) -> dict:
        return asdict(self)


def min_choi_eigenvalue(ptm: np.ndarray) -> float:
    rho_j = jamiolkowski(ptm)
    return float(np.linalg.eigvalsh((rho_j + rho_j.conj().T) / 2)[0])


def check_process(ptm: np.ndarray, tol: float = TP_TOL, cp_tol: float = CP_TOL) -> ProcessDiagnostics:
    """TP / unital / CP flags for a PTM; never raises on unphysical input.

    ``distance_to_identity`` is the Frobenius norm of ``ptm - 1``.
    """
    ptm = np.asarray(ptm, dtype=float)
    dim = ptm.shape[0]
    e0 = np.zeros(dim)
    e0[0] = 1.0
    min_eig = min_choi_eigenvalue(ptm)
    return ProcessDiagnostics(
        is_tp=bool(np.max(np.abs(ptm[0] - e0)) <= tol),
        is_unital=bool(np.max(np.abs(ptm[:, 0] - e0)) <= tol),
        is_cp=bool(min_eig >= -cp_tol),
        min_choi_eigenvalue=min_eig,
        distance_to_identity=float(np.linalg.norm(ptm - np.eye(dim))),
    )


def is_cp(ptm: np.ndarray, cp_tol: float = CP_TOL) -> bool:
    return min_choi_eigenvalue(ptm) >= -cp_tol


def matrix_exp(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"matrix_exp needs a square matrix, got shape {a.shape}")
    return scipy.linalg.expm(a)


NEG_AXIS_TOL = 1e-9


def _paired_negative_log(a: np.ndarray, imag_tol: float) -> np.ndarray | None:
    """Real logarithm when every negative eigenvalue has even multiplicity.

    Each negative eigenspace is split into 2-planes carrying the generator
    ``ln|lambda| + pi J`` (a half-turn), which is real but not principal.
    Returns None for unpaired or defective spectra.
    """
    w, v = np.linalg.eig(a)
    if np.linalg.cond(v) > 1e8:
        return None
    vinv = np.linalg.inv(v)
    scale = max(1.0, float(np.max(np.abs(w))))
    neg = (np.abs(w.imag) <= NEG_AXIS_TOL * scale) & (w.real < 0)
    out = np.zeros(a.shape)
    rest = ~neg
    part = (v[:, rest] * np.log(w[rest])) @ vinv[rest]
    if np.max(np.abs(part.imag), initial=0.0) > imag_tol:
        return None
    out += part.real
    remaining = list(np.flatnonzero(neg))
    while remaining:
        lam = w[remaining[0]].real
        group = [i for i in remaining if abs(w[i].real - lam) <= NEG_AXIS_TOL * scale]
        remaining = [i for i in remaining if i not in group]
        m = len(group)
        if m % 2:
            return None
        proj = (v[:, group] @ vinv[group]).real
        basis, _, _ = np.linalg.svd(proj)
        basis = basis[:, :m]
        coords = basis.T @ proj
        half_turn = np.kron(np.eye(m // 2), np.array([[0.0, np.pi], [-np.pi, 0.0]]))
        out += basis @ (np.log(-lam) * np.eye(m) + half_turn) @ coords
    return out


def matrix_log(a: np.ndarray, imag_tol: float = IMAG_RESIDUE_TOL) -> np.ndarray:
    """Real logarithm of a real square matrix.

    The principal branch is used whenever it is real. If it is not because
    negative eigenvalues come in pairs, a real (non-principal) logarithm is
    built instead. Raises :class:`SingularMatrixError` for (numerically)
    singular input and :class:`NoRealLogarithmError` when eigenvalues on the
    negative real axis are unpaired, so no real logarithm exists.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"matrix_log needs a square matrix, got shape {a.shape}")
    eigs = np.linalg.eigvals(a)
    if np.min(np.abs(eigs)) <= SINGULAR_TOL * max(1.0, float(np.max(np.abs(eigs)))):
        raise SingularMatrixError("matrix is singular; logarithm undefined")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        log_a, _ = scipy.linalg.logm(a, disp=False)
    log_a = np.asarray(log_a)
    if np.iscomplexobj(log_a):
        residue = float(np.max(np.abs(log_a.imag)))
        if residue > imag_tol:
            paired = _paired_negative_log(a, imag_tol)
            if paired is not None:
                return paired
            negative = eigs[(np.abs(eigs.imag) < 1e-9) & (eigs.real < 0)].real
            raise NoRealLogarithmError(
                f"no real logarithm (principal-branch imaginary residue {residue:.3g}; "
                f"unpaired negative real eigenvalues {np.round(np.sort(negative), 12).tolist()})"
            )
        log_a = log_a.real
    return np.ascontiguousarray(log_a)

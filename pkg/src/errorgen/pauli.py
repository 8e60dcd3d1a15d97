"""Exact N-qubit Pauli arithmetic in symplectic (x, z) bit form.

Qubit ``k`` is stored in bit ``k`` of ``x_bits``/``z_bits``. Text and index
conventions put qubit 0 first: ``"XZ"`` is X on qubit 0 and Z on qubit 1, and
the base-4 index has qubit 0 as its most significant digit with I<X<Y<Z.
Phases are tracked as powers of ``i`` (an element of Z4), never as floats.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Optional, Union

import numpy as np

from .errors import DenseLimitError, PauliParseError, QubitCountMismatch

DENSE_LIMIT = 5

LETTERS = "IXYZ"
# letter index -> (x, z)
_BITS = ((0, 0), (1, 0), (1, 1), (0, 1))
_LETTER_OF_BITS = {bits: i for i, bits in enumerate(_BITS)}

# _MUL[a][b] = (letter, k) with sigma_a sigma_b = i**k sigma_letter
_MUL = [[(0, 0)] * 4 for _ in range(4)]
for _a in range(4):
    for _b in range(4):
        _c = _LETTER_OF_BITS[(_BITS[_a][0] ^ _BITS[_b][0], _BITS[_a][1] ^ _BITS[_b][1])]
        if _a == 0 or _b == 0 or _a == _b:
            _k = 0
        elif (_b - _a) % 3 == 1:  # XY, YZ, ZX
            _k = 1
        else:
            _k = 3
        _MUL[_a][_b] = (_c, _k)

_SINGLE = (
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)

_PHASES = (1, 1j, -1, -1j)


@dataclass(frozen=True, order=False)
class PauliString:
    n_qubits: int
    x_bits: int = 0
    z_bits: int = 0

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError("n_qubits must be positive")
        limit = 1 << self.n_qubits
        if not (0 <= self.x_bits < limit and 0 <= self.z_bits < limit):
            raise ValueError("bitmask wider than n_qubits")

    @classmethod
    def identity(cls, n_qubits: int) -> "PauliString":
        return cls(n_qubits)

    @classmethod
    def from_letters(cls, letters: Iterable[int]) -> "PauliString":
        letters = list(letters)
        x = z = 0
        for k, c in enumerate(letters):
            bx, bz = _BITS[c]
            x |= bx << k
            z |= bz << k
        return cls(len(letters), x, z)

    @classmethod
    def parse(cls, text: str) -> "PauliString":
        """Parse ``"IXYZ"``-style text; length fixes the qubit count."""
        text = text.strip().upper()
        if not text or any(c not in LETTERS for c in text):
            raise PauliParseError(f"invalid Pauli string {text!r}")
        return cls.from_letters(LETTERS.index(c) for c in text)

    @classmethod
    def from_index(cls, index: int, n_qubits: int) -> "PauliString":
        if not 0 <= index < 4**n_qubits:
            raise ValueError(f"index {index} out of range for {n_qubits} qubits")
        digits = []
        for _ in range(n_qubits):
            index, r = divmod(index, 4)
            digits.append(r)
        return cls.from_letters(reversed(digits))

    def letter(self, qubit: int) -> int:
        return _LETTER_OF_BITS[((self.x_bits >> qubit) & 1, (self.z_bits >> qubit) & 1)]

    def letters(self) -> tuple[int, ...]:
        return tuple(self.letter(k) for k in range(self.n_qubits))

    @property
    def index(self) -> int:
        idx = 0
        for c in self.letters():
            idx = 4 * idx + c
        return idx

    @property
    def support_mask(self) -> int:
        return self.x_bits | self.z_bits

    @property
    def support(self) -> frozenset[int]:
        mask = self.support_mask
        return frozenset(k for k in range(self.n_qubits) if (mask >> k) & 1)

    @property
    def weight(self) -> int:
        return bin(self.support_mask).count("1")

    @property
    def is_identity(self) -> bool:
        return self.x_bits == 0 and self.z_bits == 0

    def __str__(self) -> str:
        return "".join(LETTERS[c] for c in self.letters())

    def __repr__(self) -> str:
        return f"PauliString({str(self)!r})"

    def __lt__(self, other: "PauliString") -> bool:
        return (self.n_qubits, self.index) < (other.n_qubits, other.index)

    def __mul__(self, other: "PauliString") -> "PhasedPauli":
        return pauli_product(self, other)


@dataclass(frozen=True)
class PhasedPauli:
    """``i**phase_exp`` times a Pauli string."""

    pauli: PauliString
    phase_exp: int = 0

    def __post_init__(self):
        object.__setattr__(self, "phase_exp", self.phase_exp % 4)

    @property
    def phase(self) -> complex:
        return _PHASES[self.phase_exp]

    def __mul__(self, other: "PhasedPauli") -> "PhasedPauli":
        prod = pauli_product(self.pauli, other.pauli)
        return PhasedPauli(prod.pauli, self.phase_exp + other.phase_exp + prod.phase_exp)

    def __str__(self) -> str:
        return f"{['+', '+i', '-', '-i'][self.phase_exp]}{self.pauli}"


PauliLike = Union[PauliString, str]


def as_pauli(p: PauliLike) -> PauliString:
    return PauliString.parse(p) if isinstance(p, str) else p


def _check_same_size(a: PauliString, b: PauliString) -> None:
    if a.n_qubits != b.n_qubits:
        raise QubitCountMismatch(f"{a.n_qubits} vs {b.n_qubits} qubits")


def pauli_product(a: PauliLike, b: PauliLike) -> PhasedPauli:
    """Return ``c`` and phase with ``a @ b == phase * c`` as matrices."""
    a, b = as_pauli(a), as_pauli(b)
    _check_same_size(a, b)
    k = 0
    for q in range(a.n_qubits):
        _, kq = _MUL[a.letter(q)][b.letter(q)]
        k += kq
    return PhasedPauli(PauliString(a.n_qubits, a.x_bits ^ b.x_bits, a.z_bits ^ b.z_bits), k)


def commutes(a: PauliLike, b: PauliLike) -> bool:
    a, b = as_pauli(a), as_pauli(b)
    _check_same_size(a, b)
    form = bin(a.x_bits & b.z_bits).count("1") + bin(a.z_bits & b.x_bits).count("1")
    return form % 2 == 0


def _weights_of(weight_filter, n_qubits: int) -> list[int]:
    if weight_filter is None:
        return list(range(n_qubits + 1))
    if isinstance(weight_filter, int):
        weight_filter = [weight_filter]
    return sorted({w for w in weight_filter if 0 <= w <= n_qubits})


def iter_paulis_with_support(n_qubits: int, support: Iterable[int]) -> Iterator[PauliString]:
    """Paulis whose support is exactly ``support`` (3**|support| of them)."""
    qubits = sorted(support)
    for combo in itertools.product((1, 2, 3), repeat=len(qubits)):
        letters = [0] * n_qubits
        for q, c in zip(qubits, combo):
            letters[q] = c
        yield PauliString.from_letters(letters)


def enumerate_paulis(
    n_qubits: int,
    weight_filter: Optional[Union[int, Iterable[int]]] = None,
    support_filter: Optional[Iterable[int]] = None,
) -> list[PauliString]:
    """All N-qubit Paulis in canonical index order, optionally filtered.

    ``weight_filter`` is an int or a collection of allowed weights.
    ``support_filter`` keeps only Paulis whose support equals that qubit set.
    """
    if n_qubits < 1:
        raise ValueError("n_qubits must be positive")
    if support_filter is not None:
        support = frozenset(support_filter)
        if any(not 0 <= q < n_qubits for q in support):
            raise ValueError(f"support {sorted(support)} outside {n_qubits} qubits")
        if weight_filter is not None and len(support) not in _weights_of(weight_filter, n_qubits):
            return []
        out = list(iter_paulis_with_support(n_qubits, support))
    elif weight_filter is None:
        out = [PauliString.from_index(i, n_qubits) for i in range(4**n_qubits)]
    else:
        out = []
        for w in _weights_of(weight_filter, n_qubits):
            for qubits in itertools.combinations(range(n_qubits), w):
                out.extend(iter_paulis_with_support(n_qubits, qubits))
    return sorted(out, key=lambda p: p.index)


def dense_matrix(p: PauliLike, dense_limit: int = DENSE_LIMIT) -> np.ndarray:
    p = as_pauli(p)
    if p.n_qubits > dense_limit:
        raise DenseLimitError(f"{p.n_qubits} qubits exceeds dense limit {dense_limit}")
    return _dense_cached(p.n_qubits, p.x_bits, p.z_bits).copy()


@lru_cache(maxsize=4096)
def _dense_cached(n: int, x: int, z: int) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for c in PauliString(n, x, z).letters():
        out = np.kron(out, _SINGLE[c])
    return out


@lru_cache(maxsize=8)
def pauli_vec_basis(n_qubits: int) -> np.ndarray:
    """Unitary ``d^2 x d^2`` matrix whose column ``j`` is vec(P_j)/sqrt(d).

    vec is row-major flattening. Columns follow the canonical Pauli order.
    """
    if n_qubits > DENSE_LIMIT:
        raise DenseLimitError(f"{n_qubits} qubits exceeds dense limit {DENSE_LIMIT}")
    d = 2**n_qubits
    basis = np.empty((d * d, d * d), dtype=complex)
    for j in range(d * d):
        p = PauliString.from_index(j, n_qubits)
        basis[:, j] = _dense_cached(n_qubits, p.x_bits, p.z_bits).reshape(-1)
    basis /= np.sqrt(d)
    basis.setflags(write=False)
    return basis

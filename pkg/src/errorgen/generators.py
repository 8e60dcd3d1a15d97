"""Elementary error generators, their duals, and rate decomposition.

Every generator lives in the space of real trace-preserving generators and is
built from its Choi-sum (chi) form in unnormalized Paulis:

* ``H_P[rho] = -i(P rho - rho P)``
* ``S_P[rho] = P rho P - rho``
* ``C_PQ[rho] = P rho Q + Q rho P - 1/2 {{P, Q}, rho}``
* ``A_PQ[rho] = i(P rho Q - Q rho P + 1/2 {[P, Q], rho})``

The dual of each generator is a pure Choi-unit combination that is *not* TP.
Its overall constant is fixed by calibration against the elementary
generator, which works out to ``1/(2 d^2)`` for H and A duals and ``1/d^2``
(S) and ``1/(2 d^2)`` (C) for the symmetric ones, in the Hilbert-Schmidt
pairing ``Tr(dual^T L)`` of normalized-basis PTMs.

Sign of the active rate for amplitude damping: with ``A_XY`` defined as
above, ``A_XY[1] = -4Z`` shifts the Bloch sphere toward ``-Z``. Decay toward
``|0>`` (the ``+Z`` pole) therefore decomposes as
``lam * (S_X + S_Y - A_XY)`` with ``lam = -ln(1 - gamma)/4``, i.e. ``a_XY`` is
negative.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Optional, Union

import numpy as np

from .errors import (
    InvalidLabelError,
    NonTPGeneratorError,
    QubitCountMismatch,
    SingularMatrixError,
)
from .pauli import PauliLike, PauliString, as_pauli, commutes, enumerate_paulis, pauli_product
from .superop import matrix_exp, matrix_log, n_qubits_of, ptm_from_chi

KINDS = ("H", "S", "C", "A")
LOGARITHM = "logarithm"
DIFFERENCE = "difference"
_CONVENTION_ALIASES = {"log": LOGARITHM, "logarithm": LOGARITHM, "diff": DIFFERENCE, "difference": DIFFERENCE}

REPORT_FLOOR = 1e-14
TP_ROW_TOL = 1e-9


def normalize_convention(name: str) -> str:
    try:
        return _CONVENTION_ALIASES[name.lower()]
    except KeyError:
        raise ValueError(f"unknown convention {name!r}; use 'logarithm' or 'difference'") from None


@dataclass(frozen=True)
class GeneratorLabel:
    kind: str
    p: PauliString
    q: Optional[PauliString] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidLabelError(f"unknown generator kind {self.kind!r}")
        object.__setattr__(self, "p", as_pauli(self.p))
        if self.q is not None:
            object.__setattr__(self, "q", as_pauli(self.q))
        if self.p.is_identity:
            raise InvalidLabelError("generator labels cannot use the identity Pauli")
        if self.kind in ("H", "S"):
            if self.q is not None:
                raise InvalidLabelError(f"{self.kind} generators take a single Pauli")
            return
        if self.q is None:
            raise InvalidLabelError(f"{self.kind} generators need a Pauli pair")
        if self.q.is_identity:
            raise InvalidLabelError("generator labels cannot use the identity Pauli")
        if self.q.n_qubits != self.p.n_qubits:
            raise QubitCountMismatch("Pauli pair has mismatched qubit counts")
        if not self.p.index < self.q.index:
            raise InvalidLabelError(
                f"non-canonical pair ({self.p},{self.q}); need index(P) < index(Q)"
            )

    @classmethod
    def parse(cls, text: str) -> "GeneratorLabel":
        """Parse ``"H:Y"``, ``"C:IX,ZX"``, or ``"A(X,Y)"``."""
        m = re.fullmatch(r"\s*([HSCAhsca])\s*[:(]\s*([IXYZixyz]+)\s*(?:,\s*([IXYZixyz]+)\s*)?\)?\s*", text)
        if not m:
            raise InvalidLabelError(f"cannot parse generator label {text!r}")
        kind, p, q = m.group(1).upper(), m.group(2), m.group(3)
        return cls(kind, PauliString.parse(p), PauliString.parse(q) if q else None)

    @property
    def n_qubits(self) -> int:
        return self.p.n_qubits

    @property
    def support(self) -> frozenset[int]:
        if self.q is None:
            return self.p.support
        return self.p.support | self.q.support

    @property
    def weight(self) -> int:
        return len(self.support)

    @property
    def sort_key(self) -> tuple[int, int, int]:
        return (KINDS.index(self.kind), self.p.index, -1 if self.q is None else self.q.index)

    def __lt__(self, other: "GeneratorLabel") -> bool:
        return self.sort_key < other.sort_key

    def __str__(self) -> str:
        if self.q is None:
            return f"{self.kind}({self.p})"
        return f"{self.kind}({self.p},{self.q})"

    def __repr__(self) -> str:
        return f"GeneratorLabel({str(self)!r})"

    def to_json(self) -> dict:
        out = {"kind": self.kind, "p": str(self.p)}
        if self.q is not None:
            out["q"] = str(self.q)
        return out

    @classmethod
    def from_json(cls, obj: Mapping) -> "GeneratorLabel":
        q = obj.get("q")
        return cls(obj["kind"], PauliString.parse(obj["p"]), PauliString.parse(q) if q else None)


LabelLike = Union[GeneratorLabel, str]


def as_label(label: LabelLike) -> GeneratorLabel:
    return GeneratorLabel.parse(label) if isinstance(label, str) else label


def iter_labels(n_qubits: int, kinds: Iterable[str] = KINDS) -> Iterator[GeneratorLabel]:
    """All canonical labels in canonical order (sector, then Pauli indices)."""
    paulis = enumerate_paulis(n_qubits)[1:]
    for kind in KINDS:
        if kind not in kinds:
            continue
        if kind in ("H", "S"):
            for p in paulis:
                yield GeneratorLabel(kind, p)
        else:
            for p, q in itertools.combinations(paulis, 2):
                yield GeneratorLabel(kind, p, q)


@lru_cache(maxsize=8)
def all_labels(n_qubits: int) -> tuple[GeneratorLabel, ...]:
    return tuple(iter_labels(n_qubits))


def sector_dimension(kind: str, n_qubits: int) -> int:
    m = 4**n_qubits - 1
    return m if kind in ("H", "S") else m * (m - 1) // 2


def _chi_entries(label: GeneratorLabel) -> list[tuple[int, int, complex]]:
    """Choi-sum entries ``(row, col, value)`` of an elementary generator."""
    p, q = label.p, label.q
    if label.kind == "H":
        return [(p.index, 0, -1j), (0, p.index, 1j)]
    if label.kind == "S":
        return [(p.index, p.index, 1.0), (0, 0, -1.0)]
    entries: list[tuple[int, int, complex]]
    prod = pauli_product(p, q)
    r = prod.pauli.index
    if label.kind == "C":
        entries = [(p.index, q.index, 1.0), (q.index, p.index, 1.0)]
        if commutes(p, q):
            # -1/2 {{P,Q}, rho} = -phi (R rho + rho R) with PQ = phi R, phi = +-1
            entries += [(r, 0, -prod.phase), (0, r, -prod.phase)]
        return entries
    entries = [(p.index, q.index, 1j), (q.index, p.index, -1j)]
    if not commutes(p, q):
        # i/2 {[P,Q], rho} = i phi (R rho + rho R) with PQ = phi R, phi = +-i
        entries += [(r, 0, 1j * prod.phase), (0, r, 1j * prod.phase)]
    return entries


def _dual_chi_entries(label: GeneratorLabel) -> list[tuple[int, int, complex]]:
    p, q = label.p, label.q
    if label.kind == "H":
        return [(p.index, 0, -1j), (0, p.index, 1j)]
    if label.kind == "S":
        return [(p.index, p.index, 1.0)]
    if label.kind == "C":
        return [(p.index, q.index, 0.5), (q.index, p.index, 0.5)]
    return [(p.index, q.index, 1j), (q.index, p.index, -1j)]


def _chi_to_ptm(entries, n_qubits: int) -> np.ndarray:
    dim = 4**n_qubits
    chi = np.zeros((dim, dim), dtype=complex)
    for i, j, v in entries:
        chi[i, j] += v
    return ptm_from_chi(chi)


def _resolve(label: LabelLike, n_qubits: Optional[int]) -> GeneratorLabel:
    label = as_label(label)
    if n_qubits is not None and label.n_qubits != n_qubits:
        raise QubitCountMismatch(f"label {label} is on {label.n_qubits} qubits, not {n_qubits}")
    return label


def elementary_generator(label: LabelLike, n_qubits: Optional[int] = None) -> np.ndarray:
    """Normalized-basis PTM of one elementary generator."""
    label = _resolve(label, n_qubits)
    return _elementary_cached(label).copy()


@lru_cache(maxsize=None)
def _elementary_cached(label: GeneratorLabel) -> np.ndarray:
    out = _chi_to_ptm(_chi_entries(label), label.n_qubits)
    out.setflags(write=False)
    return out


def dual_generator(label: LabelLike, n_qubits: Optional[int] = None) -> np.ndarray:
    """Dual superoperator whose HS pairing with ``label``'s generator is 1."""
    label = _resolve(label, n_qubits)
    return _dual_cached(label).copy()


@lru_cache(maxsize=None)
def _dual_cached(label: GeneratorLabel) -> np.ndarray:
    d2 = 4**label.n_qubits
    raw = _chi_to_ptm(_dual_chi_entries(label), label.n_qubits) / d2
    raw /= dual_calibration(label)
    raw.setflags(write=False)
    return raw


@lru_cache(maxsize=None)
def dual_calibration(label: GeneratorLabel) -> float:
    """Pairing of the ``1/d^2``-prefactored dual with its own generator.

    Exactly 2 for H and A labels and 1 for S and C labels.
    """
    d2 = 4**label.n_qubits
    raw = _chi_to_ptm(_dual_chi_entries(label), label.n_qubits) / d2
    return float(np.vdot(raw, _elementary_cached(label)).real)


@lru_cache(maxsize=4)
def _dual_stack(n_qubits: int) -> np.ndarray:
    labels = all_labels(n_qubits)
    stack = np.empty((len(labels), 16**n_qubits))
    for i, label in enumerate(labels):
        stack[i] = _dual_cached(label).reshape(-1)
    stack.setflags(write=False)
    return stack


def pairing_matrix(n_qubits: int, labels: Optional[Iterable[GeneratorLabel]] = None) -> np.ndarray:
    """``M[i, j] = <dual_i, elementary_j>``; the identity when calibrated."""
    labels = list(all_labels(n_qubits) if labels is None else labels)
    duals = np.array([_dual_cached(lb).reshape(-1) for lb in labels])
    elems = np.array([_elementary_cached(lb).reshape(-1) for lb in labels])
    return duals @ elems.T


@dataclass
class ErrorGeneratorRates:
    """Sparse coordinates of a generator in the elementary basis."""

    n_qubits: int
    rates: dict[GeneratorLabel, float] = field(default_factory=dict)
    convention: str = LOGARITHM

    def __post_init__(self):
        self.convention = normalize_convention(self.convention)
        clean = {}
        for label, value in self.rates.items():
            label = as_label(label)
            if label.n_qubits != self.n_qubits:
                raise QubitCountMismatch(f"label {label} does not act on {self.n_qubits} qubits")
            clean[label] = float(value)
        self.rates = clean

    def __len__(self) -> int:
        return len(self.rates)

    def __iter__(self):
        return iter(sorted(self.rates))

    def __contains__(self, label) -> bool:
        return as_label(label) in self.rates

    def __getitem__(self, label: LabelLike) -> float:
        return self.rates.get(as_label(label), 0.0)

    def items(self) -> list[tuple[GeneratorLabel, float]]:
        return sorted(self.rates.items())

    def labels(self) -> list[GeneratorLabel]:
        return sorted(self.rates)

    def with_rates(self, rates: Mapping[GeneratorLabel, float]) -> "ErrorGeneratorRates":
        return ErrorGeneratorRates(self.n_qubits, dict(rates), self.convention)

    def pruned(self, floor: float = REPORT_FLOOR) -> "ErrorGeneratorRates":
        return self.with_rates({k: v for k, v in self.rates.items() if abs(v) >= floor and v != 0.0})

    def sector(self, kind: str) -> "ErrorGeneratorRates":
        return self.with_rates({k: v for k, v in self.rates.items() if k.kind == kind})

    def norm(self) -> float:
        return float(np.sqrt(sum(v * v for v in self.rates.values())))

    def __add__(self, other: "ErrorGeneratorRates") -> "ErrorGeneratorRates":
        if other.n_qubits != self.n_qubits:
            raise QubitCountMismatch("cannot add rates on different qubit counts")
        out = dict(self.rates)
        for k, v in other.rates.items():
            out[k] = out.get(k, 0.0) + v
        return self.with_rates(out)

    def __sub__(self, other: "ErrorGeneratorRates") -> "ErrorGeneratorRates":
        return self + other.with_rates({k: -v for k, v in other.rates.items()})

    def scaled(self, factor: float) -> "ErrorGeneratorRates":
        return self.with_rates({k: factor * v for k, v in self.rates.items()})

    def to_vector(self, labels: Optional[Iterable[GeneratorLabel]] = None) -> np.ndarray:
        labels = all_labels(self.n_qubits) if labels is None else labels
        return np.array([self.rates.get(lb, 0.0) for lb in labels])

    @classmethod
    def from_vector(
        cls, n_qubits: int, vector, labels: Optional[Iterable[GeneratorLabel]] = None,
        convention: str = LOGARITHM, floor: float = 0.0,
    ) -> "ErrorGeneratorRates":
        labels = all_labels(n_qubits) if labels is None else labels
        rates = {lb: float(v) for lb, v in zip(labels, vector) if v != 0.0 and abs(v) >= floor}
        return cls(n_qubits, rates, convention)

    def to_json(self) -> dict:
        return {
            "qubits": self.n_qubits,
            "convention": self.convention,
            "rates": [{**lb.to_json(), "rate": v} for lb, v in self.items()],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "ErrorGeneratorRates":
        n = int(obj["qubits"])
        rates: dict[GeneratorLabel, float] = {}
        for entry in obj.get("rates", []):
            label = GeneratorLabel.from_json(entry)
            if label in rates:
                raise InvalidLabelError(f"duplicate label {label} in rates file")
            rates[label] = float(entry["rate"])
        return cls(n, rates, obj.get("convention", LOGARITHM))


def extract_error_generator(g: np.ndarray, target: np.ndarray, convention: str = LOGARITHM) -> np.ndarray:
    """Post-gate error generator of ``g`` relative to ``target``.

    ``logarithm`` returns ``log(g target^-1)``; ``difference`` returns
    ``g target^-1 - 1``.
    """
    convention = normalize_convention(convention)
    g = np.asarray(g, dtype=float)
    target = np.asarray(target, dtype=float)
    if n_qubits_of(g) != n_qubits_of(target):
        raise QubitCountMismatch("gate and target act on different qubit counts")
    if np.linalg.cond(target) > 1e12:
        raise SingularMatrixError("target process is singular")
    error_process = np.linalg.solve(target.T, g.T).T
    if convention == DIFFERENCE:
        return error_process - np.eye(len(g))
    return matrix_log(error_process)


def decompose(
    generator: np.ndarray, convention: str = LOGARITHM, floor: float = REPORT_FLOOR,
) -> ErrorGeneratorRates:
    """Rates of every elementary generator in ``generator``.

    Rates with magnitude below ``floor`` are dropped; pass ``floor=0`` to keep
    every nonzero coordinate.
    """
    generator = np.asarray(generator, dtype=float)
    n = n_qubits_of(generator)
    top = np.max(np.abs(generator[0]))
    if top > TP_ROW_TOL:
        raise NonTPGeneratorError(f"generator top row is nonzero (max |entry| {top:.3g})")
    vector = _dual_stack(n) @ generator.reshape(-1)
    return ErrorGeneratorRates.from_vector(n, vector, convention=convention, floor=floor)


def reconstruct(rates: ErrorGeneratorRates) -> np.ndarray:
    """Generator matrix ``sum_i r_i * elementary_i``."""
    dim = 4**rates.n_qubits
    out = np.zeros((dim, dim))
    for label, value in rates.rates.items():
        out += value * _elementary_cached(label)
    return out


def process_from_rates(rates: ErrorGeneratorRates, target: Optional[np.ndarray] = None) -> np.ndarray:
    """Process ``exp(L) target`` (logarithm) or ``(1 + L) target`` (difference)."""
    gen = reconstruct(rates)
    error_process = np.eye(len(gen)) + gen if rates.convention == DIFFERENCE else matrix_exp(gen)
    return error_process if target is None else error_process @ np.asarray(target, dtype=float)


def sector_split(rates: ErrorGeneratorRates) -> dict[str, ErrorGeneratorRates]:
    return {kind: rates.sector(kind) for kind in KINDS}


def sector_projections(rates: ErrorGeneratorRates) -> dict[str, np.ndarray]:
    """Generator matrices ``L_H, L_S, L_C, L_A`` (they sum to the full generator)."""
    return {kind: reconstruct(part) for kind, part in sector_split(rates).items()}


@dataclass
class StochasticTensor:
    """Symmetric matrix with ``s_P`` on the diagonal and ``c_PQ`` off it."""

    paulis: list[PauliString]
    matrix: np.ndarray

    def min_eigenvalue(self) -> float:
        if not self.paulis:
            return 0.0
        return float(np.linalg.eigvalsh(self.matrix)[0])

    def is_psd(self, tol: float = 1e-10) -> bool:
        return self.min_eigenvalue() >= -tol


def stochastic_tensor(rates: ErrorGeneratorRates, paulis: Optional[list[PauliLike]] = None) -> StochasticTensor:
    """Tensor over the given Paulis, or over those touched by S/C rates.

    Omitted Paulis have all-zero rows, which cannot change the PSD verdict.
    """
    if paulis is None:
        touched = set()
        for label in rates.rates:
            if label.kind in ("S", "C"):
                touched.add(label.p)
                if label.q is not None:
                    touched.add(label.q)
        paulis = sorted(touched, key=lambda p: p.index)
    else:
        paulis = [as_pauli(p) for p in paulis]
    pos = {p: i for i, p in enumerate(paulis)}
    mat = np.zeros((len(paulis), len(paulis)))
    for label, value in rates.rates.items():
        if label.kind == "S" and label.p in pos:
            mat[pos[label.p], pos[label.p]] = value
        elif label.kind == "C" and label.p in pos and label.q in pos:
            i, j = pos[label.p], pos[label.q]
            mat[i, j] = mat[j, i] = value
    return StochasticTensor(list(paulis), mat)


@dataclass
class ConstraintViolation:
    label: GeneratorLabel
    value: float
    bound: float

    def to_json(self) -> dict:
        return {"label": str(self.label), "value": self.value, "bound": self.bound}


@dataclass
class StochasticConstraints:
    tensor_psd: bool
    min_eigenvalue: float
    violations: list[ConstraintViolation]
    negative_rates: list[GeneratorLabel]

    @property
    def ok(self) -> bool:
        return self.tensor_psd and not self.violations

    def to_json(self) -> dict:
        return {
            "tensor_psd": self.tensor_psd,
            "min_eigenvalue": self.min_eigenvalue,
            "violations": [v.to_json() for v in self.violations],
            "negative_rates": [str(lb) for lb in self.negative_rates],
        }


def stochastic_constraints(rates: ErrorGeneratorRates, tol: float = 1e-10) -> StochasticConstraints:
    """Necessary conditions for the rates to form a valid Lindbladian.

    Checks PSD-ness of the stochastic tensor and ``|c_PQ|, |a_PQ| <=
    sqrt(s_P s_Q)``. Negative ``s_P`` rates are listed separately; under the
    logarithm convention they flag processes that are not infinitely divisible.
    """
    tensor = stochastic_tensor(rates)
    min_eig = tensor.min_eigenvalue()
    violations = []
    for label, value in rates.items():
        if label.kind not in ("C", "A"):
            continue
        bound = float(np.sqrt(max(rates[GeneratorLabel("S", label.p)], 0.0)
                              * max(rates[GeneratorLabel("S", label.q)], 0.0)))
        if abs(value) > bound + tol:
            violations.append(ConstraintViolation(label, value, bound))
    negative = [lb for lb, v in rates.items() if lb.kind == "S" and v < -tol]
    return StochasticConstraints(min_eig >= -tol, min_eig, violations, negative)

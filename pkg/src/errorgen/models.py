"""Reduced error models: subspaces of generator space chosen by sector, weight and support.

Model strings are comma- or plus-separated terms::

    H(<=2),S(<=2),A(1)      explicit weights: an integer, <=w, or *
    C(2)@{0,1}              restrict to generators whose support is exactly {0,1}
    H2+S2+A1                shorthand: a trailing integer means weight <= w
    H+S                     a bare sector letter means every weight

Named aliases: ``H+S``, ``H+S+A1``, ``W2`` (all sectors, weight <= 2),
``H2S2A1`` and ``full``.

Weight and support of C/A generators use the union of both Paulis' supports,
so ``C(XI, IZ)`` is a weight-2 generator.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Iterator, Mapping, Optional

import numpy as np

from .errors import InvalidModelSpecError, QubitCountMismatch
from .generators import (
    KINDS,
    LOGARITHM,
    ErrorGeneratorRates,
    GeneratorLabel,
    as_label,
    extract_error_generator,
    decompose,
    process_from_rates,
    reconstruct,
)
from .metrics import entanglement_fidelity
from .pauli import iter_paulis_with_support

ALIASES = {
    "H+S": "H(*),S(*)",
    "H+S+A1": "H(*),S(*),A(1)",
    "W2": "H(<=2),S(<=2),C(<=2),A(<=2)",
    "H2S2A1": "H(<=2),S(<=2),A(1)",
    "H2+S2+A1": "H(<=2),S(<=2),A(1)",
    "FULL": "H(*),S(*),C(*),A(*)",
}


@dataclass(frozen=True)
class ModelTerm:
    """One sector restricted to a set of weights and, optionally, supports.

    ``weights=None`` means every weight; ``supports=None`` means every support.
    """

    sector: str
    weights: Optional[frozenset[int]] = None
    supports: Optional[frozenset[frozenset[int]]] = None

    def __post_init__(self):
        if self.sector not in KINDS:
            raise InvalidModelSpecError(f"unknown sector {self.sector!r}")
        if self.weights is not None:
            object.__setattr__(self, "weights", frozenset(self.weights))
        if self.supports is not None:
            object.__setattr__(self, "supports", frozenset(frozenset(s) for s in self.supports))

    def allowed_supports(self, n_qubits: int) -> Iterator[frozenset[int]]:
        """Support sets this term admits, in (weight, lexicographic) order."""
        if self.supports is not None:
            for s in sorted(self.supports, key=lambda s: (len(s), sorted(s))):
                if self.weights is None or len(s) in self.weights:
                    yield s
            return
        weights = range(1, n_qubits + 1) if self.weights is None else sorted(self.weights)
        for w in weights:
            if 1 <= w <= n_qubits:
                for combo in itertools.combinations(range(n_qubits), w):
                    yield frozenset(combo)

    def matches(self, label: GeneratorLabel) -> bool:
        if label.kind != self.sector:
            return False
        support = label.support
        if self.weights is not None and len(support) not in self.weights:
            return False
        return self.supports is None or support in self.supports

    def __str__(self) -> str:
        if self.weights is None:
            w = "*"
        elif len(self.weights) > 1 and self.weights == frozenset(range(1, max(self.weights) + 1)):
            w = f"<={max(self.weights)}"
        else:
            w = "|".join(str(x) for x in sorted(self.weights))
        out = f"{self.sector}({w})"
        if self.supports is not None:
            out += "@" + "|".join("{" + ",".join(map(str, sorted(s))) + "}" for s in sorted(self.supports, key=sorted))
        return out


@dataclass(frozen=True)
class CompositeGenerator:
    """A fixed linear combination of elementary generators, e.g. S_X + S_Y + S_Z."""

    name: str
    coefficients: tuple[tuple[GeneratorLabel, float], ...]

    @classmethod
    def from_mapping(cls, name: str, coefficients: Mapping[GeneratorLabel, float]) -> "CompositeGenerator":
        return cls(name, tuple(sorted((as_label(lb), float(c)) for lb, c in coefficients.items())))

    @property
    def labels(self) -> list[GeneratorLabel]:
        return [lb for lb, _ in self.coefficients]


@dataclass
class ModelSpec:
    n_qubits: int
    terms: list[ModelTerm] = field(default_factory=list)
    composites: list[CompositeGenerator] = field(default_factory=list)

    def __post_init__(self):
        if self.n_qubits < 1:
            raise InvalidModelSpecError("n_qubits must be positive")
        for term in self.terms:
            if term.supports is not None:
                for s in term.supports:
                    if not s or any(not 0 <= q < self.n_qubits for q in s):
                        raise InvalidModelSpecError(
                            f"support {sorted(s)} invalid for {self.n_qubits} qubits")
            if term.weights is not None and any(w < 1 for w in term.weights):
                raise InvalidModelSpecError(f"weights must be positive, got {sorted(term.weights)}")
        for a, b in itertools.combinations(self.terms, 2):
            if _terms_overlap(a, b, self.n_qubits):
                raise InvalidModelSpecError(f"model terms {a} and {b} share generators")
        for comp in self.composites:
            for lb in comp.labels:
                if lb.n_qubits != self.n_qubits:
                    raise InvalidModelSpecError(f"composite {comp.name} uses {lb} on the wrong qubit count")
                if any(t.matches(lb) for t in self.terms):
                    raise InvalidModelSpecError(
                        f"composite {comp.name} overlaps an elementary term at {lb}")

    @classmethod
    def parse(cls, text: str, n_qubits: int) -> "ModelSpec":
        return cls(n_qubits, parse_model_terms(text))

    def __str__(self) -> str:
        return ",".join(str(t) for t in self.terms)

    def contains(self, label: GeneratorLabel) -> bool:
        return any(t.matches(label) for t in self.terms)


def _terms_overlap(a: ModelTerm, b: ModelTerm, n_qubits: int) -> bool:
    if a.sector != b.sector:
        return False
    sa = set(a.allowed_supports(n_qubits))
    return any(s in sa for s in b.allowed_supports(n_qubits))


_TERM_RE = re.compile(
    r"""^(?P<sector>[HSCA])
        (?:(?P<short>\d+)|\((?P<weights>[^)]*)\))?
        (?:@(?P<supports>.+))?$""",
    re.VERBOSE,
)


def _split_terms(text: str) -> list[str]:
    # split on ',' or '+' outside of parentheses and braces
    parts, depth, cur = [], 0, ""
    for ch in text:
        if ch in "({":
            depth += 1
        elif ch in ")}":
            depth -= 1
        if ch in ",+" and depth == 0:
            parts.append(cur)
            cur = ""
        else:
            cur += ch
    parts.append(cur)
    return [p.strip() for p in parts]


def _parse_weights(text: str) -> Optional[frozenset[int]]:
    text = text.replace(" ", "")
    if text in ("*", ""):
        return None
    m = re.fullmatch(r"<=(\d+)", text)
    if m:
        return frozenset(range(1, int(m.group(1)) + 1))
    if re.fullmatch(r"\d+(\|\d+)*", text):
        return frozenset(int(x) for x in text.split("|"))
    raise InvalidModelSpecError(f"bad weight selector {text!r}")


def _parse_supports(text: str) -> frozenset[frozenset[int]]:
    groups = re.findall(r"\{([^}]*)\}", text)
    if not groups or re.sub(r"\{[^}]*\}|\|", "", text).strip():
        raise InvalidModelSpecError(f"bad support selector {text!r}")
    out = set()
    for g in groups:
        try:
            out.add(frozenset(int(x) for x in g.split(",") if x.strip()))
        except ValueError:
            raise InvalidModelSpecError(f"bad support selector {text!r}") from None
    return frozenset(out)


def parse_model_terms(text: str) -> list[ModelTerm]:
    key = text.strip().replace(" ", "")
    key = ALIASES.get(key.upper(), key)
    terms = []
    for part in _split_terms(key):
        m = _TERM_RE.match(part.upper())
        if not part or not m:
            raise InvalidModelSpecError(f"cannot parse model term {part!r} in {text!r}")
        if m.group("short") is not None:
            weights = frozenset(range(1, int(m.group("short")) + 1))
        elif m.group("weights") is not None:
            weights = _parse_weights(m.group("weights"))
        else:
            weights = None
        supports = _parse_supports(m.group("supports")) if m.group("supports") else None
        terms.append(ModelTerm(m.group("sector"), weights, supports))
    if not terms:
        raise InvalidModelSpecError(f"empty model spec {text!r}")
    return terms


def _pair_labels_on_support(kind: str, n_qubits: int, support: frozenset[int]) -> Iterator[GeneratorLabel]:
    qubits = sorted(support)
    subsets = [frozenset(c) for w in range(1, len(qubits) + 1) for c in itertools.combinations(qubits, w)]
    paulis = sorted(
        (p for s in subsets for p in iter_paulis_with_support(n_qubits, s)), key=lambda p: p.index
    )
    for p, q in itertools.combinations(paulis, 2):
        if p.support | q.support == support:
            yield GeneratorLabel(kind, p, q)


def labels_on_support(kind: str, n_qubits: int, support: Iterable[int]) -> list[GeneratorLabel]:
    """Elementary labels of one sector whose support is exactly ``support``."""
    support = frozenset(support)
    if kind in ("H", "S"):
        return [GeneratorLabel(kind, p) for p in iter_paulis_with_support(n_qubits, support)]
    return list(_pair_labels_on_support(kind, n_qubits, support))


def labels_of(spec: ModelSpec) -> list[GeneratorLabel]:
    """Canonically ordered elementary labels spanned by the spec's terms."""
    out = []
    for term in spec.terms:
        for support in term.allowed_supports(spec.n_qubits):
            out.extend(labels_on_support(term.sector, spec.n_qubits, support))
    return sorted(out)


def support_count(sector: str, weight: int) -> int:
    """Number of generators of one sector with a fixed support of size ``weight``.

    H/S: ``3^w``. C/A: unordered pairs of distinct non-identity Paulis whose
    supports union to the set, ``(15^w - 3^(w+1)) / 2``.
    """
    if weight < 1:
        return 0
    if sector in ("H", "S"):
        return 3**weight
    return (15**weight - 3 ** (weight + 1)) // 2


def parameter_count(spec: ModelSpec) -> int:
    """Closed-form dimension of the model; valid for any qubit count."""
    n = spec.n_qubits
    total = len(spec.composites)
    for term in spec.terms:
        if term.supports is not None:
            total += sum(support_count(term.sector, len(s)) for s in term.allowed_supports(n))
        else:
            weights = range(1, n + 1) if term.weights is None else term.weights
            total += sum(comb(n, w) * support_count(term.sector, w) for w in weights if 1 <= w <= n)
    return total


def full_model(n_qubits: int) -> ModelSpec:
    return ModelSpec(n_qubits, [ModelTerm(k) for k in KINDS])


@dataclass
class Projection:
    in_model: ErrorGeneratorRates
    residual: ErrorGeneratorRates
    residual_norms: dict[str, float]
    composite_rates: dict[str, float] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "in_model": self.in_model.to_json(),
            "residual": self.residual.to_json(),
            "residual_norms": self.residual_norms,
            "composite_rates": self.composite_rates,
        }


def project(rates: ErrorGeneratorRates, spec: ModelSpec) -> Projection:
    """Split rates into the part inside the model and the discarded residual.

    Elementary terms keep their rates verbatim. Composite generators get a
    least-squares fit over the rates not claimed by elementary terms.
    ``residual_norms`` are Euclidean norms of the residual rate vector per sector.
    """
    if rates.n_qubits != spec.n_qubits:
        raise QubitCountMismatch(f"rates on {rates.n_qubits} qubits, model on {spec.n_qubits}")
    inside = {lb: v for lb, v in rates.rates.items() if spec.contains(lb)}
    outside = {lb: v for lb, v in rates.rates.items() if lb not in inside}
    composite_rates: dict[str, float] = {}
    if spec.composites:
        basis_labels = sorted({lb for c in spec.composites for lb in c.labels})
        pos = {lb: i for i, lb in enumerate(basis_labels)}
        mat = np.zeros((len(basis_labels), len(spec.composites)))
        for j, comp in enumerate(spec.composites):
            for lb, coef in comp.coefficients:
                mat[pos[lb], j] += coef
        target = np.array([outside.get(lb, 0.0) for lb in basis_labels])
        coefs, *_ = np.linalg.lstsq(mat, target, rcond=None)
        fitted = mat @ coefs
        for lb, value in zip(basis_labels, fitted):
            if value != 0.0:
                inside[lb] = inside.get(lb, 0.0) + value
                outside[lb] = outside.get(lb, 0.0) - value
        composite_rates = {c.name: float(v) for c, v in zip(spec.composites, coefs)}
    in_model = rates.with_rates(inside)
    residual = rates.with_rates({lb: v for lb, v in outside.items() if v != 0.0})
    norms = {k: residual.sector(k).norm() for k in KINDS}
    return Projection(in_model, residual, norms, composite_rates)


@dataclass
class ModelFit:
    projected_rates: ErrorGeneratorRates
    residual_fraction: float
    reconstructed_process: np.ndarray
    fidelity_of_reconstruction: float

    def to_json(self) -> dict:
        return {
            "projected_rates": self.projected_rates.to_json(),
            "residual_fraction": self.residual_fraction,
            "fidelity_of_reconstruction": self.fidelity_of_reconstruction,
        }


def validate_model_fit(
    g: np.ndarray, target: np.ndarray, spec: ModelSpec, convention: str = LOGARITHM,
) -> ModelFit:
    """Extract, decompose, project onto ``spec`` and rebuild the gate.

    ``residual_fraction`` is ``||L_residual||_F / ||L||_F`` on generator
    matrices; the fidelity compares the gate with its rebuilt version.
    """
    gen = extract_error_generator(g, target, convention)
    rates = decompose(gen, convention=convention, floor=0.0)
    proj = project(rates, spec)
    total = float(np.linalg.norm(gen))
    frac = float(np.linalg.norm(reconstruct(proj.residual))) / total if total > 0 else 0.0
    rebuilt = process_from_rates(proj.in_model, target)
    return ModelFit(proj.in_model, frac, rebuilt, entanglement_fidelity(g, rebuilt, check=False))


@dataclass
class GateSetModel:
    n_qubits: int
    gates: dict[str, ModelSpec]

    @classmethod
    def from_json(cls, obj: Mapping, n_qubits: Optional[int] = None) -> "GateSetModel":
        n = int(obj.get("qubits", n_qubits or 0))
        if n < 1:
            raise InvalidModelSpecError("gate-set config needs a positive 'qubits' count")
        gates = obj.get("gates")
        if not isinstance(gates, Mapping):
            raise InvalidModelSpecError("gate-set config needs a 'gates' object")
        return cls(n, {name: ModelSpec.parse(text, n) for name, text in gates.items()})

    def parameter_counts(self) -> dict[str, int]:
        return {name: parameter_count(spec) for name, spec in self.gates.items()}

    def total_parameters(self) -> int:
        return sum(self.parameter_counts().values())


__all__ = [
    "ModelTerm", "ModelSpec", "CompositeGenerator", "GateSetModel", "Projection", "ModelFit",
    "parse_model_terms", "labels_of", "labels_on_support", "parameter_count", "support_count",
    "full_model", "project", "validate_model_fit", "ALIASES",
]

"""Decompose quantum gate errors into elementary Hamiltonian, stochastic,
correlation and active error generators."""

from .errors import (
    ChannelParameterError,
    DenseLimitError,
    ErrorGenError,
    FileFormatError,
    InvalidLabelError,
    InvalidModelSpecError,
    NoRealLogarithmError,
    NonHermitianError,
    NonTPGeneratorError,
    PauliParseError,
    QubitCountMismatch,
    SingularMatrixError,
)
from .pauli import PauliString, PhasedPauli, commutes, dense_matrix, enumerate_paulis, pauli_product
from .superop import (
    ProcessDiagnostics,
    check_process,
    chi_from_ptm,
    jamiolkowski,
    matrix_exp,
    matrix_log,
    ptm_from_chi,
    ptm_from_kraus,
    ptm_from_unitary,
)
from .generators import (
    DIFFERENCE,
    LOGARITHM,
    ErrorGeneratorRates,
    GeneratorLabel,
    decompose,
    dual_generator,
    elementary_generator,
    extract_error_generator,
    process_from_rates,
    reconstruct,
    stochastic_constraints,
)
from .metrics import entanglement_fidelity, j_amplitude, j_probability, metrics_report
from .channels import ChannelSpec, ideal_target, make_channel, make_random_small
from .models import GateSetModel, ModelSpec, parameter_count, project, validate_model_fit

__version__ = "0.1.0"

__all__ = [
    "ChannelParameterError",
    "DenseLimitError",
    "ErrorGenError",
    "FileFormatError",
    "InvalidLabelError",
    "InvalidModelSpecError",
    "NoRealLogarithmError",
    "NonHermitianError",
    "NonTPGeneratorError",
    "PauliParseError",
    "QubitCountMismatch",
    "SingularMatrixError",
    "PauliString",
    "PhasedPauli",
    "commutes",
    "dense_matrix",
    "enumerate_paulis",
    "pauli_product",
    "ProcessDiagnostics",
    "check_process",
    "chi_from_ptm",
    "jamiolkowski",
    "matrix_exp",
    "matrix_log",
    "ptm_from_chi",
    "ptm_from_kraus",
    "ptm_from_unitary",
    "DIFFERENCE",
    "LOGARITHM",
    "ErrorGeneratorRates",
    "GeneratorLabel",
    "decompose",
    "dual_generator",
    "elementary_generator",
    "extract_error_generator",
    "process_from_rates",
    "reconstruct",
    "stochastic_constraints",
    "entanglement_fidelity",
    "j_amplitude",
    "j_probability",
    "metrics_report",
    "ChannelSpec",
    "ideal_target",
    "make_channel",
    "make_random_small",
    "GateSetModel",
    "ModelSpec",
    "parameter_count",
    "project",
    "validate_model_fit",
]

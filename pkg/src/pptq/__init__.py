"""Exact entanglement manipulation under PPT quasi-operations.

Numerical toolkit for Hermitian-preserving trace-preserving maps whose
partial-transpose conjugation is completely positive: log-negativity and the
one-shot exact quantities it determines, constructive channel synthesis with
Choi-matrix verification, tempered negativity by convex feasibility, and
exact manipulation rates.
"""

__version__ = "0.1.0"

from ._backend import backend_name
from .errors import (DimensionCapExceeded, DimensionMismatch,
                     InvariantViolation, NegativeNegativity, NonConvergence,
                     ParseError, PptqError, PreconditionViolated,
                     SolverNotConverged, ZeroNegativityTarget)
from .operators import (BipartiteOperator, SpectralDecomposition,
                        eigendecompose, operator_norm, partial_transpose,
                        tensor_power, trace_norm)
from .states import (Classification, PptFlag, QuasiState, load, max_entangled,
                     quasi_state, random_quasi_state, random_state, save)
from .negativity import (NegativityValue, log_negativity, one_shot_exact_cost,
                         one_shot_exact_distillable)
from .synthesis import (ChannelChoi, CheckResult, MonotoneReport,
                        SynthesisCertificate, VerificationReport,
                        apply_channel, constant_channel, en_monotone_check,
                        identity_channel, load_channel, save_channel,
                        synthesize, transpose_channel, verify)
from .tempered import (PropertyCheck, PropertyReport, SolverConfig,
                       TemperedResult, tempered_negativity,
                       tempered_negativity_cross, verify_tempered_properties)
from .rates import (ChainReport, OneShotRow, RateReport, chain_report,
                    conversion_ratio, exact_rates, one_shot_table)

__all__ = [
    "BipartiteOperator", "SpectralDecomposition", "QuasiState",
    "Classification", "PptFlag", "NegativityValue", "ChannelChoi",
    "SynthesisCertificate", "VerificationReport", "CheckResult",
    "MonotoneReport", "TemperedResult", "SolverConfig", "PropertyCheck",
    "PropertyReport", "RateReport", "ChainReport", "OneShotRow",
    "partial_transpose", "eigendecompose", "trace_norm", "operator_norm",
    "tensor_power", "quasi_state", "max_entangled", "random_state",
    "random_quasi_state", "load", "save", "log_negativity",
    "one_shot_exact_distillable", "one_shot_exact_cost", "synthesize",
    "apply_channel", "verify", "en_monotone_check", "identity_channel",
    "constant_channel", "transpose_channel", "load_channel", "save_channel",
    "tempered_negativity", "tempered_negativity_cross",
    "verify_tempered_properties", "conversion_ratio", "exact_rates",
    "chain_report", "one_shot_table", "backend_name",
    "PptqError", "InvariantViolation", "ParseError", "NonConvergence",
    "DimensionCapExceeded", "DimensionMismatch", "PreconditionViolated",
    "NegativeNegativity", "ZeroNegativityTarget", "SolverNotConverged",
]

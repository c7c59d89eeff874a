"""Single-component gradient rules for parameterized quantum circuits."""
from ._kernels import BACKEND
from .errors import (
    ConditionViolation,
    DimensionMismatch,
    GradshiftError,
    InternalConsistencyError,
    NotAnRGateFunction,
    RGateValidation,
    SingularShift,
    ZeroStep,
)
from .statevector import (
    HermitianOperator,
    Spectrum,
    StateVector,
    UnitaryMatrix,
    apply_unitary,
    eigendecompose,
    expectation,
    pauli_string,
)
from .rgates import RGate, gate_matrix, make_r_gate

__version__ = "0.1.0"

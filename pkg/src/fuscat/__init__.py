"""Numerical toolkit for skeletal unitary (multi)fusion categories."""
from .errors import InputError, PreconditionError, NumericalError, AxiomViolation
from .fusion_ring import (FusionRing, validate, quantum_dims, global_dimension,
                          is_indecomposable, corners)

__version__ = '0.1.0'

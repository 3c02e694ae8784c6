"""Magnetic multipole fields of one-electron bound states.

State -> exact angular coefficients -> radial current multipoles ->
vector potential -> ``B``, with exact rational arithmetic wherever the
radial part is hydrogenic.
"""
from .angular import (SqrtRational, assoc_legendre, clebsch_gordan, legendre, product_expand,
                      spherical_harmonic)
from .field import (FieldLine, FieldSample, MultipoleField, SingularityError, StagnationError,
                    field_for_state, field_from_potential, potential_series, sample_grid,
                    trace_field_line)
from .multipole import (CoefficientTable, current_series, orbital_coefficients, spin_coefficients,
                        total_coefficients)
from .radial import (ConvergenceError, DivergenceError, IntegrabilityError, MultipoleSeries, PolyExp,
                     SampledProfile, hydrogen_radial, quad_oracle, read_radial_csv)
from .references import closed_form_reference
from .states import QuantumNumberError, QuantumState

__version__ = "0.1.0"

__all__ = [
    "SqrtRational", "assoc_legendre", "clebsch_gordan", "legendre", "product_expand", "spherical_harmonic",
    "FieldLine", "FieldSample", "MultipoleField", "SingularityError", "StagnationError", "field_for_state",
    "field_from_potential", "potential_series", "sample_grid", "trace_field_line",
    "CoefficientTable", "current_series", "orbital_coefficients", "spin_coefficients", "total_coefficients",
    "ConvergenceError", "DivergenceError", "IntegrabilityError", "MultipoleSeries", "PolyExp",
    "SampledProfile", "hydrogen_radial", "quad_oracle", "read_radial_csv",
    "closed_form_reference", "QuantumNumberError", "QuantumState",
]

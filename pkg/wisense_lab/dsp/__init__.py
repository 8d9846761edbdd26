# Sensing DSP module
from .doppler import (
    DopplerConfig,
    DopplerMatrix,
    DopplerVector,
    doppler_power_matrix,
    doppler_spectrum,
    doppler_vector_stream,
)
from .sanitize import sanitize_phase, sanitize_phase_with_mask
from .spectra import AoaProfile, RangeProfile, aoa_spectrum, default_angle_grid, range_spectrum

__all__ = [
    "DopplerConfig",
    "DopplerMatrix",
    "DopplerVector",
    "doppler_power_matrix",
    "doppler_spectrum",
    "doppler_vector_stream",
    "sanitize_phase",
    "sanitize_phase_with_mask",
    "AoaProfile",
    "RangeProfile",
    "aoa_spectrum",
    "default_angle_grid",
    "range_spectrum",
]

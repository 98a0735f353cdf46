"""Corner detector for checkerboard-style deformable marker patterns."""

from ._core import (
    adaptive_threshold,
    circular_xcorr,
    continuous_amplitude,
    detect_corners,
    dft_amplitude,
    generate,
    inter_response,
    intra_response,
    match_corners,
)

__all__ = [
    "adaptive_threshold",
    "circular_xcorr",
    "continuous_amplitude",
    "detect_corners",
    "dft_amplitude",
    "generate",
    "inter_response",
    "intra_response",
    "match_corners",
]

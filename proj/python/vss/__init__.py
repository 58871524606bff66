"""Virtual-state spectroscopy with bright squeezed vacuum.

Thin wrapper over the C++ core. Every entry point takes the same JSON config
text the ``vss`` command line tool reads; an empty string means defaults.
"""

from ._vss import (
    Spectrogram,
    __version__,
    default_config,
    delay_scan,
    detect_peaks,
    flux_sweep,
    joint_amplitude,
    normalize_config,
    run,
    schmidt,
    signal_to_background,
    spectrogram,
)

__all__ = [
    "Spectrogram",
    "__version__",
    "default_config",
    "delay_scan",
    "detect_peaks",
    "flux_sweep",
    "joint_amplitude",
    "normalize_config",
    "run",
    "schmidt",
    "signal_to_background",
    "spectrogram",
]

"""Python interface to the mixed interior-penalty DG Cahn-Hilliard solver."""

try:
    from ._chdg import (
        convergence_study,
        ellipse_signed_distance,
        gronwall_bound,
        simulate,
        spectrum_estimate,
        zero_level_set,
    )
except ImportError:  # in-tree builds put _chdg next to this package
    from _chdg import (
        convergence_study,
        ellipse_signed_distance,
        gronwall_bound,
        simulate,
        spectrum_estimate,
        zero_level_set,
    )

__all__ = [
    "convergence_study",
    "ellipse_signed_distance",
    "gronwall_bound",
    "simulate",
    "spectrum_estimate",
    "zero_level_set",
]

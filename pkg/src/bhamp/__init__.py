"""Black-hole-powered coherent light amplifier, simulated deterministically.

Subpackages by physics layer: ``geometry`` (radial infall and Kruskal
coordinates), ``modes`` (scalar-field modes and overlap integrals),
``ergotropy`` (work-capacity accounting), ``strong_coupling`` (pulsed Rabi
amplifier), ``weak_coupling`` (steady-state heat-engine amplifier), plus
the ``cli`` scenario runner with its ``plotting`` helpers.
"""

from . import cli, ergotropy, geometry, modes, plotting, strong_coupling, weak_coupling
from .errors import (
    ConfigError,
    DomainError,
    IntegrationError,
    NumericError,
    StabilityError,
    SupportError,
)

__version__ = "0.1.0"

__all__ = [
    "cli",
    "ergotropy",
    "geometry",
    "modes",
    "plotting",
    "strong_coupling",
    "weak_coupling",
    "ConfigError",
    "DomainError",
    "IntegrationError",
    "NumericError",
    "StabilityError",
    "SupportError",
    "__version__",
]

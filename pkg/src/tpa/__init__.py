"""One- and two-photon absorption of a three-level molecule in CW coherent and squeezed light."""

__version__ = "0.1.0"

from .coherent import (  # noqa: E402
    CoherentBeam,
    RateBreakdown,
    coherent_cross_sections,
    coherent_rates,
    far_detuned_rates,
    gm_2pa_cross_section,
    perturbation_valid,
)
from .constants import CONST, thz_to_angular, to_goeppert_mayer  # noqa: E402
from .molecule import DomainError, MoleculeParams, paper_default_molecule, validate  # noqa: E402
from .quadrature import QuadratureError, QuadratureSpec, integrate_1d, integrate_2d  # noqa: E402
from .squeezed import (  # noqa: E402
    SqueezedParams,
    g2_freq,
    g2_time,
    sq_cross_section_I,
    sq_cross_section_II,
    sq_rates,
    sq_sigma1,
    squeezed_intensity,
    vacuum_intensity,
)

__all__ = [
    "CONST",
    "CoherentBeam",
    "DomainError",
    "MoleculeParams",
    "QuadratureError",
    "QuadratureSpec",
    "RateBreakdown",
    "SqueezedParams",
    "coherent_cross_sections",
    "coherent_rates",
    "far_detuned_rates",
    "g2_freq",
    "g2_time",
    "gm_2pa_cross_section",
    "integrate_1d",
    "integrate_2d",
    "paper_default_molecule",
    "perturbation_valid",
    "sq_cross_section_I",
    "sq_cross_section_II",
    "sq_rates",
    "sq_sigma1",
    "squeezed_intensity",
    "thz_to_angular",
    "to_goeppert_mayer",
    "vacuum_intensity",
    "validate",
]

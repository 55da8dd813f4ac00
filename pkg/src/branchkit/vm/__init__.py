"""Vlasov-Maxwell model layer: species, reduced densities, linearization and fields."""

from .fields import (FieldSet, curl_z, definition1_witness, divergence, reconstruct_fields,
                     observed_order, trivial_fields, truncation_estimate)
from .linear import (L1Spectrum, LinearBlocks, Symmetrizer, assemble_T, check_condition_II,
                     l1_matrix, l1_spectrum, lemma5_pairwise, symmetrize)
from .nonlinear import (PointwiseNonlinearity, potential_coefficients, potential_density,
                        potential_gradient, potential_V)
from .profiles import (ExponentialProfile, PolynomialProfile, TabulatedProfile, cubic_profile,
                       maxwellian_profile, profile_from_config)
from .species import Species, VMParameters, species_set, validate_species
from .trivial import (TrivialState, boundary_potentials, neutral_density_scales,
                      neutrality_check, trivial_state)

__all__ = [
    "ExponentialProfile", "FieldSet", "L1Spectrum", "LinearBlocks", "PointwiseNonlinearity",
    "PolynomialProfile", "Species", "Symmetrizer", "TabulatedProfile", "TrivialState",
    "VMParameters", "assemble_T", "boundary_potentials", "check_condition_II", "cubic_profile",
    "curl_z", "definition1_witness", "divergence", "l1_matrix", "l1_spectrum",
    "lemma5_pairwise", "maxwellian_profile", "neutral_density_scales", "neutrality_check",
    "potential_V", "potential_coefficients", "potential_density", "potential_gradient",
    "profile_from_config", "reconstruct_fields", "species_set", "symmetrize",
    "observed_order", "trivial_fields", "trivial_state", "truncation_estimate",
    "validate_species",
]

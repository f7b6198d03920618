"""
Numerical laboratory for the radial defocusing semilinear wave equation
in three space dimensions.

Radial solutions are evolved through the reduced field ``w = r*u``, which
satisfies a 1D wave equation with a source, by a unit-Courant leapfrog
scheme or by Picard iteration of the Duhamel formula. The package then
measures the energies, Morawetz budgets, space-time norms, scattering
defects and exterior decay of the computed solutions, and maps them through
the hyperboloidal transformation.
"""

from radialwave.core import Parameters, RadialGrid, ReducedState, DataSpec, \
                            ZeroFamily, GaussianFamily, TailFamily, DerivativeFamily, \
                            build_grid, synthesize_data, weighted_data_norm, \
                            pointwise_tail_check, recover_u, radial_derivative, \
                            energy_norm, support_radius, zero_state
from radialwave.solver import CoefficientProfile, Trajectory, dalembert_free, \
                              evolve_leapfrog, evolve_window, picard_solve, \
                              pde_residual, rewind, continuous_dependence
from radialwave.functionals import BudgetEntry, DiagnosticReport, energy, \
                                   energy_series, conservation_check, \
                                   monotonicity_check, hardy_check, dissipation_check, \
                                   morawetz_functional, morawetz_budget, mixed_norm, \
                                   spacetime_integral, scattering_pullback, \
                                   scattering_chain_check, exterior_decay_report, \
                                   calibrate_exterior, build_report
from radialwave.transform import HyperboloidalChart, chart_forward, chart_inverse, \
                                 phi_weight, morawetz_weight, s0, push_forward, \
                                 commutator_residual, transformed_energy, \
                                 transformed_budgets, change_of_variables_check, \
                                 lemma_witness, exterior_region, omega_region, k_region
from radialwave.config import RunConfig, load_config
from radialwave import exceptions

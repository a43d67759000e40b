"""Rational points of bounded height on toric and weighted projective
varieties: predicted asymptotics and exact enumeration."""
from .cones import RationalCone, dual_cone, min_shift, triangulate, x_function
from .toric import (Fan, PicardModel, PLFunction, anticanonical_pl, build_picard,
                    compute_alpha, compute_beta, compute_gamma, count_points_mod_q,
                    resolve_fan_2d, strata_count)
from .heights import standard_height, toric_height, weighted_height
from .densities import (assemble_constant, compute_delta, convergence_factor, denef_density,
                        tau_archimedean, tau_finite)
from .enumeration import (CountCurve, enumerate_cubic_surface_torus, enumerate_projective,
                          enumerate_weighted_torus, saturation_ratios, torus_grid_enumerate)
from .asymptotics import (AsymptoticPrediction, compare, fit_asymptotic, predict,
                          product_prediction, tauberian_constant, zeta_partial)

__version__ = "0.1.0"

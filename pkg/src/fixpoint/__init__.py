"""Fixed-point iteration in non-triangular metric spaces.

Submodules
----------
metric
    Metric spaces without an assumed triangle inequality, axiom checks and
    the sup-metric lift to function tables.
contractions
    Banach, Kannan, Chatterjea and Ciric conditions; constant estimation.
picard
    Orbits, Cauchy detection, fixed-point certificates and distance bounds.
funceq
    Functional equations g(s) = G(s, g(psi(s))) and their stability
    certificates, including the linear equation with a series oracle.
cli
    The ``fixpoint`` command.
"""

from .contractions import (CiricCoefficients, ContractionKind, ContractionReport,
                           MapUnderTest, ciric_reduced_factor, condition_ratio,
                           estimate_lambda, verify_condition)
from .funceq import (BakerInstance, FuncEqInstance, LiftedOperator, StabilityCertificate,
                     StabilityTheorem, apply_operator, baker_series_solution,
                     check_sup_contraction, compute_delta, operator_power,
                     perturb_solution, solve_baker, solve_stability)
from .metric import (AxiomReport, FunctionTable, MetricSpace, TriangleStatus,
                     WitnessSequence, check_axioms, check_triangle_on_set, eval_metric,
                     metric_by_name, sup_metric)
from .picard import (FixedPointCertificate, IterationConfig, Orbit, bound_banach,
                     bound_ciric, bound_kannan_chatterjea, brute_force_fixed_point,
                     check_orbit_triangle, compute_orbit, detect_cauchy,
                     kannan_step_bound, solve_fixed_point, verify_uniqueness)

__version__ = "0.1.0"

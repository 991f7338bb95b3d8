"""Toolkit for Cauchy-Riemann structured polynomial ODEs.

Detects when a planar (or 2n-variable) polynomial system is the real form of
a complex polynomial ODE, collapses it, solves degrees <= 3 in closed or
implicit form, relates kinetic systems to mass-action reaction networks in
both directions, and verifies every symbolic result against an independent
adaptive integrator.
"""

from .cauchy_riemann import (
    CPReport,
    CRParameters,
    CRReport,
    NotCauchyRiemannError,
    check_calogero_payandeh,
    check_cr_2var,
    check_cr_2var_via_recursions,
    check_cr_multivar,
    cr_parameterize,
    cr_solution_dimensions,
    random_cr_parameters,
    random_cr_system,
)
from .closed_form import (
    ClosedFormSolution,
    ImplicitSolution,
    NewtonConvergenceError,
    UnsupportedDegreeError,
    ValidityError,
    eval_solution,
    real_components,
    solve,
    solve_cubic_ode,
    solve_linear,
    solve_riccati,
)
from .complex_numbers import (
    ComplexRational,
    complex_sqrt,
    cubic_roots,
    quadratic_roots,
    root_multiplicities,
)
from .complexify import (
    ComplexODESystem,
    ComplexPoly,
    ComplexScalarODE,
    complexify_2var,
    complexify_multivar,
    realify,
    realify_multivar,
)
from .homogeneous import (
    FirstIntegral,
    HomogeneousPair,
    SingularArgumentError,
    UnsupportedDegeneracyError,
    first_integral_value,
    reduce_homogeneous,
)
from .integrate import (
    Trajectory,
    VerificationReport,
    integrate,
    integrate_window,
    perturbation_experiment,
    verify_solution,
    write_difference_csv,
    write_trajectory_csv,
)
from .kinetics import (
    KineticConstraints,
    KineticityReport,
    NotKineticError,
    Reaction,
    ReactionNetwork,
    canonic_realization,
    check_kinetic,
    induced_ode,
    kinetic_cr_constraints,
    realization_stats,
)
from .polynomials import (
    ExponentVector,
    RealPoly,
    RealPolySystem,
    eval_system,
    partial_derivative,
)
from .reaction_io import (
    ReactionSyntaxError,
    complex_label,
    emit_fhj_dot,
    format_reactions,
    parse_reactions,
)

__version__ = "0.1.0"

//! ε-optimality, optimal value functions of parametric problems and their
//! sensitivity.

pub mod optimality;
pub mod parametric;
pub mod sensitivity;

pub use optimality::{is_eps_solution, minimize_on, optimality_certificate, ConstrainedProblem, MinResult, OptimalityCertificate};
pub use parametric::{approx_solution_set, box_polyhedron, parametric_certificate, value_function, ParametricProblem};
pub use sensitivity::{
    convex_sublevel, sensitivity_constrained, sensitivity_exact, sensitivity_unconstrained, value_function_esub_direct, SensitivityConfig,
    SensitivityReport,
};

//! Elliptic functions on `C/⟨1, τ⟩` and the elliptic Calogero–Moser system.

mod functions;
mod system;
mod verify;

pub use functions::{
    lame_hermite, theta, theta_and_derivative, theta_prime, theta_prime_zero, theta_quasi, weierstrass_invariants, wp,
    wp_and_derivative, wp_direct_sum, wp_prime, Torus, DEFAULT_TOL,
};
pub use system::{
    cm_flow, cm_h2, cm_hamiltonians, cm_lax, constant_terms_fit, lax_power_traces, CMState, CmDriftReport,
    CmFlowOptions, CmTrajectory, FitOptions, LaurentFit, COLLISION_THRESHOLD,
};
pub use verify::{cm_verify, default_tori, theta_wp_identity_error, trace_constant_spread, CmVerifyReport, TorusCheck};

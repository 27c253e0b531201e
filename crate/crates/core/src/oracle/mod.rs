//! Independent numerical references used by the tests and by `validate`.
//!
//! None of these share algebra with the closed-form path: the Ermakov and
//! Heisenberg equations are integrated directly, the reduced density matrix
//! is traced out by quadrature and the entropy comes from the symplectic
//! eigenvalue.

pub mod ode;
pub mod quadrature;
pub mod trace_out;

pub use ode::{heisenberg_position_response, integrate_ermakov, ErmakovOdeOptions};
pub use trace_out::trace_out_element;

/// Von Neumann entropy (nats) of a one-mode Gaussian state with symplectic
/// eigenvalue `nu >= 1/2`:
/// `(nu + 1/2) ln(nu + 1/2) - (nu - 1/2) ln(nu - 1/2)`.
pub fn symplectic_entropy(nu: f64) -> f64 {
    let lo = nu - 0.5;
    if lo <= 0.0 {
        return 0.0;
    }
    // written as ln(nu + 1/2) + lo ln(1 + 1/lo) to avoid cancelling logs
    (nu + 0.5).ln() + lo * (1.0 / lo).ln_1p()
}

/// `tau(t) = int_0^t dt' / eta(t')` by adaptive quadrature, split at the
/// stage starts where `eta''` jumps.
pub fn tau_by_quadrature(mode: &crate::ermakov::ModeCoefficients, t: f64, tol: f64) -> crate::Result<f64> {
    let mut knots: Vec<f64> = mode.segments().iter().map(|s| s.start).filter(|&s| s < t).collect();
    knots.push(t);
    let mut total = 0.0;
    for w in knots.windows(2) {
        let share = tol * (w[1] - w[0]) / t;
        total += quadrature::integrate(|x| 1.0 / mode.eta(x).eta, w[0], w[1], share)?;
    }
    Ok(total)
}

//! Exact dynamics of a periodic harmonic chain under sudden changes of the
//! on-site frequency.
//!
//! Each normal mode is solved in closed form through the Ermakov equation,
//! the Gaussian ground-state wavefunction is carried to any time, and the
//! single-site reduced density matrix is obtained by a Schur complement.

pub mod angle;
pub mod config;
pub mod error;
pub mod ermakov;
pub mod gaussian;
pub mod observables;
pub mod oracle;
pub mod output;
pub mod protocol;
pub mod run;
pub mod simulation;
pub mod validate;

pub use error::{QuenchError, Result};
pub use ermakov::{propagate_coefficients, ErmakovCoeffs, EtaState, ModeCoefficients};
pub use gaussian::{build_quadratic_forms, rdm_params, QuadraticForms, RdmParams, SiteCovariance};
pub use observables::{entanglement_entropy, momentum_distribution, otoc, ObservableSample, WindowStats};
pub use protocol::{build_mode_transform, ChainSpec, ModeTransform, QuenchProtocol, Segment, Stage};
pub use config::{ObservableKind, RunConfig, Threads};
pub use simulation::{time_grid, ObservableSet, SampleSpec, Simulator};

//! Analysis toolkit for the extended Dicke model: one bosonic field mode
//! coupled to `Nq` two-level systems, with an additional `Jz^2` qubit-qubit
//! interaction of strength `eta`,
//!
//! ```text
//! H = omega a'a + omega0 Jz + (gamma/sqrt(Nq)) (a + a')(J+ + J-) + (eta/Nq) Jz^2 .
//! ```
//!
//! The crate covers both sides of the classical-quantum correspondence:
//!
//! * [`model`]: parameters, phase-diagram regions, fixed points and their
//!   stability, critical energies of the semiclassical energy surface;
//! * [`dos`] and [`mc`]: the semiclassical density of states, its
//!   discontinuities, and a Monte Carlo phase-space cross-check;
//! * [`dynamics`]: classical trajectories, energy-shell sampling, and
//!   Poincare sections;
//! * [`spectrum`]: parity-resolved quantum spectra in bare and displaced
//!   Fock bases, convergence filtering, the averaged quantum density of
//!   states, and Peres lattices.
//!
//! Scaled units are used throughout: energies are reported as
//! `eps = E/(omega0 j)` with `j = Nq/2`.

use openblas_src as _;

pub mod dos;
pub mod dynamics;
mod eig;
pub mod error;
pub mod mc;
pub mod model;
pub mod spectrum;

mod ode;
mod quad;

pub use error::{Error, Result};
pub use model::{
    auxiliary_f, classical_energy, classify_region, critical_energies, effective_energy_surface,
    fixed_points, stability_of, ClassicalState, CriticalEnergies, Curvature, FixedPoint,
    FixedPointKind, ModelParams, Region, Stability,
};

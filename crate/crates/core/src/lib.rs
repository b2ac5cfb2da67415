//! Position-space Shannon entropy, disequilibrium and LMC complexity for
//! eigenstates of the q-deformed harmonic oscillator and the q-deformed
//! Morse potential.
//!
//! ```
//! use qlmc::{lmc_complexity, QParam, QhoState, Tolerances};
//!
//! let state = QhoState::new(5, QParam::new(0.4).unwrap()).unwrap();
//! let m = lmc_complexity(&state, &Tolerances::default()).unwrap();
//! assert!((m.c - 1.03962).abs() < 5e-4);
//! ```

// `!(x > 0.0)` is used throughout so that NaN lands on the rejecting branch
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod measures;
pub mod morse;
pub mod qho;
pub mod qmath;
pub mod quadrature;

pub use error::{Error, Result};
pub use measures::{
    discrete_disequilibrium, discrete_entropy, disequilibrium, lmc_complexity, shannon_entropy, Density, DiscreteDist,
    MeasureTriple, Tolerances,
};
pub use morse::{builtin_molecules, derive_params, find_molecule, morse_potential, Molecule, MorseParams, MorseState};
pub use qho::{uncertainty_closed_form, QhoState};
pub use qmath::{hermite_phys, laguerre_general, q_binomial, q_factorial, q_number, QParam, Regime};
pub use quadrature::{effective_support, integrate, Domain, Integrator, Interval, QuadResult};

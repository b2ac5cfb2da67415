//! Shannon entropy, disequilibrium and LMC complexity.
//!
//! Continuous (one dimension, nats):
//!
//! ```text
//! S = -∫ ρ ln ρ dx      D = ∫ ρ² dx      C = e^S · D
//! ```
//!
//! Discrete, with `k_B = 1`:
//!
//! ```text
//! S = -Σ p_i ln p_i     D = Σ (p_i - 1/N)²
//! ```
//!
//! The discrete disequilibrium subtracts the equiprobable value while the
//! continuous one does not; each is implemented as written.

use crate::error::{Error, Result};
use crate::quadrature::{Domain, Integrator, Interval};

/// Allowed deviation of `∫ρ` from 1 before a measure is computed.
pub const NORMALIZATION_TOL: f64 = 1e-6;

/// `C` below `1 - COMPLEXITY_BOUND_TOL` signals a numerical failure.
pub const COMPLEXITY_BOUND_TOL: f64 = 1e-6;

/// A probability density on the real line.
///
/// `window` is a hint for where the mass lives. It seeds the quadrature
/// subdivision; the integration itself always covers the whole line.
pub trait Density: Sync {
    fn density(&self, x: f64) -> f64;

    fn window(&self) -> Interval;
}

impl<D: Density + ?Sized> Density for &D {
    fn density(&self, x: f64) -> f64 {
        (**self).density(x)
    }

    fn window(&self) -> Interval {
        (**self).window()
    }
}

/// Integrator settings for the three quadratures behind a [`MeasureTriple`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// normalization and disequilibrium
    pub density: Integrator,
    /// entropy; its integrand has log singularities at nodes
    pub entropy: Integrator,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            density: Integrator::new(1e-10, 1e-9),
            entropy: Integrator::new(1e-8, 1e-9),
        }
    }
}

impl Tolerances {
    /// Same tolerances for every quadrature.
    pub fn uniform(abs_tol: f64, rel_tol: f64) -> Self {
        Self {
            density: Integrator::new(abs_tol, rel_tol),
            entropy: Integrator::new(abs_tol, rel_tol),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureTriple {
    pub s: f64,
    pub d: f64,
    pub c: f64,
    pub err_s: f64,
    pub err_d: f64,
}

/// Breakpoints for a density's window: the edges plus interior cuts so
/// that oscillatory densities start with several segments.
pub(crate) fn window_breaks(w: Interval) -> Vec<f64> {
    const CUTS: usize = 8;
    if !(w.width() > 0.0) {
        return vec![w.lo];
    }
    (0..=CUTS).map(|i| w.lo + w.width() * i as f64 / CUTS as f64).collect()
}

/// `∫ρ dx` over the whole line.
pub fn norm<D: Density>(rho: &D, integrator: &Integrator) -> Result<(f64, f64)> {
    let r = integrator.integrate_with_breaks(|x| rho.density(x), Domain::FullLine, &window_breaks(rho.window()))?;
    Ok((r.value, r.abs_error_estimate))
}

fn check_normalized<D: Density>(rho: &D, integrator: &Integrator) -> Result<()> {
    let (n, _) = norm(rho, integrator)?;
    if (n - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::NotNormalized { norm: n });
    }
    Ok(())
}

/// `-ρ ln ρ` with `0 ln 0 = 0`; non-positive values from rounding count as 0.
#[inline]
pub fn entropy_integrand(r: f64) -> f64 {
    if r > 0.0 {
        -r * r.ln()
    } else {
        0.0
    }
}

fn entropy_unchecked<D: Density>(rho: &D, integrator: &Integrator) -> Result<(f64, f64)> {
    let r = integrator.integrate_with_breaks(
        |x| entropy_integrand(rho.density(x)),
        Domain::FullLine,
        &window_breaks(rho.window()),
    )?;
    Ok((r.value, r.abs_error_estimate))
}

fn disequilibrium_unchecked<D: Density>(rho: &D, integrator: &Integrator) -> Result<(f64, f64)> {
    let r = integrator.integrate_with_breaks(
        |x| {
            let v = rho.density(x);
            v * v
        },
        Domain::FullLine,
        &window_breaks(rho.window()),
    )?;
    Ok((r.value, r.abs_error_estimate))
}

/// Shannon entropy `S = -∫ρ ln ρ`. Fails with [`Error::NotNormalized`] if
/// `∫ρ` is off by more than [`NORMALIZATION_TOL`].
pub fn shannon_entropy<D: Density>(rho: &D, tol: &Tolerances) -> Result<(f64, f64)> {
    check_normalized(rho, &tol.density)?;
    entropy_unchecked(rho, &tol.entropy)
}

/// Disequilibrium `D = ∫ρ²`.
pub fn disequilibrium<D: Density>(rho: &D, tol: &Tolerances) -> Result<(f64, f64)> {
    check_normalized(rho, &tol.density)?;
    disequilibrium_unchecked(rho, &tol.density)
}

/// `C = e^S · D` together with `S`, `D` and their error estimates.
pub fn lmc_complexity<D: Density>(rho: &D, tol: &Tolerances) -> Result<MeasureTriple> {
    check_normalized(rho, &tol.density)?;
    let (s, err_s) = entropy_unchecked(rho, &tol.entropy)?;
    let (d, err_d) = disequilibrium_unchecked(rho, &tol.density)?;
    let c = s.exp() * d;
    if c < 1.0 - COMPLEXITY_BOUND_TOL {
        return Err(Error::ComplexityBound { c });
    }
    Ok(MeasureTriple { s, d, c, err_s, err_d })
}

/// Probabilities over `N` accessible states.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteDist {
    p: Vec<f64>,
}

impl DiscreteDist {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::InvalidDistribution("no states".into()));
        }
        if let Some(bad) = p.iter().find(|v| !(**v >= 0.0) || !v.is_finite()) {
            return Err(Error::InvalidDistribution(format!(
                "probability {bad} is not in [0, 1]"
            )));
        }
        let total: f64 = p.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidDistribution(format!("probabilities sum to {total}")));
        }
        Ok(Self { p })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDistribution("no states".into()));
        }
        Ok(Self {
            p: vec![1.0 / n as f64; n],
        })
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.p
    }

    /// Number of accessible states.
    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }
}

pub fn discrete_entropy(d: &DiscreteDist) -> f64 {
    d.p.iter().map(|&p| entropy_integrand(p)).sum()
}

pub fn discrete_disequilibrium(d: &DiscreteDist) -> f64 {
    let eq = 1.0 / d.len() as f64;
    d.p.iter().map(|&p| (p - eq).powi(2)).sum()
}

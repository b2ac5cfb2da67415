//! q-deformed Morse potential for diatomic molecules.
//!
//! In the dimensionless coordinate `x = (r - r_e)/r_e`:
//!
//! ```text
//! V(x)   = D_e e^{-2αx} - 2q D_e e^{-αx},           α = a r_e
//! Ψ_n(x) = N_n exp(-α s x - λ e^{-αx}) L_n^{2s}(2λ e^{-αx}),  s = λq - n - 1/2
//! E_n    = -α² E_0 s²
//! λ      = sqrt(D_e / (α² E_0)),   E_0 = ħ² / (2 μ r_e²)
//! ```
//!
//! Bound states exist for `0 <= n <= n_max = floor(λq - 1/2)`. `N_n` is
//! always obtained by quadrature of `Ψ_n²` over the whole line in `x`; the
//! mass below `x = -1` (`r < 0`) is negligible because the density decays
//! like `exp(-2λ e^{-αx})` there.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{window_breaks, Density};
use crate::qmath::{laguerre_general, QParam};
use crate::quadrature::{effective_support, Domain, Integrator, Interval};

/// CODATA 2018 values in SI units, plus the speed of light in cm/s so that
/// energies come out in wavenumbers.
pub mod constants {
    /// J·s
    pub const HBAR: f64 = 1.054_571_817e-34;
    /// kg
    pub const AMU: f64 = 1.660_539_066_60e-27;
    /// cm/s
    pub const SPEED_OF_LIGHT_CM: f64 = 2.997_924_58e10;
    /// m
    pub const ANGSTROM: f64 = 1e-10;
}

/// Densities below this are outside the plotting window.
pub const SUPPORT_THRESHOLD: f64 = 1e-16;

/// Log-magnitude under which the wavefunction is reported as exactly zero.
const LOG_UNDERFLOW: f64 = -700.0;

/// Spectroscopic constants of a diatomic molecule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Molecule {
    pub name: String,
    /// range parameter, Å⁻¹
    pub a: f64,
    /// equilibrium bond length, Å
    pub r_e: f64,
    /// well depth, cm⁻¹
    #[serde(rename = "D_e")]
    pub d_e: f64,
    /// reduced mass, amu
    pub mu: f64,
}

impl Molecule {
    pub fn new(name: impl Into<String>, a: f64, r_e: f64, d_e: f64, mu: f64) -> Result<Self> {
        let m = Self {
            name: name.into(),
            a,
            r_e,
            d_e,
            mu,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        for (label, v) in [("a", self.a), ("r_e", self.r_e), ("D_e", self.d_e), ("mu", self.mu)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidMolecule {
                    name: self.name.clone(),
                    reason: format!("{label} must be positive, got {v}"),
                });
            }
        }
        Ok(())
    }

    pub fn hcl() -> Self {
        Self {
            name: "HCl".into(),
            a: 1.868,
            r_e: 1.275,
            d_e: 37255.0,
            mu: 0.980,
        }
    }

    pub fn h2() -> Self {
        Self {
            name: "H2".into(),
            a: 1.944,
            r_e: 0.742,
            d_e: 38266.0,
            mu: 0.504,
        }
    }

    /// `E_0 = ħ²/(2μ r_e²)` in cm⁻¹.
    pub fn energy_scale(&self) -> f64 {
        use constants::*;
        let mu = self.mu * AMU;
        let r = self.r_e * ANGSTROM;
        // ħ²/(2μr²) / (h c) with h = 2πħ
        HBAR / (4.0 * std::f64::consts::PI * SPEED_OF_LIGHT_CM * mu * r * r)
    }

    pub fn alpha(&self) -> f64 {
        self.a * self.r_e
    }

    /// `λ = sqrt(D_e / (α² E_0))`.
    pub fn lambda(&self) -> f64 {
        (self.d_e / (self.alpha().powi(2) * self.energy_scale())).sqrt()
    }
}

/// HCl and H₂.
pub fn builtin_molecules() -> Vec<Molecule> {
    vec![Molecule::hcl(), Molecule::h2()]
}

/// Case-insensitive lookup by name.
pub fn find_molecule<'a>(molecules: &'a [Molecule], name: &str) -> Option<&'a Molecule> {
    molecules.iter().find(|m| m.name.eq_ignore_ascii_case(name))
}

#[derive(Debug, Clone, PartialEq)]
pub struct MorseParams {
    pub alpha: f64,
    /// cm⁻¹
    pub e0: f64,
    pub lambda: f64,
    /// cm⁻¹
    pub d_e: f64,
    pub q: QParam,
    pub n_max: u32,
}

/// Dimensionless Morse parameters for `mol` at deformation `q`.
pub fn derive_params(mol: &Molecule, q: QParam) -> Result<MorseParams> {
    mol.validate()?;
    let alpha = mol.alpha();
    let e0 = mol.energy_scale();
    let lambda = mol.lambda();
    let lq = lambda * q.value();
    if lq < 0.5 {
        return Err(Error::NoBoundStates { lambda_q: lq });
    }
    Ok(MorseParams {
        alpha,
        e0,
        lambda,
        d_e: mol.d_e,
        q,
        n_max: (lq - 0.5).floor() as u32,
    })
}

impl MorseParams {
    /// `V(x) = D_e e^{-2αx} - 2q D_e e^{-αx}` in cm⁻¹.
    pub fn potential(&self, x: f64) -> f64 {
        let e = (-self.alpha * x).exp();
        self.d_e * e * e - 2.0 * self.q.value() * self.d_e * e
    }

    /// Position of the potential minimum, `-ln(q)/α`.
    pub fn potential_minimum(&self) -> f64 {
        -self.q.value().ln() / self.alpha
    }

    /// `s = λq - n - 1/2`.
    pub fn exponent(&self, n: u32) -> f64 {
        self.lambda * self.q.value() - n as f64 - 0.5
    }

    /// `E_n = -α² E_0 s²` in cm⁻¹; does not check `n <= n_max`.
    pub fn energy(&self, n: u32) -> f64 {
        -self.alpha.powi(2) * self.e0 * self.exponent(n).powi(2)
    }
}

/// Free-function form of [`MorseParams::potential`].
pub fn morse_potential(params: &MorseParams, x: f64) -> f64 {
    params.potential(x)
}

/// Normalized bound state `n` of a q-deformed Morse potential.
#[derive(Debug, Clone, PartialEq)]
pub struct MorseState {
    params: MorseParams,
    n: u32,
    s: f64,
    // log of the peak of the unnormalized |Ψ|, subtracted before exponentiating
    log_shift: f64,
    norm_constant: f64,
    support: Interval,
}

impl MorseState {
    pub fn new(params: MorseParams, n: u32) -> Result<Self> {
        Self::with_integrator(params, n, &Integrator::default())
    }

    pub fn with_integrator(params: MorseParams, n: u32, integrator: &Integrator) -> Result<Self> {
        let s = params.exponent(n);
        if n > params.n_max || !(s > 0.0) {
            return Err(Error::StateOutOfRange { n, n_max: params.n_max });
        }
        let mut state = Self {
            params,
            n,
            s,
            log_shift: 0.0,
            norm_constant: 1.0,
            support: Interval::new(0.0, 0.0),
        };
        let center = state.params.potential_minimum();

        // scale so the raw values are O(1) near the well
        let peak = (0..=400)
            .map(|i| center - 1.0 + 4.0 * i as f64 / 400.0)
            .map(|x| state.log_raw(x).0)
            .fold(f64::NEG_INFINITY, f64::max);
        state.log_shift = peak;

        let rough = effective_support(|x| state.raw(x).powi(2), center, SUPPORT_THRESHOLD * 1e-4)?;
        let norm =
            integrator.integrate_with_breaks(|x| state.raw(x).powi(2), Domain::FullLine, &window_breaks(rough))?;
        if !(norm.value > 0.0) || !norm.value.is_finite() {
            return Err(Error::NotNormalized { norm: norm.value });
        }
        state.norm_constant = 1.0 / norm.value.sqrt();
        state.support = effective_support(|x| state.density(x), center, SUPPORT_THRESHOLD)?;
        Ok(state)
    }

    pub fn params(&self) -> &MorseParams {
        &self.params
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// `N_n` relative to the internally rescaled raw wavefunction.
    pub fn norm_constant(&self) -> f64 {
        self.norm_constant
    }

    pub fn support(&self) -> Interval {
        self.support
    }

    pub fn plot_window(&self) -> Interval {
        self.support.padded(0.1)
    }

    /// `(log |exp part|, Laguerre factor)`; the Laguerre factor is not
    /// evaluated (reported as 0) once the exponential has underflowed.
    fn log_raw(&self, x: f64) -> (f64, f64) {
        let p = &self.params;
        let e = (-p.alpha * x).exp();
        let log_mag = -p.alpha * self.s * x - p.lambda * e;
        if !(log_mag - self.log_shift >= LOG_UNDERFLOW) {
            return (log_mag, 0.0);
        }
        let lag = laguerre_general(self.n, 2.0 * self.s, 2.0 * p.lambda * e);
        (log_mag + lag.abs().ln(), lag.signum())
    }

    fn raw(&self, x: f64) -> f64 {
        let (log_mag, sign) = self.log_raw(x);
        let rel = log_mag - self.log_shift;
        if sign == 0.0 || !(rel >= LOG_UNDERFLOW) {
            return 0.0;
        }
        sign * rel.exp()
    }

    pub fn wavefunction(&self, x: f64) -> f64 {
        self.norm_constant * self.raw(x)
    }

    pub fn density(&self, x: f64) -> f64 {
        self.wavefunction(x).powi(2)
    }

    pub fn energy(&self) -> f64 {
        self.params.energy(self.n)
    }

    /// Relative residual of `-E_0 Ψ'' + (V - E) Ψ = 0` at `x`, with a
    /// second-order central difference of step `h` for `Ψ''`.
    pub fn schrodinger_residual(&self, x: f64, h: f64) -> f64 {
        let psi = self.wavefunction(x);
        let d2 = (self.wavefunction(x + h) - 2.0 * psi + self.wavefunction(x - h)) / (h * h);
        let kinetic = -self.params.e0 * d2;
        let v = self.params.potential(x) * psi;
        let e = self.energy() * psi;
        let scale = kinetic.abs().max(v.abs()).max(e.abs());
        if scale == 0.0 {
            return 0.0;
        }
        (kinetic + v - e).abs() / scale
    }

    /// Five probe points spread over the support, each at the local maximum
    /// of `|Ψ|` within its fifth of the support.
    pub fn probe_points(&self) -> Vec<f64> {
        let w = self.support;
        let parts = 5;
        let samples = 64;
        (0..parts)
            .map(|i| {
                let lo = w.lo + w.width() * i as f64 / parts as f64;
                let hi = w.lo + w.width() * (i + 1) as f64 / parts as f64;
                (0..=samples)
                    .map(|j| lo + (hi - lo) * j as f64 / samples as f64)
                    .max_by(|a, b| self.density(*a).total_cmp(&self.density(*b)))
                    .unwrap_or(lo)
            })
            .collect()
    }
}

impl Density for MorseState {
    fn density(&self, x: f64) -> f64 {
        MorseState::density(self, x)
    }

    fn window(&self) -> Interval {
        self.support
    }
}

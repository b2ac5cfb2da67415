//! Eigenstates of the q-deformed harmonic oscillator (`ħ = 1`).
//!
//! The normalized wavefunction is
//!
//! ```text
//! Ψ_n(x) = exp(-x²/2 + (3/2) iαx) / (π^{1/4} iⁿ (1 - e^{-2α²})^{n/2} sqrt([n]_q!))
//!          · Σ_k (-1)^k [n k]_q exp(2iα(n-k)x - kα²),      α = i sqrt(ln(q)/2)
//! ```
//!
//! For `0 < q < 1`, `α` is real and negative, `e^{-2α²} = q` and
//! `e^{-kα²} = q^{k/2}`, so the sum is a Rogers-Szegő polynomial in
//! `t = -q^{1/2} e^{-2iαx}` times `e^{2iαnx}`. Its three-term recurrence
//!
//! ```text
//! H_{m+1}(t) = (1 + t) H_m(t) - (1 - q^m) t H_{m-1}(t)
//! ```
//!
//! carries the normalization along and stays well conditioned as `q → 1`,
//! where the explicit alternating sum cancels catastrophically. The
//! explicit sum is kept as [`wavefunction_closed_sum`] for cross-checks.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::measures::{window_breaks, Density, NORMALIZATION_TOL};
use crate::qmath::{hermite_phys, q_binomial, q_factorial, q_number, QParam};
use crate::quadrature::{effective_support, Domain, Integrator, Interval};

/// Largest quantum number accepted by [`QhoState`].
pub const MAX_QUANTUM_NUMBER: u32 = 100;

/// Density threshold for the plotting and quadrature window.
pub const SUPPORT_THRESHOLD: f64 = 1e-16;

/// Step for the numerical derivative in [`QhoState::uncertainty_numeric`].
pub const DERIVATIVE_STEP: f64 = 1e-5;

// e^{-x²/2} underflows past this
const GAUSSIAN_CUTOFF: f64 = 1500.0;

/// Oscillator eigenstate `|n⟩` at deformation `q`, immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct QhoState {
    n: u32,
    q: QParam,
    omega: f64,
    scale: f64,
    analytic_norm: f64,
    renormalized: bool,
    support: Interval,
    // sqrt([m]_q) for m = 0..=n
    sqrt_qnum: Vec<f64>,
}

impl QhoState {
    /// State with `ω = 1` and default quadrature tolerances.
    pub fn new(n: u32, q: QParam) -> Result<Self> {
        Self::with_omega(n, q, 1.0, &Integrator::default())
    }

    /// Builds the state and checks `∫|Ψ|² = 1`. If the analytic constant is
    /// off by more than [`NORMALIZATION_TOL`] the density is rescaled by the
    /// numerical norm and [`renormalized`](Self::renormalized) is set.
    pub fn with_omega(n: u32, q: QParam, omega: f64, integrator: &Integrator) -> Result<Self> {
        if n > MAX_QUANTUM_NUMBER {
            return Err(Error::Domain(format!(
                "oscillator quantum number {n} exceeds {MAX_QUANTUM_NUMBER}"
            )));
        }
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(Error::Domain(format!("omega must be positive, got {omega}")));
        }
        let mut state = Self {
            n,
            q,
            omega,
            scale: 1.0,
            analytic_norm: 1.0,
            renormalized: false,
            support: Interval::new(0.0, 0.0),
            sqrt_qnum: (0..=n).map(|m| q_number(m, q).sqrt()).collect(),
        };
        state.support = effective_support(|x| state.density(x), 0.0, SUPPORT_THRESHOLD)?;
        let norm = integrator
            .integrate_with_breaks(|x| state.density(x), Domain::FullLine, &window_breaks(state.support))?
            .value;
        state.analytic_norm = norm;
        if (norm - 1.0).abs() > NORMALIZATION_TOL {
            state.scale = 1.0 / norm.sqrt();
            state.renormalized = true;
            state.support = effective_support(|x| state.density(x), 0.0, SUPPORT_THRESHOLD)?;
        }
        Ok(state)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn q(&self) -> QParam {
        self.q
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// `∫|Ψ|²` of the analytic expression, before any rescaling.
    pub fn analytic_norm(&self) -> f64 {
        self.analytic_norm
    }

    /// Set when the analytic normalization failed its check.
    pub fn renormalized(&self) -> bool {
        self.renormalized
    }

    /// Where the density exceeds [`SUPPORT_THRESHOLD`].
    pub fn support(&self) -> Interval {
        self.support
    }

    /// Support padded by 10% on each side, used for density dumps.
    pub fn plot_window(&self) -> Interval {
        self.support.padded(0.1)
    }

    pub fn wavefunction(&self, x: f64) -> Complex64 {
        let psi = if self.q.is_classical() {
            Complex64::new(hermite_function(self.n, x), 0.0)
        } else {
            deformed_wavefunction(self.q.value(), &self.sqrt_qnum, x)
        };
        psi * self.scale
    }

    /// `|Ψ(x)|²`; the global phases `iⁿ` and `e^{(3/2)iαx}` drop out.
    pub fn density(&self, x: f64) -> f64 {
        self.wavefunction(x).norm_sqr()
    }

    /// `E_n = ω([n]_q + qⁿ/2)`.
    pub fn energy(&self) -> f64 {
        let qn = if self.q.is_classical() {
            1.0
        } else {
            self.q.value().powi(self.n as i32)
        };
        self.omega * (q_number(self.n, self.q) + 0.5 * qn)
    }

    /// `E_n = ω([n]_q + [n+1]_q)/2`, equal to [`energy`](Self::energy).
    pub fn energy_symmetric(&self) -> f64 {
        0.5 * self.omega * (q_number(self.n, self.q) + q_number(self.n + 1, self.q))
    }

    /// Closed form `ΔxΔp = (2 - (1+q)qⁿ) / (2(1-q))`, `n + 1/2` at `q = 1`.
    pub fn uncertainty_product(&self) -> f64 {
        uncertainty_closed_form(self.n, self.q)
    }

    /// `ΔxΔp` from moments of the wavefunction by quadrature, with `Ψ'` from
    /// central differences (step [`DERIVATIVE_STEP`], one Richardson step).
    pub fn uncertainty_numeric(&self, integrator: &Integrator) -> Result<f64> {
        let breaks = window_breaks(self.support);
        let int = |f: &dyn Fn(f64) -> f64| -> Result<f64> {
            Ok(integrator.integrate_with_breaks(f, Domain::FullLine, &breaks)?.value)
        };
        let norm = int(&|x| self.density(x))?;
        let mean_x = int(&|x| x * self.density(x))? / norm;
        let mean_x2 = int(&|x| x * x * self.density(x))? / norm;

        let h = DERIVATIVE_STEP;
        let central = |x: f64, h: f64| (self.wavefunction(x + h) - self.wavefunction(x - h)) / (2.0 * h);
        let deriv = |x: f64| (central(x, h) * 4.0 - central(x, 2.0 * h)) / 3.0;

        // ⟨p⟩ = ∫ Ψ* (-i Ψ') = ∫ Im(Ψ* Ψ')
        let mean_p = int(&|x| (self.wavefunction(x).conj() * deriv(x)).im)? / norm;
        let mean_p2 = int(&|x| deriv(x).norm_sqr())? / norm;

        let var_x = (mean_x2 - mean_x * mean_x).max(0.0);
        let var_p = (mean_p2 - mean_p * mean_p).max(0.0);
        Ok((var_x * var_p).sqrt())
    }
}

impl Density for QhoState {
    fn density(&self, x: f64) -> f64 {
        QhoState::density(self, x)
    }

    fn window(&self) -> Interval {
        self.support
    }
}

pub fn uncertainty_closed_form(n: u32, q: QParam) -> f64 {
    if q.is_classical() {
        return n as f64 + 0.5;
    }
    let qv = q.value();
    (2.0 - (1.0 + qv) * qv.powi(n as i32)) / (2.0 * (1.0 - qv))
}

/// First-order spectrum near the classical limit, `q = 1 - ε`:
/// `E_n ≈ ω(n + 1/2 - n²ε/2)`.
pub fn energy_linearized(n: u32, epsilon: f64, omega: f64) -> f64 {
    let n = n as f64;
    omega * (n + 0.5 - 0.5 * n * n * epsilon)
}

/// `(2ⁿ n! √π)^{-1/2} H_n(x) e^{-x²/2}`.
fn hermite_function(n: u32, x: f64) -> f64 {
    if x * x > GAUSSIAN_CUTOFF {
        return 0.0;
    }
    let ln_norm = n as f64 * std::f64::consts::LN_2 + (1..=n).map(|k| (k as f64).ln()).sum::<f64>() + 0.5 * PI.ln();
    hermite_phys(n, x) * (-0.5 * x * x - 0.5 * ln_norm).exp()
}

/// `e^w - 1` for complex `w` without cancellation near `w = 0`.
fn expm1_complex(w: Complex64) -> Complex64 {
    let (s, c) = w.im.sin_cos();
    let half = (0.5 * w.im).sin();
    Complex64::new(w.re.exp_m1() * c - 2.0 * half * half, w.re.exp() * s)
}

/// `i^{-n}`
fn inverse_i_power(n: u32) -> Complex64 {
    match n % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    }
}

fn deformed_wavefunction(q: f64, sqrt_qnum: &[f64], x: f64) -> Complex64 {
    let n = (sqrt_qnum.len() - 1) as u32;
    if x * x > GAUSSIAN_CUTOFF {
        return Complex64::new(0.0, 0.0);
    }
    let ln_q = q.ln();
    // α = i sqrt(ln(q)/2) = -sqrt(-ln(q)/2)
    let alpha = -(-0.5 * ln_q).sqrt();

    // t = -q^{1/2} e^{-2iαx}
    let w = Complex64::new(0.5 * ln_q, -2.0 * alpha * x);
    let t = -w.exp();
    let one_plus_t = -expm1_complex(w);
    let a = one_plus_t / (1.0 - q).sqrt();

    // g_m = H_m(t) / ((1-q)^{m/2} sqrt([m]_q!))
    let mut prev = Complex64::new(1.0, 0.0);
    let mut cur = if n == 0 { prev } else { a };
    for m in 1..n {
        let m = m as usize;
        let next = (a * cur - t * sqrt_qnum[m] * prev) / sqrt_qnum[m + 1];
        prev = cur;
        cur = next;
    }

    let phase = alpha * x * (1.5 + 2.0 * n as f64);
    let envelope = (-0.5 * x * x).exp() / PI.powf(0.25);
    Complex64::from_polar(envelope, phase) * inverse_i_power(n) * cur
}

/// The oscillator wavefunction evaluated term by term in complex arithmetic,
/// exactly as the closed form reads. Only defined for `q < 1`. Loses all
/// precision for large `n` as `q → 1`.
pub fn wavefunction_closed_sum(n: u32, q: QParam, x: f64) -> Result<Complex64> {
    if q.is_classical() {
        return Err(Error::Domain("closed-form sum is 0/0 at q = 1".into()));
    }
    let i = Complex64::i();
    let alpha = i * Complex64::new(q.value().ln() / 2.0, 0.0).sqrt();
    let alpha2 = alpha * alpha;
    let fact_n = q_factorial(n, q)?;
    let denom = PI.powf(0.25)
        * i.powu(n)
        * (Complex64::new(1.0, 0.0) - (-2.0 * alpha2).exp()).powf(n as f64 / 2.0)
        * fact_n.sqrt();
    let pre = (Complex64::new(-x * x / 2.0, 0.0) + 1.5 * i * alpha * x).exp() / denom;
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..=n {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let coeff = sign * q_binomial(n, k, q)?;
        sum += coeff * (2.0 * i * alpha * (n - k) as f64 * x - k as f64 * alpha2).exp();
    }
    Ok(pre * sum)
}

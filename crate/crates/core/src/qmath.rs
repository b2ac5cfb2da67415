//! q-deformed combinatorics and the classical orthogonal polynomials used by
//! the oscillator and Morse eigenstates.
//!
//! ```text
//! [n]_q   = (1 - q^n) / (1 - q)
//! [n]_q!  = [1]_q [2]_q ... [n]_q
//! [n k]_q = [n]_q! / ([k]_q! [n-k]_q!)
//! ```

use std::fmt;

use crate::error::{Error, Result};

/// Deformed-formula inputs closer than this to 1 are rejected.
pub const CLASSICAL_LIMIT_GAP: f64 = 1e-9;

/// Largest `n` accepted by [`q_factorial`].
pub const MAX_FACTORIAL_ORDER: u32 = 170;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Deformed,
    ClassicalLimit,
}

/// Validated deformation parameter, `0 < q <= 1`.
///
/// `q = 1` is tagged as the classical limit and never reached through the
/// deformed formulas, which are 0/0 there. Values in `(1 - 1e-9, 1)` are
/// rejected because `(1 - q^n)/(1 - q)` has no significant digits left.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QParam {
    q: f64,
    regime: Regime,
}

impl QParam {
    pub fn new(q: f64) -> Result<Self> {
        if !q.is_finite() || q <= 0.0 || q > 1.0 {
            return Err(Error::InvalidQ(q));
        }
        if q == 1.0 {
            return Ok(Self::classical());
        }
        if q > 1.0 - CLASSICAL_LIMIT_GAP {
            return Err(Error::ClassicalLimitTooClose(q));
        }
        Ok(Self {
            q,
            regime: Regime::Deformed,
        })
    }

    pub fn classical() -> Self {
        Self {
            q: 1.0,
            regime: Regime::ClassicalLimit,
        }
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.q
    }

    #[inline]
    pub fn regime(&self) -> Regime {
        self.regime
    }

    #[inline]
    pub fn is_classical(&self) -> bool {
        self.regime == Regime::ClassicalLimit
    }
}

impl fmt::Display for QParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.q)
    }
}

impl TryFrom<f64> for QParam {
    type Error = Error;

    fn try_from(q: f64) -> Result<Self> {
        QParam::new(q)
    }
}

/// The q-number `[n]_q`; equals `n` in the classical limit.
pub fn q_number(n: u32, q: QParam) -> f64 {
    match q.regime() {
        Regime::ClassicalLimit => n as f64,
        Regime::Deformed => {
            // 1 - q^n = -expm1(n ln q); q - 1 is exact for q in (0.5, 1)
            let ln_q = (q.value() - 1.0).ln_1p();
            -(n as f64 * ln_q).exp_m1() / (1.0 - q.value())
        }
    }
}

/// `[n]_q! = prod_{k=1}^n [k]_q`, with `[0]_q! = 1`.
pub fn q_factorial(n: u32, q: QParam) -> Result<f64> {
    if n > MAX_FACTORIAL_ORDER {
        return Err(Error::Overflow { n });
    }
    let mut acc = 1.0;
    for k in 1..=n {
        acc *= q_number(k, q);
        if !acc.is_finite() {
            return Err(Error::Overflow { n });
        }
    }
    Ok(acc)
}

/// Gaussian binomial coefficient as a ratio of q-factorials.
pub fn q_binomial(n: u32, k: u32, q: QParam) -> Result<f64> {
    if k > n {
        return Err(Error::Domain(format!("q-binomial needs k <= n, got n = {n}, k = {k}")));
    }
    Ok(q_factorial(n, q)? / (q_factorial(k, q)? * q_factorial(n - k, q)?))
}

/// Physicists' Hermite polynomial `H_n(x)`.
pub fn hermite_phys(n: u32, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 2.0 * x;
    for k in 1..n {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Generalized Laguerre polynomial `L_n^a(x)` by the upward recurrence in
/// degree; `a` need not be an integer.
pub fn laguerre_general(n: u32, a: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + a - x;
    for k in 1..n {
        let k = k as f64;
        let next = ((2.0 * k + 1.0 + a - x) * cur - (k + a) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

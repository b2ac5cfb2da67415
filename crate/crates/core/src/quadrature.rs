//! Globally adaptive Gauss-Kronrod (10/21) quadrature on finite, half-infinite
//! and infinite domains.
//!
//! Unbounded pieces are mapped onto finite parameter intervals before
//! subdivision:
//!
//! ```text
//! full line      x = t / (1 - t^2),   t in (-1, 1)
//! [a, inf)       x = a + t / (1 - t), t in [0, 1)
//! (-inf, b]      x = b - t / (1 - t), t in [0, 1)
//! ```
//!
//! All pieces share one priority queue keyed by error estimate, so the
//! tolerance is met on the total rather than piecewise.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

pub const DEFAULT_MAX_EVALUATIONS: usize = 1_000_000;

/// Limit of the outward search in [`effective_support`].
pub const SUPPORT_SEARCH_LIMIT: f64 = 1e6;

/// Without breakpoints a full-line integral starts from uniform cells on
/// `[-64, 64]` plus two mapped tails.
const FULL_LINE_SEED_HALF_WIDTH: f64 = 64.0;
const FULL_LINE_SEED_CELLS: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    FullLine,
    /// `[a, inf)`
    HalfLineFrom(f64),
    /// `[a, b]` with `a < b`
    Interval(f64, f64),
}

/// Closed interval `[lo, hi]`; may be degenerate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// Widen by `fraction` of the width on each side.
    pub fn padded(&self, fraction: f64) -> Self {
        let pad = fraction * self.width();
        Self::new(self.lo - pad, self.hi + pad)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub evaluations: usize,
}

/// Tolerances and evaluation budget for [`Integrator::integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integrator {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_evaluations: usize,
}

impl Default for Integrator {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-9,
            max_evaluations: DEFAULT_MAX_EVALUATIONS,
        }
    }
}

/// Integrate `f` over `domain`; see [`Integrator::integrate`].
pub fn integrate<F>(f: F, domain: Domain, abs_tol: f64, rel_tol: f64) -> Result<QuadResult>
where
    F: Fn(f64) -> f64,
{
    Integrator::new(abs_tol, rel_tol).integrate(f, domain)
}

impl Integrator {
    pub fn new(abs_tol: f64, rel_tol: f64) -> Self {
        Self {
            abs_tol,
            rel_tol,
            ..Self::default()
        }
    }

    pub fn with_max_evaluations(mut self, max_evaluations: usize) -> Self {
        self.max_evaluations = max_evaluations;
        self
    }

    pub fn integrate<F>(&self, f: F, domain: Domain) -> Result<QuadResult>
    where
        F: Fn(f64) -> f64,
    {
        self.integrate_with_breaks(f, domain, &[])
    }

    /// Like [`integrate`](Self::integrate) but seeds the subdivision with
    /// `breaks`. Points outside the domain are ignored. For unbounded domains
    /// the outermost breaks become the anchors of the tail maps.
    pub fn integrate_with_breaks<F>(&self, f: F, domain: Domain, breaks: &[f64]) -> Result<QuadResult>
    where
        F: Fn(f64) -> f64,
    {
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) {
            return Err(Error::Domain("quadrature tolerances must be positive".into()));
        }
        let pieces = self.pieces(domain, breaks)?;
        self.run(&f, &pieces)
    }

    fn pieces(&self, domain: Domain, breaks: &[f64]) -> Result<Vec<Piece>> {
        let inside = |x: f64| match domain {
            Domain::FullLine => true,
            Domain::HalfLineFrom(a) => x > a,
            Domain::Interval(a, b) => x > a && x < b,
        };
        let mut pts: Vec<f64> = breaks.iter().copied().filter(|x| x.is_finite() && inside(*x)).collect();
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
        pts.dedup();

        let mut pieces = Vec::new();
        let finite = |pieces: &mut Vec<Piece>, pts: &[f64]| {
            for w in pts.windows(2) {
                if w[1] > w[0] {
                    pieces.push(Piece::new(Map::Identity, w[0], w[1]));
                }
            }
        };
        match domain {
            Domain::Interval(a, b) => {
                if !(a < b) || !a.is_finite() || !b.is_finite() {
                    return Err(Error::Domain(format!("invalid interval [{a}, {b}]")));
                }
                let mut all = vec![a];
                all.extend(pts);
                all.push(b);
                finite(&mut pieces, &all);
            }
            Domain::HalfLineFrom(a) => {
                if !a.is_finite() {
                    return Err(Error::Domain(format!("invalid half-line start {a}")));
                }
                let mut all = vec![a];
                all.extend(pts);
                finite(&mut pieces, &all);
                let anchor = *all.last().unwrap_or(&a);
                pieces.push(Piece::new(Map::RightTail(anchor), 0.0, 1.0));
            }
            Domain::FullLine => {
                if pts.is_empty() {
                    pts = (0..=FULL_LINE_SEED_CELLS)
                        .map(|i| FULL_LINE_SEED_HALF_WIDTH * (2.0 * i as f64 / FULL_LINE_SEED_CELLS as f64 - 1.0))
                        .collect();
                }
                pieces.push(Piece::new(Map::LeftTail(pts[0]), 0.0, 1.0));
                finite(&mut pieces, &pts);
                pieces.push(Piece::new(Map::RightTail(pts[pts.len() - 1]), 0.0, 1.0));
            }
        }
        Ok(pieces)
    }

    fn run<F>(&self, f: &F, pieces: &[Piece]) -> Result<QuadResult>
    where
        F: Fn(f64) -> f64,
    {
        let mut evaluations = 0usize;
        let mut heap = BinaryHeap::new();
        // segments too narrow to split further
        let mut frozen_value = 0.0;
        let mut frozen_error = 0.0;

        for p in pieces {
            let seg = gk21(f, p.map, p.a, p.b)?;
            evaluations += 21;
            heap.push(seg);
        }

        loop {
            let (value, error) = heap
                .iter()
                .fold((frozen_value, frozen_error), |(v, e), s| (v + s.value, e + s.error));
            let target = self.abs_tol.max(self.rel_tol * value.abs());
            if error <= target {
                return Ok(QuadResult {
                    value,
                    abs_error_estimate: error,
                    evaluations,
                });
            }
            let worst = match heap.pop() {
                Some(s) => s,
                None => {
                    return Err(Error::NoConvergence {
                        value,
                        error,
                        evaluations,
                    })
                }
            };
            if evaluations + 42 > self.max_evaluations {
                return Err(Error::NoConvergence {
                    value,
                    error,
                    evaluations,
                });
            }
            let mid = 0.5 * (worst.a + worst.b);
            let tiny = 64.0 * f64::EPSILON * (worst.a.abs() + worst.b.abs()).max(f64::MIN_POSITIVE);
            if worst.b - worst.a <= tiny || mid <= worst.a || mid >= worst.b {
                frozen_value += worst.value;
                frozen_error += worst.error;
                continue;
            }
            let left = gk21(f, worst.map, worst.a, mid)?;
            let right = gk21(f, worst.map, mid, worst.b)?;
            evaluations += 42;
            heap.push(left);
            heap.push(right);
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Map {
    Identity,
    LeftTail(f64),
    RightTail(f64),
}

impl Map {
    /// Returns `(x, dx/dt)`, or `None` at the (excluded) endpoint of an
    /// unbounded map.
    #[inline]
    fn apply(self, t: f64) -> Option<(f64, f64)> {
        match self {
            Map::Identity => Some((t, 1.0)),
            Map::RightTail(a) => {
                let d = 1.0 - t;
                if d <= 0.0 {
                    return None;
                }
                Some((a + t / d, 1.0 / (d * d)))
            }
            Map::LeftTail(b) => {
                let d = 1.0 - t;
                if d <= 0.0 {
                    return None;
                }
                Some((b - t / d, 1.0 / (d * d)))
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Piece {
    map: Map,
    a: f64,
    b: f64,
}

impl Piece {
    fn new(map: Map, a: f64, b: f64) -> Self {
        Self { map, a, b }
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    map: Map,
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

#[inline]
fn mapped<F: Fn(f64) -> f64>(f: &F, map: Map, t: f64) -> Result<f64> {
    let Some((x, jac)) = map.apply(t) else {
        return Ok(0.0);
    };
    if !x.is_finite() {
        return Ok(0.0);
    }
    let fx = f(x);
    if !fx.is_finite() {
        return Err(Error::NonFiniteIntegrand { x });
    }
    if fx == 0.0 {
        return Ok(0.0);
    }
    let g = fx * jac;
    if g.is_finite() {
        Ok(g)
    } else {
        Err(Error::NonFiniteIntegrand { x })
    }
}

fn gk21<F: Fn(f64) -> f64>(f: &F, map: Map, a: f64, b: f64) -> Result<Segment> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = mapped(f, map, center)?;

    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    let mut res_gauss = 0.0;
    let mut res_kronrod = f_center * WGK[10];
    let mut res_abs = res_kronrod.abs();

    #[allow(clippy::needless_range_loop)]
    for j in 0..5 {
        let jtw = 2 * j + 1;
        let dx = half * XGK[jtw];
        let f1 = mapped(f, map, center - dx)?;
        let f2 = mapped(f, map, center + dx)?;
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        res_gauss += WG[j] * (f1 + f2);
        res_kronrod += WGK[jtw] * (f1 + f2);
        res_abs += WGK[jtw] * (f1.abs() + f2.abs());
    }
    for j in 0..5 {
        let jtwm1 = 2 * j;
        let dx = half * XGK[jtwm1];
        let f1 = mapped(f, map, center - dx)?;
        let f2 = mapped(f, map, center + dx)?;
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        res_kronrod += WGK[jtwm1] * (f1 + f2);
        res_abs += WGK[jtwm1] * (f1.abs() + f2.abs());
    }

    let mean = 0.5 * res_kronrod;
    let mut res_asc = WGK[10] * (f_center - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let err = ((res_kronrod - res_gauss) * half).abs();
    let value = res_kronrod * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();

    Ok(Segment {
        map,
        a,
        b,
        value,
        error: rescale_error(err, res_abs, res_asc),
    })
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err;
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

/// Smallest interval around `center` outside of which `f < threshold`.
///
/// Each side is bracketed by outward doubling (starting at a unit step) and
/// the crossing is then located by a scan of the last bracket followed by
/// bisection. Assumes the tails of `f` decay monotonically past the crossing,
/// which holds for every bound-state density here. If `f` is below threshold
/// everywhere the interval is degenerate at `center`.
pub fn effective_support<F>(f: F, center: f64, threshold: f64) -> Result<Interval>
where
    F: Fn(f64) -> f64,
{
    let right = edge(&f, center, threshold, 1.0)?;
    let left = edge(&f, center, threshold, -1.0)?;
    Ok(Interval::new(center + left, center + right))
}

/// Signed offset from `center` of the outermost point with `f >= threshold`
/// in direction `dir`, or 0 if there is none.
fn edge<F: Fn(f64) -> f64>(f: &F, center: f64, threshold: f64, dir: f64) -> Result<f64> {
    const PROBES: usize = 16;
    const SCAN: usize = 256;

    let above = |d: f64| f(center + dir * d) >= threshold;
    // a bracket [inner, outer] is accepted once f stays below threshold on
    // a sample of [outer, 2 outer]
    let quiet_beyond = |d: f64| (0..=PROBES).all(|i| !above(d * (1.0 + i as f64 / PROBES as f64)));

    let mut inner = 0.0;
    let mut outer = 1.0;
    while !quiet_beyond(outer) {
        inner = outer;
        outer *= 2.0;
        if outer > SUPPORT_SEARCH_LIMIT {
            return Err(Error::SupportNotFound);
        }
    }

    // scan [inner, outer] from the outside for the first point at or above threshold
    let step = (outer - inner) / SCAN as f64;
    let mut hit = None;
    for i in (0..=SCAN).rev() {
        let d = inner + step * i as f64;
        if above(d) {
            hit = Some(d);
            break;
        }
    }
    let Some(mut lo) = hit else {
        if inner == 0.0 {
            return Ok(0.0);
        }
        // the crossing is below the scan resolution at the inner end
        return Ok(dir * inner);
    };
    let mut hi = (lo + step).min(outer);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if above(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(dir * hi)
}

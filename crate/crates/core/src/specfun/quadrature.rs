//! Quadrature rules and semi-axis integration.
//!
//! Two routes are offered for ∫₀^∞:
//!
//! * integrands declared as `g(x)·e^{−c x}` go through Gauss–Laguerre rules of
//!   increasing order until two consecutive orders agree;
//! * everything else is mapped to `[0, 1)` with `x = t / (1 − t)` and handled by
//!   globally adaptive Gauss–Kronrod (7/15) panels that bisect the panel with
//!   the largest `|K15 − G7|` until the total error is below tolerance.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::gamma::ln_gamma_unchecked;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RuleKind {
    GaussLaguerre,
    Trapezoid,
    AdaptivePanel,
}

/// A fixed set of abscissas and positive weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    kind: RuleKind,
}

impl QuadratureRule {
    /// Checks the invariants: equal lengths, strictly increasing nodes and
    /// strictly positive weights.
    pub fn new(nodes: Vec<f64>, weights: Vec<f64>, kind: RuleKind) -> Result<Self> {
        if nodes.len() != weights.len() || nodes.is_empty() {
            return Err(Error::domain(
                "QuadratureRule",
                format!("{} nodes but {} weights", nodes.len(), weights.len()),
            ));
        }
        if nodes.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::domain("QuadratureRule", "nodes must be strictly increasing"));
        }
        if weights.iter().any(|w| !(*w > 0.0) || !w.is_finite()) {
            return Err(Error::domain("QuadratureRule", "weights must be positive and finite"));
        }
        Ok(Self { nodes, weights, kind })
    }

    /// Generalized Gauss–Laguerre rule for the weight x^α e^{−x} on (0, ∞).
    pub fn gauss_laguerre(order: usize, alpha: f64) -> Result<Self> {
        let (nodes, weights) = gauss_laguerre_nodes(order, alpha)?;
        Self::new(nodes, weights, RuleKind::GaussLaguerre)
    }

    /// Composite trapezoid rule with `points` equispaced nodes on `[a, b]`.
    pub fn trapezoid(a: f64, b: f64, points: usize) -> Result<Self> {
        if points < 2 || !(b > a) {
            return Err(Error::domain(
                "QuadratureRule::trapezoid",
                format!("need points >= 2 and b > a, got {points} on [{a}, {b}]"),
            ));
        }
        let h = (b - a) / (points - 1) as f64;
        let nodes = (0..points).map(|i| a + h * i as f64).collect();
        let weights = (0..points)
            .map(|i| if i == 0 || i == points - 1 { 0.5 * h } else { h })
            .collect();
        Self::new(nodes, weights, RuleKind::Trapezoid)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn kind(&self) -> RuleKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Σ w_i f(x_i).
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(x, w)| w * f(*x)).sum()
    }
}

pub const MAX_GAUSS_LAGUERRE_ORDER: usize = 512;

/// Nodes and weights of the order-`n` generalized Gauss–Laguerre rule.
///
/// Newton iteration on L_n^α with the usual asymptotic starting guesses. The
/// recurrence is rescaled on the fly so that large orders do not overflow;
/// weights come from the Christoffel function.
fn gauss_laguerre_nodes(n: usize, alpha: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 || n > MAX_GAUSS_LAGUERRE_ORDER {
        return Err(Error::domain(
            "gauss_laguerre",
            format!("order {n} outside 1..={MAX_GAUSS_LAGUERRE_ORDER}"),
        ));
    }
    if !(alpha > -1.0) {
        return Err(Error::domain(
            "gauss_laguerre",
            format!("alpha = {alpha} must exceed -1"),
        ));
    }
    let nf = n as f64;
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let mut z = 0.0;
    for i in 0..n {
        if i == 0 {
            z = (1.0 + alpha) * (3.0 + 0.92 * alpha) / (1.0 + 2.4 * nf + 1.8 * alpha);
        } else if i == 1 {
            z += (15.0 + 6.25 * alpha) / (1.0 + 0.9 * alpha + 2.5 * nf);
        } else {
            let ai = (i - 1) as f64;
            z += ((1.0 + 2.55 * ai) / (1.9 * ai) + 1.26 * ai * alpha / (1.0 + 3.5 * ai)) * (z - x[i - 2])
                / (1.0 + 0.3 * alpha);
        }
        let mut converged = false;
        let mut prev_step = f64::INFINITY;
        for _ in 0..200 {
            let mut p1 = 1.0;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = ((2.0 * jf + 1.0 + alpha - z) * p2 - (jf + alpha) * p3) / (jf + 1.0);
                if p1.abs() > 1e150 {
                    p1 *= 1e-150;
                    p2 *= 1e-150;
                }
            }
            let pp = (nf * p1 - (nf + alpha) * p2) / z;
            let z1 = z;
            z = z1 - p1 / pp;
            let step = (z - z1).abs();
            // Stop at rounding level, or once the step no longer shrinks
            // quadratically near it (the polynomial is evaluated with noise).
            if step <= 2.0 * f64::EPSILON * z.abs() || (step <= 1e-11 * z.abs() && step >= 0.5 * prev_step) {
                converged = true;
                break;
            }
            prev_step = step;
        }
        if !converged {
            return Err(Error::NonConvergence {
                what: "gauss_laguerre node",
                estimate: z,
                error_bound: f64::NAN,
            });
        }
        x[i] = z;
        w[i] = christoffel_weight(z, n, alpha);
    }
    Ok((x, w))
}

/// 1 / Σ_{k<n} p_k(x)² with p_k orthonormal for x^α e^{−x} on (0, ∞).
///
/// At a Gauss node this equals the Gauss weight, and unlike the derivative
/// formula it is insensitive to the last bits of the node.
fn christoffel_weight(x: f64, n: usize, alpha: f64) -> f64 {
    let mut prev = 0.0;
    let mut cur = (-0.5 * ln_gamma_unchecked(alpha + 1.0)).exp();
    let mut sum = cur * cur;
    let mut scale_exp = 0i32;
    for k in 0..n - 1 {
        let kf = k as f64;
        let b_k = (kf * (kf + alpha)).sqrt();
        let b_next = ((kf + 1.0) * (kf + 1.0 + alpha)).sqrt();
        let next = ((x - (2.0 * kf + alpha + 1.0)) * cur - b_k * prev) / b_next;
        prev = cur;
        cur = next;
        sum += cur * cur;
        if sum > 1e200 {
            // Power-of-two rescaling is exact.
            let e = 300;
            let f = 2f64.powi(-e);
            prev *= f;
            cur *= f;
            sum *= f * f;
            scale_exp += 2 * e;
        }
    }
    let mut w = 1.0 / sum;
    let mut rest = scale_exp;
    while rest > 0 {
        let e = rest.min(1000);
        w *= 2f64.powi(-e);
        rest -= e;
    }
    w
}

/// Gauss–Legendre nodes and weights on [−1, 1] by Newton iteration.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    let nf = n as f64;
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut pp = 1.0;
        for _ in 0..100 {
            let mut p1 = 1.0;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = ((2.0 * jf + 1.0) * z * p2 - jf * p3) / (jf + 1.0);
            }
            pp = nf * (z * p1 - p2) / (z * z - 1.0);
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 2.0 * f64::EPSILON {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * pp * pp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

// Gauss–Kronrod 7/15 abscissas on [0, 1] (symmetric about zero) and weights.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// One 15-point Kronrod panel: (K15 estimate, |K15 − G7|, Σ w|f|).
fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    let mut abs = WGK[7] * fc.abs();
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        kron += WGK[j] * (f1 + f2);
        abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    (kron * half, ((kron - gauss) * half).abs(), abs * half.abs())
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    abs: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Result of an integration with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

/// Budget for the adaptive panel integrator.
#[derive(Debug, Clone, Copy)]
pub struct AdaptiveConfig {
    pub max_panels: usize,
    pub initial_panels: usize,
}

impl Default for AdaptiveConfig {
    fn default() -> Self {
        Self {
            max_panels: 4000,
            initial_panels: 8,
        }
    }
}

/// Globally adaptive G7/K15 integration of `f` over the finite interval `[a, b]`.
pub fn integrate_interval(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    tol: f64,
    config: AdaptiveConfig,
) -> Result<Estimate> {
    if !(tol > 0.0) {
        return Err(Error::domain(
            "integrate_interval",
            format!("tol = {tol} must be positive"),
        ));
    }
    if !(b > a) {
        return Err(Error::domain(
            "integrate_interval",
            format!("empty interval [{a}, {b}]"),
        ));
    }
    let mut heap = BinaryHeap::new();
    let init = config.initial_panels.max(1);
    let h = (b - a) / init as f64;
    for i in 0..init {
        let lo = a + h * i as f64;
        let hi = if i + 1 == init { b } else { lo + h };
        let (value, error, abs) = gk15(f, lo, hi);
        heap.push(Panel {
            a: lo,
            b: hi,
            value,
            error,
            abs,
        });
    }
    let mut evaluations = 15 * init;
    loop {
        let (value, error, abs): (f64, f64, f64) = heap.iter().fold((0.0, 0.0, 0.0), |acc, p| {
            (acc.0 + p.value, acc.1 + p.error, acc.2 + p.abs)
        });
        if !value.is_finite() {
            return Err(Error::NonConvergence {
                what: "adaptive quadrature (non-finite integrand)",
                estimate: value,
                error_bound: error,
            });
        }
        let floor = 50.0 * f64::EPSILON * abs;
        if error <= (tol * value.abs()).max(floor) {
            return Ok(Estimate {
                value,
                error,
                evaluations,
            });
        }
        if heap.len() >= config.max_panels {
            return Err(Error::NonConvergence {
                what: "adaptive quadrature",
                estimate: value,
                error_bound: error,
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            // The panel cannot be split further in f64.
            return Err(Error::NonConvergence {
                what: "adaptive quadrature (panel underflow)",
                estimate: value,
                error_bound: error,
            });
        }
        for (lo, hi) in [(worst.a, mid), (mid, worst.b)] {
            let (value, error, abs) = gk15(f, lo, hi);
            heap.push(Panel {
                a: lo,
                b: hi,
                value,
                error,
                abs,
            });
        }
        evaluations += 30;
    }
}

/// What is known about an integrand on (0, ∞).
pub enum SemiAxisIntegrand<'a> {
    /// A plain continuous, absolutely integrable function.
    General(&'a dyn Fn(f64) -> f64),
    /// `smooth(x) · e^{−rate·x}` with `smooth` of at most polynomial growth.
    ExpWeighted { smooth: &'a dyn Fn(f64) -> f64, rate: f64 },
}

const LAGUERRE_ORDERS: [usize; 5] = [16, 32, 64, 128, 256];

/// ∫₀^∞ of the integrand with estimated relative error ≤ `tol`.
pub fn integrate_semiaxis(integrand: SemiAxisIntegrand<'_>, tol: f64) -> Result<f64> {
    integrate_semiaxis_detailed(integrand, tol, AdaptiveConfig::default()).map(|e| e.value)
}

pub fn integrate_semiaxis_detailed(
    integrand: SemiAxisIntegrand<'_>,
    tol: f64,
    config: AdaptiveConfig,
) -> Result<Estimate> {
    if !(tol > 0.0) {
        return Err(Error::domain(
            "integrate_semiaxis",
            format!("tol = {tol} must be positive"),
        ));
    }
    match integrand {
        SemiAxisIntegrand::ExpWeighted { smooth, rate } => {
            if !(rate > 0.0) {
                return Err(Error::domain(
                    "integrate_semiaxis",
                    format!("decay rate {rate} must be positive"),
                ));
            }
            let mut prev: Option<f64> = None;
            let mut evaluations = 0;
            let mut last_diff = f64::INFINITY;
            for order in LAGUERRE_ORDERS {
                let rule = QuadratureRule::gauss_laguerre(order, 0.0)?;
                let value = rule.apply(|u| smooth(u / rate)) / rate;
                evaluations += order;
                if let Some(p) = prev {
                    last_diff = (value - p).abs();
                    if last_diff <= tol * value.abs() || last_diff == 0.0 {
                        return Ok(Estimate {
                            value,
                            error: last_diff,
                            evaluations,
                        });
                    }
                }
                prev = Some(value);
            }
            Err(Error::NonConvergence {
                what: "gauss-laguerre integration",
                estimate: prev.unwrap_or(f64::NAN),
                error_bound: last_diff,
            })
        }
        SemiAxisIntegrand::General(f) => {
            let mapped = |t: f64| {
                let one_minus = 1.0 - t;
                let x = t / one_minus;
                let v = f(x) / (one_minus * one_minus);
                if v.is_finite() {
                    v
                } else {
                    0.0
                }
            };
            integrate_interval(&mapped, 0.0, 1.0, tol, config)
        }
    }
}

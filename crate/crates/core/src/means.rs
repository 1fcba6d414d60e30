//! Bivariate means: logarithmic, identric, generalized logarithmic of order
//! `p`, and the arithmetic-geometric mean.
//!
//! Every mean is symmetric, so each function works on the ordered view
//! `(hi, lo)` of its [`MeanInput`]. All means are extended to `a` when
//! `a == b`.

use serde::{Deserialize, Serialize};

/// Default relative stopping tolerance of [`agm`].
pub const DEFAULT_AGM_REL_TOL: f64 = 4.0 * f64::EPSILON;

/// Below this relative gap `|b - a| / max(a, b)`, [`gen_log_mean`] returns the
/// midpoint; the error is `O((b - a)^2)`.
pub const NEAR_EQUAL_REL_GAP: f64 = 1e-9;

/// Below this `|p|`, [`gen_log_mean`] switches to the cumulant expansion
/// around the identric mean.
pub const SMALL_ORDER_SWITCH: f64 = 1e-6;

const MAX_AGM_ITERATIONS: usize = 64;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MeanError {
    #[error("argument {name} = {value} must be finite")]
    NonFinite { name: &'static str, value: f64 },
    #[error("argument {name} = {value} must be positive")]
    NonPositive { name: &'static str, value: f64 },
    #[error("order p = {0} must be finite")]
    NonFiniteOrder(f64),
    #[error("relative tolerance {0} must lie in [{min}, 1)", min = f64::EPSILON)]
    ToleranceOutOfRange(f64),
}

/// A validated pair of positive, finite reals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanInput {
    a: f64,
    b: f64,
}

impl MeanInput {
    pub fn new(a: f64, b: f64) -> Result<Self, MeanError> {
        for (name, value) in [("a", a), ("b", b)] {
            if !value.is_finite() {
                return Err(MeanError::NonFinite { name, value });
            }
            if value <= 0.0 {
                return Err(MeanError::NonPositive { name, value });
            }
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// `(max, min)` of the pair.
    pub fn ordered(&self) -> (f64, f64) {
        if self.a >= self.b {
            (self.a, self.b)
        } else {
            (self.b, self.a)
        }
    }

    pub fn swapped(&self) -> Self {
        Self {
            a: self.b,
            b: self.a,
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.a == self.b
    }
}

/// `ln(hi / lo)` for `hi >= lo > 0`, accurate when the two are close and safe
/// when their quotient overflows.
fn log_ratio(hi: f64, lo: f64) -> f64 {
    let rel = (hi - lo) / lo;
    if rel < 1.0 {
        rel.ln_1p()
    } else {
        hi.ln() - lo.ln()
    }
}

/// `base * exp(exponent)` that only goes through the log domain when the
/// factor itself would overflow.
fn scale_exp(base: f64, exponent: f64) -> f64 {
    if exponent.abs() < 700.0 {
        base * exponent.exp()
    } else {
        (base.ln() + exponent).exp()
    }
}

fn clamp_between(value: f64, hi: f64, lo: f64) -> f64 {
    value.clamp(lo, hi)
}

pub fn arithmetic_mean(input: &MeanInput) -> f64 {
    let (hi, lo) = input.ordered();
    lo + (hi - lo) / 2.0
}

pub fn geometric_mean(input: &MeanInput) -> f64 {
    let (hi, lo) = input.ordered();
    clamp_between(hi.sqrt() * lo.sqrt(), hi, lo)
}

/// Logarithmic mean `(b - a) / (ln b - ln a)`.
pub fn log_mean(input: &MeanInput) -> f64 {
    let (hi, lo) = input.ordered();
    if hi == lo {
        return hi;
    }
    clamp_between((hi - lo) / log_ratio(hi, lo), hi, lo)
}

/// Identric mean `(1/e) (b^b / a^a)^(1/(b-a))`, evaluated in log space as
/// `hi * exp(r / expm1(r) - 1)` with `r = ln(hi/lo)`.
pub fn identric_mean(input: &MeanInput) -> f64 {
    let (hi, lo) = input.ordered();
    if hi == lo {
        return hi;
    }
    let r = log_ratio(hi, lo);
    let exponent = r / r.exp_m1() - 1.0;
    clamp_between(hi * exponent.exp(), hi, lo)
}

/// `ln(expm1(x) / x)`, continuous through `x = 0`.
fn log_expm1_over_x(x: f64) -> f64 {
    if x.abs() < 1e-3 {
        let x2 = x * x;
        x / 2.0 + x2 / 24.0 - x2 * x2 / 2880.0
    } else if x > 700.0 {
        x + (-(-x).exp()).ln_1p() - x.ln()
    } else {
        (x.exp_m1() / x).ln()
    }
}

/// Generalized logarithmic mean of order `p`.
///
/// `p = -1` and `p = 0` dispatch to [`log_mean`] and [`identric_mean`]. Nearly
/// equal arguments return the midpoint, and `0 < |p| < 1e-6` uses a cumulant
/// expansion about the identric mean since the direct quotient loses about
/// `|log10 p|` digits there.
pub fn gen_log_mean(p: f64, input: &MeanInput) -> Result<f64, MeanError> {
    if !p.is_finite() {
        return Err(MeanError::NonFiniteOrder(p));
    }
    let (hi, lo) = input.ordered();
    if hi == lo {
        return Ok(hi);
    }
    if p == -1.0 {
        return Ok(log_mean(input));
    }
    if p == 0.0 {
        return Ok(identric_mean(input));
    }
    if hi - lo < NEAR_EQUAL_REL_GAP * hi {
        return Ok(arithmetic_mean(input));
    }
    if p.abs() < SMALL_ORDER_SWITCH {
        return Ok(clamp_between(small_order_mean(p, input), hi, lo));
    }

    // L(p) = lo * [expm1(q r) / (q expm1(r))]^(1/p),  q = p + 1, r = ln(hi/lo)
    let r = log_ratio(hi, lo);
    let from_lo = if p.abs() < 0.5 && (p * r).abs() < 600.0 {
        // expm1(q r) = expm1(r) + e^r expm1(p r) keeps both terms O(p)
        ((-(p * r).exp_m1() / (-r).exp_m1()).ln_1p() - p.ln_1p()) / p
    } else {
        let q = p + 1.0;
        (log_expm1_over_x(q * r) - log_expm1_over_x(r)) / p
    };
    let value = if from_lo > r / 2.0 {
        scale_exp(hi, from_lo - r)
    } else {
        scale_exp(lo, from_lo)
    };
    Ok(clamp_between(value, hi, lo))
}

/// `ln L(p) = ln I + k2 p / 2 + k3 p^2 / 6 + O(p^3)`, where `k2`, `k3` are the
/// cumulants of `ln X` for `X` uniform on `[lo, hi]`.
fn small_order_mean(p: f64, input: &MeanInput) -> f64 {
    let (hi, lo) = input.ordered();
    let identric = identric_mean(input);
    let u = lo / identric;
    let v = hi / identric;
    let (lu, lv) = (u.ln(), v.ln());
    let width = v - u;
    let n2 = v * lv * lv - u * lu * lu;
    let n3 = v * lv * lv * lv - u * lu * lu * lu;
    let k2 = n2 / width;
    let k3 = (n3 - 3.0 * n2) / width;
    identric * (k2 * p / 2.0 + k3 * p * p / 6.0).exp()
}

/// Iterates of the arithmetic-geometric mean, including the starting pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgmTrace {
    iterates: Vec<(f64, f64)>,
    limit: f64,
    rel_tol: f64,
}

impl AgmTrace {
    /// `(arithmetic, geometric)` pairs; the first is the ordered input.
    pub fn iterates(&self) -> &[(f64, f64)] {
        &self.iterates
    }

    pub fn limit(&self) -> f64 {
        self.limit
    }

    /// Number of update steps after initialization.
    pub fn iterations(&self) -> usize {
        self.iterates.len() - 1
    }

    pub fn rel_tol(&self) -> f64 {
        self.rel_tol
    }

    pub fn final_gap(&self) -> f64 {
        let (a, b) = self.iterates[self.iterates.len() - 1];
        a - b
    }
}

/// `x * 2^k`, split in two so neither factor over- or underflows.
fn scale_pow2(x: f64, k: i32) -> f64 {
    let half = k / 2;
    x * 2f64.powi(half) * 2f64.powi(k - half)
}

/// Arithmetic-geometric mean by the coupled iteration
/// `a' = (a + b) / 2, b' = sqrt(a b)`, stopped once `a - b <= rel_tol * a`.
///
/// The pair is scaled by a power of two near `1 / max(a, b)` before iterating,
/// which is exact, and the trace is reported in the original scale. The geometric iterate is clamped to the
/// arithmetic one so that `b_k <= limit <= a_k` survives round-off.
pub fn agm(input: &MeanInput, rel_tol: f64) -> Result<AgmTrace, MeanError> {
    if !(f64::EPSILON..1.0).contains(&rel_tol) {
        return Err(MeanError::ToleranceOutOfRange(rel_tol));
    }
    let (hi, lo) = input.ordered();
    let shift = -(hi.log2().floor() as i32);
    let mut a = scale_pow2(hi, shift);
    let mut b = scale_pow2(lo, shift);
    let mut iterates = vec![(hi, lo)];
    for _ in 0..MAX_AGM_ITERATIONS {
        if a - b <= rel_tol * a {
            break;
        }
        let next_a = 0.5 * (a + b);
        let next_b = (a * b).sqrt().min(next_a);
        if next_a == a && next_b == b {
            break;
        }
        a = next_a;
        b = next_b;
        iterates.push((scale_pow2(a, -shift), scale_pow2(b, -shift)));
    }
    // the midpoint of the last pair is one further (exact-to-round-off) step
    let (last_a, last_b) = iterates[iterates.len() - 1];
    let limit = scale_pow2(0.5 * (a + b), -shift).clamp(last_b, last_a);
    Ok(AgmTrace {
        iterates,
        limit,
        rel_tol,
    })
}

/// `M(a, b)` with the default tolerance.
pub fn agm_mean(input: &MeanInput) -> f64 {
    agm(input, DEFAULT_AGM_REL_TOL)
        .expect("default tolerance is in range")
        .limit()
}

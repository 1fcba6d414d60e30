//! Checks that together instantiate the sharp bound `L(a,b) < M(a,b) <
//! (pi/2) L(a,b)`: exact coefficient identities and monotonicity, the
//! cross-method consistency of `K`, the monotone ratio `M(1,t) / L(1,t)`,
//! and the classical mean orderings.
//!
//! Each check yields one [`VerificationReport`]. Checks are deterministic
//! given a seed, and [`run_all`] returns reports sorted by claim id.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::coefficients::{self, CoefficientTable, REFERENCE_A, REFERENCE_A_RATIO};
use crate::elliptic::{self, Modulus, DEFAULT_PANEL_BUDGET, DEFAULT_TERM_BUDGET};
use crate::means::{self, MeanInput};
use crate::quadrature;
use crate::rational::ExactRational;

/// Relative slack on the double inequality that absorbs round-off.
pub const DOUBLE_INEQUALITY_SLACK: f64 = 1e-12;
pub const THREE_WAY_TOL: f64 = 1e-11;
pub const NEAR_SINGULAR_TOL: f64 = 1e-9;
pub const NEAR_SINGULAR_MODULUS: f64 = 0.999_999;
pub const RECIPROCAL_TOL: f64 = 1e-11;
/// `r(t)` must exceed `pi/2 - SHARPNESS_LOWER_GAP` at `t = 1e-8`; the approach
/// to `pi/2` is only logarithmic, `r(t) ~ (pi/2) ln(1/t) / ln(4/t)`.
pub const SHARPNESS_LOWER_GAP: f64 = 0.15;
pub const SHARPNESS_SMALL_T: f64 = 1e-8;
/// `r(1 - eps) - 1` must stay below this at `eps = 1e-4`.
pub const SHARPNESS_UPPER_GAP: f64 = 0.01;
pub const SHARPNESS_EPS: f64 = 1e-4;
pub const SAMPLE_LOG10_RANGE: (f64, f64) = (-3.0, 3.0);
/// Sampled pairs closer than this (relative) are redrawn.
pub const SAMPLE_MIN_REL_GAP: f64 = 1e-12;
pub const MEAN_ORDER_GRID: [f64; 7] = [-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0];
pub const WALLIS_TOL: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum VerifyError {
    #[error("invalid scan grid: {0}")]
    InvalidGrid(String),
    #[error("evaluation failed at t = {t}: {reason}")]
    Evaluation { t: f64, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// First failing input of a check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub input: String,
    pub observed: String,
    pub expected: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub claim_id: String,
    /// Plain statement of the claim being checked.
    pub statement: String,
    pub status: Status,
    pub checked_points: u64,
    pub witness: Option<Witness>,
    pub tolerances: BTreeMap<String, f64>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
        };
        write!(
            f,
            "{tag} {} ({} points): {}",
            self.claim_id, self.checked_points, self.statement
        )?;
        if let Some(w) = &self.witness {
            write!(
                f,
                "\n     at {}: observed {}, expected {}",
                w.input, w.observed, w.expected
            )?;
        }
        Ok(())
    }
}

/// Accumulates points and keeps the first failure.
struct Check {
    report: VerificationReport,
}

impl Check {
    fn new(claim_id: &str, statement: &str) -> Self {
        Self {
            report: VerificationReport {
                claim_id: claim_id.to_owned(),
                statement: statement.to_owned(),
                status: Status::Pass,
                checked_points: 0,
                witness: None,
                tolerances: BTreeMap::new(),
            },
        }
    }

    fn tolerance(mut self, name: &str, value: f64) -> Self {
        self.report.tolerances.insert(name.to_owned(), value);
        self
    }

    /// Records one checked point; on the first failure stores the witness.
    fn point(&mut self, ok: bool, witness: impl FnOnce() -> Witness) {
        self.report.checked_points += 1;
        if !ok && self.report.status == Status::Pass {
            self.report.status = Status::Fail;
            self.report.witness = Some(witness());
        }
    }

    fn finish(mut self) -> VerificationReport {
        if self.report.checked_points == 0 {
            self.report.status = Status::Fail;
            self.report.checked_points = 1;
            self.report.witness = Some(Witness {
                input: "empty range".into(),
                observed: "no points".into(),
                expected: "at least one point".into(),
            });
        }
        self.report
    }
}

fn witness(
    input: impl fmt::Display,
    observed: impl fmt::Display,
    expected: impl fmt::Display,
) -> Witness {
    Witness {
        input: input.to_string(),
        observed: observed.to_string(),
        expected: expected.to_string(),
    }
}

fn missing() -> String {
    "missing".to_owned()
}

fn show(value: Option<&ExactRational>) -> String {
    value.map_or_else(missing, ToString::to_string)
}

/// Verification depth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    Quick,
    Full,
}

impl Profile {
    pub fn k_max(self) -> u32 {
        match self {
            Profile::Quick => 50,
            Profile::Full => 500,
        }
    }

    pub fn samples(self) -> usize {
        match self {
            Profile::Quick => 1_000,
            Profile::Full => 10_000,
        }
    }
}

pub const RATIO_SCAN_POINTS: usize = 200;
pub const THREE_WAY_MODULI: usize = 100;
pub const RECIPROCAL_PAIRS: usize = 1_000;
pub const DEFAULT_SEED: u64 = 42;

// Independent streams of one seed.
const STREAM_DOUBLE_INEQUALITY: u64 = 1;
const STREAM_MEAN_ORDER: u64 = 2;
const STREAM_RECIPROCAL: u64 = 3;
const STREAM_THREE_WAY: u64 = 4;

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Log-uniform pair over `[1e-3, 1e3]^2`, redrawn while the two nearly coincide.
pub fn sample_pair<R: Rng>(rng: &mut R) -> MeanInput {
    let (lo, hi) = SAMPLE_LOG10_RANGE;
    loop {
        let a = 10f64.powf(rng.random_range(lo..hi));
        let b = 10f64.powf(rng.random_range(lo..hi));
        if (a - b).abs() >= SAMPLE_MIN_REL_GAP * a.max(b) {
            return MeanInput::new(a, b).expect("sampled values are positive");
        }
    }
}

// ---------------------------------------------------------------------------
// exact coefficient checks

/// `a_k / b_k` strictly increasing for `1 <= k <= k_max`, in exact arithmetic.
pub fn check_coefficient_monotonicity(k_max: u32) -> VerificationReport {
    match coefficients::build_table(k_max.max(2)) {
        Ok(table) => check_ratio_monotone(&table),
        Err(e) => {
            let mut c = Check::new("coefficients.ratio_monotone", RATIO_MONOTONE_STATEMENT);
            c.point(false, || {
                witness(format!("k_max = {k_max}"), e, "k_max >= 2")
            });
            c.finish()
        }
    }
}

const RATIO_MONOTONE_STATEMENT: &str =
    "a_k and b_k are positive, a_k is strictly decreasing and a_k / b_k is strictly increasing";

fn check_ratio_monotone(table: &CoefficientTable) -> VerificationReport {
    let mut c = Check::new("coefficients.ratio_monotone", RATIO_MONOTONE_STATEMENT);
    let mut previous: Option<(ExactRational, ExactRational)> = None;
    for k in 1..=table.k_max() {
        let (Some(a), Some(b)) = (table.a(k), table.b(k)) else {
            c.point(false, || {
                witness(format!("k = {k}"), missing(), "stored entry")
            });
            continue;
        };
        c.point(a.is_positive() && b.is_positive(), || {
            witness(
                format!("k = {k}"),
                format!("a = {a}, b = {b}"),
                "both positive",
            )
        });
        if !b.is_positive() {
            continue;
        }
        let ratio = a / b;
        if let Some((prev_a, prev_ratio)) = &previous {
            c.point(a < prev_a, || {
                witness(
                    format!("k = {k}"),
                    format!("a_k = {a}"),
                    format!("< a_(k-1) = {prev_a}"),
                )
            });
            c.point(&ratio > prev_ratio, || {
                witness(
                    format!("k = {k}"),
                    format!("a_k/b_k = {ratio}"),
                    format!("> {prev_ratio}"),
                )
            });
        }
        previous = Some((a.clone(), ratio));
    }
    c.finish()
}

fn check_a_closed_form(table: &CoefficientTable) -> VerificationReport {
    let mut c = Check::new(
        "coefficients.a_closed_form",
        "stored a_k equals both its defining double-factorial sum and its closed form",
    );
    for k in 1..=table.k_max() {
        let by_sum = coefficients::a_coeff_sum(k);
        let closed = coefficients::a_coeff_closed(k);
        let stored = table.a(k);
        c.point(stored == Some(&by_sum) && by_sum == closed, || {
            witness(
                format!("k = {k}"),
                show(stored),
                format!("sum {by_sum}, closed {closed}"),
            )
        });
    }
    c.finish()
}

fn check_a_reference(table: &CoefficientTable) -> VerificationReport {
    let mut c = Check::new(
        "coefficients.a_reference_table",
        "a_1 ..= a_10 equal the reference fractions",
    );
    for (k, &(n, d)) in (1..).zip(REFERENCE_A.iter()) {
        let expected = ExactRational::new(n, d);
        let stored = table.a(k);
        c.point(stored == Some(&expected), || {
            witness(format!("k = {k}"), show(stored), &expected)
        });
    }
    c.finish()
}

fn check_a_ratio_reference(table: &CoefficientTable) -> VerificationReport {
    let mut c = Check::new(
        "coefficients.a_ratio_table",
        "a_(k+1)/a_k for k = 1..9 equals the reference fractions and exceeds ((2k+1)/(2k+2))^2",
    );
    for (k, &(n, d)) in (1..).zip(REFERENCE_A_RATIO.iter()) {
        let expected = ExactRational::new(n, d);
        let ratio = match (table.a(k), table.a(k + 1)) {
            (Some(a), Some(next)) if a.is_positive() => Some(next / a),
            _ => None,
        };
        let bound = coefficients::b_ratio(k);
        c.point(ratio.as_ref() == Some(&expected), || {
            witness(format!("k = {k}"), show(ratio.as_ref()), &expected)
        });
        c.point(ratio.as_ref().is_some_and(|r| r > &bound), || {
            witness(
                format!("k = {k}"),
                show(ratio.as_ref()),
                format!("> {bound}"),
            )
        });
    }
    c.finish()
}

fn check_b_recurrence(table: &CoefficientTable) -> VerificationReport {
    let mut c = Check::new(
        "coefficients.b_recurrence",
        "b_0 = 1, b_k = C(2k,k)^2 / 16^k and b_k / b_(k-1) = ((2k-1)/(2k))^2",
    );
    let first = table.b(0);
    c.point(first == Some(&ExactRational::one()), || {
        witness("k = 0", show(first), "1/1")
    });
    for k in 1..=table.k_max() {
        let direct = coefficients::b_coeff(k);
        let stored = table.b(k);
        c.point(stored == Some(&direct), || {
            witness(format!("k = {k}"), show(stored), &direct)
        });
        let step = coefficients::b_ratio(k - 1);
        let ratio = match (table.b(k - 1), stored) {
            (Some(prev), Some(cur)) if !prev.is_zero() => Some(cur / prev),
            _ => None,
        };
        c.point(ratio.as_ref() == Some(&step), || {
            witness(format!("k = {k}"), show(ratio.as_ref()), &step)
        });
    }
    c.finish()
}

fn check_h_identity(table: &CoefficientTable) -> VerificationReport {
    let mut c = Check::new(
        "coefficients.h_identity",
        "sum_{i<=k} C(2i-2,i-1)/(i 4^i) = 1/2 - 2 C(2k,k)/4^(k+1), and the stored h(k) agrees",
    );
    let mut running = ExactRational::zero();
    for k in 1..=table.k_max() {
        running += coefficients::central_binomial(k - 1)
            * ExactRational::inv_pow2(2 * u64::from(k))
            * ExactRational::new(1, i64::from(k));
        let closed = coefficients::h_closed(k);
        let stored = table.h(k);
        c.point(running == closed && stored == Some(&closed), || {
            witness(
                format!("k = {k}"),
                format!("sum {running}, stored {}", show(stored)),
                &closed,
            )
        });
    }
    c.finish()
}

fn check_g_identity(table: &CoefficientTable) -> VerificationReport {
    let mut c = Check::new(
        "coefficients.g_identity",
        "sum_{i<=k} C(2i-2,i-1)/((k-i+1) 4^i) equals its digamma-reduced closed form, and the stored g(k) agrees",
    );
    for k in 1..=table.k_max() {
        let by_sum = coefficients::g_sum(k);
        let closed = coefficients::g_closed(k);
        let stored = table.g(k);
        c.point(by_sum == closed && stored == Some(&closed), || {
            witness(
                format!("k = {k}"),
                format!("sum {by_sum}, stored {}", show(stored)),
                &closed,
            )
        });
    }
    c.finish()
}

fn check_recurrence(table: &CoefficientTable) -> VerificationReport {
    let mut c = Check::new(
        "coefficients.g_recurrence",
        "2(k+1) g(k+1) - (2k+1) g(k) = C(2k,k) / (2 4^k), for g from its sum and for the stored column",
    );
    let mut by_sum = coefficients::g_sum(1);
    for k in 1..table.k_max() {
        let next_sum = coefficients::g_sum(k + 1);
        c.point(
            coefficients::recurrence_holds(k, &by_sum, &next_sum),
            || {
                witness(
                    format!("k = {k}"),
                    "recurrence fails for summed g",
                    "equality",
                )
            },
        );
        let stored = table.g(k).zip(table.g(k + 1));
        c.point(
            stored.is_some_and(|(g, next)| coefficients::recurrence_holds(k, g, next)),
            || {
                witness(
                    format!("k = {k}"),
                    "recurrence fails for stored g",
                    "equality",
                )
            },
        );
        by_sum = next_sum;
    }
    c.finish()
}

fn check_rearranged(k_max: u32) -> VerificationReport {
    let mut c = Check::new(
        "coefficients.rearranged_inequality",
        "the rearranged ratio condition holds strictly for 2 <= k < k_max",
    );
    for k in 2..k_max {
        let (lhs, rhs) = coefficients::rearranged_inequality_sides(k).expect("k >= 2");
        c.point(lhs < rhs, || {
            witness(format!("k = {k}"), &lhs, format!("< {rhs}"))
        });
    }
    c.finish()
}

fn check_s_sequence(table: &CoefficientTable) -> VerificationReport {
    let mut c = Check::new(
        "coefficients.s_sign_change",
        "stored S_k matches its definition, is strictly decreasing, and changes sign exactly once",
    );
    let mut sign_changes = Vec::new();
    let mut previous: Option<ExactRational> = None;
    for k in 2..=table.k_max() {
        let direct = coefficients::s_seq(k).expect("k >= 2");
        let stored = table.s(k);
        c.point(stored == Some(&direct), || {
            witness(format!("k = {k}"), show(stored), &direct)
        });
        if let Some(prev) = &previous {
            c.point(&direct < prev, || {
                witness(format!("k = {k}"), &direct, format!("< S_(k-1) = {prev}"))
            });
            if !prev.is_negative() && direct.is_negative() {
                sign_changes.push(k);
            }
        }
        previous = Some(direct);
    }
    let last_negative = previous.as_ref().is_some_and(ExactRational::is_negative);
    let expected_changes = usize::from(last_negative);
    c.point(sign_changes.len() == expected_changes, || {
        witness(
            "k = 2..k_max",
            format!("sign changes before k = {sign_changes:?}"),
            format!("{expected_changes} sign change(s)"),
        )
    });
    c.finish()
}

fn check_wallis() -> VerificationReport {
    let mut c = Check::new(
        "coefficients.wallis",
        "int_0^(pi/2) sin^n = (n-1)!!/n!! (times pi/2 for even n), against Gauss-Legendre quadrature",
    )
    .tolerance("relative", WALLIS_TOL);
    let rule = quadrature::default_rule();
    for n in 1..=40u32 {
        let exact = coefficients::wallis_integral(n).to_f64();
        let numeric = rule.composite(|x| x.sin().powi(n as i32), 0.0, FRAC_PI_2, 16);
        c.point((exact - numeric).abs() <= WALLIS_TOL * exact, || {
            witness(format!("n = {n}"), numeric, exact)
        });
    }
    c.finish()
}

fn check_series_coefficients(table: &CoefficientTable) -> VerificationReport {
    let mut c = Check::new(
        "elliptic.series_coefficients",
        "the series coefficient of t^(2i) in (2/pi) K(t) is the nearest double to b_i",
    );
    for i in 0..=table.k_max() {
        let Some(coef) = elliptic::series_coefficient(i as usize) else {
            break;
        };
        let stored = table.b(i);
        let nearest = stored.is_some_and(|b| {
            let err = |x: f64| ExactRational::from_f64(x).map(|r| (r - b).abs());
            let own = err(coef);
            own.is_some() && own <= err(coef.next_up()) && own <= err(coef.next_down())
        });
        c.point(nearest, || witness(format!("i = {i}"), coef, show(stored)));
    }
    c.finish()
}

/// Every exact check that reads a coefficient table. Corrupting any stored
/// entry makes at least one of these fail.
pub fn check_table(table: &CoefficientTable) -> Vec<VerificationReport> {
    let mut reports = vec![
        check_a_closed_form(table),
        check_b_recurrence(table),
        check_h_identity(table),
        check_g_identity(table),
        check_recurrence(table),
        check_ratio_monotone(table),
        check_s_sequence(table),
        check_series_coefficients(table),
    ];
    if table.k_max() >= 10 {
        reports.push(check_a_reference(table));
        reports.push(check_a_ratio_reference(table));
    }
    reports.sort_by(|x, y| x.claim_id.cmp(&y.claim_id));
    reports
}

// ---------------------------------------------------------------------------
// floating-point checks

/// `r(t) = M(1, t) / L(1, t) = [ln t / (t - 1)] / [(2/pi) K(1, t)]`.
pub fn mean_ratio(t: f64) -> Result<f64, VerifyError> {
    let input = MeanInput::new(1.0, t).map_err(|e| VerifyError::Evaluation {
        t,
        reason: e.to_string(),
    })?;
    Ok(means::agm_mean(&input) / means::log_mean(&input))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioScan {
    pub grid: Vec<f64>,
    pub ratio: Vec<f64>,
    pub monotone_decreasing: bool,
    pub min_value: f64,
    pub max_value: f64,
}

impl RatioScan {
    /// Whether every value lies strictly inside `(1, pi/2)`.
    pub fn within_bounds(&self) -> bool {
        self.min_value > 1.0 && self.max_value < FRAC_PI_2
    }
}

/// Evaluates `r(t)` on `n_points` log-spaced points of `[t_min, t_max]`.
pub fn scan_ratio(n_points: usize, t_min: f64, t_max: f64) -> Result<RatioScan, VerifyError> {
    if n_points < 3 {
        return Err(VerifyError::InvalidGrid(format!(
            "need at least 3 points, got {n_points}"
        )));
    }
    if !(t_min > 0.0 && t_min < t_max && t_max < 1.0) {
        return Err(VerifyError::InvalidGrid(format!(
            "need 0 < t_min < t_max < 1, got [{t_min}, {t_max}]"
        )));
    }
    let (lo, hi) = (t_min.ln(), t_max.ln());
    let step = (hi - lo) / (n_points - 1) as f64;
    let grid: Vec<f64> = (0..n_points)
        .map(|i| match i {
            0 => t_min,
            i if i == n_points - 1 => t_max,
            i => (lo + step * i as f64).exp(),
        })
        .collect();
    let ratio = grid
        .iter()
        .map(|&t| mean_ratio(t))
        .collect::<Result<Vec<_>, _>>()?;
    if let Some((&t, _)) = grid.iter().zip(&ratio).find(|(_, r)| !r.is_finite()) {
        return Err(VerifyError::Evaluation {
            t,
            reason: "non-finite ratio".into(),
        });
    }
    let monotone_decreasing = ratio.windows(2).all(|w| w[1] < w[0]);
    let min_value = ratio.iter().copied().fold(f64::INFINITY, f64::min);
    let max_value = ratio.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(RatioScan {
        grid,
        ratio,
        monotone_decreasing,
        min_value,
        max_value,
    })
}

fn check_ratio_scan() -> VerificationReport {
    let t_max = 1.0 - SHARPNESS_EPS;
    let mut c = Check::new(
        "means.ratio_scan",
        "M(1,t)/L(1,t) is strictly decreasing on a log-spaced grid and lies strictly inside (1, pi/2); K cross-checked by quadrature",
    )
    .tolerance("t_min", SHARPNESS_SMALL_T)
    .tolerance("t_max", t_max)
    .tolerance("k_cross_check_relative", THREE_WAY_TOL);
    match scan_ratio(RATIO_SCAN_POINTS, SHARPNESS_SMALL_T, t_max) {
        Ok(scan) => {
            for (i, (&t, &r)) in scan.grid.iter().zip(&scan.ratio).enumerate() {
                c.point(r > 1.0 && r < FRAC_PI_2, || {
                    witness(format!("t = {t:?}"), r, "in (1, pi/2)")
                });
                if i > 0 {
                    let prev = scan.ratio[i - 1];
                    c.point(r < prev, || {
                        witness(format!("t = {t:?}"), r, format!("< {prev:?}"))
                    });
                }
                let agm = elliptic::k_agm_pair(1.0, t).map(|k| k.value);
                let quad = elliptic::k_quadrature(1.0, t, DEFAULT_PANEL_BUDGET).map(|k| k.value);
                let agree =
                    matches!((&agm, &quad), (Ok(x), Ok(y)) if (x - y).abs() <= THREE_WAY_TOL * x);
                c.point(agree, || {
                    witness(
                        format!("K(1, {t:?})"),
                        format!("{agm:?}"),
                        format!("{quad:?}"),
                    )
                });
            }
        }
        Err(e) => c.point(false, || witness("scan", e, "successful scan")),
    }
    c.finish()
}

/// Default sequence for [`check_sharpness`]: `10^-1, 10^-2, ..., 10^-8`.
pub fn default_sharpness_sequence() -> Vec<f64> {
    (1..=8).map(|e| 10f64.powi(-e)).collect()
}

/// `r(t)` increases toward `pi/2` along a sequence decreasing to 0, stays below
/// `pi/2`, gets within `0.15` of it by `t = 1e-8`, and `r(1 - 1e-4) - 1 < 0.01`.
/// Together: no constant below `pi/2` (or above 1) bounds the ratio.
pub fn check_sharpness(t_sequence: &[f64]) -> VerificationReport {
    let mut c = Check::new(
        "means.sharpness",
        "M/L increases toward pi/2 as t -> 0+ and approaches 1 as t -> 1-, so neither constant can be improved",
    )
    .tolerance("lower_gap", SHARPNESS_LOWER_GAP)
    .tolerance("lower_gap_at_t", SHARPNESS_SMALL_T)
    .tolerance("upper_gap", SHARPNESS_UPPER_GAP)
    .tolerance("upper_gap_at_eps", SHARPNESS_EPS);

    let valid = !t_sequence.is_empty()
        && t_sequence.iter().all(|&t| t > 0.0 && t < 1.0)
        && t_sequence.windows(2).all(|w| w[1] < w[0]);
    if !valid {
        c.point(false, || {
            witness(
                format!("{t_sequence:?}"),
                "invalid sequence",
                "strictly decreasing within (0, 1)",
            )
        });
        return c.finish();
    }
    let mut sup = f64::NEG_INFINITY;
    let mut previous: Option<(f64, f64)> = None;
    for &t in t_sequence {
        let r = match mean_ratio(t) {
            Ok(r) => r,
            Err(e) => {
                c.point(false, || witness(format!("t = {t:?}"), e, "finite ratio"));
                continue;
            }
        };
        c.point(r < FRAC_PI_2, || witness(format!("t = {t:?}"), r, "< pi/2"));
        if let Some((pt, pr)) = previous {
            c.point(r > pr, || {
                witness(format!("t = {t:?}"), r, format!("> r({pt:?}) = {pr:?}"))
            });
        }
        sup = sup.max(r);
        previous = Some((t, r));
    }
    let reaches_small_t = t_sequence.last().is_some_and(|&t| t <= SHARPNESS_SMALL_T);
    c.point(
        reaches_small_t && sup > FRAC_PI_2 - SHARPNESS_LOWER_GAP,
        || {
            witness(
                "sup over sequence",
                sup,
                format!("> pi/2 - {SHARPNESS_LOWER_GAP} with t reaching {SHARPNESS_SMALL_T:e}"),
            )
        },
    );
    let near_one = 1.0 - SHARPNESS_EPS;
    match mean_ratio(near_one) {
        Ok(r) => c.point(r > 1.0 && r - 1.0 < SHARPNESS_UPPER_GAP, || {
            witness(
                format!("t = {near_one:?}"),
                r,
                format!("in (1, 1 + {SHARPNESS_UPPER_GAP})"),
            )
        }),
        Err(e) => c.point(false, || {
            witness(format!("t = {near_one:?}"), e, "finite ratio")
        }),
    }
    c.finish()
}

/// `L(a,b) < M(a,b) < (pi/2) L(a,b)` on `n_samples` seeded log-uniform pairs.
///
/// A sample fails only when an inequality is violated by more than the
/// `1e-12` relative round-off slack; the number of samples where both raw
/// comparisons already hold strictly is recorded as `strict_samples`.
pub fn check_double_inequality(n_samples: usize, seed: u64) -> VerificationReport {
    let mut c = Check::new(
        "means.double_inequality",
        "L(a,b) < M(a,b) < (pi/2) L(a,b) for a != b",
    )
    .tolerance("relative_slack", DOUBLE_INEQUALITY_SLACK);
    let mut rng = rng(seed, STREAM_DOUBLE_INEQUALITY);
    let mut strict = 0u64;
    for _ in 0..n_samples {
        let input = sample_pair(&mut rng);
        let l = means::log_mean(&input);
        let m = means::agm_mean(&input);
        let upper = FRAC_PI_2 * l;
        if l < m && m < upper {
            strict += 1;
        }
        let ok =
            m > l * (1.0 - DOUBLE_INEQUALITY_SLACK) && m < upper * (1.0 + DOUBLE_INEQUALITY_SLACK);
        c.point(ok, || {
            witness(
                format!("a = {:?}, b = {:?}", input.a(), input.b()),
                format!("M = {m:?}"),
                format!("in ({l:?}, {upper:?})"),
            )
        });
    }
    c.report
        .tolerances
        .insert("strict_samples".into(), strict as f64);
    c.finish()
}

/// `L < M < I` on seeded pairs with `a != b`, `L(p; a, b)` strictly increasing
/// across the seven-point `p` grid, and `L = M = I = a` at `a = b`.
pub fn check_mean_order(n_samples: usize, seed: u64) -> VerificationReport {
    let mut c = Check::new(
        "means.mean_order",
        "L < M < I for a != b, L(p;a,b) strictly increasing in p, all means equal at a = b",
    );
    for p in MEAN_ORDER_GRID {
        c = c.tolerance(&format!("p_grid_{p}"), p);
    }
    let equal = MeanInput::new(5.0, 5.0).expect("positive");
    let at_equal = [
        means::log_mean(&equal),
        means::agm_mean(&equal),
        means::identric_mean(&equal),
    ];
    c.point(at_equal.iter().all(|&v| v == 5.0), || {
        witness("a = b = 5", format!("{at_equal:?}"), "all 5")
    });

    let mut rng = rng(seed, STREAM_MEAN_ORDER);
    for _ in 0..n_samples {
        let input = sample_pair(&mut rng);
        let at = || format!("a = {:?}, b = {:?}", input.a(), input.b());
        let l = means::log_mean(&input);
        let m = means::agm_mean(&input);
        let i = means::identric_mean(&input);
        c.point(l < m && m < i, || {
            witness(
                at(),
                format!("L = {l:?}, M = {m:?}, I = {i:?}"),
                "L < M < I",
            )
        });
        let chain: Vec<f64> = MEAN_ORDER_GRID
            .iter()
            .map(|&p| means::gen_log_mean(p, &input).unwrap_or(f64::NAN))
            .collect();
        c.point(chain.windows(2).all(|w| w[0] < w[1]), || {
            witness(at(), format!("{chain:?}"), "strictly increasing")
        });
    }
    c.finish()
}

/// Series, AGM and quadrature values of `K(t)` agree pairwise on random moduli
/// in `[0, 0.95]`, and AGM agrees with quadrature at `t = 0.999999`.
pub fn check_three_way(n_moduli: usize, seed: u64) -> VerificationReport {
    let mut c = Check::new(
        "elliptic.three_way_consistency",
        "series, AGM and quadrature values of K(t) agree pairwise; AGM and quadrature agree near t = 1",
    )
    .tolerance("pairwise_relative", THREE_WAY_TOL)
    .tolerance("near_singular_relative", NEAR_SINGULAR_TOL)
    .tolerance("near_singular_t", NEAR_SINGULAR_MODULUS);
    let mut rng = rng(seed, STREAM_THREE_WAY);
    for _ in 0..n_moduli {
        let t = rng.random_range(0.0..=elliptic::SERIES_MODULUS_LIMIT);
        let m = Modulus::new(t).expect("in range");
        let values = (
            elliptic::k_series(m, DEFAULT_TERM_BUDGET),
            elliptic::k_agm(m),
            elliptic::k_quadrature_modulus(m, DEFAULT_PANEL_BUDGET),
        );
        let deviation = match &values {
            (Ok(s), Ok(a), Ok(q)) => Some(max_pairwise_deviation(&[s.value, a.value, q.value])),
            _ => None,
        };
        c.point(deviation.is_some_and(|d| d <= THREE_WAY_TOL), || {
            witness(
                format!("t = {t:?}"),
                format!("{values:?}"),
                format!("pairwise relative deviation <= {THREE_WAY_TOL:e}"),
            )
        });
    }
    let m = Modulus::new(NEAR_SINGULAR_MODULUS).expect("in range");
    let agm = elliptic::k_agm(m);
    let quad = elliptic::k_quadrature_modulus(m, DEFAULT_PANEL_BUDGET);
    let ok = matches!((&agm, &quad), (Ok(a), Ok(q)) if max_pairwise_deviation(&[a.value, q.value]) <= NEAR_SINGULAR_TOL);
    c.point(ok, || {
        witness(
            format!("t = {NEAR_SINGULAR_MODULUS}"),
            format!("{agm:?}"),
            format!("{quad:?}"),
        )
    });
    c.finish()
}

/// Largest `|x - y| / max(|x|, |y|)` over all pairs.
pub fn max_pairwise_deviation(values: &[f64]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, x) in values.iter().enumerate() {
        for y in &values[i + 1..] {
            worst = worst.max((x - y).abs() / x.abs().max(y.abs()));
        }
    }
    worst
}

/// `|M(a,b) (2/pi) K(a,b) - 1| <= 1e-11` with `K` from quadrature.
pub fn check_reciprocal(n_pairs: usize, seed: u64) -> VerificationReport {
    let mut c = Check::new(
        "elliptic.reciprocal_relation",
        "M(a,b) (2/pi) K(a,b) = 1 with M from the AGM and K from quadrature",
    )
    .tolerance("absolute", RECIPROCAL_TOL);
    let mut rng = rng(seed, STREAM_RECIPROCAL);
    for _ in 0..n_pairs {
        let input = sample_pair(&mut rng);
        let m = means::agm_mean(&input);
        let k = elliptic::k_quadrature(input.a(), input.b(), DEFAULT_PANEL_BUDGET);
        let residual = k.as_ref().map(|k| (m * k.value / FRAC_PI_2 - 1.0).abs());
        c.point(
            residual.as_ref().is_ok_and(|&r| r <= RECIPROCAL_TOL),
            || {
                witness(
                    format!("a = {:?}, b = {:?}", input.a(), input.b()),
                    format!("{residual:?}"),
                    format!("<= {RECIPROCAL_TOL:e}"),
                )
            },
        );
    }
    c.finish()
}

// ---------------------------------------------------------------------------

type Job<'a> = Box<dyn FnOnce() -> Vec<VerificationReport> + Send + 'a>;

/// Runs every check at the given depth, concurrently, and returns the reports
/// sorted by claim id.
pub fn run_all(profile: Profile, seed: u64) -> Vec<VerificationReport> {
    let table = coefficients::build_table(profile.k_max()).expect("profile k_max >= 2");
    run_all_with_table(profile, seed, &table)
}

/// [`run_all`] against a caller-supplied table (for example one read back from
/// JSON). The profile still sets the sample counts.
pub fn run_all_with_table(
    profile: Profile,
    seed: u64,
    table: &CoefficientTable,
) -> Vec<VerificationReport> {
    let samples = profile.samples();
    let k_max = table.k_max();
    let one = |f: fn(&CoefficientTable) -> VerificationReport| -> Job<'_> {
        Box::new(move || vec![f(table)])
    };
    let jobs: Vec<Job<'_>> = vec![
        one(check_a_closed_form),
        one(check_b_recurrence),
        one(check_h_identity),
        one(check_g_identity),
        one(check_recurrence),
        one(check_ratio_monotone),
        one(check_s_sequence),
        one(check_series_coefficients),
        Box::new(move || {
            if k_max >= 10 {
                vec![check_a_reference(table), check_a_ratio_reference(table)]
            } else {
                Vec::new()
            }
        }),
        Box::new(move || vec![check_rearranged(k_max)]),
        Box::new(|| vec![check_wallis()]),
        Box::new(move || vec![check_three_way(THREE_WAY_MODULI, seed)]),
        Box::new(move || vec![check_reciprocal(RECIPROCAL_PAIRS, seed)]),
        Box::new(move || vec![check_double_inequality(samples, seed)]),
        Box::new(move || vec![check_mean_order(samples, seed)]),
        Box::new(|| vec![check_ratio_scan()]),
        Box::new(|| vec![check_sharpness(&default_sharpness_sequence())]),
    ];
    let mut reports: Vec<VerificationReport> = std::thread::scope(|scope| {
        let handles: Vec<_> = jobs.into_iter().map(|job| scope.spawn(job)).collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("verification check panicked"))
            .collect()
    });
    reports.sort_by(|x, y| x.claim_id.cmp(&y.claim_id));
    reports
}

pub fn all_passed(reports: &[VerificationReport]) -> bool {
    reports.iter().all(VerificationReport::passed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::Column;

    #[test]
    fn monotonicity_examples() {
        let r = check_coefficient_monotonicity(2);
        assert!(r.passed(), "{r}");
        let r = check_coefficient_monotonicity(10);
        assert!(r.passed(), "{r}");
        // a_2/a_1 = 7/12 > 9/16 = b_2/b_1
        assert!(ExactRational::new(7, 12) > ExactRational::new(9, 16));
    }

    #[test]
    fn scan_examples() {
        let scan = scan_ratio(5, 0.999, 0.9999).unwrap();
        assert!(scan.monotone_decreasing && scan.within_bounds());
        assert!(scan.max_value - 1.0 < 1e-6);

        let r_small = mean_ratio(1e-6).unwrap();
        assert!(r_small < FRAC_PI_2 && r_small > mean_ratio(1e-3).unwrap());
        let r_half = mean_ratio(0.5).unwrap();
        assert!(1.0 < r_half && r_half < FRAC_PI_2);
        // 40-digit reference: r(0.5) = 1.0097705958351792...
        assert!((r_half - 1.009_770_595_835_179_2).abs() < 1e-14);
    }

    #[test]
    fn scan_rejects_bad_grids() {
        assert!(scan_ratio(2, 0.1, 0.5).is_err());
        assert!(scan_ratio(10, 0.5, 0.1).is_err());
        assert!(scan_ratio(10, 0.0, 0.5).is_err());
        assert!(scan_ratio(10, 0.1, 1.0).is_err());
    }

    #[test]
    fn scan_grid_is_log_spaced_and_hits_endpoints() {
        let scan = scan_ratio(3, 1e-4, 1e-2).unwrap();
        assert_eq!(scan.grid[0], 1e-4);
        assert!((scan.grid[1] - 1e-3).abs() < 1e-15);
        assert_eq!(scan.grid[2], 1e-2);
    }

    #[test]
    fn sharpness_examples() {
        assert!(mean_ratio(1e-6).unwrap() > mean_ratio(1e-4).unwrap());
        let r = mean_ratio(1.0 - 1e-4).unwrap();
        assert!(r - 1.0 < 0.01 && r > 1.0);
        let report = check_sharpness(&default_sharpness_sequence());
        assert!(report.passed(), "{report}");
        // sequence must reach t = 1e-8
        assert!(!check_sharpness(&[0.1, 0.01]).passed());
        let bad = check_sharpness(&[0.1, 0.2]);
        assert!(!bad.passed() && bad.witness.is_some());
    }

    #[test]
    fn double_inequality_examples() {
        let input = MeanInput::new(1.0, 2.0).unwrap();
        let l = means::log_mean(&input);
        assert!((l - std::f64::consts::LOG2_E).abs() < 1e-15);
        let m = means::agm_mean(&input);
        assert!(l < m && m < FRAC_PI_2 * l);
        let report = check_double_inequality(2_000, 42);
        assert!(report.passed(), "{report}");
        assert_eq!(report.checked_points, 2_000);
        assert_eq!(report.tolerances["strict_samples"], 2_000.0);
    }

    #[test]
    fn mean_order_examples() {
        let input = MeanInput::new(1.0, 4.0).unwrap();
        let chain: Vec<f64> = [-1.0, 0.0, 1.0]
            .iter()
            .map(|&p| means::gen_log_mean(p, &input).unwrap())
            .collect();
        assert!(chain[0] < chain[1] && chain[1] < chain[2]);
        assert!((chain[2] - 2.5).abs() < 1e-15);
        let report = check_mean_order(500, 42);
        assert!(report.passed(), "{report}");
        assert_eq!(report.checked_points, 1 + 2 * 500);
    }

    #[test]
    fn reports_are_deterministic() {
        let a = check_double_inequality(300, 7);
        let b = check_double_inequality(300, 7);
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn empty_checks_fail_with_witness() {
        let report = check_double_inequality(0, 1);
        assert!(!report.passed());
        assert!(report.witness.is_some());
        assert!(report.checked_points > 0);
    }

    #[test]
    fn pairwise_deviation() {
        assert_eq!(max_pairwise_deviation(&[1.0, 1.0, 1.0]), 0.0);
        assert!((max_pairwise_deviation(&[1.0, 2.0, 1.5]) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn table_checks_pass_on_fresh_table() {
        let table = coefficients::build_table(12).unwrap();
        let reports = check_table(&table);
        assert_eq!(reports.len(), 10);
        for r in &reports {
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn corrupted_entry_is_caught() {
        let table = coefficients::build_table(12).unwrap();
        for column in Column::ALL {
            for k in column.first_index()..=table.k_max() {
                let mut bad = table.clone();
                let old = bad.get(column, k).unwrap().clone();
                bad.replace(column, k, old + ExactRational::new(1, 1_000_000_007));
                let reports = check_table(&bad);
                let failed: Vec<_> = reports.iter().filter(|r| !r.passed()).collect();
                assert!(
                    !failed.is_empty(),
                    "corrupting {column}[{k}] went unnoticed"
                );
                assert!(failed.iter().all(|r| r.witness.is_some()));
            }
        }
    }
}
